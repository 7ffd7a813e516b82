//! Labeled Tanner graphs and the cycle machinery used by the lifting
//! construction: products over cycles, restricted subgraphs, edge-disjoint
//! cycle decompositions and fundamental cycle bases.

use std::collections::VecDeque;

use super::SparseQMatrix;
use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// Bipartite graph of variable nodes (columns) and check nodes (rows) with
/// edges labeled by the matrix entries.
///
/// Nodes are addressed by local indices; `var_id`/`check_id` map them back to
/// the column/row indices of the matrix the graph came from. Adjacency lists
/// are sorted by local index, and local order follows original order.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    var_ids: Vec<usize>,
    check_ids: Vec<usize>,
    var_adj: Vec<Vec<(usize, Elem)>>,
    check_adj: Vec<Vec<(usize, Elem)>>,
}

impl TannerGraph {
    /// Graph of the whole matrix: one variable per column, one check per row.
    pub fn from_matrix(h: &SparseQMatrix) -> Self {
        TannerGraph {
            var_ids: (0..h.cols()).collect(),
            check_ids: (0..h.rows()).collect(),
            var_adj: (0..h.cols()).map(|j| h.col(j).to_vec()).collect(),
            check_adj: (0..h.rows()).map(|i| h.row(i).to_vec()).collect(),
        }
    }

    fn from_parts(h: &SparseQMatrix, cols: &[usize]) -> Self {
        let mut local_col = vec![usize::MAX; h.cols()];
        for (l, &j) in cols.iter().enumerate() {
            local_col[j] = l;
        }
        let mut check_ids: Vec<usize> =
            cols.iter().flat_map(|&j| h.col(j).iter().map(|e| e.0)).collect();
        check_ids.sort_unstable();
        check_ids.dedup();
        let mut local_row = vec![usize::MAX; h.rows()];
        for (l, &i) in check_ids.iter().enumerate() {
            local_row[i] = l;
        }
        let var_adj = cols
            .iter()
            .map(|&j| h.col(j).iter().map(|&(i, v)| (local_row[i], v)).collect())
            .collect();
        let check_adj = check_ids
            .iter()
            .map(|&i| {
                h.row(i)
                    .iter()
                    .filter(|e| local_col[e.0] != usize::MAX)
                    .map(|&(j, v)| (local_col[j], v))
                    .collect()
            })
            .collect();
        TannerGraph { var_ids: cols.to_vec(), check_ids, var_adj, check_adj }
    }

    pub fn num_vars(&self) -> usize {
        self.var_ids.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.var_adj.iter().map(Vec::len).sum()
    }

    /// Column index of local variable `v`.
    pub fn var_id(&self, v: usize) -> usize {
        self.var_ids[v]
    }

    /// Row index of local check `c`.
    pub fn check_id(&self, c: usize) -> usize {
        self.check_ids[c]
    }

    /// Local index of the variable for column `col`, if present.
    pub fn local_var(&self, col: usize) -> Option<usize> {
        self.var_ids.binary_search(&col).ok()
    }

    /// Local index of the check for row `row`, if present.
    pub fn local_check(&self, row: usize) -> Option<usize> {
        self.check_ids.binary_search(&row).ok()
    }

    pub fn var_neighbors(&self, v: usize) -> &[(usize, Elem)] {
        &self.var_adj[v]
    }

    pub fn check_neighbors(&self, c: usize) -> &[(usize, Elem)] {
        &self.check_adj[c]
    }

    /// Label of edge `(c, v)`, if the edge exists.
    pub fn label(&self, c: usize, v: usize) -> Option<Elem> {
        let adj = &self.check_adj[c];
        adj.binary_search_by_key(&v, |e| e.0).ok().map(|k| adj[k].1)
    }

    fn require_var_degree_two(&self) -> Result<()> {
        for (v, adj) in self.var_adj.iter().enumerate() {
            if adj.len() != 2 {
                return Err(Error::Precondition {
                    node: format!("variable {}", self.var_ids[v]),
                    reason: format!("degree {} instead of 2", adj.len()),
                });
            }
        }
        Ok(())
    }

    // the check on the other side of a degree-2 variable
    fn across(&self, v: usize, c: usize) -> usize {
        let adj = &self.var_adj[v];
        if adj[0].0 == c {
            adj[1].0
        } else {
            adj[0].0
        }
    }
}

/// Tanner graph of the submatrix of `hx` on the columns where row `k` of
/// `hz` is nonzero, with all-zero rows dropped.
pub fn restricted_graph(hx: &SparseQMatrix, hz: &SparseQMatrix, k: usize) -> TannerGraph {
    let cols: Vec<usize> = hz.row(k).iter().map(|e| e.0).collect();
    TannerGraph::from_parts(hx, &cols)
}

/// A closed alternating walk `v_1, c_1, v_2, c_2, ..., v_k, c_k, v_1` in
/// local indices of some [`TannerGraph`].
///
/// The step `v_t -> c_t` is a variable-to-check traversal and `c_t -> v_{t+1}`
/// a check-to-variable one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWalk {
    vars: Vec<usize>,
    checks: Vec<usize>,
}

impl CycleWalk {
    pub fn new(vars: Vec<usize>, checks: Vec<usize>) -> Result<Self> {
        if vars.len() != checks.len() || vars.len() < 2 {
            return Err(Error::NotACycle(format!(
                "{} variables and {} checks",
                vars.len(),
                checks.len()
            )));
        }
        Ok(CycleWalk { vars, checks })
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn checks(&self) -> &[usize] {
        &self.checks
    }

    /// Number of check nodes (equivalently variable nodes) on the cycle.
    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    /// The same cycle traversed the other way round, starting at the same
    /// variable node.
    pub fn reversed(&self) -> CycleWalk {
        let k = self.vars.len();
        let vars = std::iter::once(self.vars[0]).chain(self.vars[1..].iter().rev().copied()).collect();
        let checks = (0..k).map(|t| self.checks[k - 1 - t]).collect();
        CycleWalk { vars, checks }
    }

    /// Rotates the walk so that it starts at its lowest-index variable.
    pub fn normalized(mut self) -> CycleWalk {
        let start = (0..self.vars.len()).min_by_key(|&t| self.vars[t]).unwrap_or(0);
        self.vars.rotate_left(start);
        self.checks.rotate_left(start);
        self
    }

    /// Edge labels along the walk as `(label into c_t from v_t, label out of
    /// c_t to v_{t+1})`.
    pub fn labels(&self, g: &TannerGraph) -> Result<Vec<(Elem, Elem)>> {
        self.validate(g)?;
        let k = self.vars.len();
        Ok((0..k)
            .map(|t| {
                let c = self.checks[t];
                let into = g.label(c, self.vars[t]).expect("validated");
                let out = g.label(c, self.vars[(t + 1) % k]).expect("validated");
                (into, out)
            })
            .collect())
    }

    /// Checks that the walk is a simple cycle of `g`.
    pub fn validate(&self, g: &TannerGraph) -> Result<()> {
        let k = self.vars.len();
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_c = std::collections::HashSet::new();
        for t in 0..k {
            let (v, c, next) = (self.vars[t], self.checks[t], self.vars[(t + 1) % k]);
            if v >= g.num_vars() || c >= g.num_checks() || next >= g.num_vars() {
                return Err(Error::NotACycle(format!("node index out of range at step {t}")));
            }
            if !seen_v.insert(v) || !seen_c.insert(c) {
                return Err(Error::NotACycle(format!("repeated node at step {t}")));
            }
            if g.label(c, v).is_none() {
                return Err(Error::NotACycle(format!(
                    "no edge between variable {} and check {}",
                    g.var_id(v),
                    g.check_id(c)
                )));
            }
            if g.label(c, next).is_none() {
                return Err(Error::NotACycle(format!(
                    "no edge between check {} and variable {}",
                    g.check_id(c),
                    g.var_id(next)
                )));
            }
        }
        Ok(())
    }
}

/// Product of the labels along a cycle, with exponent `+1` on
/// check-to-variable edges and `-1` on variable-to-check edges.
pub fn product_over_cycle(field: &Field, g: &TannerGraph, c: &CycleWalk) -> Result<Elem> {
    let labels = c.labels(g)?;
    Ok(labels
        .iter()
        .fold(1, |acc, &(into, out)| field.mul(acc, field.div_nonzero(out, into))))
}

/// Splits a graph whose variable nodes have degree 2 and whose check nodes
/// have even degree into edge-disjoint simple cycles covering every edge.
///
/// Traversal always takes the lowest-index unused edge, and each returned
/// cycle starts at its lowest-index variable, so the output is a function of
/// the graph alone.
pub fn cycle_decomposition(g: &TannerGraph) -> Result<Vec<CycleWalk>> {
    g.require_var_degree_two()?;
    for (c, adj) in g.check_adj.iter().enumerate() {
        if adj.len() % 2 != 0 {
            return Err(Error::Precondition {
                node: format!("check {}", g.check_ids[c]),
                reason: format!("odd degree {}", adj.len()),
            });
        }
    }

    let mut used = vec![false; g.num_vars()];
    let mut cursor = vec![0usize; g.num_checks()];
    let mut on_stack = vec![usize::MAX; g.num_checks()];
    let mut cycles = Vec::new();

    for start in 0..g.num_vars() {
        if used[start] {
            continue;
        }
        let root = g.var_adj[start][0].0;
        // stack_vars[t] joins stack_checks[t] and stack_checks[t + 1]
        let mut stack_checks = vec![root];
        let mut stack_vars: Vec<usize> = Vec::new();
        on_stack[root] = 0;
        loop {
            let cur = *stack_checks.last().expect("nonempty stack");
            let adj = &g.check_adj[cur];
            while cursor[cur] < adj.len() && used[adj[cursor[cur]].0] {
                cursor[cur] += 1;
            }
            let Some(&(v, _)) = adj.get(cursor[cur]) else {
                debug_assert_eq!(stack_checks.len(), 1);
                break;
            };
            used[v] = true;
            let other = g.across(v, cur);
            stack_vars.push(v);
            if on_stack[other] == usize::MAX {
                on_stack[other] = stack_checks.len();
                stack_checks.push(other);
                continue;
            }
            let idx = on_stack[other];
            let vars: Vec<usize> = stack_vars.drain(idx..).collect();
            let tail: Vec<usize> = stack_checks.drain(idx + 1..).collect();
            for &c in &tail {
                on_stack[c] = usize::MAX;
            }
            let mut checks = tail;
            checks.push(stack_checks[idx]);
            cycles.push(CycleWalk { vars, checks }.normalized());
        }
        on_stack[root] = usize::MAX;
    }
    Ok(cycles)
}

/// Fundamental cycles of the check graph (checks as vertices, degree-2
/// variables as edges) with respect to a breadth-first spanning forest,
/// mapped back to walks in `g`.
///
/// Each returned cycle starts at the non-tree variable that defines it, so
/// that variable appears in no other basis cycle.
pub fn check_graph_cycle_basis(g: &TannerGraph) -> Result<Vec<CycleWalk>> {
    g.require_var_degree_two()?;
    let nc = g.num_checks();
    // parent[c] = (parent check, tree variable)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nc];
    let mut depth = vec![usize::MAX; nc];
    let mut tree_var = vec![false; g.num_vars()];
    for root in 0..nc {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for &(v, _) in &g.check_adj[c] {
                let other = g.across(v, c);
                if depth[other] == usize::MAX {
                    depth[other] = depth[c] + 1;
                    parent[other] = Some((c, v));
                    tree_var[v] = true;
                    queue.push_back(other);
                }
            }
        }
    }

    let mut basis = Vec::new();
    for e in 0..g.num_vars() {
        if tree_var[e] {
            continue;
        }
        let (a, b) = (g.var_adj[e][0].0, g.var_adj[e][1].0);
        // climb from both ends to the common ancestor
        let (mut x, mut y) = (b, a);
        let mut up_from_b = Vec::new(); // (check, var to parent)
        let mut up_from_a = Vec::new();
        while depth[x] > depth[y] {
            let (p, v) = parent[x].expect("non-root");
            up_from_b.push((x, v));
            x = p;
        }
        while depth[y] > depth[x] {
            let (p, v) = parent[y].expect("non-root");
            up_from_a.push((y, v));
            y = p;
        }
        while x != y {
            let (px, vx) = parent[x].expect("non-root");
            let (py, vy) = parent[y].expect("non-root");
            up_from_b.push((x, vx));
            up_from_a.push((y, vy));
            x = px;
            y = py;
        }
        let lca = x;
        // walk: e -> b -> ... -> lca -> ... -> a -> e
        let mut vars = vec![e];
        let mut checks = Vec::new();
        for &(c, v) in &up_from_b {
            checks.push(c);
            vars.push(v);
        }
        checks.push(lca);
        for &(c, v) in up_from_a.iter().rev() {
            vars.push(v);
            checks.push(c);
        }
        basis.push(CycleWalk { vars, checks });
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::ToricLayout;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn gf(m: u32) -> Arc<Field> {
        Arc::new(Field::new(m).unwrap())
    }

    // Ring of k checks and k variables: variable t joins checks t and t+1.
    fn ring(field: &Arc<Field>, labels: &[(Elem, Elem)]) -> SparseQMatrix {
        let k = labels.len();
        let entries = (0..k).flat_map(|t| [(t, t, labels[t].0), ((t + 1) % k, t, labels[t].1)]);
        SparseQMatrix::from_entries(field.clone(), k, k, entries).unwrap()
    }

    fn random_gauge_matrix(h: &SparseQMatrix, field: &Arc<Field>, rng: &mut ChaCha8Rng) -> SparseQMatrix {
        let q = field.q() as u32;
        let rowg: Vec<Elem> = (0..h.rows()).map(|_| rng.gen_range(1..q) as Elem).collect();
        let colg: Vec<Elem> = (0..h.cols()).map(|_| rng.gen_range(1..q) as Elem).collect();
        SparseQMatrix::from_entries(
            field.clone(),
            h.rows(),
            h.cols(),
            h.entries().map(|(i, j, _)| (i, j, field.mul(rowg[i], colg[j]))),
        )
        .unwrap()
    }

    /// Random simple cycle of the check graph, found by a random walk that
    /// stops at the first repeated check.
    fn random_cycle(g: &TannerGraph, rng: &mut ChaCha8Rng) -> CycleWalk {
        loop {
            let start = rng.gen_range(0..g.num_checks());
            let mut checks = vec![start];
            let mut vars: Vec<usize> = Vec::new();
            let mut cur = start;
            let mut last_var = usize::MAX;
            loop {
                let adj = g.check_neighbors(cur);
                let choices: Vec<usize> = adj.iter().map(|e| e.0).filter(|&v| v != last_var).collect();
                if choices.is_empty() {
                    break;
                }
                let v = choices[rng.gen_range(0..choices.len())];
                let next = g.across(v, cur);
                vars.push(v);
                if let Some(idx) = checks.iter().position(|&c| c == next) {
                    let cyc_vars = vars[idx..].to_vec();
                    let mut cyc_checks = checks[idx + 1..].to_vec();
                    cyc_checks.push(checks[idx]);
                    if cyc_vars.len() >= 2 {
                        return CycleWalk::new(cyc_vars, cyc_checks).unwrap();
                    }
                    break;
                }
                checks.push(next);
                last_var = v;
                cur = next;
            }
        }
    }

    #[test]
    fn unit_labels_give_unit_product() {
        let f = gf(3);
        let h = ring(&f, &[(1, 1); 4]);
        let g = TannerGraph::from_matrix(&h);
        let cycles = cycle_decomposition(&g).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(product_over_cycle(&f, &g, &cycles[0]).unwrap(), 1);
    }

    #[test]
    fn product_follows_exponent_rule() {
        // GF(4), ring of 2 checks / 2 variables; walk v0 -> c1 -> v1 -> c0 -> v0
        let f = gf(2);
        let a = f.alpha();
        let a2 = f.mul(a, a);
        let h = ring(&f, &[(1, a), (a2, 1)]);
        let g = TannerGraph::from_matrix(&h);
        let walk = CycleWalk::new(vec![0, 1], vec![1, 0]).unwrap();
        // column 0 = (c0: 1, c1: a), column 1 = (c1: a2, c0: 1)
        // into c1 from v0: a (exp -1); out of c1 to v1: a2 (exp +1);
        // into c0 from v1: 1 (exp -1); out of c0 to v0: 1 (exp +1)
        let expected = f.mul(a2, f.inv(a).unwrap());
        assert_eq!(expected, a);
        assert_eq!(product_over_cycle(&f, &g, &walk).unwrap(), expected);
    }

    #[test]
    fn reversal_inverts_product() {
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let k = rng.gen_range(2..9);
            let labels: Vec<(Elem, Elem)> =
                (0..k).map(|_| (rng.gen_range(1..16), rng.gen_range(1..16))).collect();
            let g = TannerGraph::from_matrix(&ring(&f, &labels));
            let c = &cycle_decomposition(&g).unwrap()[0];
            let p = product_over_cycle(&f, &g, c).unwrap();
            let r = product_over_cycle(&f, &g, &c.reversed()).unwrap();
            assert_eq!(f.mul(p, r), 1);
        }
    }

    #[test]
    fn invalid_walks_rejected() {
        let f = gf(2);
        let g = TannerGraph::from_matrix(&ring(&f, &[(1, 1); 4]));
        assert!(CycleWalk::new(vec![0], vec![1]).is_err());
        // variable 0 touches checks 0 and 1 only
        let bad = CycleWalk::new(vec![0, 2], vec![2, 0]).unwrap();
        assert!(matches!(product_over_cycle(&f, &g, &bad), Err(Error::NotACycle(_))));
        let repeated = CycleWalk::new(vec![0, 1, 0, 1], vec![1, 2, 1, 2]).unwrap();
        assert!(repeated.validate(&g).is_err());
    }

    #[test]
    fn decomposition_of_single_and_disjoint_cycles() {
        let f = gf(1);
        let g = TannerGraph::from_matrix(&ring(&f, &[(1, 1); 4]));
        let cycles = cycle_decomposition(&g).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 4); // length 8 in the Tanner graph

        // two disjoint 4-cycles: checks {0,1} x vars {0,1} and checks {2,3} x vars {2,3}
        let h = SparseQMatrix::from_dense(
            f.clone(),
            &[vec![1, 1, 0, 0], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![0, 0, 1, 1]],
        )
        .unwrap();
        let g = TannerGraph::from_matrix(&h);
        let cycles = cycle_decomposition(&g).unwrap();
        assert_eq!(cycles.len(), 2);
        assert_eq!(cycles[0].vars(), &[0, 1]);
        assert_eq!(cycles[1].vars(), &[2, 3]);
    }

    #[test]
    fn decomposition_reports_precondition_violations() {
        let f = gf(1);
        let h = SparseQMatrix::from_dense(f.clone(), &[vec![1, 1, 1], vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let g = TannerGraph::from_matrix(&h);
        let err = cycle_decomposition(&g).unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }), "{err}");

        let h = SparseQMatrix::from_dense(f, &[vec![1, 1, 1], vec![1, 0, 0]]).unwrap();
        let g = TannerGraph::from_matrix(&h);
        match cycle_decomposition(&g).unwrap_err() {
            Error::Precondition { node, .. } => assert_eq!(node, "variable 1"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn restricted_graphs_of_toric_pair() {
        for n in 2..=4 {
            let layout = ToricLayout::new(n).unwrap();
            let (hx, hz) = layout.binary_matrices();
            for k in 0..hz.rows() {
                let g = restricted_graph(&hx, &hz, k);
                assert_eq!(g.num_vars(), 4);
                for v in 0..4 {
                    assert_eq!(g.var_neighbors(v).len(), 2);
                }
                for c in 0..g.num_checks() {
                    let d = g.check_neighbors(c).len();
                    assert!(d > 0 && d % 2 == 0, "n={n} k={k}");
                }
                let cycles = cycle_decomposition(&g).unwrap();
                // exact cover of the edge set
                let mut covered = std::collections::BTreeSet::new();
                let mut var_count = vec![0; g.num_vars()];
                for c in &cycles {
                    c.validate(&g).unwrap();
                    let k = c.len();
                    for t in 0..k {
                        var_count[c.vars()[t]] += 1;
                        assert!(covered.insert((c.checks()[t], c.vars()[t])));
                        assert!(covered.insert((c.checks()[t], c.vars()[(t + 1) % k])));
                    }
                }
                assert_eq!(covered.len(), g.num_edges());
                assert_eq!(covered.len(), 8);
                assert!(var_count.iter().all(|&x| x == 1));
            }
        }
        // a zero row selects nothing
        let f = gf(1);
        let hx = SparseQMatrix::from_dense(f.clone(), &[vec![1, 1]]).unwrap();
        let hz = SparseQMatrix::zeros(f, 1, 2);
        let g = restricted_graph(&hx, &hz, 0);
        assert_eq!((g.num_vars(), g.num_checks()), (0, 0));
    }

    #[test]
    fn decomposition_is_deterministic() {
        let layout = ToricLayout::new(4).unwrap();
        let (hx, _) = layout.binary_matrices();
        let g = TannerGraph::from_matrix(&hx);
        assert_eq!(cycle_decomposition(&g).unwrap(), cycle_decomposition(&g).unwrap());
    }

    #[test]
    fn basis_sizes() {
        let f = gf(1);
        let g = TannerGraph::from_matrix(&ring(&f, &[(1, 1); 5]));
        assert_eq!(check_graph_cycle_basis(&g).unwrap().len(), 1);

        for n in 2..=6 {
            let (hx, hz) = ToricLayout::new(n).unwrap().binary_matrices();
            for h in [&hx, &hz] {
                let g = TannerGraph::from_matrix(h);
                let basis = check_graph_cycle_basis(&g).unwrap();
                assert_eq!(basis.len(), n * n + 1);
                // |E_check| - |C| + components, connected here
                assert_eq!(basis.len(), g.num_vars() - g.num_checks() + 1);
                for (i, c) in basis.iter().enumerate() {
                    c.validate(&g).unwrap();
                    let own = c.vars()[0];
                    for (j, d) in basis.iter().enumerate() {
                        if i != j {
                            assert!(!d.vars().contains(&own));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_count_with_several_components() {
        let f = gf(1);
        let h = SparseQMatrix::from_dense(
            f,
            &[vec![1, 1, 0, 0, 0], vec![1, 1, 0, 0, 0], vec![0, 0, 1, 1, 1], vec![0, 0, 1, 1, 1]],
        )
        .unwrap();
        let g = TannerGraph::from_matrix(&h);
        // check graph: two components, 5 edges, 4 vertices -> 5 - 4 + 2 = 3
        assert_eq!(check_graph_cycle_basis(&g).unwrap().len(), 3);
    }

    #[test]
    fn unit_basis_implies_unit_on_random_cycles() {
        let f = gf(4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (hx, _) = ToricLayout::new(4).unwrap().binary_matrices();
        let h = random_gauge_matrix(&hx, &f, &mut rng);
        let g = TannerGraph::from_matrix(&h);
        for c in check_graph_cycle_basis(&g).unwrap() {
            assert_eq!(product_over_cycle(&f, &g, &c).unwrap(), 1);
        }
        for _ in 0..500 {
            let c = random_cycle(&g, &mut rng);
            assert_eq!(product_over_cycle(&f, &g, &c).unwrap(), 1);
        }

        // scale one edge: exactly the cycles through it change
        let mut bad = h.clone();
        let (i, j, v) = bad.entries().nth(7).unwrap();
        bad.set(i, j, f.mul(v, f.alpha()));
        let gb = TannerGraph::from_matrix(&bad);
        let through = |c: &CycleWalk| {
            let k = c.len();
            (0..k).any(|t| {
                let ch = gb.check_id(c.checks()[t]);
                ch == i && (gb.var_id(c.vars()[t]) == j || gb.var_id(c.vars()[(t + 1) % k]) == j)
            })
        };
        let basis = check_graph_cycle_basis(&gb).unwrap();
        assert!(basis.iter().any(|c| through(c)));
        for c in &basis {
            assert_eq!(product_over_cycle(&f, &gb, c).unwrap() != 1, through(c));
        }
        for _ in 0..500 {
            let c = random_cycle(&gb, &mut rng);
            assert_eq!(product_over_cycle(&f, &gb, &c).unwrap() != 1, through(&c));
        }
    }
}
