//! Lifting binary column-weight-2 CSS pairs to GF(2^m).
//!
//! The X side is labeled so that the product over every cycle of its Tanner
//! graph is 1 (each label is `a_i * b_ij * b_kj` for the two checks `i`, `k`
//! of the column). The Z side is then solved row by row: the columns of a Z
//! row induce a subgraph of the X Tanner graph that splits into cycles, and
//! each cycle carries a one-dimensional code whose nonzero words give the Z
//! entries.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::qmatrix::{
    check_graph_cycle_basis, cycle_decomposition, product_over_cycle, restricted_graph, CycleWalk,
    SparseQMatrix, TannerGraph,
};

/// A binary CSS pair whose columns all have weight exactly 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryCssPair {
    hx: SparseQMatrix,
    hz: SparseQMatrix,
}

impl BinaryCssPair {
    pub fn new(hx: SparseQMatrix, hz: SparseQMatrix) -> Result<Self> {
        for (name, h) in [("H_X", &hx), ("H_Z", &hz)] {
            if h.field().q() != 2 {
                return Err(Error::InvalidParameter(format!("{name} is not binary")));
            }
        }
        if hx.cols() != hz.cols() {
            return Err(Error::DimensionMismatch(format!(
                "H_X has {} columns, H_Z has {}",
                hx.cols(),
                hz.cols()
            )));
        }
        require_column_weight_two(&hx, "H_X")?;
        require_column_weight_two(&hz, "H_Z")?;
        hx.check_orthogonal(&hz)?;
        Ok(BinaryCssPair { hx, hz })
    }

    pub fn hx(&self) -> &SparseQMatrix {
        &self.hx
    }

    pub fn hz(&self) -> &SparseQMatrix {
        &self.hz
    }

    /// Code length.
    pub fn len(&self) -> usize {
        self.hx.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.hx.cols() == 0
    }
}

fn require_column_weight_two(h: &SparseQMatrix, matrix: &'static str) -> Result<()> {
    match (0..h.cols()).find(|&j| h.col_degree(j) != 2) {
        Some(col) => Err(Error::ColumnWeight { matrix, col, weight: h.col_degree(col) }),
        None => Ok(()),
    }
}

/// Free coefficients of the X labeling: one per check and one per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCoefficients {
    /// `a_i` for every row `i` of `H_X`.
    pub check: Vec<Elem>,
    /// `b_ij` for every entry of `H_X`, indexed like `H_X.row(i)`.
    pub edge: Vec<Vec<Elem>>,
}

impl EdgeCoefficients {
    /// Draws every coefficient uniformly from the nonzero elements, checks
    /// first, then edges in row-major order.
    pub fn random<R: Rng>(hx: &SparseQMatrix, field: &Field, rng: &mut R) -> Self {
        let q = field.q() as u32;
        let check = (0..hx.rows()).map(|_| rng.gen_range(1..q) as Elem).collect();
        let edge = (0..hx.rows())
            .map(|i| hx.row(i).iter().map(|_| rng.gen_range(1..q) as Elem).collect())
            .collect();
        EdgeCoefficients { check, edge }
    }

    fn b(&self, hx: &SparseQMatrix, i: usize, j: usize) -> Elem {
        let k = hx.row(i).binary_search_by_key(&j, |e| e.0).expect("edge of H_X");
        self.edge[i][k]
    }
}

/// Assigns `x_ij = a_i b_ij b_kj` for each column `j` with checks `i`, `k`.
pub fn label_x_with(hx: &SparseQMatrix, field: &Arc<Field>, coeffs: &EdgeCoefficients) -> Result<SparseQMatrix> {
    require_column_weight_two(hx, "H_X")?;
    let mut entries = Vec::with_capacity(2 * hx.cols());
    for j in 0..hx.cols() {
        let (i, k) = (hx.col(j)[0].0, hx.col(j)[1].0);
        let (bij, bkj) = (coeffs.b(hx, i, j), coeffs.b(hx, k, j));
        let prod = field.mul(bij, bkj);
        entries.push((i, j, field.mul(coeffs.check[i], prod)));
        entries.push((k, j, field.mul(coeffs.check[k], prod)));
    }
    SparseQMatrix::from_entries(field.clone(), hx.rows(), hx.cols(), entries)
}

/// Random X labeling with unit product over every cycle of its Tanner graph.
pub fn label_x<R: Rng>(skeleton: &BinaryCssPair, field: &Arc<Field>, rng: &mut R) -> Result<SparseQMatrix> {
    let coeffs = EdgeCoefficients::random(skeleton.hx(), field, rng);
    label_x_with(skeleton.hx(), field, &coeffs)
}

/// Nonzero word of the code carried by a single labeled cycle, with the
/// first variable of the walk set to `first`.
///
/// Values are returned in walk order. Fails if the cycle's product is not 1,
/// in which case the only word is zero.
pub fn cycle_codeword(field: &Field, g: &TannerGraph, walk: &CycleWalk, first: Elem) -> Result<Vec<Elem>> {
    if first == 0 {
        return Err(Error::InvalidParameter("cycle codeword seeded with zero".into()));
    }
    let labels = walk.labels(g)?;
    let mut values = Vec::with_capacity(walk.len());
    let mut z = first;
    for &(into, out) in &labels {
        values.push(z);
        // into * z_t + out * z_{t+1} = 0
        z = field.div_nonzero(field.mul(z, into), out);
    }
    if z != first {
        return Err(Error::CycleProduct {
            context: format!("cycle through variable {}", g.var_id(walk.vars()[0])),
            product: product_over_cycle(field, g, walk)?,
        });
    }
    Ok(values)
}

/// Solves the Z entries row by row on the cycles of each restricted graph.
pub fn label_z<R: Rng>(hxq: &SparseQMatrix, skeleton: &BinaryCssPair, rng: &mut R) -> Result<SparseQMatrix> {
    let field = hxq.field();
    let q = field.q() as u32;
    let hz = skeleton.hz();
    let mut entries = Vec::with_capacity(hz.nnz());
    for k in 0..hz.rows() {
        let g = restricted_graph(hxq, hz, k);
        for (ci, walk) in cycle_decomposition(&g)?.iter().enumerate() {
            let first = rng.gen_range(1..q) as Elem;
            let values = cycle_codeword(field, &g, walk, first)
                .map_err(|_| Error::ClosureInconsistent { row: k, cycle: ci })?;
            for (&v, &z) in walk.vars().iter().zip(&values) {
                entries.push((k, g.var_id(v), z));
            }
        }
    }
    SparseQMatrix::from_entries(field.clone(), hz.rows(), hz.cols(), entries)
}

/// A q-ary CSS pair lifted from a binary skeleton.
#[derive(Clone, Debug)]
pub struct CssPairQ {
    hxq: SparseQMatrix,
    hzq: SparseQMatrix,
    skeleton: BinaryCssPair,
    seed: u64,
}

impl CssPairQ {
    /// Wraps existing matrices, deriving the skeleton from their supports,
    /// and validates every invariant.
    pub fn from_matrices(hxq: SparseQMatrix, hzq: SparseQMatrix, seed: u64) -> Result<Self> {
        let skeleton = BinaryCssPair::new(hxq.support(), hzq.support())?;
        let pair = CssPairQ { hxq, hzq, skeleton, seed };
        pair.validate()?;
        Ok(pair)
    }

    pub fn hxq(&self) -> &SparseQMatrix {
        &self.hxq
    }

    pub fn hzq(&self) -> &SparseQMatrix {
        &self.hzq
    }

    pub fn skeleton(&self) -> &BinaryCssPair {
        &self.skeleton
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn field(&self) -> &Arc<Field> {
        self.hxq.field()
    }

    /// Number of q-ary symbols.
    pub fn len(&self) -> usize {
        self.hxq.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.hxq.cols() == 0
    }

    /// Support condition, orthogonality and unit cycle products on the X side.
    pub fn validate(&self) -> Result<()> {
        check_support(&self.hxq, self.skeleton.hx(), "H_X")?;
        check_support(&self.hzq, self.skeleton.hz(), "H_Z")?;
        self.hxq.check_orthogonal(&self.hzq)?;
        check_cycle_basis(&self.hxq)
    }

    /// q-ary quantum dimension `(n - rank H_X) - rank H_Z`.
    pub fn quantum_dimension(&self) -> usize {
        quantum_dimension(&self.hxq, &self.hzq)
    }

    /// Number of encoded qubits after binary expansion.
    pub fn qubit_dimension(&self) -> usize {
        self.field().m() as usize * self.quantum_dimension()
    }
}

/// `(n - rank hx) - rank hz`, saturating at zero.
pub fn quantum_dimension(hx: &SparseQMatrix, hz: &SparseQMatrix) -> usize {
    (hx.cols() - hx.rank()).saturating_sub(hz.rank())
}

/// `hq` is nonzero exactly where the binary `hb` is.
pub fn check_support(hq: &SparseQMatrix, hb: &SparseQMatrix, matrix: &'static str) -> Result<()> {
    if hq.rows() != hb.rows() || hq.cols() != hb.cols() {
        return Err(Error::DimensionMismatch(format!("{matrix} shape differs from its skeleton")));
    }
    for i in 0..hq.rows() {
        let a: Vec<usize> = hq.row(i).iter().map(|e| e.0).collect();
        let b: Vec<usize> = hb.row(i).iter().map(|e| e.0).collect();
        if a != b {
            let col = a
                .iter()
                .chain(&b)
                .copied()
                .filter(|c| a.contains(c) != b.contains(c))
                .min()
                .unwrap_or(0);
            return Err(Error::Support { matrix, row: i, col });
        }
    }
    Ok(())
}

/// Product over every fundamental cycle of the Tanner graph of `hq` is 1.
pub fn check_cycle_basis(hq: &SparseQMatrix) -> Result<()> {
    let g = TannerGraph::from_matrix(hq);
    for c in check_graph_cycle_basis(&g)? {
        let p = product_over_cycle(hq.field(), &g, &c)?;
        if p != 1 {
            return Err(Error::CycleProduct {
                context: format!("fundamental cycle through column {}", g.var_id(c.vars()[0])),
                product: p,
            });
        }
    }
    Ok(())
}

/// Lifts a skeleton to GF(2^m), seeding all random choices from `seed`.
pub fn lift_pair(skeleton: &BinaryCssPair, m: u32, seed: u64) -> Result<CssPairQ> {
    let field = Arc::new(Field::new(m)?);
    lift_pair_in(skeleton, field, seed)
}

/// As [`lift_pair`], over an existing field.
pub fn lift_pair_in(skeleton: &BinaryCssPair, field: Arc<Field>, seed: u64) -> Result<CssPairQ> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hxq = label_x(skeleton, &field, &mut rng)?;
    let hzq = label_z(&hxq, skeleton, &mut rng)?;
    let pair = CssPairQ { hxq, hzq, skeleton: skeleton.clone(), seed };
    pair.validate()?;
    Ok(pair)
}
