//! Toric codes on a `2n x 2n` torus and their extended q-ary versions.
//!
//! Coordinates `(i, j)` range over `[0, 2n)^2`. Variable nodes sit at `i + j`
//! even, X checks at `(odd, even)` and Z checks at `(even, odd)`. Every check
//! touches its four axis neighbours `(i +- 1, j)` and `(i, j +- 1)`.
//! Nodes are numbered row-major with `i` as the first axis.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lift::{cycle_codeword, lift_pair_in, BinaryCssPair, CssPairQ};
use crate::qmatrix::{dot, product_over_cycle, weight, CycleWalk, Echelon, SparseQMatrix, TannerGraph};

/// Which half of a CSS pair an object belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    X,
    Z,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::X => Side::Z,
            Side::Z => Side::X,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::X => "X",
            Side::Z => "Z",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X" | "x" => Ok(Side::X),
            "Z" | "z" => Ok(Side::Z),
            _ => Err(Error::InvalidParameter(format!("unknown side {s:?}"))),
        }
    }
}

/// Index maps of the toric layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ToricLayout {
    n: usize,
}

impl ToricLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("toric size n = {n} must be at least 2")));
        }
        Ok(ToricLayout { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Side length `2n` of the torus.
    pub fn period(&self) -> usize {
        2 * self.n
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n * self.n
    }

    pub fn num_checks(&self) -> usize {
        self.n * self.n
    }

    fn wrap(&self, x: isize) -> usize {
        x.rem_euclid(self.period() as isize) as usize
    }

    pub fn var_index(&self, i: usize, j: usize) -> usize {
        debug_assert!((i + j) % 2 == 0);
        i * self.n + j / 2
    }

    pub fn var_coord(&self, v: usize) -> (usize, usize) {
        let i = v / self.n;
        (i, 2 * (v % self.n) + i % 2)
    }

    /// Row index of the check at `(i, j)` on the given side.
    pub fn check_index(&self, side: Side, i: usize, j: usize) -> usize {
        debug_assert!(self.is_check(side, i, j));
        (i / 2) * self.n + j / 2
    }

    pub fn check_coord(&self, side: Side, c: usize) -> (usize, usize) {
        let (a, b) = (2 * (c / self.n), 2 * (c % self.n));
        match side {
            Side::X => (a + 1, b),
            Side::Z => (a, b + 1),
        }
    }

    pub fn is_check(&self, side: Side, i: usize, j: usize) -> bool {
        match side {
            Side::X => i % 2 == 1 && j % 2 == 0,
            Side::Z => i % 2 == 0 && j % 2 == 1,
        }
    }

    /// The four variables around check `(i, j)`.
    pub fn check_neighbors(&self, i: usize, j: usize) -> [(usize, usize); 4] {
        let (i, j) = (i as isize, j as isize);
        [
            (self.wrap(i - 1), j as usize),
            (self.wrap(i + 1), j as usize),
            (i as usize, self.wrap(j - 1)),
            (i as usize, self.wrap(j + 1)),
        ]
    }

    /// Binary parity-check matrix of one side.
    pub fn binary_matrix(&self, side: Side) -> SparseQMatrix {
        let f2 = Arc::new(Field::new(1).expect("GF(2)"));
        let entries = (0..self.num_checks()).flat_map(|c| {
            let (i, j) = self.check_coord(side, c);
            self.check_neighbors(i, j).map(|(a, b)| (c, self.var_index(a, b), 1))
        });
        SparseQMatrix::from_entries(f2, self.num_checks(), self.num_vars(), entries)
            .expect("toric matrix")
    }

    /// `(H_X, H_Z)` over GF(2).
    pub fn binary_matrices(&self) -> (SparseQMatrix, SparseQMatrix) {
        (self.binary_matrix(Side::X), self.binary_matrix(Side::Z))
    }

    fn walk(&self, side: Side, vars: &[(usize, usize)], checks: &[(usize, usize)]) -> CycleWalk {
        CycleWalk::new(
            vars.iter().map(|&(i, j)| self.var_index(i, j)).collect(),
            checks.iter().map(|&(i, j)| self.check_index(side, i, j)).collect(),
        )
        .expect("toric cycle")
    }

    /// The length-8 cycles of the given side's Tanner graph, one around each
    /// check of the other side. Walk indices are matrix row/column indices.
    pub fn minimal_cycles(&self, side: Side) -> Vec<CycleWalk> {
        (0..self.num_checks())
            .map(|c| {
                let (a, b) = self.check_coord(side.other(), c);
                let (a, b) = (a as isize, b as isize);
                let w = |x: isize, y: isize| (self.wrap(x), self.wrap(y));
                let vars = [w(a, b + 1), w(a + 1, b), w(a, b - 1), w(a - 1, b)];
                let checks = [w(a + 1, b + 1), w(a + 1, b - 1), w(a - 1, b - 1), w(a - 1, b + 1)];
                self.walk(side, &vars, &checks)
            })
            .collect()
    }

    /// Horizontal big cycles of one side, ordered by height.
    pub fn horizontal_big_cycles(&self, side: Side) -> Vec<CycleWalk> {
        let first_height = match side {
            Side::X => 0,
            Side::Z => 1,
        };
        (0..self.n)
            .map(|h| {
                let j = first_height + 2 * h;
                let i0 = j % 2;
                let vars: Vec<_> = (0..self.n).map(|t| (i0 + 2 * t, j)).collect();
                let checks: Vec<_> = (0..self.n).map(|t| ((i0 + 2 * t + 1) % self.period(), j)).collect();
                self.walk(side, &vars, &checks)
            })
            .collect()
    }

    /// Vertical big cycles of one side, ordered by column.
    pub fn vertical_big_cycles(&self, side: Side) -> Vec<CycleWalk> {
        let first_col = match side {
            Side::X => 1,
            Side::Z => 0,
        };
        (0..self.n)
            .map(|h| {
                let i = first_col + 2 * h;
                let j0 = i % 2;
                let vars: Vec<_> = (0..self.n).map(|t| (i, j0 + 2 * t)).collect();
                let checks: Vec<_> = (0..self.n).map(|t| (i, (j0 + 2 * t + 1) % self.period())).collect();
                self.walk(side, &vars, &checks)
            })
            .collect()
    }

    /// All `2n` big cycles: horizontal ones first.
    pub fn big_cycles(&self, side: Side) -> Vec<CycleWalk> {
        let mut all = self.horizontal_big_cycles(side);
        all.extend(self.vertical_big_cycles(side));
        all
    }
}

/// Binary toric pair and its layout.
pub fn build_skeleton(n: usize) -> Result<(BinaryCssPair, ToricLayout)> {
    let layout = ToricLayout::new(n)?;
    let (hx, hz) = layout.binary_matrices();
    Ok((BinaryCssPair::new(hx, hz)?, layout))
}

/// Logical operators derived from big cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalSet {
    /// Word of `C_Z` on the vertical Z big cycle at column 0.
    pub xbar1: Vec<Elem>,
    /// Word of `C_Z` on the horizontal Z big cycle at height 1.
    pub xbar2: Vec<Elem>,
    /// Word of `C_X` on the horizontal X big cycle at height 0.
    pub zbar1: Vec<Elem>,
    /// Word of `C_X` on the vertical X big cycle at column 1.
    pub zbar2: Vec<Elem>,
    /// Words of `C_X` on every horizontal X big cycle (heights 0, 2, ...).
    pub zbar1_shifts: Vec<Vec<Elem>>,
}

/// The extended toric code: a lifted toric pair with its logical operators.
#[derive(Debug)]
pub struct ExtendedToricCode {
    layout: ToricLayout,
    pair: CssPairQ,
    logicals: LogicalSet,
    rowspace_x: OnceLock<Echelon>,
    rowspace_z: OnceLock<Echelon>,
}

/// Word supported on a cycle of `h`'s Tanner graph, first value 1.
fn big_cycle_word(h: &SparseQMatrix, walk: &CycleWalk) -> Result<Vec<Elem>> {
    let g = TannerGraph::from_matrix(h);
    let values = cycle_codeword(h.field(), &g, walk, 1)?;
    let mut word = vec![0; h.cols()];
    for (&v, &z) in walk.vars().iter().zip(&values) {
        word[v] = z;
    }
    Ok(word)
}

impl ExtendedToricCode {
    /// Lifts the size-`n` toric code to GF(2^m) and derives its logicals.
    pub fn build(n: usize, m: u32, seed: u64) -> Result<Self> {
        let field = Arc::new(Field::new(m)?);
        let (skeleton, layout) = build_skeleton(n)?;
        let pair = lift_pair_in(&skeleton, field, seed)?;
        Self::from_pair(layout, pair)
    }

    /// Attaches logicals to an already lifted toric pair and validates them.
    pub fn from_pair(layout: ToricLayout, pair: CssPairQ) -> Result<Self> {
        if pair.len() != layout.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "pair of length {} for toric size {}",
                pair.len(),
                layout.n()
            )));
        }
        let (hxq, hzq) = (pair.hxq(), pair.hzq());
        let xbar1 = big_cycle_word(hzq, &layout.vertical_big_cycles(Side::Z)[0])?;
        let xbar2 = big_cycle_word(hzq, &layout.horizontal_big_cycles(Side::Z)[0])?;
        let zbar1_shifts = layout
            .horizontal_big_cycles(Side::X)
            .iter()
            .map(|w| big_cycle_word(hxq, w))
            .collect::<Result<Vec<_>>>()?;
        let zbar1 = zbar1_shifts[0].clone();
        let zbar2 = big_cycle_word(hxq, &layout.vertical_big_cycles(Side::X)[0])?;
        let code = ExtendedToricCode {
            layout,
            pair,
            logicals: LogicalSet { xbar1, xbar2, zbar1, zbar2, zbar1_shifts },
            rowspace_x: OnceLock::new(),
            rowspace_z: OnceLock::new(),
        };
        code.validate_logicals()?;
        let k = code.pair.quantum_dimension();
        if k != 2 {
            return Err(Error::Rank(format!("q-ary quantum dimension {k}, expected 2")));
        }
        Ok(code)
    }

    pub fn layout(&self) -> &ToricLayout {
        &self.layout
    }

    pub fn pair(&self) -> &CssPairQ {
        &self.pair
    }

    pub fn logicals(&self) -> &LogicalSet {
        &self.logicals
    }

    pub fn field(&self) -> &Arc<Field> {
        self.pair.field()
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    pub fn m(&self) -> u32 {
        self.field().m()
    }

    pub fn seed(&self) -> u64 {
        self.pair.seed()
    }

    /// Physical qubits `2 m n^2`.
    pub fn num_qubits(&self) -> usize {
        self.m() as usize * self.layout.num_vars()
    }

    /// Encoded qubits `2m`.
    pub fn num_logical_qubits(&self) -> usize {
        2 * self.m() as usize
    }

    /// Rate as a reduced fraction `(numerator, denominator)`.
    pub fn rate(&self) -> (usize, usize) {
        let (a, b) = (self.num_logical_qubits(), self.num_qubits());
        let g = gcd(a, b);
        (a / g, b / g)
    }

    /// Parity-check matrix of one side.
    pub fn matrix(&self, side: Side) -> &SparseQMatrix {
        match side {
            Side::X => self.pair.hxq(),
            Side::Z => self.pair.hzq(),
        }
    }

    /// Row-reduced form of one side's parity-check matrix, cached.
    pub fn rowspace(&self, side: Side) -> &Echelon {
        match side {
            Side::X => self.rowspace_x.get_or_init(|| self.pair.hxq().echelon()),
            Side::Z => self.rowspace_z.get_or_init(|| self.pair.hzq().echelon()),
        }
    }

    fn validate_logicals(&self) -> Result<()> {
        let f = self.field();
        let n = self.n();
        let LogicalSet { xbar1, xbar2, zbar1, zbar2, zbar1_shifts } = &self.logicals;
        let named = [
            ("Xbar1", xbar1, Side::Z),
            ("Xbar2", xbar2, Side::Z),
            ("Zbar1", zbar1, Side::X),
            ("Zbar2", zbar2, Side::X),
        ];
        for (name, word, side) in named {
            if weight(word) != n {
                return Err(Error::Logical(format!("{name} has weight {} instead of {n}", weight(word))));
            }
            if self.matrix(side).apply(word)?.iter().any(|&s| s != 0) {
                return Err(Error::Logical(format!("{name} has nonzero syndrome under H_{side}")));
            }
        }
        if dot(f, xbar1, zbar1) == 0 || dot(f, xbar2, zbar2) == 0 {
            return Err(Error::Logical("diagonal pairing vanishes".into()));
        }
        if dot(f, xbar1, zbar2) != 0 || dot(f, xbar2, zbar1) != 0 {
            return Err(Error::Logical("off-diagonal pairing is nonzero".into()));
        }
        let mut covered = vec![false; self.layout.num_vars()];
        for (h, shift) in zbar1_shifts.iter().enumerate() {
            if weight(shift) != n || dot(f, xbar1, shift) == 0 {
                return Err(Error::Logical(format!("Zbar1 shift {h} is malformed")));
            }
            for (v, &x) in shift.iter().enumerate() {
                if x != 0 {
                    if covered[v] {
                        return Err(Error::Logical(format!("Zbar1 shifts overlap at variable {v}")));
                    }
                    covered[v] = true;
                }
            }
        }
        Ok(())
    }

    /// Products over all minimal and big cycles of one side's Tanner graph.
    pub fn check_cycle_families(&self, side: Side) -> Result<()> {
        check_toric_cycle_families(&self.layout, self.matrix(side), side)
    }

    /// Whether a zero-syndrome residual on `side` is a nontrivial logical.
    ///
    /// `side` names the code the residual belongs to: a residual of X flips
    /// lies in `C_Z` (zero syndrome under `H_Z`) and is trivial iff it is in
    /// the row space of `H_X`. The answer is computed by row-space membership
    /// and by pairing with the opposite logicals; disagreement is an error.
    pub fn is_logical_error(&self, residual: &[Elem], side: Side) -> Result<bool> {
        if self.matrix(side).apply(residual)?.iter().any(|&s| s != 0) {
            return Err(Error::NonzeroSyndrome);
        }
        let by_rowspace = !self.rowspace(side.other()).contains(residual);
        let by_pairing = self.logical_by_pairing(residual, side);
        if by_rowspace != by_pairing {
            return Err(Error::Logical(format!(
                "row-space test says {by_rowspace}, pairing test says {by_pairing}"
            )));
        }
        Ok(by_pairing)
    }

    /// Pairing test alone; exact for zero-syndrome residuals.
    pub fn logical_by_pairing(&self, residual: &[Elem], side: Side) -> bool {
        let f = self.field();
        let l = &self.logicals;
        let (a, b) = match side {
            Side::Z => (&l.zbar1, &l.zbar2),
            Side::X => (&l.xbar1, &l.xbar2),
        };
        dot(f, residual, a) != 0 || dot(f, residual, b) != 0
    }

    /// Row-space test alone.
    pub fn logical_by_rowspace(&self, residual: &[Elem], side: Side) -> bool {
        !self.rowspace(side.other()).contains(residual)
    }
}

/// Unit products on the minimal and big cycles of one side of a toric-shaped pair.
pub fn check_toric_cycle_families(layout: &ToricLayout, h: &SparseQMatrix, side: Side) -> Result<()> {
    let g = TannerGraph::from_matrix(h);
    let families = [("minimal", layout.minimal_cycles(side)), ("big", layout.big_cycles(side))];
    for (kind, cycles) in families {
        for (idx, c) in cycles.iter().enumerate() {
            let p = product_over_cycle(h.field(), &g, c)?;
            if p != 1 {
                return Err(Error::CycleProduct {
                    context: format!("{kind} cycle {idx} of the {side} graph"),
                    product: p,
                });
            }
        }
    }
    Ok(())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Enumeration budget for [`brute_force_distance`].
pub const DISTANCE_BUDGET: u128 = 1 << 24;

/// Minimum-weight logical words of one side.
#[derive(Clone, Debug)]
pub struct DistanceResult {
    pub distance: usize,
    /// Every word of minimum weight outside the stabilizer row space.
    pub minimizers: Vec<Vec<Elem>>,
}

/// Minimum weight over `C_side \ C_other^perp`, by full enumeration of
/// `C_side = ker H_side`.
///
/// Refuses when the code has more than [`DISTANCE_BUDGET`] words.
pub fn brute_force_distance(pair: &CssPairQ, side: Side) -> Result<DistanceResult> {
    let (h, stab) = match side {
        Side::X => (pair.hxq(), pair.hzq()),
        Side::Z => (pair.hzq(), pair.hxq()),
    };
    let field = h.field();
    let q = field.q() as u128;
    let basis = h.kernel_basis();
    let k = basis.len() as u32;
    let needed = q.checked_pow(k).unwrap_or(u128::MAX);
    if needed > DISTANCE_BUDGET {
        return Err(Error::BudgetExceeded { needed, budget: DISTANCE_BUDGET });
    }
    let rowspace = stab.echelon();
    let len = h.cols();
    let mut digits = vec![0 as Elem; basis.len()];
    let mut word = vec![0 as Elem; len];
    let mut best = usize::MAX;
    let mut minimizers = Vec::new();
    let top = field.q() as Elem - 1;
    'outer: loop {
        // odometer step: the changed digit's contribution is (old + new) * b
        let mut d = 0;
        loop {
            if d == digits.len() {
                break 'outer;
            }
            let old = digits[d];
            let new = if old == top { 0 } else { old + 1 };
            digits[d] = new;
            let delta = old ^ new;
            for (w, &b) in word.iter_mut().zip(&basis[d]) {
                *w ^= field.mul(delta, b);
            }
            if new != 0 {
                break;
            }
            d += 1;
        }
        let wt = weight(&word);
        if wt == 0 || wt > best {
            continue;
        }
        if rowspace.contains(&word) {
            continue;
        }
        if wt < best {
            best = wt;
            minimizers.clear();
        }
        minimizers.push(word.clone());
    }
    if best == usize::MAX {
        return Err(Error::Logical(format!("no logical words on side {side}")));
    }
    Ok(DistanceResult { distance: best, minimizers })
}
