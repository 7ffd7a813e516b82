//! Dense Gaussian elimination over GF(q).

use std::sync::Arc;

use crate::gf::{Elem, Field};

/// Reduced row echelon form of a set of row vectors.
///
/// Built with [`Echelon::with_combinations`], it also keeps for every basis
/// row the combination of input rows that produced it, so membership queries
/// can return coefficients.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Arc<Field>,
    cols: usize,
    nrows: usize,
    basis: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
    combos: Option<Vec<Vec<Elem>>>,
}

impl Echelon {
    pub fn new(field: Arc<Field>, rows: Vec<Vec<Elem>>) -> Self {
        Self::build(field, rows, false)
    }

    pub fn with_combinations(field: Arc<Field>, rows: Vec<Vec<Elem>>) -> Self {
        Self::build(field, rows, true)
    }

    fn build(field: Arc<Field>, rows: Vec<Vec<Elem>>, track: bool) -> Self {
        let nrows = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut work = rows;
        let mut combos: Vec<Vec<Elem>> = if track {
            (0..nrows)
                .map(|i| {
                    let mut c = vec![0; nrows];
                    c[i] = 1;
                    c
                })
                .collect()
        } else {
            vec![Vec::new(); nrows]
        };
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..cols {
            let Some(p) = (rank..nrows).find(|&r| work[r][col] != 0) else {
                continue;
            };
            work.swap(rank, p);
            combos.swap(rank, p);
            let inv = field.inv_nonzero(work[rank][col]);
            if inv != 1 {
                scale(&field, &mut work[rank][col..], inv);
                scale(&field, &mut combos[rank], inv);
            }
            let (pivot_row, pivot_combo) = (work[rank].clone(), combos[rank].clone());
            for r in 0..nrows {
                if r == rank {
                    continue;
                }
                let c = work[r][col];
                if c != 0 {
                    axpy(&field, &mut work[r][col..], c, &pivot_row[col..]);
                    axpy(&field, &mut combos[r], c, &pivot_combo);
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == nrows {
                break;
            }
        }
        work.truncate(rank);
        combos.truncate(rank);
        Echelon { field, cols, nrows, basis: work, pivots, combos: track.then_some(combos) }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis of `{x : M x^T = 0}` where `M` has the rows given at construction.
    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![0; self.cols];
                x[f] = 1;
                // characteristic 2: -a = a
                for (row, &p) in self.basis.iter().zip(&self.pivots) {
                    x[p] = row[f];
                }
                x
            })
            .collect()
    }

    fn reduce(&self, v: &[Elem], mut coeffs: Option<&mut Vec<Elem>>) -> bool {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut r = v.to_vec();
        for (k, (row, &p)) in self.basis.iter().zip(&self.pivots).enumerate() {
            let c = r[p];
            if c != 0 {
                axpy(&self.field, &mut r[p..], c, &row[p..]);
                if let (Some(x), Some(combos)) = (coeffs.as_deref_mut(), &self.combos) {
                    axpy(&self.field, x, c, &combos[k]);
                }
            }
        }
        r.iter().all(|&e| e == 0)
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Elem]) -> bool {
        self.reduce(v, None)
    }

    /// Coefficients `x` with `x M = v`, if any.
    ///
    /// # Panics
    /// If the echelon form was built without combinations.
    pub fn solve(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        assert!(self.combos.is_some(), "echelon built without combinations");
        let mut x = vec![0; self.nrows];
        self.reduce(v, Some(&mut x)).then_some(x)
    }
}

fn scale(field: &Field, v: &mut [Elem], c: Elem) {
    for e in v {
        *e = field.mul(*e, c);
    }
}

// v += c * w
fn axpy(field: &Field, v: &mut [Elem], c: Elem, w: &[Elem]) {
    for (a, &b) in v.iter_mut().zip(w) {
        if b != 0 {
            *a ^= field.mul(c, b);
        }
    }
}
