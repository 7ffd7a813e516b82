//! Sparse matrices over GF(q), their Tanner graphs and exact linear algebra.

mod linalg;
mod tanner;

pub use linalg::Echelon;
pub use tanner::{
    check_graph_cycle_basis, cycle_decomposition, product_over_cycle, restricted_graph, CycleWalk,
    TannerGraph,
};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};

/// A sparse `rows x cols` matrix over GF(q).
///
/// Entries are kept twice, by row and by column, both sorted by index. Only
/// nonzero values are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseQMatrix {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    by_row: Vec<Vec<(usize, Elem)>>,
    by_col: Vec<Vec<(usize, Elem)>>,
}

impl SparseQMatrix {
    pub fn zeros(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        SparseQMatrix {
            field,
            rows,
            cols,
            by_row: vec![Vec::new(); rows],
            by_col: vec![Vec::new(); cols],
        }
    }

    /// Builds a matrix from `(row, col, value)` triples. Zero values are
    /// skipped; repeated positions are an error.
    pub fn from_entries<I>(field: Arc<Field>, rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Elem)>,
    {
        let mut by_row: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); rows];
        for (i, j, v) in entries {
            if i >= rows || j >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({i}, {j}) outside {rows}x{cols}"
                )));
            }
            if !field.contains(v) {
                return Err(Error::InvalidParameter(format!(
                    "value {v} is not an element of GF({})",
                    field.q()
                )));
            }
            if v != 0 {
                by_row[i].push((j, v));
            }
        }
        for (i, row) in by_row.iter_mut().enumerate() {
            row.sort_unstable_by_key(|e| e.0);
            if let Some(w) = row.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(Error::DuplicateEntry { row: i, col: w[0].0 });
            }
        }
        let by_col = transpose_lists(&by_row, cols);
        Ok(SparseQMatrix { field, rows, cols, by_row, by_col })
    }

    /// Builds a matrix from a dense row-major array.
    pub fn from_dense(field: Arc<Field>, dense: &[Vec<Elem>]) -> Result<Self> {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        if dense.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged dense matrix".into()));
        }
        let entries = dense
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, v)));
        Self::from_entries(field, rows, cols, entries)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.by_row.iter().map(Vec::len).sum()
    }

    /// Nonzero entries of row `i` as `(col, value)`, sorted by column.
    pub fn row(&self, i: usize) -> &[(usize, Elem)] {
        &self.by_row[i]
    }

    /// Nonzero entries of column `j` as `(row, value)`, sorted by row.
    pub fn col(&self, j: usize) -> &[(usize, Elem)] {
        &self.by_col[j]
    }

    pub fn row_degree(&self, i: usize) -> usize {
        self.by_row[i].len()
    }

    pub fn col_degree(&self, j: usize) -> usize {
        self.by_col[j].len()
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        let row = &self.by_row[i];
        row.binary_search_by_key(&j, |e| e.0).map_or(0, |k| row[k].1)
    }

    /// Sets entry `(i, j)`; a zero value removes it.
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        assert!(i < self.rows && j < self.cols, "({i}, {j}) out of bounds");
        assert!(self.field.contains(v));
        set_sorted(&mut self.by_row[i], j, v);
        set_sorted(&mut self.by_col[j], i, v);
    }

    /// All entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Elem)> + '_ {
        self.by_row
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
    }

    /// Same sparsity pattern with every value replaced by 1, over GF(2).
    pub fn support(&self) -> SparseQMatrix {
        let f2 = Arc::new(Field::new(1).expect("GF(2)"));
        SparseQMatrix::from_entries(f2, self.rows, self.cols, self.entries().map(|(i, j, _)| (i, j, 1)))
            .expect("support of a valid matrix")
    }

    /// Re-interprets a matrix with entries in {0, 1} over another field.
    pub fn embed(&self, field: Arc<Field>) -> SparseQMatrix {
        SparseQMatrix::from_entries(field, self.rows, self.cols, self.entries())
            .expect("embedding keeps entries valid")
    }

    /// Keeps the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> SparseQMatrix {
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(new, &old)| self.by_row[old].iter().map(move |&(j, v)| (new, j, v)));
        SparseQMatrix::from_entries(self.field.clone(), rows.len(), self.cols, entries)
            .expect("row selection")
    }

    /// Syndrome `M e^T`.
    pub fn apply(&self, e: &[Elem]) -> Result<Vec<Elem>> {
        if e.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                e.len(),
                self.cols
            )));
        }
        Ok(self
            .by_row
            .iter()
            .map(|r| r.iter().fold(0, |acc, &(j, v)| acc ^ self.field.mul(v, e[j])))
            .collect())
    }

    /// Row-vector product `x M`.
    pub fn left_apply(&self, x: &[Elem]) -> Result<Vec<Elem>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        Ok(self
            .by_col
            .iter()
            .map(|c| c.iter().fold(0, |acc, &(i, v)| acc ^ self.field.mul(v, x[i])))
            .collect())
    }

    /// First `(i, k)` with `<row i of self, row k of other> != 0`, i.e. the
    /// first nonzero entry of `self * other^T` in row-major order.
    pub fn first_nonorthogonal(&self, other: &SparseQMatrix) -> Result<Option<(usize, usize)>> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{} vs {} columns",
                self.cols, other.cols
            )));
        }
        if self.field != other.field {
            return Err(Error::DimensionMismatch("matrices over different fields".into()));
        }
        let mut acc = vec![0 as Elem; other.rows];
        let mut touched = Vec::new();
        for i in 0..self.rows {
            for &(j, a) in &self.by_row[i] {
                for &(k, b) in &other.by_col[j] {
                    touched.push(k);
                    acc[k] ^= self.field.mul(a, b);
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let bad = touched.iter().copied().find(|&k| acc[k] != 0);
            for &k in &touched {
                acc[k] = 0;
            }
            touched.clear();
            if let Some(k) = bad {
                return Ok(Some((i, k)));
            }
        }
        Ok(None)
    }

    /// `self * other^T == 0`, reporting the first violating row pair.
    pub fn check_orthogonal(&self, other: &SparseQMatrix) -> Result<()> {
        match self.first_nonorthogonal(other)? {
            None => Ok(()),
            Some((row_x, row_z)) => Err(Error::Orthogonality { row_x, row_z }),
        }
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<Vec<Elem>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    /// Reduced row echelon form of the row space.
    pub fn echelon(&self) -> Echelon {
        Echelon::new(self.field.clone(), self.to_dense())
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        self.echelon().kernel_basis()
    }

    pub fn in_rowspace(&self, v: &[Elem]) -> bool {
        self.echelon().contains(v)
    }
}

fn transpose_lists(by_row: &[Vec<(usize, Elem)>], cols: usize) -> Vec<Vec<(usize, Elem)>> {
    let mut by_col = vec![Vec::new(); cols];
    for (i, row) in by_row.iter().enumerate() {
        for &(j, v) in row {
            by_col[j].push((i, v));
        }
    }
    by_col
}

fn set_sorted(list: &mut Vec<(usize, Elem)>, key: usize, v: Elem) {
    match list.binary_search_by_key(&key, |e| e.0) {
        Ok(k) if v == 0 => {
            list.remove(k);
        }
        Ok(k) => list[k].1 = v,
        Err(_) if v == 0 => {}
        Err(k) => list.insert(k, (key, v)),
    }
}

/// Hamming weight of a q-ary vector.
pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|&&x| x != 0).count()
}

/// Plain bilinear form `sum_j a_j b_j`.
pub fn dot(field: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0, |acc, (&x, &y)| acc ^ field.mul(x, y))
}
