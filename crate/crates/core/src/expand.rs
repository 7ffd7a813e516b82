//! Binary images of q-ary matrices and vectors.
//!
//! A symbol `a` becomes its `m` coefficient bits (bit `t` is the coefficient
//! of `x^t`), and a matrix entry `a` becomes the `m x m` block `A(a)` of the
//! map `v -> a * v` in the same basis. With this convention
//! `expand(M) * expand(v) = expand(M * v)`.
//!
//! The binary pair uses `A(x)` blocks for `H_X` and `A(z)^T` blocks for
//! `H_Z`, so that block products give `sum A(x) A(z) = A(sum x z) = 0`.
//! Since `A(z)^T` is multiplication by `z` in the trace-dual basis, vectors
//! checked by the binary `H_Z` are read in that basis ([`DualBasis`]).

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{Elem, Field};
use crate::lift::CssPairQ;
use crate::qmatrix::SparseQMatrix;

/// Replaces every entry of `h` by its `m x m` binary block.
pub fn expand_matrix(h: &SparseQMatrix) -> SparseQMatrix {
    let field = h.field();
    let m = field.m() as usize;
    let f2 = Arc::new(Field::new(1).expect("GF(2)"));
    let mut entries = Vec::with_capacity(h.nnz() * m * m);
    for (i, j, a) in h.entries() {
        let block = field.companion(a);
        for c in 0..m {
            let col = block.column(c);
            for r in 0..m {
                if col >> r & 1 == 1 {
                    entries.push((i * m + r, j * m + c, 1));
                }
            }
        }
    }
    SparseQMatrix::from_entries(f2, h.rows() * m, h.cols() * m, entries).expect("block entries are distinct")
}

/// Replaces every entry `a` of `h` by the transposed block `A(a)^T`.
pub fn expand_matrix_transposed(h: &SparseQMatrix) -> SparseQMatrix {
    let field = h.field();
    let m = field.m() as usize;
    let f2 = Arc::new(Field::new(1).expect("GF(2)"));
    let mut entries = Vec::with_capacity(h.nnz() * m * m);
    for (i, j, a) in h.entries() {
        let block = field.companion(a);
        for c in 0..m {
            let col = block.column(c);
            for r in 0..m {
                if col >> r & 1 == 1 {
                    entries.push((i * m + c, j * m + r, 1));
                }
            }
        }
    }
    SparseQMatrix::from_entries(f2, h.rows() * m, h.cols() * m, entries).expect("block entries are distinct")
}

/// Coordinates in the basis dual to `1, x, ..., x^(m-1)` under the trace
/// form: bit `i` of the image of `a` is `Tr(x^i a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasis {
    m: u32,
    to_bits: Vec<Elem>,
    from_bits: Vec<Elem>,
}

impl DualBasis {
    pub fn new(field: &Field) -> Self {
        let m = field.m();
        let trace = |a: Elem| {
            let mut t = 0;
            let mut p = a;
            for _ in 0..m {
                t ^= p;
                p = field.mul(p, p);
            }
            debug_assert!(t <= 1);
            t
        };
        // x^i is the bitmask 1 << i
        let trace_mask: Elem = (0..m).fold(0, |acc, i| acc | trace(1 << i) << i);
        let q = field.q();
        let mut to_bits = vec![0; q];
        let mut from_bits = vec![0; q];
        for a in 0..q as Elem {
            let mut mask = 0;
            for i in 0..m {
                mask |= (((field.mul(1 << i, a) & trace_mask).count_ones() & 1) as Elem) << i;
            }
            to_bits[a as usize] = mask;
            from_bits[mask as usize] = a;
        }
        DualBasis { m, to_bits, from_bits }
    }

    /// Dual coordinates of `a` as a bitmask.
    pub fn coords(&self, a: Elem) -> Elem {
        self.to_bits[a as usize]
    }

    /// Symbol with the given dual coordinates.
    pub fn symbol(&self, mask: Elem) -> Elem {
        self.from_bits[mask as usize]
    }

    pub fn expand_vec(&self, v: &[Elem]) -> Vec<u8> {
        v.iter()
            .flat_map(|&a| {
                let c = self.coords(a);
                (0..self.m).map(move |i| (c >> i & 1) as u8)
            })
            .collect()
    }

    pub fn contract_vec(&self, bits: &[u8]) -> Result<Vec<Elem>> {
        let m = self.m as usize;
        if bits.len() % m != 0 {
            return Err(Error::DimensionMismatch(format!(
                "{} bits do not split into symbols of {m} bits",
                bits.len()
            )));
        }
        bits.chunks(m)
            .map(|c| {
                let mut mask: Elem = 0;
                for (i, &b) in c.iter().enumerate() {
                    match b {
                        0 => {}
                        1 => mask |= 1 << i,
                        _ => return Err(Error::InvalidParameter(format!("bit value {b} is not 0 or 1"))),
                    }
                }
                Ok(self.symbol(mask))
            })
            .collect()
    }
}

/// Bits of every symbol of `v`, concatenated.
pub fn expand_vec(field: &Field, v: &[Elem]) -> Vec<u8> {
    v.iter().flat_map(|&a| field.symbol_bits(a)).collect()
}

/// Groups `bits` into symbols of `m` bits each.
pub fn contract_vec(field: &Field, bits: &[u8]) -> Result<Vec<Elem>> {
    let m = field.m() as usize;
    if bits.len() % m != 0 {
        return Err(Error::DimensionMismatch(format!(
            "{} bits do not split into symbols of {m} bits",
            bits.len()
        )));
    }
    bits.chunks(m).map(|c| field.bits_symbol(c)).collect()
}

/// Binary CSS pair of length `m * n` obtained from a q-ary pair.
#[derive(Clone, Debug)]
pub struct BinaryExpandedPair {
    /// Blocks `A(x)`.
    pub hxb: SparseQMatrix,
    /// Blocks `A(z)^T`.
    pub hzb: SparseQMatrix,
}

impl BinaryExpandedPair {
    pub fn from_pair(pair: &CssPairQ) -> Self {
        BinaryExpandedPair { hxb: expand_matrix(pair.hxq()), hzb: expand_matrix_transposed(pair.hzq()) }
    }

    pub fn check_orthogonal(&self) -> Result<()> {
        self.hxb.check_orthogonal(&self.hzb)
    }
}
