//! Arithmetic in GF(2^m) backed by log/antilog tables.
//!
//! Elements are stored as integer bitmasks: bit `i` of the value is the
//! coefficient of `x^i` in the polynomial residue modulo the field's primitive
//! polynomial. Addition is XOR, multiplication and inversion go through the
//! discrete-log tables.

use crate::error::{Error, Result};

/// A field element, interpreted as a coefficient bitmask.
pub type Elem = u16;

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 16;

/// Canonical primitive polynomial for each degree `m` (index `m - 1`):
/// the lowest-weight one, ties broken by the smallest integer value.
pub const PRIMITIVE_POLYS: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11d, 0x211, 0x409, 0x805, 0x1053, 0x201b,
    0x402b, 0x8003, 0x1002d,
];

/// GF(2^m) with precomputed tables.
#[derive(Clone)]
pub struct Field {
    m: u32,
    poly: u32,
    // exp[k] = alpha^k, stored twice over so log sums need no reduction
    exp: Vec<Elem>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.poly == other.poly
    }
}

impl Eq for Field {}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("poly", &format_args!("{:#x}", self.poly))
            .finish()
    }
}

impl Field {
    /// Builds GF(2^m) from the canonical polynomial for `m`.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree m = {m} outside 1..={MAX_DEGREE}"
            )));
        }
        Self::with_poly(m, PRIMITIVE_POLYS[m as usize - 1])
    }

    /// Builds GF(2^m) from an explicit polynomial, which must be primitive.
    pub fn with_poly(m: u32, poly: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "extension degree m = {m} outside 1..={MAX_DEGREE}"
            )));
        }
        if poly >> m != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} does not have degree {m}"
            )));
        }
        let q = 1usize << m;
        let order = q - 1;
        let mut exp = vec![0 as Elem; 2 * order];
        let mut log = vec![0u32; q];
        let mut seen = vec![false; q];
        // m = 1 uses x + 1, whose root is 1 itself
        let mut x: u32 = 1;
        for (k, slot) in exp.iter_mut().take(order).enumerate() {
            if x == 0 || seen[x as usize] {
                return Err(Error::InvalidParameter(format!(
                    "polynomial {poly:#x} is not primitive for m = {m}"
                )));
            }
            seen[x as usize] = true;
            *slot = x as Elem;
            log[x as usize] = k as u32;
            x = if m == 1 { 1 } else { mul_x(x, poly, m) };
        }
        if m > 1 && x != 1 {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} is not primitive for m = {m}"
            )));
        }
        for k in 0..order {
            exp[order + k] = exp[k];
        }
        Ok(Field { m, poly, exp, log })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Field size `q = 2^m`.
    pub fn q(&self) -> usize {
        1usize << self.m
    }

    #[inline]
    pub fn contains(&self, a: Elem) -> bool {
        (a as usize) < self.q()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        let order = self.q() as u32 - 1;
        self.exp[((order - self.log[a as usize]) % order) as usize]
    }

    /// `a / b` for nonzero `b`.
    #[inline]
    pub(crate) fn div_nonzero(&self, a: Elem, b: Elem) -> Elem {
        debug_assert!(b != 0);
        if a == 0 {
            return 0;
        }
        let order = self.q() as u32 - 1;
        self.exp[((self.log[a as usize] + order - self.log[b as usize]) % order) as usize]
    }

    /// `alpha^k` for the generator `alpha`.
    pub fn pow_alpha(&self, k: u64) -> Elem {
        let order = self.q() as u64 - 1;
        self.exp[(k % order) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: Elem) -> Option<u32> {
        (a != 0 && self.contains(a)).then(|| self.log[a as usize])
    }

    /// The generator `alpha` (the class of `x`).
    pub fn alpha(&self) -> Elem {
        self.pow_alpha(1)
    }

    /// Matrix of the GF(2)-linear map `v -> a * v` in the coefficient basis.
    /// Column `j` is the bit vector of `a * x^j`.
    pub fn companion(&self, a: Elem) -> BitBlock {
        let mut cols = Vec::with_capacity(self.m as usize);
        let mut basis: Elem = 1;
        for _ in 0..self.m {
            cols.push(self.mul(a, basis) as u32);
            basis = if self.m == 1 { 1 } else { mul_x(basis as u32, self.poly, self.m) as Elem };
        }
        BitBlock { m: self.m as usize, cols }
    }

    /// Bit vector of `a`; entry `i` is the coefficient of `x^i`.
    pub fn symbol_bits(&self, a: Elem) -> Vec<u8> {
        (0..self.m).map(|i| ((a >> i) & 1) as u8).collect()
    }

    /// Inverse of [`Field::symbol_bits`].
    pub fn bits_symbol(&self, bits: &[u8]) -> Result<Elem> {
        if bits.len() != self.m as usize {
            return Err(Error::DimensionMismatch(format!(
                "expected {} bits, got {}",
                self.m,
                bits.len()
            )));
        }
        let mut v: Elem = 0;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => v |= 1 << i,
                _ => {
                    return Err(Error::InvalidParameter(format!("bit value {b} is not 0 or 1")))
                }
            }
        }
        Ok(v)
    }

    /// Iterator over the nonzero elements in increasing value order.
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        (1..self.q()).map(|a| a as Elem)
    }
}

fn mul_x(a: u32, poly: u32, m: u32) -> u32 {
    let r = a << 1;
    if r >> m & 1 == 1 {
        r ^ poly
    } else {
        r
    }
}

/// A small dense `m x m` matrix over GF(2), stored by columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitBlock {
    m: usize,
    cols: Vec<u32>,
}

impl BitBlock {
    pub fn zero(m: usize) -> Self {
        BitBlock { m, cols: vec![0; m] }
    }

    pub fn identity(m: usize) -> Self {
        BitBlock { m, cols: (0..m).map(|j| 1u32 << j).collect() }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    pub fn get(&self, row: usize, col: usize) -> u8 {
        ((self.cols[col] >> row) & 1) as u8
    }

    /// Column `col` as a bitmask over rows.
    pub fn column(&self, col: usize) -> u32 {
        self.cols[col]
    }

    pub fn add(&self, other: &BitBlock) -> BitBlock {
        assert_eq!(self.m, other.m);
        BitBlock {
            m: self.m,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn mul(&self, other: &BitBlock) -> BitBlock {
        assert_eq!(self.m, other.m);
        let cols = other.cols.iter().map(|&c| self.apply(c)).collect();
        BitBlock { m: self.m, cols }
    }

    /// Matrix-vector product with a bitmask vector.
    pub fn apply(&self, v: u32) -> u32 {
        let mut out = 0;
        for (j, &c) in self.cols.iter().enumerate() {
            if v >> j & 1 == 1 {
                out ^= c;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Schoolbook polynomial product over GF(2) followed by reduction.
    fn poly_mul_mod(a: u32, b: u32, poly: u32, m: u32) -> u32 {
        let mut prod: u64 = 0;
        for i in 0..32 {
            if b >> i & 1 == 1 {
                prod ^= (a as u64) << i;
            }
        }
        for bit in (m as u64..64).rev() {
            if prod >> bit & 1 == 1 {
                prod ^= (poly as u64) << (bit - m as u64);
            }
        }
        prod as u32
    }

    fn is_primitive(poly: u32, m: u32) -> bool {
        if m == 1 {
            return poly == 0x3;
        }
        let order = (1u32 << m) - 1;
        let mut x = 1;
        for k in 1..=order {
            x = poly_mul_mod(x, 2, poly, m);
            if x == 1 {
                return k == order;
            }
        }
        false
    }

    #[test]
    fn canonical_polys_are_least_weight_primitive() {
        for m in 1..=16u32 {
            let poly = PRIMITIVE_POLYS[m as usize - 1];
            assert!(is_primitive(poly, m), "m={m}");
            if m > 12 {
                continue;
            }
            let w = poly.count_ones();
            for cand in (1u32 << m)..(1u32 << (m + 1)) {
                let lighter = cand.count_ones() < w;
                let earlier = cand.count_ones() == w && cand < poly;
                if lighter || earlier {
                    assert!(!is_primitive(cand, m), "m={m}: {cand:#x} precedes {poly:#x}");
                }
            }
        }
    }

    #[test]
    fn tables_round_trip() {
        for m in 1..=12 {
            let f = Field::new(m).unwrap();
            let mut hits = vec![false; f.q()];
            for k in 0..f.q() as u64 - 1 {
                let a = f.pow_alpha(k);
                assert!(!hits[a as usize]);
                hits[a as usize] = true;
                assert_eq!(f.log(a), Some(k as u32));
            }
            assert!(!hits[0]);
        }
    }

    #[test]
    fn non_primitive_rejected() {
        // x^4 + x^3 + x^2 + x + 1 has order 5
        assert!(Field::with_poly(4, 0x1f).is_err());
        assert!(Field::new(0).is_err());
        assert!(Field::new(17).is_err());
    }

    #[test]
    fn add_examples() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.add(f.alpha(), 1), 3);
        for m in 1..=4 {
            let f = Field::new(m).unwrap();
            for a in 0..f.q() as Elem {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.add(a, a), 0);
            }
        }
    }

    #[test]
    fn add_matches_polynomial_addition() {
        let f = Field::new(4).unwrap();
        for a in 0..16u32 {
            for b in 0..16u32 {
                let mut coeffs = 0u32;
                for i in 0..4 {
                    let c = ((a >> i) + (b >> i)) & 1;
                    coeffs |= c << i;
                }
                assert_eq!(f.add(a as Elem, b as Elem) as u32, coeffs);
            }
        }
    }

    #[test]
    fn mul_examples() {
        let f = Field::new(2).unwrap();
        let alpha = f.alpha();
        assert_eq!(alpha, 2);
        assert_eq!(f.mul(alpha, alpha), 3);
        for a in 0..4 {
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.mul(a, 0), 0);
        }
    }

    #[test]
    fn mul_matches_schoolbook_oracle() {
        for m in 1..=4u32 {
            let f = Field::new(m).unwrap();
            for a in 0..f.q() as u32 {
                for b in 0..f.q() as u32 {
                    assert_eq!(
                        f.mul(a as Elem, b as Elem) as u32,
                        poly_mul_mod(a, b, f.poly(), m),
                        "m={m} a={a} b={b}"
                    );
                }
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let f = Field::new(2).unwrap();
        assert_eq!(f.inv(1).unwrap(), 1);
        assert_eq!(f.inv(2).unwrap(), 3);
        assert!(matches!(f.inv(0), Err(Error::ZeroInverse)));
        for m in 1..=4 {
            let f = Field::new(m).unwrap();
            for a in f.nonzero() {
                // exhaustive search for the inverse
                let found = f.nonzero().find(|&b| f.mul(a, b) == 1).unwrap();
                assert_eq!(f.inv(a).unwrap(), found);
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for m in 1..=4 {
            let f = Field::new(m).unwrap();
            let q = f.q() as Elem;
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn field_axioms_sampled_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 5..=16u32 {
            let f = Field::new(m).unwrap();
            let q = f.q() as u32;
            for _ in 0..100_000 {
                let a = rng.gen_range(0..q) as Elem;
                let b = rng.gen_range(0..q) as Elem;
                let c = rng.gen_range(0..q) as Elem;
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
            }
            // spot-check against the schoolbook product
            for _ in 0..1000 {
                let a = rng.gen_range(0..q);
                let b = rng.gen_range(0..q);
                assert_eq!(f.mul(a as Elem, b as Elem) as u32, poly_mul_mod(a, b, f.poly(), m));
            }
        }
    }

    #[test]
    fn companion_examples() {
        for m in 1..=6 {
            let f = Field::new(m).unwrap();
            assert_eq!(f.companion(1), BitBlock::identity(m as usize));
            assert_eq!(f.companion(0), BitBlock::zero(m as usize));
        }
        let f = Field::new(2).unwrap();
        let a = f.companion(f.alpha());
        // rows [[0,1],[1,1]]
        assert_eq!((a.get(0, 0), a.get(0, 1)), (0, 1));
        assert_eq!((a.get(1, 0), a.get(1, 1)), (1, 1));
    }

    #[test]
    fn companion_is_injective_ring_homomorphism() {
        for m in 1..=4u32 {
            let f = Field::new(m).unwrap();
            let q = f.q() as Elem;
            let mut images = std::collections::HashSet::new();
            for a in 0..q {
                assert!(images.insert(f.companion(a)));
                for b in 0..q {
                    assert_eq!(f.companion(f.add(a, b)), f.companion(a).add(&f.companion(b)));
                    assert_eq!(f.companion(f.mul(a, b)), f.companion(a).mul(&f.companion(b)));
                }
            }
        }
    }

    #[test]
    fn symbol_bits_examples() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.symbol_bits(0), vec![0, 0, 0]);
        assert_eq!(f.bits_symbol(&[1, 0, 1]).unwrap(), 5);
        assert!(f.bits_symbol(&[1, 0]).is_err());
        assert!(f.bits_symbol(&[1, 0, 2]).is_err());
        for m in 1..=8 {
            let f = Field::new(m).unwrap();
            for a in 0..f.q() as Elem {
                assert_eq!(f.bits_symbol(&f.symbol_bits(a)).unwrap(), a);
            }
        }
    }

    #[test]
    fn scalar_product_expands_compatibly() {
        // <h, v> expanded equals sum_j A(h_j) * bits(v_j)
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in 1..=8u32 {
            let f = Field::new(m).unwrap();
            let q = f.q() as u32;
            for _ in 0..200 {
                let len = rng.gen_range(1..8);
                let h: Vec<Elem> = (0..len).map(|_| rng.gen_range(0..q) as Elem).collect();
                let v: Vec<Elem> = (0..len).map(|_| rng.gen_range(0..q) as Elem).collect();
                let dot = h.iter().zip(&v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                let bin = h
                    .iter()
                    .zip(&v)
                    .fold(0u32, |acc, (&a, &b)| acc ^ f.companion(a).apply(b as u32));
                assert_eq!(dot as u32, bin);
            }
        }
    }
}
