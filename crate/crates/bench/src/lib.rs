//! Fixtures shared by the benchmarks.

use extoric::{ExtendedToricCode, Result};

/// The three length-1152 configurations `(n, m)`.
pub const LENGTH_1152: [(usize, u32); 3] = [(24, 1), (12, 4), (8, 9)];

/// Extended toric code with a fixed seed.
pub fn code(n: usize, m: u32) -> Result<ExtendedToricCode> {
    ExtendedToricCode::build(n, m, 1)
}
