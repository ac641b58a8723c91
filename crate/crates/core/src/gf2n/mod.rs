//! Exact arithmetic in GF(2^n) over a polynomial basis.

mod field;
mod poly;

pub use field::{irreducible_poly, FieldCtx, FieldElement};
pub use poly::{BitPoly, MulStrategy, FFT_THRESHOLD, KARATSUBA_THRESHOLD};
