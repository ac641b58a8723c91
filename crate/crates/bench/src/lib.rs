//! Shared inputs for the criterion benches.

use std::sync::Arc;

use sl2design::{BitPoly, FieldCtx, FieldElement};

/// A dense, deterministic field element derived from `seed`.
pub fn element(ctx: &Arc<FieldCtx>, seed: u64) -> FieldElement {
    let mut x = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let support = (0..ctx.n()).filter(|_| {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x & 1 == 1
    });
    FieldElement::from_poly(ctx, &BitPoly::from_coeffs(support))
}
