//! Exact unitary 2-designs from SL₂(GF(2^n)) acting on Pauli labels.

pub mod bases;
pub mod bits;
pub mod circuit;
pub mod conv;
pub mod error;
pub mod gf2n;
pub mod pauli;
pub mod rng;
pub mod sampler;
pub mod sl2;
pub mod synth;
pub mod verify;

pub use bits::{BitMatrix, Bits};
pub use error::{Error, Result};
pub use gf2n::{irreducible_poly, BitPoly, FieldCtx, FieldElement, MulStrategy};
