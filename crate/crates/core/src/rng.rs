//! Deterministic random bit source with consumption accounting.

use num_bigint::BigUint;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Bits drawn from ChaCha8 seeded with a 64-bit value. Bits are taken from
/// 64-bit words least significant first; leftover bits of a word are used
/// before the next word is drawn.
pub struct BitSource {
    rng: ChaCha8Rng,
    buf: u64,
    buf_len: u32,
    consumed: u64,
    budget: Option<u64>,
}

impl BitSource {
    pub fn new(seed: u64) -> Self {
        BitSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
            buf: 0,
            buf_len: 0,
            consumed: 0,
            budget: None,
        }
    }

    /// A source that fails once more than `budget` bits are requested.
    pub fn with_budget(seed: u64, budget: u64) -> Self {
        BitSource {
            budget: Some(budget),
            ..Self::new(seed)
        }
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn bit(&mut self) -> Result<bool> {
        if let Some(b) = self.budget {
            if self.consumed >= b {
                return Err(Error::EntropyExhausted {
                    consumed: self.consumed,
                });
            }
        }
        if self.buf_len == 0 {
            self.buf = self.rng.next_u64();
            self.buf_len = 64;
        }
        let b = self.buf & 1 == 1;
        self.buf >>= 1;
        self.buf_len -= 1;
        self.consumed += 1;
        Ok(b)
    }

    /// `k` bits as an integer, first bit least significant.
    pub fn bits(&mut self, k: usize) -> Result<BigUint> {
        let mut words = vec![0u64; k.div_ceil(64)];
        for i in 0..k {
            if self.bit()? {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        let digits: Vec<u32> = words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect();
        Ok(BigUint::from_slice(&digits))
    }
}
