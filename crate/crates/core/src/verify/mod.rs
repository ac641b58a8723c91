//! Exact verification: tableau simulation, induced-action checks, exact and
//! classical simulators, and small-`n` ensemble checks.

mod classical;
mod exact;
mod induce;
mod sample;
mod tableau;
mod twirl;

pub use classical::{basis_action, BasisImage};
pub use exact::{dense_simulate, sparse_simulate, Amplitude, DenseUnitary, SparseState, DENSE_MAX_DATA};
pub use induce::{check_induces, check_induces_with, Convention, InduceReport};
pub use sample::{block_inputs, check_sample, check_segments, SampleReport, BLOCK_EXHAUSTIVE_MAX_N};
pub use tableau::SymplecticTableau;
pub use twirl::{
    bilateral_twirl_check, clifford_group_1q, frame_potential, pauli_action, pauli_mixing_check,
    twirl_table, MixingReport, PauliAction, TwirlReport, TwirlTable, Weight, ENSEMBLE_MAX_N,
};

use crate::bits::{BitMatrix, Bits};
use crate::circuit::CliffordCircuit;
use crate::error::Result;

/// `cᵀ W c mod 4` for symmetric `W`.
pub fn quadratic_form_mod4(w: &BitMatrix, c: &Bits) -> u8 {
    let mut diag = 0usize;
    let mut off = 0usize;
    for j in c.ones() {
        if w.get(j, j) {
            diag += 1;
        }
        for k in c.ones().filter(|&k| k > j) {
            if w.get(j, k) {
                off += 1;
            }
        }
    }
    ((diag + 2 * off) % 4) as u8
}

/// Checks that `circuit` maps each `|c⟩` in `inputs` to `i^{cᵀWc} |c⟩` with
/// ancillas restored. Returns the first failing input.
pub fn check_diagonal_phases(circuit: &CliffordCircuit, w: &BitMatrix, inputs: &[Bits]) -> Result<Option<Bits>> {
    let images = basis_action(circuit, inputs)?;
    for (c, img) in inputs.iter().zip(images) {
        if img.output != *c || img.phase != quadratic_form_mod4(w, c) {
            return Ok(Some(c.clone()));
        }
    }
    Ok(None)
}
