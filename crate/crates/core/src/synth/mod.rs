//! Gate-level generators: linear networks, constant multipliers, `V_W` and
//! transversal layers.

mod builder;
mod digits;
mod linear;
mod mr;
mod vw;

pub use builder::Builder;
pub use linear::{
    cnot_network, emit_matrix, inplace_program, l_program, synth_l_conversion, Direction, LinOp,
    LinearProgram,
};
pub use mr::synth_mr;
pub use vw::{synth_vw_generic, synth_vw_mod4, synth_vw_recursive};

pub(crate) use mr::emit_mr;
pub(crate) use vw::{emit_vw_generic, emit_vw_mod4, emit_vw_recursive};

use crate::circuit::{CliffordCircuit, Gate};
use crate::pauli::PauliOperator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transversal {
    HAll,
    SAll,
}

pub(crate) fn emit_transversal(b: &mut Builder, kind: Transversal, data: &[usize]) {
    for &w in data {
        b.push(match kind {
            Transversal::HAll => Gate::h(w),
            Transversal::SAll => Gate::s(w),
        });
    }
}

pub fn synth_transversal(kind: Transversal, n: usize) -> CliffordCircuit {
    let mut b = Builder::new(n);
    let data = b.data();
    emit_transversal(&mut b, kind, &data);
    b.finish()
}

/// `X`, `Z` or `Y` on each wire where the Pauli has support.
pub(crate) fn emit_pauli(b: &mut Builder, p: &PauliOperator, data: &[usize]) {
    for (i, &w) in data.iter().enumerate() {
        match (p.a.get(i), p.b.get(i)) {
            (true, true) => b.push(Gate::y(w)),
            (true, false) => b.push(Gate::x(w)),
            (false, true) => b.push(Gate::z(w)),
            (false, false) => {}
        }
    }
}

pub fn synth_pauli(p: &PauliOperator) -> CliffordCircuit {
    let mut b = Builder::new(p.n());
    let data = b.data();
    emit_pauli(&mut b, p, &data);
    b.finish()
}
