//! Does a circuit induce a given SL₂ element on Pauli labels?

use crate::bases::BasisSpec;
use crate::bits::{BitMatrix, Bits};
use crate::circuit::CliffordCircuit;
use crate::error::{Error, Result};
use crate::sl2::Sl2Element;

use super::tableau::SymplecticTableau;

/// How a Pauli `X^x Z^z` is read as a pair of field elements `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `x = a`, `z = W b` (primal coordinates, dual-coordinate `Z` part).
    Primal,
    /// `x = W a`, `z = b`.
    Dual,
    /// `x = a`, `z = b`.
    Raw,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Primal => "primal",
            Convention::Dual => "dual",
            Convention::Raw => "raw",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Convention::Primal, Convention::Dual, Convention::Raw]
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown convention '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InduceReport {
    pub ok: bool,
    /// First failing generator, if any.
    pub counterexample: Option<String>,
    /// Phase exponents of the `2n` generator images; informational.
    pub phases: Vec<u8>,
}

pub(crate) struct Decoder {
    conv: Convention,
    w_inv: Option<BitMatrix>,
}

impl Decoder {
    pub(crate) fn new(basis: &BasisSpec, conv: Convention) -> Result<Self> {
        let w_inv = match conv {
            Convention::Raw => None,
            _ => Some(
                basis
                    .w()
                    .inverse()
                    .ok_or_else(|| Error::Internal("W is singular".into()))?,
            ),
        };
        Ok(Decoder { conv, w_inv })
    }

    pub(crate) fn decode(&self, x: &Bits, z: &Bits) -> (Bits, Bits) {
        match (self.conv, &self.w_inv) {
            (Convention::Primal, Some(wi)) => (x.clone(), wi.mul_vec(z)),
            (Convention::Dual, Some(wi)) => (wi.mul_vec(x), z.clone()),
            _ => (x.clone(), z.clone()),
        }
    }
}

fn generator_name(n: usize, row: usize) -> String {
    if row < n {
        format!("X_{row}")
    } else {
        format!("Z_{}", row - n)
    }
}

/// Checks `U X^x Z^z U† ∝ X^{x'} Z^{z'}` with `(a', b') = M (a, b)` on all
/// `2n` generators, reading labels with `conv`. Phases are not constrained.
pub fn check_induces_with(
    circuit: &CliffordCircuit,
    m: &Sl2Element,
    basis: &BasisSpec,
    conv: Convention,
) -> Result<InduceReport> {
    let n = basis.n();
    if circuit.n_data != n {
        return Err(Error::Dimension { expected: n, got: circuit.n_data });
    }
    if !(std::sync::Arc::ptr_eq(m.ctx(), basis.ctx()) || **m.ctx() == **basis.ctx()) {
        return Err(Error::CtxMismatch { left: m.ctx().n(), right: basis.n() });
    }
    let tab = SymplecticTableau::run_tracking(circuit)?;
    let dec = Decoder::new(basis, conv)?;
    let mut phases = Vec::with_capacity(2 * n);
    for row in 0..2 * n {
        let (x, z) = if row < n {
            (Bits::unit(n, row), Bits::zeros(n))
        } else {
            (Bits::zeros(n), Bits::unit(n, row - n))
        };
        let (a, b) = dec.decode(&x, &z);
        let (ea, eb) = m.act_on_pair(&basis.element(&a), &basis.element(&b))?;
        let (ea, eb) = (basis.coords(&ea), basis.coords(&eb));
        let img = match tab.data_row(row) {
            Ok(p) => p,
            Err(Error::AncillaNotRestored { wire }) => {
                return Ok(InduceReport {
                    ok: false,
                    counterexample: Some(format!(
                        "{} maps onto ancilla wire {wire}",
                        generator_name(n, row)
                    )),
                    phases,
                })
            }
            Err(e) => return Err(e),
        };
        phases.push(img.phase_exp);
        let (ga, gb) = dec.decode(&img.a, &img.b);
        if ga != ea || gb != eb {
            return Ok(InduceReport {
                ok: false,
                counterexample: Some(format!(
                    "{}: image (a, b) = ({:?}, {:?}), expected ({:?}, {:?}) [{}]",
                    generator_name(n, row),
                    ga,
                    gb,
                    ea,
                    eb,
                    conv.name()
                )),
                phases,
            });
        }
    }
    if let Some(w) = tab.unrestored_ancilla() {
        return Ok(InduceReport {
            ok: false,
            counterexample: Some(format!("ancilla wire {w} is not restored")),
            phases,
        });
    }
    Ok(InduceReport { ok: true, counterexample: None, phases })
}

/// [`check_induces_with`] in the primal convention.
pub fn check_induces(circuit: &CliffordCircuit, m: &Sl2Element, basis: &BasisSpec) -> Result<InduceReport> {
    check_induces_with(circuit, m, basis, Convention::Primal)
}
