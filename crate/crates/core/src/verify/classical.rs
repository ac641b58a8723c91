//! Bit-sliced simulation of circuits that permute computational-basis labels
//! up to a phase `i^k`.
//!
//! `H` is accepted only in windows `H(t) … H(t)` where every gate touching
//! `t` is diagonal, and the two branches differ by a phase in `{1, -1}`.
//! Such a window acts as a phased classical map (the Toffoli pattern is one).

use crate::bits::Bits;
use crate::circuit::{CliffordCircuit, GateKind};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisImage {
    pub output: Bits,
    /// Exponent `k` of the phase `i^k`.
    pub phase: u8,
}

#[derive(Clone, Copy, Default)]
struct Phase {
    lo: u64,
    hi: u64,
}

impl Phase {
    fn add(&mut self, k: u8, mask: u64) {
        if k & 1 == 1 {
            let carry = self.lo & mask;
            self.lo ^= mask;
            self.hi ^= carry;
        }
        if k & 2 == 2 {
            self.hi ^= mask;
        }
    }
}

struct Window {
    t: usize,
    // extra phase on the t = 1 branch
    one: Phase,
}

struct Lanes {
    wires: Vec<u64>,
    phase: Phase,
    all: u64,
    window: Option<Window>,
}

impl Lanes {
    fn diag(&mut self, k: u8, a: usize, b: Option<usize>) -> Result<()> {
        let (on_t, other) = match &self.window {
            Some(w) if a == w.t => (true, b),
            Some(w) if b == Some(w.t) => (true, Some(a)),
            _ => (false, None),
        };
        if on_t {
            let mask = other.map_or(self.all, |o| self.wires[o]);
            self.window.as_mut().unwrap().one.add(k, mask);
        } else {
            let mask = self.wires[a] & b.map_or(self.all, |b| self.wires[b]);
            self.phase.add(k, mask);
        }
        Ok(())
    }

    fn touches_window(&self, ws: &[usize]) -> bool {
        matches!(&self.window, Some(w) if ws.contains(&w.t))
    }

    fn step(&mut self, kind: GateKind, a: usize, b: usize) -> Result<()> {
        use GateKind::*;
        let nondiag = |k: GateKind| Error::Domain(format!("{} acts on an open H window", k.name()));
        match kind {
            S => self.diag(1, a, None)?,
            Sdg => self.diag(3, a, None)?,
            Z => self.diag(2, a, None)?,
            Cz => self.diag(2, a, Some(b))?,
            Cs => self.diag(1, a, Some(b))?,
            X | Y | Cnot | Swap if self.touches_window(&[a, b][..kind.arity()]) => {
                return Err(nondiag(kind))
            }
            X => self.wires[a] ^= self.all,
            Y => {
                // Y|x⟩ = i(-1)^x |x ⊕ 1⟩
                let x = self.wires[a];
                self.phase.add(1, self.all);
                self.phase.add(2, x);
                self.wires[a] ^= self.all;
            }
            Cnot => self.wires[b] ^= self.wires[a],
            Swap => self.wires.swap(a, b),
            H => match self.window.take() {
                None => {
                    self.window = Some(Window {
                        t: a,
                        one: Phase::default(),
                    })
                }
                Some(w) if w.t == a => {
                    // amplitude ∝ i^{φ0}(1 + (-1)^{t+t''} i^{φ1-φ0})
                    let d = w.one;
                    if d.lo & self.all != 0 {
                        return Err(Error::NonClifford(format!(
                            "H window on wire {a} does not close to a basis permutation"
                        )));
                    }
                    // t'' = t ⊕ [d = 2] with phase i^{φ0}
                    self.wires[a] ^= d.hi;
                }
                Some(w) => {
                    return Err(Error::Domain(format!(
                        "H on wire {a} inside the H window of wire {}",
                        w.t
                    )))
                }
            },
        }
        Ok(())
    }
}

/// Images of computational-basis inputs on the data wires, ancillas zero.
/// Fails if an ancilla is not returned to zero.
pub fn basis_action(circuit: &CliffordCircuit, inputs: &[Bits]) -> Result<Vec<BasisImage>> {
    let n = circuit.n_data;
    let width = circuit.width();
    let mut out = Vec::with_capacity(inputs.len());
    for chunk in inputs.chunks(64) {
        let mut lanes = Lanes {
            wires: vec![0; width],
            phase: Phase::default(),
            all: if chunk.len() == 64 { !0 } else { (1u64 << chunk.len()) - 1 },
            window: None,
        };
        for (l, x) in chunk.iter().enumerate() {
            if x.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: x.len(),
                });
            }
            for i in x.ones() {
                lanes.wires[i] |= 1 << l;
            }
        }
        for g in &circuit.gates {
            lanes.step(g.kind, g.a as usize, g.b as usize)?;
        }
        if let Some(w) = &lanes.window {
            return Err(Error::Domain(format!("unclosed H window on wire {}", w.t)));
        }
        for w in n..width {
            if lanes.wires[w] != 0 {
                return Err(Error::AncillaNotRestored { wire: w });
            }
        }
        for l in 0..chunk.len() {
            let mut o = Bits::zeros(n);
            for i in 0..n {
                if lanes.wires[i] >> l & 1 == 1 {
                    o.set(i, true);
                }
            }
            let phase = ((lanes.phase.lo >> l & 1) | (lanes.phase.hi >> l & 1) << 1) as u8;
            out.push(BasisImage { output: o, phase });
        }
    }
    Ok(out)
}
