//! Phase-tracking symplectic tableau, stored column-major so each gate
//! updates all generator rows with word operations.

use crate::bits::Bits;
use crate::circuit::{CliffordCircuit, Gate, GateKind};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

/// Images of `X_0..X_{n-1}, Z_0..Z_{n-1}` under conjugation by the gates
/// applied so far, over `width` wires. Optionally also tracks `Z_j` for every
/// ancilla `j`, which certifies that ancillas are restored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticTableau {
    n: usize,
    width: usize,
    tracked: bool,
    x: Vec<Bits>,
    z: Vec<Bits>,
    lo: Bits,
    hi: Bits,
}

impl SymplecticTableau {
    pub fn identity(n: usize, width: usize) -> Self {
        Self::build(n, width, false)
    }

    /// Identity tableau that also tracks the ancilla `Z` generators.
    pub fn tracking_ancillas(n: usize, width: usize) -> Self {
        Self::build(n, width, true)
    }

    fn build(n: usize, width: usize, tracked: bool) -> Self {
        assert!(width >= n);
        let rows = if tracked { n + width } else { 2 * n };
        let mut x = vec![Bits::zeros(rows); width];
        let mut z = vec![Bits::zeros(rows); width];
        for i in 0..n {
            x[i].set(i, true);
            z[i].set(n + i, true);
        }
        if tracked {
            for j in n..width {
                z[j].set(n + j, true);
            }
        }
        SymplecticTableau {
            n,
            width,
            tracked,
            x,
            z,
            lo: Bits::zeros(rows),
            hi: Bits::zeros(rows),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    fn add_phase(&mut self, k: u8, mask: &Bits) {
        if k & 1 == 1 {
            let carry = self.lo.and(mask);
            self.lo.xor_assign(mask);
            self.hi.xor_assign(&carry);
        }
        if k & 2 == 2 {
            self.hi.xor_assign(mask);
        }
    }

    /// `G · row · G†` for every row. Rejects non-Clifford gates.
    pub fn conjugate(&mut self, g: &Gate) -> Result<()> {
        use GateKind::*;
        let (a, b) = (g.a as usize, g.b as usize);
        match g.kind {
            H => {
                let m = self.x[a].and(&self.z[a]);
                self.add_phase(2, &m);
                std::mem::swap(&mut self.x[a], &mut self.z[a]);
            }
            S | Sdg => {
                let xa = self.x[a].clone();
                self.add_phase(if g.kind == S { 1 } else { 3 }, &xa);
                self.z[a].xor_assign(&xa);
            }
            X => {
                let m = self.z[a].clone();
                self.add_phase(2, &m);
            }
            Z => {
                let m = self.x[a].clone();
                self.add_phase(2, &m);
            }
            Y => {
                let m = self.x[a].xor(&self.z[a]);
                self.add_phase(2, &m);
            }
            Cnot => {
                let xa = self.x[a].clone();
                self.x[b].xor_assign(&xa);
                let zb = self.z[b].clone();
                self.z[a].xor_assign(&zb);
            }
            Cz => {
                let m = self.x[a].and(&self.x[b]);
                self.add_phase(2, &m);
                let xb = self.x[b].clone();
                self.z[a].xor_assign(&xb);
                let xa = self.x[a].clone();
                self.z[b].xor_assign(&xa);
            }
            Swap => {
                self.x.swap(a, b);
                self.z.swap(a, b);
            }
            Cs => {
                return Err(Error::NonClifford(format!(
                    "CS {a} {b} has no tableau update"
                )))
            }
        }
        Ok(())
    }

    pub fn run(circuit: &CliffordCircuit) -> Result<Self> {
        let mut t = SymplecticTableau::identity(circuit.n_data, circuit.width());
        for g in &circuit.gates {
            t.conjugate(g)?;
        }
        Ok(t)
    }

    pub fn run_tracking(circuit: &CliffordCircuit) -> Result<Self> {
        let mut t = SymplecticTableau::tracking_ancillas(circuit.n_data, circuit.width());
        for g in &circuit.gates {
            t.conjugate(g)?;
        }
        Ok(t)
    }

    /// With ancilla tracking: the first ancilla whose `Z_j` image is not a
    /// `+`-signed product of ancilla `Z`s. All ancillas return to `|0⟩` for
    /// every data input exactly when there is none.
    pub fn unrestored_ancilla(&self) -> Option<usize> {
        assert!(self.tracked, "ancilla generators are not tracked");
        (self.n..self.width).find(|&j| {
            let p = self.row(self.n + j);
            p.phase_exp != 0 || !p.a.is_zero() || p.b.ones().any(|w| w < self.n)
        })
    }

    /// Image of generator `row` over all wires (`row < n`: `X_row`, else `Z_{row-n}`).
    pub fn row(&self, row: usize) -> PauliOperator {
        let mut a = Bits::zeros(self.width);
        let mut b = Bits::zeros(self.width);
        for w in 0..self.width {
            a.set(w, self.x[w].get(row));
            b.set(w, self.z[w].get(row));
        }
        let k = self.lo.get(row) as u8 | (self.hi.get(row) as u8) << 1;
        PauliOperator::new(a, b, k)
    }

    /// Image restricted to the data wires. With ancillas starting and ending
    /// in `|0⟩`, an image with `X` support on an ancilla is a structural failure;
    /// `Z` support there acts as the identity.
    pub fn data_row(&self, row: usize) -> Result<PauliOperator> {
        let p = self.row(row);
        if let Some(w) = p.a.ones().find(|&w| w >= self.n) {
            return Err(Error::AncillaNotRestored { wire: w });
        }
        Ok(PauliOperator::new(p.a.resized(self.n), p.b.resized(self.n), p.phase_exp))
    }

    /// Image of an arbitrary data Pauli `i^k X^a Z^b`.
    pub fn apply(&self, p: &PauliOperator) -> Result<PauliOperator> {
        let n = self.n;
        let mut out = PauliOperator::new(Bits::zeros(n), Bits::zeros(n), p.phase_exp);
        for i in p.a.ones() {
            out = out.mul(&self.data_row(i)?);
        }
        for i in p.b.ones() {
            out = out.mul(&self.data_row(n + i)?);
        }
        Ok(out)
    }

    /// Pairwise symplectic products of the tracked images match the identity's.
    pub fn preserves_commutation(&self) -> bool {
        let count = self.lo.len();
        let rows: Vec<PauliOperator> = (0..count).map(|r| self.row(r)).collect();
        for i in 0..count {
            for j in i + 1..count {
                let expect = i < self.n && j == i + self.n;
                if rows[i].symplectic(&rows[j]) != expect {
                    return false;
                }
            }
        }
        true
    }
}
