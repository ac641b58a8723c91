//! Exact state-vector simulation over `Z[i, 1/√2]`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use crate::bits::Bits;
use crate::circuit::{CliffordCircuit, Gate, GateKind};
use crate::error::{Error, Result};

/// `(a + b√2) / 2^k` with Gaussian integers `a`, `b`, kept in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Amplitude {
    a: (i64, i64),
    b: (i64, i64),
    k: u32,
}

impl Amplitude {
    pub const ZERO: Amplitude = Amplitude { a: (0, 0), b: (0, 0), k: 0 };
    pub const ONE: Amplitude = Amplitude { a: (1, 0), b: (0, 0), k: 0 };

    pub fn new(a: (i64, i64), b: (i64, i64), k: u32) -> Self {
        Amplitude { a, b, k }.reduced()
    }

    /// `i^e`.
    pub fn i_pow(e: u8) -> Self {
        Amplitude::ONE.times_i(e)
    }

    /// `1/√2`.
    pub fn inv_sqrt2() -> Self {
        Amplitude::new((0, 0), (1, 0), 1)
    }

    fn reduced(mut self) -> Self {
        if self.a == (0, 0) && self.b == (0, 0) {
            return Amplitude::ZERO;
        }
        while self.k > 0 && [self.a.0, self.a.1, self.b.0, self.b.1].iter().all(|x| x % 2 == 0) {
            self.a = (self.a.0 / 2, self.a.1 / 2);
            self.b = (self.b.0 / 2, self.b.1 / 2);
            self.k -= 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        *self == Amplitude::ZERO
    }

    pub fn times_i(self, e: u8) -> Self {
        let rot = |(x, y): (i64, i64)| match e % 4 {
            0 => (x, y),
            1 => (-y, x),
            2 => (-x, -y),
            _ => (y, -x),
        };
        Amplitude { a: rot(self.a), b: rot(self.b), k: self.k }
    }

    /// `(a + b√2)/√2 = (2b + a√2)/2`.
    pub fn div_sqrt2(self) -> Self {
        Amplitude::new((2 * self.b.0, 2 * self.b.1), self.a, self.k + 1)
    }

    pub fn conj(self) -> Self {
        Amplitude { a: (self.a.0, -self.a.1), b: (self.b.0, -self.b.1), k: self.k }
    }

    fn scaled(self, k: u32) -> ((i64, i64), (i64, i64)) {
        let s = 1i64 << (k - self.k);
        ((self.a.0 * s, self.a.1 * s), (self.b.0 * s, self.b.1 * s))
    }

    pub fn to_complex(self) -> (f64, f64) {
        let d = (self.k as f64).exp2();
        let r2 = std::f64::consts::SQRT_2;
        ((self.a.0 as f64 + r2 * self.b.0 as f64) / d, (self.a.1 as f64 + r2 * self.b.1 as f64) / d)
    }
}

impl Add for Amplitude {
    type Output = Amplitude;
    fn add(self, o: Amplitude) -> Amplitude {
        let k = self.k.max(o.k);
        let (a1, b1) = self.scaled(k);
        let (a2, b2) = o.scaled(k);
        Amplitude::new((a1.0 + a2.0, a1.1 + a2.1), (b1.0 + b2.0, b1.1 + b2.1), k)
    }
}

impl Neg for Amplitude {
    type Output = Amplitude;
    fn neg(self) -> Amplitude {
        self.times_i(2)
    }
}

impl Mul for Amplitude {
    type Output = Amplitude;
    fn mul(self, o: Amplitude) -> Amplitude {
        let cm = |(x, y): (i64, i64), (u, v): (i64, i64)| (x * u - y * v, x * v + y * u);
        let add = |p: (i64, i64), q: (i64, i64)| (p.0 + q.0, p.1 + q.1);
        // (a1 + b1√2)(a2 + b2√2) = a1a2 + 2 b1b2 + (a1b2 + b1a2)√2
        let bb = cm(self.b, o.b);
        let a = add(cm(self.a, o.a), (2 * bb.0, 2 * bb.1));
        let b = add(cm(self.a, o.b), cm(self.b, o.a));
        Amplitude::new(a, b, self.k + o.k)
    }
}

impl fmt::Debug for Amplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(({}{:+}i) + ({}{:+}i)√2)/2^{}",
            self.a.0, self.a.1, self.b.0, self.b.1, self.k
        )
    }
}

/// Sparse state over all wires of a circuit.
pub type SparseState = HashMap<Bits, Amplitude>;

fn apply_gate(state: SparseState, g: &Gate) -> SparseState {
    use GateKind::*;
    let (a, b) = (g.a as usize, g.b as usize);
    let mut out: SparseState = HashMap::with_capacity(state.len() * if g.kind == H { 2 } else { 1 });
    let mut put = |key: Bits, amp: Amplitude| {
        let e = out.entry(key).or_insert(Amplitude::ZERO);
        *e = *e + amp;
    };
    for (mut key, amp) in state {
        match g.kind {
            H => {
                let x = key.get(a);
                let h = amp.div_sqrt2();
                let mut other = key.clone();
                other.flip(a);
                if x {
                    put(other, h);
                    put(key, -h);
                } else {
                    put(other, h);
                    put(key, h);
                }
                continue;
            }
            X => key.flip(a),
            Y => {
                let x = key.get(a);
                key.flip(a);
                put(key, amp.times_i(if x { 3 } else { 1 }));
                continue;
            }
            Z | S | Sdg => {
                let e = match g.kind {
                    Z => 2,
                    S => 1,
                    _ => 3,
                };
                let amp = if key.get(a) { amp.times_i(e) } else { amp };
                put(key, amp);
                continue;
            }
            Cnot => {
                if key.get(a) {
                    key.flip(b)
                }
            }
            Swap => {
                let (x, y) = (key.get(a), key.get(b));
                key.set(a, y);
                key.set(b, x);
            }
            Cz | Cs => {
                let e = if g.kind == Cz { 2 } else { 1 };
                let amp = if key.get(a) && key.get(b) { amp.times_i(e) } else { amp };
                put(key, amp);
                continue;
            }
        }
        put(key, amp);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Runs the circuit on one data basis label with zeroed ancillas. Returns the
/// data-register state; fails if any branch leaves an ancilla set.
pub fn sparse_simulate(circuit: &CliffordCircuit, input: &Bits) -> Result<Vec<(Bits, Amplitude)>> {
    let n = circuit.n_data;
    if input.len() != n {
        return Err(Error::Dimension { expected: n, got: input.len() });
    }
    let mut state: SparseState = HashMap::new();
    state.insert(input.resized(circuit.width()), Amplitude::ONE);
    for g in &circuit.gates {
        state = apply_gate(state, g);
    }
    let mut out = Vec::with_capacity(state.len());
    for (key, amp) in state {
        if let Some(w) = key.ones().find(|&w| w >= n) {
            return Err(Error::AncillaNotRestored { wire: w });
        }
        out.push((key.resized(n), amp));
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

/// Data-register unitary, column `j` = image of basis label `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseUnitary {
    pub dim: usize,
    /// Row-major entries.
    pub entries: Vec<Amplitude>,
}

impl DenseUnitary {
    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn to_complex(&self) -> Vec<(f64, f64)> {
        self.entries.iter().map(|a| a.to_complex()).collect()
    }
}

pub const DENSE_MAX_DATA: usize = 3;

pub fn dense_simulate(circuit: &CliffordCircuit) -> Result<DenseUnitary> {
    let n = circuit.n_data;
    if n > DENSE_MAX_DATA {
        return Err(Error::TooLarge { what: "dense simulation", n, limit: DENSE_MAX_DATA });
    }
    let dim = 1usize << n;
    let mut entries = vec![Amplitude::ZERO; dim * dim];
    for col in 0..dim {
        for (key, amp) in sparse_simulate(circuit, &Bits::from_u64(n, col as u64))? {
            entries[key.to_u64() as usize * dim + col] = amp;
        }
    }
    Ok(DenseUnitary { dim, entries })
}
