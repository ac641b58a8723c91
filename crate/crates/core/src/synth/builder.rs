use crate::circuit::{CliffordCircuit, Gate};

/// Accumulates gates over data wires and a pool of zeroed ancillas.
#[derive(Clone, Debug)]
pub struct Builder {
    n_data: usize,
    width: usize,
    free: Vec<usize>,
    gates: Vec<Gate>,
    clifford_only: bool,
}

impl Builder {
    pub fn new(n_data: usize) -> Self {
        Builder {
            n_data,
            width: n_data,
            free: Vec::new(),
            gates: Vec::new(),
            clifford_only: true,
        }
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn data(&self) -> Vec<usize> {
        (0..self.n_data).collect()
    }

    /// A wire in state zero.
    pub fn alloc(&mut self) -> usize {
        self.free.pop().unwrap_or_else(|| {
            self.width += 1;
            self.width - 1
        })
    }

    pub fn alloc_n(&mut self, k: usize) -> Vec<usize> {
        (0..k).map(|_| self.alloc()).collect()
    }

    /// Return a wire to the pool; the caller guarantees it is zero again.
    pub fn release(&mut self, w: usize) {
        debug_assert!(w >= self.n_data);
        self.free.push(w);
    }

    pub fn release_all(&mut self, ws: &[usize]) {
        for &w in ws.iter().rev() {
            self.release(w);
        }
    }

    pub fn push(&mut self, g: Gate) {
        if !g.kind.is_clifford() {
            self.clifford_only = false;
        }
        self.gates.push(g);
    }

    pub fn cnot(&mut self, control: usize, target: usize) {
        self.push(Gate::cnot(control, target));
    }

    pub fn mark(&self) -> usize {
        self.gates.len()
    }

    /// Append the inverse of the gates in `[from, to)`.
    pub fn undo_range(&mut self, from: usize, to: usize) {
        let inv: Vec<Gate> = self.gates[from..to]
            .iter()
            .rev()
            .flat_map(|g| g.inverse())
            .collect();
        self.gates.extend(inv);
    }

    /// Toffoli as `H(t) · CCZ(a, b, t) · H(t)` with CCZ built from CS, CZ and CNOT.
    pub fn toffoli(&mut self, a: usize, b: usize, t: usize) {
        self.push(Gate::h(t));
        self.push(Gate::cs(b, t));
        self.push(Gate::cnot(a, b));
        self.push(Gate::cz(b, t));
        self.push(Gate::cs(b, t));
        self.push(Gate::cnot(a, b));
        self.push(Gate::cs(a, t));
        self.push(Gate::h(t));
    }

    pub fn finish(self) -> CliffordCircuit {
        CliffordCircuit {
            n_data: self.n_data,
            n_ancilla: self.width - self.n_data,
            gates: self.gates,
            clifford_only: self.clifford_only,
            ancilla_restored: true,
        }
    }
}
