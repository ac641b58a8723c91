use super::builder::Builder;
use crate::bases::l_network;
use crate::bits::{BitMatrix, Bits};
use crate::circuit::{CliffordCircuit, Gate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinOp {
    XorInto { dst: usize, src: usize },
    Swap { a: usize, b: usize },
}

/// Reversible GF(2) operations on a file of `width` bits.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    pub width: usize,
    pub ops: Vec<LinOp>,
}

impl LinearProgram {
    pub fn new(width: usize) -> Self {
        LinearProgram {
            width,
            ops: Vec::new(),
        }
    }

    pub fn xor_into(&mut self, dst: usize, src: usize) {
        assert!(dst != src && dst < self.width && src < self.width);
        self.ops.push(LinOp::XorInto { dst, src });
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        assert!(a != b && a < self.width && b < self.width);
        self.ops.push(LinOp::Swap { a, b });
    }

    pub fn apply(&self, v: &Bits) -> Bits {
        let mut v = v.clone();
        for op in &self.ops {
            match *op {
                LinOp::XorInto { dst, src } => {
                    if v.get(src) {
                        v.flip(dst);
                    }
                }
                LinOp::Swap { a, b } => {
                    let (x, y) = (v.get(a), v.get(b));
                    v.set(a, y);
                    v.set(b, x);
                }
            }
        }
        v
    }

    pub fn inverse(&self) -> LinearProgram {
        LinearProgram {
            width: self.width,
            ops: self.ops.iter().rev().copied().collect(),
        }
    }

    /// The matrix of the program, by applying it to unit vectors.
    pub fn matrix(&self) -> BitMatrix {
        let cols: Vec<Bits> = (0..self.width)
            .map(|j| self.apply(&Bits::unit(self.width, j)))
            .collect();
        BitMatrix::from_columns(&cols)
    }

    pub fn emit(&self, b: &mut Builder, wires: &[usize]) {
        for op in &self.ops {
            match *op {
                LinOp::XorInto { dst, src } => b.cnot(wires[src], wires[dst]),
                LinOp::Swap { a, b: c } => b.push(Gate::swap(wires[a], wires[c])),
            }
        }
    }

    pub fn to_circuit(&self) -> CliffordCircuit {
        let mut b = Builder::new(self.width);
        let w = b.data();
        self.emit(&mut b, &w);
        b.finish()
    }
}

/// The in-place network for `L_k` (or its inverse, run backwards).
pub fn l_program(k: usize, inverse: bool) -> LinearProgram {
    let mut p = LinearProgram::new(k);
    for (t, c) in l_network(k) {
        p.xor_into(t, c);
    }
    if inverse {
        p.inverse()
    } else {
        p
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn synth_l_conversion(k: usize, direction: Direction) -> CliffordCircuit {
    l_program(k, direction == Direction::Inverse).to_circuit()
}

/// `targets[i] ^= (A · inputs)_i`, one CNOT per set entry, grouped by diagonal.
pub fn emit_matrix(b: &mut Builder, a: &BitMatrix, inputs: &[usize], targets: &[usize]) {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..a.rows() {
        for j in a.row(i).ones() {
            pairs.push((i, j));
        }
    }
    emit_pairs(b, pairs, inputs, targets);
}

/// CNOTs `inputs[j] -> targets[i]` for each `(i, j)`; they commute, so they are
/// emitted diagonal by diagonal to keep the layering shallow.
pub fn emit_pairs(b: &mut Builder, mut pairs: Vec<(usize, usize)>, inputs: &[usize], targets: &[usize]) {
    pairs.sort_by_key(|&(i, j)| (j as isize - i as isize, i));
    for (i, j) in pairs {
        b.cnot(inputs[j], targets[i]);
    }
}

/// Out-of-place network: inputs are wires `0..cols`, targets `cols..cols+rows`.
pub fn cnot_network(a: &BitMatrix) -> Result<CliffordCircuit> {
    if a.rows() == 0 && a.cols() == 0 {
        return Ok(CliffordCircuit::new(0));
    }
    let (r, c) = (a.rows(), a.cols());
    let mut b = Builder::new(c + r);
    let inputs: Vec<usize> = (0..c).collect();
    let targets: Vec<usize> = (c..c + r).collect();
    emit_matrix(&mut b, a, &inputs, &targets);
    Ok(b.finish())
}

/// In-place network for an invertible matrix by Gaussian elimination.
pub fn inplace_program(a: &BitMatrix) -> Result<LinearProgram> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension {
            expected: n,
            got: a.cols(),
        });
    }
    // reduce A to I with row operations; the program is their inverse
    let mut m = a.clone();
    let mut ops = Vec::new();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| m.get(r, col))
            .ok_or_else(|| Error::Domain("matrix is singular".into()))?;
        if piv != col {
            swap_rows(&mut m, piv, col);
            ops.push(LinOp::Swap { a: piv, b: col });
        }
        for r in 0..n {
            if r != col && m.get(r, col) {
                let row = m.row(col).clone();
                let mut rr = m.row(r).clone();
                rr.xor_assign(&row);
                set_row(&mut m, r, rr);
                ops.push(LinOp::XorInto { dst: r, src: col });
            }
        }
    }
    // E_k ... E_1 A = I, so A = E_1^{-1} ... E_k^{-1}; each E is an involution
    ops.reverse();
    Ok(LinearProgram { width: n, ops })
}

fn swap_rows(m: &mut BitMatrix, i: usize, j: usize) {
    let (ri, rj) = (m.row(i).clone(), m.row(j).clone());
    set_row(m, i, rj);
    set_row(m, j, ri);
}

fn set_row(m: &mut BitMatrix, i: usize, row: Bits) {
    for j in 0..m.cols() {
        m.set(i, j, row.get(j));
    }
}
