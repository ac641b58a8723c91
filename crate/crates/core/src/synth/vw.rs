//! Diagonal Cliffords `V_W |c⟩ = i^{cᵀWc} |c⟩` for symmetric `W`.

use super::builder::Builder;
use super::digits::{bits, with_product};
use crate::bases::hankel_generator;
use crate::bits::{BitMatrix, Bits};
use crate::circuit::{CliffordCircuit, Gate};
use crate::error::{Error, Result};
use crate::gf2n::MulStrategy;

fn check_square(w: &BitMatrix) -> Result<()> {
    if w.rows() != w.cols() {
        return Err(Error::Dimension {
            expected: w.rows(),
            got: w.cols(),
        });
    }
    Ok(())
}

fn generator_of(w: &BitMatrix) -> Result<Bits> {
    check_square(w)?;
    hankel_generator(w).ok_or_else(|| Error::Domain("W is not a Hankel matrix".into()))
}

pub(crate) fn emit_vw_generic(b: &mut Builder, w: &BitMatrix, data: &[usize]) {
    let n = data.len();
    for j in 0..n {
        if w.get(j, j) {
            b.push(Gate::s(data[j]));
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            if w.get(j, k) {
                b.push(Gate::cz(data[j], data[k]));
            }
        }
    }
}

/// `S` on each `j` with `W_jj = 1`, `CZ` on each `j < k` with `W_jk = 1`.
pub fn synth_vw_generic(w: &BitMatrix) -> Result<CliffordCircuit> {
    check_square(w)?;
    if !w.is_symmetric() {
        return Err(Error::Domain("W is not symmetric".into()));
    }
    let mut b = Builder::new(w.rows());
    let data = b.data();
    emit_vw_generic(&mut b, w, &data);
    Ok(b.finish())
}

/// `e = W c mod 4` via a Z_4 convolution, then `CZ(hi_j, c_j)` and `CS(lo_j, c_j)`.
pub(crate) fn emit_vw_mod4(b: &mut Builder, h: &Bits, data: &[usize], strategy: MulStrategy) {
    let n = data.len();
    if n == 0 || h.is_zero() {
        return;
    }
    let c: Vec<u8> = h.iter().map(|x| x as u8).collect();
    let rev: Vec<usize> = data.iter().rev().copied().collect();
    let len = 2 * n - 1;
    with_product(b, 4, strategy, &c, &bits(&rev), len, |b, p| {
        for j in 0..n {
            let e = p[j + n - 1];
            b.push(Gate::cz(e.hi.unwrap(), data[j]));
            b.push(Gate::cs(e.lo.unwrap(), data[j]));
        }
    });
}

pub fn synth_vw_mod4(w: &BitMatrix, strategy: MulStrategy) -> Result<CliffordCircuit> {
    let h = generator_of(w)?;
    let mut b = Builder::new(w.rows());
    let data = b.data();
    emit_vw_mod4(&mut b, &h, &data, strategy);
    let mut c = b.finish();
    c.clifford_only = false;
    Ok(c)
}

/// Split `c = (c1, c2)`: the cross term `2 c2ᵀ W21 c1` is a mod-2 convolution
/// followed by CZs, and the diagonal blocks recurse.
pub(crate) fn emit_vw_recursive(b: &mut Builder, h: &Bits, data: &[usize], strategy: MulStrategy) {
    let n = data.len();
    match n {
        0 => return,
        1 => {
            if h.get(0) {
                b.push(Gate::s(data[0]));
            }
            return;
        }
        _ => {}
    }
    let n1 = n / 2;
    let n2 = n - n1;
    // W21[k'][j] = h[n1 + k' + j]
    let g: Vec<u8> = (0..n - 1).map(|s| h.get(s + n1) as u8).collect();
    if g.iter().any(|&x| x != 0) {
        let rev: Vec<usize> = data[..n1].iter().rev().copied().collect();
        let len = n - 1;
        with_product(b, 2, strategy, &g, &bits(&rev), len, |b, p| {
            for k in 0..n2 {
                b.push(Gate::cz(p[k + n1 - 1].lo.unwrap(), data[n1 + k]));
            }
        });
    }
    emit_vw_recursive(b, &h.slice(0, 2 * n1 - 1), &data[..n1], strategy);
    emit_vw_recursive(b, &h.slice(2 * n1, 2 * n2 - 1), &data[n1..], strategy);
}

pub fn synth_vw_recursive(w: &BitMatrix, strategy: MulStrategy) -> Result<CliffordCircuit> {
    let h = generator_of(w)?;
    let mut b = Builder::new(w.rows());
    let data = b.data();
    emit_vw_recursive(&mut b, &h, &data, strategy);
    Ok(b.finish())
}
