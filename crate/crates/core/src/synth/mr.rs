//! Multiplication by a fixed nonzero field element, `|a⟩ ↦ |ra⟩`.

use super::builder::Builder;
use super::digits::{bits, with_product};
use super::linear::{emit_pairs, l_program};
use crate::bases::{l_inverse_apply, BasisKind, BasisSpec};
use crate::bits::Bits;
use crate::circuit::{CliffordCircuit, Gate};
use crate::error::{Error, Result};
use crate::gf2n::{BitPoly, FieldElement, MulStrategy};

/// `t ^= r a` in polynomial coordinates.
fn poly_mul_out(
    b: &mut Builder,
    basis: &BasisSpec,
    r: &FieldElement,
    a: &[usize],
    t: &[usize],
    strategy: MulStrategy,
) {
    let n = basis.n();
    let f = basis.ctx().modulus();
    let c: Vec<u8> = (0..n).map(|i| r.poly().coeff(i) as u8).collect();
    let len = 2 * n - 1;
    // t_k += [x^i mod f]_k p_i
    let mut pairs = Vec::new();
    for i in 0..len {
        let red = BitPoly::monomial(i).rem(f);
        for k in red.support() {
            pairs.push((k, i));
        }
    }
    with_product(b, 2, strategy, &c, &bits(a), len, |b, p| {
        let pw: Vec<usize> = p.iter().map(|d| d.lo.unwrap()).collect();
        emit_pairs(b, pairs, &pw, t);
    });
}

/// `t ^= r a` in Gauss-period coordinates. `a` and `t` are in normal order.
fn selfdual_mul_out(
    b: &mut Builder,
    basis: &BasisSpec,
    r: &FieldElement,
    a: &[usize],
    t: &[usize],
    strategy: MulStrategy,
) {
    let n = basis.n();
    let order = basis.s_order().expect("Gauss-period basis");
    const NONE: usize = usize::MAX;
    // [1, s_1, ..., s_n] coordinates; index 0 is the constant, always zero
    let mut a_s = vec![NONE];
    a_s.extend(order.iter().map(|&j| a[j]));
    let t_s: Vec<usize> = order.iter().map(|&j| t[j]).collect();

    let to_poly = l_program(n + 1, true);
    let m0 = b.mark();
    to_poly.emit(b, &a_s);
    let m1 = b.mark();

    let coords = basis.coords(r);
    let mut r_s = Bits::zeros(n + 1);
    for (i, &j) in order.iter().enumerate() {
        r_s.set(i + 1, coords.get(j));
    }
    let r_t = l_inverse_apply(&r_s);
    debug_assert!(!r_t.get(0));
    let c: Vec<u8> = (1..=n).map(|i| r_t.get(i) as u8).collect();
    let len = 2 * n - 1;

    let to_spread = l_program(2 * n + 1, false);
    with_product(b, 2, strategy, &c, &bits(&a_s[1..]), len, |b, p| {
        // full product index m + 2 holds p_m; indices 0 and 1 start at zero
        let z1 = b.alloc();
        let mut full = vec![NONE, z1];
        full.extend(p.iter().map(|d| d.lo.unwrap()));
        let k0 = b.mark();
        to_spread.emit(b, &full);
        let k1 = b.mark();
        // s_{2n+1-i} = s_i
        let mut pairs = Vec::new();
        for i in 1..=n {
            pairs.push((i - 1, i));
            pairs.push((i - 1, 2 * n + 1 - i));
        }
        emit_pairs(b, pairs, &full, &t_s);
        b.undo_range(k0, k1);
        b.release(z1);
    });
    b.undo_range(m0, m1);
}

fn mul_out(
    b: &mut Builder,
    basis: &BasisSpec,
    r: &FieldElement,
    a: &[usize],
    t: &[usize],
    strategy: MulStrategy,
) -> Result<()> {
    match basis.kind() {
        BasisKind::Polynomial => poly_mul_out(b, basis, r, a, t, strategy),
        BasisKind::SelfdualGauss => selfdual_mul_out(b, basis, r, a, t, strategy),
        BasisKind::DualOfPolynomial => {
            return Err(Error::Domain(
                "multiplier circuits are built for polynomial and Gauss-period bases".into(),
            ))
        }
    }
    Ok(())
}

/// In place: `t ^= r a; a ^= r^{-1} t; swap(a, t)`.
pub(crate) fn emit_mr(
    b: &mut Builder,
    basis: &BasisSpec,
    r: &FieldElement,
    data: &[usize],
    strategy: MulStrategy,
) -> Result<()> {
    if r.is_zero() {
        return Err(Error::Domain("multiplier must be nonzero".into()));
    }
    if r.is_one() {
        return Ok(());
    }
    let t = b.alloc_n(data.len());
    mul_out(b, basis, r, data, &t, strategy)?;
    mul_out(b, basis, &r.inv()?, &t, data, strategy)?;
    for (&d, &w) in data.iter().zip(&t) {
        b.push(Gate::swap(d, w));
    }
    b.release_all(&t);
    Ok(())
}

/// Circuit for `|a⟩ ↦ |ra⟩` in the coordinates of `basis`.
pub fn synth_mr(basis: &BasisSpec, r: &FieldElement, strategy: MulStrategy) -> Result<CliffordCircuit> {
    let mut b = Builder::new(basis.n());
    let data = b.data();
    emit_mr(&mut b, basis, r, &data, strategy)?;
    Ok(b.finish())
}
