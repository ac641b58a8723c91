//! Bases of GF(2^n) over GF(2): the polynomial basis and its dual, Gauss-period
//! self-dual normal bases, the trace form `W`, and the `L_k` conversion matrices.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::{BitMatrix, Bits};
use crate::error::{Error, Result};
use crate::gf2n::{BitPoly, FieldCtx, FieldElement, MulStrategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Polynomial,
    DualOfPolynomial,
    SelfdualGauss,
}

/// A basis `ω_1..ω_n` of GF(2^n), expressed in the context's polynomial basis.
#[derive(Clone, Debug)]
pub struct BasisSpec {
    kind: BasisKind,
    ctx: Arc<FieldCtx>,
    elements: Vec<FieldElement>,
    w: BitMatrix,
    generator: Option<FieldElement>,
    /// Polynomial coordinates to basis coordinates.
    to_basis: BitMatrix,
    /// For Gauss-period bases: `s_order[i - 1] = j` where `ω_j = β^i + β^{-i}`.
    s_order: Option<Vec<usize>>,
}

impl BasisSpec {
    fn from_elements(
        kind: BasisKind,
        ctx: &Arc<FieldCtx>,
        elements: Vec<FieldElement>,
        generator: Option<FieldElement>,
    ) -> Result<Self> {
        let w = trace_form(&elements);
        Self::with_w(kind, ctx, elements, generator, w)
    }

    fn with_w(
        kind: BasisKind,
        ctx: &Arc<FieldCtx>,
        elements: Vec<FieldElement>,
        generator: Option<FieldElement>,
        w: BitMatrix,
    ) -> Result<Self> {
        let cols: Vec<Bits> = elements.iter().map(|e| e.to_bits()).collect();
        let from_basis = BitMatrix::from_columns(&cols);
        let to_basis = from_basis
            .inverse()
            .ok_or_else(|| Error::Internal("basis elements are linearly dependent".into()))?;
        Ok(BasisSpec {
            kind,
            ctx: ctx.clone(),
            elements,
            w,
            generator,
            to_basis,
            s_order: None,
        })
    }

    /// `1, x, ..., x^{n-1}`.
    pub fn polynomial(ctx: &Arc<FieldCtx>) -> Self {
        let n = ctx.n();
        let x = FieldElement::generator(ctx);
        let elements: Vec<_> = (0..n).map(|i| FieldElement::from_poly(ctx, &BitPoly::monomial(i))).collect();
        // W_jk = T(x^{j+k})
        let w = hankel_from_generator(ctx.trace_powers(), n);
        Self::with_w(BasisKind::Polynomial, ctx, elements, Some(x), w).expect("polynomial basis is a basis")
    }

    /// The trace-dual of the polynomial basis.
    pub fn dual_of_polynomial(ctx: &Arc<FieldCtx>) -> Self {
        let poly = Self::polynomial(ctx);
        let winv = poly.w.inverse().expect("trace form is nondegenerate");
        // ω̂_k = sum_j (W^{-1})_{jk} ω_j
        let elements = (0..ctx.n())
            .map(|k| {
                let mut acc = FieldElement::zero(ctx);
                for j in 0..ctx.n() {
                    if winv.get(j, k) {
                        acc = acc.add(&poly.elements[j]).unwrap();
                    }
                }
                acc
            })
            .collect();
        Self::from_elements(BasisKind::DualOfPolynomial, ctx, elements, None)
            .expect("dual basis is a basis")
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    pub fn elements(&self) -> &[FieldElement] {
        &self.elements
    }

    /// `W_jk = T(ω_j ω_k)`.
    pub fn w(&self) -> &BitMatrix {
        &self.w
    }

    pub fn generator(&self) -> Option<&FieldElement> {
        self.generator.as_ref()
    }

    pub fn s_order(&self) -> Option<&[usize]> {
        self.s_order.as_deref()
    }

    /// Coordinates of `a` in this basis.
    pub fn coords(&self, a: &FieldElement) -> Bits {
        self.to_basis.mul_vec(&a.to_bits())
    }

    /// Dual coordinates `â_i = T(a ω_i)`, equal to `W · coords(a)`.
    pub fn dual_coords(&self, a: &FieldElement) -> Bits {
        self.w.mul_vec(&self.coords(a))
    }

    /// The element with the given coordinates.
    pub fn element(&self, coords: &Bits) -> FieldElement {
        let mut acc = FieldElement::zero(&self.ctx);
        for i in coords.ones() {
            acc = acc.add(&self.elements[i]).unwrap();
        }
        acc
    }

    /// The element whose dual coordinates are `dual`.
    pub fn element_from_dual(&self, dual: &Bits) -> FieldElement {
        let winv = self.w.inverse().expect("trace form is nondegenerate");
        self.element(&winv.mul_vec(dual))
    }

    /// Matrix of `a ↦ r a` on coordinates in this basis.
    pub fn mul_matrix(&self, r: &FieldElement) -> BitMatrix {
        let cols: Vec<Bits> = self
            .elements
            .iter()
            .map(|e| self.coords(&r.mul(e).unwrap()))
            .collect();
        BitMatrix::from_columns(&cols)
    }
}

fn trace_form(elements: &[FieldElement]) -> BitMatrix {
    let n = elements.len();
    let mut w = BitMatrix::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let t = elements[j].mul(&elements[k]).unwrap().trace();
            w.set(j, k, t);
            w.set(k, j, t);
        }
    }
    w
}

/// Recompute `W` from the basis elements.
pub fn compute_w(basis: &BasisSpec) -> BitMatrix {
    trace_form(&basis.elements)
}

pub fn is_hankel(w: &BitMatrix) -> bool {
    hankel_generator(w).is_some()
}

/// The Hankel generator `h_s = W_{jk}` for `j + k = s`, or `None` if `w` is not Hankel.
pub fn hankel_generator(w: &BitMatrix) -> Option<Bits> {
    let n = w.rows();
    if w.cols() != n {
        return None;
    }
    let mut h = Bits::zeros((2 * n).saturating_sub(1));
    for s in 0..h.len() {
        let j0 = s.saturating_sub(n - 1);
        h.set(s, w.get(j0, s - j0));
    }
    for j in 0..n {
        for k in 0..n {
            if w.get(j, k) != h.get(j + k) {
                return None;
            }
        }
    }
    Some(h)
}

pub fn hankel_from_generator(h: &Bits, n: usize) -> BitMatrix {
    BitMatrix::from_fn(n, n, |j, k| h.get(j + k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub n: usize,
    pub prime_ok: bool,
    /// Index of the subgroup generated by 2 in `Z*_{2n+1}`; 0 when `2n+1` is composite.
    pub e: usize,
    pub gcd_ok: bool,
    pub admissible: bool,
}

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn order_of_two(p: usize) -> usize {
    let mut x = 2 % p;
    let mut k = 1;
    while x != 1 {
        x = x * 2 % p;
        k += 1;
    }
    k
}

pub fn check_admissible(n: usize) -> AdmissibilityReport {
    let p = 2 * n + 1;
    let prime_ok = n >= 1 && is_prime(p);
    let e = if prime_ok { 2 * n / order_of_two(p) } else { 0 };
    let gcd_ok = prime_ok && gcd(e, n) == 1;
    AdmissibilityReport {
        n,
        prime_ok,
        e,
        gcd_ok,
        admissible: prime_ok && gcd_ok,
    }
}

/// GF(2^{2n}) as `GF(2^n)[z] / (z^2 + z + c)`, elements `u + v z`.
struct QuadExt {
    c: FieldElement,
}

type Quad = (FieldElement, FieldElement);

impl QuadExt {
    fn mul(&self, x: &Quad, y: &Quad) -> Quad {
        let uu = x.0.mul(&y.0).unwrap();
        let vv = x.1.mul(&y.1).unwrap();
        let uv = x.0.mul(&y.1).unwrap().add(&x.1.mul(&y.0).unwrap()).unwrap();
        (
            uu.add(&self.c.mul(&vv).unwrap()).unwrap(),
            uv.add(&vv).unwrap(),
        )
    }

    fn pow(&self, x: &Quad, e: &BigUint) -> Quad {
        let ctx = x.0.ctx();
        let mut acc = (FieldElement::one(ctx), FieldElement::zero(ctx));
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    fn is_one(x: &Quad) -> bool {
        x.0.is_one() && x.1.is_zero()
    }
}

/// The Gauss-period normal basis `α^{2^0}, ..., α^{2^{n-1}}`, `α = β + β^{-1}`,
/// for admissible `n`. Fails unless the resulting trace form is the identity.
pub fn build_selfdual_basis(n: usize, strategy: MulStrategy) -> Result<BasisSpec> {
    let report = check_admissible(n);
    if !report.admissible {
        return Err(Error::NotAdmissible { n });
    }
    let ctx = FieldCtx::new(n, strategy)?;
    let p = 2 * n + 1;

    // z^2 + z + c is irreducible over GF(2^n) exactly when T(c) = 1.
    let c = (1u64..)
        .map(|v| FieldElement::from_u64(&ctx, v))
        .find(|c| c.trace())
        .expect("trace is onto");
    let ext = QuadExt { c };
    let exp = ((BigUint::one() << (2 * n)) - BigUint::one()) / BigUint::from(p);

    // β = g^exp has order dividing p; any β ≠ 1 has order exactly p. Base-field
    // g always give β = 1, so candidates are z + v.
    let limit = 1u64 << n.min(40);
    let mut beta = None;
    for v in 0..limit {
        let g = (FieldElement::from_u64(&ctx, v), FieldElement::one(&ctx));
        let b = ext.pow(&g, &exp);
        if !QuadExt::is_one(&b) {
            beta = Some(b);
            break;
        }
    }
    let beta = beta.ok_or_else(|| Error::Internal(format!("no order-{p} element found")))?;
    let beta_inv = ext.pow(&beta, &BigUint::from(p - 1));
    let alpha_q = (
        beta.0.add(&beta_inv.0).unwrap(),
        beta.1.add(&beta_inv.1).unwrap(),
    );
    if !alpha_q.1.is_zero() {
        return Err(Error::Internal("Gauss period is not in the base field".into()));
    }
    let alpha = alpha_q.0;
    debug_assert_eq!(alpha.frobenius(n), alpha);

    let elements: Vec<_> = (0..n).map(|j| alpha.frobenius(j)).collect();
    let mut basis =
        BasisSpec::from_elements(BasisKind::SelfdualGauss, &ctx, elements, Some(alpha))?;
    if !basis.w.is_identity() {
        return Err(Error::Internal(format!(
            "Gauss-period basis for n = {n} is not self-dual"
        )));
    }

    // ω_j = β^{2^j} + β^{-2^j} = s_i with i = ±2^j mod p
    let mut s_order = vec![usize::MAX; n];
    let mut pw = 1usize;
    for j in 0..n {
        let i = if pw <= n { pw } else { p - pw };
        s_order[i - 1] = j;
        pw = pw * 2 % p;
    }
    if s_order.contains(&usize::MAX) {
        return Err(Error::Internal("Gauss-period permutation is not a bijection".into()));
    }
    basis.s_order = Some(s_order);
    Ok(basis)
}

/// Parity of `C(j, i)` by Lucas' theorem.
pub fn binom_mod2(j: usize, i: usize) -> bool {
    i <= j && (i & !j) == 0
}

/// `(L_k)_{ij} = C(j, (j-i)/2) mod 2` for `i <= j`, `j - i` even; zero otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LMatrix {
    pub k: usize,
    pub entries: BitMatrix,
}

pub fn l_matrix(k: usize) -> LMatrix {
    let entries = BitMatrix::from_fn(k, k, |i, j| {
        i <= j && (j - i) % 2 == 0 && binom_mod2(j, (j - i) / 2)
    });
    LMatrix { k, entries }
}

/// The recursive in-place network for `L_k` as `(target, control)` XOR steps.
pub fn l_network(k: usize) -> Vec<(usize, usize)> {
    if k <= 1 {
        return Vec::new();
    }
    let t = k.next_power_of_two();
    let mut steps = Vec::new();
    l_network_pow2(0, t, &mut steps);
    steps.retain(|&(a, b)| a < k && b < k);
    steps
}

fn l_network_pow2(offset: usize, k: usize, out: &mut Vec<(usize, usize)>) {
    if k <= 2 {
        // L_2 = I
        return;
    }
    let h = k / 2;
    l_network_pow2(offset, h, out);
    l_network_pow2(offset + h, h, out);
    // first-half row r (1-indexed, r >= 2) picks up second-half entry h + 2 - r
    for r in 2..=h {
        out.push((offset + r - 1, offset + h + (h + 2 - r) - 1));
    }
}

pub fn l_apply(v: &Bits) -> Bits {
    let mut v = v.clone();
    for (t, c) in l_network(v.len()) {
        if v.get(c) {
            v.flip(t);
        }
    }
    v
}

/// `L_k^{-1} v`, by running the `L_k` network backwards.
pub fn l_inverse_apply(v: &Bits) -> Bits {
    let mut v = v.clone();
    for (t, c) in l_network(v.len()).into_iter().rev() {
        if v.get(c) {
            v.flip(t);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &BitMatrix) -> Vec<Vec<u8>> {
        (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j) as u8).collect())
            .collect()
    }

    #[test]
    fn admissibility_table() {
        let adm: Vec<usize> = (1..=12).filter(|&n| check_admissible(n).admissible).collect();
        assert_eq!(adm, vec![1, 2, 3, 5, 6, 9, 11]);
        let r2 = check_admissible(2);
        assert!(r2.prime_ok && r2.e == 1);
        assert!(!check_admissible(4).prime_ok);
        assert_eq!(check_admissible(5).e, 1);
        let r8 = check_admissible(8);
        assert!(r8.prime_ok && r8.e == 2 && !r8.admissible);
    }

    #[test]
    fn gf4_polynomial_trace_form() {
        let ctx = FieldCtx::new(2, MulStrategy::Schoolbook).unwrap();
        let b = BasisSpec::polynomial(&ctx);
        assert_eq!(rows(b.w()), vec![vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn polynomial_w_matches_trace_products() {
        for n in [1, 2, 3, 7, 8, 13, 31, 64, 70] {
            let ctx = FieldCtx::new(n, MulStrategy::Karatsuba).unwrap();
            let b = BasisSpec::polynomial(&ctx);
            assert_eq!(&compute_w(&b), b.w(), "n = {n}");
            let x = FieldElement::generator(&ctx);
            for (i, e) in b.elements().iter().enumerate() {
                assert_eq!(*e, x.pow(i as u64));
            }
        }
    }

    #[test]
    fn small_selfdual_bases() {
        for n in [1, 2, 3] {
            let b = build_selfdual_basis(n, MulStrategy::Schoolbook).unwrap();
            for j in 0..n {
                for k in 0..n {
                    let t = b.elements()[j].mul(&b.elements()[k]).unwrap().trace();
                    assert_eq!(t, j == k);
                }
            }
        }
        assert!(matches!(
            build_selfdual_basis(4, MulStrategy::Schoolbook),
            Err(Error::NotAdmissible { n: 4 })
        ));
    }

    #[test]
    fn l8_matches_displayed_matrix() {
        let expected = [
            "10000000", "01010001", "00100010", "00010101", "00001000", "00000101", "00000010",
            "00000001",
        ];
        let m = l_matrix(8).entries;
        for (i, row) in expected.iter().enumerate() {
            for (j, ch) in row.chars().enumerate() {
                assert_eq!(m.get(i, j), ch == '1', "entry ({i},{j})");
            }
        }
        assert_eq!(
            rows(&l_matrix(4).entries),
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]
        );
        assert_eq!(rows(&l_matrix(1).entries), vec![vec![1]]);
    }

    #[test]
    fn lucas_matches_pascal() {
        let mut row = vec![1u64];
        for j in 0..40 {
            for (i, &c) in row.iter().enumerate() {
                assert_eq!(binom_mod2(j, i), c % 2 == 1);
            }
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = (row[i - 1] + row[i]) % 2;
            }
            row = next;
        }
    }
}
