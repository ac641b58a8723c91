use std::fmt;
use std::sync::Arc;

use super::poly::{BitPoly, MulStrategy};
use crate::bits::Bits;
use crate::error::{Error, Result};

/// Lexicographically smallest irreducible polynomial of degree `n`, reading a
/// polynomial as the integer whose bit `i` is the coefficient of `x^i`.
pub fn irreducible_poly(n: usize) -> BitPoly {
    assert!(n >= 1, "degree must be positive");
    if n == 1 {
        return BitPoly::monomial(1);
    }
    // Even-weight polynomials and those with zero constant term are divisible
    // by x+1 or x, so only odd candidates with odd weight are tested.
    let lead = BitPoly::monomial(n);
    let mut low: u64 = 1;
    loop {
        let cand = lead.add(&BitPoly::from_u64(low));
        if cand.weight() % 2 == 1 && cand.is_irreducible() {
            return cand;
        }
        low += 2;
    }
}

/// The field GF(2^n) with a fixed modulus and multiplication strategy.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldCtx {
    n: usize,
    modulus: BitPoly,
    strategy: MulStrategy,
    /// `T(x^s)` for `s` in `[0, 2n-1)`.
    trace_powers: Bits,
}

impl FieldCtx {
    pub fn new(n: usize, strategy: MulStrategy) -> Result<Arc<FieldCtx>> {
        if n == 0 {
            return Err(Error::Domain("extension degree must be positive".into()));
        }
        Self::with_modulus(irreducible_poly(n), strategy)
    }

    pub fn with_modulus(modulus: BitPoly, strategy: MulStrategy) -> Result<Arc<FieldCtx>> {
        let n = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::Domain("modulus must have positive degree".into()))?;
        if !modulus.is_irreducible() {
            return Err(Error::Domain(format!("modulus {modulus:?} is reducible")));
        }
        let mut ctx = FieldCtx {
            n,
            modulus,
            strategy,
            trace_powers: Bits::zeros(0),
        };
        // T(x^s) is the power sum p_s of the roots of the modulus; Newton's
        // identities give it from e_k, the coefficient of x^{n-k}
        let e: Vec<bool> = (0..=n).map(|k| ctx.modulus.coeff(n - k)).collect();
        let mut p = vec![n % 2 == 1];
        for s in 1..2 * n - 1 {
            let mut v = s <= n && s % 2 == 1 && e[s];
            for k in 1..=n.min(s - 1) {
                v ^= e[k] & p[s - k];
            }
            p.push(v);
        }
        ctx.trace_powers = Bits::from_bools(&p);
        Ok(Arc::new(ctx))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &BitPoly {
        &self.modulus
    }

    pub fn strategy(&self) -> MulStrategy {
        self.strategy
    }

    /// The Hankel generator `h_s = T(x^s)`, `s < 2n - 1`.
    pub fn trace_powers(&self) -> &Bits {
        &self.trace_powers
    }

    fn trace_poly(&self, p: &BitPoly) -> bool {
        let mut acc = BitPoly::zero();
        let mut cur = p.rem(&self.modulus);
        for _ in 0..self.n {
            acc = acc.add(&cur);
            cur = cur.square().rem(&self.modulus);
        }
        debug_assert!(acc.degree().unwrap_or(0) == 0);
        acc.is_one()
    }

    pub fn mul_poly(&self, a: &BitPoly, b: &BitPoly) -> BitPoly {
        a.mul(b, self.strategy).rem(&self.modulus)
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .field("strategy", &self.strategy)
            .finish()
    }
}

/// An element of GF(2^n), stored as its reduced polynomial.
#[derive(Clone)]
pub struct FieldElement {
    ctx: Arc<FieldCtx>,
    value: BitPoly,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.same_ctx(other)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.n.hash(state);
        self.value.hash(state);
    }
}

impl FieldElement {
    pub fn zero(ctx: &Arc<FieldCtx>) -> Self {
        FieldElement {
            ctx: ctx.clone(),
            value: BitPoly::zero(),
        }
    }

    pub fn one(ctx: &Arc<FieldCtx>) -> Self {
        FieldElement {
            ctx: ctx.clone(),
            value: BitPoly::one(),
        }
    }

    /// The class of `x`.
    pub fn generator(ctx: &Arc<FieldCtx>) -> Self {
        Self::from_poly(ctx, &BitPoly::monomial(1))
    }

    pub fn from_poly(ctx: &Arc<FieldCtx>, p: &BitPoly) -> Self {
        FieldElement {
            ctx: ctx.clone(),
            value: p.rem(&ctx.modulus),
        }
    }

    /// Bit `i` of `v` is the coefficient of `x^i`; bits at or above `n` are reduced.
    pub fn from_u64(ctx: &Arc<FieldCtx>, v: u64) -> Self {
        Self::from_poly(ctx, &BitPoly::from_u64(v))
    }

    /// Bit `i` of `v` is the coefficient of `x^i`.
    pub fn from_biguint(ctx: &Arc<FieldCtx>, v: &num_bigint::BigUint) -> Self {
        Self::from_poly(ctx, &BitPoly::from_words(v.to_u64_digits()))
    }

    pub fn to_biguint(&self) -> num_bigint::BigUint {
        let digits: Vec<u32> = self
            .value
            .words()
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect();
        num_bigint::BigUint::from_slice(&digits)
    }

    pub fn from_bits(ctx: &Arc<FieldCtx>, bits: &Bits) -> Result<Self> {
        if bits.len() != ctx.n {
            return Err(Error::Dimension {
                expected: ctx.n,
                got: bits.len(),
            });
        }
        Ok(Self::from_poly(ctx, &BitPoly::from_words(bits.words().to_vec())))
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn poly(&self) -> &BitPoly {
        &self.value
    }

    /// Coordinates in the polynomial basis `1, x, ..., x^{n-1}`.
    pub fn to_bits(&self) -> Bits {
        let mut w = self.value.words().to_vec();
        w.resize(self.ctx.n.div_ceil(64), 0);
        Bits::from_words(self.ctx.n, w)
    }

    /// Low 64 coordinates packed into an integer.
    pub fn to_u64(&self) -> u64 {
        self.value.words().first().copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn same_ctx(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.same_ctx(other) {
            Ok(())
        } else {
            Err(Error::CtxMismatch {
                left: self.ctx.n,
                right: other.ctx.n,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement {
            ctx: self.ctx.clone(),
            value: self.value.add(&other.value),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(FieldElement {
            ctx: self.ctx.clone(),
            value: self.ctx.mul_poly(&self.value, &other.value),
        })
    }

    pub fn square(&self) -> Self {
        FieldElement {
            ctx: self.ctx.clone(),
            value: self.value.square().rem(&self.ctx.modulus),
        }
    }

    /// Inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let (g, s) = self.value.ext_gcd_inverse(&self.ctx.modulus);
        if !g.is_one() {
            return Err(Error::Internal("modulus is not irreducible".into()));
        }
        Ok(FieldElement {
            ctx: self.ctx.clone(),
            value: s,
        })
    }

    /// Inverse as `a^(2^n - 2)`.
    pub fn inv_by_power(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        // 2^n - 2 = 2 + 4 + ... + 2^{n-1}
        let mut acc = Self::one(&self.ctx);
        let mut sq = self.square();
        for _ in 1..self.ctx.n {
            acc = acc.mul(&sq)?;
            sq = sq.square();
        }
        Ok(acc)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// `a^(2^k)`.
    pub fn frobenius(&self, k: usize) -> Self {
        let mut r = self.clone();
        for _ in 0..k % self.ctx.n {
            r = r.square();
        }
        r
    }

    /// The unique `t` with `t^2 = self`, as `self^(2^{n-1})`.
    pub fn sqrt(&self) -> Self {
        self.frobenius(self.ctx.n - 1)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(&self.ctx);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ctx");
            }
            base = base.square();
            e >>= 1;
        }
        acc
    }

    /// Absolute trace to GF(2), via the precomputed `T(x^s)` table.
    pub fn trace(&self) -> bool {
        let tp = &self.ctx.trace_powers;
        self.value
            .support()
            .into_iter()
            .fold(false, |acc, s| acc ^ tp.get(s))
    }

    /// Trace by the Frobenius sum, independent of the precomputed table.
    pub fn trace_by_frobenius(&self) -> bool {
        self.ctx.trace_poly(&self.value)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})[{:?}]", self.ctx.n, self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(n: usize) -> Arc<FieldCtx> {
        FieldCtx::new(n, MulStrategy::Schoolbook).unwrap()
    }

    #[test]
    fn smallest_irreducibles() {
        assert_eq!(irreducible_poly(1), BitPoly::from_u64(0b10));
        assert_eq!(irreducible_poly(2), BitPoly::from_u64(0b111));
        assert_eq!(irreducible_poly(3), BitPoly::from_u64(0b1011));
    }

    #[test]
    fn octic_matches_trial_division_sieve() {
        // independent sieve: smallest degree-8 polynomial with no factor of degree <= 4
        let small: Vec<u64> = (2u64..32).filter(|&p| is_irreducible_by_trial(p)).collect();
        let expected = (256u64..512)
            .find(|&p| small.iter().all(|&q| poly_mod_u64(p, q) != 0))
            .unwrap();
        assert_eq!(irreducible_poly(8), BitPoly::from_u64(expected));
        assert_eq!(expected, 0x11b);
    }

    fn poly_mod_u64(mut a: u64, b: u64) -> u64 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        a
    }

    fn is_irreducible_by_trial(p: u64) -> bool {
        let d = 63 - p.leading_zeros();
        d >= 1 && (2..p).all(|q| 63 - q.leading_zeros() > d / 2 || poly_mod_u64(p, q) != 0)
    }

    #[test]
    fn gf4_tables() {
        let k = gf(2);
        let a = FieldElement::from_u64(&k, 0b10);
        let a1 = FieldElement::from_u64(&k, 0b11);
        let one = FieldElement::one(&k);
        assert_eq!(a.mul(&a).unwrap(), a1);
        assert_eq!(a.mul(&a1).unwrap(), one);
        assert_eq!(a.inv().unwrap(), a1);
        assert_eq!(a.sqrt(), a1);
        assert!(!one.trace());
        assert!(a.trace());
    }

    #[test]
    fn gf8_inverse_and_trace() {
        let k = gf(3);
        let a = FieldElement::from_u64(&k, 0b10);
        assert_eq!(a.inv().unwrap(), FieldElement::from_u64(&k, 0b101));
        assert!(FieldElement::one(&k).trace());
    }

    #[test]
    fn brute_force_tables_small_fields() {
        for n in 1..=5 {
            let k = gf(n);
            let elems: Vec<_> = (0..1u64 << n).map(|v| FieldElement::from_u64(&k, v)).collect();
            for a in &elems {
                assert_eq!(a.trace(), a.trace_by_frobenius());
                if a.is_zero() {
                    assert!(a.inv().is_err());
                    continue;
                }
                let inv = elems
                    .iter()
                    .find(|b| a.mul(b).unwrap().is_one())
                    .unwrap();
                assert_eq!(&a.inv().unwrap(), inv);
                assert_eq!(&a.inv_by_power().unwrap(), inv);
            }
        }
    }

    #[test]
    fn ctx_mismatch_rejected() {
        let a = FieldElement::one(&gf(3));
        let b = FieldElement::one(&gf(4));
        assert!(matches!(a.mul(&b), Err(Error::CtxMismatch { .. })));
    }
}
