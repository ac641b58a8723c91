//! The group SL₂(GF(2^n)) in the layout `(α γ; β δ)`, acting on pairs by
//! `(a, b) ↦ (αa + γb, βa + δb)`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::gf2n::{BitPoly, FieldCtx, FieldElement};
use crate::rng::BitSource;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Sl2Element {
    pub alpha: FieldElement,
    pub beta: FieldElement,
    pub gamma: FieldElement,
    pub delta: FieldElement,
}

impl Sl2Element {
    /// `(α γ; β δ)`; rejects determinant other than 1.
    pub fn new(
        alpha: FieldElement,
        beta: FieldElement,
        gamma: FieldElement,
        delta: FieldElement,
    ) -> Result<Self> {
        let det = alpha.mul(&delta)?.add(&beta.mul(&gamma)?)?;
        if !det.is_one() {
            return Err(Error::Domain("determinant is not 1".into()));
        }
        Ok(Sl2Element {
            alpha,
            beta,
            gamma,
            delta,
        })
    }

    fn raw(a: FieldElement, b: FieldElement, g: FieldElement, d: FieldElement) -> Self {
        Sl2Element {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        }
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        self.alpha.ctx()
    }

    pub fn identity(ctx: &Arc<FieldCtx>) -> Self {
        let (z, o) = (FieldElement::zero(ctx), FieldElement::one(ctx));
        Self::raw(o.clone(), z.clone(), z, o)
    }

    /// `(0 1; 1 0)`.
    pub fn swap(ctx: &Arc<FieldCtx>) -> Self {
        let (z, o) = (FieldElement::zero(ctx), FieldElement::one(ctx));
        Self::raw(z.clone(), o.clone(), o, z)
    }

    /// `(r 0; 0 r^{-1})`.
    pub fn diag(r: &FieldElement) -> Result<Self> {
        let z = FieldElement::zero(r.ctx());
        Ok(Self::raw(r.clone(), z.clone(), z, r.inv()?))
    }

    /// `(1 0; s 1)`.
    pub fn lower(s: &FieldElement) -> Self {
        let (z, o) = (FieldElement::zero(s.ctx()), FieldElement::one(s.ctx()));
        Self::raw(o.clone(), s.clone(), z, o)
    }

    /// `(1 s; 0 1)`.
    pub fn upper(s: &FieldElement) -> Self {
        let (z, o) = (FieldElement::zero(s.ctx()), FieldElement::one(s.ctx()));
        Self::raw(o.clone(), z, s.clone(), o)
    }

    pub fn is_identity(&self) -> bool {
        self.alpha.is_one() && self.beta.is_zero() && self.gamma.is_zero() && self.delta.is_one()
    }

    pub fn is_lower(&self) -> bool {
        self.gamma.is_zero()
    }

    pub fn is_upper(&self) -> bool {
        self.beta.is_zero()
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, o: &Sl2Element) -> Result<Sl2Element> {
        let m = |x: &FieldElement, y: &FieldElement| x.mul(y);
        Ok(Self::raw(
            m(&self.alpha, &o.alpha)?.add(&m(&self.gamma, &o.beta)?)?,
            m(&self.beta, &o.alpha)?.add(&m(&self.delta, &o.beta)?)?,
            m(&self.alpha, &o.gamma)?.add(&m(&self.gamma, &o.delta)?)?,
            m(&self.beta, &o.gamma)?.add(&m(&self.delta, &o.delta)?)?,
        ))
    }

    /// Inverse `(δ γ; β α)` in characteristic 2.
    pub fn inverse(&self) -> Sl2Element {
        Self::raw(
            self.delta.clone(),
            self.beta.clone(),
            self.gamma.clone(),
            self.alpha.clone(),
        )
    }

    /// Conjugate by the swap matrix: `(δ β; γ α)`.
    pub fn swap_conjugate(&self) -> Sl2Element {
        Self::raw(
            self.delta.clone(),
            self.gamma.clone(),
            self.beta.clone(),
            self.alpha.clone(),
        )
    }

    pub fn act_on_pair(&self, a: &FieldElement, b: &FieldElement) -> Result<(FieldElement, FieldElement)> {
        Ok((
            self.alpha.mul(a)?.add(&self.gamma.mul(b)?)?,
            self.beta.mul(a)?.add(&self.delta.mul(b)?)?,
        ))
    }

    /// Parses `α,β,γ,δ` in the hex form of [`Sl2Element::to_hex`].
    pub fn from_hex(ctx: &Arc<FieldCtx>, s: &str) -> Result<Sl2Element> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Domain(format!("expected four comma-separated entries, got `{s}`")));
        }
        let mut e = Vec::with_capacity(4);
        for p in parts {
            let v = BitPoly::from_hex(p).ok_or_else(|| Error::Domain(format!("bad hex entry `{p}`")))?;
            if v.degree().is_some_and(|d| d >= ctx.n()) {
                return Err(Error::Domain(format!("entry `{p}` does not fit in GF(2^{})", ctx.n())));
            }
            e.push(FieldElement::from_poly(ctx, &v));
        }
        let [a, b, c, d]: [FieldElement; 4] = e.try_into().unwrap();
        Sl2Element::new(a, b, c, d)
    }

    pub fn to_hex(&self) -> [String; 4] {
        [
            self.alpha.to_string(),
            self.beta.to_string(),
            self.gamma.to_string(),
            self.delta.to_string(),
        ]
    }
}

impl fmt::Debug for Sl2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({} {}; {} {})",
            self.alpha, self.gamma, self.beta, self.delta
        )
    }
}

/// Generators of SL₂ used by the circuit constructions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Generator {
    Diag(FieldElement),
    LowerUnit,
    UpperUnit,
    Swap,
}

impl Generator {
    pub fn matrix(&self, ctx: &Arc<FieldCtx>) -> Sl2Element {
        let one = FieldElement::one(ctx);
        match self {
            Generator::Diag(r) => Sl2Element::diag(r).expect("nonzero diagonal"),
            Generator::LowerUnit => Sl2Element::lower(&one),
            Generator::UpperUnit => Sl2Element::upper(&one),
            Generator::Swap => Sl2Element::swap(ctx),
        }
    }
}

/// Factors multiplied left to right.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GeneratorWord {
    pub factors: Vec<Generator>,
}

impl GeneratorWord {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, ctx: &Arc<FieldCtx>) -> Sl2Element {
        self.factors.iter().fold(Sl2Element::identity(ctx), |acc, g| {
            acc.mul(&g.matrix(ctx)).unwrap()
        })
    }

    fn push_diag(&mut self, r: &FieldElement) {
        if !r.is_one() {
            self.factors.push(Generator::Diag(r.clone()));
        }
    }

    /// `(1 0; s 1) = Diag(t^{-1}) · LowerUnit · Diag(t)`, `t^2 = s`.
    fn push_lower(&mut self, s: &FieldElement) {
        if s.is_zero() {
            return;
        }
        let t = s.sqrt();
        self.push_diag(&t.inv().unwrap());
        self.factors.push(Generator::LowerUnit);
        self.push_diag(&t);
    }

    /// `(1 s; 0 1) = Swap · (1 0; s 1) · Swap`.
    fn push_upper_via_swap(&mut self, s: &FieldElement) {
        if s.is_zero() {
            return;
        }
        self.factors.push(Generator::Swap);
        self.push_lower(s);
        self.factors.push(Generator::Swap);
    }

    /// `(1 s; 0 1) = Diag(t) · UpperUnit · Diag(t^{-1})`, `t^2 = s`.
    fn push_upper(&mut self, s: &FieldElement) {
        if s.is_zero() {
            return;
        }
        let t = s.sqrt();
        self.push_diag(&t);
        self.factors.push(Generator::UpperUnit);
        self.push_diag(&t.inv().unwrap());
    }
}

/// Largest word produced by [`decompose`].
pub const MAX_WORD_LEN: usize = 11;

/// Write `m` over {Diag, LowerUnit, Swap}.
pub fn decompose(m: &Sl2Element) -> GeneratorWord {
    let mut w = GeneratorWord::default();
    if !m.alpha.is_zero() {
        // (1 0; β/α 1)(1 αγ; 0 1)Diag(α)
        w.push_lower(&m.beta.div(&m.alpha).unwrap());
        w.push_upper_via_swap(&m.alpha.mul(&m.gamma).unwrap());
        w.push_diag(&m.alpha);
    } else {
        // (1 0; δ/γ 1)Diag(γ)Swap
        w.push_lower(&m.delta.div(&m.gamma).unwrap());
        w.push_diag(&m.gamma);
        w.factors.push(Generator::Swap);
    }
    w
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Triangle {
    Lower,
    Upper,
}

/// Write a triangular `m` over {Diag, LowerUnit} or {Diag, UpperUnit}.
pub fn decompose_triangular(m: &Sl2Element, which: Triangle) -> Result<GeneratorWord> {
    let mut w = GeneratorWord::default();
    match which {
        Triangle::Lower => {
            if !m.is_lower() {
                return Err(Error::Domain("matrix is not lower triangular".into()));
            }
            // (r 0; s r^{-1}) = (1 0; s/r 1) Diag(r)
            w.push_lower(&m.beta.div(&m.alpha)?);
            w.push_diag(&m.alpha);
        }
        Triangle::Upper => {
            if !m.is_upper() {
                return Err(Error::Domain("matrix is not upper triangular".into()));
            }
            // (r s; 0 r^{-1}) = (1 s r; 0 1) Diag(r)
            w.push_upper(&m.gamma.mul(&m.alpha)?);
            w.push_diag(&m.alpha);
        }
    }
    Ok(w)
}

/// `|SL₂(GF(2^n))| = 2^{3n} - 2^n`.
pub fn group_order(n: usize) -> BigUint {
    (BigUint::one() << (3 * n)) - (BigUint::one() << n)
}

/// Bijection from `[0, |SL₂|)` onto the group.
pub fn decode_index(ctx: &Arc<FieldCtx>, idx: &BigUint) -> Result<Sl2Element> {
    let n = ctx.n();
    if idx >= &group_order(n) {
        return Err(Error::Domain("index out of range".into()));
    }
    let mask = (BigUint::one() << n) - BigUint::one();
    let branch_a = ((BigUint::one() << n) - BigUint::one()) << (2 * n);
    let el = |v: &BigUint| FieldElement::from_biguint(ctx, v);
    if idx < &branch_a {
        let alpha = el(&((idx >> (2 * n)) + BigUint::one()));
        let beta = el(&(idx & &mask));
        let gamma = el(&((idx >> n) & &mask));
        let delta = FieldElement::one(ctx)
            .add(&beta.mul(&gamma)?)?
            .div(&alpha)?;
        Ok(Sl2Element::raw(alpha, beta, gamma, delta))
    } else {
        let j = idx - &branch_a;
        let gamma = el(&((&j >> n) + BigUint::one()));
        let delta = el(&(&j & &mask));
        let beta = gamma.inv()?;
        Ok(Sl2Element::raw(FieldElement::zero(ctx), beta, gamma, delta))
    }
}

/// Exactly uniform element of SL₂(GF(2^n)): draw `3n + 1` bits, reject values
/// at or above `2|SL₂|`, reduce mod `|SL₂|`, decode.
pub fn sample_uniform(ctx: &Arc<FieldCtx>, src: &mut BitSource) -> Result<Sl2Element> {
    let n = ctx.n();
    let order = group_order(n);
    let bound = &order * 2u32;
    loop {
        let v = src.bits(3 * n + 1)?;
        if v < bound {
            return decode_index(ctx, &(v % &order));
        }
    }
}

/// Every element of SL₂(GF(2^n)) in index order.
pub fn enumerate_group(ctx: &Arc<FieldCtx>) -> Result<Vec<Sl2Element>> {
    let n = ctx.n();
    if n > 6 {
        return Err(Error::TooLarge {
            what: "group enumeration",
            n,
            limit: 6,
        });
    }
    let order = (1u64 << (3 * n)) - (1u64 << n);
    (0..order)
        .map(|i| decode_index(ctx, &BigUint::from(i)))
        .collect()
}

/// `(r 0; s r^{-1})` or `(r s; 0 r^{-1})` over all `r ≠ 0`, `s`.
pub fn enumerate_triangle(ctx: &Arc<FieldCtx>, which: Triangle) -> Vec<Sl2Element> {
    let q = 1u64 << ctx.n();
    let mut out = Vec::new();
    for r in 1..q {
        let r = FieldElement::from_u64(ctx, r);
        let ri = r.inv().unwrap();
        for s in 0..q {
            let s = FieldElement::from_u64(ctx, s);
            let z = FieldElement::zero(ctx);
            out.push(match which {
                Triangle::Lower => Sl2Element::raw(r.clone(), s, z, ri.clone()),
                Triangle::Upper => Sl2Element::raw(r.clone(), z, s, ri.clone()),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Full,
    Lower,
    Upper,
}

/// Exact orbit distributions: `probs[start][target]` for nonzero pairs, packed
/// as `a | b << n`.
#[derive(Clone, Debug)]
pub struct MixingTable {
    pub n: usize,
    pub subgroup: Subgroup,
    pub pairs: Vec<(u64, u64)>,
    pub probs: Vec<BTreeMap<(u64, u64), Ratio<u64>>>,
}

impl MixingTable {
    pub fn prob(&self, start: (u64, u64), target: (u64, u64)) -> Ratio<u64> {
        let i = self.pairs.iter().position(|&p| p == start).expect("nonzero start pair");
        self.probs[i].get(&target).copied().unwrap_or_else(|| Ratio::from_integer(0))
    }
}

pub fn mixing_statistics(subgroup: Subgroup, n: usize) -> Result<MixingTable> {
    if n > 4 {
        return Err(Error::TooLarge {
            what: "mixing statistics",
            n,
            limit: 4,
        });
    }
    let ctx = FieldCtx::new(n, Default::default())?;
    let elems = match subgroup {
        Subgroup::Full => enumerate_group(&ctx)?,
        Subgroup::Lower => enumerate_triangle(&ctx, Triangle::Lower),
        Subgroup::Upper => enumerate_triangle(&ctx, Triangle::Upper),
    };
    let q = 1u64 << n;
    let pairs: Vec<(u64, u64)> = (0..q)
        .flat_map(|a| (0..q).map(move |b| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect();
    let total = elems.len() as u64;
    let probs = pairs
        .iter()
        .map(|&(a, b)| {
            let (fa, fb) = (FieldElement::from_u64(&ctx, a), FieldElement::from_u64(&ctx, b));
            let mut row: BTreeMap<(u64, u64), Ratio<u64>> = BTreeMap::new();
            for m in &elems {
                let (x, y) = m.act_on_pair(&fa, &fb).unwrap();
                *row.entry((x.to_u64(), y.to_u64())).or_insert_with(|| Ratio::from_integer(0)) +=
                    Ratio::new(1, total);
            }
            row
        })
        .collect();
    Ok(MixingTable {
        n,
        subgroup,
        pairs,
        probs,
    })
}
