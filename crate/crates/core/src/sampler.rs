//! The three 2-design constructions: a random Pauli layer followed by a
//! Clifford circuit inducing a uniformly random SL₂ element.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::bases::{build_selfdual_basis, hankel_generator, BasisSpec};
use crate::bits::Bits;
use crate::circuit::CliffordCircuit;
use crate::error::{Error, Result};
use crate::gf2n::{FieldCtx, FieldElement, MulStrategy};
use crate::pauli::PauliOperator;
use crate::rng::BitSource;
use crate::sl2::{decode_index, decompose, group_order, sample_uniform, Generator, Sl2Element};
use crate::synth::{
    emit_mr, emit_pauli, emit_transversal, emit_vw_mod4, emit_vw_recursive, Builder, Transversal,
};
use crate::verify::Convention;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Construction {
    /// Gauss-period self-dual basis; Clifford gates only.
    Selfdual,
    /// Polynomial basis with the mod-4 `V_W` (uses controlled-S).
    PolyMod4,
    /// Polynomial basis with the recursive Clifford-only `V_W`.
    PolyRecursive,
}

impl Construction {
    pub const ALL: [Construction; 3] = [
        Construction::Selfdual,
        Construction::PolyMod4,
        Construction::PolyRecursive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Selfdual => "selfdual",
            Construction::PolyMod4 => "poly_mod4",
            Construction::PolyRecursive => "poly_recursive",
        }
    }

    /// Whether the construction is defined for `n`.
    pub fn available(self, n: usize) -> bool {
        n >= 1 && (self != Construction::Selfdual || crate::bases::check_admissible(n).admissible)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Construction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Construction::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown construction '{s}'")))
    }
}

/// A run of gates that induces `factor` in `convention`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub gates: Range<usize>,
    pub factor: Sl2Element,
    pub convention: Convention,
}

#[derive(Clone, Debug)]
pub struct DesignSample {
    pub n: usize,
    pub construction: Construction,
    pub strategy: MulStrategy,
    pub m: Sl2Element,
    /// Phase-free representative.
    pub pauli: PauliOperator,
    pub circuit: CliffordCircuit,
    pub entropy_bits_consumed: u64,
    pub seed: u64,
    /// Gates of the Pauli layer; they open the circuit.
    pub pauli_gates: Range<usize>,
    /// In circuit order; the first segment includes the Pauli layer.
    pub segments: Vec<Segment>,
    /// Mod-4 `V_W` blocks, each acting as `V_W` for the basis' `W`.
    pub vw_mod4_blocks: Vec<Range<usize>>,
    pub basis: BasisSpec,
}

impl DesignSample {
    /// The circuit without the Pauli layer.
    pub fn u_part(&self) -> CliffordCircuit {
        CliffordCircuit {
            gates: self.circuit.gates[self.pauli_gates.end..].to_vec(),
            ..self.circuit.clone()
        }
    }

    /// Comment lines for the text form.
    pub fn header_comments(&self) -> Vec<String> {
        let m = self.circuit.metrics();
        let mut out = vec![
            format!("n {}", self.n),
            format!("construction {}", self.construction),
            format!("strategy {}", self.strategy),
            format!("seed {}", self.seed),
            format!("entropy_bits_consumed {}", self.entropy_bits_consumed),
            format!("gate_count {}", m.gate_count),
            format!("depth {}", m.depth),
            format!("M {}", self.m.to_hex().join(",")),
            format!("pauli_a {}", bits_hex(&self.pauli.a)),
            format!("pauli_b {}", bits_hex(&self.pauli.b)),
            format!("pauli_gates {} {}", self.pauli_gates.start, self.pauli_gates.end),
        ];
        for s in &self.segments {
            out.push(format!(
                "segment {} {} {} {}",
                s.gates.start,
                s.gates.end,
                s.convention.name(),
                s.factor.to_hex().join(",")
            ));
        }
        for b in &self.vw_mod4_blocks {
            out.push(format!("vw_block {} {}", b.start, b.end));
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.circuit.serialize_with_comments(&self.header_comments())
    }
}

/// Sample metadata recovered from the comment lines of [`DesignSample::to_text`].
#[derive(Clone, Debug)]
pub struct SampleRecord {
    pub n: usize,
    pub construction: Construction,
    pub strategy: MulStrategy,
    pub seed: Option<u64>,
    pub m: Option<Sl2Element>,
    pub segments: Vec<Segment>,
    pub vw_mod4_blocks: Vec<Range<usize>>,
    pub basis: BasisSpec,
}

/// Parses a sample's text form back into its circuit and metadata.
pub fn parse_sample(text: &str) -> Result<(CliffordCircuit, SampleRecord)> {
    let (circuit, comments) = CliffordCircuit::parse_with_comments(text)?;
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let fields: Vec<(&str, Vec<&str>)> = comments
        .iter()
        .filter_map(|c| {
            let mut it = c.split_whitespace();
            it.next().map(|k| (k, it.collect()))
        })
        .collect();
    let one = |key: &str| -> Result<&str> {
        fields
            .iter()
            .find(|(k, v)| *k == key && v.len() == 1)
            .map(|(_, v)| v[0])
            .ok_or_else(|| bad(format!("missing `# {key}` line")))
    };
    let n: usize = one("n")?.parse().map_err(|e| bad(format!("n: {e}")))?;
    if n != circuit.n_data {
        return Err(bad(format!("header n = {n} but circuit has {} data wires", circuit.n_data)));
    }
    let construction: Construction = one("construction")?.parse()?;
    let strategy: MulStrategy = one("strategy")?.parse().map_err(bad)?;
    let seed = one("seed").ok().and_then(|s| s.parse().ok());
    let basis = basis_for(n, construction, strategy)?;
    let m = match one("M") {
        Ok(s) => Some(Sl2Element::from_hex(basis.ctx(), s)?),
        Err(_) => None,
    };
    let range = |v: &[&str]| -> Result<Range<usize>> {
        let p = |s: &str| s.parse::<usize>().map_err(|e| bad(format!("`{s}`: {e}")));
        Ok(p(v[0])?..p(v[1])?)
    };
    let mut segments = Vec::new();
    let mut vw_mod4_blocks = Vec::new();
    for (k, v) in &fields {
        match *k {
            "segment" if v.len() == 4 => segments.push(Segment {
                gates: range(v)?,
                convention: v[2].parse()?,
                factor: Sl2Element::from_hex(basis.ctx(), v[3])?,
            }),
            "vw_block" if v.len() == 2 => vw_mod4_blocks.push(range(v)?),
            "segment" | "vw_block" => return Err(bad(format!("malformed `# {k}` line"))),
            _ => {}
        }
    }
    Ok((circuit, SampleRecord { n, construction, strategy, seed, m, segments, vw_mod4_blocks, basis }))
}

fn bits_hex(b: &Bits) -> String {
    let mut bytes: Vec<u8> = Vec::new();
    let n = b.len().max(1);
    for i in (0..n.div_ceil(4)).rev() {
        let mut v = 0u8;
        for k in 0..4 {
            if 4 * i + k < b.len() && b.get(4 * i + k) {
                v |= 1 << k;
            }
        }
        bytes.push(b"0123456789abcdef"[v as usize]);
    }
    String::from_utf8(bytes).unwrap()
}

/// The basis a construction works in.
pub fn basis_for(n: usize, construction: Construction, strategy: MulStrategy) -> Result<BasisSpec> {
    match construction {
        Construction::Selfdual => build_selfdual_basis(n, strategy),
        _ => Ok(BasisSpec::polynomial(&FieldCtx::new(n, strategy)?)),
    }
}

fn draw_pauli(n: usize, src: &mut BitSource) -> Result<PauliOperator> {
    let mut a = Bits::zeros(n);
    let mut b = Bits::zeros(n);
    for i in 0..n {
        a.set(i, src.bit()?);
    }
    for i in 0..n {
        b.set(i, src.bit()?);
    }
    Ok(PauliOperator::new(a, b, 0))
}

/// Draws `M` then the Pauli from the seeded bit stream and builds the circuit.
pub fn sample(n: usize, construction: Construction, seed: u64, strategy: MulStrategy) -> Result<DesignSample> {
    let basis = basis_for(n, construction, strategy)?;
    sample_in(&basis, construction, seed, strategy)
}

/// [`sample`] with a prebuilt basis (as returned by [`basis_for`]).
pub fn sample_in(
    basis: &BasisSpec,
    construction: Construction,
    seed: u64,
    strategy: MulStrategy,
) -> Result<DesignSample> {
    let mut src = BitSource::new(seed);
    let m = sample_uniform(basis.ctx(), &mut src)?;
    let pauli = draw_pauli(basis.n(), &mut src)?;
    let mut s = build_sample(basis, construction, strategy, &m, &pauli)?;
    s.seed = seed;
    s.entropy_bits_consumed = src.consumed();
    Ok(s)
}

struct Emitter<'a> {
    b: Builder,
    basis: &'a BasisSpec,
    construction: Construction,
    strategy: MulStrategy,
    data: Vec<usize>,
    h: Option<Bits>,
    blocks: Vec<Range<usize>>,
}

impl Emitter<'_> {
    fn mr(&mut self, r: &FieldElement) -> Result<()> {
        emit_mr(&mut self.b, self.basis, r, &self.data, self.strategy)
    }

    fn vw(&mut self) {
        let h = self.h.as_ref().expect("polynomial basis");
        let start = self.b.mark();
        if self.construction == Construction::PolyMod4 {
            emit_vw_mod4(&mut self.b, h, &self.data, self.strategy);
            self.blocks.push(start..self.b.mark());
        } else {
            emit_vw_recursive(&mut self.b, h, &self.data, self.strategy);
        }
    }

    /// Induces `(r 0; s r^{-1})` in the primal convention:
    /// `Diag(t^{-1}) · LowerUnit · Diag(tr)` with `t^2 = s/r`.
    fn lower_triangular(&mut self, r: &FieldElement, s: &FieldElement) -> Result<()> {
        if s.is_zero() {
            return self.mr(r);
        }
        let t = s.div(r)?.sqrt();
        self.mr(&t.mul(r)?)?;
        self.vw();
        self.mr(&t.inv()?)
    }

    fn transversal(&mut self, kind: Transversal) {
        emit_transversal(&mut self.b, kind, &self.data);
    }
}

/// The circuit for a given `(M, P)`.
pub fn build_sample(
    basis: &BasisSpec,
    construction: Construction,
    strategy: MulStrategy,
    m: &Sl2Element,
    pauli: &PauliOperator,
) -> Result<DesignSample> {
    let n = basis.n();
    let ctx = basis.ctx();
    let h = match construction {
        Construction::Selfdual => {
            if !basis.w().is_identity() {
                return Err(Error::Domain("selfdual construction needs a self-dual basis".into()));
            }
            None
        }
        _ => Some(
            hankel_generator(basis.w())
                .ok_or_else(|| Error::Domain("polynomial constructions need a Hankel W".into()))?,
        ),
    };
    let mut e = Emitter {
        b: Builder::new(n),
        basis,
        construction,
        strategy,
        data: (0..n).collect(),
        h,
        blocks: Vec::new(),
    };
    emit_pauli(&mut e.b, pauli, &e.data);
    let pauli_gates = 0..e.b.mark();
    let mut segments = Vec::new();
    let mut start = 0;
    let mut close = |e: &Emitter, factor: Sl2Element, convention: Convention, start: &mut usize| {
        segments.push(Segment { gates: *start..e.b.mark(), factor, convention });
        *start = e.b.mark();
    };

    match construction {
        Construction::Selfdual => {
            // the word multiplies left to right, so the circuit runs it backwards
            for g in decompose(m).factors.iter().rev() {
                match g {
                    Generator::Diag(r) => e.mr(r)?,
                    Generator::LowerUnit => e.transversal(Transversal::SAll),
                    Generator::Swap => e.transversal(Transversal::HAll),
                    Generator::UpperUnit => {
                        return Err(Error::Internal("upper unit factor in full decomposition".into()))
                    }
                }
            }
            close(&e, m.clone(), Convention::Primal, &mut start);
        }
        _ if !m.alpha.is_zero() => {
            let (alpha, beta, gamma) = (&m.alpha, &m.beta, &m.gamma);
            // (α γ; 0 α^{-1}) in dual labels is H^{⊗n} U_{(α^{-1} 0; γ α)} H^{⊗n}
            let ai = alpha.inv()?;
            if !(ai.is_one() && gamma.is_zero()) {
                e.transversal(Transversal::HAll);
                e.lower_triangular(&ai, gamma)?;
                e.transversal(Transversal::HAll);
            }
            let m1 = Sl2Element::new(alpha.clone(), FieldElement::zero(ctx), gamma.clone(), ai)?;
            close(&e, m1, Convention::Dual, &mut start);
            // (1 0; β/α 1) in primal labels
            let s = beta.div(alpha)?;
            e.lower_triangular(&FieldElement::one(ctx), &s)?;
            close(&e, Sl2Element::lower(&s), Convention::Primal, &mut start);
        }
        _ => {
            // (0 γ; γ^{-1} δ) = (γ 0; δ γ^{-1}) · Swap
            e.transversal(Transversal::HAll);
            close(&e, Sl2Element::swap(ctx), Convention::Raw, &mut start);
            let (gamma, delta) = (&m.gamma, &m.delta);
            e.lower_triangular(gamma, delta)?;
            let gi = gamma.inv()?;
            let m2 = Sl2Element::new(gamma.clone(), delta.clone(), FieldElement::zero(ctx), gi)?;
            close(&e, m2, Convention::Primal, &mut start);
        }
    }

    let mut circuit = e.b.finish();
    if construction == Construction::PolyMod4 && !e.blocks.is_empty() {
        circuit.clifford_only = circuit.gates.iter().all(|g| g.kind.is_clifford());
    }
    Ok(DesignSample {
        n,
        construction,
        strategy,
        m: m.clone(),
        pauli: pauli.clone(),
        circuit,
        entropy_bits_consumed: 0,
        seed: 0,
        pauli_gates,
        segments,
        vw_mod4_blocks: e.blocks,
        basis: basis.clone(),
    })
}

pub const ENUMERATE_MAX_N: usize = 2;

/// Every `(M, P)` pair once, `M` in index-decoding order and `P` by label.
/// The `seed` field holds the enumeration index.
pub fn enumerate_ensemble(
    n: usize,
    construction: Construction,
    strategy: MulStrategy,
) -> Result<Vec<DesignSample>> {
    if n > ENUMERATE_MAX_N {
        return Err(Error::TooLarge { what: "ensemble enumeration", n, limit: ENUMERATE_MAX_N });
    }
    let basis = basis_for(n, construction, strategy)?;
    let order = group_order(n).to_u64().expect("small group");
    let mut out = Vec::new();
    for idx in 0..order {
        let m = decode_index(basis.ctx(), &BigUint::from(idx))?;
        for label in 0..1u64 << (2 * n) {
            let p = PauliOperator::from_label(n, label);
            let mut s = build_sample(&basis, construction, strategy, &m, &p)?;
            s.seed = out.len() as u64;
            out.push(s);
        }
    }
    Ok(out)
}

pub type Prob = Ratio<i64>;

/// One step of the Procedure A / Procedure B mixture on nontrivial Pauli
/// labels `l = a | b << n` (column `a`, row `b`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbChain {
    pub n: usize,
    pub weight_a: Prob,
    pub weight_b: Prob,
    /// `rows[l]` is the distribution after one step from label `l`; row 0 is unused.
    pub rows: Vec<Vec<Prob>>,
}

impl AbChain {
    /// Every row is `1/(N^2 - 1)` on each nontrivial label.
    pub fn is_uniform(&self) -> bool {
        let nn = 1i64 << (2 * self.n);
        let u = Prob::new(1, nn - 1);
        self.rows
            .iter()
            .skip(1)
            .all(|r| r[0].is_zero() && r[1..].iter().all(|p| *p == u))
    }
}

pub const AB_CHAIN_MAX_N: usize = 6;

fn spread(dist: &mut [Prob], n: usize, pick: impl Fn(u64, u64) -> bool) {
    let nn = 1u64 << (2 * n);
    let mask = (1u64 << n) - 1;
    let members: Vec<usize> = (1..nn).filter(|&l| pick(l & mask, l >> n)).map(|l| l as usize).collect();
    let total: Prob = members.iter().map(|&l| dist[l]).sum();
    let share = total / Prob::from_integer(members.len() as i64);
    for l in members {
        dist[l] = share;
    }
}

/// Upper-triangular mixing: first row mixes within itself, the rest (b ≠ 0)
/// mixes within itself.
fn upper_mixing(dist: &mut [Prob], n: usize) {
    spread(dist, n, |a, b| b == 0 && a != 0);
    spread(dist, n, |_, b| b != 0);
}

/// Lower-triangular mixing: first column and its complement mix separately.
fn lower_mixing(dist: &mut [Prob], n: usize) {
    spread(dist, n, |a, b| a == 0 && b != 0);
    spread(dist, n, |a, _| a != 0);
}

/// Column mixing: first column fixed, every other column mixes within itself.
fn column_mixing(dist: &mut [Prob], n: usize) {
    for col in 1..1u64 << n {
        spread(dist, n, |a, _| a == col);
    }
}

fn transpose(dist: &[Prob], n: usize) -> Vec<Prob> {
    let mask = (1u64 << n) - 1;
    let mut out = vec![Prob::zero(); dist.len()];
    for (l, p) in dist.iter().enumerate() {
        let (a, b) = (l as u64 & mask, l as u64 >> n);
        out[(b | a << n) as usize] = *p;
    }
    out
}

fn point(n: usize, l: u64) -> Vec<Prob> {
    let mut d = vec![Prob::zero(); 1 << (2 * n)];
    d[l as usize] = Prob::from_integer(1);
    d
}

/// Upper-triangular mixing, then column mixing.
pub fn procedure_a(n: usize, start: u64) -> Vec<Prob> {
    let mut d = point(n, start);
    upper_mixing(&mut d, n);
    column_mixing(&mut d, n);
    d
}

/// `H^{⊗n}` (transpose), then lower-triangular mixing.
pub fn procedure_b(n: usize, start: u64) -> Vec<Prob> {
    let mut d = transpose(&point(n, start), n);
    lower_mixing(&mut d, n);
    d
}

/// The A/B mixture with weights `N/(N+1)` and `1/(N+1)`, from every start.
pub fn ab_mixture_chain(n: usize) -> Result<AbChain> {
    if n == 0 || n > AB_CHAIN_MAX_N {
        return Err(Error::TooLarge { what: "A/B mixture chain", n, limit: AB_CHAIN_MAX_N });
    }
    let big_n = 1i64 << n;
    let weight_a = Prob::new(big_n, big_n + 1);
    let weight_b = Prob::new(1, big_n + 1);
    let nn = 1u64 << (2 * n);
    let mut rows = vec![vec![Prob::zero(); nn as usize]];
    for l in 1..nn {
        let pa = procedure_a(n, l);
        let pb = procedure_b(n, l);
        rows.push(pa.iter().zip(&pb).map(|(x, y)| weight_a * x + weight_b * y).collect());
    }
    Ok(AbChain { n, weight_a, weight_b, rows })
}
