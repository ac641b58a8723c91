//! Ensemble-level checks at small `n`: Pauli mixing, the bilateral twirl in
//! exact rational arithmetic, and the frame potential.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::circuit::{CliffordCircuit, Gate};
use crate::error::{Error, Result};
use crate::pauli::PauliOperator;

use super::exact::{dense_simulate, Amplitude, DenseUnitary};
use super::tableau::SymplecticTableau;

pub const ENSEMBLE_MAX_N: usize = 2;

pub type Weight = Ratio<i64>;

/// Conjugation action on Hermitian Paulis `R_l = i^{a·b} X^a Z^b`,
/// `l = a | b << n`: `U R_l U† = (-1)^{s_l} R_{π(l)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliAction {
    pub n: usize,
    pub images: Vec<(u64, bool)>,
}

fn hermitian(n: usize, label: u64) -> PauliOperator {
    let p = PauliOperator::from_label(n, label);
    let k = (p.a.and_count(&p.b) % 4) as u8;
    PauliOperator::new(p.a, p.b, k)
}

fn hermitian_dense(n: usize, label: u64) -> Vec<Amplitude> {
    let dim = 1usize << n;
    let mask = (1u64 << n) - 1;
    let (a, b) = (label & mask, label >> n);
    let base = Amplitude::i_pow((a & b).count_ones() as u8);
    let mut m = vec![Amplitude::ZERO; dim * dim];
    for col in 0..dim as u64 {
        let v = if (b & col).count_ones() % 2 == 1 { -base } else { base };
        m[((col ^ a) as usize) * dim + col as usize] = v;
    }
    m
}

fn matmul(dim: usize, x: &[Amplitude], y: &[Amplitude]) -> Vec<Amplitude> {
    let mut out = vec![Amplitude::ZERO; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let xik = x[i * dim + k];
            if xik.is_zero() {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] = out[i * dim + j] + xik * y[k * dim + j];
            }
        }
    }
    out
}

fn adjoint(dim: usize, x: &[Amplitude]) -> Vec<Amplitude> {
    let mut out = vec![Amplitude::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = x[i * dim + j].conj();
        }
    }
    out
}

fn action_from_dense(n: usize, u: &DenseUnitary) -> Result<PauliAction> {
    let dim = u.dim;
    let ud = adjoint(dim, &u.entries);
    let reps: Vec<Vec<Amplitude>> = (0..1u64 << (2 * n)).map(|l| hermitian_dense(n, l)).collect();
    let mut images = Vec::with_capacity(reps.len());
    for r in &reps {
        let v = matmul(dim, &matmul(dim, &u.entries, r), &ud);
        let neg: Vec<Amplitude> = v.iter().map(|&x| -x).collect();
        let hit = reps.iter().enumerate().find_map(|(l, q)| {
            if *q == v {
                Some((l as u64, false))
            } else if *q == neg {
                Some((l as u64, true))
            } else {
                None
            }
        });
        images.push(hit.ok_or_else(|| {
            Error::NonClifford("conjugation does not map a Pauli to a Pauli".into())
        })?);
    }
    Ok(PauliAction { n, images })
}

/// Action of a circuit on data Paulis: via the tableau for Clifford-only
/// circuits, via exact dense simulation otherwise.
pub fn pauli_action(circuit: &CliffordCircuit) -> Result<PauliAction> {
    let n = circuit.n_data;
    if n > ENSEMBLE_MAX_N + 1 {
        return Err(Error::TooLarge { what: "Pauli action table", n, limit: ENSEMBLE_MAX_N + 1 });
    }
    if !circuit.gates.iter().all(|g| g.kind.is_clifford()) {
        return action_from_dense(n, &dense_simulate(circuit)?);
    }
    let tab = SymplecticTableau::run(circuit)?;
    let mut images = Vec::with_capacity(1 << (2 * n));
    for l in 0..1u64 << (2 * n) {
        let img = tab.apply(&hermitian(n, l))?;
        let neg = img
            .hermitian_sign()
            .ok_or_else(|| Error::Internal("image of a Hermitian Pauli is not Hermitian".into()))?;
        images.push((img.label(), neg));
    }
    Ok(PauliAction { n, images })
}

fn check_ensemble<T>(ensemble: &[(T, Weight)]) -> Result<usize>
where
    T: AsRef<CliffordCircuit>,
{
    let n = ensemble
        .first()
        .map(|(c, _)| c.as_ref().n_data)
        .ok_or_else(|| Error::Domain("empty ensemble".into()))?;
    if n > ENSEMBLE_MAX_N {
        return Err(Error::TooLarge { what: "ensemble check", n, limit: ENSEMBLE_MAX_N });
    }
    if ensemble.iter().any(|(c, _)| c.as_ref().n_data != n) {
        return Err(Error::Domain("ensemble mixes register sizes".into()));
    }
    Ok(n)
}

fn label_name(n: usize, l: u64) -> String {
    let p = PauliOperator::from_label(n, l);
    (0..n)
        .map(|i| match (p.a.get(i), p.b.get(i)) {
            (false, false) => 'I',
            (true, false) => 'X',
            (false, true) => 'Z',
            (true, true) => 'Y',
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixingReport {
    pub ok: bool,
    pub n: usize,
    /// For each nontrivial start label, the image distribution.
    pub rows: BTreeMap<u64, BTreeMap<u64, Weight>>,
    pub counterexample: Option<String>,
}

/// Image distribution of every nontrivial Pauli; passes iff each is uniform
/// over the `4^n - 1` nontrivial Paulis.
pub fn pauli_mixing_check<T: AsRef<CliffordCircuit>>(ensemble: &[(T, Weight)]) -> Result<MixingReport> {
    let n = check_ensemble(ensemble)?;
    let count = 1u64 << (2 * n);
    let mut rows: BTreeMap<u64, BTreeMap<u64, Weight>> = BTreeMap::new();
    for (c, w) in ensemble {
        let act = pauli_action(c.as_ref())?;
        for l in 1..count {
            let e = rows.entry(l).or_default().entry(act.images[l as usize].0).or_insert_with(Weight::zero);
            *e += *w;
        }
    }
    let target = Weight::new(1, count as i64 - 1);
    let mut counterexample = None;
    'outer: for (&l, dist) in &rows {
        for t in 1..count {
            let got = dist.get(&t).copied().unwrap_or_else(Weight::zero);
            if got != target {
                counterexample = Some(format!(
                    "{} -> {} with probability {}, expected {}",
                    label_name(n, l),
                    label_name(n, t),
                    got,
                    target
                ));
                break 'outer;
            }
        }
        if dist.contains_key(&0) {
            counterexample = Some(format!("{} -> identity", label_name(n, l)));
            break;
        }
    }
    Ok(MixingReport { ok: counterexample.is_none(), n, rows, counterexample })
}

/// Averaged image of `R_a ⊗ R_b` as coefficients on `R_c ⊗ R_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwirlTable {
    pub n: usize,
    /// Indexed by `a * 4^n + b`.
    pub entries: Vec<BTreeMap<(u64, u64), Weight>>,
}

impl TwirlTable {
    pub fn get(&self, a: u64, b: u64) -> &BTreeMap<(u64, u64), Weight> {
        &self.entries[(a * (1 << (2 * self.n)) + b) as usize]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwirlReport {
    pub ok: bool,
    pub table: TwirlTable,
    pub counterexample: Option<String>,
}

pub fn twirl_table<T: AsRef<CliffordCircuit>>(ensemble: &[(T, Weight)]) -> Result<TwirlTable> {
    let n = check_ensemble(ensemble)?;
    let count = 1u64 << (2 * n);
    let mut entries = vec![BTreeMap::new(); (count * count) as usize];
    for (c, w) in ensemble {
        let act = pauli_action(c.as_ref())?;
        for a in 0..count {
            let (pa, sa) = act.images[a as usize];
            for b in 0..count {
                let (pb, sb) = act.images[b as usize];
                let v = if sa ^ sb { -*w } else { *w };
                let e: &mut Weight = entries[(a * count + b) as usize]
                    .entry((pa, pb))
                    .or_insert_with(Weight::zero);
                *e += v;
            }
        }
    }
    for m in &mut entries {
        m.retain(|_, v: &mut Weight| !v.is_zero());
    }
    Ok(TwirlTable { n, entries })
}

/// Off-diagonal inputs average to zero; each nontrivial diagonal input averages
/// to `(4^n - 1)^{-1} Σ_{j≠0} R_j ⊗ R_j`; the identity pair is fixed.
pub fn bilateral_twirl_check<T: AsRef<CliffordCircuit>>(ensemble: &[(T, Weight)]) -> Result<TwirlReport> {
    let table = twirl_table(ensemble)?;
    let n = table.n;
    let count = 1u64 << (2 * n);
    let c = Weight::new(1, count as i64 - 1);
    let uniform: BTreeMap<(u64, u64), Weight> = (1..count).map(|j| ((j, j), c)).collect();
    let identity: BTreeMap<(u64, u64), Weight> = [((0, 0), Weight::one())].into_iter().collect();
    let mut counterexample = None;
    'outer: for a in 0..count {
        for b in 0..count {
            let got = table.get(a, b);
            let ok = if a != b {
                got.is_empty()
            } else if a == 0 {
                *got == identity
            } else {
                *got == uniform
            };
            if !ok {
                let shown: Vec<String> = got
                    .iter()
                    .take(4)
                    .map(|((c, d), v)| format!("{v}·{}⊗{}", label_name(n, *c), label_name(n, *d)))
                    .collect();
                counterexample = Some(format!(
                    "{}⊗{} -> {}",
                    label_name(n, a),
                    label_name(n, b),
                    if shown.is_empty() { "0".to_string() } else { shown.join(" + ") }
                ));
                break 'outer;
            }
        }
    }
    Ok(TwirlReport { ok: counterexample.is_none(), table, counterexample })
}

/// `Σ p_i p_j |Tr(U_i† U_j)|⁴` over dense data unitaries.
pub fn frame_potential<T: AsRef<CliffordCircuit>>(ensemble: &[(T, f64)]) -> Result<f64> {
    let us: Vec<(Vec<(f64, f64)>, f64)> = ensemble
        .iter()
        .map(|(c, p)| Ok((dense_simulate(c.as_ref())?.to_complex(), *p)))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for (ui, pi) in &us {
        for (uj, pj) in &us {
            // Tr(U_i† U_j) = Σ conj(U_i[k][l]) U_j[k][l]
            let (mut re, mut im) = (0.0, 0.0);
            for ((a, b), (c, d)) in ui.iter().zip(uj) {
                re += a * c + b * d;
                im += a * d - b * c;
            }
            let m2 = re * re + im * im;
            total += pi * pj * m2 * m2;
        }
    }
    Ok(total)
}

/// The 24 single-qubit Cliffords modulo phase, by breadth-first search over
/// words in `H` and `S`.
pub fn clifford_group_1q() -> Vec<CliffordCircuit> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![CliffordCircuit::new(1)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in frontier {
            let act = pauli_action(&c).expect("Clifford word");
            if !seen.insert(act) {
                continue;
            }
            for g in [Gate::h(0), Gate::s(0)] {
                let mut d = c.clone();
                d.push(g);
                next.push(d);
            }
            out.push(c);
        }
        frontier = next;
    }
    out
}

impl fmt::Display for MixingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS pauli-mixing n={} ({} starts uniform)", self.n, self.rows.len()),
            Some(c) => write!(f, "FAIL pauli-mixing n={}: {c}", self.n),
        }
    }
}

impl fmt::Display for TwirlReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let count = 1u64 << (2 * self.table.n);
        match &self.counterexample {
            None => write!(
                f,
                "PASS bilateral-twirl n={} (coefficient 1/{})",
                self.table.n,
                count - 1
            ),
            Some(c) => write!(f, "FAIL bilateral-twirl n={}: {c}", self.table.n),
        }
    }
}

