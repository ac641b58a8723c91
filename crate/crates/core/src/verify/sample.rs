//! Checks a sampled circuit segment by segment.

use std::fmt;
use std::ops::Range;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bases::BasisSpec;
use crate::bits::Bits;
use crate::circuit::CliffordCircuit;
use crate::error::Result;
use crate::sampler::{DesignSample, Segment};
use crate::sl2::Sl2Element;
use crate::synth::{emit_vw_generic, Builder};

use super::induce::{check_induces_with, InduceReport};
use super::check_diagonal_phases;

/// Up to this size mod-4 `V_W` blocks are checked on every basis label.
pub const BLOCK_EXHAUSTIVE_MAX_N: usize = 10;
const BLOCK_RANDOM_INPUTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub ok: bool,
    pub segments: Vec<InduceReport>,
    pub blocks_checked: usize,
    pub counterexample: Option<String>,
}

impl fmt::Display for SampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(
                f,
                "PASS induced-action ({} segments, {} V_W blocks)",
                self.segments.len(),
                self.blocks_checked
            ),
            Some(c) => write!(f, "FAIL induced-action: {c}"),
        }
    }
}

/// Inputs on which a mod-4 `V_W` block is compared with `i^{cᵀWc}`: all labels
/// for small `n`, else `0`, every `e_j`, every `e_j + e_k` (which fix a
/// quadratic form) and a fixed set of random labels.
pub fn block_inputs(n: usize) -> Vec<Bits> {
    if n <= BLOCK_EXHAUSTIVE_MAX_N {
        return (0..1u64 << n).map(|x| Bits::from_u64(n, x)).collect();
    }
    let mut out = vec![Bits::zeros(n)];
    for j in 0..n {
        out.push(Bits::unit(n, j));
        for k in j + 1..n {
            let mut v = Bits::unit(n, j);
            v.set(k, true);
            out.push(v);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    for _ in 0..BLOCK_RANDOM_INPUTS {
        let words = (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect();
        out.push(Bits::from_words(n, words));
    }
    out
}

fn fail(segments: Vec<InduceReport>, blocks: usize, msg: String) -> SampleReport {
    SampleReport { ok: false, segments, blocks_checked: blocks, counterexample: Some(msg) }
}

/// Verifies that the segments multiply to `m` (later segments on the left),
/// that each mod-4 block acts as `V_W` on basis labels, and, with each block
/// replaced by the generic `V_W` network, that every segment induces its factor.
pub fn check_segments(
    circuit: &CliffordCircuit,
    basis: &BasisSpec,
    segments: &[Segment],
    vw_blocks: &[Range<usize>],
    m: &Sl2Element,
) -> Result<SampleReport> {
    let n = basis.n();
    let mut prod = Sl2Element::identity(basis.ctx());
    for s in segments {
        prod = s.factor.mul(&prod)?;
    }
    if prod != *m {
        return Ok(fail(Vec::new(), 0, format!("segment factors multiply to {prod:?}, not {m:?}")));
    }
    let mut tiling = None;
    let mut covered = 0;
    for s in segments {
        if s.gates.start != covered || s.gates.end < s.gates.start {
            tiling = Some(format!("segment {:?} does not tile the gate list", s.gates));
        }
        covered = s.gates.end;
    }
    if covered != circuit.gates.len() && tiling.is_none() {
        tiling = Some(format!("segments cover {covered} gates, circuit has {}", circuit.gates.len()));
    }
    // on a length mismatch the last segment absorbs the difference so the
    // per-segment checks can still locate a failing generator
    let len = circuit.gates.len();
    let mut segments = segments.to_vec();
    for s in &mut segments {
        s.gates.start = s.gates.start.min(len);
        s.gates.end = s.gates.end.clamp(s.gates.start, len);
    }
    if let Some(last) = segments.last_mut() {
        last.gates.end = len;
    }
    let vw_blocks: Vec<Range<usize>> =
        vw_blocks.iter().filter(|b| b.start <= b.end && b.end <= len).cloned().collect();

    let mut generic = Builder::new(n);
    emit_vw_generic(&mut generic, basis.w(), &(0..n).collect::<Vec<_>>());
    let generic = generic.finish().gates;
    let mut reports = Vec::with_capacity(segments.len());
    for (i, s) in segments.iter().enumerate() {
        let mut gates = Vec::with_capacity(s.gates.len());
        let mut pos = s.gates.start;
        for blk in vw_blocks.iter().filter(|b| b.start >= s.gates.start && b.end <= s.gates.end) {
            if blk.start < pos {
                continue;
            }
            gates.extend_from_slice(&circuit.gates[pos..blk.start]);
            gates.extend_from_slice(&generic);
            pos = blk.end;
        }
        gates.extend_from_slice(&circuit.gates[pos..s.gates.end]);
        let c = CliffordCircuit { gates, clifford_only: true, ..circuit.clone() };
        let rep = match check_induces_with(&c, &s.factor, basis, s.convention) {
            Ok(r) => r,
            Err(e) => return Ok(fail(reports, vw_blocks.len(), format!("segment {i}: {e}"))),
        };
        let ok = rep.ok;
        let msg = rep.counterexample.clone();
        reports.push(rep);
        if !ok {
            let blocks = vw_blocks.len();
            return Ok(fail(reports, blocks, format!("segment {i}: {}", msg.unwrap_or_default())));
        }
    }
    let inputs = if vw_blocks.is_empty() { Vec::new() } else { block_inputs(n) };
    for blk in &vw_blocks {
        let c = CliffordCircuit {
            gates: circuit.gates[blk.clone()].to_vec(),
            clifford_only: false,
            ..circuit.clone()
        };
        match check_diagonal_phases(&c, basis.w(), &inputs) {
            Ok(None) => {}
            Ok(Some(x)) => {
                return Ok(fail(reports, vw_blocks.len(), format!("V_W block {blk:?} wrong on label {x:?}")))
            }
            Err(e) => return Ok(fail(reports, vw_blocks.len(), format!("V_W block {blk:?}: {e}"))),
        }
    }

    if let Some(t) = tiling {
        return Ok(fail(reports, vw_blocks.len(), t));
    }
    Ok(SampleReport { ok: true, segments: reports, blocks_checked: vw_blocks.len(), counterexample: None })
}

pub fn check_sample(s: &DesignSample) -> Result<SampleReport> {
    check_segments(&s.circuit, &s.basis, &s.segments, &s.vw_mod4_blocks, &s.m)
}
