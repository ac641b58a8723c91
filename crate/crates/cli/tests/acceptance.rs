//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_rational::Ratio;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sl2design::bases::{build_selfdual_basis, compute_w, hankel_from_generator, l_matrix};
use sl2design::circuit::CliffordCircuit;
use sl2design::sampler::{ab_mixture_chain, basis_for, enumerate_ensemble, sample_in, Construction};
use sl2design::synth::{synth_l_conversion, synth_vw_generic, synth_vw_mod4, synth_vw_recursive, Direction};
use sl2design::verify::*;
use sl2design::{BitMatrix, Bits, MulStrategy};
use sl2design_cli::{bench_rows, sample_text, BenchArgs, BenchRow};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn available(n: usize) -> Vec<Construction> {
    Construction::ALL.into_iter().filter(|c| c.available(n)).collect()
}

/// Off-diagonal pairs vanish; `P⊗P` spreads as `1/(4^n-1)` over all `Q⊗Q`.
fn check_twirl_table(table: &TwirlTable) -> Result<(), String> {
    let nn = 1u64 << (2 * table.n);
    let coeff = Ratio::new(1, nn as i64 - 1);
    for p in 0..nn {
        for q in 0..nn {
            let e = table.get(p, q);
            if p == 0 && q == 0 {
                ensure(e.len() == 1 && e.get(&(0, 0)) == Some(&Ratio::new(1, 1)), || "identity pair moved".into())?;
            } else if p != q {
                ensure(e.is_empty(), || format!("pair ({p},{q}) maps to {e:?}"))?;
            } else {
                ensure(e.len() as u64 == nn - 1, || format!("pair ({p},{p}) has {} terms", e.len()))?;
                for (&(x, y), w) in e {
                    ensure(x == y && x != 0 && *w == coeff, || format!("pair ({p},{p}): term ({x},{y}) = {w}"))?;
                }
            }
        }
    }
    Ok(())
}

fn exact_design(n: usize, budget_s: f64) -> Outcome {
    let t = Instant::now();
    let mut sizes = Vec::new();
    for c in available(n) {
        let ens = enumerate_ensemble(n, c, MulStrategy::Schoolbook).map_err(|e| e.to_string())?;
        let w = Ratio::new(1, ens.len() as i64);
        let weighted: Vec<(&CliffordCircuit, Weight)> = ens.iter().map(|s| (&s.circuit, w)).collect();
        let rep = bilateral_twirl_check(&weighted).map_err(|e| e.to_string())?;
        ensure(rep.ok, || format!("{c}: {rep}"))?;
        check_twirl_table(&rep.table).map_err(|e| format!("{c}: {e}"))?;
        sizes.push(format!("{c}:{}", ens.len()));
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < budget_s, || format!("took {secs:.2} s, budget {budget_s} s"))?;
    Ok(format!("ensembles [{}], coefficient 1/{}, {secs:.2} s", sizes.join(", "), (1 << (2 * n)) - 1))
}

fn criterion_1() -> Outcome {
    exact_design(1, 1.0)
}

fn criterion_2() -> Outcome {
    exact_design(2, 60.0)
}

fn criterion_3() -> Outcome {
    let mut done = Vec::new();
    for n in 1..=2 {
        let nn = 1u64 << (2 * n);
        let uniform = Ratio::new(1, nn as i64 - 1);
        for c in available(n) {
            let ens = enumerate_ensemble(n, c, MulStrategy::Schoolbook).map_err(|e| e.to_string())?;
            // consecutive runs of 4^n samples share their SL2 part
            let u: Vec<CliffordCircuit> = ens.iter().step_by(nn as usize).map(|s| s.u_part()).collect();
            let w = Ratio::new(1, u.len() as i64);
            let rep = pauli_mixing_check(&u.iter().map(|c| (c, w)).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
            ensure(rep.ok, || format!("n={n} {c}: {rep}"))?;
            ensure(rep.rows.len() as u64 == nn - 1, || format!("n={n} {c}: {} rows", rep.rows.len()))?;
            for (start, row) in &rep.rows {
                ensure(
                    row.len() as u64 == nn - 1 && row.iter().all(|(&l, p)| l != 0 && *p == uniform),
                    || format!("n={n} {c}: start {start} image {row:?}"),
                )?;
            }
            done.push(format!("n={n} {c} |SL2|={}", u.len()));
        }
    }
    Ok(done.join(", "))
}

fn criterion_4() -> Outcome {
    let group = clifford_group_1q();
    ensure(group.len() == 24, || format!("Clifford group has {} elements", group.len()))?;
    let w = 1.0 / 24.0;
    let reference = frame_potential(&group.iter().map(|c| (c, w)).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
    let mut vals = Vec::new();
    for c in available(1) {
        let ens = enumerate_ensemble(1, c, MulStrategy::Schoolbook).map_err(|e| e.to_string())?;
        let fp = frame_potential(&ens.iter().map(|s| (&s.circuit, w)).collect::<Vec<_>>())
            .map_err(|e| e.to_string())?;
        ensure((fp - reference).abs() < 1e-9, || format!("{c}: {fp} vs reference {reference}"))?;
        vals.push(format!("{c}={fp:.12}"));
    }
    Ok(format!("reference {reference:.12}; {}", vals.join(", ")))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let mut checked = 0usize;
    for n in [2usize, 3, 5, 8, 16, 32, 64] {
        for c in available(n) {
            let strategy = MulStrategy::Karatsuba;
            let basis = basis_for(n, c, strategy).map_err(|e| e.to_string())?;
            for seed in 0..1000u64 {
                let s = sample_in(&basis, c, seed, strategy).map_err(|e| e.to_string())?;
                let rep = check_sample(&s).map_err(|e| e.to_string())?;
                ensure(rep.ok, || format!("n={n} {c} seed {seed}: {rep}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} samples, 0 failures, {:.1} s", t.elapsed().as_secs_f64()))
}

fn criterion_6() -> Outcome {
    for n in [2usize, 3, 5, 6, 9, 11] {
        let b = build_selfdual_basis(n, MulStrategy::Schoolbook).map_err(|e| e.to_string())?;
        // recomputed from the elements, all n^2 trace products
        let w = compute_w(&b);
        ensure(w == BitMatrix::identity(n), || format!("n={n}: W != I"))?;
    }
    Ok("W = I for n in {2,3,5,6,9,11}".into())
}

const L8_REFERENCE: [[u8; 8]; 8] = [
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, 1],
    [0, 0, 1, 0, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 1, 0, 1],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
];

fn criterion_7() -> Outcome {
    let l8 = l_matrix(8);
    for (i, row) in L8_REFERENCE.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            ensure(l8.entries.get(i, j) == (v == 1), || format!("L_8[{i}][{j}] differs from the reference"))?;
        }
    }
    let mut gates = vec![0usize; 257];
    for k in 1..=256usize {
        let c = synth_l_conversion(k, Direction::Forward);
        let l = l_matrix(k);
        let inputs: Vec<Bits> = (0..k).map(|j| Bits::unit(k, j)).collect();
        let imgs = basis_action(&c, &inputs).map_err(|e| e.to_string())?;
        for (j, img) in imgs.iter().enumerate() {
            ensure(img.output == l.entries.column(j), || format!("k={k}: column {j} wrong"))?;
        }
        gates[k] = c.gates.len();
    }
    let klogk = |k: usize| k as f64 * (k as f64).log2();
    let c = (2..=256).map(|k| gates[k] as f64 / klogk(k)).fold(0.0, f64::max);
    // the block recursion adds at most k CNOTs when doubling, so c <= 1/2
    let mut k = 1;
    while 2 * k <= 256 {
        ensure(gates[2 * k] <= 2 * gates[k] + k, || {
            format!("L_{}: {} gates > 2 * {} + {k}", 2 * k, gates[2 * k], gates[k])
        })?;
        k *= 2;
    }
    for k in 1..=256 {
        ensure(gates[k] <= gates[k.next_power_of_two()], || format!("k={k}: more gates than L_{}", k.next_power_of_two()))?;
    }
    ensure(c <= 0.5, || format!("fitted c = {c:.3} > 1/2"))?;
    Ok(format!("k <= 256 exact, L_8 matches; fitted c = {c:.3} (L_256 uses {} CNOTs)", gates[256]))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut count = 0;
    for n in 1..=8usize {
        for _ in 0..6 {
            let h = Bits::from_u64(2 * n - 1, rng.next_u64() & ((1u64 << (2 * n - 1)) - 1));
            let w = hankel_from_generator(&h, n);
            let inputs: Vec<Bits> = (0..1u64 << n).map(|x| Bits::from_u64(n, x)).collect();
            let generic = synth_vw_generic(&w).map_err(|e| e.to_string())?;
            ensure(generic.clifford_only, || "generic V_W flagged non-Clifford".into())?;
            let same = |c: &CliffordCircuit, what: &str| -> Result<(), String> {
                match check_diagonal_phases(c, &w, &inputs).map_err(|e| e.to_string())? {
                    None => Ok(()),
                    Some(x) => Err(format!("{what} n={n}: wrong phase on {x:?}")),
                }
            };
            same(&generic, "generic")?;
            for s in MulStrategy::ALL {
                let rec = synth_vw_recursive(&w, s).map_err(|e| e.to_string())?;
                ensure(rec.clifford_only, || "recursive V_W flagged non-Clifford".into())?;
                same(&rec, "recursive")?;
                let m4 = synth_vw_mod4(&w, s).map_err(|e| e.to_string())?;
                ensure(!m4.clifford_only, || "mod-4 V_W flagged Clifford-only".into())?;
                same(&m4, "mod4")?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} (W, strategy) cases agree on all labels; mod-4 flagged non-Clifford"))
}

fn bench(n: &[usize], c: Construction, s: &[MulStrategy], seeds: u64, workers: usize) -> Result<Vec<BenchRow>, String> {
    let args = BenchArgs {
        n: n.to_vec(),
        construction: vec![c],
        strategy: s.to_vec(),
        seed: 0,
        seeds,
        workers: Some(workers),
        output: None,
    };
    bench_rows(&args).map_err(|e| e.to_string())
}

fn growth(rows: &[BenchRow], s: MulStrategy) -> Vec<f64> {
    let g: Vec<f64> = rows.iter().filter(|r| r.strategy == s.to_string()).map(|r| r.gate_count).collect();
    g.windows(2).map(|w| w[1] / w[0]).collect()
}

fn criterion_9() -> Outcome {
    let rows = bench(
        &[128, 256, 512, 1024],
        Construction::PolyRecursive,
        &[MulStrategy::Schoolbook, MulStrategy::Karatsuba],
        32,
        1,
    )?;
    let k = growth(&rows, MulStrategy::Karatsuba);
    let s = growth(&rows, MulStrategy::Schoolbook);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.3}")).collect::<Vec<_>>().join("/");
    let msg = format!("karatsuba x{} per doubling, schoolbook x{}", fmt(&k), fmt(&s));
    ensure(k.len() == 3 && k.iter().all(|&r| r <= 3.5), || msg.clone())?;
    ensure(s.len() == 3 && s.iter().all(|&r| r >= 3.8), || msg.clone())?;
    Ok(msg)
}

fn criterion_10() -> Outcome {
    let rows = bench(&[64, 128, 256, 512, 1024], Construction::PolyMod4, &[MulStrategy::FftRadix3], 2, 1)?;
    let ratios: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.depth / (r.n as f64).log2())).collect();
    let base = ratios[0].1;
    let bound = 2.0 * base;
    let max = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let table = ratios.iter().map(|(n, r)| format!("{n}:{r:.1}")).collect::<Vec<_>>().join(" ");
    let msg = format!("depth/log2 n = {table}; constant {max:.1}, bound 2x(n=64) = {bound:.1}");
    ensure(ratios.len() == 5 && max <= bound, || msg.clone())?;
    Ok(msg)
}

fn criterion_11() -> Outcome {
    for n in 1..=6usize {
        let chain = ab_mixture_chain(n).map_err(|e| e.to_string())?;
        let nn = 1usize << (2 * n);
        let u = Ratio::new(1, nn as i64 - 1);
        for (l, row) in chain.rows.iter().enumerate().skip(1) {
            ensure(row[0] == Ratio::new(0, 1) && row[1..].iter().all(|p| *p == u), || {
                format!("n={n}: row {l} is not uniform")
            })?;
        }
        ensure(chain.is_uniform(), || format!("n={n}: is_uniform disagrees"))?;
    }
    Ok("rows exactly 1/(N^2-1) for n <= 6".into())
}

fn criterion_12() -> Outcome {
    let mut cases = 0;
    for c in Construction::ALL {
        for n in [3usize, 5, 16] {
            if !c.available(n) {
                continue;
            }
            for s in MulStrategy::ALL {
                let a = sample_text(n, c, s, 11, 6, Some(1)).map_err(|e| e.to_string())?;
                let b = sample_text(n, c, s, 11, 6, Some(1)).map_err(|e| e.to_string())?;
                let p = sample_text(n, c, s, 11, 6, Some(4)).map_err(|e| e.to_string())?;
                ensure(a == b, || format!("{c} n={n} {s}: two runs differ"))?;
                ensure(a == p, || format!("{c} n={n} {s}: 1 vs 4 workers differ"))?;
                cases += 1;
            }
        }
    }
    let strip = |rows: Vec<BenchRow>| -> Vec<BenchRow> {
        rows.into_iter().map(|r| BenchRow { wall_time: 0.0, ..r }).collect()
    };
    let all = [MulStrategy::Schoolbook, MulStrategy::Karatsuba, MulStrategy::FftRadix3];
    let one = strip(bench(&[16, 32, 64], Construction::PolyMod4, &all, 2, 1)?);
    let four = strip(bench(&[16, 32, 64], Construction::PolyMod4, &all, 2, 4)?);
    ensure(one == four, || "bench rows depend on worker count".into())?;
    Ok(format!("{cases} sample batches byte-identical across runs and worker counts; bench rows stable"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("exact 2-design at n=1", criterion_1),
        ("exact 2-design at n=2", criterion_2),
        ("Pauli mixing at n <= 2", criterion_3),
        ("frame potential at n=1", criterion_4),
        ("induced action at scale", criterion_5),
        ("self-dual basis W = I", criterion_6),
        ("L_k network", criterion_7),
        ("V_W equivalence", criterion_8),
        ("sub-quadratic gate growth", criterion_9),
        ("depth per log2 n", criterion_10),
        ("A/B mixture exactness", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        match outcome {
            Ok(d) => println!("PASS criterion {:>2} {name}: {d}", i + 1),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name}: {d}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
