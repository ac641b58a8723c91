use num_rational::Ratio;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2design::bases::BasisSpec;
use sl2design::circuit::{CliffordCircuit, Gate, GateKind};
use sl2design::pauli::PauliOperator;
use sl2design::sampler::{enumerate_ensemble, Construction};
use sl2design::sl2::Sl2Element;
use sl2design::verify::*;
use sl2design::{Bits, FieldCtx, MulStrategy};

fn pauli_matrix(p: &PauliOperator) -> Vec<Amplitude> {
    let n = p.n();
    let dim = 1usize << n;
    let (a, b) = (p.a.to_u64(), p.b.to_u64());
    let mut m = vec![Amplitude::ZERO; dim * dim];
    for col in 0..dim as u64 {
        let sign = if (b & col).count_ones() % 2 == 1 { 2 } else { 0 };
        m[((col ^ a) as usize) * dim + col as usize] = Amplitude::i_pow(p.phase_exp + sign);
    }
    m
}

fn matmul(dim: usize, x: &[Amplitude], y: &[Amplitude]) -> Vec<Amplitude> {
    let mut out = vec![Amplitude::ZERO; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            for j in 0..dim {
                out[i * dim + j] = out[i * dim + j] + x[i * dim + k] * y[k * dim + j];
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

fn random_clifford(rng: &mut ChaCha8Rng, n: usize, len: usize) -> CliffordCircuit {
    let kinds = [
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Cnot,
        GateKind::Cz,
        GateKind::Swap,
    ];
    let mut c = CliffordCircuit::new(n);
    while c.gates.len() < len {
        let k = kinds[rng.next_u32() as usize % if n == 1 { 6 } else { kinds.len() }];
        let a = rng.next_u32() as usize % n;
        let b = rng.next_u32() as usize % n;
        if k.arity() == 2 && a == b {
            continue;
        }
        c.push(if k.arity() == 1 { Gate::one(k, a) } else { Gate::two(k, a, b) });
    }
    c
}

#[test]
fn tableau_matches_dense_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..3000 {
        let n = 1 + trial % 3;
        let len = 1 + rng.next_u32() as usize % 40;
        let c = random_clifford(&mut rng, n, len);
        let tab = SymplecticTableau::run(&c).unwrap();
        assert!(tab.preserves_commutation());
        let u = dense_simulate(&c).unwrap();
        let dim = u.dim;
        let ud = adjoint(dim, &u.entries);
        for row in 0..2 * n {
            let g = if row < n { PauliOperator::x(n, row) } else { PauliOperator::z(n, row - n) };
            let want = matmul(dim, &matmul(dim, &u.entries, &pauli_matrix(&g)), &ud);
            assert_eq!(pauli_matrix(&tab.data_row(row).unwrap()), want, "{:?}", c.gates);
        }
    }
}

#[test]
fn single_gate_rules() {
    let mut h = CliffordCircuit::new(1);
    h.push(Gate::h(0));
    let t = SymplecticTableau::run(&h).unwrap();
    assert_eq!(t.data_row(0).unwrap(), PauliOperator::z(1, 0));
    assert_eq!(t.data_row(1).unwrap(), PauliOperator::x(1, 0));
    let mut s = CliffordCircuit::new(1);
    s.push(Gate::s(0));
    let t = SymplecticTableau::run(&s).unwrap();
    // S X S† = Y = i X Z
    assert_eq!(t.data_row(0).unwrap(), PauliOperator::new(Bits::unit(1, 0), Bits::unit(1, 0), 1));
    let mut cx = CliffordCircuit::new(2);
    cx.push(Gate::cnot(0, 1));
    let t = SymplecticTableau::run(&cx).unwrap();
    assert_eq!(t.data_row(0).unwrap().a, Bits::from_u64(2, 0b11));
    assert_eq!(t.data_row(3).unwrap().b, Bits::from_u64(2, 0b11));
    let mut cs = CliffordCircuit::new(2);
    cs.push(Gate::cs(0, 1));
    assert!(SymplecticTableau::run(&cs).is_err());
}

#[test]
fn dense_gate_matrices() {
    let r = Amplitude::inv_sqrt2();
    let mut h = CliffordCircuit::new(1);
    h.push(Gate::h(0));
    let u = dense_simulate(&h).unwrap();
    assert_eq!(u.entries, vec![r, r, r, -r]);
    let mut s = CliffordCircuit::new(1);
    s.push(Gate::s(0));
    assert_eq!(dense_simulate(&s).unwrap().entries, vec![Amplitude::ONE, Amplitude::ZERO, Amplitude::ZERO, Amplitude::i_pow(1)]);
    let mut cs = CliffordCircuit::new(2);
    cs.push(Gate::cs(0, 1));
    let u = dense_simulate(&cs).unwrap();
    for x in 0..4 {
        let want = if x == 3 { Amplitude::i_pow(1) } else { Amplitude::ONE };
        assert_eq!(u.get(x, x), want);
    }
    assert!(dense_simulate(&CliffordCircuit::new(4)).is_err());
}

#[test]
fn ancilla_checks() {
    let ctx = FieldCtx::new(1, MulStrategy::Schoolbook).unwrap();
    let basis = BasisSpec::polynomial(&ctx);
    let id = Sl2Element::identity(&ctx);
    assert!(check_induces(&CliffordCircuit::new(1), &id, &basis).unwrap().ok);
    let mut c = CliffordCircuit::new(1);
    c.n_ancilla = 1;
    c.push(Gate::x(1));
    let rep = check_induces(&c, &id, &basis).unwrap();
    assert!(!rep.ok);
    let mut c = CliffordCircuit::new(1);
    c.n_ancilla = 1;
    c.push(Gate::cnot(0, 1));
    assert!(!check_induces(&c, &id, &basis).unwrap().ok);
    c.push(Gate::cnot(0, 1));
    assert!(check_induces(&c, &id, &basis).unwrap().ok);
    assert!(basis_action(&c, &[Bits::from_u64(1, 1)]).is_ok());
    c.gates.pop();
    assert!(basis_action(&c, &[Bits::from_u64(1, 1)]).is_err());
}

fn n1_ensemble() -> Vec<(CliffordCircuit, Weight)> {
    enumerate_ensemble(1, Construction::PolyRecursive, MulStrategy::Schoolbook)
        .unwrap()
        .into_iter()
        .map(|s| (s.circuit, Ratio::new(1, 24)))
        .collect()
}

#[test]
fn twirl_entries_at_n1() {
    let rep = bilateral_twirl_check(&n1_ensemble()).unwrap();
    assert!(rep.ok);
    // labels: X = 1, Z = 2, Y = 3
    assert!(rep.table.get(1, 2).is_empty());
    let xx = rep.table.get(1, 1);
    assert_eq!(xx.len(), 3);
    for j in 1..4 {
        assert_eq!(xx[&(j, j)], Ratio::new(1, 3));
    }
    assert_eq!(rep.table.get(0, 0)[&(0, 0)], Ratio::new(1, 1));
}

#[test]
fn mixing_check_detects_point_mass() {
    let rep = pauli_mixing_check(&[(CliffordCircuit::new(1), Ratio::new(1, 1))]).unwrap();
    assert!(!rep.ok);
    let rep = bilateral_twirl_check(&[(CliffordCircuit::new(1), Ratio::new(1, 1))]).unwrap();
    assert!(!rep.ok);
    let u: Vec<(CliffordCircuit, Weight)> =
        enumerate_ensemble(1, Construction::Selfdual, MulStrategy::Schoolbook)
            .unwrap()
            .iter()
            .step_by(4)
            .map(|s| (s.u_part(), Ratio::new(1, 6)))
            .collect();
    let rep = pauli_mixing_check(&u).unwrap();
    assert!(rep.ok);
    for row in rep.rows.values() {
        assert!(row.values().all(|p| *p == Ratio::new(2, 6)));
    }
}

#[test]
fn frame_potentials() {
    let id = frame_potential(&[(CliffordCircuit::new(1), 1.0)]).unwrap();
    assert!((id - 16.0).abs() < 1e-12);
    let cl = clifford_group_1q();
    assert_eq!(cl.len(), 24);
    let w = 1.0 / 24.0;
    let reference = frame_potential(&cl.iter().map(|c| (c.clone(), w)).collect::<Vec<_>>()).unwrap();
    for c in Construction::ALL {
        let ens: Vec<(CliffordCircuit, f64)> = enumerate_ensemble(1, c, MulStrategy::Schoolbook)
            .unwrap()
            .into_iter()
            .map(|s| (s.circuit, w))
            .collect();
        let fp = frame_potential(&ens).unwrap();
        assert!((fp - reference).abs() < 1e-9, "{c}: {fp} vs {reference}");
    }
    // a 2-design reaches the Haar value 2
    assert!((reference - 2.0).abs() < 1e-9);
}

#[test]
fn quadratic_form_examples() {
    use sl2design::BitMatrix;
    let w = BitMatrix::from_rows(vec![Bits::from_u64(2, 0b10), Bits::from_u64(2, 0b11)]);
    assert_eq!(quadratic_form_mod4(&w, &Bits::from_u64(2, 0b11)), 3);
    assert_eq!(quadratic_form_mod4(&w, &Bits::from_u64(2, 0b10)), 1);
    assert_eq!(quadratic_form_mod4(&w, &Bits::from_u64(2, 0b01)), 0);
}
