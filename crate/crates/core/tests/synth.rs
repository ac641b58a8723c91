use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sl2design::bases::{build_selfdual_basis, hankel_from_generator, l_matrix, BasisSpec};
use sl2design::circuit::{CliffordCircuit, Gate};
use sl2design::sl2::Sl2Element;
use sl2design::synth::*;
use sl2design::verify::*;
use sl2design::{BitMatrix, Bits, FieldCtx, FieldElement, MulStrategy};

fn rand_bits(rng: &mut ChaCha8Rng, n: usize) -> Bits {
    let words = (0..n.div_ceil(64)).map(|_| rng.next_u64()).collect();
    Bits::from_words(n, words)
}

fn rand_nonzero(rng: &mut ChaCha8Rng, basis: &BasisSpec) -> FieldElement {
    loop {
        let e = basis.element(&rand_bits(rng, basis.n()));
        if !e.is_zero() {
            return e;
        }
    }
}

fn check_mr(basis: &BasisSpec, r: &FieldElement, strategy: MulStrategy, inputs: &[Bits]) {
    let c = synth_mr(basis, r, strategy).unwrap();
    assert!(c.clifford_only);
    let imgs = basis_action(&c, inputs).unwrap();
    for (a, img) in inputs.iter().zip(imgs) {
        let want = basis.coords(&r.mul(&basis.element(a)).unwrap());
        assert_eq!(img.output, want, "n={} r={} {:?}", basis.n(), r, strategy);
        assert_eq!(img.phase, 0);
    }
}

#[test]
fn toffoli_pattern_is_exact() {
    let mut c = CliffordCircuit::new(3);
    for g in [
        Gate::h(2),
        Gate::cs(1, 2),
        Gate::cnot(0, 1),
        Gate::cz(1, 2),
        Gate::cs(1, 2),
        Gate::cnot(0, 1),
        Gate::cs(0, 2),
        Gate::h(2),
    ] {
        c.push(g);
    }
    for x in 0..8u64 {
        let out = sparse_simulate(&c, &Bits::from_u64(3, x)).unwrap();
        let want = if x & 3 == 3 { x ^ 4 } else { x };
        assert_eq!(out, vec![(Bits::from_u64(3, want), Amplitude::ONE)]);
        let cl = basis_action(&c, &[Bits::from_u64(3, x)]).unwrap();
        assert_eq!(cl[0].output.to_u64(), want);
        assert_eq!(cl[0].phase, 0);
    }
}

#[test]
fn mr_gf4_alpha() {
    let ctx = FieldCtx::new(2, MulStrategy::Schoolbook).unwrap();
    let basis = BasisSpec::polynomial(&ctx);
    let alpha = FieldElement::generator(&ctx);
    let c = synth_mr(&basis, &alpha, MulStrategy::Schoolbook).unwrap();
    let img = basis_action(&c, &[Bits::from_bools(&[true, false])]).unwrap();
    assert_eq!(img[0].output, Bits::from_bools(&[false, true]));
    let all: Vec<Bits> = (0..4).map(|x| Bits::from_u64(2, x)).collect();
    check_mr(&basis, &alpha, MulStrategy::Schoolbook, &all);
}

#[test]
fn mr_one_is_empty() {
    let ctx = FieldCtx::new(8, MulStrategy::Schoolbook).unwrap();
    let basis = BasisSpec::polynomial(&ctx);
    let c = synth_mr(&basis, &FieldElement::one(&ctx), MulStrategy::Karatsuba).unwrap();
    assert!(c.gates.is_empty());
    assert!(synth_mr(&basis, &FieldElement::zero(&ctx), MulStrategy::Schoolbook).is_err());
}

#[test]
fn mr_polynomial_all_strategies() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [1, 2, 3, 5, 8, 13, 33, 64, 100] {
        let ctx = FieldCtx::new(n, MulStrategy::Schoolbook).unwrap();
        let basis = BasisSpec::polynomial(&ctx);
        let inputs: Vec<Bits> = (0..64).map(|_| rand_bits(&mut rng, n)).collect();
        for _ in 0..3 {
            let r = rand_nonzero(&mut rng, &basis);
            for s in MulStrategy::ALL {
                check_mr(&basis, &r, s, &inputs);
            }
        }
    }
}

#[test]
fn mr_selfdual_matches_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [1, 2, 3, 5, 6, 9, 11, 23, 29] {
        let basis = build_selfdual_basis(n, MulStrategy::Schoolbook).unwrap();
        let inputs: Vec<Bits> = (0..100).map(|_| rand_bits(&mut rng, n)).collect();
        let reps = if n == 5 { 100 } else { 4 };
        for i in 0..reps {
            let r = rand_nonzero(&mut rng, &basis);
            let s = MulStrategy::ALL[i % 3];
            check_mr(&basis, &r, s, &inputs[..if n == 5 { 1 } else { 100 }]);
            if n == 5 {
                check_mr(&basis, &r, s, &inputs);
            }
        }
    }
}

#[test]
fn mr_fft_large_matches_field() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [81, 150] {
        let ctx = FieldCtx::new(n, MulStrategy::Schoolbook).unwrap();
        let basis = BasisSpec::polynomial(&ctx);
        let inputs: Vec<Bits> = (0..64).map(|_| rand_bits(&mut rng, n)).collect();
        let r = rand_nonzero(&mut rng, &basis);
        check_mr(&basis, &r, MulStrategy::FftRadix3, &inputs);
    }
}

#[test]
fn mr_induces_diag() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [2, 3, 5, 8] {
        let ctx = FieldCtx::new(n, MulStrategy::Schoolbook).unwrap();
        let mut bases = vec![BasisSpec::polynomial(&ctx)];
        if let Ok(b) = build_selfdual_basis(n, MulStrategy::Schoolbook) {
            bases.push(b);
        }
        for basis in &bases {
            for i in 0..25 {
                let r = rand_nonzero(&mut rng, basis);
                let c = synth_mr(basis, &r, MulStrategy::ALL[i % 3]).unwrap();
                let rep = check_induces(&c, &Sl2Element::diag(&r).unwrap(), basis).unwrap();
                assert!(rep.ok, "{:?}", rep.counterexample);
            }
        }
    }
}

#[test]
fn l_conversion_simulates_l_matrix() {
    for k in (1..=40).chain([64, 100, 128, 256]) {
        let c = synth_l_conversion(k, Direction::Forward);
        let l = l_matrix(k);
        let inputs: Vec<Bits> = (0..k).map(|j| Bits::unit(k, j)).collect();
        let imgs = basis_action(&c, &inputs).unwrap();
        for (j, img) in imgs.iter().enumerate() {
            assert_eq!(img.output, l.entries.column(j), "k={k} column {j}");
        }
        let inv = synth_l_conversion(k, Direction::Inverse);
        let both = CliffordCircuit::compose(&c, &inv).unwrap();
        let imgs = basis_action(&both, &inputs).unwrap();
        for (j, img) in imgs.iter().enumerate() {
            assert_eq!(img.output, inputs[j]);
        }
    }
}

#[test]
fn cnot_network_matches_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = BitMatrix::from_fn(8, 8, |_, _| rng.next_u32() & 1 == 1);
    let c = cnot_network(&a).unwrap();
    assert_eq!(c.gates.len(), (0..8).map(|i| a.row(i).count_ones()).sum::<usize>());
    for x in 0..256u64 {
        let input = Bits::from_u64(16, x);
        let img = basis_action(&CliffordCircuit { n_data: 16, n_ancilla: 0, ..c.clone() }, &[input]).unwrap();
        let want = a.mul_vec(&Bits::from_u64(8, x));
        assert_eq!(img[0].output.slice(0, 8).to_u64(), x);
        assert_eq!(img[0].output.slice(8, 8), want);
    }
    assert!(cnot_network(&BitMatrix::zeros(4, 4)).unwrap().gates.is_empty());
    assert_eq!(cnot_network(&BitMatrix::identity(5)).unwrap().gates.len(), 5);
}

#[test]
fn inplace_program_matches_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut done = 0;
    while done < 20 {
        let a = BitMatrix::from_fn(10, 10, |_, _| rng.next_u32() & 1 == 1);
        if a.inverse().is_none() {
            assert!(inplace_program(&a).is_err());
            continue;
        }
        assert_eq!(inplace_program(&a).unwrap().matrix(), a);
        done += 1;
    }
}

fn random_hankel(rng: &mut ChaCha8Rng, n: usize) -> BitMatrix {
    hankel_from_generator(&rand_bits(rng, 2 * n - 1), n)
}

#[test]
fn vw_variants_agree_with_quadratic_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=8 {
        for _ in 0..4 {
            let w = random_hankel(&mut rng, n);
            let inputs: Vec<Bits> = (0..1u64 << n).map(|x| Bits::from_u64(n, x)).collect();
            let generic = synth_vw_generic(&w).unwrap();
            assert!(generic.clifford_only);
            assert_eq!(check_diagonal_phases(&generic, &w, &inputs).unwrap(), None);
            for s in MulStrategy::ALL {
                let rec = synth_vw_recursive(&w, s).unwrap();
                assert!(rec.clifford_only);
                assert_eq!(check_diagonal_phases(&rec, &w, &inputs).unwrap(), None, "recursive n={n}");
                let m4 = synth_vw_mod4(&w, s).unwrap();
                assert!(!m4.clifford_only || w.rows() == 0 || m4.gates.is_empty());
                assert_eq!(check_diagonal_phases(&m4, &w, &inputs).unwrap(), None, "mod4 n={n} {s}");
            }
        }
    }
}

#[test]
fn vw_mod4_exact_small() {
    let w = BitMatrix::from_rows(vec![Bits::from_u64(2, 0b10), Bits::from_u64(2, 0b11)]);
    let c = synth_vw_mod4(&w, MulStrategy::Schoolbook).unwrap();
    assert!(!c.clifford_only);
    let u = dense_simulate(&c).unwrap();
    for x in 0..4usize {
        let k = quadratic_form_mod4(&w, &Bits::from_u64(2, x as u64));
        for y in 0..4 {
            let want = if x == y { Amplitude::i_pow(k) } else { Amplitude::ZERO };
            assert_eq!(u.get(y, x), want);
        }
    }
    assert_eq!(quadratic_form_mod4(&w, &Bits::from_u64(2, 3)), 3);
    assert_eq!(quadratic_form_mod4(&w, &Bits::from_u64(2, 2)), 1);
}

#[test]
fn vw_recursive_base_case() {
    let w = BitMatrix::identity(1);
    let c = synth_vw_recursive(&w, MulStrategy::Schoolbook).unwrap();
    assert_eq!(c.gates, vec![Gate::s(0)]);
    assert!(synth_vw_recursive(&BitMatrix::zeros(4, 4), MulStrategy::Schoolbook).unwrap().gates.is_empty());
    let asym = BitMatrix::from_rows(vec![Bits::from_u64(2, 0b10), Bits::from_u64(2, 0b00)]);
    assert!(synth_vw_generic(&asym).is_err());
    let not_hankel = BitMatrix::identity(3);
    assert!(synth_vw_recursive(&not_hankel, MulStrategy::Schoolbook).is_err());
}

#[test]
fn vw_induces_lower_unit() {
    for n in [2, 3, 8, 16] {
        let ctx = FieldCtx::new(n, MulStrategy::Schoolbook).unwrap();
        let basis = BasisSpec::polynomial(&ctx);
        let lower = Sl2Element::lower(&FieldElement::one(&ctx));
        for c in [
            synth_vw_generic(basis.w()).unwrap(),
            synth_vw_recursive(basis.w(), MulStrategy::Karatsuba).unwrap(),
        ] {
            let rep = check_induces(&c, &lower, &basis).unwrap();
            assert!(rep.ok, "{:?}", rep.counterexample);
        }
    }
}

#[test]
fn transversal_layers() {
    let ctx = FieldCtx::new(3, MulStrategy::Schoolbook).unwrap();
    let basis = build_selfdual_basis(3, MulStrategy::Schoolbook).unwrap();
    let h = synth_transversal(Transversal::HAll, 3);
    assert!(check_induces(&h, &Sl2Element::swap(&ctx), &basis).unwrap().ok);
    let s = synth_transversal(Transversal::SAll, 3);
    let tab = SymplecticTableau::run(&s).unwrap();
    // S⊗ⁿ: X^a Z^b ↦ X^a Z^{a+b}
    let img = tab.data_row(0).unwrap();
    assert_eq!(img.a, Bits::unit(3, 0));
    assert_eq!(img.b, Bits::unit(3, 0));
    assert!(check_induces(&s, &Sl2Element::lower(&FieldElement::one(&ctx)), &basis).unwrap().ok);
}

#[test]
fn pauli_layer() {
    use sl2design::pauli::PauliOperator;
    let p = PauliOperator::new(Bits::from_u64(2, 0b01), Bits::from_u64(2, 0b10), 0);
    assert_eq!(synth_pauli(&p).gates, vec![Gate::x(0), Gate::z(1)]);
    assert!(synth_pauli(&PauliOperator::identity(4)).gates.is_empty());
}
