use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_8, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::linalg::DensityMatrix;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn two_qubit(amps: [C64; 4]) -> StateVector {
    StateVector::new(vec![2, 2], amps.to_vec()).unwrap()
}

fn bell() -> StateVector {
    two_qubit([c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])
}

fn gg() -> StateVector {
    StateVector::basis(&[2, 2], &[0, 0]).unwrap()
}

fn alpha_state(alpha: f64) -> StateVector {
    two_qubit([c(alpha.cos()), c(0.0), c(0.0), c(alpha.sin())])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_chi(rng: &mut ChaCha8Rng) -> StateVector {
    StateVector::random(&[2, 2], rng).unwrap()
}

fn ket(dim: usize, level: usize) -> Vec<C64> {
    StateVector::basis(&[dim], &[level]).unwrap().into_amplitudes()
}

fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
}

// --- subspace operators ---

#[test]
fn sigma_z_on_g_e_block() {
    let z = subspace_pauli(Axis::Z, AncillaLevel::G.index(), AncillaLevel::E.index(), 4).unwrap();
    assert_eq!(z, ComplexMatrix::diagonal(&[c(-1.0), c(0.0), c(1.0), c(0.0)]));
}

#[test]
fn sigma_x_flips_g_to_e() {
    let x = subspace_pauli(Axis::X, 0, 2, 4).unwrap();
    assert_eq!(x.apply(&ket(4, 0)).unwrap(), ket(4, 2));
}

#[test]
fn sigma_y_squares_to_block_projector() {
    let y = subspace_pauli(Axis::Y, 1, 3, 4).unwrap();
    let proj = &ComplexMatrix::outer_basis(4, 1, 1) + &ComplexMatrix::outer_basis(4, 3, 3);
    assert!((&y * &y).max_abs_diff(&proj) < 1e-15);
}

#[test]
fn subspace_pauli_rejects_repeated_level() {
    assert!(matches!(subspace_pauli(Axis::X, 2, 2, 4), Err(Error::SameLevel(2))));
    assert!(matches!(subspace_pauli(Axis::X, 0, 4, 4), Err(Error::LevelOutOfRange { .. })));
    assert!(subspace_rotation(Axis::Y, 1, 1, 0.3, 4).is_err());
}

#[test]
fn y_rotation_by_half_pi_on_gp_ep() {
    let r = subspace_rotation(Axis::Y, 1, 3, FRAC_PI_2, 4).unwrap();
    let out = r.apply(&ket(4, 1)).unwrap();
    let expected = [c(0.0), c(FRAC_1_SQRT_2), c(0.0), c(-FRAC_1_SQRT_2)];
    assert!(close(&out, &expected, 1e-15));
}

#[test]
fn zero_angle_rotation_is_identity() {
    for axis in [Axis::X, Axis::Y, Axis::Z] {
        assert_eq!(subspace_rotation(axis, 0, 3, 0.0, 4).unwrap(), ComplexMatrix::identity(4));
    }
}

#[test]
fn full_turn_negates_block_only() {
    let r = subspace_rotation(Axis::Y, 0, 2, 2.0 * PI, 4).unwrap();
    let expected = ComplexMatrix::diagonal(&[c(-1.0), c(1.0), c(-1.0), c(1.0)]);
    assert!(r.max_abs_diff(&expected) < 1e-14);
}

// --- preparation ---

#[test]
fn preparation_angles_reproduce_each_target_state() {
    use AncillaLevel::*;
    let [t1, t2, t3] = preparation_angles();
    let r1 = subspace_rotation(Axis::Y, G.index(), E.index(), t1, 4).unwrap().apply(&ket(4, 0)).unwrap();
    let s6 = 6.0_f64.sqrt();
    assert!(close(&r1, &[c(5.0_f64.sqrt() / s6), c(0.0), c(1.0 / s6), c(0.0)], 1e-15));
    let r2 = subspace_rotation(Axis::Y, G.index(), Gp.index(), t2, 4).unwrap().apply(&ket(4, 0)).unwrap();
    let s5 = 5.0_f64.sqrt();
    assert!(close(&r2, &[c(3.0_f64.sqrt() / s5), c(2.0_f64.sqrt() / s5), c(0.0), c(0.0)], 1e-15));
    let r3 = subspace_rotation(Axis::Y, Gp.index(), Ep.index(), t3, 4).unwrap().apply(&ket(4, 1)).unwrap();
    assert!(close(&r3, &[c(0.0), c(FRAC_1_SQRT_2), c(0.0), c(-FRAC_1_SQRT_2)], 1e-15));
}

#[test]
fn prepared_amplitudes_match_fixture() {
    let s = prepare_ancilla(&ProtocolState::new(&gg()).unwrap()).unwrap();
    assert_eq!(s.stage(), Stage::Prepared);
    let amps: Vec<f64> = AncillaLevel::ALL.iter().map(|&l| s.branch(l).amplitudes()[0].re).collect();
    let expected = [0.7071067811865475, 0.4082482904638631, 0.4082482904638631, -0.4082482904638631];
    for (a, e) in amps.iter().zip(expected) {
        assert!((a - e).abs() < 1e-15, "{amps:?}");
    }
}

#[test]
fn preparation_leaves_qubits_untouched() {
    let mut r = rng(11);
    for _ in 0..10 {
        let chi = random_chi(&mut r);
        let s = prepare_ancilla(&ProtocolState::new(&chi).unwrap()).unwrap();
        let anc: Vec<C64> = prepared_ancilla_amplitudes().iter().map(|&a| c(a)).collect();
        let target = StateVector::new(vec![4], anc).unwrap().tensor(&chi);
        assert!((s.state().overlap(&target).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn preparation_is_undone_by_reversed_inverse_rotations() {
    let chi = random_chi(&mut rng(3));
    let mut s = prepare_ancilla(&ProtocolState::new(&chi).unwrap()).unwrap().state().clone();
    for (j, k, t) in preparation_rotations().iter().rev() {
        s.apply_local(&subspace_rotation(Axis::Y, j.index(), k.index(), -t, 4).unwrap(), &[ANCILLA]).unwrap();
    }
    let start = ProtocolState::new(&chi).unwrap();
    assert!(close(s.amplitudes(), start.state().amplitudes(), 1e-15));
}

#[test]
fn stages_enforce_order() {
    let s = ProtocolState::new(&bell()).unwrap();
    assert!(matches!(
        run_controlled_stage(&s),
        Err(Error::WrongStage { expected: Stage::Prepared, found: Stage::Initial })
    ));
    assert!(run_final_rotations(&s).is_err());
    assert!(ancilla_probabilities(&s).is_err());
    let p = prepare_ancilla(&s).unwrap();
    assert!(prepare_ancilla(&p).is_err());
}

#[test]
fn protocol_rejects_bad_inputs() {
    let unnormalized = two_qubit([c(1.0), c(1.0), c(0.0), c(0.0)]);
    assert!(matches!(ProtocolState::new(&unnormalized), Err(Error::NotNormalized(_))));
    let qutrit = StateVector::basis(&[3], &[0]).unwrap();
    assert!(ProtocolState::new(&qutrit).is_err());
}

// --- controlled operations ---

fn g_plus_e(chi: &StateVector) -> ProtocolState {
    let anc = [c(FRAC_1_SQRT_2), c(0.0), c(FRAC_1_SQRT_2), c(0.0)];
    let state = StateVector::new(vec![4], anc.to_vec()).unwrap().tensor(chi);
    ProtocolState::from_parts(state, Stage::Prepared)
}

fn on_target(u: &ComplexMatrix, chi: &StateVector) -> StateVector {
    let mut out = chi.clone();
    out.apply_local(u, &[0]).unwrap();
    out
}

#[test]
fn controlled_flip_acts_on_control_branch_only() {
    let chi = random_chi(&mut rng(5));
    let out = controlled_unitary(&g_plus_e(&chi), AncillaLevel::E, &pauli::x()).unwrap();
    let half: Vec<C64> = chi.amplitudes().iter().map(|a| a * FRAC_1_SQRT_2).collect();
    let flipped: Vec<C64> = on_target(&pauli::x(), &chi).amplitudes().iter().map(|a| a * FRAC_1_SQRT_2).collect();
    assert!(close(out.branch(AncillaLevel::G).amplitudes(), &half, 1e-15));
    assert!(close(out.branch(AncillaLevel::E).amplitudes(), &flipped, 1e-15));
}

#[test]
fn unoccupied_control_changes_nothing() {
    let s = g_plus_e(&bell());
    let out = controlled_unitary(&s, AncillaLevel::Ep, &pauli::y()).unwrap();
    assert_eq!(out, s);
}

#[test]
fn controlled_u_then_dagger_is_identity() {
    let u = subspace_rotation(Axis::X, 0, 1, 0.77, 2).unwrap();
    let u = &u * &subspace_rotation(Axis::Z, 0, 1, -1.3, 2).unwrap();
    let s = g_plus_e(&random_chi(&mut rng(8)));
    let there = controlled_unitary(&s, AncillaLevel::E, &u).unwrap();
    let back = controlled_unitary(&there, AncillaLevel::E, &u.dagger()).unwrap();
    assert!(close(back.state().amplitudes(), s.state().amplitudes(), 1e-15));
}

#[test]
fn controlled_unitary_rejects_non_unitary() {
    let m = ComplexMatrix::diagonal(&[c(1.0), c(0.5)]);
    assert!(matches!(controlled_unitary(&g_plus_e(&bell()), AncillaLevel::E, &m), Err(Error::NotUnitary(_))));
}

#[test]
fn controlled_stage_on_gg_puts_e_on_target_in_e_branch() {
    let s = run_controlled_stage(&prepare_ancilla(&ProtocolState::new(&gg()).unwrap()).unwrap()).unwrap();
    // E branch carries σx|g⟩ = |e⟩ on the target: amplitude sits on |eg⟩ (index 2)
    let e = s.branch(AncillaLevel::E);
    let b = 1.0 / 6.0_f64.sqrt();
    assert!(close(e.amplitudes(), &[c(0.0), c(0.0), c(b), c(0.0)], 1e-15));
    // G' branch: σy|g⟩ = −i|e⟩ in this convention
    let gp = s.branch(AncillaLevel::Gp);
    assert!(close(gp.amplitudes(), &[c(0.0), c(0.0), C64::new(0.0, -b), c(0.0)], 1e-15));
    // E' branch: −(−σz)|g⟩·(−b) with σz|g⟩ = −|g⟩ gives −b|gg⟩
    let ep = s.branch(AncillaLevel::Ep);
    assert!(close(ep.amplitudes(), &[c(-b), c(0.0), c(0.0), c(0.0)], 1e-15));
}

#[test]
fn controlled_stage_matches_assembled_operator() {
    let mut r = rng(21);
    let u = &stage_unitary(Stage::Controlled).unwrap() * &stage_unitary(Stage::Prepared).unwrap();
    assert!(u.is_unitary(1e-12));
    for _ in 0..10 {
        let chi = random_chi(&mut r);
        let init = ProtocolState::new(&chi).unwrap();
        let s = run_controlled_stage(&prepare_ancilla(&init).unwrap()).unwrap();
        let expected = u.apply(init.state().amplitudes()).unwrap();
        assert!(close(s.state().amplitudes(), &expected, 1e-12));
        // branch-wise form: |G⟩/√2 + (|G'⟩σy + |E⟩σx + |E'⟩σz)/√6
        let b = 1.0 / 6.0_f64.sqrt();
        for (level, op, w) in [
            (AncillaLevel::G, pauli::identity(), FRAC_1_SQRT_2),
            (AncillaLevel::Gp, pauli::y(), b),
            (AncillaLevel::E, pauli::x(), b),
            (AncillaLevel::Ep, pauli::z(), b),
        ] {
            let want: Vec<C64> = on_target(&op, &chi).amplitudes().iter().map(|a| a * w).collect();
            assert!(close(s.branch(level).amplitudes(), &want, 1e-12));
        }
        assert!((s.state().norm() - 1.0).abs() < 1e-12);
    }
}

// --- final rotations ---

#[test]
fn final_branches_are_q_operators_with_signs() {
    let povm = povm_elements();
    let signs = [1.0, -1.0, -1.0, 1.0];
    let mut r = rng(34);
    for _ in 0..20 {
        let chi = random_chi(&mut r);
        let s = run_protocol(&chi).unwrap();
        assert_eq!(s.stage(), Stage::Final);
        assert!((s.state().norm() - 1.0).abs() < 1e-12);
        for (a, level) in AncillaLevel::ALL.iter().enumerate() {
            let want: Vec<C64> = on_target(&povm.q[a], &chi).amplitudes().iter().map(|z| z * signs[a]).collect();
            assert!(close(s.branch(*level).amplitudes(), &want, 1e-12), "branch {level}");
        }
    }
}

#[test]
fn final_stage_matches_rotation_product_in_listed_order() {
    let chi = random_chi(&mut rng(55));
    let init = ProtocolState::new(&chi).unwrap();
    let u = &stage_unitary(Stage::Final).unwrap()
        * &(&stage_unitary(Stage::Controlled).unwrap() * &stage_unitary(Stage::Prepared).unwrap());
    let expected = u.apply(init.state().amplitudes()).unwrap();
    assert!(close(run_protocol(&chi).unwrap().state().amplitudes(), &expected, 1e-12));
}

// --- POVM ---

#[test]
fn povm_is_complete() {
    let povm = povm_elements();
    let sum = povm.effects.iter().fold(ComplexMatrix::zeros(2, 2), |acc, e| &acc + e);
    assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
}

#[test]
fn q_g_matches_closed_form() {
    let q = &povm_elements().q[0];
    let r3 = 3.0_f64.sqrt();
    let k = 1.0 / (2.0 * 2.0_f64.sqrt());
    // I + (σx + σy + σz)/√3 written out entry by entry in this basis
    let expected = ComplexMatrix::from_rows([
        [c(k * (1.0 - 1.0 / r3)), C64::new(k / r3, k / r3)],
        [C64::new(k / r3, -k / r3), c(k * (1.0 + 1.0 / r3))],
    ]);
    assert!(q.max_abs_diff(&expected) < 1e-15);
}

#[test]
fn effects_have_eigenvalues_zero_and_half() {
    for e in povm_elements().effects {
        let v = e.hermitian_eigenvalues().unwrap();
        assert!(v[0].abs() < 1e-12 && (v[1] - 0.5).abs() < 1e-12, "{v:?}");
    }
}

// --- probabilities ---

#[test]
fn bell_gives_uniform_probabilities() {
    let p = ancilla_probabilities(&run_protocol(&bell()).unwrap()).unwrap();
    assert!(p.max_abs_diff(&ProbVector::uniform()) < 1e-12);
}

#[test]
fn product_state_probabilities() {
    let p = ancilla_probabilities(&run_protocol(&gg()).unwrap()).unwrap();
    let lo = 0.10566243270259354;
    let hi = 0.39433756729740643;
    assert!(p.max_abs_diff(&ProbVector::from_array([lo, hi, hi, lo])) < 1e-12, "{p:?}");
}

#[test]
fn partially_entangled_probabilities() {
    let p = ancilla_probabilities(&run_protocol(&alpha_state(FRAC_PI_8)).unwrap()).unwrap();
    let lo = 0.14793792738403422;
    let hi = 0.3520620726159658;
    assert!(p.max_abs_diff(&ProbVector::from_array([lo, hi, hi, lo])) < 1e-12, "{p:?}");
}

#[test]
fn probabilities_match_povm_expectations() {
    let povm = povm_elements();
    let mut r = rng(77);
    for _ in 0..20 {
        let chi = random_chi(&mut r);
        let p = ancilla_probabilities(&run_protocol(&chi).unwrap()).unwrap();
        for (a, e) in povm.effects.iter().enumerate() {
            let full = e.kron(&ComplexMatrix::identity(2)).unwrap();
            let psi = full.apply(chi.amplitudes()).unwrap();
            let expect: C64 = chi.amplitudes().iter().zip(&psi).map(|(x, y)| x.conj() * y).sum();
            assert!((p.as_array()[a] - expect.re).abs() < 1e-12);
        }
        assert!((p.sum() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn probabilities_depend_only_on_target_reduction() {
    let mut r = rng(91);
    for _ in 0..10 {
        let chi = random_chi(&mut r);
        // a local unitary on the spectator gives another purification of the same reduction
        let v = &subspace_rotation(Axis::X, 0, 1, 1.1, 2).unwrap() * &subspace_rotation(Axis::Z, 0, 1, 0.4, 2).unwrap();
        let mut other = chi.clone();
        other.apply_local(&v, &[1]).unwrap();
        assert!(chi.reduced(&[0]).unwrap().matrix().max_abs_diff(other.reduced(&[0]).unwrap().matrix()) < 1e-14);
        let p1 = ancilla_probabilities(&run_protocol(&chi).unwrap()).unwrap();
        let p2 = ancilla_probabilities(&run_protocol(&other).unwrap()).unwrap();
        assert!(p1.max_abs_diff(&p2) < 1e-12);
    }
}

#[test]
fn flipping_y_and_z_swaps_level_pairs() {
    let b = BlochVector::new(0.3, -0.5, 0.2);
    let p = probabilities_from_bloch(&b);
    let q = probabilities_from_bloch(&BlochVector::new(0.3, 0.5, -0.2));
    assert_eq!(p.p_g, q.p_gp);
    assert_eq!(p.p_gp, q.p_g);
    assert_eq!(p.p_e, q.p_ep);
    assert_eq!(p.p_ep, q.p_e);
}

// --- Bloch inversion ---

#[test]
fn uniform_inverts_to_origin() {
    let b = bloch_from_probabilities(&ProbVector::uniform()).unwrap();
    assert!(b.length() < 1e-15);
}

#[test]
fn product_state_inverts_to_south_pole() {
    let p = ancilla_probabilities(&run_protocol(&gg()).unwrap()).unwrap();
    let b = bloch_from_probabilities(&p).unwrap();
    assert!(b.max_abs_diff(&BlochVector::new(0.0, 0.0, -1.0)) < 1e-12, "{b:?}");
}

#[test]
fn inversion_rejects_unnormalized_exact_input() {
    let p = ProbVector::from_array([0.25, 0.25, 0.25, 0.2]);
    assert!(matches!(bloch_from_probabilities(&p), Err(Error::ProbabilitySum(_))));
    let b = bloch_from_frequencies(&ProbVector::from_array([0.5, 0.5, 0.5, 0.5])).unwrap();
    assert!(b.length() < 1e-15);
}

#[test]
fn protocol_bloch_matches_reduced_state() {
    let mut r = rng(101);
    for _ in 0..20 {
        let chi = random_chi(&mut r);
        let p = ancilla_probabilities(&run_protocol(&chi).unwrap()).unwrap();
        let direct = BlochVector::of_density(&chi.reduced(&[0]).unwrap()).unwrap();
        assert!(bloch_from_probabilities(&p).unwrap().max_abs_diff(&direct) < 1e-12);
    }
}

proptest! {
    #[test]
    fn bloch_round_trip(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let n = (x * x + y * y + z * z).sqrt().max(1.0);
        let b = BlochVector::new(x / n, y / n, z / n);
        let back = bloch_from_probabilities(&probabilities_from_bloch(&b)).unwrap();
        prop_assert!(back.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn eq9_equals_one_minus_bloch_length_squared(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64) {
        let n = (x * x + y * y + z * z).sqrt().max(1.0);
        let b = BlochVector::new(x / n, y / n, z / n);
        let reading = concurrence_from_probabilities(&probabilities_from_bloch(&b));
        prop_assert!((reading.squared_raw - (1.0 - b.dot(&b))).abs() < 1e-12);
    }
}

// --- concurrence ---

#[test]
fn uniform_probabilities_give_unit_concurrence() {
    let r = concurrence_from_probabilities(&ProbVector::uniform());
    assert!((r.value - 1.0).abs() < 1e-15 && !r.clamped);
}

#[test]
fn product_probabilities_give_zero() {
    let p = ancilla_probabilities(&run_protocol(&gg()).unwrap()).unwrap();
    assert!(concurrence_from_probabilities(&p).value < 1e-6);
    assert!(concurrence_from_probabilities(&p).squared_raw.abs() < 1e-12);
}

#[test]
fn eighth_pi_state_gives_half_squared() {
    let p = ancilla_probabilities(&run_protocol(&alpha_state(FRAC_PI_8)).unwrap()).unwrap();
    let r = concurrence_from_probabilities(&p);
    assert!((r.squared_raw - 0.5).abs() < 1e-12);
    assert!((r.value - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((r.value - (2.0 * FRAC_PI_8).sin()).abs() < 1e-12);
}

#[test]
fn negative_radicand_is_clamped_and_flagged() {
    let r = concurrence_from_probabilities(&ProbVector::from_array([0.5, 0.5, 0.0, 0.0]));
    assert!(r.clamped);
    assert_eq!(r.value, 0.0);
    assert!(r.squared_raw < 0.0);
}

#[test]
fn oracle_fixtures() {
    assert!((concurrence_oracle(&bell()).unwrap() - 1.0).abs() < 1e-12);
    assert!(concurrence_oracle(&gg()).unwrap() < 1e-7);
    let a = alpha_state(FRAC_PI_8);
    assert!((concurrence_oracle(&a).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((concurrence_amplitude(&a).unwrap() - FRAC_1_SQRT_2).abs() < 1e-15);
    assert!(concurrence_oracle(&two_qubit([c(1.0), c(0.1), c(0.0), c(0.0)])).is_err());
}

#[test]
fn oracle_routes_agree_and_match_protocol() {
    let mut r = rng(1234);
    for _ in 0..100 {
        let chi = random_chi(&mut r);
        let det_route = concurrence_oracle(&chi).unwrap();
        let amp_route = concurrence_amplitude(&chi).unwrap();
        assert!((det_route - amp_route).abs() < 1e-10);
        let p = ancilla_probabilities(&run_protocol(&chi).unwrap()).unwrap();
        assert!((concurrence_from_probabilities(&p).value - amp_route).abs() < 1e-10);
    }
}

#[test]
fn wootters_reduces_to_pure_state_concurrence() {
    let mut r = rng(4321);
    for _ in 0..10 {
        let chi = random_chi(&mut r);
        let w = wootters_concurrence(&chi.density().unwrap()).unwrap();
        assert!((w - concurrence_amplitude(&chi).unwrap()).abs() < 1e-7);
    }
    let werner_third = DensityMatrix::mix(
        2.0 / 3.0,
        &DensityMatrix::new(ComplexMatrix::identity(4).scale_real(0.25)).unwrap(),
        &bell().density().unwrap(),
    )
    .unwrap();
    // Bell-state fidelity 1/2: on the separability boundary
    assert!(wootters_concurrence(&werner_third).unwrap() < 1e-7);
}

// --- mixed-state bias ---

fn product_density(a: &StateVector, b: &StateVector) -> DensityMatrix {
    a.tensor(b).density().unwrap()
}

#[test]
fn zero_mixing_has_zero_bias() {
    let rp = product_density(&StateVector::basis(&[2], &[0]).unwrap(), &StateVector::basis(&[2], &[1]).unwrap());
    let chi = random_chi(&mut rng(6));
    assert_eq!(mixed_state_bias(&rp, &chi, 0.0).unwrap(), 0.0);
    let report = mixed_state_residual(&rp, &chi, 0.0).unwrap();
    assert!(report.actual.abs() < 1e-7);
    assert!(mixed_state_bias(&rp, &chi, 1.5).is_err());
    assert!(mixed_state_bias(&rp, &chi, -0.1).is_err());
}

#[test]
fn aligned_bloch_vectors_give_one_minus_length_squared() {
    let chi = random_chi(&mut rng(16));
    let rho_t = chi.reduced(&[0]).unwrap();
    let p = BlochVector::of_density(&rho_t).unwrap();
    let rp = rho_t.tensor(&StateVector::basis(&[2], &[0]).unwrap().density().unwrap()).unwrap();
    let lambda = 0.01;
    let bias = mixed_state_bias(&rp, &chi, lambda).unwrap();
    assert!((bias + 2.0 * lambda * (1.0 - p.dot(&p))).abs() < 1e-15);
}

#[test]
fn bias_residual_is_second_order() {
    let mut r = rng(2024);
    for _ in 0..5 {
        let chi = random_chi(&mut r);
        let a = StateVector::random(&[2], &mut r).unwrap();
        let b = StateVector::random(&[2], &mut r).unwrap();
        let rp = product_density(&a, &b);
        let big = mixed_state_residual(&rp, &chi, 1e-2).unwrap();
        let small = mixed_state_residual(&rp, &chi, 1e-3).unwrap();
        let ratio = big.residual / small.residual;
        assert!((50.0..=200.0).contains(&ratio), "ratio {ratio}: {big:?} {small:?}");
    }
}
