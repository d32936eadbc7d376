use std::f64::consts::{FRAC_PI_4, PI};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use triphoton::closed_form::{bell_stats, delta_p, p30, product_stats, three_photon_stats};
use triphoton::interferometer::{
    balanced_bs_3mode, evolve_permanent, evolve_substitution, haar_random, scattering_distribution, vbs,
};
use triphoton::labeled::{Dof, LabeledWavefunction};
use triphoton::states::{bell, bell_phi, decompose_sym_mix, three_photon, three_photon_half_angle, BellKind};
use triphoton::{Complex64, FockBasisState, ModeLabel, SpatialUnitary, StateVector};

const AB_MODES: [ModeLabel; 4] = [ModeLabel::A0, ModeLabel::A1, ModeLabel::B0, ModeLabel::B1];

fn haar(dim: usize, seed: u64) -> SpatialUnitary {
    haar_random(dim, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// Random normalized superposition of up to four basis states with `n` photons
/// drawn from `modes`.
fn state_over(modes: &'static [ModeLabel], max_photons: usize) -> impl Strategy<Value = StateVector> {
    (1..=max_photons)
        .prop_flat_map(move |n| {
            prop::collection::vec(
                (prop::collection::vec(prop::sample::select(modes), n), -1.0..1.0f64, -1.0..1.0f64),
                1..=4,
            )
        })
        .prop_filter_map("zero norm", |parts| {
            let n = parts[0].0.len();
            let terms = parts.into_iter().map(|(ops, re, im)| {
                (FockBasisState::from_modes(&ops).unwrap(), Complex64::new(re, im))
            });
            StateVector::from_terms(n, terms).ok()?.normalized().ok()
        })
}

fn labeled_wf() -> impl Strategy<Value = LabeledWavefunction> {
    prop::collection::vec(
        (prop::collection::vec(prop::sample::select(&ModeLabel::ALL[..]), 3), -1.0..1.0f64, -1.0..1.0f64),
        1..=5,
    )
    .prop_map(|parts| {
        LabeledWavefunction::from_terms(3, parts.into_iter().map(|(l, re, im)| (l, Complex64::new(re, im)))).unwrap()
    })
}

fn dof() -> impl Strategy<Value = Dof> {
    prop::sample::select(&Dof::ALL[..])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn engines_agree_on_two_mode_unitaries(s in state_over(&AB_MODES, 4), seed in any::<u64>()) {
        let u = haar(2, seed);
        let a = evolve_substitution(&s, &u).unwrap();
        let b = evolve_permanent(&s, &u).unwrap();
        prop_assert!(a.max_amplitude_difference(&b) < 1e-10);
    }

    #[test]
    fn engines_agree_on_three_mode_unitaries(s in state_over(&ModeLabel::ALL, 3), seed in any::<u64>()) {
        let u = haar(3, seed);
        let a = evolve_substitution(&s, &u).unwrap();
        let b = evolve_permanent(&s, &u).unwrap();
        prop_assert!(a.max_amplitude_difference(&b) < 1e-10);
    }

    #[test]
    fn evolution_preserves_norm_and_sector(s in state_over(&ModeLabel::ALL, 4), seed in any::<u64>()) {
        let u = haar(3, seed);
        for out in [evolve_substitution(&s, &u).unwrap(), evolve_permanent(&s, &u).unwrap()] {
            prop_assert!((out.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
            prop_assert_eq!(out.photons(), s.photons());
            prop_assert!(out.terms().all(|(b, _)| b.total_photons() == s.photons()));
        }
    }

    #[test]
    fn evolution_composes(s in state_over(&AB_MODES, 4), s1 in any::<u64>(), s2 in any::<u64>()) {
        let (u, v) = (haar(2, s1), haar(2, s2));
        let stepwise = evolve_substitution(&evolve_substitution(&s, &u).unwrap(), &v).unwrap();
        let direct = evolve_permanent(&s, &(&v * &u)).unwrap();
        prop_assert!(stepwise.max_amplitude_difference(&direct) < 1e-10);
    }

    #[test]
    fn evolution_commutes_with_internal_flip(s in state_over(&ModeLabel::ALL, 3), seed in any::<u64>()) {
        let u = haar(3, seed);
        let a = evolve_substitution(&s.flip_internal(), &u).unwrap();
        let b = evolve_substitution(&s, &u).unwrap().flip_internal();
        prop_assert!(a.max_amplitude_difference(&b) < 1e-12);
    }

    #[test]
    fn normalization_is_idempotent(s in state_over(&ModeLabel::ALL, 6)) {
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        let again = s.normalized().unwrap();
        prop_assert!(again.max_amplitude_difference(&s) < 1e-12);
        prop_assert!((s.marginal_spatial_distribution().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exchange_is_an_involution(wf in labeled_wf(), d in dof(), pair in prop::sample::select(vec![(0, 1), (0, 2), (1, 2)])) {
        let twice = wf.exchange(pair.0, pair.1, d).unwrap().exchange(pair.0, pair.1, d).unwrap();
        prop_assert_eq!(twice, wf);
    }

    #[test]
    fn symmetrizer_and_antisymmetrizer_reconstruct(wf in labeled_wf(), d in dof(), pair in prop::sample::select(vec![(0, 1), (0, 2), (1, 2)])) {
        let s = wf.apply_pair_projector(pair.0, pair.1, d, 1.0).unwrap();
        let a = wf.apply_pair_projector(pair.0, pair.1, d, -1.0).unwrap();
        let back = s.add(&a).unwrap().scaled(Complex64::new(0.5, 0.0));
        prop_assert!(back.max_difference(&wf) < 1e-15);
    }

    #[test]
    fn bosonic_gate_accepts_exactly_symmetric_functions(wf in labeled_wf()) {
        let symmetric = wf.bosonize();
        if !symmetric.is_vanished() {
            prop_assert!(symmetric.to_second_quantized().is_ok());
        }
        prop_assert_eq!(wf.to_second_quantized().is_ok(), wf.is_bosonic());
    }

    #[test]
    fn second_quantization_round_trip(s in state_over(&ModeLabel::ALL, 4)) {
        let wf = LabeledWavefunction::from_second_quantized(&s);
        prop_assert!(wf.is_bosonic());
        prop_assert!((wf.norm_sqr() - 1.0).abs() < 1e-12);
        let back = wf.to_second_quantized().unwrap();
        prop_assert!(back.fidelity(&s).unwrap() > 1.0 - 1e-10);
        prop_assert!(back.max_amplitude_difference(&s) < 1e-12);
    }

    #[test]
    fn closed_forms_match_engine(theta in 0.0..PI, phi in 0.0..(2.0 * PI)) {
        let u = vbs(theta).unwrap();
        let three = scattering_distribution(&three_photon(phi), &u).unwrap();
        prop_assert!(three.max_abs_difference(&three_photon_stats(theta, phi)) < 1e-10);
        let pair = scattering_distribution(&bell_phi(phi), &u).unwrap();
        prop_assert!(pair.max_abs_difference(&bell_stats(theta, phi)) < 1e-10);
    }

    #[test]
    fn distributions_are_normalized(theta in 0.0..PI, phi in 0.0..(2.0 * PI)) {
        prop_assert!((three_photon_stats(theta, phi).total() - 1.0).abs() < 1e-10);
        prop_assert!((bell_stats(theta, phi).total() - 1.0).abs() < 1e-10);
        prop_assert!((product_stats(theta, phi).total() - 1.0).abs() < 1e-10);
        prop_assert!(delta_p(theta, phi).total().abs() < 1e-10);
        prop_assert!(three_photon_stats(theta, phi).iter().all(|(_, p)| *p > -1e-12 && *p < 1.0 + 1e-12));
    }

    #[test]
    fn bunching_factorizes(theta in 0.0..PI, phi in 0.0..(2.0 * PI)) {
        prop_assume!(p30(theta) > 1e-9);
        let ratio = three_photon_stats(theta, phi).get(3, 0) / p30(theta);
        prop_assert!((ratio - (phi / 2.0).cos().powi(2)).abs() < 1e-9);
    }

    #[test]
    fn mirror_angle_symmetry(theta in 0.0..PI, phi in 0.0..(2.0 * PI)) {
        // vbs(π − θ) differs from vbs(θ) by a sign on input a and output b
        let s = three_photon(phi);
        let here = scattering_distribution(&s, &vbs(theta).unwrap()).unwrap();
        let there = scattering_distribution(&s, &vbs(PI - theta).unwrap()).unwrap();
        prop_assert!(here.max_abs_difference(&there) < 1e-10);
        prop_assert!(three_photon_stats(theta, phi).max_abs_difference(&three_photon_stats(PI - theta, phi)) < 1e-10);
    }

    #[test]
    fn half_angle_sign_flip(phi in -10.0..10.0f64) {
        let h = three_photon_half_angle(phi);
        let shifted = three_photon_half_angle(phi + 2.0 * PI);
        prop_assert!(shifted.max_amplitude_difference(&h.scaled(Complex64::new(-1.0, 0.0))) < 1e-12);
        let u = vbs(0.7).unwrap();
        let p = scattering_distribution(&h, &u).unwrap();
        let q = scattering_distribution(&shifted, &u).unwrap();
        prop_assert!(p.max_abs_difference(&q) < 1e-12);
    }

    #[test]
    fn decomposition_accounts_for_all_weight(phi in 0.0..(2.0 * PI), alpha in 0.0..(2.0 * PI), chi in 0.0..(PI / 2.0)) {
        let family = three_photon(phi).scaled(Complex64::from_polar(chi.cos(), alpha));
        let outside = StateVector::from_monomial(&[ModeLabel::B0, ModeLabel::B0, ModeLabel::B0]).unwrap()
            .scaled(Complex64::new(chi.sin(), 0.0));
        let s = StateVector::from_terms(3, family.terms().chain(outside.terms()).map(|(b, a)| (*b, *a))).unwrap();
        let d = decompose_sym_mix(&s).unwrap();
        prop_assert!((d.c_sym.norm_sqr() + d.c_mix.norm_sqr() + d.residual - 1.0).abs() < 1e-12);
        prop_assert!((d.residual - chi.sin().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn antisymmetric_bell_state_is_a_balanced_splitter_eigenstate() {
    let s = bell(BellKind::PsiMinus);
    let out = evolve_substitution(&s, &vbs(FRAC_PI_4).unwrap()).unwrap();
    assert!((out.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
    let out = evolve_permanent(&s, &vbs(FRAC_PI_4).unwrap()).unwrap();
    assert!((out.fidelity(&s).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn basis_states_are_orthonormal() {
    let states: Vec<StateVector> = [
        [ModeLabel::A0, ModeLabel::A0],
        [ModeLabel::A0, ModeLabel::B1],
        [ModeLabel::G1, ModeLabel::B1],
        [ModeLabel::B1, ModeLabel::B1],
    ]
    .iter()
    .map(|ops| StateVector::from_monomial(ops).unwrap())
    .collect();
    for (i, x) in states.iter().enumerate() {
        for (j, y) in states.iter().enumerate() {
            let ip = x.inner_product(y).unwrap();
            assert_eq!(ip, Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        }
    }
}

#[test]
fn addition_splitter_acts_only_on_gamma_and_a() {
    let s = StateVector::from_monomial(&[ModeLabel::B1, ModeLabel::B0]).unwrap();
    let out = evolve_permanent(&s, &balanced_bs_3mode()).unwrap();
    assert!(out.max_amplitude_difference(&s) < 1e-15);
}
