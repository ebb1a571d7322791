mod common;

use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use sesq_core::{check_weight_axioms, reduced_density_matrix, Axis, MpsState, WeightFunction};

/// `<psi| sigma_axis on qubit q |psi>` by acting on the dense vector.
fn dense_pauli_expectation(psi: &[C64], n: usize, q: usize, axis: Axis) -> f64 {
    let shift = n - 1 - q;
    let mut acc = C64::new(0.0, 0.0);
    for (idx, amp) in psi.iter().enumerate() {
        let bit = idx >> shift & 1;
        let flipped = idx ^ (1 << shift);
        // (sigma psi)[idx] in terms of psi
        let v = match axis {
            Axis::Z => amp * if bit == 0 { 1.0 } else { -1.0 },
            Axis::X => psi[flipped],
            Axis::Y => psi[flipped] * if bit == 0 { C64::new(0.0, -1.0) } else { C64::new(0.0, 1.0) },
        };
        acc += amp.conj() * v;
    }
    acc.re
}

#[test]
fn single_qubit_examples() {
    let one = MpsState::product_state(&[(c(0.0), c(1.0))]).unwrap();
    let rho = reduced_density_matrix(&one, &[0]).unwrap();
    assert_eq!(WeightFunction::Magnetization { axis: Axis::Z }.evaluate(&rho), 1.0);

    let s: f64 = 0.37;
    let tilted = MpsState::product_state(&[(c((1.0 - s).sqrt()), c(s.sqrt()))]).unwrap();
    let rho = reduced_density_matrix(&tilted, &[0]).unwrap();
    let w = WeightFunction::Magnetization { axis: Axis::Z }.evaluate(&rho);
    // dense 2x2: <1|rho|1>
    let psi = tilted.to_statevector().unwrap();
    assert!((w - psi[1].norm_sqr()).abs() < 1e-12);
    assert!((w - 0.37).abs() < 1e-12);

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = MpsState::product_state(&[(c(h), c(h))]).unwrap();
    let rho = reduced_density_matrix(&plus, &[0]).unwrap();
    assert!(WeightFunction::Magnetization { axis: Axis::X }.evaluate(&rho).abs() < 1e-12);

    let bell = MpsState::entangled_pair_chain(&[1.0]).unwrap();
    let rho = reduced_density_matrix(&bell, &[1]).unwrap();
    assert!((WeightFunction::Entropy.evaluate(&rho) - 1.0).abs() < 1e-12);
}

#[test]
fn axioms_hold_for_both_families() {
    for w in [WeightFunction::Magnetization { axis: Axis::Z }, WeightFunction::Entropy] {
        let report = check_weight_axioms(w, 300, 17).unwrap();
        assert!(report.passed, "{w:?}: {report:?}");
        assert!(report.max_additivity_deviation <= 1e-9);
        assert_eq!(report.range_violations, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn magnetization_is_half_count_minus_spin(seed in any::<u64>(), n in 1usize..=8, chi in 1usize..=4, a in 0usize..3) {
        let axis = [Axis::X, Axis::Y, Axis::Z][a];
        let mut r = rng(seed);
        let state = MpsState::random(n, chi, &mut r).unwrap();
        let psi = dense_amplitudes(&state);
        let sub = random_subset(&mut r, n);
        prop_assume!(blocks(&sub) <= 4);
        let spin: f64 = sub.iter().map(|&q| 0.5 * dense_pauli_expectation(&psi, n, q, axis)).sum();
        let rho = reduced_density_matrix(&state, &sub).unwrap();
        let w = WeightFunction::Magnetization { axis }.evaluate(&rho);
        prop_assert!((w - (sub.len() as f64 / 2.0 - spin)).abs() < 1e-9);
    }

    #[test]
    fn entropy_is_mirror_invariant(seed in any::<u64>(), n in 2usize..=9, chi in 1usize..=4) {
        // reversing the chain relabels sites; the entropy of the relabelled subset is unchanged
        let mut r = rng(seed);
        let state = MpsState::random(n, chi, &mut r).unwrap();
        let psi = state.to_statevector().unwrap();
        let mirrored_psi: Vec<C64> = (0..psi.len())
            .map(|idx| {
                let rev = (0..n).fold(0usize, |acc, q| acc << 1 | (idx >> q & 1));
                psi[rev]
            })
            .collect();
        let (mirrored, _) = MpsState::from_statevector(&mirrored_psi).unwrap();
        let sub = random_subset(&mut r, n);
        prop_assume!(blocks(&sub) <= 4);
        let msub: Vec<usize> = sub.iter().rev().map(|&q| n - 1 - q).collect();
        let a = WeightFunction::Entropy.evaluate(&reduced_density_matrix(&state, &sub).unwrap());
        let b = WeightFunction::Entropy.evaluate(&reduced_density_matrix(&mirrored, &msub).unwrap());
        prop_assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn single_qubit_range(seed in any::<u64>(), n in 1usize..=6, chi in 1usize..=3, q in 0usize..6) {
        let state = MpsState::random(n, chi, &mut rng(seed)).unwrap();
        let rho = reduced_density_matrix(&state, &[q % n]).unwrap();
        for w in [
            WeightFunction::Entropy,
            WeightFunction::Magnetization { axis: Axis::X },
            WeightFunction::Magnetization { axis: Axis::Y },
            WeightFunction::Magnetization { axis: Axis::Z },
        ] {
            let v = w.evaluate(&rho);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&v));
        }
    }
}
