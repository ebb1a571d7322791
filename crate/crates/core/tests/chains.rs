mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use sesq_core::solvers::DEFAULT_LIMIT_N;
use sesq_core::{
    lift_to_real, normalize, reduce_to_ses_entropy, reduce_to_ses_magnetization, reduce_to_sessp,
    reduced_density_matrix, solve_ses_bruteforce, verify_sessp, Certificate, Decimal, PartitionInstance,
    RealSubsetSumInstance, SplitCertificate, SubsetSumInstance, WeightFunction,
};

fn quarter() -> Decimal {
    Decimal::from_ratio(1, 4)
}

fn classical_sum(sizes: &[u64], items: &[usize]) -> u64 {
    items.iter().map(|&i| sizes[i]).sum()
}

#[test]
fn magnetization_chain_is_sound_and_complete() {
    let mut r = rng(12);
    for _ in 0..60 {
        let n = r.random_range(1..=12);
        let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=200)).collect();
        let target = r.random_range(1..=sizes.iter().sum::<u64>());
        let inst = SubsetSumInstance::new(sizes.clone(), target).unwrap();
        let norm = normalize(&lift_to_real(&inst, quarter()).unwrap()).unwrap();
        let (ses, map) = reduce_to_ses_magnetization(&norm).unwrap();
        let result = solve_ses_bruteforce(&ses, DEFAULT_LIMIT_N).unwrap();
        assert_eq!(result.decision, brute_subset_sum(&sizes, target).is_some());
        if let Some(Certificate::Subset(c)) = &result.certificate {
            assert_eq!(classical_sum(&sizes, &map.back(c.sites())), target);
        }
    }
}

#[test]
fn scaled_instances_normalize_identically() {
    let mut r = rng(13);
    for _ in 0..50 {
        let n = r.random_range(1..=10);
        let sizes: Vec<Decimal> = (0..n).map(|_| Decimal::from_ratio(r.random_range(1..=5000), 100)).collect();
        let total: Decimal = sizes.iter().sum();
        let target = &total * &Decimal::from_ratio(r.random_range(1..=99), 100);
        let eps = &target * &Decimal::from_ratio(r.random_range(0..=99), 1000);
        let base = normalize(&RealSubsetSumInstance::new(sizes.clone(), target.clone(), eps.clone()).unwrap()).unwrap();
        let sum: Decimal = base.tilde_sizes().iter().sum();
        assert_eq!(sum, Decimal::one());
        for k in [1u64, 3, 10] {
            let k = Decimal::from(k);
            let scaled = RealSubsetSumInstance::new(
                sizes.iter().map(|s| s * &k).collect(),
                &target * &k,
                &eps * &k,
            )
            .unwrap();
            let norm = normalize(&scaled).unwrap();
            assert_eq!(norm.tilde_sizes(), base.tilde_sizes());
            assert_eq!(norm.tilde_target(), base.tilde_target());
            assert_eq!(norm.tilde_epsilon(), base.tilde_epsilon());
        }
    }
}

#[test]
fn gadget_pairs_realize_the_sizes() {
    let mut r = rng(14);
    for _ in 0..40 {
        let n = r.random_range(1..=10);
        let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=200)).collect();
        let target = r.random_range(1..=sizes.iter().sum::<u64>());
        let norm = normalize(&lift_to_real(&SubsetSumInstance::new(sizes, target).unwrap(), quarter()).unwrap()).unwrap();
        let (ses, map) = reduce_to_ses_entropy(&norm).unwrap();
        let state = ses.state();
        assert_eq!(state.n(), 2 * n);
        assert_eq!(map.qubits, 2 * n);
        for (i, s) in norm.tilde_sizes().iter().enumerate() {
            let rho = reduced_density_matrix(state, &[2 * i]).unwrap();
            assert!((WeightFunction::Entropy.evaluate(&rho) - s.to_f64()).abs() < 1e-9);
            if i + 1 < n {
                assert_eq!(state.cut_ranks()[2 * i + 1], 1);
            }
        }
        assert_eq!(state.max_bipartite_rank(), 2);
    }
}

#[test]
fn partition_window_is_never_breached() {
    let mut r = rng(15);
    for _ in 0..300 {
        let n = r.random_range(2..=20);
        let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=1000)).collect();
        let (inst, _) = reduce_to_sessp(&PartitionInstance::new(sizes.clone()).unwrap()).unwrap();
        let total: u64 = sizes.iter().sum();
        for _ in 0..200 {
            let side: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
            if side.is_empty() || side.len() == n {
                continue;
            }
            let balanced = 2 * classical_sum(&sizes, &side) == total;
            assert_eq!(verify_sessp(&inst, &SplitCertificate::new(side).unwrap()).unwrap(), balanced);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maps_round_trip(sizes in prop::collection::vec(1u64..100, 1..12), mask in any::<u16>()) {
        let n = sizes.len();
        let target = sizes.iter().sum::<u64>();
        let norm = normalize(&lift_to_real(&SubsetSumInstance::new(sizes, target).unwrap(), quarter()).unwrap()).unwrap();
        let items: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let (_, plain) = reduce_to_ses_magnetization(&norm).unwrap();
        let (_, paired) = reduce_to_ses_entropy(&norm).unwrap();
        prop_assert_eq!(plain.back(&plain.forward(&items)), items.clone());
        prop_assert_eq!(paired.back(&paired.forward(&items)), items);
    }
}
