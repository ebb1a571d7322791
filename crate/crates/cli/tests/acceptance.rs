//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p sesq-cli --test acceptance -- --nocapture` to see
//! the report lines.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use faer::{c64, Mat, Side};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use sesq_core::solvers::{solve_ses_bruteforce_with, DEFAULT_LIMIT_N};
use sesq_core::{
    check_weight_axioms, inverse_binary_entropy, lift_to_real, normalize, reduce_to_ses_entropy,
    reduce_to_ses_magnetization, reduce_to_sessp, reduced_density_matrix, solve_partition_dp, solve_ses_bruteforce,
    solve_sessp_bruteforce, solve_subset_sum_dp, verify_ses, Axis, Certificate, Decimal, MpsState, PartitionInstance,
    SesInstance, SolveOptions, SubsetCertificate, SubsetSumInstance, WeightFunction,
};

fn report(id: &str, pass: bool, detail: String) {
    println!("{id} {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{id} failed: {detail}");
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn brute_subset_sum(values: &[u64], target: u64) -> bool {
    (0..1u64 << values.len())
        .any(|m| values.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, v)| v).sum::<u64>() == target)
}

/// The shared SUBSET SUM corpus for criteria 1 and 2.
fn subset_sum_corpus() -> Vec<SubsetSumInstance> {
    let mut r = rng(2024);
    (0..300)
        .map(|_| {
            let n = r.random_range(1..=16);
            let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=200)).collect();
            let total: u64 = sizes.iter().sum();
            let target = r.random_range(1..=total);
            SubsetSumInstance::new(sizes, target).unwrap()
        })
        .collect()
}

fn h2(p: f64) -> f64 {
    [p, 1.0 - p].iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

fn blocks(sites: &[usize]) -> usize {
    sites.windows(2).filter(|w| w[1] != w[0] + 1).count() + usize::from(!sites.is_empty())
}

/// Amplitudes by multiplying out `Γ_0[s_0] λ_0 Γ_1[s_1] ...`, qubit 0 first.
fn dense_amplitudes(state: &MpsState) -> Vec<c64> {
    let n = state.n();
    (0..1usize << n)
        .map(|idx| {
            let mut row = vec![c64::new(1.0, 0.0)];
            for i in 0..n {
                let bit = idx >> (n - 1 - i) & 1;
                let g = &state.gammas()[i];
                let mut next = vec![c64::new(0.0, 0.0); g.right()];
                for (a, &x) in row.iter().enumerate() {
                    for (b, slot) in next.iter_mut().enumerate() {
                        *slot += x * g.get(a, bit, b);
                    }
                }
                if i + 1 < n {
                    for (slot, &l) in next.iter_mut().zip(&state.lambdas()[i]) {
                        *slot *= l;
                    }
                }
                row = next;
            }
            row[0]
        })
        .collect()
}

/// Eigenvalues of the explicit partial trace `ρ_A = Tr_Ā |ψ><ψ|`.
fn dense_partial_trace_spectrum(psi: &[c64], n: usize, subset: &[usize]) -> Vec<f64> {
    let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
    let pick = |idx: usize, sites: &[usize]| sites.iter().fold(0usize, |acc, &q| acc << 1 | (idx >> (n - 1 - q) & 1));
    let (da, db) = (1usize << subset.len(), 1usize << rest.len());
    let mut m = vec![c64::new(0.0, 0.0); da * db];
    for (idx, &amp) in psi.iter().enumerate() {
        m[pick(idx, subset) * db + pick(idx, &rest)] = amp;
    }
    let rho = Mat::<c64>::from_fn(da, da, |i, j| (0..db).map(|k| m[i * db + k] * m[j * db + k].conj()).sum());
    let mut ev = rho.self_adjoint_eigenvalues(Side::Lower).unwrap();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn trace_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let len = a.len().max(b.len());
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn ac01_subset_sum_dp_matches_exhaustive_search() {
    let corpus = subset_sum_corpus();
    let t0 = Instant::now();
    let mut agree = 0;
    for inst in &corpus {
        let dp = solve_subset_sum_dp(inst.sizes(), inst.target()).unwrap();
        if let Some(items) = &dp {
            assert_eq!(items.iter().map(|&i| inst.sizes()[i]).sum::<u64>(), inst.target());
        }
        agree += usize::from(dp.is_some() == brute_subset_sum(inst.sizes(), inst.target()));
    }
    let elapsed = t0.elapsed();
    report(
        "AC01",
        agree == corpus.len() && elapsed < Duration::from_secs(10),
        format!("agreement {agree}/{} in {:.2?} (limit 10 s)", corpus.len(), elapsed),
    );
}

#[test]
fn ac02_magnetization_chain_round_trip() {
    let corpus = subset_sum_corpus();
    let eps = Decimal::from_ratio(1, 4);
    let t0 = Instant::now();
    let (mut agree, mut yes, mut verified) = (0, 0, 0);
    for inst in &corpus {
        let norm = normalize(&lift_to_real(inst, eps.clone()).unwrap()).unwrap();
        let (ses, map) = reduce_to_ses_magnetization(&norm).unwrap();
        let result = solve_ses_bruteforce(&ses, DEFAULT_LIMIT_N).unwrap();
        let classical = solve_subset_sum_dp(inst.sizes(), inst.target()).unwrap().is_some();
        agree += usize::from(result.decision == classical);
        if let Some(Certificate::Subset(cert)) = &result.certificate {
            yes += 1;
            let items = map.back(cert.sites());
            let sum: Decimal = items.iter().map(|&i| Decimal::from(inst.sizes()[i])).sum();
            let target = Decimal::from(inst.target());
            let within = &target - &eps <= sum && sum <= &target + &eps;
            verified += usize::from(within && sum == target);
        }
    }
    let elapsed = t0.elapsed();
    report(
        "AC02",
        agree == corpus.len() && verified == yes && elapsed < Duration::from_secs(60),
        format!("agreement {agree}/{}, back-mapped yes certificates verified {verified}/{yes}, {:.2?} (limit 60 s)", corpus.len(), elapsed),
    );
}

#[test]
fn ac03_partition_to_sessp() {
    let mut r = rng(303);
    let mut agree = 0;
    let mut eps_ok = 0;
    for _ in 0..300 {
        let n = r.random_range(1..=14);
        let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=500)).collect();
        let total: u64 = sizes.iter().sum();
        let (inst, _) = reduce_to_sessp(&PartitionInstance::new(sizes.clone()).unwrap()).unwrap();
        eps_ok += usize::from(*inst.epsilon() == Decimal::from_ratio(1, 2 * total));
        let quantum = solve_sessp_bruteforce(&inst, DEFAULT_LIMIT_N).unwrap().decision;
        agree += usize::from(quantum == solve_partition_dp(&sizes).unwrap().is_some());
    }
    report("AC03", agree == 300 && eps_ok == 300, format!("agreement {agree}/300, epsilon = 1/(2C) on {eps_ok}/300"));
}

#[test]
fn ac04_entropy_gadget() {
    let mut r = rng(404);
    let eps = Decimal::from_ratio(1, 4);
    let opts = SolveOptions { workers: 4, ..SolveOptions::default() };
    let (mut agree, mut fidelity, mut chi_ok, mut worst) = (0, 0, 0, 0.0f64);
    let t0 = Instant::now();
    for _ in 0..200 {
        let n = r.random_range(1..=10);
        let sizes: Vec<u64> = (0..n).map(|_| r.random_range(1..=200)).collect();
        let target = r.random_range(1..=sizes.iter().sum::<u64>());
        let inst = SubsetSumInstance::new(sizes.clone(), target).unwrap();
        let norm = normalize(&lift_to_real(&inst, eps.clone()).unwrap()).unwrap();
        let (ses, map) = reduce_to_ses_entropy(&norm).unwrap();
        let state = ses.state();

        let mut pair_ok = true;
        for (i, s) in norm.tilde_sizes().iter().enumerate() {
            let rho = reduced_density_matrix(state, &[2 * i]).unwrap();
            let dev = (WeightFunction::Entropy.evaluate(&rho) - s.to_f64()).abs();
            worst = worst.max(dev);
            pair_ok &= dev <= 1e-9;
        }
        fidelity += usize::from(pair_ok);
        chi_ok += usize::from(state.max_bipartite_rank() == 2);

        let result = solve_ses_bruteforce_with(&ses, &opts).unwrap();
        let classical = solve_subset_sum_dp(&sizes, target).unwrap().is_some();
        let mut ok = result.decision == classical;
        if let Some(Certificate::Subset(cert)) = &result.certificate {
            ok &= map.back(cert.sites()).iter().map(|&i| sizes[i]).sum::<u64>() == target;
        }
        agree += usize::from(ok);
    }
    report(
        "AC04",
        agree == 200 && fidelity == 200 && chi_ok == 200,
        format!(
            "agreement {agree}/200, pair entropies within 1e-9 on {fidelity}/200 (worst {worst:.1e}), chi = 2 on {chi_ok}/200, {:.2?}",
            t0.elapsed()
        ),
    );
}

#[test]
fn ac05_entropy_symmetry() {
    let mut r = rng(505);
    let (mut checked, mut worst) = (0, 0.0f64);
    for _ in 0..100 {
        let n = r.random_range(2..=12);
        let chi = r.random_range(1..=4);
        let state = MpsState::random(n, chi, &mut r).unwrap();
        let mut done = 0;
        while done < 10 {
            let a: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
            let b: Vec<usize> = (0..n).filter(|i| !a.contains(i)).collect();
            if a.is_empty() || b.is_empty() || blocks(&a) > 4 || blocks(&b) > 4 {
                continue;
            }
            let sa = WeightFunction::Entropy.evaluate(&reduced_density_matrix(&state, &a).unwrap());
            let sb = WeightFunction::Entropy.evaluate(&reduced_density_matrix(&state, &b).unwrap());
            worst = worst.max((sa - sb).abs());
            done += 1;
            checked += 1;
        }
    }
    report("AC05", checked == 1000 && worst <= 1e-9, format!("{checked} bipartitions, max |S(A) - S(B)| = {worst:.2e}"));
}

#[test]
fn ac06_weight_axioms() {
    let mut lines = Vec::new();
    let mut pass = true;
    for w in [WeightFunction::Magnetization { axis: Axis::Z }, WeightFunction::Entropy] {
        let rep = check_weight_axioms(w, 1000, 606).unwrap();
        pass &= rep.passed && rep.trials == 1000 && rep.max_additivity_deviation <= 1e-9 && rep.range_violations == 0;
        lines.push(format!(
            "{}: passed={} deviation {:.1e} range violations {} range [{:.3}, {:.3}]",
            w.name(),
            rep.passed,
            rep.max_additivity_deviation,
            rep.range_violations,
            rep.single_qubit_min,
            rep.single_qubit_max
        ));
    }
    report("AC06", pass, lines.join("; "));
}

#[test]
fn ac07_rdm_against_dense_partial_trace() {
    let mut r = rng(707);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = r.random_range(1..=10);
        let chi = r.random_range(1..=4);
        let state = MpsState::random(n, chi, &mut r).unwrap();
        let subset = loop {
            let s: Vec<usize> = (0..n).filter(|_| r.random_bool(0.5)).collect();
            if !s.is_empty() && blocks(&s) <= 3 {
                break s;
            }
        };
        let rho = reduced_density_matrix(&state, &subset).unwrap();
        let oracle = dense_partial_trace_spectrum(&dense_amplitudes(&state), n, &subset);
        worst = worst.max(trace_distance(&rho.spectrum(), &oracle));
    }
    report("AC07", worst <= 1e-9, format!("100 states, max trace distance {worst:.2e}"));
}

#[test]
fn ac08_inverse_binary_entropy_grid() {
    let points = 10_000;
    let mut worst = 0.0f64;
    for k in 0..points {
        let s = k as f64 / (points - 1) as f64;
        let p = inverse_binary_entropy(s).unwrap();
        assert!((0.0..=0.5).contains(&p));
        worst = worst.max((h2(p) - s).abs());
    }
    report("AC08", worst <= 1e-9, format!("{points} grid points, max |H2(p) - s| = {worst:.2e}"));
}

fn product_instance(n: usize, r: &mut ChaCha8Rng) -> (SesInstance, SubsetCertificate) {
    let amps: Vec<(c64, c64)> = (0..n)
        .map(|_| {
            let s: f64 = r.random_range(0.0..1.0);
            (c64::new((1.0 - s).sqrt(), 0.0), c64::new(s.sqrt(), 0.0))
        })
        .collect();
    let state = MpsState::product_state(&amps).unwrap();
    let inst = SesInstance::new(
        state,
        WeightFunction::Magnetization { axis: Axis::Z },
        Decimal::from(n as u64 / 4 + 1),
        Decimal::from_ratio(1, 2),
    )
    .unwrap();
    let cert = SubsetCertificate::new((0..n).filter(|i| i % 2 == 0).collect()).unwrap();
    (inst, cert)
}

#[test]
fn ac09_verifier_scaling() {
    let mut r = rng(909);
    let mut times = Vec::new();
    for n in [10usize, 100, 1000] {
        let (inst, cert) = product_instance(n, &mut r);
        verify_ses(&inst, &cert).unwrap();
        let reps = 20;
        let t0 = Instant::now();
        for _ in 0..reps {
            std::hint::black_box(verify_ses(&inst, &cert).unwrap());
        }
        times.push(t0.elapsed().as_secs_f64() / reps as f64);
    }
    let slope = (times[2] / times[0]).ln() / 100f64.ln();
    let upper = (times[2] / times[1]).ln() / 10f64.ln();
    report(
        "AC09",
        times[2] < 1.0 && slope < 2.0 && upper < 2.0,
        format!(
            "t(10) = {:.2e} s, t(100) = {:.2e} s, t(1000) = {:.2e} s, log-log slope {slope:.2} overall / {upper:.2} upper decade",
            times[0], times[1], times[2]
        ),
    );
}

#[test]
fn ac10_deterministic_solve_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let bin = env!("CARGO_BIN_EXE_sesq");
    let run = |args: &[&str]| {
        let out = Command::new(bin).args(args).output().unwrap();
        out.status.code().unwrap()
    };
    let classical = d.join("inst.json");
    assert_eq!(run(&["gen", "subset-sum", "--n", "9", "--max", "50", "--seed", "10", "-o", classical.to_str().unwrap()]), 0);
    let mut identical = true;
    let mut cases = 0;
    for target in ["ses", "ses-entropy"] {
        let bundle = d.join(format!("{target}.json"));
        assert_eq!(run(&["reduce", "-i", classical.to_str().unwrap(), "--target", target, "-o", bundle.to_str().unwrap()]), 0);
        for strategy in ["brute", "auto"] {
            let mut outputs = Vec::new();
            for (k, workers) in ["1", "1", "4", "4"].iter().enumerate() {
                let out = d.join(format!("{target}-{strategy}-{k}.json"));
                let args = [
                    "solve", "-i", bundle.to_str().unwrap(), "--strategy", strategy, "--parallel", workers,
                    "--deterministic", "-o", out.to_str().unwrap(),
                ];
                let c = run(&args);
                assert!(c == 0 || c == 1);
                outputs.push(fs::read(&out).unwrap());
            }
            identical &= outputs.windows(2).all(|w| w[0] == w[1]);
            cases += 1;
        }
    }
    report("AC10", identical, format!("{cases} configurations, outputs byte-identical across two runs and workers {{1, 4}}: {identical}"));
}
