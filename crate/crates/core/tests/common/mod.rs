//! Independent dense references used by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sesq_core::MpsState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Amplitude of every basis string by multiplying out the chain
/// `Γ_0[s_0] λ_0 Γ_1[s_1] λ_1 ...`, qubit 0 most significant.
pub fn dense_amplitudes(state: &MpsState) -> Vec<C64> {
    let n = state.n();
    let mut out = Vec::with_capacity(1 << n);
    for idx in 0..1usize << n {
        let mut row = vec![C64::new(1.0, 0.0)];
        for i in 0..n {
            let bit = idx >> (n - 1 - i) & 1;
            let g = &state.gammas()[i];
            let mut next = vec![C64::new(0.0, 0.0); g.right()];
            for (a, &r) in row.iter().enumerate() {
                for (b, slot) in next.iter_mut().enumerate() {
                    *slot += r * g.get(a, bit, b);
                }
            }
            if i + 1 < n {
                for (slot, &l) in next.iter_mut().zip(&state.lambdas()[i]) {
                    *slot *= l;
                }
            }
            row = next;
        }
        out.push(row[0]);
    }
    out
}

/// Eigenvalues of the reduced state on `subset`, via singular values of the
/// amplitude matrix reshaped as (subset, complement), sorted descending.
pub fn dense_rdm_spectrum(psi: &[C64], n: usize, subset: &[usize]) -> Vec<f64> {
    let rest: Vec<usize> = (0..n).filter(|i| !subset.contains(i)).collect();
    let pick = |idx: usize, sites: &[usize]| {
        sites.iter().fold(0usize, |acc, &q| acc << 1 | (idx >> (n - 1 - q) & 1))
    };
    let mut m = DMatrix::<C64>::zeros(1 << subset.len(), 1 << rest.len());
    for (idx, &amp) in psi.iter().enumerate() {
        m[(pick(idx, subset), pick(idx, &rest))] = amp;
    }
    let mut spec: Vec<f64> = m.singular_values().iter().map(|s| s * s).collect();
    spec.sort_by(|a, b| b.total_cmp(a));
    spec
}

/// Rank of the amplitude matrix across the cut after qubit `bond`.
pub fn dense_cut_rank(psi: &[C64], n: usize, bond: usize) -> usize {
    let left: Vec<usize> = (0..=bond).collect();
    dense_rdm_spectrum(psi, n, &left).iter().filter(|&&p| p > 1e-20).count()
}

/// Trace distance between two diagonal states given by their spectra.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.total_cmp(x));
    b.sort_by(|x, y| y.total_cmp(x));
    let len = a.len().max(b.len());
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

pub fn shannon_bits(spec: &[f64]) -> f64 {
    spec.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

pub fn h2(p: f64) -> f64 {
    shannon_bits(&[p, 1.0 - p])
}

/// Inverse of the binary entropy on [0, 1/2] by plain bisection.
pub fn bisect_inverse_h2(s: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h2(mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exhaustive subset sum: lowest mask hitting `target` exactly.
pub fn brute_subset_sum(values: &[u64], target: u64) -> Option<u64> {
    (0..1u64 << values.len()).find(|&m| {
        values.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, v)| v).sum::<u64>() == target
    })
}

pub fn brute_partition(values: &[u64]) -> bool {
    let total: u64 = values.iter().sum();
    total.is_multiple_of(2) && values.len() >= 2 && brute_subset_sum(values, total / 2).is_some()
}

pub fn random_subset<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}

pub fn blocks(sites: &[usize]) -> usize {
    sites.windows(2).filter(|w| w[1] != w[0] + 1).count() + usize::from(!sites.is_empty())
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
