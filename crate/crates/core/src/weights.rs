//! Weight functions on reduced states: magnetization along a Pauli axis and
//! von Neumann entropy.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::xlog2x;
use crate::error::Result;
use crate::mps::MpsState;
use crate::rdm::{reduced_density_matrix, DensityMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    /// Pauli matrix along this axis.
    pub fn pauli(self) -> [[C64; 2]; 2] {
        let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        match self {
            Axis::X => [[z, o], [o, z]],
            Axis::Y => [[z, -i], [i, z]],
            Axis::Z => [[o, z], [z, -o]],
        }
    }

    /// `(1 - σ)/2`, the projector onto the axis' `-1` eigenstate.
    pub fn down_projector(self) -> [[C64; 2]; 2] {
        let p = self.pauli();
        let mut out = [[C64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                let id = if r == c { 1.0 } else { 0.0 };
                *v = (C64::new(id, 0.0) - p[r][c]) * 0.5;
            }
        }
        out
    }
}

/// `Re tr(a b)` for 2x2 matrices.
pub(crate) fn trace_product(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> f64 {
    let mut t = C64::new(0.0, 0.0);
    for r in 0..2 {
        for c in 0..2 {
            t += a[r][c] * b[c][r];
        }
    }
    t.re
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum WeightFunction {
    /// `sum_i <(1 - σ_i)/2>` over the subset, i.e. `m/2 - <S>` along `axis`.
    Magnetization { axis: Axis },
    /// Von Neumann entropy in bits.
    Entropy,
}

impl WeightFunction {
    pub fn evaluate(&self, rho: &DensityMatrix) -> f64 {
        match *self {
            WeightFunction::Magnetization { axis } => {
                let proj = axis.down_projector();
                rho.site_rdms().iter().map(|r| trace_product(r, &proj)).sum()
            }
            WeightFunction::Entropy => rho
                .spectrum_factors()
                .iter()
                .map(|f| f.iter().map(|&p| xlog2x(p)).sum::<f64>())
                .sum(),
        }
    }

    /// Whether the weight of any subset of a product state is the sum of
    /// single-qubit weights.
    pub fn is_per_qubit_additive(&self) -> bool {
        matches!(self, WeightFunction::Magnetization { .. })
    }

    /// Weight of a single-qubit reduced state.
    pub fn single_qubit(&self, rdm: &[[C64; 2]; 2]) -> f64 {
        match *self {
            WeightFunction::Magnetization { axis } => trace_product(rdm, &axis.down_projector()),
            WeightFunction::Entropy => {
                let (a, d) = (rdm[0][0].re, rdm[1][1].re);
                let off = rdm[0][1].norm();
                let disc = (((a - d) * 0.5).powi(2) + off * off).sqrt();
                let mid = (a + d) * 0.5;
                xlog2x((mid + disc).min(1.0)) + xlog2x((mid - disc).max(0.0))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            WeightFunction::Magnetization { axis } => format!("magnetization({})", format!("{axis:?}").to_lowercase()),
            WeightFunction::Entropy => "entropy".to_string(),
        }
    }
}

/// Outcome of [`check_weight_axioms`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub trials: usize,
    pub max_additivity_deviation: f64,
    pub range_violations: usize,
    pub single_qubit_min: f64,
    pub single_qubit_max: f64,
}

pub const ADDITIVITY_TOL: f64 = 1e-9;

/// Randomized check of additivity on tensor products and of the `[0, 1]`
/// range on single-qubit states.
///
/// Each trial draws two random states of 1 to 3 qubits (bond dimension 1 or
/// 2) and a nonempty subset of each, then compares `W(ρ1 ⊗ ρ2)`, computed on
/// the tensor-product state, with `W(ρ1) + W(ρ2)`. The joint entropy is taken
/// from the expanded joint spectrum rather than the stored factors. The range
/// is checked on a random pure qubit and on one qubit of a random entangled
/// pair.
pub fn check_weight_axioms(w: WeightFunction, trials: usize, seed: u64) -> Result<AxiomReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_dev = 0.0f64;
    let mut violations = 0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..trials.max(1) {
        let (s1, sub1) = random_part(&mut rng)?;
        let (s2, sub2) = random_part(&mut rng)?;
        let joint = s1.tensor(&s2);
        let joint_sub: Vec<usize> = sub1.iter().copied().chain(sub2.iter().map(|i| i + s1.n())).collect();
        let lhs = joint_value(w, &reduced_density_matrix(&joint, &joint_sub)?);
        let rhs = w.evaluate(&reduced_density_matrix(&s1, &sub1)?) + w.evaluate(&reduced_density_matrix(&s2, &sub2)?);
        max_dev = max_dev.max((lhs - rhs).abs());

        let (a0, a1) = random_qubit(&mut rng);
        let pure = MpsState::product_state(&[(a0, a1)])?;
        let pair = MpsState::random(2, 2, &mut rng)?;
        for v in [
            w.evaluate(&reduced_density_matrix(&pure, &[0])?),
            w.evaluate(&reduced_density_matrix(&pair, &[rng.random_range(0..2)])?),
        ] {
            lo = lo.min(v);
            hi = hi.max(v);
            if !(-1e-12..=1.0 + 1e-12).contains(&v) {
                violations += 1;
            }
        }
    }
    Ok(AxiomReport {
        passed: max_dev <= ADDITIVITY_TOL && violations == 0,
        trials: trials.max(1),
        max_additivity_deviation: max_dev,
        range_violations: violations,
        single_qubit_min: lo,
        single_qubit_max: hi,
    })
}

fn joint_value(w: WeightFunction, rho: &DensityMatrix) -> f64 {
    match w {
        WeightFunction::Entropy => rho.spectrum().iter().map(|&p| xlog2x(p)).sum(),
        _ => w.evaluate(rho),
    }
}

fn random_qubit<R: Rng>(rng: &mut R) -> (C64, C64) {
    let a = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let b = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt().max(f64::MIN_POSITIVE);
    (a / norm, b / norm)
}

fn random_part<R: Rng>(rng: &mut R) -> Result<(MpsState, Vec<usize>)> {
    let n = rng.random_range(1..=3);
    let bond = rng.random_range(1..=2);
    let state = MpsState::random(n, bond, rng)?;
    let subset = loop {
        let sub: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if !sub.is_empty() {
            break sub;
        }
    };
    Ok((state, subset))
}
