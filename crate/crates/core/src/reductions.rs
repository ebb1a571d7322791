//! Reduction chains from classical number problems to SES / SESSP.
//!
//! ```text
//! SUBSET SUM --lift--> real subset sum --normalize--> normalized instance
//!     normalized --> SES (product state, Z magnetization)
//!     normalized --> SES (2n-qubit entangled pairs, entropy)
//! PARTITION --> SESSP (product state, Z magnetization, ε = 1/(2C))
//! ```
//!
//! Every reduction returns a [`ReductionMap`] that translates certificates
//! between the two sides.

use num_bigint::BigInt;
use num_complex::Complex64 as C64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, scale_to_integer, Decimal};
use crate::mps::MpsState;
use crate::problems::{max_precision_digits, SesInstance, SesspInstance};
use crate::solvers::mim;
use crate::weights::{Axis, WeightFunction};

/// Per-pair widening of the entropy-instance window, in units of `10^-9`.
const GADGET_WIDEN_DIGITS: u32 = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumInstance {
    sizes: Vec<u64>,
    target: u64,
}

impl SubsetSumInstance {
    pub fn new(sizes: Vec<u64>, target: u64) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInstance("the item set is empty".into()));
        }
        if sizes.contains(&0) || target == 0 {
            return Err(Error::InvalidInstance("sizes and target must be positive integers".into()));
        }
        Ok(SubsetSumInstance { sizes, target })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn target(&self) -> u64 {
        self.target
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionInstance {
    sizes: Vec<u64>,
}

impl PartitionInstance {
    pub fn new(sizes: Vec<u64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInstance("the item set is empty".into()));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidInstance("sizes must be positive integers".into()));
        }
        Ok(PartitionInstance { sizes })
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }
}

/// Is there a subset with sum in `[B - ε, B + ε]`?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSubsetSumInstance {
    sizes: Vec<Decimal>,
    target: Decimal,
    epsilon: Decimal,
    precision_digits: u32,
}

impl RealSubsetSumInstance {
    pub fn new(sizes: Vec<Decimal>, target: Decimal, epsilon: Decimal) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidInstance("the item set is empty".into()));
        }
        if sizes.iter().chain([&target, &epsilon]).any(Decimal::is_negative) {
            return Err(Error::InvalidInstance("sizes, B and epsilon must be nonnegative".into()));
        }
        if target <= epsilon {
            return Err(Error::InvalidInstance(format!("B = {target} must exceed epsilon = {epsilon}")));
        }
        let precision_digits = sizes
            .iter()
            .chain([&target, &epsilon])
            .map(Decimal::precision_digits)
            .max()
            .unwrap_or(0);
        if precision_digits > max_precision_digits(sizes.len()) {
            return Err(Error::InvalidInstance(format!("numbers need {precision_digits} digits")));
        }
        Ok(RealSubsetSumInstance { sizes, target, epsilon, precision_digits })
    }

    pub fn sizes(&self) -> &[Decimal] {
        &self.sizes
    }

    pub fn target(&self) -> &Decimal {
        &self.target
    }

    pub fn epsilon(&self) -> &Decimal {
        &self.epsilon
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    /// Exact decision with a witness, by meet-in-the-middle on the sizes
    /// scaled to integers.
    pub fn solve_exact(&self) -> Result<Option<Vec<usize>>> {
        window_witness(&self.sizes, &(&self.target - &self.epsilon), &(&self.target + &self.epsilon))
    }
}

/// Indices of a subset of `values` whose exact sum lies in `[lo, hi]`.
fn window_witness(values: &[Decimal], lo: &Decimal, hi: &Decimal) -> Result<Option<Vec<usize>>> {
    let den = common_denominator(values.iter().chain([lo, hi]));
    let ints: Vec<BigInt> = values.iter().map(|v| scale_to_integer(v, &den)).collect();
    let found = mim::search_window(&ints, &scale_to_integer(lo, &den), &scale_to_integer(hi, &den), &BigInt::zero())?;
    Ok(found.map(|m| (0..values.len()).filter(|i| m >> i & 1 == 1).collect()))
}

/// Scale-normalized instance: sizes divided by their total `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedRealInstance {
    tilde_sizes: Vec<Decimal>,
    tilde_target: Decimal,
    tilde_epsilon: Decimal,
    normalization: Decimal,
    degenerate: bool,
}

impl NormalizedRealInstance {
    pub fn tilde_sizes(&self) -> &[Decimal] {
        &self.tilde_sizes
    }

    pub fn tilde_target(&self) -> &Decimal {
        &self.tilde_target
    }

    pub fn tilde_epsilon(&self) -> &Decimal {
        &self.tilde_epsilon
    }

    /// `C`, the sum of the original sizes.
    pub fn normalization(&self) -> &Decimal {
        &self.normalization
    }

    /// `C = 0`: all sizes are zero, values passed through, answer is no.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn solve_exact(&self) -> Result<Option<Vec<usize>>> {
        window_witness(
            &self.tilde_sizes,
            &(&self.tilde_target - &self.tilde_epsilon),
            &(&self.tilde_target + &self.tilde_epsilon),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    SubsetSum,
    Partition,
    RealSubsetSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetKind {
    Ses,
    Sessp,
    SesEntropy,
}

/// Correspondence between classical items and qubits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMap {
    pub source: SourceKind,
    pub target: TargetKind,
    pub items: usize,
    pub qubits: usize,
    /// Normalization constant `C`.
    pub normalization: Decimal,
    /// Qubit pair carrying each item; absent when item `i` is qubit `i`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[usize; 2]>>,
    /// Sizes of the classical items, for reporting back-mapped witnesses.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_sizes: Option<Vec<Decimal>>,
}

impl ReductionMap {
    pub fn with_source(mut self, source: SourceKind) -> Self {
        self.source = source;
        self
    }

    pub fn with_source_sizes(mut self, sizes: Vec<Decimal>) -> Self {
        self.source_sizes = Some(sizes);
        self
    }

    /// Quantum certificate for a classical item subset.
    pub fn forward(&self, items: &[usize]) -> Vec<usize> {
        match &self.pairs {
            None => items.to_vec(),
            Some(pairs) => items.iter().map(|&i| pairs[i][0]).collect(),
        }
    }

    /// Classical item subset for a quantum certificate. For the pair gadget
    /// an item is selected when exactly one qubit of its pair is.
    pub fn back(&self, qubits: &[usize]) -> Vec<usize> {
        match &self.pairs {
            None => qubits.to_vec(),
            Some(pairs) => pairs
                .iter()
                .enumerate()
                .filter(|(_, [a, b])| qubits.contains(a) != qubits.contains(b))
                .map(|(i, _)| i)
                .collect(),
        }
    }
}

/// Integer instance as a real instance with window half-width `epsilon`.
pub fn lift_to_real(inst: &SubsetSumInstance, epsilon: Decimal) -> Result<RealSubsetSumInstance> {
    if epsilon.is_negative() || epsilon >= Decimal::from_ratio(1, 2) {
        return Err(Error::EpsilonTooLarge(epsilon.to_string()));
    }
    RealSubsetSumInstance::new(
        inst.sizes.iter().map(|&s| Decimal::from(s)).collect(),
        Decimal::from(inst.target),
        epsilon,
    )
}

/// Divides sizes, target and epsilon by `C = sum of sizes`; `C = 0` passes
/// through unaltered.
pub fn normalize(inst: &RealSubsetSumInstance) -> Result<NormalizedRealInstance> {
    let c: Decimal = inst.sizes.iter().sum();
    let out = if c.is_zero() {
        NormalizedRealInstance {
            tilde_sizes: inst.sizes.clone(),
            tilde_target: inst.target.clone(),
            tilde_epsilon: inst.epsilon.clone(),
            normalization: c,
            degenerate: true,
        }
    } else {
        NormalizedRealInstance {
            tilde_sizes: inst.sizes.iter().map(|s| s / &c).collect(),
            tilde_target: &inst.target / &c,
            tilde_epsilon: &inst.epsilon / &c,
            normalization: c,
            degenerate: false,
        }
    };
    if out.tilde_target > Decimal::from(inst.sizes.len() as u64) {
        return Err(Error::TargetExceedsSetSize(inst.sizes.len()));
    }
    Ok(out)
}

fn amplitude_pair(weight: &Decimal) -> (C64, C64) {
    let s = weight.to_f64().clamp(0.0, 1.0);
    (C64::new((1.0 - s).sqrt(), 0.0), C64::new(s.sqrt(), 0.0))
}

fn check_unit_interval(sizes: &[Decimal]) -> Result<()> {
    match sizes.iter().position(|s| s.is_negative() || *s > Decimal::one()) {
        Some(index) => Err(Error::EntropyOutOfRange { index, value: sizes[index].to_f64() }),
        None => Ok(()),
    }
}

/// Product state with qubit `i` in `sqrt(1 - s_i)|0> + sqrt(s_i)|1>` and
/// Z-magnetization weight, so qubit `i` weighs exactly `s_i`.
pub fn reduce_to_ses_magnetization(norm: &NormalizedRealInstance) -> Result<(SesInstance, ReductionMap)> {
    check_unit_interval(&norm.tilde_sizes)?;
    let amps: Vec<(C64, C64)> = norm.tilde_sizes.iter().map(amplitude_pair).collect();
    let state = MpsState::product_state(&amps)?;
    let n = state.n();
    let inst = SesInstance::new(
        state,
        WeightFunction::Magnetization { axis: Axis::Z },
        norm.tilde_target.clone(),
        norm.tilde_epsilon.clone(),
    )?
    .with_site_weights(norm.tilde_sizes.clone())?;
    let map = ReductionMap {
        source: SourceKind::RealSubsetSum,
        target: TargetKind::Ses,
        items: n,
        qubits: n,
        normalization: norm.normalization.clone(),
        pairs: None,
        source_sizes: None,
    };
    Ok((inst, map))
}

/// PARTITION as SESSP over the normalized product state with
/// `ε = 1/(2C)`: unequal integer halves differ by at least `1/C`.
pub fn reduce_to_sessp(inst: &PartitionInstance) -> Result<(SesspInstance, ReductionMap)> {
    let c: u64 = inst.sizes.iter().sum();
    let c_dec = Decimal::from(c);
    let tilde: Vec<Decimal> = inst.sizes.iter().map(|&s| Decimal::from_ratio(s, c)).collect();
    let amps: Vec<(C64, C64)> = tilde.iter().map(amplitude_pair).collect();
    let state = MpsState::product_state(&amps)?;
    let n = state.n();
    let out = SesspInstance::new(
        state,
        WeightFunction::Magnetization { axis: Axis::Z },
        Decimal::from_ratio(1, 2 * c),
    )?
    .with_site_weights(tilde)?;
    let map = ReductionMap {
        source: SourceKind::Partition,
        target: TargetKind::Sessp,
        items: n,
        qubits: n,
        normalization: c_dec,
        pairs: None,
        source_sizes: Some(inst.sizes.iter().map(|&s| Decimal::from(s)).collect()),
    };
    Ok((out, map))
}

/// `2n` qubits in entangled pairs whose single-qubit entropies are the
/// normalized sizes, with entropy weight.
///
/// The window is widened by `n * 1e-9` to absorb floating-point error in
/// the realized entropies. Instances whose classical answer would change
/// inside the widened band (plus the verifier's comparison slack) are
/// rejected with [`Error::WindowTooNarrow`].
pub fn reduce_to_ses_entropy(norm: &NormalizedRealInstance) -> Result<(SesInstance, ReductionMap)> {
    check_unit_interval(&norm.tilde_sizes)?;
    let n = norm.tilde_sizes.len();
    let entropies: Vec<f64> = norm.tilde_sizes.iter().map(|s| s.to_f64().clamp(0.0, 1.0)).collect();
    let state = MpsState::entangled_pair_chain(&entropies)?;

    let unit = Decimal::pow10_neg(GADGET_WIDEN_DIGITS);
    let widen = Decimal::from(n as u64) * unit.clone();
    let epsilon = &norm.tilde_epsilon + &widen;
    if norm.tilde_target <= epsilon {
        return Err(Error::WindowTooNarrow(format!(
            "B = {} does not exceed the widened epsilon {}",
            norm.tilde_target, epsilon
        )));
    }
    let lo = &norm.tilde_target - &norm.tilde_epsilon;
    let hi = &norm.tilde_target + &norm.tilde_epsilon;
    if window_witness(&norm.tilde_sizes, &lo, &hi)?.is_none() {
        let band = &widen + &(Decimal::from(2u64) * unit);
        if let Some(near) = window_witness(&norm.tilde_sizes, &(&lo - &band), &(&hi + &band))? {
            return Err(Error::WindowTooNarrow(format!(
                "items {near:?} sum to within {band} of the window"
            )));
        }
    }

    let inst = SesInstance::new(state, WeightFunction::Entropy, norm.tilde_target.clone(), epsilon)?;
    let map = ReductionMap {
        source: SourceKind::RealSubsetSum,
        target: TargetKind::SesEntropy,
        items: n,
        qubits: 2 * n,
        normalization: norm.normalization.clone(),
        pairs: Some((0..n).map(|i| [2 * i, 2 * i + 1]).collect()),
        source_sizes: None,
    };
    Ok((inst, map))
}
