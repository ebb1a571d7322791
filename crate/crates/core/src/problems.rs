//! SES and SESSP instances, their certificates, and polynomial-time
//! certificate verification.
//!
//! Comparison policy: window edges are inclusive. A floating-point weight
//! farther than [`FLOAT_SLACK`] from every edge is classified directly. Near
//! an edge, instances that carry exact per-qubit weights (separable,
//! per-qubit additive) are classified in exact arithmetic; all others accept
//! values up to [`FLOAT_SLACK`] outside the window.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Decimal;
use crate::mps::MpsState;
use crate::rdm::{check_subset, reduced_density_matrix};
use crate::weights::WeightFunction;

pub const FLOAT_SLACK: f64 = 1e-9;

/// Largest admissible number of digits in instance numbers for `n` qubits.
pub fn max_precision_digits(n: usize) -> u32 {
    64 + 16 * n as u32
}

/// Tolerance between float single-qubit weights and declared exact ones.
const SITE_WEIGHT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct SesInstance {
    state: MpsState,
    weight: WeightFunction,
    target: Decimal,
    epsilon: Decimal,
    precision_digits: u32,
    site_weights: Option<Vec<Decimal>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SesspInstance {
    state: MpsState,
    weight: WeightFunction,
    epsilon: Decimal,
    precision_digits: u32,
    site_weights: Option<Vec<Decimal>>,
}

fn check_precision(n: usize, values: &[&Decimal]) -> Result<u32> {
    let digits = values.iter().map(|v| v.precision_digits()).max().unwrap_or(0);
    if digits > max_precision_digits(n) {
        return Err(Error::InvalidInstance(format!(
            "numbers need {digits} digits, bound for n = {n} is {}",
            max_precision_digits(n)
        )));
    }
    Ok(digits)
}

fn check_site_weights(state: &MpsState, weight: &WeightFunction, exact: &[Decimal]) -> Result<()> {
    if !weight.is_per_qubit_additive() {
        return Err(Error::NotAdditiveWeight);
    }
    if !state.is_product() {
        return Err(Error::NotSeparable { chi: state.max_bipartite_rank() });
    }
    if exact.len() != state.n() {
        return Err(Error::InvalidInstance(format!("{} site weights for {} qubits", exact.len(), state.n())));
    }
    for (i, e) in exact.iter().enumerate() {
        let f = weight.single_qubit(&state.site_rdm(i));
        if (f - e.to_f64()).abs() > SITE_WEIGHT_TOL {
            return Err(Error::InvalidInstance(format!("site weight {i} is {e} but the state gives {f}")));
        }
    }
    Ok(())
}

impl SesInstance {
    pub fn new(state: MpsState, weight: WeightFunction, target: Decimal, epsilon: Decimal) -> Result<Self> {
        if epsilon.is_negative() {
            return Err(Error::InvalidInstance("epsilon must be nonnegative".into()));
        }
        if target <= epsilon {
            return Err(Error::InvalidInstance(format!("B = {target} must exceed epsilon = {epsilon}")));
        }
        let precision_digits = check_precision(state.n(), &[&target, &epsilon])?;
        Ok(SesInstance {
            state,
            weight,
            target,
            epsilon,
            precision_digits,
            site_weights: None,
        })
    }

    /// Attaches exact per-qubit weights; requires a product state and a
    /// per-qubit additive weight that reproduces them within 1e-9.
    pub fn with_site_weights(mut self, exact: Vec<Decimal>) -> Result<Self> {
        check_site_weights(&self.state, &self.weight, &exact)?;
        let refs: Vec<&Decimal> = exact.iter().chain([&self.target, &self.epsilon]).collect();
        self.precision_digits = check_precision(self.state.n(), &refs)?;
        self.site_weights = Some(exact);
        Ok(self)
    }

    pub fn state(&self) -> &MpsState {
        &self.state
    }

    pub fn weight(&self) -> WeightFunction {
        self.weight
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

    pub fn site_weights(&self) -> Option<&[Decimal]> {
        self.site_weights.as_deref()
    }

    /// `[B - ε, B + ε]`.
    pub fn window(&self) -> (Decimal, Decimal) {
        (&self.target - &self.epsilon, &self.target + &self.epsilon)
    }
}

impl SesspInstance {
    pub fn new(state: MpsState, weight: WeightFunction, epsilon: Decimal) -> Result<Self> {
        if epsilon.is_negative() {
            return Err(Error::InvalidInstance("epsilon must be nonnegative".into()));
        }
        let precision_digits = check_precision(state.n(), &[&epsilon])?;
        Ok(SesspInstance {
            state,
            weight,
            epsilon,
            precision_digits,
            site_weights: None,
        })
    }

    pub fn with_site_weights(mut self, exact: Vec<Decimal>) -> Result<Self> {
        check_site_weights(&self.state, &self.weight, &exact)?;
        let refs: Vec<&Decimal> = exact.iter().chain([&self.epsilon]).collect();
        self.precision_digits = check_precision(self.state.n(), &refs)?;
        self.site_weights = Some(exact);
        Ok(self)
    }

    pub fn state(&self) -> &MpsState {
        &self.state
    }

    pub fn weight(&self) -> WeightFunction {
        self.weight
    }

    pub fn epsilon(&self) -> &Decimal {
        &self.epsilon
    }

    pub fn precision_digits(&self) -> u32 {
        self.precision_digits
    }

    pub fn site_weights(&self) -> Option<&[Decimal]> {
        self.site_weights.as_deref()
    }
}

/// A qubit subset witnessing an SES instance. May be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SubsetRepr", into = "SubsetRepr")]
pub struct SubsetCertificate {
    sites: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SubsetRepr {
    sites: Vec<usize>,
}

impl SubsetCertificate {
    pub fn new(sites: Vec<usize>) -> Result<Self> {
        if sites.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCertificate("sites must be strictly increasing".into()));
        }
        Ok(SubsetCertificate { sites })
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        SubsetCertificate {
            sites: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }
}

impl TryFrom<SubsetRepr> for SubsetCertificate {
    type Error = Error;
    fn try_from(r: SubsetRepr) -> Result<Self> {
        SubsetCertificate::new(r.sites)
    }
}

impl From<SubsetCertificate> for SubsetRepr {
    fn from(c: SubsetCertificate) -> Self {
        SubsetRepr { sites: c.sites }
    }
}

/// One side of a bipartition; the other side is the complement.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SplitRepr", into = "SplitRepr")]
pub struct SplitCertificate {
    side_a: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SplitRepr {
    side_a: Vec<usize>,
}

impl SplitCertificate {
    pub fn new(side_a: Vec<usize>) -> Result<Self> {
        if side_a.is_empty() {
            return Err(Error::InvalidCertificate("side_a must be nonempty".into()));
        }
        if side_a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCertificate("side_a must be strictly increasing".into()));
        }
        Ok(SplitCertificate { side_a })
    }

    pub fn from_mask(mask: u64, n: usize) -> Self {
        SplitCertificate {
            side_a: (0..n).filter(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|i| self.side_a.binary_search(i).is_err()).collect()
    }
}

impl TryFrom<SplitRepr> for SplitCertificate {
    type Error = Error;
    fn try_from(r: SplitRepr) -> Result<Self> {
        SplitCertificate::new(r.side_a)
    }
}

impl From<SplitCertificate> for SplitRepr {
    fn from(c: SplitCertificate) -> Self {
        SplitRepr { side_a: c.side_a }
    }
}

/// `W(ρ_S)`; the empty subset has weight 0.
pub fn subset_weight(state: &MpsState, weight: &WeightFunction, sites: &[usize]) -> Result<f64> {
    if sites.is_empty() {
        check_subset(state.n(), sites)?;
        return Ok(0.0);
    }
    Ok(weight.evaluate(&reduced_density_matrix(state, sites)?))
}

/// Inclusive window test under the comparison policy.
pub(crate) fn classify(value: f64, lo: &Decimal, hi: &Decimal, exact: impl FnOnce() -> Option<Decimal>) -> bool {
    let (lo_f, hi_f) = (lo.to_f64(), hi.to_f64());
    let near = (value - lo_f).abs() <= FLOAT_SLACK || (value - hi_f).abs() <= FLOAT_SLACK;
    if near {
        if let Some(e) = exact() {
            return *lo <= e && e <= *hi;
        }
    }
    value >= lo_f - FLOAT_SLACK && value <= hi_f + FLOAT_SLACK
}

fn exact_sum(weights: Option<&[Decimal]>, sites: &[usize]) -> Option<Decimal> {
    weights.map(|w| sites.iter().map(|&i| &w[i]).sum())
}

/// Accepts iff `B - ε <= W(ρ_cert) <= B + ε`.
pub fn verify_ses(inst: &SesInstance, cert: &SubsetCertificate) -> Result<bool> {
    check_subset(inst.state.n(), cert.sites())?;
    let w = subset_weight(&inst.state, &inst.weight, cert.sites())?;
    let (lo, hi) = inst.window();
    Ok(classify(w, &lo, &hi, || exact_sum(inst.site_weights(), cert.sites())))
}

/// Accepts iff `|W(ρ_A) - W(ρ_B)| <= ε` with both sides nonempty.
pub fn verify_sessp(inst: &SesspInstance, cert: &SplitCertificate) -> Result<bool> {
    let n = inst.state.n();
    check_subset(n, cert.side_a())?;
    let side_b = cert.side_b(n);
    if side_b.is_empty() {
        return Err(Error::InvalidCertificate("split leaves side B empty".into()));
    }
    let wa = subset_weight(&inst.state, &inst.weight, cert.side_a())?;
    let wb = subset_weight(&inst.state, &inst.weight, &side_b)?;
    let eps = inst.epsilon.clone();
    Ok(classify(wa - wb, &-eps.clone(), &eps, || {
        Some(exact_sum(inst.site_weights(), cert.side_a())? - exact_sum(inst.site_weights(), &side_b)?)
    }))
}
