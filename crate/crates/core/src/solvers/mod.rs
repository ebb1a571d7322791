//! Exact deciders for SES and SESSP.
//!
//! Brute force over all subsets is the reference semantics. Separable
//! instances with a per-qubit additive weight can also be decided by a
//! meet-in-the-middle search or, when exact per-qubit weights are attached,
//! by subset-sum dynamic programming on the scaled integers.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{common_denominator, scale_to_integer, Decimal};
use crate::mps::MpsState;
use crate::problems::{
    classify, verify_ses, verify_sessp, SesInstance, SesspInstance, SplitCertificate, SubsetCertificate,
    FLOAT_SLACK,
};
use crate::rdm::reduced_density_matrix;
use crate::weights::WeightFunction;

pub mod dp;
pub mod mim;

pub use dp::{solve_partition_dp, solve_subset_sum_dp, subset_sum_window, MAX_TABLE_CELLS};
pub use mim::{OrdF64, MIM_LIMIT};

pub const DEFAULT_LIMIT_N: usize = 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Brute,
    SeparableMim,
    Dp,
    Auto,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Brute => "brute",
            Strategy::SeparableMim => "separable-mim",
            Strategy::Dp => "dp",
            Strategy::Auto => "auto",
        })
    }
}

impl FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Strategy::Brute),
            "separable-mim" => Ok(Strategy::SeparableMim),
            "dp" => Ok(Strategy::Dp),
            "auto" => Ok(Strategy::Auto),
            other => Err(Error::Parse(format!("unknown strategy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Worker threads for brute-force enumeration.
    pub workers: usize,
    /// Full scans with the lexicographically smallest witness.
    pub deterministic: bool,
    pub limit_n: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::Auto,
            workers: 1,
            deterministic: true,
            limit_n: DEFAULT_LIMIT_N,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Certificate {
    Subset(SubsetCertificate),
    Split(SplitCertificate),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveStats {
    pub subsets_examined: u64,
    pub wall_time: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub decision: bool,
    pub certificate: Option<Certificate>,
    /// The concrete strategy that ran (never `Auto`).
    pub strategy: Strategy,
    pub stats: SolveStats,
}

/// Is `a` before `b` when both masks are read as sorted index lists?
pub fn lex_less(a: u64, b: u64) -> bool {
    if a == b {
        return false;
    }
    let d = (a ^ b).trailing_zeros();
    let above = if d >= 63 { 0 } else { !0u64 << (d + 1) };
    if a >> d & 1 == 1 {
        b & above != 0
    } else {
        a & above == 0
    }
}

fn lex_min(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if lex_less(y, x) { y } else { x }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Weight of every local subset of every segment, so that the weight of a
/// global subset is a sum of table lookups. Exact because both weight
/// families are additive over the tensor factors of the state.
struct SubsetScorer {
    tables: Vec<(usize, u64, Vec<f64>)>,
}

impl SubsetScorer {
    fn new(state: &MpsState, weight: &WeightFunction) -> Result<Self> {
        let mut tables = Vec::new();
        for seg in state.segments() {
            let len = seg.len();
            let mut values = vec![0.0; 1 << len];
            for (local, slot) in values.iter_mut().enumerate().skip(1) {
                let sites: Vec<usize> = (0..len).filter(|b| local >> b & 1 == 1).map(|b| seg.start + b).collect();
                *slot = weight.evaluate(&reduced_density_matrix(state, &sites)?);
            }
            tables.push((seg.start, (1u64 << len) - 1, values));
        }
        Ok(SubsetScorer { tables })
    }

    #[inline]
    fn score(&self, mask: u64) -> f64 {
        self.tables
            .iter()
            .map(|(start, local, values)| values[((mask >> start) & local) as usize])
            .sum()
    }
}

const CHUNK: u64 = 1 << 12;

/// Scans `count` candidates, `to_mask` mapping a candidate ordinal to a
/// subset mask, returning an accepted mask and the number examined.
fn scan<M, A>(count: u64, to_mask: M, accept: A, opts: &SolveOptions) -> Result<(Option<u64>, u64)>
where
    M: Fn(u64) -> u64 + Sync,
    A: Fn(u64) -> bool + Sync,
{
    let chunks = count.div_ceil(CHUNK);
    let chunk_range = |c: u64| (c * CHUNK)..((c + 1) * CHUNK).min(count);
    if opts.deterministic {
        let best_in = |c: u64| {
            chunk_range(c)
                .map(&to_mask)
                .filter(|&m| accept(m))
                .fold(None, |best, m| lex_min(best, Some(m)))
        };
        let found = if opts.workers <= 1 {
            (0..chunks).map(best_in).fold(None, lex_min)
        } else {
            pool(opts.workers)?.install(|| (0..chunks).into_par_iter().map(best_in).reduce(|| None, lex_min))
        };
        return Ok((found, count));
    }
    let examined = AtomicU64::new(0);
    let first_in = |c: u64| {
        let r = chunk_range(c);
        let hit = r.clone().map(&to_mask).find(|&m| accept(m));
        let scanned = match hit {
            Some(m) => r.clone().position(|k| to_mask(k) == m).map_or(0, |p| p as u64 + 1),
            None => r.end - r.start,
        };
        examined.fetch_add(scanned, Ordering::Relaxed);
        hit
    };
    let found = if opts.workers <= 1 {
        (0..chunks).find_map(first_in)
    } else {
        pool(opts.workers)?.install(|| (0..chunks).into_par_iter().find_map_any(first_in))
    };
    Ok((found, examined.into_inner()))
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Io(e.to_string()))
}

fn check_size(n: usize, limit: usize) -> Result<()> {
    if n > limit || n > 62 {
        return Err(Error::InstanceTooLarge { n, limit: limit.min(62) });
    }
    Ok(())
}

fn exact_mask_sum(weights: Option<&[Decimal]>, mask: u64) -> Option<Decimal> {
    weights.map(|w| w.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum())
}

fn soundness_violation() -> Error {
    Error::InvalidInstance("solver witness failed verification".into())
}

fn finish_ses(inst: &SesInstance, mask: Option<u64>, strategy: Strategy, examined: u64, t0: Instant) -> Result<SolveResult> {
    let certificate = match mask {
        Some(m) => {
            let cert = SubsetCertificate::from_mask(m, inst.state().n());
            if !verify_ses(inst, &cert)? {
                return Err(soundness_violation());
            }
            Some(Certificate::Subset(cert))
        }
        None => None,
    };
    Ok(SolveResult {
        decision: certificate.is_some(),
        certificate,
        strategy,
        stats: SolveStats { subsets_examined: examined, wall_time: t0.elapsed() },
    })
}

fn finish_sessp(inst: &SesspInstance, mask: Option<u64>, strategy: Strategy, examined: u64, t0: Instant) -> Result<SolveResult> {
    let certificate = match mask {
        Some(m) => {
            let cert = SplitCertificate::from_mask(m, inst.state().n());
            if !verify_sessp(inst, &cert)? {
                return Err(soundness_violation());
            }
            Some(Certificate::Split(cert))
        }
        None => None,
    };
    Ok(SolveResult {
        decision: certificate.is_some(),
        certificate,
        strategy,
        stats: SolveStats { subsets_examined: examined, wall_time: t0.elapsed() },
    })
}

/// Exhaustive SES search, sequential and deterministic.
pub fn solve_ses_bruteforce(inst: &SesInstance, limit_n: usize) -> Result<SolveResult> {
    solve_ses_bruteforce_with(inst, &SolveOptions { limit_n, ..SolveOptions::default() })
}

pub fn solve_ses_bruteforce_with(inst: &SesInstance, opts: &SolveOptions) -> Result<SolveResult> {
    let t0 = Instant::now();
    let n = inst.state().n();
    check_size(n, opts.limit_n)?;
    let scorer = SubsetScorer::new(inst.state(), &inst.weight())?;
    let (lo, hi) = inst.window();
    let accept = |m: u64| classify(scorer.score(m), &lo, &hi, || exact_mask_sum(inst.site_weights(), m));
    let (found, examined) = scan(1u64 << n, |k| k, accept, opts)?;
    finish_ses(inst, found, Strategy::Brute, examined, t0)
}

/// Exhaustive SESSP search over splits with qubit 0 on side A.
pub fn solve_sessp_bruteforce(inst: &SesspInstance, limit_n: usize) -> Result<SolveResult> {
    solve_sessp_bruteforce_with(inst, &SolveOptions { limit_n, ..SolveOptions::default() })
}

pub fn solve_sessp_bruteforce_with(inst: &SesspInstance, opts: &SolveOptions) -> Result<SolveResult> {
    let t0 = Instant::now();
    let n = inst.state().n();
    check_size(n, opts.limit_n)?;
    let scorer = SubsetScorer::new(inst.state(), &inst.weight())?;
    let full = (1u64 << n) - 1;
    let eps = inst.epsilon().clone();
    let neg = -eps.clone();
    let accept = |m: u64| {
        let diff = scorer.score(m) - scorer.score(full & !m);
        classify(diff, &neg, &eps, || {
            Some(exact_mask_sum(inst.site_weights(), m)? - exact_mask_sum(inst.site_weights(), full & !m)?)
        })
    };
    let count = (1u64 << (n - 1)) - 1;
    let (found, examined) = scan(count, |k| 2 * k + 1, accept, opts)?;
    finish_sessp(inst, found, Strategy::Brute, examined, t0)
}

fn require_separable(state: &MpsState, weight: &WeightFunction) -> Result<()> {
    if !weight.is_per_qubit_additive() {
        return Err(Error::NotAdditiveWeight);
    }
    if !state.is_product() {
        return Err(Error::NotSeparable { chi: state.max_bipartite_rank() });
    }
    Ok(())
}

fn float_site_weights(state: &MpsState, weight: &WeightFunction) -> Vec<f64> {
    (0..state.n()).map(|i| weight.single_qubit(&state.site_rdm(i))).collect()
}

fn mim_examined(n: usize) -> u64 {
    (1u64 << (n / 2)) + (1u64 << (n - n / 2))
}

/// Meet-in-the-middle decision for separable instances with a per-qubit
/// additive weight. Uses exact arithmetic when exact site weights exist.
pub fn solve_ses_separable(inst: &SesInstance) -> Result<SolveResult> {
    let t0 = Instant::now();
    require_separable(inst.state(), &inst.weight())?;
    let n = inst.state().n();
    let (lo, hi) = inst.window();
    let found = match inst.site_weights() {
        Some(exact) => {
            let den = common_denominator(exact.iter().chain([&lo, &hi]));
            let ints: Vec<BigInt> = exact.iter().map(|v| scale_to_integer(v, &den)).collect();
            let (lo_i, hi_i) = (scale_to_integer(&lo, &den), scale_to_integer(&hi, &den));
            mim::search_window(&ints, &lo_i, &hi_i, &BigInt::zero())?
        }
        None => {
            let w: Vec<OrdF64> = float_site_weights(inst.state(), &inst.weight()).into_iter().map(OrdF64).collect();
            let lo_f = OrdF64(lo.to_f64() - FLOAT_SLACK);
            let hi_f = OrdF64(hi.to_f64() + FLOAT_SLACK);
            mim::search_window(&w, &lo_f, &hi_f, &OrdF64(0.0))?
        }
    };
    finish_ses(inst, found, Strategy::SeparableMim, mim_examined(n), t0)
}

/// Meet-in-the-middle decision for separable SESSP instances. Qubit 0 is
/// forced onto side A.
pub fn solve_sessp_separable(inst: &SesspInstance) -> Result<SolveResult> {
    let t0 = Instant::now();
    require_separable(inst.state(), &inst.weight())?;
    let n = inst.state().n();
    if n < 2 {
        return finish_sessp(inst, None, Strategy::SeparableMim, 0, t0);
    }
    let rest_mask = match inst.site_weights() {
        Some(exact) => {
            let eps = inst.epsilon();
            let total: Decimal = exact.iter().sum();
            let den = common_denominator(exact.iter().chain([eps, &total]));
            // 2 S_A D in [(T - ε) D, (T + ε) D]
            let two = BigInt::from(2);
            let ints: Vec<BigInt> = exact.iter().map(|v| scale_to_integer(v, &den) * &two).collect();
            let lo = scale_to_integer(&(&total - eps), &den) - &ints[0];
            let hi = scale_to_integer(&(&total + eps), &den) - &ints[0];
            mim::search_window(&ints[1..], &lo, &hi, &BigInt::zero())?
        }
        None => {
            let w = float_site_weights(inst.state(), &inst.weight());
            let total: f64 = w.iter().sum();
            let eps = inst.epsilon().to_f64() + FLOAT_SLACK;
            let lo = OrdF64((total - eps) / 2.0 - w[0]);
            let hi = OrdF64((total + eps) / 2.0 - w[0]);
            let rest: Vec<OrdF64> = w[1..].iter().copied().map(OrdF64).collect();
            mim::search_window(&rest, &lo, &hi, &OrdF64(0.0))?
        }
    };
    let full_rest = (1u64 << (n - 1)) - 1;
    // Everything on side A means the total fits inside ε; then {0} balances too.
    let found = rest_mask.map(|r| if r == full_rest { 1 } else { 1 | r << 1 });
    finish_sessp(inst, found, Strategy::SeparableMim, mim_examined(n - 1), t0)
}

fn to_u64(v: &BigInt) -> Result<u64> {
    v.to_u64().ok_or(Error::TableTooLarge { cells: u128::MAX, limit: MAX_TABLE_CELLS })
}

fn require_exact(weights: Option<&[Decimal]>) -> Result<&[Decimal]> {
    weights.ok_or_else(|| Error::InvalidInstance("the dp strategy needs exact per-qubit weights".into()))
}

/// Subset-sum DP on the exact per-qubit weights scaled to integers.
pub fn solve_ses_dp(inst: &SesInstance) -> Result<SolveResult> {
    let t0 = Instant::now();
    require_separable(inst.state(), &inst.weight())?;
    let exact = require_exact(inst.site_weights())?;
    let (lo, hi) = inst.window();
    let den = common_denominator(exact.iter().chain([&lo, &hi]));
    let ints = exact.iter().map(|v| to_u64(&scale_to_integer(v, &den))).collect::<Result<Vec<_>>>()?;
    let lo_i = scale_to_integer(&lo, &den).max(BigInt::zero());
    let total: u128 = ints.iter().map(|&v| v as u128).sum();
    let hi_i = scale_to_integer(&hi, &den).min(BigInt::from(total));
    let found = if hi_i < lo_i {
        None
    } else {
        dp::subset_sum_window(&ints, to_u64(&lo_i)?, to_u64(&hi_i)?)?
            .map(|idx| idx.iter().fold(0u64, |m, &i| m | 1 << i))
    };
    finish_ses(inst, found, Strategy::Dp, ints.len() as u64, t0)
}

pub fn solve_sessp_dp(inst: &SesspInstance) -> Result<SolveResult> {
    let t0 = Instant::now();
    require_separable(inst.state(), &inst.weight())?;
    let exact = require_exact(inst.site_weights())?;
    let n = exact.len();
    if n < 2 {
        return finish_sessp(inst, None, Strategy::Dp, 0, t0);
    }
    let eps = inst.epsilon();
    let total: Decimal = exact.iter().sum();
    let den = common_denominator(exact.iter().chain([eps, &total]));
    let ints = exact
        .iter()
        .map(|v| to_u64(&(scale_to_integer(v, &den) * BigInt::from(2))))
        .collect::<Result<Vec<_>>>()?;
    let lo = (scale_to_integer(&(&total - eps), &den) - BigInt::from(ints[0])).max(BigInt::zero());
    let rest_total: u128 = ints[1..].iter().map(|&v| v as u128).sum();
    let hi = (scale_to_integer(&(&total + eps), &den) - BigInt::from(ints[0])).min(BigInt::from(rest_total));
    let rest = if hi < lo {
        None
    } else {
        dp::subset_sum_window(&ints[1..], to_u64(&lo)?, to_u64(&hi)?)?
    };
    let full_rest = (1u64 << (n - 1)) - 1;
    let found = rest.map(|idx| {
        let r = idx.iter().fold(0u64, |m, &i| m | 1 << i);
        if r == full_rest {
            1
        } else {
            1 | r << 1
        }
    });
    finish_sessp(inst, found, Strategy::Dp, ints.len() as u64, t0)
}

fn separable_applicable(state: &MpsState, weight: &WeightFunction) -> bool {
    weight.is_per_qubit_additive() && state.is_product() && state.n() <= MIM_LIMIT
}

/// Decides an SES instance with the selected strategy.
pub fn solve_ses(inst: &SesInstance, opts: &SolveOptions) -> Result<SolveResult> {
    match opts.strategy {
        Strategy::Brute => solve_ses_bruteforce_with(inst, opts),
        Strategy::SeparableMim => solve_ses_separable(inst),
        Strategy::Dp => solve_ses_dp(inst),
        Strategy::Auto if separable_applicable(inst.state(), &inst.weight()) => solve_ses_separable(inst),
        Strategy::Auto => solve_ses_bruteforce_with(inst, opts),
    }
}

/// Decides an SESSP instance with the selected strategy.
pub fn solve_sessp(inst: &SesspInstance, opts: &SolveOptions) -> Result<SolveResult> {
    match opts.strategy {
        Strategy::Brute => solve_sessp_bruteforce_with(inst, opts),
        Strategy::SeparableMim => solve_sessp_separable(inst),
        Strategy::Dp => solve_sessp_dp(inst),
        Strategy::Auto if separable_applicable(inst.state(), &inst.weight()) => solve_sessp_separable(inst),
        Strategy::Auto => solve_sessp_bruteforce_with(inst, opts),
    }
}
