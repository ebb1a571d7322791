//! Reduced states of qubit subsets.
//!
//! The chain is first split into segments at bonds of dimension 1; the
//! reduced state of any subset is the tensor product of its restrictions to
//! each segment, so a segment that the subset misses or fully contains
//! contributes nothing to the spectrum. Inside a partially covered segment
//! the spectrum is obtained by a left-to-right sweep that keeps the kept and
//! traced physical spaces in compressed orthonormal bases.

use num_complex::Complex64 as C64;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::{singular_values, svd_sorted, CMatrix};
use crate::mps::{MpsState, SCHMIDT_CUTOFF};

/// Maximum number of contiguous blocks a subset may have inside one
/// entangled segment.
pub const BLOCK_CAP: usize = 4;

/// Singular values below this (relative to the largest) are dropped while
/// compressing the sweep.
const COMPRESS_CUTOFF: f64 = 1e-14;

/// Reduced state of a nonempty qubit subset of a pure state.
///
/// The spectrum is kept in factored form: one factor per entangled segment
/// that the subset only partially covers. The full spectrum is the set of
/// products of one eigenvalue from each factor.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    sites: Vec<usize>,
    factors: Vec<Vec<f64>>,
    site_rdms: Vec<[[C64; 2]; 2]>,
}

impl DensityMatrix {
    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    /// Single-qubit reduced states, aligned with [`sites`](Self::sites).
    pub fn site_rdms(&self) -> &[[[C64; 2]; 2]] {
        &self.site_rdms
    }

    /// Nonzero spectra of the tensor factors.
    pub fn spectrum_factors(&self) -> &[Vec<f64>] {
        &self.factors
    }

    /// Number of nonzero eigenvalues.
    pub fn rank(&self) -> usize {
        self.factors.iter().map(Vec::len).product()
    }

    /// Full nonzero spectrum, descending. Its length is [`rank`](Self::rank).
    pub fn spectrum(&self) -> Vec<f64> {
        let mut out = vec![1.0];
        for f in &self.factors {
            out = out.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect();
        }
        out.sort_by(|a, b| b.total_cmp(a));
        out
    }
}

/// Number of maximal contiguous runs in a sorted index list.
pub fn count_blocks(sites: &[usize]) -> usize {
    if sites.is_empty() {
        return 0;
    }
    1 + sites.windows(2).filter(|w| w[1] != w[0] + 1).count()
}

pub(crate) fn check_subset(n: usize, subset: &[usize]) -> Result<()> {
    if let Some(&bad) = subset.iter().find(|&&i| i >= n) {
        return Err(Error::InvalidSubset(format!("qubit {bad} out of range for n = {n}")));
    }
    if subset.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSubset("indices must be strictly increasing".into()));
    }
    Ok(())
}

/// Reduced density matrix of `subset` (sorted, nonempty).
pub fn reduced_density_matrix(state: &MpsState, subset: &[usize]) -> Result<DensityMatrix> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("subset is empty".into()));
    }
    check_subset(state.n(), subset)?;
    let mut factors = Vec::new();
    for seg in state.segments() {
        let lo = subset.partition_point(|&i| i < seg.start);
        let hi = subset.partition_point(|&i| i < seg.end);
        let inside = &subset[lo..hi];
        if inside.is_empty() || inside.len() == seg.len() {
            continue;
        }
        let blocks = count_blocks(inside);
        if blocks > BLOCK_CAP {
            return Err(Error::BlockCapExceeded { blocks, cap: BLOCK_CAP });
        }
        factors.push(segment_spectrum(state, seg, inside));
    }
    Ok(DensityMatrix {
        sites: subset.to_vec(),
        factors,
        site_rdms: subset.iter().map(|&i| state.site_rdm(i)).collect(),
    })
}

/// Amplitude tensor `z[k, j, b]` over (kept basis, traced basis, open bond).
struct Partial {
    k: usize,
    j: usize,
    b: usize,
    data: Vec<C64>,
}

fn compress(m: &CMatrix) -> CMatrix {
    let (_, s, v_t) = svd_sorted(m);
    let top = s.first().copied().unwrap_or(0.0);
    let keep = s.iter().take_while(|&&x| x > COMPRESS_CUTOFF * top).count().max(1);
    CMatrix::from_fn(keep, v_t.ncols(), |r, c| v_t[(r, c)] * s[r])
}

fn segment_spectrum(state: &MpsState, seg: Range<usize>, inside: &[usize]) -> Vec<f64> {
    let mut z = Partial {
        k: 1,
        j: 1,
        b: 1,
        data: vec![C64::new(1.0, 0.0)],
    };
    for i in seg {
        let a = state.left_normalized(i);
        let b2 = a.right();
        let (k, j, b) = (z.k, z.j, z.b);
        let zm = CMatrix::from_fn(k * j, b, |r, c| z.data[r * b + c]);
        // rows (k, j), cols (s, b2)
        let prod = zm * a.to_right_matrix();
        if inside.binary_search(&i).is_ok() {
            let m = CMatrix::from_fn(2 * k, j * b2, |r, c| prod[((r / 2) * j + c / b2, (r % 2) * b2 + c % b2)]);
            let c = compress(&m);
            let kn = c.nrows();
            let mut data = vec![C64::new(0.0, 0.0); kn * j * b2];
            for kk in 0..kn {
                for col in 0..j * b2 {
                    data[kk * j * b2 + col] = c[(kk, col)];
                }
            }
            z = Partial { k: kn, j, b: b2, data };
        } else {
            let m = CMatrix::from_fn(2 * j, k * b2, |r, c| prod[((c / b2) * j + r / 2, (r % 2) * b2 + c % b2)]);
            let c = compress(&m);
            let jn = c.nrows();
            let mut data = vec![C64::new(0.0, 0.0); k * jn * b2];
            for jj in 0..jn {
                for kk in 0..k {
                    for bb in 0..b2 {
                        data[(kk * jn + jj) * b2 + bb] = c[(jj, kk * b2 + bb)];
                    }
                }
            }
            z = Partial { k, j: jn, b: b2, data };
        }
    }
    debug_assert_eq!(z.b, 1);
    let fin = CMatrix::from_fn(z.k, z.j, |r, c| z.data[r * z.j + c]);
    let floor = SCHMIDT_CUTOFF * SCHMIDT_CUTOFF;
    singular_values(&fin)
        .into_iter()
        .map(|s| (s * s).min(1.0))
        .filter(|&p| p > floor)
        .collect()
}
