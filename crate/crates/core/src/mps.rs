//! Bounded-bond-dimension pure states of `n` qubits in Vidal canonical form.
//!
//! A state is stored as `n` site tensors `Γ[i]` of shape
//! `(left, 2, right)` interleaved with `n - 1` Schmidt vectors `λ[i]`:
//!
//! ```text
//! Γ[0] - λ[0] - Γ[1] - λ[1] - ... - λ[n-2] - Γ[n-1]
//!  |             |                            |
//! ```
//!
//! `λ[i]` holds the Schmidt coefficients of the cut between qubits `i` and
//! `i + 1`, so bond dimensions are exactly the Schmidt ranks of the
//! contiguous bipartitions. Amplitude index convention: qubit 0 is the most
//! significant bit of a basis-state index.

use std::ops::Range;

use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entropy::inverse_binary_entropy;
use crate::error::{Error, Result};
use crate::linalg::{identity_deviation, svd_sorted, CMatrix};

/// Schmidt coefficients below this are dropped during canonicalization.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;
/// Tolerance on `sum λ^2 = 1` and on the global norm.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on the canonical-form isometry conditions.
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Tolerance on the normalization of product-state amplitude pairs.
pub const PAIR_NORM_TOL: f64 = 1e-10;
/// Largest `n` for which a dense statevector may be materialized.
pub const MAX_DENSE_QUBITS: usize = 24;

/// A rank-3 complex tensor with axes `(left, physical, right)`, physical
/// dimension 2.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor3 {
    left: usize,
    right: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(left: usize, right: usize) -> Self {
        Tensor3 {
            left,
            right,
            data: vec![C64::new(0.0, 0.0); left * 2 * right],
        }
    }

    pub fn from_fn(left: usize, right: usize, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut t = Tensor3::zeros(left, right);
        for a in 0..left {
            for s in 0..2 {
                for b in 0..right {
                    t.set(a, s, b, f(a, s, b));
                }
            }
        }
        t
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    #[inline]
    pub fn get(&self, a: usize, s: usize, b: usize) -> C64 {
        self.data[(a * 2 + s) * self.right + b]
    }

    #[inline]
    pub fn set(&mut self, a: usize, s: usize, b: usize, v: C64) {
        self.data[(a * 2 + s) * self.right + b] = v;
    }

    /// Matrix with rows `(a, s)` and columns `b`.
    pub(crate) fn to_left_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.left * 2, self.right, |r, b| self.get(r / 2, r % 2, b))
    }

    /// Matrix with rows `a` and columns `(s, b)`.
    pub(crate) fn to_right_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.left, 2 * self.right, |a, c| {
            self.get(a, c / self.right, c % self.right)
        })
    }

    pub(crate) fn from_left_matrix(m: &CMatrix) -> Self {
        Tensor3::from_fn(m.nrows() / 2, m.ncols(), |a, s, b| m[(a * 2 + s, b)])
    }

    pub(crate) fn from_right_matrix(m: &CMatrix) -> Self {
        let right = m.ncols() / 2;
        Tensor3::from_fn(m.nrows(), right, |a, s, b| m[(a, s * right + b)])
    }

    /// `out[a', s, b] = sum_a m[a', a] t[a, s, b]`.
    pub(crate) fn contract_left(&self, m: &CMatrix) -> Self {
        let prod = m * self.to_right_matrix();
        Tensor3::from_right_matrix(&prod)
    }

    /// `out[a, s, b'] = sum_b t[a, s, b] m[b, b']`.
    pub(crate) fn contract_right(&self, m: &CMatrix) -> Self {
        let prod = self.to_left_matrix() * m;
        Tensor3::from_left_matrix(&prod)
    }

    /// Scales the left and right bond indices by the given weights.
    pub(crate) fn scale_bonds(&self, left_w: Option<&[f64]>, right_w: Option<&[f64]>) -> Self {
        Tensor3::from_fn(self.left, self.right, |a, s, b| {
            let l = left_w.map_or(1.0, |w| w[a]);
            let r = right_w.map_or(1.0, |w| w[b]);
            self.get(a, s, b) * (l * r)
        })
    }
}

/// Schmidt values discarded while building a state.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BuildReport {
    pub truncations: Vec<Truncation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Truncation {
    pub bond: usize,
    pub discarded: usize,
    pub largest_discarded: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateFile", into = "StateFile")]
pub struct MpsState {
    n: usize,
    chi_cap: usize,
    gammas: Vec<Tensor3>,
    lambdas: Vec<Vec<f64>>,
}

impl MpsState {
    /// Assembles a state from Vidal-form data and checks every invariant.
    pub fn from_parts(gammas: Vec<Tensor3>, lambdas: Vec<Vec<f64>>, chi_cap: usize) -> Result<Self> {
        let state = MpsState {
            n: gammas.len(),
            chi_cap,
            gammas,
            lambdas,
        };
        state.validate()?;
        Ok(state)
    }

    /// Tensor product of single-qubit states `a0|0> + a1|1>`.
    pub fn product_state(amplitudes: &[(C64, C64)]) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        let mut gammas = Vec::with_capacity(amplitudes.len());
        for (index, &(a0, a1)) in amplitudes.iter().enumerate() {
            let norm = a0.norm_sqr() + a1.norm_sqr();
            if !norm.is_finite() || (norm - 1.0).abs() > PAIR_NORM_TOL {
                return Err(Error::NonNormalizedInput { index, norm });
            }
            let scale = norm.sqrt().recip();
            let mut g = Tensor3::zeros(1, 1);
            g.set(0, 0, 0, a0 * scale);
            g.set(0, 1, 0, a1 * scale);
            gammas.push(g);
        }
        let lambdas = vec![vec![1.0]; amplitudes.len() - 1];
        Ok(MpsState {
            n: amplitudes.len(),
            chi_cap: 1,
            gammas,
            lambdas,
        })
    }

    /// `2n` qubits where pair `(2i, 2i+1)` is `sqrt(1-p)|00> + sqrt(p)|11>`
    /// with binary entropy `H2(p) = entropies[i]`.
    pub fn entangled_pair_chain(entropies: &[f64]) -> Result<Self> {
        if entropies.is_empty() {
            return Err(Error::EmptyState);
        }
        let mut gammas = Vec::with_capacity(2 * entropies.len());
        let mut lambdas = Vec::with_capacity(2 * entropies.len() - 1);
        let one = C64::new(1.0, 0.0);
        for (index, &s) in entropies.iter().enumerate() {
            let p = inverse_binary_entropy(s).map_err(|_| Error::EntropyOutOfRange { index, value: s })?;
            let mut schmidt = vec![(1.0 - p).sqrt(), p.sqrt()];
            if schmidt[1] < SCHMIDT_CUTOFF {
                schmidt.truncate(1);
            }
            let d = schmidt.len();
            gammas.push(Tensor3::from_fn(1, d, |_, s, k| if s == k { one } else { C64::new(0.0, 0.0) }));
            gammas.push(Tensor3::from_fn(d, 1, |k, s, _| if s == k { one } else { C64::new(0.0, 0.0) }));
            lambdas.push(schmidt);
            if index + 1 < entropies.len() {
                lambdas.push(vec![1.0]);
            }
        }
        let chi_cap = lambdas.iter().map(Vec::len).max().unwrap_or(1);
        Ok(MpsState {
            n: gammas.len(),
            chi_cap,
            gammas,
            lambdas,
        })
    }

    /// Brings an arbitrary (unnormalized) matrix product state into Vidal
    /// form. Schmidt coefficients below [`SCHMIDT_CUTOFF`] are dropped and
    /// reported.
    pub fn from_tensors(tensors: Vec<Tensor3>, chi_cap: Option<usize>) -> Result<(Self, BuildReport)> {
        let n = tensors.len();
        if n == 0 {
            return Err(Error::EmptyState);
        }
        if tensors[0].left() != 1 || tensors[n - 1].right() != 1 {
            return Err(Error::InvalidState("boundary bond dimensions must be 1".into()));
        }
        for i in 0..n - 1 {
            if tensors[i].right() != tensors[i + 1].left() {
                return Err(Error::InvalidState(format!("bond {i} dimension mismatch")));
            }
        }

        // Left-orthonormalize with QR.
        let mut m = tensors;
        for i in 0..n - 1 {
            let qr = m[i].to_left_matrix().qr();
            let (q, r) = (qr.q(), qr.r());
            m[i] = Tensor3::from_left_matrix(&q);
            m[i + 1] = m[i + 1].contract_left(&r);
        }
        let norm = m[n - 1].data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("state has zero norm".into()));
        }
        for z in m[n - 1].data.iter_mut() {
            *z /= norm;
        }

        // Right sweep: SVD exposes the Schmidt values at each bond.
        let mut report = BuildReport::default();
        let mut right_canonical: Vec<Option<Tensor3>> = vec![None; n];
        let mut lambdas = vec![Vec::new(); n - 1];
        for i in (1..n).rev() {
            let (u, s, v_t) = svd_sorted(&m[i].to_right_matrix());
            let keep = s.iter().take_while(|&&x| x >= SCHMIDT_CUTOFF).count().max(1);
            if keep < s.len() {
                report.truncations.push(Truncation {
                    bond: i - 1,
                    discarded: s.len() - keep,
                    largest_discarded: s[keep],
                });
            }
            let kept_norm = s[..keep].iter().map(|x| x * x).sum::<f64>().sqrt();
            let lam: Vec<f64> = s[..keep].iter().map(|x| x / kept_norm).collect();
            let v_k = v_t.rows(0, keep).into_owned();
            right_canonical[i] = Some(Tensor3::from_right_matrix(&v_k));
            let us = CMatrix::from_fn(u.nrows(), keep, |r, c| u[(r, c)] * lam[c]);
            m[i - 1] = m[i - 1].contract_right(&us);
            lambdas[i - 1] = lam;
        }

        let mut gammas = Vec::with_capacity(n);
        let inv = |w: &[f64]| w.iter().map(|x| x.recip()).collect::<Vec<_>>();
        for i in 0..n {
            let t = if i == 0 { m[0].clone() } else { right_canonical[i].take().unwrap() };
            let g = if i + 1 < n {
                t.scale_bonds(None, Some(&inv(&lambdas[i])))
            } else {
                t
            };
            gammas.push(g);
        }
        let chi = lambdas.iter().map(Vec::len).max().unwrap_or(1);
        let chi_cap = chi_cap.unwrap_or(chi);
        let state = MpsState::from_parts(gammas, lambdas, chi_cap)?;
        Ok((state, report))
    }

    /// Decomposes a dense statevector of length `2^n`.
    pub fn from_statevector(amplitudes: &[C64]) -> Result<(Self, BuildReport)> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidState(format!("statevector length {len} is not 2^n with n >= 1")));
        }
        let n = len.trailing_zeros() as usize;
        let mut rest = CMatrix::from_row_slice(1, len, amplitudes);
        let mut tensors = Vec::with_capacity(n);
        for _ in 0..n - 1 {
            let l = rest.nrows();
            let cols = rest.ncols() / 2;
            let reshaped = CMatrix::from_fn(l * 2, cols, |r, c| rest[(r / 2, (r % 2) * cols + c)]);
            let (u, s, v_t) = svd_sorted(&reshaped);
            let keep = s.iter().take_while(|&&x| x >= SCHMIDT_CUTOFF).count().max(1);
            tensors.push(Tensor3::from_left_matrix(&u.columns(0, keep).into_owned()));
            rest = CMatrix::from_fn(keep, v_t.ncols(), |r, c| v_t[(r, c)] * s[r]);
        }
        let l = rest.nrows();
        tensors.push(Tensor3::from_fn(l, 1, |a, s, _| rest[(a, s)]));
        MpsState::from_tensors(tensors, None)
    }

    /// Random state whose bond dimensions are `min(max_bond, 2^k)` with `k`
    /// the distance to the nearer end of the chain.
    pub fn random<R: Rng + ?Sized>(n: usize, max_bond: usize, rng: &mut R) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyState);
        }
        let bond = |i: usize| -> usize {
            if i == 0 || i == n {
                return 1;
            }
            let k = i.min(n - i).min(30) as u32;
            max_bond.max(1).min(1usize << k)
        };
        let tensors = (0..n)
            .map(|i| {
                Tensor3::from_fn(bond(i), bond(i + 1), |_, _, _| {
                    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                })
            })
            .collect();
        Ok(MpsState::from_tensors(tensors, Some(max_bond.max(1)))?.0)
    }

    /// Tensor product `self ⊗ other`, with `other`'s qubits appended.
    pub fn tensor(&self, other: &MpsState) -> MpsState {
        let mut gammas = self.gammas.clone();
        gammas.extend(other.gammas.iter().cloned());
        let mut lambdas = self.lambdas.clone();
        lambdas.push(vec![1.0]);
        lambdas.extend(other.lambdas.iter().cloned());
        MpsState {
            n: self.n + other.n,
            chi_cap: self.chi_cap.max(other.chi_cap),
            gammas,
            lambdas,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn chi_cap(&self) -> usize {
        self.chi_cap
    }

    pub fn gammas(&self) -> &[Tensor3] {
        &self.gammas
    }

    pub fn lambdas(&self) -> &[Vec<f64>] {
        &self.lambdas
    }

    /// Schmidt rank of each contiguous cut `{0..=i} | {i+1..n}`.
    pub fn cut_ranks(&self) -> Vec<usize> {
        self.lambdas.iter().map(Vec::len).collect()
    }

    /// Largest Schmidt rank over the `n - 1` contiguous cuts of the stored
    /// qubit ordering.
    pub fn max_bipartite_rank(&self) -> usize {
        self.lambdas.iter().map(Vec::len).max().unwrap_or(1)
    }

    pub fn is_product(&self) -> bool {
        self.max_bipartite_rank() == 1
    }

    /// Von Neumann entropy (bits) of the contiguous cut after qubit `bond`.
    pub fn cut_entropy(&self, bond: usize) -> f64 {
        self.lambdas[bond]
            .iter()
            .map(|l| crate::entropy::xlog2x(l * l))
            .sum()
    }

    /// Maximal runs of qubits separated by bonds of dimension 1. The state
    /// is the tensor product of its segments.
    pub fn segments(&self) -> Vec<Range<usize>> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, lam) in self.lambdas.iter().enumerate() {
            if lam.len() == 1 {
                out.push(start..i + 1);
                start = i + 1;
            }
        }
        out.push(start..self.n);
        out
    }

    /// `λ[i-1] Γ[i]`: left-normalized site tensor.
    pub(crate) fn left_normalized(&self, i: usize) -> Tensor3 {
        let left = (i > 0).then(|| self.lambdas[i - 1].as_slice());
        self.gammas[i].scale_bonds(left, None)
    }

    /// `Γ[i] λ[i]`: right-normalized site tensor.
    pub(crate) fn right_normalized(&self, i: usize) -> Tensor3 {
        let right = (i + 1 < self.n).then(|| self.lambdas[i].as_slice());
        self.gammas[i].scale_bonds(None, right)
    }

    /// Single-qubit reduced state of qubit `i`, as a row-major 2x2 matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn site_rdm(&self, i: usize) -> [[C64; 2]; 2] {
        let g = &self.gammas[i];
        let wl = |a: usize| if i > 0 { self.lambdas[i - 1][a].powi(2) } else { 1.0 };
        let wr = |b: usize| if i + 1 < self.n { self.lambdas[i][b].powi(2) } else { 1.0 };
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for a in 0..g.left() {
            for b in 0..g.right() {
                let w = wl(a) * wr(b);
                for s in 0..2 {
                    for t in 0..2 {
                        rho[s][t] += g.get(a, s, b) * g.get(a, t, b).conj() * w;
                    }
                }
            }
        }
        rho
    }

    /// `<psi|psi>` by transfer-matrix contraction, independent of the
    /// canonical-form identities.
    pub fn norm_squared(&self) -> f64 {
        let mut env = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for i in 0..self.n {
            let t = self.right_normalized(i);
            let mut next = CMatrix::zeros(t.right(), t.right());
            for s in 0..2 {
                let slice = CMatrix::from_fn(t.left(), t.right(), |a, b| t.get(a, s, b));
                next += slice.adjoint() * &env * &slice;
            }
            env = next;
        }
        env[(0, 0)].re
    }

    /// Dense amplitudes, qubit 0 most significant.
    pub fn to_statevector(&self) -> Result<Vec<C64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(Error::InstanceTooLarge { n: self.n, limit: MAX_DENSE_QUBITS });
        }
        // rows: basis prefix, cols: open bond
        let mut acc = CMatrix::from_element(1, 1, C64::new(1.0, 0.0));
        for i in 0..self.n {
            let t = self.right_normalized(i);
            let mut next = CMatrix::zeros(acc.nrows() * 2, t.right());
            for s in 0..2 {
                let slice = CMatrix::from_fn(t.left(), t.right(), |a, b| t.get(a, s, b));
                let part = &acc * slice;
                for r in 0..acc.nrows() {
                    for c in 0..t.right() {
                        next[(r * 2 + s, c)] = part[(r, c)];
                    }
                }
            }
            acc = next;
        }
        Ok(acc.column(0).iter().copied().collect())
    }

    /// Checks every structural and numerical invariant.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidState(msg));
        if n == 0 {
            return Err(Error::EmptyState);
        }
        if self.chi_cap == 0 {
            return bad("chi_cap must be positive".into());
        }
        if self.lambdas.len() != n - 1 {
            return bad(format!("expected {} Schmidt vectors, found {}", n - 1, self.lambdas.len()));
        }
        if self.gammas[0].left() != 1 || self.gammas[n - 1].right() != 1 {
            return bad("boundary bond dimensions must be 1".into());
        }
        for (i, lam) in self.lambdas.iter().enumerate() {
            if self.gammas[i].right() != lam.len() || self.gammas[i + 1].left() != lam.len() {
                return bad(format!("bond {i}: tensor dimensions do not match Schmidt vector length {}", lam.len()));
            }
            if lam.is_empty() || lam.len() > self.chi_cap {
                return bad(format!("bond {i}: dimension {} outside [1, chi_cap={}]", lam.len(), self.chi_cap));
            }
            if lam.iter().any(|&x| !(x.is_finite() && x > 0.0)) {
                return bad(format!("bond {i}: Schmidt coefficients must be positive"));
            }
            if lam.windows(2).any(|w| w[0] < w[1]) {
                return bad(format!("bond {i}: Schmidt coefficients not in descending order"));
            }
            let total: f64 = lam.iter().map(|x| x * x).sum();
            if (total - 1.0).abs() > NORM_TOL {
                return bad(format!("bond {i}: squared Schmidt coefficients sum to {total}"));
            }
        }
        if self.gammas.iter().flat_map(|g| g.data.iter()).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return bad("non-finite tensor entry".into());
        }
        for i in 0..n {
            let (l, r) = (self.left_normalized(i), self.right_normalized(i));
            let left_id = l.to_left_matrix().adjoint() * l.to_left_matrix();
            let right_id = r.to_right_matrix() * r.to_right_matrix().adjoint();
            let dev = identity_deviation(&left_id).max(identity_deviation(&right_id));
            if dev > ISOMETRY_TOL {
                return bad(format!("site {i}: canonical-form isometry violated by {dev:.3e}"));
            }
        }
        let norm = self.norm_squared();
        if (norm - 1.0).abs() > NORM_TOL {
            return bad(format!("norm {norm} differs from 1"));
        }
        Ok(())
    }
}

/// On-disk layout: `gammas[i][left][physical][right] = [re, im]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub chi_cap: usize,
    pub gammas: Vec<Vec<Vec<Vec<[f64; 2]>>>>,
    pub lambdas: Vec<Vec<f64>>,
}

impl From<MpsState> for StateFile {
    fn from(s: MpsState) -> Self {
        let gammas = s
            .gammas
            .iter()
            .map(|g| {
                (0..g.left())
                    .map(|a| {
                        (0..2)
                            .map(|p| {
                                (0..g.right())
                                    .map(|b| {
                                        let z = g.get(a, p, b);
                                        [z.re, z.im]
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        StateFile {
            n: s.n,
            chi_cap: s.chi_cap,
            gammas,
            lambdas: s.lambdas,
        }
    }
}

impl TryFrom<StateFile> for MpsState {
    type Error = Error;

    fn try_from(f: StateFile) -> Result<Self> {
        if f.gammas.len() != f.n {
            return Err(Error::InvalidState(format!("n = {} but {} tensors given", f.n, f.gammas.len())));
        }
        let mut gammas = Vec::with_capacity(f.n);
        for (i, g) in f.gammas.iter().enumerate() {
            let left = g.len();
            let right = g.first().and_then(|p| p.first()).map_or(0, Vec::len);
            if left == 0 || right == 0 {
                return Err(Error::InvalidState(format!("tensor {i} is empty")));
            }
            let mut t = Tensor3::zeros(left, right);
            for (a, phys) in g.iter().enumerate() {
                if phys.len() != 2 {
                    return Err(Error::InvalidState(format!("tensor {i}: physical dimension must be 2")));
                }
                for (p, row) in phys.iter().enumerate() {
                    if row.len() != right {
                        return Err(Error::InvalidState(format!("tensor {i}: ragged right dimension")));
                    }
                    for (b, z) in row.iter().enumerate() {
                        t.set(a, p, b, C64::new(z[0], z[1]));
                    }
                }
            }
            gammas.push(t);
        }
        MpsState::from_parts(gammas, f.lambdas, f.chi_cap)
    }
}
