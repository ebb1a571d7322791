//! Dense kernels used by the state code. Matrices are stored as nalgebra
//! values; decompositions go through faer.

use faer::{Mat, Side};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;

fn to_faer(m: &CMatrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |r, c| m[(r, c)])
}

/// Thin SVD with singular values in descending order.
///
/// Computed with faer: the nalgebra complex SVD can return factors that do
/// not reproduce rank-deficient inputs.
pub(crate) fn svd_sorted(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = to_faer(m).thin_svd().expect("svd converges");
    let (u, s, v) = (svd.U(), svd.S(), svd.V());
    let k = s.dim();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| s[b].re.total_cmp(&s[a].re));
    let u_out = CMatrix::from_fn(m.nrows(), k, |r, c| u[(r, order[c])]);
    let v_t = CMatrix::from_fn(k, m.ncols(), |r, c| v[(c, order[r])].conj());
    (u_out, order.iter().map(|&i| s[i].re).collect(), v_t)
}

/// Singular values only, descending.
pub(crate) fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_faer(m).singular_values().expect("svd converges");
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev = to_faer(m).self_adjoint_eigenvalues(Side::Lower).expect("eigensolver converges");
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Largest absolute entry of `m - I`.
pub(crate) fn identity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((m[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}
