//! Small dense helpers shared by the other modules.
//!
//! Every eigendecomposition in the crate goes through [`sym_eigen`] (real
//! symmetric) or [`herm_eigen`] (complex Hermitian); nothing here ever
//! diagonalizes a general nonsymmetric matrix.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

/// Relative cutoff used for rank decisions: `sigma_i` counts as zero when
/// `sigma_i <= DEFAULT_RANK_TOL * sigma_max`.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// `<x, y> = sum_k x_k conj(y_k)`, linear in the first slot.
pub fn inner(x: &CVector, y: &CVector) -> Complex64 {
    y.dotc(x)
}

pub fn norm_sq(x: &CVector) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum()
}

/// Number of singular values above `rel_tol * sigma_max`.
pub fn numeric_rank(singular_values: &[f64], rel_tol: f64) -> usize {
    let smax = singular_values.iter().fold(0.0f64, |a, &s| a.max(s.abs()));
    if smax == 0.0 {
        return 0;
    }
    singular_values
        .iter()
        .filter(|s| s.abs() > rel_tol * smax)
        .count()
}

/// Rank of the `n x k` complex matrix whose columns are `cols`.
pub fn complex_rank(n: usize, cols: &[&CVector], rel_tol: f64) -> usize {
    if cols.is_empty() || n == 0 {
        return 0;
    }
    let m = CMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let sv = m.singular_values();
    numeric_rank(sv.as_slice(), rel_tol)
}

/// Rank of the `n x k` real matrix whose columns are `cols`.
pub fn real_rank(n: usize, cols: &[&DVector<f64>], rel_tol: f64) -> usize {
    if cols.is_empty() || n == 0 {
        return 0;
    }
    let m = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    let sv = m.singular_values();
    numeric_rank(sv.as_slice(), rel_tol)
}

/// Eigenpairs of a real symmetric matrix, sorted ascending. Column `i` of the
/// returned matrix is the eigenvector for `values[i]`.
pub fn sym_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Ascending eigenvalues of a real symmetric matrix.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenpairs of a complex Hermitian matrix, sorted ascending.
pub fn herm_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// `V diag(g(lambda)) V*` for a Hermitian matrix.
pub fn herm_function(values: &[f64], vectors: &CMatrix, g: impl Fn(f64) -> f64) -> CMatrix {
    let n = vectors.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (i, &lam) in values.iter().enumerate() {
        let v = vectors.column(i);
        out += (v * v.adjoint()) * Complex64::new(g(lam), 0.0);
    }
    out
}

/// Relative asymmetry `||M - M^T||_max / max(||M||_max, tiny)`.
pub fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / scale
}

/// Vector of i.i.d. standard complex Gaussians (real and imaginary parts
/// each `N(0, 1)`).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

pub fn real_gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample(StandardNormal))
}

/// Uniformly distributed unit vector in `R^n`.
pub fn unit_sphere<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = real_gaussian(rng, n);
        let nv = v.norm();
        if nv > 1e-300 {
            return v / nv;
        }
    }
}

/// Realify a complex Hermitian `H = A + iB` into the real symmetric
/// `[[A, -B], [B, A]]`, which has the same spectrum with doubled multiplicity.
pub fn hermitian_to_real(h: &CMatrix) -> DMatrix<f64> {
    let n = h.nrows();
    DMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let z = h[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inner_is_linear_in_first_argument() {
        let x = CVector::from_vec(vec![Complex64::new(1.0, 2.0)]);
        let y = CVector::from_vec(vec![Complex64::new(0.0, 1.0)]);
        // (1+2i) * conj(i) = (1+2i)(-i) = 2 - i
        assert_eq!(inner(&x, &y), Complex64::new(2.0, -1.0));
    }

    #[test]
    fn rank_respects_relative_cutoff() {
        assert_eq!(numeric_rank(&[1.0, 1e-3, 1e-12], DEFAULT_RANK_TOL), 2);
        assert_eq!(numeric_rank(&[0.0, 0.0], DEFAULT_RANK_TOL), 0);
    }

    #[test]
    fn sym_eigen_sorted_ascending() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 0.0, 2.0, 1.0]));
        let (vals, vecs) = sym_eigen(&m);
        assert_eq!(vals, vec![0.0, 1.0, 2.0, 3.0]);
        assert!((vecs[(1, 0)].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hermitian_realification_doubles_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = CMatrix::from_fn(3, 3, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let h = &a + a.adjoint();
        let (hv, _) = herm_eigen(&h);
        let rv = sym_eigenvalues(&hermitian_to_real(&h));
        for (i, lam) in hv.iter().enumerate() {
            assert!((rv[2 * i] - lam).abs() < 1e-10);
            assert!((rv[2 * i + 1] - lam).abs() < 1e-10);
        }
    }
}
