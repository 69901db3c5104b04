//! Realification of `C^n` into `R^{2n}` and the matrices built on it.
//!
//! With `xi = j(x)` and `phi_k = j(f_k)`:
//!
//! * `Phi_k = phi_k phi_k^T + J phi_k phi_k^T J^T` satisfies
//!   `<Phi_k xi, xi> = |<x, f_k>|^2`;
//! * `R(xi) = sum_k (Phi_k xi)(Phi_k xi)^T` always has `J xi` in its kernel;
//! * `L(xi) = R(xi) + (J xi)(J xi)^T`.
//!
//! The frame is phase retrievable exactly when `ker R(xi)` is the line
//! through `J xi` for every nonzero `xi`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::frame::ComplexFrame;
use crate::linalg::{herm_eigen, CMatrix, CVector};

/// `j(x) = (Re x; Im x)`.
pub fn realify(x: &CVector) -> DVector<f64> {
    let n = x.len();
    DVector::from_fn(2 * n, |i, _| if i < n { x[i].re } else { x[i - n].im })
}

/// Inverse of [`realify`].
pub fn complexify(xi: &DVector<f64>) -> CVector {
    let n = xi.len() / 2;
    CVector::from_fn(n, |i, _| Complex64::new(xi[i], xi[i + n]))
}

/// `J = [[0, -I], [I, 0]]`, multiplication by `i` in realified coordinates.
pub fn j_matrix(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = -1.0;
        j[(n + i, i)] = 1.0;
    }
    j
}

/// `J xi` without forming `J`.
pub fn apply_j(xi: &DVector<f64>) -> DVector<f64> {
    let n = xi.len() / 2;
    DVector::from_fn(2 * n, |i, _| if i < n { -xi[n + i] } else { xi[i - n] })
}

/// `Phi = phi phi^T + (J phi)(J phi)^T` with `phi = j(f)`.
pub fn build_phi(f: &CVector) -> DMatrix<f64> {
    let p = realify(f);
    let q = apply_j(&p);
    &p * p.transpose() + &q * q.transpose()
}

/// The realified data of a frame: `phi_k`, `Phi_k` and `J`.
#[derive(Debug, Clone)]
pub struct RealifiedFrame {
    n: usize,
    phi: Vec<DVector<f64>>,
    big_phi: Vec<DMatrix<f64>>,
    j: DMatrix<f64>,
    // rows phi_k^T and (J phi_k)^T, used to evaluate Phi_k xi in bulk
    p_rows: DMatrix<f64>,
    q_rows: DMatrix<f64>,
}

impl RealifiedFrame {
    pub fn new(fr: &ComplexFrame) -> Self {
        let n = fr.n();
        let m = fr.m();
        let phi: Vec<DVector<f64>> = fr.vectors().iter().map(realify).collect();
        let big_phi = fr.vectors().iter().map(build_phi).collect();
        let p_rows = DMatrix::from_fn(m, 2 * n, |k, i| phi[k][i]);
        let q_rows = DMatrix::from_fn(m, 2 * n, |k, i| {
            if i < n {
                -phi[k][n + i]
            } else {
                phi[k][i - n]
            }
        });
        Self {
            n,
            phi,
            big_phi,
            j: j_matrix(n),
            p_rows,
            q_rows,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[DVector<f64>] {
        &self.phi
    }

    pub fn big_phi(&self) -> &[DMatrix<f64>] {
        &self.big_phi
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    /// Rows are `(Phi_k xi)^T`, an `m x 2n` matrix.
    pub fn phi_images(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let a = &self.p_rows * xi;
        let b = &self.q_rows * xi;
        let mut w = self.p_rows.clone();
        for k in 0..w.nrows() {
            let (ak, bk) = (a[k], b[k]);
            for i in 0..w.ncols() {
                w[(k, i)] = ak * self.p_rows[(k, i)] + bk * self.q_rows[(k, i)];
            }
        }
        w
    }

    pub fn r_matrix(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let w = self.phi_images(xi);
        w.tr_mul(&w)
    }

    pub fn l_matrix(&self, xi: &DVector<f64>) -> DMatrix<f64> {
        let jx = apply_j(xi);
        self.r_matrix(xi) + &jx * jx.transpose()
    }

    /// `(<Phi_k xi, eta>)_k`. For `xi = j(u)`, `eta = j(v)` this equals
    /// `Re(<u, f_k><f_k, v>)`.
    pub fn bilinear(&self, xi: &DVector<f64>, eta: &DVector<f64>) -> DVector<f64> {
        let px = &self.p_rows * xi;
        let qx = &self.q_rows * xi;
        let pe = &self.p_rows * eta;
        let qe = &self.q_rows * eta;
        px.component_mul(&pe) + qx.component_mul(&qe)
    }

    /// `<R(xi) eta, eta> = sum_k <Phi_k xi, eta>^2`, symmetric in `xi` and `eta`.
    pub fn r_form(&self, xi: &DVector<f64>, eta: &DVector<f64>) -> f64 {
        self.bilinear(xi, eta).norm_squared()
    }

    /// `<L(xi) eta, eta>`.
    pub fn l_form(&self, xi: &DVector<f64>, eta: &DVector<f64>) -> f64 {
        let cross = apply_j(xi).dot(eta);
        self.r_form(xi, eta) + cross * cross
    }
}

pub fn r_matrix(rf: &RealifiedFrame, xi: &DVector<f64>) -> DMatrix<f64> {
    rf.r_matrix(xi)
}

pub fn l_matrix(rf: &RealifiedFrame, xi: &DVector<f64>) -> DMatrix<f64> {
    rf.l_matrix(xi)
}

/// `(u v^T + v u^T) / 2` for real vectors.
pub fn sym_outer_real(u: &DVector<f64>, v: &DVector<f64>) -> DMatrix<f64> {
    (u * v.transpose() + v * u.transpose()) * 0.5
}

/// Symmetric outer product `(u v^* + v u^*) / 2` of two complex vectors.
///
/// Always Hermitian of rank at most two, with at most one positive and one
/// negative eigenvalue.
#[derive(Debug, Clone)]
pub struct SymOuter {
    pub u: CVector,
    pub v: CVector,
}

impl SymOuter {
    pub fn new(u: CVector, v: CVector) -> Self {
        assert_eq!(u.len(), v.len(), "sym_outer operands differ in length");
        Self { u, v }
    }

    pub fn matrix(&self) -> CMatrix {
        (&self.u * self.v.adjoint() + &self.v * self.u.adjoint()) * Complex64::new(0.5, 0.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigen(&self.matrix()).0
    }

    /// Splits `T = T1 - T2` with `T1`, `T2` positive semidefinite of rank at
    /// most one, taken from the positive and negative eigenpairs of `T`.
    pub fn split(&self) -> (CMatrix, CMatrix) {
        let (values, vectors) = herm_eigen(&self.matrix());
        let n = values.len();
        let mut t1 = CMatrix::zeros(n, n);
        let mut t2 = CMatrix::zeros(n, n);
        let top = vectors.column(n - 1);
        let bottom = vectors.column(0);
        if values[n - 1] > 0.0 {
            t1 = (&top * top.adjoint()) * Complex64::new(values[n - 1], 0.0);
        }
        if values[0] < 0.0 {
            t2 = (&bottom * bottom.adjoint()) * Complex64::new(-values[0], 0.0);
        }
        (t1, t2)
    }
}

/// Nuclear norm of a symmetric outer product, the sum of the magnitudes of
/// its eigenvalues.
pub fn nuclear_norm_rank2(t: &SymOuter) -> f64 {
    t.eigenvalues().iter().map(|l| l.abs()).sum()
}
