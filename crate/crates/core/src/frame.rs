//! Finite frames in `C^n` and the quantities computed directly from them.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, complex_rank, herm_eigen, herm_function, CMatrix, CVector};

/// Scalar field a frame is declared over. Real frames are stored as complex
/// vectors whose imaginary parts are all exactly zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Complex,
    Real,
}

/// An ordered list of `m` vectors in `C^n`.
///
/// Repeated and zero vectors are allowed. Whether the vectors span `C^n` is
/// computed once at construction (relative singular-value cutoff
/// [`linalg::DEFAULT_RANK_TOL`]) and cached.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexFrame {
    n: usize,
    field: Field,
    vectors: Vec<CVector>,
    spans: bool,
}

impl ComplexFrame {
    pub fn new(n: usize, vectors: Vec<CVector>) -> Result<Self> {
        Self::with_field(n, Field::Complex, vectors)
    }

    pub fn with_field(n: usize, field: Field, vectors: Vec<CVector>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFrame("dimension n must be positive".into()));
        }
        if vectors.is_empty() {
            return Err(Error::InvalidFrame("frame has no vectors".into()));
        }
        for (k, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(Error::InvalidFrame(format!(
                    "vector {k} has {} entries, expected {n}",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
                return Err(Error::InvalidFrame(format!("vector {k} has a non-finite entry")));
            }
            if field == Field::Real && v.iter().any(|c| c.im != 0.0) {
                return Err(Error::NotRealFrame);
            }
        }
        let cols: Vec<&CVector> = vectors.iter().collect();
        let spans = complex_rank(n, &cols, linalg::DEFAULT_RANK_TOL) == n;
        Ok(Self {
            n,
            field,
            vectors,
            spans,
        })
    }

    /// Real frame from rows of real coordinates.
    pub fn real(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| CVector::from_iterator(r.len(), r.iter().map(|&x| Complex64::new(x, 0.0))))
            .collect();
        Self::with_field(n, Field::Real, vectors)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.vectors.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &CVector {
        &self.vectors[k]
    }

    /// Whether the vectors span `C^n` (the frame predicate).
    pub fn is_frame(&self) -> bool {
        self.spans
    }

    /// Same vectors, declared over the complex field.
    pub fn as_complex(&self) -> Self {
        Self {
            field: Field::Complex,
            ..self.clone()
        }
    }

    /// Subframe made of the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let vectors = indices.iter().map(|&k| self.vectors[k].clone()).collect();
        Self::with_field(self.n, self.field, vectors)
    }

    /// `{c f_k}`.
    pub fn scaled(&self, c: f64) -> Self {
        let vectors = self.vectors.iter().map(|v| v * Complex64::new(c, 0.0)).collect();
        Self::with_field(self.n, self.field, vectors).expect("scaling preserves shape")
    }

    /// Frame operator `S = sum_k f_k f_k^*`.
    pub fn frame_operator(&self) -> CMatrix {
        let mut s = CMatrix::zeros(self.n, self.n);
        for f in &self.vectors {
            s += f * f.adjoint();
        }
        s
    }

    /// `alpha^2(x)_k = |<x, f_k>|^2`.
    pub fn squared_magnitudes(&self, x: &CVector) -> Vec<f64> {
        self.vectors
            .iter()
            .map(|f| linalg::inner(x, f).norm_sqr())
            .collect()
    }

    /// `max_k ||f_k - g_k||`.
    pub fn max_distance(&self, other: &ComplexFrame) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .vectors
            .iter()
            .zip(&other.vectors)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_shape(&self, other: &ComplexFrame) -> Result<()> {
        if self.n != other.n || self.m() != other.m() {
            return Err(Error::ShapeMismatch {
                n: self.n,
                m: self.m(),
                other_n: other.n,
                other_m: other.m(),
            });
        }
        Ok(())
    }
}

/// Frame operator together with its extreme eigenvalues.
#[derive(Debug, Clone)]
pub struct FrameOperatorSummary {
    pub operator: CMatrix,
    /// Lower frame bound, `lambda_min(S)`.
    pub lower: f64,
    /// Upper frame bound, `lambda_max(S)`.
    pub upper: f64,
}

pub fn frame_bounds(fr: &ComplexFrame) -> FrameOperatorSummary {
    let operator = fr.frame_operator();
    let (values, _) = herm_eigen(&operator);
    // round-off can push a zero eigenvalue slightly negative
    let lower = values[0].max(0.0);
    let upper = values[values.len() - 1].max(0.0);
    FrameOperatorSummary {
        operator,
        lower,
        upper,
    }
}

/// `G2_{kl} = |<f_k, f_l>|^2`, the Gram matrix of the rank-one lifts `f_k f_k^*`.
pub fn gram_squared(fr: &ComplexFrame) -> DMatrix<f64> {
    let m = fr.m();
    DMatrix::from_fn(m, m, |k, l| linalg::inner(fr.vector(k), fr.vector(l)).norm_sqr())
}

/// Condition numbers above this are treated as singular by [`transform_frame`].
pub const DEFAULT_MAX_CONDITION: f64 = 1e12;

/// `g_k = z_k T f_k`.
pub fn transform_frame(
    fr: &ComplexFrame,
    t: &CMatrix,
    z: &[Complex64],
    max_condition: f64,
) -> Result<ComplexFrame> {
    let n = fr.n();
    if t.nrows() != n || t.ncols() != n {
        return Err(Error::InvalidFrame(format!(
            "transform must be {n}x{n}, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if z.len() != fr.m() {
        return Err(Error::InvalidFrame(format!(
            "expected {} scalars, got {}",
            fr.m(),
            z.len()
        )));
    }
    if let Some(index) = z.iter().position(|c| c.norm() == 0.0) {
        return Err(Error::ZeroScalar { index });
    }
    let sv = t.singular_values();
    let smax = sv.max();
    let smin = sv.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !(condition <= max_condition) {
        return Err(Error::SingularTransform { condition });
    }

    let vectors = fr
        .vectors()
        .iter()
        .zip(z)
        .map(|(f, &zk)| (t * f) * zk)
        .collect();
    let real = fr.field() == Field::Real
        && t.iter().all(|c| c.im == 0.0)
        && z.iter().all(|c| c.im == 0.0);
    ComplexFrame::with_field(n, if real { Field::Real } else { Field::Complex }, vectors)
}

/// Eigenvalue floor: `S` is rejected when `lambda_min <= FLOOR * lambda_max`.
const OPERATOR_FLOOR: f64 = 1e-12;

fn operator_power(fr: &ComplexFrame, power: f64) -> Result<CMatrix> {
    let s = fr.frame_operator();
    let (values, vectors) = herm_eigen(&s);
    let lower = values[0];
    let upper = values[values.len() - 1];
    if !(lower > OPERATOR_FLOOR * upper) || upper <= 0.0 {
        return Err(Error::NotAFrame { lower, upper });
    }
    Ok(herm_function(&values, &vectors, |lam| lam.powf(power)))
}

fn apply_all(fr: &ComplexFrame, op: &CMatrix) -> Result<ComplexFrame> {
    let vectors = fr.vectors().iter().map(|f| op * f).collect();
    ComplexFrame::with_field(fr.n(), Field::Complex, vectors)
}

/// Canonical dual frame `{S^{-1} f_k}`.
pub fn canonical_dual(fr: &ComplexFrame) -> Result<ComplexFrame> {
    let inv = operator_power(fr, -1.0)?;
    apply_all(fr, &inv)
}

/// Associated Parseval frame `{S^{-1/2} f_k}`.
pub fn parseval_version(fr: &ComplexFrame) -> Result<ComplexFrame> {
    let inv_sqrt = operator_power(fr, -0.5)?;
    apply_all(fr, &inv_sqrt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::r3_example;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(n: usize) -> ComplexFrame {
        let vectors = (0..n)
            .map(|i| CVector::from_fn(n, |r, _| if r == i { c(1.0, 0.0) } else { c(0.0, 0.0) }))
            .collect();
        ComplexFrame::new(n, vectors).unwrap()
    }

    #[test]
    fn rejects_ragged_vectors() {
        let err = ComplexFrame::new(2, vec![CVector::from_vec(vec![c(1.0, 0.0)])]);
        assert!(matches!(err, Err(Error::InvalidFrame(_))));
    }

    #[test]
    fn real_field_requires_zero_imaginary_parts() {
        let v = CVector::from_vec(vec![c(1.0, 1e-3)]);
        assert!(matches!(
            ComplexFrame::with_field(1, Field::Real, vec![v]),
            Err(Error::NotRealFrame)
        ));
    }

    #[test]
    fn orthonormal_basis_bounds() {
        let b = frame_bounds(&basis(3));
        assert!((b.lower - 1.0).abs() < 1e-14);
        assert!((b.upper - 1.0).abs() < 1e-14);
        let g = gram_squared(&basis(3));
        assert_eq!(g, DMatrix::identity(3, 3));
    }

    #[test]
    fn r3_bounds_are_two_and_five() {
        let b = frame_bounds(&r3_example());
        assert!((b.lower - 2.0).abs() < 1e-12);
        assert!((b.upper - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_set_is_not_a_frame() {
        let z = ComplexFrame::new(2, vec![CVector::zeros(2), CVector::zeros(2)]).unwrap();
        assert!(!z.is_frame());
        let b = frame_bounds(&z);
        assert_eq!((b.lower, b.upper), (0.0, 0.0));
        assert!(matches!(canonical_dual(&z), Err(Error::NotAFrame { .. })));
        assert!(matches!(parseval_version(&z), Err(Error::NotAFrame { .. })));
    }

    #[test]
    fn single_vector_gram_is_fourth_power_of_norm() {
        let f = ComplexFrame::new(2, vec![CVector::from_vec(vec![c(0.0, 2.0), c(0.0, 0.0)])]).unwrap();
        assert_eq!(gram_squared(&f)[(0, 0)], 16.0);
    }

    #[test]
    fn identity_transform_is_noop() {
        let fr = r3_example();
        let t = CMatrix::identity(3, 3);
        let z = vec![c(1.0, 0.0); fr.m()];
        let out = transform_frame(&fr, &t, &z, DEFAULT_MAX_CONDITION).unwrap();
        assert_eq!(out, fr);
    }

    #[test]
    fn unimodular_scalars_keep_gram_squared() {
        let fr = r3_example();
        let t = CMatrix::identity(3, 3);
        let z: Vec<Complex64> = (0..fr.m()).map(|k| Complex64::from_polar(1.0, 0.7 * k as f64)).collect();
        let out = transform_frame(&fr, &t, &z, DEFAULT_MAX_CONDITION).unwrap();
        let diff = gram_squared(&out) - gram_squared(&fr);
        assert!(diff.amax() < 1e-12);
    }

    #[test]
    fn doubling_transform_scales_bounds_by_four() {
        let fr = r3_example();
        let t = CMatrix::identity(3, 3) * c(2.0, 0.0);
        let out = transform_frame(&fr, &t, &vec![c(1.0, 0.0); 6], DEFAULT_MAX_CONDITION).unwrap();
        assert_eq!(out.field(), Field::Real);
        let b = frame_bounds(&out);
        assert!((b.lower - 8.0).abs() < 1e-11);
        assert!((b.upper - 20.0).abs() < 1e-11);
    }

    #[test]
    fn transform_errors() {
        let fr = basis(2);
        let singular = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(
            transform_frame(&fr, &singular, &[c(1.0, 0.0); 2], DEFAULT_MAX_CONDITION),
            Err(Error::SingularTransform { .. })
        ));
        assert!(matches!(
            transform_frame(&fr, &CMatrix::identity(2, 2), &[c(1.0, 0.0), c(0.0, 0.0)], DEFAULT_MAX_CONDITION),
            Err(Error::ZeroScalar { index: 1 })
        ));
    }

    #[test]
    fn dual_and_parseval_of_basis_are_identity() {
        let b = basis(3);
        let d = canonical_dual(&b).unwrap();
        let p = parseval_version(&b).unwrap();
        for k in 0..3 {
            assert!((d.vector(k) - b.vector(k)).norm() < 1e-14);
            assert!((p.vector(k) - b.vector(k)).norm() < 1e-14);
        }
    }

    #[test]
    fn tight_frame_dual_is_rescaled() {
        // two copies of the basis: S = 2 I
        let b = basis(2);
        let tight = ComplexFrame::new(2, [b.vectors(), b.vectors()].concat()).unwrap();
        let d = canonical_dual(&tight).unwrap();
        for k in 0..4 {
            assert!((d.vector(k) - tight.vector(k) * c(0.5, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn parseval_version_of_r3_is_parseval() {
        let p = parseval_version(&r3_example()).unwrap();
        let b = frame_bounds(&p);
        assert!((b.lower - 1.0).abs() < 1e-10);
        assert!((b.upper - 1.0).abs() < 1e-10);
    }
}
