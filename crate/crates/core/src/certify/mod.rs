//! Deciding phase retrievability.
//!
//! The complex pipeline ([`certify_complex`]) combines a cardinality gate,
//! the frame predicate, the multistart `a0` estimate and a kernel witness.
//! Real frames can instead be decided exactly by the complement property
//! ([`complement_property`]).

mod cardinality;
mod complement;
mod optimizer;
mod oracle;

pub use cardinality::{cardinality_precheck, hmw_lower_bound, CardinalityBounds};
pub use complement::{complement_property, ComplementResult, COMPLEMENT_LIMIT};
pub use optimizer::{estimate_a0, A0Estimate, A0Options};
pub use oracle::{injectivity_sampling_oracle, ray_distance, Counterexample};

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::ComplexFrame;
use crate::lift::{apply_j, RealifiedFrame};
use crate::linalg::{self, complex_gaussian, inner, norm_sq, sym_eigen, CVector};

/// Above this `a0` a frame is certified retrievable.
pub const TAU_PR: f64 = 1e-6;
/// Below this `a0` (with a kernel witness) a frame is declared not retrievable.
pub const TAU_NPR: f64 = 1e-10;
/// Angle (radians) within which a one-dimensional kernel counts as `span{J xi}`.
pub const KERNEL_ANGLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Retrievable,
    NotRetrievable,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Retrievable => "retrievable",
            Verdict::NotRetrievable => "not_retrievable",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which test produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cardinality,
    FramePredicate,
    Eigen,
    Complement,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub a0: A0Options,
    pub tau_pr: f64,
    pub tau_npr: f64,
    /// Random `(x, y)` pairs used to cross-check a retrievable verdict.
    pub crosscheck_pairs: usize,
    pub rank_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            a0: A0Options::default(),
            tau_pr: TAU_PR,
            tau_npr: TAU_NPR,
            crosscheck_pairs: 100,
            rank_tol: linalg::DEFAULT_RANK_TOL,
        }
    }
}

impl CertifyOptions {
    pub fn with_seed(seed: u64) -> Self {
        let mut opts = Self::default();
        opts.a0.seed = seed;
        opts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub verdict: Verdict,
    #[serde(rename = "a0")]
    pub a0_estimate: f64,
    /// Unit-norm minimizer of the `a0` search; empty when a precheck decided.
    pub witness_xi: Vec<f64>,
    pub method: Method,
    #[serde(rename = "starts")]
    pub starts_used: usize,
    #[serde(rename = "tol")]
    pub tolerance: f64,
    pub seed: u64,
    /// A `xi` with `dim ker R(xi) >= 2`, if one was found.
    pub kernel_excess: Option<Vec<f64>>,
}

/// `lambda_{2n-1}` of a symmetric `2n x 2n` matrix: the second smallest
/// eigenvalue.
pub fn eigenvalue_2n_minus_1(m: &DMatrix<f64>) -> Result<f64> {
    let asymmetry = linalg::relative_asymmetry(m);
    if asymmetry > 1e-10 {
        return Err(Error::AsymmetricInput { asymmetry });
    }
    let values = linalg::sym_eigenvalues(m);
    Ok(if values.len() >= 2 { values[1] } else { values[0] })
}

#[derive(Debug, Clone)]
pub struct KernelCheck {
    pub rank: usize,
    pub kernel_basis: Vec<DVector<f64>>,
    pub kernel_is_span_jxi: bool,
}

impl KernelCheck {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.len()
    }
}

/// Rank and kernel of `R(xi)` under the relative cutoff `rank_tol`.
pub fn rank_kernel_check(rf: &RealifiedFrame, xi: &DVector<f64>, rank_tol: f64) -> Result<KernelCheck> {
    let norm = xi.norm();
    if norm == 0.0 {
        return Err(Error::ZeroXi);
    }
    let r = rf.r_matrix(xi);
    let (values, vectors) = sym_eigen(&r);
    let smax = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let kernel_basis: Vec<DVector<f64>> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| smax == 0.0 || v.abs() <= rank_tol * smax)
        .map(|(i, _)| vectors.column(i).into_owned())
        .collect();
    let rank = values.len() - kernel_basis.len();

    let kernel_is_span_jxi = kernel_basis.len() == 1 && {
        let jx = apply_j(xi) / norm;
        let b = &kernel_basis[0];
        let off = (&jx - b * b.dot(&jx)).norm();
        off.asin() <= KERNEL_ANGLE_TOL
    };
    Ok(KernelCheck {
        rank,
        kernel_basis,
        kernel_is_span_jxi,
    })
}

/// Both sides of the magnitude-difference inequality:
/// left `= sum_k (|<x,f_k>|^2 - |<y,f_k>|^2)^2`,
/// right `= |x-y|^2 |x+y|^2 - 4 Im(<x,y>)^2`.
pub fn lemma2_iii_sides(fr: &ComplexFrame, x: &CVector, y: &CVector) -> (f64, f64) {
    let left = fr
        .vectors()
        .iter()
        .map(|f| {
            let d = inner(x, f).norm_sqr() - inner(y, f).norm_sqr();
            d * d
        })
        .sum();
    let im = inner(x, y).im;
    let right = (norm_sq(&(x - y)) * norm_sq(&(x + y)) - 4.0 * im * im).max(0.0);
    (left, right)
}

/// `left >= a0 * right - 1e-9 (1 + right)`.
pub fn lemma2_iii_check(fr: &ComplexFrame, a0: f64, x: &CVector, y: &CVector) -> bool {
    let (left, right) = lemma2_iii_sides(fr, x, y);
    left >= a0 * right - 1e-9 * (1.0 + right)
}

/// Full complex certification pipeline.
///
/// 1. `m < 2n` is never retrievable.
/// 2. A set that does not span is never retrievable.
/// 3. Estimate `a0`; `a0 > tau_pr` means retrievable, `a0 < tau_npr` with a
///    rank-deficient witness means not retrievable, anything else is
///    inconclusive.
/// 4. A retrievable verdict is cross-checked on random pairs; any violated
///    pair lowers `a0` to the observed ratio and the decision is redone.
pub fn certify_complex(fr: &ComplexFrame, opts: &CertifyOptions) -> CertificationReport {
    let n = fr.n();
    let m = fr.m();
    let base = CertificationReport {
        verdict: Verdict::NotRetrievable,
        a0_estimate: 0.0,
        witness_xi: Vec::new(),
        method: Method::Cardinality,
        starts_used: 0,
        tolerance: opts.a0.tol,
        seed: opts.a0.seed,
        kernel_excess: None,
    };
    if cardinality_precheck(n, m) {
        return base;
    }
    if !fr.is_frame() {
        return CertificationReport {
            method: Method::FramePredicate,
            ..base
        };
    }

    let rf = RealifiedFrame::new(fr);
    let est = estimate_a0(&rf, &opts.a0);
    let kernel = rank_kernel_check(&rf, &est.witness, opts.rank_tol).expect("witness has unit norm");
    let kernel_excess = (kernel.kernel_dim() >= 2).then(|| est.witness.as_slice().to_vec());

    let decide = |a0: f64| {
        if a0 > opts.tau_pr {
            Verdict::Retrievable
        } else if a0 < opts.tau_npr && kernel_excess.is_some() {
            Verdict::NotRetrievable
        } else {
            Verdict::Inconclusive
        }
    };

    let mut a0 = est.a0;
    let mut verdict = decide(a0);
    if verdict == Verdict::Retrievable {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.a0.seed);
        rng.set_stream(1);
        let mut violated = false;
        let mut ratio = f64::INFINITY;
        for _ in 0..opts.crosscheck_pairs {
            let x = complex_gaussian(&mut rng, n);
            let y = complex_gaussian(&mut rng, n);
            let (left, right) = lemma2_iii_sides(fr, &x, &y);
            if right > 0.0 {
                ratio = ratio.min(left / right);
            }
            violated |= left < a0 * right - 1e-9 * (1.0 + right);
        }
        if violated {
            log::warn!("cross-check violated: lowering a0 from {a0:e} to {ratio:e}");
            a0 = ratio;
            verdict = decide(a0);
        }
    }

    CertificationReport {
        verdict,
        a0_estimate: a0,
        witness_xi: est.witness.as_slice().to_vec(),
        method: Method::Eigen,
        starts_used: est.starts_used,
        kernel_excess,
        ..base
    }
}
