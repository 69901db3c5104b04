//! Perturbation radius of a phase retrievable frame and its empirical checks.
//!
//! With upper frame bound `B`, `a1 = min(1, a0)` and `m` vectors, every set
//! within `rho = min(1/sqrt(m), a1 / (4 (3B + 2)^{3/2}))` of the frame
//! (vectorwise, strictly) is again phase retrievable. The estimate of `a0`
//! used here is an upper bound on the true constant, so the experiments in
//! this module validate the radius rather than prove it.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::{certify_complex, CertifyOptions, Verdict};
use crate::error::{Error, Result};
use crate::frame::{frame_bounds, ComplexFrame};
use crate::io::FrameDoc;
use crate::lift::{complexify, RealifiedFrame};
use crate::linalg::{sym_eigenvalues, unit_sphere};

pub const DISCLAIMER: &str = "a0 is a multistart estimate (an upper bound on the optimal constant); \
the radius and this experiment are numerical validation, not a proof";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityRadius {
    pub rho: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub a0: f64,
    pub a1: f64,
    pub m: usize,
}

/// `min(1/sqrt(m), min(1, a0) / (4 (3B + 2)^{3/2}))`.
pub fn rho_formula(m: usize, b: f64, a0: f64) -> f64 {
    let a1 = a0.min(1.0);
    (1.0 / (m as f64).sqrt()).min(a1 / (4.0 * (3.0 * b + 2.0).powf(1.5)))
}

pub fn stability_radius(fr: &ComplexFrame, a0: f64) -> Result<StabilityRadius> {
    if !(a0 > 0.0) {
        return Err(Error::NotRetrievableInput { a0 });
    }
    let b = frame_bounds(fr).upper;
    let m = fr.m();
    Ok(StabilityRadius {
        rho: rho_formula(m, b, a0),
        b,
        a0,
        a1: a0.min(1.0),
        m,
    })
}

/// Lower frame bound guaranteed after moving every vector by less than
/// `radius`: `A - 2 sqrt(m B) radius - m radius^2`.
pub fn perturbed_lower_bound(a: f64, b: f64, m: usize, radius: f64) -> f64 {
    let m = m as f64;
    a - 2.0 * (m * b).sqrt() * radius - m * radius * radius
}

/// `f_k + delta_k` with each `delta_k` uniform in the open complex ball of
/// the given radius.
pub fn perturb_frame(fr: &ComplexFrame, radius: f64, seed: u64) -> ComplexFrame {
    assert!(radius > 0.0, "perturbation radius must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 2 * fr.n();
    let vectors: Vec<_> = fr
        .vectors()
        .iter()
        .map(|f| {
            let delta = loop {
                let dir = unit_sphere(&mut rng, dim);
                let u: f64 = rng.random();
                let d: DVector<f64> = dir * (radius * u.powf(1.0 / dim as f64));
                if d.norm() < radius {
                    break d;
                }
            };
            f + complexify(&delta)
        })
        .collect();
    let out = ComplexFrame::new(fr.n(), vectors).expect("shape preserved");
    debug_assert!(fr.max_distance(&out).unwrap() < radius);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub max_delta: f64,
    #[serde(rename = "B_prime")]
    pub b_prime: f64,
    pub verdict: Verdict,
    pub a0_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub seed: u64,
    pub perturbation: FrameDoc,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationTrialReport {
    pub trials: usize,
    pub radius_fraction: f64,
    pub radius: f64,
    pub stability: StabilityRadius,
    pub failures: Vec<TrialFailure>,
    pub b_prime_max: f64,
    /// `2 (B + 1)`, the bound on `B'` whenever `radius <= 1/sqrt(m)`.
    pub b_prime_bound: f64,
    pub records: Vec<TrialRecord>,
    pub disclaimer: String,
}

impl PerturbationTrialReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// One row per trial; doubles carry 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,max_delta,B_prime,verdict,a0_estimate\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{},{:.16e}\n",
                r.trial, r.seed, r.max_delta, r.b_prime, r.verdict, r.a0_estimate
            ));
        }
        out
    }
}

/// Certifies `fr`, then certifies `trials` perturbations at
/// `radius_fraction * rho`. Trial `t` uses seed `seed + t`.
pub fn stability_experiment(
    fr: &ComplexFrame,
    trials: usize,
    radius_fraction: f64,
    seed: u64,
    opts: &CertifyOptions,
) -> Result<PerturbationTrialReport> {
    let base = certify_complex(fr, opts);
    if base.verdict != Verdict::Retrievable || base.a0_estimate <= opts.tau_pr {
        return Err(Error::NotRetrievableInput { a0: base.a0_estimate });
    }
    let stability = stability_radius(fr, base.a0_estimate)?;
    let radius = radius_fraction * stability.rho;

    let records: Vec<(TrialRecord, ComplexFrame)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = seed.wrapping_add(trial as u64);
            let perturbed = perturb_frame(fr, radius, trial_seed);
            let report = certify_complex(&perturbed, opts);
            let record = TrialRecord {
                trial,
                seed: trial_seed,
                max_delta: fr.max_distance(&perturbed).expect("same shape"),
                b_prime: frame_bounds(&perturbed).upper,
                verdict: report.verdict,
                a0_estimate: report.a0_estimate,
            };
            (record, perturbed)
        })
        .collect();

    let failures = records
        .iter()
        .filter(|(r, _)| r.verdict != Verdict::Retrievable)
        .map(|(r, p)| TrialFailure {
            seed: r.seed,
            perturbation: FrameDoc::from(p),
            verdict: r.verdict,
        })
        .collect();
    let b_prime_max = records.iter().map(|(r, _)| r.b_prime).fold(0.0, f64::max);
    Ok(PerturbationTrialReport {
        trials,
        radius_fraction,
        radius,
        stability,
        failures,
        b_prime_max,
        b_prime_bound: 2.0 * (stability.b + 1.0),
        records: records.into_iter().map(|(r, _)| r).collect(),
        disclaimer: DISCLAIMER.to_string(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapAudit {
    /// Largest `|<L(xi) eta, eta> - <L'(xi) eta, eta>|` over the samples.
    pub max_gap: f64,
    /// `2 (B + B')^{3/2} max_k ||f_k - f'_k||`.
    pub bound: f64,
    pub max_delta: f64,
    pub b: f64,
    pub b_prime: f64,
    /// Smallest `lambda_min(L'(xi))` over the sampled unit `xi`.
    pub min_l_prime: f64,
}

impl GapAudit {
    pub fn within_bound(&self) -> bool {
        self.max_gap <= self.bound + 1e-9
    }
}

/// Samples unit pairs `(xi, eta)` and compares the quadratic forms of `L`
/// for two frames of the same shape.
pub fn l_matrix_gap_audit(
    fr: &ComplexFrame,
    other: &ComplexFrame,
    samples: usize,
    seed: u64,
) -> Result<GapAudit> {
    fr.check_same_shape(other)?;
    let rf = RealifiedFrame::new(fr);
    let rf2 = RealifiedFrame::new(other);
    let b = frame_bounds(fr).upper;
    let b_prime = frame_bounds(other).upper;
    let max_delta = fr.max_distance(other)?;
    let dim = 2 * fr.n();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap = 0.0f64;
    let mut min_l_prime = f64::INFINITY;
    for _ in 0..samples {
        let xi = unit_sphere(&mut rng, dim);
        let eta = unit_sphere(&mut rng, dim);
        let gap = (rf.l_form(&xi, &eta) - rf2.l_form(&xi, &eta)).abs();
        max_gap = max_gap.max(gap);
        min_l_prime = min_l_prime.min(sym_eigenvalues(&rf2.l_matrix(&xi))[0]);
    }
    Ok(GapAudit {
        max_gap,
        bound: 2.0 * (b + b_prime).powf(1.5) * max_delta,
        max_delta,
        b,
        b_prime,
        min_l_prime,
    })
}
