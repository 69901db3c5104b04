//! Multistart estimation of `a0 = min_{|xi| = 1} lambda_{2n-1}(R(xi))`.
//!
//! For unit `xi`, `lambda_{2n-1}(R(xi)) = min { g(xi, eta) : |eta| = 1, eta ⟂ J xi }`
//! with `g(xi, eta) = sum_k <Phi_k xi, eta>^2`. Since `g` is symmetric and
//! `eta ⟂ J xi` iff `xi ⟂ J eta`, the exact block step `xi <- argmin_eta` never
//! increases the objective. Each start runs that descent until the relative
//! decrease drops below `tol`, then a damped Gauss-Newton pass on the residuals
//! `<Phi_k xi, eta>` sharpens vanishing directions, where the block descent only
//! converges linearly.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::lift::{apply_j, RealifiedFrame};
use crate::linalg::{sym_eigen, unit_sphere};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct A0Options {
    pub starts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
    /// Gauss-Newton iterations after the block descent; 0 disables polishing.
    pub polish_iter: usize,
}

impl Default for A0Options {
    fn default() -> Self {
        Self {
            starts: 64,
            max_iter: 2000,
            tol: 1e-10,
            seed: 42,
            polish_iter: 60,
        }
    }
}

#[derive(Debug, Clone)]
pub struct A0Estimate {
    /// Smallest `lambda_{2n-1}(R(xi))` found, clamped at zero. An upper bound
    /// on the true minimum.
    pub a0: f64,
    /// Unit vector attaining `a0`.
    pub witness: DVector<f64>,
    pub starts_used: usize,
    /// Starts that hit `max_iter` before meeting `tol`.
    pub unconverged: usize,
}

struct StartResult {
    value: f64,
    xi: DVector<f64>,
    converged: bool,
}

/// `lambda_{2n-1}(R(xi))` for unit `xi` together with a unit eigenvector
/// orthogonal to `J xi`. The kernel direction `J xi` is pushed to the top of
/// the spectrum before diagonalizing.
pub(crate) fn restricted_min(rf: &RealifiedFrame, xi: &DVector<f64>) -> (f64, DVector<f64>) {
    let r = rf.r_matrix(xi);
    let jx = apply_j(xi);
    let shift = r.trace() + 1.0;
    let m = &r + (&jx * jx.transpose()) * shift;
    let (values, vectors) = sym_eigen(&m);
    (values[0], vectors.column(0).into_owned())
}

/// Multistart minimization of `xi -> lambda_{2n-1}(R(xi))` over the unit
/// sphere. Start `i` draws its initial point from a generator seeded with
/// `seed + i`, so the result does not depend on scheduling.
pub fn estimate_a0(rf: &RealifiedFrame, opts: &A0Options) -> A0Estimate {
    let starts = opts.starts.max(1);
    let dim = 2 * rf.n();
    let results: Vec<StartResult> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
            let xi0 = unit_sphere(&mut rng, dim);
            run_start(rf, xi0, opts)
        })
        .collect();

    let unconverged = results.iter().filter(|r| !r.converged).count();
    if unconverged > 0 {
        log::debug!("{unconverged} of {starts} starts reached max_iter");
    }
    let best = results
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one start");
    A0Estimate {
        a0: best.value.max(0.0),
        witness: best.xi,
        starts_used: starts,
        unconverged,
    }
}

fn run_start(rf: &RealifiedFrame, xi0: DVector<f64>, opts: &A0Options) -> StartResult {
    let mut xi = xi0;
    let (mut value, mut eta) = restricted_min(rf, &xi);
    let mut converged = false;
    for _ in 0..opts.max_iter {
        if value <= 0.0 {
            converged = true;
            break;
        }
        let (next_value, next_eta) = restricted_min(rf, &eta);
        if next_value >= value {
            converged = true;
            break;
        }
        let decrease = value - next_value;
        xi = std::mem::replace(&mut eta, next_eta);
        let previous = value;
        value = next_value;
        if decrease <= opts.tol * previous.abs() {
            converged = true;
            break;
        }
    }

    if opts.polish_iter > 0 {
        let (pxi, _) = polish(rf, xi.clone(), eta, opts.polish_iter);
        let polished = objective(rf, &pxi);
        if polished < value {
            value = polished;
            xi = pxi;
        }
    }
    StartResult {
        value,
        xi,
        converged,
    }
}

/// `lambda_{2n-1}(R(xi))` for unit `xi`.
fn objective(rf: &RealifiedFrame, xi: &DVector<f64>) -> f64 {
    restricted_min(rf, xi).0
}

/// Damped Gauss-Newton on `r_k(xi, eta) = <Phi_k xi, eta>` over
/// `{|xi| = |eta| = 1, eta ⟂ J xi}`. Steps solve the linearized constrained
/// least-squares problem through its KKT system, then retract.
fn polish(
    rf: &RealifiedFrame,
    mut xi: DVector<f64>,
    mut eta: DVector<f64>,
    iters: usize,
) -> (DVector<f64>, DVector<f64>) {
    let dim = xi.len();
    let mut res = rf.bilinear(&xi, &eta);
    let mut cost = res.norm_squared();
    let mut damping: Option<f64> = None;

    for _ in 0..iters {
        if cost == 0.0 {
            break;
        }
        // d r / d xi = Phi_k eta, d r / d eta = Phi_k xi
        let w_eta = rf.phi_images(&eta);
        let w_xi = rf.phi_images(&xi);
        let mut jac = DMatrix::zeros(res.len(), 2 * dim);
        jac.view_mut((0, 0), (res.len(), dim)).copy_from(&w_eta);
        jac.view_mut((0, dim), (res.len(), dim)).copy_from(&w_xi);
        let jtj = jac.tr_mul(&jac);
        let jtr = jac.tr_mul(&res);
        let lambda = *damping.get_or_insert_with(|| 1e-3 * jtj.diagonal().max().max(f64::MIN_POSITIVE));

        let jxi = apply_j(&xi);
        let jeta = apply_j(&eta);
        let mut cons = DMatrix::zeros(3, 2 * dim);
        for i in 0..dim {
            cons[(0, i)] = xi[i];
            cons[(1, dim + i)] = eta[i];
            cons[(2, i)] = -jeta[i];
            cons[(2, dim + i)] = jxi[i];
        }

        let mut lam = lambda;
        let mut accepted = false;
        while lam < 1e12 * lambda.max(1e-300) {
            let size = 2 * dim + 3;
            let mut kkt = DMatrix::zeros(size, size);
            let mut top = jtj.clone();
            for i in 0..2 * dim {
                top[(i, i)] += lam;
            }
            kkt.view_mut((0, 0), (2 * dim, 2 * dim)).copy_from(&top);
            kkt.view_mut((2 * dim, 0), (3, 2 * dim)).copy_from(&cons);
            kkt.view_mut((0, 2 * dim), (2 * dim, 3)).copy_from(&cons.transpose());
            let mut rhs = DVector::zeros(size);
            rhs.rows_mut(0, 2 * dim).copy_from(&(-&jtr));
            let Some(step) = kkt.lu().solve(&rhs) else {
                lam *= 10.0;
                continue;
            };

            let mut xi_new = &xi + step.rows(0, dim);
            let nx = xi_new.norm();
            if nx == 0.0 || !nx.is_finite() {
                lam *= 10.0;
                continue;
            }
            xi_new /= nx;
            let mut eta_new = &eta + step.rows(dim, dim);
            let jx_new = apply_j(&xi_new);
            eta_new -= &jx_new * jx_new.dot(&eta_new);
            let ne = eta_new.norm();
            if ne == 0.0 || !ne.is_finite() {
                lam *= 10.0;
                continue;
            }
            eta_new /= ne;

            let res_new = rf.bilinear(&xi_new, &eta_new);
            let cost_new = res_new.norm_squared();
            if cost_new < cost {
                xi = xi_new;
                eta = eta_new;
                res = res_new;
                let gain = cost - cost_new;
                cost = cost_new;
                damping = Some((lam / 10.0).max(1e-15 * lambda));
                accepted = gain > 1e-14 * cost;
                break;
            }
            lam *= 10.0;
        }
        if !accepted {
            break;
        }
    }
    (xi, eta)
}
