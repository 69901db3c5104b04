//! Randomized search for two rays with identical frame magnitudes.
//!
//! Independent of the spectral machinery: it only ever compares
//! `|<x, f_k>|^2` with `|<y, f_k>|^2`. A returned pair is re-verified in
//! complex arithmetic; failing to find one proves nothing.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::frame::ComplexFrame;
use crate::lift::{complexify, realify, RealifiedFrame};
use crate::linalg::{complex_gaussian, inner, norm_sq, CVector};

const MATCH_TOL: f64 = 1e-8;
const RAY_SEPARATION: f64 = 1e-4;
const DESCENT_ITERS: usize = 200;

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub x: CVector,
    pub y: CVector,
    /// `||alpha^2(x) - alpha^2(y)||`.
    pub residual: f64,
    /// `min_theta ||x - e^{i theta} y||`.
    pub ray_distance: f64,
}

/// `min_theta ||x - e^{i theta} y|| = sqrt(|x|^2 + |y|^2 - 2 |<x, y>|)`.
pub fn ray_distance(x: &CVector, y: &CVector) -> f64 {
    (norm_sq(x) + norm_sq(y) - 2.0 * inner(x, y).norm()).max(0.0).sqrt()
}

pub fn injectivity_sampling_oracle(fr: &ComplexFrame, trials: usize, seed: u64) -> Option<Counterexample> {
    let rf = RealifiedFrame::new(fr);
    let n = fr.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials.max(1) {
        let mut x = complex_gaussian(&mut rng, n);
        let nx = x.norm();
        if nx == 0.0 {
            continue;
        }
        x.unscale_mut(nx);
        let mut y0 = complex_gaussian(&mut rng, n);
        let ny = y0.norm();
        if ny == 0.0 {
            continue;
        }
        y0.unscale_mut(ny);

        let target = DVector::from_vec(fr.squared_magnitudes(&x));
        let zeta = match_magnitudes(&rf, &target, realify(&y0));
        let y = complexify(&zeta);

        let residual = fr
            .squared_magnitudes(&x)
            .iter()
            .zip(fr.squared_magnitudes(&y))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        let separation = ray_distance(&x, &y);
        if residual <= MATCH_TOL && separation >= RAY_SEPARATION {
            return Some(Counterexample {
                x,
                y,
                residual,
                ray_distance: separation,
            });
        }
    }
    None
}

/// Levenberg-Marquardt on `r_k(zeta) = <Phi_k zeta, zeta> - target_k`.
fn match_magnitudes(rf: &RealifiedFrame, target: &DVector<f64>, mut zeta: DVector<f64>) -> DVector<f64> {
    let residual = |z: &DVector<f64>| rf.bilinear(z, z) - target;
    let mut res = residual(&zeta);
    let mut cost = res.norm_squared();
    let scale = 1.0 + target.norm_squared();
    let mut lambda: Option<f64> = None;

    for _ in 0..DESCENT_ITERS {
        if cost <= 1e-30 * scale {
            break;
        }
        let jac = rf.phi_images(&zeta) * 2.0;
        let jtj = jac.tr_mul(&jac);
        let jtr = jac.tr_mul(&res);
        let base = *lambda.get_or_insert_with(|| 1e-3 * jtj.diagonal().max().max(f64::MIN_POSITIVE));
        let mut lam = base;
        let mut improved = false;
        while lam < 1e12 * base {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lam;
            }
            let Some(chol) = a.cholesky() else {
                lam *= 10.0;
                continue;
            };
            let candidate = &zeta - chol.solve(&jtr);
            let res_new = residual(&candidate);
            let cost_new = res_new.norm_squared();
            if cost_new < cost {
                zeta = candidate;
                res = res_new;
                cost = cost_new;
                lambda = Some((lam / 10.0).max(1e-15 * base));
                improved = true;
                break;
            }
            lam *= 10.0;
        }
        if !improved {
            break;
        }
    }
    zeta
}
