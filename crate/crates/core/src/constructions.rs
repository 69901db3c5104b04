//! Reference frames and frame paths.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{ComplexFrame, Field};
use crate::linalg::{complex_gaussian, complex_rank, CVector, DEFAULT_RANK_TOL};

/// Base-point angle of the Vandermonde nodes `z_k`: either `(k-1)/(2n-1)` as
/// printed, or the roots-of-unity angle `2 pi (k-1)/(2n-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngleVariant {
    Verbatim,
    TwoPi,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BodmannHammenParams {
    pub n: usize,
    pub a: f64,
    pub variant: AngleVariant,
    /// Reject angles from the finite exceptional set instead of warning.
    pub strict: bool,
}

impl BodmannHammenParams {
    pub fn new(n: usize, a: f64) -> Self {
        Self {
            n,
            a,
            variant: AngleVariant::TwoPi,
            strict: false,
        }
    }
}

/// `Some((p, q))` when `a` lies within `1e-12` of `pi p / q` with
/// `1 <= q <= 2(n-1)` and `0 <= p <= 2q`.
pub fn denied_angle(n: usize, a: f64) -> Option<(u32, u32)> {
    let qmax = 2 * (n.max(2) - 1) as u32;
    for q in 1..=qmax {
        for p in 0..=2 * q {
            if (a - PI * p as f64 / q as f64).abs() <= 1e-12 {
                return Some((p, q));
            }
        }
    }
    None
}

/// The `2n - 1` Vandermonde nodes
/// `z_k = sin(pi/(2n-1))/sin(a) e^{i theta_k} - e^{i(pi/(2n-1) - a/2)} sin(pi/(2n-1) - a/2)/sin(a)`.
pub fn z_points(n: usize, a: f64, variant: AngleVariant) -> Vec<Complex64> {
    let d = (2 * n - 1) as f64;
    let sa = a.sin();
    let radius = (PI / d).sin() / sa;
    let shift = Complex64::from_polar(1.0, PI / d - a / 2.0) * ((PI / d - a / 2.0).sin() / sa);
    (1..=2 * n - 1)
        .map(|k| {
            let base = (k - 1) as f64 / d;
            let theta = match variant {
                AngleVariant::Verbatim => base,
                AngleVariant::TwoPi => 2.0 * PI * base,
            };
            Complex64::from_polar(radius, theta) - shift
        })
        .collect()
}

/// The `4n - 4` vector frame: `2n - 3` roots-of-unity vectors
/// `(1, w^{k+1}, w^{2(k+1)}, ...)` with `w = e^{2 pi i/(2n-1)}`, followed by
/// `2n - 1` Vandermonde vectors `(1, z_k, ..., z_k^{n-1})`.
pub fn bodmann_hammen(params: &BodmannHammenParams) -> Result<ComplexFrame> {
    let n = params.n;
    if n < 2 {
        return Err(Error::BadDimension(n));
    }
    let a = params.a;
    if let Some((p, q)) = denied_angle(n, a) {
        if params.strict {
            return Err(Error::DeniedAngle { a, p, q });
        }
        log::warn!("angle a = {a} equals pi*{p}/{q}, inside the exceptional set");
    }
    if a.sin().abs() < 1e-12 {
        return Err(Error::DegenerateAngle(a));
    }

    let d = (2 * n - 1) as f64;
    let mut vectors = Vec::with_capacity(4 * n - 4);
    for k in 1..=2 * n - 3 {
        vectors.push(CVector::from_fn(n, |j, _| {
            Complex64::from_polar(1.0, 2.0 * PI * ((k + 1) * j) as f64 / d)
        }));
    }
    for z in z_points(n, a, params.variant) {
        vectors.push(CVector::from_fn(n, |j, _| z.powu(j as u32)));
    }
    ComplexFrame::new(n, vectors)
}

/// Six vectors in `R^3`: the standard basis followed by the pairwise sums
/// `e1+e2`, `e1+e3`, `e2+e3`.
pub fn r3_example() -> ComplexFrame {
    let rows = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [1.0, 1.0, 0.0],
        [1.0, 0.0, 1.0],
        [0.0, 1.0, 1.0],
    ];
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_vec()).collect();
    ComplexFrame::real(3, &rows).expect("fixed example is well formed")
}

/// `{e_1, ..., e_n, e_n, ..., e_n}` with `m - n` extra copies of `e_n`.
pub fn trivial_non_retrievable(n: usize, m: usize) -> Result<ComplexFrame> {
    if n < 2 || m < n {
        return Err(Error::BadCardinality { n, m });
    }
    let e = |i: usize| CVector::from_fn(n, |r, _| Complex64::new(if r == i { 1.0 } else { 0.0 }, 0.0));
    let vectors = (0..m).map(|k| e(k.min(n - 1))).collect();
    ComplexFrame::new(n, vectors)
}

const RANDOM_RETRIES: usize = 16;

/// I.i.d. standard complex Gaussian entries, redrawn until the vectors span.
pub fn random_frame(n: usize, m: usize, seed: u64) -> Result<ComplexFrame> {
    if n == 0 || m < n {
        return Err(Error::BadCardinality { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_RETRIES {
        let vectors = (0..m).map(|_| complex_gaussian(&mut rng, n)).collect();
        let fr = ComplexFrame::new(n, vectors)?;
        if fr.is_frame() {
            return Ok(fr);
        }
    }
    Err(Error::DegenerateAfterRetries(RANDOM_RETRIES))
}

/// Piecewise-linear path between two frames of the same shape.
///
/// On `[-1, 0]` positions in `I` keep `F1`'s vectors (a basis) while the
/// others slide to `F2[gamma(k)]`. On `[0, 1]` positions in `J` hold `F2`'s
/// vectors (a spanning set) while the others slide from `F1[delta(j)]`. The
/// two halves are indexed differently: at `t = 0` they agree as multisets,
/// related by [`FramePath::reorder_at_zero`].
#[derive(Debug, Clone)]
pub struct FramePath {
    pub f1: ComplexFrame,
    pub f2: ComplexFrame,
    /// `n` indices with `F1[I]` linearly independent.
    pub i: Vec<usize>,
    /// `m - n` indices with `F2[J]` spanning.
    pub j: Vec<usize>,
    /// `(k, gamma(k))` for `k` in the complement of `I`.
    pub gamma: Vec<(usize, usize)>,
    /// `(j, delta(j))` for `j` in the complement of `J`.
    pub delta: Vec<(usize, usize)>,
}

impl FramePath {
    /// `sigma` with `path_eval(0+)[sigma[k]] == path_eval(0-)[k]`.
    pub fn reorder_at_zero(&self) -> Vec<usize> {
        let m = self.f1.m();
        let mut sigma = vec![0; m];
        for &(k, g) in &self.gamma {
            sigma[k] = g;
        }
        for &(j, d) in &self.delta {
            sigma[d] = j;
        }
        sigma
    }
}

/// Greedy independent prefix selection: index `k` joins when it raises the rank.
fn greedy_basis(fr: &ComplexFrame) -> Vec<usize> {
    let n = fr.n();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    for k in 0..fr.m() {
        if chosen.len() == n {
            break;
        }
        let mut cols: Vec<&CVector> = chosen.iter().map(|&c| fr.vector(c)).collect();
        cols.push(fr.vector(k));
        if complex_rank(n, &cols, DEFAULT_RANK_TOL) == cols.len() {
            chosen.push(k);
        }
    }
    chosen
}

fn complement(m: usize, set: &[usize]) -> Vec<usize> {
    (0..m).filter(|k| !set.contains(k)).collect()
}

pub fn connect_frames(f1: &ComplexFrame, f2: &ComplexFrame) -> Result<FramePath> {
    f1.check_same_shape(f2)?;
    let (n, m) = (f1.n(), f1.m());
    if m < 2 * n {
        return Err(Error::CardinalityTooSmall { n, m });
    }

    let i = greedy_basis(f1);
    if i.len() < n {
        return Err(Error::SelectionFailed("first frame has no independent n-subset"));
    }
    let mut j = greedy_basis(f2);
    if j.len() < n {
        return Err(Error::SelectionFailed("second frame does not span"));
    }
    for k in 0..m {
        if j.len() == m - n {
            break;
        }
        if !j.contains(&k) {
            j.push(k);
        }
    }
    j.sort_unstable();

    let i_c = complement(m, &i);
    let j_c = complement(m, &j);
    let gamma = i_c.iter().copied().zip(j.iter().copied()).collect();
    let delta = j_c.iter().copied().zip(i.iter().copied()).collect();
    Ok(FramePath {
        f1: f1.clone(),
        f2: f2.clone(),
        i,
        j,
        gamma,
        delta,
    })
}

pub fn path_eval(path: &FramePath, t: f64) -> Result<ComplexFrame> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::PathParameter(t));
    }
    let (f1, f2) = (&path.f1, &path.f2);
    let c = |x: f64| Complex64::new(x, 0.0);
    let mut vectors: Vec<CVector>;
    if t <= 0.0 {
        vectors = f1.vectors().to_vec();
        for &(k, g) in &path.gamma {
            vectors[k] = f1.vector(k) * c(-t) + f2.vector(g) * c(t + 1.0);
        }
    } else {
        vectors = f2.vectors().to_vec();
        for &(j, d) in &path.delta {
            vectors[j] = f1.vector(d) * c(1.0 - t) + f2.vector(j) * c(t);
        }
    }
    let field = if f1.field() == Field::Real && f2.field() == Field::Real {
        Field::Real
    } else {
        Field::Complex
    };
    ComplexFrame::with_field(f1.n(), field, vectors)
}
