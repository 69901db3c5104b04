//! Phase retrievability of finite frames in complex space.
//!
//! A frame `{f_1, ..., f_m}` in `C^n` is *phase retrievable* when the map
//! `x -> (|<x, f_k>|)_k` is injective on rays (vectors modulo a global
//! unimodular factor). This crate decides that property numerically through
//! the spectrum of the realified matrices `R(xi)`, computes the explicit
//! radius inside which retrievability survives perturbation, and builds the
//! reference frames used to exercise both.
//!
//! Module map:
//!
//! * [`frame`]: the [`ComplexFrame`] type, frame bounds, Gram-squared
//!   matrices and the frame transforms (equivalence, canonical dual,
//!   Parseval version).
//! * [`lift`]: realification `C^n -> R^{2n}`, the matrices `Phi_k`, `R(xi)`,
//!   `L(xi)` and symmetric outer products.
//! * [`certify`]: the `a0` estimator, kernel checks, the real-case
//!   complement property and the full certification pipeline.
//! * [`stability`]: the perturbation radius and the experiments validating it.
//! * [`constructions`]: Bodmann-Hammen frames, the six-vector `R^3` example,
//!   trivial non-retrievable frames, random frames and frame paths.
//! * [`io`]: the canonical JSON frame format.

pub mod certify;
pub mod constructions;
pub mod error;
pub mod frame;
pub mod io;
pub mod lift;
pub mod linalg;
pub mod stability;

pub use certify::{
    certify_complex, complement_property, estimate_a0, hmw_lower_bound, A0Options,
    CertificationReport, CertifyOptions, Method, Verdict,
};
pub use constructions::{
    bodmann_hammen, connect_frames, path_eval, r3_example, random_frame, trivial_non_retrievable,
    AngleVariant, BodmannHammenParams, FramePath,
};
pub use error::{Error, Result};
pub use frame::{frame_bounds, gram_squared, ComplexFrame, Field, FrameOperatorSummary};
pub use lift::RealifiedFrame;
pub use stability::{stability_experiment, stability_radius, PerturbationTrialReport, StabilityRadius};
