//! Probabilistic analysis of the three-photon GHZ scheme.
//!
//! The crate is split along the lines of the analysis:
//!
//! * [`measure`]: finite signed measures, Jordan decomposition and the
//!   total-variation metric (no ½ factor).
//! * [`quantum`]: Born-rule predictions for the GHZ state under
//!   phase-parameterised dichotomic observables.
//! * [`dichotomy`]: singular/equivalent classification of Gaussian
//!   perturbations on sequence spaces (Feldman–Hájek series and the
//!   Kakutani product test).
//! * [`hv`]: deterministic assignments, the exhaustive no-go search,
//!   contextual models, and the minimal-fluctuation linear program.
//! * [`fluct`]: the ensemble-fluctuation invariant and the audit of the
//!   `ε ≥ 1/3` inequality chain.

pub mod dichotomy;
pub mod fluct;
pub mod hv;
pub mod measure;
pub mod phase;
pub mod quantum;
pub mod sign;
pub mod simplex;

pub use phase::{Phase, PhaseTriple};
pub use sign::Sign;

/// Absolute tolerance used for probability and mass comparisons.
pub const TOLERANCE: f64 = 1e-12;
