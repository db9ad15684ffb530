//! Hidden-variable models of the GHZ experiment.
//!
//! The hidden variable is quotiented to its observable content: one ±1
//! value per (party, setting) pair that appears in the constraint family.
//! For the four GHZ constraints that is six pairs and 64 [`Assignment`]s,
//! small enough that every claim is checked exhaustively.

mod assignment;
mod fluctuation;
mod model;
mod nogo;
mod sample;

use thiserror::Error;

pub use assignment::{
    enumerate_assignments, ghz_constraints, satisfies, Assignment, AssignmentSpace, Constraint, Pair, MAX_PAIRS,
};
pub use fluctuation::{lp_min_fluctuation, FluctuationOptimum};
pub use model::{build_singular_contextual_model, check_equivalence_theorem, ContextualModel, TheoremReport};
pub use nogo::{exhaustive_no_go, noncontextual_sigma_plus, parity_obstruction, NoGoReport, ParityReport};
pub use sample::{sample, sample_chunked, SampleCounts};

use crate::measure::MeasureError;
use crate::phase::{Phase, PhaseError};
use crate::quantum::QuantumError;
use crate::simplex::LpError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HvError {
    #[error("constraint needs at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("constraint family is empty")]
    EmptyFamily,
    #[error("constraint family references {0} (party, setting) pairs; at most {MAX_PAIRS} are supported")]
    TooManyPairs(usize),
    #[error("assignment has no value for party {party} at setting {setting}")]
    MissingPair { party: usize, setting: Phase },
    #[error("invalid assignment label {0:?}")]
    BadLabel(String),
    #[error("model has no distribution for setting {0:?}")]
    UnknownSetting(Vec<Phase>),
    #[error("setting {0:?} appears more than once")]
    DuplicateSetting(Vec<Phase>),
    #[error("model has {settings} settings but {distributions} distributions")]
    Shape { settings: usize, distributions: usize },
    #[error("distributions do not share a common support")]
    SupportsDiffer,
    #[error("no disjoint support is available for constraint {0}")]
    NoDisjointSupport(usize),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error(transparent)]
    Phase(#[from] PhaseError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
