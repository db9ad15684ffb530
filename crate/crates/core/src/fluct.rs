//! Ensemble fluctuations: the invariant `ε = sup ρ(P₁, P₂)` over the family
//! of hidden-variable distributions prepared for one state, and the chain of
//! inequalities showing that the GHZ constraints force `ε ≥ 1/3`.

use serde::Serialize;
use thiserror::Error;

use crate::hv::{AssignmentSpace, Constraint, ContextualModel, HvError};
use crate::measure::{max_event_distance, tv_distance, MeasureError, ProbabilityMeasure};
use crate::TOLERANCE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FluctError {
    #[error("distribution family is empty")]
    EmptyFamily,
    #[error("number of points must be at least 1")]
    NoPoints,
    #[error("delta must be finite and nonnegative, got {0}")]
    BadDelta(f64),
    #[error("no pair of distributions on {points} points differs by {delta} at every point")]
    Infeasible { points: usize, delta: f64 },
    #[error("the chain needs at least one premise and a target constraint")]
    NoPremises,
    #[error(transparent)]
    Hv(#[from] HvError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// The distributions realised by one quantum state over different runs or
/// settings.
#[derive(Clone, Debug, PartialEq)]
pub struct DistributionFamily {
    members: Vec<ProbabilityMeasure>,
}

impl DistributionFamily {
    pub fn new(members: Vec<ProbabilityMeasure>) -> Result<DistributionFamily, FluctError> {
        if members.is_empty() {
            return Err(FluctError::EmptyFamily);
        }
        Ok(DistributionFamily { members })
    }

    pub fn from_model(model: &ContextualModel) -> Result<DistributionFamily, FluctError> {
        Self::new(model.distributions().to_vec())
    }

    pub fn members(&self) -> &[ProbabilityMeasure] {
        &self.members
    }
}

/// `ε = max_{P₁, P₂ ∈ family} ρ(P₁, P₂)`.
pub fn epsilon_invariant(f: &DistributionFamily) -> f64 {
    pairwise_max(f, |p, q| tv_distance(p.as_signed(), q.as_signed()))
}

fn pairwise_max<F: Fn(&ProbabilityMeasure, &ProbabilityMeasure) -> f64>(f: &DistributionFamily, dist: F) -> f64 {
    let m = &f.members;
    let mut best = 0.0f64;
    for i in 0..m.len() {
        for j in (i + 1)..m.len() {
            best = best.max(dist(&m[i], &m[j]));
        }
    }
    best
}

/// Term-by-term evaluation of
///
/// ```text
/// P_t(Σ⁺) = 1 − P_t(Σ̄⁺)
///         ≥ 1 − Σ_s P_t(Ω̄_s)
///         ≥ 1 − Σ_s P_s(Ω̄_s) − k·ε
/// ```
///
/// where `s` ranges over the `k` premises, `t` is the target constraint's
/// distribution and `ε` is the invariant of the model's distributions in the
/// total-variation norm. The second step uses `|P_s(E) − P_t(E)| ≤ ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonChainAudit {
    pub epsilon: f64,
    /// Largest event-level gap, `ε/2` for probability measures; diagnostic
    /// only.
    pub epsilon_event: f64,
    /// `P_t(Σ⁺)`.
    pub sigma_plus_probability: f64,
    /// `P_t(Σ̄⁺)`.
    pub sigma_plus_complement: f64,
    /// `P_t(Ω̄_s)` per premise.
    pub target_complements: Vec<f64>,
    /// `P_s(Ω̄_s)` per premise.
    pub reference_complements: Vec<f64>,
    /// `1 − Σ_s P_t(Ω̄_s)`.
    pub union_bound: f64,
    /// `1 − Σ_s P_s(Ω̄_s) − k·ε`.
    pub fluctuation_bound: f64,
    /// `P_t(Ω_t)`.
    pub target_probability: f64,
    pub union_step_holds: bool,
    pub fluctuation_step_holds: bool,
    /// `P_t(Σ⁺) ≥ 1 − Σ_s P_s(Ω̄_s) − k·ε`; with all premises at probability
    /// one this is `1 − 3ε ≤ P(Σ⁺)`.
    pub bound_holds: bool,
    pub premises_hold: bool,
    pub all_constraints_hold: bool,
    /// `(1 − Σ_s P_s(Ω̄_s) − P_t(Σ⁺)) / k`, the smallest `ε` the chain allows.
    pub epsilon_lower_bound: f64,
    pub epsilon_at_least_one_third: bool,
    /// `Σ⁺` and the target's satisfier set are disjoint for every assignment.
    pub sigma_plus_excludes_target: bool,
    /// The chain forces `P_t(Σ⁺) > 0`, which the target constraint (through
    /// `Σ⁺ ⊆ Ω̄_t`) forbids.
    pub contradiction: bool,
}

pub fn ghz_epsilon_chain(model: &ContextualModel, constraints: &[Constraint]) -> Result<EpsilonChainAudit, FluctError> {
    let (target, premises) = constraints.split_last().ok_or(FluctError::NoPremises)?;
    if premises.is_empty() {
        return Err(FluctError::NoPremises);
    }
    let indices = constraints
        .iter()
        .map(|c| model.require_index(c.settings()))
        .collect::<Result<Vec<_>, _>>()?;
    let t = *indices.last().expect("nonempty");
    let family = DistributionFamily::new(indices.iter().map(|&i| model.distributions()[i].clone()).collect())?;
    let epsilon = epsilon_invariant(&family);
    let epsilon_event = pairwise_max(&family, |p, q| {
        max_event_distance(p.as_signed(), q.as_signed()).unwrap_or(f64::NAN)
    });

    let space: &AssignmentSpace = model.space();
    let mut sigma_plus = vec![true; space.len()];
    for c in premises {
        for (m, ok) in sigma_plus.iter_mut().zip(space.satisfier_mask(c)?) {
            *m &= ok;
        }
    }
    let target_mask = space.satisfier_mask(target)?;
    let sigma_plus_excludes_target = sigma_plus.iter().zip(&target_mask).all(|(&s, &ok)| !(s && ok));

    let target_dist = &model.distributions()[t];
    let mut sigma_plus_probability = 0.0;
    for (label, w) in target_dist.atoms() {
        if sigma_plus[space.parse_label(label)?] {
            sigma_plus_probability += w;
        }
    }
    let sigma_plus_complement = 1.0 - sigma_plus_probability;
    let target_complements = premises
        .iter()
        .map(|c| model.constraint_probability(t, c).map(|p| 1.0 - p))
        .collect::<Result<Vec<_>, _>>()?;
    let reference_complements = premises
        .iter()
        .zip(&indices)
        .map(|(c, &i)| model.constraint_probability(i, c).map(|p| 1.0 - p))
        .collect::<Result<Vec<_>, _>>()?;
    let k = premises.len() as f64;
    let union_bound = 1.0 - target_complements.iter().sum::<f64>();
    let reference_mass = reference_complements.iter().sum::<f64>();
    let fluctuation_bound = 1.0 - reference_mass - k * epsilon;
    let target_probability = model.constraint_probability(t, target)?;

    let premises_hold = reference_complements.iter().all(|&c| c <= TOLERANCE);
    let epsilon_lower_bound = (1.0 - reference_mass - sigma_plus_probability) / k;
    Ok(EpsilonChainAudit {
        epsilon,
        epsilon_event,
        sigma_plus_probability,
        sigma_plus_complement,
        union_bound,
        fluctuation_bound,
        target_probability,
        union_step_holds: sigma_plus_probability >= union_bound - TOLERANCE,
        fluctuation_step_holds: union_bound >= fluctuation_bound - TOLERANCE,
        bound_holds: sigma_plus_probability >= fluctuation_bound - TOLERANCE,
        premises_hold,
        all_constraints_hold: premises_hold && target_probability >= 1.0 - TOLERANCE,
        epsilon_lower_bound,
        epsilon_at_least_one_third: epsilon >= 1.0 / 3.0 - TOLERANCE,
        sigma_plus_excludes_target,
        contradiction: sigma_plus_excludes_target && fluctuation_bound > TOLERANCE,
        target_complements,
        reference_complements,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteVerdict {
    pub points: usize,
    pub delta: f64,
    /// `ρ(P, P′) = N·δ`.
    pub rho: f64,
    /// `1/(3N)`.
    pub blocking_threshold: f64,
    /// `δ ≥ 1/(3N)`, i.e. `ρ ≥ 1/3`: the fluctuation is large enough that the
    /// GHZ constraints no longer force a contradiction.
    pub ghz_blocked: bool,
}

fn check_discrete(points: usize, delta: f64) -> Result<(), FluctError> {
    if points == 0 {
        return Err(FluctError::NoPoints);
    }
    if !(delta.is_finite() && delta >= 0.0) {
        return Err(FluctError::BadDelta(delta));
    }
    let feasible = delta == 0.0 || (points.is_multiple_of(2) && points as f64 * delta <= 2.0 * (1.0 + TOLERANCE));
    if !feasible {
        return Err(FluctError::Infeasible { points, delta });
    }
    Ok(())
}

/// Distance and blocking verdict for two distributions on `points` atoms
/// that differ by `delta` at every atom.
pub fn discrete_perturbation_verdict(points: usize, delta: f64) -> Result<DiscreteVerdict, FluctError> {
    check_discrete(points, delta)?;
    let n = points as f64;
    let blocking_threshold = 1.0 / (3.0 * n);
    Ok(DiscreteVerdict {
        points,
        delta,
        rho: n * delta,
        blocking_threshold,
        ghz_blocked: delta >= blocking_threshold,
    })
}

/// An explicit pair realising `|P_j − P′_j| = δ` for every `j`:
/// `P_j = 1/N + (−1)^j·δ/2` and `P′_j = 1/N − (−1)^j·δ/2`.
///
/// Needs `N` even (so the alternating terms cancel) and `N·δ ≤ 2`.
pub fn perturbed_pair(points: usize, delta: f64) -> Result<(ProbabilityMeasure, ProbabilityMeasure), FluctError> {
    check_discrete(points, delta)?;
    let base = 1.0 / points as f64;
    let hi = base + delta / 2.0;
    let lo = (base - delta / 2.0).max(0.0);
    let p = (0..points).map(|j| (j.to_string(), if j % 2 == 0 { hi } else { lo }));
    let q = (0..points).map(|j| (j.to_string(), if j % 2 == 0 { lo } else { hi }));
    Ok((ProbabilityMeasure::new(p)?, ProbabilityMeasure::new(q)?))
}
