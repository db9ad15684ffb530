use serde::Serialize;

use super::{AssignmentSpace, Constraint, HvError};
use crate::measure::ProbabilityMeasure;
use crate::sign::Sign;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoGoReport {
    pub total_assignments: usize,
    /// Number of assignments satisfying each constraint, in family order.
    pub satisfier_counts: Vec<usize>,
    /// Assignments satisfying every constraint at once.
    pub all_satisfied: usize,
    pub max_simultaneous: usize,
    /// Labels of the assignments achieving `max_simultaneous`.
    pub witnesses: Vec<String>,
}

/// Counts, for every assignment, how many constraints it satisfies.
pub fn exhaustive_no_go(constraints: &[Constraint]) -> Result<NoGoReport, HvError> {
    if constraints.is_empty() {
        return Err(HvError::EmptyFamily);
    }
    let space = AssignmentSpace::from_constraints(constraints)?;
    let masks = constraints
        .iter()
        .map(|c| space.satisfier_mask(c))
        .collect::<Result<Vec<_>, _>>()?;
    let scores: Vec<usize> = (0..space.len())
        .map(|i| masks.iter().filter(|m| m[i]).count())
        .collect();
    let max_simultaneous = scores.iter().copied().max().unwrap_or(0);
    Ok(NoGoReport {
        total_assignments: space.len(),
        satisfier_counts: masks.iter().map(|m| m.iter().filter(|&&ok| ok).count()).collect(),
        all_satisfied: scores.iter().filter(|&&s| s == constraints.len()).count(),
        max_simultaneous,
        witnesses: (0..space.len())
            .filter(|&i| scores[i] == max_simultaneous)
            .map(|i| space.label(i))
            .collect(),
    })
}

/// The premises are every constraint but the last; the last is the target.
pub(crate) fn split_family(constraints: &[Constraint]) -> Result<(&[Constraint], &Constraint), HvError> {
    constraints
        .split_last()
        .map(|(target, premises)| (premises, target))
        .ok_or(HvError::EmptyFamily)
}

/// Indicator of `Σ⁺`, the intersection of the premises' satisfier sets.
pub(crate) fn sigma_plus_mask(space: &AssignmentSpace, premises: &[Constraint]) -> Result<Vec<bool>, HvError> {
    let mut mask = vec![true; space.len()];
    for c in premises {
        for (m, ok) in mask.iter_mut().zip(space.satisfier_mask(c)?) {
            *m &= ok;
        }
    }
    Ok(mask)
}

/// `p(event)` for an event given as an indicator over the space.
pub(crate) fn probability_of_mask(
    p: &ProbabilityMeasure,
    space: &AssignmentSpace,
    mask: &[bool],
) -> Result<f64, HvError> {
    let mut total = 0.0;
    for (label, w) in p.atoms() {
        if mask[space.parse_label(label)?] {
            total += w;
        }
    }
    Ok(total)
}

/// `p(Σ⁺)` for a single, setting-independent distribution over assignments,
/// where `Σ⁺` intersects the satisfier sets of all constraints except the
/// last (for the GHZ family: the three `+1` constraints).
pub fn noncontextual_sigma_plus(p: &ProbabilityMeasure, constraints: &[Constraint]) -> Result<f64, HvError> {
    let space = AssignmentSpace::from_constraints(constraints)?;
    let (premises, _) = split_family(constraints)?;
    probability_of_mask(p, &space, &sigma_plus_mask(&space, premises)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParityReport {
    pub assignments_checked: usize,
    /// Assignments for which the product of the premises' outcome products
    /// equals the target's outcome product.
    pub identity_holds: usize,
    pub premise_sign: Sign,
    pub target_sign: Sign,
    /// Identity holds everywhere and the required signs disagree, so no
    /// assignment can satisfy all premises and the target.
    pub forces_target_violation: bool,
}

/// Per-assignment check of the parity identity behind the no-go argument.
///
/// For the GHZ family each of `A(0), B(0), C(0)` appears in two premises,
/// so the product of the three premise products collapses to
/// `A(π/2)·B(π/2)·C(π/2)`, the target's product.
pub fn parity_obstruction(constraints: &[Constraint]) -> Result<ParityReport, HvError> {
    let space = AssignmentSpace::from_constraints(constraints)?;
    let (premises, target) = split_family(constraints)?;
    let premise_positions = premises
        .iter()
        .map(|c| space.positions(c))
        .collect::<Result<Vec<_>, _>>()?;
    let target_positions = space.positions(target)?;
    let identity_holds = (0..space.len())
        .filter(|&i| {
            let lhs = Sign::product(
                premise_positions
                    .iter()
                    .map(|pos| Sign::product(space.outcomes(i, pos))),
            );
            lhs == Sign::product(space.outcomes(i, &target_positions))
        })
        .count();
    let premise_sign = Sign::product(premises.iter().map(Constraint::required_sign));
    Ok(ParityReport {
        assignments_checked: space.len(),
        identity_holds,
        premise_sign,
        target_sign: target.required_sign(),
        forces_target_violation: identity_holds == space.len() && premise_sign != target.required_sign(),
    })
}
