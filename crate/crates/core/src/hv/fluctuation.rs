use std::collections::BTreeSet;

use serde::Serialize;

use super::{AssignmentSpace, Constraint, ContextualModel, HvError};
use crate::measure::ProbabilityMeasure;
use crate::simplex::{Comparison, LinearProgram};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FluctuationOptimum {
    /// Minimal achievable `max_{s,t} ρ(P_s, P_t)`.
    pub epsilon_star: f64,
    /// Distributions attaining it, one per constraint.
    pub witness: ContextualModel,
    pub lp_iterations: usize,
}

/// Minimises the largest pairwise total-variation distance over families
/// `{P_s}` in which each `P_s` is a probability measure supported inside
/// the satisfier set of constraint `s`.
///
/// Linear program: variables `x_{s,j}` for `j ∈ S_s`, an epigraph variable
/// `t`, and `u_{st,j} ≥ |x_{s,j} − x_{t,j}|` on the overlaps `S_s ∩ S_t`.
/// Atoms outside the overlap contribute their own weight to `ρ(P_s, P_t)`.
pub fn lp_min_fluctuation(constraints: &[Constraint]) -> Result<FluctuationOptimum, HvError> {
    if constraints.is_empty() {
        return Err(HvError::EmptyFamily);
    }
    let space = AssignmentSpace::from_constraints(constraints)?;
    let supports = constraints
        .iter()
        .map(|c| space.satisfiers(c))
        .collect::<Result<Vec<_>, _>>()?;

    // x variables first, laid out support by support
    let mut offsets = Vec::with_capacity(supports.len());
    let mut next = 0;
    for s in &supports {
        offsets.push(next);
        next += s.len();
    }
    let x_var = |s: usize, atom: usize| offsets[s] + supports[s].binary_search(&atom).expect("atom in support");
    let t_var = next;
    next += 1;

    struct PairTerms {
        s: usize,
        r: usize,
        overlap: Vec<usize>,
        u_start: usize,
    }
    let mut pairs = Vec::new();
    for s in 0..supports.len() {
        for r in (s + 1)..supports.len() {
            let a: BTreeSet<usize> = supports[s].iter().copied().collect();
            let overlap: Vec<usize> = supports[r].iter().copied().filter(|j| a.contains(j)).collect();
            pairs.push(PairTerms {
                s,
                r,
                u_start: next,
                overlap,
            });
            next += pairs.last().map_or(0, |p| p.overlap.len());
        }
    }

    let mut objective = vec![0.0; next];
    objective[t_var] = 1.0;
    let mut lp = LinearProgram::minimize(objective);
    for (s, support) in supports.iter().enumerate() {
        lp.add_constraint(
            support.iter().map(|&j| (x_var(s, j), 1.0)).collect(),
            Comparison::Eq,
            1.0,
        )?;
    }
    for pair in &pairs {
        let (s, r) = (pair.s, pair.r);
        let mut distance = vec![(t_var, -1.0)];
        for (k, &j) in pair.overlap.iter().enumerate() {
            let u = pair.u_start + k;
            lp.add_constraint(
                vec![(x_var(s, j), 1.0), (x_var(r, j), -1.0), (u, -1.0)],
                Comparison::Le,
                0.0,
            )?;
            lp.add_constraint(
                vec![(x_var(r, j), 1.0), (x_var(s, j), -1.0), (u, -1.0)],
                Comparison::Le,
                0.0,
            )?;
            distance.push((u, 1.0));
        }
        for &j in &supports[s] {
            if pair.overlap.binary_search(&j).is_err() {
                distance.push((x_var(s, j), 1.0));
            }
        }
        for &j in &supports[r] {
            if pair.overlap.binary_search(&j).is_err() {
                distance.push((x_var(r, j), 1.0));
            }
        }
        lp.add_constraint(distance, Comparison::Le, 0.0)?;
    }

    let solution = lp.solve()?;
    let distributions = supports
        .iter()
        .enumerate()
        .map(|(s, support)| {
            ProbabilityMeasure::normalized(
                support
                    .iter()
                    .map(|&j| (j, solution.x[x_var(s, j)].max(0.0)))
                    .filter(|&(_, w)| w > 0.0)
                    .map(|(j, w)| (space.label(j), w)),
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let witness = ContextualModel::new(
        constraints.iter().map(|c| c.settings().to_vec()).collect(),
        distributions,
    )?;
    Ok(FluctuationOptimum {
        epsilon_star: solution.objective,
        witness,
        lp_iterations: solution.iterations,
    })
}
