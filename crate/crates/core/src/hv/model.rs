use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::nogo::{probability_of_mask, sigma_plus_mask, split_family};
use super::{AssignmentSpace, Constraint, HvError};
use crate::measure::ProbabilityMeasure;
use crate::phase::{Phase, PhaseTriple};
use crate::quantum::{Outcome, OutcomeDistribution};
use crate::sign::{sign_string, Sign};
use crate::TOLERANCE;

/// Setting-dependent distributions of the hidden variable, all living on one
/// shared assignment space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ContextualModel {
    settings: Vec<Vec<Phase>>,
    distributions: Vec<ProbabilityMeasure>,
    space: AssignmentSpace,
}

#[derive(Serialize, Deserialize)]
struct RawModel {
    settings: Vec<Vec<Phase>>,
    distributions: Vec<BTreeMap<String, f64>>,
}

impl TryFrom<RawModel> for ContextualModel {
    type Error = HvError;

    fn try_from(raw: RawModel) -> Result<Self, HvError> {
        let distributions = raw
            .distributions
            .into_iter()
            .map(ProbabilityMeasure::new)
            .collect::<Result<Vec<_>, _>>()?;
        ContextualModel::new(raw.settings, distributions)
    }
}

impl From<ContextualModel> for RawModel {
    fn from(m: ContextualModel) -> Self {
        RawModel {
            settings: m.settings,
            distributions: m
                .distributions
                .iter()
                .map(|d| d.atoms().map(|(l, w)| (l.to_string(), w)).collect())
                .collect(),
        }
    }
}

impl ContextualModel {
    /// The assignment space is the set of (party, setting) pairs induced by
    /// `settings`; every distribution label must be an assignment of it.
    pub fn new(settings: Vec<Vec<Phase>>, distributions: Vec<ProbabilityMeasure>) -> Result<Self, HvError> {
        if settings.len() != distributions.len() {
            return Err(HvError::Shape {
                settings: settings.len(),
                distributions: distributions.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for s in &settings {
            if !seen.insert(s) {
                return Err(HvError::DuplicateSetting(s.clone()));
            }
        }
        let space = AssignmentSpace::from_settings(&settings)?;
        for d in &distributions {
            for (label, _) in d.atoms() {
                space.parse_label(label)?;
            }
        }
        Ok(ContextualModel {
            settings,
            distributions,
            space,
        })
    }

    pub fn settings(&self) -> &[Vec<Phase>] {
        &self.settings
    }

    pub fn distributions(&self) -> &[ProbabilityMeasure] {
        &self.distributions
    }

    pub fn space(&self) -> &AssignmentSpace {
        &self.space
    }

    pub fn index_of(&self, settings: &[Phase]) -> Option<usize> {
        self.settings.iter().position(|s| s.as_slice() == settings)
    }

    /// The unique setting whose phases are each within `tol` of `settings`
    /// on the circle; `None` if there is no such setting or more than one.
    pub fn nearest_index(&self, settings: &[Phase], tol: f64) -> Option<usize> {
        let close = |s: &Vec<Phase>| {
            s.len() == settings.len() && s.iter().zip(settings).all(|(a, b)| a.circular_distance(*b) <= tol)
        };
        let mut hits = self
            .settings
            .iter()
            .enumerate()
            .filter(|(_, s)| close(s))
            .map(|(i, _)| i);
        match (hits.next(), hits.next()) {
            (Some(i), None) => Some(i),
            _ => None,
        }
    }

    pub fn require_index(&self, settings: &[Phase]) -> Result<usize, HvError> {
        self.index_of(settings)
            .ok_or_else(|| HvError::UnknownSetting(settings.to_vec()))
    }

    pub fn distribution_for(&self, settings: &[Phase]) -> Result<&ProbabilityMeasure, HvError> {
        Ok(&self.distributions[self.require_index(settings)?])
    }

    /// `P_idx(Ω_c)`: probability that distribution `idx` satisfies `c`.
    pub fn constraint_probability(&self, idx: usize, c: &Constraint) -> Result<f64, HvError> {
        probability_of_mask(&self.distributions[idx], &self.space, &self.space.satisfier_mask(c)?)
    }

    /// Labels carrying positive probability under distribution `idx`.
    pub fn support(&self, idx: usize) -> BTreeSet<String> {
        self.distributions[idx].support().map(str::to_string).collect()
    }

    /// Law of the joint outcomes at the distribution's own setting, keyed by
    /// sign strings in party order.
    pub fn pushforward(&self, idx: usize) -> Result<BTreeMap<String, f64>, HvError> {
        let positions = self
            .space
            .positions(&Constraint::new(self.settings[idx].clone(), Sign::Plus)?)?;
        let mut out = BTreeMap::new();
        for (label, w) in self.distributions[idx].atoms() {
            let i = self.space.parse_label(label)?;
            *out.entry(sign_string(&self.space.outcomes(i, &positions)))
                .or_insert(0.0) += w;
        }
        Ok(out)
    }

    /// Three-party pushforward as an [`OutcomeDistribution`], for comparison
    /// with the quantum law.
    pub fn outcome_law(&self, idx: usize) -> Result<OutcomeDistribution, HvError> {
        let phases = PhaseTriple::from_slice(&self.settings[idx])?;
        let mut probabilities = [0.0; 8];
        for (label, w) in self.pushforward(idx)? {
            probabilities[Outcome::parse(&label)?.index()] = w;
        }
        Ok(OutcomeDistribution::new(phases, probabilities)?)
    }
}

/// Builds one distribution per constraint, each supported inside its own
/// satisfier set, with pairwise disjoint supports.
///
/// Rule: for constraint `s` (in family order) the pairs off its settings are
/// fixed to a pattern, and the support is the `2^(n−1)` assignments that
/// match the pattern and satisfy `s`; the distribution is uniform on it. The
/// pattern is the first one, counting in binary over the off-setting pairs
/// in pair order, whose support avoids every earlier support.
pub fn build_singular_contextual_model(constraints: &[Constraint]) -> Result<ContextualModel, HvError> {
    if constraints.is_empty() {
        return Err(HvError::EmptyFamily);
    }
    let space = AssignmentSpace::from_constraints(constraints)?;
    let mut used = vec![false; space.len()];
    let mut distributions = Vec::with_capacity(constraints.len());
    for (s, c) in constraints.iter().enumerate() {
        let on = space.positions(c)?;
        let off: Vec<usize> = (0..space.num_pairs()).filter(|k| !on.contains(k)).collect();
        let satisfiers = space.satisfier_mask(c)?;
        let support = (0..1usize << off.len())
            .map(|pattern| {
                (0..space.len())
                    .filter(|&i| {
                        satisfiers[i]
                            && off.iter().enumerate().all(|(t, &k)| {
                                let bit = (pattern >> (off.len() - 1 - t)) & 1 == 1;
                                space.value(i, k) == Sign::from_bit(bit)
                            })
                    })
                    .collect::<Vec<usize>>()
            })
            .find(|support| support.iter().all(|&i| !used[i]))
            .ok_or(HvError::NoDisjointSupport(s))?;
        for &i in &support {
            used[i] = true;
        }
        distributions.push(ProbabilityMeasure::uniform(support.iter().map(|&i| space.label(i)))?);
    }
    ContextualModel::new(
        constraints.iter().map(|c| c.settings().to_vec()).collect(),
        distributions,
    )
}

/// Outcome of the equivalence argument on a common-support model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub support_size: usize,
    /// `P_s(Ω_s)` for every premise `s`.
    pub premise_probabilities: Vec<f64>,
    pub premises_hold: bool,
    /// `P_t(Ω_s)` for every premise `s`, with `t` the target's distribution.
    pub transferred_probabilities: Vec<f64>,
    /// `P_t(Σ⁺)`.
    pub sigma_plus_probability: f64,
    /// `P_t(Ω_t)`.
    pub target_probability: f64,
    pub contradiction: bool,
    /// Index of the constraint that fails when a contradiction is flagged.
    pub failing_constraint: Option<usize>,
    /// `1 − P_t(Ω_t)`.
    pub deficit: f64,
}

/// Runs the argument for mutually absolutely continuous distributions.
///
/// On a finite space, equivalence means identical supports. A premise that
/// holds with probability one under its own distribution then holds with
/// probability one under every distribution, so the target's distribution
/// gives `Σ⁺` probability one, which the parity identity makes incompatible
/// with the target constraint.
pub fn check_equivalence_theorem(m: &ContextualModel, constraints: &[Constraint]) -> Result<TheoremReport, HvError> {
    let (premises, target) = split_family(constraints)?;
    let indices = constraints
        .iter()
        .map(|c| m.require_index(c.settings()))
        .collect::<Result<Vec<_>, _>>()?;
    let support = m.support(indices[0]);
    if indices.iter().any(|&i| m.support(i) != support) {
        return Err(HvError::SupportsDiffer);
    }
    let t = *indices.last().expect("family is nonempty");
    let premise_probabilities = premises
        .iter()
        .zip(&indices)
        .map(|(c, &i)| m.constraint_probability(i, c))
        .collect::<Result<Vec<_>, _>>()?;
    let premises_hold = premise_probabilities.iter().all(|&p| p >= 1.0 - TOLERANCE);
    let transferred_probabilities = premises
        .iter()
        .map(|c| m.constraint_probability(t, c))
        .collect::<Result<Vec<_>, _>>()?;
    let space = m.space();
    let sigma_plus_probability = probability_of_mask(&m.distributions()[t], space, &sigma_plus_mask(space, premises)?)?;
    let target_probability = m.constraint_probability(t, target)?;
    let contradiction = premises_hold && target_probability < 1.0 - TOLERANCE;
    Ok(TheoremReport {
        support_size: support.len(),
        premise_probabilities,
        premises_hold,
        transferred_probabilities,
        sigma_plus_probability,
        target_probability,
        contradiction,
        failing_constraint: contradiction.then_some(constraints.len() - 1),
        deficit: 1.0 - target_probability,
    })
}
