use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HvError;
use crate::phase::Phase;
use crate::sign::Sign;

/// Upper bound on distinct (party, setting) pairs, i.e. 2^24 assignments.
pub const MAX_PAIRS: usize = 24;

/// Perfect-correlation requirement: at `settings`, the product of the
/// parties' outcomes equals `required_sign` with probability one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConstraint")]
pub struct Constraint {
    settings: Vec<Phase>,
    required_sign: Sign,
}

#[derive(Deserialize)]
struct RawConstraint {
    settings: Vec<Phase>,
    required_sign: Sign,
}

impl TryFrom<RawConstraint> for Constraint {
    type Error = HvError;

    fn try_from(raw: RawConstraint) -> Result<Self, HvError> {
        Constraint::new(raw.settings, raw.required_sign)
    }
}

impl Constraint {
    pub fn new(settings: Vec<Phase>, required_sign: Sign) -> Result<Constraint, HvError> {
        if settings.len() < 2 {
            return Err(HvError::TooFewParties(settings.len()));
        }
        Ok(Constraint {
            settings,
            required_sign,
        })
    }

    pub fn parties(&self) -> usize {
        self.settings.len()
    }

    pub fn settings(&self) -> &[Phase] {
        &self.settings
    }

    pub fn required_sign(&self) -> Sign {
        self.required_sign
    }

    pub fn with_sign(&self, required_sign: Sign) -> Constraint {
        Constraint {
            settings: self.settings.clone(),
            required_sign,
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        self.settings
            .iter()
            .enumerate()
            .map(|(party, &setting)| Pair { party, setting })
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let settings: Vec<String> = self.settings.iter().map(|p| format!("{:.6}", p.radians())).collect();
        write!(f, "({}) -> {}1", settings.join(", "), self.required_sign)
    }
}

/// The four GHZ perfect correlations:
/// `(π/2,0,0) → +1`, `(0,π/2,0) → +1`, `(0,0,π/2) → +1`, `(π/2,π/2,π/2) → −1`.
pub fn ghz_constraints() -> Vec<Constraint> {
    let (z, h) = (Phase::ZERO, Phase::HALF_PI);
    [
        (vec![h, z, z], Sign::Plus),
        (vec![z, h, z], Sign::Plus),
        (vec![z, z, h], Sign::Plus),
        (vec![h, h, h], Sign::Minus),
    ]
    .into_iter()
    .map(|(settings, sign)| Constraint {
        settings,
        required_sign: sign,
    })
    .collect()
}

/// One party measured at one setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pair {
    pub party: usize,
    pub setting: Phase,
}

/// Deterministic ±1 response for every pair of a family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: BTreeMap<Pair, Sign>,
}

impl Assignment {
    pub fn new(values: BTreeMap<Pair, Sign>) -> Assignment {
        Assignment { values }
    }

    pub fn get(&self, party: usize, setting: Phase) -> Option<Sign> {
        self.values.get(&Pair { party, setting }).copied()
    }

    pub fn values(&self) -> &BTreeMap<Pair, Sign> {
        &self.values
    }

    /// Signs in pair order, e.g. `"+-++-+"`.
    pub fn label(&self) -> String {
        self.values.values().map(|s| s.as_char()).collect()
    }
}

/// The sorted (party, setting) pairs of a family and the `2^k` assignments
/// over them.
///
/// Assignment `i` gives pair `k` the value `-1` iff bit `(len − 1 − k)` of
/// `i` is set, so assignment 0 is all `+1` and labels sort like indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssignmentSpace {
    pairs: Vec<Pair>,
}

impl AssignmentSpace {
    pub fn from_pairs<I: IntoIterator<Item = Pair>>(pairs: I) -> Result<AssignmentSpace, HvError> {
        let pairs: Vec<Pair> = pairs.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if pairs.len() > MAX_PAIRS {
            return Err(HvError::TooManyPairs(pairs.len()));
        }
        Ok(AssignmentSpace { pairs })
    }

    pub fn from_constraints(constraints: &[Constraint]) -> Result<AssignmentSpace, HvError> {
        Self::from_pairs(constraints.iter().flat_map(Constraint::pairs))
    }

    /// Pairs induced by a list of setting tuples (party `k` at entry `k`).
    pub fn from_settings(settings: &[Vec<Phase>]) -> Result<AssignmentSpace, HvError> {
        Self::from_pairs(
            settings
                .iter()
                .flat_map(|s| s.iter().enumerate().map(|(party, &setting)| Pair { party, setting })),
        )
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }

    /// Number of assignments, `2^k`.
    pub fn len(&self) -> usize {
        1usize << self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, pair: Pair) -> Option<usize> {
        self.pairs.binary_search(&pair).ok()
    }

    pub fn value(&self, index: usize, position: usize) -> Sign {
        Sign::from_bit((index >> (self.pairs.len() - 1 - position)) & 1 == 1)
    }

    pub fn label(&self, index: usize) -> String {
        (0..self.pairs.len()).map(|k| self.value(index, k).as_char()).collect()
    }

    pub fn parse_label(&self, label: &str) -> Result<usize, HvError> {
        let bad = || HvError::BadLabel(label.to_string());
        if label.chars().count() != self.pairs.len() {
            return Err(bad());
        }
        label.chars().try_fold(0usize, |acc, c| {
            let s = Sign::from_char(c).ok_or_else(bad)?;
            Ok((acc << 1) | usize::from(s.is_minus()))
        })
    }

    pub fn assignment(&self, index: usize) -> Assignment {
        Assignment {
            values: self
                .pairs
                .iter()
                .enumerate()
                .map(|(k, &pair)| (pair, self.value(index, k)))
                .collect(),
        }
    }

    /// Positions of the constraint's pairs, in party order.
    pub fn positions(&self, constraint: &Constraint) -> Result<Vec<usize>, HvError> {
        constraint
            .pairs()
            .map(|pair| {
                self.position(pair).ok_or(HvError::MissingPair {
                    party: pair.party,
                    setting: pair.setting,
                })
            })
            .collect()
    }

    /// Outcome signs that assignment `index` produces at the constraint's
    /// settings.
    pub fn outcomes(&self, index: usize, positions: &[usize]) -> Vec<Sign> {
        positions.iter().map(|&k| self.value(index, k)).collect()
    }

    pub fn satisfies_index(&self, index: usize, constraint: &Constraint) -> Result<bool, HvError> {
        let positions = self.positions(constraint)?;
        Ok(Sign::product(self.outcomes(index, &positions)) == constraint.required_sign)
    }

    /// Indicator of the satisfier set over all assignments.
    pub fn satisfier_mask(&self, constraint: &Constraint) -> Result<Vec<bool>, HvError> {
        let positions = self.positions(constraint)?;
        Ok((0..self.len())
            .map(|i| Sign::product(self.outcomes(i, &positions)) == constraint.required_sign)
            .collect())
    }

    pub fn satisfiers(&self, constraint: &Constraint) -> Result<Vec<usize>, HvError> {
        Ok(self
            .satisfier_mask(constraint)?
            .into_iter()
            .enumerate()
            .filter_map(|(i, ok)| ok.then_some(i))
            .collect())
    }
}

/// Every sign assignment over the distinct (party, setting) pairs of the
/// family.
pub fn enumerate_assignments(constraints: &[Constraint]) -> Result<Vec<Assignment>, HvError> {
    let space = AssignmentSpace::from_constraints(constraints)?;
    Ok((0..space.len()).map(|i| space.assignment(i)).collect())
}

/// True iff the product of the assigned values at the constraint's settings
/// equals its required sign.
pub fn satisfies(a: &Assignment, c: &Constraint) -> Result<bool, HvError> {
    let product = c
        .pairs()
        .map(|pair| {
            a.get(pair.party, pair.setting).ok_or(HvError::MissingPair {
                party: pair.party,
                setting: pair.setting,
            })
        })
        .collect::<Result<Vec<Sign>, HvError>>()?;
    Ok(Sign::product(product) == c.required_sign)
}
