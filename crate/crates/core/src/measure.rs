//! Signed measures on finite, labelled sample spaces.
//!
//! The total-variation norm here is `‖μ‖ = μ⁺(Ω) + μ⁻(Ω) = Σ |μ(λ)|`, with no
//! ½ factor, so two probability measures on disjoint supports are at
//! distance 2. [`max_event_distance`] gives the event-level distance, which
//! is half of [`tv_distance`] for probability measures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::TOLERANCE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("weight of atom {label:?} is not finite ({weight})")]
    NonFinite { label: String, weight: f64 },
    #[error("atom {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("atom {label:?} has negative probability {weight}")]
    Negative { label: String, weight: f64 },
    #[error("total mass {0} differs from 1")]
    NotNormalized(f64),
    #[error("cannot build a probability measure on an empty support")]
    Empty,
}

/// A finitely supported signed measure, stored as label → weight.
///
/// Atoms with weight zero may be stored; they behave exactly like absent
/// labels in every operation.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteSignedMeasure {
    atoms: BTreeMap<String, f64>,
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: BTreeMap<String, f64>,
}

impl TryFrom<RawMeasure> for DiscreteSignedMeasure {
    type Error = MeasureError;

    fn try_from(raw: RawMeasure) -> Result<Self, MeasureError> {
        DiscreteSignedMeasure::new(raw.atoms)
    }
}

impl DiscreteSignedMeasure {
    pub fn new<I, L>(atoms: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (L, f64)>,
        L: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (label, weight) in atoms {
            let label = label.into();
            if !weight.is_finite() {
                return Err(MeasureError::NonFinite { label, weight });
            }
            if map.insert(label.clone(), weight).is_some() {
                return Err(MeasureError::DuplicateLabel(label));
            }
        }
        Ok(DiscreteSignedMeasure { atoms: map })
    }

    /// Measure over integer point ids, labelled by their decimal form.
    pub fn from_indexed<I: IntoIterator<Item = (usize, f64)>>(atoms: I) -> Result<Self, MeasureError> {
        Self::new(atoms.into_iter().map(|(i, w)| (i.to_string(), w)))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn weight(&self, label: &str) -> f64 {
        self.atoms.get(label).copied().unwrap_or(0.0)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.atoms.iter().map(|(l, &w)| (l.as_str(), w))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Labels carrying nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = &str> + '_ {
        self.atoms.iter().filter(|(_, &w)| w != 0.0).map(|(l, _)| l.as_str())
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.values().sum()
    }

    /// Mass of the event made of the labels for which `event` is true.
    pub fn measure_of<F: Fn(&str) -> bool>(&self, event: F) -> f64 {
        self.atoms.iter().filter(|(l, _)| event(l)).map(|(_, w)| w).sum()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        DiscreteSignedMeasure {
            atoms: self.atoms.iter().map(|(l, &w)| (l.clone(), alpha * w)).collect(),
        }
    }

    /// `self − other` on the union of both label sets.
    pub fn difference(&self, other: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (label, &w) in &other.atoms {
            *atoms.entry(label.clone()).or_insert(0.0) -= w;
        }
        DiscreteSignedMeasure { atoms }
    }

    pub fn sum(&self, other: &Self) -> Self {
        self.difference(&other.scale(-1.0))
    }

    /// True when all weights are ≥ 0 and the total mass is 1 within 1e-12.
    pub fn is_probability(&self) -> bool {
        self.atoms.values().all(|&w| w >= 0.0) && (self.total_mass() - 1.0).abs() <= TOLERANCE
    }

    /// Weight-wise comparison with zero extension.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.difference(other).atoms.values().all(|w| w.abs() <= tol)
    }
}

/// A [`DiscreteSignedMeasure`] with nonnegative weights summing to 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiscreteSignedMeasure", into = "DiscreteSignedMeasure")]
pub struct ProbabilityMeasure(DiscreteSignedMeasure);

impl TryFrom<DiscreteSignedMeasure> for ProbabilityMeasure {
    type Error = MeasureError;

    fn try_from(m: DiscreteSignedMeasure) -> Result<Self, MeasureError> {
        if let Some((label, &weight)) = m.atoms.iter().find(|(_, &w)| w < 0.0) {
            return Err(MeasureError::Negative {
                label: label.clone(),
                weight,
            });
        }
        let mass = m.total_mass();
        if (mass - 1.0).abs() > TOLERANCE {
            return Err(MeasureError::NotNormalized(mass));
        }
        Ok(ProbabilityMeasure(m))
    }
}

impl From<ProbabilityMeasure> for DiscreteSignedMeasure {
    fn from(p: ProbabilityMeasure) -> Self {
        p.0
    }
}

impl ProbabilityMeasure {
    pub fn new<I, L>(atoms: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (L, f64)>,
        L: Into<String>,
    {
        DiscreteSignedMeasure::new(atoms)?.try_into()
    }

    /// Uniform measure on the given labels.
    pub fn uniform<I, L>(labels: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(MeasureError::Empty);
        }
        let w = 1.0 / labels.len() as f64;
        Self::new(labels.into_iter().map(|l| (l, w)))
    }

    /// Rescale nonnegative weights to unit mass.
    pub fn normalized<I, L>(atoms: I) -> Result<Self, MeasureError>
    where
        I: IntoIterator<Item = (L, f64)>,
        L: Into<String>,
    {
        let m = DiscreteSignedMeasure::new(atoms)?;
        let mass = m.total_mass();
        if mass <= 0.0 {
            return Err(MeasureError::Empty);
        }
        m.scale(1.0 / mass).try_into()
    }

    pub fn as_signed(&self) -> &DiscreteSignedMeasure {
        &self.0
    }

    pub fn probability(&self, label: &str) -> f64 {
        self.0.weight(label)
    }

    pub fn probability_of<F: Fn(&str) -> bool>(&self, event: F) -> f64 {
        self.0.measure_of(event)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.0.atoms()
    }

    pub fn support(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.support()
    }
}

/// Minimal decomposition `μ = μ⁺ − μ⁻` into nonnegative parts with disjoint
/// supports.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanPair {
    pub positive_part: DiscreteSignedMeasure,
    pub negative_part: DiscreteSignedMeasure,
}

impl JordanPair {
    pub fn recompose(&self) -> DiscreteSignedMeasure {
        self.positive_part.difference(&self.negative_part)
    }
}

pub fn jordan_decompose(m: &DiscreteSignedMeasure) -> JordanPair {
    let mut positive = BTreeMap::new();
    let mut negative = BTreeMap::new();
    for (label, &w) in &m.atoms {
        if w > 0.0 {
            positive.insert(label.clone(), w);
        } else if w < 0.0 {
            negative.insert(label.clone(), -w);
        }
    }
    JordanPair {
        positive_part: DiscreteSignedMeasure { atoms: positive },
        negative_part: DiscreteSignedMeasure { atoms: negative },
    }
}

/// `‖μ‖ = μ⁺(Ω) + μ⁻(Ω)`.
pub fn total_variation_norm(m: &DiscreteSignedMeasure) -> f64 {
    let parts = jordan_decompose(m);
    parts.positive_part.total_mass() + parts.negative_part.total_mass()
}

/// `ρ(p, q) = ‖p − q‖`.
pub fn tv_distance(p: &DiscreteSignedMeasure, q: &DiscreteSignedMeasure) -> f64 {
    total_variation_norm(&p.difference(q))
}

/// `sup_E |p(E) − q(E)|` over all events of the common finite space.
///
/// The supremum is attained at `E = {p > q}`.
pub fn max_event_distance(p: &DiscreteSignedMeasure, q: &DiscreteSignedMeasure) -> Result<f64, MeasureError> {
    for m in [p, q] {
        ProbabilityMeasure::try_from(m.clone())?;
    }
    let diff = p.difference(q);
    let up: f64 = diff.atoms.values().filter(|&&w| w > 0.0).sum();
    let down: f64 = diff.atoms.values().filter(|&&w| w < 0.0).map(|w| -w).sum();
    Ok(up.max(down))
}
