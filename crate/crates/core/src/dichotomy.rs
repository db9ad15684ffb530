//! Singular/equivalent classification of Gaussian perturbations on sequence
//! spaces.
//!
//! Every sequence is a power law `t_j = c·j^(-p)` (with optional finite
//! overrides), so convergence of the criterion series is decided exactly by
//! comparing exponents: `Σ c·j^(-p)` diverges iff `c > 0` and `p ≤ 1`.
//! Overrides change finitely many terms and never the verdict; they are only
//! counted in the diagnostics.
//!
//! Two independent routes are provided:
//!
//! * the Feldman–Hájek series `Σ (δa_j)²/b_j` (mean shift) and
//!   `Σ (δb_j)²/b_j²` (diagonal variance shift);
//! * the Kakutani product test `Σ −log H_j`, where `H_j` is the Hellinger
//!   affinity of the j-th pair of one-dimensional Gaussian components.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DichotomyError {
    #[error("power-law coefficient must be finite and >= 0, got {0}")]
    BadCoefficient(f64),
    #[error("power-law exponent must be finite, got {0}")]
    BadExponent(f64),
    #[error("override for index {index} is invalid ({value})")]
    BadOverride { index: u64, value: f64 },
    #[error("base variances must be strictly positive")]
    NonPositiveVariance,
    #[error("base variances must be summable (exponent > 1), got exponent {0}")]
    NotNuclear(f64),
    #[error("mean and variance shifts are both nonzero; classify them separately")]
    BothShifts,
    #[error("{0} shift expected, but the other shift is nonzero")]
    WrongShift(&'static str),
    #[error("variance shift must be nonnegative on every index")]
    NegativeVarianceShift,
    #[error("variance must be strictly positive, got {0}")]
    BadVariance(f64),
    #[error("criterion coefficient underflowed to zero for a nonzero perturbation")]
    CoefficientUnderflow,
}

/// `t_j = c·j^(-p)` for `j ≥ 1`, except at the overridden indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPowerLaw")]
pub struct PowerLawSeq {
    pub c: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub overrides: BTreeMap<u64, f64>,
}

#[derive(Deserialize)]
struct RawPowerLaw {
    c: f64,
    #[serde(default)]
    p: f64,
    #[serde(default)]
    overrides: BTreeMap<u64, f64>,
}

impl TryFrom<RawPowerLaw> for PowerLawSeq {
    type Error = DichotomyError;

    fn try_from(raw: RawPowerLaw) -> Result<Self, DichotomyError> {
        PowerLawSeq::new(raw.c, raw.p)?.with_overrides(raw.overrides)
    }
}

impl PowerLawSeq {
    pub fn new(c: f64, p: f64) -> Result<PowerLawSeq, DichotomyError> {
        if !(c.is_finite() && c >= 0.0) {
            return Err(DichotomyError::BadCoefficient(c));
        }
        if !p.is_finite() {
            return Err(DichotomyError::BadExponent(p));
        }
        Ok(PowerLawSeq {
            c,
            p,
            overrides: BTreeMap::new(),
        })
    }

    pub fn zero() -> PowerLawSeq {
        PowerLawSeq {
            c: 0.0,
            p: 0.0,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_overrides(mut self, overrides: BTreeMap<u64, f64>) -> Result<PowerLawSeq, DichotomyError> {
        for (&index, &value) in &overrides {
            if index == 0 || !value.is_finite() {
                return Err(DichotomyError::BadOverride { index, value });
            }
        }
        self.overrides = overrides;
        Ok(self)
    }

    /// The `j`-th term, `j ≥ 1`.
    pub fn term(&self, j: u64) -> f64 {
        match self.overrides.get(&j) {
            Some(&v) => v,
            None if self.c == 0.0 => 0.0,
            None => self.c * (j as f64).powf(-self.p),
        }
    }

    /// True when every term is zero.
    pub fn is_zero(&self) -> bool {
        self.c == 0.0 && self.overrides.values().all(|&v| v == 0.0)
    }

    pub fn has_negative_term(&self) -> bool {
        self.overrides.values().any(|&v| v < 0.0)
    }
}

/// Exact p-series test: true iff `c > 0` and `p ≤ 1`.
pub fn series_diverges(s: &PowerLawSeq) -> bool {
    s.c > 0.0 && s.p <= 1.0
}

/// A pair of diagonal Gaussian measures: `N(a, B)` versus `N(a + δa, B + δB)`
/// in the eigenbasis of `B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianPerturbation {
    pub b: PowerLawSeq,
    #[serde(default = "PowerLawSeq::zero")]
    pub da: PowerLawSeq,
    #[serde(default = "PowerLawSeq::zero")]
    pub db: PowerLawSeq,
}

impl GaussianPerturbation {
    pub fn mean_shift(b: PowerLawSeq, da: PowerLawSeq) -> GaussianPerturbation {
        GaussianPerturbation {
            b,
            da,
            db: PowerLawSeq::zero(),
        }
    }

    pub fn variance_shift(b: PowerLawSeq, db: PowerLawSeq) -> GaussianPerturbation {
        GaussianPerturbation {
            b,
            da: PowerLawSeq::zero(),
            db,
        }
    }

    /// Checks positivity and summability of the base variances and that at
    /// most one of the two shifts is present.
    pub fn validate(&self) -> Result<(), DichotomyError> {
        if self.b.c <= 0.0 || self.b.overrides.values().any(|&v| v <= 0.0) {
            return Err(DichotomyError::NonPositiveVariance);
        }
        if self.b.p <= 1.0 {
            return Err(DichotomyError::NotNuclear(self.b.p));
        }
        if !self.da.is_zero() && !self.db.is_zero() {
            return Err(DichotomyError::BothShifts);
        }
        Ok(())
    }

    fn overrides_ignored(&self) -> usize {
        self.b.overrides.len() + self.da.overrides.len() + self.db.overrides.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Singular,
    Equivalent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    MeanShift,
    VarianceShift,
    Kakutani,
}

/// How the decisive power law relates to the actual series terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateKind {
    /// Terms equal the power law beyond the overrides.
    Exact,
    /// Ratio of terms to the power law tends to 1.
    Asymptotic,
    /// Terms are bounded below by the power law.
    Minorant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub criterion: Criterion,
    pub decisive_coefficient: f64,
    pub decisive_exponent: f64,
    pub rate_kind: RateKind,
    pub overrides_ignored: usize,
}

impl Classification {
    fn from_rate(rate: PowerLawSeq, criterion: Criterion, rate_kind: RateKind, g: &GaussianPerturbation) -> Self {
        let verdict = if series_diverges(&rate) {
            Verdict::Singular
        } else {
            Verdict::Equivalent
        };
        Classification {
            verdict,
            criterion,
            decisive_coefficient: rate.c,
            decisive_exponent: rate.p,
            rate_kind,
            overrides_ignored: g.overrides_ignored(),
        }
    }
}

fn rate(c: f64, p: f64, nonzero_input: bool) -> Result<PowerLawSeq, DichotomyError> {
    if nonzero_input && c == 0.0 {
        return Err(DichotomyError::CoefficientUnderflow);
    }
    PowerLawSeq::new(c, p)
}

/// Feldman–Hájek mean-shift test: singular iff `Σ (δa_j)²/b_j = ∞`.
pub fn classify_mean_shift(g: &GaussianPerturbation) -> Result<Classification, DichotomyError> {
    g.validate()?;
    if !g.db.is_zero() {
        return Err(DichotomyError::WrongShift("mean"));
    }
    // (c_a j^-pa)^2 / (c_b j^-pb)
    let coefficient = g.da.c * (g.da.c / g.b.c);
    let criterion = rate(coefficient, 2.0 * g.da.p - g.b.p, g.da.c > 0.0)?;
    Ok(Classification::from_rate(
        criterion,
        Criterion::MeanShift,
        RateKind::Exact,
        g,
    ))
}

/// Feldman–Hájek diagonal variance-shift test: singular iff
/// `Σ (δb_j)²/b_j² = ∞`.
pub fn classify_variance_shift(g: &GaussianPerturbation) -> Result<Classification, DichotomyError> {
    g.validate()?;
    if !g.da.is_zero() {
        return Err(DichotomyError::WrongShift("variance"));
    }
    if g.db.has_negative_term() {
        return Err(DichotomyError::NegativeVarianceShift);
    }
    let ratio = g.db.c / g.b.c;
    let criterion = rate(ratio * ratio, 2.0 * (g.db.p - g.b.p), g.db.c > 0.0)?;
    Ok(Classification::from_rate(
        criterion,
        Criterion::VarianceShift,
        RateKind::Exact,
        g,
    ))
}

/// `∫ √(p·q)` for `N(mean1, var1)` and `N(mean2, var2)`.
pub fn hellinger_affinity_1d(mean1: f64, var1: f64, mean2: f64, var2: f64) -> Result<f64, DichotomyError> {
    for v in [var1, var2] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(DichotomyError::BadVariance(v));
        }
    }
    let (s1, s2) = (var1.sqrt(), var2.sqrt());
    let total = var1 + var2;
    let shift = mean1 - mean2;
    // 2σ1σ2/(σ1² + σ2²) written as 1 − (σ1 − σ2)²/(σ1² + σ2²) so equal
    // variances give exactly 1
    let spread = (s1 - s2) * (s1 - s2) / total;
    Ok((1.0 - spread).sqrt() * (-shift * shift / (4.0 * total)).exp())
}

/// Kakutani product test on the independent coordinates `ξ_j = (e_j, ξ)`:
/// singular iff `Σ_j −log H_j = ∞`, where `H_j` is the Hellinger affinity of
/// the j-th pair of components.
///
/// The asymptotics of `−log H_j` are derived from the power-law inputs:
///
/// * mean shift: `−log H_j = (δa_j)² / (8 b_j)` exactly;
/// * variance shift with `r_j = δb_j / b_j → 0`: `−log H_j ~ r_j² / 16`;
/// * variance shift with `r_j` constant: `−log H_j` is the constant
///   `−log H(0, 1; 0, 1 + r)`;
/// * variance shift with `r_j → ∞`: `−log H_j` is increasing in `j` and
///   bounded below by its first term.
pub fn kakutani_classify(g: &GaussianPerturbation) -> Result<Classification, DichotomyError> {
    g.validate()?;
    if !g.da.is_zero() {
        let coefficient = g.da.c * (g.da.c / g.b.c) / 8.0;
        let criterion = rate(coefficient, 2.0 * g.da.p - g.b.p, g.da.c > 0.0)?;
        return Ok(Classification::from_rate(
            criterion,
            Criterion::Kakutani,
            RateKind::Exact,
            g,
        ));
    }
    if g.db.has_negative_term() {
        return Err(DichotomyError::NegativeVarianceShift);
    }
    if g.db.c == 0.0 {
        return Ok(Classification::from_rate(
            PowerLawSeq::zero(),
            Criterion::Kakutani,
            RateKind::Exact,
            g,
        ));
    }
    let ratio = g.db.c / g.b.c;
    let decay = g.db.p - g.b.p;
    if decay > 0.0 {
        let criterion = rate(ratio * ratio / 16.0, 2.0 * decay, true)?;
        return Ok(Classification::from_rate(
            criterion,
            Criterion::Kakutani,
            RateKind::Asymptotic,
            g,
        ));
    }
    let first = -hellinger_affinity_1d(0.0, 1.0, 0.0, 1.0 + ratio)?.ln();
    let kind = if decay == 0.0 {
        RateKind::Exact
    } else {
        RateKind::Minorant
    };
    let criterion = rate(first, 0.0, true)?;
    Ok(Classification::from_rate(criterion, Criterion::Kakutani, kind, g))
}

/// The Feldman–Hájek route matching the shift that is present.
pub fn classify(g: &GaussianPerturbation) -> Result<Classification, DichotomyError> {
    g.validate()?;
    if g.db.is_zero() {
        classify_mean_shift(g)
    } else {
        classify_variance_shift(g)
    }
}
