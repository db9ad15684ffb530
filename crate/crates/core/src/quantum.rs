//! Quantum predictions for the three-photon experiment.
//!
//! Convention: ψ = (|000⟩ + i|111⟩)/√2 and, on each party, the observable
//! σ(φ) = cos φ·σx + sin φ·σy whose eigenvector for outcome `a ∈ {±1}` is
//! (|0⟩ + a·e^{iφ}|1⟩)/√2. With this choice `E[ABC] = sin(φ1 + φ2 + φ3)`.
//!
//! Basis index `k` of a [`StateVector`] has party 1 in the most significant
//! bit, so index 0 is |000⟩ and index 7 is |111⟩. Outcomes are indexed the
//! same way with bit 1 meaning `-1`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::PhaseTriple;
use crate::sign::{parse_sign_string, sign_string, Sign};
use crate::TOLERANCE;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("state is not normalized: squared norm {0}")]
    NotNormalized(f64),
    #[error("amplitude {0} is not finite")]
    NonFinite(usize),
    #[error("invalid outcome label {0:?}")]
    OutcomeLabel(String),
    #[error("outcome probabilities must be nonnegative and sum to 1")]
    InvalidDistribution,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: [Complex64; 8],
}

impl StateVector {
    /// Any finite amplitudes are accepted; normalization is checked where
    /// probabilities are computed.
    pub fn new(amplitudes: [Complex64; 8]) -> Result<StateVector, QuantumError> {
        if let Some(k) = amplitudes.iter().position(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(QuantumError::NonFinite(k));
        }
        Ok(StateVector { amplitudes })
    }

    pub fn amplitude(&self, basis: usize) -> Complex64 {
        self.amplitudes[basis]
    }

    pub fn amplitudes(&self) -> &[Complex64; 8] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= TOLERANCE
    }
}

/// (|000⟩ + i|111⟩)/√2
pub fn ghz_state() -> StateVector {
    let mut amplitudes = [Complex64::new(0.0, 0.0); 8];
    amplitudes[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    amplitudes[7] = Complex64::new(0.0, FRAC_1_SQRT_2);
    StateVector { amplitudes }
}

/// Joint outcome `(a, b, c)` of the three parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome(pub [Sign; 3]);

impl Outcome {
    pub fn all() -> impl Iterator<Item = Outcome> {
        (0..8).map(Outcome::from_index)
    }

    pub fn from_index(k: usize) -> Outcome {
        Outcome([
            Sign::from_bit(k & 0b100 != 0),
            Sign::from_bit(k & 0b010 != 0),
            Sign::from_bit(k & 0b001 != 0),
        ])
    }

    pub fn index(self) -> usize {
        self.0.iter().fold(0, |acc, s| (acc << 1) | usize::from(s.is_minus()))
    }

    /// `a·b·c`
    pub fn product(self) -> Sign {
        Sign::product(self.0)
    }

    pub fn label(self) -> String {
        sign_string(&self.0)
    }

    pub fn parse(label: &str) -> Result<Outcome, QuantumError> {
        match parse_sign_string(label).as_deref() {
            Some(&[a, b, c]) => Ok(Outcome([a, b, c])),
            _ => Err(QuantumError::OutcomeLabel(label.to_string())),
        }
    }
}

/// Joint outcome probabilities at one phase setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct OutcomeDistribution {
    phases: PhaseTriple,
    probabilities: [f64; 8],
}

#[derive(Serialize, Deserialize)]
struct RawDistribution {
    phases: PhaseTriple,
    probabilities: BTreeMap<String, f64>,
}

impl TryFrom<RawDistribution> for OutcomeDistribution {
    type Error = QuantumError;

    fn try_from(raw: RawDistribution) -> Result<Self, QuantumError> {
        let mut probabilities = [0.0; 8];
        for (label, p) in raw.probabilities {
            probabilities[Outcome::parse(&label)?.index()] = p;
        }
        OutcomeDistribution::new(raw.phases, probabilities)
    }
}

impl From<OutcomeDistribution> for RawDistribution {
    fn from(d: OutcomeDistribution) -> Self {
        RawDistribution {
            phases: d.phases,
            probabilities: Outcome::all()
                .map(|o| (o.label(), d.probabilities[o.index()]))
                .collect(),
        }
    }
}

impl OutcomeDistribution {
    pub fn new(phases: PhaseTriple, probabilities: [f64; 8]) -> Result<Self, QuantumError> {
        let total: f64 = probabilities.iter().sum();
        if probabilities.iter().any(|&p| p.is_nan() || p < 0.0) || (total - 1.0).abs() > TOLERANCE {
            return Err(QuantumError::InvalidDistribution);
        }
        Ok(OutcomeDistribution { phases, probabilities })
    }

    pub fn phases(&self) -> PhaseTriple {
        self.phases
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        self.probabilities[outcome.index()]
    }

    pub fn probabilities(&self) -> &[f64; 8] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (Outcome, f64)> + '_ {
        Outcome::all().map(|o| (o, self.probabilities[o.index()]))
    }

    /// `P(a·b·c = sign)`
    pub fn product_probability(&self, sign: Sign) -> f64 {
        self.iter().filter(|(o, _)| o.product() == sign).map(|(_, p)| p).sum()
    }

    /// `E[Π_{k ∈ parties} X_k]`; the empty product has expectation 1.
    pub fn correlator(&self, parties: &[usize]) -> f64 {
        self.iter()
            .map(|(o, p)| p * Sign::product(parties.iter().map(|&k| o.0[k])).as_f64())
            .sum()
    }

    /// Marginal law of the listed parties, keyed by sign strings.
    pub fn marginal(&self, parties: &[usize]) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for (o, p) in self.iter() {
            let key: String = parties.iter().map(|&k| o.0[k].as_char()).collect();
            *out.entry(key).or_insert(0.0) += p;
        }
        out
    }

    pub fn max_abs_difference(&self, other: &OutcomeDistribution) -> f64 {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// ⟨0| + a·e^{-iφ}⟨1|, scaled by 1/√2: the bra of the σ(φ) eigenvector.
fn eigen_bra(phase: f64, outcome: Sign) -> [Complex64; 2] {
    let tilt = Complex64::from_polar(outcome.as_f64(), -phase);
    [Complex64::new(FRAC_1_SQRT_2, 0.0), tilt * FRAC_1_SQRT_2]
}

/// Born-rule probabilities from projecting ψ onto product eigenvectors.
pub fn outcome_distribution(psi: &StateVector, phases: PhaseTriple) -> Result<OutcomeDistribution, QuantumError> {
    if !psi.is_normalized() {
        return Err(QuantumError::NotNormalized(psi.norm_sqr()));
    }
    let angles = phases.phases().map(|p| p.radians());
    let mut probabilities = [0.0; 8];
    for outcome in Outcome::all() {
        let bras: [[Complex64; 2]; 3] = std::array::from_fn(|k| eigen_bra(angles[k], outcome.0[k]));
        let overlap: Complex64 = psi
            .amplitudes
            .iter()
            .enumerate()
            .map(|(basis, amp)| {
                let coeff = bras[0][(basis >> 2) & 1] * bras[1][(basis >> 1) & 1] * bras[2][basis & 1];
                coeff * amp
            })
            .sum();
        probabilities[outcome.index()] = overlap.norm_sqr();
    }
    Ok(OutcomeDistribution { phases, probabilities })
}

/// `E[A·B·C] = Σ abc·p(a,b,c)`.
pub fn product_expectation(psi: &StateVector, phases: PhaseTriple) -> Result<f64, QuantumError> {
    Ok(outcome_distribution(psi, phases)?.correlator(&[0, 1, 2]))
}

/// `p(a,b,c) = (1 + abc·sin(φ1+φ2+φ3))/8`, the GHZ law in closed form.
pub fn closed_form_distribution(phases: PhaseTriple) -> OutcomeDistribution {
    let s = phases.sum().sin();
    let mut probabilities = [0.0; 8];
    for outcome in Outcome::all() {
        probabilities[outcome.index()] = (1.0 + outcome.product().as_f64() * s) / 8.0;
    }
    OutcomeDistribution { phases, probabilities }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    fn triple(a: f64, b: f64, c: f64) -> PhaseTriple {
        PhaseTriple::new(a, b, c).unwrap()
    }

    #[test]
    fn ghz_state_shape() {
        let psi = ghz_state();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-15);
        assert!((psi.amplitude(0) - Complex64::new(1.0 / 2f64.sqrt(), 0.0)).norm() < 1e-15);
        assert_eq!(psi.amplitude(7).im, FRAC_1_SQRT_2);
    }

    #[test]
    fn outcome_index_round_trip() {
        for k in 0..8 {
            assert_eq!(Outcome::from_index(k).index(), k);
        }
        assert_eq!(Outcome::from_index(0).label(), "+++");
        assert_eq!(Outcome::from_index(5).label(), "-+-");
        assert_eq!(Outcome::parse("-+-").unwrap().index(), 5);
        assert!(Outcome::parse("++").is_err());
    }

    #[test]
    fn perfect_correlation_at_half_pi() {
        let d = outcome_distribution(&ghz_state(), triple(FRAC_PI_2, 0.0, 0.0)).unwrap();
        for (o, p) in d.iter() {
            let expected = if o.product() == Sign::Plus { 0.25 } else { 0.0 };
            assert!((p - expected).abs() < 1e-12, "{} {}", o.label(), p);
        }
    }

    #[test]
    fn perfect_anticorrelation_at_three_half_pi() {
        let d = outcome_distribution(&ghz_state(), triple(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2)).unwrap();
        assert!((d.product_probability(Sign::Minus) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_at_zero_phases() {
        let d = outcome_distribution(&ghz_state(), triple(0.0, 0.0, 0.0)).unwrap();
        for (_, p) in d.iter() {
            assert!((p - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn product_expectation_values() {
        let psi = ghz_state();
        assert!((product_expectation(&psi, triple(FRAC_PI_2, 0.0, 0.0)).unwrap() - 1.0).abs() < 1e-12);
        assert!((product_expectation(&psi, triple(PI, FRAC_PI_2, 0.0)).unwrap() + 1.0).abs() < 1e-12);
        assert!((product_expectation(&psi, triple(FRAC_PI_6, 0.0, 0.0)).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let mut amps = *ghz_state().amplitudes();
        amps[0] *= 2.0;
        let psi = StateVector::new(amps).unwrap();
        assert!(matches!(
            outcome_distribution(&psi, triple(0.0, 0.0, 0.0)),
            Err(QuantumError::NotNormalized(_))
        ));
    }

    #[test]
    fn closed_form_on_constraint_surface() {
        let d = closed_form_distribution(triple(FRAC_PI_2, 0.0, 0.0));
        assert_eq!(d.probability(Outcome::parse("+++").unwrap()), 0.25);
        assert!(d.probability(Outcome::parse("-++").unwrap()).abs() < 1e-16);
        assert!((d.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn json_uses_sign_strings() {
        let d = closed_form_distribution(triple(0.0, 0.0, 0.0));
        let v: serde_json::Value = serde_json::to_value(&d).unwrap();
        assert_eq!(v["probabilities"]["+-+"], 0.125);
        assert_eq!(v["phases"].as_array().unwrap().len(), 3);
        let back: OutcomeDistribution = serde_json::from_value(v).unwrap();
        assert_eq!(back, d);
    }
}
