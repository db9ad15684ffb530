//! Phase settings in radians, reduced into `[0, 2π)`.
//!
//! Phases double as keys for (party, setting) pairs, so equality and
//! ordering are exact on the reduced value. Symbolic tokens such as `pi/2`
//! parse to the correctly rounded multiple of π, which keeps settings read
//! from the command line on the constraint surfaces.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("phase must be finite, got {0}")]
    NotFinite(f64),
    #[error("cannot parse phase {0:?}")]
    Parse(String),
    #[error("expected {expected} comma-separated phases, got {got}")]
    Arity { expected: usize, got: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);
    pub const HALF_PI: Phase = Phase(std::f64::consts::FRAC_PI_2);

    pub fn new(radians: f64) -> Result<Phase, PhaseError> {
        if !radians.is_finite() {
            return Err(PhaseError::NotFinite(radians));
        }
        let mut r = radians.rem_euclid(TAU);
        // rem_euclid can round up to TAU for tiny negative inputs
        if r >= TAU {
            r = 0.0;
        }
        // fold -0.0 into +0.0 so bit-level keys agree
        Ok(Phase(r + 0.0))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Shortest arc between two phases, in `[0, π]`.
    pub fn circular_distance(self, other: Phase) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(TAU - d)
    }
}

impl PartialEq for Phase {
    fn eq(&self, other: &Phase) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}

impl Eq for Phase {}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Phase) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Phase {
    fn cmp(&self, other: &Phase) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Hash for Phase {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.to_bits().hash(state);
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Phase {
    type Err = PhaseError;

    /// Accepts decimals (`1.5707963`) and multiples of π written as
    /// `[sign][k]pi[/d]`, e.g. `pi/2`, `3pi/2`, `-pi`, `2π/3`.
    fn from_str(s: &str) -> Result<Phase, PhaseError> {
        let token = s.trim().to_ascii_lowercase().replace('π', "pi");
        if token.is_empty() {
            return Err(PhaseError::Parse(s.to_string()));
        }
        match token.find("pi") {
            None => token
                .parse::<f64>()
                .map_err(|_| PhaseError::Parse(s.to_string()))
                .and_then(Phase::new),
            Some(at) => {
                let bad = || PhaseError::Parse(s.to_string());
                let (head, tail) = token.split_at(at);
                let tail = tail["pi".len()..].trim();
                let head = head.trim().trim_end_matches('*').trim();
                let numerator = match head {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    h => h.parse::<f64>().map_err(|_| bad())?,
                };
                let denominator = if tail.is_empty() {
                    1.0
                } else {
                    let d = tail.strip_prefix('/').ok_or_else(bad)?;
                    d.trim().parse::<f64>().map_err(|_| bad())?
                };
                if denominator == 0.0 {
                    return Err(bad());
                }
                Phase::new(numerator * PI / denominator)
            }
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Phase {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PhaseVisitor;

        impl de::Visitor<'_> for PhaseVisitor {
            type Value = Phase;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a phase in radians or a token like \"pi/2\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Phase, E> {
                Phase::new(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Phase, E> {
                self.visit_f64(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Phase, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Phase, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(PhaseVisitor)
    }
}

/// Parse a comma-separated list of phases.
pub fn parse_phase_list(s: &str) -> Result<Vec<Phase>, PhaseError> {
    s.split(',').map(str::parse).collect()
}

/// The three phase shifts of one GHZ setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PhaseTriple(pub [Phase; 3]);

impl PhaseTriple {
    pub fn new(phi1: f64, phi2: f64, phi3: f64) -> Result<PhaseTriple, PhaseError> {
        Ok(PhaseTriple([Phase::new(phi1)?, Phase::new(phi2)?, Phase::new(phi3)?]))
    }

    pub fn phases(&self) -> &[Phase; 3] {
        &self.0
    }

    /// Sum of the three (reduced) phases; not itself reduced.
    pub fn sum(&self) -> f64 {
        self.0.iter().map(|p| p.radians()).sum()
    }

    pub fn from_slice(phases: &[Phase]) -> Result<PhaseTriple, PhaseError> {
        match phases {
            [a, b, c] => Ok(PhaseTriple([*a, *b, *c])),
            _ => Err(PhaseError::Arity {
                expected: 3,
                got: phases.len(),
            }),
        }
    }
}

impl FromStr for PhaseTriple {
    type Err = PhaseError;

    fn from_str(s: &str) -> Result<PhaseTriple, PhaseError> {
        PhaseTriple::from_slice(&parse_phase_list(s)?)
    }
}
