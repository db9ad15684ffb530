use std::fmt;
use std::ops::{Mul, Neg};

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A dichotomic value, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }

    /// `Minus` when `bit` is set.
    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.as_i8())
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    /// Product of a sequence of signs; the empty product is `Plus`.
    pub fn product<I: IntoIterator<Item = Sign>>(signs: I) -> Sign {
        signs.into_iter().fold(Sign::Plus, |acc, s| acc * s)
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit(self.is_minus() != rhs.is_minus())
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        Sign::from_bit(!self.is_minus())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Render a sequence of signs as a string such as `"+-+"`.
pub fn sign_string<'a, I: IntoIterator<Item = &'a Sign>>(signs: I) -> String {
    signs.into_iter().map(|s| s.as_char()).collect()
}

/// Parse a string such as `"+-+"` into signs.
pub fn parse_sign_string(s: &str) -> Option<Vec<Sign>> {
    s.chars().map(Sign::from_char).collect()
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i8(self.as_i8())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct SignVisitor;

        impl de::Visitor<'_> for SignVisitor {
            type Value = Sign;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("+1, -1, \"+\" or \"-\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Sign, E> {
                Sign::from_i64(v).ok_or_else(|| E::custom(format!("sign must be +1 or -1, got {v}")))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Sign, E> {
                self.visit_i64(i64::try_from(v).unwrap_or(i64::MAX))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Sign, E> {
                if v == 1.0 {
                    Ok(Sign::Plus)
                } else if v == -1.0 {
                    Ok(Sign::Minus)
                } else {
                    Err(E::custom(format!("sign must be +1 or -1, got {v}")))
                }
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Sign, E> {
                match v.trim() {
                    "+" | "+1" | "1" => Ok(Sign::Plus),
                    "-" | "-1" => Ok(Sign::Minus),
                    other => Err(E::custom(format!("invalid sign {other:?}"))),
                }
            }
        }

        deserializer.deserialize_any(SignVisitor)
    }
}
