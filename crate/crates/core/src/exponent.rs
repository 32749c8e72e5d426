//! Summability exponents `p ∈ [1, ∞]` and their JSON encoding.
//!
//! `∞` is carried as `f64::INFINITY` in memory. In JSON it is written as the
//! string `"inf"` because JSON numbers cannot represent it.

use crate::error::{Error, Result};

/// Rejects exponents below 1 (and NaN).
pub fn check_exponent(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Domain(format!("exponent must lie in [1, inf], got {p}")));
    }
    Ok(())
}

/// Hölder conjugate: `1/p + 1/q = 1`, with `1 ↔ ∞`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// Parses `"inf"`, `"infinity"`, `"∞"` or a decimal number.
pub fn parse_exponent(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let p = match t.as_str() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        _ => t
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not an exponent: {s:?}")))?,
    };
    check_exponent(p)?;
    Ok(p)
}

/// Serde adapter for `f64` fields that may be `+∞` (written as `"inf"`).
pub mod serde_inf {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                _ => Err(de::Error::custom(format!("expected number or \"inf\", got {s:?}"))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates() {
        assert_eq!(conjugate(1.0), f64::INFINITY);
        assert_eq!(conjugate(f64::INFINITY), 1.0);
        assert_eq!(conjugate(2.0), 2.0);
        assert!((conjugate(3.0) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!(parse_exponent("inf").unwrap(), f64::INFINITY);
        assert_eq!(parse_exponent("2").unwrap(), 2.0);
        assert!(matches!(parse_exponent("0.5"), Err(Error::Domain(_))));
        assert!(matches!(parse_exponent("nan"), Err(Error::Domain(_))));
        assert!(parse_exponent("two").is_err());
    }
}
