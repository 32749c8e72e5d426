use serde::{Deserialize, Serialize};

use crate::exponent::serde_inf;

/// Closed interval `[lower, upper]` bracketing a quantity; `upper` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "serde_inf")]
    pub lower: f64,
    #[serde(with = "serde_inf")]
    pub upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Self {
        debug_assert!(lower <= upper, "inverted interval [{lower}, {upper}]");
        Interval { lower, upper }
    }

    pub fn point(v: f64) -> Self {
        Interval { lower: v, upper: v }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}
