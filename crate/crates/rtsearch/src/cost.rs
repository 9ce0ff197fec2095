//! Exact cost arithmetic on the ε-grid.
//!
//! Edge weights and heuristic values are integer multiples of the problem's
//! quantum ε, so all cost arithmetic is done on integer unit counts. The
//! floating-point ε is only used when formatting values for humans.

use std::fmt;
use std::ops::Add;

/// A cost: a non-negative integer number of ε-units, or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(u64),
    Infinity,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Cost::Infinity)
    }

    /// Unit count of a finite cost. Panics on infinity.
    pub fn units(self) -> u64 {
        match self {
            Cost::Finite(u) => u,
            Cost::Infinity => panic!("infinite cost has no unit count"),
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(u) => Some(u),
            Cost::Infinity => None,
        }
    }

    /// Value in real cost units given the quantum ε.
    pub fn to_real(self, epsilon: f64) -> f64 {
        match self {
            Cost::Finite(u) => u as f64 * epsilon,
            Cost::Infinity => f64::INFINITY,
        }
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinity,
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Infinity) => std::cmp::Ordering::Less,
            (Cost::Infinity, Cost::Finite(_)) => std::cmp::Ordering::Greater,
            (Cost::Infinity, Cost::Infinity) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(u) => write!(f, "{u}"),
            Cost::Infinity => write!(f, "inf"),
        }
    }
}

/// Format `units` of size `epsilon` as a short decimal string.
///
/// 7 units at ε = 0.1 prints as "0.7", not "0.7000000000000001".
pub fn format_units(units: u64, epsilon: f64) -> String {
    let v = units as f64 * epsilon;
    // Round to 9 decimal places, then trim trailing zeros.
    let s = format!("{v:.9}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Format a possibly-infinite cost in real units.
pub fn format_cost(cost: Cost, epsilon: f64) -> String {
    match cost {
        Cost::Finite(u) => format_units(u, epsilon),
        Cost::Infinity => "inf".to_string(),
    }
}
