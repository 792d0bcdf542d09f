use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

/// Shortest-path distance with a distinguished infinity for disconnected pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Dist(u64);

impl Dist {
    pub const ZERO: Dist = Dist(0);
    pub const INFINITY: Dist = Dist(u64::MAX);

    pub const fn new(value: u64) -> Self {
        Dist(value)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    pub const fn is_finite(self) -> bool {
        self.0 != u64::MAX
    }

    /// Finite value or `None`.
    pub fn finite(self) -> Option<u64> {
        self.is_finite().then_some(self.0)
    }

    pub fn as_f64(self) -> f64 {
        if self.is_finite() {
            self.0 as f64
        } else {
            f64::INFINITY
        }
    }
}

impl Add for Dist {
    type Output = Dist;

    fn add(self, rhs: Dist) -> Dist {
        if !self.is_finite() || !rhs.is_finite() {
            return Dist::INFINITY;
        }
        match self.0.checked_add(rhs.0) {
            Some(v) if v != u64::MAX => Dist(v),
            _ => Dist::INFINITY,
        }
    }
}

impl Add<u64> for Dist {
    type Output = Dist;

    fn add(self, rhs: u64) -> Dist {
        self + Dist(rhs)
    }
}

impl From<u64> for Dist {
    fn from(v: u64) -> Self {
        Dist(v)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}
