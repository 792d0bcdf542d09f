//! Ball radii that may be irrational (`n^{i/k}`, `(3p)^{i/s}`) compared exactly
//! against integer distances.
//!
//! Since every distance is an integer, `d <= rho` holds iff `d <= floor(rho)`.
//! For radii of the form `base^{num/den}` the floor is the largest `x` with
//! `x^den <= base^num`, computed with arbitrary-precision integer roots so that
//! exact powers (`16^{1/2} = 4`) are never misrounded.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::dist::Dist;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Radius {
    value: f64,
    floor: u64,
}

impl Radius {
    pub fn integer(r: u64) -> Self {
        Radius { value: r as f64, floor: r }
    }

    pub fn from_f64(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidParameter(format!("radius must be a non-negative number, got {x}")));
        }
        Ok(Radius { value: x, floor: x.floor() as u64 })
    }

    /// `base^{num/den}`.
    pub fn root_power(base: u64, num: u32, den: u32) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("root degree must be positive".into()));
        }
        let floor = floor_root_power(base, num, den);
        let value = (base as f64).powf(num as f64 / den as f64);
        // keep the float consistent with the exact floor
        let value = value.max(floor as f64);
        Ok(Radius { value, floor })
    }

    pub fn value(self) -> f64 {
        self.value
    }

    /// Largest integer distance inside the radius.
    pub fn floor(self) -> u64 {
        self.floor
    }

    pub fn admits(self, d: Dist) -> bool {
        d.finite().is_some_and(|v| v <= self.floor)
    }
}

/// Largest `x` with `x^den <= base^num`.
pub fn floor_root_power(base: u64, num: u32, den: u32) -> u64 {
    assert!(den > 0);
    let power = BigUint::from(base).pow(num);
    let root = power.nth_root(den);
    u64::try_from(root).unwrap_or(u64::MAX - 1).min(u64::MAX - 1)
}

/// Smallest `q >= 0` with `n^q >= delta^k`, i.e. `ceil(k * log_n delta)`.
/// Returns 0 when `delta <= 1`. For `n <= 1` only `delta <= 1` is meaningful.
pub fn ceil_k_log(n: u64, delta: u64, k: u32) -> u32 {
    if delta <= 1 {
        return 0;
    }
    assert!(n >= 2, "log base must be at least 2");
    let target = BigUint::from(delta).pow(k);
    let base = BigUint::from(n);
    let mut acc = BigUint::from(1u32);
    let mut q = 0;
    while acc < target {
        acc *= &base;
        q += 1;
    }
    q
}
