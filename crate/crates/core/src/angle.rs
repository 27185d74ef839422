//! Angle helpers. Coin angles live in `[0, 2π)`.

use std::f64::consts::{PI, TAU};

/// Converts a value given in units of π to radians.
pub fn from_pi(value: f64) -> f64 {
    value * PI
}

/// Converts radians to units of π.
pub fn to_pi(radians: f64) -> f64 {
    radians / PI
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

pub fn degrees(deg: f64) -> f64 {
    deg.to_radians()
}
