//! Phase arithmetic on the unit circle.

use std::f64::consts::{PI, TAU};

use crate::Complex64;

/// Reduces an angle to the half-open interval `[-π, π)`.
pub fn wrap(angle: f64) -> f64 {
    let w = angle - TAU * ((angle + PI) / TAU).floor();
    if w >= PI {
        w - TAU
    } else if w < -PI {
        w + TAU
    } else {
        w
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_positive(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Shortest distance between two angles on the circle, in `[0, π]`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    wrap(a - b).abs()
}

/// Phase of a complex number in `[-π, π)`.
pub fn arg(z: Complex64) -> f64 {
    wrap(z.im.atan2(z.re))
}
