//! Closed real intervals [a, b] with a < b.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::non_finite("interval endpoint"));
        }
        if !(a < b) {
            return Err(Error::invalid(format!("interval requires a < b, got [{a}, {b}]")));
        }
        Ok(Interval { a, b })
    }

    /// Smallest sensible interval containing both points; degenerate input
    /// is padded to half a unit on each side.
    pub fn containing(lo: f64, hi: f64) -> Self {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        if hi - lo > 0.0 {
            Interval { a: lo, b: hi }
        } else {
            Interval {
                a: lo - 0.5,
                b: hi + 0.5,
            }
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// Hull of this interval and another.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            a: self.a.min(other.a),
            b: self.b.max(other.b),
        }
    }

    /// Hull with a point.
    pub fn expand_to(&self, x: f64) -> Interval {
        Interval {
            a: self.a.min(x),
            b: self.b.max(x),
        }
    }
}
