//! Half-open intervals `[lo, hi)` over the extended reals.
//!
//! Every equivalence class of prior log-odds is one such interval, so this
//! is the bookkeeping type used by the compiler caches and the sensitivity
//! reports. Endpoints are compared exactly; there is no tolerance.

use std::fmt;

use thiserror::Error;

use crate::scalar::{format_significant, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("interval endpoint is NaN")]
    NanEndpoint,
    #[error("interval lower endpoint {lo} exceeds upper endpoint {hi}")]
    Inverted { lo: f64, hi: f64 },
    #[error("membership query with NaN")]
    NanQuery,
}

/// A lower-closed, upper-open interval. `lo` may be `-inf`, `hi` may be
/// `+inf`. The empty interval is stored canonically as `[0, 0)`.
///
/// Membership follows the extended-real convention: `-inf` belongs to any
/// interval whose lower end is `-inf`, and `+inf` belongs to any non-empty
/// interval whose upper end is `+inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NanEndpoint);
        }
        if lo > hi {
            return Err(IntervalError::Inverted {
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        Ok(Self::clamped(lo, hi))
    }

    /// Builds `[lo, hi)`, collapsing to the canonical empty interval when
    /// `lo >= hi`.
    fn clamped(lo: T, hi: T) -> Self {
        if lo < hi {
            Self { lo, hi }
        } else {
            Self::empty()
        }
    }

    /// `(-inf, inf)`.
    pub fn full() -> Self {
        Self {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn empty() -> Self {
        Self {
            lo: T::zero(),
            hi: T::zero(),
        }
    }

    /// `[lo, inf)`.
    pub fn at_least(lo: T) -> Self {
        Self::clamped(lo, T::infinity())
    }

    /// `(-inf, hi)`.
    pub fn below(hi: T) -> Self {
        Self::clamped(T::neg_infinity(), hi)
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, x: T) -> Result<bool, IntervalError> {
        if x.is_nan() {
            return Err(IntervalError::NanQuery);
        }
        Ok(self.covers(x))
    }

    /// Membership without the NaN check; NaN is never covered.
    #[inline]
    pub(crate) fn covers(&self, x: T) -> bool {
        if self.is_empty() {
            return false;
        }
        self.lo <= x && (x < self.hi || (x == T::infinity() && self.hi == T::infinity()))
    }

    /// `{x : x - delta ∈ self}`.
    ///
    /// For finite `delta` this shifts both endpoints. An infinite `delta`
    /// maps every finite point to the same infinite point, so the result is
    /// either the full line or empty.
    pub fn offset(&self, delta: T) -> Self {
        if self.is_empty() {
            return *self;
        }
        if delta.is_infinite() {
            let image = if delta > T::zero() {
                T::neg_infinity()
            } else {
                T::infinity()
            };
            return if self.covers(image) {
                Self::full()
            } else {
                Self::empty()
            };
        }
        Self::clamped(self.lo + delta, self.hi + delta)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::empty();
        }
        Self::clamped(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    /// True when the two intervals share at least one point.
    pub fn overlaps(&self, other: &Self) -> bool {
        !self.intersect(other).is_empty()
    }

    pub fn to_f64(&self) -> Interval<f64> {
        Interval {
            lo: self.lo.to_f64_lossy(),
            hi: self.hi.to_f64_lossy(),
        }
    }

    /// Distance from `x` to each end: `(x - lo, hi - x)`.
    pub fn slack(&self, x: T) -> (T, T) {
        (x - self.lo, self.hi - x)
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("empty");
        }
        write!(
            f,
            "[{}, {})",
            format_significant(self.lo.to_f64_lossy(), 6),
            format_significant(self.hi.to_f64_lossy(), 6)
        )
    }
}
