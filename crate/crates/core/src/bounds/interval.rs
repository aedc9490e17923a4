use crate::error::{Error, Result};

/// Probability interval `[lo, hi] ⊆ [0, 1]`. `raw_hi` keeps the unclamped
/// upper value (union-type sums can exceed 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInterval {
    pub lo: f64,
    pub hi: f64,
    pub raw_hi: f64,
}

impl BoundInterval {
    /// Clamps both ends to `[0, 1]`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(Error::Invalid("bound interval with NaN end".into()));
        }
        if lo > hi * (1.0 + 1e-12) + 1e-300 {
            return Err(Error::Invalid(format!("bound interval with lo {lo:e} > hi {hi:e}")));
        }
        let l = lo.clamp(0.0, 1.0);
        let h = hi.clamp(0.0, 1.0).max(l);
        Ok(Self { lo: l, hi: h, raw_hi: hi })
    }

    pub fn exact(p: f64) -> Result<Self> {
        Self::new(p, p)
    }

    /// The uninformative interval `[0, 1]`.
    pub fn vacuous() -> Self {
        Self { lo: 0.0, hi: 1.0, raw_hi: f64::INFINITY }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    /// True if `other ⊆ self` up to a relative slack.
    pub fn contains_interval(&self, other: &BoundInterval, rel: f64) -> bool {
        self.lo <= other.lo * (1.0 + rel) && other.hi <= self.hi * (1.0 + rel)
    }
}
