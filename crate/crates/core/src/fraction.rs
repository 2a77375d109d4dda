//! Exact rational thresholds and support counts.
//!
//! Support and confidence comparisons never go through floating point: a
//! count `c` out of `n` transactions meets a threshold `p/q` iff `c·q ≥ p·n`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// Parses `"0.3"`, `"30%"`, `"3/10"` or `"2"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some(percent) = text.strip_suffix('%') {
        let value = parse_rational(percent)?;
        return Some(value / Rational::from_integer(100));
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().ok()?;
        let den: u64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Rational::new(num, den));
    }
    let (whole, frac) = match text.split_once('.') {
        Some((w, f)) => (w, f),
        None => (text, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || frac.len() > 18 {
        return None;
    }
    let whole: u64 = if whole.is_empty() { 0 } else { whole.parse().ok()? };
    let scale = 10u64.pow(frac.len() as u32);
    let frac_value: u64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let numer = whole.checked_mul(scale)?.checked_add(frac_value)?;
    Some(Rational::new(numer, scale))
}

/// Formats a rational as a fixed 4-decimal number.
pub fn decimal(value: &Rational) -> String {
    format!("{:.4}", to_f64(value))
}

pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// `a·d` vs `c·b` without overflow.
fn cross_cmp(a: u64, b: u64, c: u64, d: u64) -> Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

/// A fraction in `(0, 1]`, used for minimum/maximum support and minimum confidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Threshold(Rational);

impl Threshold {
    pub fn new(value: Rational) -> Result<Self> {
        if *value.numer() == 0 || value > Rational::from_integer(1) {
            return Err(Error::InvalidThreshold(format!("{}", value)));
        }
        Ok(Threshold(value))
    }

    /// Shorthand for `numer/denom`; panics when the fraction is outside `(0, 1]`.
    pub fn from_fraction(numer: u64, denom: u64) -> Self {
        Threshold::new(Rational::new(numer, denom)).expect("threshold outside (0, 1]")
    }

    pub fn ratio(&self) -> Rational {
        self.0
    }

    /// Smallest transaction count that meets this threshold out of `total`.
    pub fn min_count(&self, total: u64) -> u64 {
        let num = *self.0.numer() as u128 * total as u128;
        let den = *self.0.denom() as u128;
        num.div_ceil(den) as u64
    }

    /// Scales by an integer factor, saturating at 1.
    pub fn scaled(&self, factor: u64) -> Self {
        let scaled = self.0 * Rational::from_integer(factor);
        Threshold(scaled.min(Rational::from_integer(1)))
    }
}

impl FromStr for Threshold {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s).ok_or_else(|| Error::InvalidThreshold(s.to_string()))?;
        Threshold::new(value).map_err(|_| Error::InvalidThreshold(s.to_string()))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Number of transactions containing an itemset, out of the database size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportFraction {
    pub count: u64,
    pub total: u64,
}

impl SupportFraction {
    pub fn new(count: u64, total: u64) -> Self {
        debug_assert!(count <= total);
        SupportFraction { count, total }
    }

    /// Inclusive comparison: `count/total ≥ threshold`.
    pub fn meets(&self, threshold: Threshold) -> bool {
        let t = threshold.ratio();
        cross_cmp(self.count, self.total, *t.numer(), *t.denom()) != Ordering::Less
    }

    /// `count/total ≤ threshold`.
    pub fn at_most(&self, threshold: Threshold) -> bool {
        let t = threshold.ratio();
        cross_cmp(self.count, self.total, *t.numer(), *t.denom()) != Ordering::Greater
    }

    /// Reduced rational value; `0/1` for an empty database.
    pub fn ratio(&self) -> Rational {
        if self.total == 0 {
            Rational::from_integer(0)
        } else {
            Rational::new(self.count, self.total)
        }
    }
}

impl PartialOrd for SupportFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(cross_cmp(self.count, self.total, other.count, other.total))
    }
}

impl fmt::Display for SupportFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.count, self.total)
    }
}
