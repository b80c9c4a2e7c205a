//! Canonical complex values.
//!
//! Every weight stored in a decision diagram passes through a [`ComplexTable`],
//! which snaps values that lie within the tolerance (componentwise) of an
//! earlier entry onto that entry. Canonical values can then be compared and
//! hashed bitwise, which is what keeps the unique table exact.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Componentwise absolute comparison threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance(f64);

impl Tolerance {
    pub fn new(tol: f64) -> Result<Self> {
        if tol > 0.0 && tol < 1e-3 {
            Ok(Self(tol))
        } else {
            Err(Error::InvalidTolerance(tol))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self(DEFAULT_TOLERANCE)
    }
}

/// A complex amplitude. Values handed out by a [`ComplexTable`] are
/// canonical, so equality and hashing are bitwise.
#[derive(Clone, Copy, Debug)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl ComplexValue {
    pub const ZERO: Self = Self { re: 0.0, im: 0.0 };
    pub const ONE: Self = Self { re: 1.0, im: 0.0 };

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn is_one(self) -> bool {
        self.re == 1.0 && self.im == 0.0
    }

    pub fn sqr_mag(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn mag(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl PartialEq for ComplexValue {
    fn eq(&self, other: &Self) -> bool {
        self.re.to_bits() == other.re.to_bits() && self.im.to_bits() == other.im.to_bits()
    }
}

impl Eq for ComplexValue {}

impl Hash for ComplexValue {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.re.to_bits().hash(state);
        self.im.to_bits().hash(state);
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", fmt_real(self.re))
        } else if self.re == 0.0 {
            write!(f, "{}i", fmt_real(self.im))
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", fmt_real(self.re), fmt_real(-self.im))
        } else {
            write!(f, "{}+{}i", fmt_real(self.re), fmt_real(self.im))
        }
    }
}

fn fmt_real(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".to_string() } else { s.to_string() }
}

/// Value table: one representative per tolerance ball, first come first served.
#[derive(Debug)]
pub struct ComplexTable {
    tol: f64,
    buckets: HashMap<(i64, i64), Vec<(u64, ComplexValue)>>,
    inserted: u64,
}

impl Default for ComplexTable {
    fn default() -> Self {
        Self::new(Tolerance::default())
    }
}

impl ComplexTable {
    pub fn new(tol: Tolerance) -> Self {
        let mut table = Self {
            tol: tol.value(),
            buckets: HashMap::new(),
            inserted: 0,
        };
        table.insert(ComplexValue::ZERO);
        table.insert(ComplexValue::ONE);
        table
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Number of distinct stored values, including the seeded zero and one.
    pub fn len(&self) -> usize {
        self.inserted as usize
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    fn bucket(&self, re: f64, im: f64) -> (i64, i64) {
        ((re / self.tol).floor() as i64, (im / self.tol).floor() as i64)
    }

    fn insert(&mut self, v: ComplexValue) -> ComplexValue {
        assert!(
            v.re.is_finite() && v.im.is_finite(),
            "non-finite value entered the complex table"
        );
        let key = self.bucket(v.re, v.im);
        self.buckets
            .entry(key)
            .or_default()
            .push((self.inserted, v));
        self.inserted += 1;
        v
    }

    fn find(&self, re: f64, im: f64) -> Option<ComplexValue> {
        let (br, bi) = self.bucket(re, im);
        let mut best: Option<(u64, ComplexValue)> = None;
        for dr in -1..=1 {
            for di in -1..=1 {
                let Some(entries) = self.buckets.get(&(br.saturating_add(dr), bi.saturating_add(di)))
                else {
                    continue;
                };
                for &(seq, v) in entries {
                    if (v.re - re).abs() < self.tol
                        && (v.im - im).abs() < self.tol
                        && best.is_none_or(|(s, _)| seq < s)
                    {
                        best = Some((seq, v));
                    }
                }
            }
        }
        best.map(|(_, v)| v)
    }

    /// Returns the canonical representative of `re + i·im`.
    pub fn lookup(&mut self, re: f64, im: f64) -> Result<ComplexValue> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::NonFinite { re, im });
        }
        // -0.0 must not produce a second bit pattern for zero components
        let (re, im) = (re + 0.0, im + 0.0);
        Ok(match self.find(re, im) {
            Some(v) => v,
            None => self.insert(ComplexValue { re, im }),
        })
    }

    /// Canonicalizes a value produced by arithmetic on canonical inputs.
    ///
    /// Panics if the value is not finite.
    pub fn canon(&mut self, c: Complex64) -> ComplexValue {
        self.lookup(c.re, c.im)
            .unwrap_or_else(|e| panic!("complex arithmetic left the finite range: {e}"))
    }

    pub fn mul(&mut self, a: ComplexValue, b: ComplexValue) -> ComplexValue {
        if a.is_zero() || b.is_zero() {
            return ComplexValue::ZERO;
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        self.canon(a.to_c64() * b.to_c64())
    }

    pub fn add(&mut self, a: ComplexValue, b: ComplexValue) -> ComplexValue {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        self.canon(a.to_c64() + b.to_c64())
    }

    /// `a / b`; `b` must be nonzero.
    pub fn div(&mut self, a: ComplexValue, b: ComplexValue) -> ComplexValue {
        assert!(!b.is_zero(), "division by canonical zero");
        if a == b {
            return ComplexValue::ONE;
        }
        if b.is_one() {
            return a;
        }
        self.canon(a.to_c64() / b.to_c64())
    }

    pub fn conj(&mut self, a: ComplexValue) -> ComplexValue {
        self.canon(a.to_c64().conj())
    }

    pub fn sqr_mag(&self, a: ComplexValue) -> f64 {
        a.sqr_mag()
    }
}
