//! Exact rational values for every measure the engine reports.
//!
//! Backed by `num_rational::Ratio<i128>`. All arithmetic goes through the
//! checked operations and panics on overflow instead of wrapping.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, ToPrimitive, Zero};

use crate::error::{DivnetError, Result};

/// A reduced fraction with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ExactRational(Ratio<i128>);

impl ExactRational {
    pub const ZERO: ExactRational = ExactRational(Ratio::new_raw(0, 1));
    pub const ONE: ExactRational = ExactRational(Ratio::new_raw(1, 1));

    pub fn new(numerator: i128, denominator: i128) -> Result<Self> {
        if denominator == 0 {
            return Err(DivnetError::ZeroDivisor);
        }
        Ok(ExactRational(Ratio::new(numerator, denominator)))
    }

    /// Builds `numerator / denominator` from unsigned counts.
    pub fn from_counts(numerator: u64, denominator: u64) -> Result<Self> {
        Self::new(numerator as i128, denominator as i128)
    }

    pub fn from_integer(value: i128) -> Self {
        ExactRational(Ratio::from_integer(value))
    }

    pub fn numerator(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        self.0.checked_add(&other.0).map(ExactRational)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0.checked_sub(&other.0).map(ExactRational)
    }

    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        self.0.checked_mul(&other.0).map(ExactRational)
    }

    pub fn signum(&self) -> i32 {
        match self.numerator().cmp(&0) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }
}

impl Add for ExactRational {
    type Output = ExactRational;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("rational overflow in add")
    }
}

impl Sub for ExactRational {
    type Output = ExactRational;

    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("rational overflow in sub")
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;

    fn neg(self) -> Self {
        ExactRational(-self.0)
    }
}

impl PartialOrd for ExactRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactRational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
