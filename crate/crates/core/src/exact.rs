//! Exact scalar arithmetic in the quadratic field Q + Q·√2.
//!
//! Edge lengths live in this field so that rational (in)dependence of two
//! lengths is decidable: `a + b·√2 = 0` holds iff `a = b = 0`, and the ratio
//! of two field elements is rational iff their coefficient vectors are
//! parallel over Q. Floating point cannot decide either question.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

// Re-exported so downstream code can build the rationals this API speaks.
pub use num_rational::BigRational;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// A scalar `rat + rad2·√2` with exact rational coefficients.
///
/// Coefficients are kept in lowest terms with positive denominators
/// (`BigRational` normalizes on construction). The type represents arbitrary
/// field elements; positivity of edge lengths is enforced where graphs are
/// built, not here, because intermediate distance arithmetic needs
/// subtraction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactLength {
    rat: BigRational,
    rad2: BigRational,
}

impl ExactLength {
    pub fn new(rat: BigRational, rad2: BigRational) -> Self {
        Self { rat, rad2 }
    }

    /// Purely rational element `p/q`. Panics if `q == 0`.
    pub fn from_rational(p: i64, q: i64) -> Self {
        Self {
            rat: BigRational::new(BigInt::from(p), BigInt::from(q)),
            rad2: BigRational::zero(),
        }
    }

    /// Element `p/q + (r/s)·√2`. Panics if `q == 0` or `s == 0`.
    pub fn from_parts(p: i64, q: i64, r: i64, s: i64) -> Self {
        Self {
            rat: BigRational::new(BigInt::from(p), BigInt::from(q)),
            rad2: BigRational::new(BigInt::from(r), BigInt::from(s)),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(n, 1)
    }

    pub fn zero() -> Self {
        Self {
            rat: BigRational::zero(),
            rad2: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            rat: BigRational::one(),
            rad2: BigRational::zero(),
        }
    }

    /// √2 itself.
    pub fn sqrt2() -> Self {
        Self {
            rat: BigRational::zero(),
            rad2: BigRational::one(),
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn rad2_part(&self) -> &BigRational {
        &self.rad2
    }

    /// True iff the represented value is exactly zero, i.e. both
    /// coefficients vanish (√2 is irrational).
    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.rad2.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.rad2.is_zero()
    }

    /// Exact sign of `rat + rad2·√2`.
    pub fn signum(&self) -> Ordering {
        let a = &self.rat;
        let b = &self.rad2;
        match (a.is_zero(), b.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return cmp_zero(b),
            (false, true) => return cmp_zero(a),
            (false, false) => {}
        }
        if a.is_positive() && b.is_positive() {
            return Ordering::Greater;
        }
        if a.is_negative() && b.is_negative() {
            return Ordering::Less;
        }
        // Mixed signs: the value has the sign of the coefficient whose square
        // dominates, since a > -b√2 <=> a² > 2b² when a > 0 > b, etc.
        // a² = 2b² is impossible for nonzero rationals.
        let a2 = a * a;
        let b2_twice = b * b * BigRational::from_integer(BigInt::from(2));
        if a.is_positive() {
            if a2 > b2_twice {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if b2_twice > a2 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    /// Field multiplication: `(a + b√2)(c + d√2) = ac + 2bd + (ad + bc)√2`.
    pub fn field_mul(&self, other: &Self) -> Self {
        let two = BigRational::from_integer(BigInt::from(2));
        Self {
            rat: &self.rat * &other.rat + two * &self.rad2 * &other.rad2,
            rad2: &self.rat * &other.rad2 + &self.rad2 * &other.rat,
        }
    }

    /// The square `self·self`, again an element of the field.
    pub fn square(&self) -> Self {
        self.field_mul(self)
    }

    /// Scale by an exact rational.
    pub fn scale(&self, factor: &BigRational) -> Self {
        Self {
            rat: &self.rat * factor,
            rad2: &self.rad2 * factor,
        }
    }

    pub fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero");
        let inv = BigRational::new(BigInt::one(), BigInt::from(n));
        self.scale(&inv)
    }

    /// True iff `self / other` is rational, i.e. the coefficient vectors
    /// `(rat, rad2)` are parallel over Q. Requires `other != 0`.
    pub fn is_rational_multiple_of(&self, other: &Self) -> bool {
        assert!(!other.is_zero(), "ratio against zero");
        (&self.rat * &other.rad2 - &self.rad2 * &other.rat).is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rat) + rational_to_f64(&self.rad2) * SQRT2
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

fn cmp_zero(r: &BigRational) -> Ordering {
    if r.is_positive() {
        Ordering::Greater
    } else if r.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Out-of-range numerator/denominator; fall back to splitting.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for ExactLength {
    type Output = ExactLength;
    fn add(self, rhs: ExactLength) -> ExactLength {
        ExactLength {
            rat: self.rat + rhs.rat,
            rad2: self.rad2 + rhs.rad2,
        }
    }
}

impl<'a> Add<&'a ExactLength> for ExactLength {
    type Output = ExactLength;
    fn add(self, rhs: &'a ExactLength) -> ExactLength {
        ExactLength {
            rat: self.rat + &rhs.rat,
            rad2: self.rad2 + &rhs.rad2,
        }
    }
}

impl Sub for ExactLength {
    type Output = ExactLength;
    fn sub(self, rhs: ExactLength) -> ExactLength {
        ExactLength {
            rat: self.rat - rhs.rat,
            rad2: self.rad2 - rhs.rad2,
        }
    }
}

impl<'a> Sub<&'a ExactLength> for ExactLength {
    type Output = ExactLength;
    fn sub(self, rhs: &'a ExactLength) -> ExactLength {
        ExactLength {
            rat: self.rat - &rhs.rat,
            rad2: self.rad2 - &rhs.rad2,
        }
    }
}

impl Neg for ExactLength {
    type Output = ExactLength;
    fn neg(self) -> ExactLength {
        ExactLength {
            rat: -self.rat,
            rad2: -self.rad2,
        }
    }
}

impl Mul for ExactLength {
    type Output = ExactLength;
    fn mul(self, rhs: ExactLength) -> ExactLength {
        self.field_mul(&rhs)
    }
}

impl PartialOrd for ExactLength {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactLength {
    fn cmp(&self, other: &Self) -> Ordering {
        ExactLength {
            rat: &self.rat - &other.rat,
            rad2: &self.rad2 - &other.rad2,
        }
        .signum()
    }
}

impl fmt::Display for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rad2.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt2", self.rad2)
        } else if self.rad2.is_negative() {
            write!(f, "{} - {}*sqrt2", self.rat, -self.rad2.clone())
        } else {
            write!(f, "{} + {}*sqrt2", self.rat, self.rad2)
        }
    }
}

impl fmt::Debug for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactLength {
    type Err = String;

    /// Parses `"p/q"` or `"p"` (rational only; used by CLI flags).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|e| e.to_string())?,
                q.trim().parse::<i64>().map_err(|e| e.to_string())?,
            ),
            None => (s.trim().parse::<i64>().map_err(|e| e.to_string())?, 1),
        };
        if q == 0 {
            return Err("zero denominator".into());
        }
        Ok(ExactLength::from_rational(p, q))
    }
}
