//! Interval arithmetic over safe machine doubles.
//!
//! A [`Scalar`] is a pair of doubles `[lo, hi]` enclosing a real number.
//! Inexact operations compute the endpoint formula in round-to-nearest and
//! then step each endpoint one representable double outward. Results are
//! restricted to *safe numbers* (`0` or `2^-500 < |x| < 2^500`), on which
//! IEEE-754 guarantees that a rounded result is adjacent to the exact one and
//! that zero is only produced exactly. Together these make the outward step
//! sufficient for containment.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// `2^-500`, the exclusive lower bound on the magnitude of a nonzero safe number.
pub const SAFE_MIN: f64 = 3.054936363499605e-151;
/// `2^500`, the exclusive upper bound on the magnitude of a safe number.
pub const SAFE_MAX: f64 = 3.273390607896142e150;

pub fn is_safe(x: f64) -> bool {
    let ax = x.abs();
    x == 0.0 || (ax > SAFE_MIN && ax < SAFE_MAX)
}

pub fn assert_safe(x: f64) -> Result<f64> {
    if is_safe(x) {
        Ok(x)
    } else {
        Err(Error::NotSafe(x))
    }
}

/// Steps `n` representable doubles away from `x` (upward for positive `n`).
///
/// Zero is a fixed point: a zero produced by arithmetic on safe numbers is
/// exact, so it is already its own bound.
pub fn step_float(n: i32, x: f64) -> f64 {
    if x == 0.0 {
        return x;
    }
    let mut y = x;
    if n >= 0 {
        for _ in 0..n {
            y = y.next_up();
        }
    } else {
        for _ in 0..n.unsigned_abs() {
            y = y.next_down();
        }
    }
    y
}

pub fn safe_upper_bound(x: f64) -> Result<f64> {
    assert_safe(step_float(1, x))
}

pub fn safe_lower_bound(x: f64) -> Result<f64> {
    assert_safe(step_float(-1, x))
}

/// Closed interval `[lo, hi]` of doubles.
///
/// When used as an error bound of a function ball only `hi` carries meaning.
#[derive(Clone, Copy, PartialEq)]
pub struct Scalar {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "[{:e}]", self.lo)
        } else {
            write!(f, "[{:e}, {:e}]", self.lo, self.hi)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl Scalar {
    pub const ZERO: Scalar = Scalar { lo: 0.0, hi: 0.0 };
    pub const ONE: Scalar = Scalar { lo: 1.0, hi: 1.0 };

    /// Builds `[lo, hi]` without enlarging. The caller vouches for the bounds.
    pub const fn new(lo: f64, hi: f64) -> Self {
        Scalar { lo, hi }
    }

    /// The point interval `[x, x]`.
    pub const fn point(x: f64) -> Self {
        Scalar { lo: x, hi: x }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Self {
        Scalar { lo: -r, hi: r }
    }

    pub fn from_int(c: i64) -> Self {
        Scalar::point(c as f64)
    }

    /// Encloses a decimal literal such as `"2.2"` or `"-1e-7"`.
    ///
    /// Literals that are exactly representable become point intervals;
    /// all others become the two doubles straddling the exact value.
    pub fn from_decimal(text: &str) -> Result<Self> {
        let exact = parse_decimal(text).ok_or_else(|| Error::InvalidDecimal(text.to_string()))?;
        let nearest: f64 = text
            .trim()
            .parse()
            .map_err(|_| Error::InvalidDecimal(text.to_string()))?;
        if !nearest.is_finite() {
            return Err(Error::InvalidDecimal(text.to_string()));
        }
        let approx = BigRational::from_float(nearest).expect("finite double is rational");
        let (lo, hi) = match approx.cmp(&exact) {
            Ordering::Equal => (nearest, nearest),
            Ordering::Less => (nearest, nearest.next_up()),
            Ordering::Greater => (nearest.next_down(), nearest),
        };
        Ok(Scalar::new(assert_safe(lo)?, assert_safe(hi)?))
    }

    pub fn lo(self) -> f64 {
        self.lo
    }

    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Upper bound; the only meaningful endpoint of an error bound.
    pub fn upper(self) -> f64 {
        self.hi
    }

    /// `(lo + hi) / 2` in round-to-nearest; not a rigorous quantity.
    pub fn midpoint(self) -> f64 {
        (self.lo + self.hi) / 2.0
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn encloses(self, other: Scalar) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest interval containing both operands.
    pub fn hull(self, other: Scalar) -> Scalar {
        Scalar::new(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// Steps both endpoints one double outward, asserting safety.
    pub fn enlarge(self) -> Result<Self> {
        Ok(Scalar {
            lo: safe_lower_bound(self.lo)?,
            hi: safe_upper_bound(self.hi)?,
        })
    }

    /// Exact; no rounding is involved.
    pub fn abs(self) -> Self {
        let lo = 0.0f64.max(self.lo).max(-self.hi);
        let hi = -(0.0f64.min(self.lo).min(-self.hi));
        // max/min may hand back -0.0 from a negated zero endpoint
        Scalar { lo: lo + 0.0, hi: hi + 0.0 }
    }

    pub fn add(self, other: Scalar) -> Result<Self> {
        Scalar::new(self.lo + other.lo, self.hi + other.hi).enlarge()
    }

    pub fn sub(self, other: Scalar) -> Result<Self> {
        self.add(-other)
    }

    pub fn mul(self, other: Scalar) -> Result<Self> {
        let xs = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ];
        let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Scalar::new(lo, hi).enlarge()
    }

    pub fn recip(self) -> Result<Self> {
        if self.lo * self.hi > 0.0 {
            Scalar::new(1.0 / self.hi, 1.0 / self.lo).enlarge()
        } else {
            Err(Error::RecipNotWellDefined {
                lo: self.lo,
                hi: self.hi,
            })
        }
    }

    pub fn div(self, other: Scalar) -> Result<Self> {
        self.mul(other.recip()?)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(self, n: u32) -> Result<Self> {
        pow_by_squaring(self, n, Scalar::ONE, |a, b| a.mul(*b))
    }

    /// Interval ordering: decided only for disjoint or identical intervals.
    pub fn compare(self, other: Scalar) -> Result<Ordering> {
        if self.hi < other.lo {
            Ok(Ordering::Less)
        } else if self.lo > other.hi {
            Ok(Ordering::Greater)
        } else if self.lo == other.lo && self.hi == other.hi {
            Ok(Ordering::Equal)
        } else {
            Err(Error::Uncomparable {
                a_lo: self.lo,
                a_hi: self.hi,
                b_lo: other.lo,
                b_hi: other.hi,
            })
        }
    }

    /// True iff every member is strictly below every member of `other`.
    ///
    /// Unlike [`Scalar::compare`] this never aborts; callers that need an
    /// abort on undecidable comparisons map `false` to their own diagnostic.
    pub fn certainly_lt(self, other: Scalar) -> bool {
        matches!(self.compare(other), Ok(Ordering::Less))
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::point(x)
    }
}

/// `x^n` with the same multiplication order as the classic
/// square-and-multiply used for `(^)` in Haskell's Prelude.
///
/// Interval products are not associative, so the order is fixed here once
/// for every element type.
pub(crate) fn pow_by_squaring<T, F>(x: T, n: u32, one: T, mul: F) -> Result<T>
where
    T: Clone,
    F: Fn(&T, &T) -> Result<T>,
{
    if n == 0 {
        return Ok(one);
    }
    let mut x = x;
    let mut n = n;
    while n % 2 == 0 {
        x = mul(&x, &x)?;
        n /= 2;
    }
    if n == 1 {
        return Ok(x);
    }
    let mut acc = x.clone();
    x = mul(&x, &x)?;
    n = (n - 1) / 2;
    loop {
        if n % 2 == 0 {
            x = mul(&x, &x)?;
            n /= 2;
        } else if n == 1 {
            return mul(&x, &acc);
        } else {
            acc = mul(&x, &acc)?;
            x = mul(&x, &x)?;
            n = (n - 1) / 2;
        }
    }
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let s = text.trim();
    let (negative, s) = match s.as_bytes().first()? {
        b'-' => (true, &s[1..]),
        b'+' => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().ok()?;
    if negative {
        numer = -numer;
    }
    let scale = exponent.checked_sub(frac_part.len() as i32)?;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, scale.unsigned_abs() as usize))
    };
    Some(value)
}
