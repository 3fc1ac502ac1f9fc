//! Exact rational reference arithmetic for soundness checks.
//!
//! Nothing here calls the interval code; it is an independent model used to
//! test that every interval result contains the exact answer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::funcball::{FunctionBall, LorenzPair};
use crate::poly::PolyRect;
use crate::scalar::Scalar;

pub type Q = BigRational;

pub fn exact(x: f64) -> Q {
    Q::from_float(x).expect("finite double")
}

pub fn contains(s: Scalar, q: &Q) -> bool {
    exact(s.lo()) <= *q && *q <= exact(s.hi())
}

/// Distance from `q` to the interval `s`.
pub fn dist_to(s: Scalar, q: &Q) -> Q {
    let (lo, hi) = (exact(s.lo()), exact(s.hi()));
    if *q < lo {
        lo - q
    } else if *q > hi {
        q - hi
    } else {
        Q::zero()
    }
}

/// An exact member of `s`: an endpoint or a dyadic point between them.
pub fn sample_member<R: Rng>(s: Scalar, rng: &mut R) -> Q {
    match rng.gen_range(0..4) {
        0 => exact(s.lo()),
        1 => exact(s.hi()),
        _ => {
            let (lo, hi) = (exact(s.lo()), exact(s.hi()));
            let t = Q::new(BigInt::from(rng.gen_range(0u32..=1 << 20)), BigInt::from(1u32 << 20));
            &lo + (hi - &lo) * t
        }
    }
}

/// Exact polynomial, constant term first.
#[derive(Clone, Debug, PartialEq)]
pub struct RatPoly(pub Vec<Q>);

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly(Vec::new())
    }

    pub fn constant(c: Q) -> Self {
        RatPoly(vec![c])
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.0.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        RatPoly((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &RatPoly) -> RatPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return RatPoly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly(out)
    }

    pub fn scale(&self, c: &Q) -> RatPoly {
        RatPoly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> RatPoly {
        (0..n).fold(RatPoly::constant(Q::from_integer(1.into())), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, t: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * t + c)
    }

    pub fn deriv(&self) -> RatPoly {
        RatPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Q::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        self.0
            .iter()
            .rev()
            .fold(RatPoly::zero(), |acc, c| acc.mul(inner).add(&RatPoly::constant(c.clone())))
    }

    /// Drops the constant term and divides by `z`.
    pub fn lshift(&self) -> RatPoly {
        RatPoly(self.0.iter().skip(1).cloned().collect())
    }

    pub fn l1_norm(&self) -> Q {
        self.0.iter().fold(Q::zero(), |acc, c| acc + c.abs())
    }
}

/// A random exact member of the rectangle `p`.
pub fn sample_poly<R: Rng>(p: &PolyRect, rng: &mut R) -> RatPoly {
    RatPoly(p.coeffs().iter().map(|&c| sample_member(c, rng)).collect())
}

/// Whether the exact polynomial `a` lies in the function ball `b`: the
/// coefficients below the tail degree must lie in the rectangle, and the
/// remaining coefficients must be within `e` of it in the l1 sense.
pub fn ball_contains(b: &FunctionBall, a: &RatPoly) -> bool {
    let d = b.degree();
    let n = a.0.len().max(b.p.len());
    let mut tail = Q::zero();
    for k in 0..n {
        let ak = a.coeff(k);
        let bk = b.p.coeff(k);
        if k < d {
            if !contains(bk, &ak) {
                return false;
            }
        } else {
            tail += dist_to(bk, &ak);
        }
    }
    tail <= exact(b.e.upper())
}

pub fn pair_contains(b: &LorenzPair, f: &RatPoly, g: &RatPoly) -> bool {
    ball_contains(&b.f, f) && ball_contains(&b.g, g)
}

/// Exact solution of `m x = b` by Gaussian elimination, or `None` if `m`
/// is singular.
pub fn solve_exact(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &a[col][col];
            for c in col..=n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    let mut x = vec![Q::zero(); n];
    for i in (0..n).rev() {
        let mut s = a[i][n].clone();
        for j in i + 1..n {
            s -= &a[i][j] * &x[j];
        }
        x[i] = s / &a[i][i];
    }
    Some(x)
}
