//! Rectangle enclosures of analytic functions on the unit disk.
//!
//! A [`FunctionBall`] with polynomial part `p`, error bound `e` and tail
//! degree `d` stands for every function
//!
//! ```text
//! p(z) + z^d h(z),    coefficients of p in their intervals,  ||h||_1 <= upper(e)
//! ```
//!
//! where `|| . ||_1` is the sum of the absolute values of the Taylor
//! coefficients. Only the upper endpoint of `e` is meaningful.
//!
//! Products and compositions keep one extra coefficient (they split at
//! `d + 1`) so that the division by `z` in the renormalization operator
//! still leaves a polynomial part of degree `d - 1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::PolyRect;
use crate::scalar::{pow_by_squaring, Scalar};

#[derive(Clone, PartialEq)]
pub struct FunctionBall {
    pub p: PolyRect,
    pub e: Scalar,
    d: usize,
}

impl fmt::Debug for FunctionBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F {:?} {:?}", self.p.coeffs(), self.e)
    }
}

impl FunctionBall {
    pub fn new(p: PolyRect, e: Scalar, d: usize) -> Self {
        debug_assert!(d >= 1, "tail degree must be positive");
        FunctionBall { p, e, d }
    }

    /// A polynomial with point coefficients and no tail.
    pub fn from_points(coeffs: &[f64], d: usize) -> Self {
        FunctionBall::new(PolyRect::from_points(coeffs), Scalar::ZERO, d)
    }

    /// The constant function `c` as `F [c] 0`.
    pub fn constant(c: Scalar, d: usize) -> Self {
        FunctionBall::new(PolyRect::new(vec![c]), Scalar::ZERO, d)
    }

    pub fn zero(d: usize) -> Self {
        FunctionBall::constant(Scalar::ZERO, d)
    }

    /// `F [] r`: every `z^d h(z)` with `||h|| <= r`.
    pub fn tail_ball(r: f64, d: usize) -> Self {
        FunctionBall::new(PolyRect::zero(), Scalar::point(r), d)
    }

    /// The monomial `z^k` as a point ball.
    pub fn monomial(k: usize, d: usize) -> Self {
        FunctionBall::new(PolyRect::monomial(k, Scalar::ONE), Scalar::ZERO, d)
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    fn same_space(&self, other: &FunctionBall) {
        debug_assert_eq!(self.d, other.d, "function balls from different spaces");
    }

    fn error_coefficient(&self) -> Scalar {
        Scalar::symmetric(self.e.upper())
    }

    /// Moves coefficients of index `>= k` into the error term.
    ///
    /// Requires `k >= d`; splitting lower would push coefficients below
    /// `z^d` into a tail that only covers `z^d` and up.
    pub fn split(&self, k: usize) -> Result<FunctionBall> {
        if k < self.d {
            return Err(Error::SplitBelowTail { k, d: self.d });
        }
        let (head, rest) = self.p.split_at(k);
        Ok(FunctionBall::new(head, self.e.add(rest.norm()?)?, self.d))
    }

    pub fn add(&self, other: &FunctionBall) -> Result<FunctionBall> {
        self.same_space(other);
        Ok(FunctionBall::new(
            self.p.add(&other.p)?,
            self.e.add(other.e)?,
            self.d,
        ))
    }

    pub fn neg(&self) -> FunctionBall {
        FunctionBall::new(self.p.neg(), self.e, self.d)
    }

    pub fn sub(&self, other: &FunctionBall) -> Result<FunctionBall> {
        self.add(&other.neg())
    }

    /// `(p1 + z^d h1)(p2 + z^d h2)` with error
    /// `e2 ||p1|| + e1 ||p2|| + e1 e2`, split at `d + 1`.
    pub fn mul(&self, other: &FunctionBall) -> Result<FunctionBall> {
        self.same_space(other);
        let e3 = other
            .e
            .mul(self.p.norm()?)?
            .add(self.e.mul(other.p.norm()?)?)?
            .add(self.e.mul(other.e)?)?;
        FunctionBall::new(self.p.mul(&other.p)?, e3, self.d).split(self.d + 1)
    }

    pub fn pow(&self, n: u32) -> Result<FunctionBall> {
        pow_by_squaring(self.clone(), n, FunctionBall::constant(Scalar::ONE, self.d), |a, b| {
            a.mul(b)
        })
    }

    /// `c + f` for an integer literal `c`, i.e. `F [c] 0 + f`.
    pub fn add_int(&self, c: i64) -> Result<FunctionBall> {
        FunctionBall::constant(Scalar::from_int(c), self.d).add(self)
    }

    /// `c * f` for an integer literal `c`, i.e. `F [c] 0 * f`.
    pub fn int_mul(&self, c: i64) -> Result<FunctionBall> {
        FunctionBall::constant(Scalar::from_int(c), self.d).mul(self)
    }

    /// Scales by `x` on the right: `(p x, e |x|)`.
    pub fn scale_mul(&self, x: Scalar) -> Result<FunctionBall> {
        Ok(FunctionBall::new(
            self.p.scale(x)?,
            self.e.mul(x.abs())?,
            self.d,
        ))
    }

    /// Divides by `x`: `(p (1/x), e / |x|)`.
    pub fn scale_div(&self, x: Scalar) -> Result<FunctionBall> {
        let inv = Scalar::ONE.mul(x.recip()?)?;
        Ok(FunctionBall::new(
            self.p.scale(inv)?,
            self.e.mul(x.abs().recip()?)?,
            self.d,
        ))
    }

    /// Upper bound (in `hi`) on the l1 norm of every member.
    pub fn norm(&self) -> Result<Scalar> {
        self.p.norm()?.add(self.e)
    }

    /// Derivative restricted to the disk of radius `mu < 1`.
    ///
    /// The tail contributes `d h(z) z^(d-1)`, bounded by the symmetric
    /// coefficient `[-d e, d e]` at `z^(d-1)`, and `z^d h'(z)`, whose norm on
    /// the smaller disk is at most `e / (1 - mu)^2`.
    pub fn deriv(&self, mu: Scalar) -> Result<FunctionBall> {
        if !mu.certainly_lt(Scalar::ONE) {
            return Err(Error::DerivRadiusTooLarge {
                lo: mu.lo(),
                hi: mu.hi(),
            });
        }
        let s = Scalar::from_int(self.d as i64).mul(Scalar::point(self.e.upper()))?.upper();
        let p1 = self
            .p
            .deriv()?
            .add(&PolyRect::monomial(self.d - 1, Scalar::symmetric(s)))?;
        let gap = Scalar::ONE.sub(mu)?;
        let e1 = self.e.mul(gap.pow(2)?.recip()?)?;
        Ok(FunctionBall::new(p1, e1, self.d))
    }

    /// `p o f2` for a polynomial `p`, by the recursion `c + f2 (q o f2)`.
    /// Always defined since polynomials are entire.
    pub fn compose_poly(p: &PolyRect, f2: &FunctionBall) -> Result<FunctionBall> {
        let d = f2.d;
        let mut acc = FunctionBall::zero(d);
        for &c in p.coeffs().iter().rev() {
            acc = FunctionBall::constant(c, d).add(&f2.mul(&acc)?)?;
        }
        Ok(acc)
    }

    /// `self o f2`, valid when `||f2|| < 1` so that the image of `f2` lies
    /// in the unit disk.
    pub fn compose(&self, f2: &FunctionBall) -> Result<FunctionBall> {
        self.same_space(f2);
        let n2 = f2.norm()?;
        if !n2.certainly_lt(Scalar::ONE) {
            return Err(Error::ComposeNormTooLarge { norm_ub: n2.upper() });
        }
        let d = self.d;
        let head = FunctionBall::compose_poly(&self.p, f2)?.split(d + 1)?;
        let power = f2.pow(d as u32)?.split(d + 1)?;
        let s = self.error_coefficient();
        Ok(FunctionBall::new(
            head.p.add(&PolyRect::new(vec![s]).mul(&power.p)?)?,
            head.e.add(self.e.mul(power.e)?)?,
            d,
        ))
    }

    /// Derivative of `(f, g) -> f o g` in direction `(df, dg)`:
    /// `(Df o g) dg + df o g`, with `Df` restricted to the disk of radius
    /// `||g||` which contains the image of `g`.
    pub fn dcompose(
        f: &FunctionBall,
        g: &FunctionBall,
        df: &FunctionBall,
        dg: &FunctionBall,
    ) -> Result<FunctionBall> {
        let dfg = f.deriv(g.norm()?)?;
        dfg.compose(g)?.mul(dg)?.add(&df.compose(g)?)
    }

    /// Division by `z` of a function whose constant coefficient is zero.
    ///
    /// The constant coefficient interval is dropped, not checked: the caller
    /// must know the enclosed functions vanish at 0. `h(0)` of the tail is
    /// absorbed into the coefficient of `z^(d-1)`.
    pub fn lshift(&self) -> Result<FunctionBall> {
        let q = PolyRect::new(self.p.coeffs().iter().skip(1).copied().collect());
        let p = q.add(&PolyRect::monomial(self.d - 1, self.error_coefficient()))?;
        Ok(FunctionBall::new(p, self.e, self.d))
    }

    /// Point evaluation at `t` with `|t| < 1`.
    pub fn eval(&self, t: Scalar) -> Result<Scalar> {
        if !t.abs().certainly_lt(Scalar::ONE) {
            return Err(Error::EvalNotInDomain {
                lo: t.lo(),
                hi: t.hi(),
            });
        }
        self.p
            .eval(t)?
            .add(t.pow(self.d as u32)?.mul(self.error_coefficient())?)
    }

    /// Drops the error bound and collapses every coefficient to its midpoint.
    /// Not rigorous.
    pub fn approx(&self) -> FunctionBall {
        FunctionBall::new(self.p.collapse(), Scalar::ZERO, self.d)
    }

    /// Rectangle containing every function within l1 distance `r`.
    pub fn ball(&self, r: f64) -> Result<FunctionBall> {
        let widen = Scalar::symmetric(r);
        let p = self
            .p
            .coeffs()
            .iter()
            .map(|c| c.add(widen))
            .collect::<Result<Vec<_>>>()?;
        Ok(FunctionBall::new(
            PolyRect::new(p),
            self.e.add(Scalar::point(r))?,
            self.d,
        ))
    }
}

/// An element `(f, g)` of `X x X` with norm `||f|| + ||g||`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorenzPair {
    pub f: FunctionBall,
    pub g: FunctionBall,
}

impl LorenzPair {
    pub fn new(f: FunctionBall, g: FunctionBall) -> Self {
        LorenzPair { f, g }
    }

    pub fn zero(d: usize) -> Self {
        LorenzPair::new(FunctionBall::zero(d), FunctionBall::zero(d))
    }

    pub fn degree(&self) -> usize {
        self.f.degree()
    }

    pub fn add(&self, other: &LorenzPair) -> Result<LorenzPair> {
        Ok(LorenzPair::new(self.f.add(&other.f)?, self.g.add(&other.g)?))
    }

    pub fn sub(&self, other: &LorenzPair) -> Result<LorenzPair> {
        Ok(LorenzPair::new(self.f.sub(&other.f)?, self.g.sub(&other.g)?))
    }

    pub fn scale_mul(&self, x: Scalar) -> Result<LorenzPair> {
        Ok(LorenzPair::new(self.f.scale_mul(x)?, self.g.scale_mul(x)?))
    }

    pub fn split(&self, k: usize) -> Result<LorenzPair> {
        Ok(LorenzPair::new(self.f.split(k)?, self.g.split(k)?))
    }

    pub fn sumnorm(&self) -> Result<Scalar> {
        self.f.norm()?.add(self.g.norm()?)
    }

    pub fn dist(&self, other: &LorenzPair) -> Result<Scalar> {
        self.sub(other)?.sumnorm()
    }

    pub fn approx(&self) -> LorenzPair {
        LorenzPair::new(self.f.approx(), self.g.approx())
    }

    pub fn ball(&self, r: f64) -> Result<LorenzPair> {
        Ok(LorenzPair::new(self.f.ball(r)?, self.g.ball(r)?))
    }
}

/// Basis vector `eta_k` of `Y`: `(z^j, 0)` for `k = 2j`, `(0, z^j)` for `k = 2j + 1`.
pub fn basis(k: usize, d: usize) -> LorenzPair {
    let xi = FunctionBall::monomial(k / 2, d);
    if k % 2 == 0 {
        LorenzPair::new(xi, FunctionBall::zero(d))
    } else {
        LorenzPair::new(FunctionBall::zero(d), xi)
    }
}

/// The `2d + 2` tangent sets whose images bound an operator norm: the tail
/// balls `B_d x 0` and `0 x B_d`, then `eta_0 .. eta_(2d-1)`.
pub fn norm_tangents(d: usize) -> Vec<LorenzPair> {
    let mut out = Vec::with_capacity(2 * d + 2);
    out.push(LorenzPair::new(FunctionBall::tail_ball(1.0, d), FunctionBall::zero(d)));
    out.push(LorenzPair::new(FunctionBall::zero(d), FunctionBall::tail_ball(1.0, d)));
    out.extend((0..2 * d).map(|k| basis(k, d)));
    out
}

/// Upper bound on the l1 operator norm of a linear map on `Y`, given as a
/// map from a list of tangents to their images.
///
/// Because the l1 operator norm is the supremum of column norms, it suffices
/// to bound the images of the first `2d` basis vectors and of the two tail
/// balls.
pub fn opnorm<F>(d: usize, op: F) -> Result<f64>
where
    F: FnOnce(&[LorenzPair]) -> Result<Vec<LorenzPair>>,
{
    let images = op(&norm_tangents(d))?;
    images
        .iter()
        .map(|x| x.sumnorm().map(Scalar::upper))
        .try_fold(f64::NEG_INFINITY, |acc, n| Ok(acc.max(n?)))
}
