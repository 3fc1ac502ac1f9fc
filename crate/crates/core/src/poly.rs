//! Rectangle sets of polynomials.
//!
//! A [`PolyRect`] holds one [`Scalar`] per coefficient, constant term first,
//! and stands for every polynomial whose coefficients lie in those intervals.
//! No normalization of trailing zeros is done; the empty vector is the zero
//! polynomial.

use crate::error::Result;
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PolyRect(pub Vec<Scalar>);

impl PolyRect {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        PolyRect(coeffs)
    }

    pub fn zero() -> Self {
        PolyRect(Vec::new())
    }

    pub fn from_points(coeffs: &[f64]) -> Self {
        PolyRect(coeffs.iter().copied().map(Scalar::point).collect())
    }

    /// The monomial `c z^k`.
    pub fn monomial(k: usize, c: Scalar) -> Self {
        let mut coeffs = vec![Scalar::ZERO; k + 1];
        coeffs[k] = c;
        PolyRect(coeffs)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient `k`, reading past the end as zero.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.0.get(k).copied().unwrap_or(Scalar::ZERO)
    }

    /// Coefficient-wise sum; the shorter operand is zero-extended and its
    /// missing coefficients are copied through unrounded.
    pub fn add(&self, other: &PolyRect) -> Result<PolyRect> {
        let (long, short) = if self.len() >= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Vec::with_capacity(long.len());
        for (k, &c) in long.0.iter().enumerate() {
            out.push(match short.0.get(k) {
                Some(&s) => {
                    // operand order is irrelevant: interval addition is symmetric
                    c.add(s)?
                }
                None => c,
            });
        }
        Ok(PolyRect(out))
    }

    pub fn neg(&self) -> PolyRect {
        PolyRect(self.0.iter().map(|&c| -c).collect())
    }

    pub fn sub(&self, other: &PolyRect) -> Result<PolyRect> {
        self.add(&other.neg())
    }

    /// Cauchy product, accumulated in the order of the recursion
    /// `(c1 + z q1) p2 = c1 c2 + z (c1 q2 + q1 p2)`.
    ///
    /// Unrolling that recursion, coefficient `n` of the result is
    /// `a_0 b_n + (a_1 b_{n-1} + (a_2 b_{n-2} + ...))`, summed innermost first.
    pub fn mul(&self, other: &PolyRect) -> Result<PolyRect> {
        if self.is_empty() || other.is_empty() {
            return Ok(PolyRect::zero());
        }
        let (a, b) = (&self.0, &other.0);
        let n = a.len() + b.len() - 1;
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let i_min = k.saturating_sub(b.len() - 1);
            let i_max = k.min(a.len() - 1);
            let mut acc: Option<Scalar> = None;
            for i in (i_min..=i_max).rev() {
                let term = a[i].mul(b[k - i])?;
                acc = Some(match acc {
                    None => term,
                    Some(rest) => term.add(rest)?,
                });
            }
            out.push(acc.expect("nonempty index range"));
        }
        Ok(PolyRect(out))
    }

    /// Multiplies every coefficient by `x`.
    pub fn scale(&self, x: Scalar) -> Result<PolyRect> {
        self.mul(&PolyRect(vec![x]))
    }

    /// Horner evaluation `c + t * peval(q, t)`.
    pub fn eval(&self, t: Scalar) -> Result<Scalar> {
        let mut acc = Scalar::ZERO;
        let mut first = true;
        for &c in self.0.iter().rev() {
            acc = if first {
                // innermost level of the recursion: c + t * 0
                c.add(t.mul(Scalar::ZERO)?)?
            } else {
                c.add(t.mul(acc)?)?
            };
            first = false;
        }
        Ok(acc)
    }

    /// Sum of coefficient magnitudes; its upper bound dominates the
    /// l1 norm of every member.
    pub fn norm(&self) -> Result<Scalar> {
        self.0
            .iter()
            .try_fold(Scalar::ZERO, |acc, c| acc.add(c.abs()))
    }

    /// Formal derivative; coefficient `k` is `(k + 1) a_{k+1}`.
    pub fn deriv(&self) -> Result<PolyRect> {
        let mut out = Vec::with_capacity(self.len().saturating_sub(1));
        for (k, &c) in self.0.iter().enumerate().skip(1) {
            out.push(c.mul(Scalar::from_int(k as i64))?);
        }
        Ok(PolyRect(out))
    }

    /// Splits into the first `k` coefficients and the rest.
    pub fn split_at(&self, k: usize) -> (PolyRect, PolyRect) {
        if k >= self.len() {
            (self.clone(), PolyRect::zero())
        } else {
            (PolyRect(self.0[..k].to_vec()), PolyRect(self.0[k..].to_vec()))
        }
    }

    /// Pads with zeros or truncates to exactly `n` coefficients.
    pub fn padded(&self, n: usize) -> Vec<Scalar> {
        (0..n).map(|k| self.coeff(k)).collect()
    }

    /// Midpoints of every coefficient as a point rectangle.
    pub fn collapse(&self) -> PolyRect {
        PolyRect(self.0.iter().map(|c| Scalar::point(c.midpoint())).collect())
    }

    pub fn encloses(&self, other: &PolyRect) -> bool {
        let n = self.len().max(other.len());
        (0..n).all(|k| self.coeff(k).encloses(other.coeff(k)))
    }
}

impl From<Vec<Scalar>> for PolyRect {
    fn from(v: Vec<Scalar>) -> Self {
        PolyRect(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[f64]) -> PolyRect {
        PolyRect::from_points(v)
    }

    fn assert_encloses(outer: &PolyRect, inner: &[f64]) {
        assert_eq!(outer.len(), inner.len(), "{outer:?} vs {inner:?}");
        for (c, &x) in outer.coeffs().iter().zip(inner) {
            assert!(c.contains(x), "{c:?} misses {x}");
        }
    }

    #[test]
    fn ring_examples() {
        assert_encloses(&pts(&[1.0, 2.0]).add(&pts(&[0.0, 3.0])).unwrap(), &[1.0, 5.0]);
        assert_encloses(&pts(&[1.0]).add(&pts(&[0.0, 3.0])).unwrap(), &[1.0, 3.0]);
        assert_encloses(
            &pts(&[1.0, 1.0]).mul(&pts(&[1.0, -1.0])).unwrap(),
            &[1.0, 0.0, -1.0],
        );
        assert!(PolyRect::zero().mul(&pts(&[1.0, 2.0])).unwrap().is_empty());
        assert!(pts(&[1.0, 2.0]).mul(&PolyRect::zero()).unwrap().is_empty());
        assert_eq!(pts(&[1.0, -2.0]).neg(), pts(&[-1.0, 2.0]));
    }

    #[test]
    fn mul_lengths() {
        let p = pts(&[1.0, 2.0, 3.0]);
        let q = pts(&[4.0, 5.0]);
        let r = p.mul(&q).unwrap();
        assert_eq!(r.len(), 4);
        assert_encloses(&r, &[4.0, 13.0, 22.0, 15.0]);
    }

    #[test]
    fn eval_examples() {
        let v = pts(&[1.0, 2.0, 3.0]).eval(Scalar::point(2.0)).unwrap();
        assert!(v.contains(17.0));
        assert_eq!(PolyRect::zero().eval(Scalar::point(5.0)).unwrap(), Scalar::ZERO);
        let c = Scalar::new(-0.5, 0.25);
        let v = PolyRect::new(vec![c]).eval(Scalar::new(3.0, 4.0)).unwrap();
        assert!(v.encloses(c));
    }

    #[test]
    fn norm_examples() {
        let n = pts(&[1.0, -2.0, 3.0]).norm().unwrap();
        assert!(n.contains(6.0) && n.hi() - 6.0 < 1e-14);
        assert_eq!(PolyRect::zero().norm().unwrap(), Scalar::ZERO);
        let n = PolyRect::new(vec![Scalar::new(-1.0, 1.0)]).norm().unwrap();
        assert_eq!(n.lo(), 0.0);
        assert!(n.hi() >= 1.0);
    }

    #[test]
    fn deriv_examples() {
        assert_encloses(&pts(&[5.0, 1.0, 4.0]).deriv().unwrap(), &[1.0, 8.0]);
        assert!(pts(&[7.0]).deriv().unwrap().is_empty());
        assert!(PolyRect::zero().deriv().unwrap().is_empty());
    }

    #[test]
    fn split_and_pad() {
        let p = pts(&[1.0, 2.0, 3.0]);
        let (a, b) = p.split_at(2);
        assert_eq!(a, pts(&[1.0, 2.0]));
        assert_eq!(b, pts(&[3.0]));
        let (a, b) = p.split_at(5);
        assert_eq!(a, p);
        assert!(b.is_empty());
        assert_eq!(p.padded(5).len(), 5);
        assert_eq!(p.padded(5)[4], Scalar::ZERO);
        assert_eq!(p.padded(2), vec![Scalar::ONE, Scalar::point(2.0)]);
    }

    #[test]
    fn additive_inverse_contains_zero() {
        let p = PolyRect::new(vec![Scalar::new(-1.0, 2.0), Scalar::point(0.3)]);
        let z = p.add(&p.neg()).unwrap();
        assert!(z.coeffs().iter().all(|c| c.contains(0.0)));
    }
}
