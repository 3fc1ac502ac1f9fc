//! Complex rectangles and rigorous enclosures of arcs of the unit circle.
//!
//! Only what the resolvent bound `||(G - e^{it} I)^{-1}(G - DT)||` needs:
//! ring operations, division, a modulus upper bound, and `e^{it}` for `t` in
//! a short arc.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::Result;
use crate::ilinalg::Entry;
use crate::scalar::Scalar;

/// `{ a + bi : a in re, b in im }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexRect {
    pub re: Scalar,
    pub im: Scalar,
}

impl ComplexRect {
    pub const ZERO: ComplexRect = ComplexRect {
        re: Scalar::ZERO,
        im: Scalar::ZERO,
    };

    pub fn new(re: Scalar, im: Scalar) -> Self {
        ComplexRect { re, im }
    }

    pub fn point(re: f64, im: f64) -> Self {
        ComplexRect::new(Scalar::point(re), Scalar::point(im))
    }

    pub fn real(re: Scalar) -> Self {
        ComplexRect::new(re, Scalar::ZERO)
    }

    pub fn add(self, other: ComplexRect) -> Result<ComplexRect> {
        Ok(ComplexRect::new(self.re.add(other.re)?, self.im.add(other.im)?))
    }

    pub fn neg(self) -> ComplexRect {
        ComplexRect::new(-self.re, -self.im)
    }

    pub fn conj(self) -> ComplexRect {
        ComplexRect::new(self.re, -self.im)
    }

    pub fn sub(self, other: ComplexRect) -> Result<ComplexRect> {
        self.add(other.neg())
    }

    pub fn mul(self, other: ComplexRect) -> Result<ComplexRect> {
        let re = self.re.mul(other.re)?.sub(self.im.mul(other.im)?)?;
        let im = self.re.mul(other.im)?.add(self.im.mul(other.re)?)?;
        Ok(ComplexRect::new(re, im))
    }

    pub fn scale(self, x: Scalar) -> Result<ComplexRect> {
        Ok(ComplexRect::new(self.re.mul(x)?, self.im.mul(x)?))
    }

    /// Enclosure of `re^2 + im^2` over the rectangle.
    pub fn modulus_sqr(self) -> Result<Scalar> {
        let a = self.re.abs();
        let b = self.im.abs();
        a.mul(a)?.add(b.mul(b)?)
    }

    /// `conj(self) / |self|^2`; aborts when the rectangle may contain 0.
    pub fn recip(self) -> Result<ComplexRect> {
        self.conj().scale(self.modulus_sqr()?.recip()?)
    }

    pub fn div(self, other: ComplexRect) -> Result<ComplexRect> {
        self.mul(other.conj())?.scale(other.modulus_sqr()?.recip()?)
    }

    /// Rigorous bounds on `|a + bi|` over the rectangle. The upper endpoint
    /// is the one that matters for norms.
    pub fn modulus(self) -> Result<Scalar> {
        let a = self.re.abs();
        let b = self.im.abs();
        let hi2 = Scalar::point(a.hi())
            .mul(Scalar::point(a.hi()))?
            .add(Scalar::point(b.hi()).mul(Scalar::point(b.hi()))?)?;
        let lo2 = Scalar::point(a.lo())
            .mul(Scalar::point(a.lo()))?
            .add(Scalar::point(b.lo()).mul(Scalar::point(b.lo()))?)?;
        Ok(Scalar::new(sqrt_lb(lo2.lo())?, sqrt_ub(hi2.hi())?))
    }

    pub fn contains(self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }
}

impl Entry for ComplexRect {
    fn zero() -> Self {
        ComplexRect::ZERO
    }
    fn add(&self, other: &Self) -> Result<Self> {
        ComplexRect::add(*self, *other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        ComplexRect::mul(*self, *other)
    }
    fn neg(&self) -> Self {
        ComplexRect::neg(*self)
    }
    fn recip(&self) -> Result<Self> {
        ComplexRect::recip(*self)
    }
    fn from_scalar(x: Scalar) -> Self {
        ComplexRect::real(x)
    }
    fn magnitude_ub(&self) -> f64 {
        self.re.abs().hi().hypot(self.im.abs().hi())
    }
}

/// Smallest double `u` found with `u^2 >= x`, verified in interval arithmetic.
pub fn sqrt_ub(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let mut u = x.sqrt();
    while Scalar::point(u).mul(Scalar::point(u))?.lo() < x {
        u = u.next_up();
    }
    Ok(u)
}

/// Largest double `l` found with `l^2 <= x`, verified in interval arithmetic.
pub fn sqrt_lb(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let mut l = x.sqrt();
    while l > 0.0 && Scalar::point(l).mul(Scalar::point(l))?.hi() > x {
        l = l.next_down();
    }
    Ok(l)
}

/// `pi` lies strictly between `PI` and the next double.
pub fn pi_enclosure() -> Scalar {
    Scalar::new(PI, PI.next_up())
}

/// `m pi / 2`, enclosed.
fn half_pi_multiple(m: i64) -> Result<Scalar> {
    Scalar::new(PI / 2.0, PI.next_up() / 2.0).mul(Scalar::from_int(m))
}

const TAYLOR_TERMS: usize = 22;

/// `1/k!` for `k = 0 .. TAYLOR_TERMS`, each enclosed.
fn inverse_factorials() -> &'static [Scalar] {
    static CELL: OnceLock<Vec<Scalar>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = vec![Scalar::ONE];
        for k in 1..=TAYLOR_TERMS {
            let prev = *out.last().unwrap();
            out.push(prev.div(Scalar::from_int(k as i64)).expect("factorials stay safe"));
        }
        out
    })
}

/// Taylor polynomials of `cos` and `sin` about 0 with Lagrange remainder,
/// evaluated on the interval `u`.
fn cos_sin_taylor(u: Scalar) -> Result<(Scalar, Scalar)> {
    let inv = inverse_factorials();
    let u2 = u.mul(u)?;
    // cos: sum_{j<=10} (-1)^j u^{2j}/(2j)!, remainder |u|^22/22!
    let mut c = Scalar::ZERO;
    for j in (0..=10).rev() {
        let term = if j % 2 == 0 { inv[2 * j] } else { -inv[2 * j] };
        c = term.add(u2.mul(c)?)?;
    }
    // sin: u * sum_{j<=10} (-1)^j u^{2j}/(2j+1)!, remainder |u|^23/23! <= |u|^22/22!
    let mut s = Scalar::ZERO;
    for j in (0..=10).rev() {
        let term = if j % 2 == 0 { inv[2 * j + 1] } else { -inv[2 * j + 1] };
        s = term.add(u2.mul(s)?)?;
    }
    s = u.mul(s)?;
    let au = u.abs().hi();
    // |u|^22 underflows the safe range for tiny u; 2^-440 bounds it there
    let rem = if au <= 2f64.powi(-20) {
        2f64.powi(-440)
    } else {
        Scalar::point(au).pow(22)?.mul(inv[22])?.upper()
    };
    let slack = Scalar::symmetric(rem);
    Ok((c.add(slack)?, s.add(slack)?))
}

/// Enclosures of `(cos t, sin t)` for a double `t`.
pub fn cos_sin(t: f64) -> Result<(Scalar, Scalar)> {
    // any integer k is valid; the nearest one keeps |u| <= pi/4 + tiny
    let k = (t / (PI / 2.0)).round() as i64;
    let u = Scalar::point(t).sub(half_pi_multiple(k)?)?;
    let (c, s) = cos_sin_taylor(u)?;
    Ok(match k.rem_euclid(4) {
        0 => (c, s),
        1 => (-s, c),
        2 => (-c, -s),
        _ => (s, -c),
    })
}

/// A closed range of angles `[t_lo, t_hi]` in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Arc {
    pub fn new(t_lo: f64, t_hi: f64) -> Self {
        debug_assert!(t_lo <= t_hi);
        Arc { t_lo, t_hi }
    }

    /// Arc `index` of `n` equal arcs covering `[0, 2 pi]`. The last arc is
    /// stretched to an upper bound of `2 pi` so that the union covers the
    /// whole circle.
    pub fn of_covering(index: usize, n: usize) -> Arc {
        assert!(n > 0 && index < n);
        let step = 2.0 * PI / n as f64;
        let t_lo = index as f64 * step;
        let mut t_hi = (index + 1) as f64 * step;
        if index + 1 == n {
            t_hi = t_hi.max(2.0 * PI.next_up());
        }
        Arc::new(t_lo, t_hi)
    }

    pub fn width(&self) -> f64 {
        self.t_hi - self.t_lo
    }
}

/// Rectangle containing `e^{it}` for every `t` in the arc.
///
/// `cos` and `sin` are monotone between consecutive multiples of `pi/2`, so
/// their range over the arc is the hull of the endpoint values and of the
/// extrema at any multiple of `pi/2` that may lie inside.
pub fn unit_circle_enclosure(arc: Arc) -> Result<ComplexRect> {
    let (c0, s0) = cos_sin(arc.t_lo)?;
    let (c1, s1) = cos_sin(arc.t_hi)?;
    let mut re = c0.hull(c1);
    let mut im = s0.hull(s1);
    let m_lo = (arc.t_lo / (PI / 2.0)).floor() as i64 - 1;
    let m_hi = (arc.t_hi / (PI / 2.0)).ceil() as i64 + 1;
    for m in m_lo..=m_hi {
        let crit = half_pi_multiple(m)?;
        if crit.lo() <= arc.t_hi && crit.hi() >= arc.t_lo {
            match m.rem_euclid(4) {
                0 => re = re.hull(Scalar::ONE),
                1 => im = im.hull(Scalar::ONE),
                2 => re = re.hull(-Scalar::ONE),
                _ => im = im.hull(-Scalar::ONE),
            }
        }
    }
    Ok(ComplexRect::new(re, im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_examples() {
        let p = ComplexRect::point(1.0, 1.0).mul(ComplexRect::point(1.0, -1.0)).unwrap();
        assert!(p.contains(2.0, 0.0));
        let x = ComplexRect::new(Scalar::new(-1.0, 2.0), Scalar::new(0.5, 0.75));
        assert!(x.add(x.neg()).unwrap().contains(0.0, 0.0));
        let i2 = ComplexRect::point(0.0, 1.0).mul(ComplexRect::point(0.0, 1.0)).unwrap();
        assert!(i2.contains(-1.0, 0.0));
    }

    #[test]
    fn division_examples() {
        let q = ComplexRect::point(2.0, 0.0).div(ComplexRect::point(1.0, 0.0)).unwrap();
        assert!(q.contains(2.0, 0.0));
        let q = ComplexRect::point(1.0, 1.0).div(ComplexRect::point(0.0, 1.0)).unwrap();
        assert!(q.contains(1.0, -1.0));
        let around_zero = ComplexRect::new(Scalar::new(-0.1, 0.1), Scalar::new(-0.1, 0.1));
        assert!(ComplexRect::point(1.0, 0.0).div(around_zero).is_err());
        assert!(around_zero.recip().is_err());
    }

    #[test]
    fn modulus_examples() {
        let m = ComplexRect::point(3.0, 4.0).modulus().unwrap();
        assert!(m.hi() >= 5.0 && m.hi() <= 5.0 + 1e-14);
        assert!(m.lo() <= 5.0);
        assert_eq!(ComplexRect::ZERO.modulus().unwrap().hi(), 0.0);
        let sq = ComplexRect::new(Scalar::new(-1.0, 1.0), Scalar::new(-1.0, 1.0));
        let m = sq.modulus().unwrap();
        assert!(m.hi() >= std::f64::consts::SQRT_2);
        assert_eq!(m.lo(), 0.0);
    }

    #[test]
    fn sqrt_bounds_bracket() {
        for x in [2.0, 3.0, 0.5, 1e-100, 7.25e40] {
            let u = sqrt_ub(x).unwrap();
            let l = sqrt_lb(x).unwrap();
            assert!(l <= u);
            assert!(u * u >= x * (1.0 - 1e-15));
            assert!(l * l <= x * (1.0 + 1e-15));
        }
    }

    #[test]
    fn cos_sin_points() {
        for &t in &[0.0, 0.3, 1.0, 2.5, 3.14, 4.0, 5.5, 6.28, -1.2] {
            let (c, s) = cos_sin(t).unwrap();
            assert!(c.contains(t.cos()) || (c.lo() - t.cos()).abs() < 1e-15, "cos {t}");
            assert!(s.contains(t.sin()) || (s.lo() - t.sin()).abs() < 1e-15, "sin {t}");
            assert!(c.width() < 1e-14 && s.width() < 1e-14);
        }
    }

    #[test]
    fn arc_examples() {
        let z = unit_circle_enclosure(Arc::new(0.0, 0.0)).unwrap();
        assert!(z.contains(1.0, 0.0));

        let quarter = unit_circle_enclosure(Arc::new(0.0, half_pi_multiple(1).unwrap().hi())).unwrap();
        assert!(quarter.re.encloses(Scalar::new(0.0, 1.0)));
        assert!(quarter.im.encloses(Scalar::new(0.0, 1.0)));

        let eps = 2.0 * PI / 50000.0;
        let r = unit_circle_enclosure(Arc::new(0.0, eps)).unwrap();
        let delta = 1e-15;
        assert!(r.re.lo() >= eps.cos() - delta && r.re.hi() <= 1.0 + delta);
        assert!(r.im.lo() >= -delta && r.im.hi() <= eps + delta);
        assert!(r.contains(1.0, 0.0) && r.contains(eps.cos(), eps.sin()));
    }

    #[test]
    fn covering_tiles_circle() {
        let n = 7;
        let mut prev = 0.0;
        for i in 0..n {
            let a = Arc::of_covering(i, n);
            assert_eq!(a.t_lo, prev);
            prev = a.t_hi;
        }
        assert!(prev > 2.0 * PI);
    }
}
