use lorenz_renorm::cinterval::{cos_sin, unit_circle_enclosure, Arc, ComplexRect};
use lorenz_renorm::ilinalg;
use lorenz_renorm::oracle::{self, exact, RatPoly};
use lorenz_renorm::{FunctionBall, PolyRect, Scalar};
use proptest::prelude::*;

fn interval() -> impl Strategy<Value = Scalar> {
    (-1e6f64..1e6, 0f64..1.0).prop_map(|(a, w)| Scalar::new(a, a + w))
}

fn small_poly(max_len: usize, scale: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-scale..scale, 0..=max_len)
}

proptest! {
    #[test]
    fn mul_contains_endpoint_products(a in interval(), b in interval()) {
        let r = a.mul(b).unwrap();
        for x in [a.lo(), a.hi()] {
            for y in [b.lo(), b.hi()] {
                prop_assert!(oracle::contains(r, &(exact(x) * exact(y))));
            }
        }
    }

    #[test]
    fn add_sub_round_trip_contains(a in interval(), b in interval()) {
        let r = a.add(b).unwrap().sub(b).unwrap();
        prop_assert!(r.encloses(a));
    }

    #[test]
    fn abs_is_nonnegative_and_exact(a in interval()) {
        let r = a.abs();
        prop_assert!(r.lo() >= 0.0);
        prop_assert!(r.contains(a.lo().abs()) && r.contains(a.hi().abs()));
    }

    #[test]
    fn poly_mul_matches_exact(p in small_poly(6, 3.0), q in small_poly(6, 3.0)) {
        let r = PolyRect::from_points(&p).mul(&PolyRect::from_points(&q)).unwrap();
        let want = RatPoly(p.iter().map(|&c| exact(c)).collect())
            .mul(&RatPoly(q.iter().map(|&c| exact(c)).collect()));
        for (k, w) in want.0.iter().enumerate() {
            prop_assert!(oracle::contains(r.coeff(k), w));
        }
    }

    #[test]
    fn compose_of_points_contains_exact(p in small_poly(4, 1.0), q in small_poly(3, 0.3)) {
        let d = 4;
        let f = FunctionBall::from_points(&p, d);
        let g = FunctionBall::from_points(&q, d);
        if let Ok(r) = f.compose(&g) {
            let fx = RatPoly(p.iter().map(|&c| exact(c)).collect());
            let gx = RatPoly(q.iter().map(|&c| exact(c)).collect());
            prop_assert!(oracle::ball_contains(&r, &fx.compose(&gx)));
        }
    }

    #[test]
    fn cos_sin_encloses_float_values(t in -10.0f64..10.0) {
        let (c, s) = cos_sin(t).unwrap();
        prop_assert!(c.width() < 1e-14 && s.width() < 1e-14);
        prop_assert!((c.midpoint() - t.cos()).abs() < 1e-15);
        prop_assert!((s.midpoint() - t.sin()).abs() < 1e-15);
    }

    #[test]
    fn arc_enclosure_contains_interior_points(lo in 0.0f64..6.3, w in 0.0f64..0.5, u in 0.0f64..=1.0) {
        let arc = Arc::new(lo, lo + w);
        let z = unit_circle_enclosure(arc).unwrap();
        let t = lo + u * w;
        prop_assert!(z.re.lo() <= t.cos() + 1e-15 && t.cos() - 1e-15 <= z.re.hi());
        prop_assert!(z.im.lo() <= t.sin() + 1e-15 && t.sin() - 1e-15 <= z.im.hi());
    }

    #[test]
    fn complex_solve_real_axis_matches_real_solve(
        a in prop::collection::vec(-1.0f64..1.0, 9),
        b in prop::collection::vec(-1.0f64..1.0, 3),
    ) {
        let m: Vec<Vec<Scalar>> = (0..3)
            .map(|i| (0..3).map(|j| Scalar::point(a[3 * i + j] + if i == j { 4.0 } else { 0.0 })).collect())
            .collect();
        let rhs: Vec<Scalar> = b.iter().copied().map(Scalar::point).collect();
        let x = ilinalg::solve(&m, &rhs).unwrap();
        let mc: Vec<Vec<ComplexRect>> = m.iter().map(|r| r.iter().map(|&c| ComplexRect::real(c)).collect()).collect();
        let rc: Vec<ComplexRect> = rhs.iter().map(|&c| ComplexRect::real(c)).collect();
        let xc = ilinalg::solve(&mc, &rc).unwrap();
        for (r, c) in x.iter().zip(&xc) {
            prop_assert!(c.re.contains(r.midpoint()) && c.im.contains(0.0));
        }
    }
}

#[test]
fn arc_covering_has_no_gaps() {
    let n = 1000;
    let mut prev_hi = 0.0;
    for k in 0..n {
        let a = Arc::of_covering(k, n);
        assert_eq!(a.t_lo, prev_hi);
        prev_hi = a.t_hi;
    }
    // 2 * next_up(pi) is above the real 2 pi
    assert!(prev_hi >= 2.0 * std::f64::consts::PI.next_up());
}
