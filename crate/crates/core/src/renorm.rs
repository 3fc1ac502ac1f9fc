//! The renormalization operator `T` for Lorenz maps of combinatorial type
//! `({0, 1}, {1, 0, 0})` with critical exponent 2, its derivative, and the
//! simplified Newton operator `Phi = (G - I)^{-1} (G - T)`.
//!
//! A Lorenz map is represented by a pair `(f, g)` in coordinates where both
//! branches are analytic on the unit disk. In these coordinates
//!
//! ```text
//! lambda = -f((f(0)^2 - 1) / s)
//! T(f, g) = (f6, g8)
//! ```
//!
//! where `f6`, `g8` are built from the chain of compositions in [`main_op`].
//! Every composition checks that the inner function has norm below one and
//! every evaluation checks that its argument lies in the unit disk, so a
//! successful evaluation on a rectangle also proves `T` is well-defined
//! there.

use crate::error::{Error, Result};
use crate::funcball::{basis, FunctionBall, LorenzPair};
use crate::ilinalg::{self, Matrix};
use crate::poly::PolyRect;
use crate::scalar::Scalar;

/// Tail degree and domain radii of the two branches.
#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub d: usize,
    /// Radius `s` of the domain of the left branch.
    pub sf: Scalar,
    /// Radius `t` of the domain of the right branch.
    pub sg: Scalar,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            d: 13,
            sf: Scalar::from_decimal("2.2").expect("valid literal"),
            sg: Scalar::point(0.5),
        }
    }
}

/// `lambda(f) = -f((f(0)^2 - 1) / s)`; depends on `f` only.
pub fn lambda(cfg: &Config, f: &FunctionBall) -> Result<Scalar> {
    let f0 = f.eval(Scalar::ZERO)?;
    let y = f0.pow(2)?.sub(Scalar::ONE)?.div(cfg.sf)?;
    Ok(-f.eval(y)?)
}

/// Derivative of [`lambda`] in direction `df`:
/// `-2/s f(0) df(0) Df(y) - df(y)` with `y = (f(0)^2 - 1)/s`.
///
/// `Df` is taken on the disk of radius `|y|` stepped one float outward, since
/// differentiation needs an open disk strictly inside the unit disk.
pub fn dlambda(cfg: &Config, f: &FunctionBall, df: &FunctionBall) -> Result<Scalar> {
    let f0 = f.eval(Scalar::ZERO)?;
    let y = f0.pow(2)?.sub(Scalar::ONE)?.div(cfg.sf)?;
    let mu = y.abs().enlarge()?;
    let two_over_s = Scalar::from_int(2).div(cfg.sf)?;
    let first = two_over_s
        .mul(f0)?
        .mul(df.eval(Scalar::ZERO)?)?
        .mul(f.deriv(mu)?.eval(y)?)?;
    (-first).sub(df.eval(y)?)
}

/// Intermediate functions of the forward chain, shared by every tangent.
struct Chain {
    l: Scalar,
    pf: FunctionBall,
    pg: FunctionBall,
    f1: FunctionBall,
    f2: FunctionBall,
    f3: FunctionBall,
    f4: FunctionBall,
    f5: FunctionBall,
    g1: FunctionBall,
    g2: FunctionBall,
    g3: FunctionBall,
    g4: FunctionBall,
    g5: FunctionBall,
    g6: FunctionBall,
    f6: FunctionBall,
    g8: FunctionBall,
}

// g7(0) = -1 and dg7(0) = 0 for every (f, g): g2(0) = 0 forces
// g6(0) = f(y) = -lambda. Dividing by z in g8 is therefore lshift. An
// enclosure that misses the expected constant means the chain is wrong.
fn check_constant(h: &FunctionBall, expected: f64) -> Result<()> {
    let c0 = h.p.coeff(0);
    if c0.contains(expected) {
        Ok(())
    } else {
        Err(Error::ShiftConstantMismatch {
            lo: c0.lo(),
            hi: c0.hi(),
            expected,
        })
    }
}

fn forward(cfg: &Config, x: &LorenzPair) -> Result<Chain> {
    let d = cfg.d;
    let (f, g) = (&x.f, &x.g);
    let l = lambda(cfg, f)?;
    let l2 = l.pow(2)?;
    let pf = FunctionBall::new(
        PolyRect::new(vec![l2.sub(Scalar::ONE)?.div(cfg.sf)?, l2]),
        Scalar::ZERO,
        d,
    );
    let pg = FunctionBall::new(PolyRect::new(vec![Scalar::ZERO, l2]), Scalar::ZERO, d);

    let g1 = g.compose(&pg)?;
    let g2 = pg.mul(&g1)?.scale_mul(cfg.sg)?;
    let f1 = f.compose(&pf)?;
    let g3 = g2.mul(&g2.add_int(-2)?)?.scale_div(cfg.sf)?;
    let f2 = f1.pow(2)?;
    let g4 = f.compose(&g3)?;
    let f3 = f2.scale_div(cfg.sg)?;
    let g5 = g4.pow(2)?.add_int(-1)?.scale_div(cfg.sf)?;
    let f4 = g.compose(&f3)?;
    let g6 = f.compose(&g5)?;
    let f5 = f2.mul(&f4)?.add_int(-1)?;
    let g7 = g6.scale_div(l)?;
    let f6 = f5.scale_div(l)?;
    check_constant(&g7, -1.0)?;
    let g8 = g7.lshift()?.scale_div(cfg.sg)?;

    Ok(Chain {
        l,
        pf,
        pg,
        f1,
        f2,
        f3,
        f4,
        f5,
        g1,
        g2,
        g3,
        g4,
        g5,
        g6,
        f6,
        g8,
    })
}

fn tangent(cfg: &Config, x: &LorenzPair, c: &Chain, dx: &LorenzPair) -> Result<LorenzPair> {
    let d = cfg.d;
    let (f, g) = (&x.f, &x.g);
    let (df, dg) = (&dx.f, &dx.g);
    let l = c.l;

    let dl = dlambda(cfg, f, df)?;
    let k = Scalar::from_int(2).mul(l)?.mul(dl)?;
    let dpf = FunctionBall::new(
        PolyRect::new(vec![k]).mul(&PolyRect::new(vec![Scalar::ONE.div(cfg.sf)?, Scalar::ONE]))?,
        Scalar::ZERO,
        d,
    );
    let dpg = FunctionBall::new(PolyRect::new(vec![Scalar::ZERO, k]), Scalar::ZERO, d);
    let dl_over_l2 = dl.div(l.pow(2)?)?;

    let dg1 = FunctionBall::dcompose(g, &c.pg, dg, &dpg)?;
    let dg2 = dpg.mul(&c.g1)?.add(&c.pg.mul(&dg1)?)?.scale_mul(cfg.sg)?;
    let df1 = FunctionBall::dcompose(f, &c.pf, df, &dpf)?;
    // 2 dg2 (g2 - 1) / s, i.e. dg2 (g2 - 2)/s + g2 dg2 / s
    let dg3 = dg2.mul(&c.g2)?.sub(&dg2)?.int_mul(2)?.scale_div(cfg.sf)?;
    let df2 = c.f1.int_mul(2)?.mul(&df1)?;
    let dg4 = FunctionBall::dcompose(f, &c.g3, df, &dg3)?;
    let df3 = df2.scale_div(cfg.sg)?;
    let dg5 = c.g4.int_mul(2)?.mul(&dg4)?.scale_div(cfg.sf)?;
    let df4 = FunctionBall::dcompose(g, &c.f3, dg, &df3)?;
    let dg6 = FunctionBall::dcompose(f, &c.g5, df, &dg5)?;
    let df5 = df2.mul(&c.f4)?.add(&c.f2.mul(&df4)?)?;
    let dg7 = dg6.scale_div(l)?.sub(&c.g6.scale_mul(dl_over_l2)?)?;
    let df6 = df5.scale_div(l)?.sub(&c.f5.scale_mul(dl_over_l2)?)?;
    check_constant(&dg7, 0.0)?;
    let dg8 = dg7.lshift()?.scale_div(cfg.sg)?;

    Ok(LorenzPair::new(df6.split(d)?, dg8.split(d)?))
}

/// Returns `T(x)` together with `DT_x dx` for every tangent in `ds`.
///
/// Both outputs are split at `d`, so polynomial parts have degree `< d`.
pub fn main_op(cfg: &Config, x: &LorenzPair, ds: &[LorenzPair]) -> Result<(LorenzPair, Vec<LorenzPair>)> {
    debug_assert_eq!(x.degree(), cfg.d);
    let chain = forward(cfg, x)?;
    let tx = LorenzPair::new(chain.f6.split(cfg.d)?, chain.g8.split(cfg.d)?);
    let dts = ds
        .iter()
        .map(|dx| tangent(cfg, x, &chain, dx))
        .collect::<Result<Vec<_>>>()?;
    Ok((tx, dts))
}

pub fn op_t(cfg: &Config, x: &LorenzPair) -> Result<LorenzPair> {
    Ok(main_op(cfg, x, &[])?.0)
}

pub fn op_dt(cfg: &Config, x: &LorenzPair, ds: &[LorenzPair]) -> Result<Vec<LorenzPair>> {
    Ok(main_op(cfg, x, ds)?.1)
}

/// Both polynomial parts padded to exactly `d` coefficients and interleaved.
pub fn interleave_poly(x: &LorenzPair, d: usize) -> Vec<Scalar> {
    ilinalg::interleave(&x.f.p.padded(d), &x.g.p.padded(d))
}

/// Finite-rank approximation of `DT_x`: column `j` is the interleaved
/// midpoint polynomial part of `DT_x eta_j`. Stored row-major.
pub fn gamma(cfg: &Config, x: &LorenzPair) -> Result<Matrix<Scalar>> {
    let d = cfg.d;
    let basis: Vec<LorenzPair> = (0..2 * d).map(|k| basis(k, d)).collect();
    let columns: Vec<Vec<Scalar>> = op_dt(cfg, x, &basis)?
        .iter()
        .map(|c| interleave_poly(&c.approx(), d))
        .collect();
    Ok((0..2 * d)
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect())
}

/// Applies the block operator `[[M, 0], [0, s I]]` to `x`: the polynomial
/// parts (split at `d`) go through `op` as one interleaved vector, the tail
/// bounds are scaled by `s`.
pub fn lift_poly_op<F>(cfg: &Config, s: Scalar, op: F, x: &LorenzPair) -> Result<LorenzPair>
where
    F: FnOnce(&[Scalar]) -> Result<Vec<Scalar>>,
{
    let d = cfg.d;
    let split = x.split(d)?;
    let (pf, pg) = ilinalg::uninterleave(&op(&interleave_poly(&split, d))?)?;
    Ok(LorenzPair::new(
        FunctionBall::new(PolyRect::new(pf), s.mul(split.f.e)?, d),
        FunctionBall::new(PolyRect::new(pg), s.mul(split.g.e)?, d),
    ))
}

/// One step of `x -> (M - I)^{-1} (M x - tx)`, where `tx` is `T x` (or
/// `DT` applied to the tangent `x`).
///
/// `M` has finite rank, so its lift kills tail errors (`s = 0`); the tail
/// block of `(M - I)^{-1}` is `-I`, so that lift keeps them (`s = 1`).
pub fn newton_step(cfg: &Config, m: &[Vec<Scalar>], tx: &LorenzPair, x: &LorenzPair) -> Result<LorenzPair> {
    let m_minus_i = ilinalg::subtract_diag(m, &Scalar::ONE)?;
    newton_step_with(cfg, m, &m_minus_i, tx, x)
}

fn newton_step_with(
    cfg: &Config,
    m: &[Vec<Scalar>],
    m_minus_i: &[Vec<Scalar>],
    tx: &LorenzPair,
    x: &LorenzPair,
) -> Result<LorenzPair> {
    let mx = lift_poly_op(cfg, Scalar::ZERO, |v| ilinalg::apply(m, v), x)?;
    lift_poly_op(cfg, Scalar::ONE, |v| ilinalg::solve(m_minus_i, v), &mx.sub(tx)?)
}

/// `Phi x = (M - I)^{-1} (M - T) x`.
pub fn op_phi(cfg: &Config, m: &[Vec<Scalar>], x: &LorenzPair) -> Result<LorenzPair> {
    newton_step(cfg, m, &op_t(cfg, x)?, x)
}

/// `DPhi_x dx = (M - I)^{-1} (M - DT_x) dx` for every tangent in `ds`.
pub fn op_dphi(cfg: &Config, m: &[Vec<Scalar>], x: &LorenzPair, ds: &[LorenzPair]) -> Result<Vec<LorenzPair>> {
    let m_minus_i = ilinalg::subtract_diag(m, &Scalar::ONE)?;
    op_dt(cfg, x, ds)?
        .iter()
        .zip(ds)
        .map(|(a, b)| newton_step_with(cfg, m, &m_minus_i, a, b))
        .collect()
}
