//! End-to-end certification: refine a fixed-point guess, build `G`, bound
//! `|Phi(F0) - F0|` and `|DPhi|` on a ball, check the contraction inequality
//! and bound the resolvent over the unit circle.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cinterval::{unit_circle_enclosure, Arc, ComplexRect};
use crate::error::{Error, Result};
use crate::funcball::{norm_tangents, opnorm, FunctionBall, LorenzPair};
use crate::ilinalg::{self, Matrix};
use crate::poly::PolyRect;
use crate::renorm::{self, Config};
use crate::scalar::Scalar;

pub const FORMAT: &str = "lorenz-renorm-certificate/1";

/// Everything a run depends on. Two runs with equal inputs produce
/// identical certificates.
#[derive(Clone, Debug, PartialEq)]
pub struct CertInput {
    pub config: Config,
    /// Textual form of `config.sf`, kept for the certificate.
    pub sf_text: String,
    pub sg_text: String,
    pub radius: f64,
    pub guess: LorenzPair,
    pub newton_iters: usize,
    pub arcs: usize,
    pub hyper_bound: f64,
    pub theta_bound: f64,
    pub eps_bound: f64,
}

impl Default for CertInput {
    fn default() -> Self {
        CertInput::new(13, "2.2", "0.5").expect("default inputs are valid")
    }
}

impl CertInput {
    /// Default thresholds and guess with the given degree and domain radii.
    pub fn new(d: usize, sf: &str, sg: &str) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("tail degree d={d} must be at least 2")));
        }
        let config = Config {
            d,
            sf: Scalar::from_decimal(sf)?,
            sg: Scalar::from_decimal(sg)?,
        };
        for (name, s) in [("sf", config.sf), ("sg", config.sg)] {
            if !(s.lo() > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive")));
            }
        }
        let dec = |t: &str| Scalar::from_decimal(t);
        let guess = LorenzPair::new(
            FunctionBall::new(PolyRect::new(vec![dec("-0.75")?, dec("-2.5")?]), Scalar::ZERO, d),
            FunctionBall::new(PolyRect::new(vec![dec("6.2")?, dec("-2.1")?]), Scalar::ZERO, d),
        );
        Ok(CertInput {
            config,
            sf_text: sf.to_string(),
            sg_text: sg.to_string(),
            radius: 1e-7,
            guess,
            newton_iters: 8,
            arcs: 50_000,
            hyper_bound: 0.9,
            theta_bound: 0.2,
            eps_bound: 5e-9,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::InvalidInput(format!("radius {} must be positive", self.radius)));
        }
        if self.arcs == 0 {
            return Err(Error::InvalidInput("arc count must be positive".into()));
        }
        Ok(())
    }
}

/// Refined approximate fixed point, the matrix `G` at it, and the step
/// sizes `|x_{k+1} - x_k|` of the refinement.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub f0: LorenzPair,
    pub gamma: Matrix<Scalar>,
    pub residuals: Vec<f64>,
}

/// `x <- approx(Phi_{G(x)}(x))`, `iters` times, starting from `guess`.
pub fn refine_fixed_point(cfg: &Config, guess: &LorenzPair, iters: usize) -> Result<FixedPoint> {
    let mut x = guess.clone();
    let mut residuals = Vec::with_capacity(iters);
    for _ in 0..iters {
        let m = renorm::gamma(cfg, &x)?;
        let next = renorm::op_phi(cfg, &m, &x)?.approx();
        residuals.push(next.dist(&x)?.upper());
        x = next;
    }
    let gamma = renorm::gamma(cfg, &x)?;
    Ok(FixedPoint { f0: x, gamma, residuals })
}

/// Upper bound on `|F0 - Phi(F0)|`.
pub fn estimate_eps(cfg: &Config, fp: &FixedPoint) -> Result<f64> {
    Ok(fp.f0.dist(&renorm::op_phi(cfg, &fp.gamma, &fp.f0)?)?.upper())
}

/// Upper bound on `|DPhi_F|` over every `F` within `radius` of `F0`.
pub fn estimate_theta(cfg: &Config, fp: &FixedPoint, radius: f64) -> Result<f64> {
    let x = fp.f0.ball(radius)?;
    opnorm(cfg.d, |ds| renorm::op_dphi(cfg, &fp.gamma, &x, ds))
}

/// `eps < (1 - theta) r`, decided in interval arithmetic.
pub fn check_prop41(eps: f64, theta: f64, radius: f64) -> Result<bool> {
    if !(theta < 1.0) {
        return Ok(false);
    }
    let rhs = Scalar::ONE.sub(Scalar::point(theta))?.mul(Scalar::point(radius))?;
    Ok(Scalar::point(eps).certainly_lt(rhs))
}

/// Midpoint eigenvalues of `G`, largest modulus first. Floating point only;
/// not part of the validated claims.
pub fn gamma_eigenvalues(gamma: &[Vec<Scalar>]) -> Vec<(f64, f64)> {
    let n = gamma.len();
    let m = DMatrix::from_fn(n, n, |i, j| gamma[i][j].midpoint());
    let mut ev: Vec<(f64, f64)> = m
        .complex_eigenvalues()
        .iter()
        .map(|z| (z.re, z.im))
        .collect();
    ev.sort_by(|a, b| b.0.hypot(b.1).total_cmp(&a.0.hypot(a.1)).then(b.0.total_cmp(&a.0)));
    ev
}

/// Which arcs of the covering to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcSelection {
    All,
    /// `count` distinct arcs drawn with a seeded generator. Evidence only.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperReport {
    pub arcs_total: usize,
    pub selection: ArcSelection,
    pub arcs_checked: usize,
    /// Largest norm bound over the checked arcs; infinite if some arc
    /// could not be resolved.
    pub max_bound: f64,
    pub worst_arc: usize,
    /// Arcs whose bound is not below the threshold.
    pub failures: usize,
    pub threshold: f64,
}

impl HyperReport {
    pub fn pass(&self) -> bool {
        self.failures == 0 && self.max_bound < self.threshold
    }
}

/// Right-hand sides `(G - DT_F) ds` over the ball, split into polynomial
/// part (interleaved, length `2d`) and the two tail bounds.
struct ResolventData {
    m: Matrix<ComplexRect>,
    rhs: Vec<Vec<ComplexRect>>,
    tails: Vec<(Scalar, Scalar)>,
}

fn resolvent_data(cfg: &Config, fp: &FixedPoint, radius: f64) -> Result<ResolventData> {
    let d = cfg.d;
    let x = fp.f0.ball(radius)?;
    let ds = norm_tangents(d);
    let dts = renorm::op_dt(cfg, &x, &ds)?;
    let mut rhs = Vec::with_capacity(ds.len());
    let mut tails = Vec::with_capacity(ds.len());
    for (dt, dx) in dts.iter().zip(&ds) {
        let mx = renorm::lift_poly_op(cfg, Scalar::ZERO, |v| ilinalg::apply(&fp.gamma, v), dx)?;
        let diff = mx.sub(dt)?.split(d)?;
        rhs.push(
            renorm::interleave_poly(&diff, d)
                .into_iter()
                .map(ComplexRect::real)
                .collect(),
        );
        tails.push((diff.f.e, diff.g.e));
    }
    let m = fp
        .gamma
        .iter()
        .map(|row| row.iter().map(|&c| ComplexRect::real(c)).collect())
        .collect();
    Ok(ResolventData { m, rhs, tails })
}

/// Bound on `|(G - z)^{-1} (G - DT_F)|` over every `z` in the arc and every
/// `F` in the ball. The tail block of `(G - z)^{-1}` is `-1/z`, of modulus
/// one on the circle, so tail bounds pass through unchanged.
fn arc_bound(data: &ResolventData, arc: Arc) -> Result<f64> {
    let z = unit_circle_enclosure(arc)?;
    let mz = ilinalg::subtract_diag(&data.m, &z)?;
    let sols = ilinalg::solve_many(&mz, &data.rhs)?;
    let mut worst = f64::NEG_INFINITY;
    for (x, &(ef, eg)) in sols.iter().zip(&data.tails) {
        let (xf, xg) = ilinalg::uninterleave(x)?;
        let half = |v: &[ComplexRect], e: Scalar| -> Result<Scalar> {
            v.iter()
                .try_fold(Scalar::ZERO, |acc, c| acc.add(c.modulus()?.abs()))?
                .add(Scalar::ONE.mul(e)?)
        };
        let total = half(&xf, ef)?.add(half(&xg, eg)?)?;
        worst = worst.max(total.upper());
    }
    Ok(worst)
}

/// Checks the resolvent bound on the selected arcs of an `n_arcs` covering
/// of the unit circle, using `jobs` worker threads. The report does not
/// depend on `jobs`.
pub fn hyperbolicity_check(
    cfg: &Config,
    fp: &FixedPoint,
    radius: f64,
    n_arcs: usize,
    selection: ArcSelection,
    threshold: f64,
    jobs: usize,
) -> Result<HyperReport> {
    if n_arcs == 0 {
        return Err(Error::InvalidInput("arc count must be positive".into()));
    }
    let indices: Vec<usize> = match selection {
        ArcSelection::All => (0..n_arcs).collect(),
        ArcSelection::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut v = sample(&mut rng, n_arcs, count.min(n_arcs)).into_vec();
            v.sort_unstable();
            v
        }
    };
    let data = resolvent_data(cfg, fp, radius)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
    let bounds: Vec<f64> = pool.install(|| {
        indices
            .par_iter()
            .map(|&k| arc_bound(&data, Arc::of_covering(k, n_arcs)).unwrap_or(f64::INFINITY))
            .collect()
    });
    let mut max_bound = f64::NEG_INFINITY;
    let mut worst_arc = 0;
    let mut failures = 0;
    for (&k, &b) in indices.iter().zip(&bounds) {
        if !(b < threshold) {
            failures += 1;
        }
        if b > max_bound {
            max_bound = b;
            worst_arc = k;
        }
    }
    Ok(HyperReport {
        arcs_total: n_arcs,
        selection,
        arcs_checked: indices.len(),
        max_bound,
        worst_arc,
        failures,
        threshold,
    })
}

/// Outcome of the contraction part of a run.
#[derive(Clone, Debug)]
pub struct CertResult {
    pub fixed_point: FixedPoint,
    pub eps: f64,
    pub theta: f64,
    pub prop41: bool,
    pub hyper: Option<HyperReport>,
}

impl CertResult {
    pub fn eps_ok(&self, input: &CertInput) -> bool {
        self.eps < input.eps_bound
    }

    pub fn theta_ok(&self, input: &CertInput) -> bool {
        self.theta < input.theta_bound
    }

    pub fn certified(&self, input: &CertInput) -> bool {
        self.eps_ok(input)
            && self.theta_ok(input)
            && self.prop41
            && self.hyper.as_ref().map_or(true, HyperReport::pass)
    }
}

/// Refinement, `eps`, `theta` and the contraction inequality.
pub fn run(input: &CertInput) -> Result<CertResult> {
    input.validate()?;
    let cfg = &input.config;
    let fixed_point = refine_fixed_point(cfg, &input.guess, input.newton_iters)?;
    let eps = estimate_eps(cfg, &fixed_point)?;
    let theta = estimate_theta(cfg, &fixed_point, input.radius)?;
    let prop41 = check_prop41(eps, theta, input.radius)?;
    Ok(CertResult {
        fixed_point,
        eps,
        theta,
        prop41,
        hyper: None,
    })
}

/// The three summary lines, formatted like Haskell's `show` for doubles.
pub fn summary_lines(radius: f64, eps: f64, theta: f64) -> String {
    format!(
        "radius      = {}\n|Phi(f)-f| < {}\n|DPhi|     < {}\n",
        show_double(radius),
        show_double(eps),
        show_double(theta)
    )
}

/// Formats a double the way Haskell's `show` does: positional notation for
/// magnitudes in `[0.1, 10^7)`, otherwise `d.ddde<exp>`, always with at
/// least one fractional digit.
pub fn show_double(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "Infinity".into() } else { "-Infinity".into() };
    }
    if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        return format!("-{}", show_double(-x));
    }
    if x == 0.0 {
        return "0.0".into();
    }
    // shortest round-trip digits and decimal exponent
    let sci = format!("{x:e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    if (0.1..1e7).contains(&x) {
        let point = exp + 1;
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), digits)
        } else {
            let point = point as usize;
            if digits.len() <= point {
                format!("{}{}.0", digits, "0".repeat(point - digits.len()))
            } else {
                format!("{}.{}", &digits[..point], &digits[point..])
            }
        }
    } else {
        let (head, tail) = digits.split_at(1);
        let tail = if tail.is_empty() { "0" } else { tail };
        format!("{head}.{tail}e{exp}")
    }
}

fn fmt_scalar(s: Scalar) -> String {
    format!("[{:e}, {:e}]", s.lo(), s.hi())
}

fn fmt_poly(p: &PolyRect) -> String {
    let parts: Vec<String> = p.coeffs().iter().map(|&c| fmt_scalar(c)).collect();
    format!("[{}]", parts.join(", "))
}

/// Deterministic `key = value` certificate. No timestamps or host data.
pub fn certificate(input: &CertInput, result: &CertResult) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("format", FORMAT.into());
    kv("implementation", format!("lorenz-renorm {}", env!("CARGO_PKG_VERSION")));
    kv("d", input.config.d.to_string());
    kv("sf", format!("{} {}", input.sf_text, fmt_scalar(input.config.sf)));
    kv("sg", format!("{} {}", input.sg_text, fmt_scalar(input.config.sg)));
    kv("radius", format!("{:e}", input.radius));
    kv("guess.f", fmt_poly(&input.guess.f.p));
    kv("guess.g", fmt_poly(&input.guess.g.p));
    kv("newton_iters", input.newton_iters.to_string());
    for (k, r) in result.fixed_point.residuals.iter().enumerate() {
        kv(&format!("residual.{k}"), format!("{r:e}"));
    }
    kv("f0.f", fmt_poly(&result.fixed_point.f0.f.p));
    kv("f0.g", fmt_poly(&result.fixed_point.f0.g.p));
    kv("eps", format!("{:e}", result.eps));
    kv("eps.bound", format!("{:e}", input.eps_bound));
    kv("eps.pass", result.eps_ok(input).to_string());
    kv("theta", format!("{:e}", result.theta));
    kv("theta.bound", format!("{:e}", input.theta_bound));
    kv("theta.pass", result.theta_ok(input).to_string());
    kv("contraction.pass", result.prop41.to_string());
    if let Some(h) = &result.hyper {
        match h.selection {
            ArcSelection::All => kv("hyper.mode", "full".into()),
            ArcSelection::Sample { count, seed } => {
                kv("hyper.mode", "sampled".into());
                kv("hyper.sample", count.to_string());
                kv("hyper.seed", seed.to_string());
            }
        }
        kv("hyper.arcs", h.arcs_total.to_string());
        kv("hyper.arcs_checked", h.arcs_checked.to_string());
        kv("hyper.max_bound", format!("{:e}", h.max_bound));
        kv("hyper.worst_arc", h.worst_arc.to_string());
        kv("hyper.threshold", format!("{:e}", h.threshold));
        kv("hyper.failures", h.failures.to_string());
        kv("hyper.pass", h.pass().to_string());
    }
    let status = if result.certified(input) {
        match &result.hyper {
            Some(h) if h.selection != ArcSelection::All => "certified (hyperbolicity sampled, not proved)",
            _ => "certified",
        }
    } else {
        "failed"
    };
    kv("status", status.into());
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn show_double_matches_haskell() {
        assert_eq!(show_double(1e-7), "1.0e-7");
        assert_eq!(show_double(4.830032057738462e-9), "4.830032057738462e-9");
        assert_eq!(show_double(0.1584543808202988), "0.1584543808202988");
        assert_eq!(show_double(0.1), "0.1");
        assert_eq!(show_double(0.05), "5.0e-2");
        assert_eq!(show_double(1.0), "1.0");
        assert_eq!(show_double(123.5), "123.5");
        assert_eq!(show_double(1e7), "1.0e7");
        assert_eq!(show_double(-2.5e-3), "-2.5e-3");
        assert_eq!(show_double(0.0), "0.0");
    }

    #[test]
    fn prop41_examples() {
        assert!(check_prop41(4.8e-9, 0.16, 1e-7).unwrap());
        assert!(!check_prop41(9.0e-8, 0.16, 1e-7).unwrap());
        assert!(!check_prop41(1e-9, 1.0, 1e-7).unwrap());
    }

    #[test]
    fn input_validation() {
        assert!(CertInput::new(1, "2.2", "0.5").is_err());
        assert!(CertInput::new(13, "-1", "0.5").is_err());
        assert!(CertInput::new(13, "abc", "0.5").is_err());
        let mut i = CertInput::default();
        i.radius = 0.0;
        assert!(i.validate().is_err());
    }

    #[test]
    fn eigenvalues_sorted_by_modulus() {
        let m: Matrix<Scalar> = vec![
            vec![Scalar::point(0.5), Scalar::ZERO],
            vec![Scalar::ZERO, Scalar::point(-3.0)],
        ];
        let ev = gamma_eigenvalues(&m);
        assert!((ev[0].0 + 3.0).abs() < 1e-12 && (ev[1].0 - 0.5).abs() < 1e-12);
    }
}
