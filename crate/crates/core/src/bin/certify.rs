use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use lorenz_renorm::certify::{self, ArcSelection, CertInput};
use lorenz_renorm::selftest;
use lorenz_renorm::{Error, FunctionBall, LorenzPair, PolyRect, Scalar};

/// Validated contraction and hyperbolicity estimates for the Lorenz
/// renormalization fixed point.
#[derive(Parser)]
#[command(name = "certify", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Tail degree of the function balls.
    #[arg(long, default_value_t = 13, global = true)]
    d: usize,
    /// Domain radius of the left branch, as a decimal literal.
    #[arg(long, default_value = "2.2", global = true)]
    sf: String,
    /// Domain radius of the right branch, as a decimal literal.
    #[arg(long, default_value = "0.5", global = true)]
    sg: String,
    /// Radius of the ball on which the derivative is bounded.
    #[arg(long, default_value_t = 1e-7, global = true)]
    radius: f64,
    /// Newton refinement steps applied to the initial guess.
    #[arg(long, default_value_t = 8, global = true)]
    iters: usize,
    /// Initial guess for the left branch: comma-separated decimal coefficients.
    #[arg(long, default_value = "-0.75,-2.5", global = true, allow_hyphen_values = true)]
    guess_f: String,
    /// Initial guess for the right branch.
    #[arg(long, default_value = "6.2,-2.1", global = true, allow_hyphen_values = true)]
    guess_g: String,
    /// Where to write the certificate.
    #[arg(long, default_value = "certificate.txt", global = true)]
    certificate: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Refine the fixed point and check the contraction estimates.
    Run,
    /// Bound the resolvent of the linearization over the unit circle.
    Hyperbolicity {
        /// Number of arcs covering the circle.
        #[arg(long, default_value_t = 50_000)]
        arcs: usize,
        /// Check only this many randomly chosen arcs (evidence, not proof).
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Floating-point eigenvalues of the midpoint of G.
    Eig,
    /// Randomized soundness suites.
    Selftest {
        #[arg(long, default_value_t = 100_000)]
        scalar_trials: usize,
        #[arg(long, default_value_t = 10_000)]
        funcball_trials: usize,
        #[arg(long, default_value_t = 1_000)]
        solve_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Outcome {
    Pass,
    Fail(String),
}

fn parse_guess(text: &str, d: usize) -> Result<FunctionBall, Error> {
    let coeffs = text
        .split(',')
        .map(|t| Scalar::from_decimal(t.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FunctionBall::new(PolyRect::new(coeffs), Scalar::ZERO, d))
}

fn input(c: &Common) -> Result<CertInput, Error> {
    let mut input = CertInput::new(c.d, &c.sf, &c.sg)?;
    input.guess = LorenzPair::new(parse_guess(&c.guess_f, c.d)?, parse_guess(&c.guess_g, c.d)?);
    input.radius = c.radius;
    input.newton_iters = c.iters;
    input.validate()?;
    Ok(input)
}

fn write_certificate(path: &PathBuf, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write certificate {}: {e}", path.display()))?;
    eprintln!("certificate written to {}", path.display());
    Ok(())
}

fn contraction_failures(input: &CertInput, r: &certify::CertResult) -> Vec<String> {
    let mut failed = Vec::new();
    if !r.eps_ok(input) {
        failed.push(format!("eps {:e} is not below {:e}", r.eps, input.eps_bound));
    }
    if !r.theta_ok(input) {
        failed.push(format!("theta {:e} is not below {:e}", r.theta, input.theta_bound));
    }
    if !r.prop41 {
        failed.push("contraction inequality eps < (1 - theta) r does not hold".into());
    }
    failed
}

fn execute(cli: &Cli) -> Result<Outcome, Error> {
    let c = &cli.common;
    match &cli.command {
        Command::Run => {
            let input = input(c)?;
            let t = Instant::now();
            let r = certify::run(&input)?;
            print!("{}", certify::summary_lines(input.radius, r.eps, r.theta));
            eprintln!("elapsed {:.2?}", t.elapsed());
            write_certificate(&c.certificate, &certify::certificate(&input, &r)).map_err(Error::InvalidInput)?;
            let failed = contraction_failures(&input, &r);
            Ok(if failed.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(failed.join("; "))
            })
        }
        Command::Hyperbolicity {
            arcs,
            sample,
            seed,
            jobs,
        } => {
            let mut input = input(c)?;
            input.arcs = *arcs;
            input.validate()?;
            let t = Instant::now();
            let mut r = certify::run(&input)?;
            let selection = match sample {
                Some(count) => ArcSelection::Sample { count: *count, seed: *seed },
                None => ArcSelection::All,
            };
            let h = certify::hyperbolicity_check(
                &input.config,
                &r.fixed_point,
                input.radius,
                input.arcs,
                selection,
                input.hyper_bound,
                *jobs,
            )?;
            println!(
                "arcs checked {} of {}, max bound {} (threshold {}), worst arc {}",
                h.arcs_checked,
                h.arcs_total,
                certify::show_double(h.max_bound),
                certify::show_double(h.threshold),
                h.worst_arc
            );
            if selection != ArcSelection::All {
                println!("sampled run: evidence only, not a proof");
            }
            eprintln!("elapsed {:.2?}", t.elapsed());
            let pass = h.pass();
            let failures = h.failures;
            r.hyper = Some(h);
            write_certificate(&c.certificate, &certify::certificate(&input, &r)).map_err(Error::InvalidInput)?;
            Ok(if pass {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("hyperbolicity: {failures} arcs not below the threshold"))
            })
        }
        Command::Eig => {
            let input = input(c)?;
            let fp = certify::refine_fixed_point(&input.config, &input.guess, input.newton_iters)?;
            for (re, im) in certify::gamma_eigenvalues(&fp.gamma) {
                println!("{re:+.12e} {im:+.12e}i  |z| = {:.12e}", re.hypot(im));
            }
            Ok(Outcome::Pass)
        }
        Command::Selftest {
            scalar_trials,
            funcball_trials,
            solve_trials,
            seed,
        } => {
            let mut reports = vec![selftest::scalar_suite(*scalar_trials, *seed)];
            reports.extend(selftest::funcball_suite(*funcball_trials, seed.wrapping_add(1)));
            reports.push(selftest::linalg_suite(*solve_trials, seed.wrapping_add(2)));
            let mut failed = Vec::new();
            for r in &reports {
                println!(
                    "{:<16} checks {:>7}  skipped {:>6}  violations {}",
                    r.name, r.checks, r.skipped, r.violations
                );
                if let Some(v) = &r.first_violation {
                    println!("  first violation: {v}");
                }
                if !r.pass() {
                    failed.push(r.name.clone());
                }
            }
            let input = input(c)?;
            let fp = certify::refine_fixed_point(&input.config, &input.guess, input.newton_iters)?;
            let fd = selftest::fd_check(&input.config, &fp.f0, 1e-6, 10, *seed)?;
            println!(
                "finite differences: max |FD - DT dx| / h = {:.3e} at h = {:e}, {:.3e} at 10h (limit {:e})",
                fd.ratio,
                fd.h,
                fd.ratio_coarse,
                selftest::FD_RATIO_LIMIT
            );
            if !fd.pass() {
                failed.push("finite differences".into());
            }
            Ok(if failed.is_empty() {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("soundness suites failed: {}", failed.join(", ")))
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("aborted: {e}");
            ExitCode::from(3)
        }
    }
}
