//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use lorenz_renorm::certify::{self, ArcSelection, CertInput};
use lorenz_renorm::selftest;
use lorenz_renorm::{Error, FunctionBall, PolyRect, Scalar};

const EPS_REFERENCE: f64 = 4.830032057738462e-9;
const THETA_REFERENCE: f64 = 0.1584543808202988;
const EIG_REFERENCE: [f64; 2] = [23.36530, 12.11202];
const EIG_REL_TOL: f64 = 1e-3;
const RUN_TIME_LIMIT: Duration = Duration::from_secs(60);
const HYPER_TIME_LIMIT: Duration = Duration::from_secs(600);
const HYPER_SAMPLE: usize = 200;
const HYPER_SEED: u64 = 2008;

struct Line {
    id: &'static str,
    pass: bool,
    detail: String,
}

fn within_factor(x: f64, reference: f64, factor: f64) -> bool {
    x > 0.0 && x <= reference * factor && x >= reference / factor
}

fn cli(args: &[&str]) -> (bool, String) {
    let cert = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("degenerate-certificate.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_certify"))
        .args(args)
        .arg("--certificate")
        .arg(&cert)
        .output()
        .expect("run certify binary");
    (out.status.success(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn degenerate_inputs() -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    let mut expect = |name: &str, hit: bool| {
        notes.push(format!("{name}:{}", if hit { "ok" } else { "MISSING" }));
        ok &= hit;
    };

    // library level: each degeneracy is a named error, never a value
    let recip = Scalar::new(-1.0, 1.0).recip();
    expect("recip", matches!(recip, Err(Error::RecipNotWellDefined { .. })));
    let f = FunctionBall::new(PolyRect::from_points(&[0.0, 1.0]), Scalar::ZERO, 4);
    let g = FunctionBall::new(PolyRect::from_points(&[0.5, 0.5]), Scalar::ZERO, 4);
    expect("compose", matches!(f.compose(&g), Err(Error::ComposeNormTooLarge { .. })));
    expect("eval", matches!(f.eval(Scalar::point(1.0)), Err(Error::EvalNotInDomain { .. })));
    let cmp = Scalar::new(0.0, 2.0).compare(Scalar::new(1.0, 3.0));
    expect("compare", matches!(cmp, Err(Error::Uncomparable { .. })));
    expect("safe", matches!(Scalar::point(1e200).mul(Scalar::point(1e200)), Err(Error::NotSafe(_))));

    // binary level: abort, nonzero exit, diagnostic names the operation
    for (name, args, needle) in [
        ("cli-recip", vec!["--guess-f", "0", "run"], "S.recip"),
        ("cli-eval", vec!["--guess-f", "3,0", "run"], "eval: not in domain"),
        ("cli-compose", vec!["--radius", "0.5", "run"], "compose: |f2| is too large"),
        ("cli-safe", vec!["--sf", "1e-200", "run"], "assertSafe"),
    ] {
        let (success, stderr) = cli(&args);
        expect(name, !success && stderr.contains(needle) && stderr.contains("aborted"));
    }
    (ok, notes.join(" "))
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let input = CertInput::default();

    let t = Instant::now();
    let run = certify::run(&input);
    let run_time = t.elapsed();
    match &run {
        Ok(r) => {
            lines.push(Line {
                id: "1 eps",
                pass: r.eps < 5e-9 && within_factor(r.eps, EPS_REFERENCE, 2.0) && run_time <= RUN_TIME_LIMIT,
                detail: format!(
                    "|Phi(F0)-F0| < {} (reference {}), run {:.2?} (limit {:?})",
                    certify::show_double(r.eps),
                    certify::show_double(EPS_REFERENCE),
                    run_time,
                    RUN_TIME_LIMIT
                ),
            });
            lines.push(Line {
                id: "2 theta",
                pass: r.theta < 0.2 && within_factor(r.theta, THETA_REFERENCE, 2.0),
                detail: format!(
                    "|DPhi| < {} (reference {})",
                    certify::show_double(r.theta),
                    certify::show_double(THETA_REFERENCE)
                ),
            });
            lines.push(Line {
                id: "3 contraction",
                pass: r.prop41 && certify::check_prop41(r.eps, r.theta, 1e-7).unwrap_or(false),
                detail: format!("eps < (1 - theta) r with r = {}", certify::show_double(input.radius)),
            });

            let ev = certify::gamma_eigenvalues(&r.fixed_point.gamma);
            let lead_ok = EIG_REFERENCE.iter().zip(&ev).all(|(want, &(re, im))| {
                im.abs() <= EIG_REL_TOL * want && ((re - want) / want).abs() <= EIG_REL_TOL
            });
            let rest_max = ev[2..].iter().map(|&(re, im)| re.hypot(im)).fold(0.0, f64::max);
            lines.push(Line {
                id: "4 eigenvalues",
                pass: lead_ok && rest_max < 1.0,
                detail: format!(
                    "leading {:.5}, {:.5}; largest remaining modulus {:.4}",
                    ev[0].0, ev[1].0, rest_max
                ),
            });

            let t = Instant::now();
            let hyper = certify::hyperbolicity_check(
                &input.config,
                &r.fixed_point,
                input.radius,
                input.arcs,
                ArcSelection::Sample {
                    count: HYPER_SAMPLE,
                    seed: HYPER_SEED,
                },
                input.hyper_bound,
                1,
            );
            let hyper_time = t.elapsed();
            lines.push(match hyper {
                Ok(h) => Line {
                    id: "5 hyperbolicity",
                    pass: h.pass() && h.arcs_checked == HYPER_SAMPLE && hyper_time <= HYPER_TIME_LIMIT,
                    detail: format!(
                        "{} of {} arcs sampled, max bound {} < {}, {:.2?}",
                        h.arcs_checked,
                        h.arcs_total,
                        certify::show_double(h.max_bound),
                        certify::show_double(h.threshold),
                        hyper_time
                    ),
                },
                Err(e) => Line {
                    id: "5 hyperbolicity",
                    pass: false,
                    detail: format!("aborted: {e}"),
                },
            });

            let fd = selftest::fd_check(&input.config, &r.fixed_point.f0, 1e-6, 10, 7);
            lines.push(match fd {
                Ok(fd) => Line {
                    id: "6d finite differences",
                    pass: fd.pass(),
                    detail: format!(
                        "|FD - DT dx| / h = {:.3e} at h = 1e-6, {:.3e} at 1e-5 (limit {:e})",
                        fd.ratio,
                        fd.ratio_coarse,
                        selftest::FD_RATIO_LIMIT
                    ),
                },
                Err(e) => Line {
                    id: "6d finite differences",
                    pass: false,
                    detail: format!("aborted: {e}"),
                },
            });
        }
        Err(e) => {
            for id in ["1 eps", "2 theta", "3 contraction", "4 eigenvalues", "5 hyperbolicity", "6d finite differences"] {
                lines.push(Line {
                    id,
                    pass: false,
                    detail: format!("run aborted: {e}"),
                });
            }
        }
    }

    let scalar = selftest::scalar_suite(100_000, 11);
    lines.push(Line {
        id: "6a scalar soundness",
        pass: scalar.pass() && scalar.checks >= 100_000,
        detail: format!("{} checks, {} violations", scalar.checks, scalar.violations),
    });
    let fb = selftest::funcball_suite(10_000, 12);
    let fb_min = fb.iter().map(|r| r.checks).min().unwrap_or(0);
    let fb_bad: Vec<String> = fb.iter().filter(|r| !r.pass()).map(|r| r.name.clone()).collect();
    lines.push(Line {
        id: "6b funcball soundness",
        pass: fb_bad.is_empty() && fb_min >= 10_000,
        detail: format!(
            "{} operations, >= {} checks each, {} violations{}",
            fb.len(),
            fb_min,
            fb.iter().map(|r| r.violations).sum::<usize>(),
            if fb_bad.is_empty() { String::new() } else { format!(" in {}", fb_bad.join(", ")) }
        ),
    });
    let solve = selftest::linalg_suite(1_000, 13);
    lines.push(Line {
        id: "6c solve soundness",
        pass: solve.pass() && solve.checks >= 1_000,
        detail: format!("{} solves, {} violations", solve.checks, solve.violations),
    });

    let (ok, notes) = degenerate_inputs();
    lines.push(Line {
        id: "7 degenerate inputs",
        pass: ok,
        detail: notes,
    });

    let mut all = true;
    for l in &lines {
        all &= l.pass;
        println!("{} [{}] {}", if l.pass { "PASS" } else { "FAIL" }, l.id, l.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
