//! Acceptance checks. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use uncoded_bc::closed_forms::{
    d1_star_at_d2min, d_min, gamma_threshold, simple_threshold, uncoded_distortions,
    witness_a_star, BoundWitness, ConverseContext, Receiver,
};
use uncoded_bc::montecarlo::{power_check, simulate};
use uncoded_bc::rate_distortion::{lemma3_bound, r_joint_numeric, receiver1_d2_lower};
use uncoded_bc::region::{matched_grid, verify_matching, verify_oracle_consistency};
use uncoded_bc::{
    negate_rho_transform, validate_problem, ChannelParams, Problem, SimulationConfig, SourceParams,
    UncodedCoeffs,
};
use uncoded_bc_cli::setup::Setup;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn problem(sigma2: f64, rho: f64, power: f64, n1: f64, n2: f64) -> Problem {
    validate_problem(
        SourceParams::new(sigma2, rho),
        ChannelParams::new(power, n1, n2),
    )
    .expect("valid problem")
}

fn desk() -> Problem {
    problem(1.0, 0.5, 1.0, 1.0, 2.0)
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Small deterministic generator for drawing test configurations.
struct SplitMix(u64);

impl SplitMix {
    fn next_unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    }

    fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_unit()
    }
}

fn corner_identities() -> Outcome {
    let mut rng = SplitMix(0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let sigma2 = rng.range(0.1, 10.0);
        let rho = rng.range(0.0, 0.99);
        let power = rng.range(0.05, 20.0);
        let n1 = rng.range(0.05, 5.0);
        let n2 = n1 + rng.range(0.01, 5.0);
        let p = problem(sigma2, rho, power, n1, n2);
        let a = uncoded_distortions(&p, UncodedCoeffs::new(1.0, 0.0).map_err(err)?).map_err(err)?;
        let b = uncoded_distortions(&p, UncodedCoeffs::new(0.0, 1.0).map_err(err)?).map_err(err)?;
        let expected = [
            (a.d1, sigma2 * n1 / (n1 + power)),
            (
                a.d2,
                sigma2 * (n2 + power * (1.0 - rho * rho)) / (n2 + power),
            ),
            (
                b.d1,
                sigma2 * (n1 + power * (1.0 - rho * rho)) / (n1 + power),
            ),
            (b.d2, sigma2 * n2 / (n2 + power)),
        ];
        for (got, want) in expected {
            worst = worst.max(rel_err(got, want));
        }
    }
    ensure(worst <= 1e-12, || format!("max relative error {worst:e}"))?;
    Ok(format!("100 configs, max relative error {worst:e}"))
}

fn threshold_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=9 {
        let rho = k as f64 / 10.0;
        let s = SourceParams::new(1.0, rho);
        let floor = simple_threshold(&s).map_err(err)?;
        let at = gamma_threshold(&s, 1.0 - rho).map_err(err)?.value();
        worst = worst.max(rel_err(at, floor));
        let c = s.conditional_variance();
        for j in 1..=200 {
            let d1 = c * j as f64 / 201.0;
            let g = gamma_threshold(&s, d1).map_err(err)?.value();
            ensure(g >= floor - 1e-12, || {
                format!("rho={rho} d1={d1}: {g} < {floor}")
            })?;
        }
    }
    ensure(worst <= 1e-12, || format!("identity error {worst:e}"))?;
    Ok(format!(
        "identity max relative error {worst:e}; floor holds on 9x200 grid"
    ))
}

fn achievability_meets_converse() -> Outcome {
    let p = desk();
    let report = verify_matching(&p, 50, 1e-9).map_err(err)?;
    ensure(report.passed, || {
        format!("max residual {:e}", report.max_residual)
    })?;
    ensure(report.covered() == 50, || {
        format!("only {} of 50 points covered", report.covered())
    })?;
    for d1 in matched_grid(&p, 50) {
        let w = witness_a_star(&p, d1).map_err(err)?;
        ensure(w.a1() >= 0.0 && w.a2() >= 0.0, || {
            format!("negative witness at d1={d1}")
        })?;
    }
    let ctx = ConverseContext::new(&p, 0.625).map_err(err)?;
    let psi = ctx.psi(ctx.witness_a_star().map_err(err)?).map_err(err)?;
    let d2u = uncoded_distortions(&p, UncodedCoeffs::from_alpha(ctx.alpha()).map_err(err)?)
        .map_err(err)?
        .d2;
    ensure(
        (psi - 0.75).abs() <= 1e-9 && (d2u - 0.75).abs() <= 1e-9,
        || format!("spot value: psi={psi}, d2u={d2u}"),
    )?;
    Ok(format!(
        "50 points, max residual {:e}; d1=0.625 -> psi={psi:.12}, D2u={d2u:.12}",
        report.max_residual
    ))
}

fn witness_maximality() -> Outcome {
    let p = desk();
    let lo = d_min(&p, Receiver::One);
    let hi = d1_star_at_d2min(&p);
    let mut min_margin = f64::INFINITY;
    for t in [0.0, 0.2, 0.5, 0.8, 0.97] {
        let ctx = ConverseContext::new(&p, lo + t * (hi - lo)).map_err(err)?;
        let best = ctx.psi(ctx.witness_a_star().map_err(err)?).map_err(err)?;
        for i in 0..=100 {
            for j in 0..=100 {
                let w = BoundWitness::new(0.02 * i as f64, 0.02 * j as f64).map_err(err)?;
                let v = ctx.psi(w).map_err(err)?;
                min_margin = min_margin.min(best - v);
            }
        }
    }
    ensure(min_margin >= -1e-9, || {
        format!("a grid witness beats the closed form by {:e}", -min_margin)
    })?;
    Ok(format!(
        "5 d1 values x 101x101 witnesses, min margin {min_margin:e}"
    ))
}

fn oracle_consistency() -> Outcome {
    let p = desk();
    let report = verify_oracle_consistency(&p, 50, 1e-4).map_err(err)?;
    ensure(report.checks.len() == 50, || {
        format!("{} of 50 points checked", report.checks.len())
    })?;
    ensure(report.passed, || {
        format!("max error {:e} bits", report.max_error_bits)
    })?;
    let spot = r_joint_numeric(p.source(), 0.625, 0.625)
        .map_err(err)?
        .bits();
    ensure((spot - 0.5).abs() <= 1e-4, || {
        format!("r_joint(0.625, 0.625) = {spot}")
    })?;
    Ok(format!(
        "50 points, max error {:e} bits; r_joint(0.625, 0.625) = {spot:.8} bits",
        report.max_error_bits
    ))
}

fn monte_carlo() -> Outcome {
    let p = desk();
    let config = SimulationConfig::new(200_000, 2024, UncodedCoeffs::new(0.5, 0.5).map_err(err)?)
        .map_err(err)?;
    let a = simulate(&p, &config).map_err(err)?;
    let b = simulate(&p, &config).map_err(err)?;
    let e1 = rel_err(a.empirical_d1, 0.625);
    let e2 = rel_err(a.empirical_d2, 0.75);
    let ep = rel_err(a.empirical_power, 1.0);
    ensure(e1 <= 0.02 && e2 <= 0.02 && ep <= 0.02, || {
        format!("relative errors d1 {e1:.4}, d2 {e2:.4}, power {ep:.4}")
    })?;
    ensure(power_check(&a, p.channel(), 0.02), || {
        "power check failed".into()
    })?;
    ensure(format!("{a:?}") == format!("{b:?}"), || {
        "reports differ for equal seeds".into()
    })?;
    Ok(format!(
        "d1={:.5} d2={:.5} power={:.5}; equal seeds give identical reports",
        a.empirical_d1, a.empirical_d2, a.empirical_power
    ))
}

fn information_bound_endpoints() -> Outcome {
    let p = desk();
    let d2min = d_min(&p, Receiver::Two);
    let rate = lemma3_bound(&p, d2min).map_err(err)?.bits();
    ensure(rate == 0.0, || {
        format!("information bound at D2min = {rate:e}")
    })?;
    let c = p.source().conditional_variance();
    let lower = receiver1_d2_lower(&p, c).map_err(err)?;
    ensure(lower == d2min, || {
        format!("receiver-1 bound at c = {lower:e}, D2min = {d2min:e}")
    })?;
    Ok("both endpoints exact".into())
}

fn symmetry() -> Outcome {
    let config = SimulationConfig::new(50_000, 7, UncodedCoeffs::from_alpha(0.3).map_err(err)?)
        .map_err(err)?;
    let direct = simulate(&desk(), &config).map_err(err)?;
    let (source, flip) = negate_rho_transform(1.0, -0.5).map_err(err)?;
    ensure(flip, || "negative rho not flagged".into())?;
    let flipped_problem = validate_problem(source, ChannelParams::new(1.0, 1.0, 2.0))
        .map_err(err)?
        .with_sign_flip(true);
    let flipped = simulate(&flipped_problem, &config).map_err(err)?;
    ensure(
        direct.empirical_d1.to_bits() == flipped.empirical_d1.to_bits()
            && direct.empirical_d2.to_bits() == flipped.empirical_d2.to_bits(),
        || format!("{direct:?} vs {flipped:?}"),
    )?;

    let plain = trace_rows(&["uncoded-bc", "trace", "--points", "11"])?;
    let scaled = trace_rows(&[
        "uncoded-bc",
        "trace",
        "--points",
        "11",
        "--var1",
        "4",
        "--var2",
        "9",
    ])?;
    ensure(plain.len() == 11 && scaled.len() == 11, || {
        "trace row count".into()
    })?;
    for (a, b) in plain.iter().zip(&scaled) {
        ensure(b[1] == 4.0 * a[1] && b[2] == 9.0 * a[2], || {
            format!("row {a:?} vs {b:?}")
        })?;
        if let (Some(x), Some(y)) = (a.get(3), b.get(3)) {
            ensure(*y == 9.0 * x, || format!("converse {x} vs {y}"))?;
        }
    }
    let d =
        uncoded_distortions(&desk(), UncodedCoeffs::from_alpha(0.5).map_err(err)?).map_err(err)?;
    let setup =
        Setup::from_args(&problem_args(&["--var1", "4", "--var2", "9"])).map_err(|e| e.message)?;
    let s = setup.to_original(d);
    ensure(s.d1 == 4.0 * d.d1 && s.d2 == 9.0 * d.d2, || {
        format!("{s:?} vs {d:?}")
    })?;
    Ok("rho=-0.5 run bit-identical to rho=0.5; (4, 9) rescaling exact".into())
}

fn problem_args(extra: &[&str]) -> uncoded_bc_cli::args::ProblemArgs {
    use clap::Parser;
    let mut argv = vec!["uncoded-bc", "report"];
    argv.extend_from_slice(extra);
    match uncoded_bc_cli::args::Cli::parse_from(argv).command {
        uncoded_bc_cli::args::Command::Report { problem } => problem,
        _ => unreachable!(),
    }
}

/// Runs `trace` in-process and parses the numeric fields of each row.
fn trace_rows(argv: &[&str]) -> Result<Vec<Vec<f64>>, String> {
    let mut out = Vec::new();
    let mut errs = Vec::new();
    let code = uncoded_bc_cli::run(argv, &mut out, &mut errs);
    ensure(code == 0, || String::from_utf8_lossy(&errs).into_owned())?;
    let text = String::from_utf8(out).map_err(err)?;
    Ok(text
        .lines()
        .skip(1)
        .map(|l| {
            l.split(',')
                .take(4)
                .filter(|f| !f.is_empty())
                .map(|f| f.parse().unwrap())
                .collect()
        })
        .collect())
}

fn verify_is_live() -> Outcome {
    let run = |argv: &[&str]| {
        let (mut out, mut errs) = (Vec::new(), Vec::new());
        uncoded_bc_cli::run(argv, &mut out, &mut errs)
    };
    let ok = run(&["uncoded-bc", "verify"]);
    let corrupted = run(&["uncoded-bc", "verify", "--tol", "1e-18"]);
    ensure(ok == 0 && corrupted == 1, || {
        format!("exit codes {ok} and {corrupted}")
    })?;
    Ok("default exit 0; --tol 1e-18 exit 1".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("corner-point identities", corner_identities),
        ("threshold identity and floor", threshold_identity),
        (
            "uncoded scheme meets the converse",
            achievability_meets_converse,
        ),
        ("witness maximality", witness_maximality),
        ("joint rate-distortion oracle", oracle_consistency),
        ("Monte-Carlo agreement and determinism", monte_carlo),
        ("information-bound endpoints", information_bound_endpoints),
        ("sign-flip and variance-scaling symmetry", symmetry),
        ("verify subcommand exit codes", verify_is_live),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({detail}) [{ms} ms]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {}: FAIL  {name} ({detail}) [{ms} ms]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
