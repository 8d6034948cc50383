//! Command-line front end for [`uncoded_bc`].
//!
//! Exit codes: `0` success, `1` verification failure (or an output file that
//! cannot be written), `2` invalid arguments.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod args;
pub mod csv_out;
pub mod parallel;
pub mod setup;

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use clap::Parser;
use uncoded_bc::closed_forms::{
    d1_star_at_d2min, d2_star_at_d1min, d_min, gamma_threshold, simple_threshold,
    solve_alpha_for_d1, uncoded_distortions, ConverseContext, Receiver,
};
use uncoded_bc::montecarlo::power_check;
use uncoded_bc::rate_distortion::channel_capacity;
use uncoded_bc::region::{trace_uncoded_boundary, verify_matching, verify_oracle_consistency};
use uncoded_bc::{Error, SimulationConfig, SimulationReport, UncodedCoeffs};

use crate::args::{Cli, Command};
use crate::setup::Setup;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(flag: &str, msg: impl Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("error: invalid value for {flag}: {msg}"),
        }
    }

    /// Maps a parameter validation error to the flag it names.
    pub fn from_param(e: Error) -> Self {
        match &e {
            Error::InvalidParameter(msg) => {
                let name = msg.split_whitespace().next().unwrap_or("parameter");
                Self::usage(&format!("--{name}"), msg)
            }
            _ => Self {
                code: EXIT_USAGE,
                message: format!("error: {e}"),
            },
        }
    }

    fn io(path: &Path, e: impl Display) -> Self {
        Self {
            code: EXIT_FAILED,
            message: format!("error: cannot write {}: {e}", path.display()),
        }
    }
}

/// Rounds to six decimals and drops trailing zeros: `0.5`, `0.916667`.
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Parses `argv` (including the program name), runs the subcommand, and
/// returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.message);
            e.code
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<u8, CliError> {
    let problem_args = match &command {
        Command::Report { problem }
        | Command::Trace { problem, .. }
        | Command::Bound { problem, .. }
        | Command::Simulate { problem, .. }
        | Command::Verify { problem, .. } => problem.clone(),
    };
    let setup = Setup::from_args(&problem_args)?;
    for n in &setup.notices {
        let _ = writeln!(err, "{n}");
    }
    let stdout_err = |e: io::Error| CliError::io(Path::new("<stdout>"), e);
    match command {
        Command::Report { .. } => report(&setup, out).map_err(stdout_err)?,
        Command::Trace { points, output, .. } => {
            if points < 2 {
                return Err(CliError::usage("--points", "points must be >= 2"));
            }
            let pts = trace_uncoded_boundary(&setup.problem, points)
                .map_err(|e| CliError::usage("--points", e))?;
            match output {
                Some(path) => {
                    let f = File::create(&path).map_err(|e| CliError::io(&path, e))?;
                    csv_out::write_trace(f, &setup, &pts).map_err(|e| CliError::io(&path, e))?;
                }
                None => csv_out::write_trace(&mut *out, &setup, &pts)
                    .map_err(|e| CliError::io(Path::new("<stdout>"), e))?,
            }
        }
        Command::Bound { d1, .. } => bound(&setup, d1, out)?,
        Command::Simulate {
            alpha,
            d1_target,
            samples,
            seed,
            output,
            ..
        } => simulate(
            &setup,
            alpha,
            d1_target,
            samples,
            seed,
            output.as_deref(),
            out,
        )?,
        Command::Verify {
            grid,
            tol,
            oracle_tol,
            ..
        } => return verify(&setup, grid, tol, oracle_tol, out),
    }
    Ok(EXIT_OK)
}

fn report(setup: &Setup, out: &mut dyn Write) -> io::Result<()> {
    let p = &setup.problem;
    let simple = simple_threshold(p.source()).expect("validated source");
    let cap1 = channel_capacity(p.power(), p.n1())
        .expect("validated channel")
        .bits();
    let cap2 = channel_capacity(p.power(), p.n2())
        .expect("validated channel")
        .bits();
    let d1 = |x| short(setup.d1_to_original(x));
    let d2 = |x| short(setup.d2_to_original(x));
    writeln!(out, "sigma2={}", short(p.sigma2()))?;
    writeln!(out, "rho={}", short(p.rho()))?;
    writeln!(out, "sign_flip={}", p.sign_flip())?;
    writeln!(out, "power={}", short(p.power()))?;
    writeln!(out, "n1={}", short(p.n1()))?;
    writeln!(out, "n2={}", short(p.n2()))?;
    writeln!(out, "snr1={}", short(p.snr1()))?;
    writeln!(out, "D1_min={}", d1(d_min(p, Receiver::One)))?;
    writeln!(out, "D2_min={}", d2(d_min(p, Receiver::Two)))?;
    writeln!(out, "D1_star_at_D2_min={}", d1(d1_star_at_d2min(p)))?;
    writeln!(out, "D2_star_at_D1_min={}", d2(d2_star_at_d1min(p)))?;
    writeln!(out, "simple_threshold={}", short(simple))?;
    writeln!(out, "capacity1_bits={}", short(cap1))?;
    writeln!(out, "capacity2_bits={}", short(cap2))?;
    writeln!(out, "uncoded_optimal_everywhere={}", p.snr1() <= simple)?;
    Ok(())
}

fn bound(setup: &Setup, d1_arg: f64, out: &mut dyn Write) -> Result<(), CliError> {
    let p = &setup.problem;
    let d1 = setup.d1_to_canonical(d1_arg);
    let ctx = ConverseContext::new(p, d1).map_err(|e| CliError::usage("--d1", e))?;
    let w = ctx
        .witness_a_star()
        .map_err(|e| CliError::usage("--d1", e))?;
    let eta = ctx.eta(w).map_err(|e| CliError::usage("--d1", e))?;
    let psi = ctx.psi(w).map_err(|e| CliError::usage("--d1", e))?;
    let d2u = uncoded_distortions(
        p,
        UncodedCoeffs::from_alpha(ctx.alpha()).map_err(|e| CliError::usage("--d1", e))?,
    )
    .map_err(|e| CliError::usage("--d1", e))?
    .d2;
    let gamma = gamma_threshold(p.source(), d1)
        .map_err(|e| CliError::usage("--d1", e))?
        .value();
    let mut write = || -> io::Result<()> {
        writeln!(out, "d1={}", d1_arg)?;
        writeln!(out, "alpha={}", ctx.alpha())?;
        writeln!(out, "gamma_threshold={}", gamma)?;
        writeln!(out, "d2_tilde_star={}", ctx.d2_tilde_star())?;
        writeln!(out, "a1_star={}", w.a1())?;
        writeln!(out, "a2_star={}", w.a2())?;
        writeln!(out, "eta={}", eta)?;
        writeln!(out, "psi={}", setup.d2_to_original(psi))?;
        writeln!(out, "d2_uncoded={}", setup.d2_to_original(d2u))?;
        Ok(())
    };
    write().map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

fn simulate(
    setup: &Setup,
    alpha: Option<f64>,
    d1_target: Option<f64>,
    samples: u64,
    seed: u64,
    output: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let p = &setup.problem;
    let alpha = match (alpha, d1_target) {
        (Some(a), _) => a,
        (None, Some(t)) => solve_alpha_for_d1(p, setup.d1_to_canonical(t))
            .map_err(|e| CliError::usage("--d1-target", e))?,
        (None, None) => {
            return Err(CliError::usage(
                "--alpha",
                "one of --alpha or --d1-target is required",
            ))
        }
    };
    let coeffs = UncodedCoeffs::from_alpha(alpha).map_err(|e| CliError::usage("--alpha", e))?;
    let config = SimulationConfig::new(samples, seed, coeffs)
        .map_err(|e| CliError::usage("--samples", e))?;
    let canonical =
        parallel::simulate_parallel(p, &config).map_err(|e| CliError::usage("--alpha", e))?;
    let power_ok = power_check(&canonical, p.channel(), 0.02);
    let analytic = setup
        .to_original(uncoded_distortions(p, coeffs).map_err(|e| CliError::usage("--alpha", e))?);
    let report = SimulationReport {
        empirical_d1: setup.d1_to_original(canonical.empirical_d1),
        empirical_d2: setup.d2_to_original(canonical.empirical_d2),
        ci_half_width_d1: setup.d1_to_original(canonical.ci_half_width_d1),
        ci_half_width_d2: setup.d2_to_original(canonical.ci_half_width_d2),
        ..canonical
    };
    let stdout = |e| CliError::io(Path::new("<stdout>"), e);
    write_report(&report, out).map_err(stdout)?;
    writeln!(out, "analytic_d1={}", analytic.d1).map_err(stdout)?;
    writeln!(out, "analytic_d2={}", analytic.d2).map_err(stdout)?;
    writeln!(out, "power_within_2pct={power_ok}").map_err(stdout)?;
    if let Some(path) = output {
        let f = File::create(path).map_err(|e| CliError::io(path, e))?;
        csv_out::write_simulation(f, &report).map_err(|e| CliError::io(path, e))?;
    }
    Ok(())
}

/// `key=value` lines of a simulation report.
pub fn write_report(r: &SimulationReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "alpha={}", r.alpha)?;
    writeln!(out, "beta={}", r.beta)?;
    writeln!(out, "samples={}", r.samples)?;
    writeln!(out, "seed={}", r.seed)?;
    writeln!(out, "empirical_d1={}", r.empirical_d1)?;
    writeln!(out, "empirical_d2={}", r.empirical_d2)?;
    writeln!(out, "empirical_power={}", r.empirical_power)?;
    writeln!(out, "ci_half_width_d1={}", r.ci_half_width_d1)?;
    writeln!(out, "ci_half_width_d2={}", r.ci_half_width_d2)?;
    Ok(())
}

fn verify(
    setup: &Setup,
    grid: usize,
    tol: f64,
    oracle_tol: f64,
    out: &mut dyn Write,
) -> Result<u8, CliError> {
    if grid < 1 {
        return Err(CliError::usage("--grid", "grid must be >= 1"));
    }
    if !(tol >= 0.0) {
        return Err(CliError::usage("--tol", "tol must be >= 0"));
    }
    if !(oracle_tol >= 0.0) {
        return Err(CliError::usage("--oracle-tol", "oracle-tol must be >= 0"));
    }
    let p = &setup.problem;
    let failed = |e: Error| CliError {
        code: EXIT_FAILED,
        message: format!("error: verification aborted: {e}"),
    };
    let matching = verify_matching(p, grid, tol).map_err(failed)?;
    let oracle = verify_oracle_consistency(p, grid, oracle_tol).map_err(failed)?;
    let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
    let passed = matching.passed && oracle.passed;
    let mut write = || -> io::Result<()> {
        writeln!(out, "matching_points={}", matching.checks.len())?;
        writeln!(out, "matching_covered={}", matching.covered())?;
        writeln!(out, "matching_max_residual={:e}", matching.max_residual)?;
        writeln!(out, "matching_tol={:e}", tol)?;
        writeln!(out, "matching={}", verdict(matching.passed))?;
        writeln!(out, "oracle_points={}", oracle.checks.len())?;
        writeln!(out, "oracle_capacity_bits={}", oracle.capacity_bits)?;
        writeln!(out, "oracle_max_error_bits={:e}", oracle.max_error_bits)?;
        writeln!(out, "oracle_tol_bits={:e}", oracle_tol)?;
        writeln!(out, "oracle={}", verdict(oracle.passed))?;
        writeln!(out, "verification={}", verdict(passed))?;
        Ok(())
    };
    write().map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}
