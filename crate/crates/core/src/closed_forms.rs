//! Closed-form quantities of the uncoded scheme and of the converse bound.
//!
//! Distortions of the uncoded encoder `X = gamma * (alpha*S1 + beta*S2)`
//! with scalar MMSE receivers are rational in `(alpha, beta)` with the
//! common quadratic form `q = alpha^2 + 2*alpha*beta*rho + beta^2` in the
//! denominator, so they depend on the mixing weights only through their
//! ratio. The converse side is the functional `psi(delta, a1, a2)`, a lower
//! bound on `D2` for every equal-sign pair `(a1, a2)`; below the SNR
//! threshold it is tight at the witness `(a1*, a2*)`.

use libm::sqrt;

use crate::error::{Error, Result};
use crate::numeric::bisect_decreasing;
use crate::params::{DistortionPair, Problem, SourceParams, UncodedCoeffs};

/// Absolute residual tolerance of [`solve_alpha_for_d1`], in units of `sigma2`.
pub const ALPHA_SOLVE_TOL: f64 = 1e-12;
/// Iteration cap of [`solve_alpha_for_d1`].
pub const ALPHA_SOLVE_MAX_ITER: u32 = 200;
/// Number of sample points used to certify monotonicity before bisecting.
const MONOTONE_PROBES: usize = 129;
/// Rounding slack accepted when a witness component should be nonnegative.
const WITNESS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    One,
    Two,
}

/// Equal-sign weights `(a1, a2)` of the converse functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundWitness {
    a1: f64,
    a2: f64,
}

impl BoundWitness {
    pub fn new(a1: f64, a2: f64) -> Result<Self> {
        if !a1.is_finite() || !a2.is_finite() {
            return Err(Error::InvalidParameter("witness components must be finite"));
        }
        if a1 * a2 < 0.0 {
            return Err(Error::InvalidParameter(
                "witness components must have equal sign",
            ));
        }
        Ok(Self { a1, a2 })
    }

    pub fn a1(&self) -> f64 {
        self.a1
    }

    pub fn a2(&self) -> f64 {
        self.a2
    }
}

/// SNR threshold value; `+inf` when the distortion is at least the
/// conditional variance `sigma2 * (1 - rho^2)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Threshold(f64);

impl Threshold {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

/// Receiver-1 form of the uncoded distortion, evaluated at noise `n`.
fn first_form(s: &SourceParams, p: f64, n: f64, a: f64, b: f64) -> f64 {
    let rho = s.rho;
    let q = a * a + 2.0 * a * b * rho + b * b;
    let num = p * p * b * b * (1.0 - rho * rho)
        + p * n * (a * a + 2.0 * a * b * rho + b * b * (2.0 - rho * rho))
        + n * n * q;
    s.sigma2 * num / ((p + n) * (p + n) * q)
}

/// Receiver-2 form of the uncoded distortion, evaluated at noise `n`.
fn second_form(s: &SourceParams, p: f64, n: f64, a: f64, b: f64) -> f64 {
    let rho = s.rho;
    let q = a * a + 2.0 * a * b * rho + b * b;
    let num = p * p * a * a * (1.0 - rho * rho)
        + p * n * (a * a * (2.0 - rho * rho) + 2.0 * a * b * rho + b * b)
        + n * n * q;
    s.sigma2 * num / ((p + n) * (p + n) * q)
}

/// Single-user minimum distortion `sigma2 * N_i / (N_i + P)`.
pub fn d_min(problem: &Problem, receiver: Receiver) -> f64 {
    let n = match receiver {
        Receiver::One => problem.n1(),
        Receiver::Two => problem.n2(),
    };
    problem.sigma2() * n / (n + problem.power())
}

/// Least Receiver-1 distortion when Receiver 2 operates at its single-user
/// minimum (send `S2` uncoded).
pub fn d1_star_at_d2min(problem: &Problem) -> f64 {
    let (p, n1) = (problem.power(), problem.n1());
    problem.sigma2() * (n1 + p * (1.0 - problem.rho() * problem.rho())) / (n1 + p)
}

/// Least Receiver-2 distortion when Receiver 1 operates at its single-user
/// minimum (send `S1` uncoded).
pub fn d2_star_at_d1min(problem: &Problem) -> f64 {
    let (p, n2) = (problem.power(), problem.n2());
    problem.sigma2() * (n2 + p * (1.0 - problem.rho() * problem.rho())) / (n2 + p)
}

/// Distortions `(D1u, D2u)` of the uncoded scheme with weights `coeffs`.
pub fn uncoded_distortions(problem: &Problem, coeffs: UncodedCoeffs) -> Result<DistortionPair> {
    let (a, b) = (coeffs.alpha(), coeffs.beta());
    let q = a * a + 2.0 * a * b * problem.rho() + b * b;
    if !(q > 0.0) {
        return Err(Error::DegenerateCoefficients);
    }
    let s = problem.source();
    Ok(DistortionPair::new(
        first_form(s, problem.power(), problem.n1(), a, b),
        second_form(s, problem.power(), problem.n2(), a, b),
    ))
}

fn d1_along(problem: &Problem, alpha: f64) -> f64 {
    first_form(
        problem.source(),
        problem.power(),
        problem.n1(),
        alpha,
        1.0 - alpha,
    )
}

/// SNR threshold below which the uncoded scheme is optimal at `d1`.
pub fn gamma_threshold(source: &SourceParams, d1: f64) -> Result<Threshold> {
    source.validate()?;
    let s2 = source.sigma2;
    if !(d1 > 0.0 && d1 <= s2) {
        return Err(Error::OutOfRange {
            what: "d1",
            value: d1,
            lo: 0.0,
            hi: s2,
        });
    }
    let c = source.conditional_variance();
    if d1 < c {
        Ok(Threshold(
            (s2 * c - 2.0 * d1 * c + d1 * d1) / (d1 * (c - d1)),
        ))
    } else {
        Ok(Threshold(f64::INFINITY))
    }
}

/// `2 rho / (1 - rho)`: the minimum of the threshold over `d1`.
pub fn simple_threshold(source: &SourceParams) -> Result<f64> {
    source.validate()?;
    Ok(2.0 * source.rho / (1.0 - source.rho))
}

/// Whether `P/N1 <= gamma_threshold(d1)`.
pub fn is_uncoded_optimal(problem: &Problem, d1: f64) -> Result<bool> {
    Ok(problem.snr1() <= gamma_threshold(problem.source(), d1)?.value())
}

/// Finds `alpha` such that `D1u(alpha, 1 - alpha) = d1_target`.
///
/// The map is first checked to be nonincreasing on a probe grid, then
/// inverted by bisection.
pub fn solve_alpha_for_d1(problem: &Problem, d1_target: f64) -> Result<f64> {
    let lo = d_min(problem, Receiver::One);
    let hi = d1_star_at_d2min(problem);
    if !(d1_target >= lo && d1_target <= hi) {
        return Err(Error::OutOfRange {
            what: "d1",
            value: d1_target,
            lo,
            hi,
        });
    }
    let s2 = problem.sigma2();
    let slack = 4.0 * f64::EPSILON * s2;
    let mut prev = d1_along(problem, 0.0);
    for k in 1..MONOTONE_PROBES {
        let v = d1_along(problem, k as f64 / (MONOTONE_PROBES - 1) as f64);
        if v > prev + slack {
            return Err(Error::Internal(
                "D1u(alpha, 1 - alpha) is not monotone in alpha",
            ));
        }
        prev = v;
    }
    let tol = ALPHA_SOLVE_TOL * s2;
    let r = bisect_decreasing(
        |a| d1_along(problem, a),
        d1_target,
        0.0,
        1.0,
        tol,
        ALPHA_SOLVE_MAX_ITER,
    );
    if r.residual > tol {
        return Err(Error::Internal(
            "bisection did not reach the residual tolerance",
        ));
    }
    Ok(r.x)
}

/// State shared by the converse evaluations at one distortion `delta`:
/// the solved mixing weight and `D2~*(delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverseContext {
    problem: Problem,
    delta: f64,
    alpha: f64,
    d2_tilde: f64,
}

impl ConverseContext {
    /// Requires `d_min(1) <= delta < d1_star_at_d2min` and the threshold
    /// condition at `delta`.
    pub fn new(problem: &Problem, delta: f64) -> Result<Self> {
        let lo = d_min(problem, Receiver::One);
        let hi = d1_star_at_d2min(problem);
        if !(delta >= lo && delta < hi) {
            return Err(Error::OutOfRange {
                what: "d1",
                value: delta,
                lo,
                hi,
            });
        }
        let gamma = gamma_threshold(problem.source(), delta)?.value();
        if !(problem.snr1() <= gamma) {
            return Err(Error::AboveThreshold {
                d1: delta,
                snr: problem.snr1(),
                threshold: gamma,
            });
        }
        let alpha = solve_alpha_for_d1(problem, delta)?;
        let d2_tilde = second_form(
            problem.source(),
            problem.power(),
            problem.n1(),
            alpha,
            1.0 - alpha,
        );
        Ok(Self {
            problem: *problem,
            delta,
            alpha,
            d2_tilde,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `D2~*(delta)`: least `S2` distortion at Receiver 1 given `D1 = delta`.
    pub fn d2_tilde_star(&self) -> f64 {
        self.d2_tilde
    }

    fn cross_root(&self) -> Result<f64> {
        let s2 = self.problem.sigma2();
        let radicand = (s2 - self.delta) * (s2 - self.d2_tilde);
        if radicand < 0.0 {
            return Err(Error::Domain("(sigma2 - delta)(sigma2 - D2~*) < 0"));
        }
        Ok(sqrt(radicand))
    }

    pub fn eta(&self, w: BoundWitness) -> Result<f64> {
        let s2 = self.problem.sigma2();
        let rho = self.problem.rho();
        let (a1, a2) = (w.a1, w.a2);
        let root = self.cross_root()?;
        Ok(
            s2 - a1 * (s2 - self.delta) * (2.0 - a1) - a2 * s2 * (2.0 * rho - a2)
                + 2.0 * a1 * a2 * root,
        )
    }

    pub fn psi(&self, w: BoundWitness) -> Result<f64> {
        let eta = self.eta(w)?;
        if !(eta > 0.0) {
            return Err(Error::BoundUndefined { eta });
        }
        let p = &self.problem;
        let (n1, n2) = (p.n1(), p.n2());
        Ok(
            p.sigma2() / (p.power() + n2)
                * (p.source().conditional_variance() * n1 / eta + n2 - n1),
        )
    }

    /// The witness at which `psi` meets the uncoded Receiver-2 distortion.
    pub fn witness_a_star(&self) -> Result<BoundWitness> {
        let s2 = self.problem.sigma2();
        let rho = self.problem.rho();
        let root = self.cross_root()?;
        let gap = s2 - self.delta;
        let a1 = (gap * s2 - rho * s2 * root) / (gap * self.d2_tilde);
        let a2 = (rho * s2 - root) / self.d2_tilde;
        let clamp = |v: f64| -> Result<f64> {
            if v >= 0.0 {
                Ok(v)
            } else if v >= -WITNESS_SLACK {
                Ok(0.0)
            } else {
                Err(Error::Internal("optimal witness has a negative component"))
            }
        };
        BoundWitness::new(clamp(a1)?, clamp(a2)?)
    }
}

/// `D2~*(d1)`, the `D2u` form with `N1` in place of `N2`, at the mixing
/// weight that achieves `d1`.
pub fn d2_tilde_star(problem: &Problem, d1: f64) -> Result<f64> {
    Ok(ConverseContext::new(problem, d1)?.d2_tilde_star())
}

pub fn eta(problem: &Problem, delta: f64, witness: BoundWitness) -> Result<f64> {
    ConverseContext::new(problem, delta)?.eta(witness)
}

/// Lower bound on `D2` for any scheme that achieves `D1 = delta`.
pub fn psi(problem: &Problem, delta: f64, witness: BoundWitness) -> Result<f64> {
    ConverseContext::new(problem, delta)?.psi(witness)
}

pub fn witness_a_star(problem: &Problem, d1: f64) -> Result<BoundWitness> {
    ConverseContext::new(problem, d1)?.witness_a_star()
}
