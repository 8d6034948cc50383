//! Gaussian rate-distortion functions, channel capacity, and the two
//! information bounds used on the converse side.
//!
//! All rates are in bits per source symbol.

use libm::{log1p, log2, sqrt};

use crate::closed_forms::{d_min, Receiver};
use crate::error::{Error, Result};
use crate::numeric::golden_section_max;
use crate::params::{Problem, SourceParams};

/// Bracket width at which the inner search over the error cross-covariance
/// stops, relative to `sigma2`.
const CROSS_TOL: f64 = 1e-12;
/// Bracket width of the outer searches over the error variances, relative
/// to `sigma2`.
const DIAG_TOL: f64 = 1e-10;

/// An information rate in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rate(f64);

impl Rate {
    pub fn bits(self) -> f64 {
        self.0
    }
}

/// `max(0, 1/2 log2(variance / delta))`.
pub fn r_scalar(variance: f64, delta: f64) -> Result<Rate> {
    if !(variance > 0.0) {
        return Err(Error::InvalidParameter("variance must be > 0"));
    }
    if !(delta > 0.0) {
        return Err(Error::OutOfRange {
            what: "delta",
            value: delta,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok(Rate((0.5 * log2(variance / delta)).max(0.0)))
}

/// Rate-distortion function of `S1` when `S2` is available at both ends.
pub fn r_conditional(source: &SourceParams, delta1: f64) -> Result<Rate> {
    source.validate()?;
    let c = source.conditional_variance();
    if !(delta1 > 0.0 && delta1 <= c) {
        return Err(Error::OutOfRange {
            what: "delta1",
            value: delta1,
            lo: 0.0,
            hi: c,
        });
    }
    Ok(Rate(0.5 * log2(c / delta1)))
}

/// AWGN capacity `1/2 log2(1 + P/N)`.
pub fn channel_capacity(power: f64, noise: f64) -> Result<Rate> {
    if !(power >= 0.0) {
        return Err(Error::InvalidParameter("power must be >= 0"));
    }
    if !(noise > 0.0) {
        return Err(Error::InvalidParameter("noise must be > 0"));
    }
    Ok(Rate(0.5 * log1p(power / noise) / core::f64::consts::LN_2))
}

/// Largest `det K_E` over the error cross-covariance `e`, for fixed error
/// variances `(d1, d2)`, subject to `0 <= K_E <= K_S` in the PSD order.
///
/// When no `e` is feasible the (negative) gap between the two admissible
/// intervals is returned instead. Both pieces are quasi-concave in
/// `(d1, d2)`, so the result can be maximized by nested line searches.
fn best_det(sigma2: f64, rho: f64, d1: f64, d2: f64) -> f64 {
    let spread = sqrt(((sigma2 - d1) * (sigma2 - d2)).max(0.0));
    let psd = sqrt(d1 * d2);
    let lo = (-psd).max(rho * sigma2 - spread);
    let hi = psd.min(rho * sigma2 + spread);
    if lo > hi {
        return -(lo - hi);
    }
    let (_, det) = golden_section_max(|e| d1 * d2 - e * e, lo, hi, CROSS_TOL * sigma2);
    det
}

/// Joint rate-distortion function `R_{S1,S2}(delta1, delta2)` computed from
/// first principles: maximize the Gaussian error determinant over all
/// feasible error covariances with diagonal bounded by the targets, then
/// return `1/2 log2(det K_S / det K_E)`.
///
/// This is an independent numerical oracle; it does not use any closed form
/// from [`crate::closed_forms`].
pub fn r_joint_numeric(source: &SourceParams, delta1: f64, delta2: f64) -> Result<Rate> {
    source.validate()?;
    let (s2, rho) = (source.sigma2, source.rho);
    for (what, d) in [("delta1", delta1), ("delta2", delta2)] {
        if !(d > 0.0 && d <= s2) {
            return Err(Error::OutOfRange {
                what,
                value: d,
                lo: 0.0,
                hi: s2,
            });
        }
    }
    if delta1 >= s2 && delta2 >= s2 {
        return Ok(Rate(0.0));
    }
    let det_source = s2 * s2 * (1.0 - rho * rho);
    let inner =
        |d1: f64| golden_section_max(|d2| best_det(s2, rho, d1, d2), 0.0, delta2, DIAG_TOL * s2).1;
    let (_, det) = golden_section_max(inner, 0.0, delta1, DIAG_TOL * s2);
    if !(det > 0.0) {
        return Err(Error::Internal("no feasible error covariance found"));
    }
    Ok(Rate((0.5 * log2(det_source / det)).max(0.0)))
}

/// Upper bound on `I(S1; Y1 | S2) / n` forced on Receiver 1 by a scheme
/// that gives Receiver 2 distortion `delta2`.
///
/// Evaluated as `1/2 log2(1 + (P + N2)(delta2 - D2min) / (sigma2 N1))`,
/// which vanishes exactly at `delta2 = D2min`.
pub fn lemma3_bound(problem: &Problem, delta2: f64) -> Result<Rate> {
    let d2_min = d_min(problem, Receiver::Two);
    let (p, n1, n2) = (problem.power(), problem.n1(), problem.n2());
    if !(delta2 >= d2_min) {
        return Err(Error::OutOfRange {
            what: "delta2",
            value: delta2,
            lo: d2_min,
            hi: f64::INFINITY,
        });
    }
    let arg = n1 + (p + n2) * (delta2 - d2_min) / problem.sigma2();
    Ok(Rate(0.5 * log2(arg / n1)))
}

/// Lower bound on the Receiver-2 distortion when Receiver 1 reconstructs
/// `S1` with conditional distortion `cond_d1` given `S2`.
///
/// Written as `D2min + sigma2 N1 (sigma2(1-rho^2) - cond_d1) / ((P+N2) cond_d1)`,
/// which equals `D2min` exactly at the upper end of the range.
pub fn receiver1_d2_lower(problem: &Problem, cond_d1: f64) -> Result<f64> {
    let c = problem.source().conditional_variance();
    if !(cond_d1 > 0.0 && cond_d1 <= c) {
        return Err(Error::OutOfRange {
            what: "cond_d1",
            value: cond_d1,
            lo: 0.0,
            hi: c,
        });
    }
    let (p, n1, n2) = (problem.power(), problem.n1(), problem.n2());
    Ok(
        d_min(problem, Receiver::Two)
            + problem.sigma2() * n1 * (c - cond_d1) / ((p + n2) * cond_d1),
    )
}
