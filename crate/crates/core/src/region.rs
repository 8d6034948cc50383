//! Tracing the uncoded achievability curve and checking it against the
//! converse bound.

use alloc::vec::Vec;

use crate::closed_forms::{
    d1_star_at_d2min, d2_tilde_star, d_min, is_uncoded_optimal, uncoded_distortions, BoundWitness,
    ConverseContext, Receiver,
};
use crate::error::{Error, Result};
use crate::params::{Problem, UncodedCoeffs};
use crate::rate_distortion::{channel_capacity, r_joint_numeric};

/// Default residual tolerance of [`verify_matching`], relative to `sigma2`.
pub const DEFAULT_MATCH_TOL: f64 = 1e-9;
/// Tolerance of the joint rate-distortion consistency check, in bits.
pub const ORACLE_TOL_BITS: f64 = 1e-4;

/// Converse value at a traced point, with the witness that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConverseValue {
    pub d2: f64,
    pub witness: BoundWitness,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub alpha: f64,
    pub d1: f64,
    pub d2_achievable: f64,
    /// `None` where the converse preconditions fail (`d1` at or above the
    /// `D1*(D2min)` corner, or above the SNR threshold).
    pub converse: Option<ConverseValue>,
    /// The uncoded point lies on the boundary of the distortion region.
    pub optimal: bool,
}

/// Samples the uncoded curve at `num_points` uniformly spaced `alpha` in
/// `[0, 1]`, ordered by increasing `alpha` (hence decreasing `d1`).
pub fn trace_uncoded_boundary(problem: &Problem, num_points: usize) -> Result<Vec<BoundaryPoint>> {
    if num_points < 2 {
        return Err(Error::InvalidParameter("num_points must be >= 2"));
    }
    let corner = d1_star_at_d2min(problem);
    let last = (num_points - 1) as f64;
    (0..num_points)
        .map(|k| {
            let alpha = k as f64 / last;
            let d = uncoded_distortions(problem, UncodedCoeffs::from_alpha(alpha)?)?;
            // At alpha = 0 the point is the D1*(D2min) corner, which the
            // uncoded scheme achieves without a converse argument.
            if alpha == 0.0 || d.d1 >= corner {
                return Ok(BoundaryPoint {
                    alpha,
                    d1: d.d1,
                    d2_achievable: d.d2,
                    converse: None,
                    optimal: true,
                });
            }
            let d1 = d.d1.max(d_min(problem, Receiver::One));
            let converse = match ConverseContext::new(problem, d1) {
                Ok(ctx) => {
                    let witness = ctx.witness_a_star()?;
                    Some(ConverseValue {
                        d2: ctx.psi(witness)?,
                        witness,
                    })
                }
                Err(Error::AboveThreshold { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(BoundaryPoint {
                alpha,
                d1: d.d1,
                d2_achievable: d.d2,
                converse,
                optimal: is_uncoded_optimal(problem, d1)?,
            })
        })
        .collect()
}

/// `psi(d1, a*)` and the optimal witness `a*`.
pub fn converse_at(problem: &Problem, d1: f64) -> Result<(f64, BoundWitness)> {
    let ctx = ConverseContext::new(problem, d1)?;
    let w = ctx.witness_a_star()?;
    Ok((ctx.psi(w)?, w))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatchStatus {
    Pass,
    Fail,
    /// The SNR condition fails at this `d1`; nothing is claimed.
    NotCovered,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchCheck {
    pub d1: f64,
    pub alpha: f64,
    pub d2_uncoded: f64,
    pub psi: f64,
    pub residual: f64,
    pub witness: Option<BoundWitness>,
    pub status: MatchStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    pub checks: Vec<MatchCheck>,
    pub tol: f64,
    /// Largest residual over covered points, in absolute units.
    pub max_residual: f64,
    pub passed: bool,
}

impl MatchReport {
    pub fn covered(&self) -> usize {
        self.checks
            .iter()
            .filter(|c| c.status != MatchStatus::NotCovered)
            .count()
    }
}

/// `grid_size` distortions strictly inside `(d_min(1), D1*(D2min))`,
/// uniformly spaced; a single point is the midpoint.
pub fn matched_grid(problem: &Problem, grid_size: usize) -> Vec<f64> {
    let lo = d_min(problem, Receiver::One);
    let hi = d1_star_at_d2min(problem);
    let step = (hi - lo) / (grid_size + 1) as f64;
    (1..=grid_size).map(|k| lo + k as f64 * step).collect()
}

/// Checks `D2u(alpha(d1)) == psi(d1, a*(d1))` on [`matched_grid`].
///
/// A point passes when the residual is at most `tol * sigma2` and the
/// witness is nonnegative. Points above the SNR threshold are recorded as
/// [`MatchStatus::NotCovered`] and do not affect the verdict.
pub fn verify_matching(problem: &Problem, grid_size: usize, tol: f64) -> Result<MatchReport> {
    if grid_size < 1 {
        return Err(Error::InvalidParameter("grid_size must be >= 1"));
    }
    let abs_tol = tol * problem.sigma2();
    let mut checks = Vec::with_capacity(grid_size);
    for d1 in matched_grid(problem, grid_size) {
        let ctx = match ConverseContext::new(problem, d1) {
            Ok(ctx) => ctx,
            Err(Error::AboveThreshold { .. }) => {
                checks.push(MatchCheck {
                    d1,
                    alpha: f64::NAN,
                    d2_uncoded: f64::NAN,
                    psi: f64::NAN,
                    residual: f64::NAN,
                    witness: None,
                    status: MatchStatus::NotCovered,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        let d2u = uncoded_distortions(problem, UncodedCoeffs::from_alpha(ctx.alpha())?)?.d2;
        let witness = ctx.witness_a_star().ok();
        let psi = match witness {
            Some(w) => ctx.psi(w).unwrap_or(f64::NAN),
            None => f64::NAN,
        };
        let residual = (d2u - psi).abs();
        let nonneg = witness.is_some_and(|w| w.a1() >= 0.0 && w.a2() >= 0.0);
        let status = if nonneg && residual <= abs_tol {
            MatchStatus::Pass
        } else {
            MatchStatus::Fail
        };
        checks.push(MatchCheck {
            d1,
            alpha: ctx.alpha(),
            d2_uncoded: d2u,
            psi,
            residual,
            witness,
            status,
        });
    }
    let max_residual = checks
        .iter()
        .filter(|c| c.status != MatchStatus::NotCovered)
        .map(|c| c.residual)
        .fold(0.0, |m, r| if r.is_nan() || r > m { r } else { m });
    let passed = checks.iter().all(|c| c.status != MatchStatus::Fail);
    Ok(MatchReport {
        checks,
        tol,
        max_residual,
        passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCheck {
    pub d1: f64,
    pub d2_tilde: f64,
    pub rate_bits: f64,
    pub error_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub capacity_bits: f64,
    pub checks: Vec<OracleCheck>,
    pub max_error_bits: f64,
    pub passed: bool,
}

/// Checks that the numerical joint rate-distortion function evaluated at
/// `(d1, D2~*(d1))` equals the Receiver-1 capacity, on [`matched_grid`]
/// points where the SNR condition holds.
pub fn verify_oracle_consistency(
    problem: &Problem,
    grid_size: usize,
    tol_bits: f64,
) -> Result<OracleReport> {
    if grid_size < 1 {
        return Err(Error::InvalidParameter("grid_size must be >= 1"));
    }
    let capacity = channel_capacity(problem.power(), problem.n1())?.bits();
    let mut checks = Vec::with_capacity(grid_size);
    for d1 in matched_grid(problem, grid_size) {
        let d2_tilde = match d2_tilde_star(problem, d1) {
            Ok(v) => v,
            Err(Error::AboveThreshold { .. }) => continue,
            Err(e) => return Err(e),
        };
        let rate = r_joint_numeric(problem.source(), d1, d2_tilde)?.bits();
        checks.push(OracleCheck {
            d1,
            d2_tilde,
            rate_bits: rate,
            error_bits: (rate - capacity).abs(),
        });
    }
    let max_error_bits = checks.iter().map(|c| c.error_bits).fold(0.0, f64::max);
    Ok(OracleReport {
        capacity_bits: capacity,
        passed: checks.iter().all(|c| c.error_bits <= tol_bits),
        checks,
        max_error_bits,
    })
}
