//! Seeded Monte-Carlo simulation of the uncoded scheme.
//!
//! # Reproducibility
//!
//! The sample range is cut into blocks of [`BLOCK_SIZE`] symbols. Block `b`
//! draws from ChaCha20 keyed by `seed` (expanded with
//! `SeedableRng::seed_from_u64`) on stream `b`, so each block is an
//! independent substream and blocks can be evaluated in any order or in
//! parallel. Per-block accumulators are merged in block order, which makes
//! the report a pure function of `(problem, config)`.
//!
//! Uniforms are the top 53 bits of `next_u64` scaled by `2^-53`; the first
//! uniform of each pair is shifted to `(0, 1]` so its logarithm is finite.
//! Standard normals come in pairs from the Box-Muller transform
//! `sqrt(-2 ln u1) * (cos 2 pi u2, sin 2 pi u2)`, with the `libm` versions of
//! `ln`, `sqrt`, `cos` and `sin`.
//!
//! Each symbol consumes two pairs, in this order: `(z, u)` builds the source
//! (`S1 = sigma z`, `S2 = rho S1 + sigma sqrt(1 - rho^2) u`), then `(w1, w2)`
//! builds the channel noises `sqrt(N_i) w_i`.

use alloc::vec::Vec;

use libm::{log, sincos, sqrt};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::closed_forms::uncoded_distortions;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::params::{ChannelParams, DistortionPair, Problem, UncodedCoeffs};

/// Symbols per independently seeded block.
pub const BLOCK_SIZE: u64 = 4096;
/// Two-sided 95% normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub samples: u64,
    pub seed: u64,
    pub coeffs: UncodedCoeffs,
}

impl SimulationConfig {
    pub fn new(samples: u64, seed: u64, coeffs: UncodedCoeffs) -> Result<Self> {
        if samples < 1 {
            return Err(Error::InvalidParameter("samples must be >= 1"));
        }
        Ok(Self {
            samples,
            seed,
            coeffs,
        })
    }

    pub fn num_blocks(&self) -> u64 {
        self.samples.div_ceil(BLOCK_SIZE)
    }

    /// Number of symbols in block `block`.
    pub fn block_len(&self, block: u64) -> u64 {
        let start = block * BLOCK_SIZE;
        BLOCK_SIZE.min(self.samples.saturating_sub(start))
    }
}

/// Encoder gain and the two scalar MMSE decoder gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmseCoefficients {
    pub gamma: f64,
    pub c1: f64,
    pub c2: f64,
}

impl MmseCoefficients {
    /// Distortions `sigma2 - c_i^2 (P + N_i)` implied by the gains.
    pub fn analytic_distortions(&self, problem: &Problem) -> DistortionPair {
        let (s2, p) = (problem.sigma2(), problem.power());
        DistortionPair::new(
            s2 - self.c1 * self.c1 * (p + problem.n1()),
            s2 - self.c2 * self.c2 * (p + problem.n2()),
        )
    }

    /// Decoder gains scaled by `(k1, k2)`; the encoder gain is unchanged.
    pub fn scaled(&self, k1: f64, k2: f64) -> Self {
        Self {
            gamma: self.gamma,
            c1: self.c1 * k1,
            c2: self.c2 * k2,
        }
    }
}

/// Gains of the uncoded scheme: `gamma` meets the power constraint with
/// equality and `c_i = Cov(S_i, Y_i) / Var(Y_i)`.
pub fn mmse_coefficients(problem: &Problem, coeffs: UncodedCoeffs) -> Result<MmseCoefficients> {
    let (a, b) = (coeffs.alpha(), coeffs.beta());
    let (s2, rho, p) = (problem.sigma2(), problem.rho(), problem.power());
    let q = a * a + 2.0 * a * b * rho + b * b;
    if !(q > 0.0) {
        return Err(Error::DegenerateCoefficients);
    }
    let gamma = sqrt(p / (s2 * q));
    Ok(MmseCoefficients {
        gamma,
        c1: gamma * s2 * (a + b * rho) / (p + problem.n1()),
        c2: gamma * s2 * (b + a * rho) / (p + problem.n2()),
    })
}

/// Standard normal variates for one block.
pub struct GaussianStream {
    rng: ChaCha20Rng,
}

impl GaussianStream {
    pub fn new(seed: u64, block: u64) -> Self {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(block);
        Self { rng }
    }

    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Two independent standard normals.
    pub fn next_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.unit();
        let u2 = self.unit();
        let r = sqrt(-2.0 * log(u1));
        let (s, c) = sincos(core::f64::consts::TAU * u2);
        (r * c, r * s)
    }
}

/// Physical source sample for one symbol. With a sign flip the physical
/// source has correlation `-rho`: `S1` is the negated canonical draw.
#[inline]
fn source_pair(problem: &Problem, stream: &mut GaussianStream) -> (f64, f64) {
    let (z, u) = stream.next_pair();
    let sigma = sqrt(problem.sigma2());
    let rho = problem.rho();
    let tail = sigma * sqrt(1.0 - rho * rho);
    let (s1, signed_rho) = if problem.sign_flip() {
        (-(sigma * z), -rho)
    } else {
        (sigma * z, rho)
    };
    (s1, signed_rho * s1 + tail * u)
}

/// The physical source pairs of block `block`, as drawn by the simulator.
pub fn draw_source_block(problem: &Problem, seed: u64, block: u64, len: usize) -> Vec<(f64, f64)> {
    let mut stream = GaussianStream::new(seed, block);
    (0..len)
        .map(|_| {
            let pair = source_pair(problem, &mut stream);
            stream.next_pair();
            pair
        })
        .collect()
}

/// Running sums for one block (or a merged range of blocks).
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BlockStats {
    pub samples: u64,
    err1: CompensatedSum,
    err1_sq: CompensatedSum,
    err2: CompensatedSum,
    err2_sq: CompensatedSum,
    power: CompensatedSum,
}

impl BlockStats {
    pub fn merge(&mut self, other: &BlockStats) {
        self.samples += other.samples;
        self.err1.merge(&other.err1);
        self.err1_sq.merge(&other.err1_sq);
        self.err2.merge(&other.err2);
        self.err2_sq.merge(&other.err2_sq);
        self.power.merge(&other.power);
    }
}

/// Runs the scheme on block `block` of `config`, decoding with `gains`.
pub fn simulate_block(
    problem: &Problem,
    config: &SimulationConfig,
    gains: &MmseCoefficients,
    block: u64,
) -> BlockStats {
    let (a, b) = (config.coeffs.alpha(), config.coeffs.beta());
    let (sd1, sd2) = (sqrt(problem.n1()), sqrt(problem.n2()));
    let flip = problem.sign_flip();
    let mut stream = GaussianStream::new(config.seed, block);
    let mut st = BlockStats::default();
    for _ in 0..config.block_len(block) {
        let (s1, s2) = source_pair(problem, &mut stream);
        let (w1, w2) = stream.next_pair();
        // Encoder sees the canonical (positively correlated) pair.
        let s1_enc = if flip { -s1 } else { s1 };
        let x = gains.gamma * (a * s1_enc + b * s2);
        let y1 = x + sd1 * w1;
        let y2 = x + sd2 * w2;
        let est1 = if flip {
            -(gains.c1 * y1)
        } else {
            gains.c1 * y1
        };
        let est2 = gains.c2 * y2;
        let e1 = (s1 - est1) * (s1 - est1);
        let e2 = (s2 - est2) * (s2 - est2);
        st.err1.add(e1);
        st.err1_sq.add(e1 * e1);
        st.err2.add(e2);
        st.err2_sq.add(e2 * e2);
        st.power.add(x * x);
        st.samples += 1;
    }
    st
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationReport {
    pub alpha: f64,
    pub beta: f64,
    pub empirical_d1: f64,
    pub empirical_d2: f64,
    pub empirical_power: f64,
    /// 95% normal-approximation half-widths; `+inf` for a single sample.
    pub ci_half_width_d1: f64,
    pub ci_half_width_d2: f64,
    pub samples: u64,
    pub seed: u64,
}

impl SimulationReport {
    pub fn from_stats(stats: &BlockStats, config: &SimulationConfig) -> Self {
        let n = stats.samples as f64;
        let mean_and_hw = |sum: &CompensatedSum, sq: &CompensatedSum| {
            let mean = sum.value() / n;
            let hw = if stats.samples < 2 {
                f64::INFINITY
            } else {
                let var = ((sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
                Z_95 * sqrt(var / n)
            };
            (mean, hw)
        };
        let (d1, hw1) = mean_and_hw(&stats.err1, &stats.err1_sq);
        let (d2, hw2) = mean_and_hw(&stats.err2, &stats.err2_sq);
        Self {
            alpha: config.coeffs.alpha(),
            beta: config.coeffs.beta(),
            empirical_d1: d1,
            empirical_d2: d2,
            empirical_power: stats.power.value() / n,
            ci_half_width_d1: hw1,
            ci_half_width_d2: hw2,
            samples: stats.samples,
            seed: config.seed,
        }
    }

    /// The empirical distortions as a pair.
    pub fn distortions(&self) -> DistortionPair {
        DistortionPair::new(self.empirical_d1, self.empirical_d2)
    }
}

/// Simulates with the MMSE decoder gains.
pub fn simulate(problem: &Problem, config: &SimulationConfig) -> Result<SimulationReport> {
    let gains = mmse_coefficients(problem, config.coeffs)?;
    simulate_with_gains(problem, config, &gains)
}

/// Simulates with caller-supplied encoder and decoder gains.
pub fn simulate_with_gains(
    problem: &Problem,
    config: &SimulationConfig,
    gains: &MmseCoefficients,
) -> Result<SimulationReport> {
    if config.samples < 1 {
        return Err(Error::InvalidParameter("samples must be >= 1"));
    }
    let mut total = BlockStats::default();
    for block in 0..config.num_blocks() {
        total.merge(&simulate_block(problem, config, gains, block));
    }
    Ok(SimulationReport::from_stats(&total, config))
}

/// Closed-form distortions for the configuration being simulated.
pub fn analytic_distortions(
    problem: &Problem,
    config: &SimulationConfig,
) -> Result<DistortionPair> {
    uncoded_distortions(problem, config.coeffs)
}

/// Whether the empirical power is at most `P (1 + tol_rel)`.
pub fn power_check(report: &SimulationReport, channel: &ChannelParams, tol_rel: f64) -> bool {
    report.empirical_power <= channel.power * (1.0 + tol_rel)
}
