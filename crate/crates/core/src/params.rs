//! Parameter records and the two problem-equivalence transforms
//! (sign of the correlation, per-component variance scaling).

use crate::error::{Error, Result};

/// Bivariate Gaussian source with common variance `sigma2` and correlation
/// `rho`. Canonical records have `0 <= rho < 1`; negative correlations are
/// folded in by [`negate_rho_transform`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    pub sigma2: f64,
    pub rho: f64,
}

impl SourceParams {
    pub const fn new(sigma2: f64, rho: f64) -> Self {
        Self { sigma2, rho }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 > 0.0) || !self.sigma2.is_finite() {
            return Err(Error::InvalidParameter("sigma2 must be > 0"));
        }
        if !(self.rho >= 0.0) {
            return Err(Error::InvalidParameter(
                "rho must be >= 0 (negative correlation goes through negate_rho_transform)",
            ));
        }
        if !(self.rho < 1.0) {
            return Err(Error::InvalidParameter("rho must be < 1"));
        }
        Ok(())
    }

    /// `sigma2 * (1 - rho^2)`, the variance of `S1` given `S2`.
    pub fn conditional_variance(&self) -> f64 {
        self.sigma2 * (1.0 - self.rho * self.rho)
    }
}

/// Transmit power and the noise variances of the strong (`n1`) and weak
/// (`n2`) receivers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub power: f64,
    pub n1: f64,
    pub n2: f64,
}

impl ChannelParams {
    pub const fn new(power: f64, n1: f64, n2: f64) -> Self {
        Self { power, n1, n2 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.power > 0.0) || !self.power.is_finite() {
            return Err(Error::InvalidParameter("power must be > 0"));
        }
        if !(self.n1 > 0.0) || !self.n1.is_finite() {
            return Err(Error::InvalidParameter("n1 must be > 0"));
        }
        if !(self.n2 > 0.0) || !self.n2.is_finite() {
            return Err(Error::InvalidParameter("n2 must be > 0"));
        }
        if !(self.n1 < self.n2) {
            return Err(Error::InvalidParameter("n1 must be < n2"));
        }
        Ok(())
    }
}

/// Mixing weights of the uncoded encoder `X = gamma * (alpha*S1 + beta*S2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncodedCoeffs {
    alpha: f64,
    beta: f64,
}

impl UncodedCoeffs {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be >= 0"));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter("beta must be >= 0"));
        }
        if !(alpha + beta > 0.0) {
            return Err(Error::InvalidParameter("alpha + beta must be > 0"));
        }
        Ok(Self { alpha, beta })
    }

    /// The canonical one-parameter family `(alpha, 1 - alpha)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Self::new(alpha, 1.0 - alpha)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// A point `(D1, D2)` in expected squared-error distortion space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionPair {
    pub d1: f64,
    pub d2: f64,
}

impl DistortionPair {
    pub const fn new(d1: f64, d2: f64) -> Self {
        Self { d1, d2 }
    }

    /// Both components lie in `(0, sigma2]`.
    pub fn is_within(&self, source: &SourceParams) -> bool {
        self.d1 > 0.0 && self.d1 <= source.sigma2 && self.d2 > 0.0 && self.d2 <= source.sigma2
    }
}

/// A validated (source, channel) pair.
///
/// `sign_flip` records that the physical source has correlation `-rho`; the
/// simulator then negates the `S1` stream at the encoder and the Receiver-1
/// estimate at the decoder. All closed forms ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Problem {
    source: SourceParams,
    channel: ChannelParams,
    sign_flip: bool,
}

impl Problem {
    pub fn source(&self) -> &SourceParams {
        &self.source
    }

    pub fn channel(&self) -> &ChannelParams {
        &self.channel
    }

    pub fn sign_flip(&self) -> bool {
        self.sign_flip
    }

    /// Marks the problem as derived from a negatively correlated source.
    pub fn with_sign_flip(mut self, flip: bool) -> Self {
        self.sign_flip = flip;
        self
    }

    pub fn sigma2(&self) -> f64 {
        self.source.sigma2
    }

    pub fn rho(&self) -> f64 {
        self.source.rho
    }

    pub fn power(&self) -> f64 {
        self.channel.power
    }

    pub fn n1(&self) -> f64 {
        self.channel.n1
    }

    pub fn n2(&self) -> f64 {
        self.channel.n2
    }

    /// `P / N1`
    pub fn snr1(&self) -> f64 {
        self.channel.power / self.channel.n1
    }
}

/// Checks every invariant of both records, reporting the first violation.
pub fn validate_problem(source: SourceParams, channel: ChannelParams) -> Result<Problem> {
    source.validate()?;
    channel.validate()?;
    Ok(Problem {
        source,
        channel,
        sign_flip: false,
    })
}

/// Maps a source with correlation `raw_rho in (-1, 1)` to the canonical
/// record with `|raw_rho|`, returning whether `S1` must be negated at the
/// encoder and decoder. Identity for `raw_rho >= 0`.
pub fn negate_rho_transform(sigma2: f64, raw_rho: f64) -> Result<(SourceParams, bool)> {
    if !(raw_rho > -1.0) {
        return Err(Error::InvalidParameter("rho must be > -1"));
    }
    let flip = raw_rho < 0.0;
    let source = SourceParams::new(sigma2, raw_rho.abs());
    source.validate()?;
    Ok((source, flip))
}

/// `(D1, D2, sigma1^2, sigma2^2)` for a source whose components may have
/// different variances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceTuple {
    pub d1: f64,
    pub d2: f64,
    pub var1: f64,
    pub var2: f64,
}

impl VarianceTuple {
    /// Rescales component `i` by `a_i`. Achievability is preserved: if the
    /// tuple is achievable, so is the scaled one.
    pub fn scale(&self, a1: f64, a2: f64) -> Result<Self> {
        if !(a1 > 0.0) || !a1.is_finite() || !(a2 > 0.0) || !a2.is_finite() {
            return Err(Error::InvalidParameter("scale factors must be > 0"));
        }
        Ok(Self {
            d1: a1 * self.d1,
            d2: a2 * self.d2,
            var1: a1 * self.var1,
            var2: a2 * self.var2,
        })
    }
}

/// Factors `(a1, a2)` that bring variances `(var1, var2)` to the common
/// value `sigma2`.
pub fn canonical_scales(var1: f64, var2: f64, sigma2: f64) -> Result<(f64, f64)> {
    if !(var1 > 0.0) || !(var2 > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::InvalidParameter("variances must be > 0"));
    }
    Ok((sigma2 / var1, sigma2 / var2))
}
