//! Turns raw command-line parameters into a canonical problem.

use uncoded_bc::params::canonical_scales;
use uncoded_bc::{
    negate_rho_transform, validate_problem, ChannelParams, DistortionPair, Problem, VarianceTuple,
};

use crate::args::ProblemArgs;
use crate::CliError;

/// A canonical problem plus the map from canonical distortions back to the
/// units of the original components.
#[derive(Debug, Clone)]
pub struct Setup {
    pub problem: Problem,
    /// `(var1, var2)` when the components had unequal variances; canonical
    /// distortions are multiplied by these on output.
    pub scales: Option<(f64, f64)>,
    pub notices: Vec<String>,
}

impl Setup {
    pub fn from_args(args: &ProblemArgs) -> Result<Self, CliError> {
        let mut notices = Vec::new();
        let (sigma2, scales) = match (args.var1, args.var2) {
            (Some(v1), Some(v2)) => {
                if !(v1 > 0.0) {
                    return Err(CliError::usage("--var1", "var1 must be > 0"));
                }
                if !(v2 > 0.0) {
                    return Err(CliError::usage("--var2", "var2 must be > 0"));
                }
                canonical_scales(v1, v2, 1.0).map_err(|e| CliError::usage("--var1", e))?;
                notices.push(format!(
                    "note: component variances ({v1}, {v2}) normalized to 1; distortions are reported in original units"
                ));
                (1.0, Some((v1, v2)))
            }
            _ => (args.sigma2, None),
        };
        let (source, flip) =
            negate_rho_transform(sigma2, args.rho).map_err(CliError::from_param)?;
        if flip {
            notices.push(format!(
                "note: rho={} normalized to {} (S1 sign flip at encoder and Receiver 1)",
                args.rho, source.rho
            ));
        }
        let channel = ChannelParams::new(args.power, args.n1, args.n2);
        let problem = validate_problem(source, channel)
            .map_err(CliError::from_param)?
            .with_sign_flip(flip);
        Ok(Self {
            problem,
            scales,
            notices,
        })
    }

    /// Canonical distortions in original units.
    pub fn to_original(&self, d: DistortionPair) -> DistortionPair {
        match self.scales {
            None => d,
            Some((v1, v2)) => {
                let t = VarianceTuple {
                    d1: d.d1,
                    d2: d.d2,
                    var1: 1.0,
                    var2: 1.0,
                };
                let s = t.scale(v1, v2).expect("variances validated as positive");
                DistortionPair::new(s.d1, s.d2)
            }
        }
    }

    pub fn d1_to_original(&self, d1: f64) -> f64 {
        self.scales.map_or(d1, |(v1, _)| v1 * d1)
    }

    pub fn d2_to_original(&self, d2: f64) -> f64 {
        self.scales.map_or(d2, |(_, v2)| v2 * d2)
    }

    /// A Receiver-1 distortion given in original units, in canonical units.
    pub fn d1_to_canonical(&self, d1: f64) -> f64 {
        self.scales.map_or(d1, |(v1, _)| d1 / v1)
    }
}
