use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pjlab::orthopoly::WeightParams;
use pjlab::{BigReal, Error, PrecisionContext, Result};

#[derive(Parser, Debug)]
#[command(name = "pjlab", version, about = "Pollaczek-Jacobi type orthogonal polynomial laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Moments by the Kummer closed form and by direct quadrature.
    Moments {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
    },
    /// Residuals of one family of exact relations.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
        /// Checks run over n = 1..=n_max.
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Check a single degree instead of a range.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Exact values against a large-n expansion, with the fitted decay rate.
    Asymptotics {
        #[arg(value_enum)]
        kind: Quantity,
        #[command(flatten)]
        common: Common,
        /// Degrees as start:stop:step.
        #[arg(long, default_value = "40:160:20")]
        n_grid: String,
        /// Keep terms down to n^(-order/3).
        #[arg(long)]
        order: Option<i32>,
    },
    /// Equilibrium density samples with normalization and constancy checks.
    Density {
        #[command(flatten)]
        common: Common,
        /// Continuous particle number.
        #[arg(long, default_value = "10")]
        n: String,
        #[arg(long, default_value_t = 21)]
        samples: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub t: String,
    /// Working precision in bits, or "auto".
    #[arg(long, env = "PJLAB_BITS", default_value = "auto")]
    pub bits: String,
    /// Relative tolerance, or "auto" for 2^(-bits/4).
    #[arg(long, default_value = "auto")]
    pub tolerance: String,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Difference,
    Polyode,
    Evolution,
    Riccati,
    Odes,
    Painleve,
    Sigmaode,
}

impl Suite {
    /// Suites that need t-derivatives.
    pub fn is_differential(self) -> bool {
        matches!(
            self,
            Suite::Evolution | Suite::Riccati | Suite::Odes | Suite::Painleve | Suite::Sigmaode
        )
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantity {
    Beta,
    P,
    Sigma,
    Logd,
}

impl Common {
    /// Explicit bits, or `policy` when "auto".
    pub fn context(&self, policy: u32) -> Result<PrecisionContext> {
        let bits = if self.bits.eq_ignore_ascii_case("auto") {
            policy
        } else {
            self.bits
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::domain(format!("--bits must be an integer or auto, got {}", self.bits)))?
        };
        PrecisionContext::new(bits)
    }

    pub fn params(&self, ctx: &PrecisionContext) -> Result<WeightParams> {
        WeightParams::parse(&self.alpha, &self.t, ctx)
    }

    pub fn tolerance(&self, ctx: &PrecisionContext) -> Result<Option<BigReal>> {
        if self.tolerance.eq_ignore_ascii_case("auto") {
            return Ok(None);
        }
        let tol = ctx.parse(&self.tolerance)?;
        if !tol.is_positive() {
            return Err(Error::domain("--tolerance must be positive"));
        }
        Ok(Some(tol))
    }
}

/// `max(256, 12·n_max)`.
pub fn default_bits(n_max: usize) -> u32 {
    PrecisionContext::for_degree(n_max).bits()
}

/// Parses `start:stop:step` into the degrees it covers.
pub fn parse_grid(spec: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::domain(format!("--n-grid expects start:stop:step, got {spec}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (start, stop, step) = (nums[0], nums[1], nums[2]);
    if start == 0 || step == 0 || stop < start {
        return Err(bad());
    }
    Ok((start..=stop).step_by(step).collect())
}
