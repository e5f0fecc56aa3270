//! Run configuration: precision, tolerances, seeds and the degeneration schedule.

use rug::Rational;

use crate::error::{Error, Result};
use crate::numeric::scalar::{default_tolerance, MIN_PRECISION, PIPELINE_PRECISION};

/// Tolerances used by float-domain decisions. The exact domain ignores them
/// wherever an exact test exists.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative threshold below which a float coefficient counts as zero.
    pub zero: f64,
    /// Distance at which a computed exponent is accepted as an integer.
    pub exponent: f64,
    /// Eigen-residual threshold for `eigen_check`.
    pub residual: f64,
    /// Cauchy threshold for the normalized degeneration sequence.
    pub puiseux: f64,
    /// Relative gap under which two eigenvalues are merged.
    pub cluster: f64,
    /// Relative agreement required between two scalar operators.
    pub operator: f64,
}

impl Tolerances {
    pub fn for_precision(prec: u32) -> Self {
        let base = default_tolerance(prec);
        Tolerances {
            zero: base,
            exponent: base.sqrt().max(1e-30),
            residual: (base * 1e6).clamp(1e-60, 1e-8),
            puiseux: 1e-7,
            cluster: 1e-8,
            operator: 1e-6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.zero,
            self.exponent,
            self.residual,
            self.puiseux,
            self.cluster,
            self.operator,
        ];
        if all.iter().all(|t| t.is_finite() && *t > 0.0) {
            Ok(())
        } else {
            Err(Error::Input("tolerances must be positive".into()))
        }
    }
}

/// Geometric schedule `eps_m = eps0 * ratio^m`, `m = 0..steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsSchedule {
    pub eps0: Rational,
    pub ratio: Rational,
    pub steps: usize,
}

impl Default for EpsSchedule {
    fn default() -> Self {
        EpsSchedule {
            eps0: Rational::from((1, 100)),
            ratio: Rational::from((1, 2)),
            steps: 25,
        }
    }
}

impl EpsSchedule {
    pub fn validate(&self) -> Result<()> {
        let zero = Rational::new();
        let one = Rational::from(1);
        if self.eps0 <= zero || self.ratio <= zero || self.ratio >= one || self.steps < 4 {
            return Err(Error::Input(
                "schedule needs eps0 > 0, 0 < ratio < 1 and at least 4 steps".into(),
            ));
        }
        Ok(())
    }

    /// Strictly decreasing values.
    pub fn values(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.steps);
        let mut e = self.eps0.clone();
        for _ in 0..self.steps {
            out.push(e.clone());
            e *= &self.ratio;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub precision: u32,
    pub seed: u64,
    pub tol: Tolerances,
    pub schedule: EpsSchedule,
    /// Largest rank for which the row determinant is expanded.
    pub max_rank: usize,
    /// Largest number of bijection families enumerated per index tuple.
    pub max_bijections: u64,
    /// Attempts at a non-degenerate epimorphism before giving up.
    pub epimorphism_retries: usize,
    /// Curve directions tried before giving up on genericity.
    pub curve_retries: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config::with_precision(PIPELINE_PRECISION)
    }
}

impl Config {
    pub fn with_precision(precision: u32) -> Self {
        Config {
            precision,
            seed: 1,
            tol: Tolerances::for_precision(precision),
            schedule: EpsSchedule::default(),
            max_rank: 4,
            max_bijections: 1_000_000,
            epimorphism_retries: 5,
            curve_retries: 10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.precision < MIN_PRECISION {
            return Err(Error::Input(format!(
                "precision must be at least {MIN_PRECISION} bits"
            )));
        }
        self.tol.validate()?;
        self.schedule.validate()
    }
}
