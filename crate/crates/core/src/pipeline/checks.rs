//! The weight function at random generic cell points: Bethe equations,
//! singularity, the eigenvalue operator and its local exponents.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde_json::Value;

use crate::bethe::eigen_check;
use crate::config::Config;
use crate::diffop::delta_membership;
use crate::error::{Error, Result};
use crate::gln::{ModuleSpace, Partition};
use crate::io::Assertion;
use crate::numeric::linalg::norm_f64;
use crate::numeric::{CFloat, Scalar};
use crate::schubert::{bae_residual, SchubertPoint};
use crate::weight::omega;

/// Draws per point before giving up on genericity.
const DRAWS: usize = 50;

/// Findings at one random point `X`.
#[derive(Clone, Debug)]
pub struct PointCheck {
    pub point: Value,
    pub bae: f64,
    /// `max_{i<j} ‖e_{ij} ω‖ / ‖ω‖`.
    pub singular: f64,
    pub eigen_residual: f64,
    /// `D^B_ω` against `D_X` at fresh points.
    pub operator_residual: f64,
    /// Singular points, exponents and polynomial kernel of `D^B_ω`.
    pub exponents: bool,
    pub exponent_detail: Value,
}

impl PointCheck {
    pub fn assertions(&self, tag: &str) -> Vec<Assertion> {
        vec![
            Assertion::new(format!("{tag}_bethe_equations"), self.bae < 1e-9, Some(self.bae)),
            Assertion::new(format!("{tag}_singular"), self.singular < 1e-9, Some(self.singular)),
            Assertion::new(format!("{tag}_eigenvector"), self.eigen_residual < 1e-8, Some(self.eigen_residual)),
            Assertion::new(
                format!("{tag}_operator"),
                self.operator_residual < 1e-8,
                Some(self.operator_residual),
            ),
            Assertion::new(format!("{tag}_exponents"), self.exponents, None)
                .with_detail(self.exponent_detail.clone()),
        ]
    }

    pub fn pass(&self) -> bool {
        self.assertions("x").iter().all(|a| a.pass)
    }
}

fn random_point(lambda: &Partition, rng: &mut ChaCha8Rng, prec: u32) -> Result<SchubertPoint<Rational>> {
    let keys: Vec<(usize, usize)> = SchubertPoint::<Rational>::from_coeffs(lambda.clone(), &BTreeMap::new())?
        .coeffs()
        .into_iter()
        .map(|(k, _)| k)
        .collect();
    for _ in 0..DRAWS {
        let coeffs: BTreeMap<_, _> = keys
            .iter()
            .map(|&k| (k, Rational::from((rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)))))
            .collect();
        let x = SchubertPoint::from_coeffs(lambda.clone(), &coeffs)?;
        if x.is_generic(prec, 0.0)? {
            return Ok(x);
        }
    }
    Err(Error::NonGeneric(format!("no generic point of the cell for {:?}", lambda.parts())))
}

fn check_point(x: &SchubertPoint<Rational>, cfg: &Config) -> Result<PointCheck> {
    let prec = cfg.precision;
    let n = x.rank();
    let t = x.root_coordinates(prec)?;
    let bae = bae_residual(&t)?;
    let w = omega(&t, cfg.max_bijections)?;
    let wnorm = norm_f64(&w);
    let z: Vec<CFloat> = t.level(0).to_vec();
    let space = ModuleSpace::new(n, z.clone())?;
    let mut singular = 0f64;
    for i in 1..=n {
        for j in i + 1..=n {
            singular = singular.max(norm_f64(&space.act_eij(i, j, 0, &w)) / wnorm);
        }
    }
    let eigen = eigen_check(&space, &w, 1e-8, prec)?;
    let dx = x.operator_from_kernel()?.to_cfloat(prec);
    let far = z.iter().map(|p| p.abs_f64()).fold(0f64, f64::max).ceil();
    let points: Vec<CFloat> = (1..=10)
        .map(|m| CFloat::new(prec, far + m as f64 + 0.5, 0.25 * m as f64))
        .collect();
    let operator_residual = eigen.operator.max_rel_diff_at(&dx, &points).unwrap_or(f64::INFINITY);
    let single = Partition::new(&[1], n)?;
    let lambdas = vec![single; z.len()];
    let membership = delta_membership(&eigen.operator, &lambdas, x.lambda(), &z, &cfg.tol, prec)?;
    Ok(PointCheck {
        point: x.to_json(),
        bae,
        singular,
        eigen_residual: eigen.residual,
        operator_residual,
        exponents: membership.pass(),
        exponent_detail: membership.to_json(),
    })
}

/// `count` random generic points, cycling through `lambdas`.
pub fn weight_function_checks(lambdas: &[Partition], count: usize, seed: u64, cfg: &Config) -> Result<Vec<PointCheck>> {
    if lambdas.is_empty() {
        return Ok(Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<SchubertPoint<Rational>> = (0..count)
        .map(|i| random_point(&lambdas[i % lambdas.len()], &mut rng, cfg.precision))
        .collect::<Result<_>>()?;
    crate::par::try_map(&points, |x| check_point(x, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_points_satisfy_the_theorem() {
        let lambdas = [Partition::new(&[1, 1], 2).unwrap(), Partition::new(&[2, 1], 3).unwrap()];
        let checks = weight_function_checks(&lambdas, 2, 11, &Config::default()).unwrap();
        for c in &checks {
            assert!(c.pass(), "{:?}", c.assertions("x"));
        }
        assert_eq!(checks[0].point["lambda"], serde_json::json!([1, 1]));
    }
}
