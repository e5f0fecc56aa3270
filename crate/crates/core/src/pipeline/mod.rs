//! From a Fuchsian operator back to a Bethe eigenvector by degenerating a
//! curve of generic cell points, and the closure and completeness checks
//! built on top of it.

mod checks;
mod verify;

pub use checks::{weight_function_checks, PointCheck};
pub use verify::{completeness_report, singular_subspace, spectrum_report, verify_bijection};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bethe::{eigen_check, normalize_phase, EigenReport};
use crate::config::{Config, EpsSchedule};
use crate::diffop::{delta_membership, DiffOp};
use crate::error::{Error, Result};
use crate::gln::{Epimorphism, ModuleSpace, Partition};
use crate::io::{operator_to_json, vector_to_json};
use crate::numeric::linalg::norm_f64;
use crate::numeric::scalar::rational_to_string;
use crate::numeric::{CFloat, Scalar};
use crate::schubert::{kernel_to_point, sample_curve};
use crate::weight::omega;

/// Relative size below which `F(v₀)` counts as zero.
const EPIMORPHISM_ZERO: f64 = 1e-6;
/// Fresh points at which `D^B_w` is compared with the input operator.
const OPERATOR_SAMPLES: usize = 10;

/// Seeds for the three random choices of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Seeds {
    pub spectrum: u64,
    pub curve: u64,
    pub epimorphism: u64,
}

impl Seeds {
    pub fn from_base(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Seeds {
            spectrum: rng.gen(),
            curve: rng.gen(),
            epimorphism: rng.gen(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

/// Limit direction of a degenerating family of vectors.
#[derive(Clone, Debug)]
pub struct PuiseuxLimit {
    /// Unit vector, phase fixed at `reference`.
    pub direction: Vec<CFloat>,
    /// Slope of `log ‖v(ε)‖` against `log ε`.
    pub exponent: f64,
    /// `‖v̂(ε_{m+1}) - v̂(ε_m)‖` along the schedule.
    pub steps: Vec<f64>,
    /// Exponents of the error terms removed by extrapolation.
    pub corrections: Vec<f64>,
    pub reference: usize,
}

fn unit_with_phase(v: &[CFloat], idx: usize) -> Option<Vec<CFloat>> {
    let pivot = &v[idx];
    if pivot.is_zero() {
        return None;
    }
    let prec = pivot.prec();
    let phase = CFloat::from_real(pivot.abs()) / pivot;
    let rotated: Vec<CFloat> = v.iter().map(|x| x.clone() * &phase).collect();
    let norm = rotated
        .iter()
        .fold(rug::Float::new(prec), |acc, x| acc + x.abs().square())
        .sqrt();
    let inv = CFloat::from_real(norm.recip());
    Some(rotated.into_iter().map(|x| x * &inv).collect())
}

fn distance(a: &[CFloat], b: &[CFloat]) -> f64 {
    let d: Vec<CFloat> = a.iter().zip(b).map(|(x, y)| x.clone() - y).collect();
    norm_f64(&d)
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Richardson passes allowed when the raw sequence converges too slowly.
const EXTRAPOLATIONS: usize = 3;

/// Geometric rate of the tail of `steps`, if the last ratios agree.
fn tail_rate(steps: &[f64]) -> Option<f64> {
    if steps.len() < 4 {
        return None;
    }
    let tail = &steps[steps.len() - 4..];
    let ratios: Vec<f64> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let r = ratios[ratios.len() - 1];
    (lo > 0.0 && hi < 0.95 && hi - lo < 0.02 * hi && r.is_finite()).then_some(r)
}

/// One Richardson pass removing a geometric error term of rate `r`.
fn extrapolate(seq: &[Vec<CFloat>], r: f64) -> Vec<Vec<CFloat>> {
    let prec = seq[0][0].prec();
    let rc = CFloat::new(prec, r, 0.0);
    let scale = CFloat::new(prec, 1.0 / (1.0 - r), 0.0);
    seq.windows(2)
        .map(|w| {
            w[1].iter()
                .zip(&w[0])
                .map(|(a, b)| (a.clone() - rc.clone() * b) * &scale)
                .collect()
        })
        .collect()
}

/// Direction of the leading Puiseux coefficient of `v(ε)`.
///
/// Every `v(ε)` is scaled to unit norm with the component that is largest at
/// the smallest `ε` made real and positive. The sequence must be Cauchy:
/// the last three successive differences below `tol`. Fractional exponents
/// make the normalized sequence converge like `ε^{1/p}`; when the raw tail
/// is too slow but clearly geometric, Richardson passes with the observed
/// rate are applied before the test.
pub fn puiseux_leading(vectors: &[(Rational, Vec<CFloat>)], tol: f64) -> Result<PuiseuxLimit> {
    if vectors.len() < 4 {
        return Err(Error::Argument("at least four samples are needed".into()));
    }
    if vectors.windows(2).any(|w| w[1].0 >= w[0].0) || vectors.iter().any(|(e, _)| *e <= 0) {
        return Err(Error::Argument("epsilon must be positive and strictly decreasing".into()));
    }
    let last = &vectors[vectors.len() - 1].1;
    let reference = last
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.abs_f64()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Argument("empty vectors".into()))?;
    let mut seq: Vec<Vec<CFloat>> = vectors
        .iter()
        .map(|(_, v)| {
            unit_with_phase(v, reference)
                .ok_or_else(|| Error::PuiseuxNotResolved("reference component vanishes along the curve".into()))
        })
        .collect::<Result<_>>()?;
    let logs_e: Vec<f64> = vectors.iter().map(|(e, _)| e.to_f64().ln()).collect();
    let logs_v: Vec<f64> = vectors.iter().map(|(_, v)| norm_f64(v).ln()).collect();
    let exponent = slope(&logs_e, &logs_v);
    let mean_ratio = (logs_e[logs_e.len() - 1] - logs_e[0]) / (logs_e.len() - 1) as f64;

    let raw_steps: Vec<f64> = seq.windows(2).map(|w| distance(&w[0], &w[1])).collect();
    let mut corrections = Vec::new();
    loop {
        let steps: Vec<f64> = seq.windows(2).map(|w| distance(&w[0], &w[1])).collect();
        let tail = &steps[steps.len().saturating_sub(3)..];
        if tail.len() == 3 && tail.iter().all(|d| *d < tol) {
            let direction = seq.last().cloned().unwrap_or_default();
            let direction = unit_with_phase(&direction, reference).unwrap_or(direction);
            return Ok(PuiseuxLimit {
                direction,
                exponent,
                steps: raw_steps,
                corrections,
                reference,
            });
        }
        let rate = if corrections.len() < EXTRAPOLATIONS { tail_rate(&steps) } else { None };
        let Some(r) = rate else {
            let shown: Vec<String> = tail.iter().map(|d| format!("{d:e}")).collect();
            return Err(Error::PuiseuxNotResolved(format!(
                "last differences {} exceed {tol:e} after {} extrapolations",
                shown.join(", "),
                corrections.len()
            )));
        };
        corrections.push(r.ln() / mean_ratio);
        seq = extrapolate(&seq, r);
    }
}

/// Outcome of [`construct_eigenvector`].
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub input: Value,
    pub schedule: EpsSchedule,
    /// Seed of the curve direction actually used.
    pub curve_seed: u64,
    pub curve_attempts: usize,
    /// `v(ε) = ω(t(ε))` along the schedule.
    pub samples: Vec<(Rational, Vec<CFloat>)>,
    pub limit: PuiseuxLimit,
    pub epimorphism_seed: u64,
    pub epimorphism_attempts: usize,
    /// `w(D) = F(v₀)`, unit norm.
    pub w: Vec<CFloat>,
    /// Eigenvector test of `w` on the realized tensor product.
    pub eigen: EigenReport<CFloat>,
    /// Relative disagreement of `D^B_w` and the input at fresh points.
    pub operator_residual: f64,
    pub operator_tolerance: f64,
    space: ModuleSpace<CFloat>,
}

impl ConstructionResult {
    pub fn success(&self) -> bool {
        self.eigen.is_eigenvector() && self.operator_residual <= self.operator_tolerance && norm_f64(&self.w) > 0.0
    }

    pub fn space(&self) -> &ModuleSpace<CFloat> {
        &self.space
    }

    pub fn to_json(&self) -> Value {
        let samples: Vec<Value> = self
            .samples
            .iter()
            .map(|(e, v)| {
                json!({
                    "eps": rational_to_string(e),
                    "norm": norm_f64(v),
                    "vector": vector_to_json(&self.space, v),
                })
            })
            .collect();
        json!({
            "success": self.success(),
            "input": self.input,
            "schedule": {
                "eps0": rational_to_string(&self.schedule.eps0),
                "ratio": rational_to_string(&self.schedule.ratio),
                "steps": self.schedule.steps,
            },
            "curve_seed": self.curve_seed,
            "curve_attempts": self.curve_attempts,
            "genericity": "certified at the sampled eps only",
            "samples": samples,
            "limit": vector_to_json(&self.space, &self.limit.direction),
            "convergence": {
                "exponent": self.limit.exponent,
                "steps": self.limit.steps,
                "corrections": self.limit.corrections,
                "reference": self.space.tuple(self.limit.reference),
            },
            "epimorphism_seed": self.epimorphism_seed,
            "epimorphism_attempts": self.epimorphism_attempts,
            "w": vector_to_json(&self.space, &self.w),
            "eigen_residual": self.eigen.residual,
            "eigen_tolerance": self.eigen.tolerance,
            "operator_residual": self.operator_residual,
            "operator_tolerance": self.operator_tolerance,
        })
    }
}

/// Evaluation points `b_s` repeated `n_s = |λ^{(s)}|` times.
pub fn repeated_points(lambdas: &[Partition], b: &[Rational]) -> Vec<Rational> {
    lambdas
        .iter()
        .zip(b)
        .flat_map(|(p, x)| std::iter::repeat_n(x.clone(), p.size()))
        .collect()
}

/// Points away from every `b_s` for comparing scalar operators.
pub fn comparison_points(b: &[Rational], prec: u32) -> Vec<CFloat> {
    let far = b.iter().map(|x| x.to_f64().abs()).fold(0f64, f64::max).ceil();
    (1..=OPERATOR_SAMPLES)
        .map(|m| CFloat::new(prec, far + m as f64 + 0.25, 0.5 + 0.125 * m as f64))
        .collect()
}

/// `w(D⁰)`: the eigenvector of the Bethe algebra on `⊗_s L_{λ^{(s)}}(b_s)`
/// attached to an operator of the class.
///
/// The kernel of `D⁰` is deformed along a random curve of generic cell
/// points, the weight function is evaluated at the root coordinates with
/// `t^{(0)}` grouped by limit point, the leading direction of the
/// degeneration is projected by `F`, and the result is checked against
/// `D⁰`. `F` is redrawn while it annihilates the limit.
pub fn construct_eigenvector<S: Scalar>(
    d0: &DiffOp<S>,
    lambdas: &[Partition],
    lambda: &Partition,
    b: &[Rational],
    seeds: &Seeds,
    cfg: &Config,
) -> Result<ConstructionResult> {
    let prec = cfg.precision;
    if lambdas.len() != b.len() {
        return Err(Error::Argument(format!("{} partitions for {} points", lambdas.len(), b.len())));
    }
    let bs: Vec<S> = b.iter().map(|x| S::from_rational(x, prec)).collect();
    let membership = delta_membership(d0, lambdas, lambda, &bs, &cfg.tol, prec)?;
    if !membership.pass() {
        return Err(Error::NotInDelta(membership.to_json().to_string()));
    }
    let d0 = if d0.is_monic() { d0.clone() } else { d0.normalized()? };
    let kernel_tol = if S::EXACT { 0.0 } else { cfg.tol.zero };
    let x0 = kernel_to_point(&d0, lambda, kernel_tol)?;

    let groups: Vec<(Rational, usize)> = b.iter().cloned().zip(lambdas.iter().map(Partition::size)).collect();
    let curve = sample_curve(&x0, &groups, seeds.curve, &cfg.schedule, prec, cfg.curve_retries)?;
    let vectors: Vec<Vec<CFloat>> = crate::par::try_map(&curve.samples, |(_, t)| omega(t, cfg.max_bijections))?;
    let samples: Vec<(Rational, Vec<CFloat>)> = curve.samples.iter().map(|(e, _)| e.clone()).zip(vectors).collect();
    let limit = puiseux_leading(&samples, cfg.tol.puiseux)?;

    let v0_norm = norm_f64(&limit.direction);
    let mut chosen = None;
    for attempt in 0..cfg.epimorphism_retries.max(1) {
        let fseed = seeds.epimorphism.wrapping_add(attempt as u64);
        let f = Epimorphism::build(lambdas, fseed)?;
        let w = f.apply(&limit.direction, prec);
        if norm_f64(&w) > EPIMORPHISM_ZERO * v0_norm {
            chosen = Some((w, fseed, attempt + 1));
            break;
        }
    }
    let (w, epimorphism_seed, epimorphism_attempts) =
        chosen.ok_or(Error::DegenerateEpimorphism(cfg.epimorphism_retries.max(1)))?;
    let w = normalize_phase(&w);

    let space = ModuleSpace::new(lambda.rank(), repeated_points(lambdas, b))?.to_cfloat(prec);
    let eigen = eigen_check(&space, &w, cfg.tol.operator, prec)?;
    let target = d0.to_cfloat(prec);
    let operator_residual = eigen
        .operator
        .max_rel_diff_at(&target, &comparison_points(b, prec))
        .unwrap_or(f64::INFINITY);

    Ok(ConstructionResult {
        input: operator_to_json(&d0),
        schedule: cfg.schedule.clone(),
        curve_seed: curve.germ.seed,
        curve_attempts: curve.attempts,
        samples,
        limit,
        epimorphism_seed,
        epimorphism_attempts,
        w,
        eigen,
        operator_residual,
        operator_tolerance: cfg.tol.operator,
        space,
    })
}

/// `|⟨a, b⟩| / (‖a‖ ‖b‖)`.
pub fn abs_cosine(a: &[CFloat], b: &[CFloat]) -> f64 {
    let dot = crate::numeric::linalg::hdot(a, b);
    let (na, nb) = (norm_f64(a), norm_f64(b));
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot.abs_f64() / (na * nb)).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{Polynomial, RationalFunction};

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    fn cf(prec: u32, xs: &[f64]) -> Vec<CFloat> {
        xs.iter().map(|&x| CFloat::new(prec, x, 0.0)).collect()
    }

    fn schedule(steps: usize) -> Vec<Rational> {
        EpsSchedule::default().values().into_iter().take(steps).collect()
    }

    #[test]
    fn constant_sequence() {
        let v = cf(128, &[3.0, -4.0]);
        let seq: Vec<_> = schedule(8).into_iter().map(|e| (e, v.clone())).collect();
        let lim = puiseux_leading(&seq, 1e-12).unwrap();
        assert!((lim.direction[0].re_f64() + 0.6).abs() < 1e-15);
        // the largest component carries the positive phase
        assert!((lim.direction[1].re_f64() - 0.8).abs() < 1e-15);
        assert!(lim.exponent.abs() < 1e-12);
    }

    #[test]
    fn linear_plus_quadratic() {
        let x = cf(256, &[1.0, 2.0, 0.0]);
        let y = cf(256, &[0.0, 5.0, 7.0]);
        let seq: Vec<_> = schedule(25)
            .into_iter()
            .map(|e| {
                let ef = CFloat::from_rational(&e, 256);
                let e2 = ef.clone() * &ef;
                let v = x.iter().zip(&y).map(|(a, b)| a.clone() * &ef + b.clone() * &e2).collect();
                (e, v)
            })
            .collect();
        let lim = puiseux_leading(&seq, 1e-7).unwrap();
        let expect = [1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt(), 0.0];
        for (a, b) in lim.direction.iter().zip(expect) {
            assert!((a.re_f64() - b).abs() < 1e-8);
        }
        assert!((lim.exponent - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fractional_exponent() {
        let x = cf(256, &[0.0, 1.0]);
        let seq: Vec<_> = schedule(25)
            .into_iter()
            .map(|e| {
                let r = CFloat::from_rational(&e, 256).sqrt();
                let v = x.iter().map(|a| a.clone() * &r).collect();
                (e, v)
            })
            .collect();
        let lim = puiseux_leading(&seq, 1e-7).unwrap();
        assert!((lim.exponent - 0.5).abs() < 1e-9);
        assert!((lim.direction[1].re_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slow_sequence_is_extrapolated() {
        let seq: Vec<_> = schedule(25)
            .into_iter()
            .map(|e| {
                let r = CFloat::from_rational(&e, 256).sqrt();
                (e, vec![CFloat::new(256, 1.0, 0.0), r])
            })
            .collect();
        let lim = puiseux_leading(&seq, 1e-7).unwrap();
        assert!((lim.corrections[0] - 0.5).abs() < 1e-6);
        assert!(lim.direction[1].abs_f64() < 1e-9);
    }

    #[test]
    fn oscillating_sequence_is_reported() {
        let seq: Vec<_> = schedule(25)
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                let wobble = if k % 2 == 0 { 0.1 } else { -0.1 };
                (e, vec![CFloat::new(256, 1.0, 0.0), CFloat::new(256, wobble, 0.0)])
            })
            .collect();
        let err = puiseux_leading(&seq, 1e-7).unwrap_err();
        assert!(err.to_string().contains("Puiseux limit not resolved"));
    }

    #[test]
    fn rank_two_single_factor() {
        // D = ∂² - (1/u)∂ for λ = (1,0) at b = 0: kernel {1, u²}
        let lam = Partition::new(&[1], 2).unwrap();
        let inv_u = RationalFunction::new(Polynomial::constant(q(-1)), Polynomial::new(vec![q(0), q(1)]));
        let d = DiffOp::monic(vec![inv_u, RationalFunction::zero()]);
        let cfg = Config::default();
        let r = construct_eigenvector(&d, std::slice::from_ref(&lam), &lam, &[q(0)], &Seeds::from_base(1), &cfg)
            .unwrap();
        assert!(r.success(), "{}", r.to_json());
        // the only weight vector is v+
        assert!((r.w[0].re_f64() - 1.0).abs() < 1e-12);
        assert!(r.w[1].abs_f64() < 1e-12);
    }

    #[test]
    fn two_point_singlet() {
        // the singlet spans the one-dimensional singular space; its operator
        // must lead back to it
        let lam1 = Partition::new(&[1], 2).unwrap();
        let lam = Partition::new(&[1, 1], 2).unwrap();
        let lambdas = vec![lam1.clone(), lam1];
        let b = [q(0), q(1)];
        let space = ModuleSpace::new(2, b.to_vec()).unwrap();
        let v = vec![q(0), q(1), q(-1), q(0)];
        let rep = eigen_check(&space, &v, 0.0, 64).unwrap();
        assert!(rep.is_eigenvector());
        let cfg = Config::default();
        let r = construct_eigenvector(&rep.operator, &lambdas, &lam, &b, &Seeds::from_base(7), &cfg).unwrap();
        assert!(r.success(), "{}", r.to_json());
        let vc: Vec<CFloat> = v.iter().map(|x| x.to_cfloat(256)).collect();
        assert!(abs_cosine(&r.w, &vc) > 1.0 - 1e-9);
    }

    #[test]
    fn weight_mismatch_is_rejected() {
        let lam1 = Partition::new(&[1], 2).unwrap();
        let lam = Partition::new(&[2], 2).unwrap();
        let d = DiffOp::<Rational>::d_pow(2);
        let err = construct_eigenvector(&d, &[lam1], &lam, &[q(0)], &Seeds::from_base(1), &Config::default());
        assert!(matches!(err, Err(Error::NotInDelta(_))));
    }

    #[test]
    fn seeds_are_reproducible() {
        assert_eq!(Seeds::from_base(5), Seeds::from_base(5));
        assert_ne!(Seeds::from_base(5), Seeds::from_base(6));
    }
}
