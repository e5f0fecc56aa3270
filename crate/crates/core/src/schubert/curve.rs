//! Curve germs `X(ε)` in the cell through a given point, sampled on a
//! geometric schedule, with continuous tracking of the root coordinates.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::{RootCoordinates, SchubertPoint};
use crate::config::EpsSchedule;
use crate::error::{Error, Result};
use crate::numeric::scalar::default_tolerance;
use crate::numeric::{CFloat, Scalar};

/// `X(ε) = X⁰ + ε G` on the free flag coefficients, `G` integral.
#[derive(Clone, Debug)]
pub struct CurveGerm<S> {
    pub base: SchubertPoint<S>,
    pub direction: BTreeMap<(usize, usize), S>,
    /// Seed that produced `direction`.
    pub seed: u64,
}

impl<S: Scalar> CurveGerm<S> {
    pub fn at(&self, eps: &Rational, prec: u32) -> Result<SchubertPoint<S>> {
        self.base.perturbed(&self.direction, &S::from_rational(eps, prec))
    }
}

#[derive(Clone, Debug)]
pub struct CurveSample<S> {
    pub germ: CurveGerm<S>,
    /// `(ε, t(ε))` in schedule order; `t^{(0)}_s` sits at tensor slot `s`.
    pub samples: Vec<(Rational, RootCoordinates<CFloat>)>,
    /// Directions drawn before a generic one was found.
    pub attempts: usize,
}

fn direction_seed(seed: u64, attempt: usize) -> u64 {
    seed ^ (attempt as u64).wrapping_mul(0xD1B5_4A32_D192_ED03)
}

fn random_direction<S: Scalar>(base: &SchubertPoint<S>, seed: u64, prec: u32) -> BTreeMap<(usize, usize), S> {
    let keys: Vec<(usize, usize)> = base.coeffs().into_iter().map(|(k, _)| k).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let dir: BTreeMap<_, _> = keys
            .iter()
            .map(|&k| (k, S::from_rational(&Rational::from(rng.gen_range(-10i64..=10)), prec)))
            .collect();
        if keys.is_empty() || dir.values().any(|g| !g.is_zero()) {
            return dir;
        }
    }
}

fn dist(a: &CFloat, b: &CFloat) -> f64 {
    (a.clone() - b).abs_f64()
}

/// Permutation `p` minimizing `Σ_i |new[p[i]] - old[i]|`: exact subset
/// dynamic programming up to 16 points, greedy beyond.
fn match_roots(old: &[CFloat], new: &[CFloat]) -> Vec<usize> {
    let n = old.len();
    let cost: Vec<Vec<f64>> = old.iter().map(|o| new.iter().map(|x| dist(o, x)).collect()).collect();
    if n > 16 {
        let mut used = vec![false; n];
        return (0..n)
            .map(|i| {
                let j = (0..n)
                    .filter(|&j| !used[j])
                    .min_by(|&a, &b| cost[i][a].total_cmp(&cost[i][b]))
                    .unwrap_or(0);
                used[j] = true;
                j
            })
            .collect();
    }
    let full = 1usize << n;
    let mut best = vec![f64::INFINITY; full];
    let mut choice = vec![usize::MAX; full];
    best[0] = 0.0;
    for mask in 0..full {
        if !best[mask].is_finite() {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == n {
            continue;
        }
        for j in 0..n {
            if mask & (1 << j) == 0 {
                let next = mask | (1 << j);
                let c = best[mask] + cost[i][j];
                if c < best[next] {
                    best[next] = c;
                    choice[next] = j;
                }
            }
        }
    }
    let mut perm = vec![0; n];
    let mut mask = full - 1;
    for i in (0..n).rev() {
        let j = choice[mask];
        perm[i] = j;
        mask &= !(1 << j);
    }
    perm
}

/// Split the level-0 roots into groups around `b_s` of sizes `n_s`, each
/// group ordered by distance to `b_s` and then by angle.
fn group_roots(roots: &[CFloat], groups: &[(Rational, usize)], prec: u32) -> Result<Vec<CFloat>> {
    let centers: Vec<CFloat> = groups.iter().map(|(b, _)| b.to_cfloat(prec)).collect();
    let radius = if centers.len() < 2 {
        f64::INFINITY
    } else {
        let mut m = f64::INFINITY;
        for (i, a) in centers.iter().enumerate() {
            for b in &centers[i + 1..] {
                m = m.min(dist(a, b));
            }
        }
        m / 2.0
    };
    let mut buckets: Vec<Vec<CFloat>> = vec![Vec::new(); groups.len()];
    for t in roots {
        let (s, d) = centers
            .iter()
            .enumerate()
            .map(|(s, c)| (s, dist(t, c)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or_else(|| Error::DegenerationMismatch("no target points".into()))?;
        if d >= radius {
            return Err(Error::DegenerationMismatch(format!(
                "root {t} is not within {radius:e} of any target point"
            )));
        }
        buckets[s].push(t.clone());
    }
    let mut out = Vec::with_capacity(roots.len());
    for ((bucket, (b, ns)), c) in buckets.iter_mut().zip(groups).zip(&centers) {
        if bucket.len() != *ns {
            return Err(Error::DegenerationMismatch(format!(
                "{} roots approach {b}, expected {ns}",
                bucket.len()
            )));
        }
        let key = |t: &CFloat| {
            let d = t.clone() - c;
            (d.abs_f64(), d.im_f64().atan2(d.re_f64()))
        };
        bucket.sort_by(|x, y| {
            let (a, b) = (key(x), key(y));
            a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
        });
        out.append(bucket);
    }
    Ok(out)
}

/// Sample `X(ε)` along the schedule and return root coordinates ordered so
/// that the first `n_1` entries of `t^{(0)}` tend to `b_1`, the next `n_2`
/// to `b_2`, and so on. Ordering is fixed at the smallest `ε` and carried
/// to larger `ε` by optimal nearest-neighbour matching, level by level.
/// Genericity is certified at the sampled `ε` only: exactly for a rational
/// base point, by root separation otherwise.
pub fn sample_curve<S: Scalar>(
    base: &SchubertPoint<S>,
    groups: &[(Rational, usize)],
    seed: u64,
    schedule: &EpsSchedule,
    prec: u32,
    retries: usize,
) -> Result<CurveSample<S>> {
    let eps = schedule.values();
    if eps.is_empty() {
        return Err(Error::Argument("empty epsilon schedule".into()));
    }
    let total: usize = groups.iter().map(|g| g.1).sum();
    let l0 = base.lambda().size();
    if total != l0 {
        return Err(Error::DegenerationMismatch(format!(
            "group sizes sum to {total} but |λ| = {l0}"
        )));
    }
    let sep = if S::EXACT { 0.0 } else { default_tolerance(prec) };
    for attempt in 0..retries.max(1) {
        let dseed = direction_seed(seed, attempt);
        let germ = CurveGerm {
            base: base.clone(),
            direction: random_direction(base, dseed, prec),
            seed: dseed,
        };
        let points: Vec<SchubertPoint<S>> = eps.iter().map(|e| germ.at(e, prec)).collect::<Result<_>>()?;
        let generic = crate::par::try_map(&points, |x| x.is_generic(prec, sep))?;
        if generic.iter().any(|g| !g) && !germ.direction.is_empty() {
            continue;
        }
        let mut roots: Vec<RootCoordinates<CFloat>> = crate::par::try_map(&points, |x| x.root_coordinates(prec))?;
        let last = roots.len() - 1;
        roots[last].levels[0] = group_roots(&roots[last].levels[0], groups, prec)?;
        for m in (0..last).rev() {
            for a in 0..roots[m].levels.len() {
                let perm = match_roots(&roots[m + 1].levels[a], &roots[m].levels[a]);
                let reordered: Vec<CFloat> = perm.iter().map(|&j| roots[m].levels[a][j].clone()).collect();
                roots[m].levels[a] = reordered;
            }
        }
        return Ok(CurveSample {
            germ,
            samples: eps.into_iter().zip(roots).collect(),
            attempts: attempt + 1,
        });
    }
    Err(Error::NonGeneric(format!(
        "no generic curve direction after {retries} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gln::Partition;
    use crate::numeric::Polynomial;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn single_root_tends_to_target() {
        let lam = Partition::new(&[1], 2).unwrap();
        let x0 = SchubertPoint::from_polynomials(
            lam,
            &[Polynomial::new(vec![q(0), q(0), q(1)]), Polynomial::constant(q(1))],
            0.0,
        )
        .unwrap();
        let sched = EpsSchedule::default();
        let s = sample_curve(&x0, &[(q(0), 1)], 3, &sched, 128, 10).unwrap();
        let (e, t) = s.samples.last().unwrap();
        assert!(t.levels[0][0].abs_f64() <= e.to_f64() * 20.0);
    }

    #[test]
    fn roots_split_by_group() {
        // f_1 = u^3, f_2 = u: y_0 = u^3, so all three roots tend to 0
        let lam = Partition::new(&[2, 1], 2).unwrap();
        let mut c = BTreeMap::new();
        c.insert((1, 1), q(0));
        c.insert((1, 3), q(0));
        c.insert((2, 1), q(0));
        let x0 = SchubertPoint::from_coeffs(lam, &c).unwrap();
        let y0 = x0.y_polynomials().unwrap()[0].clone();
        assert_eq!(y0, Polynomial::new(vec![q(0), q(0), q(0), q(1)]));
        let sched = EpsSchedule::default();
        assert!(sample_curve(&x0, &[(q(0), 3)], 5, &sched, 128, 10).is_ok());
        let err = sample_curve(&x0, &[(q(0), 2), (q(3), 1)], 5, &sched, 128, 10).unwrap_err();
        assert!(matches!(err, Error::DegenerationMismatch(_)));
    }

    #[test]
    fn matching_is_optimal() {
        let p = |x: f64| CFloat::new(64, x, 0.0);
        let old = vec![p(0.0), p(1.0), p(2.0)];
        let new = vec![p(2.1), p(-0.1), p(0.9)];
        assert_eq!(match_roots(&old, &new), vec![1, 2, 0]);
    }
}
