//! All roots of a polynomial by Aberth–Ehrlich simultaneous iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

use super::poly::Polynomial;
use super::scalar::{unit_roundoff, CFloat, Scalar};
use crate::error::{Error, Result};

/// Extra mantissa bits carried during the iteration.
const GUARD_BITS: u32 = 32;

/// Roots of `p` with multiplicity, sorted by (real, imaginary) part.
///
/// In the exact domain the polynomial is first split into square-free
/// factors, so multiplicities are exact and every factor has simple roots.
/// In the float domain roots are returned as computed; see
/// [`clustered_roots`] for multiplicity assignment.
pub fn poly_roots<S: Scalar>(p: &Polynomial<S>, prec: u32) -> Result<Vec<CFloat>> {
    let deg = match p.degree() {
        None => return Err(Error::Argument("roots of the zero polynomial".into())),
        Some(d) => d,
    };
    let mut roots = Vec::with_capacity(deg);
    if deg == 0 {
        return Ok(roots);
    }
    if S::EXACT {
        for (factor, mult) in p.squarefree_decomposition() {
            let rs = simple_roots(&factor, prec);
            for r in rs {
                for _ in 0..mult {
                    roots.push(r.clone());
                }
            }
        }
    } else {
        roots = aberth(&p.to_cfloat(prec + GUARD_BITS), prec);
    }
    roots.sort_by(|a, b| a.lex_cmp(b));
    Ok(roots)
}

/// Roots grouped into clusters of radius `1e3 * u * max|root|`, each cluster
/// replaced by its centroid and its size.
pub fn clustered_roots<S: Scalar>(p: &Polynomial<S>, prec: u32) -> Result<Vec<(CFloat, usize)>> {
    let roots = poly_roots(p, prec)?;
    let scale = roots.iter().map(|r| r.abs_f64()).fold(1.0, f64::max);
    let radius = 1e3 * unit_roundoff(prec) * scale;
    Ok(cluster(&roots, radius))
}

/// Greedy single-linkage clustering within `radius`.
pub fn cluster(points: &[CFloat], radius: f64) -> Vec<(CFloat, usize)> {
    let n = points.len();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if label[i].is_some() {
            continue;
        }
        let g = groups.len();
        label[i] = Some(g);
        let mut members = vec![i];
        let mut k = 0;
        while k < members.len() {
            let a = members[k];
            for j in 0..n {
                if label[j].is_none() && (points[a].clone() - &points[j]).abs_f64() <= radius {
                    label[j] = Some(g);
                    members.push(j);
                }
            }
            k += 1;
        }
        groups.push(members);
    }
    groups
        .into_iter()
        .map(|members| {
            let m = members.len();
            let sum = members
                .iter()
                .fold(CFloat::zero(), |acc, &i| acc + &points[i]);
            (sum / CFloat::from_i64(m as i64), m)
        })
        .collect()
}

fn simple_roots<S: Scalar>(factor: &Polynomial<S>, prec: u32) -> Vec<CFloat> {
    match factor.degree() {
        Some(1) => {
            // monic linear factor u + c
            let c = factor.coeff(0).to_cfloat(prec);
            vec![-c]
        }
        _ => aberth(&factor.to_cfloat(prec + GUARD_BITS), prec),
    }
}

/// Aberth–Ehrlich iteration on a float polynomial of degree >= 1.
/// Results are rounded to `out_prec` bits.
fn aberth(p: &Polynomial<CFloat>, out_prec: u32) -> Vec<CFloat> {
    let wp = p.coeffs().iter().map(|c| c.prec()).max().unwrap_or(out_prec);
    let n = p.degree().expect("nonzero polynomial");
    let p = p.monic();
    if n == 1 {
        return vec![(-p.coeff(0)).with_prec(out_prec)];
    }
    let dp = p.derivative();
    let coeffs = p.coeffs();

    // Fujiwara bound for the root moduli.
    let mut bound = 0f64;
    for (k, c) in coeffs.iter().enumerate().take(n) {
        let a = c.abs_f64();
        if a > 0.0 {
            let e = 1.0 / (n - k) as f64;
            let v = if k == 0 { (a / 2.0).powf(e) } else { a.powf(e) };
            bound = bound.max(2.0 * v);
        }
    }
    if !bound.is_finite() || bound == 0.0 {
        bound = 1.0;
    }
    let centre = -coeffs[n - 1].clone() / CFloat::from_i64(n as i64);
    let radius = Float::with_val(wp, bound.max(1e-30));
    let mut z: Vec<CFloat> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre.clone() + CFloat::polar(wp, &radius, theta)
        })
        .collect();

    let eps = unit_roundoff(wp) * 16.0;
    let max_iter = 100 + 8 * wp as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    let mut best = f64::INFINITY;
    let mut since_best = 0usize;
    let mut restarts = 0usize;
    for _ in 0..max_iter {
        let mut max_rel = 0f64;
        for k in 0..n {
            let pv = p.eval(&z[k]);
            if pv.is_zero() {
                continue;
            }
            let dv = dp.eval(&z[k]);
            if dv.is_zero() {
                // nudge off a critical point
                let nudge = CFloat::new(wp, 1e-3 * bound, 1e-3 * bound);
                z[k] = z[k].clone() + nudge;
                max_rel = f64::INFINITY;
                continue;
            }
            let w = pv / dv;
            let mut s = CFloat::zero();
            for j in 0..n {
                if j != k {
                    let diff = z[k].clone() - &z[j];
                    if !diff.is_zero() {
                        s = s + diff.inv();
                    }
                }
            }
            let denom = CFloat::one() - w.clone() * &s;
            let corr = if denom.is_zero() { w } else { w / denom };
            let rel = corr.abs_f64() / z[k].abs_f64().max(bound * 1e-12);
            max_rel = max_rel.max(rel);
            z[k] = z[k].clone() - corr;
        }
        if max_rel <= eps {
            break;
        }
        if max_rel < best * 0.5 {
            best = max_rel;
            since_best = 0;
        } else {
            since_best += 1;
        }
        if since_best > 40 {
            // Stagnation: either attainable accuracy is reached (multiple
            // roots) or the iteration is cycling. Perturb once, then accept.
            if best > 1e-6 && restarts < 3 {
                restarts += 1;
                for zk in z.iter_mut() {
                    let dx: f64 = rng.gen_range(-1.0..1.0);
                    let dy: f64 = rng.gen_range(-1.0..1.0);
                    let m = zk.abs_f64().max(1.0) * 1e-3;
                    *zk = zk.clone() + CFloat::new(wp, dx * m, dy * m);
                }
                best = f64::INFINITY;
                since_best = 0;
            } else {
                break;
            }
        }
    }
    z.into_iter().map(|r| r.with_prec(out_prec)).collect()
}
