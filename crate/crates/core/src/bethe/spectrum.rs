//! Simultaneous diagonalization of the restricted Bethe algebra.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::eigen::{eigen_check, EigenReport};
use super::universal::UniversalOperator;
use crate::config::Tolerances;
use crate::error::Result;
use crate::numeric::linalg::norm_f64;
use crate::numeric::roots::cluster;
use crate::numeric::{poly_roots, CFloat, Matrix, Scalar};

/// Random combinations tried before accepting a repeated spectrum.
const SQUAREFREE_RETRIES: usize = 5;
/// Extra combinations used to split clusters.
const REFINEMENTS: usize = 4;

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// One report per one-dimensional joint eigenspace.
    pub eigen: Vec<EigenReport<CFloat>>,
    /// Dimensions of joint eigenspaces that could not be split.
    pub degenerate: Vec<usize>,
    /// Dimension of the subspace that was diagonalized.
    pub dim: usize,
}

impl Spectrum {
    pub fn is_simple(&self) -> bool {
        self.degenerate.is_empty() && self.eigen.len() == self.dim
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim,
            "eigenvectors": self.eigen.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
            "degenerate": self.degenerate,
        })
    }
}

/// A random element `Σ c_{ir} B_i(u_r)` of the restricted algebra.
fn random_element<S: Scalar>(op: &UniversalOperator<S>, rng: &mut ChaCha8Rng) -> Result<Matrix<S>> {
    let far = op
        .space()
        .points()
        .iter()
        .map(|z| z.abs_f64())
        .fold(0f64, f64::max)
        .ceil() as i64
        + 1;
    let r = op.dim();
    let mut acc = Matrix::zeros(r, r);
    let mut used = Vec::new();
    for _ in 0..2 {
        let mut u;
        loop {
            u = far + rng.gen_range(1..=60);
            if !used.contains(&u) {
                break;
            }
        }
        used.push(u);
        for b in op.matrices_at(&S::from_i64(u))? {
            let c = rng.gen_range(-10i64..=10);
            if c != 0 {
                acc = acc.add(&b.scale(&S::from_i64(c)));
            }
        }
    }
    Ok(acc)
}

/// Restriction of `m` to the column space of `e` (assumed invariant).
fn restrict(m: &Matrix<CFloat>, e: &Matrix<CFloat>) -> Option<Matrix<CFloat>> {
    let eh = e.conj_transpose();
    let gram = eh.mul(e);
    let inv = gram.inverse()?;
    Some(inv.mul(&eh).mul(&m.mul(e)))
}

/// Eigen-split `e` (columns spanning an invariant subspace) using the
/// matrices `mats[depth..]`.
fn split(
    mats: &[Matrix<CFloat>],
    e: Matrix<CFloat>,
    depth: usize,
    tol: &Tolerances,
    prec: u32,
    out: &mut Vec<Matrix<CFloat>>,
    degenerate: &mut Vec<usize>,
) -> Result<()> {
    let m = e.cols();
    if m == 1 {
        out.push(e);
        return Ok(());
    }
    if depth >= mats.len() {
        degenerate.push(m);
        return Ok(());
    }
    let Some(local) = restrict(&mats[depth], &e) else {
        degenerate.push(m);
        return Ok(());
    };
    let roots = poly_roots(&local.charpoly(), prec)?;
    split_by_roots(mats, &e, &local, &roots, depth, tol, prec, out, degenerate)
}

#[allow(clippy::too_many_arguments)]
fn split_by_roots(
    mats: &[Matrix<CFloat>],
    e: &Matrix<CFloat>,
    local: &Matrix<CFloat>,
    roots: &[CFloat],
    depth: usize,
    tol: &Tolerances,
    prec: u32,
    out: &mut Vec<Matrix<CFloat>>,
    degenerate: &mut Vec<usize>,
) -> Result<()> {
    let scale = roots.iter().map(|r| r.abs_f64()).fold(local.max_abs(), f64::max).max(1e-300);
    let clusters = cluster(roots, tol.cluster * scale);
    let m = local.rows();
    for (lambda, _) in clusters {
        let mut shifted = local.clone();
        for i in 0..m {
            shifted[(i, i)] = shifted[(i, i)].clone() - &lambda;
        }
        let null = shifted.nullspace(tol.cluster);
        if null.is_empty() {
            continue;
        }
        let sub = e.mul(&Matrix::from_columns(&null));
        split(mats, sub, depth + 1, tol, prec, out, degenerate)?;
    }
    Ok(())
}

/// Unit norm with the largest-magnitude component real and positive.
pub fn normalize_phase(v: &[CFloat]) -> Vec<CFloat> {
    let Some((idx, _)) = v
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.abs_f64()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    else {
        return Vec::new();
    };
    let pivot = v[idx].clone();
    let prec = pivot.prec();
    let phase = CFloat::from_real(pivot.abs()) / &pivot;
    let rotated: Vec<CFloat> = v.iter().map(|x| x.clone() * &phase).collect();
    let norm = rotated
        .iter()
        .fold(rug::Float::new(prec), |acc, x| acc + x.abs().square());
    let inv = CFloat::from_real(norm.sqrt().recip());
    rotated.into_iter().map(|x| x * &inv).collect()
}

/// Joint eigenvectors of `{B_i(u)}` on the subspace of `op`.
///
/// A random element of the algebra is diagonalized first. In the exact
/// domain its characteristic polynomial is computed exactly and a new
/// element is drawn while it has repeated roots. Joint eigenspaces of
/// dimension greater than one are split with further random elements; any
/// that survive are reported as degenerate.
pub fn spectrum<S: Scalar>(op: &UniversalOperator<S>, tol: &Tolerances, seed: u64, prec: u32) -> Result<Spectrum> {
    let r = op.dim();
    if r == 0 {
        return Ok(Spectrum {
            eigen: Vec::new(),
            degenerate: Vec::new(),
            dim: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = random_element(op, &mut rng)?;
    let mut charpoly = first.charpoly();
    for _ in 1..SQUAREFREE_RETRIES {
        if !S::EXACT || charpoly.is_squarefree() {
            break;
        }
        first = random_element(op, &mut rng)?;
        charpoly = first.charpoly();
    }
    let roots = poly_roots(&charpoly, prec)?;
    let mut mats = vec![first.map(|x| x.to_cfloat(prec))];
    for _ in 0..REFINEMENTS {
        mats.push(random_element(op, &mut rng)?.map(|x| x.to_cfloat(prec)));
    }

    let mut spaces = Vec::new();
    let mut degenerate = Vec::new();
    let ident: Matrix<CFloat> = Matrix::<CFloat>::identity(r).map(|x| x.with_prec(prec));
    split_by_roots(&mats, &ident, &mats[0], &roots, 0, tol, prec, &mut spaces, &mut degenerate)?;

    let cspace = op.space().to_cfloat(prec);
    let basis: Vec<Vec<CFloat>> = op
        .basis()
        .iter()
        .map(|b| b.iter().map(|x| x.to_cfloat(prec)).collect())
        .collect();
    let vectors: Vec<Vec<CFloat>> = spaces
        .iter()
        .map(|e| {
            let coords = e.column(0);
            let mut full = vec![CFloat::zero(); cspace.dim()];
            for (c, b) in coords.iter().zip(&basis) {
                for (f, x) in full.iter_mut().zip(b) {
                    *f = f.clone() + x.clone() * c;
                }
            }
            normalize_phase(&full)
        })
        .filter(|v| norm_f64(v) > 0.0)
        .collect();
    let eigen = crate::par::try_map(&vectors, |v| eigen_check(&cspace, v, tol.operator, prec))?;
    Ok(Spectrum {
        eigen,
        degenerate,
        dim: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gln::{singular_basis, ModuleSpace, Partition};
    use rug::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    fn singular_op(z: &[i64], parts: &[usize], n: usize) -> UniversalOperator<Rational> {
        let space = ModuleSpace::new(n, z.iter().map(|&x| q(x)).collect()).unwrap();
        let lam = Partition::new(parts, n).unwrap();
        let basis = singular_basis(&space, &lam, 0.0);
        UniversalOperator::new(space, basis, 4, 0.0).unwrap()
    }

    #[test]
    fn one_dimensional_singlet() {
        let op = singular_op(&[0, 1], &[1, 1], 2);
        let tol = Tolerances::for_precision(256);
        let sp = spectrum(&op, &tol, 1, 256).unwrap();
        assert!(sp.is_simple());
        assert_eq!(sp.eigen.len(), 1);
        let v = &sp.eigen[0].vector;
        // ∝ v+ ⊗ e21 v+ - e21 v+ ⊗ v+
        let s = (v[1].clone() + &v[2]).abs_f64();
        assert!(s < 1e-60 && v[1].abs_f64() > 0.5);
        assert!(sp.eigen[0].is_eigenvector());
    }

    #[test]
    fn two_simple_eigenvectors_for_four_points() {
        let op = singular_op(&[0, 1, 3, 7], &[2, 2], 2);
        assert_eq!(op.dim(), 2);
        let tol = Tolerances::for_precision(256);
        let sp = spectrum(&op, &tol, 9, 256).unwrap();
        assert!(sp.is_simple());
        assert_eq!(sp.eigen.len(), 2);
        for e in &sp.eigen {
            assert!(e.is_eigenvector(), "residual {}", e.residual);
        }
        let pts: Vec<CFloat> = [11, 13].iter().map(|&x| CFloat::from_i64(x)).collect();
        let d = sp.eigen[0].operator.max_rel_diff_at(&sp.eigen[1].operator, &pts).unwrap();
        assert!(d > 1e-6);
    }
}
