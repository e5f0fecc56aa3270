//! The universal operator `D^B = rdet(∂ δ_{ij} - e_{ji}(u))` on a tensor
//! product of evaluation modules.
//!
//! On `⊗_s V(z_s)` every `e_{ij}(u)` acts as `Σ_s e_{ij}^{(s)} / (u - z_s)`.
//! Coefficients `B_i(u_0) v` are obtained by applying the row-determinant
//! product to `v (u - u_0)^k / k!` as a truncated Taylor jet at `u_0` and
//! reading off the constant term: `(D^B g_k)(u_0) = B_{N-k}(u_0) v`.

use crate::diffop::{MatrixDiffOp, MatrixRatFn};
use crate::error::{Error, Result};
use crate::gln::ModuleSpace;
use crate::numeric::linalg::norm_f64;
use crate::numeric::{Matrix, Polynomial, Scalar};

/// Taylor coefficients (vector-valued), lowest order first.
type Jet<S> = Vec<Vec<S>>;

struct JetContext<'a, S> {
    space: &'a ModuleSpace<S>,
    /// `w[s][k] = (-1)^k / (u_0 - z_s)^{k+1}`
    w: Vec<Vec<S>>,
    rank: usize,
}

impl<'a, S: Scalar> JetContext<'a, S> {
    fn new(space: &'a ModuleSpace<S>, u0: &S) -> Result<Self> {
        let rank = space.rank();
        let mut w = Vec::with_capacity(space.degree());
        for z in space.points() {
            let diff = u0.clone() - z;
            if diff.is_zero() {
                return Err(Error::Argument("sample point coincides with an evaluation point".into()));
            }
            let inv = diff.inv();
            let mut col = Vec::with_capacity(rank + 1);
            let mut cur = inv.clone();
            for _ in 0..=rank {
                col.push(cur.clone());
                cur = -(cur * &inv);
            }
            w.push(col);
        }
        Ok(JetContext { space, w, rank })
    }

    /// `e_{ij}(u) f` truncated to `len` terms.
    fn apply_current(&self, i: usize, j: usize, f: &Jet<S>, len: usize) -> Jet<S> {
        let dim = self.space.dim();
        let mut out = vec![vec![S::zero(); dim]; len];
        for s in 0..self.space.degree() {
            for (m, fm) in f.iter().enumerate().take(len) {
                if fm.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let img = self.space.act_factor(i, j, s, fm);
                for k in 0..len - m {
                    let c = &self.w[s][k];
                    let slot = &mut out[m + k];
                    for (o, x) in slot.iter_mut().zip(&img) {
                        if !x.is_zero() {
                            *o = o.clone() + x.clone() * c;
                        }
                    }
                }
            }
        }
        out
    }

    /// Entry `a_{rc} = δ_{rc} ∂ - e_{cr}(u)` applied to a jet.
    fn apply_entry(&self, r: usize, c: usize, f: &Jet<S>, len: usize) -> Jet<S> {
        let mut out = self.apply_current(c, r, f, len);
        for v in out.iter_mut() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
        if r == c {
            for m in 0..len {
                if m + 1 < f.len() {
                    let factor = S::from_i64((m + 1) as i64);
                    for (o, x) in out[m].iter_mut().zip(&f[m + 1]) {
                        if !x.is_zero() {
                            *o = o.clone() + x.clone() * &factor;
                        }
                    }
                }
            }
        }
        out
    }

    /// Depth-first expansion over rows `row..1` (applied right to left);
    /// suffix products are shared between permutations.
    fn expand(&self, row: usize, used: u32, sign: bool, jets: &[Jet<S>], acc: &mut [Vec<S>]) {
        if row == 0 {
            for (k, jet) in jets.iter().enumerate() {
                for (a, x) in acc[k].iter_mut().zip(&jet[0]) {
                    *a = if sign { a.clone() - x } else { a.clone() + x };
                }
            }
            return;
        }
        // rows 1..row-1 still hold at most row-1 derivatives
        let len = row;
        for c in 1..=self.rank {
            if used & (1 << c) != 0 {
                continue;
            }
            let below = (1..c).filter(|&x| used & (1 << x) != 0).count();
            let next_sign = sign ^ (below % 2 == 1);
            let next: Vec<Jet<S>> = jets
                .iter()
                .map(|f| self.apply_entry(row, c, f, len))
                .collect();
            self.expand(row - 1, used | (1 << c), next_sign, &next, acc);
        }
    }
}

/// `[B_1(u_0) v, …, B_N(u_0) v]` on the full space.
pub fn apply_coefficients<S: Scalar>(space: &ModuleSpace<S>, u0: &S, v: &[S]) -> Result<Vec<Vec<S>>> {
    let n = space.rank();
    let ctx = JetContext::new(space, u0)?;
    let dim = space.dim();
    // jets[k] represents v (u-u0)^k / k!, k = 0..N-1, giving B_{N-k}
    let mut fact = S::one();
    let jets: Vec<Jet<S>> = (0..n)
        .map(|k| {
            if k > 0 {
                fact = fact.clone() * S::from_i64(k as i64);
            }
            let mut jet = vec![vec![S::zero(); dim]; n + 1];
            jet[k] = v.iter().map(|x| x.clone() / &fact).collect();
            jet
        })
        .collect();
    let mut acc = vec![vec![S::zero(); dim]; n];
    ctx.expand(n, 0, false, &jets, &mut acc);
    // acc[k] = B_{N-k} v
    acc.reverse();
    Ok(acc)
}

/// Full-space matrices `B_1(u_0), …, B_N(u_0)`.
pub fn coefficient_matrices<S: Scalar>(space: &ModuleSpace<S>, u0: &S) -> Result<Vec<Matrix<S>>> {
    let dim = space.dim();
    let n = space.rank();
    let cols: Vec<Vec<Vec<S>>> = (0..dim)
        .map(|k| {
            let mut e = vec![S::zero(); dim];
            e[k] = S::one();
            apply_coefficients(space, u0, &e)
        })
        .collect::<Result<_>>()?;
    Ok((0..n)
        .map(|i| {
            let c: Vec<Vec<S>> = cols.iter().map(|bi| bi[i].clone()).collect();
            Matrix::from_columns(&c)
        })
        .collect())
}

/// `D^B` restricted to an invariant subspace given by a basis.
#[derive(Clone, Debug)]
pub struct UniversalOperator<S> {
    space: ModuleSpace<S>,
    basis: Vec<Vec<S>>,
    pivots: Vec<usize>,
    pivot_inv: Matrix<S>,
    tol: f64,
}

impl<S: Scalar> UniversalOperator<S> {
    /// `basis` must consist of linearly independent full-length vectors.
    /// `tol` is the relative leakage allowed in the float domain.
    pub fn new(space: ModuleSpace<S>, basis: Vec<Vec<S>>, max_rank: usize, tol: f64) -> Result<Self> {
        if space.rank() > max_rank {
            return Err(Error::CapExceeded(format!(
                "rank {} exceeds the row-determinant cap {max_rank}",
                space.rank()
            )));
        }
        let dim = space.dim();
        if basis.iter().any(|b| b.len() != dim) {
            return Err(Error::DimensionMismatch("basis vector length".into()));
        }
        let r = basis.len();
        let (pivots, pivot_inv) = if r == 0 {
            (Vec::new(), Matrix::zeros(0, 0))
        } else {
            let wt = Matrix::from_rows(basis.clone());
            let rr = wt.rref(tol);
            if rr.pivots.len() != r {
                return Err(Error::Argument("subspace basis is linearly dependent".into()));
            }
            let sub = Matrix::from_rows(
                rr.pivots
                    .iter()
                    .map(|&p| basis.iter().map(|b| b[p].clone()).collect())
                    .collect(),
            );
            let inv = sub
                .inverse()
                .ok_or_else(|| Error::Internal("pivot block is singular".into()))?;
            (rr.pivots, inv)
        };
        Ok(UniversalOperator {
            space,
            basis,
            pivots,
            pivot_inv,
            tol,
        })
    }

    /// The operator on the whole of `V^{⊗n}`.
    pub fn full(space: ModuleSpace<S>, max_rank: usize) -> Result<Self> {
        let dim = space.dim();
        let basis = (0..dim)
            .map(|k| {
                let mut e = vec![S::zero(); dim];
                e[k] = S::one();
                e
            })
            .collect();
        Self::new(space, basis, max_rank, 0.0)
    }

    pub fn space(&self) -> &ModuleSpace<S> {
        &self.space
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a full-length vector in the subspace basis; fails when
    /// the vector leaves the subspace.
    pub fn coordinates(&self, y: &[S]) -> Result<Vec<S>> {
        let yp: Vec<S> = self.pivots.iter().map(|&p| y[p].clone()).collect();
        let c = self.pivot_inv.matvec(&yp);
        let back = self.lift(&c);
        let leak: Vec<S> = back.iter().zip(y).map(|(a, b)| a.clone() - b).collect();
        let leak_norm = norm_f64(&leak);
        let scale = norm_f64(y).max(f64::MIN_POSITIVE);
        let bad = if S::EXACT {
            leak.iter().any(|x| !x.is_zero())
        } else {
            leak_norm > self.tol * scale
        };
        if bad {
            return Err(Error::NotInvariant(leak_norm / scale));
        }
        Ok(c)
    }

    pub fn lift(&self, c: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.space.dim()];
        for (ci, b) in c.iter().zip(&self.basis) {
            if ci.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                *o = o.clone() + x.clone() * ci;
            }
        }
        out
    }

    /// Restricted matrices of `B_1(u_0), …, B_N(u_0)` in the subspace basis.
    pub fn matrices_at(&self, u0: &S) -> Result<Vec<Matrix<S>>> {
        let n = self.space.rank();
        let r = self.dim();
        let images: Vec<Vec<Vec<S>>> = self
            .basis
            .iter()
            .map(|b| apply_coefficients(&self.space, u0, b))
            .collect::<Result<_>>()?;
        (0..n)
            .map(|i| {
                let cols: Vec<Vec<S>> = images
                    .iter()
                    .map(|img| self.coordinates(&img[i]))
                    .collect::<Result<_>>()?;
                Ok(if r == 0 {
                    Matrix::zeros(0, 0)
                } else {
                    Matrix::from_columns(&cols)
                })
            })
            .collect()
    }

    /// `Q(u) = Π (u - z)` over the distinct evaluation points.
    pub fn pole_polynomial(&self) -> Polynomial<S> {
        let mut distinct: Vec<S> = Vec::new();
        for z in self.space.points() {
            if !distinct.contains(z) {
                distinct.push(z.clone());
            }
        }
        Polynomial::from_roots(&distinct)
    }

    /// Sample points away from the evaluation points.
    fn interpolation_points(&self, count: usize) -> Vec<S> {
        let far = self
            .space
            .points()
            .iter()
            .map(|z| z.abs_f64())
            .fold(0f64, f64::max)
            .ceil() as i64
            + 1;
        (0..count).map(|k| S::from_i64(far + k as i64)).collect()
    }

    /// The restricted operator with exact rational-function coefficients:
    /// `B_i Q^i` is a matrix polynomial of degree at most `(k-1) i`.
    pub fn to_matrix_diffop(&self) -> Result<MatrixDiffOp<S>> {
        let n = self.space.rank();
        let q = self.pole_polynomial();
        let k = q.degree().unwrap_or(0);
        let r = self.dim();
        let max_deg = k.saturating_sub(1) * n;
        let pts = self.interpolation_points(max_deg + 1);
        let values: Vec<Vec<Matrix<S>>> = pts
            .iter()
            .map(|u| self.matrices_at(u))
            .collect::<Result<_>>()?;
        let mut coeffs = vec![MatrixRatFn::identity(r)];
        let mut qi = Polynomial::one();
        for i in 1..=n {
            qi = &qi * &q;
            let deg = k.saturating_sub(1) * i;
            let vals: Vec<Matrix<S>> = values[..=deg].iter().map(|v| v[i - 1].clone()).collect();
            coeffs.push(MatrixRatFn::interpolate(qi.clone(), deg, &pts[..=deg], &vals)?);
        }
        MatrixDiffOp::new(coeffs)
    }
}
