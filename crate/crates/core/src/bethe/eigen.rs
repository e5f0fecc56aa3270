//! Eigenvector test and the scalar operator `D^B_v` attached to an eigenvector.

use rug::Float;
use serde_json::{json, Value};

use super::universal::apply_coefficients;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::gln::ModuleSpace;
use crate::io::poly_to_json;
use crate::numeric::linalg::norm_f64;
use crate::numeric::{CFloat, Matrix, Polynomial, RationalFunction, Scalar};

#[derive(Clone, Debug)]
pub struct EigenReport<S> {
    pub vector: Vec<S>,
    /// `h_1, …, h_N`
    pub h: Vec<RationalFunction<S>>,
    pub residual: f64,
    pub tolerance: f64,
    /// `D^B_v = ∂^N + Σ h_i ∂^{N-i}`
    pub operator: DiffOp<S>,
}

impl<S: Scalar> EigenReport<S> {
    pub fn is_eigenvector(&self) -> bool {
        if S::EXACT {
            self.residual == 0.0
        } else {
            self.residual <= self.tolerance
        }
    }

    pub fn to_json(&self) -> Value {
        let h: Vec<Value> = self
            .h
            .iter()
            .map(|f| json!({"num": poly_to_json(f.num()), "den": poly_to_json(f.den())}))
            .collect();
        json!({
            "is_eigenvector": self.is_eigenvector(),
            "residual": self.residual,
            "tolerance": self.tolerance,
            "h": h,
            "vector": self.vector.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Distinct evaluation points and `Q(u) = Π (u - z)` over them.
fn pole_data<S: Scalar>(space: &ModuleSpace<S>) -> (Vec<S>, Polynomial<S>) {
    let mut distinct: Vec<S> = Vec::new();
    for z in space.points() {
        if !distinct.contains(z) {
            distinct.push(z.clone());
        }
    }
    let q = Polynomial::from_roots(&distinct);
    (distinct, q)
}

fn largest_component<S: Scalar>(v: &[S]) -> Option<usize> {
    let (idx, best) = v
        .iter()
        .enumerate()
        .map(|(i, x)| (i, x.abs_f64()))
        .fold((0, -1.0), |acc, (i, a)| if a > acc.1 { (i, a) } else { acc });
    if best <= 0.0 && v.get(idx).is_none_or(|x| x.is_zero()) {
        // abs_f64 may underflow; fall back to an exact nonzero test
        return v.iter().position(|x| !x.is_zero());
    }
    Some(idx)
}

/// Test whether `v` is a joint eigenvector of all `B_i(u)` and recover the
/// eigenvalues `h_i(u) = N_i(u) / Q(u)^i` with `deg N_i <= (k-1) i`.
///
/// Exact domain: `N_i` is interpolated at `(k-1) i + 1` integer points and
/// the residual is measured exactly at three further points. Float domain:
/// `N_i` is a least-squares fit over `3(kN + 1)` points on a circle enclosing
/// every pole; the residual is the worst relative mismatch over that circle.
pub fn eigen_check<S: Scalar>(space: &ModuleSpace<S>, v: &[S], tolerance: f64, prec: u32) -> Result<EigenReport<S>> {
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch("eigenvector length".into()));
    }
    let jstar = largest_component(v).ok_or_else(|| Error::Argument("zero vector".into()))?;
    let n = space.rank();
    let (distinct, q) = pole_data(space);
    let k = distinct.len();
    let points = if S::EXACT {
        let far = distinct.iter().map(|z| z.abs_f64()).fold(0f64, f64::max).ceil() as i64 + 1;
        (0..k.saturating_sub(1) * n + 4).map(|j| S::from_i64(far + j as i64)).collect()
    } else {
        circle_points(&distinct, 3 * (k * n + 1), prec)
    };
    let values: Vec<Vec<Vec<S>>> = crate::par::try_map(&points, |u| apply_coefficients(space, u, v))?;
    let vj = v[jstar].clone();
    let vnorm = norm_f64(v);

    let mut h = Vec::with_capacity(n);
    let mut qi = Polynomial::one();
    for i in 1..=n {
        qi = &qi * &q;
        let deg = k.saturating_sub(1) * i;
        let ys: Vec<S> = points
            .iter()
            .zip(&values)
            .map(|(u, val)| val[i - 1][jstar].clone() / &vj * &qi.eval(u))
            .collect();
        let num = if S::EXACT {
            crate::numeric::interpolate(&points[..=deg], &ys[..=deg])
        } else {
            fit_on_circle(&distinct, &points, &ys, deg, prec)?
        };
        h.push(if num.is_zero() {
            RationalFunction::zero()
        } else {
            RationalFunction::new(num, qi.clone())
        });
    }

    let mut residual = 0f64;
    for (u, val) in points.iter().zip(&values) {
        for i in 0..n {
            let hi = h[i]
                .eval(u)
                .ok_or_else(|| Error::Internal("sample point hit a pole".into()))?;
            let diff: Vec<S> = val[i]
                .iter()
                .zip(v)
                .map(|(b, x)| b.clone() - x.clone() * &hi)
                .collect();
            let r = if S::EXACT && diff.iter().any(|x| !x.is_zero()) {
                norm_f64(&diff).max(f64::MIN_POSITIVE) / vnorm
            } else {
                norm_f64(&diff) / vnorm
            };
            residual = residual.max(r);
        }
    }
    let operator = DiffOp::monic(h.clone());
    Ok(EigenReport {
        vector: v.to_vec(),
        h,
        residual,
        tolerance,
        operator,
    })
}

/// Center and radius of a circle enclosing all points with margin.
fn enclosing_circle<S: Scalar>(distinct: &[S]) -> (S, f64) {
    let k = distinct.len().max(1);
    let center = distinct
        .iter()
        .fold(S::zero(), |acc, z| acc + z)
        / S::from_i64(k as i64);
    let spread = distinct
        .iter()
        .map(|z| (z.clone() - &center).abs_f64())
        .fold(0f64, f64::max);
    (center, 2.0 * spread + 1.0)
}

/// `m` points `c + R e^{2πi (r + 1/2) / m}`.
fn circle_points<S: Scalar>(distinct: &[S], m: usize, prec: u32) -> Vec<S> {
    let (center, radius) = enclosing_circle(distinct);
    let r = Float::with_val(prec, radius);
    (0..m)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / m as f64;
            let p = CFloat::polar(prec, &r, theta);
            center.clone() + S::from_cfloat(&p).expect("circle sampling needs the float domain")
        })
        .collect()
}

/// Least squares for `p` with `deg p <= deg` in the scaled variable
/// `x = (u - c) / R`, which keeps the Vandermonde system orthogonal on the
/// circle; the result is expanded back to powers of `u`.
fn fit_on_circle<S: Scalar>(distinct: &[S], points: &[S], ys: &[S], deg: usize, prec: u32) -> Result<Polynomial<S>> {
    let (center, radius) = enclosing_circle(distinct);
    let rinv = S::from_rational(&rug::Rational::from_f64(1.0 / radius).unwrap_or_default(), prec);
    let rows: Vec<Vec<S>> = points
        .iter()
        .map(|u| {
            let x = (u.clone() - &center) * &rinv;
            let mut row = Vec::with_capacity(deg + 1);
            // the constant column must carry full precision: 64-bit constants
            // would make the first pivot of the normal equations inexact
            let mut p = S::from_rational(&rug::Rational::from(1), prec);
            for _ in 0..=deg {
                row.push(p.clone());
                p = p * &x;
            }
            row
        })
        .collect();
    let a = Matrix::from_rows(rows);
    let c = a
        .least_squares(ys)
        .ok_or_else(|| Error::Internal("singular least-squares system".into()))?;
    // p(x) with x = (u - c)/R: rescale then shift
    let mut scale = S::one();
    let scaled: Vec<S> = c
        .into_iter()
        .map(|ci| {
            let out = ci * &scale;
            scale = scale.clone() * &rinv;
            out
        })
        .collect();
    Ok(Polynomial::new(scaled).shift(&(-center)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn rank_one_single_point() {
        let space = ModuleSpace::new(1, vec![q(0)]).unwrap();
        let r = eigen_check(&space, &[q(1)], 0.0, 64).unwrap();
        assert!(r.is_eigenvector());
        let expect = DiffOp::monic(vec![RationalFunction::new(
            Polynomial::constant(q(-1)),
            Polynomial::new(vec![q(0), q(1)]),
        )]);
        assert_eq!(r.operator, expect);
    }

    #[test]
    fn rank_two_highest_vector() {
        let space = ModuleSpace::new(2, vec![q(0)]).unwrap();
        let r = eigen_check(&space, &[q(1), q(0)], 0.0, 64).unwrap();
        assert!(r.is_eigenvector());
        let x = Polynomial::new(vec![q(0), q(1)]);
        assert_eq!(r.h[0], RationalFunction::new(Polynomial::constant(q(-1)), x));
        assert!(r.h[1].is_zero());
    }

    #[test]
    fn empty_product_gives_pure_derivative() {
        let space = ModuleSpace::<Rational>::new(3, vec![]).unwrap();
        let r = eigen_check(&space, &[q(5)], 0.0, 64).unwrap();
        assert!(r.is_eigenvector());
        assert_eq!(r.operator, DiffOp::d_pow(3));
    }

    #[test]
    fn non_eigenvector_is_flagged() {
        let space = ModuleSpace::new(2, vec![q(0), q(1)]).unwrap();
        // v+ ⊗ e21 v+ alone is not an eigenvector
        let r = eigen_check(&space, &[q(0), q(1), q(0), q(0)], 0.0, 64).unwrap();
        assert!(!r.is_eigenvector());
    }

    #[test]
    fn float_singlet_matches_exact() {
        let exact = ModuleSpace::new(2, vec![q(0), q(1)]).unwrap();
        let v = vec![q(0), q(1), q(-1), q(0)];
        let re = eigen_check(&exact, &v, 0.0, 64).unwrap();
        assert!(re.is_eigenvector());
        let fs = exact.to_cfloat(256);
        let fv: Vec<CFloat> = v.iter().map(|x| x.to_cfloat(256)).collect();
        let rf = eigen_check(&fs, &fv, 1e-30, 256).unwrap();
        assert!(rf.is_eigenvector(), "residual {}", rf.residual);
        let pts: Vec<CFloat> = [3, -5, 7].iter().map(|&x| CFloat::from_i64(x).with_prec(256)).collect();
        let diff = re.operator.to_cfloat(256).max_rel_diff_at(&rf.operator, &pts).unwrap();
        assert!(diff < 1e-40, "diff {diff}");
    }
}
