//! Differential operators with matrix-valued rational coefficients.

use crate::error::{Error, Result};
use crate::numeric::{Matrix, Polynomial, RationalFunction, Scalar};

/// `P(u) / q(u)` with `P` a matrix polynomial (ascending powers) and `q` a
/// scalar polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRatFn<S> {
    dim: usize,
    num: Vec<Matrix<S>>,
    den: Polynomial<S>,
}

impl<S: Scalar> MatrixRatFn<S> {
    pub fn new(dim: usize, num: Vec<Matrix<S>>, den: Polynomial<S>) -> Result<Self> {
        if num.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "numerator matrices must be {dim}x{dim}"
            )));
        }
        if den.is_zero() {
            return Err(Error::Argument("zero denominator".into()));
        }
        Ok(MatrixRatFn { dim, num, den })
    }

    pub fn identity(dim: usize) -> Self {
        MatrixRatFn {
            dim,
            num: vec![Matrix::identity(dim)],
            den: Polynomial::one(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn den(&self) -> &Polynomial<S> {
        &self.den
    }

    pub fn num(&self) -> &[Matrix<S>] {
        &self.num
    }

    /// Interpolate a matrix function known to be `P(u)/den(u)` with
    /// `deg P <= degree` from its values at `degree + 1` distinct points.
    pub fn interpolate(den: Polynomial<S>, degree: usize, points: &[S], values: &[Matrix<S>]) -> Result<Self> {
        if points.len() != degree + 1 || values.len() != degree + 1 {
            return Err(Error::Argument(format!(
                "need {} interpolation points",
                degree + 1
            )));
        }
        let dim = values[0].rows();
        let scaled: Vec<Matrix<S>> = points
            .iter()
            .zip(values)
            .map(|(x, v)| v.scale(&den.eval(x)))
            .collect();
        // Newton divided differences on whole matrices
        let mut dd = scaled;
        let mut newton = Vec::with_capacity(degree + 1);
        for j in 0..=degree {
            newton.push(dd[0].clone());
            for i in 0..degree - j {
                let inv = (points[i + j + 1].clone() - &points[i]).inv();
                dd[i] = dd[i + 1].sub(&dd[i]).scale(&inv);
            }
        }
        let mut acc: Vec<Matrix<S>> = Vec::new();
        for k in (0..=degree).rev() {
            // acc = acc * (u - x_k) + newton[k]
            let mut next = vec![Matrix::zeros(dim, dim); acc.len() + 1];
            for (p, m) in acc.iter().enumerate() {
                next[p + 1] = next[p + 1].add(m);
                next[p] = next[p].sub(&m.scale(&points[k]));
            }
            next[0] = next[0].add(&newton[k]);
            acc = next;
        }
        while acc.len() > 1 && acc.last().is_some_and(|m| m.is_zero()) {
            acc.pop();
        }
        MatrixRatFn::new(dim, acc, den)
    }

    pub fn eval(&self, u: &S) -> Option<Matrix<S>> {
        let d = self.den.eval(u);
        if d.is_zero() {
            return None;
        }
        let mut acc = Matrix::zeros(self.dim, self.dim);
        for m in self.num.iter().rev() {
            acc = acc.scale(u).add(m);
        }
        Some(acc.scale(&d.inv()))
    }

    pub fn entry(&self, i: usize, j: usize) -> RationalFunction<S> {
        let num = Polynomial::new(self.num.iter().map(|m| m[(i, j)].clone()).collect());
        if num.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(num, self.den.clone())
    }
}

/// `Σ_i coeffs[i] ∂^{N-i}` acting on vector-valued functions.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixDiffOp<S> {
    dim: usize,
    coeffs: Vec<MatrixRatFn<S>>,
}

impl<S: Scalar> MatrixDiffOp<S> {
    pub fn new(coeffs: Vec<MatrixRatFn<S>>) -> Result<Self> {
        let dim = coeffs
            .first()
            .ok_or_else(|| Error::Argument("operator without coefficients".into()))?
            .dim();
        if coeffs.iter().any(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch("coefficient sizes differ".into()));
        }
        Ok(MatrixDiffOp { dim, coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `∂^{N-i}`.
    pub fn coeff(&self, i: usize) -> &MatrixRatFn<S> {
        &self.coeffs[i]
    }

    pub fn eval_coeff(&self, i: usize, u: &S) -> Option<Matrix<S>> {
        self.coeffs[i].eval(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn qm(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn interpolation_roundtrip() {
        // F(u) = (A + B u) / (u (u - 1))
        let a = qm(&[&[1, 2], &[0, -1]]);
        let b = qm(&[&[0, 3], &[5, 1]]);
        let den = Polynomial::new(vec![Rational::from(0), Rational::from(-1), Rational::from(1)]);
        let exact = MatrixRatFn::new(2, vec![a, b], den.clone()).unwrap();
        let pts: Vec<Rational> = [2, 3].iter().map(|&x| Rational::from(x)).collect();
        let vals: Vec<Matrix<Rational>> = pts.iter().map(|x| exact.eval(x).unwrap()).collect();
        let got = MatrixRatFn::interpolate(den, 1, &pts, &vals).unwrap();
        assert_eq!(got, exact);
        assert_eq!(
            got.entry(1, 0),
            RationalFunction::new(
                Polynomial::new(vec![Rational::new(), Rational::from(5)]),
                Polynomial::new(vec![Rational::from(0), Rational::from(-1), Rational::from(1)])
            )
        );
    }
}
