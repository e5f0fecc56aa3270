//! Polynomial solutions of a scalar operator.

use super::DiffOp;
use crate::numeric::{Matrix, Polynomial, Scalar};

/// Common denominator of the coefficients: the lcm in the exact domain, the
/// product of the distinct denominators otherwise.
fn common_denominator<S: Scalar>(d: &DiffOp<S>) -> Polynomial<S> {
    let mut acc = Polynomial::one();
    let mut seen: Vec<Polynomial<S>> = Vec::new();
    for c in d.coeffs() {
        if c.is_zero() || c.is_polynomial() {
            continue;
        }
        let den = c.den();
        if S::EXACT {
            let g = acc.gcd(den);
            acc = &acc * &den.div_rem(&g).0;
        } else if !seen.contains(den) {
            acc = &acc * den;
            seen.push(den.clone());
        }
    }
    acc
}

/// Basis of the polynomial solutions of `d f = 0` with `deg f <= bound`,
/// in reduced echelon form by descending degree: each basis element is monic
/// and has zero coefficients at the leading degrees of the others.
pub fn polynomial_kernel<S: Scalar>(d: &DiffOp<S>, bound: usize, rel_tol: f64) -> Vec<Polynomial<S>> {
    let n = d.order();
    let l = common_denominator(d);
    let cleared: Vec<Polynomial<S>> = d
        .coeffs()
        .iter()
        .map(|c| {
            if c.is_zero() {
                Polynomial::zero()
            } else {
                // c * l is a polynomial
                let num = c.num() * &l;
                num.div_rem(c.den()).0
            }
        })
        .collect();
    let cols = bound + 1;
    let images: Vec<Polynomial<S>> = (0..cols)
        .map(|k| {
            let mono = Polynomial::monomial(S::one(), k);
            let mut acc = Polynomial::zero();
            let mut deriv = mono;
            // deriv runs over mono^{(m)}, m = 0..=n; coefficient index n - m
            for m in 0..=n {
                if deriv.is_zero() {
                    break;
                }
                acc = &acc + &(&cleared[n - m] * &deriv);
                deriv = deriv.derivative();
            }
            acc
        })
        .collect();
    let rows = images
        .iter()
        .map(|p| p.coeffs().len())
        .max()
        .unwrap_or(0)
        .max(1);
    let mut m = Matrix::zeros(rows, cols);
    for (k, img) in images.iter().enumerate() {
        for (r, c) in img.coeffs().iter().enumerate() {
            m[(r, k)] = c.clone();
        }
    }
    let null = m.nullspace(rel_tol);
    if null.is_empty() {
        return Vec::new();
    }
    // rows are kernel vectors with columns reordered by descending degree
    let reordered: Vec<Vec<S>> = null
        .iter()
        .map(|v| v.iter().rev().cloned().collect())
        .collect();
    let ech = Matrix::from_rows(reordered).rref(rel_tol);
    (0..ech.pivots.len())
        .map(|i| {
            let row = ech.matrix.row(i);
            let mut asc: Vec<S> = row.iter().rev().cloned().collect();
            if !S::EXACT {
                let lead = ech.pivots[i];
                // clear entries that elimination left at roundoff level
                for (j, x) in row.iter().enumerate() {
                    if j != lead && x.is_negligible(rel_tol) {
                        asc[cols - 1 - j] = S::zero();
                    }
                }
            }
            Polynomial::new(asc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::RationalFunction;
    use rug::Rational;

    fn p(v: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(v.iter().map(|&x| Rational::from(x)).collect())
    }

    #[test]
    fn second_derivative() {
        let k = polynomial_kernel(&DiffOp::<Rational>::d_pow(2), 1, 0.0);
        assert_eq!(k, vec![p(&[0, 1]), p(&[1])]);
    }

    #[test]
    fn regular_singular_kernel() {
        let d = DiffOp::monic(vec![
            RationalFunction::new(p(&[-1]), p(&[0, 1])),
            RationalFunction::zero(),
        ]);
        assert_eq!(polynomial_kernel(&d, 2, 0.0), vec![p(&[0, 0, 1]), p(&[1])]);
    }

    #[test]
    fn exponential_has_no_polynomial_kernel() {
        let d = DiffOp::monic(vec![RationalFunction::constant(Rational::from(-1))]);
        assert!(polynomial_kernel(&d, 10, 0.0).is_empty());
    }

    #[test]
    fn float_kernel_matches() {
        let d = DiffOp::monic(vec![
            RationalFunction::new(p(&[-1]), p(&[0, 1])),
            RationalFunction::zero(),
        ])
        .to_cfloat(128);
        let k = polynomial_kernel(&d, 2, 1e-20);
        assert_eq!(k.len(), 2);
        assert_eq!(k[0].degree(), Some(2));
        assert!(k[0].coeff(0).abs_f64() < 1e-30);
    }
}
