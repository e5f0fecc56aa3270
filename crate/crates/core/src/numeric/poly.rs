//! Dense univariate polynomials in `u` and the Wronskian.

use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use super::scalar::{CFloat, Scalar};
use crate::error::{Error, Result};

/// Coefficients in ascending degree. The top coefficient is never an exact
/// zero; the zero polynomial has no coefficients and `degree() == None`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `c * u^k`
    pub fn monomial(c: S, k: usize) -> Self {
        let mut coeffs = vec![S::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The polynomial `u`.
    pub fn x() -> Self {
        Self::monomial(S::one(), 1)
    }

    /// `u - a`
    pub fn linear(a: &S) -> Self {
        Self::new(vec![-a.clone(), S::one()])
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[S]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c).collect())
    }

    /// Divide by the leading coefficient. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let inv = lc.inv();
                let mut out = self.scale(&inv);
                if let Some(last) = out.coeffs.last_mut() {
                    *last = S::one();
                }
                out
            }
            None => self.clone(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == S::one())
    }

    /// Euclidean division. Panics if `d` is the zero polynomial.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lc_inv = d.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![S::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let q = rem[k + dd].clone() * &lc_inv;
            if !q.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - q.clone() * dc;
                }
            }
            rem[k + dd] = S::zero();
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm. Meaningful in
    /// the exact domain; float inputs get no tolerance handling.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p(u + b)`, the Taylor expansion around `b`.
    pub fn shift(&self, b: &S) -> Self {
        // Horner in the ring of polynomials
        let lin = Self::new(vec![b.clone(), S::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    /// Coefficients reversed with respect to `u^n`: `u^n p(1/u)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut c = vec![S::zero(); n + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            assert!(k <= n, "reversal degree below polynomial degree");
            c[n - k] = a.clone();
        }
        Self::new(c)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    /// Order of vanishing at `u = 0` (index of the lowest non-negligible coefficient).
    pub fn low_order(&self, rel_tol: f64) -> Option<usize> {
        let tol = rel_tol * self.max_abs();
        self.coeffs.iter().position(|c| !c.is_negligible(tol))
    }

    /// Drop leading coefficients that are negligible relative to the largest
    /// one. The identity in the exact domain.
    pub fn trim_negligible(&self, rel_tol: f64) -> Self {
        if S::EXACT {
            return self.clone();
        }
        let tol = rel_tol * self.max_abs();
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|x| x.is_negligible(tol)) {
            c.pop();
        }
        Polynomial { coeffs: c }
    }

    /// Yun's square-free decomposition: pairs `(a_i, i)` with
    /// `p = lc * prod a_i^i`, every `a_i` monic, square-free and coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let c = df.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_rem(&a).0;
            let c_next = d.div_rem(&a).0;
            d = &c_next - &b_next.derivative();
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.monic(), i));
            }
            b = b_next;
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().iter().all(|(_, m)| *m == 1)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_cfloat(&self, prec: u32) -> Polynomial<CFloat> {
        self.map(|c| c.to_cfloat(prec))
    }
}

impl Polynomial<Rational> {
    /// Conversion into any scalar domain.
    pub fn convert<T: Scalar>(&self, prec: u32) -> Polynomial<T> {
        self.map(|c| T::from_rational(c, prec))
    }
}

impl<'a, S: Scalar> Add<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn add(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn sub(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a Polynomial<S>> for &'a Polynomial<S> {
    type Output = Polynomial<S>;
    fn mul(self, rhs: &Polynomial<S>) -> Polynomial<S> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![S::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b;
            }
        }
        Polynomial::new(c)
    }
}

impl<S: Scalar> Neg for &Polynomial<S> {
    type Output = Polynomial<S>;
    fn neg(self) -> Polynomial<S> {
        Polynomial::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! owned_poly_ops {
    ($tr:ident, $method:ident) => {
        impl<S: Scalar> $tr for Polynomial<S> {
            type Output = Polynomial<S>;
            fn $method(self, rhs: Polynomial<S>) -> Polynomial<S> {
                (&self).$method(&rhs)
            }
        }
    };
}
owned_poly_ops!(Add, add);
owned_poly_ops!(Sub, sub);
owned_poly_ops!(Mul, mul);

/// Determinant of a square matrix of polynomials by Laplace expansion over
/// column subsets.
pub fn poly_det<S: Scalar>(m: &[Vec<Polynomial<S>>]) -> Polynomial<S> {
    let l = m.len();
    if l == 0 {
        return Polynomial::one();
    }
    assert!(m.iter().all(|row| row.len() == l), "non-square matrix");
    assert!(l <= 16, "determinant size too large for subset expansion");
    let mut dp: Vec<Option<Polynomial<S>>> = vec![None; 1 << l];
    dp[0] = Some(Polynomial::one());
    for mask in 0usize..(1 << l) {
        let Some(cur) = dp[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == l {
            dp[mask] = Some(cur);
            continue;
        }
        for c in 0..l {
            if mask & (1 << c) != 0 || m[row][c].is_zero() {
                continue;
            }
            // sign of placing column c after the columns already used
            let above = (mask >> (c + 1)).count_ones();
            let mut term = &cur * &m[row][c];
            if above % 2 == 1 {
                term = -&term;
            }
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                Some(acc) => &acc + &term,
                None => term,
            });
        }
        dp[mask] = Some(cur);
    }
    dp[(1 << l) - 1].take().unwrap_or_else(Polynomial::zero)
}

/// The Wronskian `det (g_i^{(k)})`, rows indexed by the polynomials and
/// columns by the derivative order.
pub fn wronskian<S: Scalar>(gs: &[Polynomial<S>]) -> Result<Polynomial<S>> {
    if gs.is_empty() {
        return Err(Error::Argument("wronskian of an empty list".into()));
    }
    let l = gs.len();
    let m: Vec<Vec<Polynomial<S>>> = gs
        .iter()
        .map(|g| {
            let mut row = Vec::with_capacity(l);
            let mut cur = g.clone();
            for _ in 0..l {
                let next = cur.derivative();
                row.push(cur);
                cur = next;
            }
            row
        })
        .collect();
    Ok(poly_det(&m))
}

/// Newton interpolation through `(xs[r], ys[r])`; degree below `xs.len()`.
pub fn interpolate<S: Scalar>(xs: &[S], ys: &[S]) -> Polynomial<S> {
    assert_eq!(xs.len(), ys.len(), "interpolation data length");
    let n = xs.len();
    let mut dd: Vec<S> = ys.to_vec();
    let mut newton = Vec::with_capacity(n);
    for j in 0..n {
        newton.push(dd[0].clone());
        for i in 0..n - j - 1 {
            dd[i] = (dd[i + 1].clone() - &dd[i]) / (xs[i + j + 1].clone() - &xs[i]);
        }
    }
    let mut acc = Polynomial::zero();
    for k in (0..n).rev() {
        acc = &(&acc * &Polynomial::linear(&xs[k])) + &Polynomial::constant(newton[k].clone());
    }
    acc
}
