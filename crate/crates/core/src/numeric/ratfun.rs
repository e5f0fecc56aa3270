//! Rational functions in `u` with a monic denominator.

use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Rational;

use super::poly::Polynomial;
use super::scalar::{CFloat, Scalar};

/// `num / den` with `den` monic. In the exact domain the pair is reduced by
/// the polynomial gcd; in the float domain only the monic normalization is
/// applied and comparisons are made by evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction<S> {
    num: Polynomial<S>,
    den: Polynomial<S>,
}

/// Lowest-order term of a Laurent expansion: `coeff * x^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentLead<S> {
    pub order: isize,
    pub coeff: S,
}

impl<S: Scalar> RationalFunction<S> {
    /// Panics on a zero denominator.
    pub fn new(num: Polynomial<S>, den: Polynomial<S>) -> Self {
        let lc = den.leading().expect("zero denominator").clone();
        let inv = lc.inv();
        let mut num = num.scale(&inv);
        let mut den = den.monic();
        if num.is_zero() {
            return Self::zero();
        }
        if S::EXACT && den.degree().unwrap_or(0) > 0 {
            let g = num.gcd(&den);
            if g.degree().unwrap_or(0) > 0 {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: Polynomial<S>) -> Self {
        RationalFunction {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    /// `sum_j 1 / (u - p_j)`, assembled as `y' / y` with `y = prod (u - p_j)`.
    pub fn pole_sum(points: &[S]) -> Self {
        if points.is_empty() {
            return Self::zero();
        }
        let y = Polynomial::from_roots(points);
        Self::new(y.derivative(), y)
    }

    pub fn num(&self) -> &Polynomial<S> {
        &self.num
    }

    pub fn den(&self) -> &Polynomial<S> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.degree() == Some(0)
    }

    /// Value at `x`, or `None` where the denominator vanishes exactly.
    pub fn eval(&self, x: &S) -> Option<S> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    pub fn derivative(&self) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(self.num.derivative());
        }
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Leading Laurent term at `u = b`, with vanishing orders decided
    /// relative to the coefficient scale in the float domain.
    pub fn laurent_at(&self, b: &S, rel_tol: f64) -> Option<LaurentLead<S>> {
        if self.is_zero() {
            return None;
        }
        let ns = self.num.shift(b);
        let ds = self.den.shift(b);
        let mn = ns.low_order(rel_tol)?;
        let md = ds.low_order(rel_tol)?;
        Some(LaurentLead {
            order: mn as isize - md as isize,
            coeff: ns.coeff(mn) / ds.coeff(md),
        })
    }

    /// Leading term as `u -> infinity`: `coeff * u^order`.
    pub fn lead_at_infinity(&self, rel_tol: f64) -> Option<LaurentLead<S>> {
        let n = self.num.trim_negligible(rel_tol);
        let d = self.den.trim_negligible(rel_tol);
        let dn = n.degree()?;
        let dd = d.degree()?;
        Some(LaurentLead {
            order: dn as isize - dd as isize,
            coeff: n.coeff(dn) / d.coeff(dd),
        })
    }

    /// `f(1/x)` as a rational function of `x`.
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let n = dn.max(dd);
        // f(1/x) = x^{n-dn} rev(num) / (x^{n-dd} rev(den))
        let num = self.num.reversed(dn);
        let den = self.den.reversed(dd);
        let num = &num * &Polynomial::monomial(S::one(), n - dn);
        let den = &den * &Polynomial::monomial(S::one(), n - dd);
        Self::new(num, den)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> RationalFunction<T> {
        RationalFunction::new(self.num.map(f), self.den.map(f))
    }

    pub fn to_cfloat(&self, prec: u32) -> RationalFunction<CFloat> {
        self.map(|c| c.to_cfloat(prec))
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let (a, b) = (&self.num, &rhs.num);
        let b_signed = if sign { b.clone() } else { -b };
        if self.den == rhs.den {
            return Self::new(a + &b_signed, self.den.clone());
        }
        if self.is_polynomial() {
            return Self::new(&(a * &rhs.den) + &b_signed, rhs.den.clone());
        }
        if rhs.is_polynomial() {
            return Self::new(a + &(&b_signed * &self.den), self.den.clone());
        }
        if S::EXACT {
            let g = self.den.gcd(&rhs.den);
            let l_over_a = rhs.den.div_rem(&g).0;
            let l_over_b = self.den.div_rem(&g).0;
            let lcm = &self.den * &l_over_a;
            return Self::new(&(a * &l_over_a) + &(&b_signed * &l_over_b), lcm);
        }
        Self::new(
            &(a * &rhs.den) + &(&b_signed * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl RationalFunction<Rational> {
    pub fn convert<T: Scalar>(&self, prec: u32) -> RationalFunction<T> {
        self.map(|c| T::from_rational(c, prec))
    }
}

impl<'a, S: Scalar> Add<&'a RationalFunction<S>> for &'a RationalFunction<S> {
    type Output = RationalFunction<S>;
    fn add(self, rhs: &RationalFunction<S>) -> RationalFunction<S> {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, true)
    }
}

impl<'a, S: Scalar> Sub<&'a RationalFunction<S>> for &'a RationalFunction<S> {
    type Output = RationalFunction<S>;
    fn sub(self, rhs: &RationalFunction<S>) -> RationalFunction<S> {
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, false)
    }
}

impl<'a, S: Scalar> Mul<&'a RationalFunction<S>> for &'a RationalFunction<S> {
    type Output = RationalFunction<S>;
    fn mul(self, rhs: &RationalFunction<S>) -> RationalFunction<S> {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl<'a, S: Scalar> Div<&'a RationalFunction<S>> for &'a RationalFunction<S> {
    type Output = RationalFunction<S>;
    fn div(self, rhs: &RationalFunction<S>) -> RationalFunction<S> {
        assert!(!rhs.is_zero(), "division by the zero rational function");
        RationalFunction::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl<S: Scalar> Neg for &RationalFunction<S> {
    type Output = RationalFunction<S>;
    fn neg(self) -> RationalFunction<S> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}
