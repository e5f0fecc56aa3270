//! Differential operators in `∂ = d/du` with rational-function coefficients.

mod delta;
mod indicial;
mod kernel;
mod matrix;

pub use delta::{
    delta_membership, expected_exponents_at_infinity, expected_exponents_at_point, Condition,
    DeltaMembershipReport,
};
pub use indicial::{
    exponents_as_integers, exponents_at, exponents_at_infinity, indicial_polynomial,
    integer_exponents_at,
};
pub use kernel::polynomial_kernel;
pub use matrix::{MatrixDiffOp, MatrixRatFn};

use rug::Rational;

use crate::error::{Error, Result};
use crate::numeric::{CFloat, Polynomial, RationalFunction, Scalar};

/// `Σ_i coeffs[i] ∂^{order-i}`. For a monic operator `coeffs[0] = 1` and
/// `coeffs[i] = h_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<S> {
    coeffs: Vec<RationalFunction<S>>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

impl<S: Scalar> DiffOp<S> {
    /// Coefficients from `∂^order` down to `∂^0`. Leading zeros are dropped.
    pub fn new(mut coeffs: Vec<RationalFunction<S>>) -> Self {
        while coeffs.len() > 1 && coeffs[0].is_zero() {
            coeffs.remove(0);
        }
        if coeffs.is_empty() {
            coeffs.push(RationalFunction::zero());
        }
        DiffOp { coeffs }
    }

    /// `∂^N + Σ h_i ∂^{N-i}` from `h_1..h_N`.
    pub fn monic(h: Vec<RationalFunction<S>>) -> Self {
        let mut coeffs = Vec::with_capacity(h.len() + 1);
        coeffs.push(RationalFunction::one());
        coeffs.extend(h);
        DiffOp { coeffs }
    }

    pub fn identity() -> Self {
        Self::multiplication(RationalFunction::one())
    }

    pub fn multiplication(f: RationalFunction<S>) -> Self {
        DiffOp { coeffs: vec![f] }
    }

    /// `∂^n`
    pub fn d_pow(n: usize) -> Self {
        Self::monic(vec![RationalFunction::zero(); n])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[RationalFunction<S>] {
        &self.coeffs
    }

    /// `h_i`, the coefficient of `∂^{order-i}`.
    pub fn h(&self, i: usize) -> &RationalFunction<S> {
        &self.coeffs[i]
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs[0] == RationalFunction::one()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Divide through by the leading coefficient.
    pub fn normalized(&self) -> Result<Self> {
        let lead = &self.coeffs[0];
        if lead.is_zero() {
            return Err(Error::Argument("the zero operator has no monic form".into()));
        }
        let coeffs = self.coeffs.iter().map(|c| c / lead).collect();
        Ok(DiffOp { coeffs })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.order().max(rhs.order());
        let get = |op: &Self, k: usize| -> RationalFunction<S> {
            // coefficient of ∂^k
            if k <= op.order() {
                op.coeffs[op.order() - k].clone()
            } else {
                RationalFunction::zero()
            }
        };
        let coeffs = (0..=n)
            .rev()
            .map(|k| &get(self, k) + &get(rhs, k))
            .collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Operator product `self ∘ rhs`, using `∂^p f = Σ_k C(p,k) f^{(k)} ∂^{p-k}`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let (p_max, q_max) = (self.order(), rhs.order());
        let mut out = vec![RationalFunction::zero(); p_max + q_max + 1];
        // derivatives of rhs coefficients, computed once
        let mut derivs: Vec<Vec<RationalFunction<S>>> = Vec::with_capacity(q_max + 1);
        for b in &rhs.coeffs {
            let mut ds = vec![b.clone()];
            for k in 1..=p_max {
                let next = ds[k - 1].derivative();
                ds.push(next);
            }
            derivs.push(ds);
        }
        for (ia, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = p_max - ia;
            for (ib, ds) in derivs.iter().enumerate() {
                let q = q_max - ib;
                for (k, dk) in ds.iter().enumerate().take(p + 1) {
                    if dk.is_zero() {
                        continue;
                    }
                    let term = (a * dk).scale(&S::from_i64(binomial(p, k)));
                    let deg = p + q - k;
                    let idx = p_max + q_max - deg;
                    out[idx] = &out[idx] + &term;
                }
            }
        }
        Self::new(out)
    }

    /// `(∂ - χ_1) ∘ … ∘ (∂ - χ_N)`.
    pub fn from_factors(chis: &[RationalFunction<S>]) -> Result<Self> {
        if chis.is_empty() {
            return Err(Error::Argument("from_factors needs at least one factor".into()));
        }
        let factor = |chi: &RationalFunction<S>| DiffOp::monic(vec![-chi]);
        let mut acc = factor(&chis[0]);
        for chi in &chis[1..] {
            acc = acc.compose(&factor(chi));
        }
        Ok(acc)
    }

    /// `Σ coeffs[i] f^{(order-i)}`.
    pub fn apply(&self, f: &Polynomial<S>) -> RationalFunction<S> {
        let n = self.order();
        let mut derivs = vec![f.clone()];
        for k in 1..=n {
            let next = derivs[k - 1].derivative();
            derivs.push(next);
        }
        let mut acc = RationalFunction::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let d = &derivs[n - i];
            if d.is_zero() || c.is_zero() {
                continue;
            }
            acc = &acc + &(c * &RationalFunction::from_poly(d.clone()));
        }
        acc
    }

    /// Coefficient values at `u`; `None` at a pole of any coefficient.
    pub fn eval_coeffs(&self, u: &S) -> Option<Vec<S>> {
        self.coeffs.iter().map(|c| c.eval(u)).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T + Copy) -> DiffOp<T> {
        DiffOp {
            coeffs: self.coeffs.iter().map(|c| c.map(f)).collect(),
        }
    }

    pub fn to_cfloat(&self, prec: u32) -> DiffOp<CFloat> {
        self.map(|c| c.to_cfloat(prec))
    }

    /// Largest relative disagreement of the coefficients of two operators of
    /// equal order at the given points, scaled by the coefficient magnitude.
    pub fn max_rel_diff_at(&self, other: &Self, points: &[S]) -> Option<f64> {
        if self.order() != other.order() {
            return None;
        }
        let mut worst = 0f64;
        for u in points {
            let a = self.eval_coeffs(u)?;
            let b = other.eval_coeffs(u)?;
            let scale = a
                .iter()
                .chain(b.iter())
                .map(|x| x.abs_f64())
                .fold(0f64, f64::max)
                .max(f64::MIN_POSITIVE);
            for (x, y) in a.iter().zip(&b) {
                worst = worst.max((x.clone() - y).abs_f64() / scale);
            }
        }
        Some(worst)
    }
}

impl DiffOp<Rational> {
    pub fn convert<T: Scalar>(&self, prec: u32) -> DiffOp<T> {
        self.map(|c| T::from_rational(c, prec))
    }
}
