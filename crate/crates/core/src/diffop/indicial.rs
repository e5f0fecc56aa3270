//! Indicial polynomials and exponents at finite points and at infinity.

use super::DiffOp;
use crate::error::{Error, Result};
use crate::numeric::roots::poly_roots;
use crate::numeric::{CFloat, Polynomial, RationalFunction, Scalar};

/// Falling factorial `r (r-1) … (r-m+1)` as a polynomial in `r`.
fn falling<S: Scalar>(m: usize) -> Polynomial<S> {
    (0..m).fold(Polynomial::one(), |acc, j| {
        &acc * &Polynomial::linear(&S::from_i64(j as i64))
    })
}

/// Indicial polynomial of a monic operator at `u = b`:
/// `Σ_i c_i [r]_{N-i}` with `c_i` the coefficient of `(u-b)^{-i}` in `h_i`.
///
/// `rel_tol` decides vanishing Laurent coefficients in the float domain.
pub fn indicial_polynomial<S: Scalar>(
    d: &DiffOp<S>,
    b: &S,
    rel_tol: f64,
) -> Result<Polynomial<S>> {
    let d = monic_form(d)?;
    let n = d.order();
    let mut acc = falling::<S>(n);
    for i in 1..=n {
        let Some(lead) = d.h(i).laurent_at(b, rel_tol) else {
            continue;
        };
        let pole = -lead.order;
        if pole > i as isize {
            return Err(Error::IrregularSingularPoint(format!(
                "{b:?}: coefficient {i} has a pole of order {pole}"
            )));
        }
        if pole == i as isize {
            acc = &acc + &falling::<S>(n - i).scale(&lead.coeff);
        }
    }
    Ok(acc)
}

fn monic_form<S: Scalar>(d: &DiffOp<S>) -> Result<DiffOp<S>> {
    if d.is_monic() {
        Ok(d.clone())
    } else {
        d.normalized()
    }
}

/// Exponents of `d` at `u = b`, with multiplicity, sorted by real part.
/// At an ordinary point these are `0, 1, …, N-1`.
pub fn exponents_at<S: Scalar>(
    d: &DiffOp<S>,
    b: &S,
    rel_tol: f64,
    prec: u32,
) -> Result<Vec<CFloat>> {
    let ind = indicial_polynomial(d, b, rel_tol)?;
    poly_roots(&ind, prec)
}

/// `d` rewritten in `x = 1/u`, so that `∂_u = -x² ∂_x`.
fn at_infinity<S: Scalar>(d: &DiffOp<S>) -> DiffOp<S> {
    let n = d.order();
    let step = DiffOp::new(vec![
        RationalFunction::from_poly(Polynomial::monomial(-S::one(), 2)),
        RationalFunction::zero(),
    ]);
    // powers[m] = (-x² ∂_x)^m
    let mut powers = vec![DiffOp::identity()];
    for m in 1..=n {
        let next = step.compose(&powers[m - 1]);
        powers.push(next);
    }
    let mut acc = DiffOp::new(vec![RationalFunction::zero()]);
    for (i, c) in d.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let coeff = DiffOp::multiplication(c.invert_variable());
        acc = acc.add(&coeff.compose(&powers[n - i]));
    }
    acc
}

/// Exponents at `u = ∞`. A solution behaving like `u^k` contributes `-k`.
pub fn exponents_at_infinity<S: Scalar>(
    d: &DiffOp<S>,
    rel_tol: f64,
    prec: u32,
) -> Result<Vec<CFloat>> {
    let t = at_infinity(d).normalized()?;
    exponents_at(&t, &S::zero(), rel_tol, prec)
        .map_err(|_| Error::IrregularSingularPoint("infinity".into()))
}

/// Round exponents to integers when each is within `tol` of one.
pub fn exponents_as_integers(exps: &[CFloat], tol: f64) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(exps.len());
    for e in exps {
        let re = e.re_f64();
        let k = re.round();
        if (re - k).abs() > tol || e.im_f64().abs() > tol || !k.is_finite() {
            return None;
        }
        out.push(k as i64);
    }
    out.sort_unstable();
    Some(out)
}

/// Integer exponents at `b`. In the exact domain integrality is decided
/// exactly: the candidate integers are confirmed by rebuilding the indicial
/// polynomial.
pub fn integer_exponents_at<S: Scalar>(
    d: &DiffOp<S>,
    b: Option<&S>,
    rel_tol: f64,
    exp_tol: f64,
    prec: u32,
) -> Result<Option<Vec<i64>>> {
    let ind = match b {
        Some(b) => indicial_polynomial(d, b, rel_tol)?,
        None => {
            let t = at_infinity(d).normalized()?;
            indicial_polynomial(&t, &S::zero(), rel_tol)
                .map_err(|_| Error::IrregularSingularPoint("infinity".into()))?
        }
    };
    let roots = poly_roots(&ind, prec)?;
    let tol = if S::EXACT { 0.25 } else { exp_tol };
    let Some(ks) = exponents_as_integers(&roots, tol) else {
        return Ok(None);
    };
    if S::EXACT {
        let rebuilt = Polynomial::from_roots(&ks.iter().map(|&k| S::from_i64(k)).collect::<Vec<_>>());
        if rebuilt != ind.monic() {
            return Ok(None);
        }
    }
    Ok(Some(ks))
}
