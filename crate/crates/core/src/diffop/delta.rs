//! Membership in the class of Fuchsian operators with prescribed singular
//! points, exponents and a purely polynomial kernel.

use serde::Serialize;

use super::indicial::integer_exponents_at;
use super::kernel::polynomial_kernel;
use super::DiffOp;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::gln::Partition;
use crate::numeric::roots::poly_roots;
use crate::numeric::{Polynomial, Scalar};

/// Outcome of one membership condition with its witness data.
#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub name: String,
    pub pass: bool,
    pub detail: serde_json::Value,
}

#[derive(Clone, Debug)]
pub struct DeltaMembershipReport<S> {
    /// Conditions a) to d) in order; empty when the weights already mismatch.
    pub conditions: Vec<Condition>,
    /// Set when the check stopped before the conditions were evaluated.
    pub reason: Option<String>,
    /// Polynomial kernel found for condition d).
    pub kernel: Vec<Polynomial<S>>,
    pub tolerance: f64,
}

impl<S> DeltaMembershipReport<S> {
    pub fn pass(&self) -> bool {
        self.reason.is_none() && self.conditions.len() == 4 && self.conditions.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pass": self.pass(),
            "reason": self.reason,
            "tolerance": self.tolerance,
            "conditions": self.conditions,
        })
    }
}

/// Expected exponents at a finite singular point `b_s`:
/// `λ_N, λ_{N-1} + 1, …, λ_1 + N - 1`.
pub fn expected_exponents_at_point(p: &Partition) -> Vec<i64> {
    let n = p.rank();
    let mut v: Vec<i64> = (0..n).map(|j| (p.part(n - 1 - j) + j) as i64).collect();
    v.sort_unstable();
    v
}

/// Expected exponents at infinity: `-d_i` for the degrees `d_i = λ_i + N - i`.
pub fn expected_exponents_at_infinity(p: &Partition) -> Vec<i64> {
    let mut v: Vec<i64> = p.degrees().iter().map(|&d| -(d as i64)).collect();
    v.sort_unstable();
    v
}

fn fmt_scalar<S: Scalar>(x: &S) -> String {
    format!("{x:?}")
}

/// Divide out every factor `u - b_s` that `den` contains.
fn strip_points<S: Scalar>(den: &Polynomial<S>, b: &[S], tol: f64) -> Polynomial<S> {
    let mut den = den.clone();
    for bs in b {
        let lin = Polynomial::linear(bs);
        while den.degree().unwrap_or(0) > 0 {
            let (q, r) = den.div_rem(&lin);
            let scale = den.max_abs();
            if r.coeffs().iter().all(|c| c.is_negligible(tol * scale)) {
                den = q;
            } else {
                break;
            }
        }
    }
    den
}

/// Condition a): all poles of the coefficients lie in `b`.
fn check_singular_points<S: Scalar>(d: &DiffOp<S>, b: &[S], tol: &Tolerances, prec: u32) -> Condition {
    let mut extra = Vec::new();
    for (i, c) in d.coeffs().iter().enumerate().skip(1) {
        if c.is_zero() || c.is_polynomial() {
            continue;
        }
        let rest = strip_points(c.den(), b, tol.zero);
        if rest.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a leftover factor is harmless when it divides the numerator
        let (_, r) = c.num().div_rem(&rest);
        let scale = c.num().max_abs().max(f64::MIN_POSITIVE);
        if r.coeffs().iter().all(|x| x.is_negligible(tol.zero * scale)) {
            continue;
        }
        let roots = poly_roots(&rest, prec).unwrap_or_default();
        extra.push(serde_json::json!({
            "coefficient": i,
            "poles": roots.iter().map(|r| format!("{r:?}")).collect::<Vec<_>>(),
        }));
    }
    Condition {
        name: "a_singular_points".into(),
        pass: extra.is_empty(),
        detail: serde_json::json!({ "unexpected": extra }),
    }
}

/// Check the four membership conditions for `d` against `(Λ, λ, b)`.
pub fn delta_membership<S: Scalar>(
    d: &DiffOp<S>,
    lambdas: &[Partition],
    lambda: &Partition,
    b: &[S],
    tol: &Tolerances,
    prec: u32,
) -> Result<DeltaMembershipReport<S>> {
    if lambdas.len() != b.len() {
        return Err(Error::Argument(format!(
            "{} partitions for {} points",
            lambdas.len(),
            b.len()
        )));
    }
    let n = lambda.rank();
    if lambdas.iter().any(|p| p.rank() != n) {
        return Err(Error::Argument("partitions of different rank".into()));
    }
    let mut report = DeltaMembershipReport {
        conditions: Vec::new(),
        reason: None,
        kernel: Vec::new(),
        tolerance: tol.zero,
    };
    let total: usize = lambdas.iter().map(|p| p.size()).sum();
    if total != lambda.size() {
        report.reason = Some("weight mismatch".into());
        return Ok(report);
    }
    if d.order() != n {
        report.reason = Some(format!("operator order {} differs from rank {n}", d.order()));
        return Ok(report);
    }
    let d = if d.is_monic() { d.clone() } else { d.normalized()? };

    report.conditions.push(check_singular_points(&d, b, tol, prec));

    // b) exponents at each b_s
    let mut pass_b = true;
    let mut detail_b = Vec::new();
    for (bs, ps) in b.iter().zip(lambdas) {
        let expected = expected_exponents_at_point(ps);
        let found = integer_exponents_at(&d, Some(bs), tol.zero, tol.exponent, prec);
        let (ok, shown) = match &found {
            Ok(Some(ks)) => (*ks == expected, serde_json::json!(ks)),
            Ok(None) => (false, serde_json::json!("non-integer")),
            Err(e) => (false, serde_json::json!(e.to_string())),
        };
        pass_b &= ok;
        detail_b.push(serde_json::json!({
            "point": fmt_scalar(bs),
            "expected": expected,
            "found": shown,
        }));
    }
    report.conditions.push(Condition {
        name: "b_exponents_at_points".into(),
        pass: pass_b,
        detail: serde_json::json!(detail_b),
    });

    // c) exponents at infinity
    let expected = expected_exponents_at_infinity(lambda);
    let at_inf = integer_exponents_at(&d, None, tol.zero, tol.exponent, prec);
    let (pass_c, shown) = match &at_inf {
        Ok(Some(ks)) => (*ks == expected, serde_json::json!(ks)),
        Ok(None) => (false, serde_json::json!("non-integer")),
        Err(e) => (false, serde_json::json!(e.to_string())),
    };
    report.conditions.push(Condition {
        name: "c_exponents_at_infinity".into(),
        pass: pass_c,
        detail: serde_json::json!({ "expected": expected, "found": shown }),
    });

    // d) polynomial kernel of full dimension, degree bound read off at infinity
    let bound = match &at_inf {
        Ok(Some(ks)) => ks.iter().map(|k| -k).max().filter(|m| *m >= 0),
        _ => None,
    };
    let (pass_d, detail_d) = match bound {
        None => (
            false,
            serde_json::json!({ "reason": "exponents at infinity are not admissible degrees" }),
        ),
        Some(m) => {
            let kernel = polynomial_kernel(&d, m as usize, tol.zero);
            let degs: Vec<Option<usize>> = kernel.iter().map(|p| p.degree()).collect();
            let ok = kernel.len() == n;
            report.kernel = kernel;
            (
                ok,
                serde_json::json!({ "degree_bound": m, "dimension": degs.len(), "degrees": degs }),
            )
        }
    };
    report.conditions.push(Condition {
        name: "d_polynomial_kernel".into(),
        pass: pass_d,
        detail: detail_d,
    });
    Ok(report)
}
