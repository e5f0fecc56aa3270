//! Bethe ansatz equations and the factorized operator `D_X`.

use super::RootCoordinates;
use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::numeric::{RationalFunction, Scalar};

fn recip<S: Scalar>(a: &S, b: &S) -> Result<S> {
    let d = a.clone() - b;
    if d.is_zero() {
        return Err(Error::NonGeneric("coincident root coordinates".into()));
    }
    Ok(d.inv())
}

/// Largest absolute value of
/// `Σ_{j'} 1/(t^a_j - t^{a-1}_{j'}) - Σ_{j'≠j} 2/(t^a_j - t^a_{j'}) + Σ_{j'} 1/(t^a_j - t^{a+1}_{j'})`
/// over `a = 1..N-1` and `j = 1..l_a`; zero for an empty system.
pub fn bae_residual<S: Scalar>(t: &RootCoordinates<S>) -> Result<f64> {
    let n = t.rank();
    let mut worst = 0f64;
    for a in 1..n {
        for (j, x) in t.level(a).iter().enumerate() {
            let mut acc = S::zero();
            for y in t.level(a - 1) {
                acc = acc + recip(x, y)?;
            }
            for (jj, y) in t.level(a).iter().enumerate() {
                if jj != j {
                    acc = acc - recip(x, y)? * S::from_i64(2);
                }
            }
            for y in t.level(a + 1) {
                acc = acc + recip(x, y)?;
            }
            worst = worst.max(acc.abs_f64());
        }
    }
    Ok(worst)
}

/// `D = (∂ - χ^1) ⋯ (∂ - χ^N)` with
/// `χ^a = Σ_j 1/(u - t^{(a-1)}_j) - Σ_j 1/(u - t^{(a)}_j)` and `t^{(N)}` empty.
pub fn chi_operator<S: Scalar>(t: &RootCoordinates<S>) -> Result<DiffOp<S>> {
    let n = t.rank();
    let chis: Vec<RationalFunction<S>> = (1..=n)
        .map(|a| &RationalFunction::pole_sum(t.level(a - 1)) - &RationalFunction::pole_sum(t.level(a)))
        .collect();
    DiffOp::from_factors(&chis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Polynomial;
    use rug::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn residual_examples() {
        let t = RootCoordinates::new(vec![vec![q(0), q(2)], vec![q(1)]]);
        assert_eq!(bae_residual(&t).unwrap(), 0.0);
        let t = RootCoordinates::new(vec![vec![q(0), q(3)], vec![q(1)]]);
        assert!(bae_residual(&t).unwrap() > 0.1);
        let t = RootCoordinates::new(vec![vec![q(5)], vec![], vec![]]);
        assert_eq!(bae_residual(&t).unwrap(), 0.0);
        let t = RootCoordinates::new(vec![vec![q(1)], vec![q(1)]]);
        assert!(bae_residual(&t).is_err());
    }

    #[test]
    fn chi_examples() {
        let empty: RootCoordinates<Rational> = RootCoordinates::new(vec![vec![], vec![]]);
        assert_eq!(chi_operator(&empty).unwrap(), DiffOp::d_pow(2));
        let t = RootCoordinates::new(vec![vec![q(0)], vec![]]);
        let d = chi_operator(&t).unwrap();
        let u = Polynomial::new(vec![q(0), q(1)]);
        let expect = DiffOp::monic(vec![
            RationalFunction::new(Polynomial::constant(q(-1)), u),
            RationalFunction::zero(),
        ]);
        assert_eq!(d, expect);
    }
}
