//! The Bethe algebra: the universal operator, eigenvector tests, spectra and
//! commutativity checks.

pub mod eigen;
pub mod spectrum;
pub mod universal;

pub use eigen::{eigen_check, EigenReport};
pub use spectrum::{normalize_phase, spectrum, Spectrum};
pub use universal::{apply_coefficients, coefficient_matrices, UniversalOperator};

use crate::error::Result;
use crate::gln::ModuleSpace;
use crate::numeric::{Matrix, Scalar};

fn relative_commutator<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> f64 {
    let c = a.commutator(b);
    if c.is_zero() {
        return 0.0;
    }
    let scale = (a.max_abs() * b.max_abs()).max(f64::MIN_POSITIVE);
    (c.max_abs() / scale).max(f64::MIN_POSITIVE)
}

/// Largest relative commutator `‖[B_i(u), B_j(u')]‖ / (‖B_i(u)‖ ‖B_j(u')‖)`
/// over the sample points, together with `[B_i(u), e_{ab}]` on the full
/// space. With a subspace basis only the restricted `B` are compared. The
/// exact domain returns exactly `0.0` when everything commutes.
pub fn commutativity_check<S: Scalar>(
    space: &ModuleSpace<S>,
    subspace: Option<&[Vec<S>]>,
    samples: &[S],
    max_rank: usize,
) -> Result<f64> {
    let n = space.rank();
    let mats: Vec<Matrix<S>> = match subspace {
        Some(basis) => {
            let op = UniversalOperator::new(space.clone(), basis.to_vec(), max_rank, 1e-6)?;
            let per_point = crate::par::try_map(samples, |u| op.matrices_at(u))?;
            per_point.into_iter().flatten().collect()
        }
        None => {
            let per_point = crate::par::try_map(samples, |u| coefficient_matrices(space, u))?;
            per_point.into_iter().flatten().collect()
        }
    };
    let mut worst = 0f64;
    for (x, a) in mats.iter().enumerate() {
        for b in &mats[x + 1..] {
            worst = worst.max(relative_commutator(a, b));
        }
    }
    if subspace.is_none() {
        for i in 1..=n {
            for j in 1..=n {
                let e = space.eij_matrix(i, j, 0);
                for a in &mats {
                    worst = worst.max(relative_commutator(a, &e));
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::CFloat;
    use rug::Rational;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    #[test]
    fn rank_one_commutes() {
        let space = ModuleSpace::new(1, vec![q(0), q(3)]).unwrap();
        assert_eq!(commutativity_check(&space, None, &[q(1), q(2)], 4).unwrap(), 0.0);
    }

    #[test]
    fn rank_two_commutes_exactly() {
        let space = ModuleSpace::new(2, vec![q(0), q(1)]).unwrap();
        let samples = [Rational::from((5, 2)), q(-3), q(7)];
        assert_eq!(commutativity_check(&space, None, &samples, 4).unwrap(), 0.0);
    }

    #[test]
    fn rank_three_commutes_in_floats() {
        let space = ModuleSpace::new(3, vec![q(0), q(1), q(3)]).unwrap().to_cfloat(128);
        let samples = [CFloat::new(128, 2.5, 0.5), CFloat::new(128, -1.5, 2.0)];
        let r = commutativity_check(&space, None, &samples, 4).unwrap();
        assert!(r < 1e-10, "residual {r}");
    }
}
