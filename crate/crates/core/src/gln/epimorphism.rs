//! Equivariant projections `F_s : V^{⊗n_s} → L_{λ^{(s)}}` and their tensor
//! product `F`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;

use super::partition::Partition;
use super::space::{singular_basis, ModuleSpace};
use crate::error::{Error, Result};
use crate::numeric::{Matrix, Scalar};

/// `F = F_1 ⊗ … ⊗ F_k` on `V^{⊗n}` with tensor slots grouped consecutively
/// by `n_s`. Each `F_s` is the orthogonal projection (standard coordinate
/// form) onto the cyclic submodule generated by a random singular vector of
/// weight `λ^{(s)}`, a realization of `L_{λ^{(s)}}` inside `V^{⊗n_s}`.
#[derive(Clone, Debug)]
pub struct Epimorphism {
    rank: usize,
    groups: Vec<usize>,
    projections: Vec<Matrix<Rational>>,
    images: Vec<usize>,
    seed: u64,
}

/// Echelon accumulator for exact spans.
struct Span {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Span {
    fn new() -> Self {
        Span {
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    /// Insert `v`; returns true when it enlarged the span.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, r) in w.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= f.clone() * r;
                    }
                }
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].clone().recip();
        for x in w.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&w) {
                    if !r.is_zero() {
                        *x -= f.clone() * r;
                    }
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// Cyclic span `U(gl_N) u` of a singular vector, closed under the simple
/// lowering operators. Returns a basis.
fn cyclic_span(space: &ModuleSpace<Rational>, u: &[Rational], bound: usize) -> Result<Vec<Vec<Rational>>> {
    let n = space.rank();
    let mut span = Span::new();
    let mut basis = Vec::new();
    let mut queue = vec![u.to_vec()];
    while let Some(v) = queue.pop() {
        if !span.insert(&v) {
            continue;
        }
        basis.push(v.clone());
        if basis.len() > bound {
            return Err(Error::Internal(format!(
                "cyclic submodule exceeds dimension bound {bound}"
            )));
        }
        for i in 1..n {
            let w = space.act_factor_sum(i + 1, i, &v);
            if w.iter().any(|x| !x.is_zero()) {
                queue.push(w);
            }
        }
    }
    Ok(basis)
}

/// `W (Wᵀ W)^{-1} Wᵀ` for a basis given as columns.
fn orthogonal_projection(basis: &[Vec<Rational>]) -> Result<Matrix<Rational>> {
    let w = Matrix::from_columns(basis);
    let wt = w.transpose();
    let gram = wt.mul(&w);
    let inv = gram
        .inverse()
        .ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
    Ok(w.mul(&inv).mul(&wt))
}

fn derive_seed(seed: u64, s: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((s as u64 + 1).wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

impl Epimorphism {
    pub fn build(lambdas: &[Partition], seed: u64) -> Result<Self> {
        let rank = lambdas
            .first()
            .map(|p| p.rank())
            .ok_or_else(|| Error::Argument("no tensor factors".into()))?;
        let mut projections = Vec::with_capacity(lambdas.len());
        let mut images = Vec::with_capacity(lambdas.len());
        let mut groups = Vec::with_capacity(lambdas.len());
        for (s, lam) in lambdas.iter().enumerate() {
            if lam.rank() != rank {
                return Err(Error::Argument("partitions of different rank".into()));
            }
            let ns = lam.size();
            groups.push(ns);
            let space = ModuleSpace::new(rank, vec![Rational::new(); ns])?;
            let sing = singular_basis(&space, lam, 0.0);
            if sing.is_empty() {
                return Err(Error::Internal(format!("no singular vectors of weight {lam:?}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, s));
            let mut u = vec![Rational::new(); space.dim()];
            loop {
                for v in &sing {
                    let c = Rational::from(rng.gen_range(-10i64..=10));
                    for (x, y) in u.iter_mut().zip(v) {
                        *x += c.clone() * y;
                    }
                }
                if u.iter().any(|x| !x.is_zero()) {
                    break;
                }
            }
            let bound = lam
                .weyl_dimension()
                .to_usize()
                .ok_or_else(|| Error::CapExceeded("module dimension".into()))?;
            let basis = cyclic_span(&space, &u, bound)?;
            if basis.len() != bound {
                return Err(Error::Internal(format!(
                    "cyclic submodule has dimension {} instead of {bound}",
                    basis.len()
                )));
            }
            images.push(basis.len());
            projections.push(orthogonal_projection(&basis)?);
        }
        Ok(Epimorphism {
            rank,
            groups,
            projections,
            images,
            seed,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn projection(&self, s: usize) -> &Matrix<Rational> {
        &self.projections[s]
    }

    /// Rank of `F_s`, equal to `dim L_{λ^{(s)}}`.
    pub fn image_dim(&self, s: usize) -> usize {
        self.images[s]
    }

    /// `F_s` commutes with every `e_{ij}` on `V^{⊗n_s}` (exact check).
    pub fn is_equivariant(&self) -> bool {
        self.groups.iter().zip(&self.projections).all(|(&ns, p)| {
            let space = match ModuleSpace::new(self.rank, vec![Rational::new(); ns]) {
                Ok(s) => s,
                Err(_) => return false,
            };
            (1..=self.rank).all(|i| {
                (1..=self.rank).all(|j| {
                    let e = space.eij_matrix(i, j, 0);
                    p.commutator(&e).is_zero()
                })
            })
        })
    }

    /// `(F_1 ⊗ … ⊗ F_k) v` for a full-length vector on `V^{⊗n}`.
    pub fn apply<S: Scalar>(&self, v: &[S], prec: u32) -> Vec<S> {
        let n: usize = self.groups.iter().sum();
        let dim = self.rank.pow(n as u32);
        assert_eq!(v.len(), dim, "vector length");
        let mut cur = v.to_vec();
        let mut offset = 0;
        for (s, &ns) in self.groups.iter().enumerate() {
            let block = self.rank.pow(ns as u32);
            let suffix = self.rank.pow((n - offset - ns) as u32);
            let prefix = dim / (block * suffix);
            let p: Matrix<S> = self.projections[s].convert(prec);
            let mut out = vec![S::zero(); dim];
            for a in 0..prefix {
                for c in 0..suffix {
                    for m in 0..block {
                        let x = &cur[(a * block + m) * suffix + c];
                        if x.is_zero() {
                            continue;
                        }
                        for m2 in 0..block {
                            let pm = &p[(m2, m)];
                            if pm.is_zero() {
                                continue;
                            }
                            let idx = (a * block + m2) * suffix + c;
                            out[idx] = out[idx].clone() + pm.clone() * x;
                        }
                    }
                }
            }
            cur = out;
            offset += ns;
        }
        cur
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(v: &[usize], n: usize) -> Partition {
        Partition::new(v, n).unwrap()
    }

    #[test]
    fn vector_factor_is_identity() {
        let f = Epimorphism::build(&[part(&[1], 3)], 7).unwrap();
        assert_eq!(f.projection(0), &Matrix::identity(3));
    }

    #[test]
    fn symmetric_and_antisymmetric_squares() {
        let f = Epimorphism::build(&[part(&[2], 2)], 1).unwrap();
        assert_eq!(f.image_dim(0), 3);
        assert!(f.is_equivariant());
        // antisymmetric vector e1⊗e2 - e2⊗e1 is killed
        let q = |x: i64| Rational::from(x);
        let v = vec![q(0), q(1), q(-1), q(0)];
        assert!(f.apply(&v, 64).iter().all(|x| x.is_zero()));

        let g = Epimorphism::build(&[part(&[1, 1], 2)], 1).unwrap();
        assert_eq!(g.image_dim(0), 1);
        assert_eq!(g.apply(&v, 64), v);
    }

    #[test]
    fn larger_factor_is_equivariant() {
        let f = Epimorphism::build(&[part(&[2, 1], 3), part(&[1], 3)], 3).unwrap();
        assert_eq!(f.image_dim(0), 8);
        assert!(f.is_equivariant());
    }
}
