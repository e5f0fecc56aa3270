//! The tensor power `V^{⊗n}` of the vector representation with evaluation
//! points, in the basis `e_J v = e_{j_1,1} v_+ ⊗ … ⊗ e_{j_n,1} v_+`.

use super::partition::Partition;
use crate::error::{Error, Result};
use crate::numeric::{CFloat, Matrix, Scalar};

/// Basis index tuples use 1-based entries `1 <= j_s <= N`. Tuples are
/// numbered lexicographically with `j_1` most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleSpace<S> {
    rank: usize,
    z: Vec<S>,
}

impl<S: Scalar> ModuleSpace<S> {
    pub fn new(rank: usize, z: Vec<S>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Argument("rank must be positive".into()));
        }
        let dim = (rank as u128).checked_pow(z.len() as u32);
        if dim.is_none_or(|d| d > 1 << 24) {
            return Err(Error::CapExceeded(format!(
                "V^(x{}) for N={rank} is too large",
                z.len()
            )));
        }
        Ok(ModuleSpace { rank, z })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Tensor degree `n`.
    pub fn degree(&self) -> usize {
        self.z.len()
    }

    pub fn points(&self) -> &[S] {
        &self.z
    }

    pub fn dim(&self) -> usize {
        self.rank.pow(self.z.len() as u32)
    }

    pub fn index(&self, j: &[usize]) -> usize {
        j.iter().fold(0, |acc, &js| acc * self.rank + (js - 1))
    }

    pub fn tuple(&self, mut idx: usize) -> Vec<usize> {
        let n = self.degree();
        let mut j = vec![0; n];
        for s in (0..n).rev() {
            j[s] = idx % self.rank + 1;
            idx /= self.rank;
        }
        j
    }

    /// `(m_1, …, m_N)` with `m_i = #{s : j_s = i}`.
    pub fn weight(&self, idx: usize) -> Vec<usize> {
        let mut m = vec![0; self.rank];
        for js in self.tuple(idx) {
            m[js - 1] += 1;
        }
        m
    }

    /// Basis indices of weight `mu`, ascending.
    pub fn weight_indices(&self, mu: &[usize]) -> Vec<usize> {
        (0..self.dim()).filter(|&k| self.weight(k) == mu).collect()
    }

    /// `e_{ij} ⊗ t^m` acting as `Σ_s z_s^m e_{ij}^{(s)}`.
    pub fn act_eij(&self, i: usize, j: usize, m: u32, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim(), "vector length");
        let n = self.degree();
        let mut out = vec![S::zero(); v.len()];
        for s in 0..n {
            let w = self.z[s].pow_u(m);
            if w.is_zero() {
                continue;
            }
            self.accumulate_factor(i, j, s, &w, v, &mut out);
        }
        out
    }

    /// `e_{ij}^{(s)}` on the single tensor slot `s` (zero-based).
    pub fn act_factor(&self, i: usize, j: usize, s: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        self.accumulate_factor(i, j, s, &S::one(), v, &mut out);
        out
    }

    fn accumulate_factor(&self, i: usize, j: usize, s: usize, w: &S, v: &[S], out: &mut [S]) {
        let stride = self.rank.pow((self.degree() - 1 - s) as u32);
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let js = (k / stride) % self.rank + 1;
            if js != j {
                continue;
            }
            let target = k - (j - 1) * stride + (i - 1) * stride;
            out[target] = out[target].clone() + x.clone() * w;
        }
    }

    /// Matrix of `e_{ij} ⊗ t^m` on the full basis.
    pub fn eij_matrix(&self, i: usize, j: usize, m: u32) -> Matrix<S> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for k in 0..d {
            let mut e = vec![S::zero(); d];
            e[k] = S::one();
            cols.push(self.act_eij(i, j, m, &e));
        }
        Matrix::from_columns(&cols)
    }

    /// The all-`v_+` vector `e_{(1,…,1)} v`.
    pub fn highest_vector(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim()];
        v[0] = S::one();
        v
    }
}

impl<S: Scalar> ModuleSpace<S> {
    pub fn to_cfloat(&self, prec: u32) -> ModuleSpace<CFloat> {
        ModuleSpace {
            rank: self.rank,
            z: self.z.iter().map(|x| x.to_cfloat(prec)).collect(),
        }
    }
}

/// Weight `(λ_1, …, λ_N)` of `λ` as a count vector.
pub fn weight_of(p: &Partition) -> Vec<usize> {
    p.parts().to_vec()
}

/// All `J` with `#{s : j_s > i} = l_i` for `i = 1..N-1`, lexicographic.
pub fn admissible_indices(n: usize, rank: usize, l: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if rank == 0 {
        return out;
    }
    let mut j = vec![1usize; n];
    loop {
        let ok = (1..rank).all(|i| {
            let want = l.get(i - 1).copied().unwrap_or(0);
            j.iter().filter(|&&js| js > i).count() == want
        });
        if ok {
            out.push(j.clone());
        }
        // advance lexicographically
        let mut pos = n;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if j[pos] < rank {
                j[pos] += 1;
                for x in j.iter_mut().skip(pos + 1) {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// Basis of the singular vectors of weight `λ` in `V^{⊗n}` (full-length
/// vectors), from the nullspace of the simple raising operators on the
/// weight space. Empty when `|λ| != n`.
pub fn singular_basis<S: Scalar>(space: &ModuleSpace<S>, lambda: &Partition, tol: f64) -> Vec<Vec<S>> {
    if lambda.size() != space.degree() || lambda.rank() != space.rank() {
        return Vec::new();
    }
    let wt = weight_of(lambda);
    let cols = space.weight_indices(&wt);
    if cols.is_empty() {
        return Vec::new();
    }
    let n = space.rank();
    // stack e_{i,i+1} restricted to the weight space; rows indexed by full basis
    let d = space.dim();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for i in 1..n {
        let mut block = vec![vec![S::zero(); cols.len()]; d];
        for (c, &k) in cols.iter().enumerate() {
            let mut e = vec![S::zero(); d];
            e[k] = S::one();
            let img = space.act_factor_sum(i, i + 1, &e);
            for (r, x) in img.into_iter().enumerate() {
                if !x.is_zero() {
                    block[r][c] = x;
                }
            }
        }
        rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())));
    }
    let null = if rows.is_empty() {
        (0..cols.len())
            .map(|c| {
                let mut e = vec![S::zero(); cols.len()];
                e[c] = S::one();
                e
            })
            .collect()
    } else {
        Matrix::from_rows(rows).nullspace(tol)
    };
    null.into_iter()
        .map(|x| {
            let mut v = vec![S::zero(); d];
            for (c, &k) in cols.iter().enumerate() {
                v[k] = x[c].clone();
            }
            v
        })
        .collect()
}

impl<S: Scalar> ModuleSpace<S> {
    /// `Σ_s e_{ij}^{(s)}`, the constant-loop action.
    pub fn act_factor_sum(&self, i: usize, j: usize, v: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); v.len()];
        for s in 0..self.degree() {
            self.accumulate_factor(i, j, s, &S::one(), v, &mut out);
        }
        out
    }
}
