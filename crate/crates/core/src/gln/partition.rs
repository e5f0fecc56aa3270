//! Partitions with at most `N` parts and the numbers derived from them.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `λ_1 >= … >= λ_N >= 0`, always stored with exactly `N` entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Pads `parts` with zeros up to rank `n`.
    pub fn new(parts: &[usize], n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("rank must be positive".into()));
        }
        if parts.len() > n {
            let extra = &parts[n..];
            if extra.iter().any(|&p| p != 0) {
                return Err(Error::Argument(format!(
                    "partition {parts:?} has more than {n} nonzero parts"
                )));
            }
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Argument(format!("{parts:?} is not weakly decreasing")));
        }
        let mut v: Vec<usize> = parts.iter().copied().take(n).collect();
        v.resize(n, 0);
        Ok(Partition { parts: v })
    }

    pub fn zero(n: usize) -> Self {
        Partition { parts: vec![0; n] }
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// `λ_{i+1}` (zero-based index).
    pub fn part(&self, i: usize) -> usize {
        self.parts[i]
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Degrees `d_i = λ_i + N - i`, strictly decreasing.
    pub fn degrees(&self) -> Vec<usize> {
        let n = self.rank();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| p + n - 1 - i)
            .collect()
    }

    /// `l_a = Σ_{b > a} λ_b` for `a = 0..=N`; `l_0 = |λ|`, `l_N = 0`.
    pub fn l_sequence(&self) -> Vec<usize> {
        let n = self.rank();
        (0..=n).map(|a| self.parts[a..].iter().sum()).collect()
    }

    /// `(l_1, …, l_{N-1})`.
    pub fn l_vector(&self) -> Vec<usize> {
        let l = self.l_sequence();
        l[1..self.rank()].to_vec()
    }

    /// Dimension of the irreducible module `L_λ` (Weyl's formula).
    pub fn weyl_dimension(&self) -> Integer {
        let n = self.rank();
        let mut acc = Rational::from(1);
        for i in 0..n {
            for j in i + 1..n {
                let num = self.parts[i] as i64 - self.parts[j] as i64 + (j - i) as i64;
                acc *= Rational::from((num, (j - i) as i64));
            }
        }
        acc.numer().clone()
    }

    /// Number of standard Young tableaux of shape `λ` (hook length formula).
    pub fn standard_tableaux(&self) -> Integer {
        let rows: Vec<usize> = self.parts.iter().copied().filter(|&p| p > 0).collect();
        let mut hooks = Integer::from(1);
        for (i, &r) in rows.iter().enumerate() {
            for j in 0..r {
                let arm = r - j - 1;
                let leg = rows[i + 1..].iter().filter(|&&len| len > j).count();
                hooks *= arm + leg + 1;
            }
        }
        let fact = Integer::from(Integer::factorial(self.size() as u32));
        fact / hooks
    }
}
