//! The universal weight function `ω(t) = Σ_J ω_J(t) e_J v`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::gln::admissible_indices;
use crate::numeric::Scalar;
use crate::schubert::RootCoordinates;

/// `β_i : S_i(J) → {1..l_i}` for `i = 1..N-1`; `maps[i-1][s] = β_i(s)`,
/// all indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionFamily {
    pub maps: Vec<BTreeMap<usize, usize>>,
}

/// `S_i(J) = {s : j_s > i}` (1-based `s`).
pub fn s_set(j: &[usize], i: usize) -> Vec<usize> {
    j.iter()
        .enumerate()
        .filter(|(_, &js)| js > i)
        .map(|(s, _)| s + 1)
        .collect()
}

/// Lexicographic successor; false after the last permutation.
fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut k = n - 1;
    while p[k] <= p[i - 1] {
        k -= 1;
    }
    p.swap(i - 1, k);
    p[i..].reverse();
    true
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (1..=n).collect();
    let mut out = vec![p.clone()];
    while next_permutation(&mut p) {
        out.push(p.clone());
    }
    out
}

fn family_count(l: &[usize]) -> u128 {
    l.iter()
        .map(|&x| (1..=x as u128).product::<u128>())
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// All families `B(J)` in lexicographic order per level; `l = (l_1, …, l_{N-1})`.
pub fn bijection_families(j: &[usize], l: &[usize], cap: u64) -> Result<Vec<BijectionFamily>> {
    if family_count(l) > cap as u128 {
        return Err(Error::CapExceeded(format!("more than {cap} bijection families")));
    }
    let mut out = vec![BijectionFamily { maps: Vec::new() }];
    for (idx, &li) in l.iter().enumerate() {
        let dom = s_set(j, idx + 1);
        if dom.len() != li {
            return Err(Error::Argument(format!("J is not admissible for l = {l:?}")));
        }
        let perms = all_permutations(li);
        let dom = &dom;
        out = out
            .into_iter()
            .flat_map(|fam| {
                perms.iter().map(move |p| {
                    let mut f = fam.clone();
                    f.maps.push(dom.iter().copied().zip(p.iter().copied()).collect());
                    f
                })
            })
            .collect();
    }
    Ok(out)
}

fn inv_diff<S: Scalar>(a: &S, b: &S) -> Result<S> {
    let d = a.clone() - b;
    if d.is_zero() {
        return Err(Error::NonGeneric("coincident coordinates in the weight function".into()));
    }
    Ok(d.inv())
}

/// `ω_{s,β} = 1/(t^{(1)}_{β_1(s)} - t^{(0)}_s) Π_{i=2}^{j_s-1} 1/(t^{(i)}_{β_i(s)} - t^{(i-1)}_{β_{i-1}(s)})`.
pub fn omega_term<S: Scalar>(s: usize, beta: &BijectionFamily, t: &RootCoordinates<S>, j: &[usize]) -> Result<S> {
    let js = j[s - 1];
    if js < 2 {
        return Err(Error::Argument(format!("slot {s} is not in S(J)")));
    }
    let mut prev = t.level(0)[s - 1].clone();
    let mut acc = S::one();
    for i in 1..js {
        let b = beta.maps[i - 1][&s];
        let cur = t.level(i)[b - 1].clone();
        acc = acc * inv_diff(&cur, &prev)?;
        prev = cur;
    }
    Ok(acc)
}

/// `ω_J(t) = Σ_{β ∈ B(J)} Π_{s ∈ S(J)} ω_{s,β}`.
///
/// The product telescopes along the levels, so the sum is evaluated level by
/// level: the contribution of levels `i..N-1` depends only on the values of
/// `β_{i-1}` on `S_i(J)`, and is memoized on them.
pub fn omega_j<S: Scalar>(t: &RootCoordinates<S>, j: &[usize], cap: u64) -> Result<S> {
    let n = t.rank();
    let l: Vec<usize> = (1..n).map(|i| t.level(i).len()).collect();
    if family_count(&l) > cap as u128 {
        return Err(Error::CapExceeded(format!("more than {cap} bijection families")));
    }
    let sets: Vec<Vec<usize>> = (0..n).map(|i| s_set(j, i)).collect();
    for i in 1..n {
        if sets[i].len() != l[i - 1] {
            return Err(Error::Argument(format!("J is not admissible for l = {l:?}")));
        }
    }
    let perms: Vec<Vec<Vec<usize>>> = l.iter().map(|&x| all_permutations(x)).collect();
    if n == 1 {
        return Ok(S::one());
    }
    let mut memo: HashMap<(usize, Vec<usize>), S> = HashMap::new();
    // level 0 pairs every slot with its own coordinate t^{(0)}_s
    let prev = sets[1].clone();
    level_sum(t, &sets, &perms, 1, &prev, &mut memo)
}

/// Sum over `β_i, …, β_{N-1}` given `prev[k] = β_{i-1}(S_i[k])`.
fn level_sum<S: Scalar>(
    t: &RootCoordinates<S>,
    sets: &[Vec<usize>],
    perms: &[Vec<Vec<usize>>],
    i: usize,
    prev: &[usize],
    memo: &mut HashMap<(usize, Vec<usize>), S>,
) -> Result<S> {
    let n = t.rank();
    if i == n || sets[i].is_empty() {
        return Ok(S::one());
    }
    let key = (i, prev.to_vec());
    if let Some(v) = memo.get(&key) {
        return Ok(v.clone());
    }
    let dom = &sets[i];
    let next_dom = sets.get(i + 1).cloned().unwrap_or_default();
    let mut total = S::zero();
    for p in &perms[i - 1] {
        let mut prod = S::one();
        for (k, _) in dom.iter().enumerate() {
            let cur = &t.level(i)[p[k] - 1];
            let before = &t.level(i - 1)[prev[k] - 1];
            prod = prod * inv_diff(cur, before)?;
        }
        if prod.is_zero() {
            continue;
        }
        // β_i restricted to S_{i+1}
        let restricted: Vec<usize> = next_dom
            .iter()
            .map(|s| {
                let pos = dom.iter().position(|x| x == s).expect("S_{i+1} ⊂ S_i");
                p[pos]
            })
            .collect();
        let rest = level_sum(t, sets, perms, i + 1, &restricted, memo)?;
        total = total + prod * rest;
    }
    memo.insert(key, total.clone());
    Ok(total)
}

/// The full vector `ω(t)` on `V^{⊗n}` (`n = l_0`), supported on the
/// admissible indices.
pub fn omega<S: Scalar>(t: &RootCoordinates<S>, cap: u64) -> Result<Vec<S>> {
    let rank = t.rank();
    let n = t.level(0).len();
    let l: Vec<usize> = (1..rank).map(|i| t.level(i).len()).collect();
    let dim = rank
        .checked_pow(n as u32)
        .filter(|&d| d <= 1 << 24)
        .ok_or_else(|| Error::CapExceeded("tensor power too large".into()))?;
    let js = admissible_indices(n, rank, &l);
    let values = crate::par::try_map(&js, |j| omega_j(t, j, cap))?;
    let mut v = vec![S::zero(); dim];
    for (j, x) in js.iter().zip(values) {
        let idx = j.iter().fold(0, |acc, &x| acc * rank + (x - 1));
        v[idx] = x;
    }
    Ok(v)
}
