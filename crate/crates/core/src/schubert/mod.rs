//! Points of the Schubert cell `Ω_λ`, their root coordinates and the
//! Fuchsian operator with a given polynomial kernel.

pub mod bae;
pub mod curve;

pub use bae::{bae_residual, chi_operator};
pub use curve::{sample_curve, CurveGerm, CurveSample};

use std::collections::BTreeMap;

use rug::Rational;
use serde_json::{json, Map, Value};

use crate::diffop::{polynomial_kernel, DiffOp};
use crate::error::{Error, Result};
use crate::gln::Partition;
use crate::numeric::scalar::{parse_rational, rational_to_string};
use crate::numeric::{poly::poly_det, poly_roots, wronskian, CFloat, Matrix, Polynomial, RationalFunction, Scalar};

/// A point `X ∈ Ω_λ ⊂ Gr(N, d)` given by its unique flag basis
/// `f_i = u^{d_i} + Σ_j f_{ij} u^{d_i - j}`, where the sum skips every
/// exponent that is itself one of the `d_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SchubertPoint<S> {
    lambda: Partition,
    d: usize,
    basis: Vec<Polynomial<S>>,
}

/// `t^{(a)}_j` for `a = 0..N-1`; the position within a level is meaningful
/// only for `a = 0`, where it matches the tensor slot.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCoordinates<S> {
    pub levels: Vec<Vec<S>>,
}

impl<S: Scalar> RootCoordinates<S> {
    pub fn new(levels: Vec<Vec<S>>) -> Self {
        RootCoordinates { levels }
    }

    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    /// `(l_0, …, l_{N-1})`
    pub fn l(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn level(&self, a: usize) -> &[S] {
        self.levels.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn to_cfloat(&self, prec: u32) -> RootCoordinates<CFloat> {
        RootCoordinates {
            levels: self
                .levels
                .iter()
                .map(|l| l.iter().map(|x| x.to_cfloat(prec)).collect())
                .collect(),
        }
    }
}

impl<S: Scalar> SchubertPoint<S> {
    /// Build from the free flag coefficients, keyed by `(i, j)` with 1-based
    /// `i`; missing coefficients are zero.
    pub fn from_coeffs(lambda: Partition, coeffs: &BTreeMap<(usize, usize), S>) -> Result<Self> {
        let degs = lambda.degrees();
        let n = lambda.rank();
        for &(i, j) in coeffs.keys() {
            if i == 0 || i > n || j == 0 || j > degs[i - 1] || degs.contains(&(degs[i - 1] - j)) {
                return Err(Error::NotInCell(format!("({i},{j}) is not a free flag coefficient")));
            }
        }
        let basis = degs
            .iter()
            .enumerate()
            .map(|(i, &di)| {
                let mut c = vec![S::zero(); di + 1];
                c[di] = S::one();
                for j in 1..=di {
                    if let Some(x) = coeffs.get(&(i + 1, j)) {
                        c[di - j] = x.clone();
                    }
                }
                Polynomial::new(c)
            })
            .collect();
        Ok(SchubertPoint {
            d: lambda.part(0) + n,
            lambda,
            basis,
        })
    }

    /// Echelonize any basis of an `N`-dimensional space of polynomials into
    /// the flag basis. Fails unless the leading degrees are exactly `d_i`.
    pub fn from_polynomials(lambda: Partition, polys: &[Polynomial<S>], tol: f64) -> Result<Self> {
        let n = lambda.rank();
        if polys.len() != n {
            return Err(Error::NotInCell(format!("{} polynomials for rank {n}", polys.len())));
        }
        let degs = lambda.degrees();
        let top = polys.iter().filter_map(Polynomial::degree).max().unwrap_or(0).max(degs[0]);
        // columns ordered by descending degree
        let rows: Vec<Vec<S>> = polys
            .iter()
            .map(|p| (0..=top).rev().map(|k| p.coeff(k)).collect())
            .collect();
        let rr = Matrix::from_rows(rows).rref(tol);
        let lead: Vec<usize> = rr.pivots.iter().map(|&c| top - c).collect();
        if lead != degs {
            return Err(Error::NotInCell(format!(
                "leading degrees {lead:?} differ from {degs:?}"
            )));
        }
        let basis = (0..n)
            .map(|i| {
                let mut c = vec![S::zero(); top + 1];
                for (col, x) in rr.matrix.row(i).iter().enumerate() {
                    c[top - col] = x.clone();
                }
                for &dk in &degs {
                    if dk != degs[i] {
                        c[dk] = S::zero();
                    }
                }
                c[degs[i]] = S::one();
                Polynomial::new(c)
            })
            .collect();
        Ok(SchubertPoint {
            d: lambda.part(0) + n,
            lambda,
            basis,
        })
    }

    pub fn rank(&self) -> usize {
        self.lambda.rank()
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// Ambient degree bound `d = λ_1 + N`.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &[Polynomial<S>] {
        &self.basis
    }

    /// The free coefficients `((i, j), f_{ij})` in `(i, j)` order.
    pub fn coeffs(&self) -> Vec<((usize, usize), S)> {
        let degs = self.lambda.degrees();
        let mut out = Vec::new();
        for (i, f) in self.basis.iter().enumerate() {
            for j in 1..=degs[i] {
                if !degs.contains(&(degs[i] - j)) {
                    out.push(((i + 1, j), f.coeff(degs[i] - j)));
                }
            }
        }
        out
    }

    /// `X(ε) = X + ε G` on the free coefficients.
    pub fn perturbed(&self, direction: &BTreeMap<(usize, usize), S>, eps: &S) -> Result<Self> {
        let mut coeffs: BTreeMap<(usize, usize), S> = self.coeffs().into_iter().collect();
        for (key, g) in direction {
            let slot = coeffs
                .get_mut(key)
                .ok_or_else(|| Error::NotInCell(format!("{key:?} is not a free coefficient")))?;
            *slot = slot.clone() + g.clone() * eps;
        }
        Self::from_coeffs(self.lambda.clone(), &coeffs)
    }

    /// `y_a = monic(Wr(f_{a+1}, …, f_N))` for `a = 0..N-1`, of degree `l_a`.
    pub fn y_polynomials(&self) -> Result<Vec<Polynomial<S>>> {
        let n = self.rank();
        let l = self.lambda.l_sequence();
        (0..n)
            .map(|a| {
                let w = wronskian(&self.basis[a..])?;
                if w.degree() != Some(l[a]) {
                    return Err(Error::DegenerateFlag(format!(
                        "Wronskian {a} has degree {:?}, expected {}",
                        w.degree(),
                        l[a]
                    )));
                }
                Ok(w.monic())
            })
            .collect()
    }

    /// Roots of every `y_a`, each level sorted by (real, imaginary) part.
    pub fn root_coordinates(&self, prec: u32) -> Result<RootCoordinates<CFloat>> {
        let ys = self.y_polynomials()?;
        let levels = ys
            .iter()
            .map(|y| poly_roots(y, prec))
            .collect::<Result<_>>()?;
        Ok(RootCoordinates { levels })
    }

    /// Simple roots for every `y_a` and no common roots of `y_{a-1}`, `y_a`.
    /// Exact by gcds in the rational domain; by root separation relative to
    /// `tol` otherwise.
    pub fn is_generic(&self, prec: u32, tol: f64) -> Result<bool> {
        let ys = self.y_polynomials()?;
        if S::EXACT {
            let simple = ys.iter().all(|y| y.degree().unwrap_or(0) == 0 || y.is_squarefree());
            let coprime = ys
                .windows(2)
                .all(|w| w[0].gcd(&w[1]).degree().unwrap_or(0) == 0);
            return Ok(simple && coprime);
        }
        let roots: Vec<Vec<CFloat>> = ys.iter().map(|y| poly_roots(y, prec)).collect::<Result<_>>()?;
        let scale = roots
            .iter()
            .flatten()
            .map(|r| r.abs_f64())
            .fold(1f64, f64::max);
        let sep = tol * scale;
        let apart = |a: &[CFloat], b: &[CFloat], same: bool| {
            a.iter().enumerate().all(|(i, x)| {
                b.iter()
                    .enumerate()
                    .all(|(j, y)| (same && i == j) || (x.clone() - y).abs_f64() > sep)
            })
        };
        Ok(roots.iter().all(|r| apart(r, r, true)) && roots.windows(2).all(|w| apart(&w[0], &w[1], false)))
    }

    /// `D_X f = Wr(f_1, …, f_N, f) / Wr(f_1, …, f_N)`, expanded along the
    /// last column.
    pub fn operator_from_kernel(&self) -> Result<DiffOp<S>> {
        let n = self.rank();
        // derivative table rows r = 0..=N, columns = basis polynomials
        let mut table: Vec<Vec<Polynomial<S>>> = vec![self.basis.clone()];
        for r in 1..=n {
            let next = table[r - 1].iter().map(Polynomial::derivative).collect();
            table.push(next);
        }
        let w = wronskian(&self.basis)?;
        if w.is_zero() {
            return Err(Error::DegenerateFlag("basis is linearly dependent".into()));
        }
        // coefficient of f^{(k)}: (-1)^{N+k} det(table without row k)
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in (0..=n).rev() {
            let minor: Vec<Vec<Polynomial<S>>> = (0..=n).filter(|&r| r != k).map(|r| table[r].clone()).collect();
            let mut c = poly_det(&minor);
            if (n + k) % 2 == 1 {
                c = -&c;
            }
            coeffs.push(if c.is_zero() {
                RationalFunction::zero()
            } else {
                RationalFunction::new(c, w.clone())
            });
        }
        Ok(DiffOp::new(coeffs))
    }
}

/// `X⁰ = ker D` as a point of `Ω_λ`.
pub fn kernel_to_point<S: Scalar>(d: &DiffOp<S>, lambda: &Partition, tol: f64) -> Result<SchubertPoint<S>> {
    let n = lambda.rank();
    if d.order() != n {
        return Err(Error::NotInCell(format!("operator order {} for rank {n}", d.order())));
    }
    let bound = lambda.degrees()[0];
    let kernel = polynomial_kernel(d, bound, tol);
    if kernel.len() != n {
        return Err(Error::NotInCell(format!(
            "polynomial kernel of dimension {} instead of {n}",
            kernel.len()
        )));
    }
    SchubertPoint::from_polynomials(lambda.clone(), &kernel, tol)
}

impl SchubertPoint<Rational> {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for ((i, j), c) in self.coeffs() {
            m.insert(format!("{i},{j}"), Value::String(rational_to_string(&c)));
        }
        json!({
            "N": self.rank(),
            "lambda": self.lambda.parts(),
            "d": self.d,
            "flag_coeffs": m,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Input("point needs \"N\"".into()))? as usize;
        let parts: Vec<usize> = serde_json::from_value(v.get("lambda").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Input(format!("lambda: {e}")))?;
        let lambda = Partition::new(&parts, n)?;
        let mut coeffs = BTreeMap::new();
        if let Some(obj) = v.get("flag_coeffs").and_then(Value::as_object) {
            for (key, val) in obj {
                let (i, j) = key
                    .split_once(',')
                    .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                    .ok_or_else(|| Error::Input(format!("bad coefficient key {key:?}")))?;
                let q = val
                    .as_str()
                    .and_then(parse_rational)
                    .ok_or_else(|| Error::Input(format!("bad coefficient {val}")))?;
                coeffs.insert((i, j), q);
            }
        }
        let point = Self::from_coeffs(lambda, &coeffs)?;
        if let Some(d) = v.get("d").and_then(Value::as_u64) {
            if d as usize != point.d {
                return Err(Error::Input(format!("d = {d} differs from λ_1 + N = {}", point.d)));
            }
        }
        Ok(point)
    }

    pub fn to_cfloat(&self, prec: u32) -> SchubertPoint<CFloat> {
        SchubertPoint {
            lambda: self.lambda.clone(),
            d: self.d,
            basis: self.basis.iter().map(|p| p.to_cfloat(prec)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(x: i64) -> Rational {
        Rational::from(x)
    }

    fn poly(c: &[i64]) -> Polynomial<Rational> {
        Polynomial::new(c.iter().map(|&x| q(x)).collect())
    }

    fn part(p: &[usize], n: usize) -> Partition {
        Partition::new(p, n).unwrap()
    }

    #[test]
    fn y_polynomials_examples() {
        let x = SchubertPoint::from_polynomials(part(&[1], 2), &[poly(&[0, 0, 1]), poly(&[1])], 0.0).unwrap();
        let y = x.y_polynomials().unwrap();
        assert_eq!(y, vec![poly(&[0, 1]), poly(&[1])]);

        let triv = SchubertPoint::from_coeffs(Partition::zero(3), &BTreeMap::new()).unwrap();
        assert!(triv.y_polynomials().unwrap().iter().all(|p| *p == poly(&[1])));

        let x3 = SchubertPoint::from_polynomials(
            part(&[1, 1], 3),
            &[poly(&[0, 0, 0, 1]), poly(&[0, 0, 1]), poly(&[1])],
            0.0,
        )
        .unwrap();
        let y3 = x3.y_polynomials().unwrap();
        assert_eq!(y3[0].degree(), Some(2));
        assert_eq!(y3[1], poly(&[0, 1]));
    }

    #[test]
    fn flag_basis_is_unique() {
        let lam = part(&[1], 2);
        let a = SchubertPoint::from_polynomials(lam.clone(), &[poly(&[3, 0, 2]), poly(&[5])], 0.0).unwrap();
        let b = SchubertPoint::from_polynomials(lam, &[poly(&[1, 0, 1]), poly(&[-1])], 0.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.basis(), &[poly(&[0, 0, 1]), poly(&[1])]);
    }

    #[test]
    fn rejects_points_outside_the_cell() {
        let lam = part(&[1], 2);
        assert!(SchubertPoint::from_polynomials(lam.clone(), &[poly(&[0, 0, 1]), poly(&[0, 1])], 0.0).is_err());
        let mut bad = BTreeMap::new();
        bad.insert((1, 2), q(1));
        assert!(SchubertPoint::from_coeffs(lam, &bad).is_err());
    }

    #[test]
    fn root_coordinates_examples() {
        let x = SchubertPoint::from_polynomials(part(&[1], 2), &[poly(&[0, 0, 1]), poly(&[1])], 0.0).unwrap();
        let t = x.root_coordinates(128).unwrap();
        assert_eq!(t.l(), vec![1, 0]);
        assert!(t.levels[0][0].abs_f64() < 1e-30);
        let triv = SchubertPoint::<Rational>::from_coeffs(Partition::zero(2), &BTreeMap::new()).unwrap();
        assert_eq!(triv.root_coordinates(64).unwrap().l(), vec![0, 0]);
    }

    #[test]
    fn genericity_examples() {
        let x = SchubertPoint::from_polynomials(part(&[1], 2), &[poly(&[0, 0, 1]), poly(&[1])], 0.0).unwrap();
        assert!(x.is_generic(64, 1e-8).unwrap());
        assert!(x.to_cfloat(128).is_generic(128, 1e-8).unwrap());
        // λ = (2,0): f_1 = u^3 + a u^2 + c u, y_0 = monic Wr(f_1, 1) = monic f_1'
        let mut c = BTreeMap::new();
        c.insert((1, 1), q(0));
        c.insert((1, 2), q(0));
        let x = SchubertPoint::from_coeffs(part(&[2], 2), &c).unwrap();
        assert_eq!(x.y_polynomials().unwrap()[0], poly(&[0, 0, 1]));
        assert!(!x.is_generic(64, 1e-8).unwrap());
    }

    #[test]
    fn operator_from_kernel_examples() {
        let lin = SchubertPoint::<Rational>::from_coeffs(Partition::zero(2), &BTreeMap::new()).unwrap();
        assert_eq!(lin.operator_from_kernel().unwrap(), DiffOp::d_pow(2));

        let x = SchubertPoint::from_polynomials(part(&[1], 2), &[poly(&[0, 0, 1]), poly(&[1])], 0.0).unwrap();
        let d = x.operator_from_kernel().unwrap();
        let inv_u = RationalFunction::new(poly(&[-1]), poly(&[0, 1]));
        assert_eq!(d, DiffOp::monic(vec![inv_u, RationalFunction::zero()]));

        let x3 = SchubertPoint::from_polynomials(
            part(&[1, 1], 3),
            &[poly(&[0, 0, 0, 1]), poly(&[0, 0, 1]), poly(&[1])],
            0.0,
        )
        .unwrap();
        let d3 = x3.operator_from_kernel().unwrap();
        assert!(d3.is_monic());
        for f in x3.basis() {
            assert!(d3.apply(f).is_zero());
        }
    }

    #[test]
    fn kernel_round_trip() {
        let lam = part(&[2, 1], 3);
        let mut c = BTreeMap::new();
        c.insert((1, 1), q(3));
        c.insert((1, 3), Rational::from((-1, 2)));
        c.insert((2, 1), q(7));
        let x = SchubertPoint::from_coeffs(lam.clone(), &c).unwrap();
        let d = x.operator_from_kernel().unwrap();
        assert_eq!(kernel_to_point(&d, &lam, 0.0).unwrap(), x);
        assert!(kernel_to_point(&DiffOp::<Rational>::d_pow(2), &Partition::zero(2), 0.0).is_ok());
        let shift = DiffOp::new(vec![RationalFunction::one(), RationalFunction::constant(q(-1))]);
        assert!(kernel_to_point(&shift, &Partition::zero(1), 0.0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut c = BTreeMap::new();
        c.insert((1, 1), Rational::from((2, 3)));
        let x = SchubertPoint::from_coeffs(part(&[1], 2), &c).unwrap();
        let j = x.to_json();
        assert_eq!(j["flag_coeffs"]["1,1"], "2/3");
        assert_eq!(SchubertPoint::from_json(&j).unwrap(), x);
    }
}
