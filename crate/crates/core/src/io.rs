//! JSON forms of problem instances, operators, vectors and reports.

use rug::Rational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::gln::{ModuleSpace, Partition};
use crate::numeric::scalar::{parse_rational, rational_to_string};
use crate::numeric::{Polynomial, RationalFunction, Scalar};

pub fn poly_to_json<S: Scalar>(p: &Polynomial<S>) -> Value {
    Value::Array(p.coeffs().iter().map(Scalar::to_json).collect())
}

fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Input(format!("not a rational: {s:?}"))),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(Rational::from(i))
            } else {
                parse_rational(&n.to_string()).ok_or_else(|| Error::Input(format!("not a rational: {n}")))
            }
        }
        other => Err(Error::Input(format!("expected a rational string, found {other}"))),
    }
}

fn poly_from_json(v: &Value) -> Result<Polynomial<Rational>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Input("polynomial must be a coefficient list".into()))?;
    Ok(Polynomial::new(arr.iter().map(rational_from_json).collect::<Result<_>>()?))
}

/// `{"order": N, "coeffs": [{"num": […], "den": […]}, …]}` from `∂^N` down.
pub fn operator_to_json<S: Scalar>(d: &DiffOp<S>) -> Value {
    let coeffs: Vec<Value> = d
        .coeffs()
        .iter()
        .map(|c| json!({"num": poly_to_json(c.num()), "den": poly_to_json(c.den())}))
        .collect();
    json!({"order": d.order(), "coeffs": coeffs})
}

/// Inverse of [`operator_to_json`] in the exact domain. A list of `N`
/// coefficients is read as the monic operator `∂^N + Σ h_i ∂^{N-i}`.
pub fn operator_from_json(v: &Value) -> Result<DiffOp<Rational>> {
    let order = v
        .get("order")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Input("operator needs an integer \"order\"".into()))? as usize;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("operator needs a \"coeffs\" list".into()))?;
    let parsed: Vec<RationalFunction<Rational>> = coeffs
        .iter()
        .map(|c| {
            let num = poly_from_json(c.get("num").ok_or_else(|| Error::Input("coefficient without \"num\"".into()))?)?;
            let den = match c.get("den") {
                Some(d) => poly_from_json(d)?,
                None => Polynomial::one(),
            };
            if den.is_zero() {
                return Err(Error::Input("zero denominator".into()));
            }
            Ok(RationalFunction::new(num, den))
        })
        .collect::<Result<_>>()?;
    if parsed.len() == order {
        Ok(DiffOp::monic(parsed))
    } else if parsed.len() == order + 1 {
        let d = DiffOp::new(parsed);
        if d.order() != order {
            return Err(Error::Input("leading coefficient vanishes".into()));
        }
        Ok(d)
    } else {
        Err(Error::Input(format!(
            "operator of order {order} needs {} or {} coefficients",
            order,
            order + 1
        )))
    }
}

/// `{"j1,…,jn": coefficient}` over the nonzero components, in basis order.
pub fn vector_to_json<S: Scalar>(space: &ModuleSpace<S>, v: &[S]) -> Value {
    let mut m = Map::new();
    for (k, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let key = space
            .tuple(k)
            .iter()
            .map(|j| j.to_string())
            .collect::<Vec<_>>()
            .join(",");
        m.insert(key, x.to_json());
    }
    Value::Object(m)
}

pub fn vector_from_json(space: &ModuleSpace<Rational>, v: &Value) -> Result<Vec<Rational>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Input("vector must be an object of J-tuples".into()))?;
    let mut out = vec![Rational::new(); space.dim()];
    for (key, val) in obj {
        let j: Vec<usize> = key
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Input(format!("bad J-tuple {key:?}")))?;
        if j.len() != space.degree() || j.iter().any(|&x| x == 0 || x > space.rank()) {
            return Err(Error::Input(format!("J-tuple {key:?} out of range")));
        }
        out[space.index(&j)] = rational_from_json(val)?;
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorSpec {
    pub partition: Vec<usize>,
    pub b: Value,
    #[serde(default)]
    pub n_s: Option<usize>,
}

/// Problem instance as read from disk.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "N")]
    pub rank: usize,
    pub factors: Vec<FactorSpec>,
    pub weight: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    /// Operator for the construction command.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<Value>,
}

/// Validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: Option<String>,
    pub rank: usize,
    pub lambdas: Vec<Partition>,
    pub b: Vec<Rational>,
    pub lambda: Partition,
    pub seed: Option<u64>,
    pub precision: Option<u32>,
    pub operator: Option<DiffOp<Rational>>,
    pub raw: Value,
}

impl Instance {
    pub fn from_json(v: &Value) -> Result<Self> {
        let spec: InstanceSpec =
            serde_json::from_value(v.clone()).map_err(|e| Error::Input(format!("instance: {e}")))?;
        Self::from_spec(spec, v.clone())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
        Self::from_json(&v)
    }

    fn from_spec(spec: InstanceSpec, raw: Value) -> Result<Self> {
        let n = spec.rank;
        if n == 0 {
            return Err(Error::Input("N must be positive".into()));
        }
        let mut lambdas = Vec::new();
        let mut b = Vec::new();
        for f in &spec.factors {
            let p = Partition::new(&f.partition, n).map_err(|e| Error::Input(e.to_string()))?;
            if let Some(ns) = f.n_s {
                if ns != p.size() {
                    return Err(Error::Input(format!(
                        "n_s = {ns} differs from |partition| = {}",
                        p.size()
                    )));
                }
            }
            if p.size() == 0 {
                return Err(Error::Input("factor with the zero partition".into()));
            }
            lambdas.push(p);
            b.push(rational_from_json(&f.b)?);
        }
        let lambda = Partition::new(&spec.weight, n).map_err(|e| Error::Input(e.to_string()))?;
        let operator = spec.operator.as_ref().map(operator_from_json).transpose()?;
        if let Some(p) = spec.precision {
            if p < crate::numeric::scalar::MIN_PRECISION {
                return Err(Error::Input(format!("precision {p} below 53 bits")));
            }
        }
        Ok(Instance {
            name: spec.name,
            rank: n,
            lambdas,
            b,
            lambda,
            seed: spec.seed,
            precision: spec.precision,
            operator,
            raw,
        })
    }

    /// `n = Σ n_s`.
    pub fn degree(&self) -> usize {
        self.lambdas.iter().map(Partition::size).sum()
    }

    /// Evaluation points with multiplicity: `b_s` repeated `n_s` times.
    pub fn points(&self) -> Vec<Rational> {
        self.lambdas
            .iter()
            .zip(&self.b)
            .flat_map(|(p, b)| std::iter::repeat_n(b.clone(), p.size()))
            .collect()
    }

    pub fn distinct_points(&self) -> bool {
        self.b
            .iter()
            .enumerate()
            .all(|(i, x)| self.b[..i].iter().all(|y| y != x))
    }

    pub fn weight_matches(&self) -> bool {
        self.lambda.size() == self.degree()
    }

    pub fn key(&self) -> String {
        self.name.clone().unwrap_or_else(|| {
            let parts: Vec<String> = self
                .lambdas
                .iter()
                .zip(&self.b)
                .map(|(p, b)| format!("{:?}@{}", p.parts(), rational_to_string(b)))
                .collect();
            format!("N={} {} -> {:?}", self.rank, parts.join(" "), self.lambda.parts())
        })
    }
}

/// One machine-readable check.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub pass: bool,
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl Assertion {
    pub fn new(name: impl Into<String>, pass: bool, residual: Option<f64>) -> Self {
        Assertion {
            name: name.into(),
            pass,
            residual: residual.filter(|r| r.is_finite()),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub instance: Value,
    pub assertions: Vec<Assertion>,
    pub seeds: Value,
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).unwrap_or(Value::Null)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_round_trip_is_exact() {
        let u = Polynomial::new(vec![Rational::new(), Rational::from(1)]);
        let h1 = RationalFunction::new(Polynomial::constant(Rational::from((-3, 7))), u);
        let d = DiffOp::monic(vec![h1, RationalFunction::zero()]);
        let text = operator_to_json(&d).to_string();
        let back = operator_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, d);
        assert!(text.contains("\"-3/7\""));
    }

    #[test]
    fn instance_parsing() {
        let text = r#"{"N":2,"factors":[{"partition":[1],"b":"0","n_s":1},
            {"partition":[1],"b":"1/2","n_s":1}],"weight":[1,1],"seed":3}"#;
        let inst = Instance::parse(text).unwrap();
        assert_eq!(inst.points(), vec![Rational::new(), Rational::from((1, 2))]);
        assert!(inst.weight_matches() && inst.distinct_points());
        assert!(Instance::parse("{").is_err());
        assert!(Instance::parse(r#"{"N":2,"factors":[{"partition":[1]}],"weight":[1]}"#).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let space = ModuleSpace::new(2, vec![Rational::new(); 2]).unwrap();
        let v = vec![Rational::new(), Rational::from(1), Rational::from(-1), Rational::new()];
        let j = vector_to_json(&space, &v);
        assert_eq!(j, json!({"1,2": "1/1", "2,1": "-1/1"}));
        assert_eq!(vector_from_json(&space, &j).unwrap(), v);
    }
}
