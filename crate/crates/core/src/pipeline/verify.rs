//! Spectrum, bijection-closure and completeness reports for an instance.

use rug::Rational;
use serde_json::{json, Value};

use super::{abs_cosine, comparison_points, construct_eigenvector, Seeds};
use crate::bethe::{spectrum, Spectrum, UniversalOperator};
use crate::config::Config;
use crate::diffop::delta_membership;
use crate::error::Result;
use crate::gln::{singular_basis, Epimorphism, ModuleSpace};
use crate::io::{Assertion, Instance, Report};
use crate::numeric::{CFloat, Matrix, Scalar};

/// Required `|cos ∠(w, v)|` margin for closing the loop.
const CLOSURE_MARGIN: f64 = 1e-6;

/// The singular vectors of weight `λ` in `⊗_s L_{λ^{(s)}}(b_s)`, realized
/// inside `V^{⊗n}` as `F(V^{⊗n})`, with `z = b_s` repeated `n_s` times.
/// The basis is the reduced echelon form of `F` applied to the singular
/// vectors of `V^{⊗n}`.
pub fn singular_subspace(inst: &Instance, seed: u64) -> Result<(ModuleSpace<Rational>, Vec<Vec<Rational>>)> {
    let space = ModuleSpace::new(inst.rank, inst.points())?;
    if !inst.weight_matches() {
        return Ok((space, Vec::new()));
    }
    let sing = singular_basis(&space, &inst.lambda, 0.0);
    if sing.is_empty() {
        return Ok((space, sing));
    }
    let f = Epimorphism::build(&inst.lambdas, seed)?;
    let images: Vec<Vec<Rational>> = sing.iter().map(|v| f.apply(v, 0)).collect();
    let rr = Matrix::from_rows(images).rref(0.0);
    let basis = (0..rr.pivots.len()).map(|i| rr.matrix.row(i).to_vec()).collect();
    Ok((space, basis))
}

fn instance_spectrum(inst: &Instance, seeds: &Seeds, cfg: &Config) -> Result<Spectrum> {
    let (space, basis) = singular_subspace(inst, seeds.epimorphism)?;
    let op = UniversalOperator::new(space, basis, cfg.max_rank, 0.0)?;
    spectrum(&op, &cfg.tol, seeds.spectrum, cfg.precision)
}

fn report(inst: &Instance, seeds: &Seeds, cfg: &Config, assertions: Vec<Assertion>, result: Value) -> Report {
    Report {
        instance: inst.raw.clone(),
        assertions,
        seeds: seeds.to_json(),
        precision: cfg.precision,
        result: Some(result),
    }
}

/// Joint eigenvectors on the singular weight subspace.
pub fn spectrum_report(inst: &Instance, seeds: &Seeds, cfg: &Config) -> Result<Report> {
    let sp = instance_spectrum(inst, seeds, cfg)?;
    let mut assertions = vec![Assertion::new("spectrum_simple", sp.is_simple(), None)
        .with_detail(json!({"eigenvectors": sp.eigen.len(), "dim": sp.dim, "degenerate": sp.degenerate}))];
    for (k, e) in sp.eigen.iter().enumerate() {
        assertions.push(Assertion::new(format!("eigenvector_{k}"), e.is_eigenvector(), Some(e.residual)));
    }
    Ok(report(inst, seeds, cfg, assertions, sp.to_json()))
}

/// Seeds of the `k`-th reconstruction, derived from the run seeds.
fn construction_seeds(seeds: &Seeds, k: usize) -> Seeds {
    Seeds {
        spectrum: seeds.spectrum,
        curve: seeds.curve.wrapping_add(k as u64),
        epimorphism: seeds.epimorphism.wrapping_add(1000 * (k as u64 + 1)),
    }
}

/// Spectrum, then for every eigenvector `v`: `D^B_v` is in the class and
/// the construction applied to `D^B_v` returns `v` up to scale.
pub fn verify_bijection(inst: &Instance, seeds: &Seeds, cfg: &Config) -> Result<Report> {
    let prec = cfg.precision;
    let sp = instance_spectrum(inst, seeds, cfg)?;
    let mut assertions = Vec::new();
    if !inst.distinct_points() {
        assertions.push(Assertion::new("distinct_points", false, None));
    }
    assertions.push(
        Assertion::new("eigenvector_count", sp.eigen.len() == sp.dim && sp.degenerate.is_empty(), None)
            .with_detail(json!({"eigenvectors": sp.eigen.len(), "dim": sp.dim})),
    );
    let b: Vec<CFloat> = inst.b.iter().map(|x| x.to_cfloat(prec)).collect();
    let indices: Vec<usize> = (0..sp.eigen.len()).collect();
    let per_vector: Vec<(Vec<Assertion>, Value)> = crate::par::map(&indices, |&k| {
        let e = &sp.eigen[k];
        let mut out = vec![Assertion::new(format!("eigen_{k}_residual"), e.is_eigenvector(), Some(e.residual))];
        let membership = delta_membership(&e.operator, &inst.lambdas, &inst.lambda, &b, &cfg.tol, prec);
        match membership {
            Ok(m) => out.push(
                Assertion::new(format!("eigen_{k}_delta_membership"), m.pass(), None).with_detail(m.to_json()),
            ),
            Err(err) => out.push(
                Assertion::new(format!("eigen_{k}_delta_membership"), false, None)
                    .with_detail(json!(err.to_string())),
            ),
        }
        let cs = construction_seeds(seeds, k);
        let detail = match construct_eigenvector(&e.operator, &inst.lambdas, &inst.lambda, &inst.b, &cs, cfg) {
            Ok(r) => {
                let cos = abs_cosine(&r.w, &e.vector);
                out.push(Assertion::new(format!("eigen_{k}_construction"), r.success(), Some(r.operator_residual)));
                out.push(Assertion::new(
                    format!("eigen_{k}_closure"),
                    cos > 1.0 - CLOSURE_MARGIN,
                    Some(1.0 - cos),
                ));
                json!({"seeds": cs.to_json(), "cosine": cos, "construction": r.to_json()})
            }
            Err(err) => {
                out.push(
                    Assertion::new(format!("eigen_{k}_construction"), false, None).with_detail(json!(err.to_string())),
                );
                json!({"seeds": cs.to_json(), "error": err.to_string()})
            }
        };
        (out, detail)
    });
    let mut constructions = Vec::new();
    for (a, d) in per_vector {
        assertions.extend(a);
        constructions.push(d);
    }
    let points = comparison_points(&inst.b, prec);
    let mut closest = f64::INFINITY;
    for (i, a) in sp.eigen.iter().enumerate() {
        for c in &sp.eigen[i + 1..] {
            closest = closest.min(a.operator.max_rel_diff_at(&c.operator, &points).unwrap_or(f64::INFINITY));
        }
    }
    assertions.push(Assertion::new("operators_distinct", closest > cfg.tol.operator, Some(closest)));
    Ok(report(
        inst,
        seeds,
        cfg,
        assertions,
        json!({"spectrum": sp.to_json(), "constructions": constructions}),
    ))
}

/// Number of simple joint eigenvectors against the dimension of the
/// singular weight subspace; optionally followed by [`verify_bijection`].
pub fn completeness_report(inst: &Instance, seeds: &Seeds, cfg: &Config, verify: bool) -> Result<Report> {
    let sp = instance_spectrum(inst, seeds, cfg)?;
    let mut assertions = Vec::new();
    let mut notes = Vec::new();
    if sp.dim == 0 {
        notes.push("singular weight subspace is zero; vacuous");
    }
    assertions.push(Assertion::new("distinct_real_points", inst.distinct_points(), None));
    assertions.push(
        Assertion::new("simple_count", sp.eigen.len() == sp.dim, None)
            .with_detail(json!({"eigenvectors": sp.eigen.len(), "dim": sp.dim})),
    );
    assertions.push(
        Assertion::new("no_degenerate_eigenspaces", sp.degenerate.is_empty(), None)
            .with_detail(json!(sp.degenerate)),
    );
    let mut result = json!({"dim": sp.dim, "eigenvectors": sp.eigen.len(), "notes": notes});
    if verify && sp.dim > 0 {
        let v = verify_bijection(inst, seeds, cfg)?;
        assertions.extend(v.assertions);
        result["verify"] = v.result.unwrap_or(Value::Null);
    }
    Ok(report(inst, seeds, cfg, assertions, result))
}
