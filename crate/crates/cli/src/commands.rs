use serde_json::{json, Value};

use gaudin_core::config::Config;
use gaudin_core::diffop::delta_membership;
use gaudin_core::gln::Partition;
use gaudin_core::io::{Assertion, Instance, Report};
use gaudin_core::pipeline::{
    completeness_report, construct_eigenvector, spectrum_report, verify_bijection, weight_function_checks, Seeds,
};
use gaudin_core::{Error, Result};

use crate::{config_from, Args, Command};

/// Instances of the built-in desk suite.
const DESK_SUITE: [&str; 3] = [
    r#"{"name":"gl2-four-points","N":2,"factors":[{"partition":[1],"b":"0"},{"partition":[1],"b":"1"},
        {"partition":[1],"b":"3"},{"partition":[1],"b":"7"}],"weight":[2,2]}"#,
    r#"{"name":"gl3-three-points","N":3,"factors":[{"partition":[1],"b":"0"},{"partition":[1],"b":"1"},
        {"partition":[1],"b":"3"}],"weight":[1,1,1]}"#,
    r#"{"name":"gl3-two-factors","N":3,"factors":[{"partition":[1,1],"b":"0"},{"partition":[2],"b":"1"}],
        "weight":[2,1,1]}"#,
];

/// Weights of the random cell points in the desk suite.
const DESK_WEIGHTS: [(usize, &[usize]); 6] = [
    (2, &[1, 1]),
    (2, &[2, 1]),
    (2, &[2, 2]),
    (3, &[1, 1, 1]),
    (3, &[2, 1]),
    (3, &[2, 1, 1]),
];

/// The instances and whether the file held a list.
fn load_instances(args: &Args) -> Result<(Vec<Instance>, bool)> {
    let path = args
        .instance
        .as_ref()
        .ok_or_else(|| Error::Input("--instance is required for this command".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    let (items, list) = match v {
        Value::Array(a) => (a, true),
        Value::Object(ref o) if o.contains_key("instances") => (
            o["instances"]
                .as_array()
                .cloned()
                .ok_or_else(|| Error::Input("\"instances\" must be a list".into()))?,
            true,
        ),
        other => (vec![other], false),
    };
    Ok((items.iter().map(Instance::from_json).collect::<Result<_>>()?, list))
}

fn failure(inst: &Instance, seeds: &Seeds, cfg: &Config, name: &str, err: &Error) -> Report {
    eprintln!("{}: {err}", inst.key());
    Report {
        instance: inst.raw.clone(),
        assertions: vec![Assertion::new(name, false, None).with_detail(json!(err.to_string()))],
        seeds: seeds.to_json(),
        precision: cfg.precision,
        result: None,
    }
}

fn point_assertions(lambdas: &[Partition], count: usize, seed: u64, cfg: &Config) -> Vec<Assertion> {
    let lambdas: Vec<Partition> = lambdas.iter().filter(|l| l.size() > 0).cloned().collect();
    match weight_function_checks(&lambdas, count, seed, cfg) {
        Ok(checks) => checks
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.assertions(&format!("point_{i}")))
            .collect(),
        Err(e) => vec![Assertion::new("random_points", false, None).with_detail(json!(e.to_string()))],
    }
}

fn construct(inst: &Instance, seeds: &Seeds, cfg: &Config) -> Result<Report> {
    let d = inst
        .operator
        .as_ref()
        .ok_or_else(|| Error::Input("the construct command needs an \"operator\" in the instance".into()))?;
    let membership = delta_membership(d, &inst.lambdas, &inst.lambda, &inst.b, &cfg.tol, cfg.precision)?;
    let mut assertions =
        vec![Assertion::new("delta_membership", membership.pass(), None).with_detail(membership.to_json())];
    if !membership.pass() {
        eprintln!("{}: operator fails {:?}", inst.key(), membership.failed());
        return Ok(Report {
            instance: inst.raw.clone(),
            assertions,
            seeds: seeds.to_json(),
            precision: cfg.precision,
            result: None,
        });
    }
    let r = construct_eigenvector(d, &inst.lambdas, &inst.lambda, &inst.b, seeds, cfg)?;
    assertions.push(Assertion::new("eigenvector", r.eigen.is_eigenvector(), Some(r.eigen.residual)));
    assertions.push(Assertion::new(
        "operator_agreement",
        r.operator_residual <= r.operator_tolerance,
        Some(r.operator_residual),
    ));
    Ok(Report {
        instance: inst.raw.clone(),
        assertions,
        seeds: seeds.to_json(),
        precision: cfg.precision,
        result: Some(r.to_json()),
    })
}

fn run_instance(args: &Args, inst: &Instance) -> Result<Report> {
    let mut cfg = config_from(args, inst.precision)?;
    if args.seed.is_none() {
        cfg.seed = inst.seed.unwrap_or(cfg.seed);
    }
    let seeds = Seeds::from_base(cfg.seed);
    let outcome = match args.command {
        Command::Spectrum => spectrum_report(inst, &seeds, &cfg),
        Command::Construct => construct(inst, &seeds, &cfg),
        Command::Completeness => completeness_report(inst, &seeds, &cfg, args.with_verify),
        Command::Verify | Command::Selftest => verify_bijection(inst, &seeds, &cfg).map(|mut r| {
            let extra = point_assertions(std::slice::from_ref(&inst.lambda), args.random_points, seeds.curve, &cfg);
            r.assertions.extend(extra);
            r
        }),
    };
    match outcome {
        Ok(r) => Ok(r),
        Err(e @ Error::Input(_)) => Err(e),
        Err(e) => Ok(failure(inst, &seeds, &cfg, "run", &e)),
    }
}

fn selftest(args: &Args) -> Result<(Value, bool)> {
    let insts: Vec<Instance> = DESK_SUITE.iter().map(|s| Instance::parse(s)).collect::<Result<_>>()?;
    let reports = gaudin_core::par::try_map(&insts, |inst| run_instance(args, inst))?;
    let cfg = config_from(args, None)?;
    let lambdas: Vec<Partition> = DESK_WEIGHTS
        .iter()
        .map(|(n, p)| Partition::new(p, *n))
        .collect::<Result<_>>()?;
    let points = point_assertions(&lambdas, args.random_points.max(lambdas.len()), cfg.seed, &cfg);
    let pass = reports.iter().all(Report::pass) && points.iter().all(|a| a.pass);
    let value = json!({
        "pass": pass,
        "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
        "random_points": points,
    });
    Ok((value, pass))
}

/// The report and whether every assertion passed. `Err` means invalid input.
pub fn run(args: &Args) -> Result<(Value, bool)> {
    if args.command == Command::Selftest {
        return selftest(args);
    }
    let (insts, list) = load_instances(args)?;
    let mut reports = gaudin_core::par::try_map(&insts, |inst| run_instance(args, inst))?;
    if !list {
        let r = reports.remove(0);
        let pass = r.pass();
        return Ok((r.to_json(), pass));
    }
    let mut keyed: Vec<(String, Report)> = insts.iter().map(Instance::key).zip(reports).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    let pass = keyed.iter().all(|(_, r)| r.pass());
    let value = json!({
        "pass": pass,
        "reports": keyed.iter().map(|(_, r)| r.to_json()).collect::<Vec<_>>(),
    });
    Ok((value, pass))
}
