//! Acceptance suite: one pass/fail line per criterion. Runs without the
//! libtest harness so that the lines are always printed.

use std::collections::{BTreeMap, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rug::ops::Pow;

use gaudin_core::bethe::{coefficient_matrices, commutativity_check};
use gaudin_core::config::Config;
use gaudin_core::gln::{ModuleSpace, Partition};
use gaudin_core::io::Instance;
use gaudin_core::numeric::{CFloat, Matrix, Polynomial};
use gaudin_core::pipeline::{
    abs_cosine, completeness_report, verify_bijection, weight_function_checks, Seeds,
};
use gaudin_core::schubert::{chi_operator, kernel_to_point, RootCoordinates, SchubertPoint};
use gaudin_core::weight::omega;
use gaudin_core::Rational;

fn q(x: i64) -> Rational {
    Rational::from(x)
}

fn qq(p: i64, d: i64) -> Rational {
    Rational::from((p, d))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

const CLOSURE_INSTANCES: [&str; 3] = [
    r#"{"name":"i","N":2,"factors":[{"partition":[1],"b":"0"},{"partition":[1],"b":"1"},
        {"partition":[1],"b":"3"},{"partition":[1],"b":"7"}],"weight":[2,2]}"#,
    r#"{"name":"ii","N":3,"factors":[{"partition":[1],"b":"0"},{"partition":[1],"b":"1"},
        {"partition":[1],"b":"3"}],"weight":[1,1,1]}"#,
    r#"{"name":"iii","N":3,"factors":[{"partition":[1,1],"b":"0"},{"partition":[2],"b":"1"}],
        "weight":[2,1,1]}"#,
];

fn instances() -> Vec<Instance> {
    CLOSURE_INSTANCES.iter().map(|s| Instance::parse(s).unwrap()).collect()
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Outcome {
    let t = RootCoordinates::new(vec![vec![q(0), q(1)], vec![q(3)], vec![q(7)]]);
    let v = omega(&t, 1_000).unwrap();
    let mut expected = vec![q(0); 9];
    // e_{31}v+ ⊗ v+ is J = (3,1); v+ ⊗ e_{31}v+ is J = (1,3)
    expected[(3 - 1) * 3] = ((q(7) - q(3)) * (q(3) - q(0))).recip();
    expected[2] = ((q(7) - q(3)) * (q(3) - q(1))).recip();
    outcome(v == expected, format!("ω = 1/12 e31v⊗v + 1/8 v⊗e31v: {}", v == expected))
}

// ---------------------------------------------------------------- 2

fn criterion_2() -> Outcome {
    let lambdas: Vec<Partition> = [
        (2, &[1, 1][..]),
        (2, &[2, 1]),
        (2, &[2, 2]),
        (2, &[3, 1]),
        (3, &[1, 1, 1]),
        (3, &[2, 1]),
        (3, &[2, 1, 1]),
        (3, &[2, 2]),
        (2, &[1]),
        (3, &[1, 1]),
    ]
    .iter()
    .map(|(n, p)| Partition::new(p, *n).unwrap())
    .collect();
    let cfg = Config::with_precision(256);
    let checks = weight_function_checks(&lambdas, 20, 2024, &cfg).unwrap();
    let worst = |f: fn(&gaudin_core::pipeline::PointCheck) -> f64| checks.iter().map(f).fold(0f64, f64::max);
    let failed: Vec<usize> = checks
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.pass())
        .map(|(i, _)| i)
        .collect();
    outcome(
        failed.is_empty() && checks.len() == 20,
        format!(
            "20 points; max BAE {:.1e}, singular {:.1e}, eigen {:.1e}, operator {:.1e}; failing {:?}",
            worst(|c| c.bae),
            worst(|c| c.singular),
            worst(|c| c.eigen_residual),
            worst(|c| c.operator_residual),
            failed
        ),
    )
}

// ---------------------------------------------------------------- 3

/// `e_{ij}(u) = Σ_s e_{ij}^{(s)} / (u - z_s)` and its `u`-derivative.
fn current(space: &ModuleSpace<Rational>, i: usize, j: usize, u: &Rational, power: u32) -> Matrix<Rational> {
    let d = space.dim();
    let mut cols = Vec::with_capacity(d);
    for k in 0..d {
        let mut e = vec![q(0); d];
        e[k] = q(1);
        let mut col = vec![q(0); d];
        for (s, z) in space.points().iter().enumerate() {
            let w = (u.clone() - z).pow(power as i32).recip();
            for (c, x) in col.iter_mut().zip(space.act_factor(i, j, s, &e)) {
                *c += x * &w;
            }
        }
        cols.push(col);
    }
    Matrix::from_columns(&cols)
}

fn rank_two_expansion() -> bool {
    let space = ModuleSpace::new(2, vec![q(0), qq(1, 2)]).unwrap();
    [qq(5, 3), q(-2), q(3), qq(7, 4), q(11)].iter().all(|u| {
        let b = coefficient_matrices(&space, u).unwrap();
        let e = |i, j| current(&space, i, j, u, 1);
        // e22' = -Σ e22^{(s)} / (u - z_s)^2
        let e22_prime = current(&space, 2, 2, u, 2).scale(&q(-1));
        let b1 = e(1, 1).add(&e(2, 2)).scale(&q(-1));
        let b2 = e(1, 1).mul(&e(2, 2)).sub(&e(2, 1).mul(&e(1, 2))).sub(&e22_prime);
        b[0] == b1 && b[1] == b2
    })
}

fn rational_rooted_points() -> Vec<(SchubertPoint<Rational>, RootCoordinates<Rational>)> {
    let p = |c: &[Rational]| Polynomial::new(c.to_vec());
    // Wr = -2 (u-1)(u-2)(u+2/3), y_1 = u
    let a = SchubertPoint::from_polynomials(
        Partition::new(&[2, 1], 2).unwrap(),
        &[p(&[qq(-8, 3), q(0), qq(-14, 3), q(1)]), p(&[q(0), q(1)])],
        0.0,
    )
    .unwrap();
    let ta = RootCoordinates::new(vec![vec![q(1), q(2), qq(-2, 3)], vec![q(0)]]);
    // y_0 = (u-1)(u-2), y_1 = u - 3/2 up to scale
    let b = SchubertPoint::from_polynomials(
        Partition::new(&[1, 1], 3).unwrap(),
        &[p(&[q(0), q(-6), q(0), q(1)]), p(&[q(0), q(-3), q(1)]), p(&[q(1)])],
        0.0,
    )
    .unwrap();
    let tb = RootCoordinates::new(vec![vec![q(1), q(2)], vec![qq(3, 2)], vec![]]);
    vec![(a, ta), (b, tb)]
}

fn random_points_round_trip() -> bool {
    let shapes: [(usize, &[usize]); 4] = [(2, &[2, 1]), (3, &[2, 1]), (3, &[2, 1, 1]), (3, &[3, 1])];
    shapes.iter().enumerate().all(|(k, (n, parts))| {
        let lam = Partition::new(parts, *n).unwrap();
        let keys: Vec<(usize, usize)> = SchubertPoint::<Rational>::from_coeffs(lam.clone(), &BTreeMap::new())
            .unwrap()
            .coeffs()
            .into_iter()
            .map(|(key, _)| key)
            .collect();
        let coeffs: BTreeMap<_, _> = keys
            .iter()
            .enumerate()
            .map(|(i, &key)| (key, qq((3 * i as i64 + k as i64) % 7 - 3, 1 + i as i64 % 3)))
            .collect();
        let x = SchubertPoint::from_coeffs(lam.clone(), &coeffs).unwrap();
        let d = x.operator_from_kernel().unwrap();
        kernel_to_point(&d, &lam, 0.0).unwrap() == x
    })
}

fn criterion_3() -> Outcome {
    let expansion = rank_two_expansion();
    let samples = [qq(5, 2), q(-3), q(9)];
    let c2 = commutativity_check(&ModuleSpace::new(2, vec![q(0), q(1), q(3)]).unwrap(), None, &samples, 4).unwrap();
    let c3 = commutativity_check(&ModuleSpace::new(3, vec![q(0), q(1), q(3)]).unwrap(), None, &samples, 4).unwrap();
    let chi = rational_rooted_points()
        .iter()
        .all(|(x, t)| chi_operator(t).unwrap() == x.operator_from_kernel().unwrap());
    let round_trip = random_points_round_trip();
    outcome(
        expansion && c2 == 0.0 && c3 == 0.0 && chi && round_trip,
        format!(
            "rdet expansion {expansion}; commutators N=2 {c2}, N=3 {c3}; chi = kernel operator {chi}; kernel round trip {round_trip}"
        ),
    )
}

// ---------------------------------------------------------------- 4 and 5

/// Weight multiplicities of `L_λ` from semistandard tableaux.
fn character(lam: &Partition) -> HashMap<Vec<usize>, u64> {
    let n = lam.rank();
    let shape: Vec<usize> = lam.parts().iter().copied().filter(|&x| x > 0).collect();
    let cells: Vec<(usize, usize)> = shape
        .iter()
        .enumerate()
        .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
        .collect();
    let mut out = HashMap::new();
    let mut fill = vec![vec![0usize; shape.first().copied().unwrap_or(0)]; shape.len()];
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        fill: &mut Vec<Vec<usize>>,
        n: usize,
        out: &mut HashMap<Vec<usize>, u64>,
    ) {
        if k == cells.len() {
            let mut wt = vec![0; n];
            for &(r, c) in cells {
                wt[fill[r][c] - 1] += 1;
            }
            *out.entry(wt).or_insert(0) += 1;
            return;
        }
        let (r, c) = cells[k];
        let lo = if c > 0 { fill[r][c - 1] } else { 1 };
        let lo = if r > 0 { lo.max(fill[r - 1][c] + 1) } else { lo };
        for x in lo..=n {
            fill[r][c] = x;
            go(k + 1, cells, fill, n, out);
        }
    }
    go(0, &cells, &mut fill, n, &mut out);
    if cells.is_empty() {
        out.insert(vec![0; n], 1);
    }
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, sign) in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut next = p.clone();
            next.insert(pos, n - 1);
            let flips = (p.len() - pos) as i64;
            out.push((next, if flips % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

/// Multiplicity of `L_λ` in `⊗_s L_{λ^{(s)}}` from characters and the
/// Weyl alternation.
fn multiplicity(inst: &Instance) -> i64 {
    let n = inst.rank;
    let mut total: HashMap<Vec<usize>, u64> = HashMap::from([(vec![0; n], 1)]);
    for lam in &inst.lambdas {
        let ch = character(lam);
        let mut next = HashMap::new();
        for (a, ma) in &total {
            for (b, mb) in &ch {
                let w: Vec<usize> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                *next.entry(w).or_insert(0) += ma * mb;
            }
        }
        total = next;
    }
    let rho: Vec<i64> = (0..n).map(|i| (n - 1 - i) as i64).collect();
    let shifted: Vec<i64> = (0..n).map(|i| inst.lambda.part(i) as i64 + rho[i]).collect();
    let mut c = 0i64;
    for (p, sign) in permutations(n) {
        let wt: Vec<i64> = (0..n).map(|i| shifted[p[i]] - rho[i]).collect();
        if wt.iter().any(|&x| x < 0) {
            continue;
        }
        let key: Vec<usize> = wt.iter().map(|&x| x as usize).collect();
        c += sign * *total.get(&key).unwrap_or(&0) as i64;
    }
    c
}

fn closure_directions(seed: u64) -> (Vec<Vec<Vec<CFloat>>>, Vec<String>, bool, String) {
    let cfg = Config::with_precision(256);
    let mut dirs = Vec::new();
    let mut texts = Vec::new();
    let mut pass = true;
    let mut detail = Vec::new();
    for (inst, expected) in instances().iter().zip([2usize, 1, 1]) {
        let r = verify_bijection(inst, &Seeds::from_base(seed), &cfg).unwrap();
        let result = r.result.clone().unwrap();
        let count = result["spectrum"]["eigenvectors"].as_array().map_or(0, |a| a.len());
        let mut ws = Vec::new();
        for c in result["constructions"].as_array().unwrap() {
            let w = &c["construction"]["w"];
            let space = ModuleSpace::new(inst.rank, inst.points()).unwrap().to_cfloat(256);
            let mut v = vec![CFloat::new(256, 0.0, 0.0); space.dim()];
            if let Some(obj) = w.as_object() {
                for (key, val) in obj {
                    let j: Vec<usize> = key.split(',').map(|x| x.parse().unwrap()).collect();
                    let re = CFloat::parse_real(val["re"].as_str().unwrap(), 256).unwrap();
                    let im = CFloat::parse_real(val["im"].as_str().unwrap(), 256).unwrap();
                    v[space.index(&j)] = re + im * CFloat::new(256, 0.0, 1.0);
                }
            }
            ws.push(v);
        }
        let ok = r.pass() && count == expected;
        pass &= ok;
        detail.push(format!("{}: {count}/{expected} {}", inst.key(), if ok { "closed" } else { "OPEN" }));
        if !r.pass() {
            let failed: Vec<&str> = r.assertions.iter().filter(|a| !a.pass).map(|a| a.name.as_str()).collect();
            detail.push(format!("failed {failed:?}"));
        }
        dirs.push(ws);
        texts.push(r.to_json().to_string());
    }
    (dirs, texts, pass, detail.join("; "))
}

fn criterion_5() -> Outcome {
    let cfg = Config::with_precision(256);
    let mut pass = true;
    let mut detail = Vec::new();
    for (inst, expected) in instances().iter().zip([2i64, 1, 1]) {
        let oracle = multiplicity(inst);
        let r = completeness_report(inst, &Seeds::from_base(1), &cfg, false).unwrap();
        let res = r.result.clone().unwrap();
        let dim = res["dim"].as_i64().unwrap_or(-1);
        let found = res["eigenvectors"].as_i64().unwrap_or(-1);
        let ok = r.pass() && oracle == expected && dim == oracle && found == oracle;
        pass &= ok;
        detail.push(format!("{}: {found} eigenvectors, dim {dim}, oracle {oracle}", inst.key()));
    }
    outcome(pass, detail.join("; "))
}

// ---------------------------------------------------------------- 6

fn criterion_6(first: &[Vec<Vec<CFloat>>], first_texts: &[String]) -> Outcome {
    let (second, _, pass_b, _) = closure_directions(99);
    let mut worst = 1f64;
    let mut complete = true;
    for (a, b) in first.iter().zip(&second) {
        complete &= a.len() == b.len() && !a.is_empty();
        for w in a {
            let best = b.iter().map(|x| abs_cosine(w, x)).fold(0f64, f64::max);
            worst = worst.min(best);
        }
    }
    let (_, again, _, _) = closure_directions(1);
    let identical = again == first_texts;
    outcome(
        pass_b && complete && worst > 1.0 - 1e-6 && identical,
        format!("min |cos| across seeds {worst:.15}; identical seeds byte-identical {identical}"),
    )
}

fn report(n: usize, o: &Outcome, elapsed: Duration, limit: Duration) -> bool {
    let ok = o.pass && elapsed <= limit;
    println!(
        "criterion {n}: {} ({:.2?}, limit {:?}) {}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit,
        o.detail
    );
    ok
}

fn main() -> ExitCode {
    let mut all = true;

    let t = Instant::now();
    let o = criterion_1();
    all &= report(1, &o, t.elapsed(), Duration::from_secs(1));

    let t = Instant::now();
    let o = criterion_2();
    all &= report(2, &o, t.elapsed(), Duration::from_secs(180));

    let t = Instant::now();
    let o = criterion_3();
    all &= report(3, &o, t.elapsed(), Duration::from_secs(120));

    let t = Instant::now();
    let (dirs, texts, pass, detail) = closure_directions(1);
    all &= report(4, &outcome(pass, detail), t.elapsed(), Duration::from_secs(600));

    let t = Instant::now();
    let o = criterion_5();
    all &= report(5, &o, t.elapsed(), Duration::from_secs(600));

    let t = Instant::now();
    let o = criterion_6(&dirs, &texts);
    all &= report(6, &o, t.elapsed(), Duration::from_secs(1200));

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
