use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use monodromy_core::certify::{certify_surface, faltings_proxy, height_naive_int, HeightProvenance};
use monodromy_core::curves::{count_points, parse_curve_file, weil_polynomial, HyperellipticCurve};
use monodromy_core::galois::{
    cycle_type_witnesses, exceptional_prime_norm, intpoly, quartic_galois_group, weil_galois_is_d4,
    QuarticGaloisLabel,
};
use monodromy_core::grouplab::{
    diagonal_z2_case, lifting_check, matrix_closure, perfectness_check, sl2_product_case, ClosureOptions,
};
use monodromy_core::modarith::IntPoly;
use monodromy_core::sieve::{
    density_scan, equidistribution_sample, large_sieve_l, sieve_bound, DensityScanConfig, FamilySpec,
    SamplePredicate, SieveParams,
};
use monodromy_core::symplectic::{
    commutator_span, group_commutator_congruence, group_order, sp_generators, GroupKind, IntMatrix, MatrixCodec,
    SympMatrix,
};

use crate::config::RunConfig;
use crate::errors::ErrorCode;
use crate::CliError;

/// What a command hands back: the result document, its CSV rows, and the
/// first failure if the document records one.
pub struct Outcome {
    pub result: Value,
    pub rows: Vec<Map<String, Value>>,
    pub failure: Option<CliError>,
}

impl Outcome {
    fn ok(result: Value, rows: Vec<Map<String, Value>>) -> Self {
        Self {
            result,
            rows,
            failure: None,
        }
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("rows are objects"),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn closure_opts(cfg: &RunConfig) -> ClosureOptions {
    ClosureOptions {
        cap: cfg.closure_cap,
        parallel: cfg.jobs > 1,
    }
}

// ---------------------------------------------------------------- group-verify

pub const CHECKS: [&str; 6] = ["orders", "commutator-span", "commutator-congruence", "product-closure", "lifting", "perfectness"];

type Check = Result<(bool, Value), CliError>;

fn check_orders(cfg: &RunConfig) -> Check {
    let mut cases = Vec::new();
    let mut ok = true;
    for (g, ell) in [(1usize, 2u64), (1, 3), (1, 5), (2, 2)] {
        let codec = MatrixCodec::new(2 * g, ell).map_err(CliError::from)?;
        let gens: Vec<_> = sp_generators(g, ell).into_iter().map(SympMatrix::into_matrix).collect();
        let enumerated = matrix_closure(&codec, &gens, closure_opts(cfg))?.order();
        let formula = group_order(g, ell, GroupKind::Sp)?;
        let agree = formula == enumerated.into();
        ok &= agree;
        cases.push(json!({"g": g, "ell": ell, "enumerated": enumerated, "formula": formula.to_string(), "agree": agree}));
    }
    Ok((ok, Value::Array(cases)))
}

fn check_commutator_span(_: &RunConfig) -> Check {
    let mut cases = Vec::new();
    let mut ok = true;
    for g in [1usize, 2] {
        for ell in [3u64, 5, 7] {
            let span = commutator_span(g, ell)?;
            ok &= span.is_full();
            cases.push(json!({"g": g, "modulus": ell, "length": span.length, "full_length": span.full_length, "full": span.is_full()}));
        }
        let span = commutator_span(g, 4)?;
        let contains = span.contains_twice_mod2_algebra();
        ok &= contains;
        cases.push(json!({"g": g, "modulus": 4, "length": span.length, "contains_twice_mod2_algebra": contains}));
    }
    Ok((ok, Value::Array(cases)))
}

fn check_commutator_congruence(cfg: &RunConfig) -> Check {
    let samples = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures = Vec::new();
    for i in 0..samples {
        let g = rng.gen_range(1..=2usize);
        let ell = [3u64, 5, 7][rng.gen_range(0..3)];
        let m = rng.gen_range(1..=3u32);
        let n = rng.gen_range(1..=m);
        let dim = 2 * g;
        let mut draw = || IntMatrix::new(dim, (0..dim * dim).map(|_| rng.gen_range(-50..=50)).collect());
        let (u, v) = (draw()?, draw()?);
        if !group_commutator_congruence(ell, n, m, &u, &v, 1)?.holds {
            failures.push(json!({"sample": i, "g": g, "ell": ell, "n": n, "m": m}));
        }
    }
    Ok((failures.is_empty(), json!({"samples": samples, "failures": failures})))
}

fn check_product_closure(cfg: &RunConfig) -> Check {
    let diag = diagonal_z2_case(closure_opts(cfg))?;
    let prod = sl2_product_case(5, 7, closure_opts(cfg))?;
    let ok = diag.projections_surjective == (true, true)
        && !diag.closure_is_full_product
        && prod.projections_surjective == (true, true)
        && prod.closure_is_full_product;
    Ok((ok, json!({"diagonal_z2": to_value(&diag), "sl2_f5_x_sl2_f7": to_value(&prod)})))
}

fn check_lifting(cfg: &RunConfig) -> Check {
    let mut cases = Vec::new();
    let mut ok = true;
    for (g, ell) in [(2usize, 2u64), (1, 5)] {
        let r = lifting_check(g, ell, 2, cfg.trials, cfg.seed, closure_opts(cfg))?;
        ok &= r.passed();
        cases.push(to_value(&r));
    }
    Ok((ok, Value::Array(cases)))
}

fn check_perfectness(cfg: &RunConfig) -> Check {
    let mut cases = Vec::new();
    let mut ok = true;
    // Sp_2(F_3) is the one non-perfect group among these
    for (g, ell, expect) in [(1usize, 3u64, false), (1, 5, true), (1, 7, true), (2, 3, true)] {
        let r = perfectness_check(g, ell, cfg.seed, closure_opts(cfg))?;
        ok &= r.perfect == expect;
        let mut v = to_value(&r);
        v["expected_perfect"] = json!(expect);
        cases.push(v);
    }
    Ok((ok, Value::Array(cases)))
}

pub fn group_verify(cfg: &RunConfig, only: &[String]) -> Result<Outcome, CliError> {
    for name in only {
        if !CHECKS.contains(&name.as_str()) {
            return Err(CliError::usage(format!("unknown check {name:?}; known: {}", CHECKS.join(", "))));
        }
    }
    let runners: [fn(&RunConfig) -> Check; 6] = [
        check_orders,
        check_commutator_span,
        check_commutator_congruence,
        check_product_closure,
        check_lifting,
        check_perfectness,
    ];
    let mut checks = Map::new();
    let mut rows = Vec::new();
    let mut first_failure = None;
    for (name, run) in CHECKS.iter().zip(runners) {
        if !only.is_empty() && !only.iter().any(|o| o == name) {
            continue;
        }
        let (passed, detail) = run(cfg).map_err(|e| e.context(format!("check {name}")))?;
        if !passed && first_failure.is_none() {
            first_failure = Some(name.to_string());
        }
        rows.push(obj(json!({"check": name, "passed": passed})));
        checks.insert(name.to_string(), json!({"passed": passed, "detail": detail}));
    }
    let result = json!({
        "all_passed": first_failure.is_none(),
        "checks": checks,
        "first_failure": first_failure,
    });
    let failure = first_failure.map(|n| CliError::new(ErrorCode::CheckFailed, format!("check {n} failed")));
    Ok(Outcome { result, rows, failure })
}

// ---------------------------------------------------------------- curves

pub struct CurveSource {
    pub file: Option<PathBuf>,
    pub inline: Option<String>,
}

pub fn load_curves(src: &CurveSource) -> Result<Vec<HyperellipticCurve>, CliError> {
    let text = match (&src.file, &src.inline) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(line)) => line.clone(),
        _ => return Err(CliError::usage("give exactly one of --curves FILE or --curve \"a0 a1 ...\"")),
    };
    let curves = parse_curve_file(&text)?;
    if curves.is_empty() {
        return Err(CliError::usage("no curves in input"));
    }
    Ok(curves)
}

fn curve_text(c: &HyperellipticCurve) -> String {
    c.to_line()
}

/// Runs `per_curve` on every curve, recording errors in place so that one
/// bad curve does not hide the results for the others.
fn per_curve_outcome(
    curves: &[HyperellipticCurve],
    mut per_curve: impl FnMut(&HyperellipticCurve) -> Result<(Value, Map<String, Value>), CliError>,
    extra: Map<String, Value>,
) -> Outcome {
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    let mut failure = None;
    for (i, c) in curves.iter().enumerate() {
        let mut row = obj(json!({"index": i, "curve": curve_text(c)}));
        let entry = match per_curve(c) {
            Ok((mut v, cells)) => {
                row.extend(cells);
                v["index"] = json!(i);
                v["curve"] = json!(curve_text(c));
                v
            }
            Err(e) => {
                row.insert("error".into(), json!(e.message));
                let v = json!({"index": i, "curve": curve_text(c), "error": e.message, "exit_code": e.code.exit_code()});
                if failure.is_none() {
                    failure = Some(e.context(format!("curve {i} ({})", curve_text(c))));
                }
                v
            }
        };
        entries.push(entry);
        rows.push(row);
    }
    let mut result = extra;
    result.insert("curves".into(), Value::Array(entries));
    Outcome {
        result: Value::Object(result),
        rows,
        failure,
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn charpoly(curves: &[HyperellipticCurve], p: u64) -> Outcome {
    per_curve_outcome(
        curves,
        |c| {
            let w = weil_polynomial(c, p)?;
            let counts = (1..=c.genus() as u32)
                .map(|r| count_points(c, p, r))
                .collect::<Result<Vec<_>, _>>()?;
            let v = json!({
                "p": p,
                "genus": c.genus(),
                "weil_polynomial": w.coeffs(),
                "point_counts": counts,
                "functional_equation": w.functional_equation_holds(),
                "root_modulus_deviation": w.root_modulus_deviation(),
            });
            let row = obj(json!({"p": p, "weil_polynomial": join(w.coeffs()), "point_counts": join(&counts)}));
            Ok((v, row))
        },
        obj(json!({"p": p})),
    )
}

fn label_value(label: &QuarticGaloisLabel) -> Value {
    json!({
        "group": label.group.name(),
        "order": label.group.order(),
        "discriminant": label.discriminant.to_string(),
        "discriminant_is_square": label.discriminant_is_square,
        "resolvent_roots": label.resolvent_roots.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

pub fn galois_quartic(coeffs: &str) -> Result<Outcome, CliError> {
    let poly = parse_poly(coeffs)?;
    let label = quartic_galois_group(&poly)?;
    let mut result = label_value(&label);
    result["polynomial"] = json!(coeffs.split_whitespace().collect::<Vec<_>>().join(" "));
    let row = obj(json!({"polynomial": result["polynomial"].clone(), "group": label.group.name()}));
    Ok(Outcome::ok(result, vec![row]))
}

pub fn galois_curves(curves: &[HyperellipticCurve], p: u64) -> Outcome {
    per_curve_outcome(
        curves,
        |c| {
            let w = weil_polynomial(c, p)?;
            let (is_d4, label) = weil_galois_is_d4(&w)?;
            let mut v = label_value(&label);
            v["weil_polynomial"] = json!(w.coeffs());
            v["is_d4"] = json!(is_d4);
            v["p"] = json!(p);
            let mut row = obj(json!({"p": p, "group": label.group.name()}));
            if is_d4 {
                let n = exceptional_prime_norm(&w)?;
                v["exceptional_norm"] = json!({
                    "value": n.value.to_string(),
                    "prime_divisors": n.prime_divisors,
                    "cofactor": n.cofactor.to_string(),
                    "precision_bits": n.precision_bits,
                });
                row.insert("exceptional_norm".into(), json!(n.value.to_string()));
            }
            Ok((v, row))
        },
        obj(json!({"p": p})),
    )
}

pub fn certify(
    curves: &[HyperellipticCurve],
    cfg: &RunConfig,
    height: Option<f64>,
    use_proxy: bool,
) -> Result<Outcome, CliError> {
    if use_proxy && height.is_some() {
        return Err(CliError::usage("--height and --faltings-proxy are exclusive"));
    }
    let limit = cfg.prime_limit;
    let out = per_curve_outcome(
        curves,
        |c| {
            let (h, provenance) = if use_proxy {
                let ht = height_naive_int(c.coeffs())?;
                let ht: f64 = ht.to_string().parse().expect("integer text parses as f64");
                (faltings_proxy(ht, cfg.c0, cfg.d0)?, HeightProvenance::FaltingsProxy)
            } else {
                (height.unwrap_or(1.0), HeightProvenance::Supplied)
            };
            let cert = certify_surface(c, h, provenance, limit)?;
            let row = obj(json!({
                "witness_prime": cert.witness_prime,
                "ln_b": cert.ln_b,
                "ln_threshold": cert.ln_threshold,
                "group": cert.galois_label.name(),
            }));
            Ok((json!({"certificate": to_value(&cert)}), row))
        },
        obj(json!({"prime_search_limit": limit})),
    );
    Ok(out)
}

// ---------------------------------------------------------------- modulus

fn parse_poly(text: &str) -> Result<IntPoly, CliError> {
    let coeffs = text
        .split_whitespace()
        .map(|t| t.parse::<i64>().map_err(|e| CliError::usage(format!("coefficient {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coeffs.is_empty() {
        return Err(CliError::usage("empty polynomial"));
    }
    Ok(intpoly(&coeffs))
}

pub fn load_polys(file: Option<&PathBuf>, inline: Option<&str>) -> Result<Vec<String>, CliError> {
    let text = match (file, inline) {
        (Some(path), None) => std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?,
        (None, Some(s)) => s.to_string(),
        _ => return Err(CliError::usage("give exactly one of --poly FILE or --coeffs \"c0 c1 ...\"")),
    };
    let lines: Vec<String> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(CliError::usage("no polynomial in input"));
    }
    Ok(lines)
}

pub fn modulus(polys: &[String], cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for (i, text) in polys.iter().enumerate() {
        let poly = parse_poly(text)?;
        let w = cycle_type_witnesses(&poly, cfg.c, cfg.witness_bound)
            .map_err(|e| CliError::from(e).context(format!("polynomial {i} ({text})")))?;
        for wit in &w.witnesses {
            rows.push(obj(json!({
                "index": i,
                "polynomial": text,
                "pattern": join(&wit.pattern),
                "prime": wit.prime,
                "modulus": w.modulus.to_string(),
            })));
        }
        entries.push(json!({
            "polynomial": text,
            "witnesses": to_value(&w.witnesses),
            "requested_patterns": w.requested_patterns,
            "modulus": w.modulus.to_string(),
        }));
    }
    let result = json!({"C": cfg.c, "bound": cfg.witness_bound, "polynomials": entries});
    Ok(Outcome::ok(result, rows))
}

// ---------------------------------------------------------------- sieve

pub fn parse_omega(text: &str) -> Result<Vec<(u64, f64)>, CliError> {
    text.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (p, w) = t
                .split_once(':')
                .ok_or_else(|| CliError::usage(format!("omega entry {t:?} is not p:value")))?;
            let p = p.trim().parse().map_err(|e| CliError::usage(format!("omega prime {p:?}: {e}")))?;
            let w = w.trim().parse().map_err(|e| CliError::usage(format!("omega value {w:?}: {e}")))?;
            Ok((p, w))
        })
        .collect()
}

pub struct SieveArgs {
    pub b: f64,
    pub q: f64,
    pub r: u32,
    pub degree: u32,
    pub omega_uniform: Option<f64>,
    pub omega: Option<String>,
}

pub fn sieve(args: &SieveArgs) -> Result<Outcome, CliError> {
    let omega = match (args.omega_uniform, &args.omega) {
        (Some(w), None) => SieveParams::uniform_omega(w, args.q.max(0.0) as u64),
        (None, Some(list)) => parse_omega(list)?.into_iter().collect(),
        (None, None) => Default::default(),
        (Some(_), Some(_)) => return Err(CliError::usage("--omega-uniform and --omega are exclusive")),
    };
    let mut params = SieveParams::new(args.b, args.q, args.r, omega)?;
    params.degree = args.degree;
    let bound = sieve_bound(&params)?;
    let l = large_sieve_l(&params);
    let result = json!({
        "B": params.b,
        "Q": params.q,
        "r": params.r,
        "degree": params.degree,
        "omega": params.omega.iter().map(|(p, w)| json!([p, w])).collect::<Vec<_>>(),
        "L": l,
        "bound": bound,
    });
    let row = obj(json!({"B": params.b, "Q": params.q, "r": params.r, "degree": params.degree, "L": l, "bound": bound}));
    Ok(Outcome::ok(result, vec![row]))
}

// ---------------------------------------------------------------- scan, sample

pub fn scan(family: &str, b: f64, ells: &[u64], p_max: u64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let family: FamilySpec = family.parse()?;
    let mut sc = DensityScanConfig::new(b, ells.to_vec(), p_max, cfg.seed);
    sc.member_budget = cfg.member_budget;
    sc.parallel = cfg.jobs > 1;
    let report = density_scan(&family, &sc)?;
    let rows = report
        .members
        .iter()
        .map(|m| {
            let mut row = obj(to_value(m));
            row.insert("free".into(), json!(join(&m.free)));
            row
        })
        .collect();
    Ok(Outcome::ok(to_value(&report), rows))
}

pub fn parse_predicate(text: &str) -> Result<SamplePredicate, CliError> {
    let bad = || CliError::usage(format!("predicate {text:?}: expected d4, always, never or pattern:ELL:D1+D2+..."));
    match text {
        "d4" => Ok(SamplePredicate::D4),
        "always" => Ok(SamplePredicate::Always),
        "never" => Ok(SamplePredicate::Never),
        _ => {
            let rest = text.strip_prefix("pattern:").ok_or_else(bad)?;
            let (ell, degrees) = rest.split_once(':').ok_or_else(bad)?;
            let ell = ell.parse().map_err(|_| bad())?;
            let degrees = degrees
                .split('+')
                .map(|d| d.parse().map_err(|_| bad()))
                .collect::<Result<Vec<usize>, _>>()?;
            Ok(SamplePredicate::Pattern { ell, degrees })
        }
    }
}

pub fn sample(family: &str, p: u64, predicate: &str, samples: usize, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let family: FamilySpec = family.parse()?;
    let pred = parse_predicate(predicate)?;
    let report = equidistribution_sample(&family, p, &pred, samples, cfg.seed)?;
    let mut result = to_value(&report);
    result["family"] = json!(family.to_template());
    result["predicate"] = to_value(&pred);
    let sigma = (report.fraction * (1.0 - report.fraction) / samples as f64).sqrt();
    result["three_sigma"] = json!(3.0 * sigma);
    let row = obj(json!({
        "p": p,
        "samples": samples,
        "hits": report.hits,
        "fraction": report.fraction,
        "seed": report.seed,
    }));
    Ok(Outcome::ok(result, vec![row]))
}
