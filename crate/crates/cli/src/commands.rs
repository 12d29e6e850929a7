use msd_core::catalog::{builtin, builtin_names, resolve, serialize};
use msd_core::cost::{gamma_exponent, levels_and_cost, tau_exponent, CostQuery, Regime};
use msd_core::dynamics::*;
use msd_core::map::norm;
use msd_core::oracle::oracle_distill;
use msd_core::pauli::standard_form;
use msd_core::{Bloch, DistillationMap, MeasurementModel, StabilizerCode};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::output::{emit, json, num, opt, write_file, Csv, Provenance};
use crate::CliError;

/// Largest code the dense oracle accepts.
const ORACLE_MAX_QUBITS: usize = 10;

fn load(selector: &str) -> Result<(StabilizerCode, DistillationMap), CliError> {
    let code = resolve(selector)?;
    let map = DistillationMap::build(&code)?;
    if map.num_logical() == 0 {
        return Err(CliError::Usage(format!("code {selector} encodes no logical qubits")));
    }
    Ok((code, map))
}

fn check_feedback(sys: &SystemArgs, map: &DistillationMap) -> Result<(), CliError> {
    if sys.feedback >= map.num_logical() {
        return Err(CliError::Usage(format!("--feedback {} but the code has k = {}", sys.feedback, map.num_logical())));
    }
    Ok(())
}

pub fn iterate_cmd(a: &IterateArgs, prov: &Provenance) -> Result<(), CliError> {
    let (_, map) = load(&a.system.code)?;
    check_feedback(&a.system, &map)?;
    let p = a.model.single()?;
    let sys = a.system.policy(a.model.convention).system(&map, p.lambda);
    let opts = IterateOptions { tol: a.tol, max_iter: a.max_iter, record: true };
    let t = iterate(&sys, a.input.0, &opts)?;
    let text = match a.format {
        Format::Csv => {
            let mut csv = Csv::new(prov, &["step", "x", "y", "z", "p_succ"]);
            for (m, r) in t.points.iter().enumerate() {
                let p = t.success_probs.get(m).copied();
                csv.row(&[m.to_string(), num(r[0]), num(r[1]), num(r[2]), opt(p)]);
            }
            csv.comment(&format!("classification {:?} after {} steps", t.classification, t.steps));
            csv.finish()
        }
        Format::Json => json(prov, &json!({ "beta": p.beta, "lambda": p.lambda, "trajectory": t }))?,
    };
    emit(&a.out, &text)?;
    match t.error {
        Some(e) => Err(CliError::Numeric(e)),
        None => Ok(()),
    }
}

pub fn flow_cmd(a: &FlowArgs, prov: &Provenance) -> Result<(), CliError> {
    let (_, map) = load(&a.system.code)?;
    check_feedback(&a.system, &map)?;
    let p = a.model.single()?;
    if a.resolution < 2 {
        return Err(CliError::Usage("--resolution must be at least 2".into()));
    }
    let sys = a.system.policy(a.model.convention).system(&map, p.lambda);
    let spec = GridSpec { z: a.z, extent: a.extent, resolution: a.resolution };
    let opts = IterateOptions { tol: a.tol, max_iter: a.max_iter, record: false };
    let rows = flow_grid(&sys, &spec, &opts)?;
    let text = match a.format {
        Format::Csv => {
            let mut csv = Csv::new(prov, &["x", "y", "z", "x1", "y1", "z1", "p", "basin"]);
            for r in &rows {
                let img = r.image.map_or([None; 3], |v| v.map(Some));
                csv.row(&[
                    num(r.x),
                    num(r.y),
                    num(r.z),
                    opt(img[0]),
                    opt(img[1]),
                    opt(img[2]),
                    opt(r.success_probability),
                    r.basin.as_str().to_string(),
                ]);
            }
            csv.finish()
        }
        Format::Json => json(prov, &json!({ "beta": p.beta, "lambda": p.lambda, "grid": rows }))?,
    };
    emit(&a.out, &text)
}

pub fn threshold_cmd(a: &ThresholdArgs, prov: &Provenance) -> Result<(), CliError> {
    let (code, map) = load(&a.system.code)?;
    check_feedback(&a.system, &map)?;
    let opts = ThresholdOptions {
        beta_lo: a.beta_lo,
        beta_hi: a.beta_hi,
        tol_beta: a.tol,
        step: a.step,
        policy: a.system.policy(a.convention),
        ..Default::default()
    };
    let report = threshold(&map, &opts)?;
    emit(&a.out, &json(prov, &json!({ "code": code.name, "threshold": report }))?)
}

#[derive(Serialize)]
struct ScanRow {
    beta: f64,
    lambda: f64,
    location: Option<Bloch>,
    bias: Option<BiasDecomposition>,
    k_prime: Option<f64>,
    dominant_modulus: Option<f64>,
}

const SCAN_HEADER: [&str; 10] = ["beta", "lambda", "rx", "ry", "rz", "mx", "my", "zres", "k_prime", "dom_eig"];

fn scan_csv(prov: &Provenance, rows: &[ScanRow]) -> Csv {
    let mut csv = Csv::new(prov, &SCAN_HEADER);
    for r in rows {
        let loc = r.location.map_or([None; 3], |v| v.map(Some));
        csv.row(&[
            num(r.beta),
            num(r.lambda),
            opt(loc[0]),
            opt(loc[1]),
            opt(loc[2]),
            opt(r.bias.map(|b| b.m_x)),
            opt(r.bias.map(|b| b.m_y)),
            opt(r.bias.map(|b| b.z_residual)),
            opt(r.k_prime),
            opt(r.dominant_modulus),
        ]);
    }
    csv
}

#[derive(Serialize)]
struct Fits {
    m_x: Option<LogFit>,
    m_y: Option<LogFit>,
    distance: Option<LogFit>,
}

fn fits(points: &[DeviationPoint]) -> Fits {
    let beta: Vec<f64> = points.iter().map(|p| p.beta).collect();
    let t = t_direction();
    let series =
        |f: &dyn Fn(&DeviationPoint) -> f64| fit_log_slope(&beta, &points.iter().map(f).collect::<Vec<_>>()).ok();
    Fits {
        m_x: series(&|p| p.bias.m_x),
        m_y: series(&|p| p.bias.m_y),
        distance: series(&|p| norm([0, 1, 2].map(|i| p.location[i] - t[i]))),
    }
}

pub fn deviation_cmd(a: &DeviationArgs, prov: &Provenance) -> Result<(), CliError> {
    let (_, map) = load(&a.system.code)?;
    check_feedback(&a.system, &map)?;
    let points = a.model.points()?;
    if points.iter().any(|p| !p.beta.is_finite()) {
        return Err(CliError::Usage("deviation needs λ < 1 at every sweep point".into()));
    }
    // Non-Gaussian models enter through their equivalent β under λ = tanh β.
    let mut policy = a.system.policy(a.model.convention);
    if a.model.beta.is_none() {
        policy.convention = BetaConvention::Tanh;
    }
    let betas: Vec<f64> = points.iter().map(|p| p.beta).collect();
    let scan = deviation_scan(&map, &betas, policy)?;
    let rows: Vec<ScanRow> = scan
        .points
        .iter()
        .map(|p| ScanRow {
            beta: p.beta,
            lambda: p.lambda,
            location: Some(p.location),
            bias: Some(p.bias),
            k_prime: p.k_prime,
            dominant_modulus: Some(p.dominant_modulus),
        })
        .collect();
    let fit = a.fit.then(|| fits(&scan.points));
    let text = match a.format {
        Format::Csv => {
            let mut csv = scan_csv(prov, &rows);
            if let Some(f) = &fit {
                for (name, v) in [("mx", f.m_x), ("my", f.m_y), ("distance", f.distance)] {
                    match v {
                        Some(v) => csv.comment(&format!(
                            "fit {name} slope={} intercept={} r2={}",
                            v.slope, v.intercept, v.r_squared
                        )),
                        None => csv.comment(&format!("fit {name} unavailable")),
                    }
                }
            }
            if let Some(t) = &scan.truncated {
                csv.comment(&format!("truncated: {t}"));
            }
            csv.finish()
        }
        Format::Json => json(prov, &json!({ "points": rows, "fits": fit, "truncated": scan.truncated }))?,
    };
    emit(&a.out, &text)?;
    match scan.truncated {
        Some(t) => Err(CliError::Numeric(t)),
        None => Ok(()),
    }
}

pub fn convergence_cmd(a: &ConvergenceArgs, prov: &Provenance) -> Result<(), CliError> {
    let (_, map) = load(&a.system.code)?;
    check_feedback(&a.system, &map)?;
    let points = a.model.points()?;
    let policy = a.system.policy(a.model.convention);
    let reports: Vec<Result<ConvergenceReport, String>> = points
        .par_iter()
        .map(|p| convergence_rate(&policy.system(&map, p.lambda), a.input.0).map_err(|e| e.to_string()))
        .collect();
    let rows: Vec<ScanRow> = points
        .iter()
        .zip(&reports)
        .map(|(p, r)| match r {
            Ok(c) => ScanRow {
                beta: p.beta,
                lambda: p.lambda,
                location: Some(c.fixed_point),
                bias: Some(bias_decomposition(c.fixed_point)),
                k_prime: c.trajectory_estimate,
                dominant_modulus: Some(c.jacobian_modulus),
            },
            Err(_) => ScanRow {
                beta: p.beta,
                lambda: p.lambda,
                location: None,
                bias: None,
                k_prime: None,
                dominant_modulus: None,
            },
        })
        .collect();
    let text = match a.format {
        Format::Csv => {
            let mut csv = scan_csv(prov, &rows);
            for (p, r) in points.iter().zip(&reports) {
                match r {
                    Ok(c) if c.superlinear => {
                        csv.comment(&format!("lambda={} superlinear order={}", p.lambda, opt(c.order_estimate)))
                    }
                    Err(e) => csv.comment(&format!("lambda={} {e}", p.lambda)),
                    _ => {}
                }
            }
            csv.finish()
        }
        Format::Json => {
            let detail: Vec<_> =
                reports.iter().map(|r| r.as_ref().map_or_else(|e| json!({ "error": e }), |c| json!(c))).collect();
            json(prov, &json!({ "points": rows, "reports": detail }))?
        }
    };
    emit(&a.out, &text)?;
    match reports.as_slice() {
        [Err(e)] => Err(CliError::Numeric(e.clone())),
        _ => Ok(()),
    }
}

pub fn cost_cmd(a: &CostArgs, prov: &Provenance) -> Result<(), CliError> {
    let code = a.code.as_deref().map(load).transpose()?;
    let (n, k) = match (&code, a.n, a.k) {
        (Some((c, _)), None, None) => (c.n, c.k),
        (None, Some(n), Some(k)) => (n, k),
        _ => return Err(CliError::Usage("give either --code or both --n and --k".into())),
    };
    let mut measured = None;
    let regime = match (a.k_prime, a.d, &code) {
        (Some(k_prime), None, _) => Regime::Linear { k_prime },
        (None, Some(d), _) => Regime::Ideal { d, c: a.c },
        (None, None, Some((_, map))) if a.model.is_set() => {
            let p = a.model.single()?;
            let sys = msd_core::System::new(map, p.lambda);
            let rate = convergence_rate(&sys, depolarized_t(0.01))?;
            let Some(k_prime) = rate.trajectory_estimate else {
                return Err(CliError::Numeric(format!(
                    "no linear rate at lambda={} (superlinear convergence)",
                    p.lambda
                )));
            };
            measured = Some(rate);
            Regime::Linear { k_prime }
        }
        _ => return Err(CliError::Usage("give --k-prime, --d, or --code with a model value".into())),
    };
    let report = levels_and_cost(&CostQuery { n, k, eps_raw: a.eps_raw, eps_target: a.eps, regime })?;
    let (gamma, tau) = match regime {
        Regime::Linear { k_prime } => (None, Some(tau_exponent(n, k, k_prime)?)),
        Regime::Ideal { d, .. } => (Some(gamma_exponent(n, k, d)?), None),
    };
    let body = json!({ "cost": report, "gamma": gamma, "tau": tau, "measured_rate": measured });
    emit(&a.out, &json(prov, &body)?)
}

pub fn standard_form_cmd(a: &StandardFormArgs, prov: &Provenance) -> Result<(), CliError> {
    let code = resolve(&a.code)?;
    let h = code.parity_check();
    let sf = standard_form(&h)?;
    let strings = |v: &[msd_core::PauliOperator]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let supports: Vec<Vec<usize>> =
        sf.destabilizers.iter().map(|d| (0..code.n).filter(|&q| d.support() >> q & 1 == 1).collect()).collect();
    let weight_one = sf.destabilizers.iter().all(|d| d.weight() == 1);
    let mut seen: Vec<usize> = supports.iter().flatten().copied().collect();
    seen.sort_unstable();
    let distinct = seen.windows(2).all(|w| w[0] != w[1]);
    let destabilizers_pair = sf.destabilizers.iter().enumerate().all(|(i, d)| {
        sf.matrix.rows().iter().enumerate().all(|(j, g)| g.commutes(d).map(|c| c != (i == j)).unwrap_or(false))
    });
    let body = json!({
        "code": code.name,
        "n": code.n,
        "k": code.k,
        "rank_r": sf.rank_r,
        "qubit_permutation": sf.qubit_permutation,
        "generators": strings(sf.matrix.rows()),
        "logical_x": strings(&sf.logical_x),
        "logical_z": strings(&sf.logical_z),
        "destabilizers": strings(&sf.destabilizers),
        "destabilizer_supports": supports,
        "checks": {
            "block_structure": sf.block_structure_holds(),
            "replay_matches": sf.replay(&h) == sf.matrix,
            "destabilizers_weight_one": weight_one,
            "destabilizer_supports_distinct": distinct,
            "destabilizers_pair_with_generators": destabilizers_pair,
        },
    });
    if let Some(path) = &a.code_out {
        let converted = code.to_standard_form()?;
        write_file(
            &crate::output::resolve_path(&OutputArgs { output: Some(path.clone()) }).expect("path given"),
            &serialize(&converted),
        )?;
    }
    emit(&a.out, &json(prov, &body)?)
}

pub fn oracle_cmd(a: &OracleArgs, prov: &Provenance) -> Result<(), CliError> {
    let codes: Vec<StabilizerCode> = if a.code.is_empty() {
        builtin_names()
            .map(builtin)
            .filter(|c| c.as_ref().map_or(true, |c| c.n <= ORACLE_MAX_QUBITS))
            .collect::<Result<_, _>>()?
    } else {
        a.code.iter().map(|s| resolve(s)).collect::<Result<_, _>>()?
    };
    if let Some(c) = codes.iter().find(|c| c.n > ORACLE_MAX_QUBITS) {
        return Err(CliError::Usage(format!(
            "{} has n = {} > {ORACLE_MAX_QUBITS}; the dense oracle is limited to small codes",
            c.name, c.n
        )));
    }
    let inputs: [(&str, Bloch); 5] = [
        ("origin", [0.0, 0.0, 0.0]),
        ("interior", [0.3, 0.2, 0.1]),
        ("mixed-signs", [-0.5, 0.4, 0.6]),
        ("boundary", [0.6, 0.0, 0.8]),
        ("depolarized-T", depolarized_t(0.1)),
    ];
    let lambdas = [0.0, 0.3, 0.7, 1.0];
    let cases: Vec<(usize, f64, usize)> = (0..codes.len())
        .flat_map(|c| lambdas.iter().flat_map(move |&l| (0..inputs.len()).map(move |i| (c, l, i))))
        .collect();
    let maps: Vec<DistillationMap> = codes.iter().map(DistillationMap::build).collect::<Result<_, _>>()?;
    let results: Vec<Result<f64, String>> = cases
        .par_iter()
        .map(|&(c, lambda, i)| {
            let r = inputs[i].1;
            let model = MeasurementModel::raw_lambda(lambda).map_err(|e| e.to_string())?;
            let a = maps[c].evaluate(r, lambda).map_err(|e| e.to_string())?;
            let b = oracle_distill(&codes[c], &vec![r; codes[c].n], &model).map_err(|e| e.to_string())?;
            let p = (a.success_probability - b.success_probability).abs();
            Ok(a.state.expectations.iter().zip(&b.state.expectations).map(|(x, y)| (x - y).abs()).fold(p, f64::max))
        })
        .collect();
    let mut csv = Csv::new(prov, &["code", "lambda", "input", "max_diff", "pass"]);
    let mut failures = 0;
    for (&(c, lambda, i), res) in cases.iter().zip(&results) {
        let (diff, pass) = match res {
            Ok(d) => (num(*d), *d <= a.tol),
            Err(e) => (format!("error: {e}"), false),
        };
        failures += usize::from(!pass);
        csv.row(&[codes[c].name.clone(), num(lambda), inputs[i].0.to_string(), diff, pass.to_string()]);
    }
    csv.comment(&format!("{} of {} cases within {}", cases.len() - failures, cases.len(), a.tol));
    emit(&a.out, &csv.finish())?;
    if failures > 0 {
        return Err(CliError::Check(format!("{failures} oracle cases exceed tolerance {}", a.tol)));
    }
    Ok(())
}
