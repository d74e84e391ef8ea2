//! Command-line front end: build connections and Hamiltonians, run the
//! exact-identity verification suites, trace the coordinate correspondence,
//! and integrate the flows numerically as a demonstration.
//!
//! Exit codes: 0 success, 1 failed identity, 2 usage or validation error,
//! 3 numeric abort (NaN during the floating-point demo).

use std::collections::BTreeMap;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use painlax_core::algebra::Rat;
use painlax_core::connection::IrregularTimes;
use painlax_core::correspondence::{
    geometric_forward, isospectral_flow_rates, lax_forward, map_qp_to_uv, map_uv_to_qp,
    solve_isospectral_u, solve_isospectral_v,
};
use painlax_core::deformation::{flow_rates, DeformationVector};
use painlax_core::oper::Chart;
use painlax_core::reduction::{painleve_one_symbolic, reduced_hamiltonian, reduced_oper_coeffs};
use painlax_core::suite::{run_suite, SuiteReport, SUITE_NAMES};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "painlax",
    version,
    about = "Exact arithmetic for twisted rank-2 connections and the Painlevé I hierarchy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Hamiltonians and, for the first hierarchy member, the
    /// eliminated second-order flow
    Hamiltonian(CommonArgs),
    /// Run the exact-identity suites
    Verify(VerifyArgs),
    /// Chart chain (q,p) → (Q,P) → (Q,R) → (u,v) with the shift polynomials
    Correspond(CommonArgs),
    /// Floating-point RK4 demonstration of the flows
    FlowDemo(FlowArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// pole order r∞ (≥ 3)
    #[arg(long = "r-inf")]
    r_inf: Option<usize>,
    /// isomonodromic times τ₁,…,τ_g (canonical slice mode)
    #[arg(long, value_delimiter = ',')]
    tau: Option<Vec<String>>,
    /// explicit irregular times t∞,1,…,t∞,2r∞−2 (overrides --tau)
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<String>>,
    /// apparent singularities q₁,…,q_g
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<String>>,
    /// dual coordinates p₁,…,p_g
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<String>>,
    /// deformation scale ħ
    #[arg(long)]
    hbar: Option<String>,
    /// doubled truncation order for series expansions
    #[arg(long)]
    order: Option<i64>,
    /// seed for randomized sweeps
    #[arg(long)]
    seed: Option<u64>,
    /// pretty-print the JSON report
    #[arg(long)]
    pretty: bool,
    /// emit compact JSON (default)
    #[arg(long)]
    json: bool,
    /// flat key=value file supplying defaults for any flag
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// suite to run: gauge | zero-curvature | reduction | correspondence | all
    #[arg(long)]
    suite: Option<String>,
    /// random charts per pole order
    #[arg(long)]
    cases: Option<usize>,
}

#[derive(Args)]
struct FlowArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// number of RK4 steps
    #[arg(long)]
    steps: Option<usize>,
    /// RK4 step size
    #[arg(long = "step-size")]
    step_size: Option<f64>,
    /// isomonodromic direction index (1-based)
    #[arg(long)]
    direction: Option<usize>,
    /// integrate the isospectral flow instead of the Hamiltonian flow
    #[arg(long)]
    isospectral: bool,
}

fn fail_usage(msg: &str) -> ExitCode {
    let err = json!({"error": msg});
    eprintln!("{err}");
    ExitCode::from(2)
}

/// Resolved run configuration; embedded into every report.
#[derive(Clone, Serialize)]
struct RunConfig {
    r_inf: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<Vec<Rat>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    times: Option<Vec<Rat>>,
    q: Vec<Rat>,
    p: Vec<Rat>,
    hbar: Rat,
    order: i64,
    seed: u64,
}

struct Resolved {
    config: RunConfig,
    times: IrregularTimes,
    chart: Chart,
    pretty: bool,
}

fn read_config_file(path: &str) -> Result<BTreeMap<String, String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
    let mut map = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("{path}:{}: expected key=value", lineno + 1));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_rat_list(values: &[String]) -> Result<Vec<Rat>, String> {
    values
        .iter()
        .flat_map(|chunk| chunk.split(','))
        .filter(|s| !s.trim().is_empty())
        .map(|s| Rat::parse(s).map_err(|e| e.to_string()))
        .collect()
}

fn split_config_list(raw: &str) -> Vec<String> {
    raw.split(',').map(|s| s.trim().to_string()).collect()
}

/// Merge flags over the config file (flags win) and build the run state.
fn resolve(args: &CommonArgs) -> Result<Resolved, String> {
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    let from_file = |key: &str| file.get(key).cloned();
    let r_inf = match args.r_inf {
        Some(r) => r,
        None => from_file("r-inf")
            .or_else(|| from_file("r_inf"))
            .ok_or("missing --r-inf")?
            .parse::<usize>()
            .map_err(|e| format!("bad r-inf: {e}"))?,
    };
    if r_inf < 3 {
        return Err("r-inf must be at least 3".into());
    }
    let hbar = match &args.hbar {
        Some(h) => Rat::parse(h).map_err(|e| e.to_string())?,
        None => match from_file("hbar") {
            Some(h) => Rat::parse(&h).map_err(|e| e.to_string())?,
            None => Rat::one(),
        },
    };
    let list = |flag: &Option<Vec<String>>, key: &str| -> Result<Option<Vec<Rat>>, String> {
        match flag {
            Some(v) => Ok(Some(parse_rat_list(v)?)),
            None => match from_file(key) {
                Some(raw) => Ok(Some(parse_rat_list(&split_config_list(&raw))?)),
                None => Ok(None),
            },
        }
    };
    let tau = list(&args.tau, "tau")?;
    let times_vec = list(&args.times, "times")?;
    let q = list(&args.q, "q")?.unwrap_or_default();
    let p = list(&args.p, "p")?.unwrap_or_default();
    if q.len() != r_inf - 3 || p.len() != r_inf - 3 {
        return Err(format!(
            "expected {} coordinates in --q and --p, got {} and {}",
            r_inf - 3,
            q.len(),
            p.len()
        ));
    }
    let times = match (&times_vec, &tau) {
        (Some(t), _) => IrregularTimes::new(r_inf, t.clone(), hbar.clone())
            .map_err(|e| e.to_string())?,
        (None, Some(tv)) => IrregularTimes::canonical(r_inf, tv, hbar.clone())
            .map_err(|e| e.to_string())?,
        (None, None) => {
            // default to the canonical slice with all isomonodromic times zero
            IrregularTimes::canonical(r_inf, &vec![Rat::zero(); r_inf - 3], hbar.clone())
                .map_err(|e| e.to_string())?
        }
    };
    let chart = Chart::qp(q.clone(), p.clone()).map_err(|e| e.to_string())?;
    let order = args
        .order
        .or_else(|| from_file("order").and_then(|s| s.parse().ok()))
        .unwrap_or_else(|| painlax_core::connection::default_order2(r_inf));
    let seed = args
        .seed
        .or_else(|| from_file("seed").and_then(|s| s.parse().ok()))
        .unwrap_or(42);
    Ok(Resolved {
        config: RunConfig {
            r_inf,
            tau: tau.clone(),
            times: times_vec,
            q,
            p,
            hbar,
            order,
            seed,
        },
        times,
        chart,
        pretty: args.pretty,
    })
}

fn emit(value: &serde_json::Value, pretty: bool) {
    if pretty {
        println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
    } else {
        println!("{}", serde_json::to_string(value).expect("serializable"));
    }
}

fn cmd_hamiltonian(args: &CommonArgs) -> ExitCode {
    let resolved = match resolve(args) {
        Ok(r) => r,
        Err(e) => return fail_usage(&e),
    };
    let r = resolved.config.r_inf;
    if !resolved.times.is_canonical_slice() {
        return fail_usage("hamiltonian requires canonical-slice times (use --tau)");
    }
    let tau = resolved.times.tau();
    let run = || -> painlax_core::Result<serde_json::Value> {
        let h = reduced_oper_coeffs(&tau, &resolved.chart, resolved.times.hbar())?;
        let mut hams = serde_json::Map::new();
        for j in 1..=r.saturating_sub(3) {
            let ham = reduced_hamiltonian(&tau, &resolved.chart, j, resolved.times.hbar())?;
            hams.insert(format!("tau_{j}"), json!(ham.to_string()));
        }
        let mut out = json!({
            "version": VERSION,
            "config": resolved.config,
            "seed": resolved.config.seed,
            "oper_coeffs": h.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "hamiltonians": hams,
        });
        if r == 3 {
            out["note"] = json!("g=0: Airy case, no coordinates");
        }
        if r == 4 {
            let (ham, qddot) = painleve_one_symbolic()?;
            out["painleve_one"] = json!({
                "hamiltonian": ham.to_string(),
                "second_order_flow": format!("qddot = {qddot}"),
            });
        }
        Ok(out)
    };
    match run() {
        Ok(v) => {
            emit(&v, resolved.pretty);
            ExitCode::SUCCESS
        }
        Err(e) => fail_usage(&e.to_string()),
    }
}

fn cmd_verify(args: &VerifyArgs) -> ExitCode {
    let file = match &args.common.config {
        Some(path) => match read_config_file(path) {
            Ok(f) => f,
            Err(e) => return fail_usage(&e),
        },
        None => BTreeMap::new(),
    };
    let suite = match args.suite.clone().or_else(|| file.get("suite").cloned()) {
        Some(s) if !s.is_empty() => s,
        _ => {
            return fail_usage(
                "missing --suite (gauge | zero-curvature | reduction | correspondence | all)",
            )
        }
    };
    let cases = args
        .cases
        .or_else(|| file.get("cases").and_then(|s| s.parse().ok()))
        .unwrap_or(20);
    let seed = args
        .common
        .seed
        .or_else(|| file.get("seed").and_then(|s| s.parse().ok()))
        .unwrap_or(42);
    let pretty = args.common.pretty;
    let names: Vec<&str> = if suite == "all" {
        SUITE_NAMES.to_vec()
    } else if SUITE_NAMES.contains(&suite.as_str()) {
        vec![SUITE_NAMES
            .iter()
            .find(|n| **n == suite)
            .copied()
            .expect("checked")]
    } else {
        return fail_usage(&format!("unknown suite {suite:?}"));
    };
    let reports: Vec<SuiteReport> = names
        .iter()
        .map(|n| run_suite(n, cases, seed).expect("known suite"))
        .collect();
    let all_pass = reports.iter().all(SuiteReport::all_pass);
    let out = json!({
        "version": VERSION,
        "seed": seed,
        "cases": cases,
        "pass": all_pass,
        "reports": reports,
    });
    emit(&out, pretty);
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_correspond(args: &CommonArgs) -> ExitCode {
    let resolved = match resolve(args) {
        Ok(r) => r,
        Err(e) => return fail_usage(&e),
    };
    if !resolved.times.is_canonical_slice() {
        return fail_usage("correspond requires canonical-slice times (use --tau)");
    }
    let run = || -> painlax_core::Result<serde_json::Value> {
        let geo = geometric_forward(&resolved.chart)?;
        let lax = lax_forward(&geo, &resolved.times)?;
        let uv = map_qp_to_uv(&resolved.chart, &resolved.times)?;
        let back = map_uv_to_qp(&uv, &resolved.times)?;
        let r = resolved.config.r_inf;
        let su = solve_isospectral_u(r)?;
        let sv = solve_isospectral_v(r)?;
        Ok(json!({
            "version": VERSION,
            "config": resolved.config,
            "seed": resolved.config.seed,
            "geometric": geo,
            "lax": lax,
            "isospectral": uv,
            "round_trip": back,
            "shift_polynomials": {
                "u": serde_json::from_str::<serde_json::Value>(&su.to_json()).expect("json"),
                "v": serde_json::from_str::<serde_json::Value>(&sv.to_json()).expect("json"),
            },
        }))
    };
    match run() {
        Ok(v) => {
            emit(&v, resolved.pretty);
            ExitCode::SUCCESS
        }
        Err(e) => fail_usage(&e.to_string()),
    }
}

/// State for the floating-point demonstration.
#[derive(Clone)]
struct FlowState {
    q: Vec<f64>,
    p: Vec<f64>,
    t: Vec<f64>,
}

fn rates_f64(
    state: &FlowState,
    alpha: &DeformationVector,
    r_inf: usize,
    hbar: &Rat,
    isospectral: bool,
) -> Option<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let q: Option<Vec<Rat>> = state.q.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let p: Option<Vec<Rat>> = state.p.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let t: Option<Vec<Rat>> = state.t.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let (q, p, t) = (q?, p?, t?);
    let chart = Chart::qp(q, p).ok()?;
    let times = IrregularTimes::new(r_inf, t, hbar.clone()).ok()?;
    if isospectral {
        let (qd, pd) = isospectral_flow_rates(alpha, &chart, &times).ok()?;
        let td: Vec<f64> = alpha.components().iter().map(Rat::to_f64).collect();
        Some((
            qd.iter().map(Rat::to_f64).collect(),
            pd.iter().map(Rat::to_f64).collect(),
            td,
        ))
    } else {
        let rates = flow_rates(alpha, &chart, &times).ok()?;
        Some((
            rates.q_dot.iter().map(Rat::to_f64).collect(),
            rates.p_dot.iter().map(Rat::to_f64).collect(),
            rates.t_dot.iter().map(Rat::to_f64).collect(),
        ))
    }
}

fn rk4_step(
    state: &FlowState,
    h: f64,
    alpha: &DeformationVector,
    r_inf: usize,
    hbar: &Rat,
    isospectral: bool,
) -> Option<FlowState> {
    let add = |s: &FlowState, k: &(Vec<f64>, Vec<f64>, Vec<f64>), w: f64| FlowState {
        q: s.q.iter().zip(&k.0).map(|(x, d)| x + w * d).collect(),
        p: s.p.iter().zip(&k.1).map(|(x, d)| x + w * d).collect(),
        t: s.t.iter().zip(&k.2).map(|(x, d)| x + w * d).collect(),
    };
    let k1 = rates_f64(state, alpha, r_inf, hbar, isospectral)?;
    let k2 = rates_f64(&add(state, &k1, h / 2.0), alpha, r_inf, hbar, isospectral)?;
    let k3 = rates_f64(&add(state, &k2, h / 2.0), alpha, r_inf, hbar, isospectral)?;
    let k4 = rates_f64(&add(state, &k3, h), alpha, r_inf, hbar, isospectral)?;
    let combine = |i: usize, j: usize| -> f64 {
        let pick = |k: &(Vec<f64>, Vec<f64>, Vec<f64>)| match i {
            0 => k.0[j],
            1 => k.1[j],
            _ => k.2[j],
        };
        (pick(&k1) + 2.0 * pick(&k2) + 2.0 * pick(&k3) + pick(&k4)) / 6.0
    };
    let mut next = state.clone();
    for j in 0..state.q.len() {
        next.q[j] += h * combine(0, j);
        next.p[j] += h * combine(1, j);
    }
    for j in 0..state.t.len() {
        next.t[j] += h * combine(2, j);
    }
    Some(next)
}

fn uv_f64(state: &FlowState, r_inf: usize, hbar: &Rat) -> Option<Vec<f64>> {
    let q: Option<Vec<Rat>> = state.q.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let p: Option<Vec<Rat>> = state.p.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let t: Option<Vec<Rat>> = state.t.iter().map(|x| Rat::from_f64_exact(*x)).collect();
    let chart = Chart::qp(q?, p?).ok()?;
    let times = IrregularTimes::new(r_inf, t?, hbar.clone()).ok()?;
    let uv = map_qp_to_uv(&chart, &times).ok()?;
    Some(
        uv.first()
            .iter()
            .chain(uv.second())
            .map(Rat::to_f64)
            .collect(),
    )
}

fn cmd_flow_demo(args: &FlowArgs) -> ExitCode {
    let resolved = match resolve(&args.common) {
        Ok(r) => r,
        Err(e) => return fail_usage(&e),
    };
    let r = resolved.config.r_inf;
    if !(4..=6).contains(&r) {
        return fail_usage("flow-demo supports pole orders 4 through 6");
    }
    if !resolved.times.is_canonical_slice() {
        return fail_usage("flow-demo requires canonical-slice times (use --tau)");
    }
    // solutions of the hierarchy flows have movable poles; the default span
    // stays well inside the regular region for small initial data
    let steps = args.steps.unwrap_or(100);
    let h = args.step_size.unwrap_or(1.0 / 2048.0);
    if !(h.is_finite() && h > 0.0) {
        return fail_usage("step size must be positive and finite");
    }
    let direction = args.direction.unwrap_or(1);
    if !(1..=r - 3).contains(&direction) {
        return fail_usage(&format!("direction must be in 1..={}", r - 3));
    }
    let alpha = DeformationVector::basis(r, 2 * r - 2 * direction - 5);
    let hbar = resolved.times.hbar().clone();
    let initial = FlowState {
        q: resolved.chart.q().iter().map(Rat::to_f64).collect(),
        p: resolved.chart.p().iter().map(Rat::to_f64).collect(),
        t: resolved.times.all().iter().map(Rat::to_f64).collect(),
    };
    if steps == 0 {
        let out = json!({
            "version": VERSION,
            "config": resolved.config,
            "seed": resolved.config.seed,
            "steps": 0,
            "state": {"q": initial.q, "p": initial.p},
        });
        emit(&out, resolved.pretty);
        return ExitCode::SUCCESS;
    }
    let integrate = |h: f64, steps: usize| -> Option<(FlowState, Vec<serde_json::Value>)> {
        let mut state = initial.clone();
        let mut samples = Vec::new();
        let sample_every = (steps / 8).max(1);
        for step in 0..steps {
            state = rk4_step(&state, h, &alpha, r, &hbar, args.isospectral)?;
            if state.q.iter().chain(&state.p).any(|x| !x.is_finite()) {
                return None;
            }
            if (step + 1) % sample_every == 0 || step + 1 == steps {
                // drift diagnostics: finite-difference flow defect and the
                // isospectral coordinates
                let uv = uv_f64(&state, r, &hbar);
                samples.push(json!({
                    "step": step + 1,
                    "s": (step as f64 + 1.0) * h,
                    "q": state.q,
                    "p": state.p,
                    "uv": uv,
                }));
            }
        }
        Some((state, samples))
    };
    let Some((final_state, samples)) = integrate(h, steps) else {
        eprintln!("{}", json!({"error": "numeric abort: state is not finite"}));
        return ExitCode::from(3);
    };
    // RK4 order diagnostic: compare against the halved step size
    let refined = integrate(h / 2.0, steps * 2);
    let uv_end = uv_f64(&final_state, r, &hbar);
    let drift = match (&refined, &uv_end) {
        (Some((ref_state, _)), Some(uv1)) => uv_f64(ref_state, r, &hbar).map(|uv2| {
            uv1.iter()
                .zip(&uv2)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max)
        }),
        _ => None,
    };
    // flow defect: the zero-curvature residual evaluated with the
    // finite-difference rates of the numerical trajectory (chord over one
    // step); an exact flow line would make it vanish identically
    let defect = (|| -> Option<f64> {
        if args.isospectral {
            return None; // the residual belongs to the Hamiltonian flow
        }
        let next = rk4_step(&final_state, h, &alpha, r, &hbar, false)?;
        let to_rat = |v: &[f64]| -> Option<Vec<Rat>> {
            v.iter().map(|x| Rat::from_f64_exact(*x)).collect()
        };
        let chart = Chart::qp(to_rat(&final_state.q)?, to_rat(&final_state.p)?).ok()?;
        let times = IrregularTimes::new(r, to_rat(&final_state.t)?, hbar.clone()).ok()?;
        let hr = Rat::from_f64_exact(h)?;
        let chord = |a: &[f64], b: &[f64]| -> Option<Vec<Rat>> {
            a.iter()
                .zip(b)
                .map(|(x, y)| Some(&(&Rat::from_f64_exact(*y)? - &Rat::from_f64_exact(*x)?) / &hr))
                .collect()
        };
        let fd_rates = painlax_core::deformation::FlowRates {
            q_dot: chord(&final_state.q, &next.q)?,
            p_dot: chord(&final_state.p, &next.p)?,
            t_dot: alpha.components().to_vec(),
        };
        let res = painlax_core::deformation::zero_curvature_residual_with_rates(
            &alpha, &chart, &times, &fd_rates,
        )
        .ok()?;
        let sample = Rat::from_int(2);
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                if let Some(v) = res.e[i][j].eval(&sample) {
                    worst = worst.max(v.to_f64().abs());
                }
            }
        }
        Some(worst)
    })();
    let out = json!({
        "version": VERSION,
        "config": resolved.config,
        "seed": resolved.config.seed,
        "flow": if args.isospectral { "isospectral" } else { "hamiltonian" },
        "direction": direction,
        "steps": steps,
        "step_size": h,
        "samples": samples,
        "final": {"q": final_state.q, "p": final_state.p},
        "uv_refinement_drift": drift,
        "flow_defect": defect,
    });
    emit(&out, resolved.pretty);
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Hamiltonian(args) => cmd_hamiltonian(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Correspond(args) => cmd_correspond(args),
        Command::FlowDemo(args) => cmd_flow_demo(args),
    }
}
