use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

use super::config::{contrast_field, random_field};
use super::fit::loglog_slope;
use super::{Config, LabError, Report, Table, Verdict};
use crate::diffpoly::DiffPoly;
use crate::energy::eval::{check_threshold, quadratic_energy, threshold};
use crate::energy::{build_blueprint, evaluate_energy, predicted_derivative, EnergyBlueprint};
use crate::hierarchy::generate;
use crate::spectral::{
    abs_pow, eval_diffpoly, fft, functional_eval, scale_field, solve_with, time_factor, FlowKind, FlowSpec,
    SolverConfig, SpectralField,
};

/// The experiment pipelines, by command-line name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Conservation,
    MuCauchy,
    BonaSmith,
    EnergyDrift,
    Scaling,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Conservation,
        Experiment::MuCauchy,
        Experiment::BonaSmith,
        Experiment::EnergyDrift,
        Experiment::Scaling,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Conservation => "conservation",
            Experiment::MuCauchy => "mu-cauchy",
            Experiment::BonaSmith => "bona-smith",
            Experiment::EnergyDrift => "energy-drift",
            Experiment::Scaling => "scaling",
        }
    }

    pub fn run(self, cfg: &Config) -> Result<Report, LabError> {
        match self {
            Experiment::Conservation => exp_conservation(cfg),
            Experiment::MuCauchy => exp_mu_cauchy(cfg),
            Experiment::BonaSmith => exp_bona_smith(cfg),
            Experiment::EnergyDrift => exp_energy_drift(cfg),
            Experiment::Scaling => exp_scaling(cfg),
        }
    }
}

impl FromStr for Experiment {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| LabError::Config(format!("unknown experiment `{s}`")))
    }
}

fn hamiltonians() -> Vec<DiffPoly> {
    (0..3).map(|m| generate(m).h.canonical.clone()).collect()
}

/// Model-flow right-hand side `−∂^{2l+1}u + u ∂^{2l−1}u` as a polynomial.
fn model_rhs(l: usize) -> DiffPoly {
    let l = l as u32;
    DiffPoly::var("u", 0).multiply(&DiffPoly::var("u", 2 * l - 1)) - DiffPoly::var("u", 2 * l + 1)
}

/// Blueprint for the `Es` column when the flow is a model flow and `s` is
/// above the admissibility threshold.
fn energy_for(flow: &FlowSpec, s: f64) -> Result<Option<EnergyBlueprint>, LabError> {
    match flow.kind {
        FlowKind::Model { l } | FlowKind::Regularized { l, .. } if l >= 2 && s > threshold(l) => {
            Ok(Some(build_blueprint(l)?))
        }
        _ => Ok(None),
    }
}

/// Diagnostics table with columns `t, l2, hs, H0, H1, H2, Es`.
fn trajectory(
    u0: &SpectralField,
    flow: &FlowSpec,
    sc: &SolverConfig,
    s: f64,
    bp: Option<&EnergyBlueprint>,
) -> Result<Table, LabError> {
    let hs = hamiltonians();
    let mut table = Table::new("trajectory", &["t", "l2", "hs", "H0", "H1", "H2", "Es"]);
    let mut energy_err = None;
    solve_with(u0, flow, sc, |t, u| {
        let mut row = vec![Some(t), Some(u.l2_norm()), Some(u.sobolev_norm(s))];
        row.extend(hs.iter().map(|h| Some(functional_eval(h, u))));
        row.push(bp.and_then(|bp| match evaluate_energy(bp, s, u) {
            Ok(e) => Some(e),
            Err(e) => {
                energy_err.get_or_insert(e);
                None
            }
        }));
        table.push(row);
    })?;
    if let Some(e) = energy_err {
        return Err(e.into());
    }
    Ok(table)
}

/// `max_t |H(t) − H(0)| / |H(0)|` over a table column (absolute when
/// `H(0) = 0`).
fn max_relative_drift(col: &[Option<f64>]) -> f64 {
    let vals: Vec<f64> = col.iter().flatten().copied().collect();
    let h0 = vals[0];
    let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
    vals.iter().map(|h| (h - h0).abs() / scale).fold(0.0, f64::max)
}

/// Plain solve: the `solve --config FILE` pipeline.
pub fn run_solve(cfg: &Config) -> Result<Report, LabError> {
    let sc = cfg.solver()?;
    let flow = cfg.flow("model", 2)?;
    let s: f64 = cfg.value_or("diagnostics.s", 1.0)?;
    let u0 = cfg.initial(sc.n)?;
    let bp = energy_for(&flow, s)?;
    let table = trajectory(&u0, &flow, &sc, s, bp.as_ref())?;
    let last = table.rows.last().expect("at least the initial row");
    let drifts: Vec<f64> = ["H0", "H1", "H2"].iter().map(|h| max_relative_drift(&table.column(h).unwrap())).collect();
    let metrics = json!({
        "steps": sc.steps(),
        "final_l2": last[1],
        "final_hs": last[2],
        "hamiltonian_drift": drifts,
        "energy": bp.is_some(),
    });
    Ok(Report { experiment: "solve".into(), verdict: Verdict::Pass, metrics, tables: vec![table] })
}

/// Conservation of `H_0, H_1, H_2` along a hierarchy flow and the
/// dt-refinement order of the drift.
///
/// Keys: the solver keys, `refine.dt` (coarse step of the refinement pair,
/// default `time.dt`), `threshold.drift` (1e−8), `threshold.order_tol` (0.3).
pub fn exp_conservation(cfg: &Config) -> Result<Report, LabError> {
    let sc = cfg.solver()?;
    let flow = cfg.flow("hierarchy", 1)?;
    let s: f64 = cfg.value_or("diagnostics.s", 1.0)?;
    let u0 = cfg.initial(sc.n)?;
    let refine_dt: f64 = cfg.value_or("refine.dt", sc.dt)?;
    let tol_drift: f64 = cfg.value_or("threshold.drift", 1e-8)?;
    let tol_order: f64 = cfg.value_or("threshold.order_tol", 0.3)?;
    let hs = hamiltonians();

    // Max drift over the coarse step's time levels, at refine.dt and
    // refine.dt/2 (sampled every second step).
    let sampled_drift = |dt: f64, every: usize| -> Result<Vec<f64>, LabError> {
        let c = SolverConfig { dt, diag_every: every, ..sc.clone() };
        let mut rows: Vec<Vec<f64>> = Vec::new();
        solve_with(&u0, &flow, &c, |_, u| rows.push(hs.iter().map(|p| functional_eval(p, u)).collect()))?;
        Ok((0..hs.len())
            .map(|m| max_relative_drift(&rows.iter().map(|r| Some(r[m])).collect::<Vec<_>>()))
            .collect())
    };

    let (main, pair) = rayon::join(
        || trajectory(&u0, &flow, &sc, s, None),
        || {
            let v: Vec<_> = [(refine_dt, 1), (refine_dt / 2.0, 2)].par_iter().map(|&(dt, e)| sampled_drift(dt, e)).collect();
            v
        },
    );
    let table = main?;
    let pair: Vec<Vec<f64>> = pair.into_iter().collect::<Result<_, _>>()?;
    let drift: Vec<f64> = ["H0", "H1", "H2"].iter().map(|h| max_relative_drift(&table.column(h).unwrap())).collect();
    let target = 2f64.powi(sc.order as i32);
    let ratios: Vec<Option<f64>> =
        pair[0].iter().zip(&pair[1]).map(|(a, b)| if *b > 0.0 { Some(a / b) } else { None }).collect();
    let order_ok = pair[0].iter().zip(&ratios).all(|(a, r)| match r {
        Some(r) => (r - target).abs() <= tol_order * target,
        None => *a == 0.0,
    });
    let drift_ok = drift.iter().all(|d| *d < tol_drift);
    let metrics = json!({
        "drift": drift,
        "refine_dt": refine_dt,
        "refine_drift": pair,
        "refine_ratio": ratios,
        "expected_ratio": target,
        "drift_ok": drift_ok,
        "order_ok": order_ok,
    });
    Ok(Report {
        experiment: "conservation".into(),
        verdict: Verdict::from_bool(drift_ok && order_ok),
        metrics,
        tables: vec![table],
    })
}

/// Sup-in-time `L²` distance between regularized solutions at `μ` and
/// `μ/2` along a ladder, with a log-log slope fit.
///
/// Keys: solver keys (defaults `grid.N = 64`), `flow.l` (2), `ladder.mu`,
/// `threshold.slope` (1.0), `threshold.slope_tol` (0.2).
pub fn exp_mu_cauchy(cfg: &Config) -> Result<Report, LabError> {
    let cfg = with_default(cfg, "grid.N", "64");
    let sc = cfg.solver()?;
    let l = cfg.level_or(2)?;
    let u0 = cfg.initial(sc.n)?;
    let ladder = cfg.list_or("ladder.mu", &[1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4])?;
    if ladder.iter().any(|m| !(*m > 0.0)) {
        return Err(LabError::Config("ladder.mu entries must be positive".into()));
    }
    let target: f64 = cfg.value_or("threshold.slope", 1.0)?;
    let tol: f64 = cfg.value_or("threshold.slope_tol", 0.2)?;

    let mut mus: Vec<f64> = ladder.iter().flat_map(|&m| [m, m / 2.0]).collect();
    mus.sort_by(|a, b| b.total_cmp(a));
    mus.dedup();
    let runs: Vec<Vec<SpectralField>> = mus
        .par_iter()
        .map(|&mu| {
            let mut snaps = Vec::new();
            solve_with(&u0, &FlowSpec::regularized(l, mu), &sc, |_, u| snaps.push(u.clone()))?;
            Ok(snaps)
        })
        .collect::<Result<_, LabError>>()?;
    let find = |mu: f64| runs[mus.iter().position(|m| *m == mu).unwrap()].as_slice();

    let mut table = Table::new("distance", &["mu", "distance"]);
    let mut dist = Vec::new();
    for &mu in &ladder {
        let d = find(mu).iter().zip(find(mu / 2.0)).map(|(a, b)| (a - b).l2_norm()).fold(0.0, f64::max);
        table.push_values(&[mu, d]);
        dist.push(d);
    }
    let (fit, ok) = if dist.iter().all(|d| *d > 0.0) {
        let f = loglog_slope(&ladder, &dist)?;
        (Some(f), (f.slope - target).abs() <= tol)
    } else {
        (None, false)
    };
    let metrics = json!({ "mu": ladder, "distance": dist, "fit": fit });
    Ok(Report { experiment: "mu-cauchy".into(), verdict: Verdict::from_bool(ok), metrics, tables: vec![table] })
}

fn with_default(cfg: &Config, key: &str, value: &str) -> Config {
    let mut c = cfg.clone();
    if c.get(key).is_none() {
        c.set(key, value).expect("known key");
    }
    c
}

/// Mollifier rates on a field with spectral decay `|f̂_k| ≈ |k|^{−s−1/2−η}`
/// (see [`rough_field`]):
/// growth of `‖φ_ε‖_{H^{s+ν}}` and decay of `‖φ − φ_ε‖_{H^{s−β}}` in `ε`.
///
/// Keys: `grid.N` (4096), `bona.s` (2), `bona.eta` (0.01), `bona.m` (3),
/// `seed`, `ladder.eps`, `ladder.nu`, `ladder.beta`, `threshold.rate_tol`
/// (0.2, relative), `threshold.beta_margin` (0.2).
pub fn exp_bona_smith(cfg: &Config) -> Result<Report, LabError> {
    let n: usize = cfg.value_or("grid.N", 4096)?;
    let s: f64 = cfg.value_or("bona.s", 2.0)?;
    let eta: f64 = cfg.value_or("bona.eta", 0.01)?;
    let m: u32 = cfg.value_or("bona.m", 3)?;
    let seed = cfg.seed()?;
    let eps = cfg.list_or("ladder.eps", &[0.1, 0.05, 0.025, 0.0125])?;
    let nus = cfg.list_or("ladder.nu", &[0.5, 1.0])?;
    let betas = cfg.list_or("ladder.beta", &[0.5, 1.0])?;
    let rate_tol: f64 = cfg.value_or("threshold.rate_tol", 0.2)?;
    let margin: f64 = cfg.value_or("threshold.beta_margin", 0.2)?;
    if n < 16 || !n.is_power_of_two() {
        return Err(LabError::Config("grid.N must be a power of two ≥ 16".into()));
    }
    if m == 0 || eps.iter().any(|e| !(*e > 0.0)) {
        return Err(LabError::Config("need bona.m ≥ 1 and positive ε".into()));
    }

    let phi = rough_field(n, s + 0.5 + eta, seed);
    let rows: Vec<Vec<f64>> = eps
        .par_iter()
        .map(|&e| {
            let pe = crate::spectral::mollify(&phi, e, m);
            let diff = &phi - &pe;
            let mut row = vec![e];
            row.extend(nus.iter().map(|nu| pe.sobolev_norm(s + nu)));
            row.extend(betas.iter().map(|b| diff.sobolev_norm(s - b)));
            row
        })
        .collect();

    let mut header = vec!["eps".to_string()];
    header.extend(nus.iter().map(|nu| format!("growth_nu_{nu}")));
    header.extend(betas.iter().map(|b| format!("diff_beta_{b}")));
    let mut table = Table { name: "rates".into(), header, rows: Vec::new() };
    rows.iter().for_each(|r| table.push_values(r));

    let col = |i: usize| -> Vec<f64> { rows.iter().map(|r| r[i]).collect() };
    let mut ok = true;
    let mut growth = Vec::new();
    for (i, nu) in nus.iter().enumerate() {
        let f = loglog_slope(&eps, &col(1 + i))?;
        ok &= (f.slope + nu).abs() <= rate_tol * nu;
        growth.push(json!({ "nu": nu, "slope": f.slope, "r2": f.r2 }));
    }
    let mut decay = Vec::new();
    for (i, b) in betas.iter().enumerate() {
        let f = loglog_slope(&eps, &col(1 + nus.len() + i))?;
        ok &= f.slope > 0.0 && f.slope >= b - margin;
        decay.push(json!({ "beta": b, "slope": f.slope, "r2": f.r2 }));
    }
    let metrics = json!({ "seed": seed, "growth": growth, "decay": decay });
    Ok(Report { experiment: "bona-smith".into(), verdict: Verdict::from_bool(ok), metrics, tables: vec![table] })
}

/// Full-band field with `|f̂_k| = (1+k²)^{−decay/2}` and seeded phases. The
/// bracket matches the `H^σ` weight, so `‖f‖_{H^σ}` is finite exactly for
/// `σ < decay − 1/2` with no low-mode offset.
pub fn rough_field(n: usize, decay: f64, seed: u64) -> SpectralField {
    let phases = random_field(n, n / 2 - 1, 1.0, 0.0, seed);
    SpectralField::from_half_spectrum(n, |k| {
        let c = phases.mode(k);
        if k == 0 || c.norm() == 0.0 {
            return c * 0.0;
        }
        c / c.norm() * (1.0 + (k * k) as f64).powf(-decay / 2.0)
    })
}

/// `d/dt` of `½(‖u‖² + ‖D^s u‖²)` in the direction `f`, computed modewise.
pub fn quadratic_rate(u: &SpectralField, f: &SpectralField, s: f64) -> f64 {
    let n = u.n();
    let tau = std::f64::consts::TAU;
    (0..n)
        .map(|i| {
            let k = fft::wavenumber(i, n);
            let w = 1.0 + abs_pow(k, 2.0 * s);
            w * (u.modes()[i].conj() * f.modes()[i]).re
        })
        .sum::<f64>()
        * tau
}

/// Instantaneous `|d/dt ½‖u‖²_{split}| / |d/dt E^s|` for the model flow.
pub fn contrast_ratio(bp: &EnergyBlueprint, s: f64, u: &SpectralField) -> Result<(f64, f64, f64), LabError> {
    let rhs = eval_diffpoly(&model_rhs(bp.l), u, 1.0);
    let raw = quadratic_rate(u, &rhs, s);
    let modified = predicted_derivative(bp, s, u)?;
    Ok((raw, modified, (raw / modified).abs()))
}

struct DriftRun {
    table: Table,
    constant: f64,
}

fn drift_run(bp: &EnergyBlueprint, s: f64, u0: &SpectralField, flow: &FlowSpec, sc: &SolverConfig) -> Result<DriftRun, LabError> {
    let l = bp.l;
    let mut table = Table::new("trajectory", &["t", "l2", "hs", "Es", "dEs_dt", "bound_ratio"]);
    let mut constant: f64 = 0.0;
    let mut err = None;
    solve_with(u0, flow, sc, |t, u| {
        let r = (|| -> Result<(), LabError> {
            let e = evaluate_energy(bp, s, u)?;
            let de = predicted_derivative(bp, s, u)?;
            let hs = u.sobolev_norm(s);
            let bound: f64 = (1..=l).map(|k| hs.powi(k as i32 + 2)).sum();
            let ratio = if bound > 0.0 { de.abs() / bound } else { 0.0 };
            constant = constant.max(ratio);
            table.push_values(&[t, u.l2_norm(), hs, e, de, ratio]);
            Ok(())
        })();
        if let Err(e) = r {
            err.get_or_insert(e);
        }
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(DriftRun { table, constant }),
    }
}

/// Modified-energy diagnostics along the model flow: drift of `E^s`, the
/// empirical constant in `|dE^s/dt| ≤ C Σ_{k=1}^{l} ‖u‖_{H^s}^{k+2}` and its
/// stability under grid doubling, the frequency-growth contrast ladder and
/// a coercivity scan.
///
/// Keys: `flow.l` (2), `energy.s` (4), solver keys (defaults `grid.N = 128`),
/// initial-data keys (default `random`, amplitude 0.05, band 8),
/// `ladder.k0`, `ladder.delta`, `threshold.n_stability` (0.1),
/// `threshold.contrast` (5).
pub fn exp_energy_drift(cfg: &Config) -> Result<Report, LabError> {
    let cfg = with_default(&with_default(&with_default(cfg, "grid.N", "128"), "ic.kind", "random"), "ic.amplitude", "0.05");
    let sc = cfg.solver()?;
    let l = cfg.level_or(2)?;
    let s: f64 = cfg.value_or("energy.s", 4.0)?;
    check_threshold(l, s)?;
    let bp = build_blueprint(l)?;
    let flow = FlowSpec::model(l);
    let u0 = cfg.initial(sc.n)?;
    let k0s = cfg.list_or("ladder.k0", &[8.0, 16.0, 32.0, 64.0])?;
    let deltas = cfg.list_or("ladder.delta", &[0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0])?;
    let tol_n: f64 = cfg.value_or("threshold.n_stability", 0.1)?;
    let min_contrast: f64 = cfg.value_or("threshold.contrast", 5.0)?;
    let amp: f64 = cfg.value_or("ic.amplitude", 0.05)?;

    let runs: Vec<DriftRun> = [sc.n, 2 * sc.n]
        .par_iter()
        .map(|&n| drift_run(&bp, s, &u0.resample(n), &flow, &SolverConfig { n, ..sc.clone() }))
        .collect::<Result<_, _>>()?;
    let es: Vec<f64> = runs[0].table.column("Es").unwrap().into_iter().flatten().collect();
    let drift = es.iter().map(|e| (e - es[0]).abs()).fold(0.0, f64::max);
    let c_ratio = if runs[0].constant > 0.0 { runs[1].constant / runs[0].constant } else { 1.0 };
    let stable = (c_ratio - 1.0).abs() < tol_n;

    let mut contrast = Table::new("contrast", &["k0", "raw_rate", "energy_rate", "ratio"]);
    let cr: Vec<(f64, f64, f64)> = k0s
        .par_iter()
        .map(|&k0| {
            let k0 = k0 as usize;
            let n = (8 * (k0 + 2)).next_power_of_two().max(sc.n);
            contrast_ratio(&bp, s, &contrast_field(n, k0, amp, s))
        })
        .collect::<Result<_, _>>()?;
    for (k0, (raw, e, r)) in k0s.iter().zip(&cr) {
        contrast.push_values(&[*k0, *raw, *e, *r]);
    }
    let ratios: Vec<f64> = cr.iter().map(|c| c.2).collect();
    let monotone = ratios.windows(2).all(|w| w[1] > w[0]);
    let growth = ratios.last().unwrap_or(&0.0) / ratios.first().unwrap_or(&1.0);
    let contrast_ok = monotone && growth >= min_contrast;

    // Coercivity: E^s / (‖u‖² + ‖D^s u‖²) ∈ [¼, ¾] for data of size δ.
    let mut coercivity = Table::new("coercivity", &["delta", "ratio"]);
    let unit = {
        let q = (2.0 * quadratic_energy(&u0, s)).sqrt();
        if q > 0.0 { u0.scale(1.0 / q) } else { u0.clone() }
    };
    let mut delta_star = None;
    let mut inside = true;
    for &d in &deltas {
        let u = unit.scale(d);
        let q = 2.0 * quadratic_energy(&u, s);
        let r = if q > 0.0 { evaluate_energy(&bp, s, &u)? / q } else { 0.5 };
        coercivity.push_values(&[d, r]);
        inside &= (0.25..=0.75).contains(&r);
        if inside {
            delta_star = Some(d);
        }
    }

    let metrics = json!({
        "l": l,
        "s": s,
        "energy_drift": drift,
        "relative_energy_drift": if es[0] != 0.0 { drift / es[0].abs() } else { drift },
        "bound_constant": [runs[0].constant, runs[1].constant],
        "constant_ratio": c_ratio,
        "grid_stable": stable,
        "contrast_ratios": ratios,
        "contrast_growth": growth,
        "contrast_ok": contrast_ok,
        "coercive_delta": delta_star,
    });
    let mut tables = vec![runs.into_iter().next().unwrap().table, contrast, coercivity];
    tables[0].name = "trajectory".into();
    Ok(Report {
        experiment: "energy-drift".into(),
        verdict: Verdict::from_bool(stable && contrast_ok),
        metrics,
        tables,
    })
}

/// Two independent solves related by `u_λ(x,t) = λ² u(λx, λ^{2l+1} t)`:
/// `u` on `N` points to `T`, and `u_λ` on `λN` points with step and horizon
/// divided by `λ^{2l+1}`.
///
/// Keys: solver keys (defaults `grid.N = 64`, `time.T = 0.1`), `flow.l` (2),
/// `scaling.lambda` (2, a power of two), `threshold.scaling` (1e−6).
pub fn exp_scaling(cfg: &Config) -> Result<Report, LabError> {
    let cfg = with_default(&with_default(cfg, "grid.N", "64"), "time.T", "0.1");
    let sc = cfg.solver()?;
    let l = cfg.level_or(2)?;
    let lambda: usize = cfg.value_or("scaling.lambda", 2)?;
    if lambda == 0 || !lambda.is_power_of_two() {
        return Err(LabError::Config("scaling.lambda must be a power of two".into()));
    }
    let tol: f64 = cfg.value_or("threshold.scaling", 1e-6)?;
    let u0 = cfg.initial(sc.n)?;
    let flow = FlowSpec::model(l);
    let tf = time_factor(lambda, l);
    let scaled_cfg = SolverConfig {
        n: sc.n * lambda,
        dt: sc.dt / tf,
        t_final: sc.t_final / tf,
        diag_every: usize::MAX / 2,
        ..sc.clone()
    };
    let v0 = scale_field(&u0, lambda, l);
    let (u, v) = rayon::join(
        || solve_with(&u0, &flow, &SolverConfig { diag_every: usize::MAX / 2, ..sc.clone() }, |_, _| {}),
        || solve_with(&v0, &flow, &scaled_cfg, |_, _| {}),
    );
    let (u, v) = (u?, v?);
    let predicted = scale_field(&u, lambda, l);
    let scale = v.max_abs();
    let err = if scale > 0.0 { predicted.max_diff(&v) / scale } else { predicted.max_diff(&v) };
    let mut table = Table::new("scaling", &["lambda", "t", "t_scaled", "max_rel_error"]);
    table.push_values(&[lambda as f64, sc.t_final, scaled_cfg.t_final, err]);
    // How far the solution moved, so an exact match is not a trivial one.
    let moved = if u0.max_abs() > 0.0 { u.max_diff(&u0.resample(u.n())) / u0.max_abs() } else { 0.0 };
    let metrics = json!({ "lambda": lambda, "l": l, "max_rel_error": err, "relative_change": moved, "steps": sc.steps() });
    Ok(Report { experiment: "scaling".into(), verdict: Verdict::from_bool(err < tol), metrics, tables: vec![table] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(kind: &str) -> Config {
        Config::new().with("ic.kind", kind).with("grid.N", 32).with("time.dt", 0.01).with("time.T", 0.1)
    }

    #[test]
    fn zero_data_has_zero_drift() {
        let r = exp_conservation(&quick("zero")).unwrap();
        assert_eq!(r.metrics["drift"], json!([0.0, 0.0, 0.0]));
        assert!(r.verdict.passed());
    }

    #[test]
    fn solve_table_has_documented_columns() {
        let cfg = quick("cos").with("flow.l", 2).with("diagnostics.s", 4).with("diagnostics.every", 1);
        let r = run_solve(&cfg).unwrap();
        let t = &r.tables[0];
        assert_eq!(t.header, ["t", "l2", "hs", "H0", "H1", "H2", "Es"]);
        assert_eq!(t.rows.len(), 11);
        assert!(t.rows.iter().all(|row| row[6].is_some()));
        let r = run_solve(&quick("cos").with("flow.kind", "hierarchy").with("flow.l", 1)).unwrap();
        assert!(r.tables[0].rows.iter().all(|row| row[6].is_none()));
    }

    #[test]
    fn scaling_by_one_is_exact() {
        let r = exp_scaling(&quick("cos").with("scaling.lambda", 1)).unwrap();
        assert_eq!(r.metrics["max_rel_error"], json!(0.0));
        assert!(exp_scaling(&quick("cos").with("scaling.lambda", 3)).is_err());
    }

    #[test]
    fn mu_cauchy_equal_mu_is_zero_distance() {
        let cfg = quick("cos").with("ladder.mu", "0.01, 0.005");
        let r = exp_mu_cauchy(&cfg).unwrap();
        let d = r.tables[0].column("distance").unwrap();
        assert!(d.iter().all(|x| x.unwrap() > 0.0));
        let zero = exp_mu_cauchy(&quick("zero").with("ladder.mu", "0.01, 0.005")).unwrap();
        assert!(zero.tables[0].column("distance").unwrap().iter().all(|x| x.unwrap() == 0.0));
        assert_eq!(zero.verdict, Verdict::Fail);
    }

    #[test]
    fn quadratic_rate_matches_difference_quotient() {
        let u = random_field(64, 6, 0.1, 1.0, 1);
        let f = random_field(64, 9, 0.3, 0.5, 2);
        let s = 2.5;
        let h = 1e-3;
        let fd = (quadratic_energy(&u.axpby(1.0, &f, h), s) - quadratic_energy(&u.axpby(1.0, &f, -h), s)) / (2.0 * h);
        let exact = quadratic_rate(&u, &f, s);
        assert!((fd - exact).abs() < 1e-10 * exact.abs());
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("bogus".parse::<Experiment>().is_err());
    }
}
