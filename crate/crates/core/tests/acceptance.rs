//! Acceptance run: one PASS/FAIL line per criterion, each including its wall
//! time limit. Statistical criteria use seed 2026, which was never used while
//! calibrating.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use interface_hydro::harness::{
    run_coupling_experiment, run_flux_experiment, run_front_experiment, run_hydro_experiment,
    run_stationarity_experiment, ConvergenceReport, ExperimentConfig, ExperimentKind, Observable, Report,
};
use interface_hydro::measures::{ProfileSpec, TestFunction};
use interface_hydro::pde::{
    solve_dissipative, solve_exclusion_pde, solve_fullline_zr_pde, transform_zeta_to_rho, weak_form_residual, Grid,
    PdeSolution, Profile,
};

const SEED: u64 = 2026;
const HYDRO_TOLERANCE: f64 = 0.08;

struct Outcome {
    id: u32,
    title: &'static str,
    passed: bool,
    lines: Vec<String>,
}

fn criterion(id: u32, title: &'static str, limit: Duration, body: impl FnOnce() -> (bool, Vec<String>)) -> Outcome {
    let start = Instant::now();
    let (ok, mut lines) = body();
    let elapsed = start.elapsed();
    let in_time = elapsed < limit;
    lines.push(format!("runtime {:.1} s (limit {} s){}", elapsed.as_secs_f64(), limit.as_secs(), if in_time { "" } else { " EXCEEDED" }));
    let passed = ok && in_time;
    println!("{} criterion {id}: {title}", if passed { "PASS" } else { "FAIL" });
    for l in &lines {
        println!("    {l}");
    }
    Outcome { id, title, passed, lines }
}

fn verdict_lines(report: &Report) -> (bool, Vec<String>) {
    let lines = report
        .verdicts
        .iter()
        .map(|v| format!("{} {}: {}", if v.passed { "ok  " } else { "FAIL" }, v.name, v.detail))
        .collect();
    (report.passed(), lines)
}

fn exact_structure() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for (name, check) in common::exact_structure_suite() {
        match check {
            Ok(detail) => lines.push(format!("ok   {name}: {detail}")),
            Err(e) => {
                ok = false;
                lines.push(format!("FAIL {name}: {e}"));
            }
        }
    }
    (ok, lines)
}

fn pde_self_consistency() -> (bool, Vec<String>) {
    let t = 1.0;
    let l = 8.0;
    let rho0 = ProfileSpec::constant(0.5);
    let zeta0 = ProfileSpec::constant(0.5);
    let mut lines = Vec::new();
    let mut ok = true;
    let mut check = |name: &str, pass: bool, detail: String| {
        ok &= pass;
        lines.push(format!("{} {name}: {detail}", if pass { "ok  " } else { "FAIL" }));
    };

    let solve = |du: f64| {
        let rho = solve_dissipative(&rho0, &Grid::stable(-l, 0.0, du, t).unwrap()).unwrap();
        let zeta = solve_exclusion_pde(&zeta0, &rho.a_series, &Grid::stable(0.0, 2.0 * l, du, t).unwrap()).unwrap();
        (rho, zeta)
    };
    let (rho_c, zeta_c) = solve(1.0 / 100.0);
    let (rho, zeta) = solve(1.0 / 200.0);

    let v_gap = rho.mass.iter().zip(&rho.v_series).map(|(m, v)| (rho.mass[0] - m - v).abs()).fold(0.0, f64::max);
    check("v ledger", v_gap <= 1e-12, format!("max |v_n - (m_0 - m_n)| = {v_gap:.2e} over {} steps", rho.grid.steps()));

    let step_gap = zeta.mass.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    check("zeta mass", step_gap <= 1e-12, format!("max per-step change of the zeta mass = {step_gap:.2e}"));

    let g_rho = TestFunction::bump("rho-bump", -0.5, 0.4);
    let g_zeta = TestFunction::bump("zeta-bump", 0.4, 0.35);
    for (name, coarse, fine, g) in [("rho", &rho_c, &rho, &g_rho), ("zeta", &zeta_c, &zeta, &g_zeta)] {
        let r0 = weak_form_residual(coarse, g, t).unwrap();
        let r1 = weak_form_residual(fine, g, t).unwrap();
        let ratio = r1 / r0;
        check(
            &format!("{name} residual order"),
            (0.35..=0.65).contains(&ratio),
            format!("residual {r0:.3e} at du 1/100, {r1:.3e} at du 1/200, ratio {ratio:.3}"),
        );
    }

    let routes = |zeta_sol: &PdeSolution| -> (Profile, Profile) {
        let du = zeta_sol.grid.du;
        let full = solve_fullline_zr_pde(&ProfileSpec::step(0.5, 1.0, 0.0), &Grid::stable(-l, l, du, t).unwrap()).unwrap();
        let tr = transform_zeta_to_rho(zeta_sol, du, 3.0).unwrap().pop().unwrap();
        (tr, full.profiles.last().unwrap().clone())
    };
    let (t1, f1) = routes(&zeta_c);
    let (t2, f2) = routes(&zeta);
    let est = t1.l1_distance(&t2, 0.0, 2.0, 2000) + f1.l1_distance(&f2, 0.0, 2.0, 2000);
    let gap = t2.l1_distance(&f2, 0.0, 2.0, 2000);
    check(
        "transform vs full line",
        gap <= 2.0 * est,
        format!("L1 gap on [0, 2] = {gap:.3e}, discretisation estimate {est:.3e}"),
    );
    (ok, lines)
}

fn small_density_front() -> (bool, Vec<String>) {
    let s = solve_dissipative(&ProfileSpec::constant(0.01), &Grid::stable(-8.0, 0.0, 1.0 / 400.0, 1.0).unwrap()).unwrap();
    let exact = 0.01 * (2.0 / PI).sqrt();
    let rel = s.v_at(1.0) / exact - 1.0;
    (rel.abs() < 0.02, vec![format!("v_1 = {:.6}, heat-kernel value {exact:.6}, relative error {rel:+.4}", s.v_at(1.0))])
}

fn flux_bound() -> (bool, Vec<String>) {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Flux);
    cfg.n = vec![16, 64, 256];
    cfg.t = 0.25;
    cfg.replicas = 100;
    cfg.seed = SEED;
    let rep = run_flux_experiment(&cfg).unwrap();
    let mut ok = true;
    let mut lines = Vec::new();
    for f in &rep.per_n {
        ok &= f.within_bound;
        lines.push(format!(
            "{} N={}: mean {:.5}, one-sided 95% upper {:.5}, bound t/sqrt(N) = {:.5}",
            if f.within_bound { "ok  " } else { "FAIL" },
            f.n,
            f.integral.mean,
            f.upper,
            f.bound
        ));
    }
    (ok, lines)
}

fn hydro_config(kind: ExperimentKind, rb: f64, observables: Vec<Observable>) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(kind);
    cfg.n = vec![64, 128, 256];
    cfg.t = 0.5;
    cfg.replicas = 40;
    cfg.seed = SEED;
    cfg.rb = rb;
    cfg.rho0 = ProfileSpec::constant(0.5);
    cfg.zeta0 = ProfileSpec::constant(0.5);
    cfg.tolerance = HYDRO_TOLERANCE;
    cfg.observables = Some(observables);
    cfg
}

fn hydro_lines(rep: &ConvergenceReport, label: &str, ok: &mut bool, lines: &mut Vec<String>) {
    for o in &rep.observables {
        let means: Vec<f64> = o.per_n.iter().map(|d| d.summary.mean).collect();
        let decreasing = means.windows(2).all(|w| w[1] < w[0]);
        let last = o.per_n.last().unwrap();
        let below = last.summary.mean < HYDRO_TOLERANCE;
        *ok &= decreasing && below;
        let per_n: Vec<String> = o
            .per_n
            .iter()
            .map(|d| format!("N={} {:.4} [{:.4}, {:.4}]", d.n, d.summary.mean, d.summary.ci_lo, d.summary.ci_hi))
            .collect();
        lines.push(format!(
            "{} {label} {}: {}; decreasing {decreasing}, mean at N={} below {HYDRO_TOLERANCE}: {below}",
            if decreasing && below { "ok  " } else { "FAIL" },
            o.observable.name(),
            per_n.join(", "),
            last.n
        ));
    }
    for w in &rep.warnings {
        lines.push(format!("note {label}: {w}"));
    }
}

fn hydro_trend() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    let exclusion = run_hydro_experiment(&hydro_config(ExperimentKind::HydroExclusion, 1.0, vec![Observable::Xi])).unwrap();
    hydro_lines(&exclusion, "coupled process", &mut ok, &mut lines);
    let potts = run_hydro_experiment(&hydro_config(
        ExperimentKind::PottsProfile,
        0.5,
        vec![Observable::Full, Observable::Interface],
    ))
    .unwrap();
    hydro_lines(&potts, "flip dynamics", &mut ok, &mut lines);
    (ok, lines)
}

fn front_lln() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut lines = Vec::new();
    for rb in [1.0, 0.5] {
        let mut cfg = ExperimentConfig::new(ExperimentKind::Front);
        cfg.n = vec![256];
        cfg.t = 0.5;
        cfg.replicas = 40;
        cfg.seed = SEED;
        cfg.rb = rb;
        let rep = run_front_experiment(&cfg).unwrap();
        let f = rep.per_n.last().unwrap();
        ok &= f.contains_v;
        lines.push(format!(
            "{} rb={rb}: X_T/N = {:.5}, 95% CI [{:.5}, {:.5}], v_T = {:.5}",
            if f.contains_v { "ok  " } else { "FAIL" },
            f.summary.mean,
            f.summary.ci_lo,
            f.summary.ci_hi,
            f.v
        ));
    }
    (ok, lines)
}

fn equilibrium_and_order() -> (bool, Vec<String>) {
    let mut stat = ExperimentConfig::new(ExperimentKind::Stationarity);
    stat.n = vec![32];
    stat.t = 1.0;
    stat.alpha = 1.0;
    stat.replicas = 100;
    stat.seed = SEED;
    let (ok_s, mut lines) = verdict_lines(&run_stationarity_experiment(&stat).unwrap().into_report().unwrap());

    let mut coup = ExperimentConfig::new(ExperimentKind::Coupling);
    coup.n = vec![32, 64];
    coup.t = 0.25;
    coup.replicas = 100;
    coup.seed = SEED;
    let (ok_c, more) = verdict_lines(&run_coupling_experiment(&coup).unwrap().into_report().unwrap());
    lines.extend(more);
    (ok_s && ok_c, lines)
}

#[test]
fn acceptance() {
    let min = |m: u64| Duration::from_secs(60 * m);
    let outcomes = vec![
        criterion(1, "exact structure", Duration::from_secs(10), exact_structure),
        criterion(2, "PDE self-consistency", Duration::from_secs(60), pde_self_consistency),
        criterion(3, "small-density front v_1", Duration::from_secs(120), small_density_front),
        criterion(4, "boundary flux bound", min(15), flux_bound),
        criterion(5, "hydrodynamic convergence trend", min(45), hydro_trend),
        criterion(6, "front law of large numbers", min(20), front_lln),
        criterion(7, "stationarity and order", min(10), equilibrium_and_order),
    ];
    println!();
    for o in &outcomes {
        println!("{} {}. {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title);
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("criterion {} ({}): {}", o.id, o.title, o.lines.join("; ")))
        .collect();
    assert!(failed.is_empty(), "failed:\n{}", failed.join("\n"));
}
