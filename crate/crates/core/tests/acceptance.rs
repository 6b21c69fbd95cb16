//! Acceptance suite: one line per criterion, exit status 1 if any fails.

use std::time::Instant;

use edgelab::equilibrium::{szego_q0, q0_limit, EquilibriumData, Potential};
use edgelab::ensemble::DeformationQ;
use edgelab::fredholm::{fredholm_det_airy, fredholm_det_ft};
use edgelab::idpii::{airy_boundary_data, solve_idpii, IdPiiConfig};
use edgelab::lab::{run_study, LabConfig, ResultRecord, RunContext, Study, Verdict};
use edgelab::Result;

const SHIFTED_GUE: [f64; 3] = [2.0, 4.0, 2.0];
const QUARTIC: [f64; 5] = [0.0, 0.0, 0.5, 0.0, 0.05];

type Check<'a> = Box<dyn Fn() -> Result<Outcome> + 'a>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn config(potential: &[f64]) -> LabConfig {
    let mut cfg = LabConfig::with_potential(potential.to_vec());
    cfg.deformation.higher = vec![vec![], vec![0.0, -0.1]];
    cfg
}

fn study(s: Study, cfg: &LabConfig) -> Vec<ResultRecord> {
    run_study(s, cfg, 1, &RunContext::new(cfg))
}

fn select<'a>(records: &'a [ResultRecord], quantity: &str) -> Vec<&'a ResultRecord> {
    records.iter().filter(|r| r.quantity == quantity).collect()
}

/// All selected rows pass, with the largest `value` for the report.
fn all_pass(rows: &[&ResultRecord]) -> (bool, f64, usize) {
    let ok = !rows.is_empty() && rows.iter().all(|r| r.verdict == Verdict::Pass);
    let worst = rows.iter().map(|r| r.value).fold(0.0, f64::max);
    (ok, worst, rows.len())
}

fn errors(rows: &[&ResultRecord]) -> String {
    rows.iter()
        .filter(|r| r.verdict != Verdict::Pass)
        .map(|r| format!("{}: {}", r.quantity, if r.note.is_empty() { r.verdict.as_str() } else { &r.note }))
        .map(|e| format!("; {e}"))
        .collect()
}

fn c1_trace(cross: &[ResultRecord]) -> Result<Outcome> {
    let rows = select(cross, "trace_identity");
    let rel = rows
        .iter()
        .map(|r| (r.value - r.param("n").unwrap()).abs() / r.param("n").unwrap())
        .fold(0.0, f64::max);
    outcome(all_pass(&rows).0 && rows.len() == 6, format!("max |tr - n|/n = {rel:.2e} over {} points", rows.len()))
}

fn c2_routes(cross_gue: &[ResultRecord], cross_quartic: &[ResultRecord]) -> Result<Outcome> {
    let a = select(cross_gue, "route_agreement");
    let b = select(cross_quartic, "route_agreement");
    let (ok_a, wa, na) = all_pass(&a);
    let (ok_b, wb, nb) = all_pass(&b);
    outcome(
        ok_a && ok_b && na == 9 && nb == 9,
        format!("max gap {wa:.2e} (shifted GUE), {wb:.2e} (quartic){}", errors(&a) + &errors(&b)),
    )
}

fn c3_single(cross: &[ResultRecord]) -> Result<Outcome> {
    let rows = select(cross, "single_particle");
    let (ok, worst, n) = all_pass(&rows);
    outcome(ok, format!("max deviation {worst:.2e} over {n} values of s"))
}

fn slope_summary(records: &[ResultRecord]) -> (bool, String) {
    let rows = select(records, "slope");
    let ok = rows.len() == 2 && rows.iter().all(|r| r.verdict == Verdict::Pass);
    let text = rows
        .iter()
        .map(|r| {
            format!(
                "s={}: slope {:.3}, errors {:.3e} {:.3e} {:.3e}",
                r.param("s").unwrap_or(f64::NAN),
                r.value,
                r.aux_value("error_n16").unwrap_or(f64::NAN),
                r.aux_value("error_n32").unwrap_or(f64::NAN),
                r.aux_value("error_n64").unwrap_or(f64::NAN)
            )
        })
        .collect::<Vec<_>>()
        .join("; ");
    (ok && records.iter().all(|r| r.verdict != Verdict::Error), text)
}

fn c4_theorem1(cfg: &LabConfig) -> Result<Outcome> {
    let recs = study(Study::Theorem1, cfg);
    let (ok, text) = slope_summary(&recs);
    outcome(ok, text)
}

fn c5_theorem2(cfg: &LabConfig) -> Result<Outcome> {
    let recs = study(Study::Theorem2, cfg);
    let (ok, text) = slope_summary(&recs);
    outcome(ok, text)
}

fn c6_theorem3(cfg: &LabConfig) -> Result<Outcome> {
    let recs = study(Study::Theorem3, cfg);
    let lead = select(&recs, "leading_term");
    let trend = select(&recs, "q_universality_trend");
    let rho64 = recs
        .iter()
        .find(|r| r.quantity == "norming_ratio" && r.param("n") == Some(64.0) && r.param("q") == Some(0.0) && r.param("s") == Some(0.0))
        .map(|r| r.value)
        .unwrap_or(f64::NAN);
    let diffs: Vec<String> = select(&recs, "q_universality")
        .iter()
        .filter(|r| r.param("s") == Some(0.0))
        .map(|r| format!("{:.2e}", r.value))
        .collect();
    let ok = all_pass(&lead).0 && all_pass(&trend).0 && recs.iter().all(|r| r.verdict != Verdict::Error);
    outcome(ok, format!("rho_64(s=0) = {rho64:.4}; |c(Q1) - c(Q2)| at s=0: {}", diffs.join(", ")))
}

fn c7_fredholm(cfg: &LabConfig) -> Result<Outcome> {
    let mut cfg = cfg.clone();
    cfg.fredholm.m = 80;
    let recs = study(Study::Fredholm, &cfg);
    let dets = select(&recs, "det");
    let mono = select(&recs, "monotone_in_s");
    let worst = dets.iter().filter_map(|r| r.aux_value("half_m_difference")).fold(0.0, f64::max);
    let ok = all_pass(&dets).0 && all_pass(&mono).0 && dets.len() == 9;
    outcome(ok, format!("max |det(m=40) - det(m=80)| = {worst:.2e}, monotone in s for all T"))
}

fn c8_classical_limit() -> Result<Outcome> {
    let ft = fredholm_det_ft(0.0, 4000.0, 80)?;
    let a80 = fredholm_det_airy(0.0, 80)?;
    let a160 = fredholm_det_airy(0.0, 160)?;
    let gap = (ft - a80).abs();
    let stab = (a80 - a160).abs();
    outcome(
        gap <= 5e-3 && stab <= 1e-8 && (a80 - 0.96937).abs() < 1e-5,
        format!("|det_ft(0, 4000) - det_airy(0)| = {gap:.2e}, det_airy(0) = {a80:.12}, m-doubling change {stab:.1e}"),
    )
}

fn c9_tw(cross: &[ResultRecord]) -> Result<Outcome> {
    let rows = select(cross, "tw_local_check");
    let (ok, worst, n) = all_pass(&rows);
    outcome(ok && n == 4, format!("max residual {worst:.2e} over S = 0..3"))
}

fn c10_polylog(cross: &[ResultRecord]) -> Result<Outcome> {
    let rows = select(cross, "polylog_identity");
    let f0 = select(cross, "f0_at_zero");
    let (ok, worst, n) = all_pass(&rows);
    outcome(
        ok && n == 12 && all_pass(&f0).0,
        format!("max |quad - closed| = {worst:.2e}; |F0(0) - pi^2/12| = {:.2e}", f0.first().map_or(f64::NAN, |r| r.value)),
    )
}

fn c11_szego() -> Result<Outcome> {
    let eq = EquilibriumData::new(&Potential::new(SHIFTED_GUE.to_vec())?)?;
    let q = DeformationQ::new(vec![0.0, -1.0])?;
    let lim = q0_limit(0.0, 1.0, eq.a)?;
    let r64 = 64f64.cbrt() * szego_q0(&eq, q.poly(), 64, 0.0)? / lim;
    let r256 = 256f64.cbrt() * szego_q0(&eq, q.poly(), 256, 0.0)? / lim;
    outcome(
        (0.85..=1.15).contains(&r64) && (0.93..=1.07).contains(&r256),
        format!("ratio {r64:.5} at n = 64, {r256:.5} at n = 256"),
    )
}

fn c12_equilibrium() -> Result<Outcome> {
    let v = Potential::new(vec![0.0, 0.0, 2.0])?;
    let eq = EquilibriumData::new(&v)?;
    let shifted = EquilibriumData::new(&Potential::new(SHIFTED_GUE.to_vec())?)?;
    let ends = (eq.b_minus + 1.0).abs().max((eq.b_plus - 1.0).abs());
    let cv = (shifted.c_v - 2.0).abs();
    let mass = (eq.mass()? - 1.0).abs();
    let a = eq.a;
    let mut inside: f64 = 0.0;
    for x in [-0.9 * a, -0.6 * a, -0.3 * a, -0.05 * a] {
        inside = inside.max(eq.el_residual(x)?.abs());
    }
    let mut outside = f64::INFINITY;
    for x in [-a - 2.0, -a - 0.3, 0.3, 2.0] {
        outside = outside.min(eq.el_residual(x)?);
    }
    outcome(
        ends <= 1e-10 && cv <= 1e-8 && mass <= 1e-10 && inside <= 1e-8 && outside > 0.0,
        format!(
            "endpoint error {ends:.1e}, |c_V - 2| = {cv:.1e}, |mass - 1| = {mass:.1e}, EL residual inside {inside:.1e}, min outside {outside:.3}"
        ),
    )
}

fn c13_idpii() -> Result<Outcome> {
    let cfg = IdPiiConfig::new(1.0);
    let sol = solve_idpii(&cfg)?;
    let fine = solve_idpii(&IdPiiConfig { n_steps: 2 * cfg.n_steps, ..cfg.clone() })?;
    let ode = sol.ode_self_residual();
    let mut doubling: f64 = 0.0;
    for s in [-2.0, -1.0, 0.0, 1.0, 2.0, 5.0, 10.0] {
        doubling = doubling.max((sol.i_at(s)? - fine.i_at(s)?).abs());
    }
    let min_i = sol.i_steps.iter().copied().fold(f64::INFINITY, f64::min);
    let mut exact = sol.s_grid[0] == cfg.s_max;
    for (k, &x) in sol.xi.iter().enumerate() {
        let (p, d) = airy_boundary_data(1.0, x, cfg.s_max)?;
        exact &= sol.phi[0][k] == p && sol.dphi[0][k] == d;
    }
    outcome(
        ode <= 5e-4 && doubling <= 1e-6 && min_i >= 0.0 && exact,
        format!("ODE self-residual {ode:.2e}, step doubling {doubling:.2e}, min I = {min_i:.2e}, initial data exact: {exact}"),
    )
}

fn main() {
    let gue = config(&SHIFTED_GUE);
    let quartic = config(&QUARTIC);
    let t0 = Instant::now();
    let cross_gue = study(Study::Crosschecks, &gue);
    let cross_quartic = study(Study::Crosschecks, &quartic);
    println!("crosschecks computed in {:.1} s", t0.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Check)> = vec![
        ("trace identity", Box::new(|| c1_trace(&cross_gue))),
        ("log L route agreement", Box::new(|| c2_routes(&cross_gue, &cross_quartic))),
        ("n = 1 oracle", Box::new(|| c3_single(&cross_gue))),
        ("log L convergence to the Airy-side limit", Box::new(|| c4_theorem1(&gue))),
        ("edge kernel convergence", Box::new(|| c5_theorem2(&gue))),
        ("norming ratio and Q-universality", Box::new(|| c6_theorem3(&gue))),
        ("Fredholm self-convergence", Box::new(|| c7_fredholm(&gue))),
        ("finite-temperature to classical Airy", Box::new(c8_classical_limit)),
        ("id-PII and Fredholm consistency", Box::new(|| c9_tw(&cross_gue))),
        ("polylog identity", Box::new(|| c10_polylog(&cross_gue))),
        ("Szego constant", Box::new(c11_szego)),
        ("equilibrium closed forms", Box::new(c12_equilibrium)),
        ("id-PII internal checks", Box::new(c13_idpii)),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failures += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({detail}; {:.1} s)",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
