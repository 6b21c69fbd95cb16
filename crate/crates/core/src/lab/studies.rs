//! Study runners. Every parameter point is computed independently; a failing
//! point becomes an `error` record and the sweep continues.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::config::LabConfig;
use super::record::{ResultRecord, Verdict};
use crate::ensemble::{
    build_grid, log_lstat_det, log_lstat_gamma, norming_ratio, DeformationQ, Ensemble, WeightSpec,
};
use crate::equilibrium::{q0_limit, szego_q0, EquilibriumData};
use crate::fredholm::log_fredholm_det_ft_with;
use crate::idpii::{k_infinity, solve_idpii, tw_local_check_fredholm, IdPiiSolution};
use crate::numerics::PanelScheme;
use crate::special::{f_beta_quad, f_k_closed};
use crate::{Error, Result};

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn equilibrium(cfg: &LabConfig) -> Result<EquilibriumData> {
    EquilibriumData::new(&cfg.potential()?)
}

fn first_deformation(cfg: &LabConfig) -> Result<DeformationQ> {
    cfg.deformations().into_iter().next().expect("validated nonempty")
}

/// Edge parameter of the limiting objects, `t / c_V` unless overridden.
fn effective_t(cfg: &LabConfig, eq: &EquilibriumData) -> f64 {
    cfg.t_param.unwrap_or(cfg.deformation.t / eq.c_v)
}

/// `log det(I - K_T)` on `(-s_arg, inf)`; the kernel is negligible beyond 30.
fn fredholm_target(cfg: &LabConfig, s_arg: f64, t_kpz: f64, m: usize) -> Result<f64> {
    if s_arg < -30.0 {
        return Ok(0.0);
    }
    log_fredholm_det_ft_with(s_arg, t_kpz, m, cfg.fredholm.semi_infinite_map())
}

fn setup_failure(study: &str, e: impl std::fmt::Display) -> Vec<ResultRecord> {
    vec![ResultRecord::failed(study, "setup", &[], e)]
}

fn solve_at(cfg: &LabConfig, big_t: f64) -> Result<IdPiiSolution> {
    solve_idpii(&cfg.idpii.solver_config(big_t))
}

/// Finite-n statistic against its Airy-side limit.
pub fn run_theorem1(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "theorem1";
    let eq = match equilibrium(cfg) {
        Ok(e) => e,
        Err(e) => return setup_failure(STUDY, e),
    };
    let q = match first_deformation(cfg) {
        Ok(q) => q,
        Err(e) => return setup_failure(STUDY, e),
    };
    let (t, c) = (cfg.deformation.t, eq.c_v);
    let targets: Vec<Result<f64>> = cfg
        .s_list
        .par_iter()
        .map(|&s| fredholm_target(cfg, -s * c / t, (t / c).powi(3), cfg.fredholm.m))
        .collect();
    let points: Vec<(usize, f64, usize)> = cfg
        .s_list
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| cfg.n_list.iter().map(move |&n| (n, s, i)))
        .collect();
    let mut records: Vec<ResultRecord> = points
        .par_iter()
        .map(|&(n, s, i)| {
            let params = [("n", n as f64), ("s", s)];
            let run = || -> Result<ResultRecord> {
                let spec = WeightSpec::new(n, s, q.clone())?;
                let g = log_lstat_gamma(&eq, &spec)?;
                let d = log_lstat_det(&eq, &spec)?;
                let target = targets[i].clone()?;
                let gap = (g - d).abs();
                Ok(ResultRecord::new(STUDY, "log_l", &params, g)
                    .with_aux("log_l_det", d)
                    .with_aux("target", target)
                    .with_aux("error", (g - target).abs())
                    .with_aux("route_gap", gap)
                    .with_verdict(Verdict::from_check(gap <= 1e-6 * (1.0 + g.abs()))))
            };
            run().unwrap_or_else(|e| ResultRecord::failed(STUDY, "log_l", &params, e))
        })
        .collect();
    for &s in &cfg.s_list {
        let rows: Vec<&ResultRecord> = records
            .iter()
            .filter(|r| r.param("s") == Some(s) && r.verdict != Verdict::Error)
            .collect();
        records.push(convergence_summary(STUDY, s, &rows, -0.3, cfg.n_list.len()));
    }
    records
}

/// Slope and monotonicity of the `error` column over `n`.
fn convergence_summary(study: &str, s: f64, rows: &[&ResultRecord], max_slope: f64, expected: usize) -> ResultRecord {
    let ns: Vec<f64> = rows.iter().map(|r| r.param("n").unwrap()).collect();
    let es: Vec<f64> = rows.iter().map(|r| r.aux_value("error").unwrap()).collect();
    if rows.len() != expected || rows.len() < 2 || es.iter().any(|e| !(*e > 0.0)) {
        return ResultRecord::failed(study, "slope", &[("s", s)], "not enough finite error values to fit a slope");
    }
    let slope = loglog_slope(&ns, &es);
    let dec = strictly_decreasing(&es);
    let mut r = ResultRecord::new(study, "slope", &[("s", s)], slope)
        .with_aux("decreasing", if dec { 1.0 } else { 0.0 })
        .with_verdict(Verdict::from_check(dec && slope <= max_slope));
    for (n, e) in ns.iter().zip(&es) {
        r = r.with_aux(&format!("error_n{}", *n as usize), *e);
    }
    r
}

const KERNEL_GRID: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];

/// Rescaled correlation kernel against the limiting kernel.
pub fn run_theorem2(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "theorem2";
    let setup = || -> Result<(EquilibriumData, DeformationQ, f64, IdPiiSolution)> {
        let eq = equilibrium(cfg)?;
        let q = first_deformation(cfg)?;
        let te = effective_t(cfg, &eq);
        let sol = solve_at(cfg, te.powf(-1.5))?;
        Ok((eq, q, te, sol))
    };
    let (eq, q, te, sol) = match setup() {
        Ok(v) => v,
        Err(e) => return setup_failure(STUDY, e),
    };
    let points: Vec<(usize, f64)> = cfg
        .s_list
        .iter()
        .flat_map(|&s| cfg.n_list.iter().map(move |&n| (n, s)))
        .collect();
    let mut records: Vec<ResultRecord> = points
        .par_iter()
        .map(|&(n, s)| {
            let params = [("n", n as f64), ("s", s)];
            let run = || -> Result<ResultRecord> {
                let e = Ensemble::new(&eq, WeightSpec::new(n, s, q.clone())?)?;
                let mut err: f64 = 0.0;
                let mut asym: f64 = 0.0;
                let mut min_diag = f64::INFINITY;
                for &u in &KERNEL_GRID {
                    for &v in &KERNEL_GRID {
                        let kn = e.rescaled_edge_kernel(u, v);
                        let ki = k_infinity(&sol, u, v, s, te)?;
                        err = err.max((kn - ki).abs());
                        asym = asym
                            .max((kn - e.rescaled_edge_kernel(v, u)).abs())
                            .max((ki - k_infinity(&sol, v, u, s, te)?).abs());
                        if u == v {
                            min_diag = min_diag.min(kn).min(ki);
                        }
                    }
                }
                let ok = asym <= 1e-10 && min_diag > 0.0;
                Ok(ResultRecord::new(STUDY, "sup_error", &params, err)
                    .with_aux("error", err)
                    .with_aux("k_n_00", e.rescaled_edge_kernel(0.0, 0.0))
                    .with_aux("k_inf_00", k_infinity(&sol, 0.0, 0.0, s, te)?)
                    .with_aux("max_asymmetry", asym)
                    .with_aux("min_diagonal", min_diag)
                    .with_verdict(Verdict::from_check(ok)))
            };
            run().unwrap_or_else(|e| ResultRecord::failed(STUDY, "sup_error", &params, e))
        })
        .collect();
    for &s in &cfg.s_list {
        let rows: Vec<&ResultRecord> = records
            .iter()
            .filter(|r| r.param("s") == Some(s) && r.verdict != Verdict::Error)
            .collect();
        records.push(convergence_summary(STUDY, s, &rows, -0.2, cfg.n_list.len()));
    }
    records
}

/// Norming-constant ratio and its `n^{-1/3}` correction.
pub fn run_theorem3(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "theorem3";
    const CONTROL_S: f64 = 40.0;
    let setup = || -> Result<(EquilibriumData, Vec<DeformationQ>, f64, IdPiiSolution)> {
        let eq = equilibrium(cfg)?;
        let qs = cfg.deformations().into_iter().collect::<Result<Vec<_>>>()?;
        let te = effective_t(cfg, &eq);
        let sol = solve_at(cfg, te.powf(-1.5))?;
        Ok((eq, qs, te, sol))
    };
    let (eq, qs, te, sol) = match setup() {
        Ok(v) => v,
        Err(e) => return setup_failure(STUDY, e),
    };
    let mut s_all = cfg.s_list.clone();
    if !s_all.contains(&CONTROL_S) {
        s_all.push(CONTROL_S);
    }
    let mut points = Vec::new();
    for (qi, _) in qs.iter().enumerate() {
        for &s in &s_all {
            if s == CONTROL_S && qi > 0 && !cfg.s_list.contains(&CONTROL_S) {
                continue;
            }
            for &n in &cfg.n_list {
                points.push((n, qi, s));
            }
        }
    }
    let rows: Vec<(usize, usize, f64, Result<f64>)> = points
        .par_iter()
        .map(|&(n, qi, s)| {
            let rho = WeightSpec::new(n, s, qs[qi].clone()).and_then(|sp| norming_ratio(&eq, &sp));
            (n, qi, s, rho)
        })
        .collect();
    let c_of = |n: usize, qi: usize, s: f64| -> Option<f64> {
        rows.iter()
            .find(|r| r.0 == n && r.1 == qi && r.2 == s)
            .and_then(|r| r.3.as_ref().ok())
            .map(|rho| (n as f64).cbrt() * (0.5 - rho))
    };
    let mut records = Vec::new();
    for (n, qi, s, rho) in &rows {
        let params = [("n", *n as f64), ("q", *qi as f64), ("s", *s)];
        records.push(match rho {
            Ok(rho) => ResultRecord::new(STUDY, "norming_ratio", &params, *rho)
                .with_aux("c_n", (*n as f64).cbrt() * (0.5 - rho))
                .with_note(if *s == CONTROL_S { "undeformed control" } else { "" }),
            Err(e) => ResultRecord::failed(STUDY, "norming_ratio", &params, e),
        });
    }
    let n_max = *cfg.n_list.last().unwrap();
    for &s in &cfg.s_list {
        // Leading term.
        let rho = rows.iter().find(|r| r.0 == n_max && r.1 == 0 && r.2 == s).and_then(|r| r.3.as_ref().ok().copied());
        records.push(match rho {
            Some(rho) => ResultRecord::new(STUDY, "leading_term", &[("s", s)], (rho - 0.5).abs())
                .with_aux("n", n_max as f64)
                .with_verdict(Verdict::from_check((rho - 0.5).abs() <= 0.1)),
            None => ResultRecord::failed(STUDY, "leading_term", &[("s", s)], "missing norming ratio"),
        });
        if qs.len() >= 2 {
            let diffs: Vec<Option<f64>> = cfg
                .n_list
                .iter()
                .map(|&n| Some((c_of(n, 0, s)? - c_of(n, 1, s)?).abs()))
                .collect();
            for (&n, d) in cfg.n_list.iter().zip(&diffs) {
                let params = [("n", n as f64), ("s", s)];
                records.push(match d {
                    Some(d) => ResultRecord::new(STUDY, "q_universality", &params, *d),
                    None => ResultRecord::failed(STUDY, "q_universality", &params, "missing c_n"),
                });
            }
            let ds: Option<Vec<f64>> = diffs.into_iter().collect();
            records.push(match ds {
                Some(ds) => ResultRecord::new(STUDY, "q_universality_trend", &[("s", s)], ds[ds.len() - 1])
                    .with_verdict(Verdict::from_check(strictly_decreasing(&ds))),
                None => ResultRecord::failed(STUDY, "q_universality_trend", &[("s", s)], "missing c_n"),
            });
        }
    }
    // S-differences against the id-PII antiderivative.
    let big_t = sol.t;
    let pred = |s: f64| -> Result<f64> {
        let big_s = s * big_t;
        Ok(te.powf(-0.5) * (sol.p_at(big_s)? - big_s * big_s / (4.0 * big_t)))
    };
    for w in cfg.s_list.windows(2) {
        let (sa, sb) = (w[0], w[1]);
        let dp = pred(sb).and_then(|b| Ok(b - pred(sa)?));
        for &n in &cfg.n_list {
            let params = [("n", n as f64), ("s_a", sa), ("s_b", sb)];
            let dc = c_of(n, 0, sb).zip(c_of(n, 0, sa)).map(|(b, a)| b - a);
            records.push(match (&dp, dc) {
                (Ok(dp), Some(dc)) => ResultRecord::new(STUDY, "s_difference", &params, dc)
                    .with_aux("predicted", *dp)
                    .with_aux("ratio", dc / dp),
                (Err(e), _) => ResultRecord::failed(STUDY, "s_difference", &params, e),
                (_, None) => ResultRecord::failed(STUDY, "s_difference", &params, "missing c_n"),
            });
        }
    }
    records
}

fn record_check(study: &str, quantity: &str, params: &[(&str, f64)], r: Result<(f64, bool)>) -> ResultRecord {
    match r {
        Ok((v, ok)) => ResultRecord::new(study, quantity, params, v).with_verdict(Verdict::from_check(ok)),
        Err(e) => ResultRecord::failed(study, quantity, params, e),
    }
}

/// Internal consistency checks across the modules.
pub fn run_crosschecks(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "crosschecks";
    let setup = || -> Result<(EquilibriumData, DeformationQ)> { Ok((equilibrium(cfg)?, first_deformation(cfg)?)) };
    let (eq, q) = match setup() {
        Ok(v) => v,
        Err(e) => return setup_failure(STUDY, e),
    };
    type Job<'a> = Box<dyn Fn() -> Vec<ResultRecord> + Send + Sync + 'a>;
    let mut jobs: Vec<Job> = Vec::new();

    for n in [5usize, 10, 20] {
        for s in [0.0, 2.0] {
            let (eq, q) = (&eq, &q);
            jobs.push(Box::new(move || {
                let r = (|| {
                    let e = Ensemble::new(eq, WeightSpec::new(n, s, q.clone())?)?;
                    let fine = build_grid(eq, 2 * n + 7)?;
                    let tr = e.trace_integral(&fine);
                    Ok((tr, (tr - n as f64).abs() <= 1e-8 * n as f64))
                })();
                vec![record_check(STUDY, "trace_identity", &[("n", n as f64), ("s", s)], r)]
            }));
        }
    }
    for (n, lo, hi) in [(64usize, 0.85, 1.15), (256, 0.93, 1.07)] {
        let (eq, q) = (&eq, &q);
        jobs.push(Box::new(move || {
            let r = (|| {
                let ratio = (n as f64).cbrt() * szego_q0(eq, q.poly(), n, 0.0)? / q0_limit(0.0, q.t(), eq.a)?;
                Ok((ratio, (lo..=hi).contains(&ratio)))
            })();
            vec![record_check(STUDY, "q0_ratio", &[("n", n as f64)], r)]
        }));
    }
    jobs.push(Box::new(|| {
        let mut out = Vec::new();
        for k in [1u32, 2, 3] {
            for y in [0.0, 0.5, 2.0, 5.0] {
                let r = (|| {
                    let d = (f_beta_quad(k as f64, y)? - f_k_closed(k, y)?).abs();
                    Ok((d, d <= 1e-10))
                })();
                out.push(record_check(STUDY, "polylog_identity", &[("k", k as f64), ("y", y)], r));
            }
        }
        let r = f_beta_quad(0.0, 0.0).map(|v| {
            let d = (v - PI * PI / 12.0).abs();
            (d, d <= 1e-12)
        });
        out.push(record_check(STUDY, "f0_at_zero", &[], r));
        out
    }));
    let m = cfg.fredholm.m;
    let map = cfg.fredholm.semi_infinite_map();
    for &tk in &cfg.fredholm.t_values {
        for &s in &cfg.fredholm.s_values {
            jobs.push(Box::new(move || {
                let r = (|| {
                    let a = log_fredholm_det_ft_with(s, tk, m / 2, map)?.exp();
                    let b = log_fredholm_det_ft_with(s, tk, m, map)?.exp();
                    let d = (a - b).abs();
                    Ok((d, d < 1e-8 && b > 0.0 && b <= 1.0))
                })();
                vec![record_check(STUDY, "fredholm_self_convergence", &[("s", s), ("T", tk)], r)]
            }));
        }
    }
    jobs.push(Box::new(move || {
        let sol = match solve_at(cfg, 1.0) {
            Ok(s) => s,
            Err(e) => return vec![ResultRecord::failed(STUDY, "tw_local_check", &[], e)],
        };
        [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|&sv| match tw_local_check_fredholm(&sol, sv, m) {
                Ok(c) => ResultRecord::new(STUDY, "tw_local_check", &[("S", sv)], c.residual)
                    .with_aux("second_difference", c.second_difference)
                    .with_aux("i_of_s", c.i_of_s)
                    .with_aux("residual_with_linear_term", c.residual_with_linear_term)
                    .with_verdict(Verdict::from_check(c.residual <= 2e-3)),
                Err(e) => ResultRecord::failed(STUDY, "tw_local_check", &[("S", sv)], e),
            })
            .collect()
    }));
    for n in [8usize, 16, 32] {
        for s in [-1.0, 0.0, 1.0] {
            let (eq, q) = (&eq, &q);
            jobs.push(Box::new(move || {
                let r = (|| {
                    let spec = WeightSpec::new(n, s, q.clone())?;
                    let g = log_lstat_gamma(eq, &spec)?;
                    let d = log_lstat_det(eq, &spec)?;
                    Ok(((g - d).abs(), (g - d).abs() <= 1e-6 * (1.0 + g.abs())))
                })();
                vec![record_check(STUDY, "route_agreement", &[("n", n as f64), ("s", s)], r)]
            }));
        }
    }
    for s in [-1.0, 0.0, 2.0] {
        let (eq, q) = (&eq, &q);
        jobs.push(Box::new(move || {
            let r = (|| {
                let spec = WeightSpec::new(1, s, q.clone())?;
                let oracle = single_particle_log_l(eq, &spec)?;
                let g = log_lstat_gamma(eq, &spec)?;
                let d = log_lstat_det(eq, &spec)?;
                let err = (g - oracle).abs().max((d - oracle).abs());
                Ok((err, err <= 1e-8))
            })();
            vec![record_check(STUDY, "single_particle", &[("s", s)], r)]
        }));
    }
    {
        let eq = &eq;
        jobs.push(Box::new(move || {
            let gap = (eq.ell - eq.ell_asymptotic).abs();
            let mass = eq.mass();
            vec![
                ResultRecord::new(STUDY, "lagrange_routes", &[], gap).with_verdict(Verdict::from_check(gap <= 1e-7)),
                record_check(STUDY, "mass", &[], mass.map(|m| ((m - 1.0).abs(), (m - 1.0).abs() <= 1e-10))),
            ]
        }));
    }
    jobs.par_iter().flat_map_iter(|j| j()).collect()
}

/// `log(int sigma_1 e^{-V} / int e^{-V})` on a uniform grid independent of the ensemble grid.
pub fn single_particle_log_l(eq: &EquilibriumData, spec: &WeightSpec) -> Result<f64> {
    if spec.n != 1 {
        return Err(Error::Domain("single-particle oracle needs n = 1".into()));
    }
    let (lo, hi) = (-eq.a - 12.0, 12.0);
    let (x, w) = PanelScheme::uniform(lo, hi, 600, 16)?.nodes_weights()?;
    let vmin = x.iter().map(|&x| eq.potential.eval(x)).fold(f64::INFINITY, f64::min);
    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &w) in x.iter().zip(&w) {
        let e = (vmin - eq.potential.eval(x)).exp();
        num += w * e * spec.log_sigma(x).exp();
        den += w * e;
    }
    Ok((num / den).ln())
}

/// Fredholm determinants over the configured `(s, T)` grid.
pub fn run_fredholm(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "fredholm";
    let m = cfg.fredholm.m;
    let map = cfg.fredholm.semi_infinite_map();
    let points: Vec<(f64, f64)> = cfg
        .fredholm
        .t_values
        .iter()
        .flat_map(|&t| cfg.fredholm.s_values.iter().map(move |&s| (s, t)))
        .collect();
    let mut records: Vec<ResultRecord> = points
        .par_iter()
        .map(|&(s, t)| {
            let params = [("s", s), ("T", t)];
            let run = || -> Result<ResultRecord> {
                let l = log_fredholm_det_ft_with(s, t, m, map)?;
                let half = log_fredholm_det_ft_with(s, t, m / 2, map)?;
                let d = (l.exp() - half.exp()).abs();
                Ok(ResultRecord::new(STUDY, "det", &params, l.exp())
                    .with_aux("log_det", l)
                    .with_aux("half_m_difference", d)
                    .with_verdict(Verdict::from_check(d < 1e-8 && l <= 0.0)))
            };
            run().unwrap_or_else(|e| ResultRecord::failed(STUDY, "det", &params, e))
        })
        .collect();
    for &t in &cfg.fredholm.t_values {
        let mut vals: Vec<(f64, f64)> = records
            .iter()
            .filter(|r| r.param("T") == Some(t) && r.verdict != Verdict::Error)
            .map(|r| (r.param("s").unwrap(), r.value))
            .collect();
        vals.sort_by(|a, b| a.0.total_cmp(&b.0));
        let dets: Vec<f64> = vals.iter().map(|v| v.1).collect();
        records.push(if dets.len() == cfg.fredholm.s_values.len() {
            ResultRecord::new(STUDY, "monotone_in_s", &[("T", t)], dets.len() as f64)
                .with_verdict(Verdict::from_check(strictly_decreasing(&dets)))
        } else {
            ResultRecord::failed(STUDY, "monotone_in_s", &[("T", t)], "some determinants failed")
        });
    }
    records
}

/// Snapshot of an id-PII solution on a coarse `S` grid.
pub fn run_idpii(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "idpii";
    let setup = || -> Result<IdPiiSolution> {
        let big_t = match cfg.idpii.t {
            Some(t) => t,
            None => effective_t(cfg, &equilibrium(cfg)?).powf(-1.5),
        };
        solve_at(cfg, big_t)
    };
    let sol = match setup() {
        Ok(s) => s,
        Err(e) => return setup_failure(STUDY, e),
    };
    let mut records = Vec::new();
    let (lo, hi) = (sol.s_min(), sol.s_max());
    let mut k = (lo * 2.0).ceil() as i64;
    while (k as f64) * 0.5 <= hi + 1e-12 {
        let s = k as f64 * 0.5;
        let params = [("T", sol.t), ("S", s)];
        let r = (|| -> Result<ResultRecord> {
            let (phi, dphi) = sol.interp_phi(0.0, s)?;
            Ok(ResultRecord::new(STUDY, "layer", &params, sol.i_at(s)?)
                .with_aux("p", sol.p_at(s)?)
                .with_aux("phi_0", phi)
                .with_aux("dphi_0", dphi))
        })();
        records.push(r.unwrap_or_else(|e| ResultRecord::failed(STUDY, "layer", &params, e)));
        k += 1;
    }
    let min_i = sol.i_steps.iter().copied().fold(f64::INFINITY, f64::min);
    records.push(
        ResultRecord::new(STUDY, "i_nonnegative", &[("T", sol.t)], min_i).with_verdict(Verdict::from_check(min_i >= 0.0)),
    );
    records.push(
        ResultRecord::new(STUDY, "boundary_guard", &[("T", sol.t)], sol.boundary_ratio)
            .with_verdict(Verdict::from_check(!sol.truncation_flag)),
    );
    records
}

/// Equilibrium measure and edge data of the configured potential.
pub fn run_eqmeasure(cfg: &LabConfig) -> Vec<ResultRecord> {
    const STUDY: &str = "eqmeasure";
    let eq = match equilibrium(cfg) {
        Ok(e) => e,
        Err(e) => return setup_failure(STUDY, e),
    };
    let mut records = vec![
        ResultRecord::new(STUDY, "b_minus", &[], eq.b_minus),
        ResultRecord::new(STUDY, "b_plus", &[], eq.b_plus),
        ResultRecord::new(STUDY, "a", &[], eq.a),
        ResultRecord::new(STUDY, "c_v", &[], eq.c_v),
        ResultRecord::new(STUDY, "ell", &[], eq.ell)
            .with_aux("ell_asymptotic", eq.ell_asymptotic)
            .with_verdict(Verdict::from_check((eq.ell - eq.ell_asymptotic).abs() <= 1e-7)),
    ];
    for (k, c) in eq.h.coeffs().iter().enumerate() {
        records.push(ResultRecord::new(STUDY, "h_coefficient", &[("k", k as f64)], *c));
    }
    records.push(match eq.mass() {
        Ok(m) => ResultRecord::new(STUDY, "mass", &[], m).with_verdict(Verdict::from_check((m - 1.0).abs() <= 1e-10)),
        Err(e) => ResultRecord::failed(STUDY, "mass", &[], e),
    });
    let a = eq.a;
    for x in [-a - 1.0, -a - 0.5, -0.75 * a, -0.5 * a, -0.25 * a, 0.5, 1.0] {
        let inside = (-a..=0.0).contains(&x);
        records.push(match eq.el_residual(x) {
            Ok(r) => {
                let ok = if inside { r.abs() <= 1e-8 } else { r > 0.0 };
                ResultRecord::new(STUDY, "el_residual", &[("x", x)], r).with_verdict(Verdict::from_check(ok))
            }
            Err(e) => ResultRecord::failed(STUDY, "el_residual", &[("x", x)], e),
        });
    }
    records
}
