//! Integro-differential Painleve II system with Airy boundary data.
//!
//! For fixed `T > 0` the unknown `Phi(xi | S)` solves
//! `d^2 Phi / dS^2 = (xi + S/T + 2 I(S) / T) Phi`, with
//! `I(S) = int Phi(r | S)^2 w(r) dr` and `w` the Fermi derivative weight.
//! The system is shot downward in `S` from Airy data at `S_max`, and
//! `P' = S/(2T) + I/T` is carried along with `P(S_max) = S_max^2 / (4T)`.

use crate::fredholm::log_fredholm_det_ft;
use crate::numerics::Rk4Stepper;
use crate::special::{airy, fermi_weight};
use crate::{Error, Result};

/// Grid and step parameters for [`solve_idpii`].
#[derive(Clone, Debug, PartialEq)]
pub struct IdPiiConfig {
    pub t: f64,
    pub s_min: f64,
    pub s_max: f64,
    pub xi_lo: f64,
    pub xi_hi: f64,
    pub h_xi: f64,
    pub n_steps: usize,
    /// Store `Phi`, `dPhi` every this many RK4 steps.
    pub store_every: usize,
}

impl IdPiiConfig {
    /// Default grids: `xi in [-30, 15]` with spacing 0.04, `S` from
    /// `12 max(T, 1)` down to -2 with steps of 0.005.
    pub fn new(t: f64) -> Self {
        let s_max = 12.0 * t.max(1.0);
        let s_min = -2.0;
        Self {
            t,
            s_min,
            s_max,
            xi_lo: -30.0,
            xi_hi: 15.0,
            h_xi: 0.04,
            n_steps: ((s_max - s_min) / 0.005).round() as usize,
            store_every: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        if !(self.t >= 0.125 - 1e-12 && self.t <= 8.0 + 1e-12) {
            return bad(format!("T = {} outside [1/8, 8]", self.t));
        }
        if !(self.s_max >= 8.0) || !(self.s_min < self.s_max) {
            return bad(format!("need S_max >= 8 and S_min < S_max, got [{}, {}]", self.s_min, self.s_max));
        }
        if !(self.xi_lo <= -25.0 && self.xi_hi >= 12.0) {
            return bad("xi grid must contain [-25, 12]".into());
        }
        if !(self.h_xi > 0.0 && self.h_xi <= 0.05) {
            return bad(format!("h_xi = {} outside (0, 0.05]", self.h_xi));
        }
        if self.n_steps == 0 || self.store_every == 0 {
            return bad("n_steps and store_every must be positive".into());
        }
        Ok(())
    }
}

/// Solution of the system on a `(xi, S)` grid.
#[derive(Clone, Debug)]
pub struct IdPiiSolution {
    pub t: f64,
    pub xi: Vec<f64>,
    /// Stored layers, descending from `S_max`.
    pub s_grid: Vec<f64>,
    pub phi: Vec<Vec<f64>>,
    pub dphi: Vec<Vec<f64>>,
    /// `I` and `P` on the stored layers.
    pub i_of_s: Vec<f64>,
    pub p_of_s: Vec<f64>,
    /// `I` and `P` at every RK4 step (descending `S`).
    pub s_steps: Vec<f64>,
    pub i_steps: Vec<f64>,
    pub p_steps: Vec<f64>,
    /// Largest boundary value of `Phi^2 w` divided by its maximum over the whole `(xi, S)` grid.
    pub boundary_ratio: f64,
    /// Set when the boundary ratio exceeds `1e-10`.
    pub truncation_flag: bool,
    quad: Vec<f64>,
}

/// Composite Simpson weights, with a trapezoid panel at the end for an odd interval count.
fn trapezoid_simpson_weights(n_points: usize, h: f64) -> Vec<f64> {
    let mut w = vec![0.0; n_points];
    let intervals = n_points - 1;
    let even = intervals - intervals % 2;
    for k in (0..even).step_by(2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if even < intervals {
        w[intervals - 1] += h / 2.0;
        w[intervals] += h / 2.0;
    }
    w
}

/// Boundary data `T^{1/6} Ai(T^{2/3} xi + S T^{-1/3})` and its `S`-derivative.
pub fn airy_boundary_data(t: f64, xi: f64, s: f64) -> Result<(f64, f64)> {
    let p = airy(t.powf(2.0 / 3.0) * xi + s / t.cbrt())?;
    Ok((t.powf(1.0 / 6.0) * p.ai, t.powf(-1.0 / 6.0) * p.aip))
}

/// Shoots the system downward from Airy data at `S_max` with RK4.
pub fn solve_idpii(cfg: &IdPiiConfig) -> Result<IdPiiSolution> {
    cfg.validate()?;
    let t = cfg.t;
    let nx = ((cfg.xi_hi - cfg.xi_lo) / cfg.h_xi).round() as usize + 1;
    let xi: Vec<f64> = (0..nx).map(|i| cfg.xi_lo + cfg.h_xi * i as f64).collect();
    let quad: Vec<f64> = trapezoid_simpson_weights(nx, cfg.h_xi)
        .iter()
        .zip(&xi)
        .map(|(q, &x)| q * fermi_weight(x))
        .collect();

    // State layout: [Phi (nx), Psi (nx), P].
    let mut y0 = vec![0.0; 2 * nx + 1];
    for (i, &x) in xi.iter().enumerate() {
        let (p, d) = airy_boundary_data(t, x, cfg.s_max)?;
        y0[i] = p;
        y0[nx + i] = d;
    }
    y0[2 * nx] = cfg.s_max * cfg.s_max / (4.0 * t);

    let integral = |y: &[f64]| -> f64 { y[..nx].iter().zip(&quad).map(|(p, w)| p * p * w).sum() };
    let rhs = |s: f64, y: &[f64], dy: &mut [f64]| {
        let i_val: f64 = y[..nx].iter().zip(&quad).map(|(p, w)| p * p * w).sum();
        let c = s / t + 2.0 * i_val / t;
        for k in 0..nx {
            dy[k] = y[nx + k];
            dy[nx + k] = (xi[k] + c) * y[k];
        }
        dy[2 * nx] = s / (2.0 * t) + i_val / t;
    };

    let h = (cfg.s_min - cfg.s_max) / cfg.n_steps as f64;
    let mut stepper = Rk4Stepper::new(rhs, cfg.s_max, y0, h);
    let mut sol = IdPiiSolution {
        t,
        xi: xi.clone(),
        s_grid: Vec::new(),
        phi: Vec::new(),
        dphi: Vec::new(),
        i_of_s: Vec::new(),
        p_of_s: Vec::new(),
        s_steps: Vec::with_capacity(cfg.n_steps + 1),
        i_steps: Vec::with_capacity(cfg.n_steps + 1),
        p_steps: Vec::with_capacity(cfg.n_steps + 1),
        boundary_ratio: 0.0,
        truncation_flag: false,
        quad: quad.clone(),
    };
    let (mut edge_max, mut peak_max) = (0.0f64, 0.0f64);
    let mut record = |sol: &mut IdPiiSolution, step: usize, s: f64, y: &[f64]| {
        let i_val = integral(y);
        sol.s_steps.push(s);
        sol.i_steps.push(i_val);
        sol.p_steps.push(y[2 * nx]);
        let dens = |k: usize| y[k] * y[k] * fermi_weight(xi[k]);
        peak_max = (0..nx).map(dens).fold(peak_max, f64::max);
        edge_max = edge_max.max(dens(0)).max(dens(nx - 1));
        if step.is_multiple_of(cfg.store_every) || step == cfg.n_steps {
            sol.s_grid.push(s);
            sol.phi.push(y[..nx].to_vec());
            sol.dphi.push(y[nx..2 * nx].to_vec());
            sol.i_of_s.push(i_val);
            sol.p_of_s.push(y[2 * nx]);
        }
    };
    record(&mut sol, 0, cfg.s_max, stepper.state());
    for k in 1..=cfg.n_steps {
        stepper.step().map_err(|e| match e {
            Error::BlowUp { step, .. } => Error::BlowUp {
                step,
                at: cfg.s_max + h * (step - 1) as f64,
            },
            other => other,
        })?;
        let s = if k == cfg.n_steps { cfg.s_min } else { cfg.s_max + h * k as f64 };
        stepper.set_time(s);
        record(&mut sol, k, s, stepper.state());
    }
    sol.boundary_ratio = edge_max / peak_max;
    sol.truncation_flag = sol.boundary_ratio > 1e-10;
    Ok(sol)
}

/// 6-point Lagrange weights (and derivative weights) at `x` for nodes `x0 + h j`.
fn lagrange6(offset: f64) -> ([f64; 6], [f64; 6]) {
    let mut w = [0.0; 6];
    let mut dw = [0.0; 6];
    for j in 0..6 {
        let mut num = 1.0;
        let mut den = 1.0;
        for k in 0..6 {
            if k != j {
                num *= offset - k as f64;
                den *= j as f64 - k as f64;
            }
        }
        w[j] = num / den;
        let mut d = 0.0;
        for m in 0..6 {
            if m == j {
                continue;
            }
            let mut p = 1.0;
            for k in 0..6 {
                if k != j && k != m {
                    p *= offset - k as f64;
                }
            }
            d += p;
        }
        dw[j] = d / den;
    }
    (w, dw)
}

/// Interpolated values at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiValue {
    pub phi: f64,
    pub dphi: f64,
    /// `d Phi / d xi`.
    pub phi_xi: f64,
    /// `d (dPhi/dS) / d xi`.
    pub dphi_xi: f64,
}

impl IdPiiSolution {
    pub fn s_max(&self) -> f64 {
        self.s_grid[0]
    }

    pub fn s_min(&self) -> f64 {
        *self.s_grid.last().unwrap()
    }

    /// `I(S)` from the quadrature on a state vector of `Phi` values.
    pub fn integral_of(&self, phi: &[f64]) -> f64 {
        phi.iter().zip(&self.quad).map(|(p, w)| p * p * w).sum()
    }

    fn step_interp(&self, values: &[f64], s: f64) -> Result<f64> {
        let (hi, lo) = (self.s_steps[0], *self.s_steps.last().unwrap());
        if !(s <= hi + 1e-12 && s >= lo - 1e-12) {
            return Err(Error::OutOfRange(format!("S = {s} outside [{lo}, {hi}]")));
        }
        let n = self.s_steps.len();
        let h = (lo - hi) / (n - 1) as f64;
        let pos = (s - hi) / h;
        let i0 = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let off = pos - i0 as f64;
        let mut v = 0.0;
        for j in 0..4 {
            let mut l = 1.0;
            for k in 0..4 {
                if k != j {
                    l *= (off - k as f64) / (j as f64 - k as f64);
                }
            }
            v += l * values[i0 + j];
        }
        Ok(v)
    }

    /// `I(S)` by cubic interpolation over the RK4 steps.
    pub fn i_at(&self, s: f64) -> Result<f64> {
        self.step_interp(&self.i_steps, s)
    }

    /// `P(S)` by cubic interpolation over the RK4 steps.
    pub fn p_at(&self, s: f64) -> Result<f64> {
        self.step_interp(&self.p_steps, s)
    }

    fn layer_at_xi(&self, layer: usize, xi: f64) -> ([f64; 4], usize) {
        let nx = self.xi.len();
        let h = self.xi[1] - self.xi[0];
        let pos = (xi - self.xi[0]) / h;
        let i0 = (pos.floor() as isize - 2).clamp(0, nx as isize - 6) as usize;
        let (w, dw) = lagrange6(pos - i0 as f64);
        let mut out = [0.0; 4];
        for j in 0..6 {
            out[0] += w[j] * self.phi[layer][i0 + j];
            out[1] += w[j] * self.dphi[layer][i0 + j];
            out[2] += dw[j] * self.phi[layer][i0 + j] / h;
            out[3] += dw[j] * self.dphi[layer][i0 + j] / h;
        }
        let nearest = pos.round();
        if (pos - nearest).abs() < 1e-9 {
            // Return stored values exactly at grid points.
            let k = nearest as usize;
            out[0] = self.phi[layer][k];
            out[1] = self.dphi[layer][k];
        }
        (out, i0)
    }

    /// `Phi`, `dPhi/dS` and their `xi`-derivatives at `(xi, S)`.
    ///
    /// Six-point Lagrange interpolation in `xi` on the two stored layers
    /// bracketing `S`, then cubic Hermite interpolation in `S` using
    /// `d^2 Phi / dS^2 = (xi + S/T + 2I/T) Phi`.
    pub fn interp(&self, xi: f64, s: f64) -> Result<PhiValue> {
        let (x_lo, x_hi) = (self.xi[0], *self.xi.last().unwrap());
        if !(xi >= x_lo && xi <= x_hi) {
            return Err(Error::OutOfRange(format!("xi = {xi} outside [{x_lo}, {x_hi}]")));
        }
        let (s_hi, s_lo) = (self.s_max(), self.s_min());
        if !(s <= s_hi + 1e-12 && s >= s_lo - 1e-12) {
            return Err(Error::OutOfRange(format!("S = {s} outside [{s_lo}, {s_hi}]")));
        }
        let nl = self.s_grid.len();
        // Layers are descending; find j with s_grid[j] >= s >= s_grid[j+1].
        let mut j = self.s_grid.partition_point(|&v| v > s).saturating_sub(1);
        j = j.min(nl - 2);
        if self.s_grid[j] == s {
            let (v, _) = self.layer_at_xi(j, xi);
            return Ok(PhiValue { phi: v[0], dphi: v[1], phi_xi: v[2], dphi_xi: v[3] });
        }
        if self.s_grid[j + 1] == s {
            let (v, _) = self.layer_at_xi(j + 1, xi);
            return Ok(PhiValue { phi: v[0], dphi: v[1], phi_xi: v[2], dphi_xi: v[3] });
        }
        let (a, b) = (self.s_grid[j], self.s_grid[j + 1]);
        let (va, _) = self.layer_at_xi(j, xi);
        let (vb, _) = self.layer_at_xi(j + 1, xi);
        let t = self.t;
        let ca = xi + a / t + 2.0 * self.i_of_s[j] / t;
        let cb = xi + b / t + 2.0 * self.i_of_s[j + 1] / t;
        let hs = b - a;
        let u = (s - a) / hs;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        let herm = |fa: f64, da: f64, fb: f64, db: f64| h00 * fa + h10 * hs * da + h01 * fb + h11 * hs * db;
        // Second S-derivative contributions to the xi-derivatives: d/dxi (c Phi) = Phi + c Phi_xi.
        Ok(PhiValue {
            phi: herm(va[0], va[1], vb[0], vb[1]),
            dphi: herm(va[1], ca * va[0], vb[1], cb * vb[0]),
            phi_xi: herm(va[2], va[3], vb[2], vb[3]),
            dphi_xi: herm(va[3], va[0] + ca * va[2], vb[3], vb[0] + cb * vb[2]),
        })
    }

    /// `(Phi, dPhi/dS)` at `(xi, S)`.
    pub fn interp_phi(&self, xi: f64, s: f64) -> Result<(f64, f64)> {
        self.interp(xi, s).map(|v| (v.phi, v.dphi))
    }

    /// Largest relative residual of the second `S`-difference of the stored
    /// layers against the right-hand side, over points with `|Phi| > 1e-6`.
    /// Residuals are measured relative to the largest `|(xi + S/T + 2I/T) Phi|` on the layer.
    pub fn ode_self_residual(&self) -> f64 {
        let t = self.t;
        let mut worst: f64 = 0.0;
        for j in 1..self.s_grid.len() - 1 {
            let h1 = self.s_grid[j] - self.s_grid[j - 1];
            let h2 = self.s_grid[j + 1] - self.s_grid[j];
            if (h1 - h2).abs() > 1e-9 * h1.abs() {
                continue;
            }
            let c = self.s_grid[j] / t + 2.0 * self.i_of_s[j] / t;
            let scale = self
                .xi
                .iter()
                .zip(&self.phi[j])
                .map(|(x, p)| ((x + c) * p).abs())
                .fold(0.0, f64::max);
            for k in 0..self.xi.len() {
                let p = self.phi[j][k];
                if p.abs() <= 1e-6 {
                    continue;
                }
                let d2 = (self.phi[j - 1][k] - 2.0 * p + self.phi[j + 1][k]) / (h1 * h1);
                let r = (d2 - (self.xi[k] + c) * p).abs() / scale;
                worst = worst.max(r);
            }
        }
        worst
    }
}

/// Limiting kernel `(phi1(u) phi2(v) - phi1(v) phi2(u)) / (u - v)` with
/// `phi1 = Phi(-s + t z | s t^{-3/2})` and `phi2 = dPhi/dS` at the same point.
///
/// The solution must be built at `T = t^{-3/2}`. The diagonal is taken
/// confluently for `|u - v| < 1e-6`.
pub fn k_infinity(sol: &IdPiiSolution, u: f64, v: f64, s: f64, t_param: f64) -> Result<f64> {
    let big_t = t_param.powf(-1.5);
    if (sol.t - big_t).abs() > 1e-10 * big_t {
        return Err(Error::Domain(format!(
            "solution has T = {} but t = {t_param} needs T = {big_t}",
            sol.t
        )));
    }
    let big_s = s * big_t;
    let at = |z: f64| sol.interp(-s + t_param * z, big_s);
    if (u - v).abs() < 1e-6 {
        let m = 0.5 * (u + v);
        let p = at(m)?;
        return Ok(t_param * (p.phi_xi * p.dphi - p.phi * p.dphi_xi));
    }
    let (pu, pv) = (at(u)?, at(v)?);
    Ok((pu.phi * pv.dphi - pv.phi * pu.dphi) / (u - v))
}

/// Spacing of the five-point stencil used by [`tw_local_check`].
pub const TW_STENCIL: f64 = 0.05;

/// Fredholm arguments `(s, T_kpz)` for the stencil `S + k * 0.05`, `k = -2..=2`.
pub fn tw_stencil(s_center: f64, t: f64) -> [(f64, f64); 5] {
    let mut out = [(0.0, 0.0); 5];
    for (k, o) in out.iter_mut().enumerate() {
        let sv = s_center + (k as f64 - 2.0) * TW_STENCIL;
        *o = (-sv * t.cbrt(), t.powi(-2));
    }
    out
}

/// Outcome of the twice-differentiated Tracy-Widom relation at one `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwCheck {
    pub second_difference: f64,
    pub i_of_s: f64,
    /// `|D^2 log L + I(S)/T|`.
    pub residual: f64,
    /// `|D^2 log L + (I(S) - S/2)/T|`, the variant with the linear term.
    pub residual_with_linear_term: f64,
}

/// Compares the five-point second difference of `log L` (values on [`tw_stencil`])
/// with `-I(S)/T`.
pub fn tw_local_check(sol: &IdPiiSolution, s: f64, fredholm_values: &[f64; 5]) -> Result<TwCheck> {
    let f = fredholm_values;
    let h = TW_STENCIL;
    let d2 = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
    let i = sol.i_at(s)?;
    let t = sol.t;
    Ok(TwCheck {
        second_difference: d2,
        i_of_s: i,
        residual: (d2 + i / t).abs(),
        residual_with_linear_term: (d2 + (i - s / 2.0) / t).abs(),
    })
}

/// [`tw_local_check`] with the stencil values computed by the Fredholm module with `m` nodes.
pub fn tw_local_check_fredholm(sol: &IdPiiSolution, s: f64, m: usize) -> Result<TwCheck> {
    let mut vals = [0.0; 5];
    for (v, (sa, tk)) in vals.iter_mut().zip(tw_stencil(s, sol.t)) {
        *v = log_fredholm_det_ft(sa, tk, m)?;
    }
    tw_local_check(sol, s, &vals)
}

/// Windowed diagnostic `-(1/T) int_S^{S_cut} (v - S) I(v) dv` by the trapezoid
/// rule over the RK4 steps. The tail beyond `S_cut` is not included.
pub fn tw_windowed_integral(sol: &IdPiiSolution, s: f64, s_cut: f64) -> Result<f64> {
    if !(s <= s_cut && s_cut <= sol.s_max() + 1e-12 && s >= sol.s_min() - 1e-12) {
        return Err(Error::OutOfRange(format!("window [{s}, {s_cut}] not inside the solution")));
    }
    if s == s_cut {
        return Ok(0.0);
    }
    let mut pts: Vec<(f64, f64)> = vec![(s_cut, sol.i_at(s_cut)?)];
    pts.extend(
        sol.s_steps
            .iter()
            .zip(&sol.i_steps)
            .filter(|(v, _)| **v < s_cut && **v > s)
            .map(|(v, i)| (*v, *i)),
    );
    pts.push((s, sol.i_at(s)?));
    let mut acc = 0.0;
    for w in pts.windows(2) {
        let ((v0, i0), (v1, i1)) = (w[0], w[1]);
        acc += 0.5 * (v0 - v1) * ((v0 - s) * i0 + (v1 - s) * i1);
    }
    Ok(-acc / sol.t)
}
