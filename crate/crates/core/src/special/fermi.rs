//! Fermi factor weights and the integrals `F_beta(y) = int_0^inf v^beta log(1 + e^{-y-v}) dv`.

use crate::numerics::{gauss_legendre_cached, integrate_panels, PanelScheme};
use crate::{Error, Result};

/// Derivative weight of the Fermi factor, `e^{-|r|} / (1 + e^{-|r|})^2`.
pub fn fermi_weight(r: f64) -> f64 {
    let e = (-r.abs()).exp();
    e / ((1.0 + e) * (1.0 + e))
}

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

/// `F_beta(y)` by composite Gauss-Legendre quadrature, `beta > -1`.
///
/// For `beta < 0` the substitution `v = w^{1/(1+beta)}` removes the endpoint
/// singularity. The upper limit is where the integrand falls below `1e-18` of
/// its value at the origin, with a margin for the power weight.
pub fn f_beta_quad(beta: f64, y: f64) -> Result<f64> {
    if !(beta > -1.0) || !beta.is_finite() {
        return Err(Error::Domain(format!("beta must exceed -1, got {beta}")));
    }
    if !y.is_finite() {
        return Err(Error::Domain("y must be finite".into()));
    }
    let peak = softplus(-y);
    let v_max = (-y - (1e-18 * peak).ln()).max(1.0) + 10.0 + 2.0 * beta.max(0.0);
    let panels = v_max.ceil() as usize;
    let rule = gauss_legendre_cached(16)?;
    if beta < 0.0 {
        let p = 1.0 / (1.0 + beta);
        let bp: Vec<f64> = (0..=panels).map(|j| (j as f64).powf(1.0 + beta)).collect();
        let scheme = PanelScheme::new(bp, 16)?;
        integrate_panels(|w| p * softplus(-y - w.powf(p)), &scheme, &rule)
    } else {
        let mut bp = vec![0.0];
        if beta.fract() != 0.0 {
            for k in (1..=30).rev() {
                bp.push(0.5f64.powi(k));
            }
        }
        bp.extend((1..=panels).map(|j| j as f64));
        let scheme = PanelScheme::new(bp, 16)?;
        integrate_panels(|v| v.powf(beta) * softplus(-y - v), &scheme, &rule)
    }
}

/// `sum_{m>=1} (-1)^{m+1} e^{-m y} / m^s`, i.e. `-Li_s(-e^{-y})`, for `y >= 0`.
///
/// Terminates once a term drops below `1e-16`. When `e^{-y}` is close to one
/// the series is cut at a million terms and the last two partial sums are
/// averaged, which leaves an error far below the tolerance for `s >= 2`.
pub fn polylog_alternating(s: f64, y: f64) -> Result<f64> {
    if !(y >= 0.0) {
        return Err(Error::Domain(format!("alternating series needs y >= 0, got {y}")));
    }
    const CAP: usize = 1_000_000;
    let q = (-y).exp();
    let mut sum = 0.0;
    let mut prev = 0.0;
    let mut qm = 1.0;
    for m in 1..=CAP {
        qm *= q;
        let mf = m as f64;
        let term = qm / mf.powf(s);
        prev = sum;
        if m % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        if term < 1e-16 {
            return Ok(sum);
        }
    }
    Ok(0.5 * (sum + prev))
}

/// Closed form `F_k(y) = k! sum (-1)^{m+1} e^{-m y} / m^{k+2}` for integer `k >= 0`.
pub fn f_k_closed(k: u32, y: f64) -> Result<f64> {
    let fact: f64 = (1..=k).map(f64::from).product();
    Ok(fact * polylog_alternating(f64::from(k) + 2.0, y)?)
}
