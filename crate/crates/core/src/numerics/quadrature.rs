use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Nodes and weights of a quadrature rule on `[-1, 1]`, nodes ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Legendre polynomial `P_m(x)` and its derivative.
fn legendre(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Gauss-Legendre rule with `m` points, roots found by Newton iteration.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 {
        return Err(Error::Domain("Gauss-Legendre order must be >= 1".into()));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut converged = false;
        let mut dp = 0.0;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, d) = legendre(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < NEWTON_TOL {
                converged = true;
                dp = legendre(m, x).1;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                what: "Gauss-Legendre Newton iteration",
                iterations: NEWTON_MAX_ITER,
            });
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Process-wide cache of Gauss-Legendre rules keyed by order.
pub fn gauss_legendre_cached(m: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&m) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_legendre(m)?);
    cache.lock().unwrap().insert(m, rule.clone());
    Ok(rule)
}

/// Composite quadrature layout: panel breakpoints plus points per panel.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelScheme {
    breakpoints: Vec<f64>,
    points_per_panel: usize,
}

impl PanelScheme {
    pub fn new(breakpoints: Vec<f64>, points_per_panel: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Domain("need at least two breakpoints".into()));
        }
        if points_per_panel == 0 {
            return Err(Error::Domain("points per panel must be >= 1".into()));
        }
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::Domain("breakpoints must be finite".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("breakpoints must be strictly increasing".into()));
        }
        Ok(Self {
            breakpoints,
            points_per_panel,
        })
    }

    /// `panels` equal panels on `[a, b]`.
    pub fn uniform(a: f64, b: f64, panels: usize, points_per_panel: usize) -> Result<Self> {
        if panels == 0 {
            return Err(Error::Domain("need at least one panel".into()));
        }
        let h = (b - a) / panels as f64;
        let bp = (0..=panels)
            .map(|i| if i == panels { b } else { a + h * i as f64 })
            .collect();
        Self::new(bp, points_per_panel)
    }

    /// Panels on `[a, b]` refined geometrically toward `a` (ratio 1/2 per level)
    /// down to a smallest panel of width `(b - a) / 2^levels`.
    pub fn graded_toward_left(a: f64, b: f64, levels: usize, points_per_panel: usize) -> Result<Self> {
        let mut bp = vec![a];
        for k in (1..=levels).rev() {
            bp.push(a + (b - a) * 0.5f64.powi(k as i32));
        }
        bp.push(b);
        Self::new(bp, points_per_panel)
    }

    /// Mirror image of [`PanelScheme::graded_toward_left`]: refined toward `b`.
    pub fn graded_toward_right(a: f64, b: f64, levels: usize, points_per_panel: usize) -> Result<Self> {
        let mut bp = vec![a];
        for k in 1..=levels {
            bp.push(b - (b - a) * 0.5f64.powi(k as i32));
        }
        bp.push(b);
        Self::new(bp, points_per_panel)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn points_per_panel(&self) -> usize {
        self.points_per_panel
    }

    pub fn panels(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Expanded nodes and weights using the cached Gauss-Legendre rule.
    pub fn nodes_weights(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let rule = gauss_legendre_cached(self.points_per_panel)?;
        let cap = self.panels() * rule.len();
        let (mut xs, mut ws) = (Vec::with_capacity(cap), Vec::with_capacity(cap));
        for w in self.breakpoints.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                xs.push(mid + half * t);
                ws.push(half * wt);
            }
        }
        Ok((xs, ws))
    }
}

/// Integrates `f` over a panel scheme using `rule` on every panel.
///
/// Summation order is fixed (panel by panel, node by node), so the result is
/// reproducible bit for bit.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    scheme: &PanelScheme,
    rule: &QuadratureRule,
) -> Result<f64> {
    let mut total = 0.0;
    for w in scheme.breakpoints.windows(2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        let mut panel = 0.0;
        for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + half * t;
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::Evaluation { at: x });
            }
            panel += wt * v;
        }
        total += half * panel;
    }
    Ok(total)
}

/// Change of variables taking `t in (0, 1)` to `(lower, infinity)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SemiInfiniteMap {
    /// `x = lower + L t / (1 - t)`.
    Rational { scale: f64 },
    /// `x = lower - c log(1 - t)`.
    Exponential { scale: f64 },
}

impl SemiInfiniteMap {
    pub fn scale(&self) -> f64 {
        match *self {
            Self::Rational { scale } | Self::Exponential { scale } => scale,
        }
    }

    /// Maps a Gauss-Legendre rule on `[-1, 1]` to nodes and weights on `(lower, infinity)`.
    pub fn apply(&self, lower: f64, rule: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
        let scale = self.scale();
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("map scale must be positive, got {scale}")));
        }
        let mut xs = Vec::with_capacity(rule.len());
        let mut ws = Vec::with_capacity(rule.len());
        for (u, w) in rule.nodes.iter().zip(&rule.weights) {
            let t = 0.5 * (1.0 + u);
            let (x, jac) = match *self {
                Self::Rational { scale } => {
                    (lower + scale * t / (1.0 - t), scale / ((1.0 - t) * (1.0 - t)))
                }
                Self::Exponential { scale } => {
                    (lower - scale * (-t).ln_1p(), scale / (1.0 - t))
                }
            };
            xs.push(x);
            ws.push(0.5 * w * jac);
        }
        Ok((xs, ws))
    }
}

/// Rational map of a Gauss-Legendre rule onto `(lower, infinity)` with scale `l`.
pub fn map_semi_infinite(lower: f64, l: f64, rule: &QuadratureRule) -> Result<(Vec<f64>, Vec<f64>)> {
    SemiInfiniteMap::Rational { scale: l }.apply(lower, rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_rule() {
        let r = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r.nodes[0] + x).abs() < 1e-15);
        assert!((r.nodes[1] - x).abs() < 1e-15);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_point_rule_is_midpoint() {
        let r = gauss_legendre(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(matches!(gauss_legendre(0), Err(Error::Domain(_))));
    }

    #[test]
    fn weights_sum_to_two() {
        for m in [3, 16, 40, 80, 200] {
            let r = gauss_legendre(m).unwrap();
            let s: f64 = r.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "m={m} sum={s}");
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn panel_integration_of_exponential() {
        let scheme = PanelScheme::uniform(0.0, 1.0, 4, 16).unwrap();
        let rule = gauss_legendre(16).unwrap();
        let v = integrate_panels(f64::exp, &scheme, &rule).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn non_finite_integrand_reported() {
        let scheme = PanelScheme::uniform(0.0, 1.0, 1, 4).unwrap();
        let rule = gauss_legendre(4).unwrap();
        let r = integrate_panels(|x| if x > 0.5 { f64::NAN } else { x }, &scheme, &rule);
        assert!(matches!(r, Err(Error::Evaluation { .. })));
    }

    #[test]
    fn bad_breakpoints_rejected() {
        assert!(PanelScheme::new(vec![0.0, 0.0], 4).is_err());
        assert!(PanelScheme::new(vec![0.0], 4).is_err());
        assert!(PanelScheme::new(vec![0.0, 1.0], 0).is_err());
    }

    #[test]
    fn semi_infinite_maps_integrate_decaying_exponential() {
        let rule = gauss_legendre(60).unwrap();
        for map in [
            SemiInfiniteMap::Rational { scale: 2.0 },
            SemiInfiniteMap::Exponential { scale: 2.0 },
        ] {
            let (x, w) = map.apply(-1.0, &rule).unwrap();
            let v: f64 = x.iter().zip(&w).map(|(x, w)| w * (-(x + 1.0)).exp()).sum();
            assert!((v - 1.0).abs() < 1e-10, "{map:?}: {v}");
        }
        assert!(map_semi_infinite(0.0, -1.0, &rule).is_err());
    }

    #[test]
    fn cache_returns_same_rule() {
        let a = gauss_legendre_cached(12).unwrap();
        let b = gauss_legendre_cached(12).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
