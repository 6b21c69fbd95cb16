use serde::Serialize;

use super::DeformationQ;
use crate::equilibrium::{log_fermi, EquilibriumData};
use crate::numerics::PanelScheme;
use crate::{Error, Result};

/// Parameters of the deformed weight `sigma_n(x) e^{-n V(x)}`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightSpec {
    pub n: usize,
    /// Deformation parameter; `f64::INFINITY` gives the undeformed weight.
    pub s: f64,
    pub q: DeformationQ,
}

impl WeightSpec {
    pub fn new(n: usize, s: f64, q: DeformationQ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be >= 1".into()));
        }
        if s.is_nan() || s == f64::NEG_INFINITY {
            return Err(Error::Domain(format!("invalid deformation parameter s = {s}")));
        }
        Ok(Self { n, s, q })
    }

    pub fn log_sigma(&self, x: f64) -> f64 {
        log_sigma(x, self.n, self.s, &self.q)
    }
}

/// `log sigma_n(x) = -log(1 + e^{-s - n^{2/3} Q(x)})`, evaluated stably.
pub fn log_sigma(x: f64, n: usize, s: f64, q: &DeformationQ) -> f64 {
    if s == f64::INFINITY {
        return 0.0;
    }
    log_fermi(s + (n as f64).powf(2.0 / 3.0) * q.eval(x))
}

/// Composite Gauss-Legendre grid used to discretise the ensemble weight.
#[derive(Clone, Debug)]
pub struct EnsembleGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub breakpoints: Vec<f64>,
}

const POINTS_PER_PANEL: usize = 16;
const TAIL_PANELS: usize = 20;
const LEVEL: f64 = 400.0;

/// Walks from `x0` in direction `dir` to where `n V` has risen by `LEVEL`.
fn level_crossing(eq: &EquilibriumData, n: f64, x0: f64, vmin: f64, dir: f64) -> f64 {
    let g = |x: f64| n * (eq.potential.eval(x) - vmin) - LEVEL;
    let mut step = 1.0;
    let mut far = x0 + dir * step;
    while g(far) < 0.0 {
        step *= 2.0;
        far = x0 + dir * step;
    }
    let (mut inside, mut outside) = (x0, far);
    for _ in 0..200 {
        let mid = 0.5 * (inside + outside);
        if g(mid) < 0.0 {
            inside = mid;
        } else {
            outside = mid;
        }
        if (outside - inside).abs() < 1e-12 {
            break;
        }
    }
    outside
}

/// Geometric tail breakpoints from `edge` out to distance `d`, first width `h0`.
fn tail(edge: f64, d: f64, h0: f64, dir: f64) -> Vec<f64> {
    if d <= h0 {
        return vec![edge + dir * d];
    }
    let ratio = (d / h0).powf(1.0 / (TAIL_PANELS - 1) as f64);
    (0..TAIL_PANELS)
        .map(|j| edge + dir * h0 * ratio.powi(j as i32))
        .collect()
}

/// Quadrature grid for the weight `e^{-n V}` (shifted frame).
///
/// Uniform panels cover `[-a - 1/2, 1/2]` with `ceil(3n) + 20` panels. If the
/// region where `n V` is within 400 of its minimum (widened by 10%) extends past
/// that core, 20 geometrically growing tail panels are added on that side.
pub fn build_grid(eq: &EquilibriumData, n: usize) -> Result<EnsembleGrid> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let nf = n as f64;
    let (core_lo, core_hi) = (-eq.a - 0.5, 0.5);
    let mut x_min = core_lo;
    let mut v_min = f64::INFINITY;
    for i in 0..=4000 {
        let x = core_lo + (core_hi - core_lo) * i as f64 / 4000.0;
        let v = eq.potential.eval(x);
        if v < v_min {
            v_min = v;
            x_min = x;
        }
    }
    let lo = level_crossing(eq, nf, x_min, v_min, -1.0);
    let hi = level_crossing(eq, nf, x_min, v_min, 1.0);
    let center = 0.5 * (lo + hi);
    let (lo, hi) = (center + 1.1 * (lo - center), center + 1.1 * (hi - center));

    let panels = (3.0 * nf).ceil() as usize + 20;
    let h_core = (core_hi - core_lo) / panels as f64;
    let core = PanelScheme::uniform(core_lo, core_hi, panels, POINTS_PER_PANEL)?;
    let mut bp: Vec<f64> = Vec::new();
    if lo < core_lo {
        let mut left = tail(core_lo, core_lo - lo, h_core, -1.0);
        left.reverse();
        bp.extend(left);
    }
    bp.extend_from_slice(core.breakpoints());
    if hi > core_hi {
        bp.extend(tail(core_hi, hi - core_hi, h_core, 1.0));
    }
    let scheme = PanelScheme::new(bp, POINTS_PER_PANEL)?;
    let (nodes, weights) = scheme.nodes_weights()?;
    Ok(EnsembleGrid {
        nodes,
        weights,
        breakpoints: scheme.breakpoints().to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::Potential;

    #[test]
    fn grid_covers_support_and_tails() {
        let eq = EquilibriumData::new(&Potential::new(vec![0.0, 0.0, 2.0]).unwrap()).unwrap();
        let g = build_grid(&eq, 10).unwrap();
        let lo = g.breakpoints[0];
        let hi = *g.breakpoints.last().unwrap();
        assert!(lo < -eq.a - 0.5 && hi > 0.5);
        assert_eq!(g.nodes.len(), (g.breakpoints.len() - 1) * 16);
        // nV rises by at least 400 at the ends.
        assert!(10.0 * eq.potential.eval(hi) > 400.0);
        let total: f64 = g.weights.iter().sum();
        assert!((total - (hi - lo)).abs() < 1e-10);
    }

    #[test]
    fn undeformed_sigma_is_one() {
        let q = DeformationQ::new(vec![0.0, -1.0]).unwrap();
        assert_eq!(log_sigma(0.3, 10, f64::INFINITY, &q), 0.0);
        assert!(log_sigma(-1.0, 10, 0.0, &q) > -0.02);
        assert!(log_sigma(1.0, 10, 0.0, &q) < -4.0);
        assert!(WeightSpec::new(0, 0.0, q.clone()).is_err());
        assert!(WeightSpec::new(3, f64::NAN, q).is_err());
    }
}
