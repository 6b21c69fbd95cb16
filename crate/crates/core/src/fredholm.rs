//! Airy and finite-temperature Airy kernels and their Fredholm determinants on `L^2(-s, inf)`.
//!
//! The finite-temperature kernel is
//! `K_T(u, v) = int sigma(T^{1/3} z) Ai(u + z) Ai(v + z) dz` with the Fermi factor
//! `sigma(r) = 1 / (1 + e^{-r})`. It is evaluated by Gauss-Legendre panels on a
//! truncated `z` window shared by all matrix entries.

use crate::equilibrium::log_fermi;
use crate::numerics::{
    gauss_legendre_cached, lu_logdet, symmetric_eigenvalues, PanelScheme, SemiInfiniteMap,
    SquareMatrix,
};
use crate::special::airy;
use crate::{Error, Result};

/// Map used by default for the semi-infinite Nystrom nodes.
pub const DEFAULT_MAP: SemiInfiniteMap = SemiInfiniteMap::Exponential { scale: 8.0 };

/// Classical Airy kernel, confluent on the diagonal.
pub fn airy_kernel(u: f64, v: f64) -> Result<f64> {
    if u > UNDERFLOW_ARG || v > UNDERFLOW_ARG {
        return Ok(0.0);
    }
    let pu = airy(u)?;
    if (u - v).abs() < 1e-10 {
        return Ok(pu.aip * pu.aip - u * pu.ai * pu.ai);
    }
    let pv = airy(v)?;
    Ok((pu.ai * pv.aip - pu.aip * pv.ai) / (u - v))
}

/// Quadrature in `z` with the Fermi factor folded into the weights.
#[derive(Clone, Debug)]
pub struct ZetaGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ZetaGrid {
    /// Window `[-45 T^{-1/3} - 5, (135/4)^{2/3} - min_arg]`, panels no wider than
    /// `min(1/2, 2 T^{-1/3})` and aligned with `z = 0`.
    pub fn new(t: f64, min_arg: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("temperature parameter must be positive, got {t}")));
        }
        let tc = t.cbrt();
        let lo = -45.0 / tc - 5.0;
        let hi = (45.0f64 * 0.75).powf(2.0 / 3.0) - min_arg;
        if hi <= lo {
            return Err(Error::Domain("empty z window".into()));
        }
        let width = 0.5f64.min(2.0 / tc);
        let mut bp = Vec::new();
        let left = if hi > 0.0 && lo < 0.0 { 0.0 } else { lo };
        if left > lo {
            let k = (-lo / width).ceil() as usize;
            bp.extend((0..k).map(|i| lo + (left - lo) * i as f64 / k as f64));
        }
        let k = ((hi - left) / width).ceil() as usize;
        bp.extend((0..=k).map(|i| if i == k { hi } else { left + (hi - left) * i as f64 / k as f64 }));
        let (nodes, w) = PanelScheme::new(bp, 16)?.nodes_weights()?;
        let weights = nodes
            .iter()
            .zip(&w)
            .map(|(&z, &w)| w * log_fermi(tc * z).exp())
            .collect();
        Ok(Self { nodes, weights })
    }

    fn airy_row(&self, x: f64) -> Result<Vec<f64>> {
        self.nodes.iter().map(|z| ai_or_underflow(x + z)).collect()
    }
}

/// `Ai(x)`, or exactly 0 where it is below the smallest subnormal double.
fn ai_or_underflow(x: f64) -> Result<f64> {
    if x > UNDERFLOW_ARG {
        Ok(0.0)
    } else {
        airy(x).map(|p| p.ai)
    }
}

/// `Ai(120) ~ e^{-876}`, far below `f64::MIN_POSITIVE * f64::EPSILON`.
const UNDERFLOW_ARG: f64 = 120.0;

/// Finite-temperature Airy kernel `K_T(u, v)`.
pub fn ft_airy_kernel(u: f64, v: f64, t: f64) -> Result<f64> {
    let grid = ZetaGrid::new(t, u.min(v))?;
    let (a, b) = (grid.airy_row(u)?, grid.airy_row(v)?);
    Ok(a.iter().zip(&b).zip(&grid.weights).map(|((a, b), w)| a * b * w).sum())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    Airy,
    FiniteTemperature { t: f64 },
}

/// Symmetrised Nystrom discretisation `sqrt(w_i) K(x_i, x_j) sqrt(w_j)` on `(-s, inf)`.
#[derive(Clone, Debug)]
pub struct NystromOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: SquareMatrix,
}

impl NystromOperator {
    /// `log det(I - K)`, after checking that the spectrum lies in `[0, 1)`.
    pub fn log_det(&self) -> Result<f64> {
        let ev = symmetric_eigenvalues(&self.matrix)?;
        let (lo, hi) = (ev[0], *ev.last().unwrap());
        if lo < -1e-8 || hi >= 1.0 + 1e-6 {
            return Err(Error::Inconsistency(format!(
                "kernel spectrum [{lo}, {hi}] is outside [0, 1)"
            )));
        }
        let (sign, logabs) = lu_logdet(&self.matrix.identity_minus())?;
        if sign <= 0.0 {
            return Err(Error::Inconsistency("Fredholm determinant is not positive".into()));
        }
        Ok(logabs)
    }
}

pub fn build_nystrom(kind: KernelKind, s: f64, m: usize, map: SemiInfiniteMap) -> Result<NystromOperator> {
    if !s.is_finite() || s.abs() > 30.0 {
        return Err(Error::Domain(format!("s = {s} outside [-30, 30]")));
    }
    let rule = gauss_legendre_cached(m)?;
    let (nodes, weights) = map.apply(-s, &rule)?;
    let sw: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let matrix = match kind {
        KernelKind::Airy => {
            let mut k = SquareMatrix::zeros(m);
            for i in 0..m {
                for j in 0..=i {
                    let v = sw[i] * airy_kernel(nodes[i], nodes[j])? * sw[j];
                    k[(i, j)] = v;
                    k[(j, i)] = v;
                }
            }
            k
        }
        KernelKind::FiniteTemperature { t } => {
            let min = nodes.iter().copied().fold(f64::INFINITY, f64::min);
            let grid = ZetaGrid::new(t, min)?;
            let rows: Vec<Vec<f64>> = nodes
                .iter()
                .zip(&sw)
                .map(|(&x, &s)| {
                    grid.airy_row(x).map(|r| r.iter().zip(&grid.weights).map(|(a, w)| s * a * w.sqrt()).collect())
                })
                .collect::<Result<_>>()?;
            let mut k = SquareMatrix::zeros(m);
            for i in 0..m {
                for j in 0..=i {
                    let v: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                    k[(i, j)] = v;
                    k[(j, i)] = v;
                }
            }
            k
        }
    };
    if !matrix.is_finite() {
        return Err(Error::Evaluation { at: s });
    }
    Ok(NystromOperator { nodes, weights, matrix })
}

/// `log det(I - K_T)` on `L^2(-s, inf)` with `m` nodes and the given map.
pub fn log_fredholm_det_ft_with(s: f64, t: f64, m: usize, map: SemiInfiniteMap) -> Result<f64> {
    build_nystrom(KernelKind::FiniteTemperature { t }, s, m, map)?.log_det()
}

pub fn log_fredholm_det_ft(s: f64, t: f64, m: usize) -> Result<f64> {
    log_fredholm_det_ft_with(s, t, m, DEFAULT_MAP)
}

/// `det(I - K_T)` on `L^2(-s, inf)`; lies in `(0, 1]`.
pub fn fredholm_det_ft(s: f64, t: f64, m: usize) -> Result<f64> {
    log_fredholm_det_ft(s, t, m).map(f64::exp)
}

/// `det(I - K_Ai)` on `L^2(-s, inf)`, the Tracy-Widom GUE distribution at `-s`.
pub fn fredholm_det_airy(s: f64, m: usize) -> Result<f64> {
    build_nystrom(KernelKind::Airy, s, m, DEFAULT_MAP)?.log_det().map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_kernel_diagonal_is_continuous() {
        let d = airy_kernel(0.4, 0.4).unwrap();
        let off = airy_kernel(0.4, 0.4 + 1e-6).unwrap();
        assert!((d - off).abs() < 1e-6);
        assert!(d > 0.0);
    }

    #[test]
    fn kernel_is_symmetric() {
        let a = ft_airy_kernel(0.3, -1.1, 1.0).unwrap();
        let b = ft_airy_kernel(-1.1, 0.3, 1.0).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rational_map_reaches_the_underflow_region() {
        let map = SemiInfiniteMap::Rational { scale: 10.0 };
        let a = log_fredholm_det_ft_with(0.0, 1.0, 80, map).unwrap();
        let b = log_fredholm_det_ft(0.0, 1.0, 80).unwrap();
        assert!((a - b).abs() < 1e-8);
        assert_eq!(airy_kernel(150.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn determinant_in_unit_interval() {
        let d = fredholm_det_ft(0.0, 1.0, 40).unwrap();
        assert!(d > 0.0 && d <= 1.0);
        assert!(fredholm_det_ft(0.0, -1.0, 40).is_err());
        assert!(fredholm_det_ft(31.0, 1.0, 40).is_err());
    }
}
