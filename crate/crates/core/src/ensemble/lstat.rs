use std::f64::consts::PI;

use super::{build_grid, stieltjes, DiscreteMeasure, EnsembleGrid, OrthonormalEvaluator, StieltjesOutput, WeightSpec};
use crate::equilibrium::{log_fermi, EquilibriumData};
use crate::numerics::{gauss_legendre_cached, lu_logdet, symmetric_eigenvalues, SquareMatrix};
use crate::{Error, Result};

fn measure(eq: &EquilibriumData, grid: &EnsembleGrid, spec: &WeightSpec) -> Result<DiscreteMeasure> {
    let nf = spec.n as f64;
    let lw = grid
        .nodes
        .iter()
        .zip(&grid.weights)
        .map(|(&x, &w)| w.ln() - nf * eq.potential.eval(x) + spec.log_sigma(x))
        .collect();
    DiscreteMeasure::new(grid.nodes.clone(), lw)
}

/// Deformed orthogonal polynomial system for one `(V, Q, n, s)`.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub eq: EquilibriumData,
    pub spec: WeightSpec,
    pub grid: EnsembleGrid,
    /// Recurrence with `n + 1` polynomials, so that `beta_n` is available.
    pub stieltjes: StieltjesOutput,
}

impl Ensemble {
    pub fn new(eq: &EquilibriumData, spec: WeightSpec) -> Result<Self> {
        let grid = build_grid(eq, spec.n)?;
        Self::with_grid(eq, spec, grid)
    }

    pub fn with_grid(eq: &EquilibriumData, spec: WeightSpec, grid: EnsembleGrid) -> Result<Self> {
        let m = measure(eq, &grid, &spec)?;
        let stieltjes = stieltjes(&m, spec.n + 1, false)?;
        Ok(Self {
            eq: eq.clone(),
            spec,
            grid,
            stieltjes,
        })
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn log_h(&self) -> &[f64] {
        &self.stieltjes.table.log_h[..self.spec.n]
    }

    fn evaluator(&self) -> OrthonormalEvaluator<'_> {
        OrthonormalEvaluator::new(&self.stieltjes.table, &self.eq.potential, self.spec.n)
    }

    /// Orthonormal values `pi_k(x) e^{-n V(x)/2}` for `k < n`.
    pub fn orthonormal_values(&self, x: f64) -> Vec<f64> {
        self.evaluator().values(x, self.spec.n).0
    }

    /// Reproducing kernel of the deformed weight, times `e^{-n (V(x)+V(y))/2}`,
    /// via Christoffel-Darboux.
    pub fn cd_kernel(&self, x: f64, y: f64) -> f64 {
        self.evaluator().kernel_cd(x, y, self.spec.n)
    }

    /// Same kernel summed term by term.
    pub fn kernel_sum(&self, x: f64, y: f64) -> f64 {
        self.evaluator().kernel_sum(x, y, self.spec.n)
    }

    /// Kernel in edge coordinates, `K_n(u/(c n^{2/3}), v/(c n^{2/3})) / (c n^{2/3})`.
    pub fn rescaled_edge_kernel(&self, u: f64, v: f64) -> f64 {
        let sc = self.eq.c_v * (self.spec.n as f64).powf(2.0 / 3.0);
        self.cd_kernel(u / sc, v / sc) / sc
    }

    /// `int K_n(x, x) sigma_n(x) e^{-n V(x)} dx` on the given grid (equals `n`).
    pub fn trace_integral(&self, grid: &EnsembleGrid) -> f64 {
        grid.nodes
            .iter()
            .zip(&grid.weights)
            .map(|(&x, &w)| w * self.kernel_sum(x, x) * self.spec.log_sigma(x).exp())
            .sum()
    }

    /// `d/ds log L_n(s) = int K_n(x,x) sigma (1 - sigma) e^{-nV} dx`.
    pub fn dlog_lstat_ds(&self) -> f64 {
        let n = self.spec.n as f64;
        self.grid
            .nodes
            .iter()
            .zip(&self.grid.weights)
            .map(|(&x, &w)| {
                let z = self.spec.s + n.powf(2.0 / 3.0) * self.spec.q.eval(x);
                w * self.kernel_sum(x, x) * (log_fermi(z) + log_fermi(-z)).exp()
            })
            .sum()
    }
}

/// `log L_n(s)` as `sum_{k<n} (log h_k(s) - log h_k(inf))`.
pub fn log_lstat_gamma(eq: &EquilibriumData, spec: &WeightSpec) -> Result<f64> {
    let grid = build_grid(eq, spec.n)?;
    let undeformed = WeightSpec { s: f64::INFINITY, ..spec.clone() };
    let hs = stieltjes(&measure(eq, &grid, spec)?, spec.n, false)?;
    let h0 = stieltjes(&measure(eq, &grid, &undeformed)?, spec.n, false)?;
    let v: f64 = hs.table.log_h.iter().zip(&h0.table.log_h).map(|(a, b)| a - b).sum();
    if !v.is_finite() {
        return Err(Error::Inconsistency("non-finite log L from norming constants".into()));
    }
    Ok(v)
}

/// `log L_n(s)` as `log det(I - M)` with `M_jk = sum_i (1 - sigma(x_i)) v_j(x_i) v_k(x_i)`
/// in the undeformed orthonormal basis.
pub fn log_lstat_det(eq: &EquilibriumData, spec: &WeightSpec) -> Result<f64> {
    let grid = build_grid(eq, spec.n)?;
    let undeformed = WeightSpec { s: f64::INFINITY, ..spec.clone() };
    let out = stieltjes(&measure(eq, &grid, &undeformed)?, spec.n, false)?;
    let n = spec.n;
    let scale = (n as f64).powf(2.0 / 3.0);
    // 1 - sigma(z) = sigma(-z)
    let one_minus: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&x| {
            if spec.s == f64::INFINITY {
                0.0
            } else {
                log_fermi(-(spec.s + scale * spec.q.eval(x))).exp()
            }
        })
        .collect();
    let m = SquareMatrix::from_fn(n, |j, k| {
        out.vectors[j]
            .iter()
            .zip(&out.vectors[k])
            .zip(&one_minus)
            .map(|((a, b), c)| a * b * c)
            .sum()
    });
    let ev = symmetric_eigenvalues(&m)?;
    if ev[0] < -1e-8 || ev[n - 1] > 1.0 + 1e-8 {
        return Err(Error::Inconsistency(format!(
            "spectrum of M outside [0, 1]: [{}, {}]",
            ev[0],
            ev[n - 1]
        )));
    }
    let (sign, logabs) = lu_logdet(&m.identity_minus())?;
    if sign <= 0.0 {
        return Err(Error::Inconsistency("det(I - M) is not positive".into()));
    }
    Ok(logabs)
}

/// `log L_n(s) = -int_s^inf d/du log L_n(u) du`, truncated at `s + 40`.
pub fn log_lstat_integral(eq: &EquilibriumData, spec: &WeightSpec) -> Result<f64> {
    let grid = build_grid(eq, spec.n)?;
    let rule = gauss_legendre_cached(16)?;
    let mut total = 0.0;
    for p in 0..20 {
        let (lo, hi) = (spec.s + 2.0 * p as f64, spec.s + 2.0 * (p + 1) as f64);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * t;
            let e = Ensemble::with_grid(eq, WeightSpec { s: u, ..spec.clone() }, grid.clone())?;
            total += 0.5 * (hi - lo) * w * e.dlog_lstat_ds();
        }
    }
    Ok(-total)
}

/// `rho_n = (4 pi / a) exp(2 n ell - log h_{n-1})`.
pub fn norming_ratio(eq: &EquilibriumData, spec: &WeightSpec) -> Result<f64> {
    let grid = build_grid(eq, spec.n)?;
    let out = stieltjes(&measure(eq, &grid, spec)?, spec.n, false)?;
    let lh = out.table.log_h[spec.n - 1];
    Ok(4.0 * PI / eq.a * (2.0 * spec.n as f64 * eq.ell - lh).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::DeformationQ;
    use crate::equilibrium::Potential;
    use crate::numerics::PanelScheme;

    fn shifted_gue() -> EquilibriumData {
        EquilibriumData::new(&Potential::new(vec![0.0, 0.0, 2.0]).unwrap()).unwrap()
    }

    fn spec(n: usize, s: f64) -> WeightSpec {
        WeightSpec::new(n, s, DeformationQ::new(vec![0.0, -1.0]).unwrap()).unwrap()
    }

    #[test]
    fn single_particle_oracle() {
        let eq = shifted_gue();
        let (x, w) = PanelScheme::uniform(-12.0, 10.0, 400, 16).unwrap().nodes_weights().unwrap();
        for s in [-1.0, 0.0, 2.0] {
            let sp = spec(1, s);
            let num: f64 = x.iter().zip(&w).map(|(&x, w)| w * (sp.log_sigma(x) - eq.potential.eval(x)).exp()).sum();
            let den: f64 = x.iter().zip(&w).map(|(&x, w)| w * (-eq.potential.eval(x)).exp()).sum();
            let oracle = (num / den).ln();
            assert!((log_lstat_gamma(&eq, &sp).unwrap() - oracle).abs() < 1e-8);
            assert!((log_lstat_det(&eq, &sp).unwrap() - oracle).abs() < 1e-8);
        }
    }

    #[test]
    fn three_routes_agree() {
        let eq = shifted_gue();
        let sp = spec(6, 0.5);
        let g = log_lstat_gamma(&eq, &sp).unwrap();
        let d = log_lstat_det(&eq, &sp).unwrap();
        let i = log_lstat_integral(&eq, &sp).unwrap();
        assert!((g - d).abs() < 1e-9, "{g} {d}");
        assert!((g - i).abs() < 1e-8, "{g} {i}");
        assert!(g < 0.0);
    }

    #[test]
    fn kernel_forms_and_trace() {
        let eq = shifted_gue();
        let e = Ensemble::new(&eq, spec(10, 0.0)).unwrap();
        for (x, y) in [(-0.3, -0.1), (-1.2, 0.2), (0.05, 0.05)] {
            let a = e.cd_kernel(x, y);
            let b = e.kernel_sum(x, y);
            assert!((a - b).abs() < 1e-10 * (1.0 + b.abs()), "{x} {y}: {a} {b}");
        }
        let fine = build_grid(&eq, 25).unwrap();
        assert!((e.trace_integral(&fine) - 10.0).abs() < 1e-8 * 10.0);
    }

    #[test]
    fn norming_ratio_is_near_one_half_at_the_edge() {
        let eq = shifted_gue();
        let undeformed = norming_ratio(&eq, &spec(16, f64::INFINITY)).unwrap();
        assert!((undeformed - 0.5).abs() < 0.01, "{undeformed}");
        let rho = norming_ratio(&eq, &spec(16, 0.0)).unwrap();
        assert!((rho - 0.5).abs() < 0.1, "{rho}");
    }
}
