use super::RecurrenceTable;
use crate::equilibrium::Potential;

/// Evaluates orthonormal polynomials times `e^{-n V(x)/2}` through the recurrence.
pub struct OrthonormalEvaluator<'a> {
    table: &'a RecurrenceTable,
    potential: &'a Potential,
    n: f64,
}

impl<'a> OrthonormalEvaluator<'a> {
    pub fn new(table: &'a RecurrenceTable, potential: &'a Potential, n: usize) -> Self {
        Self { table, potential, n: n as f64 }
    }

    /// Values and `x`-derivatives of `pi_k(x) e^{-nV(x)/2}` (derivative taken
    /// of `pi_k` only) for `k < count`. Requires `count <= table.len() + 1`.
    pub fn values(&self, x: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
        let t = self.table;
        let mut p = vec![0.0; count];
        let mut d = vec![0.0; count];
        if count == 0 {
            return (p, d);
        }
        p[0] = (-0.5 * (t.log_h[0] + self.n * self.potential.eval(x))).exp();
        for k in 0..count - 1 {
            let sb_next = t.beta[k].sqrt();
            let (pm, dm, sb) = if k == 0 {
                (0.0, 0.0, 0.0)
            } else {
                (p[k - 1], d[k - 1], t.beta[k - 1].sqrt())
            };
            p[k + 1] = ((x - t.alpha[k]) * p[k] - sb * pm) / sb_next;
            d[k + 1] = (p[k] + (x - t.alpha[k]) * d[k] - sb * dm) / sb_next;
        }
        (p, d)
    }

    /// `sum_{k<m} pi_k(x) pi_k(y)` with the `e^{-n(V(x)+V(y))/2}` factor.
    pub fn kernel_sum(&self, x: f64, y: f64, m: usize) -> f64 {
        let (px, _) = self.values(x, m);
        let (py, _) = self.values(y, m);
        px.iter().zip(&py).map(|(a, b)| a * b).sum()
    }

    /// Christoffel-Darboux form of [`Self::kernel_sum`]; confluent for `x` close to `y`.
    /// Needs `m` recurrence coefficients plus `beta_m`.
    pub fn kernel_cd(&self, x: f64, y: f64, m: usize) -> f64 {
        let sb = self.table.beta[m - 1].sqrt();
        if (x - y).abs() <= 1e-7 * (1.0 + x.abs()) {
            let mid = 0.5 * (x + y);
            let (p, d) = self.values(mid, m + 1);
            return sb * (d[m] * p[m - 1] - d[m - 1] * p[m]);
        }
        let (px, _) = self.values(x, m + 1);
        let (py, _) = self.values(y, m + 1);
        sb * (px[m] * py[m - 1] - px[m - 1] * py[m]) / (x - y)
    }
}
