use crate::{Error, Result};

/// Discrete measure `sum_i e^{log_weights[i]} delta_{nodes[i]}`.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    pub nodes: Vec<f64>,
    pub log_weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(nodes: Vec<f64>, log_weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != log_weights.len() || nodes.is_empty() {
            return Err(Error::Domain("nodes and weights must be non-empty and of equal length".into()));
        }
        if nodes.iter().any(|x| !x.is_finite()) || log_weights.iter().any(|w| w.is_nan() || *w == f64::INFINITY) {
            return Err(Error::Domain("measure has non-finite nodes or weights".into()));
        }
        Ok(Self { nodes, log_weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Monic three-term recurrence `p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}`.
///
/// `beta[k]` stores `beta_{k+1} = h_{k+1} / h_k`; `log_h[k]` is the log of the
/// squared norm of `p_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceTable {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub log_h: Vec<f64>,
}

impl RecurrenceTable {
    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct StieltjesOutput {
    pub table: RecurrenceTable,
    /// `vectors[k][i] = pi_k(x_i) sqrt(w_i)` with `pi_k` orthonormal.
    pub vectors: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Discretised Stieltjes procedure in orthonormal-vector form.
///
/// Weights are handled in log space and shifted by their maximum, so the
/// procedure stays finite even when `e^{-n V}` spans hundreds of decades.
pub fn stieltjes(measure: &DiscreteMeasure, k: usize, reorthogonalize: bool) -> Result<StieltjesOutput> {
    let n = measure.len();
    if k == 0 {
        return Err(Error::Domain("need at least one polynomial".into()));
    }
    if k as f64 > 0.4 * n as f64 {
        return Err(Error::Domain(format!("{k} polynomials need more than {n} / 0.4 nodes")));
    }
    let shift = measure.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return Err(Error::Domain("measure has zero total mass".into()));
    }
    let x = &measure.nodes;
    let mut v: Vec<f64> = measure.log_weights.iter().map(|lw| ((lw - shift) / 2.0).exp()).collect();
    let h0 = dot(&v, &v);
    let norm0 = h0.sqrt();
    v.iter_mut().for_each(|e| *e /= norm0);

    let mut alpha = Vec::with_capacity(k);
    let mut beta = Vec::with_capacity(k.saturating_sub(1));
    let mut log_h = vec![h0.ln() + shift];
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut prev = vec![0.0; n];
    let mut sqrt_beta = 0.0;
    for j in 0..k {
        let a: f64 = x.iter().zip(&v).map(|(xi, vi)| xi * vi * vi).sum();
        alpha.push(a);
        if j + 1 == k {
            vectors.push(v);
            break;
        }
        let mut r: Vec<f64> = (0..n).map(|i| (x[i] - a) * v[i] - sqrt_beta * prev[i]).collect();
        if reorthogonalize {
            for _ in 0..2 {
                for q in vectors.iter().chain(std::iter::once(&v)) {
                    let c = dot(&r, q);
                    r.iter_mut().zip(q).for_each(|(ri, qi)| *ri -= c * qi);
                }
            }
        }
        let b = dot(&r, &r);
        if !(b > 1e-300) || !b.is_finite() {
            return Err(Error::Breakdown { k: j + 1, beta: b });
        }
        beta.push(b);
        log_h.push(log_h[j] + b.ln());
        sqrt_beta = b.sqrt();
        r.iter_mut().for_each(|e| *e /= sqrt_beta);
        prev = std::mem::replace(&mut v, r);
        vectors.push(prev.clone());
    }
    Ok(StieltjesOutput {
        table: RecurrenceTable { alpha, beta, log_h },
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::PanelScheme;

    fn hermite_measure() -> DiscreteMeasure {
        let (x, w) = PanelScheme::uniform(-15.0, 15.0, 60, 16).unwrap().nodes_weights().unwrap();
        let lw = x.iter().zip(&w).map(|(x, w)| w.ln() - x * x).collect();
        DiscreteMeasure::new(x, lw).unwrap()
    }

    #[test]
    fn hermite_recurrence() {
        let out = stieltjes(&hermite_measure(), 20, false).unwrap();
        for (k, b) in out.table.beta.iter().enumerate() {
            assert!((b - (k + 1) as f64 / 2.0).abs() < 1e-10, "k={k} beta={b}");
        }
        assert!(out.table.alpha.iter().all(|a| a.abs() < 1e-12));
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!((out.table.log_h[0] - sqrt_pi.ln()).abs() < 1e-12);
    }

    #[test]
    fn reorthogonalisation_does_not_change_well_conditioned_case() {
        let a = stieltjes(&hermite_measure(), 20, false).unwrap();
        let b = stieltjes(&hermite_measure(), 20, true).unwrap();
        for (x, y) in a.table.beta.iter().zip(&b.table.beta) {
            assert!((x - y).abs() < 1e-11);
        }
    }

    #[test]
    fn too_many_polynomials() {
        let m = DiscreteMeasure::new(vec![0.0, 1.0], vec![0.0, 0.0]).unwrap();
        assert!(matches!(stieltjes(&m, 2, false), Err(Error::Domain(_))));
    }

    #[test]
    fn breakdown_on_degenerate_measure() {
        let x = vec![0.0; 10];
        let m = DiscreteMeasure::new(x, vec![0.0; 10]).unwrap();
        assert!(matches!(stieltjes(&m, 3, false), Err(Error::Breakdown { .. })));
    }
}
