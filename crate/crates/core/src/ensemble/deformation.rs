use serde::Serialize;

use crate::numerics::RealPolynomial;
use crate::{Error, Result};

/// Deformation `Q` with `Q(0) = 0`, `t = -Q'(0) > 0` and `x Q(x) < 0` away from 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeformationQ {
    poly: RealPolynomial,
    t: f64,
}

/// Half-width of the window on which the sign condition is checked.
const SIGN_WINDOW: f64 = 6.0;

impl DeformationQ {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let poly = RealPolynomial::new(coeffs);
        if !poly.is_finite() {
            return Err(Error::Domain("deformation coefficients must be finite".into()));
        }
        if poly.eval(0.0).abs() > 1e-14 {
            return Err(Error::Domain("deformation must vanish at the origin".into()));
        }
        let t = -poly.derivative().eval(0.0);
        if !(t > 0.0) {
            return Err(Error::Domain(format!("deformation needs t = -Q'(0) > 0, got {t}")));
        }
        for i in 0..=200 {
            let x = -SIGN_WINDOW + 2.0 * SIGN_WINDOW * i as f64 / 200.0;
            if x != 0.0 && x * poly.eval(x) >= 0.0 {
                return Err(Error::Domain(format!("deformation has the wrong sign at x = {x}")));
            }
        }
        Ok(Self { poly, t })
    }

    /// `Q(x) = -t x + sum_j higher[j] x^{j+2}`.
    pub fn from_t(t: f64, higher: &[f64]) -> Result<Self> {
        let mut c = vec![0.0, -t];
        c.extend_from_slice(higher);
        Self::new(c)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    pub fn poly(&self) -> &RealPolynomial {
        &self.poly
    }
}
