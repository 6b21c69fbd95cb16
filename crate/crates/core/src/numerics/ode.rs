use crate::{Error, Result};

/// States of an ODE integration on a uniform grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

/// Classical fixed-step RK4 integrator. Negative steps integrate downward.
pub struct Rk4Stepper<F> {
    rhs: F,
    t: f64,
    h: f64,
    y: Vec<f64>,
    k: [Vec<f64>; 4],
    tmp: Vec<f64>,
    steps: usize,
}

impl<F: FnMut(f64, &[f64], &mut [f64])> Rk4Stepper<F> {
    pub fn new(rhs: F, t0: f64, y0: Vec<f64>, h: f64) -> Self {
        let n = y0.len();
        Self {
            rhs,
            t: t0,
            h,
            y: y0,
            k: [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]],
            tmp: vec![0.0; n],
            steps: 0,
        }
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[f64] {
        &self.y
    }

    /// Advances one step; a non-finite state is reported as a blow-up.
    pub fn step(&mut self) -> Result<()> {
        let (t, h) = (self.t, self.h);
        let n = self.y.len();
        (self.rhs)(t, &self.y, &mut self.k[0]);
        for i in 0..n {
            self.tmp[i] = self.y[i] + 0.5 * h * self.k[0][i];
        }
        (self.rhs)(t + 0.5 * h, &self.tmp, &mut self.k[1]);
        for i in 0..n {
            self.tmp[i] = self.y[i] + 0.5 * h * self.k[1][i];
        }
        (self.rhs)(t + 0.5 * h, &self.tmp, &mut self.k[2]);
        for i in 0..n {
            self.tmp[i] = self.y[i] + h * self.k[2][i];
        }
        (self.rhs)(t + h, &self.tmp, &mut self.k[3]);
        for i in 0..n {
            self.y[i] += h / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
        }
        self.steps += 1;
        self.t = t + h;
        if self.y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { step: self.steps, at: self.t });
        }
        Ok(())
    }

    /// Sets the time exactly, to avoid drift from repeated additions.
    pub fn set_time(&mut self, t: f64) {
        self.t = t;
    }
}

/// Integrates `y' = rhs(t, y)` from `t0` to `t1` in `steps` equal RK4 steps.
pub fn ode_rk4<F: FnMut(f64, &[f64], &mut [f64])>(
    rhs: F,
    y0: Vec<f64>,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::Domain("RK4 needs at least one step".into()));
    }
    if !(t0.is_finite() && t1.is_finite()) || t0 == t1 {
        return Err(Error::Domain("RK4 interval must be finite and non-empty".into()));
    }
    let h = (t1 - t0) / steps as f64;
    let mut stepper = Rk4Stepper::new(rhs, t0, y0, h);
    let mut times = vec![t0];
    let mut states = vec![stepper.state().to_vec()];
    for i in 1..=steps {
        stepper.step()?;
        let t = if i == steps { t1 } else { t0 + h * i as f64 };
        stepper.set_time(t);
        times.push(t);
        states.push(stepper.state().to_vec());
    }
    Ok(Trajectory { times, states })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let tr = ode_rk4(|_, y, dy| dy[0] = y[0], vec![1.0], 0.0, 1.0, 100).unwrap();
        assert!((tr.states.last().unwrap()[0] - 1f64.exp()).abs() < 1e-9);
        assert_eq!(tr.times.len(), 101);
    }

    #[test]
    fn downward_integration() {
        let tr = ode_rk4(|_, y, dy| dy[0] = y[0], vec![1.0], 0.0, -1.0, 100).unwrap();
        assert!((tr.states[100][0] - (-1f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn blow_up_is_reported() {
        let r = ode_rk4(|_, y, dy| dy[0] = y[0] * y[0], vec![1.0], 0.0, 2.0, 200);
        assert!(matches!(r, Err(Error::BlowUp { .. })));
    }

    #[test]
    fn zero_steps_rejected() {
        assert!(ode_rk4(|_, _, _| {}, vec![0.0], 0.0, 1.0, 0).is_err());
    }
}
