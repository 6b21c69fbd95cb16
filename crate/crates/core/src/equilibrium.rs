//! One-cut equilibrium measures of polynomial potentials and their soft-edge data.
//!
//! Everything downstream works in the shifted frame where the support is
//! `[-a, 0]`, so the right endpoint sits at the origin.

use std::f64::consts::PI;

use serde::Serialize;

use crate::numerics::{gauss_legendre_cached, integrate_panels, PanelScheme, RealPolynomial};
use crate::special::f_beta_quad;
use crate::{Error, Result};

/// Real polynomial potential of even degree with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Potential {
    poly: RealPolynomial,
    deriv: RealPolynomial,
}

impl Potential {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Result<Self> {
        let poly = RealPolynomial::new(coeffs);
        if !poly.is_finite() {
            return Err(Error::Domain("potential coefficients must be finite".into()));
        }
        let d = poly.degree();
        if d < 2 || !d.is_multiple_of(2) || poly.leading() <= 0.0 {
            return Err(Error::Domain(format!(
                "potential must have even degree >= 2 and positive leading coefficient (degree {d})"
            )));
        }
        let deriv = poly.derivative();
        Ok(Self { poly, deriv })
    }

    pub fn poly(&self) -> &RealPolynomial {
        &self.poly
    }

    pub fn derivative(&self) -> &RealPolynomial {
        &self.deriv
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x)
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        self.deriv.eval(x)
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// `x -> V(x + c)`.
    pub fn shifted(&self, c: f64) -> Self {
        let poly = self.poly.shifted(c);
        let deriv = poly.derivative();
        Self { poly, deriv }
    }
}

const CHEB_POINTS: usize = 64;

/// Endpoint moment conditions in the `(center, half-width)` parametrisation, with Jacobian.
fn endpoint_system(v: &Potential, m: f64, h: f64) -> ([f64; 2], [[f64; 2]; 2]) {
    let v2 = v.derivative().derivative();
    let n = CHEB_POINTS as f64;
    let (mut f1, mut f2) = (0.0, 0.0);
    let mut jac = [[0.0; 2]; 2];
    for j in 0..CHEB_POINTS {
        let c = (PI * (j as f64 + 0.5) / n).cos();
        let x = m + h * c;
        let d1 = v.eval_deriv(x);
        let d2 = v2.eval(x);
        f1 += d1;
        f2 += x * d1;
        jac[0][0] += d2;
        jac[0][1] += d2 * c;
        jac[1][0] += d1 + x * d2;
        jac[1][1] += c * d1 + x * d2 * c;
    }
    let scale = 1.0 / (2.0 * n);
    for row in jac.iter_mut() {
        for e in row.iter_mut() {
            *e *= scale;
        }
    }
    ([f1 * scale, f2 * scale - 1.0], jac)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Support `[b_-, b_+]` of the one-cut equilibrium measure by damped Newton iteration.
pub fn solve_support(v: &Potential) -> Result<(f64, f64)> {
    // Start at the minimiser of V with the half-width of the pure leading monomial.
    let lead = v.poly().leading();
    let coeffs = v.derivative().coeffs();
    let dl = *coeffs.last().unwrap();
    let radius = 1.0 + coeffs.iter().map(|c| (c / dl).abs()).fold(0.0, f64::max);
    let mut m = 0.0;
    let mut best = f64::INFINITY;
    for i in 0..=4000 {
        let x = -radius + 2.0 * radius * i as f64 / 4000.0;
        let val = v.eval(x);
        if val < best {
            best = val;
            m = x;
        }
    }
    let k = v.degree() / 2;
    let mut h = (4f64.powi(k as i32) / (lead * k as f64 * binomial(2 * k, k))).powf(0.5 / k as f64);

    const MAX_ITER: usize = 200;
    let norm = |f: [f64; 2]| f[0].abs().max(f[1].abs());
    for _ in 0..MAX_ITER {
        let (f, j) = endpoint_system(v, m, h);
        let r = norm(f);
        if !r.is_finite() {
            return Err(Error::NoOneCut("endpoint equations became non-finite".into()));
        }
        if r < 1e-14 {
            return Ok((m - h, m + h));
        }
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::NoOneCut("singular endpoint Jacobian".into()));
        }
        let dm = (f[0] * j[1][1] - f[1] * j[0][1]) / det;
        let dh = (j[0][0] * f[1] - j[1][0] * f[0]) / det;
        let mut lambda = 1.0;
        loop {
            let (mn, hn) = (m - lambda * dm, h - lambda * dh);
            if hn > 0.0 && norm(endpoint_system(v, mn, hn).0) < r {
                m = mn;
                h = hn;
                break;
            }
            lambda *= 0.5;
            if lambda < 1e-10 {
                // Residual at the rounding floor; accept the current iterate.
                if r < 1e-11 {
                    return Ok((m - h, m + h));
                }
                return Err(Error::NoConvergence {
                    what: "endpoint Newton line search",
                    iterations: MAX_ITER,
                });
            }
        }
    }
    Err(Error::NoConvergence {
        what: "endpoint Newton iteration",
        iterations: MAX_ITER,
    })
}

/// Shifts `V` so that the right endpoint of its support sits at 0.
///
/// Returns the shifted potential and the shift `b_+`, with `V_shifted(x) = V(x + b_+)`.
pub fn shift_to_zero(v: &Potential) -> Result<(Potential, f64)> {
    let (_, bp) = solve_support(v)?;
    Ok((v.shifted(bp), bp))
}

/// Polynomial part of `V'(z) / sqrt(z (z + a))` for a potential in the shifted frame.
pub fn compute_h(v_shifted: &Potential, a: f64) -> RealPolynomial {
    let dv = v_shifted.derivative().coeffs();
    let deg_h = dv.len().saturating_sub(2);
    // (z(z+a))^{-1/2} = sum_k binom(-1/2, k) a^k z^{-k-1}
    let mut series = Vec::with_capacity(dv.len());
    let mut c = 1.0;
    for k in 0..dv.len() {
        if k > 0 {
            c *= -(2.0 * k as f64 - 1.0) / (2.0 * k as f64) * a;
        }
        series.push(c);
    }
    let coeffs: Vec<f64> = (0..=deg_h)
        .map(|m| {
            (0..dv.len())
                .filter(|k| m + k + 1 < dv.len())
                .map(|k| series[k] * dv[m + k + 1])
                .sum()
        })
        .collect();
    RealPolynomial::new(coeffs)
}

/// Equilibrium measure data of a one-cut potential, in the shifted frame.
#[derive(Clone, Debug, Serialize)]
pub struct EquilibriumData {
    /// The potential in the original frame.
    pub original: Potential,
    /// `V(x + shift)`, whose support is `[-a, 0]`.
    pub potential: Potential,
    pub shift: f64,
    pub b_minus: f64,
    pub b_plus: f64,
    pub a: f64,
    pub h: RealPolynomial,
    pub c_v: f64,
    /// Lagrange constant from the logarithmic potential at the midpoint.
    pub ell: f64,
    /// Lagrange constant from the large-x asymptotics, kept as a cross-check.
    pub ell_asymptotic: f64,
}

impl EquilibriumData {
    pub fn new(v: &Potential) -> Result<Self> {
        let (b_minus, b_plus) = solve_support(v)?;
        let a = b_plus - b_minus;
        let potential = v.shifted(b_plus);
        let h = compute_h(&potential, a);
        for i in 0..=200 {
            let x = -a * i as f64 / 200.0;
            if h.eval(x) <= 0.0 {
                return Err(Error::NoOneCut(format!("density factor h vanishes near x = {x}")));
            }
        }
        let c_v = 2f64.powf(-2.0 / 3.0) * h.eval(0.0).powf(2.0 / 3.0) * a.cbrt();
        let mut eq = Self {
            original: v.clone(),
            potential,
            shift: b_plus,
            b_minus,
            b_plus,
            a,
            h,
            c_v,
            ell: 0.0,
            ell_asymptotic: 0.0,
        };
        eq.ell = eq.lagrange_from_potential()?;
        eq.ell_asymptotic = eq.lagrange_from_asymptotics()?;
        if (eq.ell - eq.ell_asymptotic).abs() >= 1e-6 {
            return Err(Error::Inconsistency(format!(
                "Lagrange constant routes disagree: {} vs {}",
                eq.ell, eq.ell_asymptotic
            )));
        }
        for x in [0.5, 1.0, 2.0, -a - 0.5, -a - 1.0, -a - 2.0] {
            if eq.el_residual(x)? <= 0.0 {
                return Err(Error::NoOneCut(format!("variational inequality fails at x = {x}")));
            }
        }
        Ok(eq)
    }

    /// Density of the equilibrium measure (shifted frame).
    pub fn density(&self, x: f64) -> f64 {
        if x < -self.a || x > 0.0 {
            return 0.0;
        }
        (x.abs() * (x + self.a)).sqrt() * self.h.eval(x) / (2.0 * PI)
    }

    fn theta_of(&self, x: f64) -> f64 {
        (-2.0 * x / self.a - 1.0).clamp(-1.0, 1.0).acos()
    }

    fn y_of(&self, theta: f64) -> f64 {
        -0.5 * self.a * (1.0 + theta.cos())
    }

    /// Measure density in the angle variable, `y = -a/2 (1 + cos theta)`.
    fn theta_density(&self, theta: f64) -> f64 {
        let s = theta.sin();
        self.a * self.a / (8.0 * PI) * s * s * self.h.eval(self.y_of(theta))
    }

    /// Total mass, should equal 1.
    pub fn mass(&self) -> Result<f64> {
        let rule = gauss_legendre_cached(32)?;
        let scheme = PanelScheme::uniform(0.0, PI, 4, 32)?;
        integrate_panels(|t| self.theta_density(t), &scheme, &rule)
    }

    /// Mass of `(x, 0)` for `x` in `[-a, 0]`.
    pub fn mass_right_of(&self, x: f64) -> Result<f64> {
        let tx = self.theta_of(x);
        if tx >= PI {
            return Ok(0.0);
        }
        let rule = gauss_legendre_cached(32)?;
        let scheme = PanelScheme::uniform(tx, PI, 4, 32)?;
        integrate_panels(|t| self.theta_density(t), &scheme, &rule)
    }

    /// Logarithmic potential `U(x) = int log(1/|x - y|) dmu(y)`.
    pub fn log_potential(&self, x: f64) -> Result<f64> {
        let ts = self.theta_of(x);
        let rule = gauss_legendre_cached(16)?;
        // A node can round onto the singularity; its weight is below 1e-14 there.
        let f = |t: f64| {
            let d = (x - self.y_of(t)).abs();
            if d == 0.0 { 0.0 } else { -d.ln() * self.theta_density(t) }
        };
        let mut total = 0.0;
        if ts > 0.0 {
            let sch = PanelScheme::graded_toward_right(0.0, ts, 45, 16)?;
            total += integrate_panels(f, &sch, &rule)?;
        }
        if ts < PI {
            let sch = PanelScheme::graded_toward_left(ts, PI, 45, 16)?;
            total += integrate_panels(f, &sch, &rule)?;
        }
        Ok(total)
    }

    fn lagrange_from_potential(&self) -> Result<f64> {
        let x0 = -0.5 * self.a;
        Ok(-self.log_potential(x0)? - 0.5 * self.potential.eval(x0))
    }

    /// `phi'(x) - V'(x)/2 + 1/x` for `x > 0`, free of cancellation.
    fn asymptotic_integrand(&self, n_poly: &RealPolynomial, x: f64) -> f64 {
        let root = (x * (x + self.a)).sqrt();
        let d = self.h.eval(x) * root + self.potential.eval_deriv(x);
        n_poly.eval(x) / (2.0 * d) + 1.0 / x
    }

    /// Limit of `phi(X) - V(X)/2 + log X` by a Richardson ladder at `X = 50 * 2^k`.
    fn lagrange_from_asymptotics(&self) -> Result<f64> {
        let a = self.a;
        let dv = self.potential.derivative();
        let quad = RealPolynomial::new(vec![0.0, a, 1.0]);
        let n_poly = self
            .h
            .mul(&self.h)
            .mul(&quad)
            .add(&dv.mul(dv).scale(-1.0))
            .truncated(self.potential.degree().saturating_sub(2));
        let x0 = 2.0 * a + 1.0;
        let mut f = self.phi(x0)? - 0.5 * self.potential.eval(x0) + x0.ln();
        let rule = gauss_legendre_cached(16)?;
        let mut left = x0;
        const LEVELS: usize = 8;
        let mut values = Vec::with_capacity(LEVELS);
        for k in 0..LEVELS {
            let right = 50.0 * 2f64.powi(k as i32);
            let sch = PanelScheme::graded_toward_left(left, right, 12, 16)?;
            f += integrate_panels(|x| self.asymptotic_integrand(&n_poly, x), &sch, &rule)?;
            values.push(f);
            left = right;
        }
        // Error expansion in integer powers of 1/X.
        let mut table = values;
        for j in 1..LEVELS {
            let fac = 2f64.powi(j as i32);
            table = table
                .windows(2)
                .map(|w| w[1] + (w[1] - w[0]) / (fac - 1.0))
                .collect();
        }
        Ok(table[0])
    }

    /// `phi(z) = int_0^z (1/2) sqrt(s(s+a)) h(s) ds` for `z >= 0`.
    pub fn phi(&self, z: f64) -> Result<f64> {
        if z < 0.0 {
            return Err(Error::Domain(format!("phi is evaluated on z >= 0, got {z}")));
        }
        if z == 0.0 {
            return Ok(0.0);
        }
        let rule = gauss_legendre_cached(16)?;
        let sch = PanelScheme::uniform(0.0, 1.0, 8, 16)?;
        let a = self.a;
        let inner = integrate_panels(
            |w| w * w * (z * w * w + a).sqrt() * self.h.eval(z * w * w),
            &sch,
            &rule,
        )?;
        Ok(z * z.sqrt() * inner)
    }

    /// `int_z^0 (1/2) sqrt(|s|(s+a)) h(s) ds` for `-a <= z <= 0`.
    fn phi_inside(&self, z: f64) -> Result<f64> {
        let rule = gauss_legendre_cached(16)?;
        let sch = PanelScheme::uniform(0.0, 1.0, 8, 16)?;
        let (a, m) = (self.a, -z);
        let inner = integrate_panels(
            |w| w * w * (a - m * w * w).max(0.0).sqrt() * self.h.eval(-m * w * w),
            &sch,
            &rule,
        )?;
        Ok(m * m.sqrt() * inner)
    }

    /// Conformal map `psi = (3 phi / 2)^{2/3}`, continued as a negative real for `-a < z < 0`.
    pub fn psi(&self, z: f64) -> Result<f64> {
        if z >= 0.0 {
            Ok((1.5 * self.phi(z)?).powf(2.0 / 3.0))
        } else if z > -self.a {
            Ok(-(1.5 * self.phi_inside(z)?).powf(2.0 / 3.0))
        } else {
            Err(Error::Domain(format!("psi is defined on (-a, inf), got {z}")))
        }
    }

    /// `U(x) + V(x)/2 + ell`: zero on the support, positive outside.
    pub fn el_residual(&self, x: f64) -> Result<f64> {
        Ok(self.log_potential(x)? + 0.5 * self.potential.eval(x) + self.ell)
    }

    /// Support in the shifted frame.
    pub fn support(&self) -> (f64, f64) {
        (-self.a, 0.0)
    }
}

/// `log sigma` for `z = s + n^{2/3} Q(x)`, i.e. `-log(1 + e^{-z})`.
pub fn log_fermi(z: f64) -> f64 {
    z.min(0.0) - (-z.abs()).exp().ln_1p()
}

/// Szego-type constant `q_0 = -(1/2 pi) int_0^pi log sigma_n(x(theta)) d theta`.
pub fn szego_q0(eq: &EquilibriumData, q: &RealPolynomial, n: usize, s: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be >= 1".into()));
    }
    let scale = (n as f64).powf(2.0 / 3.0);
    let rule = gauss_legendre_cached(16)?;
    // The integrand is concentrated within n^{-1/3} of theta = pi (x = 0).
    let sch = PanelScheme::graded_toward_right(0.0, PI, 40, 16)?;
    let v = integrate_panels(
        |t| log_fermi(s + scale * q.eval(-0.5 * eq.a * (1.0 + t.cos()))),
        &sch,
        &rule,
    )?;
    Ok(-v / (2.0 * PI))
}

/// Large-n limit of `n^{1/3} q_0`: `F_{-1/2}(s) / (2 pi sqrt(a t))`.
pub fn q0_limit(s: f64, t: f64, a: f64) -> Result<f64> {
    if !(t > 0.0 && a > 0.0) {
        return Err(Error::Domain("q0_limit needs t > 0 and a > 0".into()));
    }
    Ok(f_beta_quad(-0.5, s)? / (2.0 * PI * (a * t).sqrt()))
}
