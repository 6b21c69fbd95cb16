//! Airy function `Ai` and its derivative on `|x| <= 200`.
//!
//! The Maclaurin series is used on `[-7.5, 5.5]`. Outside, the classical
//! asymptotic expansions are summed up to their smallest term.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::{Error, Result};

/// `Ai(0)`.
pub const AI0: f64 = 0.355_028_053_887_817_2;
/// `-Ai'(0)`.
pub const AIP0: f64 = 0.258_819_403_792_806_8;

const DOMAIN: f64 = 200.0;
const SERIES_LEFT: f64 = -7.5;
const SERIES_RIGHT: f64 = 5.5;
const MAX_TERMS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AiryPair {
    pub ai: f64,
    pub aip: f64,
}

pub fn airy(x: f64) -> Result<AiryPair> {
    if !x.is_finite() || x.abs() > DOMAIN {
        return Err(Error::Domain(format!("Airy argument {x} outside [-200, 200]")));
    }
    if (SERIES_LEFT..=SERIES_RIGHT).contains(&x) {
        Ok(airy_series(x))
    } else {
        Ok(airy_asymptotic(x))
    }
}

pub fn airy_ai(x: f64) -> Result<f64> {
    airy(x).map(|p| p.ai)
}

pub fn airy_ai_prime(x: f64) -> Result<f64> {
    airy(x).map(|p| p.aip)
}

/// Maclaurin two-series representation, accurate for moderate `|x|`.
pub fn airy_series(x: f64) -> AiryPair {
    let x3 = x * x * x;
    // f = sum 3^k (1/3)_k x^{3k}/(3k)!, g = sum 3^k (2/3)_k x^{3k+1}/(3k+1)!
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut tfp, mut tgp) = (x * x / 2.0, 1.0);
    fp += tfp;
    for k in 0..200usize {
        let kf = k as f64;
        tf *= x3 / ((3.0 * kf + 2.0) * (3.0 * kf + 3.0));
        tg *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 4.0));
        tgp *= x3 / ((3.0 * kf + 3.0) * (3.0 * kf + 1.0));
        if k >= 1 {
            tfp *= x3 / ((3.0 * kf + 2.0) * 3.0 * kf);
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if k > 2 && tf.abs() + tg.abs() + tfp.abs() + tgp.abs() < 1e-17 * scale {
            break;
        }
    }
    AiryPair {
        ai: AI0 * f - AIP0 * g,
        aip: AI0 * fp - AIP0 * gp,
    }
}

/// Asymptotic coefficients `u_k`; `v_k = -(6k+1)/(6k-1) u_k`.
fn u_coeff(k: usize, prev: f64) -> f64 {
    let kf = k as f64;
    prev * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / (216.0 * kf * (2.0 * kf - 1.0))
}

/// Asymptotic expansions for large `|x|` (exponential for `x > 0`, oscillatory for `x < 0`).
pub fn airy_asymptotic(x: f64) -> AiryPair {
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z * z.sqrt();
    let mut u = [0.0; MAX_TERMS];
    let mut v = [0.0; MAX_TERMS];
    u[0] = 1.0;
    v[0] = 1.0;
    for k in 1..MAX_TERMS {
        u[k] = u_coeff(k, u[k - 1]);
        v[k] = -(6.0 * k as f64 + 1.0) / (6.0 * k as f64 - 1.0) * u[k];
    }
    // Truncate at the smallest term of each sum.
    let sum_to_min = |c: &[f64; MAX_TERMS], step: usize, offset: usize, alternate: bool, zinv: f64| {
        let mut s = 0.0;
        let mut last = f64::INFINITY;
        let mut idx = offset;
        let mut j = 0;
        while idx < MAX_TERMS {
            let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
            let term = sign * c[idx] * zinv.powi(idx as i32);
            if term.abs() >= last {
                break;
            }
            s += term;
            last = term.abs();
            idx += step;
            j += 1;
        }
        s
    };
    let zinv = 1.0 / zeta;
    if x > 0.0 {
        let e = (-zeta).exp() / (2.0 * PI.sqrt());
        let q = z.powf(0.25);
        let su = sum_to_min(&u, 1, 0, true, zinv);
        let sv = sum_to_min(&v, 1, 0, true, zinv);
        AiryPair {
            ai: e / q * su,
            aip: -e * q * sv,
        }
    } else {
        let (s, c) = (zeta - FRAC_PI_4).sin_cos();
        let q = z.powf(0.25);
        let ue = sum_to_min(&u, 2, 0, true, zinv);
        let uo = sum_to_min(&u, 2, 1, true, zinv);
        let ve = sum_to_min(&v, 2, 0, true, zinv);
        let vo = sum_to_min(&v, 2, 1, true, zinv);
        let rpi = 1.0 / PI.sqrt();
        AiryPair {
            ai: rpi / q * (c * ue + s * uo),
            aip: rpi * q * (s * ve - c * vo),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero() {
        let p = airy(0.0).unwrap();
        assert_eq!(p.ai, AI0);
        assert_eq!(p.aip, -AIP0);
    }

    #[test]
    fn representations_overlap() {
        // Positive side at the switchover radius; on the negative side the
        // oscillatory expansion only reaches 1e-10 from |x| = 7.
        for k in 0..=10 {
            for x in [5.0 + 0.1 * k as f64, -7.0 - 0.1 * k as f64] {
                let (a, b) = (airy_series(x), airy_asymptotic(x));
                assert!((a.ai - b.ai).abs() < 1e-10 && (a.aip - b.aip).abs() < 1e-10, "x={x}");
            }
        }
        assert!((airy_ai(1.0).unwrap() - 0.135292416312881).abs() < 1e-14);
    }

    #[test]
    fn domain_enforced() {
        assert!(airy(201.0).is_err());
        assert!(airy(f64::NAN).is_err());
        assert_eq!(airy_ai(200.0).unwrap(), 0.0);
    }

    #[test]
    fn wronskian_like_identity_on_both_branches() {
        // d/dx (Ai'^2 - x Ai^2) = -Ai^2, checked by central differences.
        for &x in &[-12.0, -3.0, 0.7, 4.0, 8.0] {
            let h = 1e-4;
            let f = |t: f64| {
                let p = airy(t).unwrap();
                p.aip * p.aip - t * p.ai * p.ai
            };
            let d = (f(x + h) - f(x - h)) / (2.0 * h);
            let a = airy_ai(x).unwrap();
            assert!((d + a * a).abs() < 1e-7, "x={x}");
        }
    }
}
