use std::sync::OnceLock;

use proptest::prelude::*;

use edgelab::ensemble::{DeformationQ, Ensemble, WeightSpec};
use edgelab::equilibrium::{log_fermi, EquilibriumData, Potential};
use edgelab::lab::{ResultRecord, Verdict};
use edgelab::numerics::{gauss_legendre, lu_logdet, symmetric_eigenvalues, RealPolynomial, SquareMatrix};
use edgelab::special::{airy, f_beta_quad, fermi_weight};

fn shifted_gue() -> &'static EquilibriumData {
    static EQ: OnceLock<EquilibriumData> = OnceLock::new();
    EQ.get_or_init(|| EquilibriumData::new(&Potential::new(vec![2.0, 4.0, 2.0]).unwrap()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_legendre_exact_to_degree_2m_minus_1(m in 1usize..40, k in 0usize..80) {
        prop_assume!(k < 2 * m);
        let r = gauss_legendre(m).unwrap();
        let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(k as i32)).sum();
        let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
        prop_assert!((q - exact).abs() < 1e-13);
    }

    #[test]
    fn log_fermi_reflection(z in -700.0f64..700.0) {
        prop_assert!((log_fermi(z) - log_fermi(-z) - z).abs() <= 1e-12 * (1.0 + z.abs()));
        prop_assert!(log_fermi(z) <= 0.0);
    }

    #[test]
    fn fermi_weight_is_derivative_of_sigma(r in -30.0f64..30.0) {
        let h = 1e-5;
        let sig = |x: f64| log_fermi(x).exp();
        let fd = (sig(r + h) - sig(r - h)) / (2.0 * h);
        prop_assert!((fd - fermi_weight(r)).abs() < 1e-9);
        prop_assert_eq!(fermi_weight(r), fermi_weight(-r));
    }

    #[test]
    fn airy_solves_its_ode(x in -25.0f64..25.0) {
        let h = 1e-3;
        let f = |t: f64| airy(t).unwrap().ai;
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        prop_assert!((d2 - x * f(x)).abs() < 1e-4 * (1.0 + x.abs()));
        let dfd = (f(x + h) - f(x - h)) / (2.0 * h);
        prop_assert!((dfd - airy(x).unwrap().aip).abs() < 1e-5 * (1.0 + x.abs()));
    }

    #[test]
    fn f_beta_decreasing_in_y(beta in -0.9f64..3.0, y in -5.0f64..20.0, dy in 0.1f64..3.0) {
        let a = f_beta_quad(beta, y).unwrap();
        let b = f_beta_quad(beta, y + dy).unwrap();
        prop_assert!(b < a && b > 0.0);
    }

    #[test]
    fn logdet_matches_eigenvalues(entries in prop::collection::vec(-1.0f64..1.0, 36)) {
        // A A^T + I is symmetric positive definite.
        let a = SquareMatrix::new(6, entries).unwrap();
        let spd = SquareMatrix::from_fn(6, |i, j| {
            (0..6).map(|k| a[(i, k)] * a[(j, k)]).sum::<f64>() + if i == j { 1.0 } else { 0.0 }
        });
        let (sign, logabs) = lu_logdet(&spd).unwrap();
        let ev: f64 = symmetric_eigenvalues(&spd).unwrap().iter().map(|l| l.ln()).sum();
        prop_assert_eq!(sign, 1.0);
        prop_assert!((logabs - ev).abs() < 1e-10);
    }

    #[test]
    fn polynomial_product_evaluates_pointwise(
        p in prop::collection::vec(-3.0f64..3.0, 1..6),
        q in prop::collection::vec(-3.0f64..3.0, 1..6),
        x in -2.0f64..2.0,
    ) {
        let (p, q) = (RealPolynomial::new(p), RealPolynomial::new(q));
        let pq = p.mul(&q);
        prop_assert!((pq.eval(x) - p.eval(x) * q.eval(x)).abs() < 1e-10);
        let shifted = p.shifted(0.7);
        prop_assert!((shifted.eval(x) - p.eval(x + 0.7)).abs() < 1e-10);
    }

    #[test]
    fn csv_float_columns_round_trip(v in prop::num::f64::NORMAL, p in -1e6f64..1e6) {
        let r = ResultRecord::new("s", "q", &[("p", p)], v).with_aux("a", -v).with_verdict(Verdict::Pass);
        let text = edgelab::lab::to_csv_string(&[r]);
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let row = rd.records().next().unwrap().unwrap();
        prop_assert_eq!(row[3].parse::<f64>().unwrap(), v);
        prop_assert_eq!(row[2].strip_prefix("p=").unwrap().parse::<f64>().unwrap(), p);
        prop_assert_eq!(&row[5], "pass");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn kernel_forms_agree_and_are_symmetric(n in 2usize..12, s in -2.0f64..3.0, x in -2.2f64..0.4, y in -2.2f64..0.4) {
        let q = DeformationQ::new(vec![0.0, -1.0]).unwrap();
        let e = Ensemble::new(shifted_gue(), WeightSpec::new(n, s, q).unwrap()).unwrap();
        let cd = e.cd_kernel(x, y);
        prop_assert!((cd - e.kernel_sum(x, y)).abs() < 1e-9 * (1.0 + cd.abs()));
        prop_assert!((cd - e.cd_kernel(y, x)).abs() < 1e-12 * (1.0 + cd.abs()));
        prop_assert!(e.cd_kernel(x, x) >= 0.0);
    }

    #[test]
    fn dlog_lstat_ds_is_positive(n in 1usize..10, s in -3.0f64..4.0) {
        let q = DeformationQ::new(vec![0.0, -1.0]).unwrap();
        let e = Ensemble::new(shifted_gue(), WeightSpec::new(n, s, q).unwrap()).unwrap();
        let d = e.dlog_lstat_ds();
        prop_assert!(d > 0.0 && d < n as f64);
    }
}
