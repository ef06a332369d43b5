use holospace::{Complex64, TruncatedSeries};
use proptest::prelude::*;

fn coeffs(len: usize, scale: f64) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-scale..scale, -scale..scale), len).prop_map(|v| {
        v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()
    })
}

fn series(n: usize, scale: f64) -> impl Strategy<Value = TruncatedSeries> {
    coeffs(n + 1, scale).prop_map(TruncatedSeries::new)
}

/// Full product of two coefficient vectors, no truncation.
fn full_product(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_agrees_with_full_product_below_truncation(f in series(12, 1.0), g in series(12, 1.0)) {
        let full = full_product(f.coeffs(), g.coeffs());
        let prod = f.mul(&g).unwrap();
        for k in 0..=12 {
            prop_assert!((prod.coeff(k) - full[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn truncating_earlier_commutes_with_products(f in series(20, 1.0), g in series(20, 1.0)) {
        let late = f.mul(&g).unwrap().resize(8);
        let early = f.resize(8).mul(&g.resize(8)).unwrap();
        prop_assert!(late.max_abs_diff(&early).unwrap() < 1e-12);
    }

    #[test]
    fn division_inverts_multiplication(f in series(16, 1.0), g in series(16, 0.3)) {
        let g = g.add_constant(Complex64::new(1.0, 0.0));
        let q = f.div(&g).unwrap();
        prop_assert!(q.mul(&g).unwrap().max_abs_diff(&f).unwrap() < 1e-9);
    }

    #[test]
    fn exp_then_log_is_identity(f in series(24, 0.3)) {
        let f = f.add_constant(-f.coeff(0));
        let back = f.exp_series().log_series(Complex64::new(0.0, 0.0)).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn derivative_undoes_antiderivative(f in series(16, 1.0)) {
        let d = f.antiderivative().derivative();
        for k in 0..16 {
            prop_assert!((d.coeff(k) - f.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn composition_matches_pointwise(f in coeffs(6, 1.0), g in coeffs(3, 0.2), re in -0.5..0.5f64, im in -0.5..0.5f64) {
        let n = 60;
        let mut g = g;
        g[0] = Complex64::new(0.0, 0.0);
        let fs = TruncatedSeries::from_poly(&f, n);
        let gs = TruncatedSeries::from_poly(&g, n);
        let z = Complex64::new(re, im);
        let direct = fs.evaluate(gs.evaluate(z));
        prop_assert!((fs.compose(&gs).unwrap().evaluate(z) - direct).norm() < 1e-10);
    }
}
