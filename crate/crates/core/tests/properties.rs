use proptest::prelude::*;

use skp_core::oracle::{brute_force_nmax, brute_force_partition, default_n_ceiling};
use skp_core::thermo::partition_direct;
use skp_core::{
    cutoffs, energy_2d, energy_db, quantization_residual, Constants, FieldConfig, PotentialParams, QuantumState,
};

fn k() -> Constants {
    Constants::default()
}

fn alpha() -> impl Strategy<Value = f64> {
    0.004..0.05f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn termination_residual_vanishes(a in alpha(), b in 0.0..6.0f64, phi in 0.0..6.0f64, n in 0u32..6, m in -4i32..=4) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::new(b, phi).unwrap();
        let q = QuantumState::new(n, m);
        if let Ok(e) = energy_2d(&p, &f, &q, &k()) {
            let r = quantization_residual(&p, &f, &q, &k(), e).unwrap();
            prop_assert!(r.abs() <= 1e-10, "residual {r}");
        }
    }

    #[test]
    fn nmax_matches_scan(a in alpha(), b in 0.0..6.0f64, phi in 0.0..6.0f64, m in -4i32..=4) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::new(b, phi).unwrap();
        if let Ok(c) = cutoffs(&p, &f, m, &k()) {
            let ceiling = default_n_ceiling(&p, &f, m, &k()).unwrap();
            prop_assert_eq!(c.n_max, brute_force_nmax(&p, &f, m, &k(), ceiling).unwrap());
        }
    }

    #[test]
    fn direct_sum_matches_scan(a in 0.005..0.02f64, b in 0.0..0.05f64, phi in 0.0..3.0f64, beta in 0.05..20.0f64) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::new(b, phi).unwrap();
        let z = partition_direct(&p, &f, 0, &k(), beta).unwrap();
        let oracle = brute_force_partition(&p, &f, 0, &k(), beta).unwrap();
        prop_assert!(((z - oracle) / oracle).abs() <= 1e-13, "{z} vs {oracle}");
    }

    #[test]
    fn field_derivative_matches_difference(a in alpha(), b in 0.5..6.0f64, phi in 0.0..6.0f64, n in 0u32..4, m in -3i32..=3) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::new(b, phi).unwrap();
        let q = QuantumState::new(n, m);
        let h = 1e-5 * b;
        let e = |x: f64| energy_2d(&p, &FieldConfig::new(x, phi).unwrap(), &q, &k());
        if let (Ok(d), Ok(ep), Ok(em)) = (energy_db(&p, &f, &q, &k()), e(b + h), e(b - h)) {
            let num = (ep - em) / (2.0 * h);
            prop_assert!((d - num).abs() <= 1e-5 * num.abs().max(1e-6), "{d} vs {num}");
        }
    }

    #[test]
    fn flux_shift_is_a_relabelling(a in alpha(), phi in 1.0..6.0f64, n in 0u32..4, m in -3i32..=3) {
        let p = PotentialParams::table(a);
        let e1 = energy_2d(&p, &FieldConfig::new(0.0, phi).unwrap(), &QuantumState::new(n, m), &k());
        let e2 = energy_2d(&p, &FieldConfig::new(0.0, phi - 1.0).unwrap(), &QuantumState::new(n, m + 1), &k());
        if let (Ok(e1), Ok(e2)) = (e1, e2) {
            prop_assert!((e1 - e2).abs() <= 1e-12 * e1.abs().max(1e-12));
        }
    }

    #[test]
    fn zero_field_levels_are_m_degenerate(a in alpha(), n in 0u32..6, m in 1i32..=5) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::zero();
        let plus = energy_2d(&p, &f, &QuantumState::new(n, m), &k()).unwrap();
        let minus = energy_2d(&p, &f, &QuantumState::new(n, -m), &k()).unwrap();
        prop_assert_eq!(plus, minus);
    }

    #[test]
    fn free_energy_bracketed_by_ground_level(a in 0.005..0.02f64, b in 0.0..0.05f64, beta in 0.1..2000.0f64) {
        let p = PotentialParams::table(a);
        let f = FieldConfig::new(b, 0.0).unwrap();
        let e0 = energy_2d(&p, &f, &QuantumState::new(0, 0), &k()).unwrap();
        let levels = f64::from(cutoffs(&p, &f, 0, &k()).unwrap().n_max + 1);
        let free = -partition_direct(&p, &f, 0, &k(), beta).unwrap().ln() / beta;
        let slack = 1e-12 * e0.abs();
        prop_assert!(free <= e0 + slack && free >= e0 - levels.ln() / beta - slack, "{free} vs {e0}");
    }
}
