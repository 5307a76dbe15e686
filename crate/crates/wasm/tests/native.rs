use skp_wasm::{energy_curve_rows, radial_profile_rows, thermo_curve_rows};

#[test]
fn energy_curve_starts_at_zero_field_level() {
    let rows = energy_curve_rows(0.005, 0.0, 0, 0, 10.0, 11).unwrap();
    assert_eq!(rows.len(), 22);
    assert_eq!(rows[0], 0.0);
    assert_eq!(rows[1], -0.224453125);
    assert_eq!(rows[20], 10.0);
    assert!(rows.chunks(2).map(|c| c[1]).collect::<Vec<_>>().windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn thermo_curve_layout() {
    let rows = thermo_curve_rows(0.005, 0.02, 1.0, 0, 0.5, 5.0, 4, "sum").unwrap();
    assert_eq!(rows.len(), 32);
    for r in rows.chunks(8) {
        let (beta, z, u, f, s) = (r[0], r[1], r[2], r[3], r[4]);
        assert!(z > 0.0);
        assert!((s - beta * (u - f)).abs() < 1e-10);
    }
    assert!(thermo_curve_rows(0.005, 0.02, 1.0, 0, 0.5, 5.0, 4, "nope").is_err());
    assert!(thermo_curve_rows(0.005, 0.02, 1.0, 0, 0.0, 5.0, 4, "sum").is_err());
}

#[test]
fn radial_profile_is_normalized_on_its_range() {
    let rows = radial_profile_rows(0.005, 0.0, 0.0, 1, 0, 4001).unwrap();
    let pts: Vec<(f64, f64)> = rows.chunks(2).map(|c| (c[0], c[1])).collect();
    let h = pts[1].0 - pts[0].0;
    let norm: f64 = pts.windows(2).map(|w| 0.5 * h * (w[0].1.powi(2) + w[1].1.powi(2))).sum();
    assert!((norm - 1.0).abs() < 1e-4, "{norm}");
    let nodes = pts.windows(2).filter(|w| w[0].1 * w[1].1 < 0.0).count();
    assert_eq!(nodes, 1);
}
