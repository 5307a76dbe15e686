//! Browser bindings. Every export returns a flat `Float64Array` of
//! interleaved columns; the column layout is given on each function.

use skp_core::thermo::{thermo_point, Convention, ZMethod};
use skp_core::{
    energy_2d, normalized_state, Constants, FieldConfig, PotentialParams, QuantumState, SkpError,
};
use wasm_bindgen::prelude::*;

fn msg(e: SkpError) -> String {
    e.to_string()
}

fn table_potential(alpha: f64) -> Result<PotentialParams, String> {
    PotentialParams::new(1.0, 0.5, alpha).map_err(msg)
}

fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, String> {
    if steps < 2 || !(lo < hi) {
        return Err(format!("need lo < hi and at least 2 steps, got [{lo}, {hi}] with {steps}"));
    }
    Ok((0..steps).map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64).collect())
}

/// `(B, E)` pairs for state `(n, m)` over `B in [0, b_max]`. Fields without
/// a bound spectrum give `NaN`.
pub fn energy_curve_rows(alpha: f64, phi: f64, n: u32, m: i32, b_max: f64, steps: usize) -> Result<Vec<f64>, String> {
    let p = table_potential(alpha)?;
    let q = QuantumState::new(n, m);
    let k = Constants::default();
    let mut out = Vec::with_capacity(2 * steps);
    for b in grid(0.0, b_max, steps)? {
        let f = FieldConfig::new(b, phi).map_err(msg)?;
        out.push(b);
        out.push(energy_2d(&p, &f, &q, &k).unwrap_or(f64::NAN));
    }
    Ok(out)
}

fn z_method(name: &str) -> Result<ZMethod, String> {
    match name {
        "sum" => Ok(ZMethod::DirectSum),
        "quad" => Ok(ZMethod::Quadrature),
        "closed" => Ok(ZMethod::ClosedForm),
        other => Err(format!("unknown method {other:?}")),
    }
}

/// `(beta, Z, U, F, S, Cv, M, chi)` rows over `beta in [beta_lo, beta_hi]`.
pub fn thermo_curve_rows(
    alpha: f64,
    b: f64,
    phi: f64,
    m: i32,
    beta_lo: f64,
    beta_hi: f64,
    steps: usize,
    method: &str,
) -> Result<Vec<f64>, String> {
    if !(beta_lo > 0.0) {
        return Err(format!("beta must be > 0, got {beta_lo}"));
    }
    let p = table_potential(alpha)?;
    let f = FieldConfig::new(b, phi).map_err(msg)?;
    let method = z_method(method)?;
    let k = Constants::default();
    let mut out = Vec::with_capacity(8 * steps);
    for beta in grid(beta_lo, beta_hi, steps)? {
        let t = thermo_point(&p, &f, m, &k, beta, method, Convention::Standard).map_err(msg)?;
        out.extend([beta, t.z, t.u, t.f, t.s, t.cv, t.magnetization, t.chi]);
    }
    Ok(out)
}

/// `(r, rho)` pairs of the normalized radial function. The range grows
/// until the outer tenth holds less than `1e-4` of the peak amplitude.
pub fn radial_profile_rows(alpha: f64, b: f64, phi: f64, n: u32, m: i32, points: usize) -> Result<Vec<f64>, String> {
    if points < 2 {
        return Err("need at least 2 points".into());
    }
    let p = table_potential(alpha)?;
    let f = FieldConfig::new(b, phi).map_err(msg)?;
    let state = normalized_state(&p, &f, &QuantumState::new(n, m), &Constants::default()).map_err(msg)?;
    let sample = |r_max: f64| -> Result<Vec<(f64, f64)>, String> {
        grid(0.0, r_max, points)?
            .into_iter()
            .map(|r| Ok((r, if r > 0.0 { state.rho_r(r).map_err(msg)? } else { 0.0 })))
            .collect()
    };
    let mut r_max = 4.0 * state.envelope_peak().max(1.0);
    let mut rows = sample(r_max)?;
    for _ in 0..60 {
        let peak = rows.iter().fold(0.0f64, |a, &(_, v)| a.max(v.abs()));
        let tail = rows[points - points / 10 - 1..].iter().fold(0.0f64, |a, &(_, v)| a.max(v.abs()));
        if tail < 1e-4 * peak {
            break;
        }
        r_max *= 1.5;
        rows = sample(r_max)?;
    }
    Ok(rows.into_iter().flat_map(|(r, v)| [r, v]).collect())
}

#[wasm_bindgen]
pub fn energy_curve(alpha: f64, phi: f64, n: u32, m: i32, b_max: f64, steps: usize) -> Result<Vec<f64>, JsError> {
    energy_curve_rows(alpha, phi, n, m, b_max, steps).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn thermo_curve(
    alpha: f64,
    b: f64,
    phi: f64,
    m: i32,
    beta_lo: f64,
    beta_hi: f64,
    steps: usize,
    method: &str,
) -> Result<Vec<f64>, JsError> {
    thermo_curve_rows(alpha, b, phi, m, beta_lo, beta_hi, steps, method).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn radial_profile(alpha: f64, b: f64, phi: f64, n: u32, m: i32, points: usize) -> Result<Vec<f64>, JsError> {
    radial_profile_rows(alpha, b, phi, n, m, points).map_err(|e| JsError::new(&e))
}
