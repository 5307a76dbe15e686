//! Partition functions and the thermodynamic and magnetic quantities built
//! on them, for one magnetic quantum number `m`.
//!
//! Three routes to `Z(beta)`:
//! - the direct sum over the levels `n = 0..=n_max`;
//! - the integral of `e^{-beta E(phi)}` over the continuous range
//!   `phi in [nu, eta_max + nu]`, by adaptive quadrature;
//! - the same integral in closed form through error functions of imaginary
//!   argument.
//!
//! The sum and the integral are different approximations of the ensemble and
//! are not expected to agree with each other.

use std::f64::consts::PI;

use crate::error::{domain, Result, SkpError};
use crate::model::{cutoffs_from, energy_derivatives, DimensionlessSet, FieldConfig, PotentialParams, QuantumState};
use crate::quadrature::{integrate, QuadOptions};
use crate::specfun::{erf_complex, ComplexValue};
use crate::units::Constants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZMethod {
    DirectSum,
    Quadrature,
    ClosedForm,
}

/// How `C_v` and `S` are defined.
///
/// `Standard`: `C_v = -k_B beta^2 dU/dbeta`, `S = k_B beta^2 dF/dbeta`.
/// `Literal`: the bare derivatives `C_v = k_B dU/dbeta`, `S = -k_B dF/dbeta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    #[default]
    Standard,
    Literal,
}

/// Relative tolerance of the partition-function quadrature.
pub const Z_QUAD_RTOL: f64 = 1e-13;
/// Relative `beta` step for first derivatives.
pub const BETA_STEP: f64 = 1e-6;
/// Relative `beta` step for second derivatives.
pub const BETA_STEP_2: f64 = 1e-2;
/// `B` step, times `max(1, B)`, for first derivatives.
pub const B_STEP: f64 = 1e-4;
/// `B` step, times `max(1, B)`, for second derivatives.
pub const B_STEP_2: f64 = 1e-4;
/// Largest imaginary residue accepted from the closed form, relative to `Z`.
pub const CLOSED_FORM_IMAG_RTOL: f64 = 1e-8;

/// `-beta E(phi) = beta (M / phi^2 + N phi^2 + W)` and the integration range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralParams {
    /// `hbar^2 alpha^2 P2^2 / (8 mu)`
    pub m_coef: f64,
    /// `hbar^2 alpha^2 / (8 mu)`
    pub n_coef: f64,
    /// `-hbar^2 alpha^2 P2 / (4 mu) - P1`
    pub w_coef: f64,
    pub phi_lo: f64,
    pub phi_hi: f64,
}

impl IntegralParams {
    pub fn new(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants) -> Result<Self> {
        let d = DimensionlessSet::new(p, f, m as f64, k)?;
        Ok(Self::from_set(&d))
    }

    fn from_set(d: &DimensionlessSet) -> Self {
        let c = cutoffs_from(d);
        let scale = d.energy_scale;
        Self {
            m_coef: scale * c.p2 * c.p2 / 4.0,
            n_coef: scale / 4.0,
            w_coef: -scale * c.p2 / 2.0 - c.p1,
            phi_lo: d.nu,
            phi_hi: c.eta_max + d.nu,
        }
    }

    /// `E(phi)` written with these coefficients.
    pub fn energy(&self, phi: f64) -> f64 {
        -(self.m_coef / (phi * phi) + self.n_coef * phi * phi + self.w_coef)
    }

    fn require_interval(&self) -> Result<()> {
        if self.phi_hi > self.phi_lo {
            Ok(())
        } else {
            Err(SkpError::ClassicalLimitUndefined)
        }
    }
}

/// Error-function arguments of the closed form, with `sqrt(-M beta)` and
/// `sqrt(-N beta)` taken on the branch `i sqrt(M beta)`, `i sqrt(N beta)`:
///
/// ```text
/// lam1 = sqrt(-M beta) / nu        lam2 = sqrt(-N beta) nu
/// pi1  = sqrt(-N beta) eta         pi2  = sqrt(-M beta) / (eta + nu)
/// xi_term = erf(pi1 + lam2 - pi2)
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfTerms {
    pub lam1: ComplexValue,
    pub lam2: ComplexValue,
    pub pi1: ComplexValue,
    pub pi2: ComplexValue,
    pub xi_term: ComplexValue,
}

fn validate_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("beta must be > 0, got {beta}")))
    }
}

fn unstable(e: SkpError) -> SkpError {
    match e {
        SkpError::Overflow(x) => SkpError::ClosedFormUnstable(format!("erfi argument {x:.3} overflows")),
        other => other,
    }
}

pub fn erf_terms(ip: &IntegralParams, beta: f64) -> Result<ErfTerms> {
    let sm = ComplexValue::new(0.0, (ip.m_coef * beta).sqrt());
    let sn = ComplexValue::new(0.0, (ip.n_coef * beta).sqrt());
    let (nu, top) = (ip.phi_lo, ip.phi_hi);
    let eta = top - nu;
    let lam1 = sm / nu;
    let lam2 = sn * nu;
    let pi1 = sn * eta;
    let pi2 = sm / top;
    let xi_term = erf_complex(pi1 + lam2 - pi2).map_err(unstable)?;
    Ok(ErfTerms { lam1, lam2, pi1, pi2, xi_term })
}

/// `sum_{n=0}^{n_max} e^{-beta E_n}`.
pub fn partition_direct(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64) -> Result<f64> {
    validate_beta(beta)?;
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    let n_max = cutoffs_from(&d).n_max;
    Ok((0..=n_max).map(|n| (-beta * d.energy(n)).exp()).sum())
}

/// Adaptive quadrature of `e^{-beta E(phi)}` over `[nu, eta_max + nu]`.
pub fn partition_quadrature(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64) -> Result<f64> {
    validate_beta(beta)?;
    let ip = IntegralParams::new(p, f, m, k)?;
    quadrature_from(&ip, beta)
}

fn quadrature_from(ip: &IntegralParams, beta: f64) -> Result<f64> {
    ip.require_interval()?;
    let opts = QuadOptions { rel_tol: Z_QUAD_RTOL, ..QuadOptions::default() };
    let r = integrate(|phi| (-beta * ip.energy(phi)).exp(), ip.phi_lo, ip.phi_hi, opts)?;
    Ok(r.value)
}

/// Closed-form integral:
///
/// ```text
/// Z = -e^{W beta - 2 sM sN} sqrt(pi) ( -erf(lam1 - lam2)
///       + e^{4 sM sN} (erf(lam1 + lam2) - erf(pi1 + lam2 + pi2)) - xi_term ) / (4 sN)
/// ```
///
/// with `sM = sqrt(-M beta)`, `sN = sqrt(-N beta)` on the branch of
/// [`ErfTerms`]. Every erf argument is purely imaginary, so the erfs are
/// evaluated as `i erfi`.
pub fn partition_closed(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64) -> Result<f64> {
    validate_beta(beta)?;
    let ip = IntegralParams::new(p, f, m, k)?;
    closed_from(&ip, beta)
}

fn closed_from(ip: &IntegralParams, beta: f64) -> Result<f64> {
    ip.require_interval()?;
    if !(ip.m_coef > 0.0) {
        return Err(domain("closed form needs M > 0 (P2 != 0)"));
    }
    let t = erf_terms(ip, beta)?;
    let sm = ComplexValue::new(0.0, (ip.m_coef * beta).sqrt());
    let sn = ComplexValue::new(0.0, (ip.n_coef * beta).sqrt());
    let erf = |z: ComplexValue| erf_complex(z).map_err(unstable);
    let prod = sm * sn;
    let bracket = -erf(t.lam1 - t.lam2)? + (4.0 * prod).exp() * (erf(t.lam1 + t.lam2)? - erf(t.pi1 + t.lam2 + t.pi2)?)
        - t.xi_term;
    let z = -(ip.w_coef * beta - 2.0 * prod).exp() * PI.sqrt() * bracket / (4.0 * sn);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SkpError::ClosedFormUnstable(format!("non-finite result {z}")));
    }
    if z.im.abs() > CLOSED_FORM_IMAG_RTOL * z.re.abs() {
        return Err(SkpError::ClosedFormUnstable(format!("imaginary residue {:.3e} of Z = {:.6e}", z.im, z.re)));
    }
    if !(z.re > 0.0) {
        return Err(SkpError::ClosedFormUnstable(format!("cancellation left Z = {:.3e}", z.re)));
    }
    Ok(z.re)
}

pub fn partition(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64, method: ZMethod) -> Result<f64> {
    match method {
        ZMethod::DirectSum => partition_direct(p, f, m, k, beta),
        ZMethod::Quadrature => partition_quadrature(p, f, m, k, beta),
        ZMethod::ClosedForm => partition_closed(p, f, m, k, beta),
    }
}

/// `ln Z` for any `B`, including the negative values central differences
/// step into at `B = 0`.
fn ln_z_at(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64, method: ZMethod) -> Result<f64> {
    validate_beta(beta)?;
    Ok(partition(p, f, m, k, beta, method)?.ln())
}

/// All quantities at one `(beta, B, Phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub beta: f64,
    pub b: f64,
    pub phi_ab: f64,
    pub z: f64,
    pub u: f64,
    pub cv: f64,
    pub f: f64,
    pub s: f64,
    pub magnetization: f64,
    pub chi: f64,
    pub z_method: ZMethod,
    pub convention: Convention,
}

/// `(g(x+h) - g(x-h)) / 2h` refined once: `(4 D(h/2) - D(h)) / 3`.
fn richardson_d1<G: Fn(f64) -> Result<f64>>(g: G, x: f64, h: f64) -> Result<f64> {
    let d = |h: f64| -> Result<f64> { Ok((g(x + h)? - g(x - h)?) / (2.0 * h)) };
    Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
}

/// `(g(x+h) - 2 g(x) + g(x-h)) / h^2` refined once.
fn richardson_d2<G: Fn(f64) -> Result<f64>>(g: G, x: f64, h: f64) -> Result<f64> {
    let g0 = g(x)?;
    let d = |h: f64| -> Result<f64> { Ok((g(x + h)? - 2.0 * g0 + g(x - h)?) / (h * h)) };
    Ok((4.0 * d(0.5 * h)? - d(h)?) / 3.0)
}

fn check_step(x: f64, h: f64, what: &str) -> Result<()> {
    if x - h <= 0.0 || x + h == x {
        return Err(SkpError::StepUnderflow(format!("{what}: step {h:.3e} at {x:.3e}")));
    }
    Ok(())
}

fn assemble(
    beta: f64,
    f: &FieldConfig,
    k: &Constants,
    ln_z: f64,
    u: f64,
    var: f64,
    magnetization: f64,
    chi: f64,
    z_method: ZMethod,
    convention: Convention,
) -> ThermoPoint {
    let kb = k.k_b;
    let free = -ln_z / beta;
    let (cv, s) = match convention {
        Convention::Standard => (kb * beta * beta * var, kb * (ln_z + beta * u)),
        Convention::Literal => (-kb * var, -kb * (ln_z / (beta * beta) + u / beta)),
    };
    ThermoPoint {
        beta,
        b: f.b,
        phi_ab: f.phi_ab,
        z: ln_z.exp(),
        u,
        cv,
        f: free,
        s,
        magnetization,
        chi,
        z_method,
        convention,
    }
}

/// Thermodynamic and magnetic quantities for magnetic quantum number `m`.
///
/// With `DirectSum` every derivative is an ensemble moment: `U = <E>`,
/// `-dU/dbeta = Var E`, `M = -<dE/dB>`,
/// `chi = -<d2E/dB2> + beta (<(dE/dB)^2> - <dE/dB>^2)`. The other routes
/// differentiate `ln Z` numerically.
pub fn thermo_point(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    beta: f64,
    z_method: ZMethod,
    convention: Convention,
) -> Result<ThermoPoint> {
    validate_beta(beta)?;
    match z_method {
        ZMethod::DirectSum => direct_point(p, f, m, k, beta, convention),
        _ => numeric_point(p, f, m, k, beta, z_method, convention),
    }
}

fn direct_point(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    beta: f64,
    convention: Convention,
) -> Result<ThermoPoint> {
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    let n_max = cutoffs_from(&d).n_max;
    let levels = (0..=n_max)
        .map(|n| energy_derivatives(p, f, n, m as f64, k))
        .collect::<Result<Vec<_>>>()?;
    let e_min = levels.iter().fold(f64::INFINITY, |a, l| a.min(l.energy));
    // weights shifted by the lowest level so large beta does not overflow
    let w: Vec<f64> = levels.iter().map(|l| (-beta * (l.energy - e_min)).exp()).collect();
    let sum_w: f64 = w.iter().sum();
    let mean = |g: &dyn Fn(usize) -> f64| -> f64 { w.iter().enumerate().map(|(i, wi)| wi * g(i)).sum::<f64>() / sum_w };
    let u = mean(&|i| levels[i].energy);
    let var = mean(&|i| (levels[i].energy - u).powi(2));
    let de = mean(&|i| levels[i].d_b);
    let de_var = mean(&|i| (levels[i].d_b - de).powi(2));
    let d2e = mean(&|i| levels[i].d2_b);
    let ln_z = -beta * e_min + sum_w.ln();
    Ok(assemble(beta, f, k, ln_z, u, var, -de, -d2e + beta * de_var, ZMethod::DirectSum, convention))
}

fn numeric_point(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    beta: f64,
    z_method: ZMethod,
    convention: Convention,
) -> Result<ThermoPoint> {
    let ln_z = ln_z_at(p, f, m, k, beta, z_method)?;
    let of_beta = |b: f64| ln_z_at(p, f, m, k, b, z_method);
    let of_b = |b: f64| ln_z_at(p, &f.with_b(b), m, k, beta, z_method);

    let hb1 = BETA_STEP * beta;
    let hb2 = BETA_STEP_2 * beta;
    check_step(beta, hb2, "beta derivative")?;
    let u = -richardson_d1(of_beta, beta, hb1)?;
    let var = richardson_d2(of_beta, beta, hb2)?;

    let scale = f.b.max(1.0);
    let (h1, h2) = (B_STEP * scale, B_STEP_2 * scale);
    if f.b + h2 == f.b {
        return Err(SkpError::StepUnderflow(format!("B derivative: step {h2:.3e} at B = {:.3e}", f.b)));
    }
    let magnetization = richardson_d1(of_b, f.b, h1)? / beta;
    let chi = richardson_d2(of_b, f.b, h2)? / beta;
    Ok(assemble(beta, f, k, ln_z, u, var, magnetization, chi, z_method, convention))
}

/// `M = -dE/dB` of a single state.
pub fn magnetization_zero_t(p: &PotentialParams, f: &FieldConfig, q: &QuantumState, k: &Constants) -> Result<f64> {
    Ok(-energy_derivatives(p, f, q.n, q.m as f64, k)?.d_b)
}

/// `chi = dM/dB` of a single state, by Richardson-refined central
/// differences of the analytic magnetization with step `1e-4 max(1, B)`.
pub fn susceptibility_zero_t(p: &PotentialParams, f: &FieldConfig, q: &QuantumState, k: &Constants) -> Result<f64> {
    let h = B_STEP * f.b.max(1.0);
    richardson_d1(|b| magnetization_zero_t(p, &f.with_b(b), q, k), f.b, h)
}
