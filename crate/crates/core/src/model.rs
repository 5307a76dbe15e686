//! Screened Kratzer potential in a uniform magnetic field plus an
//! Aharonov-Bohm flux tube: parameters, dimensionless map and the
//! closed-form bound-state spectrum.
//!
//! The potential is `V(r) = (-A/r + C/r^2) e^{-alpha r}`. With the
//! Greene-Aldrich replacement `1/r^2 -> alpha^2/(1 - e^{-alpha r})^2` the
//! radial equation becomes hypergeometric in `s = e^{-alpha r}` and the
//! spectrum is
//!
//! ```text
//! E(n, m) = P1 - k ((P2 - (n + nu)^2) / (2 (n + nu)))^2,   k = hbar^2 alpha^2 / 2 mu
//! P1 = k gamma,  P2 = delta2 - beta1 - gamma,  gamma = (m + xi)^2 - 1/4
//! nu = 1/2 + sqrt(delta2 + beta2 - delta1 - delta3 + (m + xi)^2)
//! ```

use std::f64::consts::PI;

use crate::error::{domain, invalid, Result, SkpError};
use crate::units::Constants;

/// Screened Kratzer parameters: `A` (attraction), `C` (repulsion), `alpha`
/// (screening).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub a: f64,
    pub c: f64,
    pub alpha: f64,
}

impl PotentialParams {
    /// Spectrum-grade parameters: `alpha > 0`, `A > 0`, `C >= 0`.
    pub fn new(a: f64, c: f64, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(invalid(format!("alpha must be > 0, got {alpha}")));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(invalid(format!("A must be > 0, got {a}")));
        }
        if !(c.is_finite() && c >= 0.0) {
            return Err(invalid(format!("C must be >= 0, got {c}")));
        }
        Ok(Self { a, c, alpha })
    }

    /// Parameters for evaluating the potential in its limiting forms
    /// (Kratzer at `alpha = 0`, inverse-quadratic Yukawa at `A = 0`).
    /// The spectrum routines reject `alpha = 0`.
    pub fn limiting(a: f64, c: f64, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0 && a.is_finite() && a >= 0.0 && c.is_finite() && c >= 0.0)
        {
            return Err(invalid(format!(
                "limiting parameters need alpha, A, C >= 0; got A={a}, C={c}, alpha={alpha}"
            )));
        }
        Ok(Self { a, c, alpha })
    }

    /// `A = 2 D_e r_e`, `C = D_e r_e^2`.
    pub fn from_dissociation(d_e: f64, r_e: f64, alpha: f64) -> Result<Self> {
        if !(d_e > 0.0 && r_e > 0.0) {
            return Err(invalid(format!("D_e and r_e must be > 0, got {d_e}, {r_e}")));
        }
        Self::new(2.0 * d_e * r_e, d_e * r_e * r_e, alpha)
    }

    /// `A = 1`, `C = 1/2`: the parameter set of the reference tables.
    pub fn table(alpha: f64) -> Self {
        Self { a: 1.0, c: 0.5, alpha }
    }

    pub fn potential(&self, r: f64) -> Result<f64> {
        potential_eval(self, r)
    }

    /// Minimum of the unscreened Kratzer well, `2C/A`.
    pub fn characteristic_length(&self) -> f64 {
        2.0 * self.c / self.a
    }

    /// Diagnostic when the Greene-Aldrich replacement is being used outside
    /// its small-`alpha r` regime (`alpha * 2C/A > 0.1`).
    pub fn greene_aldrich_warning(&self) -> Option<String> {
        let x = self.alpha * self.characteristic_length();
        (x > 0.1).then(|| {
            format!("alpha*r_c = {x:.3} > 0.1: Greene-Aldrich approximation is poor here")
        })
    }

    pub(crate) fn require_screened(&self) -> Result<()> {
        if self.alpha > 0.0 {
            Ok(())
        } else {
            Err(invalid("spectrum needs alpha > 0"))
        }
    }
}

/// `V(r) = (-A/r + C/r^2) e^{-alpha r}`.
pub fn potential_eval(p: &PotentialParams, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain(format!("potential needs r > 0, got {r}")));
    }
    Ok((-p.a / r + p.c / (r * r)) * (-p.alpha * r).exp())
}

/// Greene-Aldrich form of `1/r^2`: `alpha^2 / (1 - e^{-alpha r})^2`.
/// At `alpha = 0` returns the limit `1/r^2`.
pub fn greene_aldrich(alpha: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain(format!("Greene-Aldrich needs r > 0, got {r}")));
    }
    if !(alpha >= 0.0) {
        return Err(invalid(format!("alpha must be >= 0, got {alpha}")));
    }
    if alpha == 0.0 {
        return Ok(1.0 / (r * r));
    }
    let om = -(-alpha * r).exp_m1();
    Ok(alpha * alpha / (om * om))
}

/// External fields: magnetic field magnitude and AB flux.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldConfig {
    pub b: f64,
    pub phi_ab: f64,
}

impl FieldConfig {
    pub fn new(b: f64, phi_ab: f64) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(invalid(format!("B must be >= 0, got {b}")));
        }
        if !(phi_ab.is_finite() && phi_ab >= 0.0) {
            return Err(invalid(format!("Phi_AB must be >= 0, got {phi_ab}")));
        }
        Ok(Self { b, phi_ab })
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.b == 0.0 && self.phi_ab == 0.0
    }

    /// `xi = Phi_AB / phi_0`.
    pub fn xi(&self, k: &Constants) -> f64 {
        self.phi_ab / k.flux_quantum()
    }

    pub(crate) fn with_b(self, b: f64) -> Self {
        Self { b, ..self }
    }
}

/// Radial and magnetic quantum numbers of a 2D state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuantumState {
    pub n: u32,
    pub m: i32,
}

impl QuantumState {
    pub fn new(n: u32, m: i32) -> Self {
        Self { n, m }
    }
}

/// Dimensionless combinations of the parameters for one magnetic quantum
/// number. `m` is kept real so the 3D substitution `m = l + 1/2` can reuse it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessSet {
    pub beta1: f64,
    pub beta2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub delta3: f64,
    pub gamma: f64,
    pub xi: f64,
    pub tau: f64,
    pub nu: f64,
    pub m: f64,
    /// `hbar^2 alpha^2 / 2 mu`
    pub energy_scale: f64,
}

impl DimensionlessSet {
    pub fn new(p: &PotentialParams, f: &FieldConfig, m: f64, k: &Constants) -> Result<Self> {
        p.require_screened()?;
        let (hb, alpha, b) = (k.hbar, p.alpha, f.b);
        let tau = k.tau();
        let xi = f.xi(k);
        let beta1 = 2.0 * k.mu * p.a / (hb * hb * alpha);
        let beta2 = 2.0 * k.mu * p.c / (hb * hb);
        let delta1 = 2.0 * m * tau * b / (hb * alpha);
        let delta2 = tau * tau * b * b / (hb * hb * alpha * alpha);
        let delta3 = tau * tau * b * f.phi_ab / (hb * hb * alpha * PI);
        let mx = m + xi;
        let radicand = delta2 + beta2 - delta1 - delta3 + mx * mx;
        if !(radicand >= 0.0) {
            return Err(SkpError::NoBoundSpectrum { radicand });
        }
        Ok(Self {
            beta1,
            beta2,
            delta1,
            delta2,
            delta3,
            gamma: mx * mx - 0.25,
            xi,
            tau,
            nu: 0.5 + radicand.sqrt(),
            m,
            energy_scale: k.energy_scale(alpha),
        })
    }

    /// Radicand of `nu`.
    pub fn nu_radicand(&self) -> f64 {
        let mx = self.m + self.xi;
        self.delta2 + self.beta2 - self.delta1 - self.delta3 + mx * mx
    }

    pub fn p1(&self) -> f64 {
        self.energy_scale * self.gamma
    }

    pub fn p2(&self) -> f64 {
        self.delta2 - self.beta1 - self.gamma
    }

    /// `sigma = 1/2 + sqrt(1/4 + beta2 + delta2 + delta3 - delta1 + gamma)`,
    /// the `(1-s)` exponent of the radial function.
    pub fn sigma_exp(&self) -> Result<f64> {
        let rad = 0.25 + self.beta2 + self.delta2 + self.delta3 - self.delta1 + self.gamma;
        if rad < 0.0 {
            return Err(SkpError::NonNormalizable(format!("sigma radicand {rad:.3e} < 0")));
        }
        Ok(0.5 + rad.sqrt())
    }

    /// `lambda = sqrt(epsilon + gamma)`.
    pub fn lambda_exp(&self, epsilon: f64) -> Result<f64> {
        let rad = epsilon + self.gamma;
        if rad < -1e-12 * epsilon.abs().max(1.0) {
            return Err(SkpError::NonNormalizable(format!("lambda radicand {rad:.3e} < 0")));
        }
        Ok(rad.max(0.0).sqrt())
    }

    /// `(P2 - phi^2) / (2 phi)` at continuous `phi = n + nu`.
    fn bracket(&self, phi: f64) -> f64 {
        (self.p2() - phi * phi) / (2.0 * phi)
    }

    /// Dimensionless `epsilon = -2 mu E / (hbar^2 alpha^2)` of level `n`.
    pub fn epsilon(&self, n: u32) -> f64 {
        let x = self.bracket(n as f64 + self.nu);
        x * x - self.gamma
    }

    /// Energy at continuous `phi = n + nu`.
    pub fn energy_at_phi(&self, phi: f64) -> f64 {
        let x = self.bracket(phi);
        self.energy_scale * (self.gamma - x * x)
    }

    pub fn energy(&self, n: u32) -> f64 {
        self.energy_at_phi(n as f64 + self.nu)
    }
}

pub fn dimensionless_map(
    p: &PotentialParams,
    f: &FieldConfig,
    q: &QuantumState,
    k: &Constants,
) -> Result<DimensionlessSet> {
    DimensionlessSet::new(p, f, q.m as f64, k)
}

/// Closed-form 2D energy `E(n, m)`.
pub fn energy_2d(p: &PotentialParams, f: &FieldConfig, q: &QuantumState, k: &Constants) -> Result<f64> {
    Ok(dimensionless_map(p, f, q, k)?.energy(q.n))
}

/// `E(n, m)` with a real magnetic quantum number.
pub fn energy_2d_real_m(p: &PotentialParams, f: &FieldConfig, n: u32, m: f64, k: &Constants) -> Result<f64> {
    Ok(DimensionlessSet::new(p, f, m, k)?.energy(n))
}

/// 3D energy `E(n, l)`, written out directly (not via the 2D routine).
/// Only defined at zero fields.
pub fn energy_3d(p: &PotentialParams, f: &FieldConfig, ell: u32, n: u32, k: &Constants) -> Result<f64> {
    if !f.is_zero() {
        return Err(SkpError::ThreeDRequiresZeroFields);
    }
    p.require_screened()?;
    let hb2 = k.hbar * k.hbar;
    let l = ell as f64;
    let ll = l * (l + 1.0);
    let scale = k.energy_scale(p.alpha);
    let phi = n as f64 + 0.5 + (0.25 + ll + 2.0 * k.mu * p.c / hb2).sqrt();
    let x = (phi * phi + ll + 2.0 * k.mu * p.a / (hb2 * p.alpha)) / (2.0 * phi);
    Ok(scale * ll - scale * x * x)
}

/// Energy together with its first and second derivatives in `B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDerivatives {
    pub energy: f64,
    pub d_b: f64,
    pub d2_b: f64,
}

/// Analytic `dE/dB` and `d^2E/dB^2` by the chain rule through
/// `delta1`, `delta2`, `delta3` and `nu`.
pub fn energy_derivatives(
    p: &PotentialParams,
    f: &FieldConfig,
    n: u32,
    m: f64,
    k: &Constants,
) -> Result<EnergyDerivatives> {
    let d = DimensionlessSet::new(p, f, m, k)?;
    let (hb, alpha, tau) = (k.hbar, p.alpha, d.tau);
    let radicand = d.nu_radicand();
    if radicand <= 1e-12 * (d.delta2 + d.beta2 + (d.m + d.xi).powi(2)).max(1.0) {
        return Err(SkpError::DerivativeSingular { radicand });
    }
    // B-derivatives of the dimensionless pieces
    let d_delta1 = 2.0 * m * tau / (hb * alpha);
    let d_delta2 = 2.0 * tau * tau * f.b / (hb * hb * alpha * alpha);
    let dd_delta2 = 2.0 * tau * tau / (hb * hb * alpha * alpha);
    let d_delta3 = tau * tau * f.phi_ab / (hb * hb * alpha * PI);

    let root = radicand.sqrt();
    let d_rad = d_delta2 - d_delta1 - d_delta3;
    let d_nu = d_rad / (2.0 * root);
    let dd_nu = dd_delta2 / (2.0 * root) - d_rad * d_rad / (4.0 * radicand * root);

    let phi = n as f64 + d.nu;
    let p2 = d.p2();
    let (dp2, ddp2) = (d_delta2, dd_delta2);
    let x = (p2 - phi * phi) / (2.0 * phi);
    let dx = dp2 / (2.0 * phi) - p2 * d_nu / (2.0 * phi * phi) - d_nu / 2.0;
    let ddx = ddp2 / (2.0 * phi) - dp2 * d_nu / (phi * phi) - p2 * dd_nu / (2.0 * phi * phi)
        + p2 * d_nu * d_nu / (phi * phi * phi)
        - dd_nu / 2.0;

    let s = d.energy_scale;
    Ok(EnergyDerivatives {
        energy: s * (d.gamma - x * x),
        d_b: -2.0 * s * x * dx,
        d2_b: -2.0 * s * (dx * dx + x * ddx),
    })
}

/// `dE/dB` for a 2D state.
pub fn energy_db(p: &PotentialParams, f: &FieldConfig, q: &QuantumState, k: &Constants) -> Result<f64> {
    Ok(energy_derivatives(p, f, q.n, q.m as f64, k)?.d_b)
}

/// Where the closed-form `E(n)` stops increasing, and the integer level
/// that ends the ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumCutoffs {
    pub p1: f64,
    pub p2: f64,
    pub eta_max: f64,
    pub n_max: u32,
}

impl SpectrumCutoffs {
    /// Upper end of the continuous `phi` range, `eta_max + nu`.
    pub fn phi_max(&self, nu: f64) -> f64 {
        self.eta_max + nu
    }
}

/// Relative tolerance under which two level energies count as tied; ties
/// resolve to the lower `n`.
pub const LEVEL_TIE_RTOL: f64 = 1e-12;

/// `E(phi)` is stationary at `phi^2 = |P2|`, so `eta_max = sqrt(|P2|) - nu`
/// when that is positive. `n_max` is the better of the two integers around
/// `eta_max`.
pub fn cutoffs(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants) -> Result<SpectrumCutoffs> {
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    Ok(cutoffs_from(&d))
}

pub(crate) fn cutoffs_from(d: &DimensionlessSet) -> SpectrumCutoffs {
    let p2 = d.p2();
    let target = p2.abs();
    let eta_max = if target > d.nu * d.nu {
        target.sqrt() - d.nu
    } else {
        0.0
    };
    let lo = eta_max.floor();
    let mut n_max = lo as u32;
    if eta_max > lo {
        let (e_lo, e_hi) = (d.energy(n_max), d.energy(n_max + 1));
        if e_hi > e_lo + LEVEL_TIE_RTOL * e_lo.abs() {
            n_max += 1;
        }
    }
    SpectrumCutoffs {
        p1: d.p1(),
        p2,
        eta_max,
        n_max,
    }
}

/// Residual of the termination condition
/// `(lambda + sigma) - sqrt(epsilon - beta1 + delta2) + n` at energy `e`.
///
/// The closed form squares away the branch of both roots, so they are
/// evaluated with the signs it implies: `lambda` carries the sign of
/// `P2 - phi^2`, the second root the sign of `P2 + phi^2`, and `sigma = nu`.
pub fn quantization_residual(
    p: &PotentialParams,
    f: &FieldConfig,
    q: &QuantumState,
    k: &Constants,
    e: f64,
) -> Result<f64> {
    let d = dimensionless_map(p, f, q, k)?;
    let eps = -e / d.energy_scale;
    let slack = 1e-12 * (eps.abs() + d.beta1 + d.delta2 + d.gamma.abs());
    let a0 = eps + d.gamma;
    let a2 = eps - d.beta1 + d.delta2;
    if a0 < -slack || a2 < -slack {
        return Err(domain(format!(
            "quantization radicands negative at E = {e}: eps+gamma = {a0:.3e}, eps-beta1+delta2 = {a2:.3e}"
        )));
    }
    let phi = q.n as f64 + d.nu;
    let p2 = d.p2();
    let sign = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    let lambda = sign(p2 - phi * phi) * a0.max(0.0).sqrt();
    let root = sign(p2 + phi * phi) * a2.max(0.0).sqrt();
    Ok(lambda + d.nu - root + q.n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Constants {
        Constants::default()
    }

    #[test]
    fn potential_reductions() {
        let kratzer = PotentialParams::limiting(1.0, 0.5, 0.0).unwrap();
        assert_eq!(potential_eval(&kratzer, 1.0).unwrap(), -0.5);
        let p = PotentialParams::table(0.005);
        let v = potential_eval(&p, 1.0).unwrap();
        assert!((v - -0.5 * (-0.005f64).exp()).abs() < 1e-16);
        assert!((v - -0.497_506_239_6).abs() < 1e-10);
        let iqy = PotentialParams::limiting(0.0, 0.5, 0.01).unwrap();
        assert!((potential_eval(&iqy, 2.0).unwrap() - 0.125 * (-0.02f64).exp()).abs() < 1e-16);
        assert!(potential_eval(&p, 0.0).is_err());
        assert!(potential_eval(&p, -1.0).is_err());
    }

    #[test]
    fn parameter_validation() {
        assert!(PotentialParams::new(1.0, 0.5, 0.0).is_err());
        assert!(PotentialParams::new(0.0, 0.5, 0.1).is_err());
        assert!(PotentialParams::new(1.0, -0.5, 0.1).is_err());
        let p = PotentialParams::from_dissociation(0.25, 2.0, 0.01).unwrap();
        assert_eq!(p.a, 2.0 * 0.25 * 2.0);
        assert_eq!(p.c, 0.25 * 2.0 * 2.0);
        assert!(FieldConfig::new(-1.0, 0.0).is_err());
        assert!(FieldConfig::new(0.0, -1.0).is_err());
    }

    #[test]
    fn greene_aldrich_values() {
        // series x/(1-e^{-x}) squared = 1 + x + 5x^2/12 + x^3/12 + x^4/240 - x^5/720 - x^6/6048 + ...
        let series = |x: f64| 1.0 + x + 5.0 * x * x / 12.0 + x.powi(3) / 12.0 + x.powi(4) / 240.0
            - x.powi(5) / 720.0 - x.powi(6) / 6048.0;
        let v = greene_aldrich(0.005, 1.0).unwrap();
        assert!((v - series(0.005)).abs() < 1e-13);
        assert_eq!(greene_aldrich(0.0, 2.0).unwrap(), 0.25);
        assert!((greene_aldrich(1e-9, 2.0).unwrap() - 0.25).abs() < 1e-9);
        let rel = greene_aldrich(0.1, 1.0).unwrap() - 1.0;
        assert!((rel - series(0.1) + 1.0).abs() < 1e-10);
        assert!((rel - 0.104_250_402_615_798).abs() < 1e-12);
        assert!(greene_aldrich(0.1, 0.0).is_err());
    }

    #[test]
    fn dimensionless_examples() {
        let p = PotentialParams::table(0.005);
        let d = dimensionless_map(&p, &FieldConfig::zero(), &QuantumState::new(0, 0), &k()).unwrap();
        assert!((d.beta1 - 400.0).abs() < 1e-12);
        assert_eq!(d.beta2, 1.0);
        assert_eq!((d.delta1, d.delta2, d.delta3), (0.0, 0.0, 0.0));
        assert_eq!(d.gamma, -0.25);
        assert_eq!(d.nu, 1.5);

        let f = FieldConfig::new(4.0, 0.0).unwrap();
        let d = dimensionless_map(&p, &f, &QuantumState::new(0, 0), &k()).unwrap();
        assert!((d.delta2 - 640_000.0).abs() < 1e-6);
        let d = dimensionless_map(&p, &f, &QuantumState::new(0, 1), &k()).unwrap();
        assert!((d.delta1 - -1600.0).abs() < 1e-9);
    }

    #[test]
    fn negative_nu_radicand_is_an_error() {
        // m + xi = 0 removes the centrifugal part; delta1 + delta3 then beat delta2 + beta2
        let p = PotentialParams::table(0.5);
        let f = FieldConfig::new(0.3, 40.0).unwrap();
        let err = energy_2d(&p, &f, &QuantumState::new(0, -40), &k()).unwrap_err();
        assert!(matches!(err, SkpError::NoBoundSpectrum { .. }), "{err}");
    }

    #[test]
    fn reference_spot_values() {
        let cases = [
            (0.005, 0, 0, 0.0, 0.0, -0.224_453_125, 5e-10),
            (0.005, 0, 0, 4.0, 0.0, -0.000_010_159_2, 5e-11),
            (0.01, 0, 1, 4.0, 4.0, 0.001_168_469, 1e-9),
            (0.01, 2, -1, 0.0, 0.0, -0.038_052_784, 1e-9),
        ];
        for (alpha, n, m, b, phi, want, tol) in cases {
            let e = energy_2d(
                &PotentialParams::table(alpha),
                &FieldConfig::new(b, phi).unwrap(),
                &QuantumState::new(n, m),
                &k(),
            )
            .unwrap();
            assert!((e - want).abs() <= tol, "n={n} m={m} B={b} Phi={phi}: {e}");
        }
    }

    #[test]
    fn zero_field_degeneracy_and_splitting() {
        let p = PotentialParams::table(0.005);
        for n in 0..6 {
            for m in 1..4 {
                let up = energy_2d(&p, &FieldConfig::zero(), &QuantumState::new(n, m), &k()).unwrap();
                let dn = energy_2d(&p, &FieldConfig::zero(), &QuantumState::new(n, -m), &k()).unwrap();
                assert_eq!(up, dn);
            }
        }
        let f = FieldConfig::new(4.0, 0.0).unwrap();
        for n in 0..4 {
            let up = energy_2d(&p, &f, &QuantumState::new(n, 1), &k()).unwrap();
            let dn = energy_2d(&p, &f, &QuantumState::new(n, -1), &k()).unwrap();
            assert_ne!(up, dn);
        }
    }

    #[test]
    fn three_d_matches_half_integer_substitution() {
        let p = PotentialParams::table(0.005);
        for ell in 0..4 {
            for n in 0..4 {
                let e3 = energy_3d(&p, &FieldConfig::zero(), ell, n, &k()).unwrap();
                let e2 = energy_2d_real_m(&p, &FieldConfig::zero(), n, ell as f64 + 0.5, &k()).unwrap();
                assert!(((e3 - e2) / e2).abs() < 1e-12);
            }
        }
        let f = FieldConfig::new(1.0, 0.0).unwrap();
        assert_eq!(energy_3d(&p, &f, 0, 0, &k()), Err(SkpError::ThreeDRequiresZeroFields));
    }

    #[test]
    fn three_d_coulomb_limit() {
        let p = PotentialParams::new(1.0, 0.0, 1e-8).unwrap();
        for n in 0..3 {
            let e = energy_3d(&p, &FieldConfig::zero(), 0, n, &k()).unwrap();
            let coulomb = -1.0 / (2.0 * ((n + 1) as f64).powi(2));
            assert!(((e - coulomb) / coulomb).abs() < 1e-6, "n={n}: {e}");
        }
    }

    #[test]
    fn energy_db_against_finite_differences() {
        let p = PotentialParams::table(0.005);
        let q = QuantumState::new(0, 0);
        let f = FieldConfig::new(2.0, 1.0).unwrap();
        let h = 1e-5;
        let fd = (energy_2d(&p, &f.with_b(2.0 + h), &q, &k()).unwrap()
            - energy_2d(&p, &f.with_b(2.0 - h), &q, &k()).unwrap())
            / (2.0 * h);
        let an = energy_db(&p, &f, &q, &k()).unwrap();
        assert!(((an - fd) / fd).abs() < 1e-6, "{an} vs {fd}");
    }

    #[test]
    fn energy_db_at_zero_field_is_one_sided_limit() {
        let p = PotentialParams::table(0.005);
        let q = QuantumState::new(0, 0);
        let an = energy_db(&p, &FieldConfig::zero(), &q, &k()).unwrap();
        // forward differences with Richardson toward B -> 0+
        let e = |b: f64| energy_2d(&p, &FieldConfig::new(b, 0.0).unwrap(), &q, &k()).unwrap();
        let e0 = e(0.0);
        let fwd = |h: f64| (e(h) - e0) / h;
        let h = 1e-6;
        let rich = 2.0 * fwd(h / 2.0) - fwd(h);
        assert!((an - rich).abs() < 1e-6 * rich.abs().max(1e-3), "{an} vs {rich}");
    }

    #[test]
    fn energy_db_sign_flip_of_delta1() {
        // at B = 0, Phi = 0 the m-linear delta1 slope is the only odd-in-m piece
        let p = PotentialParams::table(0.01);
        let f = FieldConfig::zero();
        let d_up = energy_derivatives(&p, &f, 1, 2.0, &k()).unwrap();
        let d_dn = energy_derivatives(&p, &f, 1, -2.0, &k()).unwrap();
        assert_eq!(d_up.energy, d_dn.energy);
        assert!((d_up.d_b + d_dn.d_b).abs() < 1e-12 * d_up.d_b.abs());
    }

    #[test]
    fn second_derivative_consistent() {
        let p = PotentialParams::table(0.005);
        let f = FieldConfig::new(0.05, 1.5).unwrap();
        let h = 1e-5;
        let d = |b: f64| energy_derivatives(&p, &f.with_b(b), 1, 1.0, &k()).unwrap();
        let fd = (d(0.05 + h).d_b - d(0.05 - h).d_b) / (2.0 * h);
        let an = d(0.05).d2_b;
        assert!(((an - fd) / an).abs() < 1e-6);
    }

    #[test]
    fn cutoffs_examples() {
        let c = cutoffs(&PotentialParams::table(0.005), &FieldConfig::zero(), 0, &k()).unwrap();
        assert!((c.p2 - -399.75).abs() < 1e-12);
        assert!((c.eta_max - 18.493_749_023_132_2).abs() < 1e-10);
        assert_eq!(c.n_max, 18);
        let c = cutoffs(&PotentialParams::table(0.01), &FieldConfig::zero(), 0, &k()).unwrap();
        assert!((c.eta_max - 12.633_294_025_102_6).abs() < 1e-10);
        // E(13) = -0.0100066 lies above E(12) = -0.0100210
        assert_eq!(c.n_max, 13);
        // strong field: P2 > 0 and nu^2 > P2, single state
        let c = cutoffs(&PotentialParams::table(0.005), &FieldConfig::new(4.0, 0.0).unwrap(), 0, &k()).unwrap();
        assert_eq!((c.eta_max, c.n_max), (0.0, 0));
    }

    #[test]
    fn residual_vanishes_on_spectrum() {
        let p = PotentialParams::table(0.005);
        let q = QuantumState::new(0, 0);
        let f = FieldConfig::zero();
        let e = energy_2d(&p, &f, &q, &k()).unwrap();
        assert!(quantization_residual(&p, &f, &q, &k(), e).unwrap().abs() < 1e-10);
        let off = quantization_residual(&p, &f, &q, &k(), e + 1e-3).unwrap();
        assert!(off.abs() > 1e-6);
    }

    #[test]
    fn greene_aldrich_diagnostic() {
        assert!(PotentialParams::table(0.005).greene_aldrich_warning().is_none());
        assert!(PotentialParams::table(0.2).greene_aldrich_warning().is_some());
    }
}
