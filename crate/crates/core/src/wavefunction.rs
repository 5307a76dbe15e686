//! Radial bound-state functions
//! `rho(s) = s^lambda (1-s)^sigma 2F1(-n, n + 2(lambda + sigma); 2 lambda + 1; s)`
//! with `s = e^{-alpha r}`.
//!
//! The full 2D state is `psi = e^{i m phi} rho(r) / sqrt(2 pi r)`, so with the
//! area element `r dr dphi` normalization is `int_0^inf rho(r)^2 dr = 1`.

use crate::error::{Result, SkpError};
use crate::model::{dimensionless_map, FieldConfig, PotentialParams, QuantumState};
use crate::quadrature::{integrate_with_breaks, QuadOptions};
use crate::specfun::gauss_2f1_terminating;
use crate::units::Constants;

/// Ratio of integrand to its peak below which the radial tail is dropped.
const TAIL_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialSolution {
    pub n: u32,
    pub m: i32,
    pub energy: f64,
    pub lambda_exp: f64,
    pub sigma_exp: f64,
    /// `(a, b, c)` of the terminating series; `a = -n`.
    pub hypergeo_params: (f64, f64, f64),
    pub alpha: f64,
    /// Log of the multiplier applied to the bare expression.
    ln_norm: f64,
}

impl RadialSolution {
    /// Unnormalized solution for state `q` at the closed-form energy.
    pub fn new(p: &PotentialParams, f: &FieldConfig, q: &QuantumState, k: &Constants) -> Result<Self> {
        let d = dimensionless_map(p, f, q, k)?;
        let energy = d.energy(q.n);
        let epsilon = -energy / d.energy_scale;
        let lambda = d.lambda_exp(epsilon)?;
        let sigma = d.sigma_exp()?;
        let nf = q.n as f64;
        Ok(Self {
            n: q.n,
            m: q.m,
            energy,
            lambda_exp: lambda,
            sigma_exp: sigma,
            hypergeo_params: (-nf, nf + 2.0 * (lambda + sigma), 2.0 * lambda + 1.0),
            alpha: p.alpha,
            ln_norm: 0.0,
        })
    }

    /// Multiplier relative to the bare expression.
    pub fn norm(&self) -> f64 {
        self.ln_norm.exp()
    }

    /// Same function times `factor > 0`.
    pub fn scaled(mut self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(SkpError::InvalidParameter(format!("scale factor must be > 0, got {factor}")));
        }
        self.ln_norm += factor.ln();
        Ok(self)
    }

    fn series(&self, s: f64) -> Result<f64> {
        let (_, b, c) = self.hypergeo_params;
        gauss_2f1_terminating(self.n, b, c, s)
    }

    /// `ln` of `s^lambda (1-s)^sigma` from `ln s` and `ln(1-s)`.
    fn ln_envelope(&self, ln_s: f64, ln_1ms: f64) -> f64 {
        // 0 * (-inf) at the end points is a zero of the function, not NaN
        let t1 = if self.lambda_exp == 0.0 { 0.0 } else { self.lambda_exp * ln_s };
        let t2 = if self.sigma_exp == 0.0 { 0.0 } else { self.sigma_exp * ln_1ms };
        t1 + t2
    }

    /// `rho` as a function of `s` in `[0, 1]`.
    pub fn rho_s(&self, s: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&s) {
            return Err(SkpError::Domain(format!("rho_s needs s in [0, 1], got {s}")));
        }
        let env = (self.ln_norm + self.ln_envelope(s.ln(), (-s).ln_1p())).exp();
        Ok(env * self.series(s)?)
    }

    /// `rho` as a function of `r > 0`.
    pub fn rho_r(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(SkpError::Domain(format!("rho_r needs r > 0, got {r}")));
        }
        let x = self.alpha * r;
        let s = (-x).exp();
        let env = (self.ln_norm + self.ln_envelope(-x, (-(-x).exp_m1()).ln())).exp();
        Ok(env * self.series(s)?)
    }

    /// Radius of the envelope maximum, `s* = lambda / (lambda + sigma)`.
    pub fn envelope_peak(&self) -> f64 {
        let s = self.lambda_exp / (self.lambda_exp + self.sigma_exp);
        -s.ln() / self.alpha
    }

    /// Upper integration limit: past it `rho^2` is below [`TAIL_CUTOFF`] of
    /// its peak even with the series at its largest possible size.
    fn tail_radius(&self) -> Result<f64> {
        let (a, b, c) = self.hypergeo_params;
        // |2F1| on [0, 1] is bounded by the sum of the absolute terms at s = 1
        let mut term = 1.0f64;
        let mut bound = 1.0;
        for j in 0..self.n {
            let jf = j as f64;
            term *= ((a + jf) * (b + jf) / ((c + jf) * (jf + 1.0))).abs();
            bound += term;
        }
        let r_peak = self.envelope_peak();
        let peak_sq = self.peak_estimate(r_peak)?.powi(2);
        let ln_env = |r: f64| {
            let x = self.alpha * r;
            self.ln_norm + self.ln_envelope(-x, (-(-x).exp_m1()).ln())
        };
        let target = TAIL_CUTOFF.ln() + peak_sq.ln() - 2.0 * bound.ln();
        let mut r = r_peak.max(1.0 / self.alpha);
        while 2.0 * ln_env(r) > target {
            r *= 2.0;
            if !r.is_finite() {
                return Err(SkpError::NonNormalizable("tail does not decay".into()));
            }
        }
        Ok(r)
    }

    /// Largest `|rho|` on a coarse scan around the envelope peak.
    fn peak_estimate(&self, r_peak: f64) -> Result<f64> {
        let mut best = self.rho_r(r_peak)?.abs();
        let span = 4.0 * r_peak.max(1.0 / self.alpha);
        for i in 1..=400 {
            let r = span * i as f64 / 400.0;
            best = best.max(self.rho_r(r)?.abs());
        }
        Ok(best)
    }

    /// `int_0^inf rho(r)^2 dr` with the current multiplier.
    pub fn norm_integral(&self) -> Result<f64> {
        if !(self.lambda_exp > 0.0 && self.sigma_exp > 0.5) {
            return Err(SkpError::NonNormalizable(format!(
                "need lambda > 0 and sigma > 1/2, got lambda = {}, sigma = {}",
                self.lambda_exp, self.sigma_exp
            )));
        }
        let r_hi = self.tail_radius()?;
        let r_peak = self.envelope_peak().min(0.5 * r_hi);
        let opts = QuadOptions { rel_tol: 1e-12, ..QuadOptions::default() };
        let res = integrate_with_breaks(
            |r| if r > 0.0 { self.rho_r(r).map(|v| v * v).unwrap_or(f64::NAN) } else { 0.0 },
            &[0.0, r_peak, r_hi],
            opts,
        )?;
        if !(res.value > 0.0 && res.value.is_finite()) {
            return Err(SkpError::NonNormalizable(format!("norm integral = {}", res.value)));
        }
        Ok(res.value)
    }

    /// Rescale so that `int_0^inf rho(r)^2 dr = 1`.
    pub fn normalize(mut self) -> Result<Self> {
        // two passes: the first removes any gross scale so the tail cut is
        // judged on a sensibly sized function
        for _ in 0..2 {
            let i = self.norm_integral()?;
            self.ln_norm -= 0.5 * i.ln();
        }
        Ok(self)
    }

    /// Number of sign changes of `rho` on `(0, 1)` in `s`, from a grid of
    /// `points` equally spaced values.
    pub fn sign_changes(&self, points: usize) -> Result<usize> {
        let mut count = 0;
        let mut prev = 0.0f64;
        for i in 1..points {
            let s = i as f64 / points as f64;
            // the envelope is positive; the sign is that of the series
            let v = self.series(s)?;
            if v != 0.0 {
                if prev != 0.0 && v.signum() != prev.signum() {
                    count += 1;
                }
                prev = v;
            }
        }
        Ok(count)
    }
}

/// Normalized radial function for state `q`.
pub fn normalized_state(
    p: &PotentialParams,
    f: &FieldConfig,
    q: &QuantumState,
    k: &Constants,
) -> Result<RadialSolution> {
    RadialSolution::new(p, f, q, k)?.normalize()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground() -> RadialSolution {
        RadialSolution::new(
            &PotentialParams::table(0.005),
            &FieldConfig::zero(),
            &QuantumState::new(0, 0),
            &Constants::default(),
        )
        .unwrap()
    }

    #[test]
    fn exponents_of_ground_state() {
        let g = ground();
        // epsilon + gamma = X^2 with X = (P2 - nu^2)/(2 nu) = -134
        assert!((g.lambda_exp - 134.0).abs() < 1e-9);
        assert_eq!(g.sigma_exp, 1.5);
        assert_eq!(g.hypergeo_params.0, 0.0);
        assert!((g.hypergeo_params.2 - 269.0).abs() < 1e-9);
    }

    #[test]
    fn boundary_zeros() {
        let g = ground();
        assert_eq!(g.rho_s(0.0).unwrap(), 0.0);
        assert_eq!(g.rho_s(1.0).unwrap(), 0.0);
        assert!(g.rho_s(1.5).is_err());
        assert!(g.rho_r(0.0).is_err());
        assert!(g.rho_r(1e-12).unwrap().abs() < 1e-15);
        assert_eq!(g.rho_r(1e6).unwrap(), 0.0);
    }

    #[test]
    fn ground_state_is_bare_envelope() {
        let g = ground();
        for s in [0.2f64, 0.7, 0.99] {
            let want = s.powf(g.lambda_exp) * (1.0 - s).powf(g.sigma_exp);
            let got = g.rho_s(s).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-300), "s = {s}");
        }
    }

    #[test]
    fn ground_state_unimodal_on_scan() {
        let g = ground();
        let vals: Vec<f64> = (1..=10_000).map(|i| g.rho_r(i as f64 * 0.002).unwrap()).collect();
        let imax = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert!(imax > 0 && imax < vals.len() - 1);
        assert!(vals[..imax].windows(2).all(|w| w[1] >= w[0]));
        assert!(vals[imax..].windows(2).all(|w| w[1] <= w[0]));
        let r_scan = (imax + 1) as f64 * 0.002;
        assert!((r_scan - g.envelope_peak()).abs() < 0.004);
    }

    #[test]
    fn normalization_and_scale_invariance() {
        let g = ground().normalize().unwrap();
        assert!((g.norm_integral().unwrap() - 1.0).abs() < 1e-8);
        let h = ground().scaled(7.0).unwrap().normalize().unwrap();
        for &r in &[0.5, 2.2, 6.0] {
            let (a, b) = (g.rho_r(r).unwrap(), h.rho_r(r).unwrap());
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
        assert!(ground().scaled(0.0).is_err());
    }

    #[test]
    fn ground_state_norm_against_trapezoid() {
        // independent oracle: Romberg-refined trapezoid of the bare envelope
        // squared in r on [0, 40], where the envelope is < 1e-100 of its peak
        let g = ground();
        let f = |r: f64| {
            if r == 0.0 {
                0.0
            } else {
                let s = (-0.005 * r).exp();
                (s.powf(134.0) * (1.0 - s).powf(1.5)).powi(2)
            }
        };
        let trap = |n: usize| {
            let h = 40.0 / n as f64;
            let mut acc = 0.5 * (f(0.0) + f(40.0));
            for i in 1..n {
                acc += f(i as f64 * h);
            }
            acc * h
        };
        let (t1, t2) = (trap(100_000), trap(200_000));
        let oracle = (4.0 * t2 - t1) / 3.0;
        let got = g.norm_integral().unwrap();
        assert!(((got - oracle) / oracle).abs() < 1e-10, "{got} vs {oracle}");
        let n = g.normalize().unwrap().norm();
        assert!((n - 1.0 / oracle.sqrt()).abs() < 1e-9 * n);
    }

    #[test]
    fn node_count_matches_n() {
        let p = PotentialParams::table(0.005);
        let k = Constants::default();
        for f in [FieldConfig::zero(), FieldConfig::new(0.02, 1.0).unwrap()] {
            for m in [-1, 0, 2] {
                for n in 0..=4 {
                    let sol = RadialSolution::new(&p, &f, &QuantumState::new(n, m), &k).unwrap();
                    assert_eq!(sol.sign_changes(100_000).unwrap(), n as usize, "n = {n}, m = {m}");
                }
            }
        }
    }

    #[test]
    fn excited_state_normalizes() {
        let sol = normalized_state(
            &PotentialParams::table(0.01),
            &FieldConfig::zero(),
            &QuantumState::new(3, 1),
            &Constants::default(),
        )
        .unwrap();
        assert!((sol.norm_integral().unwrap() - 1.0).abs() < 1e-8);
    }
}
