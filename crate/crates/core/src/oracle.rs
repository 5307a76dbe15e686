//! Independent checks on the closed forms: a finite-difference eigensolver
//! for the Greene-Aldrich radial equation and brute-force versions of the
//! level cutoff and the partition sum.
//!
//! The radial equation is `rho'' + (2 mu E / hbar^2 + U(r)) rho = 0`. On a
//! uniform grid with Dirichlet ends the three-point stencil gives a
//! symmetric tridiagonal matrix whose eigenvalues are isolated by Sturm
//! counts and bisection.

use std::f64::consts::PI;

use crate::error::{domain, invalid, Result};
use crate::model::{DimensionlessSet, FieldConfig, PotentialParams, LEVEL_TIE_RTOL};
use crate::units::Constants;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
    pub spacing: f64,
}

impl FdGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min) {
            return Err(invalid(format!("grid needs 0 < r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if points < 3 {
            return Err(invalid(format!("grid needs at least 3 points, got {points}")));
        }
        Ok(Self {
            r_min,
            r_max,
            points,
            spacing: (r_max - r_min) / (points - 1) as f64,
        })
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        Self::new(self.r_min, self.r_max, 2 * self.points - 1).expect("refining a valid grid")
    }

    fn interior(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.points - 1).map(move |i| self.r_min + i as f64 * self.spacing)
    }
}

/// Coefficient `U(r)` of the radial equation, all potential and field terms
/// with `s = e^{-alpha r}`:
///
/// ```text
/// U = (2 mu A alpha / hbar^2) s/(1-s) - (2 mu C alpha^2 / hbar^2) s/(1-s)^2
///   + (2 m tau B alpha / hbar) s/(1-s)^2 - (tau^2 B^2 / hbar^2) s^2/(1-s)^2
///   - (tau^2 alpha B Phi / (hbar^2 pi)) s/(1-s)^2 - gamma alpha^2/(1-s)^2
/// ```
pub fn effective_potential(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain(format!("effective potential needs r > 0, got {r}")));
    }
    Ok(UCoefs::new(p, f, m, k).eval(r))
}

/// `U(r -> inf) = -gamma alpha^2`.
pub fn effective_potential_limit(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants) -> f64 {
    let g = UCoefs::new(p, f, m, k);
    -g.centrifugal
}

struct UCoefs {
    alpha: f64,
    coulomb: f64,
    inv_sq: f64,
    quad: f64,
    centrifugal: f64,
}

impl UCoefs {
    fn new(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants) -> Self {
        let (hb2, tau, a) = (k.hbar * k.hbar, k.tau(), p.alpha);
        let mx = m as f64 + f.xi(k);
        let gamma = mx * mx - 0.25;
        Self {
            alpha: a,
            coulomb: 2.0 * k.mu * p.a * a / hb2,
            // all terms carrying s/(1-s)^2
            inv_sq: -2.0 * k.mu * p.c * a * a / hb2 + 2.0 * m as f64 * tau * f.b * a / k.hbar
                - tau * tau * a * f.b * f.phi_ab / (hb2 * PI),
            quad: -tau * tau * f.b * f.b / hb2,
            centrifugal: gamma * a * a,
        }
    }

    fn eval(&self, r: f64) -> f64 {
        let x = self.alpha * r;
        let s = (-x).exp();
        let om = -(-x).exp_m1();
        let om2 = om * om;
        self.coulomb * s / om + self.inv_sq * s / om2 + self.quad * s * s / om2 - self.centrifugal / om2
    }
}

/// Lowest eigenvalues of the discretized problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FdSpectrum {
    /// Ascending; only states below the continuum threshold.
    pub eigenvalues: Vec<f64>,
    /// Fewer than the requested count were bound on this grid.
    pub truncated: bool,
    /// Continuum threshold `-(hbar^2 / 2 mu) U(inf)`.
    pub threshold: f64,
}

struct Tridiagonal {
    diag: Vec<f64>,
    off_sq: f64,
}

impl Tridiagonal {
    /// Eigenvalues of the matrix that are `< x`.
    fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - self.off_sq / q };
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th eigenvalue (0-based) inside `[lo, hi]`.
    fn bisect(&self, index: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Lowest `count` bound eigenvalues on `grid`.
pub fn fd_eigenvalues(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    grid: &FdGrid,
    count: usize,
) -> Result<FdSpectrum> {
    p.require_screened()?;
    let u = UCoefs::new(p, f, m, k);
    let kin = k.hbar * k.hbar / (2.0 * k.mu);
    let h2 = grid.spacing * grid.spacing;
    let diag: Vec<f64> = grid.interior().map(|r| kin * (2.0 / h2 - u.eval(r))).collect();
    let off = -kin / h2;
    let threshold = kin * u.centrifugal;
    // Gershgorin: each row sum of the kinetic part is >= 0
    let lo = diag.iter().fold(f64::INFINITY, |a, &d| a.min(d)) - 2.0 * off.abs();
    let t = Tridiagonal { diag, off_sq: off * off };
    let bound = t.count_below(threshold);
    let want = count.min(bound);
    let eigenvalues = (0..want).map(|i| t.bisect(i, lo, threshold)).collect();
    Ok(FdSpectrum {
        eigenvalues,
        truncated: want < count,
        threshold,
    })
}

/// `(4 E(h/2) - E(h)) / 3` from `grid` and its refinement.
pub fn fd_richardson(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    grid: &FdGrid,
    count: usize,
) -> Result<FdSpectrum> {
    let coarse = fd_eigenvalues(p, f, m, k, grid, count)?;
    let fine = fd_eigenvalues(p, f, m, k, &grid.refined(), count)?;
    let eigenvalues: Vec<f64> = coarse
        .eigenvalues
        .iter()
        .zip(&fine.eigenvalues)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect();
    Ok(FdSpectrum {
        truncated: eigenvalues.len() < count,
        eigenvalues,
        threshold: fine.threshold,
    })
}

/// Observed order `log2((E_h - E_{h/2}) / (E_{h/2} - E_{h/4}))` of the
/// `level`-th eigenvalue.
pub fn fd_convergence_order(
    p: &PotentialParams,
    f: &FieldConfig,
    m: i32,
    k: &Constants,
    grid: &FdGrid,
    level: usize,
) -> Result<f64> {
    let g2 = grid.refined();
    let g4 = g2.refined();
    let mut e = [0.0; 3];
    for (slot, g) in e.iter_mut().zip([grid, &g2, &g4]) {
        let s = fd_eigenvalues(p, f, m, k, g, level + 1)?;
        *slot = *s
            .eigenvalues
            .get(level)
            .ok_or_else(|| domain(format!("level {level} not bound on the grid")))?;
    }
    Ok(((e[0] - e[1]) / (e[1] - e[2])).log2())
}

/// Exact s-wave spectrum of the Hulthen potential
/// `V = -A alpha e^{-alpha r} / (1 - e^{-alpha r})`:
/// `E = -(hbar^2 alpha^2 / 2 mu) ((beta1 - N^2) / (2N))^2` with `N = n + 1`.
///
/// This is the radial problem above with `C = 0`, no field, and
/// `m + xi = 1/2`, so it checks the solver against a closed form that does
/// not come from this crate.
pub fn hulthen_energy(a: f64, alpha: f64, n: u32, k: &Constants) -> f64 {
    let beta1 = 2.0 * k.mu * a / (k.hbar * k.hbar * alpha);
    let nn = (n + 1) as f64;
    let x = (beta1 - nn * nn) / (2.0 * nn);
    -k.energy_scale(alpha) * x * x
}

// Written out rather than calling into the model so the scan stands on its
// own; the arithmetic order matches so sums agree bit for bit.
fn closed_form_level(d: &DimensionlessSet, n: u32) -> f64 {
    let phi = n as f64 + d.nu;
    let p2 = d.delta2 - d.beta1 - d.gamma;
    let x = (p2 - phi * phi) / (2.0 * phi);
    d.energy_scale * (d.gamma - x * x)
}

/// Integer `n` in `[0, n_ceiling]` with the largest closed-form energy;
/// ties within [`LEVEL_TIE_RTOL`] go to the smaller `n`.
pub fn brute_force_nmax(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, n_ceiling: u32) -> Result<u32> {
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    let mut best = 0;
    let mut e_best = closed_form_level(&d, 0);
    for n in 1..=n_ceiling {
        let e = closed_form_level(&d, n);
        if e > e_best + LEVEL_TIE_RTOL * e_best.abs() {
            best = n;
            e_best = e;
        }
    }
    Ok(best)
}

/// Scan ceiling comfortably past the stationary point of `E(n)`.
pub fn default_n_ceiling(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants) -> Result<u32> {
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    Ok((10.0 * d.p2().abs().sqrt() + 10.0).ceil() as u32)
}

/// `sum_{n=0}^{n_max} e^{-beta E_n}` with `n_max` from the brute-force scan.
pub fn brute_force_partition(p: &PotentialParams, f: &FieldConfig, m: i32, k: &Constants, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(domain(format!("beta must be > 0, got {beta}")));
    }
    let d = DimensionlessSet::new(p, f, m as f64, k)?;
    let n_max = brute_force_nmax(p, f, m, k, default_n_ceiling(p, f, m, k)?)?;
    Ok((0..=n_max).map(|n| (-beta * closed_form_level(&d, n)).exp()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::cutoffs;

    fn k() -> Constants {
        Constants::default()
    }

    #[test]
    fn potential_reduces_without_fields() {
        let p = PotentialParams::table(0.005);
        let r = 3.0;
        let x: f64 = 0.005 * r;
        let (s, om) = ((-x).exp(), 1.0 - (-x).exp());
        let want = 2.0 * 0.005 * s / om - 2.0 * 0.5 * 0.005f64.powi(2) * s / (om * om) + 0.25 * 0.005f64.powi(2) / (om * om);
        let got = effective_potential(&p, &FieldConfig::zero(), 0, &k(), r).unwrap();
        assert!((got - want).abs() < 1e-14 * want.abs());
        assert!(effective_potential(&p, &FieldConfig::zero(), 0, &k(), 0.0).is_err());
    }

    #[test]
    fn potential_asymptote() {
        let p = PotentialParams::table(0.005);
        let f = FieldConfig::new(1.0, 2.0).unwrap();
        let r = 80.0 / 0.005;
        let u = effective_potential(&p, &f, 1, &k(), r).unwrap();
        assert!((u - effective_potential_limit(&p, &f, 1, &k())).abs() < 1e-30);
    }

    #[test]
    fn delta1_term_is_odd_in_m() {
        let p = PotentialParams::table(0.01);
        let f = FieldConfig::new(2.0, 0.0).unwrap();
        let z = FieldConfig::zero();
        let r = 5.0;
        let d_up = effective_potential(&p, &f, 2, &k(), r).unwrap() - effective_potential(&p, &z, 2, &k(), r).unwrap();
        let d_dn = effective_potential(&p, &f, -2, &k(), r).unwrap() - effective_potential(&p, &z, -2, &k(), r).unwrap();
        // only the B^2 term is even; remove it and the rest flips sign
        let quad = {
            let x: f64 = 0.01 * r;
            let (s, om) = ((-x).exp(), 1.0 - (-x).exp());
            -4.0 * s * s / (om * om)
        };
        assert!(((d_up - quad) + (d_dn - quad)).abs() < 1e-12);
        assert!((d_up - quad).abs() > 1e-3);
    }

    #[test]
    fn sturm_count_on_known_matrix() {
        // 1D Laplacian: eigenvalues 2 - 2 cos(j pi / (n+1))
        let n = 50;
        let t = Tridiagonal { diag: vec![2.0; n], off_sq: 1.0 };
        for j in 1..=5 {
            let want = 2.0 - 2.0 * (j as f64 * PI / (n + 1) as f64).cos();
            let got = t.bisect(j - 1, -1.0, 5.0);
            assert!((got - want).abs() < 1e-14);
        }
        assert_eq!(t.count_below(5.0), n);
        assert_eq!(t.count_below(0.0), 0);
    }

    #[test]
    fn hulthen_spectrum_reproduced() {
        let p = PotentialParams::new(1.0, 0.0, 0.05).unwrap();
        let f = FieldConfig::new(0.0, 0.5).unwrap();
        // rho'(0) != 0 here, so the wall at r_min shifts E by ~ rho'(0)^2 r_min
        let grid = FdGrid::new(1e-10, 400.0, 40_001).unwrap();
        let fd = fd_richardson(&p, &f, 0, &k(), &grid, 3).unwrap();
        assert_eq!(fd.eigenvalues.len(), 3);
        for (n, e) in fd.eigenvalues.iter().enumerate() {
            let want = hulthen_energy(1.0, 0.05, n as u32, &k());
            assert!((e - want).abs() < 1e-7 * want.abs(), "n = {n}: {e} vs {want}");
        }
    }

    #[test]
    fn second_order_convergence() {
        let p = PotentialParams::new(1.0, 0.0, 0.05).unwrap();
        let f = FieldConfig::new(0.0, 0.5).unwrap();
        let grid = FdGrid::new(1e-6, 400.0, 4_001).unwrap();
        let order = fd_convergence_order(&p, &f, 0, &k(), &grid, 0).unwrap();
        assert!((1.7..=2.3).contains(&order), "order {order}");
    }

    #[test]
    fn unbound_requests_are_flagged() {
        // a strong field leaves nothing below threshold on this grid
        let p = PotentialParams::table(0.005);
        let f = FieldConfig::new(4.0, 0.0).unwrap();
        let grid = FdGrid::new(1e-3, 200.0, 2_001).unwrap();
        let s = fd_eigenvalues(&p, &f, 0, &k(), &grid, 3).unwrap();
        assert!(s.truncated);
        assert!(s.eigenvalues.len() < 3);
    }

    #[test]
    fn brute_force_cutoffs() {
        let p = PotentialParams::table(0.005);
        let z = FieldConfig::zero();
        assert_eq!(brute_force_nmax(&p, &z, 0, &k(), 400).unwrap(), 18);
        assert_eq!(brute_force_nmax(&PotentialParams::table(0.01), &z, 0, &k(), 400).unwrap(), 13);
        let d = DimensionlessSet::new(&p, &z, 0.0, &k()).unwrap();
        for n in 0..18 {
            assert!(closed_form_level(&d, n + 1) > closed_form_level(&d, n));
        }
        let c = cutoffs(&p, &z, 0, &k()).unwrap();
        assert_eq!(c.n_max, 18);
    }

    #[test]
    fn brute_force_partition_limits() {
        let p = PotentialParams::table(0.005);
        let z = FieldConfig::zero();
        let tiny = brute_force_partition(&p, &z, 0, &k(), 1e-12).unwrap();
        assert!((tiny - 19.0).abs() < 1e-9);
        let strong = FieldConfig::new(4.0, 0.0).unwrap();
        let e0 = crate::model::energy_2d(&p, &strong, &crate::model::QuantumState::new(0, 0), &k()).unwrap();
        assert_eq!(brute_force_partition(&p, &strong, 0, &k(), 2.0).unwrap(), (-2.0 * e0).exp());
        assert!(brute_force_partition(&p, &z, 0, &k(), 0.0).is_err());
    }
}
