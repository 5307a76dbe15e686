//! Error functions and the terminating Gauss hypergeometric series.
//!
//! Only what the closed forms need: `erf` on the real line, `erfi` on the
//! real line (so that `erf` of a purely imaginary argument is available),
//! and `2F1(-n, b; c; s)` as a finite polynomial.

use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use num_complex::Complex64;

use crate::error::{domain, Result, SkpError};

/// Complex value used for the error-function arguments of the closed-form
/// partition function.
pub type ComplexValue = Complex64;

/// Largest `|x|` accepted by [`erfi`].
pub const ERFI_MAX_ARG: f64 = 30.0;

/// Real error function, absolute accuracy better than 1e-12 everywhere.
///
/// Small arguments use the non-alternating series
/// `erf(x) = 2/sqrt(pi) e^{-x^2} sum 2^k x^{2k+1} / (2k+1)!!`;
/// for `|x| >= 3` the complementary function is evaluated by continued
/// fraction.
pub fn erf_real(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let v = if ax < 3.0 {
        erf_series(ax)
    } else if ax < 6.5 {
        1.0 - erfc_continued_fraction(ax)
    } else {
        1.0
    };
    v.copysign(x)
}

fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * (-x2).exp() * sum
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for j in 1..500 {
        let a = j as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Imaginary error function `erfi(x) = -i erf(ix) = 2/sqrt(pi) int_0^x e^{t^2} dt`.
///
/// Relative accuracy is about 1e-15. Fails with [`SkpError::Overflow`] when
/// `|x| > 30` or when the value is not representable (`|x|` above ~26.6).
pub fn erfi(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(domain("erfi of NaN"));
    }
    let ax = x.abs();
    if ax > ERFI_MAX_ARG {
        return Err(SkpError::Overflow(x));
    }
    let v = if ax < 7.0 {
        erfi_series(ax)
    } else {
        erfi_asymptotic(ax)
    };
    if !v.is_finite() {
        return Err(SkpError::Overflow(x));
    }
    Ok(v.copysign(x))
}

fn erfi_series(x: f64) -> f64 {
    // all terms positive: sum_k x^{2k+1} / (k! (2k+1))
    let x2 = x * x;
    let mut power = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        power *= x2 / k;
        let term = power / (2.0 * k + 1.0);
        sum += term;
        if term <= 1e-17 * sum {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

fn erfi_asymptotic(x: f64) -> f64 {
    // e^{x^2}/(x sqrt(pi)) * sum_k (2k-1)!!/(2x^2)^k, truncated at the smallest term
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        let next = term * (2.0 * k - 1.0) * inv;
        if next >= term || next < 1e-17 {
            sum += next;
            break;
        }
        term = next;
        sum += term;
    }
    // split e^{x^2} to delay overflow of the intermediate product
    let half = (0.5 * x * x).exp();
    half * (half * sum / (x * PI.sqrt()))
}

/// `erf(z)` for `z` purely real or purely imaginary.
///
/// General complex arguments are rejected with a domain error.
pub fn erf_complex(z: ComplexValue) -> Result<ComplexValue> {
    if z.im == 0.0 {
        Ok(Complex64::new(erf_real(z.re), 0.0))
    } else if z.re == 0.0 {
        // erf(iy) = i erfi(y)
        Ok(Complex64::new(0.0, erfi(z.im)?))
    } else {
        Err(domain(format!(
            "erf_complex supports purely real or imaginary arguments, got {z}"
        )))
    }
}

/// Terminating hypergeometric series `2F1(-n, b; c; s)`.
///
/// Evaluates the degree-`n` polynomial exactly (no truncation). `s` must lie
/// in `[0, 1]`. A non-positive integer `c` that the series actually reaches
/// (`c > -n`) is a pole.
pub fn gauss_2f1_terminating(n: u32, b: f64, c: f64, s: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(domain(format!("2F1 argument s = {s} outside [0, 1]")));
    }
    if c <= 0.0 && c.fract() == 0.0 && c > -(n as f64) {
        return Err(SkpError::Pole(c));
    }
    let nf = n as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf - nf) * (b + kf) / ((c + kf) * (kf + 1.0)) * s;
        sum += term;
    }
    Ok(sum)
}
