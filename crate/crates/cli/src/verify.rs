//! Oracle comparisons behind `skp verify`.

use rayon::prelude::*;
use skp_core::oracle::{brute_force_nmax, brute_force_partition, default_n_ceiling, fd_richardson, FdGrid};
use skp_core::thermo::{partition_closed, partition_direct, partition_quadrature};
use skp_core::{
    cutoffs, energy_2d, quantization_residual, reference_table, table_alpha, Constants, FieldConfig, PotentialParams,
    QuantumState, TABLE_COLUMNS,
};

use crate::error::CliError;

const FD_RTOL: f64 = 1e-6;
const FD_ATOL: f64 = 1e-8;
const FD_R_MIN: f64 = 1e-3;
const FD_LEVELS: usize = 3;
const RESIDUAL_TOL: f64 = 1e-10;
const SUM_RTOL: f64 = 1e-12;
const CLOSED_RTOL: f64 = 1e-6;

const THERMO_POINTS: [(f64, f64, f64); 10] = [
    (0.1, 0.0, 0.0),
    (0.2, 0.05, 0.0),
    (0.5, 0.01, 0.5),
    (1.0, 0.02, 1.0),
    (2.0, 0.05, 2.0),
    (3.0, 0.03, 3.0),
    (4.0, 0.02, 2.0),
    (5.0, 0.0, 1.0),
    (7.0, 0.01, 0.0),
    (10.0, 0.04, 0.5),
];

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub fd_points: usize,
    pub fd_r_max: f64,
    /// Added to every closed-form energy before comparison.
    pub perturb: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            fd_points: 200_001,
            fd_r_max: 2000.0,
            perturb: 0.0,
        }
    }
}

pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn k() -> Constants {
    Constants::default()
}

fn check_fd(opts: &VerifyOptions) -> Result<Check, CliError> {
    let grid = FdGrid::new(FD_R_MIN, opts.fd_r_max, opts.fd_points).map_err(|e| CliError::Config(e.to_string()))?;
    let mut configs = Vec::new();
    for alpha in [0.005, 0.01] {
        for b in [0.0, 4.0] {
            for phi in [0.0, 4.0] {
                for m in [0, 1, -1] {
                    configs.push((alpha, b, phi, m));
                }
            }
        }
    }
    let per_config: Vec<Result<(usize, f64), String>> = configs
        .par_iter()
        .map(|&(alpha, b, phi, m)| {
            let p = PotentialParams::table(alpha);
            let f = FieldConfig::new(b, phi).unwrap();
            let fd = fd_richardson(&p, &f, m, &k(), &grid, FD_LEVELS).map_err(|e| e.to_string())?;
            let mut ok = 0;
            let mut worst: f64 = 0.0;
            for (n, &x) in fd.eigenvalues.iter().enumerate() {
                let e = energy_2d(&p, &f, &QuantumState::new(n as u32, m), &k()).map_err(|e| e.to_string())?
                    + opts.perturb;
                let dev = (x - e).abs();
                worst = worst.max(dev);
                if dev <= (FD_RTOL * e.abs()).max(FD_ATOL) {
                    ok += 1;
                }
            }
            Ok((ok, worst))
        })
        .collect();
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    for r in per_config {
        let (o, w) = r.map_err(CliError::Domain)?;
        ok += o;
        worst = worst.max(w);
    }
    let total = configs.len() * FD_LEVELS;
    Ok(Check {
        name: "fd_eigenvalues",
        pass: ok == total,
        detail: format!(
            "{ok}/{total} levels within max(1e-6|E|, 1e-8); max |closed-form - fd| = {worst:.3e} on {} points",
            opts.fd_points
        ),
    })
}

fn check_nmax() -> Result<Check, CliError> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for which in [1u8, 2] {
        let p = PotentialParams::table(table_alpha(which).unwrap());
        for &(b, phi) in &TABLE_COLUMNS {
            let f = FieldConfig::new(b, phi).unwrap();
            for m in -3..=3 {
                let at = |e| CliError::at(e, format!("alpha={} B={b} phi={phi} m={m}", p.alpha));
                let fast = cutoffs(&p, &f, m, &k()).map_err(at)?.n_max;
                let ceiling = default_n_ceiling(&p, &f, m, &k()).map_err(at)?;
                let slow = brute_force_nmax(&p, &f, m, &k(), ceiling).map_err(at)?;
                checked += 1;
                if fast != slow {
                    mismatches.push(format!("alpha={} B={b} phi={phi} m={m}: {fast} vs {slow}", p.alpha));
                }
            }
        }
    }
    Ok(Check {
        name: "n_max",
        pass: mismatches.is_empty(),
        detail: format!("{} of {checked} cutoffs agree with the brute-force scan{}", checked - mismatches.len(), {
            if mismatches.is_empty() {
                String::new()
            } else {
                format!("; {}", mismatches.join("; "))
            }
        }),
    })
}

fn check_residual(opts: &VerifyOptions) -> Result<Check, CliError> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    // a perturbed energy can leave the domain of the residual entirely
    let mut undefined = 0;
    for which in [1u8, 2] {
        let p = PotentialParams::table(table_alpha(which).unwrap());
        for c in reference_table(which).unwrap() {
            let f = FieldConfig::new(c.b, c.phi_ab).unwrap();
            let q = QuantumState::new(c.n, c.m);
            let at = |e| CliError::at(e, format!("alpha={} B={} phi={} n={} m={}", p.alpha, c.b, c.phi_ab, c.n, c.m));
            let e = energy_2d(&p, &f, &q, &k()).map_err(at)? + opts.perturb;
            match quantization_residual(&p, &f, &q, &k(), e) {
                Ok(r) => worst = worst.max(r.abs()),
                Err(_) => undefined += 1,
            }
            count += 1;
        }
    }
    Ok(Check {
        name: "quantization_residual",
        pass: worst <= RESIDUAL_TOL && undefined == 0,
        detail: format!("max |residual| = {worst:.3e} over {count} states, {undefined} outside the residual's domain"),
    })
}

fn check_partition() -> Result<(Check, Check), CliError> {
    let p = PotentialParams::table(0.005);
    let mut worst_sum: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for &(beta, b, phi) in &THERMO_POINTS {
        let f = FieldConfig::new(b, phi).unwrap();
        let at = |e| CliError::at(e, format!("beta={beta} B={b} phi={phi}"));
        let direct = partition_direct(&p, &f, 0, &k(), beta).map_err(at)?;
        let brute = brute_force_partition(&p, &f, 0, &k(), beta).map_err(at)?;
        worst_sum = worst_sum.max(((direct - brute) / brute).abs());
        let quad = partition_quadrature(&p, &f, 0, &k(), beta).map_err(at)?;
        let closed = partition_closed(&p, &f, 0, &k(), beta).map_err(at)?;
        worst_closed = worst_closed.max(((closed - quad) / quad).abs());
    }
    Ok((
        Check {
            name: "partition_sum",
            pass: worst_sum <= SUM_RTOL,
            detail: format!("direct sum vs brute-force scan, max relative diff {worst_sum:.3e}"),
        },
        Check {
            name: "partition_closed_form",
            pass: worst_closed <= CLOSED_RTOL,
            detail: format!("closed form vs quadrature, max relative diff {worst_closed:.3e}"),
        },
    ))
}

pub fn run_checks(opts: &VerifyOptions) -> Result<Vec<Check>, CliError> {
    let (sum, closed) = check_partition()?;
    Ok(vec![check_fd(opts)?, check_nmax()?, check_residual(opts)?, sum, closed])
}

/// Print one line per check; a verification error if any is red.
pub fn cmd_verify(opts: &VerifyOptions) -> Result<(), CliError> {
    let checks = run_checks(opts)?;
    for c in &checks {
        println!("{}: {} ({})", c.name, if c.pass { "PASS" } else { "FAIL" }, c.detail);
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("verify: {} passed, {failed} failed", checks.len() - failed);
    if failed > 0 {
        return Err(CliError::Verify(failed));
    }
    Ok(())
}
