//! Command-line flags, `key = value` config files, and the resolved run
//! configuration.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use skp_core::thermo::{Convention, ZMethod};
use skp_core::{Constants, FieldConfig, PotentialParams, SkpError};

use crate::error::CliError;

/// Flags shared by every subcommand. A value given on the command line wins
/// over the same key in `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Read `key = value` lines from this file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Screening parameter
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Coulomb-like strength
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Inverse-square strength
    #[arg(long = "C", allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Dissociation energy (with --re, instead of --A/--C)
    #[arg(long = "De", allow_negative_numbers = true)]
    pub de: Option<f64>,
    /// Equilibrium distance (with --De)
    #[arg(long = "re", allow_negative_numbers = true)]
    pub re: Option<f64>,
    /// Magnetic field
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Aharonov-Bohm flux
    #[arg(long, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Radial quantum number
    #[arg(long)]
    pub n: Option<u32>,
    /// Magnetic quantum number
    #[arg(long, allow_negative_numbers = true)]
    pub m: Option<i32>,
    /// Angular momentum for the 3D spectrum (zero fields only)
    #[arg(long)]
    pub ell: Option<u32>,
    /// Inverse temperature
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Sweep axis as var:lo:hi:steps, var one of B, phi, beta, alpha, n, m
    #[arg(long)]
    pub sweep: Option<String>,
    /// Partition-function route: sum, quad, closed or all
    #[arg(long = "z-method")]
    pub z_method: Option<String>,
    /// Definition of C_v and S: standard or paper
    #[arg(long)]
    pub convention: Option<String>,
    /// Reference table, 1 or 2
    #[arg(long)]
    pub table: Option<u8>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("cannot parse {key} = {value:?}")))
}

macro_rules! fill {
    ($slot:expr, $key:expr, $value:expr) => {
        if $slot.is_none() {
            $slot = Some(parse($key, $value)?);
        }
    };
}

impl Flags {
    /// Fill unset flags from the config file, if one was named.
    pub fn merge_config_file(mut self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else { return Ok(self) };
        let text = fs::read_to_string(&path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Config(format!("{}:{}: expected key = value", path.display(), lineno + 1)));
            };
            self.apply(key.trim(), value.trim())
                .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
        Ok(self)
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "alpha" => fill!(self.alpha, key, value),
            "A" => fill!(self.a, key, value),
            "C" => fill!(self.c, key, value),
            "De" => fill!(self.de, key, value),
            "re" => fill!(self.re, key, value),
            "B" => fill!(self.b, key, value),
            "phi" => fill!(self.phi, key, value),
            "n" => fill!(self.n, key, value),
            "m" => fill!(self.m, key, value),
            "ell" => fill!(self.ell, key, value),
            "beta" => fill!(self.beta, key, value),
            "sweep" => fill!(self.sweep, key, value),
            "z-method" => fill!(self.z_method, key, value),
            "convention" => fill!(self.convention, key, value),
            "table" => fill!(self.table, key, value),
            "out" => fill!(self.out, key, value),
            _ => return Err(CliError::Config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    B,
    Phi,
    Beta,
    Alpha,
    N,
    M,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::B => "B",
            Axis::Phi => "phi",
            Axis::Beta => "beta",
            Axis::Alpha => "alpha",
            Axis::N => "n",
            Axis::M => "m",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn parse(spec: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = spec.split(':').collect();
        let [var, lo, hi, steps] = parts[..] else {
            return Err(CliError::Config(format!("sweep {spec:?} is not var:lo:hi:steps")));
        };
        let axis = match var {
            "B" => Axis::B,
            "phi" => Axis::Phi,
            "beta" => Axis::Beta,
            "alpha" => Axis::Alpha,
            "n" => Axis::N,
            "m" => Axis::M,
            _ => return Err(CliError::Config(format!("unknown sweep variable {var:?}"))),
        };
        let sweep = Sweep {
            axis,
            lo: parse("sweep lo", lo)?,
            hi: parse("sweep hi", hi)?,
            steps: parse("sweep steps", steps)?,
        };
        if sweep.steps < 2 || !(sweep.lo < sweep.hi) {
            return Err(CliError::Config(format!("sweep {spec:?} needs lo < hi and steps >= 2")));
        }
        if matches!(axis, Axis::N | Axis::M) {
            for v in sweep.values() {
                if (v - v.round()).abs() > 1e-9 {
                    return Err(CliError::Config(format!("sweep over {var} hits non-integer value {v}")));
                }
            }
            if axis == Axis::N && sweep.lo < 0.0 {
                return Err(CliError::Config("sweep over n must start at 0 or above".into()));
            }
        }
        Ok(sweep)
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| if i + 1 == self.steps { self.hi } else { self.lo + (self.hi - self.lo) * i as f64 / last })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZChoice {
    One(ZMethod),
    All,
}

impl ZChoice {
    pub fn methods(self) -> Vec<ZMethod> {
        match self {
            ZChoice::One(m) => vec![m],
            ZChoice::All => vec![ZMethod::DirectSum, ZMethod::Quadrature, ZMethod::ClosedForm],
        }
    }
}

pub fn method_name(m: ZMethod) -> &'static str {
    match m {
        ZMethod::DirectSum => "sum",
        ZMethod::Quadrature => "quad",
        ZMethod::ClosedForm => "closed",
    }
}

pub fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Standard => "standard",
        Convention::Literal => "paper",
    }
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub potential: PotentialParams,
    pub fields: FieldConfig,
    /// false when neither `B` nor `phi` was given
    pub fields_given: bool,
    pub constants: Constants,
    pub n: Option<u32>,
    pub m: Option<i32>,
    pub ell: Option<u32>,
    pub beta: Option<f64>,
    pub sweep: Option<Sweep>,
    pub z_method: ZChoice,
    pub convention: Convention,
    pub table: Option<u8>,
    pub output_path: Option<PathBuf>,
}

fn config_err(e: SkpError) -> CliError {
    CliError::Config(e.to_string())
}

impl RunConfig {
    pub fn resolve(flags: Flags) -> Result<Self, CliError> {
        let flags = flags.merge_config_file()?;
        let alpha = flags.alpha.unwrap_or(0.005);
        let potential = match (flags.de, flags.re) {
            (None, None) => PotentialParams::new(flags.a.unwrap_or(1.0), flags.c.unwrap_or(0.5), alpha).map_err(config_err)?,
            (Some(de), Some(re)) => {
                if flags.a.is_some() || flags.c.is_some() {
                    return Err(CliError::Config("give either --A/--C or --De/--re, not both".into()));
                }
                PotentialParams::from_dissociation(de, re, alpha).map_err(config_err)?
            }
            _ => return Err(CliError::Config("--De and --re go together".into())),
        };
        let fields_given = flags.b.is_some() || flags.phi.is_some();
        let fields = FieldConfig::new(flags.b.unwrap_or(0.0), flags.phi.unwrap_or(0.0)).map_err(config_err)?;
        if let Some(beta) = flags.beta {
            if !(beta > 0.0 && beta.is_finite()) {
                return Err(CliError::Config(format!("beta must be > 0, got {beta}")));
            }
        }
        let z_method = match flags.z_method.as_deref().unwrap_or("sum") {
            "sum" => ZChoice::One(ZMethod::DirectSum),
            "quad" => ZChoice::One(ZMethod::Quadrature),
            "closed" => ZChoice::One(ZMethod::ClosedForm),
            "all" => ZChoice::All,
            other => return Err(CliError::Config(format!("unknown z-method {other:?}"))),
        };
        let convention = match flags.convention.as_deref().unwrap_or("standard") {
            "standard" => Convention::Standard,
            "paper" => Convention::Literal,
            other => return Err(CliError::Config(format!("unknown convention {other:?}"))),
        };
        if let Some(t) = flags.table {
            if !(t == 1 || t == 2) {
                return Err(CliError::Config(format!("table must be 1 or 2, got {t}")));
            }
        }
        let sweep = flags.sweep.as_deref().map(Sweep::parse).transpose()?;
        Ok(RunConfig {
            potential,
            fields,
            fields_given,
            constants: Constants::default(),
            n: flags.n,
            m: flags.m,
            ell: flags.ell,
            beta: flags.beta,
            sweep,
            z_method,
            convention,
            table: flags.table,
            output_path: flags.out,
        })
    }
}
