use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use skp_core::thermo::{magnetization_zero_t, susceptibility_zero_t, thermo_point, Convention, ZMethod};
use skp_core::{
    cutoffs, energy_2d, energy_3d, reference_table, table_alpha, FieldConfig, PotentialParams, QuantumState, SkpError,
    TABLE_COLUMNS,
};

use crate::config::{convention_name, method_name, Axis, RunConfig};
use crate::error::CliError;

pub type Out = csv::Writer<Box<dyn Write>>;

pub fn open_output(cfg: &RunConfig) -> Result<Out, CliError> {
    let sink: Box<dyn Write> = match &cfg.output_path {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    };
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink))
}

/// Scientific notation, 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

fn describe(p: &PotentialParams, f: &FieldConfig, n: u32, m: i32) -> String {
    format!("n={n} m={m} B={} phi={} alpha={} A={} C={}", f.b, f.phi_ab, p.alpha, p.a, p.c)
}

fn warn_greene_aldrich(p: &PotentialParams) {
    if let Some(w) = p.greene_aldrich_warning() {
        eprintln!("warning: {w}");
    }
}

struct EnergyRow {
    energy: f64,
    n_max: u32,
}

fn energy_row(p: &PotentialParams, f: &FieldConfig, n: u32, m: i32, cfg: &RunConfig) -> Result<EnergyRow, CliError> {
    let k = &cfg.constants;
    let at = |e: SkpError| CliError::at(e, describe(p, f, n, m));
    let energy = energy_2d(p, f, &QuantumState::new(n, m), k).map_err(at)?;
    let n_max = cutoffs(p, f, m, k).map_err(at)?.n_max;
    Ok(EnergyRow { energy, n_max })
}

/// Energies for the requested states. Without `--n`, `--m`, `--B` and
/// `--phi` this is the full reference-table layout.
pub fn cmd_energy(cfg: &RunConfig, out: &mut Out) -> Result<(), CliError> {
    let p = &cfg.potential;
    warn_greene_aldrich(p);
    let ns: Vec<u32> = cfg.n.map_or_else(|| (0..=3).collect(), |n| vec![n]);
    if let Some(ell) = cfg.ell {
        if cfg.fields_given && !cfg.fields.is_zero() {
            return Err(CliError::Config("--ell needs B = 0 and phi = 0".into()));
        }
        let mut rows = Vec::new();
        for n in ns {
            let e = energy_3d(p, &FieldConfig::zero(), ell, n, &cfg.constants)
                .map_err(|e| CliError::at(e, format!("n={n} ell={ell} alpha={}", p.alpha)))?;
            rows.push(vec![n.to_string(), ell.to_string(), num(p.alpha), num(e)]);
        }
        return write_all(out, &["n", "ell", "alpha", "E"], rows);
    }
    let ms: Vec<i32> = cfg.m.map_or_else(|| vec![0, 1, -1], |m| vec![m]);
    let fields: Vec<FieldConfig> = if cfg.fields_given {
        vec![cfg.fields]
    } else {
        TABLE_COLUMNS.iter().map(|&(b, phi)| FieldConfig::new(b, phi).unwrap()).collect()
    };
    let mut rows = Vec::new();
    for &m in &ms {
        for &n in &ns {
            for f in &fields {
                let r = energy_row(p, f, n, m, cfg)?;
                rows.push(vec![
                    n.to_string(),
                    m.to_string(),
                    num(f.b),
                    num(f.phi_ab),
                    num(p.alpha),
                    num(r.energy),
                    r.n_max.to_string(),
                    (n > r.n_max).to_string(),
                ]);
            }
        }
    }
    write_all(out, &["n", "m", "B", "phi", "alpha", "E", "n_max", "beyond_cutoff"], rows)
}

/// One reference table: computed values, printed values and their
/// differences, one row per `(m, n)`.
pub fn cmd_table(cfg: &RunConfig, out: &mut Out) -> Result<(), CliError> {
    let which = cfg.table.unwrap_or(1);
    let alpha = table_alpha(which).ok_or_else(|| CliError::Config(format!("no table {which}")))?;
    let cells = reference_table(which).ok_or_else(|| CliError::Config(format!("no table {which}")))?;
    let p = PotentialParams::table(alpha);
    let tags = ["00", "B", "Phi", "BPhi"];
    let mut header = vec!["m".to_string(), "n".to_string()];
    for prefix in ["E", "printed", "absdiff"] {
        header.extend(tags.iter().map(|t| format!("{prefix}_{t}")));
    }
    let mut rows = Vec::new();
    for row in cells.chunks(4) {
        let mut computed = Vec::new();
        let mut printed = Vec::new();
        let mut diffs = Vec::new();
        for c in row {
            let f = FieldConfig::new(c.b, c.phi_ab).unwrap();
            let e = energy_2d(&p, &f, &QuantumState::new(c.n, c.m), &cfg.constants)
                .map_err(|e| CliError::at(e, describe(&p, &f, c.n, c.m)))?;
            computed.push(num(e));
            printed.push(c.printed.to_string());
            diffs.push(num((e - c.value()).abs()));
        }
        let mut record = vec![row[0].m.to_string(), row[0].n.to_string()];
        record.extend(computed);
        record.extend(printed);
        record.extend(diffs);
        rows.push(record);
    }
    write_all(out, &header, rows)
}

#[derive(Debug, Clone, Copy)]
struct Point {
    value: f64,
    p: PotentialParams,
    f: FieldConfig,
    n: u32,
    m: i32,
    beta: Option<f64>,
}

fn points(cfg: &RunConfig) -> Result<Vec<Point>, CliError> {
    let base = Point {
        value: f64::NAN,
        p: cfg.potential,
        f: cfg.fields,
        n: cfg.n.unwrap_or(0),
        m: cfg.m.unwrap_or(0),
        beta: cfg.beta,
    };
    let Some(sweep) = cfg.sweep else { return Ok(vec![base]) };
    let bad = |e: SkpError| CliError::Config(format!("sweep over {}: {e}", sweep.axis.name()));
    sweep
        .values()
        .into_iter()
        .map(|v| {
            let mut pt = Point { value: v, ..base };
            match sweep.axis {
                Axis::B => pt.f = FieldConfig::new(v, pt.f.phi_ab).map_err(bad)?,
                Axis::Phi => pt.f = FieldConfig::new(pt.f.b, v).map_err(bad)?,
                Axis::Alpha => pt.p = PotentialParams::new(pt.p.a, pt.p.c, v).map_err(bad)?,
                Axis::Beta => {
                    if !(v > 0.0) {
                        return Err(CliError::Config(format!("sweep over beta hits {v}")));
                    }
                    pt.beta = Some(v);
                }
                Axis::N => pt.n = v.round() as u32,
                Axis::M => pt.m = v.round() as i32,
            }
            Ok(pt)
        })
        .collect()
}

const THERMO_HEADER: [&str; 11] = ["beta", "z_method", "Z", "U", "F", "S", "Cv", "M", "chi", "identity_residual", "warning"];

/// `THERMO_HEADER` cells; a closed form that cannot be evaluated falls back
/// to quadrature and says so in the warning column.
fn thermo_cells(pt: &Point, beta: f64, method: ZMethod, cfg: &RunConfig) -> Result<Vec<String>, CliError> {
    let k = &cfg.constants;
    let run = |m: ZMethod| thermo_point(&pt.p, &pt.f, pt.m, k, beta, m, cfg.convention);
    let (t, warning) = match run(method) {
        Err(e @ (SkpError::ClosedFormUnstable(_) | SkpError::Overflow(_))) if method == ZMethod::ClosedForm => {
            (run(ZMethod::Quadrature), format!("closed form unstable ({e}); used quad"))
        }
        other => (other, String::new()),
    };
    let t = t.map_err(|e| CliError::at(e, format!("{} beta={beta}", describe(&pt.p, &pt.f, pt.n, pt.m))))?;
    let identity = match cfg.convention {
        Convention::Standard => num((t.s - k.k_b * beta * (t.u - t.f)).abs()),
        Convention::Literal => String::new(),
    };
    Ok(vec![
        num(beta),
        method_name(t.z_method).to_string(),
        num(t.z),
        num(t.u),
        num(t.f),
        num(t.s),
        num(t.cv),
        num(t.magnetization),
        num(t.chi),
        identity,
        warning,
    ])
}

/// Nothing is written unless every row was computed.
fn write_all<H: AsRef<str>>(out: &mut Out, header: &[H], rows: Vec<Vec<String>>) -> Result<(), CliError> {
    out.write_record(header.iter().map(|h| h.as_ref()))?;
    for record in rows {
        out.write_record(&record)?;
    }
    Ok(out.flush()?)
}

fn write_ordered<H: AsRef<str>>(
    out: &mut Out,
    header: &[H],
    blocks: Vec<Result<Vec<Vec<String>>, CliError>>,
) -> Result<(), CliError> {
    let blocks = blocks.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_all(out, header, blocks.into_iter().flatten().collect())
}

/// One row per sweep point: the zero-temperature quantities of state
/// `(n, m)` and, when `beta` is known, the ensemble quantities.
pub fn cmd_sweep(cfg: &RunConfig, out: &mut Out) -> Result<(), CliError> {
    let sweep = cfg.sweep.ok_or_else(|| CliError::Config("sweep needs --sweep var:lo:hi:steps".into()))?;
    warn_greene_aldrich(&cfg.potential);
    let with_thermo = cfg.beta.is_some() || sweep.axis == Axis::Beta;
    let mut header: Vec<&str> = vec![
        "var", "value", "n", "m", "B", "phi", "alpha", "E", "n_max", "beyond_cutoff", "M_zero_T", "chi_zero_T",
    ];
    if with_thermo {
        header.extend(THERMO_HEADER);
    }
    let pts = points(cfg)?;
    let rows: Vec<Result<Vec<Vec<String>>, CliError>> = pts
        .par_iter()
        .map(|pt| {
            let k = &cfg.constants;
            let r = energy_row(&pt.p, &pt.f, pt.n, pt.m, cfg)?;
            let q = QuantumState::new(pt.n, pt.m);
            let at = |e: SkpError| CliError::at(e, describe(&pt.p, &pt.f, pt.n, pt.m));
            let m0 = magnetization_zero_t(&pt.p, &pt.f, &q, k).map_err(at)?;
            let chi0 = susceptibility_zero_t(&pt.p, &pt.f, &q, k).map_err(at)?;
            let lead = vec![
                sweep.axis.name().to_string(),
                num(pt.value),
                pt.n.to_string(),
                pt.m.to_string(),
                num(pt.f.b),
                num(pt.f.phi_ab),
                num(pt.p.alpha),
                num(r.energy),
                r.n_max.to_string(),
                (pt.n > r.n_max).to_string(),
                num(m0),
                num(chi0),
            ];
            let Some(beta) = pt.beta.filter(|_| with_thermo) else { return Ok(vec![lead]) };
            cfg.z_method
                .methods()
                .into_iter()
                .map(|method| {
                    let mut record = lead.clone();
                    record.extend(thermo_cells(pt, beta, method, cfg)?);
                    Ok(record)
                })
                .collect()
        })
        .collect();
    write_ordered(out, &header, rows)
}

/// Ensemble quantities for magnetic quantum number `m` at `--beta`, or along
/// `--sweep`.
pub fn cmd_thermo(cfg: &RunConfig, out: &mut Out) -> Result<(), CliError> {
    let beta_swept = cfg.sweep.is_some_and(|s| s.axis == Axis::Beta);
    if cfg.beta.is_none() && !beta_swept {
        return Err(CliError::Config("thermo needs --beta or a beta sweep".into()));
    }
    let mut header = vec!["B", "phi", "alpha", "m", "convention"];
    header.extend(THERMO_HEADER);
    let pts = points(cfg)?;
    let rows: Vec<Result<Vec<Vec<String>>, CliError>> = pts
        .par_iter()
        .map(|pt| {
            let beta = pt.beta.expect("beta present");
            cfg.z_method
                .methods()
                .into_iter()
                .map(|method| {
                    let mut record = vec![
                        num(pt.f.b),
                        num(pt.f.phi_ab),
                        num(pt.p.alpha),
                        pt.m.to_string(),
                        convention_name(cfg.convention).to_string(),
                    ];
                    record.extend(thermo_cells(pt, beta, method, cfg)?);
                    Ok(record)
                })
                .collect()
        })
        .collect();
    write_ordered(out, &header, rows)
}
