//! Reference eigenvalue tables at `A = 1`, `C = 1/2`, natural units, for
//! `alpha = 0.005` and `alpha = 0.01`. Values are kept as the printed
//! strings so the resolution of each entry is known.

/// Field settings of the four columns, `(B, Phi_AB)`.
pub const TABLE_COLUMNS: [(f64, f64); 4] = [(0.0, 0.0), (4.0, 0.0), (0.0, 4.0), (4.0, 4.0)];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCell {
    pub m: i32,
    pub n: u32,
    pub b: f64,
    pub phi_ab: f64,
    pub printed: &'static str,
}

impl ReferenceCell {
    pub fn value(&self) -> f64 {
        self.printed.parse().expect("reference entries are valid decimals")
    }

    /// One unit in the last printed decimal place.
    pub fn last_digit_unit(&self) -> f64 {
        let decimals = self.printed.split('.').nth(1).map_or(0, str::len);
        10f64.powi(-(decimals as i32))
    }
}

const TABLE_ALPHA_0005: [(i32, u32, [&str; 4]); 12] = [
    (0, 0, ["-0.224453125", "-0.0000101592", "-0.027740778", "0.0001966517714"]),
    (0, 1, ["-0.082421125", "-0.000041345", "-0.019583291", "0.0001808333134"]),
    (0, 2, ["-0.043305166", "-0.000097367", "-0.014852416", "0.0001401207451"]),
    (0, 3, ["-0.027225347", "-0.000178134", "-0.011878189", "0.00007460689558"]),
    (1, 0, ["-0.139473878", "-0.000028872", "-0.020427549", "0.0002930090943"]),
    (1, 1, ["-0.061617341", "-0.00008491", "-0.015428064", "0.0002520130983"]),
    (1, 2, ["-0.035300487", "-0.00016569", "-0.012289179", "0.0001862168779"]),
    (1, 3, ["-0.023352861", "-0.00027113", "-0.010201018", "0.00009571267932"]),
    (-1, 0, ["-0.139473878", "0.000008601", "-0.041415309", "0.00009976076045"]),
    (-1, 1, ["-0.061617341", "0.000002329", "-0.026533035", "0.0001091844533"]),
    (-1, 2, ["-0.035300487", "-0.000028872", "-0.018830334", "0.00009361967227"]),
    (-1, 3, ["-0.023352861", "-0.000084910", "-0.014347073", "0.00005315983329"]),
];
const TABLE_ALPHA_001: [(i32, u32, [&str; 4]); 12] = [
    (0, 0, ["-0.226701389", "-0.000040648", "-0.03209692", "0.000786316"]),
    (0, 1, ["-0.0848845", "-0.000165135", "-0.02340324", "0.000721113"]),
    (0, 2, ["-0.045873724", "-0.000388322", "-0.01841899", "0.00055677"]),
    (0, 3, ["-0.029889043", "-0.000709481", "-0.01534527", "0.000294021"]),
    (1, 0, ["-0.142507312", "-0.000115352", "-0.02491432", "0.001168469"]),
    (1, 1, ["-0.064404298", "-0.000338662", "-0.01942501", "0.001001876"]),
    (1, 2, ["-0.038052784", "-0.000659943", "-0.01603745", "0.000736893"]),
    (1, 3, ["-0.026143059", "-0.001078473", "-0.01384463", "0.000374247"]),
    (-1, 0, ["-0.142507312", "0.000034421", "-0.04556147", "0.000399885"]),
    (-1, 1, ["-0.064404298", "0.000009258", "-0.03011213", "0.000436608"]),
    (-1, 2, ["-0.038052784", "-0.000115353", "-0.02217152", "0.00037343"]),
    (-1, 3, ["-0.026143059", "-0.000338664", "-0.01760814", "0.000211096"]),
];

/// Screening parameter of table 1 or 2.
pub fn table_alpha(which: u8) -> Option<f64> {
    match which {
        1 => Some(0.005),
        2 => Some(0.01),
        _ => None,
    }
}

/// All 48 cells of table 1 or 2, row-major (m, n) then column.
pub fn reference_table(which: u8) -> Option<Vec<ReferenceCell>> {
    let rows = match which {
        1 => &TABLE_ALPHA_0005,
        2 => &TABLE_ALPHA_001,
        _ => return None,
    };
    let mut cells = Vec::with_capacity(48);
    for &(m, n, ref vals) in rows.iter() {
        for (&(b, phi_ab), &printed) in TABLE_COLUMNS.iter().zip(vals) {
            cells.push(ReferenceCell { m, n, b, phi_ab, printed });
        }
    }
    Some(cells)
}
