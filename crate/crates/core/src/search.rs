//! Per-range search for the best (c, x), verification of published rows,
//! and table serialization.

use crate::charbounds::{BoundError, ModulusRange, Parity};
use crate::criterion::{
    certify, f_value_at, CandidateConfig, ConfigError, ErrorModel, PrecisionLevel, Status,
    VerificationCertificate,
};
use crate::rigor::Enclosure;
use std::fmt;

/// One parity's entry in a table row: c in thousandths, log₁₀ x in
/// hundredths, exactly as printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParityEntry {
    pub c_milli: u32,
    pub log10_x_centi: u32,
}

/// One row of the published table: a modulus range with per-parity
/// certificates. Odd entries are absent until the odd table begins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub q_lo: u128,
    pub q_hi: u128,
    pub even: Option<ParityEntry>,
    pub odd: Option<ParityEntry>,
}

impl TableRow {
    pub fn entry(&self, parity: Parity) -> Option<ParityEntry> {
        match parity {
            Parity::Even => self.even,
            Parity::Odd => self.odd,
        }
    }
}

/// First modulus covered by the odd half of the table.
pub const ODD_TABLE_START: u128 = 150_000_000;

const fn entry(c_milli: u32, log10_x_centi: u32) -> Option<ParityEntry> {
    Some(ParityEntry {
        c_milli,
        log10_x_centi,
    })
}

const PUBLISHED: [TableRow; 22] = [
    TableRow { q_lo: 400_000, q_hi: 700_000, even: entry(1011, 554), odd: None },
    TableRow { q_lo: 700_000, q_hi: 1_000_000, even: entry(1017, 573), odd: None },
    TableRow { q_lo: 1_000_000, q_hi: 1_700_000, even: entry(1020, 588), odd: None },
    TableRow { q_lo: 1_700_000, q_hi: 3_100_000, even: entry(1025, 608), odd: None },
    TableRow { q_lo: 3_100_000, q_hi: 6_100_000, even: entry(1030, 630), odd: None },
    TableRow { q_lo: 6_100_000, q_hi: 13_000_000, even: entry(1036, 654), odd: None },
    TableRow { q_lo: 13_000_000, q_hi: 24_000_000, even: entry(1041, 683), odd: None },
    TableRow { q_lo: 24_000_000, q_hi: 54_000_000, even: entry(1044, 706), odd: None },
    TableRow { q_lo: 54_000_000, q_hi: 150_000_000, even: entry(1051, 735), odd: None },
    TableRow {
        q_lo: 150_000_000,
        q_hi: 620_000_000,
        even: entry(1055, 775),
        odd: entry(1021, 800),
    },
    TableRow {
        q_lo: 620_000_000,
        q_hi: 4_400_000_000,
        even: entry(1060, 829),
        odd: entry(1029, 854),
    },
    TableRow {
        q_lo: 4_400_000_000,
        q_hi: 64_000_000_000,
        even: entry(1070, 901),
        odd: entry(1041, 926),
    },
    TableRow {
        q_lo: 64_000_000_000,
        q_hi: 2_700_000_000_000,
        even: entry(1080, 1000),
        odd: entry(1055, 1024),
    },
    TableRow {
        q_lo: 2_700_000_000_000,
        q_hi: 620_000_000_000_000,
        even: entry(1090, 1140),
        odd: entry(1069, 1163),
    },
    TableRow {
        q_lo: 620_000_000_000_000,
        q_hi: 2_100_000_000_000_000_000,
        even: entry(1101, 1343),
        odd: entry(1082, 1366),
    },
    TableRow {
        q_lo: 2_100_000_000_000_000_000,
        q_hi: 4_400_000_000_000_000_000_000,
        even: entry(1200, 1526),
        odd: entry(1182, 1550),
    },
    TableRow {
        q_lo: 4_400_000_000_000_000_000_000,
        q_hi: 1_500_000_000_000_000_000_000_000,
        even: entry(1300, 1664),
        odd: entry(1283, 1686),
    },
    TableRow {
        q_lo: 1_500_000_000_000_000_000_000_000,
        q_hi: 310_000_000_000_000_000_000_000_000,
        even: entry(1350, 1790),
        odd: entry(1334, 1812),
    },
    TableRow {
        q_lo: 310_000_000_000_000_000_000_000_000,
        q_hi: 24_000_000_000_000_000_000_000_000_000,
        even: entry(1400, 1892),
        odd: entry(1383, 1915),
    },
    TableRow {
        q_lo: 24_000_000_000_000_000_000_000_000_000,
        q_hi: 1_500_000_000_000_000_000_000_000_000_000,
        even: entry(1425, 1991),
        odd: entry(1411, 2011),
    },
    TableRow {
        q_lo: 1_500_000_000_000_000_000_000_000_000_000,
        q_hi: 100_000_000_000_000_000_000_000_000_000_000,
        even: entry(1445, 2089),
        odd: entry(1429, 2111),
    },
    TableRow {
        q_lo: 100_000_000_000_000_000_000_000_000_000_000,
        q_hi: 910_000_000_000_000_000_000_000_000_000_000,
        even: entry(1495, 2140),
        odd: entry(1480, 2161),
    },
];

/// The published certificate table: 22 contiguous ranges from 4·10⁵ up to
/// 9.1·10³², even entries throughout, odd entries from 1.5·10⁸.
pub fn published_table() -> &'static [TableRow] {
    &PUBLISHED
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableError {
    /// Adjacent rows do not share an endpoint.
    Gap { index: usize },
    /// A parity's c values decrease with q, or a parity entry is present
    /// or absent on the wrong side of its table start.
    Shape { index: usize },
    MissingParity,
    /// The published c cannot be restored by a reduction within 0.5%.
    IrreducibleRow { required_c_milli: u32 },
    Parse(String),
    Bound(BoundError),
    Config(ConfigError),
}

impl fmt::Display for TableError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableError::Gap { index } => write!(f, "rows {} and {} do not tile", index, index + 1),
            TableError::Shape { index } => write!(f, "row {index} breaks the table shape"),
            TableError::MissingParity => write!(f, "row has no entry for the requested parity"),
            TableError::IrreducibleRow { required_c_milli } => write!(
                f,
                "side condition requires c <= {}/1000, beyond the 0.5% allowance",
                required_c_milli
            ),
            TableError::Parse(msg) => write!(f, "table parse error: {msg}"),
            TableError::Bound(e) => write!(f, "{e}"),
            TableError::Config(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for TableError {}

impl From<BoundError> for TableError {
    fn from(e: BoundError) -> Self {
        TableError::Bound(e)
    }
}

// ------------------------------------------------------------ verification

/// Knobs shared by row verification and search; mirrors the certification
/// defaults.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub pomerance: bool,
    pub simplified_tail: bool,
    pub precision: PrecisionLevel,
    pub model: ErrorModel,
    pub tau_floor_exponent: f64,
    pub max_depth: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            pomerance: false,
            simplified_tail: false,
            precision: PrecisionLevel::Standard,
            model: ErrorModel::identity(),
            tau_floor_exponent: -4.0,
            max_depth: 40,
        }
    }
}

fn build_config(
    range: ModulusRange,
    c_milli: u32,
    log10_x_centi: u32,
    opts: &SearchOptions,
) -> CandidateConfig {
    let mut cfg = CandidateConfig::new(range, c_milli, log10_x_centi);
    cfg.pomerance = opts.pomerance;
    cfg.simplified_tail = opts.simplified_tail;
    cfg.precision = opts.precision;
    cfg.model = opts.model;
    cfg.tau_floor_exponent = opts.tau_floor_exponent;
    cfg.max_depth = opts.max_depth;
    cfg
}

fn range_for(row: &TableRow, parity: Parity) -> Result<ModulusRange, TableError> {
    // the odd table opens below the odd production floor, so build ranges
    // with the relaxed constructor
    ModulusRange::with_override(row.q_lo, row.q_hi, parity).map_err(TableError::from)
}

/// Certify one published row for one parity. When the printed (c, x) pair
/// fails the log x ≤ log q₀/c side condition by rounding, c is lowered by
/// the smallest amount that restores it, capped at 0.5%, and the
/// certificate records the original value in `reduced_from`.
pub fn verify_row(row: &TableRow, parity: Parity) -> Result<VerificationCertificate, TableError> {
    verify_row_with(row, parity, &SearchOptions::default())
}

pub fn verify_row_with(
    row: &TableRow,
    parity: Parity,
    opts: &SearchOptions,
) -> Result<VerificationCertificate, TableError> {
    let e = row.entry(parity).ok_or(TableError::MissingParity)?;
    let range = range_for(row, parity)?;
    let mut cfg = build_config(range, e.c_milli, e.log10_x_centi, opts);
    let mut reduced_from = None;
    if cfg.validate() == Err(ConfigError::SideCondition) {
        // largest c with c·log x ≤ log q_lo, rounded toward safety
        let r = Enclosure::from_u128(row.q_lo).ln() / cfg.ln_x();
        let mut c_red = (r.lo * 1000.0).floor() as u32;
        while c_red > 0 && {
            cfg.c_milli = c_red;
            cfg.validate() == Err(ConfigError::SideCondition)
        } {
            c_red -= 1;
        }
        // allow at most a 0.5% reduction
        if c_red == 0 || (e.c_milli - c_red) * 200 > e.c_milli {
            return Err(TableError::IrreducibleRow {
                required_c_milli: c_red,
            });
        }
        reduced_from = Some(e.c_milli);
    }
    cfg.validate().map_err(TableError::Config)?;
    let mut cert = certify(&cfg);
    cert.reduced_from = reduced_from;
    Ok(cert)
}

/// Verify every row of a table that carries the parity, in order.
pub fn verify_table(
    rows: &[TableRow],
    parity: Parity,
    opts: &SearchOptions,
) -> Vec<(usize, Result<VerificationCertificate, TableError>)> {
    rows.iter()
        .enumerate()
        .filter(|(_, r)| r.entry(parity).is_some())
        .map(|(i, r)| (i, verify_row_with(r, parity, opts)))
        .collect()
}

// ----------------------------------------------------------------- search

/// A certified search result: the best constant found and its witness.
#[derive(Clone, Copy, Debug)]
pub struct SearchOutcome {
    pub c_milli: u32,
    pub log10_x_centi: u32,
    pub certificate: VerificationCertificate,
}

/// Default witness grid: 51 values of log₁₀ x stepping down by 0.02 from
/// the side-condition boundary log₁₀(q_lo)/c at the starting constant.
pub fn default_x_grid(range: &ModulusRange, c_start_milli: u32) -> Vec<u32> {
    let lg_q = Enclosure::from_u128(range.q_lo).ln() / Enclosure::from_int(10).ln();
    let c = Enclosure::from_ratio(c_start_milli as i64, 1000);
    let anchor = ((lg_q / c).lo * 100.0).floor() as u32;
    (0..51)
        .map(|k| anchor.saturating_sub(2 * k))
        .filter(|&v| v >= 70)
        .collect()
}

/// Published precision varies by block: thousandths below 2.1·10¹⁸,
/// five-thousandths beyond.
pub fn default_c_step(range: &ModulusRange) -> u32 {
    if range.q_lo < 2_100_000_000_000_000_000 {
        1
    } else {
        5
    }
}

/// Cheap certificate-shaped rejection: F at the (q_lo, τ_top) corner with
/// the candidate witness and with the capped ladder rung. Both provably
/// nonnegative there means no subdivision can succeed with this witness.
fn wall_rejects(cfg: &CandidateConfig) -> bool {
    let q = Enclosure::point(cfg.range.q_enclosure().lo);
    let tau_top = Enclosure::point((cfg.c_value() / q.ln()).hi);
    let own = f_value_at(q, tau_top, cfg.x_value(), cfg);
    let rung = f_value_at(
        q,
        tau_top,
        Enclosure::point(0.95 / tau_top.hi).exp(),
        cfg,
    );
    let own_out = own.map_or(true, |f| f.lo >= 0.0);
    let rung_out = rung.map_or(true, |f| f.lo >= 0.0);
    own_out && rung_out
}

fn attempt(
    range: ModulusRange,
    c_milli: u32,
    x_grid_centi: &[u32],
    opts: &SearchOptions,
) -> Option<SearchOutcome> {
    for &lgx in x_grid_centi {
        let cfg = build_config(range, c_milli, lgx, opts);
        if cfg.validate().is_err() || wall_rejects(&cfg) {
            continue;
        }
        let certificate = certify(&cfg);
        if certificate.status == Status::Certified {
            return Some(SearchOutcome {
                c_milli,
                log10_x_centi: lgx,
                certificate,
            });
        }
    }
    None
}

/// Largest c = c_start + k·c_step certified by some witness in the grid,
/// with the first certifying witness; None when even c_start fails.
/// Certification is monotone in c, so the step count is located by
/// doubling and bisection; the result matches the incremental scan.
pub fn find_best(
    range: ModulusRange,
    c_start_milli: u32,
    c_step_milli: u32,
    x_grid_centi: &[u32],
) -> Option<SearchOutcome> {
    find_best_with(
        range,
        c_start_milli,
        c_step_milli,
        x_grid_centi,
        &SearchOptions::default(),
    )
}

pub fn find_best_with(
    range: ModulusRange,
    c_start_milli: u32,
    c_step_milli: u32,
    x_grid_centi: &[u32],
    opts: &SearchOptions,
) -> Option<SearchOutcome> {
    assert!(c_start_milli > 0 && c_step_milli > 0 && !x_grid_centi.is_empty());
    let at = |k: u32| attempt(range, c_start_milli + k * c_step_milli, x_grid_centi, opts);
    let mut best = at(0)?;
    let mut lo = 0u32;
    let mut step = 1u32;
    let hi = loop {
        let k = lo + step;
        match at(k) {
            Some(out) => {
                best = out;
                lo = k;
                step *= 2;
            }
            None => break k,
        }
    };
    let mut hi = hi;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match at(mid) {
            Some(out) => {
                best = out;
                lo = mid;
            }
            None => hi = mid,
        }
    }
    Some(best)
}

// ------------------------------------------------------------- formatting

/// Canonical compact form of a table modulus: mantissa digits with the
/// trailing zeros folded into a power of ten ("4e5", "1.5e8", "9.1e32").
pub fn format_q(n: u128) -> String {
    let s = n.to_string();
    let digits = s.trim_end_matches('0');
    if digits.len() == s.len() || s.len() <= 3 {
        return s;
    }
    let exp = s.len() - 1;
    if digits.len() == 1 {
        format!("{digits}e{exp}")
    } else {
        format!("{}.{}e{}", &digits[..1], &digits[1..], exp)
    }
}

/// Inverse of `format_q`; also accepts plain integers.
pub fn parse_q(text: &str) -> Result<u128, TableError> {
    let bad = || TableError::Parse(format!("bad modulus value {text:?}"));
    if let Some((mant, exp)) = text.split_once(['e', 'E']) {
        let exp: u32 = exp.parse().map_err(|_| bad())?;
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits: String = [int_part, frac_part].concat();
        if digits.chars().any(|c| !c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = exp.checked_sub(frac_part.len() as u32).ok_or_else(bad)?;
        let base: u128 = digits.parse().map_err(|_| bad())?;
        let pow = 10u128.checked_pow(scale).ok_or_else(bad)?;
        base.checked_mul(pow).ok_or_else(bad)
    } else {
        text.parse().map_err(|_| bad())
    }
}

/// "1.011" form of a constant held in thousandths.
pub fn format_c(milli: u32) -> String {
    format!("{}.{:03}", milli / 1000, milli % 1000)
}

/// "5.54" form of a log₁₀ x held in hundredths.
pub fn format_lgx(centi: u32) -> String {
    format!("{}.{:02}", centi / 100, centi % 100)
}

/// Parse a constant like "1.011" into thousandths.
pub fn parse_c(text: &str) -> Result<u32, TableError> {
    parse_scaled(text, 1000, "constant")
}

/// Parse a witness exponent like "5.54" into hundredths.
pub fn parse_lgx(text: &str) -> Result<u32, TableError> {
    parse_scaled(text, 100, "log10 x")
}

fn parse_scaled(text: &str, scale: u32, what: &str) -> Result<u32, TableError> {
    let bad = || TableError::Parse(format!("bad {what} value {text:?}"));
    let (int_part, frac_part) = text.split_once('.').unwrap_or((text, ""));
    let places = scale.ilog10() as usize;
    if frac_part.len() > places || int_part.is_empty() {
        return Err(bad());
    }
    let int: u32 = int_part.parse().map_err(|_| bad())?;
    let mut frac = 0u32;
    if !frac_part.is_empty() {
        frac = frac_part.parse().map_err(|_| bad())?;
        frac *= 10u32.pow((places - frac_part.len()) as u32);
    }
    Ok(int * scale + frac)
}

fn validate_shape(rows: &[TableRow]) -> Result<(), TableError> {
    let mut prev_even: Option<u32> = None;
    let mut prev_odd: Option<u32> = None;
    for (i, row) in rows.iter().enumerate() {
        if row.q_lo >= row.q_hi {
            return Err(TableError::Shape { index: i });
        }
        if i + 1 < rows.len() && row.q_hi != rows[i + 1].q_lo {
            return Err(TableError::Gap { index: i });
        }
        // odd entries exist exactly from the odd table start
        if row.odd.is_some() != (row.q_hi > ODD_TABLE_START) {
            return Err(TableError::Shape { index: i });
        }
        if row.even.is_none() {
            return Err(TableError::Shape { index: i });
        }
        for (prev, cur) in [
            (&mut prev_even, row.even),
            (&mut prev_odd, row.odd),
        ] {
            if let Some(e) = cur {
                if prev.map_or(false, |p| e.c_milli < p) {
                    return Err(TableError::Shape { index: i });
                }
                *prev = Some(e.c_milli);
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

/// Serialize rows deterministically. CSV uses the printed column layout
/// with "--" for absent entries; JSON carries the same fields as strings.
pub fn emit_table(rows: &[TableRow], format: TableFormat) -> Result<String, TableError> {
    validate_shape(rows)?;
    match format {
        TableFormat::Csv => {
            let mut out = String::from("q0,q1,c_even,x_even,c_odd,x_odd\n");
            for row in rows {
                let cell = |e: Option<ParityEntry>| match e {
                    Some(e) => (format_c(e.c_milli), format_lgx(e.log10_x_centi)),
                    None => ("--".into(), "--".into()),
                };
                let (ce, xe) = cell(row.even);
                let (co, xo) = cell(row.odd);
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    format_q(row.q_lo),
                    format_q(row.q_hi),
                    ce,
                    xe,
                    co,
                    xo
                ));
            }
            Ok(out)
        }
        TableFormat::Json => {
            let entry_json = |e: Option<ParityEntry>| match e {
                Some(e) => serde_json::json!({
                    "c": format_c(e.c_milli),
                    "log10_x": format_lgx(e.log10_x_centi),
                }),
                None => serde_json::Value::Null,
            };
            let rows_json: Vec<_> = rows
                .iter()
                .map(|row| {
                    serde_json::json!({
                        "q0": format_q(row.q_lo),
                        "q1": format_q(row.q_hi),
                        "even": entry_json(row.even),
                        "odd": entry_json(row.odd),
                    })
                })
                .collect();
            let doc = serde_json::json!({ "rows": rows_json });
            Ok(format!("{:#}\n", doc))
        }
    }
}

/// Parse either serialization back into rows; inverse of `emit_table`.
pub fn parse_table(text: &str, format: TableFormat) -> Result<Vec<TableRow>, TableError> {
    let rows = match format {
        TableFormat::Csv => {
            let mut lines = text.lines();
            let header = lines.next().ok_or_else(|| TableError::Parse("empty input".into()))?;
            if header.trim() != "q0,q1,c_even,x_even,c_odd,x_odd" {
                return Err(TableError::Parse(format!("unexpected header {header:?}")));
            }
            let mut rows = Vec::new();
            for line in lines {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let cols: Vec<&str> = line.split(',').collect();
                if cols.len() != 6 {
                    return Err(TableError::Parse(format!("expected 6 columns in {line:?}")));
                }
                let entry_from = |c: &str, x: &str| -> Result<Option<ParityEntry>, TableError> {
                    match (c, x) {
                        ("--", "--") => Ok(None),
                        ("--", _) | (_, "--") => {
                            Err(TableError::Parse(format!("half-absent entry in {line:?}")))
                        }
                        _ => Ok(Some(ParityEntry {
                            c_milli: parse_scaled(c, 1000, "c")?,
                            log10_x_centi: parse_scaled(x, 100, "log10 x")?,
                        })),
                    }
                };
                rows.push(TableRow {
                    q_lo: parse_q(cols[0])?,
                    q_hi: parse_q(cols[1])?,
                    even: entry_from(cols[2], cols[3])?,
                    odd: entry_from(cols[4], cols[5])?,
                });
            }
            rows
        }
        TableFormat::Json => {
            let doc: serde_json::Value = serde_json::from_str(text)
                .map_err(|e| TableError::Parse(e.to_string()))?;
            let rows_json = doc
                .get("rows")
                .and_then(|r| r.as_array())
                .ok_or_else(|| TableError::Parse("missing rows array".into()))?;
            let mut rows = Vec::new();
            for rj in rows_json {
                let field = |k: &str| -> Result<&str, TableError> {
                    rj.get(k)
                        .and_then(|v| v.as_str())
                        .ok_or_else(|| TableError::Parse(format!("missing field {k}")))
                };
                let entry_from = |v: Option<&serde_json::Value>| -> Result<Option<ParityEntry>, TableError> {
                    match v {
                        None | Some(serde_json::Value::Null) => Ok(None),
                        Some(obj) => {
                            let get = |k: &str| -> Result<&str, TableError> {
                                obj.get(k).and_then(|v| v.as_str()).ok_or_else(|| {
                                    TableError::Parse(format!("missing entry field {k}"))
                                })
                            };
                            Ok(Some(ParityEntry {
                                c_milli: parse_scaled(get("c")?, 1000, "c")?,
                                log10_x_centi: parse_scaled(get("log10_x")?, 100, "log10 x")?,
                            }))
                        }
                    }
                };
                rows.push(TableRow {
                    q_lo: parse_q(field("q0")?)?,
                    q_hi: parse_q(field("q1")?)?,
                    even: entry_from(rj.get("even"))?,
                    odd: entry_from(rj.get("odd"))?,
                });
            }
            rows
        }
    };
    validate_shape(&rows)?;
    Ok(rows)
}
