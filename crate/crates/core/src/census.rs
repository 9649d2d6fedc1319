//! Census ingestion, derived statistics and plot-data emission.
//!
//! Input CSV (header required, column order free):
//!
//! ```text
//! name,crossings,signature,volume,inj_radius,meridian_re,meridian_im,longitude,geodesics,pd
//! ```
//!
//! `geodesics` is a `;`-separated list of `re±imi:parity[:r]` records and
//! `pd` an optional PD code. An optional `signless` column (`true`/`false`)
//! marks rows whose source lists `Re(μ)` without sign; such rows are kept
//! but left out of every aggregate that depends on the sign of the slope.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp::{self, CuspShape, KnotGeom};
use crate::diagram::{gl_signature, parse_pd, DiagramCode};
use crate::geodesic::GeodesicRecord;

pub const REQUIRED_COLUMNS: [&str; 10] = [
    "name",
    "crossings",
    "signature",
    "volume",
    "inj_radius",
    "meridian_re",
    "meridian_im",
    "longitude",
    "geodesics",
    "pd",
];

pub const DERIVED_COLUMNS: [&str; 11] = [
    "name",
    "crossings",
    "signature",
    "volume",
    "inj_radius",
    "slope",
    "residual",
    "c1",
    "sigma_hat",
    "normalized_residual",
    "signless",
];

pub const SCHEMA_VERSION: u32 = 1;
/// Width of the c₁ histogram bins.
pub const C1_BIN_WIDTH: f64 = 0.01;
/// Envelope `|2σ − slope| ≤ b·√vol + c` reported by default.
pub const ENVELOPE_B: f64 = 2.0;
pub const ENVELOPE_C: f64 = 2.0;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Csv { line: u64, msg: String },
    #[error("header: {0}")]
    Header(String),
    #[error("line {line}, column {column}: {msg} (value {value:?})")]
    Field {
        line: u64,
        column: &'static str,
        value: String,
        msg: String,
    },
}

impl CensusError {
    fn csv(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line()).unwrap_or(0);
        CensusError::Csv {
            line,
            msg: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusRow {
    pub name: String,
    pub crossings: u32,
    pub sigma: i64,
    pub volume: f64,
    pub inj: f64,
    pub meridian: Complex64,
    pub longitude: f64,
    pub geodesics: Vec<GeodesicRecord>,
    pub pd: Option<DiagramCode>,
    pub signless: bool,
}

impl CensusRow {
    pub fn geom(&self) -> KnotGeom {
        let cusp = CuspShape::new(self.longitude, self.meridian).expect("validated on ingest");
        KnotGeom::new(cusp, self.volume, self.inj, Some(self.sigma)).expect("validated on ingest")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IngestWarning {
    pub line: u64,
    pub name: String,
    pub message: String,
}

impl fmt::Display for IngestWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {} ({}): {}", self.line, self.name, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub rows: Vec<CensusRow>,
    pub warnings: Vec<IngestWarning>,
}

pub fn ingest(path: &Path) -> Result<Ingested, CensusError> {
    let file = fs::File::open(path).map_err(|source| CensusError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_reader(file)
}

pub fn ingest_reader<R: Read>(reader: R) -> Result<Ingested, CensusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers().map_err(CensusError::csv)?.clone();
    let mut index = BTreeMap::new();
    for (i, h) in header.iter().enumerate() {
        if index.insert(h.trim().to_string(), i).is_some() {
            return Err(CensusError::Header(format!("duplicate column {h:?}")));
        }
    }
    let mut cols = [0usize; 10];
    for (slot, name) in cols.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = *index
            .get(name)
            .ok_or_else(|| CensusError::Header(format!("missing column {name:?}")))?;
    }
    let signless_col = index.get("signless").copied();

    let mut out = Ingested::default();
    for rec in rdr.records() {
        let rec = rec.map_err(CensusError::csv)?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let get = |k: usize| rec.get(cols[k]).unwrap_or("").trim();
        let field_err = |column: &'static str, value: &str, msg: String| CensusError::Field {
            line,
            column,
            value: value.to_string(),
            msg,
        };
        fn num<T: std::str::FromStr>(s: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            s.parse::<T>().map_err(|e| e.to_string())
        }

        let name = get(0).to_string();
        if name.is_empty() {
            return Err(field_err("name", "", "empty name".into()));
        }
        let crossings: u32 = num(get(1)).map_err(|m| field_err("crossings", get(1), m))?;
        if crossings < 3 {
            return Err(field_err("crossings", get(1), "must be at least 3".into()));
        }
        let sigma: i64 = num(get(2)).map_err(|m| field_err("signature", get(2), m))?;
        if sigma % 2 != 0 {
            return Err(field_err("signature", get(2), "knot signature must be even".into()));
        }
        let float = |k: usize, column: &'static str| -> Result<f64, CensusError> {
            let v: f64 = num(get(k)).map_err(|m| field_err(column, get(k), m))?;
            if !v.is_finite() {
                return Err(field_err(column, get(k), "not finite".into()));
            }
            Ok(v)
        };
        let volume = float(3, "volume")?;
        let inj = float(4, "inj_radius")?;
        let m_re = float(5, "meridian_re")?;
        let mut m_im = float(6, "meridian_im")?;
        let longitude = float(7, "longitude")?;

        let mut warn = |message: String| {
            out.warnings.push(IngestWarning {
                line,
                name: name.clone(),
                message,
            })
        };
        if m_im < 0.0 {
            warn(format!("Im(meridian) = {m_im} < 0; conjugated"));
            m_im = -m_im;
        }
        let meridian = Complex64::new(m_re, m_im);
        let cusp_shape = CuspShape::new(longitude, meridian)
            .map_err(|e| field_err("meridian_im", get(6), e.to_string()))?;
        let geom = KnotGeom::new(cusp_shape, volume, inj, Some(sigma))
            .map_err(|e| field_err("volume", get(3), e.to_string()))?;
        for w in geom.warnings() {
            warn(w.to_string());
        }

        let geodesics = if get(8).is_empty() {
            Vec::new()
        } else {
            get(8)
                .split(';')
                .map(|g| g.parse::<GeodesicRecord>())
                .collect::<Result<_, _>>()
                .map_err(|e| field_err("geodesics", get(8), e.to_string()))?
        };
        let pd = if get(9).is_empty() {
            None
        } else {
            let d = parse_pd(get(9)).map_err(|e| field_err("pd", get(9), e.to_string()))?;
            let s = gl_signature(&d);
            if s != sigma {
                warn(format!("signature column {sigma} but the diagram gives {s}"));
            }
            Some(d)
        };
        let signless = match signless_col.map(|c| rec.get(c).unwrap_or("").trim()) {
            None | Some("") | Some("false") | Some("0") | Some("no") => false,
            Some("true") | Some("1") | Some("yes") => true,
            Some(other) => return Err(field_err("signless", other, "expected true/false".into())),
        };
        out.rows.push(CensusRow {
            name,
            crossings,
            sigma,
            volume,
            inj,
            meridian,
            longitude,
            geodesics,
            pd,
            signless,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedRow {
    pub name: String,
    pub crossings: u32,
    pub signature: i64,
    pub volume: f64,
    pub inj_radius: f64,
    pub slope: f64,
    /// `2σ − slope`.
    pub residual: f64,
    pub c1: f64,
    pub sigma_hat: f64,
    /// `(2σ − slope)/√vol`.
    pub normalized_residual: f64,
    pub signless: bool,
}

impl DerivedRow {
    pub fn from_row(r: &CensusRow) -> DerivedRow {
        let g = r.geom();
        let slope = g.slope();
        let residual = 2.0 * r.sigma as f64 - slope;
        DerivedRow {
            name: r.name.clone(),
            crossings: r.crossings,
            signature: r.sigma,
            volume: r.volume,
            inj_radius: r.inj,
            slope,
            residual,
            c1: cusp::c1_statistic(&g).expect("signature present"),
            sigma_hat: cusp::normalized_signature(&g).expect("signature present"),
            normalized_residual: residual / r.volume.sqrt(),
            signless: r.signless,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingStats {
    pub crossings: u32,
    pub count: usize,
    pub max_c1: f64,
    pub mean_c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub rows: usize,
    /// Rows entering sign-dependent statistics (not signless).
    pub signed_rows: usize,
    pub max_c1: Option<f64>,
    pub mean_c1: Option<f64>,
    pub c1_by_crossing: Vec<CrossingStats>,
    pub c1_hist: Vec<HistBin>,
    /// Pearson correlation of σ against slope.
    pub pearson_sigma_slope: Option<f64>,
    /// Fraction with `|2σ − slope| ≤ 2√vol + 2`.
    pub envelope_fraction: Option<f64>,
    pub sign_agreement: Option<f64>,
    pub sign_agreement_selected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StatsReport {
    pub rows: Vec<DerivedRow>,
    pub aggregates: Aggregates,
}

pub fn derive(rows: &[CensusRow]) -> StatsReport {
    let mut derived: Vec<DerivedRow> = rows.par_iter().map(DerivedRow::from_row).collect();
    derived.sort_by(|a, b| a.name.cmp(&b.name).then(a.crossings.cmp(&b.crossings)));
    let aggregates = aggregate(&derived);
    StatsReport {
        rows: derived,
        aggregates,
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (mx, my) = (mean(xs)?, mean(ys)?);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

/// Fraction of rows with `|σ̂| > 1` whose σ has the sign of `Re(μ)`,
/// i.e. of the slope. `None` when nothing is selected.
pub fn sign_agreement(rows: &[DerivedRow]) -> (Option<f64>, usize) {
    let selected: Vec<&DerivedRow> = rows
        .iter()
        .filter(|r| !r.signless && r.sigma_hat.abs() > 1.0)
        .collect();
    let agree = selected
        .iter()
        .filter(|r| r.signature.signum() as f64 == r.slope.signum() && r.slope != 0.0)
        .count();
    let n = selected.len();
    ((n > 0).then(|| agree as f64 / n as f64), n)
}

/// Aggregates over already-derived rows, in their given order.
pub fn aggregate(rows: &[DerivedRow]) -> Aggregates {
    let signed: Vec<&DerivedRow> = rows.iter().filter(|r| !r.signless).collect();
    let c1: Vec<f64> = signed.iter().map(|r| r.c1).collect();

    let mut by_crossing: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
    for r in &signed {
        by_crossing.entry(r.crossings).or_default().push(r.c1);
    }
    let c1_by_crossing = by_crossing
        .into_iter()
        .map(|(crossings, v)| CrossingStats {
            crossings,
            count: v.len(),
            max_c1: v.iter().copied().fold(f64::MIN, f64::max),
            mean_c1: mean(&v).unwrap(),
        })
        .collect();

    let max_c1 = c1.iter().copied().reduce(f64::max);
    let c1_hist = match max_c1 {
        None => Vec::new(),
        Some(m) => {
            let bins = ((m / C1_BIN_WIDTH).floor() as usize + 1).max(1);
            let mut counts = vec![0usize; bins];
            for &x in &c1 {
                counts[((x / C1_BIN_WIDTH).floor() as usize).min(bins - 1)] += 1;
            }
            counts
                .into_iter()
                .enumerate()
                .map(|(i, count)| HistBin {
                    lo: i as f64 * C1_BIN_WIDTH,
                    hi: (i + 1) as f64 * C1_BIN_WIDTH,
                    count,
                })
                .collect()
        }
    };

    let sig: Vec<f64> = signed.iter().map(|r| r.signature as f64).collect();
    let slope: Vec<f64> = signed.iter().map(|r| r.slope).collect();
    let inside = signed
        .iter()
        .filter(|r| r.residual.abs() <= ENVELOPE_B * r.volume.sqrt() + ENVELOPE_C)
        .count();
    let (agreement, selected) = sign_agreement(rows);
    Aggregates {
        rows: rows.len(),
        signed_rows: signed.len(),
        max_c1,
        mean_c1: mean(&c1),
        c1_by_crossing,
        c1_hist,
        pearson_sigma_slope: pearson(&sig, &slope),
        envelope_fraction: (!signed.is_empty()).then(|| inside as f64 / signed.len() as f64),
        sign_agreement: agreement,
        sign_agreement_selected: selected,
    }
}

/// Derived rows as CSV; floats in shortest round-trip form, LF endings.
pub fn render_csv(report: &StatsReport) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(DERIVED_COLUMNS).expect("in-memory write");
    for r in &report.rows {
        w.write_record([
            r.name.clone(),
            r.crossings.to_string(),
            r.signature.to_string(),
            r.volume.to_string(),
            r.inj_radius.to_string(),
            r.slope.to_string(),
            r.residual.to_string(),
            r.c1.to_string(),
            r.sigma_hat.to_string(),
            r.normalized_residual.to_string(),
            r.signless.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Reads a CSV written by [`render_csv`].
pub fn read_derived<R: Read>(reader: R) -> Result<Vec<DerivedRow>, CensusError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header: Vec<String> = rdr
        .headers()
        .map_err(CensusError::csv)?
        .iter()
        .map(str::to_string)
        .collect();
    if header != DERIVED_COLUMNS {
        return Err(CensusError::Header(format!(
            "expected {}",
            DERIVED_COLUMNS.join(",")
        )));
    }
    rdr.deserialize()
        .map(|r| r.map_err(CensusError::csv))
        .collect()
}

#[derive(Serialize)]
struct ScatterPoint<'a> {
    name: &'a str,
    slope: f64,
    signature: i64,
    volume: f64,
}

#[derive(Serialize)]
struct Summary {
    rows: usize,
    signed_rows: usize,
    max_c1: Option<f64>,
    mean_c1: Option<f64>,
    pearson_sigma_slope: Option<f64>,
    envelope: Envelope,
    sign_agreement: Option<f64>,
    sign_agreement_selected: usize,
}

#[derive(Serialize)]
struct Envelope {
    b: f64,
    c: f64,
    fraction: Option<f64>,
}

#[derive(Serialize)]
struct PlotData<'a> {
    schema_version: u32,
    c1_hist: &'a [HistBin],
    slope_vs_sig: Vec<ScatterPoint<'a>>,
    c1_by_crossing: &'a [CrossingStats],
    summary: Summary,
}

pub fn render_json(report: &StatsReport) -> String {
    let a = &report.aggregates;
    let data = PlotData {
        schema_version: SCHEMA_VERSION,
        c1_hist: &a.c1_hist,
        slope_vs_sig: report
            .rows
            .iter()
            .filter(|r| !r.signless)
            .map(|r| ScatterPoint {
                name: &r.name,
                slope: r.slope,
                signature: r.signature,
                volume: r.volume,
            })
            .collect(),
        c1_by_crossing: &a.c1_by_crossing,
        summary: Summary {
            rows: a.rows,
            signed_rows: a.signed_rows,
            max_c1: a.max_c1,
            mean_c1: a.mean_c1,
            pearson_sigma_slope: a.pearson_sigma_slope,
            envelope: Envelope {
                b: ENVELOPE_B,
                c: ENVELOPE_C,
                fraction: a.envelope_fraction,
            },
            sign_agreement: a.sign_agreement,
            sign_agreement_selected: a.sign_agreement_selected,
        },
    };
    let mut s = serde_json::to_string_pretty(&data).expect("plain data serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
}

/// Writes `derived.csv` and `plot_data.json` into `dir`.
pub fn emit(report: &StatsReport, dir: &Path) -> Result<EmittedFiles, CensusError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CensusError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let files = EmittedFiles {
        csv: dir.join("derived.csv"),
        json: dir.join("plot_data.json"),
    };
    fs::write(&files.csv, render_csv(report)).map_err(io(&files.csv))?;
    fs::write(&files.json, render_json(report)).map_err(io(&files.json))?;
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str =
        "name,crossings,signature,volume,inj_radius,meridian_re,meridian_im,longitude,geodesics,pd\n";

    #[test]
    fn header_only() {
        let ing = ingest_reader(HEADER.as_bytes()).unwrap();
        assert!(ing.rows.is_empty() && ing.warnings.is_empty());
        let rep = derive(&ing.rows);
        assert_eq!(render_csv(&rep), DERIVED_COLUMNS.join(",") + "\n");
        let json: serde_json::Value = serde_json::from_str(&render_json(&rep)).unwrap();
        assert_eq!(json["schema_version"], 1);
        assert_eq!(json["c1_hist"].as_array().unwrap().len(), 0);
    }

    #[test]
    fn missing_column() {
        let err = ingest_reader("name,crossings\n".as_bytes()).unwrap_err();
        assert!(matches!(err, CensusError::Header(_)));
    }

    #[test]
    fn bad_field_reports_line() {
        let text = format!("{HEADER}x,5,-2,2.8,0.28,-0.7,0.9,4.4,,\ny,5,abc,2.8,0.28,-0.7,0.9,4.4,,\n");
        match ingest_reader(text.as_bytes()).unwrap_err() {
            CensusError::Field { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, "signature");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn conjugates_lower_half_plane() {
        let text = format!("{HEADER}x,5,-2,2.8,0.28,-0.7,-0.9,4.4,,\n");
        let ing = ingest_reader(text.as_bytes()).unwrap();
        assert_eq!(ing.rows[0].meridian, Complex64::new(-0.7, 0.9));
        assert!(ing.warnings[0].message.contains("conjugated"));
    }

    #[test]
    fn flat_row() {
        let text = format!("{HEADER}z,4,0,3.0,0.5,0.0,1.5,3.0,,\n");
        let rep = derive(&ingest_reader(text.as_bytes()).unwrap().rows);
        assert_eq!(rep.rows[0].c1, 0.0);
        assert_eq!(rep.rows[0].sigma_hat, 0.0);
    }

    #[test]
    fn agreement_counts_disagreement() {
        let mk = |name: &str, sigma: i64, slope: f64| DerivedRow {
            name: name.into(),
            crossings: 10,
            signature: sigma,
            volume: 4.0,
            inj_radius: 0.2,
            slope,
            residual: 0.0,
            c1: 0.0,
            sigma_hat: sigma as f64 / 2.0,
            normalized_residual: 0.0,
            signless: false,
        };
        assert_eq!(sign_agreement(&[]), (None, 0));
        assert_eq!(sign_agreement(&[mk("a", 0, 1.0)]), (None, 0));
        assert_eq!(sign_agreement(&[mk("a", -4, -8.0)]), (Some(1.0), 1));
        assert_eq!(sign_agreement(&[mk("a", -4, 8.0)]), (Some(0.0), 1));
        let mut s = mk("b", 4, -8.0);
        s.signless = true;
        assert_eq!(sign_agreement(&[s]), (None, 0));
    }

    #[test]
    fn pearson_basics() {
        assert_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]), Some(1.0));
        assert_eq!(pearson(&[1.0, 2.0], &[1.0, 1.0]), None);
        assert_eq!(pearson(&[1.0], &[1.0]), None);
    }
}
