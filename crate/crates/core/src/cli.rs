//! Command-line front end. Every subcommand is a thin adapter over the
//! library; exit codes are 0 (success), 1 (domain error) and 2 (usage).

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::census;
use crate::cusp::{self, CuspShape, KnotGeom};
use crate::diagram::{gl_signature, parse_fixture, parse_pd, seifert_signature, DiagramCode};
use crate::geodesic::{self, GeodesicRecord};
use crate::torus;
use crate::twistfam::{self, TwistSpec};

#[derive(Debug, Parser)]
#[command(name = "knotslope", version, about = "Knot signatures and cusp slope invariants")]
pub struct Cli {
    /// Decimal places for real-valued output.
    #[arg(long, global = true, default_value_t = 4)]
    pub digits: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gl,
    Seifert,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Natural slope Re(λ/μ) of a cusp.
    Slope {
        #[arg(long, allow_hyphen_values = true)]
        longitude: f64,
        /// Meridian as a+bi.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        meridian: Complex64,
    },
    /// Length |pλ + qμ| of the slope q/p.
    Siglen {
        #[arg(long, allow_hyphen_values = true)]
        longitude: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        meridian: Complex64,
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
    },
    /// Interval containing every exceptional slope q/p for fixed p.
    Window {
        #[arg(long, allow_hyphen_values = true)]
        slope: f64,
        #[arg(long, default_value_t = 1)]
        p: i64,
    },
    /// Genus, 4-ball genus and surgery bounds from cusp geometry.
    Bounds {
        #[arg(long, allow_hyphen_values = true)]
        longitude: f64,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        meridian: Complex64,
        #[arg(long)]
        volume: f64,
        #[arg(long)]
        inj: f64,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<i64>,
        #[arg(long, default_value_t = 0.3)]
        c1: f64,
        /// Surgery denominator for the hyperbolicity certificate.
        #[arg(long, allow_hyphen_values = true, requires = "q")]
        p: Option<i64>,
        #[arg(long, allow_hyphen_values = true, requires = "p")]
        q: Option<i64>,
        /// Treat validation warnings as errors.
        #[arg(long)]
        strict: bool,
    },
    /// Signatures of PD codes: a fixture file (name<TAB>pd per line), or
    /// one PD code per line. Use - for stdin.
    Signature {
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Signature correction κ(p, q).
    #[command(allow_negative_numbers = true)]
    Kappa { p: i64, q: i64 },
    /// Compare −pq/2 − κ(p,q) with both diagram pipelines.
    TorusCheck {
        #[arg(long, default_value_t = 60)]
        max_pq: i64,
    },
    /// Twisting parameter of a complex length.
    Tw {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, allow_hyphen_values = true)]
        im: f64,
    },
    /// slope/2 − Σ κ(tw(γ)) over short odd geodesics.
    CorrectSlope {
        #[arg(long, allow_hyphen_values = true)]
        slope: f64,
        /// Geodesic records re±imi:parity[:r], one per line or ;-separated.
        #[arg(long)]
        geodesics: String,
        #[arg(long, default_value_t = 0.7)]
        epsilon: f64,
        #[arg(long, default_value_t = geodesic::DEFAULT_MARGULIS)]
        margulis: f64,
    },
    /// Signatures of a twist family against the predicted values.
    TwistVerify {
        /// Twist spec (JSON).
        #[arg(long)]
        spec: String,
        /// q-vectors: `a..b` for one region, or `1,2;3,4` listing vectors.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Ingest a census CSV, derive statistics and write plot data.
    CensusStats {
        #[arg(long)]
        input: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        strict: bool,
    },
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|_| format!("expected a+bi, got {s:?}"))
}

/// Fixed-point formatting without negative zero.
pub fn fmt_real(x: f64, digits: usize) -> String {
    let s = format!("{x:.digits$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

/// Parses `a..b` (inclusive, one region) or `;`-separated `,`-lists.
pub fn parse_q_range(s: &str) -> Result<Vec<Vec<i64>>, String> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
        return Ok((a..=b).map(|q| vec![q]).collect());
    }
    s.split(';')
        .filter(|v| !v.trim().is_empty())
        .map(|v| {
            v.split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad q value {t:?}")))
                .collect()
        })
        .collect()
}

fn read_diagrams(text: &str) -> Result<Vec<(String, DiagramCode)>, String> {
    if text.lines().any(|l| l.contains('\t')) {
        return parse_fixture(text).map_err(|(line, e)| format!("line {line}: {e}"));
    }
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| {
            parse_pd(l)
                .map(|d| (format!("line{}", i + 1), d))
                .map_err(|e| format!("line {}: {e}", i + 1))
        })
        .collect()
}

fn geom(
    longitude: f64,
    meridian: Complex64,
    volume: f64,
    inj: f64,
    sigma: Option<i64>,
) -> Result<KnotGeom, String> {
    let c = CuspShape::new(longitude, meridian).map_err(|e| e.to_string())?;
    KnotGeom::new(c, volume, inj, sigma).map_err(|e| e.to_string())
}

/// Runs one invocation; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, String> {
    let d = cli.digits;
    let io = |e: io::Error| e.to_string();
    match &cli.command {
        Command::Slope {
            longitude,
            meridian,
        } => {
            let c = CuspShape::new(*longitude, *meridian).map_err(|e| e.to_string())?;
            for w in c.warnings() {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            writeln!(out, "{}", fmt_real(cusp::natural_slope(&c), d)).map_err(io)?;
        }
        Command::Siglen {
            longitude,
            meridian,
            p,
            q,
        } => {
            let c = CuspShape::new(*longitude, *meridian).map_err(|e| e.to_string())?;
            let l = cusp::slope_length(&c, *p, *q).map_err(|e| e.to_string())?;
            writeln!(out, "{}", fmt_real(l, d)).map_err(io)?;
        }
        Command::Window { slope, p } => {
            let w = cusp::exceptional_window(*slope, *p).map_err(|e| e.to_string())?;
            writeln!(out, "{} {}", fmt_real(w.lo, d), fmt_real(w.hi, d)).map_err(io)?;
        }
        Command::Bounds {
            longitude,
            meridian,
            volume,
            inj,
            sigma,
            c1,
            p,
            q,
            strict,
        } => {
            let g = geom(*longitude, *meridian, *volume, *inj, *sigma)?;
            for w in g.check(*strict).map_err(|e| e.to_string())? {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            let s = g.slope();
            writeln!(out, "slope {}", fmt_real(s, d)).map_err(io)?;
            writeln!(out, "genus_lower_bound {}", fmt_real(cusp::genus_lower_bound(s), d))
                .map_err(io)?;
            writeln!(out, "genus_lower_bound_int {}", cusp::genus_lower_bound_int(s)).map_err(io)?;
            writeln!(out, "g4_lower_bound {}", fmt_real(cusp::g4_lower_bound(&g, *c1), d))
                .map_err(io)?;
            writeln!(out, "closest_even {}", cusp::closest_even_integer(s)).map_err(io)?;
            if sigma.is_some() {
                let c = cusp::c1_statistic(&g).map_err(|e| e.to_string())?;
                writeln!(out, "c1_statistic {}", fmt_real(c, d)).map_err(io)?;
            }
            if let (Some(p), Some(q)) = (p, q) {
                let ok = cusp::surgery_hyperbolic_certificate(&g, *p, *q, *c1)
                    .map_err(|e| e.to_string())?;
                writeln!(out, "hyperbolic_certificate {ok}").map_err(io)?;
            }
        }
        Command::Signature { input, method } => {
            let knots = read_diagrams(&read_input(input)?)?;
            let mut mismatches = 0;
            for (name, dgm) in &knots {
                let gl = || gl_signature(dgm);
                let sf = || seifert_signature(dgm).map_err(|e| format!("{name}: {e}"));
                match method {
                    Method::Gl => writeln!(out, "{name}\t{}", gl()).map_err(io)?,
                    Method::Seifert => writeln!(out, "{name}\t{}", sf()?).map_err(io)?,
                    Method::Both => {
                        let (a, b) = (gl(), sf()?);
                        writeln!(out, "{name}\t{a}\t{b}").map_err(io)?;
                        if a != b {
                            mismatches += 1;
                        }
                    }
                }
            }
            if mismatches > 0 {
                return Err(format!("{mismatches} pipeline mismatches"));
            }
        }
        Command::Kappa { p, q } => {
            writeln!(out, "{}", torus::kappa(*p, *q)).map_err(io)?;
        }
        Command::TorusCheck { max_pq } => {
            let (checked, bad) = torus::oracle_check(*max_pq).map_err(|e| e.to_string())?;
            writeln!(err, "checked {checked} pairs").map_err(io)?;
            for m in &bad {
                writeln!(
                    err,
                    "T({},{}): formula {} gl {} seifert {}",
                    m.p, m.q, m.formula, m.gl, m.seifert
                )
                .map_err(io)?;
            }
            if bad.is_empty() {
                writeln!(out, "OK 0 mismatches").map_err(io)?;
            } else {
                writeln!(out, "FAIL {} mismatches", bad.len()).map_err(io)?;
                return Ok(1);
            }
        }
        Command::Tw { re, im } => {
            let t = geodesic::twisting_parameter(Complex64::new(*re, *im))
                .map_err(|e| e.to_string())?;
            writeln!(out, "{} {}", t.p, t.q).map_err(io)?;
        }
        Command::CorrectSlope {
            slope,
            geodesics,
            epsilon,
            margulis,
        } => {
            let text = read_input(geodesics)?;
            let geos: Vec<GeodesicRecord> = text
                .split(|c| c == '\n' || c == ';')
                .map(str::trim)
                .filter(|t| !t.is_empty() && !t.starts_with('#'))
                .map(|t| t.parse().map_err(|e: geodesic::GeodesicError| e.to_string()))
                .collect::<Result<_, _>>()?;
            if let Some(w) = geodesic::epsilon_warning(*epsilon, *margulis) {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            let est = geodesic::corrected_slope_estimate(*slope, &geos, *epsilon)
                .map_err(|e| e.to_string())?;
            writeln!(out, "{}", fmt_real(est, d)).map_err(io)?;
        }
        Command::TwistVerify { spec, q } => {
            let spec = TwistSpec::from_json(&read_input(spec)?).map_err(|e| e.to_string())?;
            let qs = parse_q_range(q)?;
            let rows = twistfam::family_report(&spec, &qs).map_err(|e| e.to_string())?;
            writeln!(out, "q\tcrossings\tsignature\tpredicted\tresidual").map_err(io)?;
            for r in rows {
                let qv: Vec<String> = r.q.iter().map(|x| x.to_string()).collect();
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}",
                    qv.join(","),
                    r.crossings,
                    r.signature,
                    r.predicted,
                    r.residual
                )
                .map_err(io)?;
            }
        }
        Command::CensusStats { input, out: dir, strict } => {
            let ing = if input == "-" {
                census::ingest_reader(read_input(input)?.as_bytes())
            } else {
                census::ingest(Path::new(input))
            }
            .map_err(|e| e.to_string())?;
            for w in &ing.warnings {
                writeln!(err, "warning: {w}").map_err(io)?;
            }
            if *strict && !ing.warnings.is_empty() {
                return Err(format!("{} validation warnings (strict mode)", ing.warnings.len()));
            }
            let rep = census::derive(&ing.rows);
            let files = census::emit(&rep, dir).map_err(|e| e.to_string())?;
            let a = &rep.aggregates;
            let opt = |x: Option<f64>| x.map_or("n/a".to_string(), |v| fmt_real(v, d));
            writeln!(out, "rows {}", a.rows).map_err(io)?;
            writeln!(out, "max_c1 {}", opt(a.max_c1)).map_err(io)?;
            writeln!(out, "mean_c1 {}", opt(a.mean_c1)).map_err(io)?;
            writeln!(out, "pearson_sigma_slope {}", opt(a.pearson_sigma_slope)).map_err(io)?;
            writeln!(out, "envelope_fraction {}", opt(a.envelope_fraction)).map_err(io)?;
            writeln!(
                out,
                "sign_agreement {} ({} selected)",
                opt(a.sign_agreement),
                a.sign_agreement_selected
            )
            .map_err(io)?;
            writeln!(out, "wrote {} {}", files.csv.display(), files.json.display()).map_err(io)?;
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let code = run(
            std::iter::once("knotslope").chain(args.iter().copied()),
            &mut o,
            &mut e,
        );
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_real(-0.00001, 4), "0.0000");
        assert_eq!(fmt_real(-1.5, 2), "-1.50");
    }

    #[test]
    fn q_ranges() {
        assert_eq!(parse_q_range("1..3").unwrap(), vec![vec![1], vec![2], vec![3]]);
        assert_eq!(parse_q_range("-1..0").unwrap(), vec![vec![-1], vec![0]]);
        assert_eq!(parse_q_range("1,2;3,4").unwrap(), vec![vec![1, 2], vec![3, 4]]);
        assert!(parse_q_range("x..2").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["kappa", "2", "3"]), (0, "-1\n".into(), String::new()));
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["tw", "--re", "0", "--im", "1"]).0, 1);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
