//! Command-line front end: reproducible runs of the moment, density,
//! closed-form, recurrence, Monte Carlo, and asymptotic-study pipelines.

mod cache;
mod output;

use cache::{cache_key, Cache};
use clap::{Parser, Subcommand, ValueEnum};
use output::{csv_row, Tagged};
use rug::ops::Pow;
use rug::Rational;
use sepkit::asymptotics::{
    log_ratio_study, ratio_study_alpha, rebit_loglog_study, unit_slope_study, QSource, StudyResult,
};
use sepkit::closedforms::{
    concise_q_exact, concise_q_prec, g1_exact, g1_prec, m_count, parameter_set,
};
use sepkit::density::{estimate_probability, recommended_precision, SupportInterval};
use sepkit::moments::{moment_sequence, pt_moment_hs};
use sepkit::montecarlo::{mc_estimate, Field};
use sepkit::numerics::{rational_from_string, rationalize};
use sepkit::recurrence::{
    fit_ansatz, g2_exact_points, guess_first_order, q_from_recurrence, DifferenceEquation,
};
use sepkit::PrecReal;
use serde_json::json;
use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(name = "sepkit", version, about = "Determinantal separability probabilities of generalized two-qubit states")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for commands that support both.
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Directory for the result cache (overrides SEPKIT_CACHE_DIR).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Optional key=value config file; flags override file entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact determinantal moments ⟨D^n⟩ (or PT-determinant moments).
    Moments {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Rational α, e.g. "1", "1/2".
        #[arg(long)]
        alpha: String,
        /// Number of moments (orders 0..count).
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// "d" for ⟨(|ρ^PT|−|ρ|)^n⟩, "pt" for ⟨|ρ^PT|^n⟩ (k=0 measure).
        #[arg(long, default_value = "d")]
        kind: String,
    },
    /// Density-route probability estimate from exact moments.
    Estimate {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        alpha: String,
        /// Truncation degree (number of Legendre terms).
        #[arg(long, default_value_t = 400)]
        degree: usize,
        /// Working decimal precision (default: degree-derived recommendation).
        #[arg(long)]
        precision: Option<u32>,
        /// Support interval "a,b" (rationals).
        #[arg(long)]
        support: Option<String>,
        /// Tail threshold c in Prob(D > c).
        #[arg(long, default_value = "0")]
        threshold: String,
    },
    /// Closed-form Q(k,α) via the concise telescoping formulas or the
    /// difference-equation route.
    ClosedForm {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value = "recurrence")]
        method: String,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// The Pochhammer-ratio prefactor G₁ᵏ(α).
    G1 {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 40)]
        digits: u32,
    },
    /// Upper and lower hypergeometric parameter sets for a given k.
    Params {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Exact Q(k,α) by the authoritative integer-α route.
    Q {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        alpha: String,
    },
    /// Guess a first-order difference equation from an exact sequence
    /// (CSV lines "alpha,value" with rational values; "-" reads stdin).
    Guess {
        #[arg(long)]
        input: String,
        #[arg(long, default_value_t = 19)]
        max_degree: usize,
    },
    /// Fit the structure-constrained difference equation for k = −1..4.
    FitAnsatz {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Ginibre Monte Carlo estimate.
    Mc {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Asymptotic studies; CSV table on stdout, JSON fit summary on stderr.
    Study {
        /// ratio | rebit | logratio | unitslope
        name: String,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i64,
        #[arg(long, default_value_t = 101)]
        alpha_max: i64,
        #[arg(long, default_value_t = 200)]
        k_max: i64,
        /// unitslope probability source: exact | density | mc
        #[arg(long, default_value = "exact")]
        source: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value_t = 200)]
        degree: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "complex")]
        field: String,
    },
    /// Reconstruct the exact rational behind a decimal approximation.
    Rationalize {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        /// How many of the given digits are trusted.
        #[arg(long)]
        digits: u32,
        #[arg(long, default_value_t = 1_000_000)]
        max_den: u64,
    },
    /// Plot data emission: raw Q(k,α) table, its log, or the rebit dual plot.
    Figure {
        /// raw | log | dual
        name: String,
        #[arg(long, default_value_t = 10)]
        alpha_max: i64,
        #[arg(long, default_value_t = 200)]
        k_max: i64,
    },
}

enum CliError {
    Usage(String),
    Compute(String),
}

impl From<sepkit::Error> for CliError {
    fn from(e: sepkit::Error) -> Self {
        CliError::Compute(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => {}
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {}", msg);
            std::process::exit(2);
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {}", msg);
            std::process::exit(1);
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    rational_from_string(s).map_err(|e| CliError::Usage(e.to_string()))
}

fn parse_integer_alpha(s: &str) -> Result<i64, CliError> {
    let q = parse_rational(s)?;
    if !q.is_integer() {
        return Err(CliError::Usage(format!("alpha = {} must be an integer here", q)));
    }
    q.numer().to_i64().ok_or_else(|| CliError::Usage("alpha out of range".into()))
}

fn read_config(path: Option<&PathBuf>) -> Result<HashMap<String, String>, CliError> {
    let mut map = HashMap::new();
    if let Some(p) = path {
        let text = std::fs::read_to_string(p)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {}", p.display(), e)))?;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("bad config line {:?}", line)))?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
    }
    Ok(map)
}

struct Out {
    sink: Box<dyn Write>,
}

impl Out {
    fn new(path: Option<&PathBuf>) -> Result<Self, CliError> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(
                std::fs::File::create(p)
                    .map_err(|e| CliError::Usage(format!("cannot open {}: {}", p.display(), e)))?,
            ),
            None => Box::new(std::io::stdout()),
        };
        Ok(Out { sink })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.sink, "{}", s).map_err(|e| CliError::Compute(e.to_string()))
    }
}

fn emit_scalar(out: &mut Out, format: Format, v: &Tagged) -> Result<(), CliError> {
    match format {
        Format::Json => out.line(&v.json().to_string()),
        Format::Csv => out.line(&v.plain()),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = read_config(cli.config.as_ref())?;
    let format = cli.format.unwrap_or(match config.get("format").map(String::as_str) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    });
    let cache_dir = cli
        .cache_dir
        .clone()
        .or_else(|| config.get("cache-dir").map(PathBuf::from));
    let cache = Cache::resolve(cache_dir.as_deref());
    let mut out = Out::new(cli.out.as_ref())?;

    match cli.cmd {
        Cmd::Moments { k, alpha, count, kind } => {
            let alpha = parse_rational(&alpha)?;
            out.line(&csv_row(&["n".into(), "value".into(), "tag".into()]))?;
            match kind.as_str() {
                "d" => {
                    let mu = moment_sequence(k, &alpha, count)?;
                    for (n, v) in mu.values.iter().enumerate() {
                        let (cell, tag) = Tagged::Exact(v.clone()).csv_cells();
                        out.line(&csv_row(&[n.to_string(), cell, tag]))?;
                    }
                }
                "pt" => {
                    for n in 0..=count {
                        let v = pt_moment_hs(&alpha, n)?;
                        let (cell, tag) = Tagged::Exact(v).csv_cells();
                        out.line(&csv_row(&[n.to_string(), cell, tag]))?;
                    }
                }
                other => return Err(CliError::Usage(format!("unknown kind {:?} (d|pt)", other))),
            }
            Ok(())
        }
        Cmd::Estimate { k, alpha, degree, precision, support, threshold } => {
            let alpha_q = parse_rational(&alpha)?;
            let threshold_q = parse_rational(&threshold)?;
            let support_iv = match support.as_deref().or(config.get("support").map(String::as_str)) {
                Some(s) => {
                    let (a, b) = s
                        .split_once(',')
                        .ok_or_else(|| CliError::Usage("support must be \"a,b\"".into()))?;
                    SupportInterval::new(parse_rational(a)?, parse_rational(b)?)?
                }
                None => SupportInterval::default(),
            };
            let precision = precision
                .or_else(|| config.get("precision").and_then(|s| s.parse().ok()))
                .unwrap_or_else(|| recommended_precision(degree, 30));
            if precision < 30 {
                return Err(CliError::Usage("precision must be at least 30".into()));
            }
            let key = cache_key(
                "estimate",
                &[
                    ("k", k.to_string()),
                    ("alpha", alpha_q.to_string()),
                    ("degree", degree.to_string()),
                    ("precision", precision.to_string()),
                    ("support", format!("{}_{}", support_iv.a, support_iv.b)),
                    ("c", threshold_q.to_string()),
                ],
            );
            let payload = if let Some(entry) = cache.as_ref().and_then(|c| c.get(&key)) {
                entry.value
            } else {
                let est = estimate_probability(
                    k,
                    &alpha_q,
                    degree,
                    &support_iv,
                    Some(precision),
                    &threshold_q,
                )?;
                let v = est.value_with_truncation_margin();
                let payload = json!({
                    "k": k,
                    "alpha": alpha_q.to_string(),
                    "degree": degree,
                    "precision": precision,
                    "value": Tagged::from_prec(&v).json(),
                    "exact": est.exact_value.as_ref().map(|q| q.to_string()),
                });
                if let Some(c) = cache.as_ref() {
                    c.put(&key, payload.clone(), v.certified_digits())
                        .map_err(|e| CliError::Compute(format!("cache write failed: {}", e)))?;
                }
                payload
            };
            match format {
                Format::Json => out.line(&payload.to_string()),
                Format::Csv => {
                    let v = &payload["value"];
                    out.line(&csv_row(&["value".into(), "certified_digits".into()]))?;
                    out.line(&csv_row(&[
                        v["decimal"].as_str().unwrap_or_default().into(),
                        v["certified_digits"].to_string(),
                    ]))
                }
            }
        }
        Cmd::ClosedForm { k, alpha, method, digits } => {
            let alpha_q = parse_rational(&alpha)?;
            let value = match method.as_str() {
                "concise" => {
                    if alpha_q.is_integer() {
                        Tagged::Exact(concise_q_exact(
                            k,
                            parse_integer_alpha(&alpha)?,
                        )?)
                    } else {
                        Tagged::from_prec(&concise_q_prec(k, &alpha_q, digits)?)
                    }
                }
                "recurrence" => Tagged::Exact(q_from_recurrence(k, parse_integer_alpha(&alpha)?)?),
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown method {:?} (concise|recurrence)",
                        other
                    )))
                }
            };
            emit_scalar(&mut out, format, &value)
        }
        Cmd::G1 { k, alpha, digits } => {
            let alpha_q = parse_rational(&alpha)?;
            let value = if alpha_q.is_integer() {
                Tagged::Exact(g1_exact(k, parse_integer_alpha(&alpha)?)?)
            } else {
                Tagged::from_prec(&g1_prec(k, &alpha_q, digits)?)
            };
            emit_scalar(&mut out, format, &value)
        }
        Cmd::Params { k } => {
            let ps = parameter_set(k)?;
            let fmt_list = |params: &[sepkit::numerics::AffineParam]| {
                params.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")
            };
            match format {
                Format::Json => out.line(
                    &json!({
                        "k": k,
                        "upper": ps.upper.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "lower": ps.lower.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                        "m_count": m_count(k).ok(),
                    })
                    .to_string(),
                ),
                Format::Csv => {
                    out.line(&format!("upper: {}", fmt_list(&ps.upper)))?;
                    out.line(&format!("lower: {}", fmt_list(&ps.lower)))?;
                    if let Ok(m) = m_count(k) {
                        out.line(&format!("m_count: {}", m))?;
                    }
                    Ok(())
                }
            }
        }
        Cmd::Q { k, alpha } => {
            let alpha = parse_integer_alpha(&alpha)?;
            emit_scalar(&mut out, format, &Tagged::Exact(q_from_recurrence(k, alpha)?))
        }
        Cmd::Guess { input, max_degree } => {
            let text = if input == "-" {
                let mut buf = String::new();
                std::io::Read::read_to_string(&mut std::io::stdin(), &mut buf)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                buf
            } else {
                std::fs::read_to_string(&input)
                    .map_err(|e| CliError::Usage(format!("cannot read {}: {}", input, e)))?
            };
            let mut values = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') || line.starts_with("alpha") {
                    continue;
                }
                let (a, v) = line
                    .split_once(',')
                    .ok_or_else(|| CliError::Usage(format!("bad input line {:?}", line)))?;
                let a: i64 = a
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("bad alpha {:?}", a)))?;
                values.push((a, parse_rational(v.trim())?));
            }
            let eq = guess_first_order(&values, max_degree)?;
            out.line(&eq.to_json())
        }
        Cmd::FitAnsatz { k } => {
            let pts = g2_exact_points(k)?;
            let eq: DifferenceEquation = fit_ansatz(k, &pts[0..3], &pts[3..])?;
            out.line(&eq.to_json())
        }
        Cmd::Mc { k, field, samples, seed } => {
            let field: Field = field.parse()?;
            let est = mc_estimate(k, field, samples, seed)?;
            out.line(&serde_json::to_string(&est).unwrap())
        }
        Cmd::Study { name, k, alpha_max, k_max, source, alpha, degree, samples, seed, field } => {
            let study = match name.as_str() {
                "ratio" => ratio_study_alpha(k, alpha_max)?,
                "rebit" => rebit_loglog_study(k_max)?,
                "logratio" => log_ratio_study(k_max)?,
                "unitslope" => {
                    let src = match source.as_str() {
                        "exact" => QSource::ExactInitial,
                        "density" => QSource::Density { alpha: parse_rational(&alpha)?, degree },
                        "mc" => QSource::MonteCarlo { field: field.parse()?, samples, seed },
                        other => {
                            return Err(CliError::Usage(format!(
                                "unknown source {:?} (exact|density|mc)",
                                other
                            )))
                        }
                    };
                    unit_slope_study(k_max.min(40), &src)?
                }
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown study {:?} (ratio|rebit|logratio|unitslope)",
                        other
                    )))
                }
            };
            emit_study(&mut out, format, &study)
        }
        Cmd::Rationalize { value, digits, max_den } => {
            let v = parse_decimal(&value)?;
            let ball = PrecReal::from_rational(&v, digits + 10)
                .widen(&Rational::from((rug::Integer::from(1), rug::Integer::from(10).pow(digits))));
            let found = rationalize(&ball, &rug::Integer::from(max_den))?;
            match found {
                Some(q) => emit_scalar(&mut out, format, &Tagged::Exact(q)),
                None => Err(CliError::Compute(format!(
                    "no rational with denominator <= {} in the certified interval",
                    max_den
                ))),
            }
        }
        Cmd::Figure { name, alpha_max, k_max } => emit_figure(&mut out, &name, alpha_max, k_max),
    }
}

fn parse_decimal(s: &str) -> Result<Rational, CliError> {
    let t = s.trim();
    let (sign, t) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, t),
    };
    let (int_part, frac_part) = t.split_once('.').unwrap_or((t, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(CliError::Usage(format!("bad decimal {:?}", s)));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(CliError::Usage(format!("bad decimal {:?}", s)));
    }
    let digits = format!("{}{}", int_part, frac_part);
    let numer: rug::Integer = digits.parse().map_err(|_| CliError::Usage("bad decimal".into()))?;
    let denom = rug::Integer::from(10).pow(frac_part.len() as u32);
    Ok(Rational::from((numer * rug::Integer::from(sign), denom)))
}

fn emit_study(out: &mut Out, format: Format, study: &StudyResult) -> Result<(), CliError> {
    let fit_summary = study.fit.as_ref().map(|f| {
        json!({
            "slope": Tagged::from_prec(&f.slope).json(),
            "intercept": Tagged::from_prec(&f.intercept).json(),
            "r_squared": Tagged::from_prec(&f.r_squared).json(),
        })
    });
    let summary = json!({
        "study": study.name,
        "points": study.table.len(),
        "fit": fit_summary,
        "reference": Tagged::from_prec(&study.reference).json(),
        "headline": Tagged::from_prec(&study.headline).json(),
        "deviation": Tagged::from_prec(&study.deviation).json(),
    });
    match format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = study
                .table
                .iter()
                .map(|(x, y)| {
                    json!({ "x": Tagged::from_prec(x).json(), "y": Tagged::from_prec(y).json() })
                })
                .collect();
            out.line(&json!({ "summary": summary, "table": rows }).to_string())
        }
        Format::Csv => {
            out.line(&csv_row(&["x".into(), "y".into(), "certified_digits".into()]))?;
            for (x, y) in &study.table {
                let (ycell, ytag) = Tagged::from_prec(y).csv_cells();
                out.line(&csv_row(&[format!("{:.0}", x.to_f64()), ycell, ytag]))?;
            }
            eprintln!("{}", summary);
            Ok(())
        }
    }
}

fn emit_figure(out: &mut Out, name: &str, alpha_max: i64, k_max: i64) -> Result<(), CliError> {
    match name {
        "raw" | "log" => {
            if alpha_max < 1 {
                return Err(CliError::Usage("alpha_max must be >= 1".into()));
            }
            let ks: Vec<i64> = (-1..=4).collect();
            let mut header = vec!["alpha".to_string()];
            for k in &ks {
                header.push(format!("k={}", k));
                if name == "log" {
                    header.push(format!("k={}_certified_digits", k));
                }
            }
            out.line(&csv_row(&header))?;
            for a in 1..=alpha_max {
                let mut row = vec![a.to_string()];
                for k in &ks {
                    let q = q_from_recurrence(*k, a)?;
                    if name == "raw" {
                        row.push(q.to_string());
                    } else {
                        let l = PrecReal::from_rational(&q, 30)
                            .ln()
                            .map_err(|e| CliError::Compute(e.to_string()))?;
                        let (cell, tag) = Tagged::from_prec(&l).csv_cells();
                        row.push(cell);
                        row.push(tag);
                    }
                }
                out.line(&csv_row(&row))?;
            }
            Ok(())
        }
        "dual" => {
            let study = rebit_loglog_study(k_max.max(10))?;
            emit_study(out, Format::Csv, &study)
        }
        other => Err(CliError::Usage(format!("unknown figure {:?} (raw|log|dual)", other))),
    }
}
