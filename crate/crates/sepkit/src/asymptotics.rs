//! Asymptotic studies: the 27/64 ratio limit of Q(k,α) in α, the 16/27
//! log-ratio limit of the rebit total probability in k, the rebit
//! log(−log) slope, and the near-unit-slope study of k·R(k).

use crate::closedforms::rebit_total_prob;
use crate::density::{estimate_probability, recommended_precision, SupportInterval};
use crate::montecarlo::{mc_estimate, Field};
use crate::numerics::{linear_fit, LinearFit, PrecReal};
use crate::recurrence::{fitted_equation, g2_prefactor, initial_value};
use crate::{Error, Rational, Result};

/// Outcome of a study run: the data table, an OLS line fit (present whenever
/// the table has at least two points), and the relevant reference constant
/// with the observed deviation of the study's headline number from it.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub name: String,
    /// (x, y) pairs.
    pub table: Vec<(PrecReal, PrecReal)>,
    pub fit: Option<LinearFit>,
    /// Reference constant the study is compared against.
    pub reference: PrecReal,
    /// Headline number of the study (terminal ratio or fitted slope).
    pub headline: PrecReal,
    /// headline − reference.
    pub deviation: PrecReal,
}

fn finish(
    name: &str,
    table: Vec<(PrecReal, PrecReal)>,
    reference: PrecReal,
    headline: PrecReal,
) -> StudyResult {
    let fit = if table.len() >= 2 { linear_fit(&table).ok() } else { None };
    let deviation = headline.sub(&reference);
    StudyResult { name: name.to_string(), table, fit, reference, headline, deviation }
}

/// Exact Q(k,α) sequence for α = 1..alpha_max via the fitted difference
/// equation (single iteration pass, shared by the studies below).
fn q_sequence(k: i64, alpha_max: i64) -> Result<Vec<Rational>> {
    if alpha_max < 2 {
        return Err(Error::OutOfRange("alpha_max must be at least 2".into()));
    }
    let eq = fitted_equation(k)?;
    let s = eq.iterate((alpha_max - 1) as usize)?;
    s.into_iter()
        .enumerate()
        .map(|(j, v)| Ok(g2_prefactor(k, 1 + j as i64)? * v))
        .collect()
}

/// Successive ratios Q(k,α+1)/Q(k,α) for α = 1..alpha_max−1, compared with
/// the 27/64 limit. The headline value is the terminal ratio.
pub fn ratio_study_alpha(k: i64, alpha_max: i64) -> Result<StudyResult> {
    if !(-1..=4).contains(&k) {
        return Err(Error::OutOfRange(format!("k = {} (exact route covers -1..4)", k)));
    }
    if alpha_max < 10 {
        return Err(Error::OutOfRange("alpha_max must be at least 10".into()));
    }
    let digits = 30;
    let q = q_sequence(k, alpha_max)?;
    let table: Vec<(PrecReal, PrecReal)> = q
        .windows(2)
        .enumerate()
        .map(|(j, w)| {
            let ratio = Rational::from(&w[1] / &w[0]);
            (
                PrecReal::from_integer(1 + j as i64, digits),
                PrecReal::from_rational(&ratio, digits),
            )
        })
        .collect();
    let reference = PrecReal::from_rational(&Rational::from((27, 64)), digits);
    let headline = table.last().unwrap().1.clone();
    Ok(finish("ratio_alpha", table, reference, headline))
}

/// log(−log P^rebit_k) against k for k = 1..k_max at 50-digit precision;
/// the headline value is the fitted slope, referenced against log(16/27).
pub fn rebit_loglog_study(k_max: i64) -> Result<StudyResult> {
    if k_max < 10 {
        return Err(Error::OutOfRange("k_max must be at least 10".into()));
    }
    let digits = 50;
    let mut table = Vec::new();
    for k in 1..=k_max {
        let p = rebit_total_prob(k)?;
        let y = PrecReal::from_rational(&p, digits).ln()?.neg().ln()?;
        table.push((PrecReal::from_integer(k, digits), y));
    }
    let reference = PrecReal::from_rational(&Rational::from((16, 27)), digits).ln()?;
    let fit = linear_fit(&table)?;
    let headline = fit.slope.clone();
    let mut out = finish("rebit_loglog", table, reference, headline);
    out.fit = Some(fit);
    Ok(out)
}

/// Ratios log P^rebit_{k+1} / log P^rebit_k against k, converging toward
/// 16/27; the headline value is the terminal ratio.
pub fn log_ratio_study(k_max: i64) -> Result<StudyResult> {
    if k_max < 10 {
        return Err(Error::OutOfRange("k_max must be at least 10".into()));
    }
    let digits = 50;
    let mut logs = Vec::new();
    for k in 1..=k_max + 1 {
        logs.push(PrecReal::from_rational(&rebit_total_prob(k)?, digits).ln()?);
    }
    let table: Vec<(PrecReal, PrecReal)> = logs
        .windows(2)
        .enumerate()
        .map(|(j, w)| {
            (
                PrecReal::from_integer(1 + j as i64, digits),
                w[1].div(&w[0]),
            )
        })
        .collect();
    let reference = PrecReal::from_rational(&Rational::from((16, 27)), digits);
    let headline = table.last().unwrap().1.clone();
    Ok(finish("log_ratio", table, reference, headline))
}

/// Where the probabilities for the unit-slope study come from.
#[derive(Debug, Clone)]
pub enum QSource {
    /// Stored initial values Q(k,1), k = −1..9 (α = 1 only).
    ExactInitial,
    /// Moment/Legendre density pipeline at the given truncation degree.
    Density { alpha: Rational, degree: usize },
    /// Ginibre sampling (field fixes α: real ↔ 1/2, complex ↔ 1).
    MonteCarlo { field: Field, samples: u64, seed: u64 },
}

/// k·R(k) against k with R(k) = Q(k+1,α)/Q(k,α); near-unit slope expected.
/// The headline value is the fitted slope, referenced against 1.
pub fn unit_slope_study(k_max: i64, source: &QSource) -> Result<StudyResult> {
    if k_max > 40 {
        return Err(Error::OutOfRange("k_max must be at most 40".into()));
    }
    if k_max < 2 {
        return Err(Error::OutOfRange("k_max must be at least 2".into()));
    }
    let digits = 30;
    let q_at = |k: i64| -> Result<PrecReal> {
        match source {
            QSource::ExactInitial => {
                Ok(PrecReal::from_rational(&initial_value(k)?, digits))
            }
            QSource::Density { alpha, degree } => {
                let prec = recommended_precision(*degree, digits);
                let est = estimate_probability(
                    k,
                    alpha,
                    *degree,
                    &SupportInterval::default(),
                    Some(prec),
                    &Rational::from(0),
                )?;
                Ok(est.value_with_truncation_margin())
            }
            QSource::MonteCarlo { field, samples, seed } => {
                let est = mc_estimate(k, *field, *samples, seed.wrapping_add(k as u64))?;
                // carry the standard error as the ball radius
                let v = PrecReal::from_rational(
                    &Rational::from_f64(est.p_d_positive).unwrap_or_default(),
                    digits,
                );
                let se = Rational::from_f64(3.0 * est.p_d_positive_se).unwrap_or_default();
                Ok(v.widen(&se))
            }
        }
    };
    let mut table = Vec::new();
    let mut q_prev = q_at(1)?;
    for k in 1..=k_max {
        let q_next = q_at(k + 1)?;
        let r = q_next.div(&q_prev);
        let y = r.mul(&PrecReal::from_integer(k, digits));
        table.push((PrecReal::from_integer(k, digits), y));
        q_prev = q_next;
    }
    let reference = PrecReal::from_integer(1, digits);
    let fit = linear_fit(&table)?;
    let headline = fit.slope.clone();
    let mut out = finish("unit_slope", table, reference, headline);
    out.fit = Some(fit);
    Ok(out)
}

/// Fit hook for externally supplied probability tables (studies whose
/// underlying formulas are not part of this crate); returns the OLS fit of
/// the given points against the supplied reference slope.
pub fn study_from_table(
    name: &str,
    points: &[(Rational, Rational)],
    reference_slope: &Rational,
) -> Result<StudyResult> {
    if points.len() < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    let digits = 30;
    let table: Vec<(PrecReal, PrecReal)> = points
        .iter()
        .map(|(x, y)| {
            (
                PrecReal::from_rational(x, digits),
                PrecReal::from_rational(y, digits),
            )
        })
        .collect();
    let reference = PrecReal::from_rational(reference_slope, digits);
    let fit = linear_fit(&table)?;
    let headline = fit.slope.clone();
    let mut out = finish(name, table, reference, headline);
    out.fit = Some(fit);
    Ok(out)
}
