//! Moment-based density reconstruction: Legendre expansion of the law of
//! D = |rho^PT| - |rho| on a bracketing support interval, integrated to give
//! tail probabilities.

use crate::moments::{moment_sequence, MomentSequence};
use crate::numerics::{binomial, LegendreIter, PrecReal};
use crate::{Error, Result};
use rug::ops::Pow;
use rug::Rational;

pub use crate::numerics::legendre_coeffs;

/// Interval [a, b] assumed to contain the support of D. The Bell state gives
/// the exact lower extreme -1/16; 1/256 bounds |rho^PT| from above, so the
/// default bracket is a superset of the true support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportInterval {
    pub a: Rational,
    pub b: Rational,
}

impl SupportInterval {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a >= b {
            return Err(Error::Degenerate(format!("support [{}, {}] is empty", a, b)));
        }
        Ok(SupportInterval { a, b })
    }

    /// Affine map of x in [a, b] to t in [-1, 1].
    pub fn map_to_unit(&self, x: &Rational) -> Rational {
        let two_x = Rational::from(x * Rational::from(2));
        (two_x - self.sum()) / self.width()
    }

    fn sum(&self) -> Rational {
        Rational::from(&self.a + &self.b)
    }

    fn width(&self) -> Rational {
        Rational::from(&self.b - &self.a)
    }
}

impl Default for SupportInterval {
    fn default() -> Self {
        SupportInterval {
            a: Rational::from((-1, 16)),
            b: Rational::from((1, 256)),
        }
    }
}

/// Legendre coefficients of the reconstructed density in the mapped variable.
#[derive(Debug, Clone)]
pub enum LegendreCoeffs {
    Exact(Vec<Rational>),
    Float(Vec<PrecReal>),
}

impl LegendreCoeffs {
    pub fn len(&self) -> usize {
        match self {
            LegendreCoeffs::Exact(v) => v.len(),
            LegendreCoeffs::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone)]
pub struct DensityModel {
    pub support: SupportInterval,
    pub coeffs: LegendreCoeffs,
}

impl DensityModel {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Tail probability together with its convergence diagnostics.
#[derive(Debug, Clone)]
pub struct ProbabilityEstimate {
    pub value: PrecReal,
    pub exact_value: Option<Rational>,
    pub degree: usize,
    /// Estimate recomputed from the leading half of the expansion.
    pub half_degree_value: PrecReal,
    /// Magnitude of the last retained term's possible contribution,
    /// |λ_N| · 2/(2N+1).
    pub tail_indicator: PrecReal,
}

impl ProbabilityEstimate {
    /// Value with the error ball widened by the empirical truncation
    /// diagnostics, suitable for rationalization. The round-off ball alone
    /// does not account for the degree cutoff.
    pub fn value_with_truncation_margin(&self) -> PrecReal {
        let margin = self
            .value
            .sub(&self.half_degree_value)
            .abs()
            .add(&self.tail_indicator.abs());
        let radius = margin.midpoint_rational().abs() + margin.error_bound();
        self.value.widen(&radius)
    }
}

/// Exact moments of the mapped variable T = (2X - a - b)/(b - a) from raw
/// moments of X, by binomial transform.
pub fn shifted_moments(mu: &[Rational], support: &SupportInterval) -> Result<Vec<Rational>> {
    if mu.first().map_or(true, |m| *m != 1) {
        return Err(Error::Inconsistent("moment sequence must start with 1".into()));
    }
    let width = support.width();
    let shift = -support.sum();
    let mut out = Vec::with_capacity(mu.len());
    for n in 0..mu.len() {
        // E[T^n] = sum_j C(n,j) 2^j mu_j shift^(n-j) / width^n
        let mut acc = Rational::from(0);
        for (j, m) in mu.iter().enumerate().take(n + 1) {
            let c = Rational::from(binomial(n as u64, j as u64)) << (j as u32);
            acc += c * m * shift.clone().pow((n - j) as u32);
        }
        acc /= width.clone().pow(n as u32);
        out.push(acc);
    }
    Ok(out)
}

/// Exact Legendre coefficients λ_j = (2j+1)/2 Σ_i c_{j,i} E[T^i].
pub fn legendre_coefficients(t_moments: &[Rational], support: &SupportInterval) -> Result<DensityModel> {
    if t_moments.first().map_or(true, |m| *m != 1) {
        return Err(Error::Inconsistent("t-moment sequence must start with 1".into()));
    }
    let mut coeffs = Vec::with_capacity(t_moments.len());
    for (j, p) in LegendreIter::new().take(t_moments.len()).enumerate() {
        let mut acc = Rational::from(0);
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.cmp0() != std::cmp::Ordering::Equal {
                acc += Rational::from(c * &t_moments[i]);
            }
        }
        acc *= Rational::from((2 * j as i64 + 1, 2));
        coeffs.push(acc);
    }
    Ok(DensityModel {
        support: support.clone(),
        coeffs: LegendreCoeffs::Exact(coeffs),
    })
}

/// Ball-arithmetic Legendre coefficients for large truncation orders, at the
/// given working precision. Legendre coefficient growth is ~4^j, so the
/// precision must grow linearly with the degree to survive the cancellation.
pub fn legendre_coefficients_prec(
    t_moments: &[Rational],
    support: &SupportInterval,
    digits: u32,
) -> Result<DensityModel> {
    if t_moments.first().map_or(true, |m| *m != 1) {
        return Err(Error::Inconsistent("t-moment sequence must start with 1".into()));
    }
    let tm: Vec<PrecReal> = t_moments
        .iter()
        .map(|m| PrecReal::from_rational(m, digits))
        .collect();
    let mut coeffs = Vec::with_capacity(tm.len());
    for (j, p) in LegendreIter::new().take(tm.len()).enumerate() {
        let mut acc = PrecReal::zero(digits);
        for (i, c) in p.coeffs().iter().enumerate() {
            if c.cmp0() != std::cmp::Ordering::Equal {
                acc = acc.add(&tm[i].mul_rational(c));
            }
        }
        coeffs.push(acc.mul_rational(&Rational::from((2 * j as i64 + 1, 2))));
    }
    Ok(DensityModel {
        support: support.clone(),
        coeffs: LegendreCoeffs::Float(coeffs),
    })
}

/// P(X > c), integrating the expansion with the Legendre antiderivative
/// identity. Values slightly outside [0, 1] are truncation artifacts and are
/// returned as-is.
pub fn tail_probability(model: &DensityModel, c: &Rational, digits: u32) -> ProbabilityEstimate {
    let n = model.degree();
    let (full, exact) = tail_upto(model, c, n, digits);
    let (half, _) = tail_upto(model, c, n / 2, digits);
    let tail_indicator = match &model.coeffs {
        LegendreCoeffs::Exact(v) => PrecReal::from_rational(
            &Rational::from(v[n].clone().abs() * Rational::from((2, 2 * n as i64 + 1))),
            digits,
        ),
        LegendreCoeffs::Float(v) => v[n]
            .abs()
            .mul_rational(&Rational::from((2, 2 * n as i64 + 1))),
    };
    ProbabilityEstimate {
        value: full,
        exact_value: exact,
        degree: n,
        half_degree_value: half,
        tail_indicator,
    }
}

fn tail_upto(
    model: &DensityModel,
    c: &Rational,
    degree: usize,
    digits: u32,
) -> (PrecReal, Option<Rational>) {
    let t_c = {
        let t = model.support.map_to_unit(c);
        if t < -1 {
            Rational::from(-1)
        } else {
            t
        }
    };
    match &model.coeffs {
        LegendreCoeffs::Exact(lam) => {
            let p = crate::numerics::legendre_eval(degree + 2, &t_c);
            let mut acc = Rational::from(&lam[0] * (Rational::from(1) - &t_c));
            for j in 1..=degree {
                let d = Rational::from(&p[j - 1] - &p[j + 1]);
                acc += Rational::from(&lam[j] * d) / Rational::from(2 * j as i64 + 1);
            }
            (PrecReal::from_rational(&acc, digits), Some(acc))
        }
        LegendreCoeffs::Float(lam) => {
            let t = PrecReal::from_rational(&t_c, digits);
            let p = crate::numerics::legendre_eval_prec(degree + 2, &t, digits);
            let one_minus = PrecReal::from_rational(&Rational::from(1), digits).sub(&t);
            let mut acc = lam[0].mul(&one_minus);
            for j in 1..=degree {
                let d = p[j - 1].sub(&p[j + 1]);
                acc = acc.add(&lam[j].mul(&d).mul_rational(&Rational::from((1, 2 * j as i64 + 1))));
            }
            (acc, None)
        }
    }
}

/// Full pipeline: exact moments -> shifted moments -> Legendre coefficients
/// -> tail probability. Uses the exact path when `precision` is `None`,
/// otherwise ball arithmetic at the given decimal precision.
pub fn estimate_probability(
    k: i64,
    alpha: &Rational,
    degree: usize,
    support: &SupportInterval,
    precision: Option<u32>,
    c: &Rational,
) -> Result<ProbabilityEstimate> {
    if degree < 2 {
        return Err(Error::OutOfRange("degree must be at least 2".into()));
    }
    let mu = moment_sequence(k, alpha, degree as u64)?;
    estimate_from_moments(&mu, degree, support, precision, c)
}

/// Same pipeline starting from an already-computed moment sequence.
pub fn estimate_from_moments(
    mu: &MomentSequence,
    degree: usize,
    support: &SupportInterval,
    precision: Option<u32>,
    c: &Rational,
) -> Result<ProbabilityEstimate> {
    if mu.values.len() <= degree {
        return Err(Error::OutOfRange(format!(
            "moment sequence has {} entries, degree {} needs {}",
            mu.values.len(),
            degree,
            degree + 1
        )));
    }
    let tm = shifted_moments(&mu.values[..=degree], support)?;
    match precision {
        None => {
            let model = legendre_coefficients(&tm, support)?;
            Ok(tail_probability(&model, c, 30))
        }
        Some(d) => {
            let model = legendre_coefficients_prec(&tm, support, d)?;
            Ok(tail_probability(&model, c, d))
        }
    }
}

/// Working precision that keeps the ~4^j Legendre cancellation under control
/// at truncation order `degree`, with `target` digits left over.
pub fn recommended_precision(degree: usize, target: u32) -> u32 {
    target + 30 + (0.70 * degree as f64).ceil() as u32
}
