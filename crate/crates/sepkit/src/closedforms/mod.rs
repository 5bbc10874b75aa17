//! Closed-form machinery: hypergeometric parameter rules, generic
//! terminating/convergent series evaluation at argument 27/64, the
//! Pochhammer-ratio prefactor G₁, stored irreducible polynomials, concise
//! telescoping formulas for k = 0 and k = 1, the two-rebit total-probability
//! formula, and the k = −1 correction term.
//!
//! Throughout, `k` indexes the random induced measure (k ≥ −1) and `alpha`
//! is the Dyson-index-like parameter (α > 0). The separability probability
//! factors as Q(k,α) = G₁ᵏ(α)·G₂ᵏ(α), where G₁ is a pure ratio of Pochhammer
//! products and G₂ is a weighted sum of ₚF_{p−1} functions, all with argument
//! 27/64 = (3/4)³.

use crate::numerics::{
    gamma_half, pochhammer, pochhammer_real, AffineParam, Polynomial, PrecReal,
};
use crate::{Error, Rational, Result};
use rug::ops::{DivRounding, Pow};
use rug::Integer;

/// The hypergeometric argument 27/64 used by every series in this family.
pub fn argument() -> Rational {
    Rational::from((27, 64))
}

/// Geometric-majorant engagement threshold (27/64 + 1)/2 = 91/128: tail
/// bounds are only claimed once the provable term-ratio bound falls below it.
pub fn tail_ratio_threshold() -> Rational {
    Rational::from((91, 128))
}

fn check_k(k: i64) -> Result<()> {
    if k < -1 {
        return Err(Error::OutOfRange(format!("k = {} (need k >= -1)", k)));
    }
    Ok(())
}

fn check_k_table(k: i64) -> Result<()> {
    if !(-1..=9).contains(&k) {
        return Err(Error::OutOfRange(format!("k = {} (need -1 <= k <= 9)", k)));
    }
    Ok(())
}

/// Mathematical floor of the integer quotient n/d (rounds toward −∞).
fn floor_div(n: i64, d: i64) -> i64 {
    Integer::from(n).div_floor(&Integer::from(d)).to_i64().unwrap()
}

/// The six lower parameters b₁..b₆: five consecutive tenths-spaced values
/// α + 2k/5 + {23,25,27,29,31}/10 followed by the isolated b₆ = α + k + 3.
pub fn lower_params(k: i64) -> Result<[AffineParam; 6]> {
    check_k(k)?;
    let base = Rational::from((2 * k, 5));
    let mut out: Vec<AffineParam> = (0..5)
        .map(|i| AffineParam::unit(base.clone() + Rational::from((23 + 2 * i, 10))))
        .collect();
    out.push(AffineParam::unit(Rational::from(k + 3)));
    Ok(out.try_into().unwrap())
}

/// The six α-dependent upper parameters u₁..u₆: a sixths-spaced pair
/// (u₁, u₂) and a fifths-spaced quadruple (u₃..u₆), generated by exact
/// floor-function rules in k (mathematical floor, e.g. ⌊−1/3⌋ = −1).
pub fn upper_params(k: i64) -> Result<[AffineParam; 6]> {
    check_k(k)?;
    let f3a = floor_div(k, 3);
    let f3b = floor_div(k + 1, 3);
    let u1 = AffineParam::unit(Rational::from((4 * f3a + 2 * f3b + 11, 6)));
    let u2 = AffineParam::unit(Rational::from((2 * f3a + 4 * f3b + 13, 6)));
    let g4 = floor_div(k - 4, 5);
    let g3 = floor_div(k - 3, 5);
    let g2 = floor_div(k - 2, 5);
    let g1 = floor_div(k - 1, 5);
    let u3 = AffineParam::unit(Rational::from((3 * g4 + 2 * g3 + 2 * g2 + 3 * g1 + 16, 5)));
    let u4 = AffineParam::unit(Rational::from((3 * g4 + 2 * g3 + g2 + 4 * g1 + 17, 5)));
    let u5 = AffineParam::unit(Rational::from((2 * g4 + 3 * g3 + g2 + 4 * g1 + 18, 5)));
    let u6 = AffineParam::unit(Rational::from((2 * g4 + 3 * g3 + g2 + 4 * g1 + 19, 5)));
    Ok([u1, u2, u3, u4, u5, u6])
}

/// The constant upper parameter accompanying u₁..u₆ in the distinguished
/// ₇F₆ function.
pub const FIXED_UPPER: i64 = 2;

/// Full parameter set for a given k: six affine lower parameters, six affine
/// upper parameters, plus the fixed upper parameter 2.
#[derive(Debug, Clone)]
pub struct ParameterSet {
    pub k: i64,
    pub lower: [AffineParam; 6],
    pub upper: [AffineParam; 6],
}

pub fn parameter_set(k: i64) -> Result<ParameterSet> {
    Ok(ParameterSet { k, lower: lower_params(k)?, upper: upper_params(k)? })
}

/// Number m of additional ₍₇₊ⱼ₎F₍₆₊ⱼ₎ functions beyond the two ₇F₆'s in the
/// weighted-sum representation of G₂ᵏ, for k = −1..9 (stored verbatim;
/// the non-monotone dip at k = 6 is kept as observed).
pub fn m_count(k: i64) -> Result<usize> {
    check_k_table(k)?;
    const M: [usize; 11] = [3, 5, 5, 6, 6, 7, 9, 8, 10, 10, 10];
    Ok(M[(k + 1) as usize])
}

/// A concrete ₚF_{q} parameter list with its argument, ready for evaluation.
#[derive(Debug, Clone)]
pub struct HypergeometricSpec {
    pub upper: Vec<Rational>,
    pub lower: Vec<Rational>,
    pub argument: Rational,
}

/// Which member of the k-specific hypergeometric family a template denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfqVariant {
    /// The distinguished ₇F₆ with upper {2, u₁..u₆} and lower {b₁..b₆}.
    Base,
    /// The second ₇F₆ with every one of the thirteen parameters reduced by 1.
    Isolated,
    /// The ₍₇₊ⱼ₎F₍₆₊ⱼ₎ with j extra upper 2's and j extra lower 1's (1 ≤ j ≤ m).
    Extended(usize),
}

/// A symbolic family member: instantiate at a specific α with [`PfqTemplate::spec_at`].
#[derive(Debug, Clone)]
pub struct PfqTemplate {
    pub k: i64,
    pub variant: PfqVariant,
}

impl PfqTemplate {
    pub fn spec_at(&self, alpha: &Rational) -> Result<HypergeometricSpec> {
        let ps = parameter_set(self.k)?;
        let shift = if self.variant == PfqVariant::Isolated { -1i64 } else { 0 };
        let mut upper: Vec<Rational> = vec![Rational::from(FIXED_UPPER + shift)];
        upper.extend(ps.upper.iter().map(|u| u.eval(alpha) + Rational::from(shift)));
        let mut lower: Vec<Rational> =
            ps.lower.iter().map(|b| b.eval(alpha) + Rational::from(shift)).collect();
        if let PfqVariant::Extended(j) = self.variant {
            for _ in 0..j {
                upper.push(Rational::from(2));
                lower.push(Rational::from(1));
            }
        }
        Ok(HypergeometricSpec { upper, lower, argument: argument() })
    }
}

/// The full list of family members for a given k: the distinguished ₇F₆,
/// its all-minus-one companion, and the m extended members.
pub fn pfq_family(k: i64) -> Result<Vec<PfqTemplate>> {
    let m = m_count(k)?;
    let mut out = vec![
        PfqTemplate { k, variant: PfqVariant::Base },
        PfqTemplate { k, variant: PfqVariant::Isolated },
    ];
    for j in 1..=m {
        out.push(PfqTemplate { k, variant: PfqVariant::Extended(j) });
    }
    Ok(out)
}

/// Index of the first zero term when an upper parameter is a nonpositive
/// integer: the series terminates after term n = −a.
fn termination_index(params: &[Rational]) -> Option<u64> {
    params
        .iter()
        .filter(|a| a.is_integer() && **a <= 0)
        .map(|a| (-a.clone()).into_numer_denom().0.to_u64().unwrap())
        .min()
}

/// Evaluate a generalized hypergeometric series at its stored argument with a
/// certified error bound.
///
/// Terminating series (a nonpositive-integer upper parameter, reached before
/// any lower-parameter pole) are summed exactly. Non-terminating series
/// require p = q + 1 and |z| < 1; partial sums are closed with a provable
/// geometric tail majorant: for n past every parameter sign change, each term
/// ratio is at most |z|·max(1, ((n+A)/(n+B))^p) with A the largest upper
/// parameter and B the smallest of the lower parameters and 1.
pub fn pfq_evaluate(spec: &HypergeometricSpec, digits: u32) -> Result<PrecReal> {
    let z = &spec.argument;
    let n_term = termination_index(&spec.upper);
    let n_pole = termination_index(&spec.lower).map(|m| {
        // lower parameter −m first divides a term at index m + 1
        m + 1
    });
    if let Some(np) = n_pole {
        // A termination at index ≤ the pole's onset means the zero factor
        // cuts the series off before the division by zero is reached.
        let terminated_first = n_term.map(|nt| nt < np).unwrap_or(false);
        if !terminated_first {
            return Err(Error::Pole(format!(
                "lower parameter {} is a nonpositive integer",
                spec.lower
                    .iter()
                    .find(|b| b.is_integer() && **b <= 0)
                    .unwrap()
            )));
        }
    }

    if let Some(nt) = n_term {
        // Exact finite sum.
        let mut sum = Rational::from(0);
        let mut term = Rational::from(1);
        for n in 0..nt {
            sum += &term;
            let nq = Rational::from(n);
            for a in &spec.upper {
                term *= Rational::from(a + &nq);
            }
            for b in &spec.lower {
                term /= Rational::from(b + &nq);
            }
            term *= z;
            term /= Rational::from(n + 1);
        }
        sum += &term;
        return Ok(PrecReal::from_rational(&sum, digits));
    }

    if spec.upper.len() != spec.lower.len() + 1 {
        return Err(Error::NonConvergent(format!(
            "non-terminating {}F{} series",
            spec.upper.len(),
            spec.lower.len()
        )));
    }
    if z.clone().abs() >= 1 {
        return Err(Error::NonConvergent(format!("|argument| = {} >= 1", z.clone().abs())));
    }

    let p = spec.upper.len() as u32;
    let a_max = spec.upper.iter().cloned().fold(Rational::from(0), |m, a| m.max(a));
    let b_min = spec
        .lower
        .iter()
        .cloned()
        .fold(Rational::from(1), |m, b| m.min(b));
    // Past this index every parameter is strictly positive when shifted by n.
    let n_positive: u64 = spec
        .upper
        .iter()
        .chain(spec.lower.iter())
        .map(|q| {
            let f = (-q.clone()).floor();
            f.into_numer_denom().0.to_i64().unwrap().max(0) as u64 + 1
        })
        .max()
        .unwrap_or(1);

    let threshold = tail_ratio_threshold();
    let abs_z = z.clone().abs();
    let mut sum = PrecReal::zero(digits);
    let mut term = PrecReal::from_rational(&Rational::from(1), digits);
    let target = Rational::from((Integer::from(1), Integer::from(10).pow(digits + 5)));
    let max_terms: u64 = 40 * (digits as u64 + 10) + 16 * n_positive;
    let mut n: u64 = 0;
    loop {
        sum = sum.add(&term);
        if n >= n_positive {
            // Provable bound on all subsequent term ratios.
            let x = Rational::from(n + 1);
            let grow = Rational::from(&x + &a_max) / Rational::from(&x + &b_min);
            let grow = if grow > 1 { grow.pow(p) } else { Rational::from(1) };
            let rho = Rational::from(&abs_z * &grow);
            if rho < threshold {
                let tail_scale = Rational::from(&rho / &(Rational::from(1) - &rho));
                let tail = term.abs().mul_rational(&tail_scale);
                let tail_mag = Rational::from(&tail.midpoint_rational() + &tail.error_bound());
                if tail_mag < target {
                    return Ok(sum.widen(&tail_mag));
                }
            }
        }
        if n >= max_terms {
            return Err(Error::NonConvergent(format!(
                "tail bound not reached after {} terms",
                max_terms
            )));
        }
        let nq = Rational::from(n);
        let mut ratio = z.clone();
        for a in &spec.upper {
            ratio *= Rational::from(a + &nq);
        }
        for b in &spec.lower {
            ratio /= Rational::from(b + &nq);
        }
        ratio /= Rational::from(n + 1);
        term = term.mul_rational(&ratio);
        n += 1;
    }
}

/// A G₂-style weighted sum: polynomial weights in α attached to family
/// members. The weight polynomials are caller-supplied data (they are not
/// derivable from the parameter rules).
#[derive(Debug, Clone)]
pub struct WeightedHypergeometricSum {
    pub terms: Vec<(Polynomial, PfqTemplate)>,
}

impl WeightedHypergeometricSum {
    /// Parse from JSON of the form
    /// `{"k": 0, "terms": [{"variant": "base" | "isolated" | {"extended": j},
    ///   "weight": ["c0", "c1/d1", ...]}, ...]}`
    /// where `weight` lists exact rational coefficients in ascending degree.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Domain(format!("bad weighted-sum JSON: {}", e)))?;
        let k = v
            .get("k")
            .and_then(|x| x.as_i64())
            .ok_or_else(|| Error::Domain("missing integer field \"k\"".into()))?;
        check_k(k)?;
        let terms_json = v
            .get("terms")
            .and_then(|x| x.as_array())
            .ok_or_else(|| Error::Domain("missing array field \"terms\"".into()))?;
        let mut terms = Vec::new();
        for t in terms_json {
            let variant = match t.get("variant") {
                Some(serde_json::Value::String(s)) if s == "base" => PfqVariant::Base,
                Some(serde_json::Value::String(s)) if s == "isolated" => PfqVariant::Isolated,
                Some(serde_json::Value::Object(o)) => {
                    let j = o
                        .get("extended")
                        .and_then(|x| x.as_u64())
                        .ok_or_else(|| Error::Domain("bad \"variant\" object".into()))?;
                    PfqVariant::Extended(j as usize)
                }
                _ => return Err(Error::Domain("bad or missing \"variant\"".into())),
            };
            let coeffs = t
                .get("weight")
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Domain("missing array field \"weight\"".into()))?
                .iter()
                .map(|c| {
                    c.as_str()
                        .ok_or_else(|| Error::Domain("weight coefficients must be strings".into()))
                        .and_then(crate::numerics::rational_from_string)
                })
                .collect::<Result<Vec<Rational>>>()?;
            terms.push((Polynomial::new(coeffs), PfqTemplate { k, variant }));
        }
        Ok(WeightedHypergeometricSum { terms })
    }
}

/// Evaluate a weighted hypergeometric sum at a given α; the certified error
/// is the sum of the component tail bounds.
pub fn g2_weighted_sum(
    ws: &WeightedHypergeometricSum,
    alpha: &Rational,
    digits: u32,
) -> Result<PrecReal> {
    let mut sum = PrecReal::zero(digits);
    for (weight, template) in &ws.terms {
        let spec = template.spec_at(alpha)?;
        let f = pfq_evaluate(&spec, digits)?;
        sum = sum.add(&f.mul_rational(&weight.eval(alpha)));
    }
    Ok(sum)
}

/// Hypergeometric-free prefactor at integer α ≥ 1, evaluated exactly:
/// G₁ᵏ(α) = (27/64)^(α−1) · Π(uᵢ)_{α−1} / Π(bᵢ)_{α−1}, with the parameters
/// themselves evaluated at the same α as the Pochhammer order.
pub fn g1_exact(k: i64, alpha: i64) -> Result<Rational> {
    check_k(k)?;
    if alpha < 1 {
        return Err(Error::OutOfRange(format!("alpha = {} (need integer alpha >= 1)", alpha)));
    }
    let ps = parameter_set(k)?;
    let a = Rational::from(alpha);
    let ord = (alpha - 1) as u64;
    let mut out = argument().pow((alpha - 1) as u32);
    for u in &ps.upper {
        out *= pochhammer(&u.eval(&a), ord);
    }
    for b in &ps.lower {
        out /= pochhammer(&b.eval(&a), ord);
    }
    Ok(out)
}

/// G₁ᵏ(α) for general rational α > 0, via real gamma-function Pochhammers.
pub fn g1_prec(k: i64, alpha: &Rational, digits: u32) -> Result<PrecReal> {
    check_k(k)?;
    if *alpha <= 0 {
        return Err(Error::OutOfRange(format!("alpha = {} (need alpha > 0)", alpha)));
    }
    let ps = parameter_set(k)?;
    let ord_q = Rational::from(alpha - Rational::from(1));
    let ord = PrecReal::from_rational(&ord_q, digits);
    let mut out = PrecReal::from_rational(&argument(), digits).pow_rational(&ord_q, digits)?;
    for u in &ps.upper {
        let x = PrecReal::from_rational(&u.eval(alpha), digits);
        out = out.mul(&pochhammer_real(&x, &ord)?);
    }
    for b in &ps.lower {
        let x = PrecReal::from_rational(&b.eval(alpha), digits);
        out = out.div(&pochhammer_real(&x, &ord)?);
    }
    Ok(out)
}

/// The stored irreducible polynomial factor of p₀ᵏ for k = −1..4, plus the
/// extra linear factor (9 + 4α) present only at k = 4. Coefficients ascending.
pub fn q_polynomial(k: i64) -> Result<(Polynomial, Option<Polynomial>)> {
    let poly = match k {
        -1 => Polynomial::from_integers(&[54, 938, 5645, 12625, 9250]),
        0 => Polynomial::from_integers(&[63000, 410694, 1042015, 1289125, 779750, 185000]),
        1 => Polynomial::from_integers(&[
            246960, 1284280, 2724024, 3013197, 1830820, 578300, 74000,
        ]),
        2 => Polynomial::from_integers(&[
            22004136, 100092606, 192332891, 202090226, 125164535, 45576950, 9002000, 740000,
        ]),
        3 => Polynomial::from_integers(&[
            134548128, 471120306, 698007782, 566336789, 271168745, 76382750, 11666000, 740000,
        ]),
        4 => Polynomial::from_integers(&[
            175452420, 522054355, 656629192, 451645197, 182972656, 43492140, 5584000, 296000,
        ]),
        _ => {
            return Err(Error::OutOfRange(format!("k = {} (stored polynomials cover -1..4)", k)))
        }
    };
    let extra = if k == 4 { Some(Polynomial::from_integers(&[9, 4])) } else { None };
    Ok((poly, extra))
}

mod concise;
mod special;

pub use concise::{
    concise_q_exact, concise_q_prec, concise_term_exact, concise_term_prec, term_ratio, TermRatio,
};
pub use special::{kminus1_correction_exact, kminus1_correction_prec, rebit_total_prob};

/// Exact gamma_half re-export point used by sibling submodules.
pub(crate) fn gamma_half_signed(two_x: i64) -> Result<(Rational, i32)> {
    let (r, p) = gamma_half(two_x)?;
    Ok((r, p as i32))
}
