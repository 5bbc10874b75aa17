//! Concise telescoping formulas for Q(0,α) and Q(1,α): the single-term
//! difference f(α) = Q(k,α) − Q(k,α+1) as an explicit gamma-function
//! expression, its exact rational reduction at integer (and, for k = 0,
//! half-integer) α, and the certified forward summation Q(k,α) = Σ f(α+i)
//! together with the exact backward route from the stored Q(k,1).

use super::q_polynomial;
use crate::numerics::{factorial, pochhammer, Polynomial, PrecReal};
use crate::{Error, Rational, Result};
use rug::ops::Pow;
use rug::Integer;

/// Stored exact values Q(0,1) = 4/33 and Q(1,1) = 45/286 used to seed the
/// backward (exact) summation route.
pub(crate) fn concise_seed(k: i64) -> Result<Rational> {
    match k {
        0 => Ok(Rational::from((4, 33))),
        1 => Ok(Rational::from((45, 286))),
        _ => Err(Error::OutOfRange(format!("k = {} (concise formulas cover k = 0, 1)", k))),
    }
}

/// Exact term ratio f(x+1)/f(x) of a concise-formula term, represented as
/// scale · Π(x+aᵢ) / Π(x+dⱼ) · poly(x+1)/poly(x) with equally many linear
/// factors above and below (so the ratio tends to `scale` as x → ∞).
#[derive(Debug, Clone)]
pub struct TermRatio {
    pub scale: Rational,
    pub num_offsets: Vec<Rational>,
    pub den_offsets: Vec<Rational>,
    pub poly: Polynomial,
}

impl TermRatio {
    /// Exact value of the ratio at a rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let mut out = self.scale.clone();
        for a in &self.num_offsets {
            out *= Rational::from(x + a);
        }
        for d in &self.den_offsets {
            let f = Rational::from(x + d);
            if f == 0 {
                return Err(Error::ZeroDivisor(x.to_string()));
            }
            out /= f;
        }
        let px = self.poly.eval(x);
        if px == 0 {
            return Err(Error::ZeroDivisor(x.to_string()));
        }
        out *= self.poly.eval(&Rational::from(x + Rational::from(1)));
        out /= px;
        Ok(out)
    }

    /// Upper bound on the ratio at every point y ≥ x, valid for x large
    /// enough that all shifted linear factors are positive. Uses
    /// Π(y+aᵢ) ≤ (y+A)^p, Π(y+dⱼ) ≥ (y+B)^p and, for the positive-coefficient
    /// polynomial part, poly(y+1) ≤ (1+1/y)^deg·poly(y); each piece is
    /// monotone in y so the supremum is attained at an end.
    pub fn tail_ratio_bound(&self, x: &Rational) -> Result<Rational> {
        let a_max = self
            .num_offsets
            .iter()
            .cloned()
            .fold(self.num_offsets[0].clone(), |m, a| m.max(a));
        let b_min = self
            .den_offsets
            .iter()
            .cloned()
            .fold(self.den_offsets[0].clone(), |m, d| m.min(d));
        if *x <= 0 || Rational::from(x + &b_min) <= 0 || Rational::from(x + &a_max) <= 0 {
            return Err(Error::Domain(format!("tail bound needs positive factors at x = {}", x)));
        }
        debug_assert!(self.poly.coeffs().iter().all(|c| *c >= 0));
        let p = self.num_offsets.len() as u32;
        let grow = Rational::from(x + &a_max) / Rational::from(x + &b_min);
        let grow = if grow > 1 { grow.pow(p) } else { Rational::from(1) };
        let poly_grow =
            (Rational::from(1) + Rational::from(x.clone().recip())).pow(self.poly.degree() as u32);
        Ok(Rational::from(&self.scale * &grow) * poly_grow)
    }
}

/// Exact term ratio for the k = 0 or k = 1 concise formula, assembled from
/// the gamma-argument shifts of the printed term.
pub fn term_ratio(k: i64) -> Result<TermRatio> {
    let mut scale;
    let mut num = Vec::new();
    let mut den = Vec::new();
    // Push a linear factor slope·x + slope·offset, folding the slope into the
    // overall scale so only monic factors (x + offset) remain.
    fn push(side: &mut Vec<Rational>, scale: &mut Rational, factors: &[(i64, Rational)], inv: bool) {
        for (slope, offset) in factors {
            if inv {
                *scale /= Rational::from(*slope);
            } else {
                *scale *= Rational::from(*slope);
            }
            side.push(offset.clone());
        }
    }
    let q = |n: i64, d: i64| Rational::from((n, d));
    match k {
        0 => {
            scale = q(1, 16); // the 2^(−4α−6) factor shifts by 2^(−4)
            push(
                &mut num,
                &mut scale,
                &[
                    // Γ(3α+5/2) shift
                    (3, q(5, 6)),
                    (3, q(7, 6)),
                    (3, q(3, 2)),
                    // Γ(5α+2) shift
                    (5, q(2, 5)),
                    (5, q(3, 5)),
                    (5, q(4, 5)),
                    (5, q(1, 1)),
                    (5, q(6, 5)),
                ],
                false,
            );
            push(
                &mut den,
                &mut scale,
                &[
                    // Γ(α+1) shift
                    (1, q(1, 1)),
                    // Γ(2α+3) shift
                    (2, q(3, 2)),
                    (2, q(2, 1)),
                    // Γ(5α+13/2) shift
                    (5, q(13, 10)),
                    (5, q(3, 2)),
                    (5, q(17, 10)),
                    (5, q(19, 10)),
                    (5, q(21, 10)),
                ],
                true,
            );
        }
        1 => {
            scale = q(27, 50000); // the (27/50000)^α factor
            push(
                &mut num,
                &mut scale,
                &[
                    // (5α+1)(5α+2)(5α+3) prefactor shift
                    (5, q(6, 5)),
                    (5, q(7, 5)),
                    (5, q(8, 5)),
                    // Γ(5α) shift
                    (5, q(0, 1)),
                    (5, q(1, 5)),
                    (5, q(2, 5)),
                    (5, q(3, 5)),
                    (5, q(4, 5)),
                    // Γ(α+5/6), Γ(α+7/6) shifts
                    (1, q(5, 6)),
                    (1, q(7, 6)),
                ],
                false,
            );
            push(
                &mut den,
                &mut scale,
                &[
                    // prefactor shift denominators
                    (5, q(1, 5)),
                    (5, q(2, 5)),
                    (5, q(3, 5)),
                    // Γ(α) shift
                    (1, q(0, 1)),
                    // Γ(α+17/10)..Γ(α+23/10) shifts
                    (1, q(17, 10)),
                    (1, q(19, 10)),
                    (1, q(21, 10)),
                    (1, q(23, 10)),
                    // Γ(2α+5) shift
                    (2, q(5, 2)),
                    (2, q(3, 1)),
                ],
                true,
            );
        }
        _ => return Err(Error::OutOfRange(format!("k = {} (concise formulas cover k = 0, 1)", k))),
    }
    let (poly, _) = q_polynomial(k)?;
    Ok(TermRatio { scale, num_offsets: num, den_offsets: den, poly })
}

fn to_i64(q: &Rational) -> Result<i64> {
    if !q.is_integer() {
        return Err(Error::Domain(format!("{} is not an integer", q)));
    }
    q.numer().to_i64().ok_or_else(|| Error::Domain(format!("{} overflows i64", q)))
}

/// Exact rational value of the concise-formula term f(α).
///
/// For k = 0 this reduces exactly whenever 2α is a positive integer (all
/// gamma arguments are then integers or half-integers and the √π
/// contributions cancel). For k = 1 it reduces exactly at positive integer α:
/// the sixth- and tenth-denominator gamma constants collapse through the
/// reflection products Γ(x)Γ(1−x) = π/sin(πx) with
/// sin(π/10)·sin(3π/10) = 1/4, leaving the rational prefactor 1/36036.
pub fn concise_term_exact(k: i64, alpha: &Rational) -> Result<Rational> {
    if *alpha <= 0 {
        return Err(Error::OutOfRange(format!("alpha = {} (need alpha > 0)", alpha)));
    }
    match k {
        0 => {
            let two_alpha = Rational::from(alpha * Rational::from(2));
            if !two_alpha.is_integer() {
                return Err(Error::Domain(format!(
                    "k = 0 exact path needs 2*alpha integer, got alpha = {}",
                    alpha
                )));
            }
            let (q0, _) = q_polynomial(0)?;
            let mut pi_pow: i32 = 0;
            let mut out = q0.eval(alpha) / Rational::from(6);
            // 2^(−4α−6) with integer exponent −(4α+6)
            let e = to_i64(&Rational::from(alpha * Rational::from(4)))? + 6;
            out *= Rational::from(2).pow(-(e as i32));
            for (two_arg, sign) in [
                (Rational::from(alpha * Rational::from(6)) + 5, 1i32),  // Γ(3α+5/2)
                (Rational::from(alpha * Rational::from(10)) + 4, 1),    // Γ(5α+2)
                (Rational::from(alpha * Rational::from(2)) + 2, -1),    // Γ(α+1)
                (Rational::from(alpha * Rational::from(4)) + 6, -1),    // Γ(2α+3)
                (Rational::from(alpha * Rational::from(10)) + 13, -1),  // Γ(5α+13/2)
            ] {
                let (r, p) = super::gamma_half_signed(to_i64(&two_arg)?)?;
                if sign > 0 {
                    out *= r;
                } else {
                    out /= r;
                }
                pi_pow += sign * p;
            }
            if pi_pow != 0 {
                return Err(Error::Domain(format!(
                    "residual sqrt(pi) power {} at alpha = {}",
                    pi_pow, alpha
                )));
            }
            Ok(out)
        }
        1 => {
            if !alpha.is_integer() {
                return Err(Error::Domain(format!(
                    "k = 1 exact path needs integer alpha, got {}",
                    alpha
                )));
            }
            let a = to_i64(alpha)? as u64;
            let (q1, _) = q_polynomial(1)?;
            let five_a = Rational::from(alpha * Rational::from(5));
            let mut out = Rational::from((1, 36036));
            out *= Rational::from(&five_a + Rational::from(1));
            out *= Rational::from(&five_a + Rational::from(2));
            out *= Rational::from(&five_a + Rational::from(3));
            out *= q1.eval(alpha);
            out *= Rational::from((27, 50000)).pow(a as u32);
            out *= pochhammer(&Rational::from((5, 6)), a);
            out *= pochhammer(&Rational::from((7, 6)), a);
            out *= Rational::from(factorial(5 * a - 1)) / Rational::from(factorial(a - 1));
            for c in [(17i64, 10i64), (19, 10), (21, 10), (23, 10)] {
                out /= pochhammer(&Rational::from(c), a);
            }
            out /= Rational::from(factorial(2 * a + 4));
            Ok(out)
        }
        _ => Err(Error::OutOfRange(format!("k = {} (concise formulas cover k = 0, 1)", k))),
    }
}

/// Ball evaluation of the concise-formula term f(α) straight from its
/// gamma-function form, valid at any rational α > 0 away from poles.
pub fn concise_term_prec(k: i64, alpha: &Rational, digits: u32) -> Result<PrecReal> {
    if *alpha <= 0 {
        return Err(Error::OutOfRange(format!("alpha = {} (need alpha > 0)", alpha)));
    }
    let d = digits + 10;
    let gamma_at = |c: Rational| -> Result<PrecReal> {
        PrecReal::from_rational(&c, d).gamma()
    };
    let q = |n: i64, den: i64| Rational::from((n, den));
    match k {
        0 => {
            let (q0, _) = q_polynomial(0)?;
            let a5 = Rational::from(alpha * Rational::from(5));
            let a3 = Rational::from(alpha * Rational::from(3));
            let a2 = Rational::from(alpha * Rational::from(2));
            let mut out = PrecReal::from_rational(&q0.eval(alpha), d)
                .mul_rational(&q(1, 6));
            let e = Rational::from(alpha * Rational::from(-4)) - 6;
            out = out.mul(&PrecReal::from_rational(&q(2, 1), d).pow_rational(&e, d)?);
            out = out.mul(&gamma_at(a3 + q(5, 2))?);
            out = out.mul(&gamma_at(a5.clone() + 2)?);
            out = out.div(&gamma_at(Rational::from(alpha + Rational::from(1)))?);
            out = out.div(&gamma_at(a2 + 3)?);
            out = out.div(&gamma_at(a5 + q(13, 2))?);
            Ok(out)
        }
        1 => {
            let (q1, _) = q_polynomial(1)?;
            let a5 = Rational::from(alpha * Rational::from(5));
            let a2 = Rational::from(alpha * Rational::from(2));
            let mut pref = PrecReal::pi(d).mul_rational(&q(9, 1_000_000));
            pref = pref.mul_rational(&(a5.clone() + 1));
            pref = pref.mul_rational(&(a5.clone() + 2));
            pref = pref.mul_rational(&(a5.clone() + 3));
            pref = pref.mul_rational(&q1.eval(alpha));
            let mut out = pref;
            out = out.mul(&PrecReal::from_rational(&q(27, 50000), d).pow_rational(alpha, d)?);
            out = out.mul(&gamma_at(a5)?);
            out = out.mul(&gamma_at(Rational::from(alpha + q(5, 6)))?);
            out = out.mul(&gamma_at(Rational::from(alpha + q(7, 6)))?);
            out = out.div(&gamma_at(alpha.clone())?);
            for c in [q(17, 10), q(19, 10), q(21, 10), q(23, 10)] {
                out = out.div(&gamma_at(Rational::from(alpha + c))?);
            }
            out = out.div(&gamma_at(a2 + 5)?);
            Ok(out)
        }
        _ => Err(Error::OutOfRange(format!("k = {} (concise formulas cover k = 0, 1)", k))),
    }
}

/// Q(k,α) for k ∈ {0,1} by forward summation Σ_{i≥0} f(α+i), with a certified
/// geometric tail bound engaged once the provable term-ratio bound drops
/// below (27/64 + 1)/2. The terms are advanced by exact rational ratios, so
/// only the initial term contributes transcendental rounding error.
pub fn concise_q_prec(k: i64, alpha: &Rational, digits: u32) -> Result<PrecReal> {
    let ratio = term_ratio(k)?;
    let threshold = super::tail_ratio_threshold();
    let target = Rational::from((Integer::from(1), Integer::from(10).pow(digits + 5)));
    let mut term = if alpha.is_integer() || (k == 0 && Rational::from(alpha * Rational::from(2)).is_integer()) {
        PrecReal::from_rational(&concise_term_exact(k, alpha)?, digits + 10)
    } else {
        concise_term_prec(k, alpha, digits)?
    };
    let mut sum = PrecReal::zero(digits + 10);
    let max_terms: u64 = 40 * (digits as u64 + 10) + 200;
    let mut i: u64 = 0;
    loop {
        sum = sum.add(&term);
        let x = Rational::from(alpha + Rational::from(i));
        if let Ok(rho) = ratio.tail_ratio_bound(&x) {
            if rho < threshold {
                let tail_scale = Rational::from(&rho / &(Rational::from(1) - &rho));
                let tail = term.abs().mul_rational(&tail_scale);
                let tail_mag = Rational::from(tail.midpoint_rational() + tail.error_bound());
                if tail_mag < target {
                    return Ok(sum.widen(&tail_mag));
                }
            }
        }
        if i >= max_terms {
            return Err(Error::NonConvergent(format!(
                "concise tail bound not reached after {} terms",
                max_terms
            )));
        }
        term = term.mul_rational(&ratio.eval(&x)?);
        i += 1;
    }
}

/// Exact Q(k,α) at integer α ≥ 1 for k ∈ {0,1}, by backward telescoping from
/// the stored Q(k,1): Q(k,α) = Q(k,1) − Σ_{i=1}^{α−1} f(i).
pub fn concise_q_exact(k: i64, alpha: i64) -> Result<Rational> {
    if alpha < 1 {
        return Err(Error::OutOfRange(format!("alpha = {} (need integer alpha >= 1)", alpha)));
    }
    let mut out = concise_seed(k)?;
    if alpha == 1 {
        return Ok(out);
    }
    let ratio = term_ratio(k)?;
    let mut term = concise_term_exact(k, &Rational::from(1))?;
    for i in 1..alpha {
        out -= &term;
        if i + 1 < alpha {
            term *= ratio.eval(&Rational::from(i))?;
        }
    }
    Ok(out)
}
