//! Special exact formulas: the two-rebit (α = 1/2) total separability
//! probability as a function of k, and the seed-swap correction term for the
//! k = −1 difference equation.

use crate::numerics::{factorial, pochhammer, pochhammer_real, PrecReal};
use crate::{Error, Rational, Result};
use rug::ops::Pow;
use rug::Integer;

/// Two-rebit total separability probability
/// P_k = 1 − 4^(k+1)(8k+15)·Γ(k+2)·Γ(2k+9/2) / (√π·Γ(3k+7)),
/// reduced exactly: the half-integer gamma carries the √π that the
/// denominator removes.
pub fn rebit_total_prob(k: i64) -> Result<Rational> {
    if k < 0 {
        return Err(Error::OutOfRange(format!("k = {} (need k >= 0)", k)));
    }
    let (g_half, pi_pow) = super::gamma_half_signed(4 * k + 9)?;
    debug_assert_eq!(pi_pow, 1);
    let mut sub = Rational::from(Integer::from(4).pow((k + 1) as u32));
    sub *= Rational::from(8 * k + 15);
    sub *= Rational::from(factorial((k + 1) as u64));
    sub *= g_half;
    sub /= Rational::from(factorial((3 * k + 6) as u64));
    Ok(Rational::from(1) - sub)
}

const CORRECTION_DENOMINATOR: i64 = 52_055_003;

fn correction_pochhammer_bases() -> [Rational; 5] {
    [
        Rational::from((9, 10)),
        Rational::from((11, 10)),
        Rational::from((13, 10)),
        Rational::from((3, 2)),
        Rational::from((17, 10)),
    ]
}

/// Exact rational value of the k = −1 correction term at integer α ≥ 1.
///
/// The printed form carries π·Γ(α+1/6)Γ(α+5/6) in numerator and denominator;
/// at integer α the reflection product Γ(1/6)Γ(5/6) = π/sin(π/6) = 2π reduces
/// the whole expression to an exact rational.
pub fn kminus1_correction_exact(alpha: i64) -> Result<Rational> {
    if alpha < 1 {
        return Err(Error::OutOfRange(format!("alpha = {} (need integer alpha >= 1)", alpha)));
    }
    let a = alpha as u64;
    let mut out = Rational::from((Integer::from(1), Integer::from(3).pow((3 * a + 5) as u32)));
    out *= Rational::from(Integer::from(4).pow((3 * a + 2) as u32));
    out *= Rational::from(Integer::from(5).pow((5 * a + 3) as u32));
    for base in correction_pochhammer_bases() {
        out *= pochhammer(&base, a + 1);
    }
    out *= Rational::from(factorial(a - 1));
    out *= Rational::from(factorial(a + 1));
    out /= Rational::from(CORRECTION_DENOMINATOR);
    out /= Rational::from(factorial(5 * a - 1));
    // π / (Γ(1/6)Γ(5/6)·(1/6)_α(5/6)_α) = 1 / (2·(1/6)_α(5/6)_α)
    out /= Rational::from(2);
    out /= pochhammer(&Rational::from((1, 6)), a);
    out /= pochhammer(&Rational::from((5, 6)), a);
    Ok(out)
}

/// Ball evaluation of the k = −1 correction term at any rational α > 0.
pub fn kminus1_correction_prec(alpha: &Rational, digits: u32) -> Result<PrecReal> {
    if *alpha <= 0 {
        return Err(Error::OutOfRange(format!("alpha = {} (need alpha > 0)", alpha)));
    }
    let d = digits + 10;
    let q = |n: i64, den: i64| Rational::from((n, den));
    let mut out = PrecReal::pi(d);
    for (base, exp) in [
        (3i64, Rational::from(alpha * Rational::from(-3)) - 5),
        (4, Rational::from(alpha * Rational::from(3)) + 2),
        (5, Rational::from(alpha * Rational::from(5)) + 3),
    ] {
        out = out.mul(&PrecReal::from_rational(&Rational::from(base), d).pow_rational(&exp, d)?);
    }
    let order = PrecReal::from_rational(&Rational::from(alpha + Rational::from(1)), d);
    for base in correction_pochhammer_bases() {
        out = out.mul(&pochhammer_real(&PrecReal::from_rational(&base, d), &order)?);
    }
    let gamma_at = |c: Rational| -> Result<PrecReal> { PrecReal::from_rational(&c, d).gamma() };
    out = out.mul(&gamma_at(alpha.clone())?);
    out = out.mul(&gamma_at(Rational::from(alpha + Rational::from(2)))?);
    out = out.mul_rational(&q(1, CORRECTION_DENOMINATOR));
    out = out.div(&gamma_at(Rational::from(alpha * Rational::from(5)))?);
    out = out.div(&gamma_at(Rational::from(alpha + q(1, 6)))?);
    out = out.div(&gamma_at(Rational::from(alpha + q(5, 6)))?);
    Ok(out)
}
