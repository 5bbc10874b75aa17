//! Arbitrary-precision reals with pessimistic error tracking.
//!
//! A [`PrecReal`] is a ball: an MPFR float carrying the computed value at the
//! working precision, plus an upper bound on the absolute error accumulated so
//! far. The number of certified decimal digits is derived from the ball radius,
//! never assumed. The working precision includes a fixed guard allowance on top
//! of the requested decimal digits.

use crate::{Error, Result};
use rug::float::Special;
use rug::ops::{CompleteRound, Pow};
use rug::{Float, Rational};

/// Guard digits added on top of the requested decimal precision.
pub const GUARD_DIGITS: u32 = 15;

const ERR_PREC: u32 = 64;
/// Headroom factor applied to every error-bound update, covering the rounding
/// of the 64-bit error arithmetic itself.
const FUDGE: f64 = 1.0 + 1e-9;

fn bits_for_digits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

fn digits_for_bits(bits: u32) -> u32 {
    (((bits - 8) as f64) / std::f64::consts::LOG2_10).floor() as u32
}

/// Real number with working precision in decimal digits and a tracked
/// absolute-error bound.
#[derive(Debug, Clone)]
pub struct PrecReal {
    v: Float,
    err: Float,
}

impl PrecReal {
    fn ulp(v: &Float) -> Float {
        if v.is_zero() {
            return Float::with_val(ERR_PREC, 0);
        }
        let mut u = Float::with_val(ERR_PREC, v.clone().abs());
        u >>= v.prec() - 1;
        u * FUDGE
    }

    fn make(v: Float, err: Float) -> Self {
        debug_assert!(err.is_sign_positive() || err.is_zero());
        PrecReal { v, err }
    }

    /// Exact rational input, rounded once at the working precision.
    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        let v = Float::with_val(bits_for_digits(digits + GUARD_DIGITS), q);
        let err = Self::ulp(&v);
        PrecReal { v, err }
    }

    pub fn from_integer(n: i64, digits: u32) -> Self {
        Self::from_rational(&Rational::from(n), digits)
    }

    /// Value parsed from a decimal string, claiming the stated number of
    /// correct significant digits.
    pub fn from_decimal_str(s: &str, claimed_digits: u32) -> Result<Self> {
        let digits = claimed_digits + GUARD_DIGITS;
        let parsed = Float::parse(s).map_err(|e| Error::Domain(format!("bad decimal {:?}: {}", s, e)))?;
        let v = Float::with_val(bits_for_digits(digits + GUARD_DIGITS), parsed);
        let err = if v.is_zero() {
            Float::with_val(ERR_PREC, 0)
        } else {
            let mag = Float::with_val(ERR_PREC, v.clone().abs());
            mag * Float::with_val(ERR_PREC, 10f64).pow(-(claimed_digits as i32)) * FUDGE
        };
        Ok(PrecReal { v, err })
    }

    pub fn pi(digits: u32) -> Self {
        let v = Float::with_val(bits_for_digits(digits + GUARD_DIGITS), rug::float::Constant::Pi);
        let err = Self::ulp(&v);
        PrecReal { v, err }
    }

    pub fn zero(digits: u32) -> Self {
        PrecReal {
            v: Float::with_val(bits_for_digits(digits + GUARD_DIGITS), 0),
            err: Float::with_val(ERR_PREC, 0),
        }
    }

    /// Working precision in decimal digits (requested digits + guard).
    pub fn working_digits(&self) -> u32 {
        digits_for_bits(self.v.prec())
    }

    /// Requested precision in decimal digits (working digits minus guard).
    pub fn precision(&self) -> u32 {
        self.working_digits().saturating_sub(GUARD_DIGITS)
    }

    /// Lower bound on correct significant decimal digits, `None` when the
    /// error ball does not separate the value from zero.
    pub fn certified_digits(&self) -> Option<u32> {
        if self.err.is_zero() {
            return Some(self.working_digits());
        }
        if !self.err.is_finite() {
            return None;
        }
        if self.v.is_zero() {
            return None;
        }
        let ratio = Float::with_val(ERR_PREC, self.v.clone().abs()) / &self.err;
        if ratio <= 1 {
            return None;
        }
        let d = ratio.log10().to_f64().floor();
        if d < 1.0 {
            None
        } else {
            Some((d as u32).min(self.working_digits()))
        }
    }

    /// Midpoint as an exact rational (the float value itself is dyadic).
    pub fn midpoint_rational(&self) -> Rational {
        self.v.to_rational().expect("finite float")
    }

    /// Absolute error bound.
    pub fn error_bound(&self) -> Rational {
        self.err.to_rational().unwrap_or_else(|| Rational::from(0))
    }

    pub fn error_is_finite(&self) -> bool {
        self.err.is_finite()
    }

    pub fn to_f64(&self) -> f64 {
        self.v.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.v.is_zero() {
            0
        } else if self.v.is_sign_positive() {
            1
        } else {
            -1
        }
    }

    /// True when the error ball definitely excludes zero.
    pub fn definitely_nonzero(&self) -> bool {
        !self.v.is_zero() && self.err.is_finite() && self.v.clone().abs() > self.err
    }

    fn prec_of(a: &Self, b: &Self) -> u32 {
        a.v.prec().max(b.v.prec())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let v = (&self.v + &rhs.v).complete(Self::prec_of(self, rhs));
        let err = (Float::with_val(ERR_PREC, &self.err) + &rhs.err) * FUDGE + Self::ulp(&v);
        Self::make(v, err)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let v = (&self.v - &rhs.v).complete(Self::prec_of(self, rhs));
        let err = (Float::with_val(ERR_PREC, &self.err) + &rhs.err) * FUDGE + Self::ulp(&v);
        Self::make(v, err)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let v = (&self.v * &rhs.v).complete(Self::prec_of(self, rhs));
        let a = Float::with_val(ERR_PREC, self.v.clone().abs());
        let b = Float::with_val(ERR_PREC, rhs.v.clone().abs());
        let err = (a * &rhs.err + b * &self.err
            + Float::with_val(ERR_PREC, &self.err) * &rhs.err)
            * FUDGE
            + Self::ulp(&v);
        Self::make(v, err)
    }

    pub fn div(&self, rhs: &Self) -> Self {
        let v = (&self.v / &rhs.v).complete(Self::prec_of(self, rhs));
        let b = Float::with_val(ERR_PREC, rhs.v.clone().abs());
        if !(b.clone() > Float::with_val(ERR_PREC, &rhs.err)) {
            // denominator ball contains zero: nothing is certified
            return Self::make(v, Float::with_val(ERR_PREC, Special::Infinity));
        }
        let denom = b.clone() - Float::with_val(ERR_PREC, &rhs.err);
        let r_abs = Float::with_val(ERR_PREC, v.clone().abs());
        let err = ((Float::with_val(ERR_PREC, &self.err) + r_abs * &rhs.err) / denom) * FUDGE
            + Self::ulp(&v);
        Self::make(v, err)
    }

    /// Same midpoint with the error ball enlarged by an extra absolute
    /// margin (used to absorb analytically bounded truncation tails).
    pub fn widen(&self, extra: &Rational) -> Self {
        let extra_f = Float::with_val(ERR_PREC, extra.clone().abs());
        let err = Float::with_val(ERR_PREC, &self.err) * FUDGE + extra_f;
        Self::make(self.v.clone(), err)
    }

    pub fn neg(&self) -> Self {
        Self::make((-&self.v).complete(self.v.prec()), self.err.clone())
    }

    pub fn abs(&self) -> Self {
        Self::make(self.v.clone().abs(), self.err.clone())
    }

    pub fn mul_rational(&self, q: &Rational) -> Self {
        let v = (&self.v * q).complete(self.v.prec());
        let qa = Float::with_val(ERR_PREC, q.clone().abs());
        let err = Float::with_val(ERR_PREC, &self.err) * qa * FUDGE + Self::ulp(&v);
        Self::make(v, err)
    }

    pub fn add_rational(&self, q: &Rational) -> Self {
        let v = (&self.v + q).complete(self.v.prec());
        let err = Float::with_val(ERR_PREC, &self.err) * FUDGE + Self::ulp(&v);
        Self::make(v, err)
    }

    pub fn ln(&self) -> Result<Self> {
        let x = Float::with_val(ERR_PREC, self.v.clone().abs());
        if !self.v.is_sign_positive() || self.v.is_zero() {
            return Err(Error::Domain("ln of nonpositive value".into()));
        }
        let v = self.v.clone().ln();
        if !(x.clone() > Float::with_val(ERR_PREC, &self.err)) {
            return Ok(Self::make(v, Float::with_val(ERR_PREC, Special::Infinity)));
        }
        let denom = x - Float::with_val(ERR_PREC, &self.err);
        let err = (Float::with_val(ERR_PREC, &self.err) / denom) * FUDGE + Self::ulp(&v);
        Ok(Self::make(v, err))
    }

    pub fn exp(&self) -> Self {
        let v = self.v.clone().exp();
        let r_abs = Float::with_val(ERR_PREC, v.clone().abs());
        // |e^(x+d) - e^x| <= |e^x| d e^d; the fudge covers e^d for tiny d,
        // and we widen explicitly when d is not tiny.
        let d = Float::with_val(ERR_PREC, &self.err);
        let grow = if d > 0.5f64 {
            d.clone().exp()
        } else {
            Float::with_val(ERR_PREC, 2)
        };
        let err = r_abs * d * grow * FUDGE + Self::ulp(&v);
        Self::make(v, err)
    }

    /// x^e for an exact rational exponent, via MPFR pow; requires x > 0.
    pub fn pow_rational(&self, e: &Rational, digits: u32) -> Result<Self> {
        if !self.v.is_sign_positive() || self.v.is_zero() {
            return Err(Error::Domain("pow of nonpositive base".into()));
        }
        let prec = bits_for_digits(digits + GUARD_DIGITS).max(self.v.prec());
        let ef = Float::with_val(prec, e);
        let v = self.v.clone().pow(&ef);
        // derivative wrt base: e * x^(e-1)
        let x = Float::with_val(ERR_PREC, self.v.clone().abs());
        let r_abs = Float::with_val(ERR_PREC, v.clone().abs());
        let cond = Float::with_val(ERR_PREC, e.clone().abs()) * r_abs / x;
        let err = cond * Float::with_val(ERR_PREC, &self.err) * FUDGE + Self::ulp(&v);
        Ok(Self::make(v, err))
    }

    fn is_near_nonpositive_integer(&self) -> bool {
        if self.v.is_sign_positive() && !self.v.is_zero() {
            let low = Float::with_val(64, &self.v) - Float::with_val(64, &self.err);
            if low > 0 {
                return false;
            }
        }
        let nearest = self.v.clone().round();
        if nearest > 0 {
            return false;
        }
        let dist = Float::with_val(ERR_PREC, (&self.v - &nearest).complete(ERR_PREC).abs());
        dist <= Float::with_val(ERR_PREC, &self.err) * 2u32 + Float::with_val(ERR_PREC, 1e-30)
    }

    pub fn gamma(&self) -> Result<Self> {
        if self.is_near_nonpositive_integer() {
            return Err(Error::Pole(format!("gamma near {}", self.v.to_f64())));
        }
        let v = self.v.clone().gamma();
        let psi = Float::with_val(ERR_PREC, self.v.clone().digamma().abs());
        let r_abs = Float::with_val(ERR_PREC, v.clone().abs());
        let err = r_abs * psi * Float::with_val(ERR_PREC, &self.err) * FUDGE + Self::ulp(&v);
        Ok(Self::make(v, err))
    }

    pub fn ln_gamma(&self) -> Result<Self> {
        if !self.v.is_sign_positive() || self.v.is_zero() {
            return Err(Error::Domain("ln_gamma requires x > 0".into()));
        }
        let v = self.v.clone().ln_gamma();
        let psi = Float::with_val(ERR_PREC, self.v.clone().digamma().abs());
        let err = psi * Float::with_val(ERR_PREC, &self.err) * FUDGE + Self::ulp(&v);
        Ok(Self::make(v, err))
    }

    /// Compare midpoints (total order on the computed values).
    pub fn cmp_value(&self, rhs: &Self) -> std::cmp::Ordering {
        self.v.partial_cmp(&rhs.v).expect("finite floats")
    }

    /// Decimal rendering with an explicit digit count. Shows at most the
    /// certified digits unless `digits` asks for fewer.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let shown = digits.max(1);
        self.v.to_string_radix(10, Some(shown as usize))
    }
}

impl std::fmt::Display for PrecReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let d = self.certified_digits().unwrap_or(6).min(self.working_digits());
        write!(f, "{}", self.to_decimal_string(d))
    }
}

/// Rising factorial with real (possibly non-integer) order, as
/// Gamma(x + order) / Gamma(x).
pub fn pochhammer_real(x: &PrecReal, order: &PrecReal) -> Result<PrecReal> {
    let top = x.add(order).gamma()?;
    let bottom = x.gamma()?;
    Ok(top.div(&bottom))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(n: i64, d: i64, digits: u32) -> PrecReal {
        PrecReal::from_rational(&Rational::from((n, d)), digits)
    }

    #[test]
    fn gamma_standard_values() {
        let one = pr(1, 1, 50).gamma().unwrap();
        assert!(one.sub(&pr(1, 1, 50)).abs().to_f64() < 1e-45);
        let half = pr(1, 2, 50).gamma().unwrap();
        let pi = PrecReal::pi(50);
        let sqrt_pi = pi.pow_rational(&Rational::from((1, 2)), 50).unwrap();
        assert!(half.sub(&sqrt_pi).abs().to_f64() < 1e-45);
        assert!(half.certified_digits().unwrap() >= 50);
    }

    #[test]
    fn gamma_nine_halves() {
        // Gamma(9/2) = 105 sqrt(pi) / 16
        let g = pr(9, 2, 60).gamma().unwrap();
        let pi = PrecReal::pi(60);
        let expect = pi
            .pow_rational(&Rational::from((1, 2)), 60)
            .unwrap()
            .mul_rational(&Rational::from((105, 16)));
        assert!(g.sub(&expect).abs().to_f64() < 1e-55);
    }

    #[test]
    fn gamma_pole_detected() {
        assert!(pr(0, 1, 30).gamma().is_err());
        assert!(pr(-3, 1, 30).gamma().is_err());
        assert!(pr(-7, 2, 30).gamma().is_ok());
    }

    #[test]
    fn pochhammer_real_half_order() {
        // (1/2)_(1/2) = Gamma(1)/Gamma(1/2) = 1/sqrt(pi)
        let r = pochhammer_real(&pr(1, 2, 50), &pr(1, 2, 50)).unwrap();
        let pi = PrecReal::pi(50);
        let inv_sqrt_pi = pi.pow_rational(&Rational::from((-1, 2)), 50).unwrap();
        assert!(r.sub(&inv_sqrt_pi).abs().to_f64() < 1e-45);
    }

    #[test]
    fn pochhammer_real_integer_order_matches_exact() {
        // (3/2)_2 = 15/4
        let r = pochhammer_real(&pr(3, 2, 50), &pr(2, 1, 50)).unwrap();
        assert!(r.sub(&pr(15, 4, 50)).abs().to_f64() < 1e-45);
        assert!(r.certified_digits().unwrap() >= 50);
    }

    #[test]
    fn pochhammer_real_unit() {
        let r = pochhammer_real(&pr(1, 1, 40), &pr(1, 1, 40)).unwrap();
        assert!(r.sub(&pr(1, 1, 40)).abs().to_f64() < 1e-35);
    }

    #[test]
    fn cancellation_degrades_certified_digits() {
        let a = pr(1, 3, 40);
        let tiny = pr(1, 1, 40).mul_rational(&Rational::from((1, 10)).pow(30));
        let b = a.add(&tiny);
        let d = b.sub(&a);
        // thirty digits cancelled out of ~55 working digits
        assert!(d.certified_digits().unwrap_or(0) < 30);
    }

    #[test]
    fn certified_never_exceeds_error_budget() {
        // ln(gamma(x+1)) - ln(gamma(x)) - ln(x) == 0 up to certified digits
        let x = pr(37, 7, 80);
        let lhs = x.add_rational(&Rational::from(1)).ln_gamma().unwrap();
        let rhs = x.ln_gamma().unwrap().add(&x.ln().unwrap());
        let diff = lhs.sub(&rhs);
        assert!(diff.certified_digits().is_none() || diff.abs().to_f64() < 1e-60);
    }
}
