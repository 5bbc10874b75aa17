//! Dense univariate polynomials over exact rationals, variable α.

use super::PrecReal;
use crate::{Error, Result};
use rug::{Integer, Rational};

/// Dense polynomial, coefficients in ascending degree. The zero polynomial is
/// the empty coefficient list; otherwise the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().map_or(false, |c| c.cmp0() == std::cmp::Ordering::Equal) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::new(vec![c])
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    /// Monomial c·α^d.
    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut coeffs = vec![Rational::from(0); d + 1];
        coeffs[d] = c;
        Polynomial::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports degree 0 by convention here.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Rational::from(0))
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(|| Rational::from(0))
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::from(0);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_prec(&self, x: &PrecReal, digits: u32) -> PrecReal {
        let mut acc = PrecReal::zero(digits);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add_rational(c);
        }
        acc
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        Polynomial::new(out)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&Rational::from(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Polynomial::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::from(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Polynomial::new(out)
    }

    /// Exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(rhs)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Inconsistent("polynomial division leaves a remainder".into()))
        }
    }

    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self)> {
        if rhs.is_zero() {
            return Err(Error::Degenerate("division by zero polynomial".into()));
        }
        let mut rem = self.coeffs.clone();
        let d = rhs.degree();
        let lead = rhs.leading();
        if rem.len() < rhs.coeffs.len() {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quo = vec![Rational::from(0); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = Rational::from(&rem[i] / &lead);
            if c.cmp0() != std::cmp::Ordering::Equal {
                for j in 0..=d {
                    let t = Rational::from(&c * &rhs.coeffs[j]);
                    rem[i - d + j] -= t;
                }
            }
            quo[i - d] = c;
        }
        Ok((Polynomial::new(quo), Polynomial::new(rem)))
    }

    /// True when `factor` divides this polynomial exactly.
    pub fn divisible_by(&self, factor: &Self) -> bool {
        self.div_rem(factor).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Clear denominators and divide out the integer content; keeps the sign.
    pub fn primitive_integer_part(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut lcm = Integer::from(1);
        for c in &self.coeffs {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| Rational::from(c * Rational::from(&lcm)).into_numer_denom().0)
            .collect();
        let mut gcd = Integer::from(0);
        for c in &ints {
            gcd = gcd.gcd(c);
        }
        Polynomial::new(ints.iter().map(|c| Rational::from(Integer::from(c / &gcd))).collect())
    }

    /// Total bit size of the integer coefficients (tie-breaking metric).
    pub fn bit_size(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().significant_bits() as u64 + c.denom().significant_bits() as u64)
            .sum()
    }
}

impl std::fmt::Display for Polynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.cmp0() == std::cmp::Ordering::Equal {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.cmp0() == std::cmp::Ordering::Less { "-" } else { "+" })?;
            } else if c.cmp0() == std::cmp::Ordering::Less {
                write!(f, "-")?;
            }
            let a = c.clone().abs();
            match i {
                0 => write!(f, "{}", a)?,
                _ => {
                    if a != 1 {
                        write!(f, "{}·", a)?;
                    }
                    if i == 1 {
                        write!(f, "α")?;
                    } else {
                        write!(f, "α^{}", i)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}
