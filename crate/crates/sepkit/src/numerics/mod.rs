//! Foundation layer: exact rational arithmetic helpers, arbitrary-precision
//! ball reals, polynomials, Legendre machinery, rational reconstruction and
//! least-squares fitting.

mod fit;
mod legendre;
mod linalg;
mod polynomial;
mod precreal;
mod rationalize;

pub use fit::{linear_fit, LinearFit};
pub use legendre::{legendre_coeffs, legendre_eval, legendre_eval_prec, LegendreIter};
pub use linalg::{det_rational, nullspace};
pub use polynomial::Polynomial;
pub use precreal::{pochhammer_real, PrecReal};
pub use rationalize::rationalize;

use crate::{Error, Result};
use rug::{Integer, Rational};

/// Affine function of alpha with exact rational slope and offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineParam {
    pub slope: Rational,
    pub offset: Rational,
}

impl AffineParam {
    pub fn new(slope: Rational, offset: Rational) -> Self {
        AffineParam { slope, offset }
    }

    /// Unit slope, given offset: the common shape `alpha + offset`.
    pub fn unit(offset: Rational) -> Self {
        AffineParam { slope: Rational::from(1), offset }
    }

    pub fn eval(&self, alpha: &Rational) -> Rational {
        Rational::from(&self.slope * alpha) + &self.offset
    }

    /// Shift the offset by an integer amount (used by the minus-one family).
    pub fn shifted(&self, delta: i64) -> Self {
        AffineParam {
            slope: self.slope.clone(),
            offset: Rational::from(&self.offset + Rational::from(delta)),
        }
    }
}

impl std::fmt::Display for AffineParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.slope == 1 {
            write!(f, "α + {}", self.offset)
        } else {
            write!(f, "{}·α + {}", self.slope, self.offset)
        }
    }
}

/// Rising factorial (x)_n = x (x+1) ... (x+n-1) over exact rationals.
pub fn pochhammer(x: &Rational, n: u64) -> Rational {
    let mut acc = Rational::from(1);
    let mut t = x.clone();
    for _ in 0..n {
        acc *= &t;
        t += 1;
    }
    acc
}

/// Exact factorial.
pub fn factorial(n: u64) -> Integer {
    Integer::factorial(n as u32).into()
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> Integer {
    Integer::from(n).binomial(k as u32)
}

/// Mathematical floor of an exact rational (rounds toward minus infinity).
pub fn floor_rational(q: &Rational) -> Integer {
    q.clone().floor().into_numer_denom().0
}

/// Gamma at a positive integer or half-integer argument `two_x / 2`,
/// returned as an exact rational together with the power (0 or 1) of
/// sqrt(pi) it carries.
pub fn gamma_half(two_x: i64) -> Result<(Rational, u32)> {
    if two_x <= 0 {
        return Err(Error::Pole(format!("gamma at {}/2", two_x)));
    }
    if two_x % 2 == 0 {
        let m = (two_x / 2) as u64;
        Ok((Rational::from(factorial(m - 1)), 0))
    } else {
        // Gamma(m + 1/2) = (2m)! / (4^m m!) * sqrt(pi), with m = (two_x-1)/2
        let m = ((two_x - 1) / 2) as u64;
        let num = factorial(2 * m);
        let den = factorial(m) * (Integer::from(1) << (2 * m as u32));
        Ok((Rational::from((num, den)), 1))
    }
}

/// Ratio Gamma(a/2) / Gamma(b/2) when it is exactly rational, i.e. when the
/// sqrt(pi) contributions cancel (both half-integer or both integer).
pub fn gamma_half_ratio(two_a: i64, two_b: i64) -> Result<Rational> {
    let (na, pa) = gamma_half(two_a)?;
    let (nb, pb) = gamma_half(two_b)?;
    if pa != pb {
        return Err(Error::Domain(format!(
            "Gamma({}/2)/Gamma({}/2) is not rational",
            two_a, two_b
        )));
    }
    Ok(na / nb)
}

/// Canonical "p/q" string for an exact rational ("p" alone when q = 1).
pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}

/// Parse the canonical "p/q" form (or a bare integer).
pub fn rational_from_string(s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|e| Error::Domain(format!("bad rational {:?}: {}", s, e)))
}
