//! Legendre polynomials on [-1, 1], standard normalization P_j(1) = 1.

use super::{Polynomial, PrecReal};
use rug::Rational;

/// Exact coefficients of P_j via the three-term recurrence
/// (j+1) P_{j+1} = (2j+1) t P_j - j P_{j-1}.
pub fn legendre_coeffs(j: usize) -> Polynomial {
    let mut iter = LegendreIter::new();
    let mut p = iter.next().unwrap();
    for _ in 0..j {
        p = iter.next().unwrap();
    }
    p
}

/// Streaming generator of P_0, P_1, P_2, ... without retaining the whole
/// triangle (λ_j extraction at large degree walks this once).
pub struct LegendreIter {
    j: usize,
    prev: Polynomial,
    cur: Polynomial,
}

impl LegendreIter {
    pub fn new() -> Self {
        LegendreIter {
            j: 0,
            prev: Polynomial::zero(),
            cur: Polynomial::constant(Rational::from(1)),
        }
    }
}

impl Default for LegendreIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for LegendreIter {
    type Item = Polynomial;

    fn next(&mut self) -> Option<Polynomial> {
        let out = self.cur.clone();
        let j = self.j as i64;
        let t_pj = self.cur.mul(&Polynomial::from_integers(&[0, 1]));
        let next = t_pj
            .scale(&Rational::from(2 * j + 1))
            .sub(&self.prev.scale(&Rational::from(j)))
            .scale(&Rational::from((1, j + 1)));
        self.prev = std::mem::replace(&mut self.cur, next);
        self.j += 1;
        Some(out)
    }
}

/// Evaluate P_0(t) ... P_n(t) at an exact rational point by the scalar
/// three-term recurrence.
pub fn legendre_eval(n: usize, t: &Rational) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::from(1));
    if n == 0 {
        return out;
    }
    out.push(t.clone());
    for j in 1..n {
        let j_i = j as i64;
        let a = Rational::from(t * &out[j]) * Rational::from(2 * j_i + 1);
        let b = Rational::from(&out[j - 1] * Rational::from(j_i));
        out.push((a - b) / Rational::from(j_i + 1));
    }
    out
}

/// Same scalar recurrence in ball arithmetic.
pub fn legendre_eval_prec(n: usize, t: &PrecReal, digits: u32) -> Vec<PrecReal> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(PrecReal::from_rational(&Rational::from(1), digits));
    if n == 0 {
        return out;
    }
    out.push(t.clone());
    for j in 1..n {
        let j_i = j as i64;
        let a = t.mul(&out[j]).mul_rational(&Rational::from(2 * j_i + 1));
        let b = out[j - 1].mul_rational(&Rational::from(j_i));
        out.push(a.sub(&b).mul_rational(&Rational::from((1, j_i + 1))));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn first_three_standard_table() {
        assert_eq!(legendre_coeffs(0), Polynomial::from_integers(&[1]));
        assert_eq!(legendre_coeffs(1), Polynomial::from_integers(&[0, 1]));
        // (3t^2 - 1)/2
        assert_eq!(
            legendre_coeffs(2),
            Polynomial::new(vec![q(-1, 2), q(0, 1), q(3, 2)])
        );
    }

    #[test]
    fn normalization_at_one() {
        for (j, p) in LegendreIter::new().take(30).enumerate() {
            assert_eq!(p.eval(&q(1, 1)), 1, "P_{}(1)", j);
        }
    }

    #[test]
    fn three_term_recurrence_exact_to_200() {
        let mut it = LegendreIter::new();
        let mut prev = it.next().unwrap();
        let mut cur = it.next().unwrap();
        for j in 1..=200usize {
            let next = it.next().unwrap();
            let j_i = j as i64;
            let lhs = next.scale(&Rational::from(j_i + 1));
            let rhs = cur
                .mul(&Polynomial::from_integers(&[0, 1]))
                .scale(&Rational::from(2 * j_i + 1))
                .sub(&prev.scale(&Rational::from(j_i)));
            assert_eq!(lhs, rhs, "recurrence at j={}", j);
            prev = cur;
            cur = next;
        }
    }

    #[test]
    fn scalar_eval_matches_coeffs() {
        let t = q(15, 17);
        let vals = legendre_eval(40, &t);
        for j in [0usize, 1, 7, 23, 39] {
            assert_eq!(vals[j], legendre_coeffs(j).eval(&t));
        }
    }
}
