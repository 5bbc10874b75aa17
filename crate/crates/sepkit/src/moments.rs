//! Exact determinantal moments of D = |rho^PT| - |rho| under random induced
//! measure, evaluated as terminating hypergeometric sums in rational
//! arithmetic.

use crate::numerics::pochhammer;
use crate::{Error, Result};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentRequest {
    /// Induced-measure offset; the embedding dimension is 4 x (4 + k).
    pub k: i64,
    /// Dyson-index-like parameter (1/2 real, 1 complex).
    pub alpha: Rational,
    /// Moment order.
    pub n: u64,
}

#[derive(Debug, Clone)]
pub struct MomentSequence {
    pub k: i64,
    pub alpha: Rational,
    pub values: Vec<Rational>,
}

fn check_params(k: i64, alpha: &Rational) -> Result<()> {
    if k < -1 {
        return Err(Error::OutOfRange(format!("k = {} < -1", k)));
    }
    if alpha.cmp0() != std::cmp::Ordering::Greater {
        return Err(Error::OutOfRange(format!("alpha = {} must be positive", alpha)));
    }
    Ok(())
}

/// Terminating unit-argument series sum over exact rationals. Terminates as
/// soon as an upper Pochhammer factor hits zero; a lower factor hitting zero
/// first is a parameter-pole error.
fn terminating_pfq_unit(upper: &[Rational], lower: &[Rational]) -> Result<Rational> {
    let mut sum = Rational::from(1);
    let mut term = Rational::from(1);
    let mut j: u64 = 0;
    loop {
        // factors entering at index j: (u + j), (l + j), divided by (j + 1)
        let mut next = term.clone();
        let mut terminated = false;
        for u in upper {
            let f = Rational::from(u + Rational::from(j));
            if f.cmp0() == std::cmp::Ordering::Equal {
                terminated = true;
                break;
            }
            next *= f;
        }
        if terminated {
            return Ok(sum);
        }
        for l in lower {
            let f = Rational::from(l + Rational::from(j));
            if f.cmp0() == std::cmp::Ordering::Equal {
                return Err(Error::Pole(format!(
                    "lower parameter {} reaches a nonpositive integer at series index {}",
                    l,
                    j + 1
                )));
            }
            next /= f;
        }
        next /= Rational::from(j + 1);
        sum += &next;
        term = next;
        j += 1;
        if j > 1_000_000 {
            return Err(Error::NonConvergent("series failed to terminate".into()));
        }
    }
}

/// Normalized determinantal moment
/// < |rho|^k (|rho^PT| - |rho|)^n > / < |rho|^k >, exact.
pub fn d_moment(k: i64, alpha: &Rational, n: u64) -> Result<Rational> {
    check_params(k, alpha)?;
    if n == 0 {
        return Ok(Rational::from(1));
    }
    let a = alpha;
    let half = Rational::from((1, 2));
    let n_r = Rational::from(n);
    let k_r = Rational::from(k);

    // prefactor (-1)^n (a)_n (a+1/2)_n (n+2k+2+5a)_n
    //           / (2^{4n} (k+3a+3/2)_n (2k+6a+5/2)_{2n})
    let p1 = pochhammer(a, n);
    let p2 = pochhammer(&Rational::from(a + &half), n);
    let p3 = pochhammer(
        &(Rational::from(&n_r + Rational::from(2 * k + 2)) + Rational::from(a * Rational::from(5))),
        n,
    );
    let q1 = pochhammer(
        &(Rational::from(&k_r + Rational::from(a * Rational::from(3))) + Rational::from((3, 2))),
        n,
    );
    let q2 = pochhammer(
        &(Rational::from(2 * k) + Rational::from(a * Rational::from(6)) + Rational::from((5, 2))),
        2 * n,
    );
    let mut pref = p1 * p2 * p3 / (q1 * q2);
    pref /= Rational::from(Rational::from(2).pow(4 * n as u32));
    if n % 2 == 1 {
        pref = -pref;
    }

    let upper = vec![
        Rational::from(-&n_r) / Rational::from(2),
        Rational::from(Rational::from(1) - &n_r) / Rational::from(2),
        Rational::from(&k_r + Rational::from(1)) + a,
        Rational::from(&k_r + Rational::from(1)) + Rational::from(a * Rational::from(2)),
    ];
    let lower = vec![
        Rational::from(Rational::from(1) - &n_r) - a,
        Rational::from(&half - &n_r) - a,
        Rational::from(&n_r + Rational::from(2 * k + 2)) + Rational::from(a * Rational::from(5)),
    ];
    let f = terminating_pfq_unit(&upper, &lower)?;
    Ok(pref * f)
}

/// Hilbert-Schmidt (k = 0) moment < |rho^PT|^n >, exact. The n = 0 value is
/// 1 by definition (normalization); the printed two-term formula is used for
/// n >= 1.
pub fn pt_moment_hs(alpha: &Rational, n: u64) -> Result<Rational> {
    check_params(0, alpha)?;
    if n == 0 {
        return Ok(Rational::from(1));
    }
    let a = alpha;
    let half = Rational::from((1, 2));
    let n_r = Rational::from(n);

    let common_q1 = pochhammer(&(Rational::from(a * Rational::from(3)) + Rational::from((3, 2))), n);
    let common_q2 = pochhammer(&(Rational::from(a * Rational::from(6)) + Rational::from((5, 2))), 2 * n);

    // first closed term: n! (a+1)_n (2a+1)_n / (2^{6n} ...)
    let t1 = Rational::from(crate::numerics::factorial(n))
        * pochhammer(&Rational::from(a + Rational::from(1)), n)
        * pochhammer(&(Rational::from(a * Rational::from(2)) + Rational::from(1)), n)
        / (Rational::from(Rational::from(2).pow(6 * n as u32)) * &common_q1 * &common_q2);

    // second term with the terminating 5F4
    let neg_head = Rational::from(-Rational::from(2) * &n_r)
        - Rational::from(1)
        - Rational::from(a * Rational::from(5));
    let pre2 = pochhammer(&neg_head, n) * pochhammer(a, n) * pochhammer(&Rational::from(a + &half), n)
        / (Rational::from(Rational::from(2).pow(4 * n as u32)) * &common_q1 * &common_q2);

    let upper = vec![
        Rational::from(Rational::from(2) - &n_r) / Rational::from(2),
        Rational::from(Rational::from(1) - &n_r) / Rational::from(2),
        Rational::from(-&n_r),
        Rational::from(a + Rational::from(1)),
        Rational::from(a * Rational::from(2)) + Rational::from(1),
    ];
    let lower = vec![
        Rational::from(Rational::from(1) - &n_r),
        Rational::from(&n_r + Rational::from(2)) + Rational::from(a * Rational::from(5)),
        Rational::from(Rational::from(1) - &n_r) - a,
        Rational::from(&half - &n_r) - a,
    ];
    let f = terminating_pfq_unit(&upper, &lower)?;
    Ok(t1 + pre2 * f)
}

/// Moments of D for n = 0..=max_order, each computed independently.
pub fn moment_sequence(k: i64, alpha: &Rational, max_order: u64) -> Result<MomentSequence> {
    check_params(k, alpha)?;
    let values: Result<Vec<Rational>> = (0..=max_order)
        .into_par_iter()
        .map(|n| d_moment(k, alpha, n).map_err(|e| Error::Pole(format!("n = {}: {}", n, e))))
        .collect();
    Ok(MomentSequence { k, alpha: alpha.clone(), values: values? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::det_rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn zeroth_moment_is_one() {
        assert_eq!(d_moment(0, &q(1, 1), 0).unwrap(), 1);
        assert_eq!(pt_moment_hs(&q(1, 1), 0).unwrap(), 1);
    }

    #[test]
    fn first_moment_hand_value() {
        assert_eq!(d_moment(0, &q(1, 1), 1).unwrap(), q(-2, 969));
    }

    #[test]
    fn pt_first_moment_hand_value() {
        assert_eq!(pt_moment_hs(&q(1, 1), 1).unwrap(), q(-7, 3876));
    }

    #[test]
    fn sequence_composition() {
        let s = moment_sequence(0, &q(1, 1), 2).unwrap();
        assert_eq!(s.values[0], 1);
        assert_eq!(s.values[1], q(-2, 969));
        assert_eq!(s.values[2], d_moment(0, &q(1, 1), 2).unwrap());
    }

    #[test]
    fn first_moment_always_negative() {
        for k in [-1i64, 0, 1, 3] {
            for a in [q(1, 2), q(1, 1), q(2, 1), q(7, 3)] {
                assert!(d_moment(k, &a, 1).unwrap() < 0, "k={} a={}", k, a);
            }
        }
    }

    #[test]
    fn moments_bounded_by_bell_extreme() {
        // |mu_n| < (1/16)^n, n >= 1
        for k in [-1i64, 0, 2] {
            for a in [q(1, 2), q(1, 1)] {
                let s = moment_sequence(k, &a, 8).unwrap();
                for (n, v) in s.values.iter().enumerate().skip(1) {
                    let bound = q(1, 16).pow(n as u32);
                    assert!(v.clone().abs() < bound, "k={} a={} n={}", k, a, n);
                }
            }
        }
    }

    #[test]
    fn hankel_positive_semidefinite() {
        // moments of a genuine law: Hankel matrix H[i][j] = mu_{i+j} is PSD;
        // checked through leading principal minors in exact arithmetic
        for k in [-1i64, 0, 1, 2] {
            for a in [q(1, 2), q(1, 1), q(2, 1)] {
                let n_max = 20u64;
                let s = moment_sequence(k, &a, n_max).unwrap();
                let m = (n_max / 2) as usize + 1;
                for size in 1..=m {
                    let h: Vec<Vec<Rational>> = (0..size)
                        .map(|i| (0..size).map(|j| s.values[i + j].clone()).collect())
                        .collect();
                    assert!(
                        det_rational(&h) > 0,
                        "Hankel minor {} at k={} alpha={}",
                        size,
                        k,
                        a
                    );
                }
            }
        }
    }

    #[test]
    fn termination_bound() {
        // the 4F3 sums at most floor(n/2)+1 terms: indirectly verified by the
        // lower parameter (1-n-alpha) at alpha=1 which would pole at j=n+1
        assert!(d_moment(0, &q(1, 1), 12).is_ok());
        assert!(d_moment(0, &q(1, 1), 13).is_ok());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(d_moment(-2, &q(1, 1), 1).is_err());
        assert!(d_moment(0, &q(-1, 1), 1).is_err());
    }
}
