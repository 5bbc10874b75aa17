//! Rational reconstruction from a certified decimal value.

use super::PrecReal;
use crate::{Error, Result};
use rug::{Integer, Rational};

/// Smallest-denominator rational inside the closed interval [lo, hi]
/// (continued-fraction / Stern-Brocot walk).
fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    let floor_lo: Integer = lo.clone().floor().into_numer_denom().0;
    let ceil_lo: Integer = lo.clone().ceil().into_numer_denom().0;
    if Rational::from(&ceil_lo) <= *hi {
        // an integer lies in the interval; for negative intervals the walk
        // below keeps signs straight, so handle integers directly here
        return Rational::from(ceil_lo);
    }
    // now floor(lo) == floor(hi) and the interval is within one unit interval
    let a = floor_lo;
    let lo_frac = Rational::from(lo - Rational::from(&a));
    let hi_frac = Rational::from(hi - Rational::from(&a));
    // recurse on reciprocals, swapped
    let inner = simplest_in_interval(
        &Rational::from(hi_frac.recip_ref()),
        &Rational::from(lo_frac.recip_ref()),
    );
    Rational::from(&a) + inner.recip()
}

/// Recover the unique rational p/q with q <= `max_denominator` lying inside
/// the certified error ball of `v`. Errors when the ball cannot isolate a
/// unique candidate; `Ok(None)` when no such rational exists.
pub fn rationalize(v: &PrecReal, max_denominator: &Integer) -> Result<Option<Rational>> {
    if v.certified_digits().is_none() && !v.is_zero() {
        return Err(Error::Ambiguous(
            "value carries no certified digits".into(),
        ));
    }
    let mid = v.midpoint_rational();
    let r = v.error_bound();
    let lo = Rational::from(&mid - &r);
    let hi = Rational::from(&mid + &r);
    let cand = simplest_in_interval(&lo, &hi);
    if cand.denom() > max_denominator {
        return Ok(None);
    }
    // any second candidate with denominator <= max_denominator differs from
    // cand by at least 1/(q_cand * max_denominator); the ball must be
    // narrower than that gap
    let gap = Rational::from((Integer::from(1), Integer::from(cand.denom() * max_denominator)));
    if Rational::from(2 * r) >= gap {
        return Err(Error::Ambiguous(format!(
            "error ball admits more than one denominator-bounded rational near {}",
            cand
        )));
    }
    Ok(Some(cand))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;

    #[test]
    fn recovers_4_33() {
        let v = PrecReal::from_decimal_str("0.12121212121212", 14).unwrap();
        let got = rationalize(&v, &Integer::from(1_000_000)).unwrap();
        assert_eq!(got, Some(Rational::from((4, 33))));
    }

    #[test]
    fn recovers_29_128_exact_decimal() {
        let v = PrecReal::from_decimal_str("0.2265625", 16).unwrap();
        let got = rationalize(&v, &Integer::from(1000)).unwrap();
        assert_eq!(got, Some(Rational::from((29, 128))));
    }

    #[test]
    fn pi_with_tight_ball_is_not_a_small_fraction() {
        let v = PrecReal::from_decimal_str("3.141592653589793", 10).unwrap();
        let got = rationalize(&v, &Integer::from(10));
        // either nothing fits, or the ball is too loose to isolate: never 22/7
        match got {
            Ok(None) => {}
            Ok(Some(x)) => panic!("unexpected rationalization {}", x),
            Err(Error::Ambiguous(_)) => {}
            Err(e) => panic!("unexpected error {}", e),
        }
    }

    #[test]
    fn negative_values() {
        let v = PrecReal::from_decimal_str("-0.0020639834881320950", 15).unwrap();
        // -2/969 = -0.002063983488132094...
        let got = rationalize(&v, &Integer::from(10_000)).unwrap();
        assert_eq!(got, Some(Rational::from((-2, 969))));
    }

    #[test]
    fn round_trip_random_fractions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        for _ in 0..60 {
            let den: u64 = rng.gen_range(1..1_000_000_000);
            let num: i64 = rng.gen_range(-(den as i64)..=den as i64);
            let q = Rational::from((num, den));
            let digits = 2 * q.denom().to_string().len() as u32 + 4;
            let v = PrecReal::from_rational(&q, digits.max(25));
            let got = rationalize(&v, q.denom()).unwrap();
            assert_eq!(got, Some(q));
        }
    }

    #[test]
    fn ambiguous_when_ball_too_wide() {
        let v = PrecReal::from_decimal_str("0.1212", 3).unwrap();
        let got = rationalize(&v, &Integer::from(10).pow(6));
        assert!(matches!(got, Err(Error::Ambiguous(_))));
    }
}
