//! Cross-module property tests: randomized invariants of the certified
//! arithmetic, rational reconstruction, equation serialization, and the
//! sampling pipeline, plus the off-integer probe of the k = 0 difference
//! equation.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};
use sepkit::density::{estimate_probability, recommended_precision, SupportInterval};
use sepkit::montecarlo::{partial_transpose, sample_density, Field};
use sepkit::numerics::rationalize;
use sepkit::recurrence::{fitted_equation, g2_prefactor_real, DifferenceEquation};
use sepkit::{Polynomial, PrecReal};

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

/// The difference equations are fitted from integer-α sequences only; this
/// probes whether the k = 0 equation extends off the integers. With the
/// gamma-continued prefactor, seeding at (1/2, 29/128) — the real-field
/// probability — and stepping once lands on Q(0, 3/2). At half-integer α
/// the continuation collapses to exact rationals (G(1/2) = 140252091/2²²),
/// so the candidate is an exact number; the density route at truncation
/// degree 400 must bracket it within its truncation margin.
#[test]
fn half_integer_seed_step_agrees_with_density_route() {
    let g_half = q(140252091, 1 << 22);
    let cont = g2_prefactor_real(0, &q(1, 2), 40).unwrap();
    let diff = cont.sub(&PrecReal::from_rational(&g_half, 40));
    assert!(diff.abs().to_f64() < 1e-25, "continuation disagrees with exact G(1/2)");

    let eq = fitted_equation(0).unwrap();
    let alpha = q(1, 2);
    let p0 = eq.p0.eval(&alpha);
    let p1 = eq.p1.eval(&alpha);
    let p2 = eq.p2.eval(&alpha);
    let s_half = q(29, 128) / g_half.clone();
    let s_next = -(p0 + p1 * s_half) / p2.clone();
    // prefactor step G(3/2)/G(1/2) is the homogeneous ratio -p2/p1
    let step = -p2 / eq.p1.eval(&alpha);
    let candidate = s_next * g_half * step;

    let degree = 400;
    let est = estimate_probability(
        0,
        &q(3, 2),
        degree,
        &SupportInterval::default(),
        Some(recommended_precision(degree, 30)),
        &Rational::from(0),
    )
    .unwrap();
    let ball = est.value_with_truncation_margin();
    let gap = (ball.midpoint_rational() - &candidate).abs();
    assert!(
        gap <= ball.error_bound(),
        "candidate {} outside density ball (gap {:e}, margin {:e})",
        candidate.to_f64(),
        gap.to_f64(),
        ball.error_bound().to_f64()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Certified balls of the basic operations always contain the exact
    /// rational result.
    #[test]
    fn precreal_balls_contain_exact_values(
        an in -999_999i64..=999_999, ad in 1i64..=9999,
        bn in -999_999i64..=999_999, bd in 1i64..=9999,
    ) {
        prop_assume!(bn != 0);
        let a = q(an, ad);
        let b = q(bn, bd);
        let x = PrecReal::from_rational(&a, 30);
        let y = PrecReal::from_rational(&b, 30);
        for (got, exact) in [
            (x.add(&y), Rational::from(&a + &b)),
            (x.sub(&y), Rational::from(&a - &b)),
            (x.mul(&y), Rational::from(&a * &b)),
            (x.div(&y), Rational::from(&a / &b)),
        ] {
            let gap = (got.midpoint_rational() - exact).abs();
            prop_assert!(gap <= got.error_bound());
        }
    }

    /// Reconstruction recovers any rational whose denominator is within the
    /// search bound from a 30-digit certified ball.
    #[test]
    fn rationalize_recovers_small_denominators(
        n in -1_000_000i64..=1_000_000, d in 1i64..=1_000_000,
    ) {
        let target = q(n, d);
        let ball = PrecReal::from_rational(&target, 30);
        let got = rationalize(&ball, &Integer::from(1_000_000)).unwrap();
        prop_assert_eq!(got, Some(target));
    }

    /// Difference-equation JSON serialization round-trips exactly.
    #[test]
    fn equation_json_round_trip(
        c0 in prop::collection::vec(-50i64..=50, 1..4),
        c1 in prop::collection::vec(-50i64..=50, 1..4),
        c2 in prop::collection::vec(-50i64..=50, 1..4),
        sn in -20i64..=20, sd in 1i64..=20,
    ) {
        prop_assume!(c1.iter().any(|&c| c != 0));
        prop_assume!(c2.iter().any(|&c| c != 0));
        let eq = DifferenceEquation {
            k: 0,
            p0: Polynomial::from_integers(&c0),
            p1: Polynomial::from_integers(&c1),
            p2: Polynomial::from_integers(&c2),
            seed_alpha: Rational::from(1),
            seed_value: q(sn, sd),
        };
        let back = DifferenceEquation::from_json(&eq.to_json()).unwrap();
        prop_assert_eq!(back, eq);
    }

    /// Sampled states are unit-trace, Hermitian, and PT is an involution,
    /// for every field and admissible k.
    #[test]
    fn sampling_invariants(seed in 0u64..=u64::MAX, k in -1i64..=4, complex in any::<bool>()) {
        let field = if complex { Field::Complex } else { Field::Real };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = sample_density(k, field, &mut rng).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermitian_defect() < 1e-14);
        prop_assert_eq!(partial_transpose(&partial_transpose(&rho)), rho);
    }
}
