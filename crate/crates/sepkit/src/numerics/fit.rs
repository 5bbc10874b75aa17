//! Ordinary least-squares line fitting in ball arithmetic.

use super::PrecReal;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct LinearFit {
    pub slope: PrecReal,
    pub intercept: PrecReal,
    pub r_squared: PrecReal,
}

/// OLS fit of y against x, carried out at the precision of the inputs.
pub fn linear_fit(points: &[(PrecReal, PrecReal)]) -> Result<LinearFit> {
    if points.len() < 2 {
        return Err(Error::Degenerate("need at least two points".into()));
    }
    let digits = points[0].0.precision();
    let n = PrecReal::from_integer(points.len() as i64, digits);
    let mut sx = PrecReal::zero(digits);
    let mut sy = PrecReal::zero(digits);
    let mut sxx = PrecReal::zero(digits);
    let mut sxy = PrecReal::zero(digits);
    let mut syy = PrecReal::zero(digits);
    for (x, y) in points {
        sx = sx.add(x);
        sy = sy.add(y);
        sxx = sxx.add(&x.mul(x));
        sxy = sxy.add(&x.mul(y));
        syy = syy.add(&y.mul(y));
    }
    // centered sums
    let cxx = sxx.sub(&sx.mul(&sx).div(&n));
    let cxy = sxy.sub(&sx.mul(&sy).div(&n));
    let cyy = syy.sub(&sy.mul(&sy).div(&n));
    if !cxx.definitely_nonzero() {
        return Err(Error::Degenerate("all x values coincide".into()));
    }
    let slope = cxy.div(&cxx);
    let intercept = sy.sub(&slope.mul(&sx)).div(&n);
    let r_squared = if cyy.definitely_nonzero() {
        slope.mul(&slope).mul(&cxx).div(&cyy)
    } else {
        // constant y: the fitted line is exact
        PrecReal::from_integer(1, digits)
    };
    Ok(LinearFit { slope, intercept, r_squared })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn pt(x: (i64, i64), y: (i64, i64)) -> (PrecReal, PrecReal) {
        (
            PrecReal::from_rational(&Rational::from(x), 40),
            PrecReal::from_rational(&Rational::from(y), 40),
        )
    }

    #[test]
    fn identity_line() {
        let f = linear_fit(&[pt((0, 1), (0, 1)), pt((1, 1), (1, 1))]).unwrap();
        assert!(f.slope.sub(&PrecReal::from_integer(1, 40)).abs().to_f64() < 1e-30);
        assert!(f.intercept.abs().to_f64() < 1e-30);
        assert!(f.r_squared.sub(&PrecReal::from_integer(1, 40)).abs().to_f64() < 1e-30);
    }

    #[test]
    fn exact_line_three_points() {
        let f = linear_fit(&[pt((0, 1), (1, 1)), pt((1, 1), (3, 1)), pt((2, 1), (5, 1))]).unwrap();
        assert!(f.slope.sub(&PrecReal::from_integer(2, 40)).abs().to_f64() < 1e-30);
        assert!(f.intercept.sub(&PrecReal::from_integer(1, 40)).abs().to_f64() < 1e-30);
        assert!(f.r_squared.sub(&PrecReal::from_integer(1, 40)).abs().to_f64() < 1e-25);
    }

    #[test]
    fn degenerate_x_rejected() {
        let r = linear_fit(&[pt((1, 1), (1, 1)), pt((1, 1), (2, 1))]);
        assert!(matches!(r, Err(Error::Degenerate(_))));
    }

    #[test]
    fn noisy_points_r2_below_one() {
        let f = linear_fit(&[
            pt((0, 1), (0, 1)),
            pt((1, 1), (2, 1)),
            pt((2, 1), (3, 1)),
            pt((3, 1), (7, 1)),
        ])
        .unwrap();
        let r2 = f.r_squared.to_f64();
        assert!(r2 > 0.0 && r2 < 1.0);
    }
}
