//! Ginibre-ensemble Monte Carlo oracle: sample induced-measure random
//! density matrices (real or complex), compute determinants and partial
//! transposes, and estimate the probabilities and moments that the formula
//! routes predict.
//!
//! Sampling is embarrassingly parallel over fixed-size substreams of a
//! counter-based generator, so results are bitwise deterministic for a given
//! seed regardless of thread scheduling.

use crate::numerics::det_rational;
use crate::{Error, Rational, Result};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Scalar field of the Ginibre factor: real entries correspond to the
/// rebit ensemble (α = 1/2), complex entries to the qubit ensemble (α = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Real,
    Complex,
}

impl std::str::FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Domain(format!("unknown field {:?} (real|complex)", other))),
        }
    }
}

/// A sampled 4×4 density matrix (Hermitian, unit trace, positive
/// semidefinite by construction).
#[derive(Debug, Clone, PartialEq)]
pub enum DensityMatrix4 {
    Real([[f64; 4]; 4]),
    Complex([[Complex64; 4]; 4]),
}

impl DensityMatrix4 {
    pub fn trace(&self) -> f64 {
        match self {
            DensityMatrix4::Real(m) => (0..4).map(|i| m[i][i]).sum(),
            DensityMatrix4::Complex(m) => (0..4).map(|i| m[i][i].re).sum(),
        }
    }

    /// Largest absolute deviation from Hermitian symmetry.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        match self {
            DensityMatrix4::Real(m) => {
                for i in 0..4 {
                    for j in 0..4 {
                        worst = worst.max((m[i][j] - m[j][i]).abs());
                    }
                }
            }
            DensityMatrix4::Complex(m) => {
                for i in 0..4 {
                    for j in 0..4 {
                        worst = worst.max((m[i][j] - m[j][i].conj()).norm());
                    }
                }
            }
        }
        worst
    }

    /// Quadratic form x†ρx (real by Hermitian symmetry).
    pub fn quadratic_form(&self, x: &[f64; 4]) -> f64 {
        match self {
            DensityMatrix4::Real(m) => {
                let mut acc = 0.0;
                for i in 0..4 {
                    for j in 0..4 {
                        acc += x[i] * m[i][j] * x[j];
                    }
                }
                acc
            }
            DensityMatrix4::Complex(m) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..4 {
                    for j in 0..4 {
                        acc += m[i][j] * x[i] * x[j];
                    }
                }
                acc.re
            }
        }
    }
}

/// Draw ρ = GG*/tr(GG*) with G a matrix of i.i.d. standard Gaussians over
/// the requested field. The column count is chosen so the induced density
/// is ∝ det(ρ)^k in both cases: 4+k columns for the complex field, 2k+5
/// for the real field (the flat measure on real symmetric matrices is the
/// 5-column Wishart, not the square one).
pub fn sample_density<R: Rng>(k: i64, field: Field, rng: &mut R) -> Result<DensityMatrix4> {
    let cols = match field {
        Field::Complex => 4 + k,
        Field::Real => 2 * k + 5,
    };
    if cols < 1 {
        return Err(Error::OutOfRange(format!(
            "k = {} gives a {}-column sample",
            k, cols
        )));
    }
    let cols = cols as usize;
    match field {
        Field::Real => {
            let mut g = vec![[0.0f64; 4]; cols];
            for col in g.iter_mut() {
                for v in col.iter_mut() {
                    *v = rng.sample(StandardNormal);
                }
            }
            let mut m = [[0.0f64; 4]; 4];
            for col in &g {
                for i in 0..4 {
                    for j in 0..4 {
                        m[i][j] += col[i] * col[j];
                    }
                }
            }
            let tr: f64 = (0..4).map(|i| m[i][i]).sum();
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v /= tr;
                }
            }
            Ok(DensityMatrix4::Real(m))
        }
        Field::Complex => {
            let mut g = vec![[Complex64::new(0.0, 0.0); 4]; cols];
            for col in g.iter_mut() {
                for v in col.iter_mut() {
                    *v = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
                }
            }
            let mut m = [[Complex64::new(0.0, 0.0); 4]; 4];
            for col in &g {
                for i in 0..4 {
                    for j in 0..4 {
                        m[i][j] += col[i] * col[j].conj();
                    }
                }
            }
            let tr: f64 = (0..4).map(|i| m[i][i].re).sum();
            for row in m.iter_mut() {
                for v in row.iter_mut() {
                    *v /= tr;
                }
            }
            Ok(DensityMatrix4::Complex(m))
        }
    }
}

/// Partial transpose on the second qubit: with row index 2a+b and column
/// index 2e+f (a, e the first-qubit bits), PT[2a+b][2e+f] = M[2a+f][2e+b].
pub fn partial_transpose(rho: &DensityMatrix4) -> DensityMatrix4 {
    fn pt<T: Copy>(m: &[[T; 4]; 4], zero: T) -> [[T; 4]; 4] {
        let mut out = [[zero; 4]; 4];
        for a in 0..2 {
            for b in 0..2 {
                for e in 0..2 {
                    for f in 0..2 {
                        out[2 * a + b][2 * e + f] = m[2 * a + f][2 * e + b];
                    }
                }
            }
        }
        out
    }
    match rho {
        DensityMatrix4::Real(m) => DensityMatrix4::Real(pt(m, 0.0)),
        DensityMatrix4::Complex(m) => DensityMatrix4::Complex(pt(m, Complex64::new(0.0, 0.0))),
    }
}

/// LU determinant of a real 4×4 matrix with partial pivoting.
pub fn det4_real(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let factor = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    det
}

/// LU determinant of a complex 4×4 matrix with partial pivoting.
pub fn det4_complex(m: &[[Complex64; 4]; 4]) -> Complex64 {
    let mut a = *m;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..4 {
        let mut piv = col;
        for r in col + 1..4 {
            if a[r][col].norm_sqr() > a[piv][col].norm_sqr() {
                piv = r;
            }
        }
        if a[piv][col] == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..4 {
            let factor = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] = a[r][c] - factor * a[col][c];
            }
        }
    }
    det
}

/// Determinant of a sampled density matrix (real by Hermitian symmetry; for
/// complex input the vanishing imaginary part is discarded).
pub fn determinant4(rho: &DensityMatrix4) -> f64 {
    match rho {
        DensityMatrix4::Real(m) => det4_real(m),
        DensityMatrix4::Complex(m) => det4_complex(m).re,
    }
}

/// Monte Carlo estimate of the determinantal probabilities and moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub k: i64,
    pub field: Field,
    pub n_samples: u64,
    pub seed: u64,
    /// Estimate of Prob(D > 0) with D = |ρ^PT| − |ρ|.
    pub p_d_positive: f64,
    pub p_d_positive_se: f64,
    /// Estimate of Prob(|ρ^PT| > 0), the total separability probability.
    pub p_pt_positive: f64,
    pub p_pt_positive_se: f64,
    /// Sample means of D^n for n = 1..4.
    pub moment_estimates: [f64; 4],
    pub moment_ses: [f64; 4],
    /// Sample mean of |ρ| and of |ρ^PT|.
    pub det_mean: f64,
    pub det_mean_se: f64,
    pub pt_det_mean: f64,
    pub pt_det_mean_se: f64,
    /// Samples with D > 0 but |ρ^PT| ≤ 0 (must be zero: |ρ| ≥ 0 makes
    /// D > 0 imply |ρ^PT| > 0).
    pub implication_violations: u64,
    /// Observed range of D (diagnostic for the density support bracket).
    pub d_min: f64,
    pub d_max: f64,
}

#[derive(Clone)]
struct Accumulator {
    n: u64,
    count_d_pos: u64,
    count_pt_pos: u64,
    violations: u64,
    sum_dn: [f64; 4],
    sumsq_dn: [f64; 4],
    sum_det: f64,
    sumsq_det: f64,
    sum_pt: f64,
    sumsq_pt: f64,
    d_min: f64,
    d_max: f64,
}

impl Accumulator {
    fn new() -> Self {
        Accumulator {
            n: 0,
            count_d_pos: 0,
            count_pt_pos: 0,
            violations: 0,
            sum_dn: [0.0; 4],
            sumsq_dn: [0.0; 4],
            sum_det: 0.0,
            sumsq_det: 0.0,
            sum_pt: 0.0,
            sumsq_pt: 0.0,
            d_min: f64::INFINITY,
            d_max: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, det: f64, pt_det: f64) {
        let d = pt_det - det;
        self.n += 1;
        if d > 0.0 {
            self.count_d_pos += 1;
            if pt_det <= 0.0 {
                self.violations += 1;
            }
        }
        if pt_det > 0.0 {
            self.count_pt_pos += 1;
        }
        let mut p = 1.0;
        for i in 0..4 {
            p *= d;
            self.sum_dn[i] += p;
            self.sumsq_dn[i] += p * p;
        }
        self.sum_det += det;
        self.sumsq_det += det * det;
        self.sum_pt += pt_det;
        self.sumsq_pt += pt_det * pt_det;
        self.d_min = self.d_min.min(d);
        self.d_max = self.d_max.max(d);
    }

    fn merge(mut self, other: &Accumulator) -> Self {
        self.n += other.n;
        self.count_d_pos += other.count_d_pos;
        self.count_pt_pos += other.count_pt_pos;
        self.violations += other.violations;
        for i in 0..4 {
            self.sum_dn[i] += other.sum_dn[i];
            self.sumsq_dn[i] += other.sumsq_dn[i];
        }
        self.sum_det += other.sum_det;
        self.sumsq_det += other.sumsq_det;
        self.sum_pt += other.sum_pt;
        self.sumsq_pt += other.sumsq_pt;
        self.d_min = self.d_min.min(other.d_min);
        self.d_max = self.d_max.max(other.d_max);
        self
    }
}

/// Samples per deterministic substream; fixed so that results do not depend
/// on worker count or scheduling.
const SUBSTREAM: u64 = 1 << 14;

fn mean_se(sum: f64, sumsq: f64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sumsq / nf - mean * mean).max(0.0);
    (mean, (var / nf).sqrt())
}

/// Deterministic streaming estimate: `n_samples` draws of the induced
/// measure, split across counter-based substreams and merged in stream
/// order.
pub fn mc_estimate(k: i64, field: Field, n_samples: u64, seed: u64) -> Result<McEstimate> {
    if n_samples < 1_000 {
        return Err(Error::OutOfRange(format!("n_samples = {} (need >= 1000)", n_samples)));
    }
    let streams = n_samples.div_ceil(SUBSTREAM);
    let partials: Vec<Result<Accumulator>> = (0..streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s + 1);
            let count = SUBSTREAM.min(n_samples - s * SUBSTREAM);
            let mut acc = Accumulator::new();
            for _ in 0..count {
                let rho = sample_density(k, field, &mut rng)?;
                let det = determinant4(&rho);
                let pt_det = determinant4(&partial_transpose(&rho));
                acc.push(det, pt_det);
            }
            Ok(acc)
        })
        .collect();
    let mut acc = Accumulator::new();
    for p in partials {
        acc = acc.merge(&p?);
    }
    let n = acc.n;
    let nf = n as f64;
    let p_d = acc.count_d_pos as f64 / nf;
    let p_pt = acc.count_pt_pos as f64 / nf;
    let mut moments = [0.0; 4];
    let mut moment_ses = [0.0; 4];
    for i in 0..4 {
        let (m, se) = mean_se(acc.sum_dn[i], acc.sumsq_dn[i], n);
        moments[i] = m;
        moment_ses[i] = se;
    }
    let (det_mean, det_mean_se) = mean_se(acc.sum_det, acc.sumsq_det, n);
    let (pt_det_mean, pt_det_mean_se) = mean_se(acc.sum_pt, acc.sumsq_pt, n);
    Ok(McEstimate {
        k,
        field,
        n_samples: n,
        seed,
        p_d_positive: p_d,
        p_d_positive_se: (p_d * (1.0 - p_d) / nf).sqrt(),
        p_pt_positive: p_pt,
        p_pt_positive_se: (p_pt * (1.0 - p_pt) / nf).sqrt(),
        moment_estimates: moments,
        moment_ses,
        det_mean,
        det_mean_se,
        pt_det_mean,
        pt_det_mean_se,
        implication_violations: acc.violations,
        d_min: acc.d_min,
        d_max: acc.d_max,
    })
}

/// Re-run a sample subset with the double-precision determinants replaced by
/// exact rational arithmetic on the same (exactly representable) matrix
/// entries; returns the number of samples whose D > 0 indicator disagrees.
/// Quantifies the floating-point indicator bias.
pub fn exact_indicator_recheck(k: i64, field: Field, n_samples: u64, seed: u64) -> Result<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut mismatches = 0;
    for _ in 0..n_samples {
        let rho = sample_density(k, field, &mut rng)?;
        let det = determinant4(&rho);
        let pt_det = determinant4(&partial_transpose(&rho));
        let fast_indicator = pt_det - det > 0.0;
        let exact_d = exact_d_value(&rho)?;
        if (exact_d > 0) != fast_indicator {
            mismatches += 1;
        }
    }
    Ok(mismatches)
}

/// D = |ρ^PT| − |ρ| computed exactly from the f64 entries (every f64 is an
/// exact rational).
fn exact_d_value(rho: &DensityMatrix4) -> Result<Rational> {
    match rho {
        DensityMatrix4::Real(m) => {
            let to_rows = |m: &[[f64; 4]; 4]| -> Result<Vec<Vec<Rational>>> {
                m.iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| {
                                Rational::from_f64(v).ok_or_else(|| {
                                    Error::Domain("non-finite matrix entry".into())
                                })
                            })
                            .collect()
                    })
                    .collect()
            };
            let a = to_rows(m)?;
            let pt = match partial_transpose(rho) {
                DensityMatrix4::Real(p) => p,
                DensityMatrix4::Complex(_) => unreachable!(),
            };
            let b = to_rows(&pt)?;
            Ok(det_rational(&b) - det_rational(&a))
        }
        DensityMatrix4::Complex(m) => {
            let conv = |m: &[[Complex64; 4]; 4]| -> Result<Vec<Vec<(Rational, Rational)>>> {
                m.iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| {
                                let re = Rational::from_f64(v.re);
                                let im = Rational::from_f64(v.im);
                                match (re, im) {
                                    (Some(re), Some(im)) => Ok((re, im)),
                                    _ => Err(Error::Domain("non-finite matrix entry".into())),
                                }
                            })
                            .collect()
                    })
                    .collect()
            };
            let a = conv(m)?;
            let pt = match partial_transpose(rho) {
                DensityMatrix4::Complex(p) => p,
                DensityMatrix4::Real(_) => unreachable!(),
            };
            let b = conv(&pt)?;
            let da = det4_complex_rational(a);
            let db = det4_complex_rational(b);
            // Hermitian determinants are real; the imaginary parts vanish
            // identically only for exactly Hermitian input, which holds here
            // because the Gram construction is symmetric in exact arithmetic
            // of the stored entries.
            Ok(db.0 - da.0)
        }
    }
}

/// Fraction-free Gaussian elimination determinant over complex rationals.
fn det4_complex_rational(mut a: Vec<Vec<(Rational, Rational)>>) -> (Rational, Rational) {
    let n = a.len();
    let mul = |x: &(Rational, Rational), y: &(Rational, Rational)| {
        (
            Rational::from(&x.0 * &y.0) - Rational::from(&x.1 * &y.1),
            Rational::from(&x.0 * &y.1) + Rational::from(&x.1 * &y.0),
        )
    };
    let div = |x: &(Rational, Rational), y: &(Rational, Rational)| {
        let den = Rational::from(&y.0 * &y.0) + Rational::from(&y.1 * &y.1);
        (
            (Rational::from(&x.0 * &y.0) + Rational::from(&x.1 * &y.1)) / den.clone(),
            (Rational::from(&x.1 * &y.0) - Rational::from(&x.0 * &y.1)) / den,
        )
    };
    let mut det = (Rational::from(1), Rational::from(0));
    for col in 0..n {
        let piv = (col..n).find(|&r| a[r][col].0 != 0 || a[r][col].1 != 0);
        let piv = match piv {
            Some(p) => p,
            None => return (Rational::from(0), Rational::from(0)),
        };
        if piv != col {
            a.swap(piv, col);
            det = (-det.0, -det.1);
        }
        det = mul(&det, &a[col][col]);
        for r in col + 1..n {
            let factor = div(&a[r][col].clone(), &a[col][col].clone());
            for c in col..n {
                let sub = mul(&factor, &a[col][c].clone());
                a[r][c].0 -= sub.0;
                a[r][c].1 -= sub.1;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell_projector() -> DensityMatrix4 {
        // |Φ⁺⟩⟨Φ⁺| with |Φ⁺⟩ = (|00⟩ + |11⟩)/√2
        let mut m = [[0.0f64; 4]; 4];
        m[0][0] = 0.5;
        m[0][3] = 0.5;
        m[3][0] = 0.5;
        m[3][3] = 0.5;
        DensityMatrix4::Real(m)
    }

    #[test]
    fn identity_is_pt_invariant() {
        let mut m = [[0.0f64; 4]; 4];
        for i in 0..4 {
            m[i][i] = 0.25;
        }
        let rho = DensityMatrix4::Real(m);
        assert_eq!(partial_transpose(&rho), rho);
        assert_eq!(determinant4(&rho), 1.0 / 256.0);
    }

    #[test]
    fn bell_state_pt_determinant() {
        let rho = bell_projector();
        assert_eq!(determinant4(&rho), 0.0); // rank-1 projector
        let pt = partial_transpose(&rho);
        assert_eq!(determinant4(&pt), -1.0 / 16.0);
        assert_eq!(partial_transpose(&pt), rho); // involution
    }

    #[test]
    fn sampled_matrices_satisfy_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in [-1i64, 0, 1] {
            for field in [Field::Real, Field::Complex] {
                for _ in 0..200 {
                    let rho = sample_density(k, field, &mut rng).unwrap();
                    assert!((rho.trace() - 1.0).abs() < 1e-12);
                    assert!(rho.hermitian_defect() < 1e-14);
                    let x = [
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5,
                        rng.gen::<f64>() - 0.5,
                    ];
                    assert!(rho.quadratic_form(&x) >= -1e-12);
                }
            }
        }
    }

    #[test]
    fn pt_preserves_trace_and_hermiticity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for field in [Field::Real, Field::Complex] {
            let rho = sample_density(0, field, &mut rng).unwrap();
            let pt = partial_transpose(&rho);
            assert!((pt.trace() - 1.0).abs() < 1e-12);
            assert!(pt.hermitian_defect() < 1e-14);
            assert_eq!(partial_transpose(&pt), rho);
        }
    }

    #[test]
    fn estimate_is_deterministic() {
        let a = mc_estimate(0, Field::Complex, 20_000, 42).unwrap();
        let b = mc_estimate(0, Field::Complex, 20_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_estimate(0, Field::Complex, 20_000, 43).unwrap();
        assert_ne!(a.p_d_positive, c.p_d_positive);
    }

    #[test]
    fn implication_holds_sample_by_sample() {
        let est = mc_estimate(0, Field::Complex, 50_000, 7).unwrap();
        assert_eq!(est.implication_violations, 0);
        let est = mc_estimate(1, Field::Real, 50_000, 7).unwrap();
        assert_eq!(est.implication_violations, 0);
    }

    #[test]
    fn d_range_within_support_bracket() {
        for (field, seed) in [(Field::Real, 1u64), (Field::Complex, 2)] {
            let est = mc_estimate(0, field, 100_000, seed).unwrap();
            assert!(est.d_min >= -1.0 / 16.0 - 1e-12, "{:?}", est.d_min);
            assert!(est.d_max <= 1.0 / 256.0 + 1e-12, "{:?}", est.d_max);
        }
    }

    #[test]
    fn rough_probability_agreement_small_run() {
        // Fast smoke check; tight 3σ checks live in the acceptance suite.
        let est = mc_estimate(0, Field::Complex, 100_000, 5).unwrap();
        let target = 4.0 / 33.0;
        assert!((est.p_d_positive - target).abs() < 5.0 * est.p_d_positive_se);
    }

    #[test]
    fn exact_recheck_shows_no_indicator_bias() {
        assert_eq!(exact_indicator_recheck(0, Field::Real, 300, 9).unwrap(), 0);
        assert_eq!(exact_indicator_recheck(0, Field::Complex, 150, 9).unwrap(), 0);
    }

    #[test]
    fn json_round_trip() {
        let est = mc_estimate(0, Field::Real, 5_000, 1).unwrap();
        let s = serde_json::to_string(&est).unwrap();
        let back: McEstimate = serde_json::from_str(&s).unwrap();
        assert_eq!(est, back);
    }
}
