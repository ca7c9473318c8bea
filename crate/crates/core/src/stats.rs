//! Empirical spectral statistics: interval counts, the empirical Stieltjes
//! transform, its smoothed interval mass, and the first-order eigenvalue
//! derivative identities.

use num_complex::Complex64;

use crate::eigen::{self, SpectralSample};
use crate::error::{Error, Result};
use crate::freeconv::{StieltjesQuery, StieltjesValue};
use crate::model::HermitianMatrix;
use crate::quadrature;

/// Eigenvalue count N_I on a closed interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntervalCount {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl IntervalCount {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Comparison of a count against its limiting-measure prediction,
/// normalized by n |I|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationRecord {
    pub interval: IntervalCount,
    /// n * mass of the limiting measure on I.
    pub expected: f64,
    /// |N_I - expected| / (n |I|).
    pub deviation_ratio: f64,
}

impl DeviationRecord {
    pub fn new(interval: IntervalCount, expected: f64, n: usize) -> Self {
        let deviation_ratio =
            (interval.count as f64 - expected).abs() / (n as f64 * interval.width());
        Self {
            interval,
            expected,
            deviation_ratio,
        }
    }
}

/// Exact count of eigenvalues in the closed interval [lo, hi], by binary
/// search on the sorted sample.
pub fn count_in_interval(sample: &SpectralSample, lo: f64, hi: f64) -> Result<IntervalCount> {
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadInterval {
            lo,
            hi,
            reason: "unbounded",
        });
    }
    if lo > hi {
        return Err(Error::BadInterval {
            lo,
            hi,
            reason: "inverted",
        });
    }
    let values = sample.values();
    let below_lo = values.partition_point(|&v| v < lo);
    let at_or_below_hi = values.partition_point(|&v| v <= hi);
    Ok(IntervalCount {
        lo,
        hi,
        count: at_or_below_hi - below_lo,
    })
}

/// Empirical Stieltjes transform s_n(z) = (1/n) sum_k 1/(lambda_k - z).
pub fn empirical_stieltjes(sample: &SpectralSample, q: StieltjesQuery) -> StieltjesValue {
    let z = q.z();
    let n = sample.len() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for &lambda in sample.values() {
        acc += (Complex64::new(lambda, 0.0) - z).inv();
    }
    StieltjesValue { value: acc / n }
}

/// Smoothed interval mass (1/pi) int_I Im s_n(x + i eta) dx.
///
/// Requires |I| >= 2 eta. Differs from the exact count N_I / n by a
/// Cauchy-smoothing error of order (eta / |I|) log(|I| / eta).
pub fn mass_from_stieltjes(
    sample: &SpectralSample,
    lo: f64,
    hi: f64,
    eta: f64,
) -> Result<f64> {
    if !eta.is_finite() || eta <= 0.0 {
        return Err(Error::EtaTooSmall { eta, floor: 0.0 });
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::BadInterval {
            lo,
            hi,
            reason: "unbounded",
        });
    }
    if hi - lo < 2.0 * eta {
        return Err(Error::BadInterval {
            lo,
            hi,
            reason: "narrower than 2 eta",
        });
    }
    let values = sample.values();
    let n = values.len() as f64;
    let integrand = |x: f64| {
        let mut acc = 0.0;
        for &lambda in values {
            let d = lambda - x;
            acc += eta / (d * d + eta * eta);
        }
        acc / (n * std::f64::consts::PI)
    };
    // Each eigenvalue inside I is an eta-wide Lorentzian peak; force panel
    // boundaries there.
    let forced: Vec<f64> = values
        .iter()
        .copied()
        .filter(|&l| l > lo && l < hi)
        .collect();
    Ok(quadrature::adaptive_simpson(
        &integrand, lo, hi, 1e-9, &forced, 40,
    ))
}

/// Perturbation direction for an off-diagonal entry's derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationDirection {
    Real,
    Imaginary,
}

/// Analytic vs central-finite-difference eigenvalue derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativePair {
    pub analytic: f64,
    pub numeric: f64,
}

/// First-order derivative of lambda_k with respect to an entry of the
/// unscaled Wigner part (Re or Im of zeta_ij, or the diagonal xi_ii),
/// compared against a central finite difference of step h.
///
/// analytic = 2 Re(conj(u_k(i)) u_k(j)) / sqrt(n) in the real direction,
/// 2 Im(conj(u_k(j)) u_k(i)) / sqrt(n) in the imaginary one, and
/// |u_k(i)|^2 / sqrt(n) on the diagonal; the 1/sqrt(n) is the chain rule
/// through W = X / sqrt(n) + A. Requires a simple spectrum: the minimum
/// gap must exceed 10 h so the ordering of lambda_k survives both probes.
pub fn perturbation_derivative_check(
    w: &HermitianMatrix,
    k: usize,
    i: usize,
    j: usize,
    direction: PerturbationDirection,
    h: f64,
) -> Result<DerivativePair> {
    let n = w.n();
    for (name, idx) in [("k", k), ("i", i), ("j", j)] {
        if idx >= n {
            return Err(Error::IndexOutOfRange {
                context: name,
                index: idx,
                n,
            });
        }
    }
    if i > j {
        return Err(Error::Config(
            "perturbation entry must satisfy i <= j (upper triangle)".into(),
        ));
    }
    if i == j && direction == PerturbationDirection::Imaginary {
        return Err(Error::Config(
            "diagonal entries are real; only the real direction applies".into(),
        ));
    }
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::NonFinite {
            context: "perturbation step",
        });
    }

    let full = eigen::eigen_full(w)?;
    let gap = full.min_gap();
    if gap <= 10.0 * h {
        return Err(Error::ClusteredSpectrum {
            gap,
            threshold: 10.0 * h,
        });
    }
    let sqrt_n = (n as f64).sqrt();
    let u = &full.vectors().unwrap()[k];
    let analytic = if i == j {
        u[i].norm_sqr() / sqrt_n
    } else {
        match direction {
            PerturbationDirection::Real => 2.0 * (u[i].conj() * u[j]).re / sqrt_n,
            PerturbationDirection::Imaginary => 2.0 * (u[j].conj() * u[i]).im / sqrt_n,
        }
    };

    let delta = h / sqrt_n;
    let probe = |sign: f64| -> Result<f64> {
        let mut m = w.clone();
        let bump = if i == j {
            Complex64::new(sign * delta, 0.0)
        } else {
            match direction {
                PerturbationDirection::Real => Complex64::new(sign * delta, 0.0),
                PerturbationDirection::Imaginary => Complex64::new(0.0, sign * delta),
            }
        };
        m.set(i, j, w.get(i, j) + bump);
        Ok(eigen::eigenvalues(&m)?.values()[k])
    };
    let plus = probe(1.0)?;
    let minus = probe(-1.0)?;
    let numeric = (plus - minus) / (2.0 * h);

    Ok(DerivativePair { analytic, numeric })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freeconv::StieltjesQuery;

    fn sample(values: &[f64]) -> SpectralSample {
        let mut v = values.to_vec();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        SpectralSample::from_sorted_values(v)
    }

    #[test]
    fn count_examples() {
        let s = sample(&[1.0, 2.0, 3.0]);
        assert_eq!(count_in_interval(&s, 1.5, 3.0).unwrap().count, 2);
        assert_eq!(count_in_interval(&s, 1.0, 3.0).unwrap().count, 3);
        assert_eq!(count_in_interval(&s, 3.5, 9.0).unwrap().count, 0);
        // Closed endpoints.
        assert_eq!(count_in_interval(&s, 2.0, 2.0).unwrap().count, 1);
        assert!(count_in_interval(&s, 2.0, 1.0).is_err());
        assert!(count_in_interval(&s, f64::NEG_INFINITY, 0.0).is_err());
    }

    #[test]
    fn stieltjes_two_point_sample() {
        // lambda = (-1, 1), z = i: s_n = i/2.
        let s = sample(&[-1.0, 1.0]);
        let v = empirical_stieltjes(&s, StieltjesQuery::new(0.0, 1.0).unwrap());
        assert!((v.value - Complex64::new(0.0, 0.5)).norm() < 1e-15);
        assert!(v.value.im > 0.0);
    }

    #[test]
    fn stieltjes_single_point_sample() {
        let s = sample(&[0.0]);
        let eta = 0.25;
        let v = empirical_stieltjes(&s, StieltjesQuery::new(0.0, eta).unwrap());
        assert!((v.value - Complex64::new(0.0, 1.0 / eta)).norm() < 1e-15);
    }

    #[test]
    fn smoothed_mass_single_eigenvalue_closed_form() {
        // One eigenvalue at 0, I = [-1, 1]: (1/pi) * 2 atan(1/eta).
        let s = sample(&[0.0]);
        let eta = 1e-3;
        let got = mass_from_stieltjes(&s, -1.0, 1.0, eta).unwrap();
        let expect = 2.0 * (1.0f64 / eta).atan() / std::f64::consts::PI;
        assert!((got - expect).abs() < 1e-8, "got {got}, expect {expect}");
        assert!((got - 0.999363).abs() < 1e-5);
    }

    #[test]
    fn smoothed_mass_far_interval_is_tail_sized() {
        let s = sample(&[0.0]);
        let eta = 0.01;
        let got = mass_from_stieltjes(&s, 50.0, 54.0, eta).unwrap();
        assert!(got >= 0.0 && got <= eta, "tail mass {got}");
    }

    #[test]
    fn smoothed_mass_requires_wide_interval() {
        let s = sample(&[0.0]);
        assert!(mass_from_stieltjes(&s, -0.001, 0.001, 0.01).is_err());
        assert!(mass_from_stieltjes(&s, -1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn partition_counts_sum_to_n() {
        let s = sample(&[-2.0, -1.0, -0.5, 0.3, 0.9, 1.7, 2.2]);
        let cuts = [-2.0, -1.2, 0.0, 1.0, 2.2];
        let mut total = 0;
        for w in cuts.windows(2) {
            // Half-open bookkeeping via nextafter-style epsilon on lo except
            // the first cell, so shared endpoints are not double counted.
            let lo = if total == 0 { w[0] } else { f64_next_up(w[0]) };
            total += count_in_interval(&s, lo, w[1]).unwrap().count;
        }
        assert_eq!(total, 7);
    }

    fn f64_next_up(x: f64) -> f64 {
        f64::from_bits(x.to_bits() + 1)
    }
}
