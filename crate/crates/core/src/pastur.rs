//! Limiting spectral density of the ±a source model from its cubic equation.
//!
//! For W = X/sqrt(n) + diag(a,...,a,-a,...,-a) the limiting eigenvalue
//! density is rho(x) = |Im s(x)| / pi where s = s(x) solves the cubic
//!
//!     s^3 - x s^2 - (a^2 - 1) s + x a^2 = 0.
//!
//! The density vanishes exactly where all three roots are real, i.e. where
//! the cubic's discriminant is nonnegative. For a > 1 the support splits
//! into two symmetric bands (-z1, -z2) u (z2, z1); the band edges are the
//! sign changes of the discriminant as a function of x.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature;

/// External-source strength `a` (validated finite and nonnegative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParameter {
    a: f64,
}

/// Which of the model's parameter regimes `a` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// a > 1: the support consists of two separated bands.
    Supercritical,
    /// a = 0: the model degenerates to the plain semicircle.
    Degenerate,
    /// 0 < a <= 1: the formulas still evaluate, but the two-band support
    /// statement does not apply; operations that need it refuse this regime.
    Other,
}

impl SourceParameter {
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a < 0.0 {
            return Err(Error::InvalidSource { a });
        }
        Ok(Self { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn regime(&self) -> Regime {
        if self.a == 0.0 {
            Regime::Degenerate
        } else if self.a > 1.0 {
            Regime::Supercritical
        } else {
            Regime::Other
        }
    }
}

/// Root pattern of the cubic at a given abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClassification {
    /// All three roots real (counting multiplicity): zero density.
    ThreeReal,
    /// One real root plus a conjugate pair: positive density.
    OneRealOnePair,
}

/// The three roots of the cubic together with their residuals.
///
/// Ordering: for `ThreeReal` the roots are ascending by real part; for
/// `OneRealOnePair` they are `[real, upper half-plane, lower half-plane]`,
/// and the two non-real entries are exact complex conjugates by
/// construction.
#[derive(Debug, Clone)]
pub struct CubicRoots {
    pub roots: [Complex64; 3],
    pub residuals: [f64; 3],
    pub classification: RootClassification,
}

impl CubicRoots {
    /// The upper-half-plane member of the conjugate pair, when present.
    pub fn pair_root(&self) -> Option<Complex64> {
        match self.classification {
            RootClassification::ThreeReal => None,
            RootClassification::OneRealOnePair => Some(self.roots[1]),
        }
    }
}

/// Band edges 0 <= z2 < z1 of the limiting measure's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportEdges {
    pub z2: f64,
    pub z1: f64,
}

impl SupportEdges {
    /// Midpoint of the positive band (z2, z1).
    pub fn band_midpoint(&self) -> f64 {
        0.5 * (self.z2 + self.z1)
    }

    /// True when x lies strictly inside (-z1,-z2) u (z2,z1),
    /// at least `margin` away from every edge.
    pub fn strictly_inside_bulk(&self, x: f64, margin: f64) -> bool {
        let t = x.abs();
        t > self.z2 + margin && t < self.z1 - margin
    }
}

/// Density value rho(x) >= 0 at an abscissa.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub x: f64,
    pub rho: f64,
}

/// Monic cubic coefficients (b, c, d) of s^3 + b s^2 + c s + d at (x, a).
fn monic_coefficients(x: f64, a: f64) -> (f64, f64, f64) {
    (-x, -(a * a - 1.0), x * a * a)
}

/// Depressed-cubic coefficients (p, q) of t^3 + p t + q after s = t + x/3.
fn depressed_coefficients(x: f64, a: f64) -> (f64, f64) {
    let (b, c, d) = monic_coefficients(x, a);
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    (p, q)
}

/// Cubic discriminant at (x, a); negative exactly where the density is
/// positive. Invariant under the depression shift.
pub(crate) fn discriminant(x: f64, a: f64) -> f64 {
    let (p, q) = depressed_coefficients(x, a);
    -4.0 * p * p * p - 27.0 * q * q
}

fn eval_monic(s: Complex64, b: f64, c: f64, d: f64) -> Complex64 {
    ((s + b) * s + c) * s + d
}

fn eval_monic_real(s: f64, b: f64, c: f64, d: f64) -> f64 {
    ((s + b) * s + c) * s + d
}

/// One guarded Newton step on the monic cubic; keeps the old iterate if the
/// residual does not improve (protects multiple roots at the band edges).
fn polish_real(s: f64, b: f64, c: f64, d: f64) -> f64 {
    let deriv = (3.0 * s + 2.0 * b) * s + c;
    if deriv == 0.0 || !deriv.is_finite() {
        return s;
    }
    let step = eval_monic_real(s, b, c, d) / deriv;
    let cand = s - step;
    if eval_monic_real(cand, b, c, d).abs() <= eval_monic_real(s, b, c, d).abs() {
        cand
    } else {
        s
    }
}

fn polish_complex(s: Complex64, b: f64, c: f64, d: f64) -> Complex64 {
    let deriv = (s * 3.0 + 2.0 * b) * s + c;
    if deriv.norm_sqr() == 0.0 || !deriv.is_finite() {
        return s;
    }
    let cand = s - eval_monic(s, b, c, d) / deriv;
    if eval_monic(cand, b, c, d).norm() <= eval_monic(s, b, c, d).norm() {
        cand
    } else {
        s
    }
}

/// Solve s^3 - x s^2 - (a^2-1) s + x a^2 = 0.
///
/// Closed form on the depressed cubic (trigonometric when all roots are
/// real, Cardano otherwise), then one guarded Newton step per root. The
/// conjugate pair is stored as an exact conjugate pair.
pub fn solve_cubic(x: f64, a: &SourceParameter) -> Result<CubicRoots> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "solve_cubic",
        });
    }
    let a = a.a();
    let (b, c, d) = monic_coefficients(x, a);
    let (p, q) = depressed_coefficients(x, a);
    let shift = x / 3.0;
    let disc = -4.0 * p * p * p - 27.0 * q * q;

    // Roundoff floor for the discriminant's sign: p and q carry
    // cancellation error of order eps times their pre-cancellation
    // magnitudes, which propagates into disc through its gradient. Inside
    // this band the cubic is treated as having a multiple real root, so a
    // double root at a band edge never fabricates spurious density.
    let pmag = c.abs() + b * b / 3.0;
    let qmag = 2.0 * b.abs().powi(3) / 27.0 + (b * c).abs() / 3.0 + d.abs();
    let disc_tol = f64::EPSILON
        * (24.0 * p * p * pmag
            + 108.0 * q.abs() * qmag
            + 4.0 * p.abs().powi(3)
            + 27.0 * q * q);

    if disc > disc_tol {
        // Three distinct real roots; here p < 0 necessarily.
        let m = 2.0 * (-p / 3.0).sqrt();
        let base = (-p / 3.0).sqrt();
        let cos3phi = (-q / (2.0 * base * base * base)).clamp(-1.0, 1.0);
        let phi = cos3phi.acos() / 3.0;
        let mut r = [0.0f64; 3];
        for (k, rk) in r.iter_mut().enumerate() {
            let t = m * (phi - 2.0 * PI * k as f64 / 3.0).cos();
            *rk = polish_real(t + shift, b, c, d);
        }
        r.sort_by(|u, v| u.partial_cmp(v).unwrap());
        let roots = [
            Complex64::new(r[0], 0.0),
            Complex64::new(r[1], 0.0),
            Complex64::new(r[2], 0.0),
        ];
        let residuals = [
            eval_monic(roots[0], b, c, d).norm(),
            eval_monic(roots[1], b, c, d).norm(),
            eval_monic(roots[2], b, c, d).norm(),
        ];
        return Ok(CubicRoots {
            roots,
            residuals,
            classification: RootClassification::ThreeReal,
        });
    }

    if disc.abs() <= disc_tol {
        // Multiple real root (band edge): t = -3q/2p twice and t = 3q/p,
        // or a triple root at zero when p vanishes as well.
        if p == 0.0 {
            let s = Complex64::new(shift, 0.0);
            let res = eval_monic(s, b, c, d).norm();
            return Ok(CubicRoots {
                roots: [s, s, s],
                residuals: [res, res, res],
                classification: RootClassification::ThreeReal,
            });
        }
        let t_double = -1.5 * q / p;
        let t_single = 3.0 * q / p;
        let rd = t_double + shift;
        let rs = polish_real(t_single + shift, b, c, d);
        let mut r = [rd, rd, rs];
        r.sort_by(|u, v| u.partial_cmp(v).unwrap());
        let roots = [
            Complex64::new(r[0], 0.0),
            Complex64::new(r[1], 0.0),
            Complex64::new(r[2], 0.0),
        ];
        let residuals = [
            eval_monic(roots[0], b, c, d).norm(),
            eval_monic(roots[1], b, c, d).norm(),
            eval_monic(roots[2], b, c, d).norm(),
        ];
        return Ok(CubicRoots {
            roots,
            residuals,
            classification: RootClassification::ThreeReal,
        });
    }

    // One real root plus a conjugate pair (disc < -tol).
    let sq = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
    let half = -q / 2.0;
    // Pick the larger-magnitude cube to avoid cancellation.
    let big = if half >= 0.0 { half + sq } else { half - sq };
    let u = big.cbrt();
    let v = if u == 0.0 { 0.0 } else { -p / (3.0 * u) };

    let real_t = u + v;
    let im = (3.0f64.sqrt() / 2.0) * (u - v);
    if im == 0.0 {
        // Double root on the edge: all roots real.
        let r0 = polish_real(real_t + shift, b, c, d);
        let rd = -0.5 * real_t + shift;
        let mut r = [r0, rd, rd];
        r.sort_by(|s, t| s.partial_cmp(t).unwrap());
        let roots = [
            Complex64::new(r[0], 0.0),
            Complex64::new(r[1], 0.0),
            Complex64::new(r[2], 0.0),
        ];
        let residuals = [
            eval_monic(roots[0], b, c, d).norm(),
            eval_monic(roots[1], b, c, d).norm(),
            eval_monic(roots[2], b, c, d).norm(),
        ];
        return Ok(CubicRoots {
            roots,
            residuals,
            classification: RootClassification::ThreeReal,
        });
    }

    let real_root = Complex64::new(polish_real(real_t + shift, b, c, d), 0.0);
    let upper = polish_complex(
        Complex64::new(-0.5 * real_t + shift, im.abs()),
        b,
        c,
        d,
    );
    let lower = upper.conj();
    let roots = [real_root, upper, lower];
    let residuals = [
        eval_monic(real_root, b, c, d).norm(),
        eval_monic(upper, b, c, d).norm(),
        eval_monic(lower, b, c, d).norm(),
    ];
    Ok(CubicRoots {
        roots,
        residuals,
        classification: RootClassification::OneRealOnePair,
    })
}

/// rho(x) = |Im s(x)| / pi, taking either member of the conjugate pair.
pub fn density(x: f64, a: &SourceParameter) -> Result<DensityValue> {
    if !x.is_finite() {
        return Err(Error::NonFinite { context: "density" });
    }
    let roots = solve_cubic(x, a)?;
    let rho = match roots.pair_root() {
        Some(s) => s.im.abs() / PI,
        None => 0.0,
    };
    Ok(DensityValue { x, rho })
}

fn density_value(x: f64, a: &SourceParameter) -> f64 {
    density(x, a).expect("finite abscissa").rho
}

/// Positive abscissas where the discriminant changes sign, ascending.
///
/// Coarse scan over (0, a+3) followed by bisection on the discriminant's
/// sign to an absolute tolerance of 1e-12. `a + 3` exceeds the outermost
/// edge for every source strength this crate accepts.
pub(crate) fn positive_discriminant_roots(a: f64) -> Vec<f64> {
    const STEPS: usize = 8192;
    const EDGE_TOL: f64 = 1e-12;

    let hi = a + 3.0;
    let step = hi / STEPS as f64;
    let mut roots = Vec::new();
    let mut x_prev = 0.0;
    let mut sign_prev = discriminant(0.0, a) >= 0.0;
    for k in 1..=STEPS {
        let x = step * k as f64;
        let sign = discriminant(x, a) >= 0.0;
        if sign != sign_prev {
            let (mut lo, mut hi) = (x_prev, x);
            while hi - lo > EDGE_TOL {
                let mid = 0.5 * (lo + hi);
                if (discriminant(mid, a) >= 0.0) == sign_prev {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            // Report the bracket end on the zero-density side, so the
            // density evaluated exactly at a returned edge is zero.
            roots.push(if sign_prev { lo } else { hi });
            sign_prev = sign;
        }
        x_prev = x;
    }
    roots
}

/// Band edges for the supercritical regime (a > 1), located as the sign
/// changes of the cubic discriminant in x.
///
/// a = 0 returns the semicircle band as (0, 2). 0 < a <= 1 is refused:
/// the two-band support statement holds only above the critical strength.
pub fn support_edges(a: &SourceParameter) -> Result<SupportEdges> {
    match a.regime() {
        Regime::Degenerate => Ok(SupportEdges { z2: 0.0, z1: 2.0 }),
        Regime::Other => Err(Error::UnsupportedRegime { a: a.a() }),
        Regime::Supercritical => {
            let roots = positive_discriminant_roots(a.a());
            debug_assert_eq!(roots.len(), 2, "supercritical discriminant must change sign twice");
            if roots.len() != 2 {
                return Err(Error::UnsupportedRegime { a: a.a() });
            }
            Ok(SupportEdges {
                z2: roots[0],
                z1: roots[1],
            })
        }
    }
}

/// Mass of the limiting measure on [lo, hi], by adaptive Simpson quadrature
/// (absolute tolerance 1e-8) with forced subdivision at every support edge
/// inside the interval. Clamped to [0, 1] against quadrature roundoff.
pub fn interval_mass(lo: f64, hi: f64, a: &SourceParameter) -> Result<f64> {
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
    let mut forced = Vec::new();
    for r in positive_discriminant_roots(a.a()) {
        forced.push(r);
        forced.push(-r);
    }
    let f = |x: f64| density_value(x, a);
    let mass = quadrature::adaptive_simpson(&f, lo, hi, 1e-8, &forced, 40);
    Ok(mass.clamp(0.0, 1.0))
}
