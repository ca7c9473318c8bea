//! Stieltjes transform of the limiting measure via its subordination
//! fixed point.
//!
//! The limiting measure is the free convolution of the semicircle law with
//! the two-atom law (delta_a + delta_{-a}) / 2. Writing g(z) for the
//! Cauchy transform with the Im g < 0 branch on the upper half-plane, g
//! solves
//!
//!     g = ( 1/(z - g - a) + 1/(z - g + a) ) / 2,
//!
//! and the Stieltjes transform under the convention s(z) = int dmu(x)/(x-z)
//! is s(z) = -g(z). Substituting u = z - g turns the fixed point into the
//! same cubic the density module solves, which is verified in the tests:
//!
//!     u^3 - z u^2 - (a^2 - 1) u + z a^2 = 0.
//!
//! The solver damps the fixed-point map (it is only a contraction high in
//! the half-plane), continues in eta from 10 down to the target, and
//! finishes with Newton steps.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pastur::SourceParameter;

/// Hard floor on the imaginary part of admissible query points.
pub const ETA_FLOOR: f64 = 1e-12;

/// Iteration budget across continuation, damping, and Newton combined.
const ITERATION_BUDGET: usize = 10_000;

/// Target residual |g - F(g)| for the finishing Newton phase.
const NEWTON_RESIDUAL: f64 = 1e-12;

/// A point z = x + i eta in the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesQuery {
    x: f64,
    eta: f64,
}

impl StieltjesQuery {
    pub fn new(x: f64, eta: f64) -> Result<Self> {
        if !x.is_finite() || !eta.is_finite() {
            return Err(Error::NonFinite {
                context: "StieltjesQuery",
            });
        }
        if eta < ETA_FLOOR {
            return Err(Error::EtaTooSmall {
                eta,
                floor: ETA_FLOOR,
            });
        }
        Ok(Self { x, eta })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.x, self.eta)
    }
}

/// A transform value under the convention s(z) = int dmu(x) / (x - z),
/// which maps the upper half-plane into itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesValue {
    pub value: Complex64,
}

/// Fixed-point map F(g) = ( 1/(z-g-a) + 1/(z-g+a) ) / 2.
fn fixed_point_map(z: Complex64, g: Complex64, a: f64) -> Complex64 {
    0.5 * ((z - g - a).inv() + (z - g + a).inv())
}

/// dF/dg = ( 1/(z-g-a)^2 + 1/(z-g+a)^2 ) / 2.
fn fixed_point_map_derivative(z: Complex64, g: Complex64, a: f64) -> Complex64 {
    let u = (z - g - a).inv();
    let v = (z - g + a).inv();
    0.5 * (u * u + v * v)
}

/// Solve the subordination fixed point at z, warm-started from `guess`.
/// Returns g with Im g < 0. `budget` is decremented in place.
fn solve_fixed_point(
    z: Complex64,
    a: f64,
    guess: Complex64,
    budget: &mut usize,
) -> Result<Complex64> {
    const DAMPING: f64 = 0.5;

    let mut g = guess;
    let mut residual = (g - fixed_point_map(z, g, a)).norm();

    // Damped fixed-point phase: robust, linearly convergent. A loose exit
    // is enough, Newton takes it the rest of the way.
    while residual > 1e-6 {
        if *budget == 0 {
            return Err(Error::FixedPointDiverged {
                z,
                iterations: ITERATION_BUDGET,
                residual,
            });
        }
        *budget -= 1;
        g += DAMPING * (fixed_point_map(z, g, a) - g);
        residual = (g - fixed_point_map(z, g, a)).norm();
    }

    // Newton finish on R(g) = g - F(g).
    while residual > NEWTON_RESIDUAL {
        if *budget == 0 {
            return Err(Error::FixedPointDiverged {
                z,
                iterations: ITERATION_BUDGET,
                residual,
            });
        }
        *budget -= 1;
        let deriv = Complex64::new(1.0, 0.0) - fixed_point_map_derivative(z, g, a);
        if deriv.norm() < 1e-14 {
            // Fall back to damped iteration at a critical point.
            g += DAMPING * (fixed_point_map(z, g, a) - g);
        } else {
            let cand = g - (g - fixed_point_map(z, g, a)) / deriv;
            let cand_res = (cand - fixed_point_map(z, cand, a)).norm();
            if cand_res <= residual && cand.im < 0.0 {
                g = cand;
            } else {
                g += DAMPING * (fixed_point_map(z, g, a) - g);
            }
        }
        residual = (g - fixed_point_map(z, g, a)).norm();
    }

    Ok(g)
}

/// Cauchy transform g(z) = int dmu(t) / (z - t) on the Im g < 0 branch,
/// with eta-continuation from high in the half-plane down to the query.
fn cauchy_transform(z_target: Complex64, a: f64) -> Result<Complex64> {
    let mut budget = ITERATION_BUDGET;

    // Continuation path: halve eta from max(10, eta) down to the target.
    let mut etas = Vec::new();
    let mut eta = 10.0f64.max(z_target.im);
    while eta > z_target.im {
        etas.push(eta);
        eta *= 0.5;
    }
    etas.push(z_target.im);

    let mut g = Complex64::new(z_target.re, etas[0]).inv();
    for &eta in &etas {
        let z = Complex64::new(z_target.re, eta);
        g = solve_fixed_point(z, a, g, &mut budget)?;
    }
    Ok(g)
}

/// Stieltjes transform s(z) = -g(z) of the limiting measure at q.
///
/// Deterministic; fails (with the final residual) rather than returning an
/// unconverged value.
pub fn limiting_stieltjes(q: StieltjesQuery, a: &SourceParameter) -> Result<StieltjesValue> {
    let g = cauchy_transform(q.z(), a.a())?;
    Ok(StieltjesValue { value: -g })
}

/// Boundary route to the density: (1/pi) Im s(x + i eta_last), checking
/// that the last two eta levels agree to 1e-6. The eta sequence must be
/// strictly decreasing with last element >= 1e-9.
///
/// This is a cross-check oracle for the cubic-branch density, not the
/// production path.
pub fn density_from_stieltjes(
    x: f64,
    a: &SourceParameter,
    eta_sequence: &[f64],
) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite {
            context: "density_from_stieltjes",
        });
    }
    if eta_sequence.is_empty() {
        return Err(Error::Config("eta sequence must be non-empty".into()));
    }
    for pair in eta_sequence.windows(2) {
        if pair[1] >= pair[0] {
            return Err(Error::Config(
                "eta sequence must be strictly decreasing".into(),
            ));
        }
    }
    let last = *eta_sequence.last().unwrap();
    if last < 1e-9 {
        return Err(Error::EtaTooSmall {
            eta: last,
            floor: 1e-9,
        });
    }

    let mut previous: Option<f64> = None;
    let mut value = 0.0;
    for &eta in eta_sequence {
        let q = StieltjesQuery::new(x, eta)?;
        let s = limiting_stieltjes(q, a)?;
        value = s.value.im / std::f64::consts::PI;
        if let Some(prev) = previous {
            let change = (value - prev).abs();
            if eta == last && change >= 1e-6 {
                return Err(Error::BoundaryNotSettled { x, change });
            }
        }
        previous = Some(value);
    }
    Ok(value)
}

/// Closed-form semicircle transform g_sc(z) = (z - sqrt(z^2 - 4)) / 2 on
/// the branch with g ~ 1/z at infinity. Used by tests and the a = 0
/// reductions.
pub fn semicircle_cauchy(z: Complex64) -> Complex64 {
    // sqrt(z-2) sqrt(z+2) keeps the cut on [-2, 2] and the ~z asymptotics.
    let w = (z - 2.0).sqrt() * (z + 2.0).sqrt();
    0.5 * (z - w)
}
