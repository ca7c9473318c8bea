//! Adaptive Simpson quadrature with forced breakpoints.
//!
//! The densities integrated here vanish like a square root at the band
//! edges, which defeats naive adaptivity when an edge sits inside a panel.
//! Callers therefore pass the edge abscissas as forced breakpoints; each
//! resulting panel is refined recursively with a per-panel error budget
//! proportional to its width.

/// Integrate `f` over `[lo, hi]` to absolute tolerance `tol`.
///
/// `forced` lists abscissas at which subdivision is mandatory (points
/// strictly inside the interval; others are ignored). `max_depth` caps the
/// recursion per panel; on cap the current refinement is accepted.
pub fn adaptive_simpson<F>(f: &F, lo: f64, hi: f64, tol: f64, forced: &[f64], max_depth: u32) -> f64
where
    F: Fn(f64) -> f64,
{
    debug_assert!(lo <= hi);
    if lo == hi {
        return 0.0;
    }

    let mut cuts: Vec<f64> = vec![lo];
    let mut inner: Vec<f64> = forced
        .iter()
        .copied()
        .filter(|&c| c > lo && c < hi)
        .collect();
    inner.sort_by(|p, q| p.partial_cmp(q).unwrap());
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);

    let total_width = hi - lo;
    let mut sum = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let panel_tol = tol * ((b - a) / total_width);
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = simpson(a, b, fa, fm, fb);
        sum += refine(f, a, fa, m, fm, b, fb, whole, panel_tol, max_depth);
    }
    sum
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<F>(
    f: &F,
    a: f64,
    fa: f64,
    m: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64
where
    F: Fn(f64) -> f64,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    refine(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let f = |x: f64| 3.0 * x * x;
        let got = adaptive_simpson(&f, 0.0, 2.0, 1e-12, &[], 40);
        assert!((got - 8.0).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn sqrt_edge_with_forced_breakpoint() {
        // int_0^1 sqrt(x) dx = 2/3, singular derivative at 0
        let f = |x: f64| x.max(0.0).sqrt();
        let got = adaptive_simpson(&f, -1.0, 1.0, 1e-10, &[0.0], 40);
        assert!((got - 2.0 / 3.0).abs() < 1e-8, "got {got}");
    }

    #[test]
    fn forced_points_outside_interval_are_ignored()  {
        let f = |x: f64| x.cos();
        let got = adaptive_simpson(&f, 0.0, 1.0, 1e-12, &[-5.0, 7.0], 40);
        assert!((got - 1.0f64.sin()).abs() < 1e-11);
    }

    #[test]
    fn empty_interval_is_zero() {
        let f = |x: f64| x;
        assert_eq!(adaptive_simpson(&f, 1.0, 1.0, 1e-8, &[], 40), 0.0);
    }
}
