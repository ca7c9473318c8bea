//! Shared test oracles. Everything here is independent of the library's
//! implementation paths: roots come from a companion-matrix QR iteration,
//! tridiagonal eigenvalues from Sturm bisection, sums from compensated
//! summation, and reference densities from closed forms.

#![allow(dead_code)]
// Index arithmetic on small fixed matrices reads better than iterator
// chains here.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

/// Roots of the monic cubic s^3 + b s^2 + c s + d, as eigenvalues of its
/// companion matrix under a shifted complex QR iteration with deflation.
pub fn companion_cubic_roots(b: f64, c: f64, d: f64) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut a = [
        [zero, zero, Complex64::new(-d, 0.0)],
        [one, zero, Complex64::new(-c, 0.0)],
        [zero, one, Complex64::new(-b, 0.0)],
    ];

    let mut roots: Vec<Complex64> = Vec::new();
    let mut m = 3usize;
    let mut guard = 0usize;
    while m > 2 {
        guard += 1;
        assert!(guard < 500, "companion QR did not deflate");
        let tiny = 1e-15 * (a[m - 1][m - 1].norm() + a[m - 2][m - 2].norm() + 1.0);
        if a[m - 1][m - 2].norm() <= tiny {
            roots.push(a[m - 1][m - 1]);
            m -= 1;
            continue;
        }
        // Split in the middle: leading 1x1 plus trailing 2x2.
        let tiny_mid = 1e-15 * (a[0][0].norm() + a[1][1].norm() + 1.0);
        if a[1][0].norm() <= tiny_mid {
            roots.push(a[0][0]);
            // Shift the trailing 2x2 into the leading block.
            let block = [[a[1][1], a[1][2]], [a[2][1], a[2][2]]];
            a[0][0] = block[0][0];
            a[0][1] = block[0][1];
            a[1][0] = block[1][0];
            a[1][1] = block[1][1];
            m -= 1;
            continue;
        }

        // Wilkinson shift: trailing 2x2 eigenvalue nearest the corner.
        let (t00, t01, t10, t11) = (a[m - 2][m - 2], a[m - 2][m - 1], a[m - 1][m - 2], a[m - 1][m - 1]);
        let tr = t00 + t11;
        let det = t00 * t11 - t01 * t10;
        let disc = (tr * tr - 4.0 * det).sqrt();
        let r1 = 0.5 * (tr + disc);
        let r2 = 0.5 * (tr - disc);
        let shift = if (r1 - t11).norm() <= (r2 - t11).norm() {
            r1
        } else {
            r2
        };

        for i in 0..m {
            a[i][i] -= shift;
        }
        // QR by 2x2 unitaries on rows (k, k+1), then RQ.
        let mut rotations = Vec::new();
        for k in 0..m - 1 {
            let f = a[k][k];
            let g = a[k + 1][k];
            let r = (f.norm_sqr() + g.norm_sqr()).sqrt();
            if r == 0.0 {
                rotations.push((one, zero));
                continue;
            }
            // U = (1/r) [[conj f, conj g], [-g, f]] sends (f, g) to (r, 0).
            let cf = f.conj() / r;
            let cg = g.conj() / r;
            for j in 0..m {
                let top = a[k][j];
                let bot = a[k + 1][j];
                a[k][j] = cf * top + cg * bot;
                a[k + 1][j] = -cg.conj() * top + cf.conj() * bot;
            }
            rotations.push((cf, cg));
        }
        for (k, (cf, cg)) in rotations.into_iter().enumerate() {
            // A <- A U_k^H on columns (k, k+1), U_k^H = (1/r)[[f,-g**],[g,f**]].
            for row in a.iter_mut().take(m) {
                let left = row[k];
                let right = row[k + 1];
                row[k] = left * cf.conj() + right * cg.conj();
                row[k + 1] = left * -cg + right * cf;
            }
        }
        for i in 0..m {
            a[i][i] += shift;
        }
    }

    // Remaining 2x2 block: quadratic formula.
    let (t00, t01, t10, t11) = (a[0][0], a[0][1], a[1][0], a[1][1]);
    let tr = t00 + t11;
    let det = t00 * t11 - t01 * t10;
    let disc = (tr * tr - 4.0 * det).sqrt();
    roots.push(0.5 * (tr + disc));
    roots.push(0.5 * (tr - disc));

    [roots[0], roots[1], roots[2]]
}

/// Match each expected root to the nearest got root (greedy over all
/// permutations of three) and return the largest pairing distance.
pub fn max_root_distance(got: &[Complex64; 3], expected: &[Complex64; 3]) -> f64 {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    perms
        .iter()
        .map(|p| {
            (0..3)
                .map(|i| (got[i] - expected[p[i]]).norm())
                .fold(0.0f64, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Number of eigenvalues of the symmetric tridiagonal strictly below
/// `lambda`, from the sign pattern of the LDL^T pivots.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let mut count = 0usize;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let guard = 1e-300;
        let q_safe = if q.abs() < guard {
            if q >= 0.0 {
                guard
            } else {
                -guard
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - off[i - 1] * off[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// All eigenvalues of the symmetric tridiagonal via Sturm bisection,
/// ascending, bisected to machine precision.
pub fn sturm_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 0 {
        return Vec::new();
    }
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    lo -= 1.0;
    hi += 1.0;

    (0..n)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if (b - a) < 2.0 * f64::EPSILON * mid.abs().max(1.0) {
                    break;
                }
                if sturm_count(diag, off, mid) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

/// Compensated (Kahan) evaluation of (1/n) sum 1/(lambda - z).
pub fn kahan_stieltjes(values: &[f64], z: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0);
    for &lambda in values {
        let term = (Complex64::new(lambda, 0.0) - z).inv();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum / values.len() as f64
}

/// Semicircle density sqrt(4 - x^2) / (2 pi) on [-2, 2].
pub fn semicircle_density(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * std::f64::consts::PI)
    }
}

/// Monic cubic residual |s^3 - x s^2 - (a^2-1) s + x a^2|.
pub fn cubic_residual(s: Complex64, x: f64, a: f64) -> f64 {
    (((s - x) * s - (a * a - 1.0)) * s + x * a * a).norm()
}

/// Residual scale 1e-10 (1 + |x|^3 + a^3) from the root contract.
pub fn residual_budget(x: f64, a: f64) -> f64 {
    1e-10 * (1.0 + x.abs().powi(3) + a.powi(3))
}
