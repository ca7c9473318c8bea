//! Dense complex Hermitian eigensolver.
//!
//! Householder reduction to a real symmetric tridiagonal followed by the
//! implicitly shifted symmetric QL iteration with Wilkinson shifts. The
//! reduction works on separate real and imaginary planes so the trailing
//! rank-2 updates stay contiguous; the unitary factor is accumulated only
//! when eigenvectors are requested.
//!
//! Accuracy is what this style of solver is known for at desk scale
//! (n up to a few thousand): eigenvalues to roughly n * eps * ||H|| and
//! residuals ||H u - lambda u|| of the same order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::HermitianMatrix;

/// Maximum QL sweeps spent per eigenvalue before reporting failure.
const MAX_SWEEPS: usize = 30;

/// Real symmetric tridiagonal: diag has length n, off length n-1.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Sorted eigenvalues, optionally paired with orthonormal eigenvectors.
///
/// Column k of `vectors` goes with `values[k]`. Vector phases are fixed by
/// making the largest-modulus component real positive, so repeated solves
/// of the same matrix are bit-identical.
#[derive(Debug, Clone)]
pub struct SpectralSample {
    values: Vec<f64>,
    vectors: Option<Vec<Vec<Complex64>>>,
}

impl SpectralSample {
    pub fn from_sorted_values(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        Self {
            values,
            vectors: None,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Eigenvalues in ascending order.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> Option<&[Vec<Complex64>]> {
        self.vectors.as_deref()
    }

    /// Smallest gap between consecutive eigenvalues (infinite for n < 2).
    pub fn min_gap(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Split-plane copy of a Hermitian matrix, row-major.
struct Planes {
    n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Planes {
    fn from_matrix(h: &HermitianMatrix) -> Self {
        let n = h.n();
        let src = h.as_slice();
        let mut re = vec![0.0; n * n];
        let mut im = vec![0.0; n * n];
        for (k, v) in src.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        Self { n, re, im }
    }
}

/// One Householder reflector H = I - tau v v^H, with v[0] = 1 implicit and
/// v supported on rows `start..n`.
struct Reflector {
    start: usize,
    tau: Complex64,
    v_re: Vec<f64>,
    v_im: Vec<f64>,
}

/// Reduce to tridiagonal form. Returns (diag, off, reflectors); reflectors
/// are collected only when `keep` is set.
fn reduce(planes: &mut Planes, keep: bool) -> (Vec<f64>, Vec<f64>, Vec<Reflector>) {
    let n = planes.n;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut reflectors = Vec::new();
    if n == 0 {
        return (diag, off, reflectors);
    }

    let mut v_re = vec![0.0; n];
    let mut v_im = vec![0.0; n];
    let mut w_re = vec![0.0; n];
    let mut w_im = vec![0.0; n];

    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1; // length of the column below the diagonal
        let a_re = planes.re[(k + 1) * n + k];
        let a_im = planes.im[(k + 1) * n + k];
        let mut tail_sq = 0.0;
        for i in (k + 2)..n {
            let r = planes.re[i * n + k];
            let s = planes.im[i * n + k];
            tail_sq += r * r + s * s;
        }

        if tail_sq == 0.0 && a_im == 0.0 {
            // Column already in tridiagonal form.
            off[k] = a_re;
            diag[k] = planes.re[k * n + k];
            continue;
        }

        let norm = (a_re * a_re + a_im * a_im + tail_sq).sqrt();
        let beta = -norm.copysign(a_re);
        let tau = Complex64::new((beta - a_re) / beta, -a_im / beta);
        // v = (y - beta e1) / (alpha - beta), v[0] = 1.
        let denom = Complex64::new(a_re - beta, a_im);
        let inv = denom.inv();
        v_re[0] = 1.0;
        v_im[0] = 0.0;
        for i in (k + 2)..n {
            let y = Complex64::new(planes.re[i * n + k], planes.im[i * n + k]);
            let v = y * inv;
            v_re[i - k - 1] = v.re;
            v_im[i - k - 1] = v.im;
        }
        off[k] = beta;

        // u = A_sub v over the trailing block (rows/cols k+1..n).
        for i in 0..m {
            let row = k + 1 + i;
            let rr = &planes.re[row * n + k + 1..row * n + n];
            let ri = &planes.im[row * n + k + 1..row * n + n];
            let mut acc_re = 0.0;
            let mut acc_im = 0.0;
            for j in 0..m {
                let (ar, ai) = (rr[j], ri[j]);
                let (br, bi) = (v_re[j], v_im[j]);
                acc_re += ar * br - ai * bi;
                acc_im += ar * bi + ai * br;
            }
            w_re[i] = acc_re;
            w_im[i] = acc_im;
        }

        // w = tau u; w += alpha v with alpha = -(tau/2) (w^H v).
        for i in 0..m {
            let t = tau * Complex64::new(w_re[i], w_im[i]);
            w_re[i] = t.re;
            w_im[i] = t.im;
        }
        let mut dot = Complex64::new(0.0, 0.0);
        for i in 0..m {
            // conj(w) * v
            dot += Complex64::new(w_re[i], -w_im[i]) * Complex64::new(v_re[i], v_im[i]);
        }
        let alpha = -0.5 * tau * dot;
        for i in 0..m {
            let t = alpha * Complex64::new(v_re[i], v_im[i]);
            w_re[i] += t.re;
            w_im[i] += t.im;
        }

        // A -= v w^H + w v^H on the trailing block.
        for i in 0..m {
            let row = k + 1 + i;
            let (vr, vi) = (v_re[i], v_im[i]);
            let (wr, wi) = (w_re[i], w_im[i]);
            let rr = &mut planes.re[row * n + k + 1..row * n + n];
            for j in 0..m {
                rr[j] -= vr * w_re[j] + vi * w_im[j] + wr * v_re[j] + wi * v_im[j];
            }
            let ri = &mut planes.im[row * n + k + 1..row * n + n];
            for j in 0..m {
                ri[j] -= vi * w_re[j] - vr * w_im[j] + wi * v_re[j] - wr * v_im[j];
            }
        }

        diag[k] = planes.re[k * n + k];
        if keep {
            reflectors.push(Reflector {
                start: k + 1,
                tau,
                v_re: v_re[..m].to_vec(),
                v_im: v_im[..m].to_vec(),
            });
        }
    }
    diag[n - 1] = planes.re[(n - 1) * n + (n - 1)];
    (diag, off, reflectors)
}

/// Accumulate Q = H_0 H_1 ... H_{n-2} as a list of columns.
fn accumulate_q(n: usize, reflectors: &[Reflector]) -> Vec<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); n];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();
    // Right-multiplication: Q <- Q - tau (Q v) v^H, column j of the update
    // is -tau (Q v) conj(v_j).
    for refl in reflectors {
        let s = refl.start;
        let m = refl.v_re.len();
        // t = Q v (only rows of v's support contribute).
        let mut t = vec![Complex64::new(0.0, 0.0); n];
        for (idx, col) in q.iter().enumerate().skip(s).take(m) {
            let vi = Complex64::new(refl.v_re[idx - s], refl.v_im[idx - s]);
            for (ti, cij) in t.iter_mut().zip(col.iter()) {
                *ti += cij * vi;
            }
        }
        for (idx, col) in q.iter_mut().enumerate().skip(s).take(m) {
            let coeff =
                refl.tau * Complex64::new(refl.v_re[idx - s], -refl.v_im[idx - s]);
            for (cij, ti) in col.iter_mut().zip(t.iter()) {
                *cij -= ti * coeff;
            }
        }
    }
    q
}

/// Implicitly shifted symmetric QL sweeps on (d, e), optionally rotating
/// the columns of `q` along. `e` must have length n (last slot scratch).
fn ql_implicit(
    d: &mut [f64],
    e: &mut [f64],
    mut q: Option<&mut Vec<Vec<Complex64>>>,
) -> Result<()> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    debug_assert_eq!(e.len(), n);
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // First negligible off-diagonal at or after l.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::EigenSweepBudget {
                    index: l,
                    sweeps: MAX_SWEEPS,
                });
            }

            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;

            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                if let Some(cols) = q.as_deref_mut() {
                    // Right rotation on columns i, i+1.
                    let (left, right) = cols.split_at_mut(i + 1);
                    let qi = &mut left[i];
                    let qi1 = &mut right[0];
                    for (x, y) in qi.iter_mut().zip(qi1.iter_mut()) {
                        let t = *y;
                        *y = s * *x + c * t;
                        *x = c * *x - s * t;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Householder reduction T = Q^H H Q (the accumulator is not formed).
pub fn tridiagonalize(h: &HermitianMatrix) -> Tridiagonal {
    let mut planes = Planes::from_matrix(h);
    let (diag, off, _) = reduce(&mut planes, false);
    Tridiagonal { diag, off }
}

/// Householder reduction returning the unitary accumulator as columns,
/// so that H = Q T Q^H.
pub fn tridiagonalize_with_q(h: &HermitianMatrix) -> (Tridiagonal, Vec<Vec<Complex64>>) {
    let mut planes = Planes::from_matrix(h);
    let (diag, off, reflectors) = reduce(&mut planes, true);
    let q = accumulate_q(h.n(), &reflectors);
    (Tridiagonal { diag, off }, q)
}

/// All eigenvalues of a Hermitian matrix, sorted ascending.
pub fn eigenvalues(h: &HermitianMatrix) -> Result<SpectralSample> {
    let tri = tridiagonalize(h);
    let mut d = tri.diag;
    let mut e = tri.off;
    e.push(0.0);
    ql_implicit(&mut d, &mut e, None)?;
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SpectralSample {
        values: d,
        vectors: None,
    })
}

/// Eigenvalues and orthonormal eigenvectors.
pub fn eigen_full(h: &HermitianMatrix) -> Result<SpectralSample> {
    let n = h.n();
    let (tri, mut q) = tridiagonalize_with_q(h);
    let mut d = tri.diag;
    let mut e = tri.off;
    e.push(0.0);
    ql_implicit(&mut d, &mut e, Some(&mut q))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors: Vec<Vec<Complex64>> =
        order.into_iter().map(|i| std::mem::take(&mut q[i])).collect();

    // Deterministic phase: largest-modulus component made real positive.
    for col in &mut vectors {
        let mut best = 0usize;
        let mut best_sq = -1.0;
        for (i, v) in col.iter().enumerate() {
            let m = v.norm_sqr();
            if m > best_sq {
                best_sq = m;
                best = i;
            }
        }
        let pivot = col[best];
        let modulus = pivot.norm();
        if modulus > 0.0 {
            let phase = pivot.conj() / modulus;
            for v in col.iter_mut() {
                *v *= phase;
            }
        }
    }

    Ok(SpectralSample {
        values,
        vectors: Some(vectors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{sample_wigner, AtomDistribution, AtomKind};
    use crate::stream::{trial_stream, Lane};

    fn matrix_from(entries: &[(usize, usize, Complex64)], n: usize) -> HermitianMatrix {
        let mut h = HermitianMatrix::zeros(n);
        for &(i, j, v) in entries {
            h.set(i, j, v);
        }
        h
    }

    fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
        let atoms = AtomDistribution::new(AtomKind::Gaussian);
        let mut rng = trial_stream(seed, 0, Lane::Matrix);
        let even = if n.is_multiple_of(2) { n } else { n + 1 };
        let mut h = sample_wigner(even, &atoms, &mut rng).unwrap();
        if even != n {
            // Trim to odd n by rebuilding the principal block.
            let mut t = HermitianMatrix::zeros(n);
            for i in 0..n {
                for j in i..n {
                    t.set(i, j, h.get(i, j));
                }
            }
            h = t;
        }
        h
    }

    #[test]
    fn diagonal_matrix_is_its_own_tridiagonal() {
        let h = matrix_from(
            &[
                (0, 0, Complex64::new(3.0, 0.0)),
                (1, 1, Complex64::new(1.0, 0.0)),
                (2, 2, Complex64::new(2.0, 0.0)),
            ],
            3,
        );
        let tri = tridiagonalize(&h);
        assert_eq!(tri.diag, vec![3.0, 1.0, 2.0]);
        assert_eq!(tri.off, vec![0.0, 0.0]);
        let vals = eigenvalues(&h).unwrap();
        assert_eq!(vals.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn real_tridiagonal_is_a_fixed_point() {
        let mut h = HermitianMatrix::zeros(4);
        for i in 0..4 {
            h.set(i, i, Complex64::new(i as f64, 0.0));
        }
        for i in 0..3 {
            h.set(i, i + 1, Complex64::new(0.5 + i as f64, 0.0));
        }
        let (tri, q) = tridiagonalize_with_q(&h);
        for (i, &d) in tri.diag.iter().enumerate() {
            assert_eq!(d, h.get(i, i).re);
        }
        for (i, &e) in tri.off.iter().enumerate() {
            assert_eq!(e, h.get(i + 1, i).re);
        }
        for (j, col) in q.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert_eq!(*v, Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn two_by_two_closed_forms() {
        let real = matrix_from(&[(0, 1, Complex64::new(1.0, 0.0))], 2);
        let vals = eigenvalues(&real).unwrap();
        assert!((vals.values()[0] + 1.0).abs() < 1e-14);
        assert!((vals.values()[1] - 1.0).abs() < 1e-14);

        let imag = matrix_from(&[(0, 1, Complex64::new(0.0, 1.0))], 2);
        let vals = eigenvalues(&imag).unwrap();
        assert!((vals.values()[0] + 1.0).abs() < 1e-14);
        assert!((vals.values()[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_eigenvectors_up_to_phase() {
        let h = matrix_from(&[(0, 1, Complex64::new(1.0, 0.0))], 2);
        let full = eigen_full(&h).unwrap();
        let vecs = full.vectors().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // lambda = -1: (1, -1)/sqrt2 up to phase; lambda = +1: (1, 1)/sqrt2.
        assert!((vecs[0][0].norm() - r).abs() < 1e-12);
        assert!((vecs[0][1] + vecs[0][0]).norm() < 1e-12);
        assert!((vecs[1][1] - vecs[1][0]).norm() < 1e-12);
    }

    #[test]
    fn reconstruction_residual_small() {
        let h = random_hermitian(50, 17);
        let (tri, q) = tridiagonalize_with_q(&h);
        let n = h.n();
        // Residual ||H - Q T Q^H||_F elementwise.
        let mut err_sq = 0.0;
        for i in 0..n {
            for j in 0..n {
                // (Q T Q^H)_{ij} = sum_{k,l} Q_{ik} T_{kl} conj(Q_{jl})
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    let mut tq = tri.diag[k] * q[k][i];
                    if k > 0 {
                        tq += tri.off[k - 1] * q[k - 1][i];
                    }
                    if k + 1 < n {
                        tq += tri.off[k] * q[k + 1][i];
                    }
                    acc += tq * q[k][j].conj();
                }
                err_sq += (acc - h.get(i, j)).norm_sqr();
            }
        }
        let rel = err_sq.sqrt() / h.frobenius_norm();
        assert!(rel <= 1e-12, "reconstruction residual {rel}");
    }

    #[test]
    fn trace_and_frobenius_identities() {
        let h = random_hermitian(40, 3);
        let vals = eigenvalues(&h).unwrap();
        let sum: f64 = vals.values().iter().sum();
        let sum_sq: f64 = vals.values().iter().map(|l| l * l).sum();
        let tr = h.trace();
        let fro_sq = h.frobenius_norm().powi(2);
        assert!((sum - tr).abs() <= 1e-9 * (1.0 + tr.abs()));
        assert!((sum_sq - fro_sq).abs() <= 1e-9 * fro_sq);
    }

    #[test]
    fn eigenvector_residuals_and_orthonormality() {
        let h = random_hermitian(30, 8);
        let full = eigen_full(&h).unwrap();
        let vecs = full.vectors().unwrap();
        let scale = h.frobenius_norm();
        for (k, col) in vecs.iter().enumerate() {
            let hv = h.matvec(col);
            let lambda = full.values()[k];
            let mut res_sq = 0.0;
            for i in 0..h.n() {
                res_sq += (hv[i] - lambda * col[i]).norm_sqr();
            }
            assert!(
                res_sq.sqrt() <= 1e-10 * scale,
                "residual {} at k={k}",
                res_sq.sqrt()
            );
            let norm: f64 = col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() <= 1e-12);
            for other in vecs.iter().skip(k + 1) {
                let dot: Complex64 = col
                    .iter()
                    .zip(other.iter())
                    .map(|(u, v)| u.conj() * v)
                    .sum();
                assert!(dot.norm() <= 1e-10, "orthogonality {}", dot.norm());
            }
        }
    }

    #[test]
    fn scale_equivariance() {
        let h = random_hermitian(20, 5);
        let mut h3 = HermitianMatrix::zeros(20);
        for i in 0..20 {
            for j in i..20 {
                h3.set(i, j, h.get(i, j) * -2.5);
            }
        }
        let base = eigenvalues(&h).unwrap();
        let scaled = eigenvalues(&h3).unwrap();
        // c < 0 reverses the order.
        for (k, lam) in scaled.values().iter().enumerate() {
            let expect = -2.5 * base.values()[20 - 1 - k];
            assert!((lam - expect).abs() <= 1e-12 * (1.0 + expect.abs()));
        }
    }

    #[test]
    fn permutation_conjugation_invariance() {
        let h = random_hermitian(16, 21);
        // Conjugate by a fixed permutation: (PHP^H)_{ij} = H_{p(i) p(j)}.
        let p: Vec<usize> = (0..16).map(|i| (5 * i + 3) % 16).collect();
        let mut hp = HermitianMatrix::zeros(16);
        for i in 0..16 {
            for j in i..16 {
                hp.set(i, j, h.get(p[i], p[j]));
            }
        }
        let a = eigenvalues(&h).unwrap();
        let b = eigenvalues(&hp).unwrap();
        for (x, y) in a.values().iter().zip(b.values().iter()) {
            assert!((x - y).abs() <= 1e-10 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn distinct_diagonal_gives_standard_basis_vectors() {
        let h = matrix_from(
            &[
                (0, 0, Complex64::new(-1.0, 0.0)),
                (1, 1, Complex64::new(2.0, 0.0)),
                (2, 2, Complex64::new(0.5, 0.0)),
            ],
            3,
        );
        let full = eigen_full(&h).unwrap();
        assert_eq!(full.values(), &[-1.0, 0.5, 2.0]);
        let vecs = full.vectors().unwrap();
        let expected_axis = [0usize, 2, 1];
        for (col, &axis) in vecs.iter().zip(expected_axis.iter()) {
            for (i, v) in col.iter().enumerate() {
                let expect = if i == axis { 1.0 } else { 0.0 };
                assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }
}
