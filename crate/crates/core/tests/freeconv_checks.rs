//! Free-convolution transform checks: tail bound, cubic consistency, and
//! agreement of both density routes.

mod common;

use extsource_core::freeconv::{
    density_from_stieltjes, limiting_stieltjes, semicircle_cauchy, StieltjesQuery,
};
use extsource_core::pastur::{density, support_edges, SourceParameter};
use num_complex::Complex64;

fn source(a: f64) -> SourceParameter {
    SourceParameter::new(a).unwrap()
}

#[test]
fn second_moment_tail_bound() {
    // |s(iY) - i/Y| <= 2/Y^2 for Y >= 100 (finite-variance measure).
    for &a in &[0.0, 1.5, 2.0, 3.0] {
        let src = source(a);
        for &y in &[100.0, 1e3, 1e4, 1e6] {
            let s = limiting_stieltjes(StieltjesQuery::new(0.0, y).unwrap(), &src)
                .unwrap()
                .value;
            let diff = (s - Complex64::new(0.0, 1.0 / y)).norm();
            assert!(diff <= 2.0 / (y * y), "a={a}, Y={y}: diff {diff:.3e}");
        }
    }
}

#[test]
fn substituted_root_satisfies_the_cubic() {
    // u = z - g(z) must be a root of u^3 - z u^2 - (a^2-1) u + z a^2 at
    // complex argument z (residual oracle).
    let probes = [
        (0.1, 0.01, 2.0),
        (2.1, 0.001, 2.0),
        (1.0, 0.5, 1.5),
        (-2.7, 0.02, 3.0),
        (0.0, 1.0, 0.0),
    ];
    for &(x, eta, a) in &probes {
        let src = source(a);
        let s = limiting_stieltjes(StieltjesQuery::new(x, eta).unwrap(), &src)
            .unwrap()
            .value;
        let z = Complex64::new(x, eta);
        let u = z + s; // z - g with g = -s
        let residual = (((u - z) * u - (a * a - 1.0)) * u + z * a * a).norm();
        assert!(
            residual <= 1e-8,
            "x={x}, eta={eta}, a={a}: residual {residual:.3e}"
        );
    }
}

#[test]
fn both_density_routes_agree_at_band_midpoints() {
    for &a in &[1.5, 2.0, 3.0] {
        let src = source(a);
        let mid = support_edges(&src).unwrap().band_midpoint();
        let cubic_route = density(mid, &src).unwrap().rho;
        let boundary_route =
            density_from_stieltjes(mid, &src, &[1e-4, 1e-6, 1e-8]).unwrap();
        assert!(
            (cubic_route - boundary_route).abs() <= 1e-6,
            "a={a}: cubic {cubic_route} vs boundary {boundary_route}"
        );
    }
}

#[test]
fn imaginary_parts_of_both_conventions_agree_near_the_axis() {
    // u = z - g and s = -g satisfy u = z + s, so Im u = eta + Im s. On
    // the real axis (eta -> 0) both conventions therefore give the same
    // |Im| and the same density.
    let src = source(2.0);
    let mid = support_edges(&src).unwrap().band_midpoint();
    let eta = 1e-9;
    let s = limiting_stieltjes(StieltjesQuery::new(mid, eta).unwrap(), &src)
        .unwrap()
        .value;
    let z = Complex64::new(mid, eta);
    let u = z + s;
    let rho = density(mid, &src).unwrap().rho;
    let pi = std::f64::consts::PI;
    assert!((s.im.abs() / pi - rho).abs() <= 1e-6);
    assert!((u.im.abs() / pi - rho).abs() <= 1e-6);
}

#[test]
fn semicircle_closed_form_matches_solver_off_axis() {
    let src = source(0.0);
    for &(x, eta) in &[(0.0, 2.0), (1.0, 0.3), (-1.7, 0.05), (2.5, 0.5)] {
        let s = limiting_stieltjes(StieltjesQuery::new(x, eta).unwrap(), &src)
            .unwrap()
            .value;
        let closed = -semicircle_cauchy(Complex64::new(x, eta));
        assert!(
            (s - closed).norm() <= 1e-10,
            "x={x}, eta={eta}: {s} vs {closed}"
        );
    }
}

#[test]
fn boundary_route_flags_edges() {
    // Right at a band edge the eta sequence cannot settle to 1e-6.
    let src = source(2.0);
    let edge = support_edges(&src).unwrap().z1;
    let result = density_from_stieltjes(edge, &src, &[1e-2, 1e-5, 1e-8]);
    assert!(result.is_err(), "edge richardson check unexpectedly settled");
}
