//! Frozen spectra checked with oracles that avoid the eigensolver.

use gainforge::catalog::catalog_entry;
use gainforge::linalg::CMatrix;
use gainforge::params::Params;
use gainforge::spectral::char_poly_elementary;
use gainforge::{GainGraph, UnitGain};

/// Coefficients of `(λ² − θ²)^h`, highest degree first.
fn pm_poly(theta: f64, h: usize) -> Vec<f64> {
    let mut c = vec![1.0];
    for _ in 0..h {
        let mut next = vec![0.0; c.len() + 2];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 2] -= theta * theta * x;
        }
        c = next;
    }
    c
}

fn build(name: &str, params: &Params) -> GainGraph {
    (catalog_entry(name).unwrap().build)(params).unwrap()
}

fn assert_char_poly(g: &GainGraph, theta: f64, label: &str) {
    let direct = char_poly_elementary(g, 12).unwrap();
    let expected = pm_poly(theta, g.n() / 2);
    let gap = direct.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(gap <= 1e-6, "{label}: {direct:?}");
}

#[test]
fn appendix_spectra_by_permutation_expansion() {
    assert_char_poly(&build("K8star", &Params::new()), 7f64.sqrt(), "K8star");
    assert_char_poly(&build("K10star", &Params::new()), 3.0, "K10star");
    assert_char_poly(&build("M4", &Params::new()), 5f64.sqrt(), "M4");
    for name in ["M1(x)", "M2(x)", "M3(x)"] {
        for x in [UnitGain::ONE, UnitGain::root(1, 5), UnitGain::from_angle(2.1)] {
            let g = build(name, &Params::new().with_gain("x", x));
            assert_char_poly(&g, 5f64.sqrt(), name);
        }
    }
}

/// Checks `A² = aA + kI` by multiplication and reads `m` off `trace(A) = 0`.
fn assert_quadratic(g: &GainGraph, theta1: f64, theta2: f64, m: usize) {
    let a = g.matrix();
    let (sum, prod) = (theta1 + theta2, theta1 * theta2);
    let lhs = a.mul(&a);
    let rhs = a.scale(sum.into()).add(&CMatrix::identity(g.n()).scale((-prod).into()));
    assert!(lhs.sub(&rhs).max_abs() <= 1e-9, "quadratic relation fails");
    let trace = a.trace().re;
    assert!(trace.abs() <= 1e-9);
    let n = g.n() as f64;
    let m_from_trace = -theta2 * n / (theta1 - theta2);
    assert!((m_from_trace - m as f64).abs() <= 1e-9, "m = {m_from_trace}");
}

#[test]
fn geometry_spectra_by_quadratic_relation() {
    let s3 = 3f64.sqrt();
    assert_quadratic(&build("Witting", &Params::new()), 9.0 * s3, -s3, 4);
    assert_quadratic(&build("ST33", &Params::new()), 16.0, -2.0, 5);
    for name in ["CoxeterTodd2", "CoxeterTodd3", "CoxeterTodd4"] {
        let g = build(name, &Params::new());
        assert_eq!(g.n(), 126);
        assert_quadratic(&g, 40.0, -2.0, 6);
    }
}

#[test]
fn renes_spectra_by_quadratic_relation() {
    for p in [3usize, 7, 11, 19] {
        let g = gainforge::families::renes(p as u64).unwrap();
        let pf = p as f64;
        assert_quadratic(&g, (pf + 1.0).sqrt(), -(pf - 1.0) / (pf + 1.0).sqrt(), (p - 1) / 2);
    }
}
