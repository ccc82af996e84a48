//! Spectra, two-eigenvalue certificates and the elementary-subgraph characteristic polynomial.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;
use crate::linalg::{hermitian_eigen, CMatrix};

/// Tolerance handed to the eigensolver by default.
pub const SOLVER_TOL: f64 = 1e-15;

/// Default order limit for [`char_poly_elementary`].
pub const CHAR_POLY_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// `(value, multiplicity)`, descending by value.
    pub clusters: Vec<(f64, usize)>,
    pub cluster_tol: f64,
}

impl Spectrum {
    /// Groups sorted eigenvalues whose consecutive gaps are at most `cluster_tol`.
    pub fn from_values(mut eigenvalues: Vec<f64>, cluster_tol: f64) -> Spectrum {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        let mut clusters: Vec<(f64, usize)> = Vec::new();
        let mut start = 0;
        for i in 0..=eigenvalues.len() {
            if i == eigenvalues.len() || (i > start && eigenvalues[i - 1] - eigenvalues[i] > cluster_tol) {
                if i > start {
                    let part = &eigenvalues[start..i];
                    clusters.push((part.iter().sum::<f64>() / part.len() as f64, part.len()));
                }
                start = i;
            }
        }
        Spectrum { eigenvalues, clusters, cluster_tol }
    }

    /// True when the clusters match `expected` in order, values within `tol`.
    pub fn matches(&self, expected: &[(f64, usize)], tol: f64) -> bool {
        self.clusters.len() == expected.len()
            && self
                .clusters
                .iter()
                .zip(expected)
                .all(|(&(v, m), &(ev, em))| m == em && (v - ev).abs() <= tol)
    }
}

/// Witness that `A² = aA + kI`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoEvCertificate {
    pub theta1: f64,
    pub theta2: f64,
    /// Multiplicity of `theta1`.
    pub m: usize,
    pub a: f64,
    pub k: f64,
    pub residual: f64,
    pub degree_check: bool,
    /// Set when the certificate describes `-A` to keep `a >= 0`.
    pub negated: bool,
}

fn cluster_tol(tol: f64) -> f64 {
    (1e3 * tol).max(1e-8)
}

pub fn matrix_eigenvalues(a: &CMatrix, tol: f64) -> Result<Spectrum> {
    let eig = hermitian_eigen(a, SOLVER_TOL.max(tol.min(1e-12)), false)?;
    Ok(Spectrum::from_values(eig.values, cluster_tol(tol)))
}

/// Spectrum of the gain matrix of `g`, clustered at `max(1e-8, 1e3·tol)`.
pub fn eigenvalues(g: &GainGraph, tol: f64) -> Result<Spectrum> {
    matrix_eigenvalues(&g.matrix(), tol)
}

/// Certifies that `g` has exactly two distinct eigenvalues.
pub fn certify_two_ev(g: &GainGraph, tol: f64) -> Result<Option<TwoEvCertificate>> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    certify_matrix(&g.matrix(), g.structure_degree(), tol)
}

/// Certification on a bare Hermitian matrix; `degree` is the common degree if the support is regular.
pub fn certify_matrix(a: &CMatrix, degree: Option<usize>, tol: f64) -> Result<Option<TwoEvCertificate>> {
    let n = a.rows();
    let spec = matrix_eigenvalues(a, tol)?;
    if spec.clusters.len() != 2 {
        return Ok(None);
    }
    let (mut t1, mut m1) = spec.clusters[0];
    let (mut t2, _) = spec.clusters[1];
    let mut a_coef = t1 + t2;
    let mut negated = false;
    let mut mat = a.clone();
    if a_coef < -1e-9 {
        negated = true;
        mat = mat.scale(Complex64::new(-1.0, 0.0));
        let (n1, n2) = (-t2, -t1);
        m1 = spec.clusters[1].1;
        t1 = n1;
        t2 = n2;
        a_coef = t1 + t2;
    }
    let k = -t1 * t2;
    let residual = mat.mul(&mat).sub(&mat.scale(Complex64::new(a_coef, 0.0))).add_diagonal(-k).frobenius();
    let degree_check = degree.is_some_and(|d| (k - d as f64).abs() <= 1e-6);
    if residual > 1e-6 * n as f64 || !degree_check {
        return Ok(None);
    }
    Ok(Some(TwoEvCertificate { theta1: t1, theta2: t2, m: m1, a: a_coef, k, residual, degree_check, negated }))
}

impl GainGraph {
    /// Common degree if the underlying graph is regular.
    pub fn structure_degree(&self) -> Option<usize> {
        let d = if self.n() == 0 { 0 } else { self.degree(0) };
        (0..self.n()).all(|u| self.degree(u) == d).then_some(d)
    }
}

/// Eigenvalues forced by the order `n`, multiplicity `m` and degree `k`.
pub fn predicted_thetas(n: usize, m: usize, k: usize) -> Result<(f64, f64)> {
    if m == 0 || 2 * m > n || k == 0 {
        return Err(Error::InvalidParameters(format!("need 0 < m <= n/2 and k > 0, got n={n} m={m} k={k}")));
    }
    let (n, m, k) = (n as f64, m as f64, k as f64);
    let t1 = (k * (n - m) / m).sqrt();
    let t2 = -(k * m / (n - m)).sqrt();
    let a = t1 + t2;
    let disc = (a * a + 4.0 * k).sqrt();
    debug_assert!(((a + disc) / 2.0 - t1).abs() <= 1e-12 * t1.abs().max(1.0));
    debug_assert!(((a - disc) / 2.0 - t2).abs() <= 1e-12 * t1.abs().max(1.0));
    Ok((t1, t2))
}

/// Integrality relations between `a`, `k` and the multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerChecks {
    pub a_is_integer: bool,
    /// `a = 0`: eigenvalues are `±√k`.
    pub a_zero: bool,
    /// `a² + 4k` is a perfect square; only meaningful for integer nonzero `a`.
    pub discriminant_square: Option<bool>,
    /// `k n² / (m(n-m))` is a perfect square; only meaningful for integer positive `a`.
    pub multiplicity_square: Option<bool>,
    /// False if some check that applies fails.
    pub consistent: bool,
}

fn is_perfect_square(x: f64) -> bool {
    let r = x.round();
    (x - r).abs() <= 1e-6 && r >= 0.0 && {
        let s = (r.sqrt()).round();
        s * s == r
    }
}

pub fn integer_a_checks(cert: &TwoEvCertificate, n: usize) -> IntegerChecks {
    let a = cert.a;
    let a_is_integer = (a - a.round()).abs() <= 1e-6;
    let a_zero = a.abs() <= 1e-6;
    let (discriminant_square, multiplicity_square) = if a_is_integer && !a_zero {
        let m = cert.m as f64;
        let n = n as f64;
        (Some(is_perfect_square(a * a + 4.0 * cert.k)), Some(is_perfect_square(cert.k * n * n / (m * (n - m)))))
    } else {
        (None, None)
    };
    let consistent = discriminant_square.unwrap_or(true) && multiplicity_square.unwrap_or(true);
    IntegerChecks { a_is_integer, a_zero, discriminant_square, multiplicity_square, consistent }
}

/// Number of eigenvalues with modulus above `tol·‖A‖_F`.
pub fn rank(g: &GainGraph, tol: f64) -> Result<usize> {
    let a = g.matrix();
    let cut = tol * a.frobenius();
    let eig = hermitian_eigen(&a, SOLVER_TOL, false)?;
    Ok(eig.values.iter().filter(|v| v.abs() > cut).count())
}

/// Coefficients `c_0..c_n` of `det(λI - A) = Σ c_i λ^{n-i}` from elementary subgraphs.
pub fn char_poly_elementary(g: &GainGraph, n_limit: usize) -> Result<Vec<f64>> {
    let n = g.n();
    if n > n_limit || n > 63 {
        return Err(Error::TooLarge { n, limit: n_limit.min(63) });
    }
    let mut acc = Acc { g, coeffs: vec![0.0; n + 1] };
    acc.walk(0, 0, 0, 0, 0, 1.0);
    Ok(acc.coeffs)
}

struct Acc<'a> {
    g: &'a GainGraph,
    coeffs: Vec<f64>,
}

impl Acc<'_> {
    /// Decides the fate of every vertex `>= v` not yet covered by `used`.
    fn walk(&mut self, v: usize, used: u64, size: usize, comps: u32, cycles: u32, weight: f64) {
        let n = self.g.n();
        let mut v = v;
        while v < n && used >> v & 1 == 1 {
            v += 1;
        }
        if v == n {
            let sign = if comps.is_multiple_of(2) { 1.0 } else { -1.0 };
            self.coeffs[size] += sign * f64::powi(2.0, cycles as i32) * weight;
            return;
        }
        // v left uncovered; mark it used so later choices skip it
        self.walk(v + 1, used | 1 << v, size, comps, cycles, weight);
        let mut avail = used | 1 << v;
        for &w in self.g.neighbors(v) {
            if w > v && avail >> w & 1 == 0 {
                self.walk(v + 1, avail | 1 << w, size + 2, comps + 1, cycles, weight);
            }
        }
        // cycles with minimum vertex v
        avail = used | 1 << v;
        let mut path = vec![v];
        self.cycles_from(v, v, avail, &mut path, UnitGain::ONE.to_complex(), size, comps, cycles, weight);
    }

    #[allow(clippy::too_many_arguments)]
    fn cycles_from(
        &mut self,
        start: usize,
        at: usize,
        used: u64,
        path: &mut Vec<usize>,
        prod: Complex64,
        size: usize,
        comps: u32,
        cycles: u32,
        weight: f64,
    ) {
        for &w in self.g.neighbors(at) {
            let step = prod * self.g.gain(at, w).unwrap().to_complex();
            if w == start {
                // Close only when the second vertex is below the last one, so each cycle counts once.
                if path.len() >= 3 && path[1] < at {
                    self.walk(start + 1, used, size + path.len(), comps + 1, cycles + 1, weight * step.re);
                }
                continue;
            }
            if w < start || used >> w & 1 == 1 {
                continue;
            }
            path.push(w);
            self.cycles_from(start, w, used | 1 << w, path, step, size, comps, cycles, weight);
            path.pop();
        }
    }
}

/// Coefficients of `∏(λ - λ_j)` in the same layout as [`char_poly_elementary`].
pub fn char_poly_from_eigenvalues(values: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &l in values {
        let mut next = vec![0.0; c.len() + 1];
        for (i, &x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] -= l * x;
        }
        c = next;
    }
    c
}
