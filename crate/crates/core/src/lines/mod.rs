//! Systems of unit vectors and their correspondence with two-eigenvalue gain graphs.

mod dismantle;
mod geometry;

pub use dismantle::{dismantle, find_basis_partition, find_partial_bases, Dismantling, UnionCertificate};
pub use geometry::{
    coxeter_todd, etf6, geometry_lines, hexacode_lines, mub_c2, mub_c3, mub_c3_bases, mub_c4_pair, sic2, sic3,
    simplex_diff, st33, witting, GEOMETRY_NAMES,
};

use num_complex::Complex64;

use crate::coclique::max_coclique;
use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::spectral::{certify_two_ev, TwoEvCertificate, SOLVER_TOL};

/// Tolerance on column norms.
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance when classifying inner-product moduli as `0` or `alpha`.
pub const ANGLE_TOL: f64 = 1e-8;
/// Gram eigenvalues above this count towards the rank.
pub const RANK_CUTOFF: f64 = 1e-8;

/// `m × n` matrix of unit columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSystem {
    vectors: CMatrix,
    alpha: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TightnessReport {
    pub is_tight: bool,
    /// `trace(NN*)/m`, meaningful when tight.
    pub z: f64,
    /// `‖NN* − zI‖_F`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleClass {
    /// Every pair orthogonal.
    Orthogonal,
    /// One nonzero modulus and no zeros.
    Equiangular(f64),
    /// Moduli in `{0, alpha}`.
    ZeroAlpha(f64),
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleProfile {
    /// Distinct off-diagonal moduli, ascending.
    pub values: Vec<f64>,
    pub class: AngleClass,
}

impl LineSystem {
    /// Validates unit columns and, when `alpha` is given, the `{0, alpha}` property.
    pub fn new(vectors: CMatrix, alpha: Option<f64>) -> Result<LineSystem> {
        for c in 0..vectors.cols() {
            let norm = vectors.column(c).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(Error::NormViolation { column: c, norm });
            }
        }
        let lines = LineSystem { vectors, alpha };
        if let Some(a) = alpha {
            lines.check_angles(a)?;
        }
        Ok(lines)
    }

    /// Scales each column to unit norm first.
    pub fn from_columns(m: usize, columns: &[Vec<Complex64>], alpha: Option<f64>) -> Result<LineSystem> {
        let n = columns.len();
        let mut mat = CMatrix::zeros(m, n);
        for (c, col) in columns.iter().enumerate() {
            if col.len() != m {
                return Err(Error::LengthMismatch { expected: m, got: col.len() });
            }
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::NormViolation { column: c, norm });
            }
            for (r, z) in col.iter().enumerate() {
                mat[(r, c)] = z / norm;
            }
        }
        LineSystem::new(mat, alpha)
    }

    pub fn dim(&self) -> usize {
        self.vectors.rows()
    }

    pub fn count(&self) -> usize {
        self.vectors.cols()
    }

    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn vectors(&self) -> &CMatrix {
        &self.vectors
    }

    /// `N*N`.
    pub fn gram(&self) -> CMatrix {
        self.vectors.adjoint().mul(&self.vectors)
    }

    /// `NN*`.
    pub fn frame_operator(&self) -> CMatrix {
        self.vectors.mul(&self.vectors.adjoint())
    }

    /// The columns listed in `cols`, in that order.
    pub fn select(&self, cols: &[usize]) -> LineSystem {
        let v = CMatrix::from_fn(self.dim(), cols.len(), |r, c| self.vectors[(r, cols[c])]);
        LineSystem { vectors: v, alpha: self.alpha }
    }

    fn check_angles(&self, alpha: f64) -> Result<()> {
        let g = self.gram();
        for u in 0..self.count() {
            for v in u + 1..self.count() {
                let modulus = g[(u, v)].norm();
                if modulus > ANGLE_TOL && (modulus - alpha).abs() > ANGLE_TOL {
                    return Err(Error::AngleViolation { u, v, modulus });
                }
            }
        }
        Ok(())
    }
}

/// Checks `NN* = zI` with `z = trace(NN*)/m`.
pub fn tightness_check(lines: &LineSystem) -> TightnessReport {
    let m = lines.dim();
    let f = lines.frame_operator();
    let z = f.trace().re / m as f64;
    let residual = f.add_diagonal(-z).frobenius();
    TightnessReport { is_tight: residual <= 1e-8 * m as f64, z, residual }
}

/// Distinct moduli of the off-diagonal Gram entries, clustered at `1e-8`.
pub fn angle_profile(lines: &LineSystem) -> AngleProfile {
    let g = lines.gram();
    let mut mods: Vec<f64> = (0..lines.count())
        .flat_map(|u| (u + 1..lines.count()).map(move |v| (u, v)))
        .map(|(u, v)| g[(u, v)].norm())
        .collect();
    mods.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = Vec::new();
    for x in mods {
        match values.last() {
            Some(&last) if x - last <= ANGLE_TOL => {}
            _ => values.push(x),
        }
    }
    let zero = |x: f64| x <= ANGLE_TOL;
    let class = match values.as_slice() {
        [] => AngleClass::Orthogonal,
        [a] if zero(*a) => AngleClass::Orthogonal,
        [a] => AngleClass::Equiangular(*a),
        [a, b] if zero(*a) => AngleClass::ZeroAlpha(*b),
        _ => AngleClass::Other,
    };
    AngleProfile { values, class }
}

/// Smallest eigenvalue of the graph described by `cert`.
fn theta_min(cert: &TwoEvCertificate) -> f64 {
    if cert.negated {
        -cert.theta1
    } else {
        cert.theta2
    }
}

/// Factors `I − θ_min⁻¹A = N*N` with `N` of full row rank.
pub fn gain_to_lines(g: &GainGraph, cert: &TwoEvCertificate) -> Result<LineSystem> {
    let tmin = theta_min(cert);
    if tmin >= 0.0 {
        return Err(Error::NonNegativeThetaMin);
    }
    let n = g.n();
    let b = CMatrix::identity(n).sub(&g.matrix().scale(Complex64::new(1.0 / tmin, 0.0)));
    let eig = hermitian_eigen(&b, SOLVER_TOL, true)?;
    let v = eig.vectors.expect("vectors requested");
    let keep: Vec<usize> = (0..n).filter(|&i| eig.values[i] > RANK_CUTOFF).collect();
    let expected = if cert.negated { n - cert.m } else { cert.m };
    if keep.len() != expected {
        return Err(Error::NotTwoEigenvalue);
    }
    let vectors = CMatrix::from_fn(keep.len(), n, |r, c| v[(c, keep[r])].conj() * eig.values[keep[r]].sqrt());
    // Diagonal of B is 1, so columns are unit up to rounding; renormalise.
    let cols: Vec<Vec<Complex64>> = (0..n).map(|c| vectors.column(c)).collect();
    LineSystem::from_columns(keep.len(), &cols, Some(-1.0 / tmin))
}

/// Reads the gain graph off the Gram matrix: `gain(u,v) = (N*N)_{uv}/alpha` where the modulus is `alpha`.
pub fn lines_to_gain(lines: &LineSystem, alpha: f64) -> Result<(GainGraph, TightnessReport)> {
    let g = lines.gram();
    let n = lines.count();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let z = g[(u, v)];
            let modulus = z.norm();
            if modulus <= ANGLE_TOL {
                continue;
            }
            if (modulus - alpha).abs() > ANGLE_TOL {
                return Err(Error::AngleViolation { u, v, modulus });
            }
            edges.push((u, v, UnitGain::from_direction(z)?));
        }
    }
    Ok((GainGraph::build(n, edges)?, tightness_check(lines)))
}

/// Binomial coefficient, saturating on overflow.
fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    r
}

/// `binom(m+s−1, m−1)·binom(m+s−1−ε, m−1)` with `ε = 1` when `0` is among the `s` angles.
pub fn absolute_bound(m: usize, s: usize, has_zero: bool) -> u128 {
    let (m, s) = (m as u64, s as u64);
    let eps = u64::from(has_zero);
    binom(m + s - 1, m - 1).saturating_mul(binom(m + s - 1 - eps, m - 1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub absolute: u128,
    /// `(m', m² + m')` when a graph was supplied.
    pub sharper: Option<(usize, usize)>,
    /// Largest coclique of the underlying graph, when a graph was supplied.
    pub coclique: Option<usize>,
    pub n: Option<usize>,
    pub absolute_ok: bool,
    pub sharper_ok: bool,
    pub coclique_ok: bool,
}

/// Evaluates the absolute bound and, for a certified graph, the sharper bound and the coclique bound.
pub fn bounds_check(m: usize, s: usize, has_zero: bool, graph: Option<(&GainGraph, &TwoEvCertificate)>) -> Result<BoundsReport> {
    let absolute = absolute_bound(m, s, has_zero);
    let Some((g, cert)) = graph else {
        return Ok(BoundsReport {
            absolute,
            sharper: None,
            coclique: None,
            n: None,
            absolute_ok: true,
            sharper_ok: true,
            coclique_ok: true,
        });
    };
    let n = g.n();
    let top_mult = if cert.negated { n - cert.m } else { cert.m };
    let k = cert.k;
    let target = -k * top_mult as f64 / (n - top_mult) as f64;
    let adj = g.underlying().matrix();
    let eig = hermitian_eigen(&adj, SOLVER_TOL, false)?;
    let m_prime = eig.values.iter().filter(|&&x| (x - target).abs() <= 1e-6).count();
    let sharper = top_mult * top_mult + m_prime;
    let coclique = max_coclique(g, crate::coclique::DEFAULT_COCLIQUE_BUDGET)?.size;
    Ok(BoundsReport {
        absolute,
        sharper: Some((m_prime, sharper)),
        coclique: Some(coclique),
        n: Some(n),
        absolute_ok: n as u128 <= absolute,
        sharper_ok: n <= sharper,
        coclique_ok: coclique <= top_mult,
    })
}

/// Bounds for a certified graph with its own line-system parameters.
pub fn graph_bounds(g: &GainGraph, cert: &TwoEvCertificate) -> Result<BoundsReport> {
    let n = g.n();
    let top_mult = if cert.negated { n - cert.m } else { cert.m };
    let complete = g.edge_count() == n * (n - 1) / 2;
    let (s, has_zero) = if complete { (1, false) } else { (2, true) };
    bounds_check(top_mult, s, has_zero, Some((g, cert)))
}

/// Certifies the graph of a line system (`None` when it is not two-eigenvalue or empty).
pub fn certify_lines(lines: &LineSystem, alpha: f64) -> Result<(GainGraph, Option<TwoEvCertificate>)> {
    let (g, _) = lines_to_gain(lines, alpha)?;
    if g.edge_count() == 0 || !g.is_connected() {
        return Ok((g, None));
    }
    let cert = certify_two_ev(&g, 1e-9)?;
    Ok((g, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn orthonormal_basis_is_tight() {
        let lines = LineSystem::new(CMatrix::identity(3), None).unwrap();
        let t = tightness_check(&lines);
        assert!(t.is_tight && (t.z - 1.0).abs() < 1e-15);
        assert_eq!(angle_profile(&lines).class, AngleClass::Orthogonal);
    }

    #[test]
    fn mercedes_frame() {
        let cols: Vec<Vec<Complex64>> = (0..3)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / 3.0;
                vec![c(t.cos()), c(t.sin())]
            })
            .collect();
        let lines = LineSystem::from_columns(2, &cols, None).unwrap();
        let t = tightness_check(&lines);
        assert!(t.is_tight && (t.z - 1.5).abs() < 1e-12);
        assert!(matches!(angle_profile(&lines).class, AngleClass::Equiangular(a) if (a - 0.5).abs() < 1e-12));
    }

    #[test]
    fn example_three_is_not_tight() {
        let s3 = 3f64.sqrt();
        let s6 = 6f64.sqrt();
        let cols = [vec![c(1.0), c(0.0), c(0.0)],
            vec![c(0.5), c(0.5 * s3), c(0.0)],
            vec![c(0.0), c(s3 / 3.0), c(s6 / 3.0)],
            vec![c(0.5), c(-s3 / 6.0), c(s6 / 3.0)]];
        let lines = LineSystem::new(CMatrix::from_fn(3, 4, |r, k| cols[k][r]), Some(0.5)).unwrap();
        assert!(!tightness_check(&lines).is_tight);
        let (g, t) = lines_to_gain(&lines, 0.5).unwrap();
        assert!(!t.is_tight);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.structure_degree(), Some(2));
        assert_eq!(certify_two_ev(&g, 1e-9).unwrap(), None);
    }

    #[test]
    fn norm_violation_names_column() {
        let mut m = CMatrix::identity(2);
        m[(1, 1)] = c(2.0);
        assert!(matches!(LineSystem::new(m, None), Err(Error::NormViolation { column: 1, .. })));
    }

    #[test]
    fn complete_graph_gives_scalars() {
        let g = complete_graph(5);
        let cert = certify_two_ev(&g, 1e-9).unwrap().unwrap();
        let lines = gain_to_lines(&g, &cert).unwrap();
        assert_eq!(lines.dim(), 1);
        for k in 0..5 {
            assert!((lines.vectors()[(0, k)].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn absolute_bound_reductions() {
        for m in 1..8 {
            assert_eq!(absolute_bound(m, 1, false), (m * m) as u128);
            assert_eq!(absolute_bound(m, 2, true), (m * m * (m + 1) / 2) as u128);
        }
        assert_eq!(absolute_bound(2, 1, false), 4);
        assert_eq!(absolute_bound(2, 2, true), 6);
    }
}
