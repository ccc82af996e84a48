//! Infinite families and doubling constructions.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoubleKind {
    /// `[[W, I], [I, -W]]`, eigenvalues `±√(k+1)`.
    Nd,
    /// `[[W, W], [W, -W]]`, eigenvalues `±√(2k)`.
    Sd,
    /// `[[W, W+iI], [W-iI, -W]]`, eigenvalues `±√(2k+1)`.
    SdStar,
}

impl std::str::FromStr for DoubleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<DoubleKind> {
        match s {
            "ND" => Ok(DoubleKind::Nd),
            "SD" => Ok(DoubleKind::Sd),
            "SDstar" | "SD*" => Ok(DoubleKind::SdStar),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

/// Checks `A² = kI` with `k` the common degree.
fn squares_to_scalar(g: &GainGraph) -> bool {
    let Some(k) = g.structure_degree() else {
        return false;
    };
    let a = g.matrix();
    a.mul(&a).add_diagonal(-(k as f64)).frobenius() <= 1e-9 * (g.n().max(1) as f64)
}

/// Doubles a gain graph with `A² = kI`.
pub fn double(g: &GainGraph, kind: DoubleKind) -> Result<GainGraph> {
    if g.edge_count() == 0 || !squares_to_scalar(g) {
        return Err(Error::NotSquareRootOfKI);
    }
    let n = g.n();
    let mut edges = Vec::new();
    for (u, v, x) in g.edges() {
        edges.push((u, v, x));
        edges.push((n + u, n + v, -x));
        if kind != DoubleKind::Nd {
            edges.push((u, n + v, x));
            edges.push((v, n + u, x.conj()));
        }
    }
    for u in 0..n {
        match kind {
            DoubleKind::Nd => edges.push((u, n + u, UnitGain::ONE)),
            DoubleKind::SdStar => edges.push((u, n + u, UnitGain::I)),
            DoubleKind::Sd => {}
        }
    }
    GainGraph::build(2 * n, edges)
}

/// Entry `(j, h)` of the directed `t`-cycle with gains `1, …, 1, x`.
fn cycle_entry(t: usize, x: UnitGain, j: usize, h: usize) -> Option<UnitGain> {
    if h == (j + 1) % t {
        Some(if j == t - 1 { x } else { UnitGain::ONE })
    } else {
        None
    }
}

fn doubled_cycle(t: usize, x: UnitGain, with_identity: bool) -> Result<GainGraph> {
    if t < 3 {
        return Err(Error::InvalidOrder(t));
    }
    let c = |j, h| cycle_entry(t, x, j, h);
    let cs = |j, h| cycle_entry(t, x, h, j).map(UnitGain::conj);
    let mut edges = Vec::new();
    for j in 0..t {
        for h in 0..t {
            // top-left C + C*, bottom-right its negative
            if j < h {
                if let Some(g) = c(j, h).or(cs(j, h)) {
                    edges.push((j, h, g));
                    edges.push((t + j, t + h, -g));
                }
            }
            // top-right C - C* (+ I)
            let tr = c(j, h).or(cs(j, h).map(|g| -g));
            let tr = if with_identity && j == h { Some(UnitGain::ONE) } else { tr };
            if let Some(g) = tr {
                edges.push((j, t + h, g));
            }
        }
    }
    GainGraph::build(2 * t, edges)
}

/// Toral tessellation `T_{2t}^{(x)}`: 4-regular, eigenvalues `±2`.
pub fn toral(t: usize, x: UnitGain) -> Result<GainGraph> {
    doubled_cycle(t, x, false)
}

/// Order-`2t` donut graph: 5-regular, eigenvalues `±√5`.
pub fn donut(t: usize, x: UnitGain) -> Result<GainGraph> {
    doubled_cycle(t, x, true)
}

/// The exceptional 5-regular graph on 8 vertices with eigenvalues `±√5` for every unit `c`.
pub fn d8_star(c: UnitGain) -> GainGraph {
    let one = UnitGain::ONE;
    let neg = UnitGain::NEG_ONE;
    // 1-based labels as drawn, shifted below
    let edges = [
        (1, 2, one),
        (3, 2, one),
        (1, 4, one),
        (3, 4, one),
        (5, 6, neg),
        (7, 6, neg),
        (5, 8, neg),
        (7, 8, neg),
        (1, 5, one),
        (2, 6, one),
        (3, 7, one),
        (4, 8, one),
        (1, 6, c),
        (7, 2, c),
        (3, 8, c),
        (5, 4, c),
        (1, 8, -c),
        (5, 2, -c),
        (3, 6, -c),
        (7, 4, -c),
    ];
    GainGraph::build(8, edges.map(|(u, v, g)| (u - 1, v - 1, g))).expect("valid literal graph")
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Sign matrix of the quadratic residues: `+1` if `h - j` is a nonzero square mod `p`, `-1` otherwise.
pub fn residue_sign(p: u64, j: u64, h: u64) -> i8 {
    let d = (h + p - j) % p;
    if (1..p).any(|y| y * y % p == d) {
        1
    } else {
        -1
    }
}

/// The equiangular tight frame family `A = (p+1)^{-1/2}(I - J - i√p M)` for primes `p ≡ 3 mod 4`.
pub fn renes(p: u64) -> Result<GainGraph> {
    if !is_prime(p) || p % 4 != 3 {
        return Err(Error::NotGaussianPrime(p));
    }
    let scale = 1.0 / ((p + 1) as f64).sqrt();
    let sp = (p as f64).sqrt();
    let mut edges = Vec::new();
    for j in 0..p {
        for h in j + 1..p {
            let m = residue_sign(p, j, h) as f64;
            let z = Complex64::new(-scale, -sp * m * scale);
            edges.push((j as usize, h as usize, UnitGain::from_direction(z)?));
        }
    }
    GainGraph::build(p as usize, edges)
}

/// Complete tripartite `K_{p,q,r}` whose triangles all have gain `i`.
pub fn k_star_pqr(p: usize, q: usize, r: usize) -> GainGraph {
    let (qs, rs) = (p, p + q);
    let n = p + q + r;
    let mut edges = Vec::new();
    for a in 0..p {
        for b in qs..rs {
            edges.push((a, b, UnitGain::ONE));
        }
        for c in rs..n {
            // gain(c -> a) = i
            edges.push((c, a, UnitGain::I));
        }
    }
    for b in qs..rs {
        for c in rs..n {
            edges.push((b, c, UnitGain::ONE));
        }
    }
    GainGraph::build(n, edges).expect("valid tripartite graph")
}
