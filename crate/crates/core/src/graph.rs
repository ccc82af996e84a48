//! Complex unit gain graphs.

use std::collections::{BTreeMap, VecDeque};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gain::{UnitGain, UNIT_TOL};
use crate::linalg::CMatrix;

/// A simple graph whose oriented edges carry unit gains, `gain(v,u) = conj(gain(u,v))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GainGraph {
    n: usize,
    gains: BTreeMap<(usize, usize), UnitGain>,
    adj: Vec<Vec<usize>>,
}

/// Degree and local-structure statistics of the underlying graph.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureStats {
    pub degrees: Vec<usize>,
    pub regular: Option<usize>,
    pub bipartite: bool,
    /// Triangles through each edge `(u, v)`, `u < v`.
    pub edge_triangles: BTreeMap<(usize, usize), usize>,
    /// Common neighbours of each non-adjacent pair `(u, v)`, `u < v`.
    pub common_neighbors: BTreeMap<(usize, usize), usize>,
    pub triangle_free: bool,
}

fn check_gain(g: UnitGain) -> Result<UnitGain> {
    match g {
        UnitGain::Numeric { re, im } => UnitGain::numeric(Complex64::new(re, im)),
        exact => Ok(exact),
    }
}

impl GainGraph {
    /// Builds a graph from `(u, v, gain)` triples; either orientation is accepted.
    pub fn build(n: usize, edges: impl IntoIterator<Item = (usize, usize, UnitGain)>) -> Result<GainGraph> {
        let mut gains = BTreeMap::new();
        for (u, v, g) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IndexOutOfRange { index: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { vertex: u });
            }
            let g = check_gain(g)?;
            let (key, g) = if u < v { ((u, v), g) } else { ((v, u), g.conj()) };
            if gains.insert(key, g).is_some() {
                return Err(Error::DuplicateEdge { u: key.0, v: key.1 });
            }
        }
        Ok(GainGraph::from_map(n, gains))
    }

    fn from_map(n: usize, gains: BTreeMap<(usize, usize), UnitGain>) -> GainGraph {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in gains.keys() {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        GainGraph { n, gains, adj }
    }

    /// All edges carry gain 1.
    pub fn from_support(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<GainGraph> {
        GainGraph::build(n, edges.into_iter().map(|(u, v)| (u, v, UnitGain::ONE)))
    }

    /// Builds from a full matrix of optional gains, checking zero diagonal and Hermitian symmetry.
    pub fn from_entries(rows: &[Vec<Option<UnitGain>>]) -> Result<GainGraph> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::NotHermitian);
        }
        let mut edges = Vec::new();
        for u in 0..n {
            if rows[u][u].is_some() {
                return Err(Error::NotHermitian);
            }
            for v in u + 1..n {
                match (rows[u][v], rows[v][u]) {
                    (None, None) => {}
                    (Some(a), Some(b)) if a.approx_eq(b.conj(), 1e-9) => edges.push((u, v, a)),
                    _ => return Err(Error::NotHermitian),
                }
            }
        }
        GainGraph::build(n, edges)
    }

    /// Reads gains off a numeric Hermitian matrix whose entries are 0 or unit modulus.
    pub fn from_matrix(a: &CMatrix, tol: f64) -> Result<GainGraph> {
        if a.rows() != a.cols() || !a.is_hermitian(tol) {
            return Err(Error::NotHermitian);
        }
        let n = a.rows();
        let mut edges = Vec::new();
        for u in 0..n {
            if a[(u, u)].norm() > tol {
                return Err(Error::NotHermitian);
            }
            for v in u + 1..n {
                let z = a[(u, v)];
                let modulus = z.norm();
                if modulus <= tol {
                    continue;
                }
                if (modulus - 1.0).abs() > tol {
                    return Err(Error::NonUnitGain { modulus });
                }
                edges.push((u, v, UnitGain::from_direction(z)?));
            }
        }
        GainGraph::build(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.gains.len()
    }

    /// Gain of the oriented edge `u -> v`, if adjacent.
    pub fn gain(&self, u: usize, v: usize) -> Option<UnitGain> {
        if u < v {
            self.gains.get(&(u, v)).copied()
        } else {
            self.gains.get(&(v, u)).map(|g| g.conj())
        }
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v, gain(u,v))` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, UnitGain)> + '_ {
        self.gains.iter().map(|(&(u, v), &g)| (u, v, g))
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    /// True when every gain is a root of unity held exactly.
    pub fn is_exact(&self) -> bool {
        self.gains.values().all(UnitGain::is_exact)
    }

    /// The Hermitian gain matrix.
    pub fn matrix(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.n);
        for (&(u, v), g) in &self.gains {
            let z = g.to_complex();
            a[(u, v)] = z;
            a[(v, u)] = z.conj();
        }
        a
    }

    /// Same support, every gain replaced by `f(u, v, gain)`.
    pub fn map_gains(&self, mut f: impl FnMut(usize, usize, UnitGain) -> UnitGain) -> GainGraph {
        let gains = self.gains.iter().map(|(&(u, v), &g)| ((u, v), f(u, v, g))).collect();
        GainGraph { n: self.n, gains, adj: self.adj.clone() }
    }

    /// The underlying graph with all gains 1.
    pub fn underlying(&self) -> GainGraph {
        self.map_gains(|_, _, _| UnitGain::ONE)
    }

    /// Vertex `u` of `self` becomes vertex `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<GainGraph> {
        if perm.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: perm.len() });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameters("relabeling is not a permutation".into()));
            }
        }
        GainGraph::build(self.n, self.edges().map(|(u, v, g)| (perm[u], perm[v], g)))
    }

    /// `S⁻¹AS` for `S = diag(d)`: `gain'(u,v) = conj(d_u)·gain(u,v)·d_v`.
    pub fn switch(&self, d: &[UnitGain]) -> Result<GainGraph> {
        if d.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: d.len() });
        }
        for &s in d {
            check_gain(s)?;
        }
        Ok(self.map_gains(|u, v, g| d[u].conj() * g * d[v]))
    }

    /// Every gain inverted.
    pub fn converse(&self) -> GainGraph {
        self.map_gains(|_, _, g| g.conj())
    }

    /// The graph with matrix `-A`.
    pub fn negate(&self) -> GainGraph {
        self.map_gains(|_, _, g| -g)
    }

    /// Product of the gains along `cycle`, closing back to the first vertex.
    pub fn cycle_gain(&self, cycle: &[usize]) -> Result<UnitGain> {
        if cycle.len() < 3 {
            return Err(Error::NotACycle);
        }
        let mut seen = vec![false; self.n];
        let mut prod = UnitGain::ONE;
        for (i, &u) in cycle.iter().enumerate() {
            if u >= self.n || std::mem::replace(&mut seen[u], true) {
                return Err(Error::NotACycle);
            }
            let v = cycle[(i + 1) % cycle.len()];
            if v >= self.n {
                return Err(Error::NotACycle);
            }
            prod = prod * self.gain(u, v).ok_or(Error::NotACycle)?;
        }
        Ok(prod)
    }

    /// Breadth-first order from vertex 0 and the parent of each reached vertex.
    pub fn bfs(&self) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut order = Vec::with_capacity(self.n);
        let mut parent = vec![None; self.n];
        if self.n == 0 {
            return (order, parent);
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        (order, parent)
    }

    pub fn is_connected(&self) -> bool {
        self.bfs().0.len() == self.n
    }

    pub fn structure_stats(&self) -> StructureStats {
        let degrees: Vec<usize> = (0..self.n).map(|u| self.degree(u)).collect();
        let regular = match degrees.first() {
            Some(&d) if degrees.iter().all(|&x| x == d) => Some(d),
            None => Some(0),
            _ => None,
        };
        let common = |u: usize, v: usize| {
            let (a, b) = (&self.adj[u], &self.adj[v]);
            let (mut i, mut j, mut count) = (0, 0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        count += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            count
        };
        let mut edge_triangles = BTreeMap::new();
        let mut common_neighbors = BTreeMap::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.is_adjacent(u, v) {
                    edge_triangles.insert((u, v), common(u, v));
                } else {
                    common_neighbors.insert((u, v), common(u, v));
                }
            }
        }
        let triangle_free = edge_triangles.values().all(|&t| t == 0);
        StructureStats {
            degrees,
            regular,
            bipartite: self.two_coloring().is_some(),
            edge_triangles,
            common_neighbors,
            triangle_free,
        }
    }

    /// A proper 2-colouring of the underlying graph, if one exists.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &w in &self.adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(Option::unwrap).collect())
    }

    /// Every gain replaced by the nearest root of unity of order at most `max_q`,
    /// or `None` if some gain is farther than `max_angle` radians from all of them.
    pub fn snap_exact(&self, max_q: u64, max_angle: f64) -> Option<GainGraph> {
        let mut gains = BTreeMap::new();
        for (&k, g) in &self.gains {
            gains.insert(k, g.nearest_root(max_q, max_angle)?);
        }
        Some(GainGraph { n: self.n, gains, adj: self.adj.clone() })
    }

    /// Snaps the gains that are near a low-order root and leaves the rest untouched.
    pub fn snap_partial(&self, max_q: u64, max_angle: f64) -> GainGraph {
        self.map_gains(|_, _, g| g.nearest_root(max_q, max_angle).unwrap_or(g))
    }

    /// Entry-wise comparison: exact where both gains are exact, within `tol` otherwise.
    pub fn approx_eq(&self, other: &GainGraph, tol: f64) -> bool {
        self.n == other.n
            && self.gains.len() == other.gains.len()
            && self
                .gains
                .iter()
                .all(|(k, g)| other.gains.get(k).is_some_and(|h| g.approx_eq(*h, tol)))
    }

    /// Largest modulus deviation of `A` from `A*`; zero by construction.
    pub fn hermitian_defect(&self) -> f64 {
        let a = self.matrix();
        a.sub(&a.adjoint()).max_abs()
    }

    /// Every numeric gain re-normalised; used after arithmetic that may drift.
    pub fn renormalized(&self) -> GainGraph {
        self.map_gains(|_, _, g| match g {
            UnitGain::Numeric { re, im } if ((re * re + im * im).sqrt() - 1.0).abs() > UNIT_TOL / 4.0 => {
                UnitGain::from_direction(Complex64::new(re, im)).unwrap_or(g)
            }
            other => other,
        })
    }
}

/// Cycle on `n` vertices with all gains 1.
pub fn cycle_graph(n: usize) -> GainGraph {
    GainGraph::from_support(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
}

/// Complete graph on `n` vertices with all gains 1.
pub fn complete_graph(n: usize) -> GainGraph {
    GainGraph::from_support(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid complete graph")
}

/// Complete bipartite graph `K_{p,q}` with all gains 1.
pub fn complete_bipartite(p: usize, q: usize) -> GainGraph {
    GainGraph::from_support(p + q, (0..p).flat_map(|u| (p..p + q).map(move |v| (u, v)))).expect("valid bipartite graph")
}

/// Complement of the underlying graph, all gains 1.
pub fn complement(g: &GainGraph) -> GainGraph {
    let n = g.n();
    GainGraph::from_support(
        n,
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| !g.is_adjacent(u, v)),
    )
    .expect("valid complement")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_rejects_bad_input() {
        assert_eq!(
            GainGraph::build(2, [(0, 0, UnitGain::ONE)]),
            Err(Error::SelfLoop { vertex: 0 })
        );
        assert_eq!(
            GainGraph::build(2, [(0, 2, UnitGain::ONE)]),
            Err(Error::IndexOutOfRange { index: 2, n: 2 })
        );
        assert_eq!(
            GainGraph::build(2, [(0, 1, UnitGain::ONE), (1, 0, UnitGain::ONE)]),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        );
        assert!(matches!(
            GainGraph::build(2, [(0, 1, UnitGain::Numeric { re: 2.0, im: 0.0 })]),
            Err(Error::NonUnitGain { .. })
        ));
    }

    #[test]
    fn single_edge() {
        let g = GainGraph::build(2, [(0, 1, UnitGain::ONE)]).unwrap();
        assert_eq!(g.gain(0, 1), Some(UnitGain::ONE));
        assert_eq!(g.gain(1, 0), Some(UnitGain::ONE));
        let h = GainGraph::build(2, [(1, 0, UnitGain::I)]).unwrap();
        assert_eq!(h.gain(0, 1), Some(UnitGain::NEG_I));
    }

    #[test]
    fn triangle_cycle_gain() {
        let g = GainGraph::build(3, [(0, 1, UnitGain::ONE), (1, 2, UnitGain::ONE), (0, 2, UnitGain::NEG_I)]).unwrap();
        // 0 -> 1 -> 2 -> 0 uses gain(2,0) = conj(-i) = i
        assert_eq!(g.cycle_gain(&[0, 1, 2]).unwrap(), UnitGain::I);
        assert_eq!(g.cycle_gain(&[0, 2, 1]).unwrap(), UnitGain::NEG_I);
        assert_eq!(g.converse().cycle_gain(&[0, 1, 2]).unwrap(), UnitGain::NEG_I);
        assert_eq!(g.cycle_gain(&[0, 1]), Err(Error::NotACycle));
        let path = GainGraph::from_support(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.cycle_gain(&[0, 1, 2]), Err(Error::NotACycle));
    }

    #[test]
    fn switch_preserves_cycle_gain() {
        let g = cycle_graph(4).map_gains(|u, _, g| if u == 0 { UnitGain::phi() } else { g });
        let d = [UnitGain::I, UnitGain::omega(), UnitGain::ONE, UnitGain::gamma()];
        let h = g.switch(&d).unwrap();
        assert_eq!(h.cycle_gain(&[0, 1, 2, 3]).unwrap(), g.cycle_gain(&[0, 1, 2, 3]).unwrap());
        assert_eq!(g.switch(&[UnitGain::ONE; 4]).unwrap(), g);
        assert_eq!(g.switch(&[UnitGain::ONE; 3]), Err(Error::LengthMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn converse_is_an_involution() {
        let g = cycle_graph(5).map_gains(|u, _, _| UnitGain::root(u as i64, 7));
        assert_eq!(g.converse().converse(), g);
        assert_eq!(cycle_graph(5).converse(), cycle_graph(5));
    }

    #[test]
    fn stats_of_small_graphs() {
        let c4 = cycle_graph(4).structure_stats();
        assert_eq!(c4.regular, Some(2));
        assert!(c4.bipartite && c4.triangle_free);
        assert!(c4.common_neighbors.values().all(|&c| c == 2));
        let k4 = complete_graph(4).structure_stats();
        assert!(k4.edge_triangles.values().all(|&t| t == 2));
        assert!(!k4.bipartite);
    }

    #[test]
    fn relabel_moves_gains() {
        let g = GainGraph::build(3, [(0, 1, UnitGain::I)]).unwrap();
        let h = g.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(h.gain(2, 0), Some(UnitGain::I));
        assert!(g.relabel(&[0, 0, 1]).is_err());
    }

    #[test]
    fn matrix_is_hermitian() {
        let g = complete_graph(5).map_gains(|u, v, _| UnitGain::root((u * 3 + v) as i64, 11));
        assert_eq!(g.hermitian_defect(), 0.0);
    }
}
