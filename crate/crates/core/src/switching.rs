//! Switching equivalence and switching isomorphism.

use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;

/// Default node-expansion budget for [`switching_isomorphic`].
pub const DEFAULT_ISO_BUDGET: u64 = 10_000_000;

/// Tolerance for comparing numeric gains.
pub const GAIN_TOL: f64 = 1e-9;

/// Relabel by `permutation`, conjugate if `conjugated`, then switch by `diagonal`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingWitness {
    pub permutation: Vec<usize>,
    pub diagonal: Vec<UnitGain>,
    pub conjugated: bool,
}

impl SwitchingWitness {
    pub fn identity(n: usize) -> SwitchingWitness {
        SwitchingWitness { permutation: (0..n).collect(), diagonal: vec![UnitGain::ONE; n], conjugated: false }
    }

    pub fn apply(&self, g: &GainGraph) -> Result<GainGraph> {
        let h = g.relabel(&self.permutation)?;
        let h = if self.conjugated { h.converse() } else { h };
        h.switch(&self.diagonal)
    }

    /// True when applying the witness to `source` reproduces `target`.
    pub fn verify(&self, source: &GainGraph, target: &GainGraph, tol: f64) -> bool {
        self.apply(source).is_ok_and(|h| h.approx_eq(target, tol))
    }
}

/// Switches so that every edge of the BFS spanning tree from vertex 0 has gain 1.
///
/// Returns the normalised graph and the diagonal that produced it.
pub fn normalize_spanning_tree(g: &GainGraph) -> Result<(GainGraph, SwitchingWitness)> {
    let (order, parent) = g.bfs();
    if order.len() != g.n() {
        return Err(Error::Disconnected);
    }
    let mut d = vec![UnitGain::ONE; g.n()];
    for &c in order.iter().skip(1) {
        let p = parent[c].expect("non-root vertex has a parent");
        d[c] = d[p] * g.gain(p, c).expect("tree edge").conj();
    }
    let normalized = g.switch(&d)?;
    let witness = SwitchingWitness { permutation: (0..g.n()).collect(), diagonal: d, conjugated: false };
    Ok((normalized, witness))
}

/// A diagonal switch taking `g1` to `g2`, if one exists.
pub fn switching_equivalent(g1: &GainGraph, g2: &GainGraph) -> Result<Option<SwitchingWitness>> {
    switching_equivalent_tol(g1, g2, GAIN_TOL)
}

pub fn switching_equivalent_tol(g1: &GainGraph, g2: &GainGraph, tol: f64) -> Result<Option<SwitchingWitness>> {
    if g1.n() != g2.n() {
        return Err(Error::OrderMismatch(g1.n(), g2.n()));
    }
    if g1.edge_count() != g2.edge_count() || g1.edges().any(|(u, v, _)| !g2.is_adjacent(u, v)) {
        return Err(Error::SupportMismatch);
    }
    let (n1, w1) = normalize_spanning_tree(g1)?;
    let (n2, w2) = normalize_spanning_tree(g2)?;
    if !n1.approx_eq(&n2, tol) {
        return Ok(None);
    }
    let diagonal = w1.diagonal.iter().zip(&w2.diagonal).map(|(&a, &b)| a * b.conj()).collect();
    Ok(Some(SwitchingWitness { permutation: (0..g1.n()).collect(), diagonal, conjugated: false }))
}

/// Compares real parts of the tree-normalised non-tree gains.
///
/// Diagnostic only: it cannot tell a graph from its converse.
pub fn real_part_criterion(g1: &GainGraph, g2: &GainGraph, tol: f64) -> Result<bool> {
    let (n1, _) = normalize_spanning_tree(g1)?;
    let (n2, _) = normalize_spanning_tree(g2)?;
    if n1.edge_count() != n2.edge_count() {
        return Ok(false);
    }
    let same = n1.edges().all(|(u, v, g)| {
        n2.gain(u, v).is_some_and(|h| (g.to_complex().re - h.to_complex().re).abs() <= tol)
    });
    Ok(same)
}

/// Searches for relabeling + switching (+ converse) taking `g1` to `g2`.
///
/// `Err(Timeout)` means the budget ran out, not that no witness exists.
pub fn switching_isomorphic(g1: &GainGraph, g2: &GainGraph, budget: u64) -> Result<Option<SwitchingWitness>> {
    switching_isomorphic_tol(g1, g2, budget, GAIN_TOL)
}

pub fn switching_isomorphic_tol(
    g1: &GainGraph,
    g2: &GainGraph,
    budget: u64,
    tol: f64,
) -> Result<Option<SwitchingWitness>> {
    if g1.n() != g2.n() {
        return Err(Error::OrderMismatch(g1.n(), g2.n()));
    }
    let n = g1.n();
    if !g1.is_connected() || !g2.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut deg1: Vec<usize> = (0..n).map(|u| g1.degree(u)).collect();
    let mut deg2: Vec<usize> = (0..n).map(|u| g2.degree(u)).collect();
    if g1.edge_count() != g2.edge_count() || {
        deg1.sort_unstable();
        deg2.sort_unstable();
        deg1 != deg2
    } {
        return Ok(None);
    }
    if n == 0 {
        return Ok(Some(SwitchingWitness::identity(0)));
    }
    let inv1 = invariants(g1);
    let inv2 = invariants(g2);
    let (order, parent) = g1.bfs();
    let mut remaining = budget;
    for conjugated in [false, true] {
        let source = if conjugated { g1.converse() } else { g1.clone() };
        let mut state = Search {
            g1: &source,
            g2,
            inv1: &inv1,
            inv2: &inv2,
            order: &order,
            parent: &parent,
            map: vec![usize::MAX; n],
            used: vec![false; n],
            d: vec![UnitGain::ONE; n],
            remaining,
            budget,
            tol,
        };
        let found = state.extend(0)?;
        remaining = state.remaining;
        if found {
            return Ok(Some(SwitchingWitness { permutation: state.map, diagonal: state.d, conjugated }));
        }
    }
    Ok(None)
}

/// Per-vertex signature: degree, then sorted neighbour degrees and triangle count.
fn invariants(g: &GainGraph) -> Vec<(usize, usize, Vec<usize>)> {
    (0..g.n())
        .map(|u| {
            let nb = g.neighbors(u);
            let mut degs: Vec<usize> = nb.iter().map(|&w| g.degree(w)).collect();
            degs.sort_unstable();
            let mut tri = 0;
            for (i, &a) in nb.iter().enumerate() {
                for &b in &nb[i + 1..] {
                    if g.is_adjacent(a, b) {
                        tri += 1;
                    }
                }
            }
            (g.degree(u), tri, degs)
        })
        .collect()
}

struct Search<'a> {
    g1: &'a GainGraph,
    g2: &'a GainGraph,
    inv1: &'a [(usize, usize, Vec<usize>)],
    inv2: &'a [(usize, usize, Vec<usize>)],
    order: &'a [usize],
    parent: &'a [Option<usize>],
    /// `map[u]` is the image in `g2` of vertex `u` of `g1`.
    map: Vec<usize>,
    used: Vec<bool>,
    /// Switching values indexed by `g2` vertices.
    d: Vec<UnitGain>,
    remaining: u64,
    budget: u64,
    tol: f64,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let u = self.order[depth];
        let candidates: Vec<usize> = match self.parent[u] {
            None => (0..self.g2.n()).collect(),
            Some(p) => self.g2.neighbors(self.map[p]).to_vec(),
        };
        for w in candidates {
            if self.used[w] || self.inv1[u] != self.inv2[w] {
                continue;
            }
            if self.remaining == 0 {
                return Err(Error::Timeout { budget: self.budget });
            }
            self.remaining -= 1;
            let dw = match self.parent[u] {
                None => UnitGain::ONE,
                Some(p) => {
                    let wp = self.map[p];
                    let h = self.g1.gain(p, u).expect("tree edge");
                    self.d[wp] * self.g2.gain(wp, w).expect("adjacent by construction") * h.conj()
                }
            };
            if !self.consistent(u, w, dw) {
                continue;
            }
            self.map[u] = w;
            self.used[w] = true;
            self.d[w] = dw;
            if self.extend(depth + 1)? {
                return Ok(true);
            }
            self.map[u] = usize::MAX;
            self.used[w] = false;
            self.d[w] = UnitGain::ONE;
        }
        Ok(false)
    }

    /// Checks adjacency and gains between `u -> w` and every mapped vertex.
    fn consistent(&self, u: usize, w: usize, dw: UnitGain) -> bool {
        let mut mapped_neighbors = 0;
        for &x in self.g1.neighbors(u) {
            let y = self.map[x];
            if y == usize::MAX {
                continue;
            }
            mapped_neighbors += 1;
            let Some(target) = self.g2.gain(w, y) else {
                return false;
            };
            let h = self.g1.gain(u, x).expect("neighbor");
            if !(dw.conj() * h * self.d[y]).approx_eq(target, self.tol) {
                return false;
            }
        }
        let mapped_in_g2 = self.g2.neighbors(w).iter().filter(|&&y| self.used[y]).count();
        mapped_neighbors == mapped_in_g2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph};

    fn c4_with(x: UnitGain) -> GainGraph {
        cycle_graph(4).map_gains(|u, v, g| if (u, v) == (0, 3) { x } else { g })
    }

    #[test]
    fn tree_normalization_keeps_cycle_gain() {
        let g = cycle_graph(4).map_gains(|u, _, _| UnitGain::root(u as i64 + 1, 5));
        let (h, w) = normalize_spanning_tree(&g).unwrap();
        let (order, parent) = g.bfs();
        for &c in &order[1..] {
            assert_eq!(h.gain(parent[c].unwrap(), c), Some(UnitGain::ONE));
        }
        assert_eq!(h.cycle_gain(&[0, 1, 2, 3]).unwrap(), g.cycle_gain(&[0, 1, 2, 3]).unwrap());
        assert!(w.verify(&g, &h, 0.0));
        let (again, _) = normalize_spanning_tree(&h).unwrap();
        assert_eq!(again, h);
    }

    #[test]
    fn trees_normalize_to_all_ones() {
        let g = GainGraph::build(4, [(0, 1, UnitGain::I), (1, 2, UnitGain::phi()), (1, 3, UnitGain::gamma())]).unwrap();
        let (h, _) = normalize_spanning_tree(&g).unwrap();
        assert!(h.edges().all(|(_, _, x)| x == UnitGain::ONE));
    }

    #[test]
    fn equivalence_finds_the_switch() {
        let g = c4_with(UnitGain::I);
        let d = [UnitGain::phi(), UnitGain::NEG_ONE, UnitGain::gamma(), UnitGain::omega()];
        let h = g.switch(&d).unwrap();
        let w = switching_equivalent(&g, &h).unwrap().unwrap();
        assert!(w.verify(&g, &h, 0.0));
        assert_eq!(switching_equivalent(&c4_with(UnitGain::I), &c4_with(UnitGain::NEG_I)).unwrap(), None);
    }

    #[test]
    fn equivalence_requires_same_support() {
        let path = GainGraph::from_support(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(switching_equivalent(&cycle_graph(4), &path), Err(Error::SupportMismatch));
    }

    #[test]
    fn isomorphism_round_trip() {
        let g = complete_graph(5).map_gains(|u, v, _| UnitGain::root((u * u + 2 * v) as i64, 6));
        let w = SwitchingWitness {
            permutation: vec![3, 0, 4, 1, 2],
            diagonal: vec![UnitGain::I, UnitGain::phi(), UnitGain::ONE, UnitGain::gamma(), UnitGain::NEG_ONE],
            conjugated: true,
        };
        let h = w.apply(&g).unwrap();
        let found = switching_isomorphic(&g, &h, DEFAULT_ISO_BUDGET).unwrap().unwrap();
        assert!(found.verify(&g, &h, 0.0));
    }

    #[test]
    fn converse_only_through_iso() {
        let g = c4_with(UnitGain::I);
        let h = g.converse();
        assert_eq!(switching_equivalent(&g, &h).unwrap(), None);
        let w = switching_isomorphic(&g, &h, 1000).unwrap().unwrap();
        assert!(w.verify(&g, &h, 0.0));
        assert!(real_part_criterion(&g, &h, 1e-12).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let g = complete_graph(6).map_gains(|u, v, _| UnitGain::root((u + v) as i64, 12));
        let h = complete_graph(6);
        assert!(matches!(switching_isomorphic(&g, &h, 3), Err(Error::Timeout { .. })));
    }
}
