//! Maximum cocliques of the underlying graph by branch and bound.

use crate::error::{Error, Result};
use crate::graph::GainGraph;

/// Default node budget for [`max_coclique`].
pub const DEFAULT_COCLIQUE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coclique {
    pub size: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
}

/// Largest independent set of the underlying graph of `g`.
pub fn max_coclique(g: &GainGraph, budget: u64) -> Result<Coclique> {
    let n = g.n();
    // Cliques of the complement.
    let comp: Vec<Bits> = (0..n)
        .map(|u| {
            let mut b = Bits::empty(n);
            for v in 0..n {
                if v != u && !g.is_adjacent(u, v) {
                    b.set(v);
                }
            }
            b
        })
        .collect();
    let mut all = Bits::empty(n);
    for v in 0..n {
        all.set(v);
    }
    let mut search = CliqueSearch { comp: &comp, best: Vec::new(), current: Vec::new(), remaining: budget, budget };
    search.expand(all)?;
    let mut vertices = search.best;
    vertices.sort_unstable();
    Ok(Coclique { size: vertices.len(), vertices })
}

struct CliqueSearch<'a> {
    comp: &'a [Bits],
    best: Vec<usize>,
    current: Vec<usize>,
    remaining: u64,
    budget: u64,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, mut candidates: Bits) -> Result<()> {
        if self.remaining == 0 {
            return Err(Error::Timeout { budget: self.budget });
        }
        self.remaining -= 1;
        if candidates.is_empty() {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            return Ok(());
        }
        let (order, colors) = self.color(&candidates);
        for (&v, &c) in order.iter().zip(&colors).rev() {
            if self.current.len() + c <= self.best.len() {
                return Ok(());
            }
            self.current.push(v);
            self.expand(candidates.and(&self.comp[v]))?;
            self.current.pop();
            candidates.clear(v);
        }
        Ok(())
    }

    /// Greedy colouring; `colors[i]` bounds the clique size among `order[..=i]`.
    fn color(&self, candidates: &Bits) -> (Vec<usize>, Vec<usize>) {
        let mut uncolored = candidates.clone();
        let mut order = Vec::new();
        let mut colors = Vec::new();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut available = uncolored.clone();
            while let Some(v) = available.first() {
                uncolored.clear(v);
                available.clear(v);
                for (a, c) in available.0.iter_mut().zip(&self.comp[v].0) {
                    *a &= !c;
                }
                order.push(v);
                colors.push(color);
            }
        }
        (order, colors)
    }
}
