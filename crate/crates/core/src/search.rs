//! Simulated annealing over the gains of a fixed underlying graph.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{catalog, CatalogEntry, Draws};
use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;
use crate::linalg::{hermitian_eigen, CMatrix};
use crate::params::Params;
use crate::spectral::{certify_two_ev, eigenvalues, TwoEvCertificate, SOLVER_TOL};
use crate::switching::{switching_isomorphic_tol, SwitchingWitness};

/// Angular snapping window in radians.
pub const SNAP_ANGLE: f64 = 1e-3;
/// Gain tolerance when matching a search result against the catalog.
pub const IDENTIFY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub t0: f64,
    pub alpha: f64,
    pub tau: f64,
    pub iters_per_temp: usize,
    pub epsilon: f64,
    pub seed: u64,
    pub chains: usize,
    pub snap_order: u64,
}

impl Default for SearchConfig {
    fn default() -> SearchConfig {
        SearchConfig { t0: 1.0, alpha: 0.95, tau: 1e-4, iters_per_temp: 2000, epsilon: 1e-6, seed: 0, chains: 1, snap_order: 24 }
    }
}

impl SearchConfig {
    /// Shorter schedule: `alpha = 0.9`, 500 proposals per temperature, cooled to `tau = 1e-8`.
    pub fn quick() -> SearchConfig {
        SearchConfig { alpha: 0.9, iters_per_temp: 500, tau: 1e-8, ..SearchConfig::default() }
    }

    pub fn with_seed(self, seed: u64) -> SearchConfig {
        SearchConfig { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameters(m.to_string()));
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if !(self.tau > 0.0 && self.tau < self.t0) {
            return bad("need 0 < tau < t0");
        }
        if !(self.epsilon > 0.0) {
            return bad("epsilon must be positive");
        }
        if self.iters_per_temp == 0 || self.chains == 0 {
            return bad("iterations and chains must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    TwoEv,
    /// Target eigenvalues, any order.
    Cospectral(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Converged,
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub best_gains: GainGraph,
    pub best_f: f64,
    /// Exact snap (or partial snap) of the best state with its certificate.
    pub snapped: Option<(GainGraph, TwoEvCertificate)>,
    /// `(temperature, best f so far)` after each cooling step.
    pub trace: Vec<(f64, f64)>,
    pub seed: u64,
    pub proposals: u64,
}

/// `‖A² − (λ₁+λₙ)A + λ₁λₙI‖_F` with `λ₁`, `λₙ` the extreme eigenvalues.
pub fn objective_two_ev(a: &CMatrix) -> Result<f64> {
    if a.rows() == 0 {
        return Ok(0.0);
    }
    let eig = hermitian_eigen(a, SOLVER_TOL, false)?;
    let (l1, ln) = (eig.values[0], eig.values[eig.values.len() - 1]);
    Ok(a.mul(a).sub(&a.scale(Complex64::new(l1 + ln, 0.0))).add_diagonal(l1 * ln).frobenius())
}

/// Sum of squared differences between the sorted spectrum of `a` and the sorted target.
pub fn objective_cospectral(a: &CMatrix, target: &[f64]) -> Result<f64> {
    if target.len() != a.rows() {
        return Err(Error::LengthMismatch { expected: a.rows(), got: target.len() });
    }
    let eig = hermitian_eigen(a, SOLVER_TOL, false)?;
    let mut t = target.to_vec();
    t.sort_by(|x, y| y.total_cmp(x));
    Ok(eig.values.iter().zip(&t).map(|(x, y)| (x - y) * (x - y)).sum())
}

impl Objective {
    pub fn eval(&self, a: &CMatrix) -> Result<f64> {
        match self {
            Objective::TwoEv => objective_two_ev(a),
            Objective::Cospectral(t) => objective_cospectral(a, t),
        }
    }
}

/// Gain graph on a fixed support with spanning-tree gains pinned to 1.
struct State {
    n: usize,
    tree: Vec<(usize, usize)>,
    free: Vec<(usize, usize)>,
    angles: Vec<f64>,
}

impl State {
    fn matrix(&self) -> CMatrix {
        let mut a = CMatrix::zeros(self.n, self.n);
        let one = Complex64::new(1.0, 0.0);
        for &(u, v) in &self.tree {
            a[(u, v)] = one;
            a[(v, u)] = one;
        }
        for (&(u, v), &t) in self.free.iter().zip(&self.angles) {
            let z = Complex64::from_polar(1.0, t);
            a[(u, v)] = z;
            a[(v, u)] = z.conj();
        }
        a
    }

    fn graph(&self, angles: &[f64]) -> GainGraph {
        let edges = self
            .tree
            .iter()
            .map(|&(u, v)| (u, v, UnitGain::ONE))
            .chain(self.free.iter().zip(angles).map(|(&(u, v), &t)| (u, v, UnitGain::from_angle(t))));
        GainGraph::build(self.n, edges).expect("support is simple")
    }
}

fn run_chain(support: &GainGraph, cfg: &SearchConfig, objective: &Objective, seed: u64) -> Result<SearchResult> {
    let (_, parent) = support.bfs();
    let mut tree = Vec::new();
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            tree.push((p.min(v), p.max(v)));
        }
    }
    tree.sort_unstable();
    let free: Vec<(usize, usize)> =
        support.edges().map(|(u, v, _)| (u, v)).filter(|e| tree.binary_search(e).is_err()).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = (0..free.len()).map(|_| rng.gen_range(-PI..PI)).collect();
    let mut state = State { n: support.n(), tree, free, angles };
    let mut f = objective.eval(&state.matrix())?;
    let mut best = (f, state.angles.clone());
    let mut trace = Vec::new();
    let mut proposals = 0u64;
    let mut t = cfg.t0;
    let converged = |f: f64| f < cfg.epsilon;

    'outer: while !converged(best.0) {
        for _ in 0..cfg.iters_per_temp {
            let step = (PI * t).min(PI);
            let old = state.angles.clone();
            for a in state.angles.iter_mut() {
                *a += rng.gen_range(-step..=step);
            }
            proposals += 1;
            let f_new = objective.eval(&state.matrix())?;
            // f > 0 here: a state with f < epsilon ends the search before the next proposal.
            let accept = f_new < f || rng.gen::<f64>() < ((f - f_new) / (f * t)).exp();
            if accept {
                f = f_new;
                if f < best.0 {
                    best = (f, state.angles.clone());
                }
                if converged(f) {
                    trace.push((t, best.0));
                    break 'outer;
                }
            } else {
                state.angles = old;
            }
        }
        trace.push((t, best.0));
        t *= cfg.alpha;
        if t <= cfg.tau {
            break;
        }
    }

    let best_gains = state.graph(&best.1);
    let status = if converged(best.0) { SearchStatus::Converged } else { SearchStatus::Exhausted };
    let snapped = if status == SearchStatus::Converged && *objective == Objective::TwoEv {
        snap_gains(&best_gains, cfg.snap_order, 1e-9).or_else(|| snap_partial(&best_gains, cfg.snap_order))
    } else {
        None
    };
    Ok(SearchResult { status, best_gains, best_f: best.0, snapped, trace, seed, proposals })
}

/// Anneals `chains` independent replicas with seeds `seed + i` and keeps the best.
pub fn anneal(support: &GainGraph, cfg: &SearchConfig, objective: &Objective) -> Result<SearchResult> {
    cfg.validate()?;
    if support.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !support.is_connected() {
        return Err(Error::Disconnected);
    }
    if let Objective::Cospectral(t) = objective {
        if t.len() != support.n() {
            return Err(Error::LengthMismatch { expected: support.n(), got: t.len() });
        }
    }
    let results: Vec<Result<SearchResult>> = (0..cfg.chains)
        .into_par_iter()
        .map(|i| run_chain(support, cfg, objective, cfg.seed.wrapping_add(i as u64)))
        .collect();
    let mut best: Option<SearchResult> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.best_f < b.best_f) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one chain"))
}

/// Snaps every gain to a root of unity of order at most `q`; `None` unless the result certifies at `verify_tol`.
pub fn snap_gains(g: &GainGraph, q: u64, verify_tol: f64) -> Option<(GainGraph, TwoEvCertificate)> {
    let s = g.snap_exact(q, SNAP_ANGLE)?;
    let cert = certify_two_ev(&s, verify_tol).ok()??;
    Some((s, cert))
}

/// Snaps only the gains near a low-order root and re-certifies numerically.
pub fn snap_partial(g: &GainGraph, q: u64) -> Option<(GainGraph, TwoEvCertificate)> {
    let s = g.snap_partial(q, SNAP_ANGLE);
    let cert = certify_two_ev(&s, 1e-6).ok()??;
    Some((s, cert))
}

/// A catalog member switching isomorphic to a search result.
#[derive(Debug, Clone)]
pub struct Identification {
    /// Entry name, prefixed with `-` when the match is against the negated graph.
    pub name: String,
    pub params: Params,
    pub witness: SwitchingWitness,
}

fn cycle_gain_candidates(g: &GainGraph) -> Vec<UnitGain> {
    let mut raw = Vec::new();
    for u in 0..g.n() {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            for &w in g.neighbors(v).iter().filter(|&&w| w > v) {
                if g.is_adjacent(w, u) {
                    raw.push(g.cycle_gain(&[u, v, w]).expect("triangle"));
                }
            }
        }
    }
    let mut out = Vec::new();
    for r in raw {
        for m in [UnitGain::ONE, UnitGain::NEG_ONE, UnitGain::I, UnitGain::NEG_I] {
            for c in [r * m, (r * m).conj()] {
                if !out.iter().any(|o: &UnitGain| o.approx_eq(c, 1e-7)) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn try_entry(g: &GainGraph, entry: &CatalogEntry, budget: u64) -> Option<(Params, SwitchingWitness)> {
    let attempts: Vec<Params> = match &entry.draws {
        Draws::None => vec![Params::new()],
        Draws::Fixed(list) => list.clone(),
        Draws::Units([name]) => cycle_gain_candidates(g).into_iter().map(|x| Params::new().with_gain(name, x)).collect(),
        Draws::Units(_) => Vec::new(),
    };
    for p in attempts {
        let Ok(target) = (entry.build)(&p) else { continue };
        if target.n() != g.n() || target.edge_count() != g.edge_count() {
            continue;
        }
        if let Ok(Some(w)) = switching_isomorphic_tol(g, &target, budget, IDENTIFY_TOL) {
            return Some((p, w));
        }
    }
    None
}

/// Matches a two-eigenvalue graph against catalog entries of the same order and spectrum, or of the negated spectrum.
pub fn identify(g: &GainGraph, budget: u64) -> Result<Option<Identification>> {
    let spec = eigenvalues(g, 1e-9)?;
    for entry in catalog() {
        if entry.order() != g.n() {
            continue;
        }
        let negated: Vec<(f64, usize)> = entry.expected.iter().rev().map(|&(v, m)| (-v, m)).collect();
        for (expected, sign) in [(&entry.expected, ""), (&negated, "-")] {
            if !spec.matches(expected, 1e-6) {
                continue;
            }
            let probe = if sign.is_empty() { g.clone() } else { g.negate() };
            if let Some((params, witness)) = try_entry(&probe, &entry, budget) {
                return Ok(Some(Identification { name: format!("{sign}{}", entry.name), params, witness }));
            }
        }
    }
    Ok(None)
}
