//! Named gain graphs with their expected spectra, and batch verification.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::families::{d8_star, donut, double, renes, toral, DoubleKind};
use crate::gain::UnitGain;
use crate::graph::{complete_graph, GainGraph};
use crate::lines::{coxeter_todd, hexacode_lines, lines_to_gain, mub_c3, mub_c4_pair, sic3, simplex_diff, st33, witting, etf6, LineSystem};
use crate::params::Params;
use crate::spectral::{certify_two_ev, eigenvalues};
use crate::weighing::{decode_rows, ig, named_weighing};

/// Number of random draws per free unit parameter during verification.
pub const DRAWS: usize = 5;
/// Value tolerance for expected spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;
const VERIFY_SEED: u64 = 0x5eed_ca7a_109;

pub const FIXED_NAMES: &[&str] =
    &["K_n", "K222_gamma", "Example1", "GQ22", "K8star", "K10star", "M1", "M2", "M3", "M4", "Ramezani_Delta5"];

const K8_STAR: [[i8; 8]; 8] = [
    [0, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, 2, -2, 2, -2, 2, -2],
    [1, -2, 0, -2, -2, 2, 2, 2],
    [1, 2, 2, 0, -2, -2, -2, 2],
    [1, -2, 2, 2, 0, 2, -2, -2],
    [1, 2, -2, 2, -2, 0, 2, -2],
    [1, -2, -2, 2, 2, -2, 0, 2],
    [1, 2, -2, -2, 2, 2, -2, 0],
];

const K10_STAR: [[i8; 10]; 10] = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, 0, -1, -1, 1, 1, -1, -1, 1, 1],
    [1, -1, 0, 1, 1, -1, 1, -1, -1, 1],
    [1, -1, 1, 0, -1, -1, -1, 1, 1, 1],
    [1, 1, 1, -1, 0, -1, 1, -1, 1, -1],
    [1, 1, -1, -1, -1, 0, 1, 1, -1, 1],
    [1, -1, 1, -1, 1, 1, 0, 1, -1, -1],
    [1, -1, -1, 1, -1, 1, 1, 0, 1, -1],
    [1, 1, -1, 1, 1, -1, -1, 1, 0, -1],
    [1, 1, 1, 1, -1, 1, -1, -1, -1, 0],
];

const M1: [[i8; 12]; 12] = [
    [0, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1],
    [1, 0, 1, 0, 0, 0, 1, -1, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0, -1, -1, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 0, 0, -1, -1, 1, 0],
    [0, 0, 0, 1, 0, 3, 0, 0, 0, -1, -1, -3],
    [1, 0, 0, 0, 4, 0, -1, 0, 0, 0, -4, 1],
    [1, 1, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1],
    [1, -1, -1, 0, 0, 0, 1, 0, -1, 0, 0, 0],
    [0, 1, -1, -1, 0, 0, 0, -1, 0, -1, 0, 0],
    [0, 0, 1, -1, -1, 0, 0, 0, -1, 0, -1, 0],
    [0, 0, 0, 1, -1, -3, 0, 0, 0, -1, 0, 3],
    [1, 0, 0, 0, -4, 1, -1, 0, 0, 0, 4, 0],
];

const M3: [[i8; 12]; 12] = [
    [0, 0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1],
    [0, 0, 0, 0, 1, 0, 0, 1, 0, 1, -1, -1],
    [0, 0, 0, 0, 0, 1, 1, 0, -3, 3, 3, 0],
    [0, 0, 0, 0, 0, 1, 1, 0, 3, -3, 0, -3],
    [1, 1, 0, 0, 0, 0, 1, 0, 0, 0, -3, 3],
    [0, 0, 1, 1, 0, 0, 0, -1, 1, 1, 0, 0],
    [0, 0, 1, 1, 1, 0, 0, 0, -1, -1, 0, 0],
    [1, 1, 0, 0, 0, -1, 0, 0, 0, 0, 3, -3],
    [1, 0, -4, 4, 0, 1, -1, 0, 0, 0, 0, 0],
    [0, 1, 4, -4, 0, 1, -1, 0, 0, 0, 0, 0],
    [1, -1, 4, 0, -4, 0, 0, 4, 0, 0, 0, 0],
    [1, -1, 0, -4, 4, 0, 0, -4, 0, 0, 0, 0],
];

const M4: [[i8; 12]; 12] = [
    [0, 0, 0, 1, 0, 0, 1, 0, 1, 1, 1, 0],
    [0, 0, 0, 0, 1, 0, 1, 1, 0, 0, -1, 1],
    [0, 0, 0, 0, 0, 1, 1, -1, 0, 0, -1, -1],
    [1, 0, 0, 0, 0, 0, 2, 0, -2, -2, 2, 0],
    [0, 1, 0, 0, 0, 0, 0, -2, 2, -2, 0, 2],
    [0, 0, 1, 0, 0, 0, 0, 2, 2, -2, 0, -2],
    [1, 1, 1, -2, 0, 0, 0, 0, 0, 2, 0, 0],
    [0, 1, -1, 0, 2, -2, 0, 0, 0, 0, 0, -2],
    [1, 0, 0, 2, -2, -2, 0, 0, 0, 0, -2, 0],
    [1, 0, 0, 2, 2, 2, -2, 0, 0, 0, 0, 0],
    [1, -1, -1, -2, 0, 0, 0, 0, 2, 0, 0, 0],
    [0, 1, -1, 0, -2, 2, 0, 2, 0, 0, 0, 0],
];

const K222: [[i8; 6]; 6] = [
    [0, 0, -2, 2, 1, 1],
    [0, 0, 1, 1, -1, 1],
    [2, 1, 0, 0, -4, 3],
    [-2, 1, 0, 0, -3, 4],
    [1, -1, -3, -4, 0, 0],
    [1, 1, 4, 3, 0, 0],
];

/// Gain graph `(N*N − I)/alpha` of a `{0, alpha}` line system, with gains snapped to roots of unity where possible.
pub fn lines_graph(lines: &LineSystem) -> Result<GainGraph> {
    let alpha = lines.alpha().ok_or_else(|| Error::BadParam("line system has no declared angle".into()))?;
    let (g, _) = lines_to_gain(lines, alpha)?;
    Ok(g.snap_exact(24, 1e-9).unwrap_or(g))
}

fn literal(rows: Vec<Vec<Option<UnitGain>>>) -> Result<GainGraph> {
    GainGraph::from_entries(&rows)
}

fn example1() -> Result<GainGraph> {
    let r = [0, 1, 1, 0, 1, 0, 0];
    let s = 2f64.sqrt() / 4.0;
    let s7 = 7f64.sqrt();
    let mut edges = Vec::new();
    for u in 0..7 {
        for v in u + 1..7 {
            let m = r[(v - u) % 7] - r[(u + 7 - v) % 7];
            let z = Complex64::new(-s, -s * s7 * m as f64);
            edges.push((u, v, UnitGain::from_direction(z)?));
        }
    }
    GainGraph::build(7, edges)
}

/// One of the fixed graphs; `K_n` takes `n`, `K222_gamma` takes `x` and `conj`, `M1`–`M3` take `x`.
pub fn fixed_catalog(name: &str, params: &Params) -> Result<GainGraph> {
    let x = || params.gain_or("x", UnitGain::ONE);
    match name {
        "K_n" => {
            params.only(&["n"])?;
            let n = params.int_or("n", 6)?;
            if n < 2 {
                return Err(Error::InvalidOrder(n.max(0) as usize));
            }
            Ok(complete_graph(n as usize))
        }
        "K222_gamma" => {
            params.only(&["x", "conj"])?;
            let g = literal(decode_rows(&K222, params.gain_or("x", UnitGain::gamma())?))?;
            Ok(if params.int_or("conj", 0)? != 0 { g.converse() } else { g })
        }
        "Example1" => params.only(&[]).and_then(|_| example1()),
        "GQ22" => params.only(&[]).and_then(|_| lines_graph(&hexacode_lines()?)),
        "K8star" => params.only(&[]).and_then(|_| literal(decode_rows(&K8_STAR, UnitGain::ONE))),
        "K10star" => params.only(&[]).and_then(|_| literal(decode_rows(&K10_STAR, UnitGain::ONE))),
        "M1" => {
            params.only(&["x"])?;
            literal(decode_rows(&M1, x()?))
        }
        "M2" => {
            params.only(&["x"])?;
            Ok(ig(&named_weighing("Z", Some(x()?))?))
        }
        "M3" => {
            params.only(&["x"])?;
            literal(decode_rows(&M3, x()?))
        }
        "M4" => params.only(&[]).and_then(|_| literal(decode_rows(&M4, UnitGain::ONE))),
        "Ramezani_Delta5" => params.only(&[]).and_then(|_| lines_graph(&simplex_diff(5)?)),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// Parametric families accepted by [`construct`] besides catalog and fixed names.
pub const FAMILY_NAMES: &[&str] =
    &["toral", "donut", "d8_star", "renes", "k_star_pqr", "cycle", "complete", "complete_bipartite", "cycle_complement"];

fn usize_param(params: &Params, name: &str, default: i64) -> Result<usize> {
    let v = params.int_or(name, default)?;
    usize::try_from(v).map_err(|_| Error::BadParam(format!("{name} must be non-negative")))
}

/// Builds any named graph: a family, a fixed graph, or a catalog entry (its free units default to 1).
pub fn construct(name: &str, params: &Params) -> Result<GainGraph> {
    let x = |n: &str| params.gain_or(n, UnitGain::ONE);
    match name {
        "toral" | "donut" => {
            params.only(&["t", "x"])?;
            let t = usize_param(params, "t", 4)?;
            if name == "toral" { toral(t, x("x")?) } else { donut(t, x("x")?) }
        }
        "d8_star" => {
            params.only(&["c"])?;
            Ok(d8_star(x("c")?))
        }
        "renes" => {
            params.only(&["p"])?;
            renes(usize_param(params, "p", 7)? as u64)
        }
        "k_star_pqr" => {
            params.only(&["p", "q", "r"])?;
            let (p, q, r) = (usize_param(params, "p", 1)?, usize_param(params, "q", 1)?, usize_param(params, "r", 1)?);
            if p == 0 || q == 0 || r == 0 {
                return Err(Error::BadParam("part sizes must be positive".into()));
            }
            Ok(crate::families::k_star_pqr(p, q, r))
        }
        "cycle" | "complete" | "cycle_complement" => {
            params.only(&["n"])?;
            let n = usize_param(params, "n", 4)?;
            if n < 3 {
                return Err(Error::InvalidOrder(n));
            }
            Ok(match name {
                "cycle" => crate::graph::cycle_graph(n),
                "complete" => complete_graph(n),
                _ => crate::graph::complement(&crate::graph::cycle_graph(n)),
            })
        }
        "complete_bipartite" => {
            params.only(&["p", "q"])?;
            let (p, q) = (usize_param(params, "p", 3)?, usize_param(params, "q", 3)?);
            if p == 0 || q == 0 {
                return Err(Error::BadParam("part sizes must be positive".into()));
            }
            Ok(crate::graph::complete_bipartite(p, q))
        }
        _ if FIXED_NAMES.contains(&name) => fixed_catalog(name, params),
        _ => match catalog_entry(name) {
            Some(e) => (e.build)(params),
            None => Err(Error::UnknownName(name.to_string())),
        },
    }
}

/// How free parameters are drawn during verification.
#[derive(Debug, Clone)]
pub enum Draws {
    None,
    /// Unit parameters sampled uniformly on the circle.
    Units(&'static [&'static str]),
    /// An explicit list of parameter sets.
    Fixed(Vec<Params>),
}

#[derive(Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub tags: &'static [&'static str],
    pub source: &'static str,
    pub draws: Draws,
    /// `(value, multiplicity)`, descending.
    pub expected: Vec<(f64, usize)>,
    pub build: fn(&Params) -> Result<GainGraph>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry").field("name", &self.name).field("expected", &self.expected).finish()
    }
}

impl CatalogEntry {
    pub fn order(&self) -> usize {
        self.expected.iter().map(|e| e.1).sum()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.tags.contains(&tag)
    }

    /// Builds with default parameters (the first fixed draw, or every unit parameter set to 1).
    pub fn build_default(&self) -> Result<GainGraph> {
        match &self.draws {
            Draws::Fixed(list) => (self.build)(&list[0]),
            _ => (self.build)(&Params::new()),
        }
    }

    /// Parameter sets used by verification.
    pub fn draw_params(&self, rng: &mut impl Rng) -> Vec<Params> {
        match &self.draws {
            Draws::None => vec![Params::new()],
            Draws::Fixed(list) => list.clone(),
            Draws::Units(names) => (0..DRAWS)
                .map(|_| {
                    names.iter().fold(Params::new(), |p, n| {
                        p.with_gain(n, UnitGain::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)))
                    })
                })
                .collect(),
        }
    }
}

fn pm(v: f64, m: usize) -> Vec<(f64, usize)> {
    vec![(v, m), (-v, m)]
}

fn two(t1: f64, m1: usize, t2: f64, m2: usize) -> Vec<(f64, usize)> {
    vec![(t1, m1), (t2, m2)]
}

fn complete(n: usize) -> Vec<(f64, usize)> {
    two((n - 1) as f64, 1, -1.0, n - 1)
}

fn w(name: &str) -> Result<GainGraph> {
    named_weighing(name, None)?.as_gain_graph()
}

fn ig_w(name: &str) -> Result<GainGraph> {
    Ok(ig(&named_weighing(name, None)?))
}

fn unit(p: &Params, name: &str) -> Result<UnitGain> {
    p.gain_or(name, UnitGain::ONE)
}

macro_rules! entry {
    ($name:expr, [$($tag:expr),*], $source:expr, $draws:expr, $expected:expr, $build:expr) => {
        CatalogEntry {
            name: $name,
            tags: &[$($tag),*],
            source: $source,
            draws: $draws,
            expected: $expected,
            build: $build,
        }
    };
}

/// The full registry in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    let s2 = 2f64.sqrt();
    let s3 = 3f64.sqrt();
    let s5 = 5f64.sqrt();
    let gammas = Draws::Fixed(vec![
        Params::new().with_gain("x", UnitGain::gamma()),
        Params::new().with_gain("x", UnitGain::gamma()).with_int("conj", 1),
    ]);
    let renes_spec = |p: usize| {
        let r = ((p + 1) as f64).sqrt();
        two(r, (p - 1) / 2, -((p - 1) as f64) / r, p.div_ceil(2))
    };
    vec![
        // least multiplicity at most 3
        entry!("K6", ["table2"], "K_n, n = 6", Draws::None, complete(6), |_| Ok(complete_graph(6))),
        entry!("IG(W2)", ["table2", "table3"], "bipartite double of W2", Draws::None, pm(s2, 2), |_| ig_w("W2")),
        entry!("W4", ["table2", "table3"], "W4 as a gain graph", Draws::None, pm(s3, 2), |_| w("W4")),
        entry!("K222_gamma", ["table2", "table3", "degree4"], "three MUBs in C^2", gammas, two(2.0 * s2, 2, -s2, 4), |p| {
            fixed_catalog("K222_gamma", p)
        }),
        entry!("MUB2_C3", ["table2", "lines"], "two MUBs in C^3", Draws::None, pm(s3, 3), |_| lines_graph(&mub_c3(2)?)),
        entry!("T6(x)", ["table2"], "toral tessellation, t = 3", Draws::Units(&["x"]), pm(2.0, 3), |p| {
            toral(3, unit(p, "x")?)
        }),
        entry!("ETF6(z)", ["table2", "lines"], "six equiangular lines in C^3", Draws::Units(&["z"]), pm(s5, 3), |p| {
            lines_graph(&etf6(unit(p, "z")?)?)
        }),
        entry!("Renes7", ["table2", "renes"], "quadratic residues mod 7", Draws::None, renes_spec(7), |_| renes(7)),
        entry!("MUB3_C3", ["table2", "lines"], "three MUBs in C^3", Draws::None, two(2.0 * s3, 3, -s3, 6), |_| {
            lines_graph(&mub_c3(3)?)
        }),
        entry!("SIC3", ["table2", "lines"], "SIC-POVM in C^3", Draws::None, two(4.0, 3, -2.0, 6), |_| lines_graph(&sic3()?)),
        entry!("MUB4_C3", ["table2", "lines"], "four MUBs in C^3", Draws::None, two(3.0 * s3, 3, -s3, 9), |_| {
            lines_graph(&mub_c3(4)?)
        }),
        // degree at most 4
        entry!("K3", ["table3"], "K_n, n = 3", Draws::None, complete(3), |_| Ok(complete_graph(3))),
        entry!("K4", ["table3"], "K_n, n = 4", Draws::None, complete(4), |_| Ok(complete_graph(4))),
        entry!("IG(W3)", ["table3"], "bipartite double of W3", Draws::None, pm(s3, 3), |_| ig_w("W3")),
        entry!("ND(IG(W2))", ["table3", "doubling"], "signed 3-cube", Draws::None, pm(s3, 4), |_| {
            double(&ig_w("W2")?, DoubleKind::Nd)
        }),
        entry!("K5", ["table3", "degree4"], "K_n, n = 5", Draws::None, complete(5), |_| Ok(complete_graph(5))),
        entry!("ND(W4)", ["table3", "degree4", "doubling"], "ND double of W4", Draws::None, pm(2.0, 4), |_| {
            double(&w("W4")?, DoubleKind::Nd)
        }),
        entry!("IG(W5)", ["table3", "degree4"], "bipartite double of W5", Draws::None, pm(2.0, 5), |_| ig_w("W5")),
        entry!("ND(IG(W3))", ["table3", "degree4", "doubling"], "ND double of IG(W3)", Draws::None, pm(2.0, 6), |_| {
            double(&ig_w("W3")?, DoubleKind::Nd)
        }),
        entry!("IG(W7)", ["table3", "degree4"], "bipartite double of W7", Draws::None, pm(2.0, 7), |_| ig_w("W7")),
        entry!("ND(ND(IG(W2)))", ["table3", "degree4", "doubling"], "iterated ND double", Draws::None, pm(2.0, 8), |_| {
            double(&double(&ig_w("W2")?, DoubleKind::Nd)?, DoubleKind::Nd)
        }),
        entry!("T10(x)", ["table3", "degree4"], "toral tessellation, t = 5", Draws::Units(&["x"]), pm(2.0, 5), |p| {
            toral(5, unit(p, "x")?)
        }),
        // doubling laws
        entry!("SD(IG(W2))", ["doubling"], "SD double, k = 2", Draws::None, pm(2.0, 4), |_| {
            double(&ig_w("W2")?, DoubleKind::Sd)
        }),
        entry!("SD*(IG(W2))", ["doubling"], "SD* double, k = 2", Draws::None, pm(s5, 4), |_| {
            double(&ig_w("W2")?, DoubleKind::SdStar)
        }),
        entry!("SD(W4)", ["doubling"], "SD double, k = 3", Draws::None, pm(6f64.sqrt(), 4), |_| {
            double(&w("W4")?, DoubleKind::Sd)
        }),
        entry!("SD*(W4)", ["doubling"], "SD* double, k = 3", Draws::None, pm(7f64.sqrt(), 4), |_| {
            double(&w("W4")?, DoubleKind::SdStar)
        }),
        entry!("SD(IG(W3))", ["doubling"], "SD double, k = 3", Draws::None, pm(6f64.sqrt(), 6), |_| {
            double(&ig_w("W3")?, DoubleKind::Sd)
        }),
        entry!("SD*(IG(W3))", ["doubling"], "SD* double, k = 3", Draws::None, pm(7f64.sqrt(), 6), |_| {
            double(&ig_w("W3")?, DoubleKind::SdStar)
        }),
        // degree 5 families
        entry!("Donut6(x)", ["donut"], "donut, t = 3", Draws::Units(&["x"]), pm(s5, 3), |p| donut(3, unit(p, "x")?)),
        entry!("Donut8(x)", ["donut"], "donut, t = 4", Draws::Units(&["x"]), pm(s5, 4), |p| donut(4, unit(p, "x")?)),
        entry!("Donut10(x)", ["donut"], "donut, t = 5", Draws::Units(&["x"]), pm(s5, 5), |p| donut(5, unit(p, "x")?)),
        entry!("Donut12(x)", ["donut"], "donut, t = 6", Draws::Units(&["x"]), pm(s5, 6), |p| donut(6, unit(p, "x")?)),
        entry!("Donut14(x)", ["donut"], "donut, t = 7", Draws::Units(&["x"]), pm(s5, 7), |p| donut(7, unit(p, "x")?)),
        entry!("D8*(c)", ["donut"], "exceptional order-8 graph", Draws::Units(&["c"]), pm(s5, 4), |p| {
            Ok(d8_star(unit(p, "c")?))
        }),
        // Renes family
        entry!("Renes3", ["renes"], "quadratic residues mod 3", Draws::None, renes_spec(3), |_| renes(3)),
        entry!("Renes11", ["renes"], "quadratic residues mod 11", Draws::None, renes_spec(11), |_| renes(11)),
        entry!("Renes19", ["renes"], "quadratic residues mod 19", Draws::None, renes_spec(19), |_| renes(19)),
        entry!("Example1", ["renes"], "literal order-7 example", Draws::None, renes_spec(7), |_| example1()),
        // line geometries
        entry!("GQ22", ["lines", "geometry"], "hexacode lines", Draws::None, two(3.0, 6, -2.0, 9), |_| {
            lines_graph(&hexacode_lines()?)
        }),
        entry!("Ramezani_Delta5", ["lines", "geometry"], "signed triangular graph", Draws::None, two(3.0, 4, -2.0, 6), |_| {
            lines_graph(&simplex_diff(5)?)
        }),
        entry!("MUB_C4_pair(x)", ["lines"], "two MUBs in C^4", Draws::Units(&["x"]), pm(2.0, 4), |p| {
            lines_graph(&mub_c4_pair(unit(p, "x")?)?)
        }),
        entry!("Witting", ["lines", "geometry", "large"], "Witting polytope", Draws::None, two(9.0 * s3, 4, -s3, 36), |_| {
            lines_graph(&witting()?)
        }),
        entry!("ST33", ["lines", "geometry", "large"], "ST33 reflection hyperplanes", Draws::None, two(16.0, 5, -2.0, 40), |_| {
            lines_graph(&st33()?)
        }),
        entry!("CoxeterTodd2", ["lines", "geometry", "large"], "Coxeter-Todd, 2-base", Draws::None, two(40.0, 6, -2.0, 120), |_| {
            lines_graph(&coxeter_todd(2)?)
        }),
        entry!("CoxeterTodd3", ["lines", "geometry", "large"], "Coxeter-Todd, 3-base", Draws::None, two(40.0, 6, -2.0, 120), |_| {
            lines_graph(&coxeter_todd(3)?)
        }),
        entry!("CoxeterTodd4", ["lines", "geometry", "large"], "Coxeter-Todd, 4-base", Draws::None, two(40.0, 6, -2.0, 120), |_| {
            lines_graph(&coxeter_todd(4)?)
        }),
        // computer-search examples
        entry!("K8star", ["appendix"], "sporadic on K8", Draws::None, pm(7f64.sqrt(), 4), |p| fixed_catalog("K8star", p)),
        entry!("K10star", ["appendix"], "signed graph on K10", Draws::None, pm(3.0, 5), |p| fixed_catalog("K10star", p)),
        entry!("M1(x)", ["appendix"], "icosahedron", Draws::Units(&["x"]), pm(s5, 6), |p| fixed_catalog("M1", p)),
        entry!("M2(x)", ["appendix"], "bipartite double of Z", Draws::Units(&["x"]), pm(s5, 6), |p| fixed_catalog("M2", p)),
        entry!("M3(x)", ["appendix"], "sporadic order 12", Draws::Units(&["x"]), pm(s5, 6), |p| fixed_catalog("M3", p)),
        entry!("M4", ["appendix"], "sporadic order 12", Draws::None, pm(s5, 6), |p| fixed_catalog("M4", p)),
    ]
}

/// Looks up an entry by name.
pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// W4 with the sign of one edge flipped; fails verification.
pub fn corrupted_w4() -> CatalogEntry {
    let mut e = catalog_entry("W4").expect("W4 registered");
    e.name = "W4_corrupted";
    e.build = |_| {
        let g = w("W4")?;
        Ok(g.map_gains(|u, v, x| if (u, v) == (1, 2) { -x } else { x }))
    };
    e
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogRow {
    pub name: String,
    pub order: usize,
    /// Common degree, if regular.
    pub k: Option<usize>,
    /// Multiplicity of the largest eigenvalue.
    pub m: usize,
    pub theta1: f64,
    pub theta2: f64,
    /// Worst certificate residual over all draws (`NaN` when certification failed).
    pub residual: f64,
    pub pass: bool,
    pub draws: usize,
    pub detail: String,
}

fn verify_draw(entry: &CatalogEntry, params: &Params, tol: f64) -> Result<(GainGraph, f64, Option<String>)> {
    let g = (entry.build)(params)?;
    let spec = eigenvalues(&g, tol)?;
    let cert = certify_two_ev(&g, tol)?;
    let mut problem = None;
    if !spec.matches(&entry.expected, SPECTRUM_TOL) {
        problem = Some(format!("spectrum {:?}", spec.clusters));
    }
    let residual = match cert {
        Some(c) => c.residual,
        None => {
            problem.get_or_insert_with(|| "not two-eigenvalue".to_string());
            f64::NAN
        }
    };
    Ok((g, residual, problem))
}

/// Builds and certifies one entry over all its parameter draws.
pub fn verify_entry(entry: &CatalogEntry, tol: f64, seed: u64) -> CatalogRow {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = entry.draw_params(&mut rng);
    let mut row = CatalogRow {
        name: entry.name.to_string(),
        order: entry.order(),
        k: None,
        m: entry.expected.first().map_or(0, |e| e.1),
        theta1: entry.expected.first().map_or(f64::NAN, |e| e.0),
        theta2: entry.expected.last().map_or(f64::NAN, |e| e.0),
        residual: 0.0,
        pass: true,
        draws: draws.len(),
        detail: String::new(),
    };
    for params in &draws {
        match verify_draw(entry, params, tol) {
            Ok((g, residual, problem)) => {
                row.order = g.n();
                row.k = g.structure_degree();
                row.residual = if residual.is_nan() || row.residual.is_nan() { f64::NAN } else { row.residual.max(residual) };
                if let Some(p) = problem {
                    row.pass = false;
                    row.detail = p;
                }
            }
            Err(e) => {
                row.pass = false;
                row.residual = f64::NAN;
                row.detail = e.to_string();
            }
        }
    }
    if row.pass {
        if let Ok(g) = entry.build_default() {
            if let Ok(spec) = eigenvalues(&g, tol) {
                row.m = spec.clusters[0].1;
                row.theta1 = spec.clusters[0].0;
                row.theta2 = spec.clusters[spec.clusters.len() - 1].0;
            }
        }
    }
    row
}

/// Verifies every entry in parallel; rows keep catalog order.
pub fn verify_entries(entries: &[CatalogEntry], tol: f64) -> Vec<CatalogRow> {
    entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| verify_entry(e, tol, VERIFY_SEED.wrapping_add(i as u64)))
        .collect()
}

/// Verifies the registry, optionally restricted to entries carrying `tag`.
pub fn catalog_verify_all(tol: f64, only: Option<&str>) -> Vec<CatalogRow> {
    let entries: Vec<CatalogEntry> = catalog().into_iter().filter(|e| only.is_none_or(|t| e.has_tag(t))).collect();
    verify_entries(&entries, tol)
}

pub const CSV_HEADER: &str = "name,order,k,m,theta1,theta2,residual,status";

/// One CSV line per row, preceded by the header.
pub fn rows_to_csv(rows: &[CatalogRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let k = r.k.map_or(String::new(), |k| k.to_string());
        out.push_str(&format!(
            "{},{},{},{},{:.12},{:.12},{:.3e},{}\n",
            csv_field(&r.name),
            r.order,
            k,
            r.m,
            r.theta1,
            r.theta2,
            r.residual,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let cat = catalog();
        let mut names: Vec<_> = cat.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), cat.len());
    }

    #[test]
    fn degree4_has_eight_rows() {
        assert_eq!(catalog().iter().filter(|e| e.has_tag("degree4")).count(), 8);
    }

    #[test]
    fn small_entries_verify() {
        let entries: Vec<_> = catalog().into_iter().filter(|e| !e.has_tag("large")).collect();
        let failed: Vec<_> = verify_entries(&entries, 1e-9).into_iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }

    #[test]
    fn corrupted_fixture_fails() {
        let row = verify_entry(&corrupted_w4(), 1e-9, 1);
        assert!(!row.pass);
        assert_eq!(row.name, "W4_corrupted");
        assert!(rows_to_csv(&[row]).lines().nth(1).unwrap().ends_with("FAIL"));
    }

    #[test]
    fn fixed_names_build() {
        for name in FIXED_NAMES {
            fixed_catalog(name, &Params::new()).unwrap();
        }
        assert!(matches!(fixed_catalog("K9000", &Params::new()), Err(Error::UnknownName(_))));
        for name in FAMILY_NAMES {
            construct(name, &Params::new()).unwrap();
        }
        assert_eq!(construct("toral", &Params::new().with_int("t", 5)).unwrap().n(), 10);
        assert_eq!(construct("IG(W5)", &Params::new()).unwrap().n(), 10);
    }

    #[test]
    fn lines_graphs_snap_to_roots() {
        assert!(lines_graph(&hexacode_lines().unwrap()).unwrap().edges().all(|(_, _, g)| matches!(g, UnitGain::Exact { q, .. } if 6 % q == 0)));
        assert!(lines_graph(&simplex_diff(5).unwrap()).unwrap().edges().all(|(_, _, g)| matches!(g, UnitGain::Exact { q, .. } if q <= 2)));
    }

    #[test]
    fn large_entries_verify() {
        let entries: Vec<_> = catalog().into_iter().filter(|e| e.has_tag("large")).collect();
        let failed: Vec<_> = verify_entries(&entries, 1e-9).into_iter().filter(|r| !r.pass).collect();
        assert!(failed.is_empty(), "{failed:#?}");
    }
}
