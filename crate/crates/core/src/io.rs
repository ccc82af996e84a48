//! Text formats for gain graphs and line systems, and report formatting.

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, ParseError, ParseErrorKind, Result};
use crate::gain::{UnitGain, UNIT_TOL};
use crate::graph::GainGraph;
use crate::linalg::CMatrix;
use crate::lines::{LineSystem, NORM_TOL};
use crate::spectral::{Spectrum, TwoEvCertificate};

/// Modulus tolerance for `num` gains in files.
pub const FILE_UNIT_TOL: f64 = 1e-9;

fn fail(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse(ParseError { line, kind })
}

fn syntax(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::syntax(line, msg))
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse().map_err(|_| syntax(line, format!("invalid {what} {tok:?}")))
}

fn expect_header<'a>(
    lines: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    key: &str,
    value: Option<&str>,
) -> Result<(usize, Vec<&'a str>)> {
    let (ln, toks) = lines.next().ok_or_else(|| syntax(0, format!("missing `{key}` line")))?;
    let ok = toks.len() == 2 && toks[0] == key && value.is_none_or(|v| toks[1] == v);
    if !ok {
        return Err(syntax(ln, format!("expected `{key} {}`", value.unwrap_or("<value>"))));
    }
    Ok((ln, toks))
}

fn parse_gain(line: usize, toks: &[&str]) -> Result<UnitGain> {
    match toks {
        ["rot", frac] => {
            let (p, q) = frac.split_once('/').ok_or_else(|| syntax(line, format!("expected p/q, got {frac:?}")))?;
            let p: i64 = parse_num(line, p, "numerator")?;
            let q: i64 = parse_num(line, q, "denominator")?;
            if q <= 0 || p < 0 || p >= q || p.gcd(&q) != 1 {
                return Err(syntax(line, format!("rot {p}/{q} must satisfy 0 <= p < q and gcd(p, q) = 1")));
            }
            Ok(UnitGain::root(p, q as u64))
        }
        ["num", re, im] => {
            let z = Complex64::new(parse_num(line, re, "real part")?, parse_num(line, im, "imaginary part")?);
            let modulus = z.norm();
            if !modulus.is_finite() || (modulus - 1.0).abs() > FILE_UNIT_TOL {
                return Err(fail(line, ParseErrorKind::NonUnitGain { modulus }));
            }
            if (modulus - 1.0).abs() <= UNIT_TOL {
                UnitGain::numeric(z)
            } else {
                UnitGain::from_direction(z)
            }
        }
        _ => Err(syntax(line, "expected `rot p/q` or `num re im`")),
    }
}

/// Parses the `gaingraph v1` format.
pub fn parse_gaingraph(text: &str) -> Result<GainGraph> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "gaingraph", Some("v1"))?;
    let (ln, toks) = expect_header(&mut lines, "n", None)?;
    let n: usize = parse_num(ln, toks[1], "vertex count")?;
    let mut edges = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (ln, toks) in lines {
        if toks[0] != "e" || toks.len() < 4 {
            return Err(syntax(ln, "expected `e <u> <v> <gain>`"));
        }
        let u: usize = parse_num(ln, toks[1], "vertex")?;
        let v: usize = parse_num(ln, toks[2], "vertex")?;
        for x in [u, v] {
            if x >= n {
                return Err(fail(ln, ParseErrorKind::IndexOutOfRange { index: x, n }));
            }
        }
        if u == v {
            return Err(fail(ln, ParseErrorKind::SelfLoop { vertex: u }));
        }
        if u > v {
            return Err(syntax(ln, format!("edge ({u}, {v}) must be written with u < v")));
        }
        if !seen.insert((u, v)) {
            return Err(fail(ln, ParseErrorKind::DuplicateEdge { u, v }));
        }
        edges.push((u, v, parse_gain(ln, &toks[3..])?));
    }
    GainGraph::build(n, edges)
}

/// Writes the `gaingraph v1` format; numeric gains carry 17 significant digits.
pub fn serialize_gaingraph(g: &GainGraph) -> String {
    let mut out = format!("gaingraph v1\nn {}\n", g.n());
    for (u, v, x) in g.edges() {
        out.push_str(&format!("e {u} {v} {x}\n"));
    }
    out
}

/// Parses the `lines v1` format; columns must be unit vectors.
pub fn parse_lines(text: &str) -> Result<LineSystem> {
    let mut lines = content_lines(text);
    expect_header(&mut lines, "lines", Some("v1"))?;
    let (ln, toks) = expect_header(&mut lines, "dim", None)?;
    let m: usize = parse_num(ln, toks[1], "dimension")?;
    let (ln, toks) = expect_header(&mut lines, "count", None)?;
    let n: usize = parse_num(ln, toks[1], "count")?;
    let mut mat = CMatrix::zeros(m, n);
    let mut filled = vec![false; n];
    let mut last = ln;
    for (ln, toks) in lines {
        last = ln;
        if toks[0] != "v" || toks.len() != 2 + 2 * m {
            return Err(syntax(ln, format!("expected `v <j>` followed by {m} re/im pairs")));
        }
        let j: usize = parse_num(ln, toks[1], "vector index")?;
        if j >= n {
            return Err(syntax(ln, format!("vector index {j} exceeds count {n}")));
        }
        if std::mem::replace(&mut filled[j], true) {
            return Err(syntax(ln, format!("vector {j} given twice")));
        }
        let mut norm2 = 0.0;
        for r in 0..m {
            let z = Complex64::new(parse_num(ln, toks[2 + 2 * r], "real part")?, parse_num(ln, toks[3 + 2 * r], "imaginary part")?);
            norm2 += z.norm_sqr();
            mat[(r, j)] = z;
        }
        let norm = norm2.sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(fail(ln, ParseErrorKind::NormViolation { column: j, norm }));
        }
    }
    if let Some(j) = filled.iter().position(|f| !f) {
        return Err(syntax(last, format!("count {n} declared but vector {j} missing")));
    }
    LineSystem::new(mat, None)
}

pub fn serialize_lines(lines: &LineSystem) -> String {
    let (m, n) = (lines.dim(), lines.count());
    let mut out = format!("lines v1\ndim {m}\ncount {n}\n");
    for j in 0..n {
        out.push_str(&format!("v {j}"));
        for r in 0..m {
            let z = lines.vectors()[(r, j)];
            out.push_str(&format!(" {:.16e} {:.16e}", z.re, z.im));
        }
        out.push('\n');
    }
    out
}

/// One eigenvalue per line, then a `clusters:` block of `value multiplicity`.
pub fn format_spectrum(spec: &Spectrum) -> String {
    let mut out = String::new();
    for v in &spec.eigenvalues {
        out.push_str(&format!("{v:.16e}\n"));
    }
    out.push_str("clusters:\n");
    for (v, m) in &spec.clusters {
        out.push_str(&format!("{v:.16e} {m}\n"));
    }
    out
}

/// `TWO-EV ...` for a certificate, `NOT-TWO-EV clusters=<c>` otherwise.
pub fn format_verdict(cert: Option<&TwoEvCertificate>, spec: &Spectrum) -> String {
    match cert {
        Some(c) => format!(
            "TWO-EV theta1={:.16e} theta2={:.16e} m={} a={:.16e} k={:.16e} residual={:.3e}",
            c.theta1, c.theta2, c.m, c.a, c.k, c.residual
        ),
        None => format!("NOT-TWO-EV clusters={}", spec.clusters.len()),
    }
}

/// Parses whitespace-separated reals (comments allowed) as a target spectrum.
pub fn parse_spectrum_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (ln, toks) in content_lines(text) {
        if toks[0] == "clusters:" {
            break;
        }
        for t in toks {
            out.push(parse_num(ln, t, "eigenvalue")?);
        }
    }
    Ok(out)
}
