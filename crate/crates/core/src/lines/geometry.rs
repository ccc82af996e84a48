//! Named line systems: SIC-POVMs, MUBs, equiangular frames and the exceptional geometries.

use num_complex::Complex64;

use super::LineSystem;
use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::gf4::{projective_weight4, Gf4};
use crate::params::Params;

pub const GEOMETRY_NAMES: &[&str] = &[
    "SIC2",
    "SIC3",
    "MUB_C2",
    "MUB_C3",
    "MUB_C4_pair",
    "ETF6",
    "SimplexDiff",
    "Hexacode",
    "Witting",
    "ST33",
    "CoxeterTodd",
];

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn cube(j: i64) -> Complex64 {
    UnitGain::root(j, 3).to_complex()
}

fn basis(m: usize) -> Vec<Vec<Complex64>> {
    (0..m).map(|i| (0..m).map(|r| re(if r == i { 1.0 } else { 0.0 })).collect()).collect()
}

fn system(m: usize, cols: Vec<Vec<Complex64>>, alpha: f64) -> Result<LineSystem> {
    LineSystem::from_columns(m, &cols, Some(alpha))
}

/// Four equiangular lines in `C²`.
pub fn sic2() -> Result<LineSystem> {
    let s2 = 2f64.sqrt();
    let mut cols = vec![vec![re(1.0), re(0.0)]];
    for j in 0..3 {
        cols.push(vec![re(1.0), cube(j) * s2]);
    }
    system(2, cols, 1.0 / 3f64.sqrt())
}

/// Nine equiangular lines in `C³`.
pub fn sic3() -> Result<LineSystem> {
    let w = UnitGain::omega().to_complex();
    let wb = w.conj();
    let z = re(0.0);
    let one = re(1.0);
    let rows = [
        [one, z, w, one, z, -one, one, z, wb],
        [w, one, z, -one, one, z, wb, one, z],
        [z, w, one, z, -one, one, z, wb, one],
    ];
    let cols = (0..9).map(|c| rows.iter().map(|r| r[c]).collect()).collect();
    system(3, cols, 0.5)
}

/// `t ∈ {2, 3}` mutually unbiased bases in `C²`.
pub fn mub_c2(t: usize) -> Result<LineSystem> {
    if !(2..=3).contains(&t) {
        return Err(Error::BadParam(format!("MUB_C2 needs t in 2..=3, got {t}")));
    }
    let mut cols = basis(2);
    // (1, i^j): j = 0, 2 form one basis, j = 1, 3 the next
    for j in [0, 2, 1, 3].into_iter().take(2 * (t - 1)) {
        cols.push(vec![re(1.0), UnitGain::root(j, 4).to_complex()]);
    }
    system(2, cols, 1.0 / 2f64.sqrt())
}

/// Column indices of the bases in [`mub_c3`]`(t)`.
pub fn mub_c3_bases(t: usize) -> Vec<Vec<usize>> {
    (0..t).map(|b| (3 * b..3 * b + 3).collect()).collect()
}

/// `t ∈ {2, 3, 4}` mutually unbiased bases in `C³`.
pub fn mub_c3(t: usize) -> Result<LineSystem> {
    if !(2..=4).contains(&t) {
        return Err(Error::BadParam(format!("MUB_C3 needs t in 2..=4, got {t}")));
    }
    let mut cols = basis(3);
    for c in 0..(t as i64 - 1) {
        for j in 0..3 {
            let h = (c - j).rem_euclid(3);
            cols.push(vec![re(1.0), cube(j), cube(h)]);
        }
    }
    system(3, cols, 1.0 / 3f64.sqrt())
}

/// A pair of mutually unbiased bases in `C⁴` with a free unit `x`.
pub fn mub_c4_pair(x: UnitGain) -> Result<LineSystem> {
    let x = x.to_complex();
    let o = re(1.0);
    let mut cols = basis(4);
    cols.push(vec![o, o, o, -o]);
    cols.push(vec![o, o, -o, o]);
    cols.push(vec![o, -o, x, x]);
    cols.push(vec![-o, o, x, x]);
    system(4, cols, 0.5)
}

/// Six equiangular lines in `C³` forming a tight frame for any unit `z`.
pub fn etf6(z: UnitGain) -> Result<LineSystem> {
    let s5 = 5f64.sqrt();
    let tau = re(((5.0 + s5) / 10.0).sqrt());
    let sigma = re(((5.0 - s5) / 10.0).sqrt());
    let z = z.to_complex();
    let zero = re(0.0);
    let cols = vec![
        vec![zero, tau, sigma],
        vec![sigma, zero, tau],
        vec![tau * z, sigma, zero],
        vec![zero, tau, -sigma],
        vec![-sigma, zero, tau],
        vec![tau * z, -sigma, zero],
    ];
    system(3, cols, 1.0 / s5)
}

/// The lines `e_h − e_j`, `h < j`, written in an orthonormal basis of the sum-zero hyperplane of `R^m`.
pub fn simplex_diff(m: usize) -> Result<LineSystem> {
    if m < 3 {
        return Err(Error::BadParam(format!("SimplexDiff needs m >= 3, got {m}")));
    }
    // Helmert basis: b_r = (1, …, 1, −r, 0, …)/√(r(r+1)) with r ones, r = 1..m−1.
    let helmert = |r: usize, i: usize| -> f64 {
        let s = ((r * (r + 1)) as f64).sqrt();
        match i.cmp(&r) {
            std::cmp::Ordering::Less => 1.0 / s,
            std::cmp::Ordering::Equal => -(r as f64) / s,
            std::cmp::Ordering::Greater => 0.0,
        }
    };
    let mut cols = Vec::new();
    for h in 0..m {
        for j in h + 1..m {
            cols.push((1..m).map(|r| re(helmert(r, h) - helmert(r, j))).collect());
        }
    }
    system(m - 1, cols, 0.5)
}

fn codeword_vector(c: &[Gf4; 6]) -> Vec<Complex64> {
    c.iter().map(|x| x.to_gain().map_or(re(0.0), UnitGain::to_complex)).collect()
}

/// The fifteen projective weight-4 hexacodewords, scaled to unit norm.
pub fn hexacode_lines() -> Result<LineSystem> {
    let cols = projective_weight4().iter().map(codeword_vector).collect();
    system(6, cols, 0.5)
}

/// The 40 lines of the Witting polytope in `C⁴`.
pub fn witting() -> Result<LineSystem> {
    let o = re(1.0);
    let z = re(0.0);
    let mut cols = basis(4);
    for j in 0..3 {
        for h in 0..3 {
            let (a, b) = (cube(j), cube(h));
            cols.push(vec![o, z, -a, -b]);
            cols.push(vec![o, -a, z, b]);
            cols.push(vec![o, a, b, z]);
            cols.push(vec![z, o, -a, b]);
        }
    }
    system(4, cols, 1.0 / 3f64.sqrt())
}

/// The 45 lines of the ST33 reflection group in `C⁵`.
///
/// The phase on the last coordinate of the 27-vector family is `φ^(j1+j2+j3)`; the opposite sign
/// gives inner products of modulus `1/(2√3)`.
pub fn st33() -> Result<LineSystem> {
    let mut cols = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            for j in 0..3 {
                let mut v = vec![re(0.0); 5];
                v[a] = re(1.0);
                v[b] = -cube(j);
                cols.push(v);
            }
        }
    }
    let s2 = 2f64.sqrt();
    for j1 in 0..3 {
        for j2 in 0..3 {
            for j3 in 0..3 {
                cols.push(vec![re(1.0), cube(j1), cube(j2), cube(j3), cube(j1 + j2 + j3) * s2]);
            }
        }
    }
    system(5, cols, 0.5)
}

/// The 126 Coxeter–Todd lines in `C⁶` from the 2-, 3- or 4-base description.
pub fn coxeter_todd(base: usize) -> Result<LineSystem> {
    let z = re(0.0);
    let mut cols: Vec<Vec<Complex64>> = Vec::new();
    match base {
        2 => {
            for c in projective_weight4() {
                let v = codeword_vector(&c);
                let support: Vec<usize> = (0..6).filter(|&i| !c[i].is_zero()).collect();
                // sign flips on the last three support positions; the first stays positive
                for mask in 0..8u32 {
                    let mut w = v.clone();
                    for (bit, &pos) in support[1..].iter().enumerate() {
                        if mask >> bit & 1 == 1 {
                            w[pos] = -w[pos];
                        }
                    }
                    cols.push(w);
                }
            }
            cols.extend(basis(6));
        }
        3 => {
            let is3 = Complex64::new(0.0, 3f64.sqrt());
            for a in 0..6 {
                for b in a + 1..6 {
                    for c in 1..=3 {
                        let mut v = vec![z; 6];
                        v[a] = is3;
                        v[b] = -is3 * cube(c);
                        cols.push(v);
                    }
                }
            }
            for j1 in 0..3 {
                for j2 in 0..3 {
                    for j3 in 0..3 {
                        for j4 in 0..3 {
                            cols.push(vec![
                                re(1.0),
                                cube(j1),
                                cube(j2),
                                cube(j3),
                                cube(j4),
                                cube(-j1 - j2 - j3 - j4),
                            ]);
                        }
                    }
                }
            }
        }
        4 => {
            let is3 = Complex64::new(0.0, 3f64.sqrt());
            for pos in 0..6 {
                for mask in 0..16u32 {
                    let mut signs: Vec<f64> = (0..4).map(|b| if mask >> b & 1 == 1 { -1.0 } else { 1.0 }).collect();
                    signs.push(signs.iter().product());
                    let mut v = Vec::with_capacity(6);
                    let mut s = signs.into_iter();
                    for i in 0..6 {
                        v.push(if i == pos { is3 } else { re(s.next().unwrap()) });
                    }
                    cols.push(v);
                }
            }
            for a in 0..6 {
                for b in a + 1..6 {
                    for sign in [1.0, -1.0] {
                        let mut v = vec![z; 6];
                        v[a] = re(2.0);
                        v[b] = re(2.0 * sign);
                        cols.push(v);
                    }
                }
            }
        }
        other => return Err(Error::BadParam(format!("Coxeter-Todd base must be 2, 3 or 4, got {other}"))),
    }
    system(6, cols, 0.5)
}

/// Builds a named line system; parameters are `t`, `x`/`z`, `m`, `base` as applicable.
pub fn geometry_lines(name: &str, params: &Params) -> Result<LineSystem> {
    match name {
        "SIC2" => params.only(&[]).and_then(|_| sic2()),
        "SIC3" => params.only(&[]).and_then(|_| sic3()),
        "MUB_C2" => {
            params.only(&["t"])?;
            mub_c2(int_param(params, "t", 3)?)
        }
        "MUB_C3" => {
            params.only(&["t"])?;
            mub_c3(int_param(params, "t", 4)?)
        }
        "MUB_C4_pair" => {
            params.only(&["x"])?;
            mub_c4_pair(params.gain_or("x", UnitGain::ONE)?)
        }
        "ETF6" => {
            params.only(&["z"])?;
            etf6(params.gain_or("z", UnitGain::ONE)?)
        }
        "SimplexDiff" => {
            params.only(&["m"])?;
            simplex_diff(int_param(params, "m", 5)?)
        }
        "Hexacode" => params.only(&[]).and_then(|_| hexacode_lines()),
        "Witting" => params.only(&[]).and_then(|_| witting()),
        "ST33" => params.only(&[]).and_then(|_| st33()),
        "CoxeterTodd" => {
            params.only(&["base"])?;
            coxeter_todd(int_param(params, "base", 2)?)
        }
        other => Err(Error::UnknownName(other.to_string())),
    }
}

fn int_param(params: &Params, name: &str, default: i64) -> Result<usize> {
    let v = params.int_or(name, default)?;
    usize::try_from(v).map_err(|_| Error::BadParam(format!("{name} must be non-negative")))
}

#[cfg(test)]
mod tests {
    use super::super::{angle_profile, tightness_check, AngleClass};
    use super::*;

    fn assert_profile(lines: &LineSystem, class: AngleClass) {
        let p = angle_profile(lines);
        match (p.class, class) {
            (AngleClass::Equiangular(a), AngleClass::Equiangular(b)) | (AngleClass::ZeroAlpha(a), AngleClass::ZeroAlpha(b)) => {
                assert!((a - b).abs() < 1e-10, "{p:?}")
            }
            (a, b) => assert_eq!(a, b),
        }
    }

    #[test]
    fn counts_and_angles() {
        let r3 = 1.0 / 3f64.sqrt();
        let cases: Vec<(LineSystem, usize, usize, AngleClass)> = vec![
            (sic2().unwrap(), 2, 4, AngleClass::Equiangular(r3)),
            (sic3().unwrap(), 3, 9, AngleClass::Equiangular(0.5)),
            (mub_c2(3).unwrap(), 2, 6, AngleClass::ZeroAlpha(1.0 / 2f64.sqrt())),
            (mub_c3(4).unwrap(), 3, 12, AngleClass::ZeroAlpha(r3)),
            (mub_c4_pair(UnitGain::root(1, 5)).unwrap(), 4, 8, AngleClass::ZeroAlpha(0.5)),
            (etf6(UnitGain::I).unwrap(), 3, 6, AngleClass::Equiangular(1.0 / 5f64.sqrt())),
            (simplex_diff(5).unwrap(), 4, 10, AngleClass::ZeroAlpha(0.5)),
            (hexacode_lines().unwrap(), 6, 15, AngleClass::ZeroAlpha(0.5)),
            (witting().unwrap(), 4, 40, AngleClass::ZeroAlpha(r3)),
            (st33().unwrap(), 5, 45, AngleClass::ZeroAlpha(0.5)),
            (coxeter_todd(2).unwrap(), 6, 126, AngleClass::ZeroAlpha(0.5)),
            (coxeter_todd(3).unwrap(), 6, 126, AngleClass::ZeroAlpha(0.5)),
            (coxeter_todd(4).unwrap(), 6, 126, AngleClass::ZeroAlpha(0.5)),
        ];
        for (lines, m, n, class) in cases {
            assert_eq!((lines.dim(), lines.count()), (m, n));
            assert_profile(&lines, class);
            assert!(tightness_check(&lines).is_tight);
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(geometry_lines("Nope", &Params::new()), Err(Error::UnknownName(_))));
        assert!(matches!(coxeter_todd(5), Err(Error::BadParam(_))));
        assert!(matches!(mub_c3(5), Err(Error::BadParam(_))));
        assert!(geometry_lines("SIC2", &Params::new().with_int("t", 2)).is_err());
    }
}
