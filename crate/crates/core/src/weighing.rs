//! Unit weighing matrices (`WW* = kI`) and the bipartite double.

use num_complex::Complex64;

use crate::cyclotomic::RootSum;
use crate::error::{Error, Result};
use crate::gain::UnitGain;
use crate::graph::GainGraph;

/// Square matrix over `T ∪ {0}` with `WW* = kI`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeighingMatrix {
    entries: Vec<Vec<Option<UnitGain>>>,
    weight: usize,
}

/// Small integer codes for literal matrices; `x` is the free unit parameter.
pub(crate) fn decode(code: i8, x: UnitGain) -> Option<UnitGain> {
    let g = match code.abs() {
        0 => return None,
        1 => UnitGain::ONE,
        2 => UnitGain::I,
        3 => x,
        4 => x.conj(),
        5 => UnitGain::phi(),
        6 => UnitGain::phi().conj(),
        7 => UnitGain::gamma(),
        8 => UnitGain::gamma().conj(),
        _ => unreachable!("unknown literal code {code}"),
    };
    Some(if code < 0 { -g } else { g })
}

pub(crate) fn decode_rows<const N: usize>(rows: &[[i8; N]], x: UnitGain) -> Vec<Vec<Option<UnitGain>>> {
    rows.iter().map(|r| r.iter().map(|&c| decode(c, x)).collect()).collect()
}

impl WeighingMatrix {
    /// Validates `WW* = kI`: exactly when all entries are exact, within `1e-9` otherwise.
    pub fn new(entries: Vec<Vec<Option<UnitGain>>>) -> Result<WeighingMatrix> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::NotAWeighingMatrix);
        }
        let weight = entries[0].iter().flatten().count();
        let w = WeighingMatrix { entries, weight };
        let ok = match w.exact_gram_is_scalar() {
            Some(ok) => ok,
            None => w.numeric_residual() <= 1e-9,
        };
        if weight == 0 || !ok {
            return Err(Error::NotAWeighingMatrix);
        }
        Ok(w)
    }

    pub fn order(&self) -> usize {
        self.entries.len()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn entry(&self, r: usize, c: usize) -> Option<UnitGain> {
        self.entries[r][c]
    }

    pub fn entries(&self) -> &[Vec<Option<UnitGain>>] {
        &self.entries
    }

    /// `Some(true)` when `WW* = kI` holds in exact cyclotomic arithmetic; `None` for numeric entries.
    pub fn exact_gram_is_scalar(&self) -> Option<bool> {
        let order = RootSum::common_order(self.entries.iter().flatten().flatten())?;
        let n = self.order();
        for i in 0..n {
            for j in i..n {
                let mut s = RootSum::zero(order);
                for l in 0..n {
                    if let (Some(a), Some(b)) = (self.entries[i][l], self.entries[j][l]) {
                        s.add_gain(a * b.conj(), 1);
                    }
                }
                let ok = if i == j { s.as_integer() == Some(self.weight as i64) } else { s.is_zero() };
                if !ok {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// `‖WW* − kI‖_F` in floating point.
    pub fn numeric_residual(&self) -> f64 {
        let n = self.order();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(if i == j { -(self.weight as f64) } else { 0.0 }, 0.0);
                for l in 0..n {
                    if let (Some(a), Some(b)) = (self.entries[i][l], self.entries[j][l]) {
                        s += a.to_complex() * b.to_complex().conj();
                    }
                }
                sum += s.norm_sqr();
            }
        }
        sum.sqrt()
    }

    /// True when the bipartite support pattern is connected.
    pub fn is_irreducible(&self) -> bool {
        ig(self).is_connected()
    }

    /// Hermitian with zero diagonal, i.e. itself a gain matrix.
    pub fn is_graphical(&self) -> bool {
        GainGraph::from_entries(&self.entries).is_ok()
    }

    /// The matrix read as a gain graph; fails unless Hermitian with zero diagonal.
    pub fn as_gain_graph(&self) -> Result<GainGraph> {
        GainGraph::from_entries(&self.entries)
    }
}

/// Circulant matrix with row `i`, column `j` equal to `first_row[(j - i) mod n]`.
pub fn cm_weighing(first_row: &[Option<UnitGain>]) -> Result<WeighingMatrix> {
    let n = first_row.len();
    WeighingMatrix::new((0..n).map(|i| (0..n).map(|j| first_row[(j + n - i) % n]).collect()).collect())
}

/// The named small weighing matrices; `Z` takes the unit parameter `x`.
pub fn named_weighing(name: &str, x: Option<UnitGain>) -> Result<WeighingMatrix> {
    let x = x.unwrap_or(UnitGain::ONE);
    let phi = Some(UnitGain::phi());
    let one = Some(UnitGain::ONE);
    match name {
        "W2" => WeighingMatrix::new(decode_rows(&[[1, 1], [1, -1]], x)),
        "W3" => WeighingMatrix::new(decode_rows(&[[1, 1, 1], [1, 5, 6], [1, 6, 5]], x)),
        "W4" => WeighingMatrix::new(decode_rows(&[[0, 1, 1, 1], [1, 0, 2, -2], [1, -2, 0, 2], [1, 2, -2, 0]], x)),
        "W5" => cm_weighing(&[None, one, phi, phi, one]),
        "W7" => cm_weighing(&[Some(UnitGain::NEG_ONE), one, one, None, one, None, None]),
        "Z" => WeighingMatrix::new(decode_rows(
            &[
                [1, 1, 1, 1, 1, 0],
                [1, -4, -1, 4, 0, -3],
                [1, -1, 3, 0, -3, 3],
                [1, 4, 0, -4, -1, -3],
                [1, 0, -3, -1, 3, 3],
                [0, 4, -4, 4, -4, 1],
            ],
            x,
        )),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

/// The bipartite double `[[0, W], [W*, 0]]`: rows are vertices `0..n`, columns `n..2n`.
pub fn ig(w: &WeighingMatrix) -> GainGraph {
    let n = w.order();
    let edges = (0..n).flat_map(|r| (0..n).filter_map(move |c| w.entry(r, c).map(|g| (r, n + c, g))));
    GainGraph::build(2 * n, edges).expect("bipartite double is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_matrices_are_weighing() {
        for (name, k) in [("W2", 2), ("W3", 3), ("W4", 3), ("W5", 4), ("W7", 4), ("Z", 5)] {
            let w = named_weighing(name, None).unwrap();
            assert_eq!(w.weight(), k, "{name}");
            assert_eq!(w.exact_gram_is_scalar(), Some(true), "{name}");
            assert!(w.numeric_residual() < 1e-12, "{name}");
        }
        assert_eq!(named_weighing("W6", None), Err(Error::UnknownName("W6".into())));
    }

    #[test]
    fn z_is_weighing_for_any_unit() {
        for x in [UnitGain::I, UnitGain::root(3, 7), UnitGain::from_angle(0.7)] {
            let w = named_weighing("Z", Some(x)).unwrap();
            assert_eq!(w.weight(), 5);
        }
        assert!(!named_weighing("Z", Some(UnitGain::ONE)).unwrap().is_graphical());
    }

    #[test]
    fn circulants() {
        let w5 = named_weighing("W5", None).unwrap();
        assert_eq!(w5.entry(1, 2), Some(UnitGain::ONE));
        assert_eq!(w5.entry(1, 0), Some(UnitGain::ONE));
        let one = Some(UnitGain::ONE);
        assert_eq!(cm_weighing(&[None, one, one]), Err(Error::NotAWeighingMatrix));
        assert_eq!(cm_weighing(&[None, one]).unwrap().weight(), 1);
    }

    #[test]
    fn w4_is_graphical() {
        let w4 = named_weighing("W4", None).unwrap();
        assert!(w4.is_graphical());
        assert!(!named_weighing("W2", None).unwrap().is_graphical());
    }

    #[test]
    fn example_b_is_not_graphical() {
        let b = WeighingMatrix::new(decode_rows(&[[1, 1, 1, 0], [1, -1, 0, 1], [1, 0, -1, -1], [0, 1, -1, 1]], UnitGain::ONE))
            .unwrap();
        assert_eq!(b.weight(), 3);
        assert!(!b.is_graphical());
        let g = ig(&b);
        assert_eq!(g.n(), 8);
        assert_eq!(g.structure_degree(), Some(3));
    }
}
