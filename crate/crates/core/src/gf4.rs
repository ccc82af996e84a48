//! Arithmetic in GF(4) and the hexacode.

use std::ops::{Add, Mul};

use crate::gain::UnitGain;

/// Element of `GF(4) = {0, 1, w, w²}` with `w² = w + 1`, stored as two bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf4(u8);

impl Gf4 {
    pub const ZERO: Gf4 = Gf4(0);
    pub const ONE: Gf4 = Gf4(1);
    pub const W: Gf4 = Gf4(2);
    pub const W2: Gf4 = Gf4(3);

    pub const ALL: [Gf4; 4] = [Gf4::ZERO, Gf4::ONE, Gf4::W, Gf4::W2];

    /// Discrete logarithm to base `w` for nonzero elements.
    fn log(self) -> Option<u8> {
        match self.0 {
            1 => Some(0),
            2 => Some(1),
            3 => Some(2),
            _ => None,
        }
    }

    fn exp(e: u8) -> Gf4 {
        [Gf4::ONE, Gf4::W, Gf4::W2][(e % 3) as usize]
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The multiplicative group mapped onto the complex cube roots of unity.
    pub fn to_gain(self) -> Option<UnitGain> {
        self.log().map(|e| UnitGain::root(e as i64, 3))
    }
}

impl Add for Gf4 {
    type Output = Gf4;

    fn add(self, rhs: Gf4) -> Gf4 {
        Gf4(self.0 ^ rhs.0)
    }
}

impl Mul for Gf4 {
    type Output = Gf4;

    fn mul(self, rhs: Gf4) -> Gf4 {
        match (self.log(), rhs.log()) {
            (Some(a), Some(b)) => Gf4::exp(a + b),
            _ => Gf4::ZERO,
        }
    }
}

/// The codeword `[p2, p1, p0, f(1), f(w), f(w²)]` of `f(x) = p2·x² + p1·x + p0`.
pub fn hexacodeword(p2: Gf4, p1: Gf4, p0: Gf4) -> [Gf4; 6] {
    let f = |x: Gf4| p2 * x * x + p1 * x + p0;
    [p2, p1, p0, f(Gf4::ONE), f(Gf4::W), f(Gf4::W2)]
}

/// All 64 hexacodewords.
pub fn hexacode() -> Vec<[Gf4; 6]> {
    let mut out = Vec::with_capacity(64);
    for p2 in Gf4::ALL {
        for p1 in Gf4::ALL {
            for p0 in Gf4::ALL {
                out.push(hexacodeword(p2, p1, p0));
            }
        }
    }
    out
}

/// One weight-4 codeword per 1-dimensional subspace, normalised so the first nonzero entry is 1.
pub fn projective_weight4() -> Vec<[Gf4; 6]> {
    let mut out: Vec<[Gf4; 6]> = hexacode()
        .into_iter()
        .filter(|c| c.iter().filter(|x| !x.is_zero()).count() == 4)
        .filter(|c| c.iter().find(|x| !x.is_zero()) == Some(&Gf4::ONE))
        .collect();
    out.sort();
    out
}
