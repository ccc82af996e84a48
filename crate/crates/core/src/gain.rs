//! Unit gains: elements of the circle group, kept exact when they are roots of unity.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

/// Largest allowed deviation of `|z|` from 1 for a numeric gain.
pub const UNIT_TOL: f64 = 1e-12;

/// A complex number of modulus one.
///
/// `Exact { p, q }` is `exp(2πi·p/q)` in lowest terms with `0 <= p < q`;
/// arithmetic between exact gains never leaves the exact variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UnitGain {
    Exact { p: u64, q: u64 },
    Numeric { re: f64, im: f64 },
}

impl UnitGain {
    pub const ONE: UnitGain = UnitGain::Exact { p: 0, q: 1 };
    pub const NEG_ONE: UnitGain = UnitGain::Exact { p: 1, q: 2 };
    pub const I: UnitGain = UnitGain::Exact { p: 1, q: 4 };
    pub const NEG_I: UnitGain = UnitGain::Exact { p: 3, q: 4 };

    /// `exp(2πi·p/q)`, reduced to lowest terms. Panics if `q == 0`.
    pub fn root(p: i64, q: u64) -> UnitGain {
        assert!(q > 0, "root of unity needs a positive denominator");
        let p = p.rem_euclid(q as i64) as u64;
        let g = p.gcd(&q);
        UnitGain::Exact { p: p / g, q: q / g }
    }

    /// Primitive third root of unity.
    pub fn phi() -> UnitGain {
        UnitGain::root(1, 3)
    }

    /// Primitive sixth root of unity.
    pub fn omega() -> UnitGain {
        UnitGain::root(1, 6)
    }

    /// Primitive eighth root of unity.
    pub fn gamma() -> UnitGain {
        UnitGain::root(1, 8)
    }

    /// Numeric gain; rejects values whose modulus is off by more than [`UNIT_TOL`].
    pub fn numeric(z: Complex64) -> Result<UnitGain> {
        let modulus = z.norm();
        if !modulus.is_finite() || (modulus - 1.0).abs() > UNIT_TOL {
            return Err(Error::NonUnitGain { modulus });
        }
        Ok(UnitGain::Numeric { re: z.re, im: z.im })
    }

    /// Projects a nonzero complex number onto the circle.
    pub fn from_direction(z: Complex64) -> Result<UnitGain> {
        let modulus = z.norm();
        if !(modulus.is_finite() && modulus > 0.0) {
            return Err(Error::NonUnitGain { modulus });
        }
        Ok(UnitGain::Numeric { re: z.re / modulus, im: z.im / modulus })
    }

    /// `exp(i·theta)` as a numeric gain.
    pub fn from_angle(theta: f64) -> UnitGain {
        UnitGain::Numeric { re: theta.cos(), im: theta.sin() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitGain::Exact { .. })
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            UnitGain::Exact { p, q } => {
                // Hit the axes exactly so that real gains stay real.
                match (p * 4) % q == 0 {
                    true => match (p * 4) / q {
                        0 => Complex64::new(1.0, 0.0),
                        1 => Complex64::new(0.0, 1.0),
                        2 => Complex64::new(-1.0, 0.0),
                        _ => Complex64::new(0.0, -1.0),
                    },
                    false => Complex64::from_polar(1.0, TAU * p as f64 / q as f64),
                }
            }
            UnitGain::Numeric { re, im } => Complex64::new(re, im),
        }
    }

    /// Argument in turns, in `[0, 1)`.
    pub fn turns(self) -> f64 {
        match self {
            UnitGain::Exact { p, q } => p as f64 / q as f64,
            UnitGain::Numeric { re, im } => (im.atan2(re) / TAU).rem_euclid(1.0),
        }
    }

    pub fn conj(self) -> UnitGain {
        match self {
            UnitGain::Exact { p, q } => UnitGain::root(-(p as i64), q),
            UnitGain::Numeric { re, im } => UnitGain::Numeric { re, im: -im },
        }
    }

    /// Multiplicative inverse; equal to the conjugate on the circle.
    pub fn inv(self) -> UnitGain {
        self.conj()
    }

    pub fn pow(self, e: i64) -> UnitGain {
        match self {
            UnitGain::Exact { p, q } => {
                let p = (p as i128 * e as i128).rem_euclid(q as i128) as i64;
                UnitGain::root(p, q)
            }
            UnitGain::Numeric { .. } => {
                let z = self.to_complex().powi(e as i32);
                UnitGain::from_direction(z).expect("power of a unit is a unit")
            }
        }
    }

    /// Equality: exact when both sides are exact, within `tol` otherwise.
    pub fn approx_eq(self, other: UnitGain, tol: f64) -> bool {
        match (self, other) {
            (UnitGain::Exact { p: a, q: b }, UnitGain::Exact { p: c, q: d }) => a == c && b == d,
            _ => (self.to_complex() - other.to_complex()).norm() <= tol,
        }
    }

    /// Nearest `exp(2πi·p/q)` with `q <= max_q`, if it lies within `max_angle` radians.
    pub fn nearest_root(self, max_q: u64, max_angle: f64) -> Option<UnitGain> {
        if let UnitGain::Exact { q, .. } = self {
            if q <= max_q {
                return Some(self);
            }
        }
        let t = self.turns();
        let mut best: Option<(f64, UnitGain)> = None;
        for q in 1..=max_q.max(1) {
            let p = (t * q as f64).round() as i64;
            let d = (t - p as f64 / q as f64).abs() * TAU;
            if best.is_none_or(|(bd, _)| d < bd - 1e-15) {
                best = Some((d, UnitGain::root(p, q)));
            }
        }
        best.filter(|(d, _)| *d <= max_angle).map(|(_, g)| g)
    }
}

impl Default for UnitGain {
    fn default() -> Self {
        UnitGain::ONE
    }
}

impl Mul for UnitGain {
    type Output = UnitGain;

    fn mul(self, rhs: UnitGain) -> UnitGain {
        match (self, rhs) {
            (UnitGain::Exact { p: a, q: b }, UnitGain::Exact { p: c, q: d }) => {
                let l = b.lcm(&d);
                UnitGain::root((a * (l / b) + c * (l / d)) as i64, l)
            }
            _ => {
                let z = self.to_complex() * rhs.to_complex();
                UnitGain::from_direction(z).expect("product of units is a unit")
            }
        }
    }
}

impl Neg for UnitGain {
    type Output = UnitGain;

    fn neg(self) -> UnitGain {
        self * UnitGain::NEG_ONE
    }
}

impl fmt::Display for UnitGain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitGain::Exact { p, q } => write!(f, "rot {p}/{q}"),
            UnitGain::Numeric { re, im } => write!(f, "num {re:.16e} {im:.16e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let i = UnitGain::I;
        assert_eq!(i * i, UnitGain::NEG_ONE);
        assert_eq!(i * i.conj(), UnitGain::ONE);
        assert_eq!(UnitGain::phi() * UnitGain::phi() * UnitGain::phi(), UnitGain::ONE);
        assert_eq!(UnitGain::omega() * UnitGain::omega(), UnitGain::phi());
        assert_eq!(UnitGain::gamma().pow(2), UnitGain::I);
        assert_eq!(UnitGain::root(6, 8), UnitGain::Exact { p: 3, q: 4 });
        assert_eq!(UnitGain::root(-1, 3), UnitGain::Exact { p: 2, q: 3 });
    }

    #[test]
    fn one_is_identity() {
        for g in [UnitGain::phi(), UnitGain::gamma(), UnitGain::from_angle(0.3)] {
            assert!((UnitGain::ONE * g).approx_eq(g, 1e-15));
        }
    }

    #[test]
    fn numeric_rejects_non_units() {
        assert!(matches!(
            UnitGain::numeric(Complex64::new(2.0, 0.0)),
            Err(Error::NonUnitGain { .. })
        ));
        assert!(UnitGain::numeric(Complex64::new(0.6, 0.8)).is_ok());
    }

    #[test]
    fn axis_values_are_exact() {
        assert_eq!(UnitGain::NEG_ONE.to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(UnitGain::I.to_complex(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn snapping_finds_low_order_roots() {
        let near = UnitGain::from_angle(TAU / 3.0 + 1e-5);
        assert_eq!(near.nearest_root(24, 1e-3), Some(UnitGain::phi()));
        let irrational = UnitGain::from_angle(1.0);
        assert_eq!(irrational.nearest_root(24, 1e-3), None);
        assert_eq!(UnitGain::gamma().nearest_root(24, 1e-3), Some(UnitGain::gamma()));
    }
}
