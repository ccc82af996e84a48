//! Exact integer combinations of roots of unity.
//!
//! An element `Σ c_e ζ^e` of `Z[ζ_L]` is stored by its coefficient vector and
//! compared by reducing modulo the cyclotomic polynomial `Φ_L`.

use num_complex::Complex64;
use num_integer::Integer;

use crate::gain::UnitGain;

/// Integer polynomial, coefficients from the constant term upward.
type Poly = Vec<i64>;

fn trim(p: &mut Poly) {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
}

/// Remainder of `a` modulo a monic divisor.
fn rem_monic(mut a: Poly, divisor: &Poly) -> Poly {
    let dd = divisor.len() - 1;
    trim(&mut a);
    while a.len() > dd && !(a.len() == 1 && a[0] == 0) {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - dd;
        for (i, &c) in divisor.iter().enumerate() {
            a[shift + i] -= lead * c;
        }
        a.pop();
        trim(&mut a);
    }
    a.resize(dd.max(1), 0);
    a
}

/// Exact quotient of `a` by a monic divisor (the division must be exact).
fn div_monic(a: &Poly, divisor: &Poly) -> Poly {
    let dd = divisor.len() - 1;
    let mut rem = a.clone();
    let mut quot = vec![0; a.len().saturating_sub(dd)];
    for shift in (0..quot.len()).rev() {
        let lead = rem[shift + dd];
        quot[shift] = lead;
        for (i, &c) in divisor.iter().enumerate() {
            rem[shift + i] -= lead * c;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// The `l`-th cyclotomic polynomial.
pub fn cyclotomic_poly(l: u64) -> Vec<i64> {
    let mut p: Poly = vec![0; l as usize + 1];
    p[0] = -1;
    p[l as usize] = 1;
    for d in 1..l {
        if l.is_multiple_of(d) {
            p = div_monic(&p, &cyclotomic_poly(d));
        }
    }
    p
}

/// An element of `Z[ζ_order]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSum {
    order: u64,
    coeffs: Vec<i64>,
}

impl RootSum {
    pub fn zero(order: u64) -> RootSum {
        assert!(order > 0);
        RootSum { order, coeffs: vec![0; order as usize] }
    }

    /// Smallest order containing every exact gain in `gains`; `None` if any is numeric.
    pub fn common_order<'a>(gains: impl IntoIterator<Item = &'a UnitGain>) -> Option<u64> {
        let mut l = 1u64;
        for g in gains {
            match g {
                UnitGain::Exact { q, .. } => l = l.lcm(q),
                UnitGain::Numeric { .. } => return None,
            }
        }
        Some(l)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Adds `mult · g`. Panics if `g` is numeric or its order does not divide ours.
    pub fn add_gain(&mut self, g: UnitGain, mult: i64) {
        match g {
            UnitGain::Exact { p, q } => {
                assert!(self.order.is_multiple_of(q), "gain order {q} does not divide {}", self.order);
                let e = (p * (self.order / q)) as usize;
                self.coeffs[e] += mult;
            }
            UnitGain::Numeric { .. } => panic!("numeric gain in exact sum"),
        }
    }

    pub fn add_integer(&mut self, c: i64) {
        self.coeffs[0] += c;
    }

    fn reduced(&self) -> Poly {
        rem_monic(self.coeffs.clone(), &cyclotomic_poly(self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|&c| c == 0)
    }

    /// The value as an integer, when it is one.
    pub fn as_integer(&self) -> Option<i64> {
        let r = self.reduced();
        r[1..].iter().all(|&c| c == 0).then_some(r[0])
    }

    /// Writes the value as `c · g` with `c > 0` an integer and `g` a root of unity.
    pub fn as_scaled_root(&self) -> Option<(i64, UnitGain)> {
        let r = self.reduced();
        if r.iter().all(|&c| c == 0) {
            return None;
        }
        let phi = cyclotomic_poly(self.order);
        for e in 0..self.order {
            let mut basis = vec![0; self.order as usize];
            basis[e as usize] = 1;
            let b = rem_monic(basis, &phi);
            // find c with r == c * b
            let pivot = b.iter().position(|&x| x != 0)?;
            if r[pivot] % b[pivot] != 0 {
                continue;
            }
            let c = r[pivot] / b[pivot];
            if c > 0 && r.iter().zip(&b).all(|(&x, &y)| x == c * y) {
                return Some((c, UnitGain::root(e as i64, self.order)));
            }
        }
        None
    }

    pub fn to_complex(&self) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| UnitGain::root(e as i64, self.order).to_complex() * c as f64)
            .sum()
    }
}
