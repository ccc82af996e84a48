//! Named construction parameters (`x=rot:1/3`, `x=num:0.6,0.8`, `t=4`).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gain::UnitGain;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Gain(UnitGain),
    Int(i64),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(BTreeMap<String, ParamValue>);

impl Params {
    pub fn new() -> Params {
        Params::default()
    }

    pub fn with_gain(mut self, name: &str, g: UnitGain) -> Params {
        self.0.insert(name.to_string(), ParamValue::Gain(g));
        self
    }

    pub fn with_int(mut self, name: &str, v: i64) -> Params {
        self.0.insert(name.to_string(), ParamValue::Int(v));
        self
    }

    pub fn insert(&mut self, name: &str, v: ParamValue) {
        self.0.insert(name.to_string(), v);
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn gain(&self, name: &str) -> Result<Option<UnitGain>> {
        match self.0.get(name) {
            None => Ok(None),
            Some(ParamValue::Gain(g)) => Ok(Some(*g)),
            Some(ParamValue::Int(_)) => Err(Error::BadParam(format!("{name} must be a unit gain"))),
        }
    }

    pub fn gain_or(&self, name: &str, default: UnitGain) -> Result<UnitGain> {
        Ok(self.gain(name)?.unwrap_or(default))
    }

    pub fn int(&self, name: &str) -> Result<Option<i64>> {
        match self.0.get(name) {
            None => Ok(None),
            Some(ParamValue::Int(v)) => Ok(Some(*v)),
            Some(ParamValue::Gain(_)) => Err(Error::BadParam(format!("{name} must be an integer"))),
        }
    }

    pub fn int_or(&self, name: &str, default: i64) -> Result<i64> {
        Ok(self.int(name)?.unwrap_or(default))
    }

    /// Rejects any parameter not in `allowed`.
    pub fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.names().find(|n| !allowed.contains(n)) {
            Some(n) => Err(Error::BadParam(format!("unexpected parameter {n}"))),
            None => Ok(()),
        }
    }

    /// Parses and stores one `name=value` assignment.
    pub fn parse_assignment(&mut self, text: &str) -> Result<()> {
        let (name, value) = text
            .split_once('=')
            .ok_or_else(|| Error::BadParam(format!("expected name=value, got {text:?}")))?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::BadParam(format!("missing name in {text:?}")));
        }
        let v = parse_value(value.trim())?;
        self.insert(name, v);
        Ok(())
    }
}

fn parse_value(value: &str) -> Result<ParamValue> {
    let bad = || Error::BadParam(format!("cannot parse parameter value {value:?}"));
    if let Some(rest) = value.strip_prefix("rot:") {
        let (p, q) = rest.split_once('/').ok_or_else(bad)?;
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(ParamValue::Gain(UnitGain::root(p, q)));
    }
    if let Some(rest) = value.strip_prefix("num:") {
        let (re, im) = rest.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        let z = Complex64::new(re, im);
        let modulus = z.norm();
        if (modulus - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnitGain { modulus });
        }
        return Ok(ParamValue::Gain(UnitGain::from_direction(z)?));
    }
    value.parse().map(ParamValue::Int).map_err(|_| bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        let mut p = Params::new();
        p.parse_assignment("x=rot:1/3").unwrap();
        p.parse_assignment("t = 5").unwrap();
        p.parse_assignment("c=num:0.6,0.8").unwrap();
        assert_eq!(p.gain("x").unwrap(), Some(UnitGain::phi()));
        assert_eq!(p.int("t").unwrap(), Some(5));
        assert!(p.gain("c").unwrap().unwrap().approx_eq(UnitGain::from_direction(Complex64::new(0.6, 0.8)).unwrap(), 1e-15));
        assert!(p.int("x").is_err());
        assert!(p.only(&["x", "t"]).is_err());
        assert!(p.parse_assignment("x=rot:1/0").is_err());
        assert!(matches!(p.parse_assignment("x=num:2,0"), Err(Error::NonUnitGain { .. })));
    }
}
