//! Exact action costs and heuristic estimates.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A non-negative rational cost, stored exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cost(Ratio<i64>);

impl Cost {
    pub const ZERO: Cost = Cost(Ratio::new_raw(0, 1));
    pub const ONE: Cost = Cost(Ratio::new_raw(1, 1));

    pub fn new(numer: i64, denom: i64) -> Cost {
        Cost(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Cost {
        Cost(Ratio::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0 < Ratio::zero()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        self.0 += rhs.0;
    }
}

impl Sub for Cost {
    type Output = Cost;
    fn sub(self, rhs: Cost) -> Cost {
        Cost(self.0 - rhs.0)
    }
}

impl Div<i64> for Cost {
    type Output = Cost;
    fn div(self, rhs: i64) -> Cost {
        Cost(self.0 / rhs)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("invalid cost literal `{0}`")]
pub struct CostParseError(pub String);

impl FromStr for Cost {
    type Err = CostParseError;

    /// Accepts integers (`3`), fractions (`3/2`) and finite decimals (`0.25`).
    fn from_str(s: &str) -> Result<Cost, CostParseError> {
        let err = || CostParseError(s.to_string());
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Cost::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 12 {
                return Err(err());
            }
            let neg = int.starts_with('-');
            let int: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            let denom = 10i64.pow(frac.len() as u32);
            let frac: i64 = frac.parse().map_err(|_| err())?;
            let numer = int.abs() * denom + frac;
            return Ok(Cost::new(if neg { -numer } else { numer }, denom));
        }
        s.parse::<i64>().map(Cost::integer).map_err(|_| err())
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cost, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A heuristic estimate: a finite cost or the dead-end marker, which orders
/// above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Estimate {
    Finite(Cost),
    Infinite,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate::Finite(Cost::ZERO);

    pub fn finite(self) -> Option<Cost> {
        match self {
            Estimate::Finite(c) => Some(c),
            Estimate::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Estimate::Infinite)
    }
}

impl Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        match (self, rhs) {
            (Estimate::Finite(a), Estimate::Finite(b)) => Estimate::Finite(a + b),
            _ => Estimate::Infinite,
        }
    }
}

impl Add<Cost> for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Cost) -> Estimate {
        self + Estimate::Finite(rhs)
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Estimate::Finite(c) => c.fmt(f),
            Estimate::Infinite => f.write_str("inf"),
        }
    }
}
