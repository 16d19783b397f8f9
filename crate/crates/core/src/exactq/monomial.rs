use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `coeff · q^power` with a rational coefficient and a rational exponent.
///
/// Exact-engine parameters (`x`, `y`, `z` of the bilateral series) are
/// monomials so that q-adic convergence can be arranged by the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMonomial {
    pub coeff: BigRational,
    pub power: Ratio<i64>,
}

impl QMonomial {
    pub fn new(coeff: BigRational, power: Ratio<i64>) -> Self {
        QMonomial { coeff, power }
    }

    pub fn constant(coeff: BigRational) -> Self {
        QMonomial { coeff, power: Ratio::zero() }
    }

    pub fn q_power(power: Ratio<i64>) -> Self {
        QMonomial { coeff: BigRational::one(), power }
    }

    pub fn zero() -> Self {
        Self::constant(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Self {
        QMonomial { coeff: &self.coeff * &other.coeff, power: self.power + other.power }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        QMonomial { coeff: &self.coeff * c, power: self.power }
    }

    pub fn shift(&self, power: Ratio<i64>) -> Self {
        QMonomial { coeff: self.coeff.clone(), power: self.power + power }
    }

    pub fn neg(&self) -> Self {
        QMonomial { coeff: -&self.coeff, power: self.power }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DomainError("reciprocal of a zero monomial".into()));
        }
        Ok(QMonomial { coeff: self.coeff.recip(), power: -self.power })
    }

    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 && self.is_zero() {
            return Err(Error::DomainError("negative power of a zero monomial".into()));
        }
        let c = if n >= 0 {
            num_traits::pow(self.coeff.clone(), n as usize)
        } else {
            num_traits::pow(self.coeff.recip(), (-n) as usize)
        };
        Ok(QMonomial { coeff: c, power: self.power * n })
    }

    /// Exponent as an integer index on a grid with denominator `denom`.
    pub fn grid_index(&self, denom: u32) -> Result<i64> {
        let scaled = self.power * denom as i64;
        if !scaled.is_integer() {
            return Err(Error::IncompatibleGrid { from: *self.power.denom() as u32, to: denom });
        }
        Ok(scaled.to_integer())
    }

    /// Smallest denominator on which the exponent is integral.
    pub fn min_denom(&self) -> u32 {
        *self.power.denom() as u32
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power.is_zero() || self.coeff.is_zero() {
            return write!(f, "{}", self.coeff);
        }
        if !self.coeff.is_one() {
            write!(f, "{}*", self.coeff)?;
        }
        if self.power.is_one() {
            write!(f, "q")
        } else if self.power.is_integer() {
            write!(f, "q^{}", self.power)
        } else {
            write!(f, "q^({})", self.power)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n.trim().parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_exponent(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    match s.split_once('/') {
        Some((n, d)) => {
            let d = d.trim().parse::<i64>().ok()?;
            if d == 0 {
                return None;
            }
            Some(Ratio::new(n.trim().parse().ok()?, d))
        }
        None => Some(Ratio::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for QMonomial {
    type Err = Error;

    /// Accepts `c`, `q`, `-q`, `q^e`, `c*q`, `c*q^e` and `c*q^(n/d)` with
    /// rational `c` written as `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameter { key: s.to_string(), reason: "expected c, c*q or c*q^e".into() };
        let t = s.trim();
        let Some(qpos) = t.find('q') else {
            return parse_rational(t).map(QMonomial::constant).ok_or_else(bad);
        };
        let (head, tail) = t.split_at(qpos);
        let head = head.trim().trim_end_matches('*').trim();
        let coeff = match head {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            h => parse_rational(h).ok_or_else(bad)?,
        };
        let rest = tail[1..].trim();
        let power = if rest.is_empty() {
            Ratio::one()
        } else {
            let e = rest.strip_prefix('^').ok_or_else(bad)?;
            parse_exponent(e).ok_or_else(bad)?
        };
        Ok(QMonomial { coeff, power })
    }
}

impl QMonomial {
    /// Numeric magnitude bound helper: `|coeff|` as an `f64`.
    pub fn abs_coeff_f64(&self) -> f64 {
        let c = self.coeff.abs();
        let n: f64 = c.numer().to_string().parse().unwrap_or(f64::INFINITY);
        let d: f64 = c.denom().to_string().parse().unwrap_or(f64::INFINITY);
        n / d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::frac;

    #[test]
    fn parse_forms() {
        let m: QMonomial = "1/3*q".parse().unwrap();
        assert_eq!(m, QMonomial::new(frac(1, 3), Ratio::one()));
        let m: QMonomial = "-2*q^(1/2)".parse().unwrap();
        assert_eq!(m, QMonomial::new(frac(-2, 1), Ratio::new(1, 2)));
        let m: QMonomial = "-q^-1".parse().unwrap();
        assert_eq!(m, QMonomial::new(frac(-1, 1), Ratio::from_integer(-1)));
        let m: QMonomial = "7/5".parse().unwrap();
        assert_eq!(m, QMonomial::constant(frac(7, 5)));
        assert!("1/0".parse::<QMonomial>().is_err());
        assert!("2*x".parse::<QMonomial>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["1/3*q", "-2*q^(1/2)", "q^3", "5", "-1/7*q^(-3/4)"] {
            let m: QMonomial = s.parse().unwrap();
            assert_eq!(m.to_string().parse::<QMonomial>().unwrap(), m);
        }
    }

    #[test]
    fn grid_index_requires_divisibility() {
        let m = QMonomial::new(frac(1, 1), Ratio::new(3, 4));
        assert_eq!(m.grid_index(8).unwrap(), 6);
        assert!(m.grid_index(2).is_err());
    }
}
