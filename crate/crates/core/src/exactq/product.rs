use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExactSeries, ExponentGrid};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Factor {
    c: BigRational,
    p: i64,
    inverse: bool,
}

#[derive(Clone, Debug)]
struct Tail {
    c: BigRational,
    start: i64,
    step: i64,
    inverse: bool,
}

/// A product `c q^s · Π (1 − c_j q^(p_j))^(±1)` kept in normalized form:
/// every binomial has `p_j > 0`, so it is a unit power series, and all
/// negative or zero exponents have been folded into the scalar prefix.
///
/// Finite and infinite q-shifted factorials are assembled here and only
/// expanded once the target order is known, which keeps high-valuation terms
/// of a bilateral sum cheap.
#[derive(Clone, Debug)]
pub struct QProduct {
    denom: u32,
    coeff: BigRational,
    shift: i64,
    factors: Vec<Factor>,
    tails: Vec<Tail>,
}

impl QProduct {
    pub fn one(denom: u32) -> Self {
        QProduct { denom, coeff: BigRational::one(), shift: 0, factors: Vec::new(), tails: Vec::new() }
    }

    pub fn denom(&self) -> u32 {
        self.denom
    }

    /// True when one of the numerator factors vanished identically.
    pub fn vanishes(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Index of the leading term (meaningless if the product vanishes).
    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn mul_monomial(&mut self, c: &BigRational, k: i64) {
        self.coeff *= c;
        self.shift += k;
    }

    /// Multiplies by `(1 − c q^(p/D))`, or divides when `inverse` is set.
    pub fn mul_linear(&mut self, c: &BigRational, p: i64, inverse: bool) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match p {
            p if p > 0 => self.factors.push(Factor { c: c.clone(), p, inverse }),
            0 => {
                let s = BigRational::one() - c;
                if s.is_zero() {
                    if inverse {
                        return Err(Error::PolePoch(format!("factor (1 - {c}) in a denominator")));
                    }
                    self.coeff = BigRational::zero();
                } else if inverse {
                    self.coeff /= s;
                } else {
                    self.coeff *= s;
                }
            }
            p => {
                // 1 − c q^p = (−c q^p)(1 − c⁻¹ q^(−p))
                let lead = -c;
                if inverse {
                    self.coeff /= lead;
                    self.shift -= p;
                } else {
                    self.coeff *= lead;
                    self.shift += p;
                }
                self.factors.push(Factor { c: c.recip(), p: -p, inverse });
            }
        }
        Ok(())
    }

    /// Multiplies by `Π_{j≥0} (1 − c q^((start + step·j)/D))`, or divides.
    /// Factors with non-positive exponent are normalized one by one; the rest
    /// stay symbolic until [`QProduct::expand`].
    pub fn mul_infinite(&mut self, c: &BigRational, start: i64, step: i64, inverse: bool) -> Result<()> {
        assert!(step > 0, "infinite product needs a positive step");
        if c.is_zero() {
            return Ok(());
        }
        let mut start = start;
        while start <= 0 {
            self.mul_linear(c, start, inverse)?;
            start += step;
        }
        self.tails.push(Tail { c: c.clone(), start, step, inverse });
        Ok(())
    }

    pub fn mul_product(&mut self, other: &QProduct) {
        assert_eq!(self.denom, other.denom, "products on different grids");
        self.coeff *= &other.coeff;
        self.shift += other.shift;
        self.factors.extend(other.factors.iter().cloned());
        self.tails.extend(other.tails.iter().cloned());
    }

    /// Expands to an [`ExactSeries`] known through index `order - 1`.
    pub fn expand(&self, order: i64) -> ExactSeries {
        let grid = ExponentGrid { denom: self.denom, order };
        if self.vanishes() || self.shift >= order {
            return ExactSeries::zero(grid);
        }
        let rel = order - self.shift;
        let mut s = ExactSeries::constant(self.coeff.clone(), ExponentGrid { denom: self.denom, order: rel });
        // divisions first keep the working vector dense from the start
        for f in self.factors.iter().filter(|f| f.inverse && f.p < rel) {
            s.div_binomial(&f.c, f.p);
        }
        for t in self.tails.iter().filter(|t| t.inverse) {
            let mut p = t.start;
            while p < rel {
                s.div_binomial(&t.c, p);
                p += t.step;
            }
        }
        for f in self.factors.iter().filter(|f| !f.inverse && f.p < rel) {
            s.mul_binomial(&f.c, f.p);
        }
        for t in self.tails.iter().filter(|t| !t.inverse) {
            let mut p = t.start;
            while p < rel {
                s.mul_binomial(&t.c, p);
                p += t.step;
            }
        }
        ExactSeries::from_dense(grid, s.lo + self.shift, s.coeffs)
    }
}
