//! Arbitrary-precision real and complex scalars, elementary functions, the
//! dilogarithm, the monotone root solvers and the `δ_α(z)` constant.
//!
//! Reals are MPFR floats ([`rug::Float`]). Complex values are a thin pair of
//! them; only the handful of operations the series engines need are provided.
//! Precision is always passed explicitly.

mod li2;
mod roots;
mod sum;

pub use li2::{li2, li2_real};
pub use roots::{delta_alpha, delta_alpha_from_asymptotics, solve_macmain_z, solve_w};
pub use sum::{sum_bilateral, sum_by_ratio, sum_direct};

use num_rational::BigRational;
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type HPReal = Float;

/// Significand bits claimed for results plus internal guard bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub bits: u32,
    pub guard: u32,
}

impl Precision {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 64 {
            return Err(Error::DomainError(format!("precision {bits} bits is below 64")));
        }
        Ok(Precision { bits, guard: 32 })
    }

    /// Bits actually used for intermediate values.
    pub fn working(&self) -> u32 {
        self.bits + self.guard
    }

    /// `2^(-bits)`, the accuracy target.
    pub fn epsilon(&self) -> Float {
        Float::with_val(self.working(), Float::i_exp(1, -(self.bits as i32)))
    }

    /// `2^(-(bits+guard))`, the cutoff for dropping terms.
    pub fn cutoff(&self) -> Float {
        Float::with_val(self.working(), Float::i_exp(1, -(self.working() as i32)))
    }
}

pub fn real(v: f64, prec: Precision) -> Float {
    Float::with_val(prec.working(), v)
}

pub fn real_int(v: i64, prec: Precision) -> Float {
    Float::with_val(prec.working(), v)
}

/// `n/d` correctly rounded.
pub fn real_ratio(n: i64, d: i64, prec: Precision) -> Float {
    Float::with_val(prec.working(), rug::Rational::from((n, d)))
}

pub fn real_from_rational(r: &BigRational, prec: Precision) -> Float {
    let n: rug::Integer = r.numer().to_string().parse().expect("decimal integer");
    let d: rug::Integer = r.denom().to_string().parse().expect("decimal integer");
    Float::with_val(prec.working(), rug::Rational::from((n, d)))
}

/// Parses a decimal or `p/q` string exactly before rounding.
pub fn parse_real(s: &str, prec: Precision) -> Result<Float> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: rug::Integer = n.trim().parse().map_err(|_| bad_real(s))?;
        let d: rug::Integer = d.trim().parse().map_err(|_| bad_real(s))?;
        if d == 0 {
            return Err(bad_real(s));
        }
        return Ok(Float::with_val(prec.working(), rug::Rational::from((n, d))));
    }
    let parsed = Float::parse(s).map_err(|_| bad_real(s))?;
    Ok(Float::with_val(prec.working(), parsed))
}

fn bad_real(s: &str) -> Error {
    Error::BadParameter { key: s.to_string(), reason: "not a real number".into() }
}

pub fn pi(prec: Precision) -> Float {
    Float::with_val(prec.working(), Constant::Pi)
}

pub fn exp(x: &Float) -> Float {
    x.clone().exp()
}

pub fn ln(x: &Float) -> Result<Float> {
    if *x <= 0 {
        return Err(Error::DomainError(format!("log of non-positive {}", x.to_f64())));
    }
    Ok(x.clone().ln())
}

/// `x^y` for real `x >= 0`; `0^y` is only defined for `y > 0`.
pub fn pow(x: &Float, y: &Float) -> Result<Float> {
    if x.is_zero() {
        if *y > 0 {
            return Ok(Float::with_val(x.prec(), 0));
        }
        return Err(Error::DomainError("0^y with y <= 0".into()));
    }
    if *x < 0 {
        return Err(Error::DomainError("real power of a negative base".into()));
    }
    Ok(Float::with_val(x.prec().max(y.prec()), x.pow(y)))
}

/// `log2 |x|` as an `f64`, valid far outside the `f64` exponent range.
pub fn log2_abs(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    m.abs().log2() + e as f64
}

/// Complex number with MPFR parts.
#[derive(Clone, Debug, PartialEq)]
pub struct HPComplex {
    pub re: Float,
    pub im: Float,
}

impl HPComplex {
    pub fn new(re: Float, im: Float) -> Self {
        HPComplex { re, im }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_real(Float::new(prec.working()))
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_real(real_int(1, prec))
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        HPComplex { re, im }
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        HPComplex { re: real(re, prec), im: real(im, prec) }
    }

    pub fn from_rational(r: &BigRational, prec: Precision) -> Self {
        Self::from_real(real_from_rational(r, prec))
    }

    /// `e^(iθ)`.
    pub fn cis(theta: &Float) -> Self {
        let (s, c) = theta.clone().sin_cos(Float::new(theta.prec()));
        HPComplex { re: c, im: s }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        HPComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        HPComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }

    pub fn neg(&self) -> Self {
        HPComplex { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn conj(&self) -> Self {
        HPComplex { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec().max(o.prec());
        if self.is_real() && o.is_real() {
            return Self::from_real(Float::with_val(p, &self.re * &o.re));
        }
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        HPComplex { re, im }
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().max(s.prec());
        HPComplex { re: Float::with_val(p, &self.re * s), im: Float::with_val(p, &self.im * s) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().hypot(&self.im))
    }

    pub fn log2_abs(&self) -> f64 {
        // within half a bit of the true value
        log2_abs(&self.re).max(log2_abs(&self.im)) + 0.5
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DomainError("division by zero".into()));
        }
        if self.is_real() {
            return Ok(Self::from_real(Float::with_val(self.prec(), self.re.recip_ref())));
        }
        let n = self.norm_sqr();
        Ok(HPComplex { re: Float::with_val(n.prec(), &self.re / &n), im: -Float::with_val(n.prec(), &self.im / &n) })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_real() && !o.re.is_zero() {
            let p = self.prec().max(o.prec());
            return Ok(HPComplex {
                re: Float::with_val(p, &self.re / &o.re),
                im: Float::with_val(p, &self.im / &o.re),
            });
        }
        Ok(self.mul(&o.recip()?))
    }

    pub fn exp(&self) -> Self {
        let m = self.re.clone().exp();
        if self.im.is_zero() {
            return Self::from_real(m);
        }
        Self::cis(&self.im).scale(&m)
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DomainError("log of zero".into()));
        }
        if self.is_real() && self.re > 0 {
            return Ok(Self::from_real(self.re.clone().ln()));
        }
        let arg = Float::with_val(self.prec(), self.im.atan2_ref(&self.re));
        Ok(HPComplex { re: self.abs().ln(), im: arg })
    }

    /// Principal branch `self^e` for real `e`.
    pub fn pow_real(&self, e: &Float, prec: Precision) -> Self {
        if self.is_zero() {
            return Self::zero(prec);
        }
        if self.is_real() && self.re > 0 {
            return Self::from_real(Float::with_val(prec.working(), self.re.clone().pow(e)));
        }
        self.ln().expect("nonzero").scale(e).exp()
    }

    /// Integer power by repeated squaring; negative powers invert first.
    pub fn powi(&self, n: i64, prec: Precision) -> Self {
        let mut base = if n < 0 { self.recip().expect("nonzero base for negative power") } else { self.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Self::one(prec);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sqrt(&self) -> Self {
        if self.is_real() && self.re >= 0 {
            return Self::from_real(self.re.clone().sqrt());
        }
        let half = Float::with_val(self.prec(), 0.5);
        self.ln().map(|l| l.scale(&half).exp()).unwrap_or_else(|_| self.clone())
    }

    /// `|self − other| / max(|self|, |other|)`, zero when both vanish.
    pub fn rel_diff(&self, other: &Self) -> Float {
        let d = self.sub(other).abs();
        let m = self.abs().max(&other.abs());
        if m.is_zero() {
            return d;
        }
        Float::with_val(d.prec(), &d / &m)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// Decimal rendering with a fixed number of significant digits.
pub fn fmt_real(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits))
}
