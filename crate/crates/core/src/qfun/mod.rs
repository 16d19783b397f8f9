//! q-shifted factorials and the theta function in both engines.

use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use rug::Float;

use crate::error::{Error, Result};
use crate::exactq::{ExactSeries, ExponentGrid, QMonomial, QProduct};
use crate::numq::{self, HPComplex, Precision};

/// Length of a q-shifted factorial.
#[derive(Clone, Debug, PartialEq)]
pub enum PochIndex {
    Integer(i64),
    Infinity,
    /// `(a)_c = (a)_∞ / (a q^c)_∞`; numeric engine only.
    RealC(Float),
}

/// `(coefficient, exponent index, step index)` of `(x; q^base)` on a grid.
fn grid_parts(x: &QMonomial, base: Ratio<i64>, denom: u32) -> Result<(BigRational, i64, i64)> {
    let e = x.grid_index(denom)?;
    let s = base * denom as i64;
    if !s.is_integer() {
        return Err(Error::IncompatibleGrid { from: *base.denom() as u32, to: denom });
    }
    Ok((x.coeff.clone(), e, s.to_integer()))
}

/// Multiplies `prod` by `(x; q^base)_n`, or divides by it when `inverse`.
///
/// Negative `n` uses `(x)_{-m} = 1/Π_{j=1}^m (1 − x q^{-j·base})`.
pub fn mul_poch(prod: &mut QProduct, x: &QMonomial, base: Ratio<i64>, n: i64, inverse: bool) -> Result<()> {
    let (c, e, s) = grid_parts(x, base, prod.denom())?;
    if n >= 0 {
        for j in 0..n {
            prod.mul_linear(&c, e + s * j, inverse)?;
        }
    } else {
        for j in 1..=-n {
            prod.mul_linear(&c, e - s * j, !inverse)?;
        }
    }
    Ok(())
}

/// Multiplies `prod` by `(x; q^base)_∞` (`base > 0`), or divides by it.
pub fn mul_poch_inf(prod: &mut QProduct, x: &QMonomial, base: Ratio<i64>, inverse: bool) -> Result<()> {
    let (c, e, s) = grid_parts(x, base, prod.denom())?;
    if s <= 0 {
        return Err(Error::DomainError("infinite product needs |base| < 1".into()));
    }
    prod.mul_infinite(&c, e, s, inverse)
}

fn poch_product(x: &QMonomial, index: &PochIndex, denom: u32, inverse: bool) -> Result<QProduct> {
    let mut p = QProduct::one(denom);
    match index {
        PochIndex::Integer(n) => mul_poch(&mut p, x, Ratio::one(), *n, inverse)?,
        PochIndex::Infinity => mul_poch_inf(&mut p, x, Ratio::one(), inverse)?,
        PochIndex::RealC(_) => {
            return Err(Error::DomainError("real Pochhammer index is numeric-only".into()));
        }
    }
    Ok(p)
}

/// Truncation of `(x; q)_index`.
pub fn poch_series(x: &QMonomial, index: &PochIndex, grid: ExponentGrid) -> Result<ExactSeries> {
    Ok(poch_product(x, index, grid.denom, false)?.expand(grid.order))
}

/// Truncation of `1/(x; q)_index`. Where `(x)_index` has a pole (such as
/// `(q)_{-n}`) the reciprocal is the zero series.
pub fn poch_recip_series(x: &QMonomial, index: &PochIndex, grid: ExponentGrid) -> Result<ExactSeries> {
    Ok(poch_product(x, index, grid.denom, true)?.expand(grid.order))
}

/// `q^e` for real `e`, principal branch.
pub fn q_pow(q: &HPComplex, e: &Float, prec: Precision) -> HPComplex {
    q.pow_real(e, prec)
}

pub(crate) fn check_q(q: &HPComplex) -> Result<()> {
    if q.abs() >= 1 {
        return Err(Error::DomainError("|q| must be below 1".into()));
    }
    Ok(())
}

/// `(x; q)_∞`, truncated once `|x q^j|` drops below the working cutoff.
pub fn poch_inf_value(x: &HPComplex, q: &HPComplex, prec: Precision) -> Result<HPComplex> {
    check_q(q)?;
    let one = HPComplex::one(prec);
    let mut acc = one.clone();
    if x.is_zero() {
        return Ok(acc);
    }
    let cutoff = -(prec.working() as f64) - 8.0;
    let mut t = x.clone();
    for _ in 0..50_000_000u64 {
        acc = acc.mul(&one.sub(&t));
        if acc.is_zero() {
            return Ok(acc);
        }
        t = t.mul(q);
        if t.log2_abs() < cutoff {
            return Ok(acc);
        }
    }
    Err(Error::PrecisionLoss("infinite product did not settle".into()))
}

/// `(x; q)_n` for integer `n` (negative allowed).
pub fn poch_finite_value(x: &HPComplex, q: &HPComplex, n: i64, prec: Precision) -> Result<HPComplex> {
    let one = HPComplex::one(prec);
    let mut acc = one.clone();
    if n >= 0 {
        let mut t = x.clone();
        for _ in 0..n {
            acc = acc.mul(&one.sub(&t));
            t = t.mul(q);
        }
        return Ok(acc);
    }
    let qi = q.recip()?;
    let mut t = x.mul(&qi);
    for _ in 0..-n {
        let f = one.sub(&t);
        if f.is_zero() {
            return Err(Error::PolePoch("factor (1 - x q^-j) vanishes".into()));
        }
        acc = acc.mul(&f);
        t = t.mul(&qi);
    }
    acc.recip()
}

/// `(x; q)_index` numerically.
pub fn poch_value(x: &HPComplex, index: &PochIndex, q: &HPComplex, prec: Precision) -> Result<HPComplex> {
    check_q(q)?;
    match index {
        PochIndex::Integer(n) => poch_finite_value(x, q, *n, prec),
        PochIndex::Infinity => poch_inf_value(x, q, prec),
        PochIndex::RealC(c) => {
            let num = poch_inf_value(x, q, prec)?;
            let den = poch_inf_value(&x.mul(&q_pow(q, c, prec)), q, prec)?;
            if den.is_zero() {
                return Err(Error::PolePoch("(x q^c)_∞ vanishes".into()));
            }
            num.div(&den)
        }
    }
}

/// The two equal expressions for the theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaForm {
    /// `Σ_n (−z)^n p^{n(n−1)/2}`
    Sum,
    /// `(z, p/z, p; p)_∞`
    Product,
}

/// `θ(z; q^base)` as a series in `q`.
pub fn theta_series(z: &QMonomial, base: Ratio<i64>, form: ThetaForm, grid: ExponentGrid) -> Result<ExactSeries> {
    if z.is_zero() {
        return Err(Error::DomainError("theta at z = 0".into()));
    }
    match form {
        ThetaForm::Product => Ok(theta_product(z, base, grid.denom)?.expand(grid.order)),
        ThetaForm::Sum => theta_sum_series(z, base, grid),
    }
}

/// `(z, q^base/z, q^base; q^base)_∞` as an unexpanded product.
pub fn theta_product(z: &QMonomial, base: Ratio<i64>, denom: u32) -> Result<QProduct> {
    if z.is_zero() {
        return Err(Error::DomainError("theta at z = 0".into()));
    }
    let mut p = QProduct::one(denom);
    let b = QMonomial::q_power(base);
    mul_poch_inf(&mut p, z, base, false)?;
    mul_poch_inf(&mut p, &b.mul(&z.recip()?), base, false)?;
    mul_poch_inf(&mut p, &b, base, false)?;
    Ok(p)
}

fn theta_sum_series(z: &QMonomial, base: Ratio<i64>, grid: ExponentGrid) -> Result<ExactSeries> {
    let (c, e, s) = grid_parts(z, base, grid.denom)?;
    if s <= 0 {
        return Err(Error::DomainError("theta needs |base| < 1".into()));
    }
    let idx = |n: i64| e * n + s * n * (n - 1) / 2;
    let neg_c = -c;
    let mut terms = Vec::new();
    for dir in [1i64, -1] {
        let mut n = if dir == 1 { 0 } else { -1 };
        loop {
            let k = idx(n);
            let next = idx(n + dir);
            if k >= grid.order && next > k {
                break;
            }
            if k < grid.order {
                terms.push((k, pow_signed(&neg_c, n)));
            }
            n += dir;
        }
    }
    Ok(ExactSeries::from_terms(grid, terms))
}

fn pow_signed(c: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(c.clone(), n as usize)
    } else {
        num_traits::pow(c.recip(), (-n) as usize)
    }
}

/// `θ(z; q)` numerically.
pub fn theta_value(z: &HPComplex, q: &HPComplex, form: ThetaForm, prec: Precision) -> Result<HPComplex> {
    check_q(q)?;
    if z.is_zero() {
        return Err(Error::DomainError("theta at z = 0".into()));
    }
    match form {
        ThetaForm::Product => {
            let a = poch_inf_value(z, q, prec)?;
            let b = poch_inf_value(&q.div(z)?, q, prec)?;
            let c = poch_inf_value(q, q, prec)?;
            Ok(a.mul(&b).mul(&c))
        }
        ThetaForm::Sum => {
            let mz = z.neg();
            let mzi = mz.recip()?;
            // t_{n+1}/t_n = −z q^n ; t_{n−1}/t_n = q^{1−n}/(−z)
            let mut qn = HPComplex::one(prec);
            let mut qb = q.clone();
            let fwd = |_n: i64| {
                let r = mz.mul(&qn);
                qn = qn.mul(q);
                Ok(r)
            };
            let bwd = |_n: i64| {
                let r = mzi.mul(&qb);
                qb = qb.mul(q);
                Ok(r)
            };
            numq::sum_bilateral(HPComplex::one(prec), fwd, bwd, prec)
        }
    }
}

/// Both sides of the eta transformation at `q = e^{−t}`:
/// `(q; q)_∞` and `(2π/t)^{1/2} e^{t/24 − π²/(6t)} (q̃; q̃)_∞` with `q̃ = e^{−4π²/t}`.
pub fn eta_transform_sides(t: &Float, prec: Precision) -> Result<(Float, Float)> {
    if *t <= 0 {
        return Err(Error::DomainError("eta transform needs t > 0".into()));
    }
    let w = prec.working();
    let q = HPComplex::from_real(Float::with_val(w, -t.clone()).exp());
    let lhs = poch_inf_value(&q, &q, prec)?.re;
    let pi = numq::pi(prec);
    let four_pi2 = Float::with_val(w, pi.square_ref()) * 4u32;
    let qt = HPComplex::from_real(Float::with_val(w, -(four_pi2 / t)).exp());
    let dual = poch_inf_value(&qt, &qt, prec)?.re;
    let pref = Float::with_val(w, Float::with_val(w, &pi * 2u32) / t).sqrt();
    let expo = Float::with_val(w, t / 24u32) - Float::with_val(w, pi.square_ref()) / Float::with_val(w, t * 6u32);
    Ok((lhs, pref * expo.exp() * dual))
}

/// Numeric value of the exact-engine monomial `c q^e`.
pub fn monomial_value(m: &QMonomial, q: &HPComplex, prec: Precision) -> HPComplex {
    let c = HPComplex::from_rational(&m.coeff, prec);
    if m.power.is_zero() || c.is_zero() {
        return c;
    }
    let e = numq::real_ratio(*m.power.numer(), *m.power.denom(), prec);
    c.mul(&q_pow(q, &e, prec))
}
