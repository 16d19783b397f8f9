//! Truncated formal series in fractional powers of `q` with exact rational
//! coefficients.
//!
//! A series lives on an [`ExponentGrid`]: integer index `k` stands for
//! `q^(k/D)` and everything at index `>= N` is unknown. Negative indices are
//! allowed so that theta functions such as `θ(z q^(-1/4); q^(1/2))` can be
//! represented directly; the order bookkeeping in [`ExactSeries::mul`] and
//! [`ExactSeries::invert`] accounts for them.

mod monomial;
mod product;

pub use monomial::QMonomial;
pub use product::QProduct;

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numq::{HPComplex, Precision};

/// Denominator `D` and truncation order `N`: a series on this grid is known
/// modulo `q^(N/D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ExponentGrid {
    pub denom: u32,
    pub order: i64,
}

impl ExponentGrid {
    pub fn new(denom: u32, order: i64) -> Result<Self> {
        if denom == 0 || order < 1 {
            return Err(Error::InvalidGrid { denom, order });
        }
        Ok(ExponentGrid { denom, order })
    }

    /// Grid with denominator `denom` carrying `q_order` whole powers of `q`.
    pub fn with_q_order(denom: u32, q_order: i64) -> Result<Self> {
        Self::new(denom, q_order * denom as i64)
    }

    pub fn with_order(self, order: i64) -> Self {
        ExponentGrid { order, ..self }
    }
}

/// Truncated Laurent series `Σ c_k q^(k/D)`, `k < N`.
///
/// Storage is dense from the first nonzero index; leading and trailing zeros
/// are trimmed so that equal series compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeries {
    grid: ExponentGrid,
    lo: i64,
    coeffs: Vec<BigRational>,
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

impl ExactSeries {
    pub fn zero(grid: ExponentGrid) -> Self {
        ExactSeries { grid, lo: 0, coeffs: Vec::new() }
    }

    pub fn one(grid: ExponentGrid) -> Self {
        Self::monomial(BigRational::one(), 0, grid)
    }

    pub fn constant(c: BigRational, grid: ExponentGrid) -> Self {
        Self::monomial(c, 0, grid)
    }

    /// `c q^(k/D)`; empty if `k` is beyond the order.
    pub fn monomial(c: BigRational, k: i64, grid: ExponentGrid) -> Self {
        if k >= grid.order || c.is_zero() {
            return Self::zero(grid);
        }
        ExactSeries { grid, lo: k, coeffs: vec![c] }
    }

    /// Builds a series from `(index, coefficient)` pairs. Repeated indices are
    /// summed, indices at or beyond the order are dropped.
    pub fn from_terms<I>(grid: ExponentGrid, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut map = std::collections::BTreeMap::<i64, BigRational>::new();
        for (k, c) in terms {
            if k < grid.order {
                *map.entry(k).or_insert_with(BigRational::zero) += c;
            }
        }
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero(grid);
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (k, c) in map {
            coeffs[(k - lo) as usize] = c;
        }
        let mut s = ExactSeries { grid, lo, coeffs };
        s.normalize();
        s
    }

    pub(crate) fn from_dense(grid: ExponentGrid, lo: i64, mut coeffs: Vec<BigRational>) -> Self {
        let keep = (grid.order - lo).max(0) as usize;
        coeffs.truncate(keep);
        let mut s = ExactSeries { grid, lo, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn grid(&self) -> ExponentGrid {
        self.grid
    }

    pub fn denom(&self) -> u32 {
        self.grid.denom
    }

    pub fn order(&self) -> i64 {
        self.grid.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.lo)
    }

    /// Coefficient of `q^(k/D)`, or `None` when `k` is beyond the order.
    pub fn coeff(&self, k: i64) -> Option<BigRational> {
        if k >= self.grid.order {
            return None;
        }
        Some(self.coeff_unchecked(k))
    }

    fn coeff_unchecked(&self, k: i64) -> BigRational {
        if k < self.lo {
            return BigRational::zero();
        }
        self.coeffs.get((k - self.lo) as usize).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Nonzero `(index, coefficient)` pairs in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.lo + i as i64, c))
    }

    /// Drops everything at index `>= order`; never raises the order.
    pub fn truncate(&self, order: i64) -> Self {
        let grid = self.grid.with_order(order.min(self.grid.order));
        ExactSeries::from_dense(grid, self.lo, self.coeffs.clone())
    }

    /// Re-expresses the series on the finer grid `new_denom`.
    pub fn regrid(&self, new_denom: u32) -> Result<Self> {
        let d = self.grid.denom;
        if new_denom == 0 || !new_denom.is_multiple_of(d) {
            return Err(Error::IncompatibleGrid { from: d, to: new_denom });
        }
        let f = (new_denom / d) as i64;
        if f == 1 {
            return Ok(self.clone());
        }
        let grid = ExponentGrid { denom: new_denom, order: self.grid.order * f };
        if self.is_zero() {
            return Ok(Self::zero(grid));
        }
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * f as usize + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        Ok(ExactSeries { grid, lo: self.lo * f, coeffs })
    }

    /// Brings both operands onto the lcm of their denominators.
    pub fn align(a: &Self, b: &Self) -> (Self, Self) {
        let d = lcm(a.grid.denom, b.grid.denom);
        (a.regrid(d).expect("lcm is a multiple"), b.regrid(d).expect("lcm is a multiple"))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::align(self, other);
        let order = a.grid.order.min(b.grid.order);
        let grid = a.grid.with_order(order);
        if a.is_zero() {
            return b.truncate(order).with_grid(grid);
        }
        if b.is_zero() {
            return a.truncate(order).with_grid(grid);
        }
        let lo = a.lo.min(b.lo);
        let hi = (a.lo + a.coeffs.len() as i64).max(b.lo + b.coeffs.len() as i64).min(order);
        if hi <= lo {
            return Self::zero(grid);
        }
        let mut coeffs = vec![BigRational::zero(); (hi - lo) as usize];
        for (i, c) in a.coeffs.iter().enumerate() {
            let k = a.lo + i as i64;
            if k < hi {
                coeffs[(k - lo) as usize] += c;
            }
        }
        for (i, c) in b.coeffs.iter().enumerate() {
            let k = b.lo + i as i64;
            if k < hi {
                coeffs[(k - lo) as usize] += c;
            }
        }
        ExactSeries::from_dense(grid, lo, coeffs)
    }

    fn with_grid(mut self, grid: ExponentGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn neg(&self) -> Self {
        ExactSeries { grid: self.grid, lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.grid);
        }
        ExactSeries { grid: self.grid, lo: self.lo, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by the exact monomial `q^(k/D)`. The order moves with
    /// the shift when `k < 0` and is left unchanged otherwise.
    pub fn shift(&self, k: i64) -> Self {
        let order = if k < 0 { self.grid.order + k } else { self.grid.order };
        let grid = self.grid.with_order(order);
        if self.is_zero() {
            return Self::zero(grid);
        }
        ExactSeries::from_dense(grid, self.lo + k, self.coeffs.clone())
    }

    /// Cauchy product. The result order is the largest one both factors
    /// determine, capped at the smaller input order.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = Self::align(self, other);
        let va = a.valuation().unwrap_or(a.grid.order);
        let vb = b.valuation().unwrap_or(b.grid.order);
        let order = (a.grid.order + vb.min(0)).min(b.grid.order + va.min(0));
        let grid = a.grid.with_order(order);
        if a.is_zero() || b.is_zero() {
            return Self::zero(grid);
        }
        let lo = a.lo + b.lo;
        let len = (order - lo).max(0) as usize;
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() || i >= len {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if !y.is_zero() {
                    coeffs[i + j] += x * y;
                }
            }
        }
        ExactSeries::from_dense(grid, lo, coeffs)
    }

    /// Multiplicative inverse by coefficient recursion.
    ///
    /// The leading term must sit at index `<= 0`; for the usual case of a
    /// power series that means a nonzero constant term.
    pub fn invert(&self) -> Result<Self> {
        let v = match self.valuation() {
            Some(v) if v <= 0 => v,
            _ => return Err(Error::ZeroConstantTerm),
        };
        let order = self.grid.order;
        // unit part u = q^(-v) self, known through index order - v - 1
        let n = (order + v) as usize;
        let u0_inv = self.coeffs[0].recip();
        let mut b: Vec<BigRational> = Vec::with_capacity(n);
        for m in 0..n {
            if m == 0 {
                b.push(u0_inv.clone());
                continue;
            }
            let mut acc = BigRational::zero();
            for i in 1..=m.min(self.coeffs.len() - 1) {
                let ui = &self.coeffs[i];
                if !ui.is_zero() && !b[m - i].is_zero() {
                    acc += ui * &b[m - i];
                }
            }
            b.push(-(acc * &u0_inv));
        }
        Ok(ExactSeries::from_dense(self.grid, -v, b))
    }

    /// `self · (1 − c q^(p/D))` for `p >= 1`, in place.
    pub fn mul_binomial(&mut self, c: &BigRational, p: i64) {
        assert!(p >= 1, "binomial step must be positive");
        if self.is_zero() || c.is_zero() {
            return;
        }
        let room = (self.grid.order - self.lo).max(0) as usize;
        let len = (self.coeffs.len() + p as usize).min(room);
        self.coeffs.resize(len, BigRational::zero());
        let p = p as usize;
        for k in (p..len).rev() {
            if !self.coeffs[k - p].is_zero() {
                let t = &self.coeffs[k - p] * c;
                self.coeffs[k] -= t;
            }
        }
        self.normalize();
    }

    /// `self / (1 − c q^(p/D))` for `p >= 1`, in place.
    pub fn div_binomial(&mut self, c: &BigRational, p: i64) {
        assert!(p >= 1, "binomial step must be positive");
        if self.is_zero() || c.is_zero() {
            return;
        }
        let len = (self.grid.order - self.lo).max(0) as usize;
        self.coeffs.resize(len, BigRational::zero());
        let p = p as usize;
        for k in p..len {
            if !self.coeffs[k - p].is_zero() {
                let t = &self.coeffs[k - p] * c;
                self.coeffs[k] += t;
            }
        }
        self.normalize();
    }

    /// Adds `c q^(k/D)` in place (ignored at or beyond the order).
    pub fn add_term(&mut self, c: &BigRational, k: i64) {
        if k >= self.grid.order || c.is_zero() {
            return;
        }
        if self.coeffs.is_empty() {
            self.lo = k;
            self.coeffs.push(c.clone());
            return;
        }
        if k < self.lo {
            let pad = (self.lo - k) as usize;
            self.coeffs.splice(0..0, std::iter::repeat_n(BigRational::zero(), pad));
            self.lo = k;
        }
        let i = (k - self.lo) as usize;
        if i >= self.coeffs.len() {
            self.coeffs.resize(i + 1, BigRational::zero());
        }
        self.coeffs[i] += c;
        self.normalize();
    }

    /// Substitutes `q ↦ q^s` for a positive integer `s`; the order scales by `s`.
    pub fn substitute(&self, s: i64) -> Self {
        assert!(s >= 1, "substitution power must be positive");
        let grid = self.grid.with_order(self.grid.order * s);
        if self.is_zero() {
            return Self::zero(grid);
        }
        let su = s as usize;
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * su + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * su] = c.clone();
        }
        ExactSeries { grid, lo: self.lo * s, coeffs }
    }

    /// Largest absolute coefficient difference on the common grid and order.
    pub fn max_abs_diff(&self, other: &Self) -> BigRational {
        self.sub(other).terms().map(|(_, c)| c.abs()).max().unwrap_or_else(BigRational::zero)
    }

    /// Evaluates the truncated series at a numeric point, using the principal
    /// branch of `q^(1/D)`.
    pub fn evaluate(&self, q: &HPComplex, prec: Precision) -> HPComplex {
        let mut acc = HPComplex::zero(prec);
        if self.is_zero() {
            return acc;
        }
        let root = q.pow_real(&crate::numq::real_ratio(1, self.grid.denom as i64, prec), prec);
        let mut pw = root.powi(self.lo, prec);
        for c in &self.coeffs {
            if !c.is_zero() {
                let cv = crate::numq::real_from_rational(c, prec);
                acc = acc.add(&pw.scale(&cv));
            }
            pw = pw.mul(&root);
        }
        acc
    }

    /// Coefficient dump: header `# D=<D> N=<N>`, then one `k,numerator,denominator`
    /// row per nonzero coefficient.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# D={} N={}\n", self.grid.denom, self.grid.order);
        for (k, c) in self.terms() {
            let _ = writeln!(out, "{},{},{}", k, c.numer(), c.denom());
        }
        out
    }

    /// Parses the format written by [`ExactSeries::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::BadParameter { key: "csv".into(), reason: reason.into() };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| bad("empty input"))?;
        let mut denom = None;
        let mut order = None;
        for tok in header.trim_start_matches('#').split_whitespace() {
            if let Some(v) = tok.strip_prefix("D=") {
                denom = v.parse::<u32>().ok();
            } else if let Some(v) = tok.strip_prefix("N=") {
                order = v.parse::<i64>().ok();
            }
        }
        let grid = ExponentGrid {
            denom: denom.ok_or_else(|| bad("missing D"))?,
            order: order.ok_or_else(|| bad("missing N"))?,
        };
        let mut terms = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 3 {
                return Err(bad("expected three fields"));
            }
            let k = f[0].parse::<i64>().map_err(|_| bad("index"))?;
            let n = f[1].parse::<BigInt>().map_err(|_| bad("numerator"))?;
            let d = f[2].parse::<BigInt>().map_err(|_| bad("denominator"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            terms.push((k, BigRational::new(n, d)));
        }
        Ok(Self::from_terms(grid, terms))
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(order: i64) -> ExponentGrid {
        ExponentGrid::new(1, order).unwrap()
    }

    fn poly(grid: ExponentGrid, c: &[i64]) -> ExactSeries {
        ExactSeries::from_terms(grid, c.iter().enumerate().map(|(k, &v)| (k as i64, rat(v))))
    }

    #[test]
    fn add_cancels_and_has_identity() {
        let a = poly(g(10), &[1, 1]);
        let b = poly(g(10), &[1, -1]);
        assert_eq!(a.add(&b), ExactSeries::constant(rat(2), g(10)));
        assert_eq!(a.add(&ExactSeries::zero(g(10))), a);
    }

    #[test]
    fn add_term_and_substitute() {
        let mut s = ExactSeries::zero(g(10));
        s.add_term(&rat(2), 3);
        s.add_term(&rat(1), -1);
        s.add_term(&rat(-2), 3);
        s.add_term(&rat(5), 12);
        assert_eq!(s, ExactSeries::monomial(rat(1), -1, g(10)));
        let p = poly(g(5), &[1, -1, 3]).substitute(3);
        assert_eq!(p.order(), 15);
        assert_eq!(p, ExactSeries::from_terms(g(15), [(0, rat(1)), (3, rat(-1)), (6, rat(3))]));
    }

    #[test]
    fn regrid_then_add() {
        let a = poly(g(10), &[1, 1]).regrid(2).unwrap();
        let s = a.add(&a);
        assert_eq!(s.denom(), 2);
        assert_eq!(s.coeff(0), Some(rat(2)));
        assert_eq!(s.coeff(1), Some(rat(0)));
        assert_eq!(s.coeff(2), Some(rat(2)));
        assert_eq!(s.order(), 20);
    }

    #[test]
    fn regrid_round_trip_and_bad_denominator() {
        let a = poly(g(10), &[1, 1]);
        let fine = a.regrid(6).unwrap();
        assert_eq!(fine.coeff(0), Some(rat(1)));
        assert_eq!(fine.coeff(6), Some(rat(1)));
        let back: Vec<_> = fine.terms().map(|(k, c)| (k / 6, c.clone())).collect();
        assert_eq!(ExactSeries::from_terms(g(10), back), a);
        assert_eq!(fine.regrid(4), Err(Error::IncompatibleGrid { from: 6, to: 4 }));
    }

    #[test]
    fn products() {
        let a = poly(g(10), &[1, -1]);
        let b = poly(g(10), &[1, 1]);
        assert_eq!(a.mul(&b), poly(g(10), &[1, 0, -1]));
        assert_eq!(a.mul(&ExactSeries::one(g(10))), a);
        let geo = poly(g(10), &[1; 10]);
        assert_eq!(a.mul(&geo), ExactSeries::one(g(10)));
    }

    #[test]
    fn inverses() {
        let a = poly(g(12), &[1, -1]);
        assert_eq!(a.invert().unwrap(), poly(g(12), &[1; 12]));
        let one = ExactSeries::one(g(5));
        assert_eq!(one.invert().unwrap(), one);
        assert_eq!(poly(g(5), &[0, 1]).invert(), Err(Error::ZeroConstantTerm));
        assert_eq!(ExactSeries::zero(g(5)).invert(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn partitions_of_five_by_inverting_euler_product() {
        // brute-force partition counts p(0..=9)
        fn count(n: u32, max: u32) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|k| count(n - k, k)).sum()
        }
        let mut prod = ExactSeries::one(g(10));
        for j in 1..10 {
            prod.mul_binomial(&rat(1), j);
        }
        let inv = prod.invert().unwrap();
        for n in 0..10 {
            assert_eq!(inv.coeff(n as i64), Some(rat(count(n, n) as i64)));
        }
        assert_eq!(inv.coeff(5), Some(rat(7)));
    }

    #[test]
    fn laurent_inverse_tracks_order() {
        // 1 - 2 q^-1 = -2 q^-1 (1 - q/2)
        let a = ExactSeries::from_terms(g(8), [(-1, rat(-2)), (0, rat(1))]);
        let b = a.invert().unwrap();
        assert_eq!(b.valuation(), Some(1));
        let prod = a.mul(&b);
        assert_eq!(prod.order(), 7);
        assert_eq!(prod, ExactSeries::one(g(7)));
    }

    #[test]
    fn binomial_helpers_match_generic_product() {
        let a = poly(g(15), &[3, -1, 4, 1, -5, 9]);
        let mut m = a.clone();
        m.mul_binomial(&frac(2, 3), 2);
        let bin = ExactSeries::from_terms(g(15), [(0, rat(1)), (2, -frac(2, 3))]);
        assert_eq!(m, a.mul(&bin));
        m.div_binomial(&frac(2, 3), 2);
        assert_eq!(m, a);
    }

    #[test]
    fn csv_round_trip_and_header() {
        let a = ExactSeries::from_terms(ExponentGrid::new(2, 7).unwrap(), [(0, rat(1)), (3, frac(-2, 5))]);
        let text = a.to_csv();
        assert_eq!(text, "# D=2 N=7\n0,1,1\n3,-2,5\n");
        assert_eq!(ExactSeries::from_csv(&text).unwrap(), a);
    }

    #[test]
    fn pentagonal_expansion() {
        let n = 60;
        let mut prod = ExactSeries::one(g(n));
        for j in 1..n {
            prod.mul_binomial(&rat(1), j);
        }
        let mut terms = Vec::new();
        for k in -10i64..=10 {
            let e = k * (3 * k - 1) / 2;
            terms.push((e, rat(if k % 2 == 0 { 1 } else { -1 })));
        }
        assert_eq!(prod, ExactSeries::from_terms(g(n), terms));
    }

    fn arb_series(order: i64) -> impl Strategy<Value = ExactSeries> {
        proptest::collection::vec((-4i64..5, 1i64..4), 0..8).prop_map(move |cs| {
            ExactSeries::from_terms(g(order), cs.into_iter().enumerate().map(|(k, (n, d))| (k as i64, frac(n, d))))
        })
    }

    fn arb_unit(order: i64) -> impl Strategy<Value = ExactSeries> {
        (1i64..5, arb_series(order)).prop_map(move |(c0, s)| {
            let tail = s.shift(1).truncate(order);
            tail.add(&ExactSeries::constant(rat(c0), g(order)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(120))]

        #[test]
        fn ring_axioms(a in arb_series(9), b in arb_series(9), c in arb_series(9)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn invert_is_two_sided(a in arb_unit(10)) {
            let b = a.invert().unwrap();
            prop_assert_eq!(a.mul(&b), ExactSeries::one(g(10)));
            prop_assert_eq!(b.mul(&a), ExactSeries::one(g(10)));
        }

        #[test]
        fn truncation_coherence(a in arb_unit(12), b in arb_series(12), m in 1i64..12) {
            let hi = a.mul(&b).add(&a.invert().unwrap()).truncate(m);
            let (am, bm) = (a.truncate(m), b.truncate(m));
            let lo = am.mul(&bm).add(&am.invert().unwrap());
            prop_assert_eq!(hi, lo);
        }
    }
}
