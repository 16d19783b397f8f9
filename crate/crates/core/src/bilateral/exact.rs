use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use super::{AlphaRational, ExactParams, FFamily, LForm, QuadFormQ};
use crate::error::{Error, Result};
use crate::exactq::{ExactSeries, ExponentGrid, QMonomial, QProduct};
use crate::qfun::{mul_poch, mul_poch_inf};

const MAX_STEPS: i64 = 1_000_000;

fn units(r: Ratio<i64>, denom: u32) -> Result<i64> {
    let s = r * denom as i64;
    if !s.is_integer() {
        return Err(Error::IncompatibleGrid { from: *r.denom() as u32, to: denom });
    }
    Ok(s.to_integer())
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// An index past which the leading exponent of every Pochhammer product built
/// from these monomials is an exact quadratic in the summation index.
pub fn saturation(params: &[&QMonomial]) -> i64 {
    let m = params.iter().filter(|p| !p.is_zero()).map(|p| p.power.abs().ceil().to_integer()).max().unwrap_or(0);
    4 + 2 * m
}

/// Sums `term(start), term(start + dir), …` to the grid order.
///
/// Each term arrives as a [`QProduct`] whose exact leading exponent is read
/// before expansion. Past `n_sat` steps the leading exponent must grow with a
/// non-negative second difference; the sum stops once it has passed the
/// order. Terms are assumed to vanish for good once one vanishes (true for
/// every Pochhammer quotient with a zero factor).
pub fn sum_exact<F>(grid: ExponentGrid, n_sat: i64, start: i64, dir: i64, mut term: F) -> Result<ExactSeries>
where
    F: FnMut(i64) -> Result<QProduct>,
{
    let order = grid.order;
    let mut acc = ExactSeries::zero(grid);
    let mut prev: Option<i64> = None;
    let mut prev_d1: Option<i64> = None;
    for k in 0..MAX_STEPS {
        let p = term(start + dir * k)?;
        if p.vanishes() {
            return Ok(acc);
        }
        let s = p.shift();
        if s < order {
            acc = acc.add(&p.expand(order));
        }
        let d1 = prev.map(|v| s - v);
        if k > n_sat {
            let (d1v, d0) = (d1.expect("set after one step"), prev_d1.expect("set after two steps"));
            let d2 = d1v - d0;
            if d2 < 0 || (d2 == 0 && d1v <= 0) {
                return Err(Error::Divergence(format!(
                    "term exponents stop growing at index {} (increments {d0}, {d1v})",
                    start + dir * k
                )));
            }
            if s >= order && d1v > 0 {
                return Ok(acc);
            }
        }
        prev_d1 = d1;
        prev = Some(s);
    }
    Err(Error::Divergence(format!("no exact cut within {MAX_STEPS} terms")))
}

/// `Σ_{n ≥ 0} term(n)`.
pub fn unilateral_exact<F>(grid: ExponentGrid, n_sat: i64, term: F) -> Result<ExactSeries>
where
    F: FnMut(i64) -> Result<QProduct>,
{
    sum_exact(grid, n_sat, 0, 1, term)
}

fn bilateral<F>(grid: ExponentGrid, n_sat: i64, mut term: F) -> Result<ExactSeries>
where
    F: FnMut(i64) -> Result<QProduct>,
{
    let right = sum_exact(grid, n_sat, 0, 1, &mut term)?;
    let left = sum_exact(grid, n_sat, -1, -1, &mut term)?;
    Ok(right.add(&left))
}

/// `z^n q^{α n(n−1)/2}` as a product prefix.
fn gaussian_prefix(z: &QMonomial, alpha: Ratio<i64>, n: i64, denom: u32) -> Result<QProduct> {
    let zn = z.powi(n)?;
    let mut p = QProduct::one(denom);
    p.mul_monomial(&zn.coeff, units(zn.power + alpha * binom2(n), denom)?);
    Ok(p)
}

/// True when `x = q^k` with integer `k ≥ 1`, so that `1/(x)_n = 0` for
/// `n ≤ −k` and the negative half of `L` is a finite sum.
fn negative_half_finite(x: &QMonomial) -> bool {
    x.coeff.is_one() && x.power.is_integer() && x.power >= Ratio::one()
}

fn check_grid(grid: ExponentGrid, alpha: AlphaRational, params: &[&QMonomial]) -> Result<()> {
    // α·n(n−1)/2 at n = 2 is α itself
    units(alpha.ratio(), grid.denom)?;
    for p in params {
        if !p.is_zero() {
            p.grid_index(grid.denom)?;
        }
    }
    Ok(())
}

/// `L_α(x; q, z) = Σ_{n∈ℤ} z^n q^{α n(n−1)/2} / (x)_n`.
pub fn l_scalar_exact(x: &QMonomial, z: &QMonomial, alpha: AlphaRational, grid: ExponentGrid) -> Result<ExactSeries> {
    if alpha.ratio() < Ratio::one() && !negative_half_finite(x) {
        return Err(Error::Divergence(format!("L needs alpha >= 1 (got {}/{})", alpha.a, alpha.b)));
    }
    if z.is_zero() {
        return Ok(ExactSeries::one(grid));
    }
    check_grid(grid, alpha, &[x, z])?;
    let n_sat = saturation(&[x]);
    bilateral(grid, n_sat, |n| {
        let mut p = gaussian_prefix(z, alpha.ratio(), n, grid.denom)?;
        mul_poch(&mut p, x, Ratio::one(), n, true)?;
        Ok(p)
    })
}

/// `L_α(x⃗; y⃗; q, z)` in either displayed form.
///
/// A zero `y_s` is allowed: the Pochhammer form uses
/// `(1/y)_n (−y)^n = q^{n(n−1)/2} (y; q^{−1})_n`, which is regular there.
pub fn l_vector_exact(params: &ExactParams, form: LForm, grid: ExponentGrid) -> Result<ExactSeries> {
    let r = params.check_rank()?;
    let alpha = params.alpha;
    if alpha.ratio() < Ratio::from_integer(r as i64) {
        return Err(Error::Divergence(format!("L needs alpha >= {r} (got {}/{})", alpha.a, alpha.b)));
    }
    if params.z.is_zero() {
        return Ok(ExactSeries::one(grid));
    }
    let all: Vec<&QMonomial> = params.x.iter().chain(&params.y).chain([&params.z]).collect();
    check_grid(grid, alpha, &all)?;
    let n_sat = saturation(&all[..2 * r]);
    let d = grid.denom;
    match form {
        LForm::Pochhammer => bilateral(grid, n_sat, |n| {
            let mut p = gaussian_prefix(&params.z, alpha.ratio(), n, d)?;
            for s in 0..r {
                mul_poch(&mut p, &params.y[s], -Ratio::one(), n, false)?;
                mul_poch(&mut p, &params.x[s], Ratio::one(), n, true)?;
            }
            Ok(p)
        }),
        LForm::Product => {
            let mut pref = QProduct::one(d);
            for s in 0..r {
                mul_poch_inf(&mut pref, &params.x[s], Ratio::one(), true)?;
                mul_poch_inf(&mut pref, &params.y[s].shift(Ratio::one()), Ratio::one(), true)?;
            }
            let sum_order = grid.order + (-pref.shift()).max(0);
            let sum = bilateral(grid.with_order(sum_order), n_sat, |n| {
                let mut p = gaussian_prefix(&params.z, alpha.ratio(), n, d)?;
                for s in 0..r {
                    mul_poch_inf(&mut p, &params.x[s].shift(Ratio::from_integer(n)), Ratio::one(), false)?;
                    mul_poch_inf(&mut p, &params.y[s].shift(Ratio::from_integer(1 - n)), Ratio::one(), false)?;
                }
                Ok(p)
            })?;
            let pref_order = grid.order + (-sum.valuation().unwrap_or(0)).max(0);
            Ok(pref.expand(pref_order).mul(&sum).truncate(grid.order))
        }
    }
}

/// `ᵣψᵣ(a⃗; b⃗; q, w) = Σ_{n∈ℤ} Π (a_s)_n/(b_s)_n w^n`, evaluated as
/// `L_r(b⃗; 1/a⃗; q, (−1)^r w Π a_s)`.
pub fn psi_r_exact(upper: &[QMonomial], lower: &[QMonomial], w: &QMonomial, grid: ExponentGrid) -> Result<ExactSeries> {
    let r = upper.len();
    if lower.len() != r {
        return Err(Error::DomainError("psi needs as many upper as lower parameters".into()));
    }
    let y = upper.iter().map(|a| a.recip()).collect::<Result<Vec<_>>>()?;
    let mut z = w.clone();
    for a in upper {
        z = z.mul(&a.neg());
    }
    let params = ExactParams { alpha: AlphaRational::integer(r as i64), x: lower.to_vec(), y, z };
    l_vector_exact(&params, LForm::Pochhammer, grid)
}

/// `H_α(x⃗; y⃗; q) = Σ_{i,j ≥ 0} q^{Q_α(i,j)/2} Π (−x_s)^{i_s} (−y_s)^{j_s} / ((q)_{i_s} (q)_{j_s})`.
///
/// The index box comes from `Q_α ≥ λ‖v‖²` on the orthant (`λ` counted over
/// nonzero parameters only); when `λ = 0` every nonzero parameter must carry
/// a positive q-power. Inner sums are folded by Horner's rule in `1/(q)_v`.
pub fn h_alpha_exact(
    alpha: AlphaRational,
    x: &[QMonomial],
    y: &[QMonomial],
    grid: ExponentGrid,
) -> Result<ExactSeries> {
    let r = x.len();
    if r == 0 || r > 2 || y.len() != r {
        return Err(Error::DomainError("H needs rank 1 or 2 with matching x and y".into()));
    }
    let params: Vec<QMonomial> = x.iter().chain(y).map(|p| p.neg()).collect();
    let active_i = x.iter().filter(|p| !p.is_zero()).count();
    let active_j = y.iter().filter(|p| !p.is_zero()).count();
    let form = QuadFormQ { alpha, r };
    let lambda = form.orthant_bound(active_i, active_j);
    let d = grid.denom;
    let mut expo = vec![0i64; 2 * r];
    for (k, p) in params.iter().enumerate() {
        if !p.is_zero() {
            expo[k] = p.grid_index(d)?;
        }
    }
    let active: Vec<usize> = (0..2 * r).filter(|&k| !params[k].is_zero()).collect();
    let order = grid.order;
    let (radius, lin_cap) = if lambda < Ratio::zero() {
        return Err(Error::Divergence(format!("H diverges for alpha = {}/{} with these parameters", alpha.a, alpha.b)));
    } else if lambda.is_zero() {
        let e_min = active.iter().map(|&k| expo[k]).min();
        match e_min {
            None => (0.0, 0),
            Some(e) if e <= 0 => {
                return Err(Error::Divergence("H at alpha = r needs parameters of positive valuation".into()));
            }
            Some(e) => (f64::INFINITY, ((order - 1) / e).max(0)),
        }
    } else {
        let lam = *lambda.numer() as f64 / *lambda.denom() as f64;
        let e_neg = active.iter().map(|&k| (-expo[k]).max(0)).max().unwrap_or(0) as f64 / d as f64;
        let n = (active.len() as f64).sqrt();
        let nq = order as f64 / d as f64;
        let big_r = (e_neg * n + (e_neg * e_neg * n * n + 2.0 * lam * nq).sqrt()) / lam;
        (big_r + 1e-9, big_r.floor() as i64)
    };
    let bound: Vec<i64> = (0..2 * r).map(|k| if params[k].is_zero() { 0 } else { lin_cap }).collect();
    let ctx = HGrouped {
        r,
        alpha,
        denom: d as i64,
        order,
        coeff: params.iter().map(|p| p.coeff.clone()).collect(),
        expo,
        bound,
        r2: radius * radius,
    };
    ctx.sum(grid)
}

/// Index tuples of one side (`i⃗` or `j⃗`) with their part of the scaled
/// exponent `2a·E = D(aΣv² − b d²) + 2a·lin`.
struct Side {
    /// `(Σv, scaled exponent, tuple)`, sorted by exponent within each sum.
    by_sum: Vec<Vec<(i128, Vec<i64>)>>,
}

struct HGrouped {
    r: usize,
    alpha: AlphaRational,
    denom: i64,
    order: i64,
    coeff: Vec<BigRational>,
    expo: Vec<i64>,
    bound: Vec<i64>,
    r2: f64,
}

impl HGrouped {
    fn side(&self, offset: usize) -> Side {
        let a = self.alpha.a as i128;
        let d = self.denom as i128;
        let bounds = &self.bound[offset..offset + self.r];
        let max_sum: i64 = bounds.iter().sum();
        let mut by_sum: Vec<Vec<(i128, Vec<i64>)>> = vec![Vec::new(); max_sum as usize + 1];
        let mut v = vec![0i64; self.r];
        loop {
            let sq: i64 = v.iter().map(|c| c * c).sum();
            if (sq as f64) <= self.r2 {
                let lin: i128 = v.iter().enumerate().map(|(s, &c)| (self.expo[offset + s] * c) as i128).sum();
                let scaled = d * a * sq as i128 + 2 * a * lin;
                let m: i64 = v.iter().sum();
                by_sum[m as usize].push((scaled, v.clone()));
            }
            let mut k = 0;
            loop {
                if k == self.r {
                    for group in &mut by_sum {
                        group.sort();
                    }
                    return Side { by_sum };
                }
                v[k] += 1;
                if v[k] <= bounds[k] {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
        }
    }

    /// Sums leaves grouped by `(Σi, Σj)`. The cross term `−b(Σi − Σj)²` is
    /// constant on a group, so each group is cut exactly from its smallest
    /// exponent, and each leaf's `Π 1/(q)_v` is an integer series in `q`.
    fn sum(&self, grid: ExponentGrid) -> Result<ExactSeries> {
        let (a, b) = (self.alpha.a as i128, self.alpha.b as i128);
        let d = self.denom as i128;
        let limit = 2 * a * self.order as i128;
        let xs = self.side(0);
        let ys = self.side(self.r);
        let q_terms = ((self.order.max(0) + self.denom - 1) / self.denom) as usize + 1;
        let top = self.bound.iter().copied().max().unwrap_or(0) as usize;
        let pinv = recip_poch_table(top, q_terms)?;
        let powers: Vec<Vec<BigRational>> = (0..2 * self.r)
            .map(|k| {
                let mut p = vec![BigRational::one()];
                for j in 1..=self.bound[k] as usize {
                    let next = &p[j - 1] * &self.coeff[k];
                    p.push(next);
                }
                p
            })
            .collect();
        let side_series = |offset: usize, v: &[i64]| -> Result<(BigRational, Vec<u128>)> {
            let mut c = BigRational::one();
            let mut ser = vec![1u128];
            for (s, &e) in v.iter().enumerate() {
                c *= &powers[offset + s][e as usize];
                ser = convolve(&ser, &pinv[e as usize], q_terms)?;
            }
            Ok((c, ser))
        };

        let mut acc: std::collections::BTreeMap<i64, BigRational> = std::collections::BTreeMap::new();
        let mut ycache: std::collections::HashMap<Vec<i64>, (BigRational, Vec<u128>)> =
            std::collections::HashMap::new();
        for (m, xg) in xs.by_sum.iter().enumerate() {
            let Some(x_min) = xg.first().map(|t| t.0) else { continue };
            for (n, yg) in ys.by_sum.iter().enumerate() {
                let Some(y_min) = yg.first().map(|t| t.0) else { continue };
                let diff = m as i128 - n as i128;
                let cross = d * b * diff * diff;
                if x_min + y_min - cross >= limit {
                    continue;
                }
                for (sx, vx) in xg {
                    if sx + y_min - cross >= limit {
                        break;
                    }
                    let (cx, px) = side_series(0, vx)?;
                    for (sy, vy) in yg {
                        let scaled = sx + sy - cross;
                        if scaled >= limit {
                            break;
                        }
                        if scaled % (2 * a) != 0 {
                            return Err(Error::IncompatibleGrid {
                                from: (2 * self.alpha.a) as u32,
                                to: self.denom as u32,
                            });
                        }
                        let e = (scaled / (2 * a)) as i64;
                        if !ycache.contains_key(vy) {
                            ycache.insert(vy.clone(), side_series(self.r, vy)?);
                        }
                        let (cy, py) = &ycache[vy];
                        let need = ((self.order - e + self.denom - 1) / self.denom) as usize;
                        let c = &cx * cy;
                        if c.is_zero() {
                            continue;
                        }
                        let prod = convolve(&px, py, need.min(q_terms))?;
                        for (t, &v) in prod.iter().enumerate() {
                            if v != 0 {
                                let term = &c * BigRational::from_integer(BigInt::from(v));
                                *acc.entry(e + self.denom * t as i64).or_insert_with(BigRational::zero) += term;
                            }
                        }
                    }
                }
            }
        }
        Ok(ExactSeries::from_terms(grid, acc))
    }
}

/// `1/(q)_i` for `i ≤ top`, each through `q^{len−1}`.
fn recip_poch_table(top: usize, len: usize) -> Result<Vec<Vec<u128>>> {
    let mut out = vec![{
        let mut one = vec![0u128; len];
        one[0] = 1;
        one
    }];
    for i in 1..=top {
        let mut next = out[i - 1].clone();
        for k in i..len {
            next[k] = next[k].checked_add(next[k - i]).ok_or_else(overflow)?;
        }
        out.push(next);
    }
    Ok(out)
}

fn overflow() -> Error {
    Error::PrecisionLoss("partition-type coefficient exceeds 128 bits; lower the order".into())
}

/// Product of two integer series through `q^{len−1}`.
fn convolve(a: &[u128], b: &[u128], len: usize) -> Result<Vec<u128>> {
    let mut out = vec![0u128; len.min(a.len() + b.len() - 1)];
    for (i, &x) in a.iter().enumerate().take(out.len()) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(out.len() - i) {
            let t = x.checked_mul(y).ok_or_else(overflow)?;
            out[i + j] = out[i + j].checked_add(t).ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn h_alpha_box(
    alpha: AlphaRational,
    x: &[QMonomial],
    y: &[QMonomial],
    grid: ExponentGrid,
    cap: i64,
) -> Result<ExactSeries> {
    let r = x.len();
    let params: Vec<QMonomial> = x.iter().chain(y).map(|p| p.neg()).collect();
    let mut expo = vec![0i64; 2 * r];
    for (k, p) in params.iter().enumerate() {
        if !p.is_zero() {
            expo[k] = p.grid_index(grid.denom)?;
        }
    }
    let bound: Vec<i64> = (0..2 * r).map(|k| if params[k].is_zero() { 0 } else { cap }).collect();
    let ctx = HExact {
        r,
        alpha,
        denom: grid.denom,
        grid,
        coeff: params.iter().map(|p| p.coeff.clone()).collect(),
        expo,
        bound,
        r2: f64::INFINITY,
    };
    let mut v = Vec::with_capacity(2 * r);
    Ok(ctx.level(&mut v, &BigRational::one(), 0)?.unwrap_or_else(|| ExactSeries::zero(grid)))
}

#[cfg(test)]
struct HExact {
    r: usize,
    alpha: AlphaRational,
    denom: u32,
    grid: ExponentGrid,
    coeff: Vec<BigRational>,
    expo: Vec<i64>,
    bound: Vec<i64>,
    r2: f64,
}

#[cfg(test)]
impl HExact {
    fn leaf_exponent(&self, v: &[i64], lin: i64) -> Result<i64> {
        let (a, b) = (self.alpha.a as i128, self.alpha.b as i128);
        let sq: i128 = v.iter().map(|&c| (c as i128) * (c as i128)).sum();
        let diff: i128 = v[..self.r].iter().sum::<i64>() as i128 - v[self.r..].iter().sum::<i64>() as i128;
        let num = self.denom as i128 * (a * sq - b * diff * diff);
        if num % (2 * a) != 0 {
            return Err(Error::IncompatibleGrid { from: (2 * self.alpha.a) as u32, to: self.denom });
        }
        Ok((num / (2 * a)) as i64 + lin)
    }

    fn level(&self, v: &mut Vec<i64>, coeff: &BigRational, lin: i64) -> Result<Option<ExactSeries>> {
        let k = v.len();
        if k == self.coeff.len() {
            let e = self.leaf_exponent(v, lin)?;
            if e >= self.grid.order {
                return Ok(None);
            }
            return Ok(Some(ExactSeries::monomial(coeff.clone(), e, self.grid)));
        }
        let used: i64 = v.iter().map(|c| c * c).sum();
        let mut top = self.bound[k];
        while top > 0 && (used + top * top) as f64 > self.r2 {
            top -= 1;
        }
        let mut acc: Option<ExactSeries> = None;
        let one = BigRational::one();
        for j in (0..=top).rev() {
            if let Some(a) = acc.as_mut() {
                a.div_binomial(&one, (j + 1) * self.denom as i64);
            }
            let cj = num_traits::pow(self.coeff[k].clone(), j as usize) * coeff;
            if cj.is_zero() && j > 0 {
                continue;
            }
            v.push(j);
            let child = self.level(v, &cj, lin + self.expo[k] * j)?;
            v.pop();
            if let Some(c) = child {
                acc = Some(match acc {
                    Some(a) => a.add(&c),
                    None => c,
                });
            }
        }
        Ok(acc)
    }
}

/// `base^p` when it is rational.
fn rational_power(base: &BigRational, p: Ratio<i64>) -> Option<BigRational> {
    if base.is_zero() {
        return (p > Ratio::zero()).then(BigRational::zero);
    }
    let neg = base.is_negative();
    let root = *p.denom() as u32;
    if neg && root.is_multiple_of(2) {
        return None;
    }
    let nth = |v: &BigInt| -> Option<BigInt> {
        let r = v.abs().nth_root(root);
        (num_traits::pow(r.clone(), root as usize) == v.abs()).then_some(if v.is_negative() { -r } else { r })
    };
    let rooted = BigRational::new(nth(base.numer())?, nth(base.denom())?);
    let e = *p.numer();
    Some(if e >= 0 { num_traits::pow(rooted, e as usize) } else { num_traits::pow(rooted.recip(), (-e) as usize) })
}

fn f1_raw(a: &BigRational, b: Ratio<i64>, c: Ratio<i64>, grid: ExponentGrid) -> Result<ExactSeries> {
    units(b, grid.denom)?;
    units(c, grid.denom)?;
    let q = QMonomial::q_power(Ratio::one());
    unilateral_exact(grid, 4, |n| {
        let mut p = QProduct::one(grid.denom);
        p.mul_monomial(&num_traits::pow(a.clone(), n as usize), units(b * n * n + c * n, grid.denom)?);
        mul_poch(&mut p, &q, Ratio::one(), n, true)?;
        Ok(p)
    })
}

fn f2_raw(a: &BigRational, b: Ratio<i64>, c: Ratio<i64>, grid: ExponentGrid) -> Result<ExactSeries> {
    units(b, grid.denom)?;
    units(c, grid.denom)?;
    let mq = QMonomial::new(-BigRational::one(), Ratio::one());
    unilateral_exact(grid, 4, |n| {
        let mut p = QProduct::one(grid.denom);
        p.mul_monomial(&num_traits::pow(a.clone(), n as usize), units(b * n * n + c * n, grid.denom)?);
        mul_poch(&mut p, &mq, Ratio::one(), n, false)?;
        Ok(p)
    })
}

pub(crate) fn check_f_domain(which: FFamily, a: f64, b: f64) -> Result<()> {
    let ok = match which {
        FFamily::F1 | FFamily::F1Hat | FFamily::F1Tilde => a > 0.0 && b >= 0.5,
        FFamily::F2 | FFamily::F2Hat | FFamily::F2Tilde => (a > 0.5 && b > 0.0) || (a > 0.5 && a < 1.0 && b == 0.0),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::DomainError(format!("({a}, {b}) is outside the domain of {which:?}")))
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn alpha_of(r: Ratio<i64>) -> Result<AlphaRational> {
    AlphaRational::new(*r.numer(), *r.denom())
}

/// A member of the `f`-families with rational `a`, `b`, `c`.
///
/// The tilde members need `a^{1/(2b)}` (resp. `a^{1/(1+2b)}`) to be rational.
pub fn f_family_exact(
    which: FFamily,
    a: &BigRational,
    b: Ratio<i64>,
    c: Ratio<i64>,
    grid: ExponentGrid,
) -> Result<ExactSeries> {
    use num_traits::ToPrimitive;
    check_f_domain(which, a.to_f64().unwrap_or(f64::NAN), ratio_f64(b))?;
    let half = Ratio::new(1, 2);
    match which {
        FFamily::F1 => f1_raw(a, b, c, grid),
        FFamily::F2 => f2_raw(a, b, c, grid),
        FFamily::F1Hat => {
            let z = QMonomial::new(a.clone(), b + c);
            l_scalar_exact(&QMonomial::q_power(Ratio::one()), &z, alpha_of(b * 2)?, grid)
        }
        FFamily::F2Hat => {
            let z = QMonomial::new(a.recip(), b - c);
            l_scalar_exact(&QMonomial::constant(-BigRational::one()), &z, alpha_of(b * 2 + 1)?, grid)
        }
        FFamily::F1Tilde => {
            let root = rational_power(a, -(b * 2).recip())
                .ok_or_else(|| Error::DomainError(format!("a^(-1/(2b)) is irrational for a = {a}")))?;
            f1_raw(&-root, half - (b * 4).recip(), half - c / (b * 2), grid)
        }
        FFamily::F2Tilde => {
            let s = b * 2 + 1;
            let root = rational_power(a, s.recip())
                .ok_or_else(|| Error::DomainError(format!("a^(1/(1+2b)) is irrational for a = {a}")))?;
            f1_raw(&root, b / s, (c - b) / s, grid)
        }
    }
}
