use std::f64::consts::LN_2;

use rug::Float;

use super::exact::check_f_domain;
use super::{FFamily, LForm, NumericParams};
use crate::error::{Error, Result};
use crate::numq::{self, sum_by_ratio, sum_direct, HPComplex, Precision};
use crate::qfun::{check_q, poch_inf_value, q_pow};

/// `Some(k)` when `x` equals `q^k` (`1 ≤ k ≤ 8`) to working precision, in
/// which case `1/(x)_n` vanishes for `n ≤ −k`.
fn q_power_index(x: &HPComplex, q: &HPComplex, prec: Precision) -> Option<i64> {
    let tol = Float::with_val(prec.working(), Float::i_exp(1, 8 - prec.working() as i32));
    let mut qk = q.clone();
    for k in 1..=8 {
        if x.rel_diff(&qk) < tol {
            return Some(k);
        }
        qk = qk.mul(q);
    }
    None
}

fn ratio_pole(what: &str, n: i64) -> Error {
    Error::PolePoch(format!("{what} vanishes at n = {n}"))
}

/// `L_α(x; q, z)` numerically, for real `α`.
pub fn l_scalar_value(
    x: &HPComplex,
    z: &HPComplex,
    alpha: &Float,
    q: &HPComplex,
    prec: Precision,
) -> Result<HPComplex> {
    check_q(q)?;
    let finite_left = q_power_index(x, q, prec);
    if *alpha < 1 && finite_left.is_none() {
        return Err(Error::Divergence(format!("L needs alpha >= 1 (got {})", alpha.to_f64())));
    }
    let one = HPComplex::one(prec);
    if z.is_zero() {
        return Ok(one);
    }
    let qa = q_pow(q, alpha, prec);
    let (mut qn, mut qan) = (one.clone(), one.clone());
    let right = sum_by_ratio(
        one.clone(),
        0,
        1,
        |n| {
            let den = one.sub(&x.mul(&qn));
            if den.is_zero() {
                return Err(ratio_pole("1 - x q^n", n));
            }
            let r = z.mul(&qan).div(&den)?;
            qn = qn.mul(q);
            qan = qan.mul(&qa);
            Ok(r)
        },
        prec,
    )?;
    let (qi, qai) = (q.recip()?, qa.recip()?);
    let (mut qn, mut qan) = (qi.clone(), qai.clone());
    let mut bwd = |_n: i64| -> Result<HPComplex> {
        let r = one.sub(&x.mul(&qn)).div(&z.mul(&qan))?;
        qn = qn.mul(&qi);
        qan = qan.mul(&qai);
        Ok(r)
    };
    let left = match finite_left {
        Some(k) => {
            let (mut t, mut acc) = (one.clone(), HPComplex::zero(prec));
            for n in (-(k - 1)..0).rev() {
                t = t.mul(&bwd(n + 1)?);
                acc = acc.add(&t);
            }
            acc
        }
        None => sum_by_ratio(one.clone(), 0, -1, bwd, prec)?.sub(&one),
    };
    Ok(right.add(&left))
}

/// `L_α(x⃗; y⃗; q, z)` numerically in either displayed form.
pub fn l_vector_value(params: &NumericParams, form: LForm, q: &HPComplex, prec: Precision) -> Result<HPComplex> {
    check_q(q)?;
    let r = params.check_rank()?;
    if params.alpha < r as u32 {
        return Err(Error::Divergence(format!("L needs alpha >= {r}")));
    }
    let one = HPComplex::one(prec);
    if params.z.is_zero() {
        return Ok(one);
    }
    let z = &params.z;
    match form {
        LForm::Pochhammer => {
            let excess = Float::with_val(prec.working(), &params.alpha - r as u32);
            let qe = q_pow(q, &excess, prec);
            let (mut qn, mut qen) = (one.clone(), one.clone());
            let right = sum_by_ratio(
                one.clone(),
                0,
                1,
                |n| {
                    let mut num = z.mul(&qen);
                    let mut den = one.clone();
                    for s in 0..r {
                        num = num.mul(&qn.sub(&params.y[s]));
                        den = den.mul(&one.sub(&params.x[s].mul(&qn)));
                    }
                    if den.is_zero() {
                        return Err(ratio_pole("1 - x_s q^n", n));
                    }
                    qn = qn.mul(q);
                    qen = qen.mul(&qe);
                    num.div(&den)
                },
                prec,
            )?;
            let (qi, qei) = (q.recip()?, qe.recip()?);
            let (mut qn, mut qen) = (qi.clone(), qei.clone());
            let left = sum_by_ratio(
                one.clone(),
                0,
                -1,
                |n| {
                    let mut num = one.clone();
                    let mut den = z.mul(&qen);
                    for s in 0..r {
                        num = num.mul(&one.sub(&params.x[s].mul(&qn)));
                        den = den.mul(&qn.sub(&params.y[s]));
                    }
                    if den.is_zero() {
                        return Err(ratio_pole("q^n - y_s", n - 1));
                    }
                    qn = qn.mul(&qi);
                    qen = qen.mul(&qei);
                    num.div(&den)
                },
                prec,
            )?;
            Ok(right.add(&left).sub(&one))
        }
        LForm::Product => {
            let term = |n: i64| -> Result<HPComplex> {
                let qn = q.powi(n, prec);
                let e = Float::with_val(prec.working(), &params.alpha * (n * (n - 1) / 2));
                let mut t = z.powi(n, prec).mul(&q_pow(q, &e, prec));
                for s in 0..r {
                    t = t.mul(&poch_inf_value(&params.x[s].mul(&qn), q, prec)?);
                    t = t.mul(&poch_inf_value(&params.y[s].mul(q).div(&qn)?, q, prec)?);
                }
                Ok(t)
            };
            let right = sum_direct(0, 1, 3, term, prec)?;
            let left = sum_direct(-1, -1, 3, term, prec)?;
            let mut den = one.clone();
            for s in 0..r {
                den = den.mul(&poch_inf_value(&params.x[s], q, prec)?);
                den = den.mul(&poch_inf_value(&params.y[s].mul(q), q, prec)?);
            }
            if den.is_zero() {
                return Err(Error::PolePoch("(x_s, q y_s)_∞ vanishes".into()));
            }
            right.add(&left).div(&den)
        }
    }
}

/// `ᵣψᵣ(a⃗; b⃗; q, w)` through `L_r(b⃗; 1/a⃗; q, (−1)^r w Π a_s)`.
pub fn psi_r_value(
    upper: &[HPComplex],
    lower: &[HPComplex],
    w: &HPComplex,
    q: &HPComplex,
    prec: Precision,
) -> Result<HPComplex> {
    let r = upper.len();
    if lower.len() != r {
        return Err(Error::DomainError("psi needs as many upper as lower parameters".into()));
    }
    let y = upper.iter().map(|a| a.recip()).collect::<Result<Vec<_>>>()?;
    let mut z = w.clone();
    for a in upper {
        z = z.mul(&a.neg());
    }
    let params = NumericParams { alpha: numq::real_int(r as i64, prec), x: lower.to_vec(), y, z };
    l_vector_value(&params, LForm::Pochhammer, q, prec)
}

/// `H_α(x⃗; y⃗; q)` numerically.
///
/// Leaves are bounded by `|q|^{λ‖v‖²/2} Π |x_s|^{i_s} |y_s|^{j_s} / (|q|; |q|)_∞^{2r}`
/// and the index ball is cut where that drops below the working precision.
pub fn h_alpha_value(
    alpha: &Float,
    x: &[HPComplex],
    y: &[HPComplex],
    q: &HPComplex,
    prec: Precision,
) -> Result<HPComplex> {
    check_q(q)?;
    let r = x.len();
    if r == 0 || r > 2 || y.len() != r {
        return Err(Error::DomainError("H needs rank 1 or 2 with matching x and y".into()));
    }
    let dims = 2 * r;
    let params: Vec<HPComplex> = x.iter().chain(y).map(|p| p.neg()).collect();
    let active: Vec<usize> = (0..dims).filter(|&k| !params[k].is_zero()).collect();
    let m = x.iter().filter(|p| !p.is_zero()).count().max(y.iter().filter(|p| !p.is_zero()).count());
    let one = HPComplex::one(prec);
    if active.is_empty() {
        return Ok(one);
    }
    let qabs = q.abs().to_f64();
    let t = -qabs.ln();
    let mut ln_c = 0.0;
    let mut qj = qabs;
    while qj > 1e-20 {
        ln_c -= (1.0 - qj).ln();
        qj *= qabs;
    }
    let budget = (prec.working() as f64 + 24.0) * LN_2 + dims as f64 * ln_c;
    let lnp: Vec<f64> =
        params.iter().map(|p| if p.is_zero() { f64::NEG_INFINITY } else { p.log2_abs() * LN_2 }).collect();
    let lam_zero = *alpha == m as u32;
    let lam = 1.0 - m as f64 / alpha.to_f64();
    let (cap, r2) = if lam_zero {
        let lmax = active.iter().map(|&k| lnp[k]).fold(f64::NEG_INFINITY, f64::max);
        if lmax >= 0.0 {
            return Err(Error::Divergence("H at alpha = r needs all |x_s|, |y_s| < 1".into()));
        }
        let cap = (budget / -lmax).floor() as i64;
        (cap, (cap * cap) as f64)
    } else if lam < 0.0 {
        return Err(Error::Divergence(format!("H diverges for alpha = {}", alpha.to_f64())));
    } else {
        let lplus = active.iter().map(|&k| lnp[k]).fold(0.0, f64::max);
        let n = (active.len() as f64).sqrt();
        let big_r = (lplus * n + (lplus * lplus * n * n + 2.0 * t * lam * budget).sqrt()) / (t * lam);
        (big_r.floor() as i64, big_r * big_r)
    };
    let sq_max = r2.floor() as usize;
    let w = prec.working();
    let sqrt_q = q_pow(q, &Float::with_val(w, 0.5), prec);
    let mut half_pow = Vec::with_capacity(sq_max + 1);
    let mut acc = one.clone();
    for _ in 0..=sq_max {
        half_pow.push(acc.clone());
        acc = acc.mul(&sqrt_q);
    }
    let dmax = r as i64 * cap;
    let two_alpha = Float::with_val(w, alpha * 2u32);
    let dpow: Vec<HPComplex> =
        (-dmax..=dmax).map(|d| q_pow(q, &Float::with_val(w, -(d * d) / &two_alpha), prec)).collect();
    let pw: Vec<Vec<HPComplex>> = params
        .iter()
        .map(|p| {
            let mut v = Vec::with_capacity(cap as usize + 1);
            let mut a = one.clone();
            for _ in 0..=cap {
                v.push(a.clone());
                a = a.mul(p);
            }
            v
        })
        .collect();
    let mut inv = Vec::with_capacity(cap as usize + 1);
    let mut qv = q.clone();
    for _ in 0..=cap {
        inv.push(one.sub(&qv).recip()?);
        qv = qv.mul(q);
    }
    let ctx = HNumeric {
        r,
        alpha: alpha.to_f64(),
        t,
        budget,
        lnp,
        bound: (0..dims).map(|k| if params[k].is_zero() { 0 } else { cap }).collect(),
        r2,
        half_pow,
        dpow,
        dmax,
        pw,
        inv,
    };
    let mut v = Vec::with_capacity(dims);
    Ok(ctx.level(&mut v, &one).unwrap_or_else(|| HPComplex::zero(prec)))
}

struct HNumeric {
    r: usize,
    alpha: f64,
    t: f64,
    budget: f64,
    lnp: Vec<f64>,
    bound: Vec<i64>,
    r2: f64,
    half_pow: Vec<HPComplex>,
    dpow: Vec<HPComplex>,
    dmax: i64,
    pw: Vec<Vec<HPComplex>>,
    inv: Vec<HPComplex>,
}

impl HNumeric {
    fn level(&self, v: &mut Vec<i64>, coeff: &HPComplex) -> Option<HPComplex> {
        let k = v.len();
        if k == self.bound.len() {
            let sq: i64 = v.iter().map(|c| c * c).sum();
            let d: i64 = v[..self.r].iter().sum::<i64>() - v[self.r..].iter().sum::<i64>();
            let quad = (sq as f64 - (d * d) as f64 / self.alpha) / 2.0;
            let lin: f64 = v.iter().zip(&self.lnp).filter(|(c, _)| **c > 0).map(|(c, l)| *c as f64 * l).sum();
            if -self.t * quad + lin < -self.budget {
                return None;
            }
            let val = coeff.mul(&self.half_pow[sq as usize]).mul(&self.dpow[(d + self.dmax) as usize]);
            return Some(val);
        }
        let used: i64 = v.iter().map(|c| c * c).sum();
        let mut top = self.bound[k];
        while top > 0 && (used + top * top) as f64 > self.r2 {
            top -= 1;
        }
        let mut acc: Option<HPComplex> = None;
        for j in (0..=top).rev() {
            if let Some(a) = acc.as_mut() {
                *a = a.mul(&self.inv[j as usize]);
            }
            v.push(j);
            let child = self.level(v, &coeff.mul(&self.pw[k][j as usize]));
            v.pop();
            if let Some(c) = child {
                acc = Some(match acc {
                    Some(a) => a.add(&c),
                    None => c,
                });
            }
        }
        acc
    }
}

/// Members of the `f`-families numerically, for real `a`, `b`, `c`.
pub fn f_family_value(
    which: FFamily,
    a: &Float,
    b: &Float,
    c: &Float,
    q: &HPComplex,
    prec: Precision,
) -> Result<HPComplex> {
    check_q(q)?;
    check_f_domain(which, a.to_f64(), b.to_f64())?;
    let w = prec.working();
    let half = Float::with_val(w, 0.5);
    match which {
        FFamily::F1 => f_raw(true, &HPComplex::from_real(a.clone()), b, c, q, prec),
        FFamily::F2 => f_raw(false, &HPComplex::from_real(a.clone()), b, c, q, prec),
        FFamily::F1Hat => {
            let z = HPComplex::from_real(a.clone()).mul(&q_pow(q, &Float::with_val(w, b + c), prec));
            l_scalar_value(q, &z, &Float::with_val(w, b * 2u32), q, prec)
        }
        FFamily::F2Hat => {
            let z = HPComplex::from_real(Float::with_val(w, a.recip_ref())).mul(&q_pow(
                q,
                &Float::with_val(w, b - c),
                prec,
            ));
            let x = HPComplex::one(prec).neg();
            l_scalar_value(&x, &z, &Float::with_val(w, Float::with_val(w, b * 2u32) + 1u32), q, prec)
        }
        FFamily::F1Tilde => {
            let two_b = Float::with_val(w, b * 2u32);
            let root = numq::pow(a, &Float::with_val(w, -Float::with_val(w, two_b.recip_ref())))?;
            let b1 = Float::with_val(w, &half - Float::with_val(w, Float::with_val(w, b * 4u32).recip_ref()));
            let c1 = Float::with_val(w, &half - Float::with_val(w, c / &two_b));
            f_raw(true, &HPComplex::from_real(-root), &b1, &c1, q, prec)
        }
        FFamily::F2Tilde => {
            let s = Float::with_val(w, Float::with_val(w, b * 2u32) + 1u32);
            let root = numq::pow(a, &Float::with_val(w, s.recip_ref()))?;
            let b1 = Float::with_val(w, b / &s);
            let c1 = Float::with_val(w, Float::with_val(w, c - b) / &s);
            f_raw(true, &HPComplex::from_real(root), &b1, &c1, q, prec)
        }
    }
}

/// `Σ_{n≥0} a^n q^{bn²+cn} / (q)_n` (`recip`) or `Σ a^n q^{bn²+cn} (−q)_n`.
fn f_raw(recip: bool, a: &HPComplex, b: &Float, c: &Float, q: &HPComplex, prec: Precision) -> Result<HPComplex> {
    let w = prec.working();
    let one = HPComplex::one(prec);
    let q2b = q_pow(q, &Float::with_val(w, b * 2u32), prec);
    let mut step = a.mul(&q_pow(q, &Float::with_val(w, b + c), prec));
    let mut qn1 = q.clone();
    sum_by_ratio(
        one.clone(),
        0,
        1,
        |_| {
            let r = if recip { step.div(&one.sub(&qn1))? } else { step.mul(&one.add(&qn1)) };
            step = step.mul(&q2b);
            qn1 = qn1.mul(q);
            Ok(r)
        },
        prec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bilateral::{f_family_exact, h_alpha_exact, l_scalar_exact, l_vector_exact, AlphaRational, ExactParams};
    use crate::exactq::{frac, rat, ExponentGrid, QMonomial};
    use crate::numq::{real, real_ratio};
    use crate::qfun::monomial_value;
    use num_rational::Ratio;

    fn p256() -> Precision {
        Precision::new(256).unwrap()
    }

    fn c(re: f64, im: f64) -> HPComplex {
        HPComplex::from_f64(re, im, p256())
    }

    fn close(a: &HPComplex, b: &HPComplex, bits: i32) -> bool {
        a.rel_diff(b) < Float::with_val(64, Float::i_exp(1, -bits))
    }

    #[test]
    fn scalar_against_plain_loop() {
        // Σ_{|n| ≤ 60} z^n q^{α n(n−1)/2} / (x)_n with every term built from scratch
        let p = p256();
        let (x, z, q) = (c(0.3, 0.1), c(0.7, -0.2), c(0.4, 0.0));
        let alpha = real_ratio(5, 2, p);
        let got = l_scalar_value(&x, &z, &alpha, &q, p).unwrap();
        let mut want = HPComplex::zero(p);
        for n in -60i64..=60 {
            let e = Float::with_val(p.working(), &alpha * (n * (n - 1) / 2));
            let t = z.powi(n, p).mul(&q_pow(&q, &e, p));
            let poch = crate::qfun::poch_finite_value(&x, &q, n, p).unwrap();
            want = want.add(&t.div(&poch).unwrap());
        }
        assert!(close(&got, &want, 240));
    }

    #[test]
    fn scalar_cross_engine() {
        let p = p256();
        let grid = ExponentGrid::with_q_order(2, 120).unwrap();
        let x = QMonomial::constant(frac(1, 2));
        let z = QMonomial::new(frac(-2, 3), Ratio::new(1, 2));
        let alpha = AlphaRational::new(5, 2).unwrap();
        let exact = l_scalar_exact(&x, &z, alpha, grid).unwrap();
        let q = c(0.125, 0.0);
        let num =
            l_scalar_value(&monomial_value(&x, &q, p), &monomial_value(&z, &q, p), &alpha.to_float(p), &q, p).unwrap();
        // truncation at q^120 with q = 1/8 leaves 2^-360
        assert!(close(&exact.evaluate(&q, p), &num, 240));
    }

    #[test]
    fn vector_forms_agree_numerically() {
        let p = p256();
        let q = c(0.35, 0.05);
        let params = NumericParams {
            alpha: real(3.3, p),
            x: vec![c(0.2, 0.1), c(-0.4, 0.0)],
            y: vec![c(0.3, -0.2), c(0.5, 0.0)],
            z: c(0.8, 0.3),
        };
        let a = l_vector_value(&params, LForm::Pochhammer, &q, p).unwrap();
        let b = l_vector_value(&params, LForm::Product, &q, p).unwrap();
        assert!(close(&a, &b, 230));
    }

    #[test]
    fn vector_cross_engine() {
        let p = p256();
        let grid = ExponentGrid::with_q_order(1, 120).unwrap();
        let e = ExactParams {
            alpha: AlphaRational::integer(3),
            x: vec![QMonomial::constant(frac(1, 3)), QMonomial::new(frac(-1, 2), Ratio::from_integer(1))],
            y: vec![QMonomial::constant(frac(1, 5)), QMonomial::zero()],
            z: QMonomial::constant(frac(3, 2)),
        };
        let q = c(0.125, 0.0);
        let exact = l_vector_exact(&e, LForm::Pochhammer, grid).unwrap().evaluate(&q, p);
        let n = NumericParams {
            alpha: real(3.0, p),
            x: e.x.iter().map(|m| monomial_value(m, &q, p)).collect(),
            y: e.y.iter().map(|m| monomial_value(m, &q, p)).collect(),
            z: monomial_value(&e.z, &q, p),
        };
        let num = l_vector_value(&n, LForm::Pochhammer, &q, p).unwrap();
        assert!(close(&exact, &num, 240));
    }

    #[test]
    fn h_cross_engine_and_product_formula() {
        let p = p256();
        let q = c(0.3, 0.0);
        let two = real(2.0, p);
        let x = c(0.5, 0.0);
        let h = h_alpha_value(&two, &[x.clone()], &[x.neg()], &q, p).unwrap();
        // (−x² q; q²)_∞
        let want = poch_inf_value(&x.mul(&x).mul(&q).neg(), &q.mul(&q), p).unwrap();
        assert!(close(&h, &want, 240));
        // the exact r = 2 sum is costly; a modest order is enough for the check
        let grid = ExponentGrid::with_q_order(6, 24).unwrap();
        let xs = [QMonomial::constant(frac(1, 3)), QMonomial::constant(frac(-1, 4))];
        let ys = [QMonomial::constant(frac(1, 5)), QMonomial::constant(frac(2, 3))];
        let ex = h_alpha_exact(AlphaRational::integer(3), &xs, &ys, grid).unwrap();
        let q = c(1.0 / 64.0, 0.0);
        let xv: Vec<_> = xs.iter().map(|m| monomial_value(m, &q, p)).collect();
        let yv: Vec<_> = ys.iter().map(|m| monomial_value(m, &q, p)).collect();
        let num = h_alpha_value(&real(3.0, p), &xv, &yv, &q, p).unwrap();
        // truncation at q^24 with q = 2^-6 leaves about 2^-144
        assert!(close(&ex.evaluate(&q, p), &num, 130));
    }

    #[test]
    fn f_families_numeric() {
        let p = p256();
        let q = c(0.6, 0.0);
        let (a, b, cc) = (real(1.0, p), real(1.0, p), real(0.0, p));
        let f1 = f_family_value(FFamily::F1, &a, &b, &cc, &q, p).unwrap();
        let f1h = f_family_value(FFamily::F1Hat, &a, &b, &cc, &q, p).unwrap();
        assert!(close(&f1, &f1h, 240));
        let f2 = f_family_value(FFamily::F2, &a, &b, &cc, &q, p).unwrap();
        let f2h = f_family_value(FFamily::F2Hat, &a, &b, &cc, &q, p).unwrap();
        assert!(f2h.re > f2.re);
        // cross-engine on the tilde members at a = 64 (rational square and cube roots)
        let grid = ExponentGrid::with_q_order(12, 100).unwrap();
        let q = c(0.125, 0.0);
        for which in [FFamily::F1Tilde, FFamily::F2Tilde, FFamily::F2Hat] {
            let ex = f_family_exact(which, &rat(64), Ratio::from_integer(1), Ratio::new(1, 2), grid)
                .unwrap()
                .evaluate(&q, p);
            let nv = f_family_value(which, &real(64.0, p), &real(1.0, p), &real(0.5, p), &q, p).unwrap();
            assert!(close(&ex, &nv, 240), "{which:?}");
        }
    }

    #[test]
    fn alpha_below_one_needs_q_power() {
        let p = p256();
        let q = c(0.5, 0.0);
        let half = real(0.5, p);
        assert!(l_scalar_value(&c(0.3, 0.0), &c(1.0, 0.0), &half, &q, p).is_err());
        // L_{1/2}(q; q, z) = Σ_{n≥0} z^n q^{n(n−1)/4}/(q)_n
        let z = c(-0.7, 0.0);
        let got = l_scalar_value(&q, &z, &half, &q, p).unwrap();
        let mut want = HPComplex::zero(p);
        for n in 0..200 {
            let e = Float::with_val(p.working(), (n * (n - 1)) as f64 / 4.0);
            let t = z
                .powi(n, p)
                .mul(&q_pow(&q, &e, p))
                .div(&crate::qfun::poch_finite_value(&q, &q, n, p).unwrap())
                .unwrap();
            want = want.add(&t);
        }
        assert!(close(&got, &want, 240));
    }
}
