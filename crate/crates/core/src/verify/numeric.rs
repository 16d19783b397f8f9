//! Both sides of every numeric identity at a single point.

use std::collections::HashMap;

use rug::Float;

use super::params::Args;
use crate::asym::{lem21_sides, main1_sides, mth1_sides};
use crate::bilateral::{h_alpha_value, l_vector_value, LForm, NumericParams};
use crate::error::{Error, Result};
use crate::numq::{self, sum_by_ratio, sum_direct, HPComplex, Precision};
use crate::qfun::{eta_transform_sides, poch_inf_value, q_pow, theta_value, ThetaForm};

fn dom(msg: impl Into<String>) -> Error {
    Error::DomainError(msg.into())
}

/// `e^{2πik/a}`.
fn zeta(k: i64, a: i64, prec: Precision) -> HPComplex {
    let w = prec.working();
    let ang = Float::with_val(w, numq::pi(prec) * 2u32) * k / a;
    HPComplex::cis(&ang)
}

/// `Σ_{n∈μ+ℤ} e^{n·s − c·n(n−1)/2}` for real `s` and `c > 0`.
fn shifted_gaussian(mu: &Float, s: &Float, c: &Float, prec: Precision) -> Result<HPComplex> {
    let w = prec.working();
    let half_c = Float::with_val(w, c / 2u32);
    let term = |k: i64| -> Result<HPComplex> {
        let n = Float::with_val(w, mu + k);
        let nm1 = Float::with_val(w, &n - 1u32);
        let e = Float::with_val(w, &n * s) - Float::with_val(w, &half_c * Float::with_val(w, &n * &nm1));
        Ok(HPComplex::from_real(e.exp()))
    };
    let peak = (s.to_f64() / c.to_f64() + 0.5 - mu.to_f64()).abs().ceil() as i64 + 2;
    let right = sum_direct(0, 1, peak, term, prec)?;
    let left = sum_direct(-1, -1, peak, term, prec)?;
    Ok(right.add(&left))
}

fn real_q(a: &Args, prec: Precision) -> Result<(Float, HPComplex)> {
    a.nome(prec)
}

fn eta(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let (t, _) = real_q(a, prec)?;
    let (l, r) = eta_transform_sides(&t, prec)?;
    Ok((HPComplex::from_real(l), HPComplex::from_real(r)))
}

fn thm_main1(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let (t, _) = real_q(a, prec)?;
    main1_sides(&a.real("alpha", prec)?, &a.complex("x", prec)?, &a.real("z", prec)?, &t, prec)
}

fn thm_mth1(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let (t, _) = real_q(a, prec)?;
    let r = a.int("r")? as usize;
    let x = a.indexed("x", r, |a, k| a.complex(k, prec))?;
    let y = a.indexed("y", r, |a, k| a.complex(k, prec))?;
    mth1_sides(&a.real("alpha", prec)?, &x, &y, &a.real("z", prec)?, &t, prec)
}

fn thm_mth(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let w = prec.working();
    let (ia, ib) = (a.int("a")?, a.int("b")?);
    let r = a.int("r")?;
    if ia < 1 || ib < 1 || num_integer::gcd(ia, ib) != 1 || ia < ib * r || !(1..=2).contains(&r) {
        return Err(dom(format!(
            "needs coprime a, b >= 1 with a >= b r and r in {{1, 2}} (a = {ia}, b = {ib}, r = {r})"
        )));
    }
    let (_, q) = real_q(a, prec)?;
    let x = a.indexed("x", r as usize, |a, k| a.complex(k, prec))?;
    let y = a.indexed("y", r as usize, |a, k| a.complex(k, prec))?;
    let z = a.complex("z", prec)?;
    let alpha = numq::real_ratio(ia, ib, prec);

    let zb = z.powi(ib, prec);
    let zbi = zb.recip()?;
    let params = NumericParams {
        alpha: alpha.clone(),
        x: x.iter().map(|v| v.mul(&zb)).collect(),
        y: y.iter().map(|v| v.mul(&zbi)).collect(),
        z: z.powi(ia, prec),
    };
    let lhs = l_vector_value(&params, LForm::Pochhammer, &q, prec)?;

    let mut den = HPComplex::one(prec);
    for (xs, ys) in params.x.iter().zip(&params.y) {
        den = den.mul(&poch_inf_value(xs, &q, prec)?).mul(&poch_inf_value(&q.mul(ys), &q, prec)?);
    }
    let base = q_pow(&q, &numq::real_ratio(1, ia * ib, prec), prec);
    let shift = q_pow(&q, &numq::real_ratio(1 - ia, 2 * ia * ib, prec), prec);
    let mut acc = HPComplex::zero(prec);
    for u in 0..ia {
        let zu = zeta(u, ia, prec);
        let zc = zu.conj();
        let xs: Vec<_> = x.iter().map(|v| v.mul(&zu)).collect();
        let ys: Vec<_> = y.iter().map(|v| v.mul(&zc)).collect();
        let h = h_alpha_value(&alpha, &xs, &ys, &q, prec)?;
        let th = theta_value(&zc.mul(&z).mul(&shift).neg(), &base, ThetaForm::Product, prec)?;
        acc = acc.add(&h.mul(&th));
    }
    let rhs = acc.div(&den)?.scale(&Float::with_val(w, Float::with_val(w, ia).recip_ref()));
    Ok((lhs, rhs))
}

fn lem21(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let (t, _) = real_q(a, prec)?;
    let (l, r) = lem21_sides(&a.real("z", prec)?, &a.real("mu", prec)?, &t, None, prec)?;
    Ok((HPComplex::from_real(l), r))
}

fn lem22(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let w = prec.working();
    let (ia, ib, u) = (a.int("a")?, a.int("b")?, a.int("u")?);
    if ia < 1 || ib < 1 || num_integer::gcd(ia, ib) != 1 {
        return Err(dom("needs coprime positive a and b"));
    }
    let z = a.real("z", prec)?;
    if z <= 0 {
        return Err(dom("needs z > 0"));
    }
    let (t, q) = real_q(a, prec)?;
    // z^{an} q^{a n(n−1)/2} = e^{n·a log z − a t n(n−1)/2}
    let s = Float::with_val(w, z.ln_ref()) * ia;
    let c = Float::with_val(w, &t * ia);
    let mut lhs = HPComplex::zero(prec);
    for v in 0..ia {
        let mu = numq::real_ratio(ib * v, ia, prec);
        let inner = shifted_gaussian(&mu, &s, &c, prec)?;
        lhs = lhs.add(&inner.mul(&zeta(-u * ib * v, ia, prec)));
    }
    let arg = zeta(-u, ia, prec).scale(&z).mul(&q_pow(&q, &numq::real_ratio(1 - ia, 2 * ia, prec), prec)).neg();
    let rhs = theta_value(&arg, &q_pow(&q, &numq::real_ratio(1, ia, prec), prec), ThetaForm::Product, prec)?;
    Ok((lhs, rhs))
}

/// The split of `L_α(zx⃗; z^{−1}y⃗; q, z^α)` into theta-type sums over
/// `μ + ℤ` with `μ = Σ(i_s − j_s)/α`, against the Pochhammer form.
fn eq21(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let w = prec.working();
    let alpha = a.real("alpha", prec)?;
    let r = a.int("r")? as usize;
    if !(1..=2).contains(&r) || alpha <= r as u32 {
        return Err(dom("needs r in {1, 2} and alpha > r"));
    }
    let z = a.real("z", prec)?;
    if z <= 0 {
        return Err(dom("needs z > 0"));
    }
    let (t, q) = real_q(a, prec)?;
    let x = a.indexed("x", r, |a, k| a.complex(k, prec))?;
    let y = a.indexed("y", r, |a, k| a.complex(k, prec))?;

    let zi = Float::with_val(w, z.recip_ref());
    let za = HPComplex::from_real(numq::pow(&z, &alpha)?);
    let params = NumericParams {
        alpha: alpha.clone(),
        x: x.iter().map(|v| v.scale(&z)).collect(),
        y: y.iter().map(|v| v.scale(&zi)).collect(),
        z: za,
    };
    let lhs = l_vector_value(&params, LForm::Pochhammer, &q, prec)?;

    let mut den = HPComplex::one(prec);
    for (xs, ys) in params.x.iter().zip(&params.y) {
        den = den.mul(&poch_inf_value(xs, &q, prec)?).mul(&poch_inf_value(&q.mul(ys), &q, prec)?);
    }
    // index radius from Q ≥ (1 − r/α)|v|² on the orthant
    let lam = 1.0 - r as f64 / alpha.to_f64();
    let tf = t.to_f64();
    let big_m = x.iter().chain(&y).map(|v| v.abs().to_f64()).fold(1.0f64, f64::max).ln();
    let q_inf = poch_inf_value(&q, &q, prec)?.abs().to_f64().ln();
    let budget = (w as f64 + 16.0) * std::f64::consts::LN_2 - 2.0 * r as f64 * q_inf;
    let k = (2 * r) as f64;
    let a2 = tf * lam / 2.0;
    let b1 = k.sqrt() * big_m;
    let radius = (b1 + (b1 * b1 + 4.0 * a2 * budget).sqrt()) / (2.0 * a2);
    let cap = radius.ceil() as i64;

    // (−x)^i/(q)_i tables
    let table = |v: &HPComplex| -> Vec<HPComplex> {
        let mut out = vec![HPComplex::one(prec)];
        let mv = v.neg();
        let mut qi = HPComplex::one(prec);
        let one = HPComplex::one(prec);
        for i in 1..=cap {
            qi = qi.mul(&q);
            let prev = out[i as usize - 1].clone();
            out.push(prev.mul(&mv).div(&one.sub(&qi)).expect("q^i != 1"));
        }
        out
    };
    let tabs: Vec<Vec<HPComplex>> = x.iter().chain(&y).map(table).collect();
    let log_z_alpha = Float::with_val(w, z.ln_ref()) * &alpha;
    let c = Float::with_val(w, &alpha * &t);
    let mut gcache: HashMap<i64, HPComplex> = HashMap::new();
    let mut acc = HPComplex::zero(prec);
    let mut idx = vec![0i64; 2 * r];
    let r2 = radius * radius;
    loop {
        let norm: i64 = idx.iter().map(|v| v * v).sum();
        if (norm as f64) <= r2 {
            let d: i64 = (0..r).map(|s| idx[s] - idx[r + s]).sum();
            // Q = Σ(i² + j²) − d²/α
            let qf = Float::with_val(w, norm) - Float::with_val(w, Float::with_val(w, d * d) / &alpha);
            let weight = Float::with_val(w, -Float::with_val(w, &qf * &t) / 2u32).exp();
            let g = match gcache.get(&d) {
                Some(g) => g.clone(),
                None => {
                    let mu = Float::with_val(w, Float::with_val(w, d) / &alpha);
                    let g = shifted_gaussian(&mu, &log_z_alpha, &c, prec)?;
                    gcache.insert(d, g.clone());
                    g
                }
            };
            let mut term = g.scale(&weight);
            for (k, &i) in idx.iter().enumerate() {
                term = term.mul(&tabs[k][i as usize]);
            }
            acc = acc.add(&term);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok((lhs, acc.div(&den)?));
            }
            idx[k] += 1;
            if idx[k] <= cap {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Whether `w = q^k` for some integer `k ≥ 0`, to half the working precision.
fn is_q_power(w: &HPComplex, q: &HPComplex, prec: Precision) -> bool {
    if !w.is_real() || w.re <= 0 {
        return false;
    }
    let k = (w.re.to_f64().ln() / q.re.to_f64().ln()).round();
    if k < 0.0 || !k.is_finite() {
        return false;
    }
    let qk = q.powi(k as i64, prec);
    numq::log2_abs(&w.rel_diff(&qk)) < -(prec.bits as f64) / 2.0
}

fn promr1(a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    let (_, q) = real_q(a, prec)?;
    let y = a.complex("y", prec)?;
    let z = a.complex("z", prec)?;
    if z.is_zero() || y.abs() <= q.abs() {
        return Err(dom("needs z != 0 and |y| > |q|"));
    }
    let yi = y.recip()?;
    let mzy = z.neg().mul(&yi);
    if is_q_power(&yi, &q, prec) || is_q_power(&mzy, &q, prec) {
        return Err(dom("1/y and -z/y must avoid {1, q, q^2, ...}"));
    }
    let one = HPComplex::one(prec);
    // Σ_{n≥1} zⁿ q^{n(n−1)/2}/(y)_n, ratio z qⁿ/(1 − y qⁿ)
    let first = z.div(&one.sub(&y))?;
    let mut qn = q.clone();
    let s1 = sum_by_ratio(
        first,
        1,
        1,
        |_| {
            let r = z.mul(&qn).div(&one.sub(&y.mul(&qn)));
            qn = qn.mul(&q);
            r
        },
        prec,
    )?;
    // (q/y)_∞ Σ_ℓ (q/y)^ℓ/((q)_ℓ (1 + y q^ℓ/z))
    let qy = q.mul(&yi);
    let yz = y.div(&z)?;
    let mut coef = one.clone();
    let mut ql = one.clone();
    let s2 = sum_direct(
        0,
        1,
        4,
        |l| {
            if l > 0 {
                coef = coef.mul(&qy).div(&one.sub(&ql.mul(&q)))?;
                ql = ql.mul(&q);
            }
            coef.div(&one.add(&yz.mul(&ql)))
        },
        prec,
    )?;
    let lhs = s1.add(&s2.mul(&poch_inf_value(&qy, &q, prec)?));
    let th = theta_value(&z.neg(), &q, ThetaForm::Product, prec)?;
    let den = poch_inf_value(&y, &q, prec)?.mul(&poch_inf_value(&yz.neg(), &q, prec)?);
    Ok((lhs, th.div(&den)?))
}

/// `(lhs, rhs)` of a numeric identity.
pub(crate) fn sides(id: &str, a: &Args, prec: Precision) -> Result<(HPComplex, HPComplex)> {
    match id {
        "eta" => eta(a, prec),
        "thm-main1" => thm_main1(a, prec),
        "thm-mth1" => thm_mth1(a, prec),
        "thm-mth" => thm_mth(a, prec),
        "lem21" => lem21(a, prec),
        "lem22" => lem22(a, prec),
        "eq21" => eq21(a, prec),
        "promr1" => promr1(a, prec),
        _ => Err(Error::UnsupportedMode { id: id.into(), mode: "numeric".into() }),
    }
}
