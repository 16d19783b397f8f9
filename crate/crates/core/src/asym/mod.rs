//! Asymptotic main terms at `q = e^{−t}`, both sides of the modular
//! transformations, and fitting of exponential error rates.
//!
//! Every claim is reduced to a pair `(measured, predicted)` of reals whose
//! relative residual `|measured/predicted − 1|` should behave like
//! `A·e^{−C/t}`; [`rate_fit`] recovers `C`.

mod claims;
mod fit;

pub use claims::{Claim, RateRule};
pub use fit::{rate_fit, RateFit, RateSample};

use std::collections::HashMap;

use rug::ops::Pow;
use rug::Float;

use crate::bilateral::{h_alpha_value, l_scalar_value, l_vector_value, LForm, NumericParams};
use crate::error::{Error, Result};
use crate::numq::{self, li2_real, solve_macmain_z, sum_direct, HPComplex, Precision};
use crate::qfun::{poch_inf_value, theta_value, ThetaForm};

/// `q = e^{−t}`.
pub fn nome(t: &Float, prec: Precision) -> Result<HPComplex> {
    if *t <= 0 {
        return Err(Error::DomainError(format!("t = {} must be positive", t.to_f64())));
    }
    Ok(HPComplex::from_real(Float::with_val(prec.working(), -t).exp()))
}

/// `|a/b − 1|`.
pub fn relative_residual(measured: &Float, predicted: &Float) -> Result<Float> {
    if predicted.is_zero() {
        return Err(Error::DomainError("predicted value is zero".into()));
    }
    let w = measured.prec().max(predicted.prec());
    Ok((Float::with_val(w, measured / predicted) - 1u32).abs())
}

/// Exponential rate `Li₂(1−z) + b log²z` of the unilateral sum
/// `Σ aⁿ q^{bn²+cn}/(q)_n`, with `z` the root of `a z^{2b} + z = 1`.
pub fn macmain_rate(a: &Float, b: &Float, prec: Precision) -> Result<Float> {
    let w = prec.working();
    let z = solve_macmain_z(a, b, prec)?;
    let lz = Float::with_val(w, z.ln_ref());
    let one_minus = Float::with_val(w, 1u32 - &z);
    Ok(li2_real(&one_minus, prec)? + Float::with_val(w, lz.square_ref()) * b)
}

/// Leading factor `z^c/√(z+2b(1−z)) · exp((Li₂(1−z)+b log²z)/t)`.
pub fn macmain_leading(a: &Float, b: &Float, c: &Float, t: &Float, prec: Precision) -> Result<Float> {
    if *t <= 0 {
        return Err(Error::DomainError("t must be positive".into()));
    }
    let w = prec.working();
    let z = solve_macmain_z(a, b, prec)?;
    let rate = macmain_rate(a, b, prec)?;
    let den = Float::with_val(w, Float::with_val(w, 1u32 - &z) * b) * 2u32 + &z;
    let pref = Float::with_val(w, (&z).pow(c)) / den.sqrt();
    Ok(pref * Float::with_val(w, rate / t).exp())
}

/// Number of Gaussian terms kept on each side so that the first omitted one,
/// `e^{−2π²(N+1)²/(αt)}`, is below `2^{−working−20}`.
pub fn gaussian_cut(alpha: &Float, t: &Float, prec: Precision) -> i64 {
    let budget = (prec.working() as f64 + 20.0) * std::f64::consts::LN_2;
    let scale = 2.0 * std::f64::consts::PI.powi(2) / (alpha.to_f64() * t.to_f64());
    ((budget / scale).sqrt().ceil() as i64 - 1).max(0)
}

/// `√(2πz/t)·e^{t/8+log²z/(2t)}`, the common prefactor of the modular side.
fn modular_prefactor(z: &Float, t: &Float, prec: Precision) -> Float {
    let w = prec.working();
    let pi = numq::pi(prec);
    let lz = Float::with_val(w, z.ln_ref());
    let root = Float::with_val(w, Float::with_val(w, &pi * 2u32) * z / t).sqrt();
    let e = Float::with_val(w, t / 8u32) + Float::with_val(w, lz.square_ref()) / Float::with_val(w, t * 2u32);
    root * e.exp()
}

/// Both sides of `Σ_{n∈μ+ℤ} zⁿ e^{−t n(n−1)/2} = √(2πz/t)e^{t/8+log²z/(2t)}
/// Σ_n e^{2πin(μ−1/2−log z/t) − 2π²n²/t}`, the right side cut at `|n| ≤ n_cut`
/// (default: [`gaussian_cut`] with `α = 1`).
pub fn lem21_sides(
    z: &Float,
    mu: &Float,
    t: &Float,
    n_cut: Option<i64>,
    prec: Precision,
) -> Result<(Float, HPComplex)> {
    if *z <= 0 || *t <= 0 {
        return Err(Error::DomainError("lemma sides need z > 0 and t > 0".into()));
    }
    let w = prec.working();
    let lz = Float::with_val(w, z.ln_ref());
    let half_t = Float::with_val(w, t / 2u32);
    let term = |k: i64| -> Result<HPComplex> {
        let n = Float::with_val(w, mu + k);
        let nm1 = Float::with_val(w, &n - 1u32);
        let e = Float::with_val(w, &n * &lz) - Float::with_val(w, &half_t * Float::with_val(w, &n * &nm1));
        Ok(HPComplex::from_real(e.exp()))
    };
    let peak = (lz.to_f64() / t.to_f64() + 0.5 - mu.to_f64()).abs().ceil() as i64 + 2;
    let right = sum_direct(0, 1, peak, term, prec)?;
    let left = sum_direct(-1, -1, peak, term, prec)?;
    let lhs = right.add(&left).re;

    let n_cut = n_cut.unwrap_or_else(|| gaussian_cut(&Float::with_val(w, 1u32), t, prec));
    let pi = numq::pi(prec);
    let phase = Float::with_val(w, mu - Float::with_val(w, 0.5)) - Float::with_val(w, &lz / t);
    let two_pi2_t = Float::with_val(w, Float::with_val(w, pi.square_ref()) * 2u32) / t;
    let mut acc = HPComplex::zero(prec);
    for n in -n_cut..=n_cut {
        let ang = Float::with_val(w, Float::with_val(w, &pi * 2u32) * n) * &phase;
        let decay = Float::with_val(w, -Float::with_val(w, &two_pi2_t * (n * n))).exp();
        acc = acc.add(&HPComplex::cis(&ang).scale(&decay));
    }
    Ok((lhs, acc.scale(&modular_prefactor(z, t, prec))))
}

/// `√(2πz^α/(αt))·e^{αt/8+α log²z/(2t)}`.
fn alpha_prefactor(alpha: &Float, z: &Float, t: &Float, prec: Precision) -> Float {
    let w = prec.working();
    let za = Float::with_val(w, z.pow(alpha));
    let at = Float::with_val(w, alpha * t);
    let lz = Float::with_val(w, z.ln_ref());
    let pi = numq::pi(prec);
    let root = Float::with_val(w, Float::with_val(w, &pi * 2u32) * &za / &at).sqrt();
    let e = Float::with_val(w, &at / 8u32)
        + Float::with_val(w, Float::with_val(w, lz.square_ref()) * alpha) / Float::with_val(w, t * 2u32);
    root * e.exp()
}

/// Weight `e^{2πin(1/2−log z/t) − 2π²n²/(αt)}` of the `n`-th dual term.
fn dual_weight(n: i64, alpha: &Float, z: &Float, t: &Float, prec: Precision) -> HPComplex {
    let w = prec.working();
    let pi = numq::pi(prec);
    let lz = Float::with_val(w, z.ln_ref());
    let phase = Float::with_val(w, 0.5) - Float::with_val(w, &lz / t);
    let ang = Float::with_val(w, Float::with_val(w, &pi * 2u32) * n) * phase;
    let decay = Float::with_val(w, Float::with_val(w, pi.square_ref()) * (2 * n * n)) / Float::with_val(w, alpha * t);
    HPComplex::cis(&ang).scale(&Float::with_val(w, -decay).exp())
}

/// `e^{2πin/α}`.
fn root_of_unity(n: i64, alpha: &Float, prec: Precision) -> HPComplex {
    let w = prec.working();
    let ang = Float::with_val(w, Float::with_val(w, numq::pi(prec) * 2u32) * n) / alpha;
    HPComplex::cis(&ang)
}

fn check_alpha_z_t(alpha: &Float, z: &Float, t: &Float, min_alpha: u32) -> Result<()> {
    if *alpha < min_alpha || *z <= 0 || *t <= 0 {
        return Err(Error::DomainError(format!("needs alpha >= {min_alpha}, z > 0 and t > 0")));
    }
    Ok(())
}

/// Both sides of the scalar modular transformation:
/// `L_α(zx; q, z^α)` and `√(2πz^α/(αt))e^{αt/8+α log²z/(2t)}/(zx)_∞ ·
/// Σ_n L_{1−1/α}(q; q, −e^{2πin/α} x q^{(1−1/α)/2}) e^{2πin(1/2−log z/t) − 2π²n²/(αt)}`.
///
/// `α = 1` is accepted only for `|x| < 1`.
pub fn main1_sides(
    alpha: &Float,
    x: &HPComplex,
    z: &Float,
    t: &Float,
    prec: Precision,
) -> Result<(HPComplex, HPComplex)> {
    check_alpha_z_t(alpha, z, t, 1)?;
    if *alpha == 1 && x.abs() >= 1 {
        return Err(Error::DomainError("alpha = 1 needs |x| < 1".into()));
    }
    let w = prec.working();
    let q = nome(t, prec)?;
    let za = HPComplex::from_real(Float::with_val(w, z.pow(alpha)));
    let zx = x.scale(z);
    let lhs = l_scalar_value(&zx, &za, alpha, &q, prec)?;

    let beta = Float::with_val(w, 1u32 - Float::with_val(w, alpha.recip_ref()));
    let qb = Float::with_val(w, Float::with_val(w, &beta * t) / -2i32).exp();
    let base = x.scale(&qb).neg();
    let n_cut = gaussian_cut(alpha, t, prec);
    let mut acc = HPComplex::zero(prec);
    for n in -n_cut..=n_cut {
        let arg = base.mul(&root_of_unity(n, alpha, prec));
        let l = l_scalar_value(&q, &arg, &beta, &q, prec)?;
        acc = acc.add(&l.mul(&dual_weight(n, alpha, z, t, prec)));
    }
    let den = poch_inf_value(&zx, &q, prec)?;
    let rhs = acc.scale(&alpha_prefactor(alpha, z, t, prec)).div(&den)?;
    Ok((lhs, rhs))
}

/// Smallest integer period of `n ↦ e^{2πin/α}` when `α = m/k` with `k ≤ 12`.
fn unity_period(alpha: &Float) -> Option<i64> {
    let a = alpha.to_f64();
    (1..=12i64).find_map(|k| {
        let m = a * k as f64;
        ((m - m.round()).abs() < 1e-12 && m.round() >= 1.0).then(|| m.round() as i64)
    })
}

/// Vector parameters `(zx⃗, z^{−1}y⃗)` and `Π(zx_s, qz^{−1}y_s)_∞`.
fn vector_setup(
    x: &[HPComplex],
    y: &[HPComplex],
    z: &Float,
    q: &HPComplex,
    prec: Precision,
) -> Result<(Vec<HPComplex>, Vec<HPComplex>, HPComplex)> {
    if x.is_empty() || x.len() > 2 || y.len() != x.len() {
        return Err(Error::DomainError("rank must be 1 or 2 with matching x and y".into()));
    }
    let w = prec.working();
    let zi = Float::with_val(w, z.recip_ref());
    let zx: Vec<_> = x.iter().map(|v| v.scale(z)).collect();
    let yz: Vec<_> = y.iter().map(|v| v.scale(&zi)).collect();
    let mut den = HPComplex::one(prec);
    for (a, b) in zx.iter().zip(&yz) {
        den = den.mul(&poch_inf_value(a, q, prec)?).mul(&poch_inf_value(&q.mul(b), q, prec)?);
    }
    Ok((zx, yz, den))
}

/// Both sides of the vector modular transformation:
/// `L_α(zx⃗; z^{−1}y⃗; q, z^α)` and
/// `√(2πz^α/(αt))e^{αt/8+α log²z/(2t)}/Π(zx_s, qz^{−1}y_s)_∞ ·
/// Σ_n H_α(e^{2πin/α}x⃗; e^{−2πin/α}y⃗; q) e^{2πin(1/2−log z/t) − 2π²n²/(αt)}`.
pub fn mth1_sides(
    alpha: &Float,
    x: &[HPComplex],
    y: &[HPComplex],
    z: &Float,
    t: &Float,
    prec: Precision,
) -> Result<(HPComplex, HPComplex)> {
    check_alpha_z_t(alpha, z, t, 1)?;
    if *alpha <= x.len() as u32 {
        return Err(Error::DomainError("needs alpha > r".into()));
    }
    let w = prec.working();
    let q = nome(t, prec)?;
    let (zx, yz, den) = vector_setup(x, y, z, &q, prec)?;
    let za = HPComplex::from_real(Float::with_val(w, z.pow(alpha)));
    let params = NumericParams { alpha: alpha.clone(), x: zx, y: yz, z: za };
    let lhs = l_vector_value(&params, LForm::Pochhammer, &q, prec)?;

    let period = unity_period(alpha);
    let mut cache: HashMap<i64, HPComplex> = HashMap::new();
    let n_cut = gaussian_cut(alpha, t, prec);
    let mut acc = HPComplex::zero(prec);
    for n in -n_cut..=n_cut {
        let key = period.map_or(n, |p| n.rem_euclid(p));
        let h = match cache.get(&key) {
            Some(h) => h.clone(),
            None => {
                let u = root_of_unity(n, alpha, prec);
                let ui = u.conj();
                let xs: Vec<_> = x.iter().map(|v| v.mul(&u)).collect();
                let ys: Vec<_> = y.iter().map(|v| v.mul(&ui)).collect();
                let h = h_alpha_value(alpha, &xs, &ys, &q, prec)?;
                cache.insert(key, h.clone());
                h
            }
        };
        acc = acc.add(&h.mul(&dual_weight(n, alpha, z, t, prec)));
    }
    let rhs = acc.scale(&alpha_prefactor(alpha, z, t, prec)).div(&den)?;
    Ok((lhs, rhs))
}

/// `L_α(zx⃗; z^{−1}y⃗; q, z^α)/H_α(x⃗; y⃗; q)` and the leading prefactor
/// `√(2πz^α/(αt))e^{αt/8+α log²z/(2t)}/Π(zx_s, qz^{−1}y_s)_∞`.
pub fn mth1_leading_sides(
    alpha: &Float,
    x: &[HPComplex],
    y: &[HPComplex],
    z: &Float,
    t: &Float,
    prec: Precision,
) -> Result<(HPComplex, HPComplex)> {
    check_alpha_z_t(alpha, z, t, 1)?;
    if *alpha <= x.len() as u32 {
        return Err(Error::DomainError("needs alpha > r".into()));
    }
    let w = prec.working();
    let q = nome(t, prec)?;
    let (zx, yz, den) = vector_setup(x, y, z, &q, prec)?;
    let za = HPComplex::from_real(Float::with_val(w, z.pow(alpha)));
    let params = NumericParams { alpha: alpha.clone(), x: zx, y: yz, z: za };
    let l = l_vector_value(&params, LForm::Pochhammer, &q, prec)?;
    let h = h_alpha_value(alpha, x, y, &q, prec)?;
    let pref = HPComplex::from_real(alpha_prefactor(alpha, z, t, prec)).div(&den)?;
    Ok((l.div(&h)?, pref))
}

/// Closed-form quotients predicted for the companion series.
#[derive(Clone, Debug)]
pub enum Predicted {
    /// `f₁/f̃₁` at `(a, b, c)`.
    Mm10 { a: Float, b: Float, c: Float },
    /// `f̂₂/f̃₂` at `(a, b, c)`.
    Mm20 { a: Float, b: Float, c: Float },
    /// `L_α(−1; q, z^α)/L_{1−1/α}(q; q, z^{−1}q^{(1−1/α)/2})`.
    Cor2 { alpha: Float, z: Float },
    /// `L_α(q; q, z^α)/L_{1−1/α}(q; q, −z^{−1}q^{3/2−1/(2α)})`.
    Cor1 { alpha: Float, z: Float },
}

/// The closed-form quotient, error term excluded.
///
/// For `Mm10` the prefactor is `a^{−c/(2b)}/√(2b)`, the value forced by the
/// `Cor1` form at `α = 2b`, `z^α = aq^{b+c}`.
pub fn predicted_ratio(which: &Predicted, t: &Float, prec: Precision) -> Result<Float> {
    if *t <= 0 {
        return Err(Error::DomainError("t must be positive".into()));
    }
    let w = prec.working();
    let f = |v: f64| Float::with_val(w, v);
    let pi2 = Float::with_val(w, numq::pi(prec).square());
    let ln_sq = |v: &Float| -> Result<Float> { Ok(numq::ln(v)?.square()) };
    Ok(match which {
        Predicted::Mm10 { a, b, c } => {
            if *a <= 0 || *b <= 0.5 {
                return Err(Error::DomainError("mm10 needs a > 0 and b > 1/2".into()));
            }
            let two_b = Float::with_val(w, b * 2u32);
            let pref = numq::pow(a, &Float::with_val(w, -Float::with_val(w, c / &two_b)))? / two_b.clone().sqrt();
            let e1 = (Float::with_val(w, &pi2 + Float::with_val(w, ln_sq(a)? * 3u32) / &two_b))
                / Float::with_val(w, t * 6u32);
            let e2 = (Float::with_val(w, c.square_ref()) / Float::with_val(w, b * 4u32) - f(1.0) / 24u32) * t;
            pref * (e1 + e2).exp()
        }
        Predicted::Mm20 { a, b, c } => {
            if *a <= 0 || *b < 0 {
                return Err(Error::DomainError("mm20 needs a > 0 and b >= 0".into()));
            }
            let s = Float::with_val(w, b * 2u32) + 1u32;
            let ex = -Float::with_val(w, Float::with_val(w, c * 2u32) + 1u32) / &s;
            let root = (numq::pow(a, &ex)? * numq::pi(prec) / Float::with_val(w, &s * t)).sqrt();
            let e1 = (Float::with_val(w, ln_sq(a)? * 6u32) / &s - &pi2) / Float::with_val(w, t * 12u32);
            let poly = Float::with_val(w, c.square_ref()) * 6u32 + Float::with_val(w, c * 6u32) - b + 1u32;
            let e2 = poly / Float::with_val(w, &s * 12u32) * t;
            root * (e1 + e2).exp()
        }
        Predicted::Cor2 { alpha, z } => {
            check_alpha_z_t(alpha, z, t, 1)?;
            let za = Float::with_val(w, z.pow(alpha));
            let root = (za * numq::pi(prec) / Float::with_val(w, alpha * t)).sqrt();
            let e1 = (Float::with_val(w, ln_sq(z)? * alpha) * 6u32 - &pi2) / Float::with_val(w, t * 12u32);
            let e2 = Float::with_val(w, Float::with_val(w, alpha * 3u32) - 1u32) * t / 24u32;
            root * (e1 + e2).exp()
        }
        Predicted::Cor1 { alpha, z } => {
            check_alpha_z_t(alpha, z, t, 1)?;
            let half = Float::with_val(w, alpha / 2u32);
            let pref = Float::with_val(w, z.pow(&half)) / alpha.clone().sqrt();
            let e1 = (Float::with_val(w, ln_sq(z)? * alpha) * 3u32 + &pi2) / Float::with_val(w, t * 6u32);
            let e2 = Float::with_val(w, Float::with_val(w, alpha * 3u32) - 1u32) * t / 24u32;
            pref * (e1 + e2).exp()
        }
    })
}

/// `Σ_{n≥1} wⁿ q^{n(n−1)}/(q; q²)_n`.
fn asymm_sum(wv: &Float, q: &Float, prec: Precision) -> Result<Float> {
    let w = prec.working();
    let q2 = Float::with_val(w, q.square_ref());
    let one = HPComplex::one(prec);
    let (mut q2n, mut q2n1) = (HPComplex::one(prec), HPComplex::from_real(q.clone()));
    let wc = HPComplex::from_real(wv.clone());
    let qq = HPComplex::from_real(q2);
    let s = numq::sum_by_ratio(
        one.clone(),
        0,
        1,
        |_| {
            let r = wc.mul(&q2n).div(&one.sub(&q2n1))?;
            q2n = q2n.mul(&qq);
            q2n1 = q2n1.mul(&qq);
            Ok(r)
        },
        prec,
    )?;
    Ok(s.re - 1u32)
}

/// The product `(Σ_{n≥1} (aq^{2c})ⁿ q^{n(n−1)}/(q;q²)_n)(Σ_{n≥1} (aq^{2c})^{−n} q^{n(n−1)}/(q;q²)_n)`
/// and `π/(2a^c t)·exp((π²/3+log²a)/(4t) + (c²+2/3)t)`.
pub fn asymm_sides(a: &Float, c: &Float, t: &Float, prec: Precision) -> Result<(Float, Float)> {
    if *a <= 0 {
        return Err(Error::DomainError("needs a > 0".into()));
    }
    let w = prec.working();
    let q = nome(t, prec)?.re;
    let wv = Float::with_val(w, a * Float::with_val(w, Float::with_val(w, -t) * c * 2u32).exp());
    let wi = Float::with_val(w, wv.recip_ref());
    let lhs = asymm_sum(&wv, &q, prec)? * asymm_sum(&wi, &q, prec)?;

    let pi = numq::pi(prec);
    let ac = numq::pow(a, c)?;
    let pref = Float::with_val(w, &pi / Float::with_val(w, ac * t)) / 2u32;
    let la = numq::ln(a)?;
    let e1 = (Float::with_val(w, pi.square_ref()) / 3u32 + la.square()) / Float::with_val(w, t * 4u32);
    let e2 = (Float::with_val(w, c.square_ref()) + Float::with_val(w, 2u32) / 3u32) * t;
    Ok((lhs, pref * (e1 + e2).exp()))
}

/// The theta-quotient form of the same product, `p = q²`, `z = a p^c`,
/// `y = p^{1/2}`: `(p;p)²_∞ θ(−z;p)θ(−1/z;p)/(θ(y;p)θ(−y/z;p))`.
pub fn asymm_theta_route(a: &Float, c: &Float, t: &Float, prec: Precision) -> Result<Float> {
    if *a <= 0 {
        return Err(Error::DomainError("needs a > 0".into()));
    }
    let w = prec.working();
    let p = nome(&Float::with_val(w, t * 2u32), prec)?;
    let z = HPComplex::from_real(Float::with_val(w, a * Float::with_val(w, Float::with_val(w, -t) * c * 2u32).exp()));
    let y = nome(t, prec)?;
    let th = |v: &HPComplex| theta_value(v, &p, ThetaForm::Product, prec);
    let pp = poch_inf_value(&p, &p, prec)?;
    let num = pp.mul(&pp).mul(&th(&z.neg())?).mul(&th(&z.recip()?.neg())?);
    let den = th(&y)?.mul(&th(&y.div(&z)?.neg())?);
    Ok(num.div(&den)?.re)
}

/// `(q)_∞` and its leading modular term `√(2π/t)·e^{t/24−π²/(6t)}`.
pub fn eta_leading_sides(t: &Float, prec: Precision) -> Result<(Float, Float)> {
    let w = prec.working();
    let q = nome(t, prec)?;
    let lhs = poch_inf_value(&q, &q, prec)?.re;
    let pi = numq::pi(prec);
    let root = Float::with_val(w, Float::with_val(w, &pi * 2u32) / t).sqrt();
    let e = Float::with_val(w, t / 24u32) - Float::with_val(w, pi.square_ref()) / Float::with_val(w, t * 6u32);
    Ok((lhs, root * e.exp()))
}
