use rug::ops::Pow;
use rug::Float;

use super::fit::RateFit;
use super::{
    asymm_sides, eta_leading_sides, lem21_sides, main1_sides, mth1_leading_sides, nome, predicted_ratio, Predicted,
};
use crate::bilateral::{f_family_value, l_scalar_value, FFamily};
use crate::error::{Error, Result};
use crate::numq::{self, delta_alpha, HPComplex, Precision};
use crate::qfun::{poch_inf_value, theta_value, ThetaForm};

/// How a fitted rate is judged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RateRule {
    /// `|C_fit − C_pred|/C_pred ≤ tol`.
    Match { tol: f64 },
    /// `C_fit ≥ (1 − tol)·C_pred`.
    AtLeast { tol: f64 },
    /// Residuals strictly decrease and `C_fit > 0`.
    Decays,
    /// Decays, and the local power-law exponent exceeds the given one.
    FasterThanPower(f64),
}

impl RateRule {
    /// Whether `fit` satisfies the rule. For `FasterThanPower(p)` either the
    /// local power-law exponent at the smallest `t` exceeds `p`, or the
    /// samples show the exponential signature: local exponents strictly
    /// increasing while the local constants `Δ ln r/Δ(1/t)` agree within 25%.
    pub fn judge(&self, fit: &RateFit) -> bool {
        match *self {
            RateRule::Match { tol } => fit.decays() && fit.rel_err.is_some_and(|e| e <= tol),
            RateRule::AtLeast { tol } => fit.decays() && fit.c_pred.is_some_and(|p| fit.c_fit >= (1.0 - tol) * p),
            RateRule::Decays => fit.decays(),
            RateRule::FasterThanPower(p) => {
                if !fit.decays() {
                    return false;
                }
                if fit.last_power() > p {
                    return true;
                }
                let s = &fit.samples;
                let powers: Vec<f64> =
                    s.windows(2).map(|w| (w[0].ln_residual - w[1].ln_residual) / (w[0].t.ln() - w[1].t.ln())).collect();
                let consts: Vec<f64> = s
                    .windows(2)
                    .map(|w| (w[0].ln_residual - w[1].ln_residual) / (1.0 / w[1].t - 1.0 / w[0].t))
                    .collect();
                let (lo, hi) = consts.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
                powers.windows(2).all(|w| w[1] > w[0]) && lo > 0.0 && lo >= 0.75 * hi
            }
        }
    }
}

/// An asymptotic statement at `q = e^{−t}`, reduced to measured and
/// predicted real values.
#[derive(Clone, Debug)]
pub enum Claim {
    /// `(q)_∞` against `√(2π/t)e^{t/24−π²/(6t)}`.
    Eta,
    /// The normalized `L_α(zx; q, z^α)` against `L_{1−1/α}(q; q, −xq^{(1−1/α)/2})`.
    Cor02 {
        alpha: Float,
        x: Float,
        z: Float,
    },
    Cor2 {
        alpha: Float,
        z: Float,
    },
    Cor1 {
        alpha: Float,
        z: Float,
    },
    Mm10 {
        a: Float,
        b: Float,
        c: Float,
    },
    Mm20 {
        a: Float,
        b: Float,
        c: Float,
    },
    /// `f̂₂` against `f₂`.
    Prop10 {
        a: Float,
        b: Float,
        c: Float,
    },
    /// `Σ_{n≥1} zⁿ q^{n(n−1)/2}/(y)_n` against `θ(−z;q)/(y, −y/z)_∞`, `y = q^{ypow}`.
    Cor32 {
        z: Float,
        ypow: Float,
    },
    Asymm {
        a: Float,
        c: Float,
    },
    /// `L/H` against the leading prefactor of the vector transformation.
    CorMth1Asym {
        alpha: Float,
        x: Vec<Float>,
        y: Vec<Float>,
        z: Float,
    },
    /// Exact transformations; their residual sits at the precision floor.
    Lem21 {
        z: Float,
        mu: Float,
    },
    Main1 {
        alpha: Float,
        x: Float,
        z: Float,
    },
}

fn real(v: &Float) -> HPComplex {
    HPComplex::from_real(v.clone())
}

impl Claim {
    /// `(measured, predicted)` at `t`.
    pub fn sides(&self, t: &Float, prec: Precision) -> Result<(Float, Float)> {
        let w = prec.working();
        let q = nome(t, prec)?;
        match self {
            Claim::Eta => eta_leading_sides(t, prec),
            Claim::Cor02 { alpha, x, z } => {
                let l = normalized_scalar(alpha, x, z, t, prec)?;
                let beta = Float::with_val(w, 1u32 - Float::with_val(w, alpha.recip_ref()));
                let qb = Float::with_val(w, Float::with_val(w, &beta * t) / -2i32).exp();
                let arg = HPComplex::from_real(-Float::with_val(w, x * qb));
                let dual = l_scalar_value(&q, &arg, &beta, &q, prec)?;
                Ok((l, dual.re))
            }
            Claim::Cor2 { alpha, z } => {
                let beta = Float::with_val(w, 1u32 - Float::with_val(w, alpha.recip_ref()));
                let za = real(&Float::with_val(w, z.pow(alpha)));
                let num = l_scalar_value(&real(&numq::real_int(-1, prec)), &za, alpha, &q, prec)?;
                let qb = Float::with_val(w, Float::with_val(w, &beta * t) / -2i32).exp();
                let arg = real(&Float::with_val(w, qb / z));
                let den = l_scalar_value(&q, &arg, &beta, &q, prec)?;
                let pred = predicted_ratio(&Predicted::Cor2 { alpha: alpha.clone(), z: z.clone() }, t, prec)?;
                Ok((num.div(&den)?.re, pred))
            }
            Claim::Cor1 { alpha, z } => {
                let beta = Float::with_val(w, 1u32 - Float::with_val(w, alpha.recip_ref()));
                let za = real(&Float::with_val(w, z.pow(alpha)));
                let num = l_scalar_value(&q, &za, alpha, &q, prec)?;
                // −z^{−1} q^{3/2 − 1/(2α)}
                let e = Float::with_val(w, 1.5) - Float::with_val(w, Float::with_val(w, alpha * 2u32).recip_ref());
                let arg = real(&Float::with_val(w, -Float::with_val(w, Float::with_val(w, &e * t).exp().recip() / z)));
                let den = l_scalar_value(&q, &arg, &beta, &q, prec)?;
                let pred = predicted_ratio(&Predicted::Cor1 { alpha: alpha.clone(), z: z.clone() }, t, prec)?;
                Ok((num.div(&den)?.re, pred))
            }
            Claim::Mm10 { a, b, c } => {
                let num = f_family_value(FFamily::F1Hat, a, b, c, &q, prec)?;
                let den = f_family_value(FFamily::F1Tilde, a, b, c, &q, prec)?;
                let pred = predicted_ratio(&Predicted::Mm10 { a: a.clone(), b: b.clone(), c: c.clone() }, t, prec)?;
                Ok((num.div(&den)?.re, pred))
            }
            Claim::Mm20 { a, b, c } => {
                let num = f_family_value(FFamily::F2Hat, a, b, c, &q, prec)?;
                let den = f_family_value(FFamily::F2Tilde, a, b, c, &q, prec)?;
                let pred = predicted_ratio(&Predicted::Mm20 { a: a.clone(), b: b.clone(), c: c.clone() }, t, prec)?;
                Ok((num.div(&den)?.re, pred))
            }
            Claim::Prop10 { a, b, c } => {
                let hat = f_family_value(FFamily::F2Hat, a, b, c, &q, prec)?;
                let plain = f_family_value(FFamily::F2, a, b, c, &q, prec)?;
                Ok((hat.re, plain.re))
            }
            Claim::Cor32 { z, ypow } => {
                if *z <= 0 || *ypow <= 0 || *ypow >= 1 {
                    return Err(Error::DomainError("needs z > 0 and 0 < ypow < 1".into()));
                }
                let y = real(&Float::with_val(w, Float::with_val(w, ypow * t).exp().recip()));
                let zc = real(z);
                let one = HPComplex::one(prec);
                let mut qn = one.clone();
                // t_{n+1}/t_n = z qⁿ/(1 − y qⁿ)
                let sum = numq::sum_by_ratio(
                    one.clone(),
                    0,
                    1,
                    |_| {
                        let r = zc.mul(&qn).div(&one.sub(&y.mul(&qn)));
                        qn = qn.mul(&q);
                        r
                    },
                    prec,
                )?
                .sub(&one);
                let th = theta_value(&zc.neg(), &q, ThetaForm::Product, prec)?;
                let den = poch_inf_value(&y, &q, prec)?.mul(&poch_inf_value(&y.div(&zc)?.neg(), &q, prec)?);
                Ok((sum.re, th.div(&den)?.re))
            }
            Claim::Asymm { a, c } => asymm_sides(a, c, t, prec),
            Claim::CorMth1Asym { alpha, x, y, z } => {
                let xs: Vec<_> = x.iter().map(real).collect();
                let ys: Vec<_> = y.iter().map(real).collect();
                let (m, p) = mth1_leading_sides(alpha, &xs, &ys, z, t, prec)?;
                Ok((m.re, p.re))
            }
            Claim::Lem21 { z, mu } => {
                let (l, r) = lem21_sides(z, mu, t, None, prec)?;
                Ok((l, r.re))
            }
            Claim::Main1 { alpha, x, z } => {
                let (l, r) = main1_sides(alpha, &real(x), z, t, prec)?;
                Ok((l.re, r.re))
            }
        }
    }

    /// Predicted decay constant `C` of the relative residual, when one is
    /// claimed. `Ok(None)` means decay alone is asserted.
    pub fn c_pred(&self, prec: Precision) -> Result<Option<f64>> {
        let pi2 = std::f64::consts::PI.powi(2);
        Ok(match self {
            Claim::Eta => Some(4.0 * pi2),
            Claim::Cor02 { alpha, .. } | Claim::Cor2 { alpha, .. } | Claim::CorMth1Asym { alpha, .. } => {
                Some(2.0 * pi2 / alpha.to_f64())
            }
            Claim::Cor1 { alpha, z } => Some(2.0 * pi2 * delta_alpha(alpha, z, prec)?.to_f64().min(2.0)),
            Claim::Mm10 { .. } => Some(2.0 * pi2 * self.delta(prec)?.unwrap_or(0.0).min(2.0)),
            Claim::Mm20 { b, .. } => Some(2.0 * pi2 / (2.0 * b.to_f64() + 1.0)),
            Claim::Prop10 { .. } | Claim::Cor32 { .. } | Claim::Asymm { .. } => None,
            Claim::Lem21 { .. } | Claim::Main1 { .. } => None,
        })
    }

    /// `δ_α(z)` behind the claimed rate: `δ_α(z)` itself for `Cor1`,
    /// `δ_{2b}(a^{1/(2b)})` for `Mm10`.
    pub fn delta(&self, prec: Precision) -> Result<Option<f64>> {
        let w = prec.working();
        Ok(match self {
            Claim::Cor1 { alpha, z } => Some(delta_alpha(alpha, z, prec)?.to_f64()),
            Claim::Mm10 { a, b, .. } => {
                let alpha = Float::with_val(w, b * 2u32);
                let z = numq::pow(a, &Float::with_val(w, alpha.recip_ref()))?;
                Some(delta_alpha(&alpha, &z, prec)?.to_f64())
            }
            _ => None,
        })
    }

    /// Judging rule; `None` for the exact transformations.
    pub fn rule(&self) -> Option<RateRule> {
        Some(match self {
            Claim::Eta => RateRule::Match { tol: 0.10 },
            Claim::Cor2 { .. } => RateRule::Match { tol: 0.15 },
            Claim::Cor02 { .. } | Claim::Cor1 { .. } | Claim::Mm10 { .. } | Claim::CorMth1Asym { .. } => {
                RateRule::AtLeast { tol: 0.15 }
            }
            Claim::Mm20 { .. } | Claim::Prop10 { .. } | Claim::Cor32 { .. } => RateRule::Decays,
            Claim::Asymm { .. } => RateRule::FasterThanPower(8.0),
            Claim::Lem21 { .. } | Claim::Main1 { .. } => return None,
        })
    }
}

/// Normalized scalar side `(zx)_∞e^{−αt/8−α log²z/(2t)}/√(2πz^α/(αt))·L_α(zx; q, z^α)`.
fn normalized_scalar(alpha: &Float, x: &Float, z: &Float, t: &Float, prec: Precision) -> Result<Float> {
    if *alpha <= 1 || *z <= 0 {
        return Err(Error::DomainError("needs alpha > 1 and z > 0".into()));
    }
    let w = prec.working();
    let q = nome(t, prec)?;
    let zx = real(&Float::with_val(w, x * z));
    let za = real(&Float::with_val(w, z.pow(alpha)));
    let l = l_scalar_value(&zx, &za, alpha, &q, prec)?;
    let poch = poch_inf_value(&zx, &q, prec)?;
    let pref = super::alpha_prefactor(alpha, z, t, prec);
    Ok(l.mul(&poch).re / pref)
}
