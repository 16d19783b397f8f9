use rug::ops::Pow;
use rug::Float;

use super::{li2_real, pi, Precision};
use crate::error::{Error, Result};

/// Root of a strictly increasing `f` on `(0, 1)`: bisection down to a narrow
/// bracket, then safeguarded Newton. `f` returns `(f(w), f'(w))`.
fn solve_increasing<F>(f: F, prec: Precision, what: &str) -> Result<Float>
where
    F: Fn(&Float) -> (Float, Float),
{
    let w = prec.working();
    let eps = Float::with_val(w, Float::i_exp(1, -(prec.bits as i32)));
    let mut lo = eps.clone();
    let mut hi = Float::with_val(w, 1) - &eps;
    let (flo, _) = f(&lo);
    let (fhi, _) = f(&hi);
    if flo.is_sign_positive() && !flo.is_zero() || fhi.is_sign_negative() {
        return Err(Error::NoBracket(what.to_string()));
    }
    for _ in 0..60 {
        let mid = Float::with_val(w, &lo + &hi) / 2;
        let (fm, _) = f(&mid);
        if fm.is_sign_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tol = Float::with_val(w, Float::i_exp(1, -(w as i32) + 4));
    let mut x = Float::with_val(w, &lo + &hi) / 2;
    for _ in 0..200 {
        let (fx, dfx) = f(&x);
        if fx.is_zero() {
            return Ok(x);
        }
        if fx.is_sign_negative() {
            lo = x.clone();
        } else {
            hi = x.clone();
        }
        let step = Float::with_val(w, &fx / &dfx);
        let mut next = Float::with_val(w, &x - &step);
        if next < lo || next > hi || !next.is_finite() {
            next = Float::with_val(w, &lo + &hi) / 2;
        }
        let moved = Float::with_val(w, &next - &x).abs();
        x = next;
        if moved <= tol || Float::with_val(w, &hi - &lo) <= tol {
            return Ok(x);
        }
    }
    Err(Error::PrecisionLoss(format!("{what}: Newton iteration did not settle")))
}

/// Root in `(0,1)` of `w + z⁻¹ w^e = 1`, `0 < e ≤ 1`, `z > 0`.
pub fn solve_w(z: &Float, exponent: &Float, prec: Precision) -> Result<Float> {
    if *z <= 0 || *exponent <= 0 || *exponent > 1 {
        return Err(Error::DomainError("solve_w needs z > 0 and 0 < exponent <= 1".into()));
    }
    let w = prec.working();
    let zi = Float::with_val(w, z.recip_ref());
    let em1 = Float::with_val(w, exponent - 1u32);
    solve_increasing(
        |x| {
            let pe = Float::with_val(w, x.pow(exponent));
            let f = Float::with_val(w, x + Float::with_val(w, &zi * &pe)) - 1u32;
            let d = Float::with_val(w, x.pow(&em1)) * exponent * &zi + 1u32;
            (f, d)
        },
        prec,
        "w + w^e/z = 1",
    )
}

/// Root in `(0,1)` of `a z^(2b) + z − 1 = 0`.
pub fn solve_macmain_z(a: &Float, b: &Float, prec: Precision) -> Result<Float> {
    if *a <= 0 || *b <= 0 {
        return Err(Error::DomainError("solve_macmain_z needs a, b > 0".into()));
    }
    let w = prec.working();
    let tb = Float::with_val(w, b * 2u32);
    let tbm1 = Float::with_val(w, &tb - 1u32);
    solve_increasing(
        |x| {
            let f = Float::with_val(w, x.pow(&tb)) * a + x - 1u32;
            let d = Float::with_val(w, x.pow(&tbm1)) * a * &tb + 1u32;
            (f, d)
        },
        prec,
        "a z^(2b) + z = 1",
    )
}

fn ln_sq(x: &Float) -> Float {
    let l = x.clone().ln();
    l.square()
}

/// `δ_α(z)` from the roots `w_α`, `w_β` of `w + z⁻¹w^(1/α) = 1` and
/// `w + z⁻¹w^(1−1/α) = 1`.
///
/// At `α = 1` the second equation degenerates to `w = 1 − 1/z`; `z > 1` uses
/// that root, `z = 1` uses the limiting value (the `w_β` terms vanish) and
/// `z < 1` is rejected.
pub fn delta_alpha(alpha: &Float, z: &Float, prec: Precision) -> Result<Float> {
    if *alpha < 1 || *z <= 0 {
        return Err(Error::DomainError("delta_alpha needs alpha >= 1 and z > 0".into()));
    }
    let w = prec.working();
    let inv_a = Float::with_val(w, alpha.recip_ref());
    let beta_e = Float::with_val(w, 1u32 - Float::with_val(w, &inv_a));
    let wa = solve_w(z, &inv_a, prec)?;
    let lz = Float::with_val(w, z.ln_ref());
    let mut bracket =
        li2_real(&wa, prec)? + Float::with_val(w, ln_sq(&wa) * &inv_a) / 2 - Float::with_val(w, &lz * wa.clone().ln());
    if beta_e.is_zero() {
        if *z < 1 {
            return Err(Error::DomainError("delta_alpha at alpha = 1 needs z >= 1".into()));
        }
        if *z > 1 {
            let wb = Float::with_val(w, 1u32 - Float::with_val(w, z.recip_ref()));
            bracket += li2_real(&wb, prec)? - Float::with_val(w, &lz * wb.ln());
        }
    } else {
        let wb = solve_w(z, &beta_e, prec)?;
        bracket +=
            li2_real(&wb, prec)? + Float::with_val(w, ln_sq(&wb) * &beta_e) / 2 - Float::with_val(w, &lz * wb.ln());
    }
    let two_pi2 = Float::with_val(w, pi(prec).square()) * 2u32;
    Ok(inv_a - Float::with_val(w, 1u32) / 6u32 + bracket / two_pi2)
}

/// `δ_α(z) = 1/α − (π²/6 + c_α(z) + (α/2)log²z)/(2π²)` where `c_α(z)` is
/// the difference of the exponential rates of the two unilateral series
/// compared in the asymptotic argument. Needs `α > 1`.
pub fn delta_alpha_from_asymptotics(alpha: &Float, z: &Float, prec: Precision) -> Result<Float> {
    if *alpha <= 1 || *z <= 0 {
        return Err(Error::DomainError("proof-form delta needs alpha > 1 and z > 0".into()));
    }
    let w = prec.working();
    // w₁: z^α w^α + w = 1
    let za = Float::with_val(w, z.pow(alpha));
    let am1 = Float::with_val(w, alpha - 1u32);
    let w1 = solve_increasing(
        |x| {
            let f = Float::with_val(w, x.pow(alpha)) * &za + x - 1u32;
            let d = Float::with_val(w, x.pow(&am1)) * &za * alpha + 1u32;
            (f, d)
        },
        prec,
        "z^a w^a + w = 1",
    )?;
    let e2 = Float::with_val(w, 1u32 - Float::with_val(w, alpha.recip_ref()));
    let w2 = solve_w(z, &e2, prec)?;
    let one = Float::with_val(w, 1);
    let c = li2_real(&Float::with_val(w, &one - &w2), prec)? + Float::with_val(w, ln_sq(&w2) * &e2) / 2
        - li2_real(&Float::with_val(w, &one - &w1), prec)?
        - Float::with_val(w, ln_sq(&w1) * alpha) / 2;
    let p2 = Float::with_val(w, pi(prec).square());
    let lz2 = Float::with_val(w, ln_sq(z) * alpha) / 2;
    let inner = Float::with_val(w, &p2 / 6u32) + c + lz2;
    Ok(Float::with_val(w, alpha.recip_ref()) - inner / (p2 * 2u32))
}
