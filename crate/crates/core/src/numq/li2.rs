use rug::Float;

use super::{pi, HPComplex, Precision};
use crate::error::{Error, Result};

/// `Li₂(z)` for `|z| ≤ 1`.
///
/// Direct series on `|z| ≤ 1/2`, the reflection `Li₂(z) = π²/6 − log z log(1−z) − Li₂(1−z)`
/// on `|1−z| ≤ 1/2`, and the Bernoulli expansion in `u = −log(1−z)` elsewhere
/// (`|u| < 2` there, well inside its radius `2π`).
pub fn li2(z: &HPComplex, prec: Precision) -> Result<HPComplex> {
    let w = prec.working();
    let z = HPComplex::new(Float::with_val(w, &z.re), Float::with_val(w, &z.im));
    if z.is_zero() {
        return Ok(HPComplex::zero(prec));
    }
    let one = HPComplex::one(prec);
    let az = z.abs();
    if az > 1 {
        return Err(Error::DomainError("li2 outside the closed unit disk".into()));
    }
    if az <= 0.5 {
        return direct_series(&z, prec);
    }
    let omz = one.sub(&z);
    if omz.is_zero() {
        return Ok(HPComplex::from_real(zeta2(prec)));
    }
    if omz.abs() <= 0.5 {
        let s = direct_series(&omz, prec)?;
        let ll = z.ln()?.mul(&omz.ln()?);
        return Ok(HPComplex::from_real(zeta2(prec)).sub(&ll).sub(&s));
    }
    bernoulli_series(&omz.ln()?.neg(), prec)
}

/// Real `Li₂(x)` for `x ≤ 1`; arguments below `-1` use the inversion formula.
pub fn li2_real(x: &Float, prec: Precision) -> Result<Float> {
    if *x > 1 {
        return Err(Error::DomainError("real li2 above 1".into()));
    }
    if *x < -1 {
        // Li₂(x) = −π²/6 − log²(−x)/2 − Li₂(1/x)
        let w = prec.working();
        let inv = Float::with_val(w, x.recip_ref());
        let l = Float::with_val(w, -x.clone()).ln();
        let v = li2(&HPComplex::from_real(inv), prec)?.re;
        return Ok(-zeta2(prec) - l.square() / 2 - v);
    }
    Ok(li2(&HPComplex::from_real(x.clone()), prec)?.re)
}

fn zeta2(prec: Precision) -> Float {
    let p = pi(prec);
    Float::with_val(prec.working(), p.square_ref()) / 6
}

fn direct_series(z: &HPComplex, prec: Precision) -> Result<HPComplex> {
    let cap = 10 * prec.bits as u64;
    let cutoff = -(prec.working() as f64) - 4.0;
    let mut pw = z.clone();
    let mut acc = z.clone();
    for n in 2..=cap {
        pw = pw.mul(z);
        let t = pw.scale(&Float::with_val(prec.working(), n * n).recip());
        acc = acc.add(&t);
        if t.log2_abs() - acc.log2_abs() < cutoff {
            return Ok(acc);
        }
    }
    Err(Error::PrecisionLoss(format!("li2 series did not settle within {cap} terms")))
}

/// `Li₂ = u − u²/4 + Σ_{k≥1} B_{2k} u^{2k+1}/(2k+1)!`, with
/// `B_{2k}/(2k)! = (−1)^{k+1} 2ζ(2k)/(2π)^{2k}`.
fn bernoulli_series(u: &HPComplex, prec: Precision) -> Result<HPComplex> {
    let w = prec.working();
    let cap = 10 * prec.bits as u64;
    let cutoff = -(w as f64) - 4.0;
    let two_pi_sq = {
        let p = pi(prec) * 2u32;
        Float::with_val(w, p.square_ref())
    };
    let u2 = u.mul(u);
    let mut acc = u.sub(&u2.scale(&Float::with_val(w, 0.25)));
    let mut upow = u.clone();
    let mut denom = Float::with_val(w, 1);
    for k in 1..=cap {
        upow = upow.mul(&u2);
        denom *= &two_pi_sq;
        let zeta = Float::with_val(w, Float::zeta_u(2 * k as u32));
        let mut c = Float::with_val(w, zeta * 2u32) / &denom / (2 * k + 1);
        if k % 2 == 0 {
            c = -c;
        }
        let t = upow.scale(&c);
        acc = acc.add(&t);
        if t.log2_abs() - acc.log2_abs() < cutoff {
            return Ok(acc);
        }
    }
    Err(Error::PrecisionLoss(format!("li2 Bernoulli series did not settle within {cap} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numq::{real, real_ratio};

    fn p() -> Precision {
        Precision::new(256).unwrap()
    }

    fn close(a: &Float, b: &Float, tol_bits: i32) -> bool {
        let d = Float::with_val(400, a - b).abs();
        d < Float::with_val(400, Float::i_exp(1, -tol_bits))
    }

    #[test]
    fn special_values() {
        assert!(li2(&HPComplex::zero(p()), p()).unwrap().is_zero());
        let one = li2_real(&real(1.0, p()), p()).unwrap();
        assert!(close(&one, &zeta2(p()), 250));
        // π²/12 − log²2/2
        let half = li2_real(&real_ratio(1, 2, p()), p()).unwrap();
        let l2 = Float::with_val(300, Float::with_val(300, 2).ln().square()) / 2;
        let want = Float::with_val(300, zeta2(p()) / 2) - l2;
        assert!(close(&half, &want, 250));
    }

    #[test]
    fn agrees_with_mpfr_real_dilogarithm() {
        for x in [-0.9, -0.4, 0.1, 0.45, 0.55, 0.6, 0.75, 0.97] {
            let v = real(x, p());
            let mine = li2_real(&v, p()).unwrap();
            let oracle = Float::with_val(p().working(), v.li2_ref());
            assert!(close(&mine, &oracle, 250), "x = {x}");
        }
    }

    #[test]
    fn complex_argument_against_conjugate_symmetry_and_series() {
        // |z| = 0.7 lies in the Bernoulli region; compare with a long direct sum.
        let z = HPComplex::from_f64(0.42, 0.56, p());
        let got = li2(&z, p()).unwrap();
        let mut acc = HPComplex::zero(p());
        let mut pw = HPComplex::one(p());
        for n in 1..1200u32 {
            pw = pw.mul(&z);
            acc = acc.add(&pw.scale(&Float::with_val(300, n * n).recip()));
        }
        assert!(got.sub(&acc).abs() < Float::with_val(64, Float::i_exp(1, -180)));
        let conj = li2(&z.conj(), p()).unwrap();
        assert!(conj.rel_diff(&got.conj()) < p().epsilon());
    }

    #[test]
    fn outside_disk_is_rejected() {
        assert!(li2(&HPComplex::from_f64(1.5, 0.0, p()), p()).is_err());
        assert!(li2_real(&real(1.01, p()), p()).is_err());
    }
}
