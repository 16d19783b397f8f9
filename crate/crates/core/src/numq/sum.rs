use super::{HPComplex, Precision};
use crate::error::{Error, Result};

const MAX_TERMS: i64 = 2_000_000;
const QUIET_RUN: u32 = 4;

/// Sums `t_start, t_{start+step}, …` where each term is the previous one
/// times `ratio(n)` (`n` being the index of the previous term).
///
/// Stops after a run of terms that are negligible against the running sum
/// while the ratio is below one in modulus. Exact zeros propagate, so a
/// vanishing term ends the sum.
pub fn sum_by_ratio<F>(first: HPComplex, start: i64, step: i64, mut ratio: F, prec: Precision) -> Result<HPComplex>
where
    F: FnMut(i64) -> Result<HPComplex>,
{
    let cutoff = -(prec.working() as f64) - 8.0;
    let mut acc = first.clone();
    let mut term = first;
    let mut n = start;
    let mut quiet = 0;
    for _ in 0..MAX_TERMS {
        if term.is_zero() {
            return Ok(acc);
        }
        let r = ratio(n)?;
        term = term.mul(&r);
        n += step;
        acc = acc.add(&term);
        let small = term.is_zero() || term.log2_abs() < acc.log2_abs() + cutoff;
        if small && (r.is_zero() || r.log2_abs() < 0.0) {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Divergence(format!("series did not settle within {MAX_TERMS} terms")))
}

/// Bilateral sum from the term at 0 and the forward/backward ratios
/// `t_{n+1}/t_n` and `t_{n-1}/t_n`.
pub fn sum_bilateral<F, B>(t0: HPComplex, fwd: F, bwd: B, prec: Precision) -> Result<HPComplex>
where
    F: FnMut(i64) -> Result<HPComplex>,
    B: FnMut(i64) -> Result<HPComplex>,
{
    let right = sum_by_ratio(t0.clone(), 0, 1, fwd, prec)?;
    let left = sum_by_ratio(t0.clone(), 0, -1, bwd, prec)?;
    Ok(right.add(&left).sub(&t0))
}

/// Sums `term(n)` for `n = start, start+step, …` computed independently, with
/// the same stopping rule as [`sum_by_ratio`] but judged on the term size alone
/// after `min_terms` terms.
pub fn sum_direct<F>(start: i64, step: i64, min_terms: i64, mut term: F, prec: Precision) -> Result<HPComplex>
where
    F: FnMut(i64) -> Result<HPComplex>,
{
    let cutoff = -(prec.working() as f64) - 8.0;
    let mut acc = HPComplex::zero(prec);
    let mut quiet = 0;
    let mut prev = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let t = term(start + step * k)?;
        acc = acc.add(&t);
        let mag = if t.is_zero() { f64::NEG_INFINITY } else { t.log2_abs() };
        if k >= min_terms && mag < acc.log2_abs() + cutoff && mag <= prev {
            quiet += 1;
            if quiet >= QUIET_RUN {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
        prev = mag;
    }
    Err(Error::Divergence(format!("series did not settle within {MAX_TERMS} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numq::{real, real_int};

    #[test]
    fn geometric_and_exponential() {
        let p = Precision::new(128).unwrap();
        let half = HPComplex::from_real(real(0.5, p));
        let s = sum_by_ratio(HPComplex::one(p), 0, 1, |_| Ok(half.clone()), p).unwrap();
        assert!(s.rel_diff(&HPComplex::from_real(real_int(2, p))) < p.epsilon());
        // e = Σ 1/n!
        let e = sum_by_ratio(HPComplex::one(p), 0, 1, |n| Ok(HPComplex::from_real(real_int(n + 1, p)).recip()?), p)
            .unwrap();
        let want = HPComplex::from_real(real_int(1, p).exp());
        assert!(e.rel_diff(&want) < p.epsilon());
    }

    #[test]
    fn zero_term_stops() {
        let p = Precision::new(128).unwrap();
        let s = sum_by_ratio(HPComplex::one(p), 0, -1, |_| Ok(HPComplex::zero(p)), p).unwrap();
        assert!(s.rel_diff(&HPComplex::one(p)) < p.epsilon());
    }
}
