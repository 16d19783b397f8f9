//! The bilateral families `L_α(x; q, z)`, `L_α(x⃗; y⃗; q, z)`, the multiple
//! series `H_α(x⃗; y⃗; q)`, `ᵣψᵣ`, and McIntosh's `f`-families.

mod exact;
mod numeric;

pub use exact::{
    f_family_exact, h_alpha_exact, l_scalar_exact, l_vector_exact, psi_r_exact, saturation, sum_exact, unilateral_exact,
};
pub use numeric::{f_family_value, h_alpha_value, l_scalar_value, l_vector_value, psi_r_value};

use num_integer::Integer;
use num_rational::Ratio;
use rug::Float;

use crate::error::{Error, Result};
use crate::exactq::QMonomial;
use crate::numq::{self, HPComplex, Precision};

/// Exact-engine instance: monomial parameters and rational `α`.
pub type ExactParams = BilateralParams<QMonomial, AlphaRational>;
/// Numeric instance: complex parameters and real `α`.
pub type NumericParams = BilateralParams<HPComplex, Float>;

/// The two displayed expressions of the vector series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LForm {
    /// `Σ z^n q^{(α−r)n(n−1)/2} Π (1/y_s)_n (−y_s)^n / (x_s)_n`
    Pochhammer,
    /// `Σ z^n q^{α n(n−1)/2} Π (x_s q^n, y_s q^{1−n})_∞ / Π (x_s, q y_s)_∞`
    Product,
}

/// Members of the `f₁`/`f₂` families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FFamily {
    F1,
    F2,
    F1Hat,
    F2Hat,
    F1Tilde,
    F2Tilde,
}

impl std::str::FromStr for FFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f1" => FFamily::F1,
            "f2" => FFamily::F2,
            "f1hat" => FFamily::F1Hat,
            "f2hat" => FFamily::F2Hat,
            "f1tilde" => FFamily::F1Tilde,
            "f2tilde" => FFamily::F2Tilde,
            _ => return Err(Error::BadParameter { key: "family".into(), reason: format!("unknown member {s}") }),
        })
    }
}

/// `α = a/b` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlphaRational {
    pub a: i64,
    pub b: i64,
}

impl AlphaRational {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a <= 0 || b <= 0 {
            return Err(Error::DomainError(format!("alpha = {a}/{b} must be positive")));
        }
        if a.gcd(&b) != 1 {
            return Err(Error::DomainError(format!("alpha = {a}/{b} is not in lowest terms")));
        }
        Ok(AlphaRational { a, b })
    }

    pub fn integer(a: i64) -> Self {
        AlphaRational { a, b: 1 }
    }

    pub fn ratio(&self) -> Ratio<i64> {
        Ratio::new(self.a, self.b)
    }

    pub fn to_float(&self, prec: Precision) -> Float {
        numq::real_ratio(self.a, self.b, prec)
    }
}

impl std::str::FromStr for AlphaRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameter { key: "alpha".into(), reason: format!("{s} is not a positive rational") };
        let r = match s.split_once('/') {
            Some((n, d)) => {
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ratio::new(n.trim().parse().map_err(|_| bad())?, d)
            }
            None => Ratio::from_integer(s.trim().parse().map_err(|_| bad())?),
        };
        AlphaRational::new(*r.numer(), *r.denom())
    }
}

/// Parameters of one `L`/`H` instance. In the exact engine `P` is a
/// [`crate::exactq::QMonomial`], numerically an [`crate::numq::HPComplex`].
/// A zero `y_s` is the degenerate limit used throughout (it turns
/// `(1/y)_n (−y)^n` into `q^{n(n−1)/2}`).
#[derive(Clone, Debug)]
pub struct BilateralParams<P, A> {
    pub alpha: A,
    pub x: Vec<P>,
    pub y: Vec<P>,
    pub z: P,
}

impl<P, A> BilateralParams<P, A> {
    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub(crate) fn check_rank(&self) -> Result<usize> {
        let r = self.x.len();
        if r == 0 || r > 2 || self.y.len() != r {
            return Err(Error::DomainError(format!(
                "rank must be 1 or 2 with matching x and y (got {} and {})",
                r,
                self.y.len()
            )));
        }
        Ok(r)
    }
}

/// `Q_α(i, j) = Σ (i_s² + j_s²) − (Σ (i_s − j_s))² / α`.
#[derive(Clone, Copy, Debug)]
pub struct QuadFormQ {
    pub alpha: AlphaRational,
    pub r: usize,
}

impl QuadFormQ {
    pub fn eval(&self, i: &[i64], j: &[i64]) -> Ratio<i64> {
        let sq: i64 = i.iter().chain(j).map(|v| v * v).sum();
        let d: i64 = i.iter().sum::<i64>() - j.iter().sum::<i64>();
        Ratio::from_integer(sq) - Ratio::new(d * d * self.alpha.b, self.alpha.a)
    }

    /// Smallest eigenvalue on `ℝ^{2r}`: `1 − 2r/α` (negative when `α < 2r`).
    pub fn lambda_min(&self) -> Ratio<i64> {
        Ratio::from_integer(1) - Ratio::new(2 * self.r as i64 * self.alpha.b, self.alpha.a)
    }

    /// Lower bound `Q ≥ λ ‖v‖²` on the non-negative orthant when at most
    /// `active_i` of the `i`-coordinates and `active_j` of the `j`-coordinates
    /// are nonzero.
    pub fn orthant_bound(&self, active_i: usize, active_j: usize) -> Ratio<i64> {
        let m = active_i.max(active_j) as i64;
        Ratio::from_integer(1) - Ratio::new(m * self.alpha.b, self.alpha.a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_parsing() {
        assert_eq!("5/2".parse::<AlphaRational>().unwrap(), AlphaRational { a: 5, b: 2 });
        assert_eq!("3".parse::<AlphaRational>().unwrap(), AlphaRational::integer(3));
        assert_eq!("4/2".parse::<AlphaRational>().unwrap(), AlphaRational::integer(2));
        assert!(AlphaRational::new(4, 2).is_err());
        assert!("-1".parse::<AlphaRational>().is_err());
    }

    #[test]
    fn quad_form_positive_on_orthant_box() {
        for (a, b, r) in [(3, 1, 1), (2, 1, 1), (3, 1, 2), (5, 2, 2), (7, 3, 2), (5, 1, 2)] {
            let form = QuadFormQ { alpha: AlphaRational::new(a, b).unwrap(), r };
            let lam = form.orthant_bound(r, r);
            assert!(lam > Ratio::from_integer(0));
            let mut count = 0;
            let range = 0..=10i64;
            for v in itertools_product(r, range) {
                let (i, j) = v.split_at(r);
                if v.iter().all(|&c| c == 0) {
                    continue;
                }
                let q = form.eval(i, j);
                let norm: i64 = v.iter().map(|c| c * c).sum();
                assert!(q > Ratio::from_integer(0), "alpha={a}/{b} r={r} v={v:?}");
                assert!(q >= lam * norm);
                count += 1;
            }
            assert!(count > 0);
        }
    }

    #[test]
    fn quad_form_indefinite_direction() {
        // α = 3 < 2r = 4: the balanced direction is negative
        let form = QuadFormQ { alpha: AlphaRational::integer(3), r: 2 };
        assert!(form.eval(&[1, 1], &[-1, -1]) < Ratio::from_integer(0));
        assert_eq!(form.lambda_min(), Ratio::new(-1, 3));
    }

    fn itertools_product(r: usize, range: std::ops::RangeInclusive<i64>) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for _ in 0..2 * r {
            let mut next = Vec::new();
            for v in &out {
                for k in range.clone() {
                    let mut w = v.clone();
                    w.push(k);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}
