//! Golden coefficients and values checked against counting and closed-form
//! oracles that share no code with the engines.

use num_rational::Ratio;
use qlab_core::exactq::{frac, rat, ExactSeries, ExponentGrid, QMonomial};
use qlab_core::numq::{self, HPComplex, Precision};
use qlab_core::qfun::{poch_inf_value, poch_recip_series, poch_series, theta_series, PochIndex, ThetaForm};
use rug::Float;

const N: i64 = 50;

fn grid() -> ExponentGrid {
    ExponentGrid::with_q_order(1, N).unwrap()
}

/// Partitions of `0..n` into parts from `parts`, each used at most `max_use` times.
fn count_partitions(n: usize, parts: impl Iterator<Item = usize>, max_use: Option<usize>) -> Vec<i64> {
    let mut ways = vec![0i64; n];
    ways[0] = 1;
    for p in parts {
        match max_use {
            Some(1) => {
                for k in (p..n).rev() {
                    ways[k] += ways[k - p];
                }
            }
            _ => {
                for k in p..n {
                    ways[k] += ways[k - p];
                }
            }
        }
    }
    ways
}

fn coeffs_as_i64(s: &ExactSeries) -> Vec<i64> {
    (0..N)
        .map(|k| {
            let c = s.coeff(k).unwrap_or_else(|| rat(0));
            assert!(c.is_integer());
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect()
}

#[test]
fn reciprocal_euler_product_counts_partitions() {
    let s = poch_recip_series(&QMonomial::q_power(Ratio::from_integer(1)), &PochIndex::Infinity, grid()).unwrap();
    let want = count_partitions(N as usize, 1..N as usize, None);
    assert_eq!(coeffs_as_i64(&s), want);
    assert_eq!(want[49], 173525);
}

#[test]
fn minus_q_product_counts_distinct_parts() {
    let s = poch_series(&QMonomial::new(rat(-1), Ratio::from_integer(1)), &PochIndex::Infinity, grid()).unwrap();
    assert_eq!(coeffs_as_i64(&s), count_partitions(N as usize, 1..N as usize, Some(1)));
}

#[test]
fn theta_at_minus_sqrt_q_counts_squares() {
    // θ(−q^{1/2}; q) on the half grid is Σ q^{n²/2}; substituting q → q² gives Σ q^{n²}.
    let g2 = ExponentGrid::with_q_order(2, N / 2).unwrap();
    let z = QMonomial::new(rat(-1), Ratio::new(1, 2));
    let s = theta_series(&z, Ratio::from_integer(1), ThetaForm::Product, g2).unwrap();
    let mut want = vec![0i64; N as usize];
    for n in -8i64..=8 {
        if n * n < N {
            want[(n * n) as usize] += 1;
        }
    }
    assert_eq!(coeffs_as_i64(&s), want);
}

#[test]
fn csv_round_trip_keeps_fractions() {
    let s = ExactSeries::from_terms(
        ExponentGrid::new(3, 20).unwrap(),
        [(-2, frac(-7, 3)), (0, rat(1)), (5, frac(22, 7)), (19, frac(1, 1_000_000_007))],
    );
    let text = s.to_csv();
    assert!(text.starts_with("# D=3 N=20\n-2,-7,3\n"));
    assert_eq!(ExactSeries::from_csv(&text).unwrap(), s);
}

#[test]
fn euler_product_at_e_minus_two_pi() {
    // η(i) = Γ(1/4) / (2 π^{3/4}), so (e^{−2π}; e^{−2π})_∞ = e^{π/12} Γ(1/4) / (2 π^{3/4}).
    let p = Precision::new(256).unwrap();
    let w = 320;
    let pi = Float::with_val(w, rug::float::Constant::Pi);
    let q = Float::with_val(w, -(pi.clone() * 2u32)).exp();
    let got = poch_inf_value(&HPComplex::from_real(q.clone()), &HPComplex::from_real(q), p).unwrap();
    let gamma = Float::with_val(w, Float::with_val(w, 0.25).gamma());
    let want = Float::with_val(w, (pi.clone() / 12u32).exp()) * gamma
        / (Float::with_val(w, rug::ops::Pow::pow(&pi, Float::with_val(w, 0.75))) * 2u32);
    let rel = Float::with_val(w, &got.re - &want).abs() / &want;
    assert!(numq::log2_abs(&rel) < -240.0, "{}", rel.to_f64());
    assert!(got.im.is_zero());
}
