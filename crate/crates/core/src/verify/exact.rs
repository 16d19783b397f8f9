//! Both sides of every exact identity, each side built through its own
//! chain of engine calls.

use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};

use super::params::Args;
use crate::bilateral::{
    f_family_exact, h_alpha_exact, l_scalar_exact, l_vector_exact, psi_r_exact, saturation, sum_exact,
    unilateral_exact, AlphaRational, ExactParams, FFamily, LForm,
};
use crate::error::{Error, Result};
use crate::exactq::{frac, rat, ExactSeries, ExponentGrid, QMonomial, QProduct};
use crate::qfun::{
    mul_poch, mul_poch_inf, poch_recip_series, poch_series, theta_product, theta_series, PochIndex, ThetaForm,
};

/// One compared pair: label, left side, right side.
pub(crate) type Pair = (String, ExactSeries, ExactSeries);

fn one() -> Ratio<i64> {
    Ratio::one()
}

fn r(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn q() -> QMonomial {
    QMonomial::q_power(one())
}

fn qp(n: i64, d: i64) -> QMonomial {
    QMonomial::q_power(r(n, d))
}

fn c(v: BigRational) -> QMonomial {
    QMonomial::constant(v)
}

fn units(e: Ratio<i64>, d: u32) -> Result<i64> {
    let s = e * d as i64;
    if !s.is_integer() {
        return Err(Error::IncompatibleGrid { from: *e.denom() as u32, to: d });
    }
    Ok(s.to_integer())
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// Smallest grid denominator carrying `base` and every parameter.
fn denom_for(base: u32, params: &[&QMonomial]) -> u32 {
    params.iter().filter(|p| !p.is_zero()).fold(base, |d, p| d.lcm(&p.min_denom()))
}

fn grid(denom: u32, q_order: i64) -> Result<ExponentGrid> {
    ExponentGrid::with_q_order(denom, q_order)
}

/// Builds at a raised order until the result is known through `target`,
/// which absorbs the order lost to negative valuations in products.
fn at_order<F>(target: ExponentGrid, build: F) -> Result<ExactSeries>
where
    F: Fn(ExponentGrid) -> Result<ExactSeries>,
{
    let mut extra = 0;
    for _ in 0..6 {
        let s = build(target.with_order(target.order + extra))?;
        if s.order() >= target.order {
            return Ok(s.truncate(target.order));
        }
        extra += target.order - s.order();
    }
    Err(Error::PrecisionLoss("product order kept shrinking".into()))
}

/// `Π (x_s; q^base_s)_∞` or its reciprocal, expanded.
fn poch_infs(xs: &[(QMonomial, Ratio<i64>)], inverse: bool, g: ExponentGrid) -> Result<ExactSeries> {
    let mut p = QProduct::one(g.denom);
    for (x, base) in xs {
        mul_poch_inf(&mut p, x, *base, inverse)?;
    }
    Ok(p.expand(g.order))
}

fn mul_all(parts: &[ExactSeries]) -> ExactSeries {
    let mut it = parts.iter();
    let first = it.next().expect("at least one factor").clone();
    it.fold(first, |acc, s| acc.mul(s))
}

fn bilateral_sum<F>(g: ExponentGrid, n_sat: i64, mut term: F) -> Result<ExactSeries>
where
    F: FnMut(i64) -> Result<QProduct>,
{
    let right = sum_exact(g, n_sat, 0, 1, &mut term)?;
    let left = sum_exact(g, n_sat, -1, -1, &mut term)?;
    Ok(right.add(&left))
}

fn monomial_prefix(m: &QMonomial, extra: Ratio<i64>, d: u32) -> Result<QProduct> {
    let mut p = QProduct::one(d);
    p.mul_monomial(&m.coeff, units(m.power + extra, d)?);
    Ok(p)
}

// ---- series exposed for coefficient dumps ----

/// `(−z; q)_∞`.
pub fn euler_lhs(z: &QMonomial, g: ExponentGrid) -> Result<ExactSeries> {
    poch_infs(&[(z.neg(), one())], false, g)
}

/// `Σ_{n≥0} zⁿ q^{n(n−1)/2}/(q)_n`.
pub fn euler_rhs(z: &QMonomial, g: ExponentGrid) -> Result<ExactSeries> {
    unilateral_exact(g, saturation(&[z]), |n| {
        let mut p = monomial_prefix(&z.powi(n)?, Ratio::from_integer(binom2(n)), g.denom)?;
        mul_poch(&mut p, &q(), one(), n, true)?;
        Ok(p)
    })
}

/// `(q; q)_∞`.
pub fn eta_product(g: ExponentGrid) -> Result<ExactSeries> {
    poch_series(&q(), &PochIndex::Infinity, g)
}

/// Named series for coefficient dumps: `(name, resolved params, q-order)`.
pub(crate) fn named_series(name: &str, args: &Args, q_order: i64) -> Result<ExactSeries> {
    match name {
        "euler-lhs" | "euler-rhs" => {
            let z = args.mono("z")?;
            let g = grid(denom_for(1, &[&z]), q_order)?;
            if name == "euler-lhs" {
                euler_lhs(&z, g)
            } else {
                euler_rhs(&z, g)
            }
        }
        "eta-product" => eta_product(grid(1, q_order)?),
        _ => Err(Error::UnknownIdentity(name.into())),
    }
}

// ---- identities ----

fn euler(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let z = a.mono("z")?;
    let g = grid(denom_for(1, &[&z]), n)?;
    Ok(vec![("euler".into(), euler_lhs(&z, g)?, euler_rhs(&z, g)?)])
}

fn jtp(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let z = a.mono("z")?;
    let g = grid(denom_for(1, &[&z]), n)?;
    let sum = theta_series(&z, one(), ThetaForm::Sum, g)?;
    let prod = theta_series(&z, one(), ThetaForm::Product, g)?;
    Ok(vec![("triple product".into(), sum, prod)])
}

fn watson(n: i64) -> Result<Vec<Pair>> {
    let g = grid(1, n)?;
    let lhs = unilateral_exact(g, 4, |k| {
        let mut p = monomial_prefix(&QMonomial::constant(rat(1)), Ratio::from_integer(k * (k + 1) / 2), 1)?;
        mul_poch(&mut p, &q(), one(), k, true)?;
        mul_poch(&mut p, &q(), one(), k, true)?;
        Ok(p)
    })?;
    let rhs = at_order(g, |g| {
        let sum = unilateral_exact(g, 4, |k| {
            let mut p = monomial_prefix(&QMonomial::constant(rat(1)), Ratio::from_integer(2 * k * k + k), 1)?;
            mul_poch(&mut p, &qp(2, 1), Ratio::from_integer(2), k, true)?;
            Ok(p)
        })?;
        Ok(poch_recip_series(&q(), &PochIndex::Infinity, g)?.mul(&sum))
    })?;
    Ok(vec![("watson".into(), lhs, rhs)])
}

fn pentagonal(n: i64) -> Result<Vec<Pair>> {
    let g = grid(1, n)?;
    let lhs = eta_product(g)?;
    let mut rhs = ExactSeries::zero(g);
    let mut k = 0i64;
    loop {
        let mut any = false;
        for m in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = m * (3 * m - 1) / 2;
            if e < n {
                any = true;
                rhs.add_term(&rat(if m % 2 == 0 { 1 } else { -1 }), e);
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    Ok(vec![("pentagonal".into(), lhs, rhs)])
}

/// Parameters of the vector transformation at rank `r`.
struct Vector {
    x: Vec<QMonomial>,
    y: Vec<QMonomial>,
    z: QMonomial,
}

fn vector(a: &Args, r: usize) -> Result<Vector> {
    if !(1..=2).contains(&r) {
        return Err(Error::BadParameter { key: "r".into(), reason: "rank must be 1 or 2".into() });
    }
    Ok(Vector { x: a.indexed("x", r, |a, k| a.mono(k))?, y: a.indexed("y", r, |a, k| a.mono(k))?, z: a.mono("z")? })
}

impl Vector {
    fn all(&self) -> Vec<&QMonomial> {
        self.x.iter().chain(&self.y).chain([&self.z]).collect()
    }

    /// `Π (wx_s, q y_s/w)_∞` with `w = z^b`, inverted.
    fn denominator(&self, b: i64, g: ExponentGrid) -> Result<ExactSeries> {
        let zb = self.z.powi(b)?;
        let zbi = zb.recip()?;
        let mut f = Vec::new();
        for s in 0..self.x.len() {
            f.push((zb.mul(&self.x[s]), one()));
            f.push((q().mul(&zbi).mul(&self.y[s]), one()));
        }
        poch_infs(&f, true, g)
    }
}

/// `L_{a/b}(z^b x⃗; z^{−b} y⃗; q, z^a)` by its Pochhammer form.
fn mth_lhs(alpha: AlphaRational, v: &Vector, g: ExponentGrid) -> Result<ExactSeries> {
    let zb = v.z.powi(alpha.b)?;
    let zbi = zb.recip()?;
    let params = ExactParams {
        alpha,
        x: v.x.iter().map(|x| zb.mul(x)).collect(),
        y: v.y.iter().map(|y| zbi.mul(y)).collect(),
        z: v.z.powi(alpha.a)?,
    };
    l_vector_exact(&params, LForm::Pochhammer, g)
}

/// The root-of-unity side for `a ∈ {1, 2}`, where `ζ_a = ±1`.
fn mth_rhs(alpha: AlphaRational, v: &Vector, g: ExponentGrid) -> Result<ExactSeries> {
    let (a, b) = (alpha.a, alpha.b);
    if a > 2 {
        return Err(Error::DomainError("exact mode needs a in {1, 2}; larger a needs complex roots of unity".into()));
    }
    let base = r(1, a * b);
    at_order(g, |g| {
        let mut sum = ExactSeries::zero(g);
        for u in 0..a {
            let zeta = if u % 2 == 0 { rat(1) } else { rat(-1) };
            let xs: Vec<_> = v.x.iter().map(|x| x.scale(&zeta)).collect();
            let ys: Vec<_> = v.y.iter().map(|y| y.scale(&zeta)).collect();
            let h = h_alpha_exact(alpha, &xs, &ys, g)?;
            let arg = v.z.scale(&-zeta).shift(r(1 - a, 2 * a * b));
            let th = theta_series(&arg, base, ThetaForm::Sum, g)?;
            sum = sum.add(&h.mul(&th));
        }
        Ok(sum.mul(&v.denominator(b, g)?).scale(&frac(1, a)))
    })
}

fn thm_mth(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let alpha = AlphaRational::new(a.int("a")?, a.int("b")?)?;
    let rank = a.int("r")? as usize;
    if alpha.a < alpha.b * rank as i64 {
        return Err(Error::DomainError(format!("needs a >= b r (a = {}, b = {}, r = {rank})", alpha.a, alpha.b)));
    }
    let v = vector(a, rank)?;
    let g = grid(denom_for(4 * alpha.a as u32 * alpha.b as u32, &v.all()), n)?;
    Ok(vec![("transformation".into(), mth_lhs(alpha, &v, g)?, mth_rhs(alpha, &v, g)?)])
}

/// `θ(−z; q) H₁(x; y; q)/(zx, qy/z)_∞`.
fn psi11_theta_side(v: &Vector, g: ExponentGrid) -> Result<ExactSeries> {
    at_order(g, |g| {
        let th = theta_series(&v.z.neg(), one(), ThetaForm::Sum, g)?;
        let h = h_alpha_exact(AlphaRational::integer(1), &v.x, &v.y, g)?;
        Ok(mul_all(&[th, h, v.denominator(1, g)?]))
    })
}

/// `[θ(−zq^{−1/4}; q^{1/2}) H₂(x; y) + θ(zq^{−1/4}; q^{1/2}) H₂(−x; −y)] / (2 Π(zx_s, qy_s/z)_∞)`.
fn alpha2_theta_side(v: &Vector, g: ExponentGrid) -> Result<ExactSeries> {
    at_order(g, |g| {
        let arg = v.z.shift(r(-1, 4));
        let t1 = theta_series(&arg.neg(), r(1, 2), ThetaForm::Product, g)?;
        let t2 = theta_series(&arg, r(1, 2), ThetaForm::Product, g)?;
        let two = AlphaRational::integer(2);
        let h1 = h_alpha_exact(two, &v.x, &v.y, g)?;
        let neg = |s: &[QMonomial]| s.iter().map(QMonomial::neg).collect::<Vec<_>>();
        let h2 = h_alpha_exact(two, &neg(&v.x), &neg(&v.y), g)?;
        let num = t1.mul(&h1).add(&t2.mul(&h2));
        Ok(num.mul(&v.denominator(1, g)?).scale(&frac(1, 2)))
    })
}

/// `θ(−z; q)(xy)_∞ / (zx, qy/z, −x, −y)_∞`.
fn psi11_product_side(v: &Vector, g: ExponentGrid) -> Result<ExactSeries> {
    let (x, y, z) = (&v.x[0], &v.y[0], &v.z);
    let mut p = theta_product(&z.neg(), one(), g.denom)?;
    mul_poch_inf(&mut p, &x.mul(y), one(), false)?;
    for f in [z.mul(x), q().mul(&z.recip()?).mul(y), x.neg(), y.neg()] {
        mul_poch_inf(&mut p, &f, one(), true)?;
    }
    Ok(p.expand(g.order))
}

fn rank_one(a: &Args) -> Result<Vector> {
    Ok(Vector { x: vec![a.mono("x")?], y: vec![a.mono("y")?], z: a.mono("z")? })
}

fn rama_1psi1(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let v = rank_one(a)?;
    let g = grid(denom_for(1, &v.all()), n)?;
    let lhs = mth_lhs(AlphaRational::integer(1), &v, g)?;
    Ok(vec![("1psi1".into(), lhs, psi11_product_side(&v, g)?)])
}

fn cor_corm1(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let v = rank_one(a)?;
    let g = grid(denom_for(4, &v.all()), n)?;
    let one_a = AlphaRational::integer(1);
    let two = AlphaRational::integer(2);
    let r1 = psi11_theta_side(&v, g)?;
    let r2 = alpha2_theta_side(&v, g)?;
    Ok(vec![
        ("alpha=1".into(), mth_lhs(one_a, &v, g)?, r1.clone()),
        ("alpha=2".into(), mth_lhs(two, &v, g)?, r2.clone()),
        ("alpha=1 vs 1psi1".into(), r1.clone(), psi11_product_side(&v, g)?),
        ("general a=1".into(), mth_rhs(one_a, &v, g)?, r1),
        ("general a=2".into(), mth_rhs(two, &v, g)?, r2),
    ])
}

fn lebesgue_bilateral(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let (x, z) = (a.mono("x")?, a.mono("z")?);
    let (la, lb) = (a.mono("a")?, a.mono("b")?);
    let g = grid(denom_for(1, &[&x, &z, &la, &lb]), n)?;
    let d = g.denom;
    let up = z.neg().mul(&x.recip()?);
    let down = z.mul(&x);
    let lhs1 = bilateral_sum(g, saturation(&[&up, &down]), |k| {
        let mut p = monomial_prefix(&down.powi(k)?, Ratio::from_integer(binom2(k)), d)?;
        mul_poch(&mut p, &up, one(), k, false)?;
        mul_poch(&mut p, &down, one(), k, true)?;
        Ok(p)
    })?;
    let rhs1 = at_order(g, |g| {
        let num = poch_infs(&[(x.mul(&x).neg().mul(&q()), r(2, 1))], false, g)?;
        let th = theta_series(&z.mul(&z).neg(), r(2, 1), ThetaForm::Sum, g)?;
        let den = poch_infs(&[(down.clone(), one()), (q().mul(&x).mul(&z.recip()?).neg(), one())], true, g)?;
        Ok(mul_all(&[num, th, den]))
    })?;
    let bq = lb.mul(&q());
    let lhs2 = bilateral_sum(g, saturation(&[&la, &bq]), |k| {
        let mut p = monomial_prefix(&lb.powi(k)?, Ratio::from_integer(k * (k + 1) / 2), d)?;
        mul_poch(&mut p, &la, one(), k, false)?;
        mul_poch(&mut p, &bq, one(), k, true)?;
        Ok(p)
    })?;
    let rhs2 = at_order(g, |g| {
        let ab = la.mul(&lb);
        let num = poch_infs(
            &[
                (qp(2, 1), r(2, 1)),
                (ab.mul(&q()), r(2, 1)),
                (q().mul(&ab.recip()?), r(2, 1)),
                (lb.mul(&qp(2, 1)).mul(&la.recip()?), r(2, 1)),
            ],
            false,
            g,
        )?;
        let den = poch_infs(&[(bq.clone(), one()), (q().mul(&la.recip()?), one())], true, g)?;
        Ok(num.mul(&den))
    })?;
    Ok(vec![("first identity".into(), lhs1, rhs1), ("Lebesgue form".into(), lhs2, rhs2)])
}

fn cormm_2(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let (x, z) = (a.mono("x")?, a.mono("z")?);
    let g = grid(denom_for(2, &[&x, &z]), n)?;
    let d = g.denom;
    let two = r(2, 1);
    let up = z.mul(&x.recip()?);
    let down = q().mul(&z).mul(&x);
    let w = x.mul(&z).neg();
    let lhs = bilateral_sum(g, saturation(&[&up, &down]), |k| {
        let mut p = monomial_prefix(&w.powi(k)?, Ratio::from_integer(k * (k + 1)), d)?;
        mul_poch(&mut p, &up, two, k, false)?;
        mul_poch(&mut p, &down, two, k, true)?;
        Ok(p)
    })?;
    let rhs = at_order(g, |g| {
        let zh = z.shift(r(1, 2));
        let xh = x.shift(r(1, 2));
        let a1 = theta_series(&zh.neg(), one(), ThetaForm::Sum, g)?.mul(&poch_infs(&[(xh.clone(), one())], false, g)?);
        let a2 = theta_series(&zh, one(), ThetaForm::Sum, g)?.mul(&poch_infs(&[(xh.neg(), one())], false, g)?);
        let den = poch_infs(&[(down.clone(), two), (qp(2, 1).mul(&x).mul(&z.recip()?), two)], true, g)?;
        Ok(a1.add(&a2).mul(&den).scale(&frac(1, 2)))
    })?;
    Ok(vec![("second identity".into(), lhs, rhs)])
}

/// `S(w) = Σ_{n≥0} wⁿ q^{n(n+2)/4}/(q)_n`.
fn s_series(w: &QMonomial, g: ExponentGrid) -> Result<ExactSeries> {
    unilateral_exact(g, saturation(&[w]), |k| {
        let mut p = monomial_prefix(&w.powi(k)?, r(k * (k + 2), 4), g.denom)?;
        mul_poch(&mut p, &q(), one(), k, true)?;
        Ok(p)
    })
}

/// `[θ(−zq^{1/4}; q^{1/2}) S(−x) + θ(zq^{1/4}; q^{1/2}) S(x)] / (2 (qxz)_∞)`.
fn corm2_theta_side(x: &QMonomial, z: &QMonomial, g: ExponentGrid) -> Result<ExactSeries> {
    at_order(g, |g| {
        let arg = z.shift(r(1, 4));
        let t1 = theta_series(&arg.neg(), r(1, 2), ThetaForm::Sum, g)?;
        let t2 = theta_series(&arg, r(1, 2), ThetaForm::Sum, g)?;
        let num = t1.mul(&s_series(&x.neg(), g)?).add(&t2.mul(&s_series(x, g)?));
        let den = poch_infs(&[(q().mul(x).mul(z), one())], true, g)?;
        Ok(num.mul(&den).scale(&frac(1, 2)))
    })
}

fn corm2(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let (x, z) = (a.mono("x")?, a.mono("z")?);
    let g = grid(denom_for(4, &[&x, &z]), n)?;
    let d = g.denom;
    let down = q().mul(&x).mul(&z);
    let z2 = z.mul(&z);
    let lhs = bilateral_sum(g, saturation(&[&down]), |k| {
        let mut p = monomial_prefix(&z2.powi(k)?, Ratio::from_integer(k * k), d)?;
        mul_poch(&mut p, &down, one(), k, true)?;
        Ok(p)
    })?;
    let special = ("special case".to_string(), lhs, corm2_theta_side(&x, &z, g)?);
    // a = 2, b = 1: L₂(zx; q, z²) = ½ Σ_{u=0,1} θ(−ζᵘ z q^{−1/4}; q^{1/2}) L_{1/2}(q; q, −ζᵘ x q^{1/4}) / (zx)_∞
    let general_lhs = l_scalar_exact(&z.mul(&x), &z2, AlphaRational::integer(2), g)?;
    let general_rhs = at_order(g, |g| {
        let half = AlphaRational::new(1, 2)?;
        let mut sum = ExactSeries::zero(g);
        for zeta in [rat(1), rat(-1)] {
            let th = theta_series(&z.scale(&-zeta.clone()).shift(r(-1, 4)), r(1, 2), ThetaForm::Sum, g)?;
            let dual = l_scalar_exact(&q(), &x.scale(&-zeta).shift(r(1, 4)), half, g)?;
            sum = sum.add(&th.mul(&dual));
        }
        Ok(sum.mul(&poch_infs(&[(z.mul(&x), one())], true, g)?).scale(&frac(1, 2)))
    })?;
    Ok(vec![special, ("a=2, b=1".into(), general_lhs, general_rhs)])
}

fn ramanujan_116(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let z = a.mono("z")?;
    let g = grid(denom_for(4, &[&z]), n)?;
    let z2 = z.mul(&z);
    let lhs = unilateral_exact(g, saturation(&[&z]), |k| {
        let mut p = monomial_prefix(&z2.powi(k)?, Ratio::from_integer(k * k), g.denom)?;
        mul_poch(&mut p, &q(), one(), k, true)?;
        Ok(p)
    })?;
    Ok(vec![("x = 1/z".into(), lhs, corm2_theta_side(&z.recip()?, &z, g)?)])
}

fn mcor(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let v = vector(a, 2)?;
    let g = grid(denom_for(4, &v.all()), n)?;
    let upper = v.y.iter().map(|y| Ok(v.z.mul(&y.recip()?))).collect::<Result<Vec<_>>>()?;
    let lower: Vec<_> = v.x.iter().map(|x| v.z.mul(x)).collect();
    let w = v.y[0].mul(&v.y[1]);
    let mut pairs = vec![("2psi2".to_string(), psi_r_exact(&upper, &lower, &w, g)?, alpha2_theta_side(&v, g)?)];
    for l in [0i64, 1] {
        // z ↦ q^{1/4+ℓ/2}, y ↦ q^{1/4+ℓ/2} y, x ↦ q^{−1/4−ℓ/2} x
        let s = r(1 + 2 * l, 4);
        let up: Vec<_> = v.y.iter().map(QMonomial::recip).collect::<Result<_>>()?;
        let lhs = psi_r_exact(&up, &v.x, &w.shift(r(1 + 2 * l, 2)), g)?;
        let rhs = at_order(g, |g| {
            let th = theta_series(&qp(l, 2).neg(), r(1, 2), ThetaForm::Sum, g)?;
            let xs: Vec<_> = v.x.iter().map(|x| x.shift(-s)).collect();
            let ys: Vec<_> = v.y.iter().map(|y| y.shift(s)).collect();
            let h = h_alpha_exact(AlphaRational::integer(2), &xs, &ys, g)?;
            let mut f = Vec::new();
            for k in 0..2 {
                f.push((v.x[k].clone(), one()));
                f.push((q().mul(&v.y[k]), one()));
            }
            Ok(mul_all(&[th, h, poch_infs(&f, true, g)?]).scale(&frac(1, 2)))
        })?;
        pairs.push((format!("shifted l={l}"), lhs, rhs));
    }
    let g1 = grid(2, n)?;
    for l in [0i64, 1] {
        // Σ q^{2n(n−1)+(1+2ℓ)n}/(q²;q²)_n = θ(−q^ℓ; q)/(2(q²;q²)_∞) Σ (−1)ⁿ q^{n²/2+(3/2−ℓ)n}/(q²;q²)_n
        let lhs = unilateral_exact(g1, 4, |k| {
            let mut p = monomial_prefix(&c(rat(1)), Ratio::from_integer(2 * k * (k - 1) + (1 + 2 * l) * k), 2)?;
            mul_poch(&mut p, &qp(2, 1), r(2, 1), k, true)?;
            Ok(p)
        })?;
        let rhs = at_order(g1, |g| {
            let sum = unilateral_exact(g, 4, |k| {
                let sign = if k % 2 == 0 { rat(1) } else { rat(-1) };
                let mut p = monomial_prefix(&c(sign), r(k * k + (3 - 2 * l) * k, 2), 2)?;
                mul_poch(&mut p, &qp(2, 1), r(2, 1), k, true)?;
                Ok(p)
            })?;
            let th = theta_series(&qp(l, 1).neg(), one(), ThetaForm::Sum, g)?;
            let den = poch_infs(&[(qp(2, 1), r(2, 1))], true, g)?;
            Ok(mul_all(&[th, den, sum]).scale(&frac(1, 2)))
        })?;
        pairs.push((format!("McIntosh form l={l}"), lhs, rhs));
        // θ(−q^ℓ; q) = 2 q^{−ℓ(ℓ−1)/2} (−q)_∞ (q²;q²)_∞
        let th = theta_series(&qp(l, 1).neg(), one(), ThetaForm::Sum, g1)?;
        let prod = at_order(g1, |g| {
            Ok(poch_infs(&[(qp(1, 1).neg(), one()), (qp(2, 1), r(2, 1))], false, g)?
                .shift(-units(Ratio::from_integer(binom2(l)), 2)?)
                .scale(&rat(2)))
        })?;
        pairs.push((format!("theta at -q^{l}"), th, prod));
    }
    Ok(pairs)
}

fn mci(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let m = a.int("m")?;
    let g = grid(1, n)?;
    let q2 = qp(2, 1);
    let lhs = unilateral_exact(g, 4 + 2 * m.abs(), |k| {
        let e = 2 * k * k + (2 * m + 1) * k + m * (m + 1) / 2;
        let mut p = monomial_prefix(&c(rat(1)), Ratio::from_integer(e), 1)?;
        mul_poch(&mut p, &q2, r(2, 1), k, true)?;
        Ok(p)
    })?;
    let rhs = at_order(g, |g| {
        let sum = unilateral_exact(g, 4 + 2 * m.abs(), |j| {
            let sign = if j % 2 == 0 { rat(1) } else { rat(-1) };
            let mut p = monomial_prefix(&c(sign), Ratio::from_integer(j * (j + 1) / 2 - m * j), 1)?;
            mul_poch(&mut p, &q2, r(2, 1), j, true)?;
            Ok(p)
        })?;
        Ok(poch_infs(&[(q().neg(), one())], false, g)?.mul(&sum))
    })?;
    Ok(vec![(format!("m={m}"), lhs, rhs)])
}

fn pro22_1(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let x = a.mono("x")?;
    let g = grid(denom_for(4, &[&x]), n)?;
    let h = h_alpha_exact(AlphaRational::integer(2), std::slice::from_ref(&x), &[x.neg()], g)?;
    let prod = poch_infs(&[(x.mul(&x).neg().mul(&q()), r(2, 1))], false, g)?;
    Ok(vec![("H2(x; -x)".into(), h, prod)])
}

fn pro22_2(a: &Args, n: i64) -> Result<Vec<Pair>> {
    // H₂(x; xq; q²) = (xq^{1/2})_∞ with q² renamed to q
    let x = a.mono("x")?;
    let g = grid(denom_for(4, &[&x]), n)?;
    let h = h_alpha_exact(AlphaRational::integer(2), std::slice::from_ref(&x), &[x.shift(r(1, 2))], g)?;
    let prod = poch_infs(&[(x.shift(r(1, 4)), r(1, 2))], false, g)?;
    Ok(vec![("H2(x; xq^(1/2))".into(), h, prod)])
}

fn f_args(a: &Args) -> Result<(BigRational, Ratio<i64>, Ratio<i64>)> {
    Ok((a.rational("a")?, a.ratio("b")?, a.ratio("c")?))
}

fn f_grid(b: Ratio<i64>, c: Ratio<i64>, n: i64) -> Result<ExponentGrid> {
    grid((*b.denom() as u32).lcm(&(*c.denom() as u32)), n)
}

fn prop10_tail(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let (fa, b, cc) = f_args(a)?;
    let g = f_grid(b, cc, n)?;
    let diff = f_family_exact(FFamily::F2Hat, &fa, b, cc, g)?.sub(&f_family_exact(FFamily::F2, &fa, b, cc, g)?);
    // Σ_{n≥1} q^{bn²−cn} / (aⁿ (−1; q^{−1})_n)
    let ai = fa.recip();
    let tail = sum_exact(g, 4, 1, 1, |k| {
        let mut p = QProduct::one(g.denom);
        p.mul_monomial(&num_traits::pow(ai.clone(), k as usize), units(b * k * k - cc * k, g.denom)?);
        mul_poch(&mut p, &c(rat(-1)), -one(), k, true)?;
        Ok(p)
    })?;
    Ok(vec![("f2hat - f2".into(), diff, tail)])
}

fn mm10_hat(a: &Args, n: i64) -> Result<Vec<Pair>> {
    let (fa, b, cc) = f_args(a)?;
    let g = f_grid(b, cc, n)?;
    let hat = f_family_exact(FFamily::F1Hat, &fa, b, cc, g)?;
    let plain = f_family_exact(FFamily::F1, &fa, b, cc, g)?;
    Ok(vec![("f1hat = f1".into(), hat, plain)])
}

/// Compared pairs for an exact identity at q-order `n`.
pub(crate) fn pairs(id: &str, a: &Args, n: i64) -> Result<Vec<Pair>> {
    match id {
        "euler" => euler(a, n),
        "jtp" => jtp(a, n),
        "watson" => watson(n),
        "pentagonal" => pentagonal(n),
        "thm-mth" => thm_mth(a, n),
        "cor-corm1" => cor_corm1(a, n),
        "lebesgue-bilateral" => lebesgue_bilateral(a, n),
        "cormm-2" => cormm_2(a, n),
        "corm2" => corm2(a, n),
        "ramanujan-1.16" => ramanujan_116(a, n),
        "mcor" => mcor(a, n),
        "mci" => mci(a, n),
        "rama-1psi1" => rama_1psi1(a, n),
        "pro22-1" => pro22_1(a, n),
        "pro22-2" => pro22_2(a, n),
        "prop10" => prop10_tail(a, n),
        "mm10" => mm10_hat(a, n),
        _ => Err(Error::UnsupportedMode { id: id.into(), mode: "exact".into() }),
    }
}

/// Largest coefficient difference over all pairs, with per-pair values.
pub(crate) fn deviation(pairs: &[Pair]) -> (BigRational, Vec<(String, BigRational)>) {
    let mut worst = BigRational::zero();
    let mut each = Vec::new();
    for (label, l, r) in pairs {
        let d = l.max_abs_diff(r);
        if d > worst {
            worst = d.clone();
        }
        each.push((label.clone(), d));
    }
    (worst, each)
}
