//! Registry of identities and asymptotic claims, checks and reports.

mod exact;
mod numeric;
mod params;
#[cfg(test)]
mod tests;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;
use rug::Float;
use serde::Serialize;

pub use exact::{eta_product, euler_lhs, euler_rhs};
pub use params::ParamMap;
use params::{resolve, Args};

use crate::asym::{rate_fit, relative_residual, Claim, RateFit};
use crate::error::{Error, Result};
use crate::exactq::ExactSeries;
use crate::numq::{self, Precision};

/// Default q-order of exact checks.
pub const DEFAULT_ORDER: i64 = 40;
/// Default precision of numeric checks.
pub const DEFAULT_BITS: u32 = 256;
/// Default precision of asymptotic checks.
pub const DEFAULT_ASYM_BITS: u32 = 512;
/// Default `t` grid of asymptotic checks.
pub const DEFAULT_T_GRID: [f64; 3] = [0.5, 0.25, 0.125];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Numeric,
    Asymptotic,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Exact, Mode::Numeric, Mode::Asymptotic];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Asymptotic => "asymptotic",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::BadParameter { key: "mode".into(), reason: format!("unknown mode {s:?}") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        }
    }
}

/// Which modes a suite runs.
#[derive(Clone, Debug, PartialEq)]
pub enum Selection {
    All,
    Modes(Vec<Mode>),
    Ids(Vec<String>),
}

impl Selection {
    fn admits(&self, id: &str, mode: Mode) -> bool {
        match self {
            Selection::All => true,
            Selection::Modes(m) => m.contains(&mode),
            Selection::Ids(ids) => ids.iter().any(|i| i == id),
        }
    }
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Selection::All),
            "" => Ok(Selection::Modes(Vec::new())),
            _ => {
                let modes = s.split(',').map(|m| m.trim().parse()).collect::<Result<Vec<Mode>>>()?;
                Ok(Selection::Modes(modes))
            }
        }
    }
}

type Pairs = &'static [(&'static str, &'static str)];

/// Parameters of one identity in one mode.
#[derive(Debug)]
pub struct ModeSpec {
    /// Every accepted key with its default.
    pub defaults: Pairs,
    /// Exact mode: q-powers attached to bare rational values of these keys.
    pub q_powers: Pairs,
    /// Override sets run by the suite; empty means the defaults once.
    pub suite: &'static [Pairs],
}

#[derive(Debug)]
pub struct IdentitySpec {
    pub id: &'static str,
    pub summary: &'static str,
    pub exact: Option<ModeSpec>,
    pub numeric: Option<ModeSpec>,
    pub asymptotic: Option<ModeSpec>,
}

impl IdentitySpec {
    pub fn mode(&self, mode: Mode) -> Option<&ModeSpec> {
        match mode {
            Mode::Exact => self.exact.as_ref(),
            Mode::Numeric => self.numeric.as_ref(),
            Mode::Asymptotic => self.asymptotic.as_ref(),
        }
    }

    pub fn modes(&self) -> Vec<Mode> {
        Mode::ALL.into_iter().filter(|m| self.mode(*m).is_some()).collect()
    }
}

const fn plain(defaults: Pairs) -> Option<ModeSpec> {
    Some(ModeSpec { defaults, q_powers: &[], suite: &[] })
}

const fn with_suite(defaults: Pairs, suite: &'static [Pairs]) -> Option<ModeSpec> {
    Some(ModeSpec { defaults, q_powers: &[], suite })
}

const fn with_q(defaults: Pairs, q_powers: Pairs, suite: &'static [Pairs]) -> Option<ModeSpec> {
    Some(ModeSpec { defaults, q_powers, suite })
}

const NONE: Option<ModeSpec> = None;

pub static REGISTRY: &[IdentitySpec] = &[
    IdentitySpec {
        id: "euler",
        summary: "Euler: the sum of z^n q^binom(n,2)/(q)_n is the product (-z;q)_inf",
        exact: plain(&[("z", "1")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "eta",
        summary: "modular transformation of (q;q)_inf under t -> 4 pi^2/t",
        exact: NONE,
        numeric: plain(&[("t", "0.5")]),
        asymptotic: plain(&[]),
    },
    IdentitySpec {
        id: "jtp",
        summary: "Jacobi triple product: theta sum equals (z, q/z, q)_inf",
        exact: plain(&[("z", "2")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "watson",
        summary: "Watson: sum of q^binom(n+1,2)/(q)_n^2 through a base q^2 sum",
        exact: plain(&[]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "pentagonal",
        summary: "pentagonal number expansion of (q;q)_inf",
        exact: plain(&[]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "thm-main1",
        summary: "scalar L_alpha transformed into its dual series L_{1-1/alpha} plus a theta kernel",
        exact: NONE,
        numeric: with_suite(
            &[("alpha", "2"), ("x", "-1/2"), ("z", "3/2"), ("t", "0.7")],
            &[&[("alpha", "2")], &[("alpha", "5/2")]],
        ),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "cor-mth1-asym",
        summary: "leading behaviour of L over H for the vector series with non-positive parameters",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[
            ("alpha", "3"),
            ("r", "2"),
            ("x1", "-1/2"),
            ("x2", "-1/3"),
            ("y1", "-1/4"),
            ("y2", "-1/5"),
            ("z", "1"),
        ]),
    },
    IdentitySpec {
        id: "thm-mth1",
        summary: "vector L_alpha transformed into H_alpha times a theta-type kernel",
        exact: NONE,
        numeric: plain(&[
            ("alpha", "3"),
            ("r", "2"),
            ("x1", "-1/2"),
            ("x2", "-1/3"),
            ("y1", "-1/4"),
            ("y2", "-1/5"),
            ("z", "1"),
            ("t", "0.9"),
        ]),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "thm-mth",
        summary: "rational alpha = a/b: L split over a-th roots of unity into H times theta",
        exact: with_q(
            &[
                ("a", "2"),
                ("b", "1"),
                ("r", "1"),
                ("x1", "1/3"),
                ("y1", "1/5"),
                ("x2", "1/2"),
                ("y2", "1/7"),
                ("z", "2"),
            ],
            &[("x1", "q"), ("y1", "q"), ("x2", "q"), ("y2", "q")],
            &[&[("a", "1")], &[("a", "2")]],
        ),
        numeric: with_suite(
            &[
                ("a", "3"),
                ("b", "1"),
                ("r", "1"),
                ("x1", "-0.3"),
                ("y1", "-0.2"),
                ("x2", "-0.1"),
                ("y2", "-0.4"),
                ("z", "1.1"),
                ("q", "0.5"),
            ],
            &[&[("a", "3")], &[("a", "4")]],
        ),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "cor-corm1",
        summary: "alpha = 1 and alpha = 2 cases of the rational transformation, incl. the 1psi1 form",
        exact: with_q(&[("x", "1/3"), ("y", "1/5"), ("z", "2")], &[("x", "q"), ("y", "q")], &[]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "lebesgue-bilateral",
        summary: "bilateral sums with base q Pochhammer ratios, incl. the bilateral Lebesgue identity",
        exact: plain(&[("x", "1/2"), ("z", "1/3"), ("a", "1/2"), ("b", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "cormm-2",
        summary: "bilateral base q^2 sum as a half-sum of two theta-product terms",
        exact: plain(&[("x", "1/2"), ("z", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "corm2",
        summary: "sum of z^2n q^n^2/(qxz)_n via two half-base thetas, and the a=2 dual form",
        exact: plain(&[("x", "1/2"), ("z", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "ramanujan-1.16",
        summary: "the x = 1/z case of the corm2 special identity",
        exact: plain(&[("z", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "mcor",
        summary: "2psi2 through H_2, its shifted forms and McIntosh-type base q^2 sums",
        exact: with_q(
            &[("x1", "1/3"), ("x2", "1/2"), ("y1", "1/5"), ("y2", "1/7"), ("z", "2")],
            &[("x1", "q"), ("x2", "q"), ("y1", "q"), ("y2", "q")],
            &[],
        ),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "mci",
        summary: "McIntosh: base q^2 sum with shift m against (-q)_inf times an alternating sum",
        exact: with_suite(
            &[("m", "0")],
            &[&[("m", "-2")], &[("m", "-1")], &[("m", "0")], &[("m", "1")], &[("m", "2")]],
        ),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "lem21",
        summary: "theta-type sum over mu + Z under t -> 4 pi^2/t",
        exact: NONE,
        numeric: plain(&[("z", "2"), ("mu", "1/3"), ("t", "0.5")]),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "lem22",
        summary: "theta sum split over a residue system modulo a",
        exact: NONE,
        numeric: plain(&[("a", "3"), ("b", "2"), ("u", "1"), ("z", "0.7"), ("q", "0.4")]),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "eq21",
        summary: "L_alpha rewritten as a quadratic-form double sum of shifted theta sums",
        exact: NONE,
        numeric: plain(&[("alpha", "2"), ("r", "1"), ("x1", "-0.3"), ("y1", "-0.2"), ("z", "1.1"), ("q", "0.5")]),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "rama-1psi1",
        summary: "Ramanujan 1psi1 summation in the L_1 normalization",
        exact: with_q(
            &[("x", "1/3"), ("y", "1/5"), ("z", "2")],
            &[("x", "q"), ("y", "q")],
            &[
                &[("x", "1/3"), ("y", "1/5"), ("z", "2")],
                &[("x", "1/2"), ("y", "-1/3"), ("z", "3")],
                &[("x", "-2/3"), ("y", "1/4"), ("z", "1/2")],
            ],
        ),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "promr1",
        summary: "unilateral sum over (y)_n completed to theta(-z;q)/(y, -y/z)_inf",
        exact: NONE,
        numeric: plain(&[("y", "0.6"), ("z", "2"), ("q", "0.3")]),
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "cor32",
        summary: "the promr1 sum approaches its theta quotient as q -> 1 with y = q^ypow",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("z", "1"), ("ypow", "1/2")]),
    },
    IdentitySpec {
        id: "asymm",
        summary: "q^{n^2} a^n sum against its theta approximation, superpolynomially close",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("a", "1"), ("c", "0")]),
    },
    IdentitySpec {
        id: "pro22-1",
        summary: "H_2(x; -x) as a base q^2 product",
        exact: plain(&[("x", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "pro22-2",
        summary: "H_2(x; xq^(1/2)) as a half-base product",
        exact: plain(&[("x", "1/3")]),
        numeric: NONE,
        asymptotic: NONE,
    },
    IdentitySpec {
        id: "prop10",
        summary: "f2hat minus f2 equals an explicit tail, which vanishes as q -> 1",
        exact: plain(&[("a", "1"), ("b", "1"), ("c", "0")]),
        numeric: NONE,
        asymptotic: plain(&[("a", "1"), ("b", "1"), ("c", "0")]),
    },
    IdentitySpec {
        id: "cor02",
        summary: "normalized scalar L_alpha approaches its dual series",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("alpha", "2"), ("x", "-1"), ("z", "1")]),
    },
    IdentitySpec {
        id: "cor2",
        summary: "L_alpha(-1; q, z^alpha) quotient against its closed asymptotic form",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("alpha", "2"), ("z", "1")]),
    },
    IdentitySpec {
        id: "cor1",
        summary: "L_alpha(1; q, z^alpha) with error rate governed by delta_alpha(z)",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("alpha", "2"), ("z", "1")]),
    },
    IdentitySpec {
        id: "mm10",
        summary: "f1 against f1tilde with rate governed by delta_2b(a^(1/2b)); f1hat equals f1",
        exact: plain(&[("a", "1"), ("b", "1"), ("c", "0")]),
        numeric: NONE,
        asymptotic: plain(&[("a", "1"), ("b", "1"), ("c", "0")]),
    },
    IdentitySpec {
        id: "mm20",
        summary: "f2hat against f2tilde as q -> 1",
        exact: NONE,
        numeric: NONE,
        asymptotic: plain(&[("a", "1"), ("b", "1"), ("c", "0")]),
    },
];

/// All registered ids in registry order.
pub fn ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|s| s.id).collect()
}

pub fn lookup(id: &str) -> Result<&'static IdentitySpec> {
    REGISTRY.iter().find(|s| s.id == id).ok_or_else(|| Error::UnknownIdentity(id.into()))
}

fn mode_spec(id: &str, mode: Mode) -> Result<&'static ModeSpec> {
    lookup(id)?.mode(mode).ok_or_else(|| Error::UnsupportedMode { id: id.into(), mode: mode.to_string() })
}

/// One check result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub mode: Mode,
    pub params: ParamMap,
    pub order_or_bits: u64,
    pub deviation: String,
    pub threshold: Option<String>,
    pub c_fit: Option<f64>,
    pub c_pred: Option<f64>,
    pub verdict: Verdict,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }

    /// One human-readable line.
    pub fn summary(&self) -> String {
        let mut s =
            format!("{:<5} {:<10} {:<20} deviation {}", self.verdict.as_str(), self.mode, self.id, self.deviation);
        if let Some(t) = &self.threshold {
            s.push_str(&format!(" (threshold {t})"));
        }
        if let Some(c) = self.c_fit {
            s.push_str(&format!(" C_fit {c:.4}"));
        }
        if let Some(c) = self.c_pred {
            s.push_str(&format!(" C_pred {c:.4}"));
        }
        s
    }

    fn error(id: &str, mode: Mode, params: ParamMap, order_or_bits: u64, e: &Error) -> Self {
        CheckReport {
            id: id.into(),
            mode,
            params,
            order_or_bits,
            deviation: format!("error: {e}"),
            threshold: None,
            c_fit: None,
            c_pred: None,
            verdict: Verdict::Fail,
            elapsed_ms: 0,
            notes: BTreeMap::new(),
        }
    }
}

fn sci(x: &Float) -> String {
    if x.is_zero() {
        "0".into()
    } else {
        numq::fmt_real(x, 6)
    }
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Exact check at q-order `order`: every compared pair must agree exactly.
pub fn check_exact(id: &str, overrides: &ParamMap, order: i64) -> Result<CheckReport> {
    let start = Instant::now();
    let map = resolve(mode_spec(id, Mode::Exact)?, Mode::Exact, overrides)?;
    let pairs = exact::pairs(id, &Args::new(&map), order)?;
    let (worst, each) = exact::deviation(&pairs);
    let notes =
        if each.len() > 1 { each.into_iter().map(|(k, d)| (k, d.to_string())).collect() } else { BTreeMap::new() };
    Ok(CheckReport {
        id: id.into(),
        mode: Mode::Exact,
        params: map,
        order_or_bits: order.max(0) as u64,
        verdict: if worst.is_zero() { Verdict::Pass } else { Verdict::Fail },
        deviation: worst.to_string(),
        threshold: None,
        c_fit: None,
        c_pred: None,
        elapsed_ms: elapsed(start),
        notes,
    })
}

/// Relative difference of both sides against `2^{−bits/2}`.
pub fn check_numeric(id: &str, overrides: &ParamMap, bits: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let prec = Precision::new(bits)?;
    let map = resolve(mode_spec(id, Mode::Numeric)?, Mode::Numeric, overrides)?;
    let (lhs, rhs) = numeric::sides(id, &Args::new(&map), prec)?;
    let dev = lhs.rel_diff(&rhs);
    let threshold = Float::with_val(prec.working(), Float::i_exp(1, -((bits / 2) as i32)));
    let mut notes = BTreeMap::new();
    notes.insert("lhs".into(), numq::fmt_real(&lhs.re, 30));
    if !lhs.im.is_zero() {
        notes.insert("lhs_im".into(), numq::fmt_real(&lhs.im, 30));
    }
    Ok(CheckReport {
        id: id.into(),
        mode: Mode::Numeric,
        params: map,
        order_or_bits: bits as u64,
        verdict: if dev < threshold { Verdict::Pass } else { Verdict::Fail },
        deviation: sci(&dev),
        threshold: Some(sci(&threshold)),
        c_fit: None,
        c_pred: None,
        elapsed_ms: elapsed(start),
        notes,
    })
}

/// The asymptotic claim behind `id`; `lem21` and `thm-main1` give the exact
/// transformations, used for sweeps.
fn claim_for(id: &str, a: &Args, prec: Precision) -> Result<Claim> {
    let f = |k: &str| a.real(k, prec);
    Ok(match id {
        "eta" => Claim::Eta,
        "cor02" => Claim::Cor02 { alpha: f("alpha")?, x: f("x")?, z: f("z")? },
        "cor2" => Claim::Cor2 { alpha: f("alpha")?, z: f("z")? },
        "cor1" => Claim::Cor1 { alpha: f("alpha")?, z: f("z")? },
        "mm10" => Claim::Mm10 { a: f("a")?, b: f("b")?, c: f("c")? },
        "mm20" => Claim::Mm20 { a: f("a")?, b: f("b")?, c: f("c")? },
        "prop10" => Claim::Prop10 { a: f("a")?, b: f("b")?, c: f("c")? },
        "cor32" => Claim::Cor32 { z: f("z")?, ypow: f("ypow")? },
        "asymm" => Claim::Asymm { a: f("a")?, c: f("c")? },
        "cor-mth1-asym" => {
            let r = a.int("r")? as usize;
            Claim::CorMth1Asym {
                alpha: f("alpha")?,
                x: a.indexed("x", r, |a, k| a.real(k, prec))?,
                y: a.indexed("y", r, |a, k| a.real(k, prec))?,
                z: f("z")?,
            }
        }
        "lem21" => Claim::Lem21 { z: f("z")?, mu: f("mu")? },
        "thm-main1" => Claim::Main1 { alpha: f("alpha")?, x: f("x")?, z: f("z")? },
        _ => return Err(Error::UnsupportedMode { id: id.into(), mode: Mode::Asymptotic.to_string() }),
    })
}

fn check_grid(ts: &[f64]) -> Result<()> {
    let bad = |reason: &str| Error::BadParameter { key: "t".into(), reason: reason.into() };
    if ts.is_empty() {
        return Err(bad("empty t grid"));
    }
    if ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(bad("t values must be positive"));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(bad("t grid must be strictly decreasing"));
    }
    Ok(())
}

/// `t` as an exact decimal at working precision.
fn t_value(t: f64, prec: Precision) -> Result<Float> {
    numq::parse_real(&format!("{t}"), prec)
}

/// Relative residual of a claim at each `t`, evaluated in parallel.
fn residuals(claim: &Claim, ts: &[f64], prec: Precision) -> Result<Vec<(f64, Float)>> {
    ts.par_iter()
        .map(|&t| {
            let (m, p) = claim.sides(&t_value(t, prec)?, prec)?;
            Ok((t, relative_residual(&m, &p)?))
        })
        .collect()
}

/// Rate fit of a claim's residual over the `t` grid.
pub fn check_asymptotic(id: &str, overrides: &ParamMap, ts: &[f64], bits: u32) -> Result<CheckReport> {
    let start = Instant::now();
    check_grid(ts)?;
    if ts.len() < 2 {
        return Err(Error::BadParameter { key: "t".into(), reason: "a rate fit needs at least two t values".into() });
    }
    let prec = Precision::new(bits)?;
    let map = resolve(mode_spec(id, Mode::Asymptotic)?, Mode::Asymptotic, overrides)?;
    let claim = claim_for(id, &Args::new(&map), prec)?;
    let samples = residuals(&claim, ts, prec)?;
    let c_pred = claim.c_pred(prec)?;
    let fit = rate_fit(&samples, c_pred)?;
    let rule = claim.rule();
    let delta = claim.delta(prec)?;

    let mut notes = BTreeMap::new();
    for (t, r) in &samples {
        notes.insert(format!("residual t={t}"), sci(r));
    }
    if let Some(d) = delta {
        notes.insert("delta".into(), format!("{d:.12}"));
        notes.insert("min(2,delta)".into(), format!("{:.12}", d.min(2.0)));
    }
    if let Some(e) = fit.rel_err {
        notes.insert("rel_err".into(), format!("{e:.6}"));
    }
    if let Some(r) = rule {
        notes.insert("rule".into(), rule_text(&r));
    }
    let verdict = match rule {
        _ if delta.is_some_and(|d| d <= 0.0) => Verdict::Informational,
        None => Verdict::Informational,
        Some(r) if r.judge(&fit) => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    let (_, smallest) = samples.last().expect("non-empty grid");
    Ok(CheckReport {
        id: id.into(),
        mode: Mode::Asymptotic,
        params: map,
        order_or_bits: bits as u64,
        deviation: sci(smallest),
        threshold: rule.map(|r| rule_text(&r)),
        c_fit: Some(round_fit(fit.c_fit)),
        c_pred: c_pred.map(round_fit),
        verdict,
        elapsed_ms: elapsed(start),
        notes,
    })
}

/// Fit constants carry far more digits than the fit supports; twelve keep
/// reports stable across platforms.
fn round_fit(c: f64) -> f64 {
    format!("{c:.12}").parse().unwrap_or(c)
}

fn rule_text(r: &crate::asym::RateRule) -> String {
    use crate::asym::RateRule;
    match *r {
        RateRule::Match { tol } => format!("|C_fit - C_pred| <= {tol} C_pred"),
        RateRule::AtLeast { tol } => format!("C_fit >= {} C_pred", 1.0 - tol),
        RateRule::Decays => "residual strictly decreasing, C_fit > 0".into(),
        RateRule::FasterThanPower(p) => format!("faster than t^{p}"),
    }
}

/// Rate fit and per-`t` residuals without a verdict, for consistency checks.
pub fn fit_asymptotic(id: &str, overrides: &ParamMap, ts: &[f64], bits: u32) -> Result<RateFit> {
    check_grid(ts)?;
    let prec = Precision::new(bits)?;
    let map = resolve(mode_spec(id, Mode::Asymptotic)?, Mode::Asymptotic, overrides)?;
    let claim = claim_for(id, &Args::new(&map), prec)?;
    let samples = residuals(&claim, ts, prec)?;
    rate_fit(&samples, claim.c_pred(prec)?)
}

/// One row of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub t: String,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
}

/// Ids accepted by [`sweep`].
pub fn sweep_ids() -> Vec<&'static str> {
    REGISTRY.iter().filter(|s| s.asymptotic.is_some() || matches!(s.id, "lem21" | "thm-main1")).map(|s| s.id).collect()
}

/// `t` values from `start` to `stop` in `count` equal steps.
pub fn t_range(start: f64, stop: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::BadParameter { key: "t".into(), reason: "count must be positive".into() });
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|k| round_fit(start + step * k as f64)).collect())
}

/// Both sides and the relative residual of a claim along `ts`.
pub fn sweep(id: &str, overrides: &ParamMap, ts: &[f64], bits: u32) -> Result<Vec<SweepRow>> {
    if !sweep_ids().contains(&id) {
        lookup(id)?;
        return Err(Error::UnsupportedMode { id: id.into(), mode: "sweep".into() });
    }
    if ts.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::BadParameter { key: "t".into(), reason: "t values must be positive".into() });
    }
    let prec = Precision::new(bits)?;
    let spec = lookup(id)?;
    let map = match &spec.asymptotic {
        Some(ms) => resolve(ms, Mode::Asymptotic, overrides)?,
        None => {
            let ms = spec.numeric.as_ref().expect("sweep ids carry a numeric or asymptotic spec");
            let mut map = resolve(ms, Mode::Numeric, overrides)?;
            map.remove("t");
            map.remove("q");
            map
        }
    };
    let claim = claim_for(id, &Args::new(&map), prec)?;
    ts.par_iter()
        .map(|&t| {
            let (m, p) = claim.sides(&t_value(t, prec)?, prec)?;
            let r = relative_residual(&m, &p)?;
            Ok(SweepRow {
                t: format!("{t}"),
                lhs: numq::fmt_real(&m, 24),
                rhs: numq::fmt_real(&p, 24),
                residual: sci(&r),
            })
        })
        .collect()
}

/// Parameter defaults of the series behind coefficient dumps.
pub static SERIES: &[(&str, Pairs)] =
    &[("euler-lhs", &[("z", "1")]), ("euler-rhs", &[("z", "1")]), ("eta-product", &[])];

/// Expansion of a named series through `q^{order−1}`.
pub fn coeffs(name: &str, overrides: &ParamMap, order: i64) -> Result<ExactSeries> {
    let (_, defaults) = SERIES.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownIdentity(name.into()))?;
    let spec = ModeSpec { defaults, q_powers: &[], suite: &[] };
    let map = resolve(&spec, Mode::Exact, overrides)?;
    exact::named_series(name, &Args::new(&map), order)
}

/// Knobs for a suite run.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub order: i64,
    pub bits: u32,
    pub asym_bits: u32,
    pub t_grid: Vec<f64>,
    /// Per-id overrides applied on top of every suite parameter set.
    pub overrides: BTreeMap<String, ParamMap>,
    /// Record wall-clock times; off by default so reports are reproducible.
    pub timing: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            order: DEFAULT_ORDER,
            bits: DEFAULT_BITS,
            asym_bits: DEFAULT_ASYM_BITS,
            t_grid: DEFAULT_T_GRID.to_vec(),
            overrides: BTreeMap::new(),
            timing: false,
        }
    }
}

fn run_one(id: &str, mode: Mode, params: &ParamMap, config: &SuiteConfig) -> CheckReport {
    let result = match mode {
        Mode::Exact => check_exact(id, params, config.order),
        Mode::Numeric => check_numeric(id, params, config.bits),
        Mode::Asymptotic => check_asymptotic(id, params, &config.t_grid, config.asym_bits),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            let size = match mode {
                Mode::Exact => config.order.max(0) as u64,
                Mode::Numeric => config.bits as u64,
                Mode::Asymptotic => config.asym_bits as u64,
            };
            CheckReport::error(id, mode, params.clone(), size, &e)
        }
    };
    if !config.timing {
        report.elapsed_ms = 0;
    }
    report
}

/// Every selected (id, mode, parameter set) in registry order, run in
/// parallel. Failures, including errors, are reports.
pub fn run_suite(selection: &Selection, config: &SuiteConfig) -> Vec<CheckReport> {
    let mut tasks = Vec::new();
    for spec in REGISTRY {
        for mode in spec.modes() {
            if !selection.admits(spec.id, mode) {
                continue;
            }
            let ms = spec.mode(mode).expect("listed mode");
            let sets: Vec<Pairs> = if ms.suite.is_empty() { vec![&[]] } else { ms.suite.to_vec() };
            for set in sets {
                let mut params: ParamMap = set.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
                if let Some(extra) = config.overrides.get(spec.id) {
                    for (k, v) in extra {
                        if ms.defaults.iter().any(|(d, _)| d == k)
                            || (mode == Mode::Numeric && matches!(k.as_str(), "q" | "t"))
                        {
                            params.insert(k.clone(), v.clone());
                        }
                    }
                }
                tasks.push((spec.id, mode, params));
            }
        }
    }
    tasks.par_iter().map(|(id, mode, params)| run_one(id, *mode, params, config)).collect()
}

/// Reports as a pretty JSON array.
pub fn reports_to_json(reports: &[CheckReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reports as CSV with the JSON field order; params become `k=v;k=v`.
pub fn reports_to_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from("id,mode,params,order_or_bits,deviation,threshold,c_fit,c_pred,verdict,elapsed_ms\n");
    let opt = |v: Option<f64>| v.map(|c| c.to_string()).unwrap_or_default();
    for r in reports {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let row = [
            csv_field(&r.id),
            r.mode.to_string(),
            csv_field(&params.join(";")),
            r.order_or_bits.to_string(),
            csv_field(&r.deviation),
            csv_field(r.threshold.as_deref().unwrap_or("")),
            opt(r.c_fit),
            opt(r.c_pred),
            r.verdict.as_str().to_string(),
            r.elapsed_ms.to_string(),
        ];
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
