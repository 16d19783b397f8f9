use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rug::Float;

use super::{Mode, ModeSpec};
use crate::error::{Error, Result};
use crate::exactq::QMonomial;
use crate::numq::{self, HPComplex, Precision};

/// Parameter overrides or resolved parameters, keyed by name.
pub type ParamMap = BTreeMap<String, String>;

fn bad(key: &str, reason: impl Into<String>) -> Error {
    Error::BadParameter { key: key.into(), reason: reason.into() }
}

/// Merges overrides into the mode defaults. Unknown keys are rejected, except
/// that `q` and `t` stand in for each other in numeric mode. In exact mode a
/// bare rational given for a key with a registry q-power gets that power.
pub(crate) fn resolve(spec: &ModeSpec, mode: Mode, overrides: &ParamMap) -> Result<ParamMap> {
    let mut map: ParamMap = spec.defaults.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
    for (k, v) in overrides {
        let swap = match k.as_str() {
            "q" => Some("t"),
            "t" => Some("q"),
            _ => None,
        };
        if map.contains_key(k) {
            map.insert(k.clone(), v.clone());
        } else if let Some(other) = swap.filter(|o| mode == Mode::Numeric && map.contains_key(*o)) {
            map.remove(other);
            map.insert(k.clone(), v.clone());
        } else {
            let known: Vec<&str> = spec.defaults.iter().map(|(k, _)| *k).collect();
            return Err(bad(k, format!("unknown key; expected one of {}", known.join(", "))));
        }
    }
    if mode == Mode::Exact {
        for (k, power) in spec.q_powers {
            if let Some(v) = map.get_mut(*k) {
                if !v.contains('q') {
                    *v = format!("{v}*{power}");
                }
            }
        }
    }
    Ok(map)
}

/// Typed access to resolved parameters.
pub(crate) struct Args<'a> {
    map: &'a ParamMap,
}

impl<'a> Args<'a> {
    pub fn new(map: &'a ParamMap) -> Self {
        Args { map }
    }

    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn str(&self, key: &str) -> Result<&'a str> {
        self.map.get(key).map(String::as_str).ok_or_else(|| bad(key, "missing"))
    }

    pub fn int(&self, key: &str) -> Result<i64> {
        self.str(key)?.trim().parse().map_err(|_| bad(key, "expected an integer"))
    }

    pub fn ratio(&self, key: &str) -> Result<Ratio<i64>> {
        let s = self.str(key)?.trim();
        let parsed = match s.split_once('/') {
            Some((n, d)) => match (n.trim().parse::<i64>(), d.trim().parse::<i64>()) {
                (Ok(n), Ok(d)) if d != 0 => Some(Ratio::new(n, d)),
                _ => None,
            },
            None => s.parse::<i64>().ok().map(Ratio::from_integer),
        };
        parsed.ok_or_else(|| bad(key, "expected a rational p/q"))
    }

    pub fn rational(&self, key: &str) -> Result<BigRational> {
        let r = self.ratio(key)?;
        Ok(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
    }

    pub fn mono(&self, key: &str) -> Result<QMonomial> {
        self.str(key)?.parse().map_err(|_| bad(key, "expected c, c*q or c*q^e with rational c and e"))
    }

    pub fn real(&self, key: &str, prec: Precision) -> Result<Float> {
        numq::parse_real(self.str(key)?, prec).map_err(|_| bad(key, "expected a decimal or p/q"))
    }

    pub fn complex(&self, key: &str, prec: Precision) -> Result<HPComplex> {
        Ok(HPComplex::from_real(self.real(key, prec)?))
    }

    /// `(t, q)` with `q = e^{−t}`, from whichever of the two is present.
    pub fn nome(&self, prec: Precision) -> Result<(Float, HPComplex)> {
        let w = prec.working();
        if self.has("q") {
            let q = self.real("q", prec)?;
            if !(q > 0 && q < 1) {
                return Err(bad("q", "needs 0 < q < 1"));
            }
            let t = -Float::with_val(w, q.ln_ref());
            return Ok((t, HPComplex::from_real(q)));
        }
        let t = self.real("t", prec)?;
        if t <= 0 {
            return Err(bad("t", "needs t > 0"));
        }
        let q = Float::with_val(w, -&t).exp();
        Ok((t, HPComplex::from_real(q)))
    }

    /// `rank` entries `key1, key2, …`.
    pub fn indexed<T>(&self, key: &str, rank: usize, get: impl Fn(&Self, &str) -> Result<T>) -> Result<Vec<T>> {
        (1..=rank).map(|s| get(self, &format!("{key}{s}"))).collect()
    }
}
