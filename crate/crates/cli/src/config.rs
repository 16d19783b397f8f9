//! Flat `key = value` config files for suite runs.

use std::collections::BTreeMap;

/// Settings read from a config file. Keys match the long flag names;
/// `param = id:key=value` adds a per-id override.
#[derive(Debug, Default, PartialEq)]
pub struct FileConfig {
    pub values: BTreeMap<String, String>,
    pub params: Vec<(String, String, String)>,
}

const KEYS: &[&str] = &["select", "order", "bits", "asym-bits", "t", "out", "format", "timing", "param"];

pub fn parse(text: &str) -> Result<FileConfig, String> {
    let mut cfg = FileConfig::default();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
        let (k, v) = (k.trim(), v.trim());
        if !KEYS.contains(&k) {
            return Err(format!("line {}: unknown key {k:?} (expected one of {})", no + 1, KEYS.join(", ")));
        }
        if k == "param" {
            let (id, kv) = v.split_once(':').ok_or_else(|| format!("line {}: param needs id:key=value", no + 1))?;
            let (pk, pv) = kv.split_once('=').ok_or_else(|| format!("line {}: param needs id:key=value", no + 1))?;
            cfg.params.push((id.trim().into(), pk.trim().into(), pv.trim().into()));
        } else {
            cfg.values.insert(k.into(), v.into());
        }
    }
    Ok(cfg)
}
