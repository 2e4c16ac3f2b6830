//! Resource caps shared by searches and surveys, overridable from the
//! environment.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    /// Largest group that may be constructed.
    pub group: usize,
    /// Most automorphisms an enumeration may produce.
    pub aut: usize,
    /// Largest digraph handed to the stabilizer search.
    pub search: usize,
    /// Largest digraph handed to canonical labeling.
    pub canon: usize,
    /// Largest group whose bound reports include counts that enumerate
    /// subsets or inclusion-exclusion terms.
    pub exact: usize,
    /// Most connection sets an exhaustive survey may examine.
    pub budget: u64,
    /// Per-search time limit in milliseconds.
    pub timeout_ms: Option<u64>,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            group: crate::group::DEFAULT_GROUP_CAP,
            aut: crate::aut::DEFAULT_AUT_CAP,
            search: 1 << 12,
            canon: 1 << 8,
            exact: 20,
            budget: 1 << 24,
            timeout_ms: None,
        }
    }
}

pub const ENV_VARS: [&str; 7] = [
    "BICAYLEY_GROUP_CAP",
    "BICAYLEY_AUT_CAP",
    "BICAYLEY_SEARCH_CAP",
    "BICAYLEY_CANON_CAP",
    "BICAYLEY_EXACT_CAP",
    "BICAYLEY_BUDGET",
    "BICAYLEY_TIMEOUT_MS",
];

/// Accepts plain integers, `2^k` and scientific notation such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64> {
    let t = s.trim().replace('_', "");
    let bad = || Error::BadParameter(format!("not a count: {s:?}"));
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = t.parse().map_err(|_| bad())?;
    if f.is_finite() && f >= 0.0 && f.fract() == 0.0 && f < 1.8e19 {
        Ok(f as u64)
    } else {
        Err(bad())
    }
}

impl Caps {
    /// Defaults overridden by any `BICAYLEY_*` variables that are set.
    pub fn from_env() -> Result<Self> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(get: impl Fn(&str) -> Option<String>) -> Result<Self> {
        let mut caps = Caps::default();
        let num = |k: &str| get(k).map(|v| parse_count(&v)).transpose();
        if let Some(v) = num("BICAYLEY_GROUP_CAP")? {
            caps.group = v as usize;
        }
        if let Some(v) = num("BICAYLEY_AUT_CAP")? {
            caps.aut = v as usize;
        }
        if let Some(v) = num("BICAYLEY_SEARCH_CAP")? {
            caps.search = v as usize;
        }
        if let Some(v) = num("BICAYLEY_CANON_CAP")? {
            caps.canon = v as usize;
        }
        if let Some(v) = num("BICAYLEY_EXACT_CAP")? {
            caps.exact = v as usize;
        }
        if let Some(v) = num("BICAYLEY_BUDGET")? {
            caps.budget = v;
        }
        if let Some(v) = num("BICAYLEY_TIMEOUT_MS")? {
            caps.timeout_ms = Some(v);
        }
        Ok(caps)
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.timeout_ms.map(|ms| Instant::now() + Duration::from_millis(ms))
    }
}
