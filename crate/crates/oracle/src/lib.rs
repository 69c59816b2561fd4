//! Ground-truth walk counts by dynamic programming over normal forms.
//!
//! `f(n, m)` is the number of words of length `n` over the generators and their
//! inverses that evaluate to `Δ^m`. The computation steps through lengths, keeping
//! a map from normal form to the number of words reaching it, and discards states
//! too far from `<Δ>` to return within the remaining budget.

use std::collections::{BTreeMap, HashMap};

use cogrowth_group::{one_sided_allowed, GroupError, GroupSpec, NormalForm, Suffix};
use num_bigint::BigUint;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;
use thiserror::Error;

/// Environment variable overriding the default state cap.
pub const STATE_CAP_ENV: &str = "COGROWTH_ORACLE_STATE_CAP";

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("walk length {requested} exceeds the configured cap {cap}")]
    LengthCapExceeded { requested: usize, cap: usize },
    #[error("more than {cap} states at length {length}; raise {STATE_CAP_ENV} to continue")]
    StateCapExceeded { cap: usize, length: usize },
    #[error("walk count overflowed 128 bits at length {0}")]
    Overflow(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Limits on the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_len_cap: usize,
    pub state_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_len_cap: 14,
            state_cap: 10_000_000,
        }
    }
}

impl OracleConfig {
    /// Default configuration with the state cap taken from [`STATE_CAP_ENV`] when set.
    pub fn from_env() -> Self {
        let mut config = OracleConfig::default();
        if let Some(cap) = std::env::var(STATE_CAP_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            config.state_cap = cap;
        }
        config
    }
}

/// Exact counts `f(n, m)` for `0 <= n <= max_len`. Entries that are zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCountTable {
    pub spec: GroupSpec,
    pub max_len: usize,
    pub facet: Option<usize>,
    pub counts: BTreeMap<(usize, i64), BigUint>,
}

impl WalkCountTable {
    /// `f(n, m)`, zero when absent.
    pub fn get(&self, n: usize, m: i64) -> BigUint {
        self.counts.get(&(n, m)).cloned().unwrap_or_default()
    }

    /// Nonzero entries of row `n` as `(m, f)` in increasing `m`.
    pub fn row(&self, n: usize) -> Vec<(i64, BigUint)> {
        self.counts
            .range((n, i64::MIN)..=(n, i64::MAX))
            .map(|(&(_, m), f)| (m, f.clone()))
            .collect()
    }

    /// `Σ_m f(n, m)`.
    pub fn row_total(&self, n: usize) -> BigUint {
        self.row(n).into_iter().map(|(_, f)| f).sum()
    }
}

impl Serialize for WalkCountTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            n: usize,
            m: i64,
            f: String,
        }
        let entries: Vec<Entry> = self
            .counts
            .iter()
            .map(|(&(n, m), f)| Entry { n, m, f: f.to_string() })
            .collect();
        let mut st = serializer.serialize_struct("WalkCountTable", 2)?;
        st.serialize_field("group", &self.spec.to_string())?;
        st.serialize_field("counts", &entries)?;
        st.end()
    }
}

/// Counts closed walks: words of length `n <= max_len` equal to some power of `Δ`.
pub fn count_closed_walks(
    spec: &GroupSpec,
    max_len: usize,
    config: &OracleConfig,
) -> Result<WalkCountTable, OracleError> {
    enumerate(spec, max_len, None, config)
}

/// Counts closed walks that never leave the one-sided graph of `facet` (1-based).
/// These are the coefficients of `L0` for that facet.
pub fn count_one_sided_walks(
    spec: &GroupSpec,
    facet: usize,
    max_len: usize,
    config: &OracleConfig,
) -> Result<WalkCountTable, OracleError> {
    one_sided_allowed(spec, &NormalForm::identity(spec), facet)?;
    enumerate(spec, max_len, Some(facet), config)
}

fn enumerate(
    spec: &GroupSpec,
    max_len: usize,
    facet: Option<usize>,
    config: &OracleConfig,
) -> Result<WalkCountTable, OracleError> {
    if max_len > config.max_len_cap {
        return Err(OracleError::LengthCapExceeded {
            requested: max_len,
            cap: config.max_len_cap,
        });
    }
    let letters = spec.alphabet();
    let allowed = |nf: &NormalForm| -> Result<bool, OracleError> {
        Ok(match facet {
            Some(i) => one_sided_allowed(spec, nf, i)?,
            None => true,
        })
    };

    // Distances from the root coset, needed only up to half the walk length.
    let radius = max_len / 2;
    let identity = NormalForm::identity(spec);
    let mut dist: HashMap<Suffix, usize> = HashMap::new();
    dist.insert(identity.suffix.clone(), 0);
    let mut frontier = vec![identity.suffix.clone()];
    for d in 0..radius {
        let mut next = Vec::new();
        for s in &frontier {
            for &g in &letters {
                let mut nf = NormalForm {
                    m: 0,
                    suffix: s.clone(),
                };
                nf.apply(spec, g)?;
                if allowed(&nf)? && !dist.contains_key(&nf.suffix) {
                    dist.insert(nf.suffix.clone(), d + 1);
                    next.push(nf.suffix);
                }
            }
        }
        if dist.len() > config.state_cap {
            return Err(OracleError::StateCapExceeded {
                cap: config.state_cap,
                length: d + 1,
            });
        }
        frontier = next;
    }

    let mut counts = BTreeMap::new();
    counts.insert((0, 0), BigUint::from(1u32));
    let mut layer: HashMap<NormalForm, u128> = HashMap::from([(identity, 1)]);
    for n in 0..max_len {
        let remaining = max_len - n - 1;
        let mut next: HashMap<NormalForm, u128> = HashMap::with_capacity(layer.len() * 2);
        for (nf, &c) in &layer {
            for &g in &letters {
                let mut x = nf.clone();
                x.apply(spec, g)?;
                if !allowed(&x)? {
                    continue;
                }
                match dist.get(&x.suffix) {
                    Some(&d) if d <= remaining => {}
                    _ => continue,
                }
                let slot = next.entry(x).or_insert(0);
                *slot = slot.checked_add(c).ok_or(OracleError::Overflow(n + 1))?;
            }
        }
        if next.len() > config.state_cap {
            return Err(OracleError::StateCapExceeded {
                cap: config.state_cap,
                length: n + 1,
            });
        }
        for (nf, &c) in &next {
            if nf.in_delta_subgroup() {
                counts.insert((n + 1, nf.m), BigUint::from(c));
            }
        }
        layer = next;
    }

    Ok(WalkCountTable {
        spec: spec.clone(),
        max_len,
        facet,
        counts,
    })
}
