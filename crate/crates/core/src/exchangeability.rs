//! Two-sample test of relabeling invariance.
//!
//! Statistics that depend on the whole vertex set are invariant under any
//! permutation by construction, so they cannot detect anything. Each
//! statistic is therefore read off the induced path on the first `window`
//! vertices, where a planted asymmetry on a low-numbered edge is visible.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{choose2, InjectiveMap};
use crate::process::{EventLogPath, Model};
use crate::rng;
use crate::stats::{ks_two_sample, KsResult};
use crate::variation::stopping_ladder;

/// Fewer paths per sample than this leaves the KS test underpowered.
pub const MIN_SEED_COUNT: usize = 20;
pub const DEFAULT_WINDOW: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PathStatistic {
    /// Edge density of the window at the horizon.
    EdgeDensityAtHorizon,
    /// Number of edge events inside the window.
    TotalJumps,
    /// `N_p` of the window path.
    NpAt(f64),
}

impl PathStatistic {
    pub fn evaluate(&self, path: &EventLogPath) -> Result<f64> {
        match *self {
            PathStatistic::EdgeDensityAtHorizon => {
                let g = path.snapshot(path.horizon())?;
                Ok(g.edge_count() as f64 / choose2(g.n_vertices()).max(1) as f64)
            }
            PathStatistic::TotalJumps => Ok(path.events().len() as f64),
            PathStatistic::NpAt(p) => Ok(stopping_ladder(path, p)?.n_p as f64),
        }
    }
}

impl fmt::Display for PathStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathStatistic::EdgeDensityAtHorizon => f.write_str("edge-density-at-1"),
            PathStatistic::TotalJumps => f.write_str("total-jumps"),
            PathStatistic::NpAt(p) => write!(f, "np-at-{p}"),
        }
    }
}

impl FromStr for PathStatistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-density-at-1" => Ok(PathStatistic::EdgeDensityAtHorizon),
            "total-jumps" => Ok(PathStatistic::TotalJumps),
            _ => {
                let p = s
                    .strip_prefix("np-at-")
                    .and_then(|p| p.parse::<f64>().ok())
                    .filter(|p| *p > 0.0 && *p <= 1.0)
                    .ok_or_else(|| {
                        Error::domain(format!(
                            "unknown statistic {s:?} (edge-density-at-1, total-jumps, np-at-<p>)"
                        ))
                    })?;
                Ok(PathStatistic::NpAt(p))
            }
        }
    }
}

/// Relabeling applied to the second sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relabel {
    Random,
    /// Sanity mode: both samples come from the same law by construction.
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExchangeabilityReport {
    pub statistic: String,
    pub seed_count: usize,
    pub window: usize,
    pub relabel: Relabel,
    pub base_seed: u64,
    pub original: Vec<f64>,
    pub relabeled: Vec<f64>,
    pub ks: KsResult,
}

/// Compares `statistic` on `seed_count` fresh paths with the same statistic
/// on `seed_count` further fresh paths, each relabeled by its own uniform
/// permutation. Path `r` of the first sample uses seed `derive_seed(seed,
/// 2r)`; the second sample uses odd indices.
pub fn exchangeability_check(
    model: &Model,
    seed_count: usize,
    statistic: PathStatistic,
    window: usize,
    relabel: Relabel,
    seed: u64,
) -> Result<ExchangeabilityReport> {
    if seed_count < MIN_SEED_COUNT {
        return Err(Error::refused(format!(
            "seed_count = {seed_count} is below {MIN_SEED_COUNT}; the KS test would be underpowered"
        )));
    }
    let n = model.n_vertices();
    if !(2..=n).contains(&window) {
        return Err(Error::domain(format!("window {window} outside 2..={n}")));
    }
    let run = |index: u64, permute: bool| -> Result<f64> {
        let path = model.simulate(rng::derive_seed(seed, index))?;
        let path = if permute {
            let mut r = rng::stream(seed, index);
            path.relabel(&InjectiveMap::random_permutation(n, &mut r))?
        } else {
            path
        };
        statistic.evaluate(&path.restrict(window)?)
    };
    let original = (0..seed_count as u64)
        .into_par_iter()
        .map(|r| run(2 * r, false))
        .collect::<Result<Vec<_>>>()?;
    let relabeled = (0..seed_count as u64)
        .into_par_iter()
        .map(|r| run(2 * r + 1, relabel == Relabel::Random))
        .collect::<Result<Vec<_>>>()?;
    let ks = ks_two_sample(&original, &relabeled);
    Ok(ExchangeabilityReport {
        statistic: statistic.to_string(),
        seed_count,
        window,
        relabel,
        base_seed: seed,
        original,
        relabeled,
        ks,
    })
}
