//! Batch analysis of one path: ladders, `N_p` profiles, α-variation grids
//! and graph-limit total variation, with grid rows the path cannot resolve
//! reported as skipped rather than silently dropped.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::density::{DensityMode, WeightFunction};
use crate::error::Result;
use crate::process::{jump_counts, EventLogPath};
use crate::variation::{
    alpha_variation, limit_total_variation, np_profile, stopping_ladder, AlphaVariationConfig,
    GraphMetric, NpProfile, TvReport, VariationEstimate,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSummary {
    pub model: String,
    pub seed: u64,
    pub n: usize,
    pub horizon: f64,
    pub events: usize,
    pub quantum: f64,
    pub max_jumps: u32,
    pub mean_jumps: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderRow {
    pub p: f64,
    pub n_p: usize,
    pub p_times_np: f64,
    pub type_a_rungs: usize,
    pub taus: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SkippedRow {
    pub section: String,
    pub p: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub summary: PathSummary,
    pub ladders: Vec<LadderRow>,
    pub np_profile: Option<NpProfile>,
    pub variation: Vec<VariationEstimate>,
    pub tv: Vec<TvReport>,
    pub skipped: Vec<SkippedRow>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Ladder table as CSV: `p,n_p,p_times_np,type_a_rungs`.
    pub fn ladder_csv(&self) -> String {
        let mut out = String::from("p,n_p,p_times_np,type_a_rungs\n");
        for r in &self.ladders {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.p, r.n_p, r.p_times_np, r.type_a_rungs
            ));
        }
        out
    }

    /// Variation grids as CSV: `alpha,p,M,value,stderr`.
    pub fn variation_csv(&self) -> String {
        let mut out = String::from("alpha,p,M,value,stderr\n");
        for v in &self.variation {
            for line in v.to_csv().lines().skip(1) {
                out.push_str(&format!("{},{line}\n", v.alpha));
            }
        }
        out
    }
}

fn skip(section: &str, p: f64, reason: String) -> SkippedRow {
    SkippedRow {
        section: section.into(),
        p,
        reason,
    }
}

/// Runs every analysis in `cfg` on `path`. Thresholds below the density
/// quantum `2 / (N (N - 1))` make every event a rung and are skipped.
pub fn analyze(path: &EventLogPath, cfg: &RunConfig) -> Result<AnalysisReport> {
    let n = path.n_vertices();
    let quantum = path.density_quantum();
    let counts = jump_counts(path);
    let meta = path.meta();
    let summary = PathSummary {
        model: meta.model.clone(),
        seed: meta.seed,
        n,
        horizon: path.horizon(),
        events: path.events().len(),
        quantum,
        max_jumps: counts.max(),
        mean_jumps: counts.mean(),
    };

    let mut skipped = Vec::new();
    let mut resolved = Vec::new();
    for &p in &cfg.p_grid {
        if p < quantum {
            skipped.push(skip(
                "ladder",
                p,
                format!("p = {p} is below the density quantum {quantum:e}"),
            ));
        } else {
            resolved.push(p);
        }
    }

    let ladders = resolved
        .iter()
        .map(|&p| {
            let l = stopping_ladder(path, p)?;
            Ok(LadderRow {
                p,
                n_p: l.n_p,
                p_times_np: l.p_times_np(),
                type_a_rungs: l.type_a_count(),
                taus: l.taus,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let np_profile = if resolved.is_empty() {
        None
    } else {
        Some(np_profile(path, &resolved)?)
    };

    let variation = if resolved.is_empty() {
        Vec::new()
    } else {
        cfg.alphas
            .iter()
            .enumerate()
            .map(|(a, &alpha)| {
                alpha_variation(
                    path,
                    &AlphaVariationConfig {
                        alpha,
                        metric: GraphMetric::Prefix,
                        p_grid: resolved.clone(),
                        m_grid: cfg.m_grid_for(n),
                        perm_samples: cfg.k_perm,
                        seed: crate::rng::derive_seed(cfg.seed, a as u64),
                    },
                )
            })
            .collect::<Result<Vec<_>>>()?
    };

    let weight: WeightFunction = cfg.weight_function()?;
    let mut tv = Vec::new();
    for (k, &p) in cfg.tv_p_grid.iter().enumerate() {
        if p < quantum {
            skipped.push(skip(
                "tv",
                p,
                format!("p = {p} is below the density quantum {quantum:e}"),
            ));
        } else if cfg.n_max > n {
            skipped.push(skip(
                "tv",
                p,
                format!("n_max = {} exceeds the {n} vertices", cfg.n_max),
            ));
        } else {
            let mode = DensityMode::auto(
                cfg.k_inj,
                crate::rng::derive_seed(cfg.seed, 1000 + k as u64),
            );
            tv.push(limit_total_variation(path, &weight, cfg.n_max, p, mode)?);
        }
    }

    Ok(AnalysisReport {
        summary,
        ladders,
        np_profile,
        variation,
        tv,
        skipped,
    })
}
