//! Stopping-time ladders and the variation functionals built on them.
//!
//! For a threshold `p`, the ladder `τ_0 = 0 < τ_1 < …` marks the successive
//! first times the path has moved edit density `p` away from the previous
//! rung, and `N_p` is the index of the first rung past the horizon. On a
//! finite window edit density moves in steps of the quantum `2 / (N (N-1))`,
//! so a rung is placed at the first event time where the density is `>= p`
//! and the overshoot is recorded.
//!
//! Sums "over the ladder" run over the rungs inside the horizon,
//! `k = 1 ..= N_p - 1`; the path is not observed at `τ_{N_p}`.

use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{limit_metric, limit_vector, DensityMode, WeightFunction};
use crate::error::{Error, Result};
use crate::graph::{choose2, pair_at, AdjacencyGraph, InjectiveMap};
use crate::metrics::harmonic_constant;
use crate::process::{jump_counts, EventLogPath, Replay};
use crate::rng;
use crate::stats::McEstimate;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StoppingLadder {
    pub p: f64,
    /// `τ_0 ..= τ_{N_p - 1}`; `τ_{N_p}` lies beyond the horizon.
    pub taus: Vec<f64>,
    pub n_p: usize,
    /// `J(Γ_{τ_k}, Γ_{τ_{k-1}})` for `k = 1 ..= N_p - 1`.
    pub rung_density: Vec<f64>,
    /// Rungs triggered by a batch of simultaneous edge events.
    pub type_a: Vec<bool>,
    pub quantum: f64,
}

impl StoppingLadder {
    pub fn overshoot(&self) -> Vec<f64> {
        self.rung_density.iter().map(|j| j - self.p).collect()
    }

    pub fn type_a_count(&self) -> usize {
        self.type_a.iter().filter(|&&a| a).count()
    }

    pub fn p_times_np(&self) -> f64 {
        self.p * self.n_p as f64
    }
}

fn check_threshold(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "threshold p = {p} must lie in (0, 1)"
        )));
    }
    Ok(())
}

/// A ladder together with the snapshots `Γ_{τ_0} ..= Γ_{τ_{N_p-1}}`.
#[derive(Clone, Debug)]
pub struct LadderScan {
    pub ladder: StoppingLadder,
    pub snapshots: Vec<AdjacencyGraph>,
}

impl LadderScan {
    /// Pairs that changed across each rung, as 1-indexed `(i, j)`.
    pub fn rung_differences(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.snapshots[0].n_vertices();
        self.snapshots
            .windows(2)
            .map(|w| {
                w[1].sym_diff(&w[0])
                    .expect("snapshots share a vertex count")
                    .set_pair_indices()
                    .map(|k| pair_at(n, k))
                    .collect()
            })
            .collect()
    }
}

pub fn stopping_ladder(path: &EventLogPath, p: f64) -> Result<StoppingLadder> {
    Ok(scan_ladder(path, p)?.ladder)
}

/// Single pass over the event log, tracking the disagreement count against
/// the current anchor incrementally.
pub fn scan_ladder(path: &EventLogPath, p: f64) -> Result<LadderScan> {
    check_threshold(p)?;
    let n = path.n_vertices();
    if n < 2 {
        return Err(Error::domain("ladders need at least two vertices"));
    }
    let pairs = choose2(n) as f64;
    let mut replay = Replay::new(path);
    let mut anchor = path.initial().clone();
    let mut diff: i64 = 0;
    let mut taus = vec![0.0];
    let mut rung_density = Vec::new();
    let mut type_a = Vec::new();
    let mut snapshots = vec![anchor.clone()];
    loop {
        let step = replay.step(|k, value| {
            if anchor.pair_bit(k) == value {
                diff -= 1;
            } else {
                diff += 1;
            }
        });
        let Some((t, batch)) = step else { break };
        let j = diff as f64 / pairs;
        if j >= p {
            taus.push(t);
            rung_density.push(j);
            type_a.push(batch > 1);
            anchor = replay.state().clone();
            snapshots.push(anchor.clone());
            diff = 0;
        }
    }
    let n_p = taus.len();
    Ok(LadderScan {
        ladder: StoppingLadder {
            p,
            taus,
            n_p,
            rung_density,
            type_a,
            quantum: path.density_quantum(),
        },
        snapshots,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpRow {
    pub p: f64,
    pub n_p: usize,
    pub p_times_np: f64,
    /// Edge events needed to reach `p` from an anchor: `ceil(p · C(N, 2))`.
    pub threshold_pairs: u64,
    /// `p` is at or above the density quantum; below it every event is a rung.
    pub resolved: bool,
    pub type_a_rungs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpProfile {
    pub rows: Vec<NpRow>,
    pub sup_p_np: f64,
}

pub fn np_profile(path: &EventLogPath, p_grid: &[f64]) -> Result<NpProfile> {
    if p_grid.is_empty() {
        return Err(Error::domain("p grid is empty"));
    }
    let quantum = path.density_quantum();
    let pairs = choose2(path.n_vertices()) as f64;
    let rows = p_grid
        .iter()
        .map(|&p| {
            let l = stopping_ladder(path, p)?;
            Ok(NpRow {
                p,
                n_p: l.n_p,
                p_times_np: l.p_times_np(),
                threshold_pairs: (p * pairs).ceil() as u64,
                resolved: p >= quantum,
                type_a_rungs: l.type_a_count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let sup_p_np = rows.iter().map(|r| r.p_times_np).fold(0.0, f64::max);
    Ok(NpProfile { rows, sup_p_np })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DyadicDiagnostic {
    pub p0: f64,
    pub ps: Vec<f64>,
    pub n_ps: Vec<usize>,
    /// `a_k = p0 2^{-k} (N_{p0 2^{-k}} - 1)`.
    pub a: Vec<f64>,
    /// Steps `k` with `a_{k+1} < a_k`.
    pub raw_violations: Vec<usize>,
    /// Steps `k` with `a_{k+1} < a_k - p0 2^{-(k+1)}`.
    pub slack_violations: Vec<usize>,
}

impl DyadicDiagnostic {
    pub fn steps(&self) -> usize {
        self.a.len().saturating_sub(1)
    }
}

pub fn dyadic_diagnostic(path: &EventLogPath, p0: f64, k_max: usize) -> Result<DyadicDiagnostic> {
    check_threshold(p0)?;
    if k_max < 1 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let finest = p0 * 0.5f64.powi(k_max as i32);
    let quantum = path.density_quantum();
    if finest < quantum {
        return Err(Error::refused(format!(
            "p0 2^-{k_max} = {finest:e} is below the density quantum {quantum:e} of a {}-vertex window",
            path.n_vertices()
        )));
    }
    let ps: Vec<f64> = (0..=k_max).map(|k| p0 * 0.5f64.powi(k as i32)).collect();
    let n_ps = ps
        .iter()
        .map(|&p| Ok(stopping_ladder(path, p)?.n_p))
        .collect::<Result<Vec<_>>>()?;
    let a: Vec<f64> = ps
        .iter()
        .zip(&n_ps)
        .map(|(&p, &np)| p * (np as f64 - 1.0))
        .collect();
    let mut raw_violations = Vec::new();
    let mut slack_violations = Vec::new();
    for k in 0..k_max {
        if a[k + 1] < a[k] {
            raw_violations.push(k);
        }
        if a[k + 1] < a[k] - ps[k + 1] {
            slack_violations.push(k);
        }
    }
    Ok(DyadicDiagnostic {
        p0,
        ps,
        n_ps,
        a,
        raw_violations,
        slack_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpBoundReport {
    pub max_jumps: u32,
    pub argmax_edge: Option<(usize, usize)>,
    pub sup_p_np: f64,
    /// `max_e j(e) - (sup_p p N_p - 1)`.
    pub margin: f64,
    pub quantum: f64,
    /// `margin >= -quantum`.
    pub holds: bool,
}

pub fn jump_bound_check(path: &EventLogPath, p_grid: &[f64]) -> Result<JumpBoundReport> {
    let jc = jump_counts(path);
    let profile = np_profile(path, p_grid)?;
    let max_jumps = jc.max();
    let margin = f64::from(max_jumps) - (profile.sup_p_np - 1.0);
    let quantum = path.density_quantum();
    Ok(JumpBoundReport {
        max_jumps,
        argmax_edge: jc.argmax(),
        sup_p_np: profile.sup_p_np,
        margin,
        quantum,
        holds: margin >= -quantum,
    })
}

/// Graph distance used inside the variation sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphMetric {
    /// `1 / max{n : F|_n = G|_n}`.
    Prefix,
    /// Edit density on the full window.
    Edit,
}

impl FromStr for GraphMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prefix" => Ok(GraphMetric::Prefix),
            "edit" => Ok(GraphMetric::Edit),
            other => Err(Error::domain(format!(
                "unknown graph metric {other:?} (expected \"prefix\" or \"edit\")"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaVariationConfig {
    pub alpha: f64,
    pub metric: GraphMetric,
    pub p_grid: Vec<f64>,
    pub m_grid: Vec<usize>,
    /// Random relabelings for the permutation average; 0 disables it.
    pub perm_samples: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationCell {
    pub p: f64,
    pub m: usize,
    pub n_p: usize,
    /// Partial sum under the path's own labeling.
    pub value: f64,
    /// Average of the partial sum over random relabelings.
    pub perm: Option<McEstimate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationDiagnostics {
    pub nondecreasing_in_m: bool,
    /// Values at the largest `M` as `p` decreases along the grid.
    pub p_trend: Trend,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Constant,
    Increasing,
    Decreasing,
    Mixed,
}

impl Trend {
    fn of(values: &[f64]) -> Trend {
        let up = values.windows(2).any(|w| w[1] > w[0]);
        let down = values.windows(2).any(|w| w[1] < w[0]);
        match (up, down) {
            (false, false) => Trend::Constant,
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (true, true) => Trend::Mixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VariationEstimate {
    pub alpha: f64,
    pub metric: GraphMetric,
    /// Row-major over `p_grid × m_grid`.
    pub cells: Vec<VariationCell>,
    /// Reported only when the two finest-`p` cells at the largest `M`
    /// agree to relative tolerance [`VARIATION_REL_TOL`].
    pub converged_value: Option<f64>,
    pub diagnostics: VariationDiagnostics,
}

impl VariationEstimate {
    pub fn cell(&self, p: f64, m: usize) -> Option<&VariationCell> {
        self.cells.iter().find(|c| c.p == p && c.m == m)
    }

    /// CSV with columns `p,M,value,stderr`; `value` is the permutation mean
    /// when available, else the fixed-labeling sum with empty stderr.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,M,value,stderr\n");
        for c in &self.cells {
            match c.perm {
                Some(e) => out.push_str(&format!("{},{},{},{}\n", c.p, c.m, e.mean, e.stderr)),
                None => out.push_str(&format!("{},{},{},\n", c.p, c.m, c.value)),
            }
        }
        out
    }
}

pub const VARIATION_REL_TOL: f64 = 1e-2;

/// Per-rung distances for every `M` in `m_grid`, given new-label ranks.
/// `rank[v]` is the label vertex `v` receives (identity when `None`).
fn rung_distances(
    diffs: &[(usize, usize)],
    rank: Option<&[usize]>,
    metric: GraphMetric,
    m_grid: &[usize],
    pairs: f64,
) -> Vec<f64> {
    let r = |v: usize| rank.map_or(v, |rk| rk[v]);
    match metric {
        GraphMetric::Prefix => {
            // First level at which the projected, relabeled graphs disagree.
            let first = diffs.iter().map(|&(a, b)| r(a).max(r(b))).min();
            m_grid
                .iter()
                .map(|&m| match first {
                    Some(l) if l <= m => 1.0 / (l - 1) as f64,
                    _ => 0.0,
                })
                .collect()
        }
        GraphMetric::Edit => {
            let mut levels: Vec<usize> = diffs.iter().map(|&(a, b)| r(a).max(r(b))).collect();
            levels.sort_unstable();
            m_grid
                .iter()
                .map(|&m| levels.partition_point(|&l| l <= m) as f64 / pairs)
                .collect()
        }
    }
}

/// `rank[v]` for `v in 1..=n` under a uniformly random relabeling `σ`:
/// vertex `σ(k)` of the original path becomes vertex `k`.
fn random_ranks(n: usize, seed: u64, replicate: u64) -> Vec<usize> {
    let sigma = InjectiveMap::random_permutation(n, &mut rng::stream(seed, replicate));
    let mut rank = vec![0; n + 1];
    for (k, &v) in sigma.image().iter().enumerate() {
        rank[v] = k + 1;
    }
    rank
}

fn check_variation_config(path: &EventLogPath, cfg: &AlphaVariationConfig) -> Result<()> {
    if !(cfg.alpha >= 1.0 && cfg.alpha.is_finite()) {
        return Err(Error::domain(format!("alpha = {} must be >= 1", cfg.alpha)));
    }
    if cfg.p_grid.is_empty() || cfg.m_grid.is_empty() {
        return Err(Error::domain("p and M grids must be nonempty"));
    }
    for &p in &cfg.p_grid {
        check_threshold(p)?;
    }
    let n = path.n_vertices();
    if let Some(&m) = cfg.m_grid.iter().find(|&&m| m == 0 || m > n) {
        return Err(Error::domain(format!(
            "projection level M = {m} outside 1..={n}"
        )));
    }
    Ok(())
}

/// `Σ_{k=1}^{N_p-1} d(P_M Γ_{τ_k}, P_M Γ_{τ_{k-1}})^α` over the `p × M` grid,
/// under the path's own labeling and, when `perm_samples > 0`, averaged over
/// random relabelings of the whole window (the ladder itself is invariant).
pub fn alpha_variation(
    path: &EventLogPath,
    cfg: &AlphaVariationConfig,
) -> Result<VariationEstimate> {
    check_variation_config(path, cfg)?;
    let n = path.n_vertices();
    let pairs = choose2(n) as f64;
    let mut m_grid = cfg.m_grid.clone();
    m_grid.sort_unstable();
    m_grid.dedup();
    let scans = cfg
        .p_grid
        .iter()
        .map(|&p| scan_ladder(path, p))
        .collect::<Result<Vec<_>>>()?;
    let diffs: Vec<Vec<Vec<(usize, usize)>>> = scans.iter().map(|s| s.rung_differences()).collect();

    // All cells for one labeling, row-major over p × M.
    let cells_for = |rank: Option<&[usize]>| -> Vec<f64> {
        let mut out = Vec::with_capacity(diffs.len() * m_grid.len());
        for rungs in &diffs {
            let mut sums = vec![0.0; m_grid.len()];
            for d in rungs {
                let dist = rung_distances(d, rank, cfg.metric, &m_grid, pairs);
                for (s, v) in sums.iter_mut().zip(dist) {
                    *s += v.powf(cfg.alpha);
                }
            }
            out.extend(sums);
        }
        out
    };

    let fixed = cells_for(None);
    let replicates: Vec<Vec<f64>> = (0..cfg.perm_samples as u64)
        .into_par_iter()
        .map(|r| cells_for(Some(&random_ranks(n, cfg.seed, r))))
        .collect();

    let mut cells = Vec::with_capacity(fixed.len());
    for (pi, scan) in scans.iter().enumerate() {
        for (mi, &m) in m_grid.iter().enumerate() {
            let idx = pi * m_grid.len() + mi;
            let perm = (!replicates.is_empty()).then(|| {
                McEstimate::from_samples(&replicates.iter().map(|v| v[idx]).collect::<Vec<_>>())
            });
            cells.push(VariationCell {
                p: scan.ladder.p,
                m,
                n_p: scan.ladder.n_p,
                value: fixed[idx],
                perm,
            });
        }
    }

    let per_p: Vec<&[VariationCell]> = cells.chunks(m_grid.len()).collect();
    let nondecreasing_in_m = per_p
        .iter()
        .all(|row| row.windows(2).all(|w| w[1].value >= w[0].value));
    // Largest M, ordered from coarse to fine p.
    let mut finest: Vec<(f64, f64)> = per_p
        .iter()
        .map(|row| (row[0].p, row.last().expect("nonempty M grid").value))
        .collect();
    finest.sort_by(|a, b| b.0.total_cmp(&a.0));
    let trend_values: Vec<f64> = finest.iter().map(|x| x.1).collect();
    let converged_value = match trend_values.as_slice() {
        [.., a, b] if (a - b).abs() <= VARIATION_REL_TOL * a.abs().max(b.abs()) => Some(*b),
        _ => None,
    };
    Ok(VariationEstimate {
        alpha: cfg.alpha,
        metric: cfg.metric,
        cells,
        converged_value,
        diagnostics: VariationDiagnostics {
            nondecreasing_in_m,
            p_trend: Trend::of(&trend_values),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RungCheck {
    pub k: usize,
    pub density: f64,
    /// Permutation mean of `prefix_metric(Γ^σ_{τ_k}, Γ^σ_{τ_{k-1}})^α`.
    pub perm: McEstimate,
    /// `J_k · Σ_{n=1}^{N} n^{1-α}`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    pub p: f64,
    pub m: usize,
    pub perm: McEstimate,
    /// `C · max_grid(p N_p)`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphvarReport {
    pub alpha: f64,
    /// `Σ_{n=1}^{N} n^{1-α}`.
    pub constant: f64,
    pub max_p_np: f64,
    pub rungs: Vec<(f64, Vec<RungCheck>)>,
    pub cells: Vec<CellCheck>,
    pub all_hold: bool,
}

/// Checks the permutation-averaged prefix-metric variation against the
/// bound `C · J` rung by rung and `C · max(p N_p)` cell by cell, each with a
/// `3 · stderr` Monte Carlo budget.
pub fn theorem_graphvar_check(
    path: &EventLogPath,
    alpha: f64,
    p_grid: &[f64],
    m_grid: &[usize],
    k: usize,
    seed: u64,
) -> Result<GraphvarReport> {
    if !(alpha > 2.0) {
        return Err(Error::refused(format!(
            "alpha = {alpha}: the series Σ n^(1-α) diverges for α <= 2, so the bound is vacuous"
        )));
    }
    if k == 0 {
        return Err(Error::domain("at least one permutation sample is required"));
    }
    let n = path.n_vertices();
    let constant = harmonic_constant(alpha, n);
    let est = alpha_variation(
        path,
        &AlphaVariationConfig {
            alpha,
            metric: GraphMetric::Prefix,
            p_grid: p_grid.to_vec(),
            m_grid: m_grid.to_vec(),
            perm_samples: k,
            seed,
        },
    )?;
    let max_p_np = p_grid
        .iter()
        .zip(est.cells.chunks(est.cells.len() / p_grid.len()))
        .map(|(p, row)| p * row[0].n_p as f64)
        .fold(0.0, f64::max);

    let mut rungs = Vec::new();
    for &p in p_grid {
        let scan = scan_ladder(path, p)?;
        let diffs = scan.rung_differences();
        let full = [n];
        let samples: Vec<Vec<f64>> = (0..k as u64)
            .into_par_iter()
            .map(|r| {
                let rank = random_ranks(n, seed, r);
                diffs
                    .iter()
                    .map(|d| {
                        rung_distances(d, Some(&rank), GraphMetric::Prefix, &full, 1.0)[0]
                            .powf(alpha)
                    })
                    .collect()
            })
            .collect();
        let checks: Vec<RungCheck> = scan
            .ladder
            .rung_density
            .iter()
            .enumerate()
            .map(|(i, &density)| {
                let perm =
                    McEstimate::from_samples(&samples.iter().map(|s| s[i]).collect::<Vec<_>>());
                let bound = density * constant;
                RungCheck {
                    k: i + 1,
                    density,
                    perm,
                    bound,
                    holds: perm.mean <= bound + 3.0 * perm.stderr,
                }
            })
            .collect();
        rungs.push((p, checks));
    }
    let cells: Vec<CellCheck> = est
        .cells
        .iter()
        .map(|c| {
            let perm = c.perm.expect("permutation samples requested");
            let bound = constant * max_p_np;
            CellCheck {
                p: c.p,
                m: c.m,
                perm,
                bound,
                holds: perm.mean <= bound + 3.0 * perm.stderr,
            }
        })
        .collect();
    let all_hold =
        cells.iter().all(|c| c.holds) && rungs.iter().all(|(_, r)| r.iter().all(|c| c.holds));
    Ok(GraphvarReport {
        alpha,
        constant,
        max_p_np,
        rungs,
        cells,
        all_hold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvReport {
    pub p: f64,
    pub n_p: usize,
    pub n_max: usize,
    /// `Σ_k d(|Γ_{τ_k}|, |Γ_{τ_{k-1}}|)` under the weighted limit metric.
    pub tv: f64,
    /// `Σ_{n <= n_max} f(n) C(n,2) 2^{C(n,2)}`.
    pub weight_sum: f64,
    /// `p N_p · weight_sum`.
    pub bound: f64,
    pub margin: f64,
    pub exact: bool,
    /// Sum over all compared coordinates of `f(n) sqrt(se_a² + se_b²)`;
    /// zero when every level is exact.
    pub mc_budget: f64,
    /// `tv <= bound` (exact) or `tv <= bound + 3 · mc_budget`.
    pub holds: bool,
    pub type_a_rungs: usize,
}

pub fn limit_total_variation(
    path: &EventLogPath,
    f: &WeightFunction,
    n_max: usize,
    p: f64,
    mode: DensityMode,
) -> Result<TvReport> {
    let scan = scan_ladder(path, p)?;
    let vectors = scan
        .snapshots
        .par_iter()
        .enumerate()
        .map(|(k, g)| limit_vector(g, n_max, mode.reseeded(k as u64)))
        .collect::<Result<Vec<_>>>()?;
    let mut tv = 0.0;
    let mut mc_budget = 0.0;
    for w in vectors.windows(2) {
        tv += limit_metric(&w[1], &w[0], f)?;
        for (a, b) in w[1].levels.iter().zip(&w[0].levels) {
            let weight = f.value(a.n);
            mc_budget += weight
                * a.stderr
                    .iter()
                    .zip(&b.stderr)
                    .map(|(x, y)| (x * x + y * y).sqrt())
                    .sum::<f64>();
        }
    }
    let exact = vectors.iter().all(|v| v.is_exact());
    let weight_sum: f64 = (1..=n_max)
        .map(|n| f.value(n) * choose2(n) as f64 * 2f64.powi(choose2(n) as i32))
        .sum();
    let bound = scan.ladder.p_times_np() * weight_sum;
    let margin = bound - tv;
    let holds = if exact {
        tv <= bound
    } else {
        tv <= bound + 3.0 * mc_budget
    };
    Ok(TvReport {
        p,
        n_p: scan.ladder.n_p,
        n_max,
        tv,
        weight_sum,
        bound,
        margin,
        exact,
        mc_budget,
        holds,
        type_a_rungs: scan.ladder.type_a_count(),
    })
}
