//! Labeled pattern densities and truncated graph limits.
//!
//! `t(F; G)` is the fraction of injective maps `φ: [n] -> [m]` with
//! `G^φ = F`, comparing edges *and* non-edges. This is the induced,
//! labeled convention, not the homomorphism density common in the
//! graph-limit literature: for every `n` the densities of the
//! `2^C(n,2)` labeled graphs on `[n]` sum to one.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{choose2, pair_index, AdjacencyGraph, EnumerationCap};
use crate::metrics::edit_density;
use crate::process::EventLogPath;
use crate::rng;
use crate::stats::McEstimate;
use crate::variation::scan_ladder;

/// Default cap on `m^{n↓}` for exact enumeration.
pub const DEFAULT_INJECTION_BUDGET: u128 = 10_000_000;

/// `m (m-1) ⋯ (m-n+1)`; zero when `n > m`.
pub fn falling_factorial(m: usize, n: usize) -> u128 {
    if n > m {
        return 0;
    }
    ((m - n + 1)..=m).map(|x| x as u128).product()
}

fn check_sizes(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<()> {
    if f.n_vertices() > g.n_vertices() {
        return Err(Error::domain(format!(
            "pattern has {} vertices but host graph only {}",
            f.n_vertices(),
            g.n_vertices()
        )));
    }
    Ok(())
}

fn check_budget(m: usize, n: usize, budget: u128) -> Result<u128> {
    let total = falling_factorial(m, n);
    if total > budget {
        return Err(Error::refused(format!(
            "{m}^({n}↓) = {total} injections exceeds the exact budget {budget}; use density_mc"
        )));
    }
    Ok(total)
}

/// Neighbourhood bitsets, vertex `v` at bit `v - 1` of row `v`.
struct Rows {
    words: usize,
    bits: Vec<u64>,
    all: Vec<u64>,
}

impl Rows {
    fn new(g: &AdjacencyGraph) -> Self {
        let m = g.n_vertices();
        let words = m.div_ceil(64);
        let mut bits = vec![0u64; m * words];
        for (i, j) in g.edges() {
            bits[(i - 1) * words + (j - 1) / 64] |= 1 << ((j - 1) % 64);
            bits[(j - 1) * words + (i - 1) / 64] |= 1 << ((i - 1) % 64);
        }
        let mut all = vec![u64::MAX; words];
        if !m.is_multiple_of(64) {
            all[words - 1] = (1u64 << (m % 64)) - 1;
        }
        Rows { words, bits, all }
    }

    fn row(&self, v: usize) -> &[u64] {
        &self.bits[(v - 1) * self.words..v * self.words]
    }
}

/// Depth-first search over partial injections of `[n - 1]`; the last vertex is placed in bulk by splitting the unused
/// vertices on their adjacency to the chosen ones and counting with popcount.
struct Search<'a> {
    rows: Rows,
    n: usize,
    g: &'a AdjacencyGraph,
    chosen: Vec<usize>,
    used: Vec<u64>,
    scratch: Vec<Vec<u64>>,
}

impl<'a> Search<'a> {
    fn new(g: &'a AdjacencyGraph, n: usize) -> Self {
        let rows = Rows::new(g);
        let words = rows.words;
        Search {
            rows,
            n,
            g,
            chosen: vec![0; n],
            used: vec![0; words],
            scratch: vec![vec![0; words]; n + 1],
        }
    }

    /// Calls `leaf(mask, count)` for every adjacency pattern of the full
    /// injection; `mask` is the pattern's pair bitmask. `keep(depth, mask)`
    /// prunes partial patterns on the first `depth + 1` vertices.
    fn run<K, L>(&mut self, keep: &K, leaf: &mut L)
    where
        K: Fn(usize, u64) -> bool,
        L: FnMut(u64, u64),
    {
        self.extend(0, 0, keep, leaf);
    }

    fn extend<K, L>(&mut self, depth: usize, mask: u64, keep: &K, leaf: &mut L)
    where
        K: Fn(usize, u64) -> bool,
        L: FnMut(u64, u64),
    {
        let n = self.n;
        if depth + 1 == n {
            let mut start = std::mem::take(&mut self.scratch[0]);
            for (w, s) in start.iter_mut().enumerate() {
                *s = self.rows.all[w] & !self.used[w];
            }
            self.split(0, &start, mask, keep, leaf);
            self.scratch[0] = start;
            return;
        }
        for v in 1..=self.g.n_vertices() {
            let (w, b) = ((v - 1) / 64, 1u64 << ((v - 1) % 64));
            if self.used[w] & b != 0 {
                continue;
            }
            let mut mk = mask;
            for a in 0..depth {
                if self.g.has_edge(self.chosen[a], v) {
                    mk |= 1 << pair_index(n, a + 1, depth + 1);
                }
            }
            if !keep(depth, mk) {
                continue;
            }
            self.chosen[depth] = v;
            self.used[w] |= b;
            self.extend(depth + 1, mk, keep, leaf);
            self.used[w] &= !b;
        }
    }

    fn split<K, L>(&mut self, a: usize, set: &[u64], mask: u64, keep: &K, leaf: &mut L)
    where
        K: Fn(usize, u64) -> bool,
        L: FnMut(u64, u64),
    {
        let n = self.n;
        let last = n - 1;
        if a == last {
            if keep(last, mask) {
                let c: u32 = set.iter().map(|x| x.count_ones()).sum();
                if c > 0 {
                    leaf(mask, u64::from(c));
                }
            }
            return;
        }
        let bit = 1u64 << pair_index(n, a + 1, n);
        let mut next = std::mem::take(&mut self.scratch[a + 1]);
        for with in [true, false] {
            let row = self.rows.row(self.chosen[a]);
            let mut any = 0;
            for w in 0..set.len() {
                next[w] = if with {
                    set[w] & row[w]
                } else {
                    set[w] & !row[w]
                };
                any |= next[w];
            }
            if any != 0 {
                let mk = if with { mask | bit } else { mask };
                self.split(a + 1, &next, mk, keep, leaf);
            }
        }
        self.scratch[a + 1] = next;
    }
}

/// Mask of the pairs among the first `depth + 1` vertices of `[n]`.
fn prefix_pairs(n: usize, depth: usize) -> u64 {
    let mut m = 0;
    for j in 2..=depth + 1 {
        for i in 1..j {
            m |= 1 << pair_index(n, i, j);
        }
    }
    m
}

/// Number of injections `φ` with `G^φ = F`, and the total `m^{n↓}`.
pub fn density_count(f: &AdjacencyGraph, g: &AdjacencyGraph, budget: u128) -> Result<(u64, u64)> {
    check_sizes(f, g)?;
    let (n, m) = (f.n_vertices(), g.n_vertices());
    let total = check_budget(m, n, budget)?;
    if n == 0 {
        return Ok((1, 1));
    }
    let target = f
        .pair_mask()
        .ok_or_else(|| Error::domain("pattern too large for a bitmask"))?;
    let prefixes: Vec<u64> = (0..n).map(|d| prefix_pairs(n, d)).collect();
    let keep = |depth: usize, mk: u64| mk & prefixes[depth] == target & prefixes[depth];
    let mut hits = 0;
    Search::new(g, n).run(&keep, &mut |mk, c| {
        if mk == target {
            hits += c;
        }
    });
    Ok((hits, total as u64))
}

/// Exact `t(F; G)` as a reduced fraction.
pub fn density_exact(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<Ratio<u64>> {
    density_exact_with_budget(f, g, DEFAULT_INJECTION_BUDGET)
}

pub fn density_exact_with_budget(
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    budget: u128,
) -> Result<Ratio<u64>> {
    let (hits, total) = density_count(f, g, budget)?;
    Ok(Ratio::new(hits, total))
}

/// Uniform random injection `[n] -> [m]` as a distinct-vertex sequence.
fn sample_injection<R: Rng>(rng: &mut R, m: usize, out: &mut [usize]) {
    let n = out.len();
    for k in 0..n {
        loop {
            let v = rng.random_range(1..=m);
            if !out[..k].contains(&v) {
                out[k] = v;
                break;
            }
        }
    }
}

fn matches_at(f: &AdjacencyGraph, g: &AdjacencyGraph, phi: &[usize]) -> bool {
    let n = phi.len();
    (0..n).all(|a| ((a + 1)..n).all(|b| g.has_edge(phi[a], phi[b]) == f.has_edge(a + 1, b + 1)))
}

/// Monte Carlo `t(F; G)` from `k` uniform injections.
pub fn density_mc(
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    k: usize,
    seed: u64,
) -> Result<McEstimate> {
    check_sizes(f, g)?;
    if k == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let mut rng = rng::root_stream(seed);
    let mut phi = vec![0usize; f.n_vertices()];
    let mut hits = 0u64;
    for _ in 0..k {
        sample_injection(&mut rng, g.n_vertices(), &mut phi);
        if matches_at(f, g, &phi) {
            hits += 1;
        }
    }
    Ok(McEstimate::from_proportion(hits, k as u64))
}

/// Counts of every pattern on `n` vertices over all injections into `G`,
/// indexed by pattern bitmask ([`crate::graph::enumerate_labeled`] order).
pub fn pattern_counts(g: &AdjacencyGraph, n: usize, budget: u128) -> Result<Vec<u64>> {
    let m = g.n_vertices();
    if n == 0 || n > m {
        return Err(Error::domain(format!("pattern size {n} outside 1..={m}")));
    }
    check_budget(m, n, budget)?;
    let mut counts = vec![0u64; 1usize << choose2(n)];
    Search::new(g, n).run(&|_, _| true, &mut |mk, c| counts[mk as usize] += c);
    Ok(counts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelMode {
    Exact,
    MonteCarlo,
}

/// How [`limit_vector`] evaluates each level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "mode")]
pub enum DensityMode {
    /// Exact counting; refuses levels above `budget`.
    Exact { budget: u128 },
    /// Independent Monte Carlo estimate per pattern.
    MonteCarlo { samples: usize, seed: u64 },
    /// Exact up to `budget`, Monte Carlo above it.
    Auto {
        budget: u128,
        samples: usize,
        seed: u64,
    },
}

impl DensityMode {
    pub fn exact() -> Self {
        DensityMode::Exact {
            budget: DEFAULT_INJECTION_BUDGET,
        }
    }

    pub fn auto(samples: usize, seed: u64) -> Self {
        DensityMode::Auto {
            budget: DEFAULT_INJECTION_BUDGET,
            samples,
            seed,
        }
    }

    /// Same mode with the Monte Carlo seed replaced by a child of it.
    pub fn reseeded(self, index: u64) -> Self {
        match self {
            DensityMode::Exact { .. } => self,
            DensityMode::MonteCarlo { samples, seed } => DensityMode::MonteCarlo {
                samples,
                seed: rng::derive_seed(seed, index),
            },
            DensityMode::Auto {
                budget,
                samples,
                seed,
            } => DensityMode::Auto {
                budget,
                samples,
                seed: rng::derive_seed(seed, index),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityLevel {
    pub n: usize,
    pub mode: LevelMode,
    pub t: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Exact injection counts and their total; exact levels only.
    #[serde(skip)]
    pub counts: Option<(Vec<u64>, u64)>,
}

impl DensityLevel {
    /// `Σ_F t(F; G)` as an exact fraction, for exact levels.
    pub fn exact_sum(&self) -> Option<Ratio<u128>> {
        self.counts
            .as_ref()
            .map(|(c, total)| Ratio::new(c.iter().map(|&x| x as u128).sum(), *total as u128))
    }

    /// `sqrt(Σ_F stderr_F²)`.
    pub fn aggregate_stderr(&self) -> f64 {
        self.stderr.iter().map(|s| s * s).sum::<f64>().sqrt()
    }
}

/// Truncated graph limit `(t(F; G))_{F ∈ 𝒢_n, n <= n_max}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityVector {
    pub n_max: usize,
    pub levels: Vec<DensityLevel>,
}

impl DensityVector {
    pub fn is_exact(&self) -> bool {
        self.levels.iter().all(|l| l.mode == LevelMode::Exact)
    }

    pub fn level(&self, n: usize) -> Option<&DensityLevel> {
        self.levels.get(n.checked_sub(1)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("density vectors serialize")
    }
}

pub fn limit_vector(g: &AdjacencyGraph, n_max: usize, mode: DensityMode) -> Result<DensityVector> {
    limit_vector_capped(g, n_max, mode, EnumerationCap::Default)
}

pub fn limit_vector_capped(
    g: &AdjacencyGraph,
    n_max: usize,
    mode: DensityMode,
    cap: EnumerationCap,
) -> Result<DensityVector> {
    cap.check(n_max)?;
    let m = g.n_vertices();
    if n_max > m {
        return Err(Error::domain(format!(
            "n_max = {n_max} exceeds the host graph's {m} vertices"
        )));
    }
    let levels = (1..=n_max)
        .map(|n| {
            let exact_budget = match mode {
                DensityMode::Exact { budget } => Some(budget),
                DensityMode::Auto { budget, .. } if falling_factorial(m, n) <= budget => {
                    Some(budget)
                }
                _ => None,
            };
            match (exact_budget, mode) {
                (Some(budget), _) => {
                    let counts = pattern_counts(g, n, budget)?;
                    let total = falling_factorial(m, n) as u64;
                    Ok(DensityLevel {
                        n,
                        mode: LevelMode::Exact,
                        t: counts.iter().map(|&c| c as f64 / total as f64).collect(),
                        stderr: vec![0.0; counts.len()],
                        counts: Some((counts, total)),
                    })
                }
                (None, DensityMode::MonteCarlo { samples, seed })
                | (None, DensityMode::Auto { samples, seed, .. }) => {
                    let patterns = 1u64 << choose2(n);
                    let est = (0..patterns)
                        .into_par_iter()
                        .map(|mask| {
                            let f = AdjacencyGraph::from_pair_mask(n, mask)?;
                            let s = rng::derive_seed(seed, ((n as u64) << 40) | mask);
                            density_mc(&f, g, samples, s)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(DensityLevel {
                        n,
                        mode: LevelMode::MonteCarlo,
                        t: est.iter().map(|e| e.mean).collect(),
                        stderr: est.iter().map(|e| e.stderr).collect(),
                        counts: None,
                    })
                }
                (None, DensityMode::Exact { .. }) => unreachable!("exact mode always has a budget"),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DensityVector { n_max, levels })
}

/// Per-level weights `f(n)` of the limit metric.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "family", content = "values")]
pub enum WeightFunction {
    /// `f(n) = 2^{-n}`.
    TwoPowNegN,
    /// `f(n) = 2^{-n²}`.
    TwoPowNegNsq,
    /// `f(n) = values[n-1]`, zero past the end of the table.
    Custom(Vec<f64>),
}

impl WeightFunction {
    pub fn custom(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!(
                "weight {v} must be finite and nonnegative"
            )));
        }
        Ok(WeightFunction::Custom(values))
    }

    pub fn value(&self, n: usize) -> f64 {
        self.ln_value(n).exp()
    }

    /// `ln f(n)`; `-inf` where the weight is zero.
    pub fn ln_value(&self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            WeightFunction::TwoPowNegN => -nf * std::f64::consts::LN_2,
            WeightFunction::TwoPowNegNsq => -nf * nf * std::f64::consts::LN_2,
            WeightFunction::Custom(v) => v
                .get(n.wrapping_sub(1))
                .map_or(f64::NEG_INFINITY, |x| x.ln()),
        }
    }
}

impl fmt::Display for WeightFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightFunction::TwoPowNegN => f.write_str("two_pow_neg_n"),
            WeightFunction::TwoPowNegNsq => f.write_str("two_pow_neg_nsq"),
            WeightFunction::Custom(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "custom:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for WeightFunction {
    type Err = Error;

    /// `two_pow_neg_n`, `two_pow_neg_nsq`, or `custom:f1,f2,...`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two_pow_neg_n" => Ok(WeightFunction::TwoPowNegN),
            "two_pow_neg_nsq" => Ok(WeightFunction::TwoPowNegNsq),
            _ => {
                let table = s.strip_prefix("custom:").ok_or_else(|| {
                    Error::domain(format!(
                        "unknown weight family {s:?} (two_pow_neg_n, two_pow_neg_nsq, custom:...)"
                    ))
                })?;
                let values = table
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::domain(format!("bad weight {x:?}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                WeightFunction::custom(values)
            }
        }
    }
}

/// `Σ_n f(n) Σ_{F ∈ 𝒢_n} |t(F; G) - t(F; H)|` over the truncated vectors.
pub fn limit_metric(v1: &DensityVector, v2: &DensityVector, f: &WeightFunction) -> Result<f64> {
    if v1.n_max != v2.n_max || v1.levels.len() != v2.levels.len() {
        return Err(Error::domain(format!(
            "density vectors truncated at different levels ({} vs {})",
            v1.n_max, v2.n_max
        )));
    }
    let mut total = 0.0;
    for (a, b) in v1.levels.iter().zip(&v2.levels) {
        if a.n != b.n || a.t.len() != b.t.len() {
            return Err(Error::domain(format!("level shapes differ at n = {}", a.n)));
        }
        let l1: f64 = a.t.iter().zip(&b.t).map(|(x, y)| (x - y).abs()).sum();
        if l1 > 0.0 {
            total += f.value(a.n) * l1;
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub n: usize,
    /// `|t(F; G) - t(F; H)|`.
    pub lhs: f64,
    /// `C(n,2) · J(G, H)`.
    pub rhs: f64,
    pub margin: f64,
    pub exact: bool,
    pub stderr: f64,
    /// `1 - (1 - J)^C(n,2)`, reported but not asserted.
    pub intermediate_rhs: f64,
    /// `rhs - lhs >= 0`, decided in exact rational arithmetic when exact;
    /// otherwise allowed `3 · stderr`.
    pub holds: bool,
}

/// Compares `|t(F; G) - t(F; H)|` with `C(n,2) J(G, H)`. Exact counting is
/// used when both densities fit the default budget; otherwise Monte Carlo
/// with `mc_samples` draws.
pub fn lipschitz_check(
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    h: &AdjacencyGraph,
    mc_samples: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    if g.n_vertices() != h.n_vertices() {
        return Err(Error::domain("G and H must share a vertex count"));
    }
    check_sizes(f, g)?;
    let n = f.n_vertices();
    let m = g.n_vertices();
    let c = choose2(n) as i128;
    let j = edit_density(g, h)?;
    let intermediate_rhs = 1.0 - (1.0 - j).powi(choose2(n) as i32);
    let rhs = c as f64 * j;
    if falling_factorial(m, n) <= DEFAULT_INJECTION_BUDGET {
        let (hg, total) = density_count(f, g, DEFAULT_INJECTION_BUDGET)?;
        let (hh, _) = density_count(f, h, DEFAULT_INJECTION_BUDGET)?;
        let lhs_exact = Ratio::new((hg as i128 - hh as i128).abs(), total as i128);
        let diff = g.sym_diff_count(h)? as i128;
        let rhs_exact = Ratio::new(c * diff, choose2(m) as i128);
        let margin_exact = rhs_exact - lhs_exact;
        let lhs = (hg as f64 - hh as f64).abs() / total as f64;
        Ok(LipschitzReport {
            n,
            lhs,
            rhs,
            margin: rhs - lhs,
            exact: true,
            stderr: 0.0,
            intermediate_rhs,
            holds: margin_exact >= Ratio::from_integer(0),
        })
    } else {
        let a = density_mc(f, g, mc_samples, rng::derive_seed(seed, 0))?;
        let b = density_mc(f, h, mc_samples, rng::derive_seed(seed, 1))?;
        let lhs = (a.mean - b.mean).abs();
        let stderr = (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
        Ok(LipschitzReport {
            n,
            lhs,
            rhs,
            margin: rhs - lhs,
            exact: false,
            stderr,
            intermediate_rhs,
            holds: lhs <= rhs + 3.0 * stderr,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum Admissibility {
    /// Only finitely many nonzero terms.
    FiniteSupport {
        total: f64,
    },
    /// Tail ratios below one and shrinking; the remainder past `n_max` is at
    /// most `tail_bound` (geometric majorant).
    Convergent {
        tail_bound: f64,
    },
    /// Terms eventually increasing.
    Divergent,
    Inconclusive,
}

impl Admissibility {
    pub fn is_convergent(&self) -> bool {
        matches!(
            self,
            Admissibility::FiniteSupport { .. } | Admissibility::Convergent { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub n_max: usize,
    /// `a_n = f(n) C(n,2) 2^C(n,2)` for `n = 1..=n_max`.
    pub terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `a_{n+1} / a_n` for `n = 2..n_max`.
    pub ratios: Vec<f64>,
    pub verdict: Admissibility,
}

/// Partial sums of `Σ f(n) C(n,2) 2^C(n,2)` and a ratio-test classification.
pub fn weight_admissibility(f: &WeightFunction, n_max: usize) -> Result<AdmissibilityReport> {
    if n_max < 3 {
        return Err(Error::domain("admissibility needs n_max >= 3"));
    }
    let ln_term = |n: usize| -> f64 {
        let c = choose2(n);
        if c == 0 {
            return f64::NEG_INFINITY;
        }
        f.ln_value(n) + (c as f64).ln() + c as f64 * std::f64::consts::LN_2
    };
    let ln_terms: Vec<f64> = (1..=n_max).map(ln_term).collect();
    let terms: Vec<f64> = ln_terms.iter().map(|x| x.exp()).collect();
    let partial_sums: Vec<f64> = terms
        .iter()
        .scan(0.0, |acc, &t| {
            *acc += t;
            Some(*acc)
        })
        .collect();
    // ln_terms[k] is for n = k + 1; ratios start at n = 2.
    let ratios: Vec<f64> = (1..n_max - 1)
        .map(|k| (ln_terms[k + 1] - ln_terms[k]).exp())
        .collect();
    let verdict = match f {
        WeightFunction::Custom(_) => Admissibility::FiniteSupport {
            total: *partial_sums.last().expect("n_max >= 3"),
        },
        _ => match ratios.as_slice() {
            [.., prev, last] if *last >= 1.0 && last >= prev => Admissibility::Divergent,
            [.., prev, last] if *last < 1.0 && last <= prev => Admissibility::Convergent {
                tail_bound: terms[n_max - 1] * last / (1.0 - last),
            },
            [last] if *last >= 1.0 => Admissibility::Divergent,
            [last] if *last < 1.0 => Admissibility::Convergent {
                tail_bound: terms[n_max - 1] * last / (1.0 - last),
            },
            _ => Admissibility::Inconclusive,
        },
    };
    Ok(AdmissibilityReport {
        n_max,
        terms,
        partial_sums,
        ratios,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiniteDimReport {
    pub p: f64,
    pub n_p: usize,
    /// `Σ_k |t(F; Γ_{τ_k}) - t(F; Γ_{τ_{k-1}})|`.
    pub sum: f64,
    /// `C(n,2) p N_p`.
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

/// Variation of one coordinate `t(F; Γ_t)` along the ladder, with exact densities.
pub fn finite_dim_variation(
    path: &EventLogPath,
    f: &AdjacencyGraph,
    p: f64,
) -> Result<FiniteDimReport> {
    let scan = scan_ladder(path, p)?;
    let dens = scan
        .snapshots
        .par_iter()
        .map(|g| density_count(f, g, DEFAULT_INJECTION_BUDGET))
        .collect::<Result<Vec<_>>>()?;
    let total = dens.first().map_or(1, |d| d.1);
    // Integer sum of |Δ count| keeps the comparison exact.
    let steps: u128 = dens
        .windows(2)
        .map(|w| (w[1].0 as i128 - w[0].0 as i128).unsigned_abs())
        .sum();
    let c = choose2(f.n_vertices()) as u128;
    let np = scan.ladder.n_p;
    let sum = steps as f64 / total as f64;
    let bound = c as f64 * p * np as f64;
    Ok(FiniteDimReport {
        p,
        n_p: np,
        sum,
        bound,
        margin: bound - sum,
        holds: sum <= bound,
    })
}
