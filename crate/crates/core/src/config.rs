//! Flat key-value run configuration.
//!
//! Every key mirrors a CLI flag (`init_density` is `--init-density`). Files
//! are TOML with no tables; unknown keys are rejected so typos surface.
//! Defaults reproduce the acceptance suite.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::density::WeightFunction;
use crate::error::{Error, Result};
use crate::process::{EdgeFlipParams, GraphonJumpParams, Model, PiecewiseRate, StepGraphon};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `edge-flip`, `edge-flip-planted` or `graphon-jump`.
    pub model: String,
    pub vertices: usize,
    pub rate: f64,
    pub init_density: f64,
    pub horizon: f64,
    /// Rate multiplier on the pair `{1, 2}` for `edge-flip-planted`.
    pub hot_edge_factor: f64,
    pub global_rate: f64,
    /// Constant graphon values cycled by `graphon-jump`.
    pub graphons: Vec<f64>,
    pub seed: u64,

    /// Thresholds for ladders, `N_p` profiles and the jump bound. The first
    /// entry is the dyadic base `p0`.
    pub p_grid: Vec<f64>,
    pub m_grid: Vec<usize>,
    pub alphas: Vec<f64>,
    /// Thresholds for the α-variation bound.
    pub variation_p_grid: Vec<f64>,
    /// Window size for the α-variation bound.
    pub variation_vertices: usize,
    /// Thresholds for the graph-limit total variation.
    pub tv_p_grid: Vec<f64>,
    pub n_max: usize,
    pub weight: String,
    /// Edit densities of the planted difference graphs in the series check.
    pub series_p: Vec<f64>,
    pub series_alpha: f64,
    pub slln_levels: Vec<usize>,
    pub slln_density: f64,

    /// Random relabelings per permutation average.
    pub k_perm: usize,
    /// Injection samples per pattern for Monte Carlo densities.
    pub k_inj: usize,
    /// Monte Carlo draws for the single-step series check.
    pub k_series: usize,
    /// Independent paths per seeded check.
    pub seed_count: usize,
    pub exchange_seeds: usize,
    pub planted_seeds: usize,
    pub exchange_window: usize,
    /// Make the exchangeability check run on the planted-asymmetry model.
    pub adversarial: bool,

    /// Multiplier on Monte Carlo standard errors.
    pub mc_sigma: f64,
    /// Required KS p-value for the exchangeability check.
    pub ks_level: f64,
    /// Allowed fraction of slack-free dyadic violations.
    pub dyadic_raw_fraction: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: "edge-flip".into(),
            vertices: 128,
            rate: 4.0,
            init_density: 0.5,
            horizon: 1.0,
            hot_edge_factor: 10.0,
            global_rate: 3.0,
            graphons: vec![0.2, 0.8],
            seed: 7,
            p_grid: vec![0.2, 0.1, 0.05, 0.025],
            m_grid: vec![16, 64, 256],
            alphas: vec![2.5, 3.0],
            variation_p_grid: vec![0.1, 0.05],
            variation_vertices: 256,
            tv_p_grid: vec![0.2, 0.1],
            n_max: 3,
            weight: "two_pow_neg_nsq".into(),
            series_p: vec![0.1, 0.3],
            series_alpha: 3.0,
            slln_levels: vec![64, 128, 256, 512],
            slln_density: 0.4,
            k_perm: 200,
            k_inj: 100_000,
            k_series: 10_000,
            seed_count: 20,
            exchange_seeds: 50,
            planted_seeds: 200,
            exchange_window: 8,
            adversarial: false,
            mc_sigma: 3.0,
            ks_level: 0.01,
            dyadic_raw_fraction: 0.1,
        }
    }
}

fn check_probability_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain(format!("{name} must be nonempty")));
    }
    if let Some(p) = grid.iter().find(|p| !(**p > 0.0 && **p < 1.0)) {
        return Err(Error::domain(format!("{name} entry {p} outside (0, 1)")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| Error::domain(format!("config: {}", e.message())))?;
        Ok(cfg)
    }

    pub fn load(file: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(file).map_err(|e| Error::io(file, e))?;
        Self::from_toml(&text)
    }

    pub fn weight_function(&self) -> Result<WeightFunction> {
        self.weight.parse()
    }

    /// The generator selected by `model`, at `vertices` vertices.
    pub fn build_model(&self) -> Result<Model> {
        self.build_model_with(&self.model, self.vertices)
    }

    pub fn build_model_with(&self, model: &str, n: usize) -> Result<Model> {
        match model {
            "edge-flip" | "edge-flip-planted" => {
                let mut p = EdgeFlipParams {
                    n,
                    rate: PiecewiseRate::constant(self.rate)?,
                    init_density: self.init_density,
                    horizon: self.horizon,
                    hot_edge_factor: 1.0,
                };
                if model == "edge-flip-planted" {
                    p.hot_edge_factor = self.hot_edge_factor;
                }
                Ok(Model::EdgeFlip(p))
            }
            "graphon-jump" => Ok(Model::GraphonJump(GraphonJumpParams {
                n,
                graphons: self
                    .graphons
                    .iter()
                    .map(|&c| StepGraphon::constant(c))
                    .collect::<Result<_>>()?,
                global_rate: self.global_rate,
                horizon: self.horizon,
            })),
            other => Err(Error::domain(format!(
                "unknown model {other:?} (edge-flip, edge-flip-planted, graphon-jump)"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.build_model()?;
        self.weight_function()?;
        if self.vertices < 2 || self.variation_vertices < 2 {
            return Err(Error::domain("vertex counts must be at least 2"));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::domain(format!(
                "horizon {} must be positive",
                self.horizon
            )));
        }
        if !(self.rate >= 0.0 && self.rate.is_finite()) {
            return Err(Error::domain(format!(
                "rate {} must be nonnegative",
                self.rate
            )));
        }
        if !(0.0..=1.0).contains(&self.init_density) {
            return Err(Error::domain(format!(
                "init_density {} outside [0, 1]",
                self.init_density
            )));
        }
        check_probability_grid("p_grid", &self.p_grid)?;
        check_probability_grid("variation_p_grid", &self.variation_p_grid)?;
        check_probability_grid("tv_p_grid", &self.tv_p_grid)?;
        check_probability_grid("series_p", &self.series_p)?;
        if !(0.0..=1.0).contains(&self.slln_density) {
            return Err(Error::domain(format!(
                "slln_density {} outside [0, 1]",
                self.slln_density
            )));
        }
        if self.slln_levels.len() < 2
            || self.slln_levels.windows(2).any(|w| w[0] >= w[1])
            || self.slln_levels[0] < 2
        {
            return Err(Error::domain(
                "slln_levels must increase from at least 2, with two or more entries",
            ));
        }
        if self.m_grid.is_empty() || self.m_grid.contains(&0) {
            return Err(Error::domain(
                "m_grid must be nonempty with positive entries",
            ));
        }
        if let Some(a) = self
            .alphas
            .iter()
            .chain([&self.series_alpha])
            .find(|a| !(**a >= 1.0 && a.is_finite()))
        {
            return Err(Error::domain(format!("alpha {a} must be >= 1")));
        }
        if self.n_max == 0 || self.n_max > crate::graph::DEFAULT_ENUMERATION_CAP {
            return Err(Error::domain(format!("n_max {} outside 1..=5", self.n_max)));
        }
        for (name, k) in [
            ("k_perm", self.k_perm),
            ("k_inj", self.k_inj),
            ("k_series", self.k_series),
            ("seed_count", self.seed_count),
        ] {
            if k == 0 {
                return Err(Error::domain(format!("{name} must be positive")));
            }
        }
        for (name, x) in [
            ("mc_sigma", self.mc_sigma),
            ("ks_level", self.ks_level),
            ("dyadic_raw_fraction", self.dyadic_raw_fraction),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::domain(format!(
                    "tolerance {name} = {x} must be positive"
                )));
            }
        }
        Ok(())
    }

    /// The `m_grid` entries that fit a window of `n` vertices, plus `n`.
    pub fn m_grid_for(&self, n: usize) -> Vec<usize> {
        let mut grid: Vec<usize> = self.m_grid.iter().copied().filter(|&m| m < n).collect();
        grid.push(n);
        grid.sort_unstable();
        grid.dedup();
        grid
    }
}
