//! Càdlàg graph-valued paths on `[0, horizon]`, stored as an initial graph
//! plus a time-ordered log of single-edge jumps, and the generators that
//! produce them.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::{Bernoulli, Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{choose2, er_sample_with, pair_at, pair_index, AdjacencyGraph, InjectiveMap};
use crate::rng;

/// One edge changing state at `time`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeEvent {
    pub time: f64,
    pub i: usize,
    pub j: usize,
    pub value: bool,
}

impl EdgeEvent {
    fn key_cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then(self.i.cmp(&other.i))
            .then(self.j.cmp(&other.j))
    }
}

/// Generator name, parameters and seed, carried into persisted files and
/// reports so any path can be regenerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelMeta {
    pub model: String,
    pub params: serde_json::Value,
    pub seed: u64,
}

impl ModelMeta {
    pub fn manual() -> Self {
        ModelMeta {
            model: "manual".into(),
            params: serde_json::Value::Object(Default::default()),
            seed: 0,
        }
    }
}

/// A right-continuous step function of graphs on `[0, horizon]`.
///
/// Invariants (checked on construction): events are strictly increasing in
/// `(time, i, j)`, every time lies in `(0, horizon]`, and every event changes
/// the state of its edge.
#[derive(Clone, Debug, PartialEq)]
pub struct EventLogPath {
    n: usize,
    horizon: f64,
    initial: AdjacencyGraph,
    events: Vec<EdgeEvent>,
    meta: ModelMeta,
}

impl EventLogPath {
    pub fn new(
        horizon: f64,
        initial: AdjacencyGraph,
        events: Vec<EdgeEvent>,
        meta: ModelMeta,
    ) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::domain(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let n = initial.n_vertices();
        let mut state = initial.clone();
        for (k, ev) in events.iter().enumerate() {
            if !(ev.time > 0.0 && ev.time <= horizon) {
                return Err(Error::domain(format!(
                    "event {k} at time {} outside (0, {horizon}]",
                    ev.time
                )));
            }
            if !(1 <= ev.i && ev.i < ev.j && ev.j <= n) {
                return Err(Error::domain(format!(
                    "event {k} on pair {{{}, {}}} violates 1 <= i < j <= {n}",
                    ev.i, ev.j
                )));
            }
            if k > 0 && events[k - 1].key_cmp(ev) != Ordering::Less {
                return Err(Error::domain(format!(
                    "events {} and {k} are not strictly ordered by (time, i, j)",
                    k - 1
                )));
            }
            let idx = pair_index(n, ev.i, ev.j);
            if state.pair_bit(idx) == ev.value {
                return Err(Error::domain(format!(
                    "event {k} sets {{{}, {}}} to its current value",
                    ev.i, ev.j
                )));
            }
            state.toggle_pair(idx);
        }
        Ok(EventLogPath {
            n,
            horizon,
            initial,
            events,
            meta,
        })
    }

    /// Builds a path from unsorted events, sorting them first.
    pub fn from_unsorted(
        horizon: f64,
        initial: AdjacencyGraph,
        mut events: Vec<EdgeEvent>,
        meta: ModelMeta,
    ) -> Result<Self> {
        events.sort_by(EdgeEvent::key_cmp);
        Self::new(horizon, initial, events, meta)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn initial(&self) -> &AdjacencyGraph {
        &self.initial
    }

    pub fn events(&self) -> &[EdgeEvent] {
        &self.events
    }

    pub fn meta(&self) -> &ModelMeta {
        &self.meta
    }

    /// Smallest positive edit density on this vertex window, `2 / (N (N-1))`.
    pub fn density_quantum(&self) -> f64 {
        1.0 / choose2(self.n) as f64
    }

    /// `Γ_t`: the initial graph with every event at time `<= t` applied.
    pub fn snapshot(&self, t: f64) -> Result<AdjacencyGraph> {
        if !(0.0..=self.horizon).contains(&t) {
            return Err(Error::domain(format!(
                "time {t} outside [0, {}]",
                self.horizon
            )));
        }
        let end = self.events.partition_point(|e| e.time <= t);
        let mut g = self.initial.clone();
        for ev in &self.events[..end] {
            g.toggle_pair(pair_index(self.n, ev.i, ev.j));
        }
        Ok(g)
    }

    /// Events grouped by equal time, in replay order.
    pub fn batches(&self) -> impl Iterator<Item = (f64, &[EdgeEvent])> {
        self.events
            .chunk_by(|a, b| a.time == b.time)
            .map(|chunk| (chunk[0].time, chunk))
    }

    /// Distinct event times, ascending.
    pub fn event_times(&self) -> Vec<f64> {
        self.batches().map(|(t, _)| t).collect()
    }

    /// `Γ^σ` for a permutation `σ` of `[N]`: vertex `k` of the new path is
    /// vertex `σ(k)` of this one.
    pub fn relabel(&self, sigma: &InjectiveMap) -> Result<Self> {
        if !sigma.is_permutation() || sigma.domain_size() != self.n {
            return Err(Error::domain(format!(
                "relabeling needs a permutation of [{}]",
                self.n
            )));
        }
        let inv = sigma.inverse()?;
        let events = self
            .events
            .iter()
            .map(|e| {
                let (a, b) = (inv.apply(e.i), inv.apply(e.j));
                EdgeEvent {
                    time: e.time,
                    i: a.min(b),
                    j: a.max(b),
                    value: e.value,
                }
            })
            .collect();
        Self::from_unsorted(
            self.horizon,
            self.initial.apply_map(sigma)?,
            events,
            self.meta.clone(),
        )
    }

    /// The path of `Γ|_w`: the induced process on the first `w` vertices.
    pub fn restrict(&self, w: usize) -> Result<Self> {
        let initial = self.initial.restrict(w)?;
        let events = self.events.iter().filter(|e| e.j <= w).copied().collect();
        Ok(EventLogPath {
            n: w,
            horizon: self.horizon,
            initial,
            events,
            meta: self.meta.clone(),
        })
    }
}

/// Incremental replay of a path, one time batch at a time.
pub(crate) struct Replay<'a> {
    path: &'a EventLogPath,
    pos: usize,
    state: AdjacencyGraph,
}

impl<'a> Replay<'a> {
    pub(crate) fn new(path: &'a EventLogPath) -> Self {
        Replay {
            path,
            pos: 0,
            state: path.initial.clone(),
        }
    }

    pub(crate) fn state(&self) -> &AdjacencyGraph {
        &self.state
    }

    /// Applies the next batch of simultaneous events, calling `on_toggle` with
    /// each pair index and its new value. Returns the batch time and size.
    pub(crate) fn step<F: FnMut(usize, bool)>(&mut self, mut on_toggle: F) -> Option<(f64, usize)> {
        let events = &self.path.events;
        if self.pos >= events.len() {
            return None;
        }
        let t = events[self.pos].time;
        let start = self.pos;
        while self.pos < events.len() && events[self.pos].time == t {
            let ev = events[self.pos];
            let k = pair_index(self.path.n, ev.i, ev.j);
            self.state.toggle_pair(k);
            on_toggle(k, ev.value);
            self.pos += 1;
        }
        Some((t, self.pos - start))
    }
}

/// Per-edge jump counts `j(e)`, indexed by row-major pair position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpCounts {
    pub n: usize,
    pub counts: Vec<u32>,
}

impl JumpCounts {
    pub fn get(&self, i: usize, j: usize) -> u32 {
        let (a, b) = (i.min(j), i.max(j));
        self.counts[pair_index(self.n, a, b)]
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// An edge attaining the maximum, if any edge exists.
    pub fn argmax(&self) -> Option<(usize, usize)> {
        let (k, _) = self
            .counts
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))?;
        Some(pair_at(self.n, k))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn mean(&self) -> f64 {
        if self.counts.is_empty() {
            return 0.0;
        }
        self.total() as f64 / self.counts.len() as f64
    }

    /// `count -> number of edges with that many jumps`.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.counts {
            *h.entry(c).or_insert(0) += 1;
        }
        h
    }
}

pub fn jump_counts(path: &EventLogPath) -> JumpCounts {
    let mut counts = vec![0u32; choose2(path.n)];
    for e in &path.events {
        counts[pair_index(path.n, e.i, e.j)] += 1;
    }
    JumpCounts { n: path.n, counts }
}

/// Piecewise-constant intensity: `rates[k]` on `[breaks[k], breaks[k+1])`,
/// with the last piece extending to infinity. `breaks[0] == 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseRate {
    pub breaks: Vec<f64>,
    pub rates: Vec<f64>,
}

impl PiecewiseRate {
    pub fn new(breaks: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != rates.len() {
            return Err(Error::domain(
                "a rate function needs one break per piece, starting at 0",
            ));
        }
        if breaks[0] != 0.0 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(format!(
                "breaks must start at 0 and increase strictly, got {breaks:?}"
            )));
        }
        if let Some(r) = rates.iter().find(|r| !(r.is_finite() && **r >= 0.0)) {
            return Err(Error::domain(format!("rate {r} is negative or not finite")));
        }
        Ok(PiecewiseRate { breaks, rates })
    }

    pub fn constant(rate: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![rate])
    }

    pub fn rate_at(&self, t: f64) -> f64 {
        let k = self.breaks.partition_point(|&b| b <= t).max(1) - 1;
        self.rates[k]
    }

    /// `Λ(t) = ∫_0^t λ(s) ds`.
    pub fn cumulative(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.breaks.len() {
            let start = self.breaks[k];
            if t <= start {
                break;
            }
            let end = self.breaks.get(k + 1).copied().unwrap_or(f64::INFINITY);
            acc += self.rates[k] * (t.min(end) - start);
        }
        acc
    }

    /// Smallest `t` with `Λ(t) >= s`; infinite if `Λ` never reaches `s`.
    pub fn inverse_cumulative(&self, s: f64) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.breaks.len() {
            let start = self.breaks[k];
            let end = self.breaks.get(k + 1).copied().unwrap_or(f64::INFINITY);
            let rate = self.rates[k];
            let piece = rate * (end - start);
            if rate > 0.0 && acc + piece >= s {
                return start + (s - acc) / rate;
            }
            acc += if rate > 0.0 { piece } else { 0.0 };
        }
        f64::INFINITY
    }
}

/// Edge-flip model: initial `ER(init_density)`, then every pair carries an
/// independent Poisson clock of intensity `λ(t)` and flips at each tick. The
/// pair `{1, 2}` runs at `hot_edge_factor · λ(t)`; any factor other than 1
/// breaks exchangeability on purpose.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFlipParams {
    pub n: usize,
    pub rate: PiecewiseRate,
    pub init_density: f64,
    pub horizon: f64,
    pub hot_edge_factor: f64,
}

impl EdgeFlipParams {
    pub fn constant(n: usize, rate: f64, init_density: f64, horizon: f64) -> Result<Self> {
        Ok(EdgeFlipParams {
            n,
            rate: PiecewiseRate::constant(rate)?,
            init_density,
            horizon,
            hot_edge_factor: 1.0,
        })
    }
}

/// Symmetric step-function graphon on `[0,1]²`: `values[a][b]` on the block
/// `[breaks[a], breaks[a+1]) × [breaks[b], breaks[b+1])`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepGraphon {
    pub breaks: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl StepGraphon {
    pub fn new(breaks: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        let k = values.len();
        if k == 0 || breaks.len() != k + 1 {
            return Err(Error::domain("graphon needs k blocks and k + 1 breaks"));
        }
        if breaks[0] != 0.0 || breaks[k] != 1.0 || breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain(format!(
                "graphon breaks must increase from 0 to 1, got {breaks:?}"
            )));
        }
        for (a, row) in values.iter().enumerate() {
            if row.len() != k {
                return Err(Error::domain("graphon value matrix must be square"));
            }
            for (b, &v) in row.iter().enumerate() {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::domain(format!("graphon value {v} not in [0, 1]")));
                }
                if v != values[b][a] {
                    return Err(Error::domain(format!(
                        "graphon is not symmetric at blocks ({a}, {b})"
                    )));
                }
            }
        }
        Ok(StepGraphon { breaks, values })
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![vec![c]])
    }

    fn block(&self, x: f64) -> usize {
        let k = self.values.len();
        (self.breaks.partition_point(|&b| b <= x).max(1) - 1).min(k - 1)
    }

    pub fn value(&self, x: f64, y: f64) -> f64 {
        self.values[self.block(x)][self.block(y)]
    }
}

/// Stress model with simultaneous jumps: latent `u_i ~ U(0,1)`, initial
/// graph drawn from `graphons[0]`, and at each tick of one global Poisson
/// clock every edge is redrawn from the next graphon in the cycle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphonJumpParams {
    pub n: usize,
    pub graphons: Vec<StepGraphon>,
    pub global_rate: f64,
    pub horizon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    EdgeFlip(EdgeFlipParams),
    GraphonJump(GraphonJumpParams),
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::EdgeFlip(p) if p.hot_edge_factor != 1.0 => "edge-flip-planted",
            Model::EdgeFlip(_) => "edge-flip",
            Model::GraphonJump(_) => "graphon-jump",
        }
    }

    pub fn n_vertices(&self) -> usize {
        match self {
            Model::EdgeFlip(p) => p.n,
            Model::GraphonJump(p) => p.n,
        }
    }

    pub fn simulate(&self, seed: u64) -> Result<EventLogPath> {
        match self {
            Model::EdgeFlip(p) => simulate_edge_flip(p, seed),
            Model::GraphonJump(p) => simulate_graphon_jump(p, seed),
        }
    }

    fn meta(&self, seed: u64) -> ModelMeta {
        let mut params = serde_json::to_value(self).expect("model parameters serialize");
        if let serde_json::Value::Object(map) = &mut params {
            map.remove("model");
        }
        ModelMeta {
            model: self.name().into(),
            params,
            seed,
        }
    }
}

pub fn simulate_edge_flip(params: &EdgeFlipParams, seed: u64) -> Result<EventLogPath> {
    let n = params.n;
    if !(params.hot_edge_factor.is_finite() && params.hot_edge_factor >= 0.0) {
        return Err(Error::domain(format!(
            "hot edge factor {} must be a nonnegative number",
            params.hot_edge_factor
        )));
    }
    // Re-validate in case the caller built the rate by hand.
    let rate = PiecewiseRate::new(params.rate.breaks.clone(), params.rate.rates.clone())?;
    let initial = er_sample_with(n, params.init_density, &mut rng::stream(seed, 0))?;
    let mut ev_rng = rng::stream(seed, 1);
    let budget = rate.cumulative(params.horizon);
    let mut events = Vec::new();
    for k in 0..choose2(n) {
        let factor = if k == 0 { params.hot_edge_factor } else { 1.0 };
        if factor == 0.0 {
            continue;
        }
        let (i, j) = pair_at(n, k);
        let mut state = initial.pair_bit(k);
        let mut s = 0.0;
        loop {
            let step: f64 = Exp1.sample(&mut ev_rng);
            s += step;
            if s > factor * budget {
                break;
            }
            let t = rate.inverse_cumulative(s / factor);
            if !(t > 0.0 && t <= params.horizon) {
                break;
            }
            state = !state;
            events.push(EdgeEvent {
                time: t,
                i,
                j,
                value: state,
            });
        }
    }
    let model = Model::EdgeFlip(params.clone());
    EventLogPath::from_unsorted(params.horizon, initial, events, model.meta(seed))
}

pub fn simulate_graphon_jump(params: &GraphonJumpParams, seed: u64) -> Result<EventLogPath> {
    let n = params.n;
    if params.graphons.is_empty() {
        return Err(Error::domain("graphon list is empty"));
    }
    let graphons = params
        .graphons
        .iter()
        .map(|w| StepGraphon::new(w.breaks.clone(), w.values.clone()))
        .collect::<Result<Vec<_>>>()?;
    if !(params.global_rate.is_finite() && params.global_rate >= 0.0) {
        return Err(Error::domain(format!(
            "global rate {} must be a nonnegative number",
            params.global_rate
        )));
    }
    let mut latent_rng = rng::stream(seed, 0);
    let latents: Vec<f64> = (0..n).map(|_| latent_rng.random::<f64>()).collect();
    let draw = |w: &StepGraphon, rng: &mut rng::StreamRng, k: usize| -> bool {
        let (i, j) = pair_at(n, k);
        let p = w.value(latents[i - 1], latents[j - 1]);
        Bernoulli::new(p).expect("validated graphon").sample(rng)
    };
    let mut init_rng = rng::stream(seed, 1);
    let mut state = AdjacencyGraph::empty(n)?;
    for k in 0..choose2(n) {
        if draw(&graphons[0], &mut init_rng, k) {
            state.set_pair(k, true);
        }
    }
    let initial = state.clone();
    let mut clock = rng::stream(seed, 2);
    let mut resample = rng::stream(seed, 3);
    let mut events = Vec::new();
    let mut t = 0.0;
    let mut tick = 0usize;
    if params.global_rate > 0.0 {
        loop {
            let step: f64 = Exp1.sample(&mut clock);
            t += step / params.global_rate;
            if t > params.horizon {
                break;
            }
            tick += 1;
            let w = &graphons[tick % graphons.len()];
            for k in 0..choose2(n) {
                let v = draw(w, &mut resample, k);
                if v != state.pair_bit(k) {
                    state.set_pair(k, v);
                    let (i, j) = pair_at(n, k);
                    events.push(EdgeEvent {
                        time: t,
                        i,
                        j,
                        value: v,
                    });
                }
            }
        }
    }
    let model = Model::GraphonJump(params.clone());
    EventLogPath::new(params.horizon, initial, events, model.meta(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::edit_density;

    fn flip(n: usize, rate: f64, seed: u64) -> EventLogPath {
        simulate_edge_flip(&EdgeFlipParams::constant(n, rate, 0.5, 1.0).unwrap(), seed).unwrap()
    }

    #[test]
    fn zero_rate_gives_constant_path() {
        let p = flip(20, 0.0, 3);
        assert!(p.events().is_empty());
        assert_eq!(p.snapshot(1.0).unwrap(), *p.initial());
    }

    #[test]
    fn negative_rate_rejected() {
        assert!(EdgeFlipParams::constant(10, -1.0, 0.5, 1.0).is_err());
        let bad = EdgeFlipParams {
            n: 10,
            rate: PiecewiseRate {
                breaks: vec![0.0],
                rates: vec![-2.0],
            },
            init_density: 0.5,
            horizon: 1.0,
            hot_edge_factor: 1.0,
        };
        assert!(simulate_edge_flip(&bad, 1).is_err());
    }

    #[test]
    fn event_count_matches_poisson_moments() {
        let n = 64;
        let mean = 2.0 * choose2(n) as f64;
        for seed in 0..4 {
            let p = flip(n, 2.0, seed);
            let c = p.events().len() as f64;
            assert!((c - mean).abs() <= 4.0 * mean.sqrt(), "seed {seed}: {c}");
        }
    }

    #[test]
    fn flip_chain_disagreement_probability() {
        let n = 128;
        for &r in &[0.5, 2.0] {
            let p = flip(n, r, 17);
            let j = edit_density(&p.snapshot(1.0).unwrap(), p.initial()).unwrap();
            let q = (1.0 - (-2.0 * r).exp()) / 2.0;
            let sd = (q * (1.0 - q) / choose2(n) as f64).sqrt();
            assert!((j - q).abs() <= 4.0 * sd, "rate {r}: {j} vs {q}");
        }
    }

    #[test]
    fn jump_counts_are_poisson() {
        let n = 128;
        let r = 3.0;
        let p = flip(n, r, 5);
        let jc = jump_counts(&p);
        let sd = (r / choose2(n) as f64).sqrt();
        assert!((jc.mean() - r).abs() <= 4.0 * sd);
        assert_eq!(jc.total() as usize, p.events().len());
        assert!(jc.max() < 40);
        assert_eq!(jc.histogram().values().sum::<usize>(), choose2(n));
    }

    #[test]
    fn jump_counts_on_hand_built_path() {
        let init = AdjacencyGraph::empty(4).unwrap();
        let ev = |t, value| EdgeEvent {
            time: t,
            i: 1,
            j: 2,
            value,
        };
        let p = EventLogPath::new(
            1.0,
            init,
            vec![ev(0.1, true), ev(0.2, false), ev(0.3, true)],
            ModelMeta::manual(),
        )
        .unwrap();
        let jc = jump_counts(&p);
        assert_eq!(jc.get(1, 2), 3);
        assert_eq!(jc.get(3, 4), 0);
        assert_eq!(jc.argmax(), Some((1, 2)));
        let empty = EventLogPath::new(
            1.0,
            AdjacencyGraph::empty(4).unwrap(),
            vec![],
            ModelMeta::manual(),
        )
        .unwrap();
        assert!(jump_counts(&empty).counts.iter().all(|&c| c == 0));
    }

    #[test]
    fn path_validation() {
        let init = AdjacencyGraph::empty(3).unwrap();
        let e = |t, i, j, value| EdgeEvent {
            time: t,
            i,
            j,
            value,
        };
        let meta = ModelMeta::manual;
        // not a genuine jump
        assert!(EventLogPath::new(1.0, init.clone(), vec![e(0.5, 1, 2, false)], meta()).is_err());
        // time outside (0, horizon]
        assert!(EventLogPath::new(1.0, init.clone(), vec![e(0.0, 1, 2, true)], meta()).is_err());
        assert!(EventLogPath::new(1.0, init.clone(), vec![e(1.5, 1, 2, true)], meta()).is_err());
        // out of order
        assert!(EventLogPath::new(
            1.0,
            init.clone(),
            vec![e(0.5, 1, 3, true), e(0.5, 1, 2, true)],
            meta()
        )
        .is_err());
        // same time, ordered by pair
        assert!(EventLogPath::new(
            1.0,
            init,
            vec![e(0.5, 1, 2, true), e(0.5, 1, 3, true)],
            meta()
        )
        .is_ok());
    }

    #[test]
    fn snapshot_semantics() {
        let p = flip(24, 3.0, 9);
        assert_eq!(p.snapshot(0.0).unwrap(), *p.initial());
        let t0 = p.events()[0].time;
        assert_eq!(p.snapshot(t0 * 0.999).unwrap(), *p.initial());
        // right-continuity: the event at t0 is included
        assert_ne!(p.snapshot(t0).unwrap(), *p.initial());
        assert!(p.snapshot(-0.1).is_err());
        assert!(p.snapshot(1.1).is_err());

        // independent full replay
        let mut g = p.initial().clone();
        for ev in p.events() {
            g = g.with_edge(ev.i, ev.j, ev.value).unwrap();
        }
        assert_eq!(p.snapshot(1.0).unwrap(), g);
    }

    #[test]
    fn snapshot_constant_between_events() {
        let p = flip(16, 4.0, 2);
        let times = p.event_times();
        for w in times.windows(2).step_by(7) {
            let mid = 0.5 * (w[0] + w[1]);
            assert_eq!(p.snapshot(mid).unwrap(), p.snapshot(w[0]).unwrap());
        }
    }

    #[test]
    fn single_edge_paths_alternate() {
        let p = flip(20, 5.0, 13);
        let mut last: std::collections::HashMap<(usize, usize), bool> = Default::default();
        for ev in p.events() {
            let prev = last
                .get(&(ev.i, ev.j))
                .copied()
                .unwrap_or_else(|| p.initial().has_edge(ev.i, ev.j));
            assert_ne!(prev, ev.value);
            last.insert((ev.i, ev.j), ev.value);
        }
    }

    #[test]
    fn replay_is_deterministic() {
        assert_eq!(flip(30, 2.0, 77), flip(30, 2.0, 77));
        assert_ne!(flip(30, 2.0, 77), flip(30, 2.0, 78));
    }

    #[test]
    fn piecewise_rate_inverse() {
        let r = PiecewiseRate::new(vec![0.0, 0.5], vec![2.0, 0.0]).unwrap();
        assert_eq!(r.cumulative(0.25), 0.5);
        assert_eq!(r.cumulative(2.0), 1.0);
        assert_eq!(r.inverse_cumulative(0.5), 0.25);
        assert_eq!(r.inverse_cumulative(1.5), f64::INFINITY);
        assert_eq!(r.rate_at(0.7), 0.0);
        // a path driven by this rate has no events after 0.5
        let params = EdgeFlipParams {
            n: 20,
            rate: r,
            init_density: 0.5,
            horizon: 1.0,
            hot_edge_factor: 1.0,
        };
        let p = simulate_edge_flip(&params, 4).unwrap();
        assert!(!p.events().is_empty());
        assert!(p.events().iter().all(|e| e.time <= 0.5));
    }

    #[test]
    fn graphon_jump_examples() {
        let c = StepGraphon::constant(0.5).unwrap();
        let still = GraphonJumpParams {
            n: 12,
            graphons: vec![c.clone()],
            global_rate: 0.0,
            horizon: 1.0,
        };
        assert!(simulate_graphon_jump(&still, 1)
            .unwrap()
            .events()
            .is_empty());

        let alt = GraphonJumpParams {
            n: 10,
            graphons: vec![
                StepGraphon::constant(0.0).unwrap(),
                StepGraphon::constant(1.0).unwrap(),
            ],
            global_rate: 5.0,
            horizon: 1.0,
        };
        let p = simulate_graphon_jump(&alt, 3).unwrap();
        let times = p.event_times();
        assert!(!times.is_empty());
        let mut prev = p.initial().clone();
        assert_eq!(prev.edge_count(), 0);
        for &t in &times {
            let cur = p.snapshot(t).unwrap();
            assert_eq!(cur.sym_diff_count(&prev).unwrap(), choose2(10));
            prev = cur;
        }

        let half = GraphonJumpParams {
            n: 200,
            graphons: vec![c],
            global_rate: 1.0,
            horizon: 50.0,
        };
        let p = simulate_graphon_jump(&half, 8).unwrap();
        let t = p.event_times()[0];
        let before = p.snapshot(t * 0.5).unwrap();
        let after = p.snapshot(t).unwrap();
        // independent Bernoulli(1/2) redraw disagrees with probability 1/2
        let j = edit_density(&before, &after).unwrap();
        let sd = (0.25 / choose2(200) as f64).sqrt();
        assert!((j - 0.5).abs() <= 4.0 * sd, "{j}");
    }

    #[test]
    fn non_symmetric_graphon_rejected() {
        assert!(
            StepGraphon::new(vec![0.0, 0.5, 1.0], vec![vec![0.1, 0.2], vec![0.3, 0.4]]).is_err()
        );
        assert!(
            StepGraphon::new(vec![0.0, 0.5, 1.0], vec![vec![0.1, 0.2], vec![0.2, 0.4]]).is_ok()
        );
    }

    #[test]
    fn relabel_and_restrict() {
        let p = flip(12, 2.0, 21);
        let sigma = InjectiveMap::random_permutation(12, &mut rng::root_stream(5));
        let q = p.relabel(&sigma).unwrap();
        for &t in p.event_times().iter().step_by(5) {
            assert_eq!(
                q.snapshot(t).unwrap(),
                p.snapshot(t).unwrap().apply_map(&sigma).unwrap()
            );
        }
        let r = p.restrict(5).unwrap();
        assert_eq!(
            r.snapshot(1.0).unwrap(),
            p.snapshot(1.0).unwrap().restrict(5).unwrap()
        );
    }
}
