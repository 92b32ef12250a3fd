//! Finite simple graphs on the vertex set `1..=n` and the structural
//! operators the rest of the crate is built on: restriction to a vertex
//! prefix, relabeling through an injective map, projection onto a prefix,
//! and symmetric-difference counting.
//!
//! Adjacency is stored as a packed bitset over the `C(n, 2)` unordered pairs
//! `{i, j}`, `i < j`, in row-major order: `{1,2}, {1,3}, .., {1,n}, {2,3}, ..`.
//! For `n <= 11` the whole graph fits in one word, and that word is the
//! graph's index in [`enumerate_labeled`] order.

use std::fmt;

use rand::Rng;
use rand_distr::{Bernoulli, Distribution};

use crate::error::{Error, Result};
use crate::rng;

/// Number of unordered pairs on `n` vertices, with `C(0,2) = C(1,2) = 0`.
pub const fn choose2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Position of the unordered pair `{i, j}` (1-indexed, `i < j`) in the
/// row-major pair order on `n` vertices.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_at(n: usize, mut index: usize) -> (usize, usize) {
    debug_assert!(index < choose2(n));
    let mut i = 1;
    loop {
        let row = n - i;
        if index < row {
            return (i, i + 1 + index);
        }
        index -= row;
        i += 1;
    }
}

#[inline]
fn words_for(n: usize) -> usize {
    choose2(n).div_ceil(64)
}

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AdjacencyGraph {
    n: usize,
    bits: Vec<u64>,
}

impl AdjacencyGraph {
    /// Edgeless graph on `n >= 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("a graph needs at least one vertex"));
        }
        Ok(AdjacencyGraph {
            n,
            bits: vec![0; words_for(n)],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for k in 0..choose2(n) {
            g.bits[k / 64] |= 1 << (k % 64);
        }
        Ok(g)
    }

    /// Builds a graph from 1-indexed edges. Either endpoint order is accepted;
    /// self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            let (i, j) = g.check_pair(a, b)?;
            g.set_pair(pair_index(n, i, j), true);
        }
        Ok(g)
    }

    /// Graph whose pair bits are the low `C(n,2)` bits of `mask`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Result<Self> {
        let pairs = choose2(n);
        if pairs > 64 {
            return Err(Error::domain(format!(
                "pair mask only addresses graphs with at most 11 vertices, got {n}"
            )));
        }
        if pairs < 64 && mask >> pairs != 0 {
            return Err(Error::domain(format!(
                "mask {mask:#x} has bits beyond the {pairs} pairs of a {n}-vertex graph"
            )));
        }
        let mut g = Self::empty(n)?;
        if pairs > 0 {
            g.bits[0] = mask;
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        choose2(self.n)
    }

    /// Pair bits as a single word; `None` when the graph has more than 11 vertices.
    pub fn pair_mask(&self) -> Option<u64> {
        match self.bits.len() {
            0 => Some(0),
            1 => Some(self.bits[0]),
            _ => None,
        }
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<(usize, usize)> {
        if a == b {
            return Err(Error::domain(format!("self-loop at vertex {a}")));
        }
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        if i == 0 || j > self.n {
            return Err(Error::domain(format!(
                "pair {{{a},{b}}} outside vertex range 1..={}",
                self.n
            )));
        }
        Ok((i, j))
    }

    #[inline]
    pub(crate) fn pair_bit(&self, k: usize) -> bool {
        self.bits[k / 64] >> (k % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set_pair(&mut self, k: usize, value: bool) {
        let w = &mut self.bits[k / 64];
        if value {
            *w |= 1 << (k % 64);
        } else {
            *w &= !(1 << (k % 64));
        }
    }

    #[inline]
    pub(crate) fn toggle_pair(&mut self, k: usize) {
        self.bits[k / 64] ^= 1 << (k % 64);
    }

    /// Adjacency of two distinct in-range vertices (either order).
    /// Returns `false` for `i == j`.
    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        debug_assert!(a >= 1 && b <= self.n);
        self.pair_bit(pair_index(self.n, a, b))
    }

    /// A copy with the pair `{i, j}` set to `present`.
    pub fn with_edge(&self, i: usize, j: usize, present: bool) -> Result<Self> {
        let (a, b) = self.check_pair(i, j)?;
        let mut g = self.clone();
        g.set_pair(pair_index(self.n, a, b), present);
        Ok(g)
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as 1-indexed pairs `(i, j)` with `i < j`, in row-major order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.set_pair_indices().map(|k| pair_at(self.n, k))
    }

    /// Indices of present pairs, ascending.
    pub(crate) fn set_pair_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    /// Induced subgraph on the first `n` vertices.
    pub fn restrict(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.n {
            return Err(Error::domain(format!(
                "cannot restrict a {}-vertex graph to {n} vertices",
                self.n
            )));
        }
        if n == self.n {
            return Ok(self.clone());
        }
        let mut g = Self::empty(n)?;
        let mut k = 0;
        for i in 1..n {
            let base = pair_index(self.n, i, i + 1);
            for off in 0..(n - i) {
                if self.pair_bit(base + off) {
                    g.set_pair(k, true);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// `G^φ`: the graph on `φ.domain_size()` vertices with `{k, l}` an edge iff
    /// `{φ(k), φ(l)}` is an edge of `self`.
    pub fn apply_map(&self, map: &InjectiveMap) -> Result<Self> {
        if map.codomain_size() > self.n {
            if let Some(&bad) = map.image().iter().find(|&&v| v > self.n) {
                return Err(Error::domain(format!(
                    "map sends a vertex to {bad}, outside 1..={}",
                    self.n
                )));
            }
        }
        let image = map.image();
        let m = image.len();
        let mut g = Self::empty(m)?;
        let mut k = 0;
        for a in 0..m {
            for b in (a + 1)..m {
                if self.has_edge(image[a], image[b]) {
                    g.set_pair(k, true);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Zeroes every pair not contained in `1..=m`; the vertex count is kept.
    pub fn project(&self, m: usize) -> Self {
        if m >= self.n {
            return self.clone();
        }
        let mut g = AdjacencyGraph {
            n: self.n,
            bits: vec![0; self.bits.len()],
        };
        for i in 1..m {
            let base = pair_index(self.n, i, i + 1);
            for off in 0..(m - i) {
                if self.pair_bit(base + off) {
                    g.set_pair(base + off, true);
                }
            }
        }
        g
    }

    fn check_same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::domain(format!(
                "vertex counts differ: {} vs {}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    /// Number of unordered pairs on which the two graphs disagree.
    pub fn sym_diff_count(&self, other: &Self) -> Result<usize> {
        self.check_same_size(other)?;
        Ok(self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum())
    }

    /// The graph of disagreeing pairs.
    pub fn sym_diff(&self, other: &Self) -> Result<Self> {
        self.check_same_size(other)?;
        Ok(AdjacencyGraph {
            n: self.n,
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Parses the edge-list text format: a header line `n <N>` followed by one
    /// `<i> <j>` line per edge with `1 <= i < j <= N`. Blank lines and lines
    /// starting with `#` are ignored; duplicate edges are rejected.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing `n <N>` header"))?;
        let mut parts = header.split_whitespace();
        let n = match (parts.next(), parts.next(), parts.next()) {
            (Some("n"), Some(v), None) => v
                .parse::<usize>()
                .map_err(|e| Error::parse(hl, format!("bad vertex count {v:?}: {e}")))?,
            _ => {
                return Err(Error::parse(
                    hl,
                    format!("expected `n <N>`, got {header:?}"),
                ))
            }
        };
        let mut g = Self::empty(n).map_err(|e| Error::parse(hl, e.to_string()))?;
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(
                    ln,
                    format!("expected `<i> <j>`, got {line:?}"),
                ));
            }
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| Error::parse(ln, format!("bad vertex {s:?}: {e}")))
            };
            let (i, j) = (parse(fields[0])?, parse(fields[1])?);
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::parse(
                    ln,
                    format!("edge {i} {j} violates 1 <= i < j <= {n}"),
                ));
            }
            let k = pair_index(n, i, j);
            if g.pair_bit(k) {
                return Err(Error::parse(ln, format!("duplicate edge {i} {j}")));
            }
            g.set_pair(k, true);
        }
        Ok(g)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (i, j) in self.edges() {
            out.push_str(&format!("{i} {j}\n"));
        }
        out
    }
}

impl fmt::Debug for AdjacencyGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AdjacencyGraph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// An injective map `φ: [n] -> [m]`, stored as its image list.
/// Permutations are the `n == m` case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectiveMap {
    image: Vec<usize>,
    codomain: usize,
}

impl InjectiveMap {
    pub fn new(image: Vec<usize>, codomain: usize) -> Result<Self> {
        if image.is_empty() {
            return Err(Error::domain("injective map needs a nonempty domain"));
        }
        let mut seen = vec![false; codomain + 1];
        for &v in &image {
            if v == 0 || v > codomain {
                return Err(Error::domain(format!(
                    "image vertex {v} outside 1..={codomain}"
                )));
            }
            if seen[v] {
                return Err(Error::domain(format!("image vertex {v} repeated")));
            }
            seen[v] = true;
        }
        Ok(InjectiveMap { image, codomain })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((1..=n).collect(), n)
    }

    /// Uniformly random permutation of `[n]`.
    pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut image: Vec<usize> = (1..=n).collect();
        image.shuffle(rng);
        InjectiveMap { image, codomain: n }
    }

    pub fn domain_size(&self) -> usize {
        self.image.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `φ(k)` for 1-indexed `k`.
    pub fn apply(&self, k: usize) -> usize {
        self.image[k - 1]
    }

    pub fn is_permutation(&self) -> bool {
        self.image.len() == self.codomain
    }

    /// `self ∘ other`, i.e. `k ↦ self(other(k))`.
    pub fn compose(&self, other: &InjectiveMap) -> Result<Self> {
        if other.codomain > self.image.len() {
            return Err(Error::domain(format!(
                "cannot compose: inner map lands in 1..={} but outer domain is 1..={}",
                other.codomain,
                self.image.len()
            )));
        }
        Self::new(
            other.image.iter().map(|&k| self.image[k - 1]).collect(),
            self.codomain,
        )
    }

    /// Inverse permutation; errors if the map is not a permutation.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_permutation() {
            return Err(Error::domain("only permutations are invertible"));
        }
        let mut inv = vec![0; self.image.len()];
        for (k, &v) in self.image.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Ok(InjectiveMap {
            image: inv,
            codomain: self.codomain,
        })
    }
}

/// Largest `n` [`enumerate_labeled`] accepts without the extended cap.
pub const DEFAULT_ENUMERATION_CAP: usize = 5;
/// Largest `n` accepted with [`EnumerationCap::Extended`] (32768 graphs).
pub const EXTENDED_ENUMERATION_CAP: usize = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EnumerationCap {
    #[default]
    Default,
    Extended,
}

impl EnumerationCap {
    pub fn limit(self) -> usize {
        match self {
            EnumerationCap::Default => DEFAULT_ENUMERATION_CAP,
            EnumerationCap::Extended => EXTENDED_ENUMERATION_CAP,
        }
    }

    pub fn check(self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::domain("graphs need at least one vertex"));
        }
        if n > self.limit() {
            return Err(Error::refused(format!(
                "enumerating all 2^{} labeled graphs on {n} vertices exceeds the cap of n = {}",
                choose2(n),
                self.limit()
            )));
        }
        Ok(())
    }
}

/// All `2^C(n,2)` labeled graphs on `n` vertices, ordered by pair bitmask.
pub fn enumerate_labeled(n: usize) -> Result<Vec<AdjacencyGraph>> {
    enumerate_labeled_capped(n, EnumerationCap::Default)
}

pub fn enumerate_labeled_capped(n: usize, cap: EnumerationCap) -> Result<Vec<AdjacencyGraph>> {
    cap.check(n)?;
    let count = 1u64 << choose2(n);
    (0..count)
        .map(|mask| AdjacencyGraph::from_pair_mask(n, mask))
        .collect()
}

/// Erdős–Rényi sample: each pair present independently with probability `p`.
pub fn er_sample(n: usize, p: f64, seed: u64) -> Result<AdjacencyGraph> {
    er_sample_with(n, p, &mut rng::root_stream(seed))
}

pub(crate) fn er_sample_with<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<AdjacencyGraph> {
    let coin = Bernoulli::new(p)
        .map_err(|_| Error::domain(format!("edge probability {p} not in [0, 1]")))?;
    let mut g = AdjacencyGraph::empty(n)?;
    for k in 0..choose2(n) {
        if coin.sample(rng) {
            g.set_pair(k, true);
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path3() -> AdjacencyGraph {
        AdjacencyGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn pair_index_round_trips() {
        for n in 2..12 {
            let mut k = 0;
            for i in 1..n {
                for j in (i + 1)..=n {
                    assert_eq!(pair_index(n, i, j), k);
                    assert_eq!(pair_at(n, k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, choose2(n));
        }
    }

    #[test]
    fn restrict_examples() {
        let g = path3();
        assert_eq!(g.restrict(3).unwrap(), g);
        let r = g.restrict(2).unwrap();
        assert_eq!(r, AdjacencyGraph::from_edges(2, &[(1, 2)]).unwrap());
        assert_eq!(g.restrict(1).unwrap().edge_count(), 0);
        assert!(matches!(g.restrict(0), Err(Error::Domain(_))));
        assert!(matches!(g.restrict(4), Err(Error::Domain(_))));
    }

    #[test]
    fn apply_map_examples() {
        let g = path3();
        let id = InjectiveMap::identity(2).unwrap();
        assert_eq!(g.apply_map(&id).unwrap(), g.restrict(2).unwrap());
        let phi = InjectiveMap::new(vec![3, 1], 3).unwrap();
        assert_eq!(
            g.apply_map(&phi).unwrap(),
            AdjacencyGraph::empty(2).unwrap()
        );
        let out_of_range = InjectiveMap::new(vec![1, 4], 4).unwrap();
        assert!(matches!(g.apply_map(&out_of_range), Err(Error::Domain(_))));
    }

    #[test]
    fn injective_map_rejects_repeats_and_range() {
        assert!(InjectiveMap::new(vec![1, 1], 3).is_err());
        assert!(InjectiveMap::new(vec![0, 1], 3).is_err());
        assert!(InjectiveMap::new(vec![1, 4], 3).is_err());
    }

    #[test]
    fn project_examples() {
        let k4 = AdjacencyGraph::complete(4).unwrap();
        assert_eq!(k4.project(4), k4);
        assert_eq!(k4.project(9), k4);
        assert_eq!(k4.project(1), AdjacencyGraph::empty(4).unwrap());
        assert_eq!(
            k4.project(2),
            AdjacencyGraph::from_edges(4, &[(1, 2)]).unwrap()
        );
    }

    #[test]
    fn sym_diff_examples() {
        let g = path3();
        assert_eq!(g.sym_diff_count(&g).unwrap(), 0);
        let f = AdjacencyGraph::from_edges(3, &[(1, 2)]).unwrap();
        let e = AdjacencyGraph::empty(3).unwrap();
        assert_eq!(f.sym_diff_count(&e).unwrap(), 1);
        for n in 1..9 {
            let k = AdjacencyGraph::complete(n).unwrap();
            let e = AdjacencyGraph::empty(n).unwrap();
            assert_eq!(k.sym_diff_count(&e).unwrap(), n * (n - 1) / 2);
        }
        assert!(g
            .sym_diff_count(&AdjacencyGraph::empty(4).unwrap())
            .is_err());
    }

    #[test]
    fn enumeration_counts_and_cap() {
        assert_eq!(enumerate_labeled(1).unwrap().len(), 1);
        assert_eq!(enumerate_labeled(2).unwrap().len(), 2);
        assert_eq!(enumerate_labeled(4).unwrap().len(), 64);
        assert_eq!(enumerate_labeled(5).unwrap().len(), 1024);
        assert!(matches!(enumerate_labeled(6), Err(Error::Refused(_))));
        assert_eq!(
            enumerate_labeled_capped(6, EnumerationCap::Extended)
                .unwrap()
                .len(),
            32768
        );
        assert!(enumerate_labeled_capped(7, EnumerationCap::Extended).is_err());
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        let all = enumerate_labeled(4).unwrap();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), all.len());
        for seed in 0..50 {
            let g = er_sample(4, 0.5, seed).unwrap();
            assert!(set.contains(&g));
            assert_eq!(all[g.pair_mask().unwrap() as usize], g);
        }
    }

    #[test]
    fn er_sample_extremes_and_moments() {
        assert_eq!(er_sample(30, 0.0, 1).unwrap().edge_count(), 0);
        assert_eq!(
            er_sample(30, 1.0, 1).unwrap(),
            AdjacencyGraph::complete(30).unwrap()
        );
        assert!(er_sample(5, 1.5, 1).is_err());
        let pairs = choose2(200) as f64;
        let mean = 0.3 * pairs;
        let sd = (pairs * 0.3 * 0.7).sqrt();
        for seed in 0..5 {
            let e = er_sample(200, 0.3, seed).unwrap().edge_count() as f64;
            assert!((e - mean).abs() <= 4.0 * sd, "seed {seed}: {e} vs {mean}");
        }
        assert_eq!(
            er_sample(50, 0.4, 9).unwrap(),
            er_sample(50, 0.4, 9).unwrap()
        );
    }

    #[test]
    fn edge_list_round_trip_and_errors() {
        let g = er_sample(12, 0.4, 3).unwrap();
        assert_eq!(
            AdjacencyGraph::parse_edge_list(&g.to_edge_list()).unwrap(),
            g
        );
        let dup = "n 3\n1 2\n1 2\n";
        assert!(matches!(
            AdjacencyGraph::parse_edge_list(dup),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(AdjacencyGraph::parse_edge_list("n 3\n2 1\n").is_err());
        assert!(AdjacencyGraph::parse_edge_list("n 3\n1 4\n").is_err());
        assert!(AdjacencyGraph::parse_edge_list("3\n").is_err());
    }

    fn arb_graph(n: usize) -> impl Strategy<Value = AdjacencyGraph> {
        any::<u64>().prop_map(move |seed| er_sample(n, 0.5, seed).unwrap())
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = InjectiveMap> {
        Just((1..=n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |v| InjectiveMap::new(v, n).unwrap())
    }

    proptest! {
        #[test]
        fn relabeling_composes(g in arb_graph(9), s in arb_perm(9), t in arb_perm(9)) {
            let lhs = g.apply_map(&s).unwrap().apply_map(&t).unwrap();
            let rhs = g.apply_map(&s.compose(&t).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(g.apply_map(&s).unwrap().edge_count(), g.edge_count());
            let back = g.apply_map(&s).unwrap().apply_map(&s.inverse().unwrap()).unwrap();
            prop_assert_eq!(back, g);
        }

        #[test]
        fn projection_idempotent_and_monotone(g in arb_graph(12), a in 1usize..14, b in 1usize..14) {
            let (m1, m2) = (a.min(b), a.max(b));
            prop_assert_eq!(g.project(m1).project(m1), g.project(m1));
            let small = g.project(m1);
            let large = g.project(m2);
            prop_assert!(small.edges().all(|(i, j)| large.has_edge(i, j)));
        }

        #[test]
        fn sym_diff_is_a_metric(f in arb_graph(10), g in arb_graph(10), h in arb_graph(10)) {
            let d = |x: &AdjacencyGraph, y: &AdjacencyGraph| x.sym_diff_count(y).unwrap();
            prop_assert_eq!(d(&f, &g), d(&g, &f));
            prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
            prop_assert_eq!(d(&f, &f), 0);
        }

        #[test]
        fn restrict_agrees_with_identity_injection(g in arb_graph(10), n in 1usize..=10) {
            let id = InjectiveMap::identity(n).unwrap();
            prop_assert_eq!(g.restrict(n).unwrap(), g.apply_map(&id).unwrap());
        }
    }
}
