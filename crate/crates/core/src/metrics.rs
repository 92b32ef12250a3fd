//! Distances between graphs on a common finite vertex window: the edit
//! density `J_n`, the prefix-agreement metric, permutation averages of a
//! two-graph functional, and the edge-density statistic `T_n`.

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{choose2, AdjacencyGraph, InjectiveMap};
use crate::rng;
use crate::stats::McEstimate;

/// Values of a quantity along increasing truncation levels, with a flag for
/// whether the last two values agree to within `tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub levels: Vec<usize>,
    pub values: Vec<f64>,
    pub converged: bool,
    /// `|values[last] - values[last-1]|`; absent with a single level.
    pub last_delta: Option<f64>,
    pub tolerance: f64,
}

impl ConvergenceReport {
    pub fn new(levels: Vec<usize>, values: Vec<f64>, tolerance: f64) -> Self {
        let last_delta = match values.as_slice() {
            [.., a, b] => Some((b - a).abs()),
            _ => None,
        };
        ConvergenceReport {
            converged: last_delta.is_some_and(|d| d <= tolerance),
            levels,
            values,
            last_delta,
            tolerance,
        }
    }

    /// Working estimate of the limit: the value at the deepest level.
    pub fn estimate(&self) -> f64 {
        *self.values.last().expect("reports always hold a level")
    }

    /// Successive absolute differences.
    pub fn deltas(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .collect()
    }
}

fn check_levels(levels: &[usize], max: usize, min: usize) -> Result<()> {
    if levels.is_empty() {
        return Err(Error::domain("at least one truncation level is required"));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!(
            "levels must be strictly increasing, got {levels:?}"
        )));
    }
    if levels[0] < min || *levels.last().unwrap() > max {
        return Err(Error::domain(format!(
            "levels {levels:?} must lie in {min}..={max}"
        )));
    }
    Ok(())
}

/// `J_n(F, G) = 2 |F Δ G| / (n (n-1))`: the fraction of ordered vertex pairs
/// on which the adjacency matrices differ.
pub fn edit_density(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<f64> {
    let n = f.n_vertices();
    if n < 2 {
        return Err(Error::domain("edit density needs at least two vertices"));
    }
    let diff = f.sym_diff_count(g)?;
    Ok(diff as f64 / choose2(n) as f64)
}

/// Exact rational edit density.
pub fn edit_density_ratio(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<Ratio<u64>> {
    let n = f.n_vertices();
    if n < 2 {
        return Err(Error::domain("edit density needs at least two vertices"));
    }
    let diff = f.sym_diff_count(g)?;
    Ok(Ratio::new(diff as u64, choose2(n) as u64))
}

/// `J_n(F|_n, G|_n)` along `levels`.
pub fn edit_density_profile(
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    levels: &[usize],
    tolerance: f64,
) -> Result<ConvergenceReport> {
    if f.n_vertices() != g.n_vertices() {
        return Err(Error::domain("graphs must share a vertex count"));
    }
    check_levels(levels, f.n_vertices(), 2)?;
    let values = levels
        .iter()
        .map(|&n| edit_density(&f.restrict(n)?, &g.restrict(n)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new(levels.to_vec(), values, tolerance))
}

/// Largest `n` with `F|_n = G|_n`; the full vertex count when the graphs are
/// equal on the whole window.
pub fn prefix_agreement(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<usize> {
    let n = f.n_vertices();
    if n != g.n_vertices() {
        return Err(Error::domain("graphs must share a vertex count"));
    }
    for j in 2..=n {
        if (1..j).any(|i| f.has_edge(i, j) != g.has_edge(i, j)) {
            return Ok(j - 1);
        }
    }
    Ok(n)
}

/// `1 / prefix_agreement`, or `0` for graphs identical on the window.
pub fn prefix_metric(f: &AdjacencyGraph, g: &AdjacencyGraph) -> Result<f64> {
    if f == g {
        return Ok(0.0);
    }
    Ok(1.0 / prefix_agreement(f, g)? as f64)
}

/// Value of `h(F^σ|_m, G^σ|_m)` for one permutation `σ` of `[m]`.
fn permuted_value<H>(
    h: &H,
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    sigma: &InjectiveMap,
) -> Result<f64>
where
    H: Fn(&AdjacencyGraph, &AdjacencyGraph) -> f64,
{
    Ok(h(&f.apply_map(sigma)?, &g.apply_map(sigma)?))
}

fn check_perm_args(f: &AdjacencyGraph, g: &AdjacencyGraph, m: usize) -> Result<()> {
    if f.n_vertices() != g.n_vertices() {
        return Err(Error::domain("graphs must share a vertex count"));
    }
    if m == 0 || m > f.n_vertices() {
        return Err(Error::domain(format!(
            "permutation size {m} outside 1..={}",
            f.n_vertices()
        )));
    }
    Ok(())
}

/// Largest `m` for which [`perm_average`] enumerates all of `perm[m]`.
pub const EXACT_PERMUTATION_LIMIT: usize = 7;

/// Average of `h(F^σ|_m, G^σ|_m)` over permutations `σ` of `[m]`: exact for
/// `m <= 7`, otherwise a Monte Carlo mean over `k` uniform draws.
pub fn perm_average<H>(
    h: H,
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<McEstimate>
where
    H: Fn(&AdjacencyGraph, &AdjacencyGraph) -> f64 + Sync,
{
    if m <= EXACT_PERMUTATION_LIMIT {
        perm_average_exact(h, f, g, m)
    } else {
        perm_average_mc(h, f, g, m, k, seed)
    }
}

/// Exact average over all `m!` permutations (Heap's algorithm).
pub fn perm_average_exact<H>(
    h: H,
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    m: usize,
) -> Result<McEstimate>
where
    H: Fn(&AdjacencyGraph, &AdjacencyGraph) -> f64,
{
    check_perm_args(f, g, m)?;
    if m > EXACT_PERMUTATION_LIMIT {
        return Err(Error::refused(format!(
            "exact enumeration of {m}! permutations exceeds the limit m <= {EXACT_PERMUTATION_LIMIT}"
        )));
    }
    let (fm, gm) = (f.restrict(m)?, g.restrict(m)?);
    let mut perm: Vec<usize> = (1..=m).collect();
    let mut c = vec![0usize; m];
    let mut total = permuted_value(&h, &fm, &gm, &InjectiveMap::new(perm.clone(), m)?)?;
    let mut count = 1u64;
    let mut i = 0;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            total += permuted_value(&h, &fm, &gm, &InjectiveMap::new(perm.clone(), m)?)?;
            count += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(McEstimate::exact(total / count as f64))
}

/// Per-replicate values behind [`perm_average_mc`]; replicate `r` draws its
/// permutation from stream `(seed, r)`.
pub fn perm_samples<H>(
    h: H,
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<f64>>
where
    H: Fn(&AdjacencyGraph, &AdjacencyGraph) -> f64 + Sync,
{
    check_perm_args(f, g, m)?;
    if k == 0 {
        return Err(Error::domain("at least one permutation sample is required"));
    }
    let (fm, gm) = (f.restrict(m)?, g.restrict(m)?);
    (0..k as u64)
        .into_par_iter()
        .map(|r| {
            let sigma = InjectiveMap::random_permutation(m, &mut rng::stream(seed, r));
            permuted_value(&h, &fm, &gm, &sigma)
        })
        .collect()
}

/// Monte Carlo permutation average with `k` independent uniform draws.
pub fn perm_average_mc<H>(
    h: H,
    f: &AdjacencyGraph,
    g: &AdjacencyGraph,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<McEstimate>
where
    H: Fn(&AdjacencyGraph, &AdjacencyGraph) -> f64 + Sync,
{
    Ok(McEstimate::from_samples(&perm_samples(
        h, f, g, m, k, seed,
    )?))
}

/// `E[prefix_metric^α]` for a difference graph distributed as `ER(p)` on
/// `n_max` vertices, truncated at `n_max`:
/// `Σ_{n=1}^{n_max} n^{-α} (1-p)^{C(n,2)} (1 - (1-p)^n)`.
pub fn prefix_series(p: f64, alpha: f64, n_max: usize) -> f64 {
    let q = 1.0 - p;
    (1..=n_max)
        .map(|n| {
            let nf = n as f64;
            nf.powf(-alpha) * q.powf(choose2(n) as f64) * (1.0 - q.powf(nf))
        })
        .sum()
}

/// `Σ_{n=1}^{n_max} n^{1-α}`.
pub fn harmonic_constant(alpha: f64, n_max: usize) -> f64 {
    (1..=n_max).map(|n| (n as f64).powf(1.0 - alpha)).sum()
}

/// `T_n = edges(X|_n) / C(n, 2)` along `levels`.
pub fn slln_statistic(
    x: &AdjacencyGraph,
    levels: &[usize],
    tolerance: f64,
) -> Result<ConvergenceReport> {
    check_levels(levels, x.n_vertices(), 2)?;
    let values = levels
        .iter()
        .map(|&n| Ok(x.restrict(n)?.edge_count() as f64 / choose2(n) as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::new(levels.to_vec(), values, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::er_sample;
    use proptest::prelude::*;

    fn g(n: usize, edges: &[(usize, usize)]) -> AdjacencyGraph {
        AdjacencyGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn edit_density_examples() {
        let a = er_sample(10, 0.5, 1).unwrap();
        assert_eq!(edit_density(&a, &a).unwrap(), 0.0);
        let f = g(3, &[(1, 2)]);
        let e = AdjacencyGraph::empty(3).unwrap();
        assert_eq!(edit_density_ratio(&f, &e).unwrap(), Ratio::new(1, 3));
        assert!((edit_density(&f, &e).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        for n in 2..10 {
            let k = AdjacencyGraph::complete(n).unwrap();
            let e = AdjacencyGraph::empty(n).unwrap();
            assert_eq!(edit_density(&k, &e).unwrap(), 1.0);
        }
        let one = AdjacencyGraph::empty(1).unwrap();
        assert!(edit_density(&one, &one).is_err());
    }

    #[test]
    fn profile_on_identical_graphs_is_zero() {
        let a = er_sample(32, 0.4, 2).unwrap();
        let r = edit_density_profile(&a, &a, &[4, 8, 16, 32], 1e-9).unwrap();
        assert!(r.values.iter().all(|&v| v == 0.0));
        assert!(r.converged);
        assert!(edit_density_profile(&a, &a, &[], 1e-9).is_err());
        assert!(edit_density_profile(&a, &a, &[8, 4], 1e-9).is_err());
    }

    #[test]
    fn profile_levels_match_direct_recomputation() {
        let f = er_sample(8, 0.5, 11).unwrap();
        let h = er_sample(8, 0.5, 12).unwrap();
        let r = edit_density_profile(&f, &h, &[2, 4, 8], 0.0).unwrap();
        for (&n, &v) in r.levels.iter().zip(&r.values) {
            // Independent count over ordered pairs.
            let mut diff = 0;
            for i in 1..=n {
                for j in 1..=n {
                    if i != j && f.has_edge(i, j) != h.has_edge(i, j) {
                        diff += 1;
                    }
                }
            }
            assert_eq!(v, diff as f64 / (n * (n - 1)) as f64);
        }
    }

    #[test]
    fn profile_converges_to_difference_density() {
        let n = 512;
        let f = er_sample(n, 0.5, 21).unwrap();
        let d = er_sample(n, 0.2, 22).unwrap();
        let h = f.sym_diff(&d).unwrap();
        let r = edit_density_profile(&f, &h, &[64, 128, 256, 512], 0.01).unwrap();
        let sd = (0.2 * 0.8 / choose2(n) as f64).sqrt();
        assert!((r.estimate() - 0.2).abs() <= 3.0 * sd, "{}", r.estimate());
        assert!(r.converged);
    }

    #[test]
    fn prefix_examples() {
        let a = er_sample(9, 0.5, 5).unwrap();
        assert_eq!(prefix_agreement(&a, &a).unwrap(), 9);
        assert_eq!(prefix_metric(&a, &a).unwrap(), 0.0);
        let b = a.with_edge(1, 2, !a.has_edge(1, 2)).unwrap();
        assert_eq!(prefix_agreement(&a, &b).unwrap(), 1);
        assert_eq!(prefix_metric(&a, &b).unwrap(), 1.0);
        let c = a.with_edge(2, 5, !a.has_edge(2, 5)).unwrap();
        assert_eq!(prefix_agreement(&a, &c).unwrap(), 4);
        assert_eq!(prefix_metric(&a, &c).unwrap(), 0.25);
        let one = AdjacencyGraph::empty(1).unwrap();
        assert_eq!(prefix_agreement(&one, &one).unwrap(), 1);
    }

    #[test]
    fn perm_average_of_constant() {
        let a = er_sample(20, 0.5, 1).unwrap();
        let b = er_sample(20, 0.5, 2).unwrap();
        let e = perm_average(|_, _| 0.75, &a, &b, 5, 10, 0).unwrap();
        assert_eq!((e.mean, e.stderr), (0.75, 0.0));
        let e = perm_average(|_, _| 0.75, &a, &b, 12, 50, 0).unwrap();
        assert_eq!((e.mean, e.stderr), (0.75, 0.0));
    }

    #[test]
    fn perm_average_of_edit_density_is_invariant() {
        let a = er_sample(12, 0.5, 3).unwrap();
        let b = er_sample(12, 0.3, 4).unwrap();
        for m in 2..=7 {
            let e = perm_average(|x, y| edit_density(x, y).unwrap(), &a, &b, m, 1, 0).unwrap();
            let direct = edit_density(&a.restrict(m).unwrap(), &b.restrict(m).unwrap()).unwrap();
            assert!((e.mean - direct).abs() < 1e-12, "m = {m}");
        }
        let e = perm_average_mc(|x, y| edit_density(x, y).unwrap(), &a, &b, 12, 64, 9).unwrap();
        assert!((e.mean - edit_density(&a, &b).unwrap()).abs() < 1e-12);
        assert!(e.stderr < 1e-12);
    }

    #[test]
    fn exact_and_monte_carlo_permutation_averages_agree() {
        let a = er_sample(7, 0.5, 31).unwrap();
        let b = er_sample(7, 0.5, 32).unwrap();
        let h = |x: &AdjacencyGraph, y: &AdjacencyGraph| prefix_metric(x, y).unwrap().powi(2);
        let exact = perm_average_exact(h, &a, &b, 7).unwrap();
        let mc = perm_average_mc(h, &a, &b, 7, 10_000, 77).unwrap();
        assert!(
            (exact.mean - mc.mean).abs() <= 3.0 * mc.stderr,
            "exact {} vs mc {} ± {}",
            exact.mean,
            mc.mean,
            mc.stderr
        );
    }

    #[test]
    fn heap_enumeration_visits_every_permutation_once() {
        // Σ_σ [σ(1) = 1] / m! = 1/m when h reads the image of vertex 1 through
        // a graph whose only edges touch vertex 1 and vertex 2.
        let star = AdjacencyGraph::from_edges(5, &[(1, 2)]).unwrap();
        let empty = AdjacencyGraph::empty(5).unwrap();
        let e = perm_average_exact(
            |x, _| if x.has_edge(1, 2) { 1.0 } else { 0.0 },
            &star,
            &empty,
            5,
        )
        .unwrap();
        // P(σ maps {1,2} onto {1,2}) = 2 / (5·4).
        assert!((e.mean - 0.1).abs() < 1e-15);
    }

    #[test]
    fn prefix_power_matches_series_for_er_difference() {
        let n = 64;
        let p = 0.3;
        let alpha = 3.0;
        let base = er_sample(n, 0.5, 40).unwrap();
        let mut samples = Vec::new();
        for pair in 0..40u64 {
            let d = er_sample(n, p, 1000 + pair).unwrap();
            let other = base.sym_diff(&d).unwrap();
            samples.extend(
                perm_samples(
                    |x, y| prefix_metric(x, y).unwrap().powf(alpha),
                    &base,
                    &other,
                    n,
                    100,
                    pair,
                )
                .unwrap(),
            );
        }
        let e = McEstimate::from_samples(&samples);
        let series = prefix_series(p, alpha, n);
        assert!(
            (e.mean - series).abs() <= 3.0 * e.stderr,
            "{} vs {series} ± {}",
            e.mean,
            e.stderr
        );
    }

    #[test]
    fn slln_examples() {
        let k = AdjacencyGraph::complete(40).unwrap();
        let r = slln_statistic(&k, &[2, 10, 40], 0.0).unwrap();
        assert!(r.values.iter().all(|&v| v == 1.0));
        let e = AdjacencyGraph::empty(40).unwrap();
        assert!(slln_statistic(&e, &[2, 10, 40], 0.0)
            .unwrap()
            .values
            .iter()
            .all(|&v| v == 0.0));
        let x = er_sample(512, 0.4, 8).unwrap();
        let r = slln_statistic(&x, &[64, 128, 256, 512], 0.05).unwrap();
        let sd = (0.4 * 0.6 / choose2(512) as f64).sqrt();
        assert!((r.estimate() - 0.4).abs() <= 4.0 * sd);
        assert!(slln_statistic(&x, &[1, 4], 0.0).is_err());
    }

    fn arb_graph(n: usize) -> impl Strategy<Value = AdjacencyGraph> {
        (any::<u64>(), 0.05f64..0.95).prop_map(move |(s, p)| er_sample(n, p, s).unwrap())
    }

    proptest! {
        #[test]
        fn edit_density_pseudometric(f in arb_graph(11), g in arb_graph(11), h in arb_graph(11)) {
            let d = |x: &AdjacencyGraph, y: &AdjacencyGraph| edit_density_ratio(x, y).unwrap();
            prop_assert_eq!(d(&f, &g), d(&g, &f));
            prop_assert!(d(&f, &h) <= d(&f, &g) + d(&g, &h));
            prop_assert_eq!(d(&f, &f), Ratio::new(0, 1));
        }

        #[test]
        fn edit_density_relabeling_invariant(f in arb_graph(11), g in arb_graph(11), seed in any::<u64>()) {
            let s = InjectiveMap::random_permutation(11, &mut rng::root_stream(seed));
            prop_assert_eq!(
                edit_density_ratio(&f.apply_map(&s).unwrap(), &g.apply_map(&s).unwrap()).unwrap(),
                edit_density_ratio(&f, &g).unwrap()
            );
        }

        #[test]
        fn prefix_metric_ultrametric(f in arb_graph(9), g in arb_graph(9), h in arb_graph(9)) {
            let d = |x: &AdjacencyGraph, y: &AdjacencyGraph| prefix_metric(x, y).unwrap();
            prop_assert!(d(&f, &h) <= d(&f, &g).max(d(&g, &h)));
            prop_assert_eq!(d(&f, &g), d(&g, &f));
        }

        #[test]
        fn prefix_metric_monotone_under_projection(f in arb_graph(10), g in arb_graph(10)) {
            let mut prev = 0.0;
            for m in 1..=10 {
                let v = prefix_metric(&f.project(m), &g.project(m)).unwrap();
                prop_assert!(v >= prev);
                prev = v;
            }
            prop_assert_eq!(prev, prefix_metric(&f, &g).unwrap());
        }
    }
}
