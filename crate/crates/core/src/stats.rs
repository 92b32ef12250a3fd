//! Monte Carlo summaries and the two-sample Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};

/// A Monte Carlo mean with its standard error. Exact computations are
/// reported with `stderr == 0` and `samples == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl McEstimate {
    pub fn exact(value: f64) -> Self {
        McEstimate {
            mean: value,
            stderr: 0.0,
            samples: 0,
        }
    }

    /// Sample mean and `sd / sqrt(k)` with the unbiased variance.
    pub fn from_samples(samples: &[f64]) -> Self {
        let k = samples.len();
        if k == 0 {
            return McEstimate {
                mean: f64::NAN,
                stderr: f64::NAN,
                samples: 0,
            };
        }
        let mean = samples.iter().sum::<f64>() / k as f64;
        let var = if k > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean,
            stderr: (var / k as f64).sqrt(),
            samples: k,
        }
    }

    /// Binomial proportion `hits / k` with stderr `sqrt(p(1-p)/k)`.
    pub fn from_proportion(hits: u64, k: u64) -> Self {
        let p = hits as f64 / k as f64;
        McEstimate {
            mean: p,
            stderr: (p * (1.0 - p) / k as f64).sqrt(),
            samples: k as usize,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.samples == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// Supremum distance between the two empirical CDFs.
    pub statistic: f64,
    /// Asymptotic two-sided p-value.
    pub p_value: f64,
    pub n1: usize,
    pub n2: usize,
}

/// Two-sample Kolmogorov–Smirnov test. Ties are handled by stepping both
/// empirical CDFs past a shared value before comparing them.
///
/// The p-value uses the Kolmogorov limit distribution evaluated at
/// `(sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D`, `ne = n1 n2 / (n1 + n2)`.
pub fn ks_two_sample(xs: &[f64], ys: &[f64]) -> KsResult {
    let mut a: Vec<f64> = xs.to_vec();
    let mut b: Vec<f64> = ys.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (n1, n2) = (a.len(), b.len());
    if n1 == 0 || n2 == 0 {
        return KsResult {
            statistic: 0.0,
            p_value: 1.0,
            n1,
            n2,
        };
    }
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n1 && j < n2 {
        let v = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < n1 && a[i] <= v {
            i += 1;
        }
        while j < n2 && b[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    let sq = ne.sqrt();
    let lambda = (sq + 0.12 + 0.11 / sq) * d;
    KsResult {
        statistic: d,
        p_value: kolmogorov_survival(lambda),
        n1,
        n2,
    }
}

/// `Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} exp(-2 k² λ²)`, clamped to `[0, 1]`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let a = -2.0 * lambda * lambda;
    let mut sum = 0.0;
    let mut sign = 1.0;
    let mut prev = 0.0_f64;
    for k in 1..=200 {
        let term = sign * (a * (k * k) as f64).exp();
        sum += term;
        if term.abs() <= 1e-12 * prev.abs() || term.abs() < 1e-300 {
            return (2.0 * sum).clamp(0.0, 1.0);
        }
        sign = -sign;
        prev = term;
    }
    // Series failed to settle: only happens for tiny λ where Q = 1.
    1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_samples_constant_has_zero_stderr() {
        let e = McEstimate::from_samples(&[0.25; 40]);
        assert_eq!(e.mean, 0.25);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn kolmogorov_survival_reference_values() {
        // Q(1.36) ≈ 0.0505 and Q(1.63) ≈ 0.0098 are the classical 5% / 1% points.
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 5e-4);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
        assert!(kolmogorov_survival(5.0) < 1e-20);
    }

    #[test]
    fn ks_identical_samples_and_disjoint_samples() {
        let xs: Vec<f64> = (0..50).map(f64::from).collect();
        let r = ks_two_sample(&xs, &xs);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        let ys: Vec<f64> = (100..150).map(f64::from).collect();
        let r = ks_two_sample(&xs, &ys);
        assert_eq!(r.statistic, 1.0);
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn ks_statistic_with_ties() {
        // CDFs at 1: 2/4 vs 1/4; at 2: 3/4 vs 3/4; at 3: 1 vs 1.
        let r = ks_two_sample(&[1.0, 1.0, 2.0, 3.0], &[1.0, 2.0, 2.0, 3.0]);
        assert!((r.statistic - 0.25).abs() < 1e-15);
    }
}
