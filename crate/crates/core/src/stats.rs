//! Small statistics toolbox for the verification drivers: confidence
//! intervals, a Poisson goodness-of-fit test, and a two-sample
//! Kolmogorov–Smirnov test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Monte Carlo estimate with a normal-theory confidence interval.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateWithCI {
    pub mean: f64,
    pub count: usize,
    pub std_error: f64,
    /// Two-sided confidence level, e.g. `0.99`.
    pub level: f64,
    pub half_width: f64,
}

impl EstimateWithCI {
    pub fn from_samples(samples: &[f64], level: f64) -> Self {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0)
        } else {
            0.0
        };
        let std_error = (var / n as f64).sqrt();
        let half_width = normal_quantile(0.5 + level / 2.0) * std_error;
        EstimateWithCI {
            mean,
            count: n,
            std_error,
            level,
            half_width,
        }
    }
}

/// Standard normal quantile.
pub fn normal_quantile(p: f64) -> f64 {
    Normal::new(0.0, 1.0).unwrap().inverse_cdf(p)
}

/// Upper tail of the chi-squared distribution.
pub fn chi_squared_sf(stat: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

/// Poisson pmf through the log-gamma function (stable for large means).
pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    (k as f64 * mean.ln() - mean - statrs::function::gamma::ln_gamma(k as f64 + 1.0)).exp()
}

/// Pearson chi-squared goodness-of-fit of observed counts against a Poisson
/// law with known mean; bins with expected count below 5 are pooled into
/// their neighbors. Returns the p-value.
pub fn poisson_gof_pvalue(observed: &[u64], mean: f64) -> Result<f64> {
    let n = observed.len();
    if n == 0 {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let max_k = *observed.iter().max().unwrap() as usize;
    let mut histogram = vec![0usize; max_k + 1];
    for &k in observed {
        histogram[k as usize] += 1;
    }
    // expected counts per value, with an overflow bin at the end
    let mut expected: Vec<f64> = (0..=max_k as u64)
        .map(|k| n as f64 * poisson_pmf(k, mean))
        .collect();
    let tail = n as f64 - expected.iter().sum::<f64>();
    expected.push(tail.max(0.0));
    let mut observed_f: Vec<f64> = histogram.iter().map(|&c| c as f64).collect();
    observed_f.push(0.0);

    // pool left-to-right so every bin has expected mass >= 5
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut acc = (0.0, 0.0);
    for (o, e) in observed_f.iter().zip(&expected) {
        acc.0 += o;
        acc.1 += e;
        if acc.1 >= 5.0 {
            bins.push(acc);
            acc = (0.0, 0.0);
        }
    }
    if acc.1 > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += acc.0;
                last.1 += acc.1;
            }
            None => bins.push(acc),
        }
    }
    if bins.len() < 2 {
        return Err(Error::InvalidParameter(
            "not enough occupied bins for a chi-squared test".into(),
        ));
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    Ok(chi_squared_sf(stat, bins.len() as f64 - 1.0))
}

/// Two-sample Kolmogorov–Smirnov test; returns `(statistic, p_value)` using
/// the asymptotic Kolmogorov distribution with Stephens' small-sample
/// correction.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("empty sample in KS test".into()));
    }
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
    xb.sort_by(|p, q| p.partial_cmp(q).unwrap_or(std::cmp::Ordering::Equal));
    let (na, nb) = (xa.len(), xb.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        let fa = i as f64 / na as f64;
        let fb = j as f64 / nb as f64;
        d = d.max((fa - fb).abs());
    }
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok((d, kolmogorov_sf(lambda)))
}

/// Survival function of the Kolmogorov distribution,
/// `Q(x) = 2 sum_k (-1)^{k-1} exp(-2 k^2 x^2)`.
fn kolmogorov_sf(x: f64) -> f64 {
    if x < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64).powi(2) * x * x).exp();
        sum += sign * term;
        sign = -sign;
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Sample Pearson correlation.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()) as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sab = 0.0;
    let mut sa = 0.0;
    let mut sb = 0.0;
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        sa += (x - ma).powi(2);
        sb += (y - mb).powi(2);
    }
    if sa == 0.0 || sb == 0.0 {
        0.0
    } else {
        sab / (sa * sb).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_distr::Distribution;

    #[test]
    fn normal_quantile_reference_values() {
        assert!((normal_quantile(0.975) - 1.959964).abs() < 1e-5);
        assert!((normal_quantile(0.995) - 2.575829).abs() < 1e-5);
    }

    #[test]
    fn estimate_ci_width() {
        let samples: Vec<f64> = (0..100).map(|i| (i % 10) as f64).collect();
        let e = EstimateWithCI::from_samples(&samples, 0.99);
        assert!((e.mean - 4.5).abs() < 1e-12);
        assert!(e.half_width > e.std_error * 2.5);
    }

    #[test]
    fn poisson_gof_accepts_poisson_rejects_shifted() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pois = rand_distr::Poisson::new(12.0).unwrap();
        let counts: Vec<u64> = (0..20_000).map(|_| pois.sample(&mut rng) as u64).collect();
        let p_ok = poisson_gof_pvalue(&counts, 12.0).unwrap();
        assert!(p_ok > 0.01, "p={p_ok}");
        let p_bad = poisson_gof_pvalue(&counts, 13.0).unwrap();
        assert!(p_bad < 1e-6, "p={p_bad}");
    }

    #[test]
    fn ks_same_and_different() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let a: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>()).collect();
        let (_, p_self) = ks_two_sample(&a, &a).unwrap();
        assert!(p_self > 0.999);
        let b: Vec<f64> = (0..2000).map(|_| rng.gen::<f64>() + 0.1).collect();
        let (_, p_diff) = ks_two_sample(&a, &b).unwrap();
        assert!(p_diff < 1e-4);
    }
}
