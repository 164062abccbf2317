//! Monte Carlo estimation of sphere moments: uniform sampling via
//! normalized Gaussian vectors, deterministic given the seed.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::core::graph::WeightedGraph;
use crate::core::rng::stream_rng;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Uniform point on the real unit sphere in R^n.
pub fn sample_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point on the complex unit sphere in C^n, stored as (re, im).
pub fn sample_complex_unit_vector(rng: &mut impl Rng, n: usize) -> Vec<(f64, f64)> {
    loop {
        let v: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm2: f64 = v.iter().map(|(a, b)| a * a + b * b).sum();
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            return v.into_iter().map(|(a, b)| (a / norm, b / norm)).collect();
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// |<a, b>|^2 for complex vectors.
pub fn herm_abs2(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for ((ar, ai), (br, bi)) in a.iter().zip(b) {
        // conj(a) * b
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    re * re + im * im
}

/// Product observable prod (sigma_i . sigma_j)^{m_ij} for one configuration.
pub fn on_observable(config: &[Vec<f64>], g: &WeightedGraph) -> f64 {
    let mut acc = 1.0;
    for (i, j) in g.all_pairs() {
        let m = g.weight(i, j);
        if m > 0 {
            acc *= dot(&config[i], &config[j]).powi(m as i32);
        }
    }
    acc
}

pub fn cpn_observable(config: &[Vec<(f64, f64)>], g: &WeightedGraph) -> f64 {
    let mut acc = 1.0;
    for (i, j) in g.all_pairs() {
        let m = g.weight(i, j);
        if m > 0 {
            acc *= herm_abs2(&config[i], &config[j]).powi(m as i32);
        }
    }
    acc
}

fn run_mc(samples: u64, seed: u64, mut draw: impl FnMut() -> f64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    // Welford accumulation.
    let mut mean = 0.0f64;
    let mut m2 = 0.0f64;
    for k in 1..=samples {
        let x = draw();
        let delta = x - mean;
        mean += delta / k as f64;
        m2 += delta * (x - mean);
    }
    let stderr = if samples > 1 {
        (m2 / ((samples - 1) as f64 * samples as f64)).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(McEstimate { mean, stderr, samples, seed })
}

/// Unbiased estimate of the O(N) moment by direct sphere sampling.
pub fn on_moment_mc(g: &WeightedGraph, n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::BadInput("N must be a positive integer".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let p = g.p();
    run_mc(samples, seed, move || {
        let config: Vec<Vec<f64>> = (0..p).map(|_| sample_unit_vector(&mut rng, n as usize)).collect();
        on_observable(&config, g)
    })
}

pub fn cpn_moment_mc(g: &WeightedGraph, n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(Error::BadInput("N must be a positive integer".into()));
    }
    let mut rng = stream_rng(seed, 0);
    let p = g.p();
    run_mc(samples, seed, move || {
        let config: Vec<Vec<(f64, f64)>> =
            (0..p).map(|_| sample_complex_unit_vector(&mut rng, n as usize)).collect();
        cpn_observable(&config, g)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::exact::to_f64;
    use crate::moments::{cpn_moment, on_moment};
    use crate::core::graph::WeightedGraph;

    fn g(p: usize, upper: &[u32]) -> WeightedGraph {
        WeightedGraph::from_upper(p, upper).unwrap()
    }

    #[test]
    fn matches_exact_within_4_sigma() {
        let cases: Vec<(WeightedGraph, u32)> =
            vec![(g(2, &[2]), 3), (g(3, &[2, 2, 2]), 3), (g(2, &[4]), 2)];
        for (gg, n) in cases {
            let exact = to_f64(&on_moment(&gg, n).unwrap().value);
            let est = on_moment_mc(&gg, n, 200_000, 42).unwrap();
            assert!(
                (est.mean - exact).abs() <= 4.0 * est.stderr,
                "exact {exact} vs {est:?}"
            );
        }
        let exact = to_f64(&cpn_moment(&g(3, &[1, 1, 1]), 2).unwrap().value);
        let est = cpn_moment_mc(&g(3, &[1, 1, 1]), 2, 200_000, 43).unwrap();
        assert!((est.mean - exact).abs() <= 4.0 * est.stderr);
    }

    #[test]
    fn odd_graph_compatible_with_zero() {
        let est = on_moment_mc(&g(2, &[3]), 3, 100_000, 7).unwrap();
        assert!(est.mean.abs() <= 4.0 * est.stderr);
    }

    #[test]
    fn deterministic_given_seed() {
        let a = on_moment_mc(&g(2, &[2]), 3, 10_000, 5).unwrap();
        let b = on_moment_mc(&g(2, &[2]), 3, 10_000, 5).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = on_moment_mc(&g(2, &[2]), 3, 10_000, 6).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn unit_sphere_samples_are_normalized() {
        let mut rng = stream_rng(1, 0);
        for n in [1usize, 2, 5] {
            let v = sample_unit_vector(&mut rng, n);
            let norm2: f64 = v.iter().map(|x| x * x).sum();
            assert!((norm2 - 1.0).abs() < 1e-12);
        }
        let z = sample_complex_unit_vector(&mut rng, 3);
        let norm2: f64 = z.iter().map(|(a, b)| a * a + b * b).sum();
        assert!((norm2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(on_moment_mc(&g(2, &[2]), 3, 0, 1).is_err());
    }
}
