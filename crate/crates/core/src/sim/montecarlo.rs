use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Seed of replication `rep`, derived from an independent stream of the base
/// generator so replications never share draws.
pub fn replication_seed(base: u64, rep: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(rep as u64 + 1);
    rng.next_u64()
}

/// Runs `reps` replications in parallel; results come back in replication
/// order regardless of scheduling.
pub fn run_replications<R, F>(base_seed: u64, reps: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize, u64) -> R + Sync,
{
    (0..reps)
        .into_par_iter()
        .map(|r| f(r, replication_seed(base_seed, r)))
        .collect()
}

/// Mean of Monte Carlo draws and its standard error `sd / √R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McSummary {
    pub mean: f64,
    pub se: f64,
    pub reps: usize,
}

impl McSummary {
    pub fn from_draws(draws: &[f64]) -> Self {
        let n = draws.len();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            se: (var / n as f64).sqrt(),
            reps: n,
        }
    }

    /// Distance from `truth` in standard errors.
    pub fn z(&self, truth: f64) -> f64 {
        (self.mean - truth) / self.se
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_and_reproducible() {
        let a = run_replications(5, 64, |r, s| (r, s));
        let b = run_replications(5, 64, |r, s| (r, s));
        assert_eq!(a, b);
        assert!(a.iter().enumerate().all(|(i, &(r, _))| i == r));
        let mut seeds: Vec<u64> = a.iter().map(|p| p.1).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), 64);
    }

    #[test]
    fn summary() {
        let s = McSummary::from_draws(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.se - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
    }
}
