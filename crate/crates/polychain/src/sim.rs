//! Monte Carlo validation: sample trajectories from a chain and estimate
//! the stationary distribution and mean return times empirically.
//!
//! The generator is ChaCha8 (a counter-based stream cipher RNG), seeded
//! explicitly, so runs are bit-identical across platforms. Independent
//! trajectories take the same seed with distinct stream numbers.

use crate::chains::StochasticChain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Occupation and first-return statistics of one sampled trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub steps: u64,
    pub start_state: usize,
    pub seed: u64,
    /// Fraction of post-transition time spent in each state; sums to one.
    pub empirical_distribution: Vec<f64>,
    /// Mean gap between consecutive visits per state; NaN when the state
    /// was visited at most once.
    pub empirical_return_times: Vec<f64>,
    /// Standard error of the mean return time per state (NaN when fewer
    /// than two return intervals were observed).
    pub return_time_se: Vec<f64>,
    /// Number of times each state was occupied after a transition.
    pub visit_counts: Vec<u64>,
}

/// Streaming sampler over the chain's states by inverse-CDF draws per row.
pub struct Walk {
    cdf: Vec<Vec<f64>>,
    state: usize,
    rng: ChaCha8Rng,
}

impl Walk {
    /// Trajectory starting at `start` (0-based), driven by `seed` on the
    /// given stream number.
    pub fn new(chain: &StochasticChain, start: usize, seed: u64, stream: u64) -> Self {
        assert!(start < chain.m, "start state out of range");
        let m = chain.m;
        let mut cdf = Vec::with_capacity(m);
        for i in 0..m {
            let mut acc = 0.0;
            let mut row = Vec::with_capacity(m);
            for j in 0..m {
                acc += chain.p[(i, j)];
                row.push(acc);
            }
            row[m - 1] = 1.0;
            cdf.push(row);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Walk {
            cdf,
            state: start,
            rng,
        }
    }

    pub fn state(&self) -> usize {
        self.state
    }
}

impl Iterator for Walk {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let u: f64 = self.rng.gen();
        let row = &self.cdf[self.state];
        let mut next = row.len() - 1;
        for (j, &edge) in row.iter().enumerate() {
            if u < edge {
                next = j;
                break;
            }
        }
        self.state = next;
        Some(next)
    }
}

/// Sample `steps` transitions from `start` and accumulate occupation
/// frequencies and first-return statistics. Deterministic given `seed`
/// (trajectory stream 0).
pub fn simulate(chain: &StochasticChain, start: usize, steps: u64, seed: u64) -> SimReport {
    let m = chain.m;
    let mut visits = vec![0u64; m];
    let mut last_visit = vec![u64::MAX; m];
    let mut interval_count = vec![0u64; m];
    let mut interval_sum = vec![0.0f64; m];
    let mut interval_sumsq = vec![0.0f64; m];
    last_visit[start] = 0;
    let mut walk = Walk::new(chain, start, seed, 0);
    for t in 1..=steps {
        let s = walk.next().expect("walk is infinite");
        visits[s] += 1;
        if last_visit[s] != u64::MAX {
            let gap = (t - last_visit[s]) as f64;
            interval_count[s] += 1;
            interval_sum[s] += gap;
            interval_sumsq[s] += gap * gap;
        }
        last_visit[s] = t;
    }
    let empirical_distribution = visits.iter().map(|&v| v as f64 / steps as f64).collect();
    let mut empirical_return_times = vec![f64::NAN; m];
    let mut return_time_se = vec![f64::NAN; m];
    for s in 0..m {
        let n = interval_count[s] as f64;
        if interval_count[s] >= 1 {
            let mean = interval_sum[s] / n;
            empirical_return_times[s] = mean;
            if interval_count[s] >= 2 {
                let var = (interval_sumsq[s] - n * mean * mean) / (n - 1.0);
                return_time_se[s] = (var.max(0.0) / n).sqrt();
            }
        }
    }
    SimReport {
        steps,
        start_state: start,
        seed,
        empirical_distribution,
        empirical_return_times,
        return_time_se,
        visit_counts: visits,
    }
}
