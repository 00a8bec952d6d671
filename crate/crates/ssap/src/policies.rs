//! Comparison deployment strategies behind one interface.
//!
//! Every policy consumes a reward sequence of length N and returns exactly
//! R strictly increasing 1-based deployment indices. The partitioned
//! variants first split the stages into R contiguous blocks of near-equal
//! size and commit one deployment per block.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::distributions::Prior;
use crate::thresholds::{compute_thresholds, run_online, SsapError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("policy '{0}' requires a prior distribution")]
    MissingPrior(&'static str),
    #[error("policy 'random' requires a seed")]
    MissingSeed,
    #[error("infeasible: {robots} deployments over {stages} stages")]
    Infeasible { stages: usize, robots: usize },
    #[error(transparent)]
    Threshold(#[from] SsapError),
}

/// The deployment strategies under comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyKind {
    /// Threshold policy over the whole sequence, no partitions.
    Ssap,
    /// Offline: top R rewards with full foreknowledge.
    Oracle,
    /// Offline: best reward within each partition.
    PartitionOracle,
    /// Single-deployment threshold policy within each partition.
    PartitionCayleyMoser,
    /// Observe-then-commit 1/e rule within each partition; prior-free.
    PartitionSecretary,
    /// One uniformly random index per partition.
    Random,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 6] = [
        PolicyKind::Ssap,
        PolicyKind::Oracle,
        PolicyKind::PartitionOracle,
        PolicyKind::PartitionCayleyMoser,
        PolicyKind::PartitionSecretary,
        PolicyKind::Random,
    ];

    /// Stable CLI identifier.
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Ssap => "ssap",
            PolicyKind::Oracle => "oracle",
            PolicyKind::PartitionOracle => "oracle-p",
            PolicyKind::PartitionCayleyMoser => "cm-p",
            PolicyKind::PartitionSecretary => "csp-p",
            PolicyKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<PolicyKind> {
        Self::ALL.into_iter().find(|k| k.label() == s)
    }

    pub fn requires_prior(self) -> bool {
        matches!(self, PolicyKind::Ssap | PolicyKind::PartitionCayleyMoser)
    }

    pub fn requires_seed(self) -> bool {
        matches!(self, PolicyKind::Random)
    }
}

/// A policy plus whatever inputs it needs. Pure given (sequence, prior,
/// seed), so runs are replayable.
#[derive(Clone)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub prior: Option<Arc<dyn Prior>>,
    pub seed: Option<u64>,
}

impl PolicySpec {
    pub fn new(kind: PolicyKind) -> Self {
        PolicySpec {
            kind,
            prior: None,
            seed: None,
        }
    }

    pub fn with_prior(mut self, prior: Arc<dyn Prior>) -> Self {
        self.prior = Some(prior);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Run the policy over `sequence`, committing `n_robots` deployments.
    pub fn deployments(&self, sequence: &[f64], n_robots: usize) -> Result<Vec<usize>, PolicyError> {
        let prior = || {
            self.prior
                .as_deref()
                .ok_or(PolicyError::MissingPrior(self.kind.label()))
        };
        match self.kind {
            PolicyKind::Ssap => ssap_policy(sequence, prior()?, n_robots),
            PolicyKind::Oracle => oracle(sequence, n_robots),
            PolicyKind::PartitionOracle => partition_oracle(sequence, n_robots),
            PolicyKind::PartitionCayleyMoser => {
                partition_cayley_moser(sequence, prior()?, n_robots)
            }
            PolicyKind::PartitionSecretary => partition_secretary(sequence, n_robots),
            PolicyKind::Random => {
                let seed = self.seed.ok_or(PolicyError::MissingSeed)?;
                random_policy(sequence, n_robots, seed)
            }
        }
    }
}

/// Contiguous 1-based index ranges covering 1..=N, one per deployment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    ranges: Vec<(usize, usize)>,
}

impl Partition {
    /// Inclusive (start, end) pairs in order.
    pub fn ranges(&self) -> &[(usize, usize)] {
        &self.ranges
    }
}

/// Split 1..=N into R contiguous ranges; the first N mod R ranges take the
/// extra element, so sizes differ by at most one.
pub fn make_partition(n_stages: usize, n_robots: usize) -> Result<Partition, PolicyError> {
    if n_robots < 1 || n_robots > n_stages {
        return Err(PolicyError::Infeasible {
            stages: n_stages,
            robots: n_robots,
        });
    }
    let base = n_stages / n_robots;
    let remainder = n_stages % n_robots;
    let mut ranges = Vec::with_capacity(n_robots);
    let mut start = 1;
    for k in 0..n_robots {
        let len = base + usize::from(k < remainder);
        ranges.push((start, start + len - 1));
        start += len;
    }
    Ok(Partition { ranges })
}

/// Offline optimum: indices of the R largest values, earliest index on
/// ties, returned in ascending order.
pub fn oracle(sequence: &[f64], n_robots: usize) -> Result<Vec<usize>, PolicyError> {
    if n_robots < 1 || n_robots > sequence.len() {
        return Err(PolicyError::Infeasible {
            stages: sequence.len(),
            robots: n_robots,
        });
    }
    let mut order: Vec<usize> = (0..sequence.len()).collect();
    order.sort_by(|&a, &b| {
        sequence[b]
            .partial_cmp(&sequence[a])
            .expect("rewards must not be NaN")
            .then(a.cmp(&b))
    });
    let mut picked: Vec<usize> = order[..n_robots].iter().map(|&i| i + 1).collect();
    picked.sort_unstable();
    Ok(picked)
}

fn argmax_one_based(sequence: &[f64], start: usize, end: usize) -> usize {
    let mut best = start;
    for j in start + 1..=end {
        if sequence[j - 1] > sequence[best - 1] {
            best = j;
        }
    }
    best
}

/// Offline per-block optimum: the best reward within each partition.
pub fn partition_oracle(sequence: &[f64], n_robots: usize) -> Result<Vec<usize>, PolicyError> {
    let partition = make_partition(sequence.len(), n_robots)?;
    Ok(partition
        .ranges()
        .iter()
        .map(|&(s, e)| argmax_one_based(sequence, s, e))
        .collect())
}

/// Single-deployment threshold policy run independently in each partition.
pub fn partition_cayley_moser(
    sequence: &[f64],
    prior: &dyn Prior,
    n_robots: usize,
) -> Result<Vec<usize>, PolicyError> {
    let partition = make_partition(sequence.len(), n_robots)?;
    let mut picked = Vec::with_capacity(n_robots);
    // Block lengths take at most two values; reuse their tables.
    let mut cache: Vec<Option<crate::thresholds::ThresholdTable>> = Vec::new();
    for &(s, e) in partition.ranges() {
        let m = e - s + 1;
        if cache.len() < m + 1 {
            cache.resize(m + 1, None);
        }
        if cache[m].is_none() {
            cache[m] = Some(compute_thresholds(prior, m, 1)?);
        }
        let table = cache[m].as_ref().unwrap();
        let (idx, _) = run_online(table, &sequence[s - 1..e])?;
        picked.push(s + idx[0] - 1);
    }
    Ok(picked)
}

/// Classic observe-then-commit rule per partition: watch the first
/// floor(m/e) values, then take the first value strictly above the observed
/// maximum; if none arrives, the block's last index is forced.
pub fn partition_secretary(sequence: &[f64], n_robots: usize) -> Result<Vec<usize>, PolicyError> {
    let partition = make_partition(sequence.len(), n_robots)?;
    let mut picked = Vec::with_capacity(n_robots);
    for &(s, e) in partition.ranges() {
        let m = e - s + 1;
        let observe = (m as f64 / std::f64::consts::E).floor() as usize;
        let mut best_seen = f64::NEG_INFINITY;
        for j in s..s + observe {
            best_seen = best_seen.max(sequence[j - 1]);
        }
        let chosen = (s + observe..=e)
            .find(|&j| sequence[j - 1] > best_seen)
            .unwrap_or(e);
        picked.push(chosen);
    }
    Ok(picked)
}

/// One uniformly random index per partition from a ChaCha8 stream seeded by
/// `seed`; the same seed always reproduces the same choices.
pub fn random_policy(sequence: &[f64], n_robots: usize, seed: u64) -> Result<Vec<usize>, PolicyError> {
    let partition = make_partition(sequence.len(), n_robots)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(partition
        .ranges()
        .iter()
        .map(|&(s, e)| rng.random_range(s..=e))
        .collect())
}

/// Threshold policy over the whole sequence.
pub fn ssap_policy(
    sequence: &[f64],
    prior: &dyn Prior,
    n_robots: usize,
) -> Result<Vec<usize>, PolicyError> {
    if n_robots < 1 || n_robots > sequence.len() {
        return Err(PolicyError::Infeasible {
            stages: sequence.len(),
            robots: n_robots,
        });
    }
    let table = compute_thresholds(prior, sequence.len(), n_robots)?;
    let (idx, _) = run_online(&table, sequence)?;
    Ok(idx)
}

/// Sum of the rewards at 1-based `indices`.
pub fn reward_of(sequence: &[f64], indices: &[usize]) -> f64 {
    indices.iter().map(|&j| sequence[j - 1]).sum()
}
