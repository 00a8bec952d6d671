//! Optimal deployment thresholds and the online executor.
//!
//! With `n` stages remaining, the observation axis splits into intervals
//! `(a_{i-1,n}, a_{i,n}]` bounded by
//! `-inf = a_{0,n} <= a_{1,n} <= ... <= a_{n,n} = +inf`, and the optimal
//! policy deploys exactly when the observation lands in one of the top `r`
//! intervals, i.e. strictly exceeds `a_{n-r,n}`. Each interior threshold is
//! the expected value of the observation clamped to the neighboring column:
//!
//! ```text
//! a_{i,n+1} = a_{i-1,n} * P(X <= a_{i-1,n})
//!           + E[X * 1(a_{i-1,n} < X <= a_{i,n})]
//!           + a_{i,n}   * P(X > a_{i,n})
//! ```
//!
//! with the sentinel products `-inf * 0` and `+inf * 0` both zero. Only the
//! `R` thresholds above the deploy cutoff ever matter, so each column keeps
//! the window `i in max(0, n-R) ..= n` and the whole table is O(NR) cells.
//! For `R = 1` the surviving recurrence is `a_{n,n+1} = E[max(X, a_{n-1,n})]`,
//! the Cayley-Moser optimal stopping value.

use std::io::Write;

use thiserror::Error;

use crate::bound::Bound;
use crate::distributions::Prior;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsapError {
    #[error("infeasible configuration: {robots} robots over {stages} stages")]
    InfeasibleConfig { stages: usize, robots: usize },
    #[error("infeasible query: {r_remaining} robots with {n_remaining} stages remaining")]
    InfeasibleQuery { n_remaining: usize, r_remaining: usize },
    #[error("query outside table window: n_remaining={n_remaining}, r_remaining={r_remaining}")]
    OutOfRange { n_remaining: usize, r_remaining: usize },
    #[error("sequence length {actual} does not match table stages {expected}")]
    SequenceLength { expected: usize, actual: usize },
}

/// One column of the threshold window: cells `i = offset ..= offset+len-1`.
#[derive(Clone, Debug)]
struct Column {
    offset: usize,
    cells: Vec<Bound>,
}

impl Column {
    fn get(&self, i: usize) -> Option<Bound> {
        i.checked_sub(self.offset).and_then(|k| self.cells.get(k)).copied()
    }
}

/// Precomputed deployment thresholds for `n_stages` stages and `n_robots`
/// deployments. Immutable once built; share freely across threads.
#[derive(Clone, Debug)]
pub struct ThresholdTable {
    n_stages: usize,
    n_robots: usize,
    columns: Vec<Column>,
}

impl ThresholdTable {
    pub fn n_stages(&self) -> usize {
        self.n_stages
    }

    pub fn n_robots(&self) -> usize {
        self.n_robots
    }

    /// Threshold a_{i,n}, if (i, n) lies inside the stored window.
    pub fn threshold(&self, n: usize, i: usize) -> Option<Bound> {
        self.columns.get(n).and_then(|col| col.get(i))
    }

    /// Window of stored cell indices for column `n`: `lo ..= hi`.
    pub fn window(&self, n: usize) -> Option<(usize, usize)> {
        self.columns
            .get(n)
            .map(|col| (col.offset, col.offset + col.cells.len() - 1))
    }

    /// The deploy cutoff a_{n-r,n}: deploy exactly when the observation
    /// strictly exceeds it.
    pub fn deploy_threshold(&self, n_remaining: usize, r_remaining: usize) -> Result<Bound, SsapError> {
        if r_remaining == 0 || r_remaining > n_remaining {
            return Err(SsapError::InfeasibleQuery {
                n_remaining,
                r_remaining,
            });
        }
        if n_remaining > self.n_stages || r_remaining > self.n_robots {
            return Err(SsapError::OutOfRange {
                n_remaining,
                r_remaining,
            });
        }
        self.threshold(n_remaining, n_remaining - r_remaining)
            .ok_or(SsapError::OutOfRange {
                n_remaining,
                r_remaining,
            })
    }

    /// All stored cells as (n, i, threshold), column-major ascending.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Bound)> + '_ {
        self.columns.iter().enumerate().flat_map(|(n, col)| {
            col.cells
                .iter()
                .enumerate()
                .map(move |(k, &b)| (n, col.offset + k, b))
        })
    }

    /// CSV with columns `n,i,threshold`; sentinels as `-inf` / `+inf`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,i,threshold")?;
        for (n, i, b) in self.cells() {
            writeln!(w, "{n},{i},{b}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// One term of the recurrence with sentinel products resolved before any
/// multiplication.
fn recurrence_cell(prior: &dyn Prior, lo: Bound, hi: Bound) -> f64 {
    let below = match lo {
        Bound::NegInf => 0.0, // -inf * 0
        Bound::Finite(a) => a * prior.cdf(a),
        Bound::PosInf => unreachable!("lower neighbor is never the +inf diagonal"),
    };
    let inside = prior.partial_expectation(lo, hi);
    let above = match hi {
        Bound::PosInf => 0.0, // +inf * 0
        Bound::Finite(b) => b * (1.0 - prior.cdf(b)).max(0.0),
        Bound::NegInf => unreachable!("upper neighbor is never the -inf row"),
    };
    let value = below + inside + above;
    // The cell is an expectation of X clamped to [lo, hi]; pin it there so
    // the ordering invariants survive floating-point rounding.
    let value = match lo {
        Bound::Finite(a) => value.max(a),
        _ => value,
    };
    match hi {
        Bound::Finite(b) => value.min(b),
        _ => value,
    }
}

/// Compute the threshold window for `n_stages` stages and `n_robots`
/// deployments under `prior`.
///
/// Columns are filled in ascending stage count, each cell from the two
/// neighbors in the previous column. Requires `1 <= n_robots <= n_stages`.
pub fn compute_thresholds(
    prior: &dyn Prior,
    n_stages: usize,
    n_robots: usize,
) -> Result<ThresholdTable, SsapError> {
    if n_robots < 1 || n_robots > n_stages {
        return Err(SsapError::InfeasibleConfig {
            stages: n_stages,
            robots: n_robots,
        });
    }
    let mut columns = Vec::with_capacity(n_stages + 1);
    columns.push(Column {
        offset: 0,
        cells: vec![Bound::NegInf],
    });
    for n in 1..=n_stages {
        let offset = n.saturating_sub(n_robots);
        let mut cells = Vec::with_capacity(n - offset + 1);
        let prev = &columns[n - 1];
        for i in offset..=n {
            let cell = if i == n {
                Bound::PosInf
            } else if i == 0 {
                Bound::NegInf
            } else {
                let lo = prev.get(i - 1).expect("window covers lower neighbor");
                let hi = prev.get(i).expect("window covers upper neighbor");
                Bound::Finite(recurrence_cell(prior, lo, hi))
            };
            cells.push(cell);
        }
        columns.push(Column { offset, cells });
    }
    Ok(ThresholdTable {
        n_stages,
        n_robots,
        columns,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeployAction {
    Deploy,
    Hold,
}

/// Outcome of a single deploy/hold query.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeployDecision {
    pub action: DeployAction,
    pub threshold_used: Bound,
    /// The observation itself; collected only on Deploy.
    pub reward_if_deployed: f64,
}

/// Deploy/hold query with `n_remaining` stages (including the current one)
/// and `r_remaining` robots left. Deploys exactly when `x` strictly exceeds
/// the cutoff; ties hold.
pub fn decide(
    table: &ThresholdTable,
    n_remaining: usize,
    r_remaining: usize,
    x: f64,
) -> Result<DeployDecision, SsapError> {
    let threshold = table.deploy_threshold(n_remaining, r_remaining)?;
    let action = if x > threshold.as_f64() {
        DeployAction::Deploy
    } else {
        DeployAction::Hold
    };
    Ok(DeployDecision {
        action,
        threshold_used: threshold,
        reward_if_deployed: x,
    })
}

/// Mutable execution state for consuming a reward sequence one observation
/// at a time.
#[derive(Clone, Debug)]
pub struct DeploymentState {
    n_stages: usize,
    n_robots: usize,
    stage: usize,
    robots_remaining: usize,
    deployed_at: Vec<(usize, f64)>,
}

impl DeploymentState {
    pub fn new(table: &ThresholdTable) -> Self {
        DeploymentState {
            n_stages: table.n_stages(),
            n_robots: table.n_robots(),
            stage: 1,
            robots_remaining: table.n_robots(),
            deployed_at: Vec::with_capacity(table.n_robots()),
        }
    }

    /// Current stage index (1-based); the stage the next observation
    /// belongs to.
    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn robots_remaining(&self) -> usize {
        self.robots_remaining
    }

    /// (stage index, reward) per deployment so far.
    pub fn deployed_at(&self) -> &[(usize, f64)] {
        &self.deployed_at
    }

    pub fn total_reward(&self) -> f64 {
        self.deployed_at.iter().map(|&(_, x)| x).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.stage > self.n_stages
    }

    /// Feed the observation for the current stage and advance.
    pub fn step(&mut self, table: &ThresholdTable, x: f64) -> Result<DeployDecision, SsapError> {
        if self.stage > self.n_stages {
            return Err(SsapError::OutOfRange {
                n_remaining: 0,
                r_remaining: self.robots_remaining,
            });
        }
        debug_assert_eq!(self.n_robots, self.robots_remaining + self.deployed_at.len());
        let n_remaining = self.n_stages - self.stage + 1;
        let decision = if self.robots_remaining == 0 {
            // All robots spent: the remaining stages are no-ops.
            DeployDecision {
                action: DeployAction::Hold,
                threshold_used: Bound::PosInf,
                reward_if_deployed: x,
            }
        } else {
            decide(table, n_remaining, self.robots_remaining, x)?
        };
        if decision.action == DeployAction::Deploy {
            self.deployed_at.push((self.stage, x));
            self.robots_remaining -= 1;
        }
        self.stage += 1;
        Ok(decision)
    }
}

/// Run the threshold policy over a full sequence of length `n_stages`.
/// Returns the 1-based deployment indices (always exactly `n_robots` of
/// them) and the summed reward.
pub fn run_online(table: &ThresholdTable, sequence: &[f64]) -> Result<(Vec<usize>, f64), SsapError> {
    if sequence.len() != table.n_stages() {
        return Err(SsapError::SequenceLength {
            expected: table.n_stages(),
            actual: sequence.len(),
        });
    }
    let mut state = DeploymentState::new(table);
    for &x in sequence {
        state.step(table, x)?;
    }
    let indices = state.deployed_at.iter().map(|&(j, _)| j).collect();
    Ok((indices, state.total_reward()))
}
