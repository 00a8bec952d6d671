//! Independent oracles shared by the integration suites. Everything here
//! recomputes expected values from first principles (explicit supports,
//! full enumeration, direct recurrences) without touching the threshold
//! recurrence under test.

#![allow(dead_code)]

use ssap::thresholds::{run_online, ThresholdTable};

/// Explicit discrete distribution as (value, probability) pairs.
pub type Support = Vec<(f64, f64)>;

/// Optimal expected reward for (stages, robots) by brute-force dynamic
/// programming over the support.
pub fn dp_value(support: &Support, n: usize, r: usize) -> f64 {
    let mut value = vec![vec![0.0; r + 1]; n + 1];
    for stages in 1..=n {
        for robots in 1..=r.min(stages) {
            let mut acc = 0.0;
            for &(x, p) in support {
                let deploy = x + value[stages - 1][robots - 1];
                let hold = if robots < stages {
                    value[stages - 1][robots]
                } else {
                    f64::NEG_INFINITY
                };
                acc += p * deploy.max(hold);
            }
            value[stages][robots] = acc;
        }
    }
    value[n][r]
}

/// Exact expected reward of the threshold policy: enumerate every length-N
/// sequence over the support, weight by its probability, and replay the
/// policy on it.
pub fn policy_expected_value(table: &ThresholdTable, support: &Support) -> f64 {
    let n = table.n_stages();
    let mut sequence = vec![0.0; n];
    fn recurse(
        table: &ThresholdTable,
        support: &Support,
        sequence: &mut Vec<f64>,
        depth: usize,
        prob: f64,
    ) -> f64 {
        if depth == sequence.len() {
            let (_, reward) = run_online(table, sequence).expect("feasible replay");
            return prob * reward;
        }
        let mut acc = 0.0;
        for &(x, p) in support {
            sequence[depth] = x;
            acc += recurse(table, support, sequence, depth + 1, prob * p);
        }
        acc
    }
    recurse(table, support, &mut sequence, 0, 1.0)
}

/// Single-deployment stopping values by the direct recurrence
/// V_1 = E[X], V_{m+1} = E[max(X, V_m)], evaluated as plain sums over the
/// support.
pub fn stopping_values(support: &Support, up_to: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(up_to);
    let mean: f64 = support.iter().map(|&(x, p)| x * p).sum();
    let mut v = mean;
    out.push(v);
    for _ in 1..up_to {
        v = support.iter().map(|&(x, p)| p * x.max(v)).sum();
        out.push(v);
    }
    out
}

/// Poisson support truncated once the pmf tail is negligible, computed with
/// plain multiplicative recurrence (no log-space shortcut shared with the
/// library).
pub fn poisson_support(lambda: f64) -> Support {
    let mut out = Vec::new();
    let mut p = (-lambda).exp();
    let mut k = 0.0;
    let mut cumulative = 0.0;
    while cumulative < 1.0 - 1e-13 {
        out.push((k, p));
        cumulative += p;
        k += 1.0;
        p *= lambda / k;
        if k > 5_000.0 {
            break;
        }
    }
    out
}
