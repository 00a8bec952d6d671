//! Histogram-backed prior over integer values.

use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{DistError, Prior};
use crate::bound::Bound;

/// Prior built from observed value counts. pmf(v) = counts[v] / total.
///
/// Loads and saves as a two-column CSV `value,count` with a header row.
#[derive(Clone, Debug)]
pub struct EmpiricalPrior {
    values: Vec<i64>,
    counts: Vec<u64>,
    total: u64,
    cdf: Vec<f64>,
    /// xpe[k] = sum_{j<=k} values[j] * pmf(values[j])
    xpe: Vec<f64>,
}

impl EmpiricalPrior {
    /// Build from (value, count) pairs. Duplicate values accumulate;
    /// zero-count entries are dropped.
    pub fn from_counts(pairs: impl IntoIterator<Item = (i64, u64)>) -> Result<Self, DistError> {
        let mut map: BTreeMap<i64, u64> = BTreeMap::new();
        for (v, c) in pairs {
            if c > 0 {
                *map.entry(v).or_insert(0) += c;
            }
        }
        if map.is_empty() {
            return Err(DistError::EmptyHistogram);
        }
        let total: u64 = map.values().sum();
        let mut values = Vec::with_capacity(map.len());
        let mut counts = Vec::with_capacity(map.len());
        let mut cdf = Vec::with_capacity(map.len());
        let mut xpe = Vec::with_capacity(map.len());
        let mut c_acc = 0.0;
        let mut x_acc = 0.0;
        for (&v, &c) in &map {
            let p = c as f64 / total as f64;
            c_acc += p;
            x_acc += v as f64 * p;
            values.push(v);
            counts.push(c);
            cdf.push(c_acc);
            xpe.push(x_acc);
        }
        Ok(EmpiricalPrior {
            values,
            counts,
            total,
            cdf,
            xpe,
        })
    }

    pub fn from_samples(samples: impl IntoIterator<Item = i64>) -> Result<Self, DistError> {
        Self::from_counts(samples.into_iter().map(|v| (v, 1)))
    }

    pub fn pmf_int(&self, v: i64) -> f64 {
        match self.values.binary_search(&v) {
            Ok(i) => self.counts[i] as f64 / self.total as f64,
            Err(_) => 0.0,
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.values.iter().copied().zip(self.counts.iter().copied())
    }

    pub fn min_value(&self) -> i64 {
        self.values[0]
    }

    pub fn max_value(&self) -> i64 {
        *self.values.last().unwrap()
    }

    /// Index of the last value <= x, if any.
    fn rank(&self, x: f64) -> Option<usize> {
        // values[i] <= x  <=>  values[i] <= floor(x)
        let fx = x.floor();
        if fx < self.values[0] as f64 {
            return None;
        }
        let k = fx as i64;
        Some(self.values.partition_point(|&v| v <= k) - 1)
    }

    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, DistError> {
        let mut pairs = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| DistError::HistogramCsv {
                line: idx + 1,
                msg: e.to_string(),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if idx == 0 {
                if trimmed != "value,count" {
                    return Err(DistError::HistogramCsv {
                        line: 1,
                        msg: format!("expected header 'value,count', got '{trimmed}'"),
                    });
                }
                continue;
            }
            let mut parts = trimmed.split(',');
            let (raw_v, raw_c) = match (parts.next(), parts.next()) {
                (Some(v), Some(c)) => (v, c),
                _ => {
                    return Err(DistError::HistogramCsv {
                        line: idx + 1,
                        msg: "expected two comma-separated fields".into(),
                    })
                }
            };
            let v: i64 = raw_v.trim().parse().map_err(|e| DistError::HistogramCsv {
                line: idx + 1,
                msg: format!("bad value: {e}"),
            })?;
            let c: u64 = raw_c.trim().parse().map_err(|e| DistError::HistogramCsv {
                line: idx + 1,
                msg: format!("bad count: {e}"),
            })?;
            pairs.push((v, c));
        }
        Self::from_counts(pairs)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "value,count")?;
        for (v, c) in self.counts() {
            writeln!(w, "{v},{c}")?;
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, DistError> {
        let file = std::fs::File::open(path).map_err(|e| DistError::HistogramCsv {
            line: 0,
            msg: format!("{}: {e}", path.display()),
        })?;
        Self::read_csv(BufReader::new(file))
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let mut file = std::fs::File::create(path)?;
        self.write_csv(&mut file)
    }
}

impl Prior for EmpiricalPrior {
    fn pmf_or_density(&self, x: f64) -> f64 {
        if x.fract() != 0.0 {
            return 0.0;
        }
        self.pmf_int(x as i64)
    }

    fn cdf(&self, x: f64) -> f64 {
        match self.rank(x) {
            Some(i) => self.cdf[i],
            None => 0.0,
        }
    }

    fn partial_expectation(&self, lo: Bound, hi: Bound) -> f64 {
        let at = |b: Bound, full: f64| -> f64 {
            match b {
                Bound::NegInf => 0.0,
                Bound::PosInf => full,
                Bound::Finite(x) => match self.rank(x) {
                    Some(i) => self.xpe[i],
                    None => 0.0,
                },
            }
        };
        let full = *self.xpe.last().unwrap();
        if hi == Bound::NegInf || lo == Bound::PosInf {
            return 0.0;
        }
        at(hi, full) - at(lo, full)
    }

    fn mean(&self) -> f64 {
        *self.xpe.last().unwrap()
    }

    fn is_discrete(&self) -> bool {
        true
    }

    fn support_hint(&self) -> Option<f64> {
        Some(self.max_value() as f64)
    }

    fn inverse_cdf(&self, u: f64) -> f64 {
        let idx = self.cdf.partition_point(|&c| c <= u);
        self.values[idx.min(self.values.len() - 1)] as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_and_mean_from_counts() {
        let h = EmpiricalPrior::from_counts([(0i64, 2u64), (1, 1)]).unwrap();
        assert_eq!(h.total(), 3);
        assert!((h.pmf_int(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((h.pmf_int(1) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(h.pmf_int(7), 0.0);
        assert!((h.mean() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_is_rejected() {
        assert!(matches!(
            EmpiricalPrior::from_counts(std::iter::empty()),
            Err(DistError::EmptyHistogram)
        ));
    }

    #[test]
    fn cdf_handles_gaps_and_negatives() {
        let h = EmpiricalPrior::from_counts([(-2i64, 1u64), (3, 1), (5, 2)]).unwrap();
        assert_eq!(h.cdf(-3.0), 0.0);
        assert!((h.cdf(-2.0) - 0.25).abs() < 1e-15);
        assert!((h.cdf(2.9) - 0.25).abs() < 1e-15);
        assert!((h.cdf(3.0) - 0.5).abs() < 1e-15);
        assert!((h.cdf(100.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn half_open_partial_expectation() {
        let h = EmpiricalPrior::from_counts([(0i64, 1u64), (1, 1), (2, 2)]).unwrap();
        // (0, 2] excludes the lower endpoint, includes the upper.
        let got = h.partial_expectation(Bound::Finite(0.0), Bound::Finite(2.0));
        assert!((got - (1.0 * 0.25 + 2.0 * 0.5)).abs() < 1e-15);
        // (-inf, +inf) is the mean.
        let full = h.partial_expectation(Bound::NegInf, Bound::PosInf);
        assert!((full - h.mean()).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip() {
        let h = EmpiricalPrior::from_counts([(0i64, 4u64), (6, 8), (12, 3)]).unwrap();
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("value,count\n"));
        let back = EmpiricalPrior::read_csv(&buf[..]).unwrap();
        assert_eq!(back.counts().collect::<Vec<_>>(), h.counts().collect::<Vec<_>>());
    }

    #[test]
    fn csv_errors_name_lines() {
        let bad_header = "val,cnt\n0,1\n";
        match EmpiricalPrior::read_csv(bad_header.as_bytes()) {
            Err(DistError::HistogramCsv { line: 1, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        let bad_row = "value,count\n0,1\nx,2\n";
        match EmpiricalPrior::read_csv(bad_row.as_bytes()) {
            Err(DistError::HistogramCsv { line: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn inverse_cdf_walks_the_support() {
        let h = EmpiricalPrior::from_counts([(1i64, 1u64), (4, 1), (9, 2)]).unwrap();
        assert_eq!(h.inverse_cdf(0.0), 1.0);
        assert_eq!(h.inverse_cdf(0.26), 4.0);
        assert_eq!(h.inverse_cdf(0.51), 9.0);
        assert_eq!(h.inverse_cdf(0.999_999_999), 9.0);
    }
}
