//! Prefix tables for discrete priors with contiguous support {0, 1, ...}.

/// Precomputed pmf together with prefix CDF and prefix partial expectation,
/// so interval queries are O(1) after a floor.
#[derive(Clone, Debug)]
pub(crate) struct DiscreteTable {
    pmf: Vec<f64>,
    cdf: Vec<f64>,
    /// xpe[k] = sum_{j<=k} j * pmf(j)
    xpe: Vec<f64>,
}

impl DiscreteTable {
    pub(crate) fn from_pmf(pmf: Vec<f64>) -> Self {
        assert!(!pmf.is_empty());
        let mut cdf = Vec::with_capacity(pmf.len());
        let mut xpe = Vec::with_capacity(pmf.len());
        let mut c = 0.0;
        let mut m = 0.0;
        for (k, &p) in pmf.iter().enumerate() {
            c += p;
            m += k as f64 * p;
            cdf.push(c);
            xpe.push(m);
        }
        DiscreteTable { pmf, cdf, xpe }
    }

    pub(crate) fn len(&self) -> usize {
        self.pmf.len()
    }

    pub(crate) fn pmf_at(&self, k: u64) -> Option<f64> {
        self.pmf.get(k as usize).copied()
    }

    /// Sum of x * pmf(x) over the whole table; the truncated-series mean.
    pub(crate) fn mean(&self) -> f64 {
        *self.xpe.last().expect("non-empty table")
    }

    /// P(X <= x) for a real-valued x.
    pub(crate) fn cdf_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = x.floor() as usize;
        if k >= self.cdf.len() {
            *self.cdf.last().unwrap()
        } else {
            self.cdf[k]
        }
    }

    /// Sum of j * pmf(j) for j <= x.
    fn xpe_at(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        let k = x.floor() as usize;
        if k >= self.xpe.len() {
            *self.xpe.last().unwrap()
        } else {
            self.xpe[k]
        }
    }

    /// E[X * 1(lo < X <= hi)] with sentinel-aware bounds, half-open.
    pub(crate) fn partial_expectation(&self, lo: crate::Bound, hi: crate::Bound) -> f64 {
        use crate::Bound::*;
        let upper = match hi {
            NegInf => return 0.0,
            Finite(b) => self.xpe_at(b),
            PosInf => self.mean(),
        };
        let lower = match lo {
            NegInf => 0.0,
            Finite(a) => self.xpe_at(a),
            PosInf => return 0.0,
        };
        upper - lower
    }

    /// Smallest support value whose CDF exceeds `u`. Clamps to the last
    /// table entry for u beyond the retained mass (tail < 1e-12).
    pub(crate) fn inverse_cdf(&self, u: f64) -> f64 {
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as f64
    }
}
