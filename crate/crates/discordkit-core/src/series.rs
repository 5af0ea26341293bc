use crate::error::Error;

/// A univariate time series of finite values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    points: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, rejecting NaN/infinite values and series shorter
    /// than two points.
    pub fn new(points: Vec<f64>) -> Result<Self, Error> {
        if points.len() < 2 {
            return Err(Error::SeriesTooShort { len: points.len() });
        }
        for (index, v) in points.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of overlapping length-`s` sequences: `N = N_tot - s + 1`.
    pub fn num_sequences(&self, s: usize) -> Result<usize, Error> {
        if s == 0 || s > self.points.len() {
            return Err(Error::WindowTooLong {
                s,
                n_tot: self.points.len(),
            });
        }
        Ok(self.points.len() - s + 1)
    }
}

/// Two sequences overlap in time (and must never count as neighbors)
/// when their start positions differ by less than the window length.
pub fn is_self_match(i: usize, j: usize, s: usize) -> bool {
    i.abs_diff(j) < s
}

/// Search configuration shared by all discord algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Window (sequence) length.
    pub s: usize,
    /// Number of PAA segments; must divide `s`.
    pub p: usize,
    /// SAX alphabet size, 2..=20.
    pub a: usize,
    /// How many discords to search for.
    pub k: usize,
    /// Seed for the algorithms' random orderings.
    pub seed: u64,
}

impl SearchParams {
    /// Checks every parameter against the series it will run on.
    /// The discord count is capped at `N/s + 1`, the most non-overlapping
    /// sequences that can coexist.
    pub fn validate(&self, ts: &TimeSeries) -> Result<(), Error> {
        if self.s < 4 {
            return Err(Error::WindowTooShort { s: self.s });
        }
        let n = ts.num_sequences(self.s)?;
        if self.p == 0 || self.s % self.p != 0 {
            return Err(Error::SegmentsDoNotDivide {
                p: self.p,
                s: self.s,
            });
        }
        if self.a < 2 || self.a > 20 {
            return Err(Error::AlphabetOutOfRange { a: self.a });
        }
        let max_k = n / self.s + 1;
        if self.k == 0 || self.k > max_k {
            return Err(Error::DiscordCountOutOfRange {
                k: self.k,
                max: max_k,
            });
        }
        Ok(())
    }
}

/// Per-sequence mean and population standard deviation, precomputed once
/// so distance calls never rescan windows.
#[derive(Debug, Clone)]
pub struct SequenceStats {
    s: usize,
    mu: Vec<f64>,
    sigma: Vec<f64>,
}

impl SequenceStats {
    pub fn window(&self) -> usize {
        self.s
    }

    /// Number of sequences covered.
    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn sigma(&self, i: usize) -> f64 {
        self.sigma[i]
    }
}

/// Computes all window means and standard deviations in O(N_tot) via
/// cumulative sums. The series is shifted by its grand mean first, which
/// keeps the E[x^2] - mu^2 cancellation benign even for offset data.
/// Windows where that cancellation still eats most of the digits (near-flat
/// windows, and exactly flat ones whose residue would otherwise float just
/// above zero) fall back to a direct two-pass evaluation, so a constant
/// window always comes out with sigma exactly 0.
pub fn compute_stats(ts: &TimeSeries, s: usize) -> Result<SequenceStats, Error> {
    let n = ts.num_sequences(s)?;
    let pts = ts.points();
    let grand = pts.iter().sum::<f64>() / pts.len() as f64;

    let mut cum = Vec::with_capacity(pts.len() + 1);
    let mut cum_sq = Vec::with_capacity(pts.len() + 1);
    cum.push(0.0);
    cum_sq.push(0.0);
    for &v in pts {
        let c = v - grand;
        cum.push(cum.last().unwrap() + c);
        cum_sq.push(cum_sq.last().unwrap() + c * c);
    }

    let s_f = s as f64;
    let mut mu = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for i in 0..n {
        let local = (cum[i + s] - cum[i]) / s_f;
        let e_sq = (cum_sq[i + s] - cum_sq[i]) / s_f;
        let var = e_sq - local * local;
        if var > 1e-6 * e_sq {
            mu.push(grand + local);
            sigma.push(var.sqrt());
        } else {
            let w = &pts[i..i + s];
            if w.iter().all(|&x| x == w[0]) {
                // Exactly constant: the mean is the value and sigma is 0,
                // with no chance of a rounding residue pushing sigma above
                // the flatness floor.
                mu.push(w[0]);
                sigma.push(0.0);
            } else {
                let m = w.iter().sum::<f64>() / s_f;
                let v = w.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / s_f;
                mu.push(m);
                sigma.push(v.sqrt());
            }
        }
    }
    Ok(SequenceStats { s, mu, sigma })
}
