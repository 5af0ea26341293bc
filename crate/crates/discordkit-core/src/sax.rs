use std::collections::BTreeMap;

use statrs::distribution::{ContinuousCDF, Normal};

use crate::distance::SIGMA_FLOOR;
use crate::error::Error;
use crate::series::{SearchParams, SequenceStats, TimeSeries};

/// Equiprobable N(0,1) breakpoints for an `a`-letter alphabet: the a-1
/// quantiles at i/a. The center is pinned at exactly zero for even `a` and
/// the tails are mirrored, so the cut set is exactly symmetric.
pub fn breakpoints(a: usize) -> Result<Vec<f64>, Error> {
    if !(2..=20).contains(&a) {
        return Err(Error::AlphabetOutOfRange { a });
    }
    let normal = Normal::new(0.0, 1.0).unwrap();
    let cuts = (1..a)
        .map(|i| {
            if 2 * i == a {
                0.0
            } else if 2 * i < a {
                normal.inverse_cdf(i as f64 / a as f64)
            } else {
                -normal.inverse_cdf((a - i) as f64 / a as f64)
            }
        })
        .collect();
    Ok(cuts)
}

/// Piecewise aggregate approximation of the z-normalized window starting
/// at `i`: the mean of each of the `p` equal blocks. A flat window (sigma
/// under the floor) z-normalizes to the zero vector, so its PAA is zero.
pub fn paa(ts: &TimeSeries, stats: &SequenceStats, i: usize, p: usize) -> Vec<f64> {
    let s = stats.window();
    assert!(p >= 1 && s % p == 0, "PAA segments must divide the window");
    let w = &ts.points()[i..i + s];
    let (mu, sd) = (stats.mu(i), stats.sigma(i));
    if sd < SIGMA_FLOOR {
        return vec![0.0; p];
    }
    let seg = s / p;
    (0..p)
        .map(|b| {
            let sum: f64 = w[b * seg..(b + 1) * seg].iter().sum();
            (sum / seg as f64 - mu) / sd
        })
        .collect()
}

/// Maps PAA values to letters: a value's letter index is the number of
/// breakpoints at or below it, so values sitting exactly on a cut take
/// the higher letter.
pub fn sax_word(paa_values: &[f64], breakpoints: &[f64]) -> String {
    paa_values
        .iter()
        .map(|&v| {
            let idx = breakpoints.partition_point(|&b| b <= v);
            (b'a' + idx as u8) as char
        })
        .collect()
}

/// All sequences grouped by SAX word. Cluster ids follow the words'
/// lexicographic order; `cluster_order` ranks clusters for the searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaxIndex {
    words: Vec<String>,
    members: Vec<Vec<usize>>,
    cluster_of: Vec<usize>,
    cluster_order: Vec<usize>,
}

impl SaxIndex {
    /// Builds an index from an explicit partition, mainly for tests and
    /// experiments that need a handcrafted cluster layout. Panics unless
    /// `clusters` partitions 0..N for some N.
    pub fn from_clusters(clusters: Vec<Vec<usize>>) -> Self {
        let n: usize = clusters.iter().map(Vec::len).sum();
        let mut cluster_of = vec![usize::MAX; n];
        for (c, m) in clusters.iter().enumerate() {
            for &i in m {
                assert!(i < n && cluster_of[i] == usize::MAX, "not a partition");
                cluster_of[i] = c;
            }
        }
        let words = (0..clusters.len()).map(|c| format!("#{c}")).collect();
        let mut cluster_order: Vec<usize> = (0..clusters.len()).collect();
        cluster_order.sort_by_key(|&c| (clusters[c].len(), c));
        Self {
            words,
            members: clusters,
            cluster_of,
            cluster_order,
        }
    }

    pub fn num_sequences(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.members.len()
    }

    pub fn word(&self, cluster: usize) -> &str {
        &self.words[cluster]
    }

    pub fn word_of(&self, i: usize) -> &str {
        &self.words[self.cluster_of[i]]
    }

    pub fn cluster_of(&self, i: usize) -> usize {
        self.cluster_of[i]
    }

    /// Member sequences of a cluster, in ascending position order.
    pub fn members(&self, cluster: usize) -> &[usize] {
        &self.members[cluster]
    }

    /// Cluster ids from smallest to largest; equal sizes fall back to the
    /// words' lexicographic order. Rare words drive both searches' outer
    /// loops, so they come first.
    pub fn cluster_order(&self) -> &[usize] {
        &self.cluster_order
    }
}

/// Computes every sequence's SAX word and groups equal words.
pub fn build_index(
    ts: &TimeSeries,
    stats: &SequenceStats,
    params: &SearchParams,
) -> Result<SaxIndex, Error> {
    let cuts = breakpoints(params.a)?;
    if params.p == 0 || stats.window() % params.p != 0 {
        return Err(Error::SegmentsDoNotDivide {
            p: params.p,
            s: stats.window(),
        });
    }
    let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for i in 0..stats.len() {
        let word = sax_word(&paa(ts, stats, i, params.p), &cuts);
        groups.entry(word).or_default().push(i);
    }
    let mut words = Vec::with_capacity(groups.len());
    let mut members = Vec::with_capacity(groups.len());
    let mut cluster_of = vec![0usize; stats.len()];
    for (c, (word, m)) in groups.into_iter().enumerate() {
        for &i in &m {
            cluster_of[i] = c;
        }
        words.push(word);
        members.push(m);
    }
    // Ids are already lexicographic, so the id tie-break is the word
    // tie-break.
    let mut cluster_order: Vec<usize> = (0..words.len()).collect();
    cluster_order.sort_by_key(|&c| (members[c].len(), c));
    Ok(SaxIndex {
        words,
        members,
        cluster_of,
        cluster_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::compute_stats;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn breakpoint_table_values() {
        assert_eq!(breakpoints(2).unwrap(), vec![0.0]);
        let b3 = breakpoints(3).unwrap();
        assert_abs_diff_eq!(b3[0], -0.4307, epsilon = 5e-5);
        assert_abs_diff_eq!(b3[1], 0.4307, epsilon = 5e-5);
        let b4 = breakpoints(4).unwrap();
        assert_abs_diff_eq!(b4[0], -0.6745, epsilon = 5e-5);
        assert_eq!(b4[1], 0.0);
        assert_abs_diff_eq!(b4[2], 0.6745, epsilon = 5e-5);
        assert!(breakpoints(1).is_err());
        assert!(breakpoints(21).is_err());
    }

    /// Independent check: the normal CDF, evaluated by Simpson integration
    /// of the density, must give i/a at the i-th breakpoint.
    #[test]
    fn breakpoints_are_equiprobable_quantiles() {
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let cdf = |x: f64| {
            let (lo, steps) = (-12.0f64, 24_000usize);
            let h = (x - lo) / steps as f64;
            let mut acc = pdf(lo) + pdf(x);
            for t in 1..steps {
                let w = if t % 2 == 1 { 4.0 } else { 2.0 };
                acc += w * pdf(lo + t as f64 * h);
            }
            acc * h / 3.0
        };
        for a in 2..=20usize {
            let cuts = breakpoints(a).unwrap();
            assert_eq!(cuts.len(), a - 1);
            for (m, &b) in cuts.iter().enumerate() {
                assert_abs_diff_eq!(cdf(b), (m + 1) as f64 / a as f64, epsilon = 1e-8);
            }
            for w in cuts.windows(2) {
                assert!(w[0] < w[1], "breakpoints must be strictly increasing");
            }
            // Exact mirror symmetry (== deliberately: the center breakpoint
            // of an even alphabet is 0.0 and its mirror is -0.0).
            for m in 0..cuts.len() {
                let mirrored = -cuts[cuts.len() - 1 - m];
                assert!(
                    cuts[m] == mirrored,
                    "breakpoint {m} not mirrored: {} vs {}",
                    cuts[m],
                    mirrored
                );
            }
        }
    }

    #[test]
    fn paa_of_ramp() {
        let ts = TimeSeries::new(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let stats = compute_stats(&ts, 4).unwrap();
        let v = paa(&ts, &stats, 0, 2);
        let expect = 2.0 / 5f64.sqrt(); // 0.8944271909999159
        assert_relative_eq!(v[0], -expect, max_relative = 1e-9);
        assert_relative_eq!(v[1], expect, max_relative = 1e-9);
        // p == s reproduces the z-normalized window itself.
        let z = paa(&ts, &stats, 0, 4);
        for (t, zv) in z.iter().enumerate() {
            let direct = (t as f64 - 1.5) / 1.25f64.sqrt();
            assert_relative_eq!(zv, &direct, max_relative = 1e-9);
        }
    }

    #[test]
    fn paa_of_flat_window_is_zero() {
        let ts = TimeSeries::new(vec![7.0; 12]).unwrap();
        let stats = compute_stats(&ts, 6).unwrap();
        assert_eq!(paa(&ts, &stats, 0, 3), vec![0.0; 3]);
    }

    #[test]
    fn paa_blocks_are_z_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ts = TimeSeries::new((0..90).map(|_| rng.gen::<f64>() * 4.0).collect()).unwrap();
        let stats = compute_stats(&ts, 12).unwrap();
        for i in [0usize, 13, 70] {
            let v = paa(&ts, &stats, i, 4);
            let w = &ts.points()[i..i + 12];
            for (b, got) in v.iter().enumerate() {
                let mean: f64 = w[b * 3..(b + 1) * 3]
                    .iter()
                    .map(|x| (x - stats.mu(i)) / stats.sigma(i))
                    .sum::<f64>()
                    / 3.0;
                assert_relative_eq!(got, &mean, max_relative = 1e-9, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn word_letters() {
        let cuts = breakpoints(4).unwrap();
        assert_eq!(sax_word(&[-0.8944, 0.8944], &cuts), "ad");
        assert_eq!(sax_word(&[0.0, 0.0], &cuts), "cc");
        assert_eq!(sax_word(&[-0.7, -0.1, 0.1, 0.7], &cuts), "abcd");
        // A value exactly on a cut takes the higher letter.
        assert_eq!(sax_word(&[cuts[2]], &cuts), "d");
        let b2 = breakpoints(2).unwrap();
        assert_eq!(sax_word(&[-3.0, 3.0, 0.0], &b2), "abb");
    }

    #[test]
    fn index_partitions_and_orders() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut level = 0.0;
        let pts: Vec<f64> = (0..400)
            .map(|_| {
                level += rng.gen::<f64>() - 0.5;
                level
            })
            .collect();
        let ts = TimeSeries::new(pts).unwrap();
        let stats = compute_stats(&ts, 16).unwrap();
        let params = SearchParams { s: 16, p: 4, a: 4, k: 1, seed: 0 };
        let index = build_index(&ts, &stats, &params).unwrap();

        let n = stats.len();
        assert_eq!(index.num_sequences(), n);
        let mut seen = vec![false; n];
        for c in 0..index.num_clusters() {
            let members = index.members(c);
            assert!(!members.is_empty());
            assert!(members.windows(2).all(|w| w[0] < w[1]));
            for &i in members {
                assert!(!seen[i]);
                seen[i] = true;
                assert_eq!(index.cluster_of(i), c);
                assert_eq!(index.word_of(i), index.word(c));
            }
        }
        assert!(seen.iter().all(|&x| x));

        let order = index.cluster_order();
        assert_eq!(order.len(), index.num_clusters());
        for w in order.windows(2) {
            let (a, b) = (index.members(w[0]).len(), index.members(w[1]).len());
            assert!(a < b || (a == b && index.word(w[0]) < index.word(w[1])));
        }

        // Same input, same index.
        let again = build_index(&ts, &stats, &params).unwrap();
        assert_eq!(index, again);
    }

    #[test]
    fn equal_sized_clusters_tie_break_on_word() {
        // Alternating spikes: two window shapes, four sequences each.
        let pts: Vec<f64> = (0..11).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let ts = TimeSeries::new(pts).unwrap();
        let stats = compute_stats(&ts, 4).unwrap();
        let params = SearchParams { s: 4, p: 4, a: 2, k: 1, seed: 0 };
        let index = build_index(&ts, &stats, &params).unwrap();
        assert_eq!(index.num_clusters(), 2);
        assert_eq!(index.members(0).len(), 4);
        assert_eq!(index.members(1).len(), 4);
        let order = index.cluster_order();
        assert!(index.word(order[0]) < index.word(order[1]));
        assert_eq!(index.word(order[0]), "abab");
        assert_eq!(index.word(order[1]), "baba");
    }

    #[test]
    fn rejects_bad_params() {
        let ts = TimeSeries::new((0..40).map(|i| i as f64).collect()).unwrap();
        let stats = compute_stats(&ts, 12).unwrap();
        let bad_p = SearchParams { s: 12, p: 5, a: 4, k: 1, seed: 0 };
        assert!(build_index(&ts, &stats, &bad_p).is_err());
        let bad_a = SearchParams { s: 12, p: 4, a: 1, k: 1, seed: 0 };
        assert!(build_index(&ts, &stats, &bad_a).is_err());
    }
}
