use crate::series::{is_self_match, SequenceStats, TimeSeries};

/// Sequences with standard deviation below this floor are treated as flat;
/// their z-normalized form is the zero vector.
pub const SIGMA_FLOOR: f64 = 1e-12;

/// Counts distance invocations. Every call to [`znorm_distance`] records
/// exactly one call, including calls that abandon early.
#[derive(Debug, Default, Clone)]
pub struct CallCounter {
    calls: u64,
}

impl CallCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.calls
    }

    fn record(&mut self) {
        self.calls += 1;
    }
}

/// z-normalized Euclidean distance between the sequences starting at `i`
/// and `j`, computed through the dot-product identity
/// `d = sqrt(2s * (1 - (p.q - s*mu_i*mu_j) / (s*sigma_i*sigma_j)))`
/// with the radicand clamped at zero.
///
/// With `abandon_at = Some(t)` the call returns `None` when the distance
/// exceeds `t`; a running z-space sum lets it stop mid-window. The running
/// sum accumulates the quadratic form directly, so a distance within
/// floating-point rounding of `t` may also be reported as exceeding it;
/// searches only prune candidates that cannot strictly improve a minimum,
/// so that boundary wobble never changes a result.
/// Every returned value comes from the same plain dot pass over the
/// canonical (lower, higher) argument order, so results are bit-identical
/// whether or not a threshold was given and whichever way the pair was
/// passed. Searches that prune agree with the brute force to the last bit.
///
/// Panics if `i` and `j` are self-matches; callers filter those first.
pub fn znorm_distance(
    ts: &TimeSeries,
    stats: &SequenceStats,
    i: usize,
    j: usize,
    abandon_at: Option<f64>,
    counter: &mut CallCounter,
) -> Option<f64> {
    counter.record();
    let s = stats.window();
    assert!(
        !is_self_match(i, j, s),
        "self-match distance requested: |{i} - {j}| < {s}"
    );
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    let a = &ts.points()[i..i + s];
    let b = &ts.points()[j..j + s];
    let (mu_i, sig_i) = (stats.mu(i), stats.sigma(i));
    let (mu_j, sig_j) = (stats.mu(j), stats.sigma(j));
    let flat_i = sig_i < SIGMA_FLOOR;
    let flat_j = sig_j < SIGMA_FLOOR;

    let d = if flat_i && flat_j {
        0.0
    } else if flat_i || flat_j {
        // One side is the zero vector; the other z-normalizes to squared norm s.
        (s as f64).sqrt()
    } else {
        if let Some(limit) = abandon_at {
            if exceeds_limit(a, b, mu_i, sig_i, mu_j, sig_j, limit * limit) {
                return None;
            }
        }
        finish(dot_plain(a, b), s, mu_i, sig_i, mu_j, sig_j)
    };
    match abandon_at {
        Some(limit) if d > limit => None,
        _ => Some(d),
    }
}

#[inline]
fn finish(dot: f64, s: usize, mu_i: f64, sig_i: f64, mu_j: f64, sig_j: f64) -> f64 {
    let s_f = s as f64;
    let corr = (dot - s_f * mu_i * mu_j) / (s_f * sig_i * sig_j);
    (2.0 * s_f * (1.0 - corr)).max(0.0).sqrt()
}

// All returned distances flow through this one kernel. The early-abandon
// check runs separately and only decides whether to bail out, so optimizer
// choices there can never perturb a value a caller gets to see.
#[inline]
fn dot_plain(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let t = c * 4;
        acc[0] += a[t] * b[t];
        acc[1] += a[t + 1] * b[t + 1];
        acc[2] += a[t + 2] * b[t + 2];
        acc[3] += a[t + 3] * b[t + 3];
    }
    let mut rem = 0.0;
    for t in chunks * 4..a.len() {
        rem += a[t] * b[t];
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + rem
}

/// Accumulates the z-space squared distance and reports whether it ever
/// exceeds `limit_sq`. The partial sum only grows, so once it passes the
/// limit the full distance is guaranteed to as well and the scan stops.
#[inline]
fn exceeds_limit(
    a: &[f64],
    b: &[f64],
    mu_i: f64,
    sig_i: f64,
    mu_j: f64,
    sig_j: f64,
    limit_sq: f64,
) -> bool {
    let inv_i = 1.0 / sig_i;
    let inv_j = 1.0 / sig_j;
    let mut run = 0.0;
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let t = c * 4;
        let z0 = (a[t] - mu_i) * inv_i - (b[t] - mu_j) * inv_j;
        let z1 = (a[t + 1] - mu_i) * inv_i - (b[t + 1] - mu_j) * inv_j;
        let z2 = (a[t + 2] - mu_i) * inv_i - (b[t + 2] - mu_j) * inv_j;
        let z3 = (a[t + 3] - mu_i) * inv_i - (b[t + 3] - mu_j) * inv_j;
        run += z0 * z0 + z1 * z1 + z2 * z2 + z3 * z3;
        if run > limit_sq {
            return true;
        }
    }
    for t in chunks * 4..a.len() {
        let z = (a[t] - mu_i) * inv_i - (b[t] - mu_j) * inv_j;
        run += z * z;
        if run > limit_sq {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::compute_stats;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ts(points: Vec<f64>) -> TimeSeries {
        TimeSeries::new(points).unwrap()
    }

    /// Direct two-pass evaluation: z-normalize both windows, then take the
    /// plain Euclidean distance. Used as the oracle for the dot-product form.
    fn znorm_distance_naive(series: &TimeSeries, s: usize, i: usize, j: usize) -> f64 {
        let znorm = |start: usize| -> Vec<f64> {
            let w = &series.points()[start..start + s];
            let mu: f64 = w.iter().sum::<f64>() / s as f64;
            let var: f64 = w.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / s as f64;
            let sd = var.sqrt();
            if sd < SIGMA_FLOOR {
                vec![0.0; s]
            } else {
                w.iter().map(|v| (v - mu) / sd).collect()
            }
        };
        let (zi, zj) = (znorm(i), znorm(j));
        zi.iter()
            .zip(&zj)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    #[test]
    fn anti_correlated_pair_hits_upper_bound() {
        let series = ts(vec![0.0, 1.0, 1.0, 0.0]);
        let stats = compute_stats(&series, 2).unwrap();
        let mut counter = CallCounter::new();
        let d = znorm_distance(&series, &stats, 0, 2, None, &mut counter).unwrap();
        assert_relative_eq!(d, 2.0 * 2.0f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(d, 2.8284271247461903, max_relative = 1e-12);
        assert_eq!(counter.count(), 1);
    }

    #[test]
    fn identical_windows_are_near_zero() {
        let series = ts(vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0]);
        let stats = compute_stats(&series, 3).unwrap();
        let mut counter = CallCounter::new();
        let d = znorm_distance(&series, &stats, 0, 3, None, &mut counter).unwrap();
        assert_abs_diff_eq!(d, 0.0, epsilon = 1e-7);
    }

    #[test]
    fn flat_window_rules() {
        let series = ts(vec![5.0, 5.0, 5.0, 5.0, 0.0, 9.0, 1.0, 7.0, 3.0, 3.0, 3.0, 3.0]);
        let stats = compute_stats(&series, 4).unwrap();
        let mut counter = CallCounter::new();
        // Flat vs. varying: the varying side alone carries squared norm s.
        let d = znorm_distance(&series, &stats, 0, 4, None, &mut counter).unwrap();
        assert_relative_eq!(d, 2.0, max_relative = 1e-12);
        // Flat vs. flat: both z-normalize to the zero vector.
        let d = znorm_distance(&series, &stats, 0, 8, None, &mut counter).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    #[should_panic(expected = "self-match")]
    fn self_match_panics() {
        let series = ts((0..32).map(|i| (i as f64).sin()).collect());
        let stats = compute_stats(&series, 8).unwrap();
        let mut counter = CallCounter::new();
        znorm_distance(&series, &stats, 3, 9, None, &mut counter);
    }

    #[test]
    fn abandon_contract_and_counter() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let series = ts((0..64).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect());
        let stats = compute_stats(&series, 16).unwrap();
        let mut counter = CallCounter::new();

        let full = znorm_distance(&series, &stats, 2, 40, None, &mut counter).unwrap();
        assert!(full > 0.5, "random windows should be well separated");

        let kept = znorm_distance(&series, &stats, 2, 40, Some(full + 0.1), &mut counter);
        assert_eq!(kept.unwrap().to_bits(), full.to_bits());

        // Thresholds comfortably above the distance keep the exact value;
        // exactly at it, the running-sum check may round either way, so the
        // contract only promises Some(full) or None and never a third value.
        let at = znorm_distance(&series, &stats, 2, 40, Some(full), &mut counter);
        if let Some(d) = at {
            assert_eq!(d.to_bits(), full.to_bits());
        }

        let dropped = znorm_distance(&series, &stats, 2, 40, Some(full - 0.1), &mut counter);
        assert_eq!(dropped, None);

        let dropped_early = znorm_distance(&series, &stats, 2, 40, Some(1e-3), &mut counter);
        assert_eq!(dropped_early, None);

        // Five invocations counted, abandoned ones included.
        assert_eq!(counter.count(), 5);
    }

    #[test]
    fn matches_naive_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(n_tot, s) in &[(300usize, 8usize), (300, 25), (500, 64)] {
            let mut points = Vec::with_capacity(n_tot);
            let mut level = 0.0;
            for _ in 0..n_tot {
                level += rng.gen::<f64>() - 0.5;
                points.push(level + 40.0);
            }
            let series = ts(points);
            let stats = compute_stats(&series, s).unwrap();
            let n = series.num_sequences(s).unwrap();
            let mut counter = CallCounter::new();
            for _ in 0..800 {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if is_self_match(i, j, s) {
                    continue;
                }
                let fast = znorm_distance(&series, &stats, i, j, None, &mut counter).unwrap();
                let naive = znorm_distance_naive(&series, s, i, j);
                assert_abs_diff_eq!(fast, naive, epsilon = 1e-6 * naive.max(1.0));
            }
        }
    }

    proptest! {
        #[test]
        fn pruned_path_is_bit_identical(
            points in proptest::collection::vec(-5.0f64..5.0, 40..120),
            s in 4usize..12,
            pick in 0usize..1000,
        ) {
            let series = ts(points);
            let stats = compute_stats(&series, s).unwrap();
            let n = series.num_sequences(s).unwrap();
            prop_assume!(n > 2 * s);
            let i = pick % (n - 2 * s);
            let j = i + s + pick % s;
            let mut counter = CallCounter::new();
            let full = znorm_distance(&series, &stats, i, j, None, &mut counter).unwrap();
            let pruned = znorm_distance(&series, &stats, i, j, Some(full + 1.0), &mut counter).unwrap();
            prop_assert_eq!(full.to_bits(), pruned.to_bits());

            // Symmetric by construction: arguments are canonicalized to
            // (lower, higher) before any arithmetic happens.
            let swapped = znorm_distance(&series, &stats, j, i, None, &mut counter).unwrap();
            prop_assert_eq!(full.to_bits(), swapped.to_bits());

            // Range bound: z-normalized sequences live on a sphere of radius
            // sqrt(s), so distances cannot pass sqrt(4s).
            prop_assert!(full >= 0.0);
            prop_assert!(full <= (4.0 * s as f64).sqrt() + 1e-9);
        }

        #[test]
        fn shift_and_scale_invariant(
            points in proptest::collection::vec(-5.0f64..5.0, 60..120),
            scale in 0.1f64..50.0,
            shift in -100.0f64..100.0,
        ) {
            let s = 8;
            let series = ts(points.clone());
            let mapped = ts(points.iter().map(|v| v * scale + shift).collect());
            let stats_a = compute_stats(&series, s).unwrap();
            let stats_b = compute_stats(&mapped, s).unwrap();
            let n = series.num_sequences(s).unwrap();
            let mut counter = CallCounter::new();
            let (i, j) = (0, n - 1);
            prop_assume!(!is_self_match(i, j, s));
            let da = znorm_distance(&series, &stats_a, i, j, None, &mut counter).unwrap();
            let db = znorm_distance(&mapped, &stats_b, i, j, None, &mut counter).unwrap();
            prop_assert!((da - db).abs() <= 1e-9, "da={da} db={db}");
        }
    }
}
