use crate::distance::{znorm_distance, CallCounter};
use crate::series::{is_self_match, SearchParams, SequenceStats, TimeSeries};

/// One discord: the sequence position and its distance to the nearest
/// non-self-match neighbor. An infinite nnd means the sequence had no
/// valid neighbor at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Discord {
    pub position: usize,
    pub nnd: f64,
}

/// Ranked discords plus bookkeeping shared by all three algorithms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscordResult {
    /// Best first. The m-th entry excludes sequences overlapping any
    /// earlier discord.
    pub discords: Vec<Discord>,
    /// Set when the exclusion zones ran out of candidates before k
    /// discords were found.
    pub truncated: bool,
    /// Distance calls spent per discord; sums to the search's total.
    pub calls_per_discord: Vec<u64>,
}

/// Marks every sequence overlapping `position` as used up.
pub(crate) fn exclude_around(excluded: &mut [bool], position: usize, s: usize) {
    let lo = position.saturating_sub(s - 1);
    let hi = (position + s).min(excluded.len());
    for e in &mut excluded[lo..hi] {
        *e = true;
    }
}

/// Reference search: for every candidate, minimize over every valid
/// neighbor, with no pruning beyond the self-match exclusion. Cost is
/// Theta(N^2) calls; everything else is measured against it.
pub fn brute_force_discords(
    ts: &TimeSeries,
    stats: &SequenceStats,
    params: &SearchParams,
    counter: &mut CallCounter,
) -> DiscordResult {
    let n = stats.len();
    let s = stats.window();
    let mut excluded = vec![false; n];
    let mut discords = Vec::new();
    let mut calls_per_discord = Vec::new();
    let mut truncated = false;

    for _ in 0..params.k {
        let start = counter.count();
        let mut best: Option<Discord> = None;
        for i in 0..n {
            if excluded[i] {
                continue;
            }
            let mut nnd = f64::INFINITY;
            for j in 0..n {
                if is_self_match(i, j, s) {
                    continue;
                }
                let d = znorm_distance(ts, stats, i, j, None, counter).unwrap();
                if d < nnd {
                    nnd = d;
                }
            }
            // Strict comparison keeps the lowest position on ties.
            if best.map_or(true, |b| nnd > b.nnd) {
                best = Some(Discord { position: i, nnd });
            }
        }
        match best {
            None => {
                truncated = true;
                break;
            }
            Some(b) => {
                exclude_around(&mut excluded, b.position, s);
                discords.push(b);
                calls_per_discord.push(counter.count() - start);
            }
        }
    }
    DiscordResult {
        discords,
        truncated,
        calls_per_discord,
    }
}

/// The exact nearest-neighbor distance (and neighbor) of every sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct NndProfile {
    pub nnd: Vec<f64>,
    pub ngh: Vec<Option<usize>>,
}

/// Computes the full profile over ordered pairs, updating both endpoints.
/// This is the ground truth that the searches' bounds are checked against.
pub fn exact_nnd_profile(ts: &TimeSeries, stats: &SequenceStats) -> NndProfile {
    let n = stats.len();
    let s = stats.window();
    let mut nnd = vec![f64::INFINITY; n];
    let mut ngh: Vec<Option<usize>> = vec![None; n];
    let mut counter = CallCounter::new();
    for i in 0..n {
        for j in (i + s)..n {
            let d = znorm_distance(ts, stats, i, j, None, &mut counter).unwrap();
            if d < nnd[i] {
                nnd[i] = d;
                ngh[i] = Some(j);
            }
            if d < nnd[j] {
                nnd[j] = d;
                ngh[j] = Some(i);
            }
        }
    }
    NndProfile { nnd, ngh }
}
