use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::distance::{znorm_distance, CallCounter};
use crate::exact::{exclude_around, Discord, DiscordResult};
use crate::sax::SaxIndex;
use crate::series::{is_self_match, SearchParams, SequenceStats, TimeSeries};

/// Shared search state. `nnd[i]` is always an upper bound on sequence i's
/// true nearest-neighbor distance: every write comes from a real distance
/// to a valid neighbor, and writes only ever lower it. `ngh[i]` is the
/// neighbor that produced the current bound.
#[derive(Debug, Clone, PartialEq)]
pub struct NndState {
    pub nnd: Vec<f64>,
    pub ngh: Vec<Option<usize>>,
    /// Best discord distance confirmed so far in the current search.
    pub best_dist: f64,
    /// Candidate visiting order for the outer loop.
    pub order: Vec<usize>,
}

impl NndState {
    pub fn new(n: usize) -> Self {
        Self {
            nnd: vec![f64::INFINITY; n],
            ngh: vec![None; n],
            best_dist: 0.0,
            order: Vec::new(),
        }
    }
}

/// State-change notifications, used by the invariant checks in tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HstEvent {
    /// `nnd[seq]` was lowered to `nnd` by a distance call.
    Improved { seq: usize, nnd: f64 },
    /// The outer loop discarded `seq`: its bound was already below the
    /// incumbent best discord distance.
    Skipped { seq: usize, best_dist: f64 },
    /// `seq` survived both minimization phases; its nnd is now exact.
    Survived { seq: usize, nnd: f64 },
}

/// Variant toggles. Defaults are the reference behavior.
#[derive(Debug, Clone, Copy, Default)]
pub struct HstOptions {
    /// In the long-range pass, stop the diagonal walk at the first entry
    /// whose bound is already beaten instead of stepping over it.
    pub diagonal_break: bool,
    /// Run the long-range pass only for candidates still in the running,
    /// instead of for every visited candidate.
    pub gate_long_range: bool,
}

fn improve(state: &mut NndState, seq: usize, neighbor: usize, d: f64, obs: &mut dyn FnMut(HstEvent)) {
    if d < state.nnd[seq] {
        state.nnd[seq] = d;
        state.ngh[seq] = Some(neighbor);
        obs(HstEvent::Improved { seq, nnd: d });
    }
}

fn by_value_desc(values: &[f64]) -> impl Fn(&usize, &usize) -> Ordering + '_ {
    move |&x, &y| values[y].partial_cmp(&values[x]).unwrap().then(x.cmp(&y))
}

/// Cluster members in search order, shuffled within each cluster, so every
/// run walks a different chain over the same grouping.
pub fn warm_up_chain<R: Rng>(index: &SaxIndex, rng: &mut R) -> Vec<usize> {
    let mut chain = Vec::with_capacity(index.num_sequences());
    for &c in index.cluster_order() {
        let at = chain.len();
        chain.extend_from_slice(index.members(c));
        chain[at..].shuffle(rng);
    }
    chain
}

/// One distance per adjacent chain pair, skipping self-matches; both
/// endpoints take the distance as their first bound. At most N-1 calls.
pub fn warm_up_scan(
    ts: &TimeSeries,
    stats: &SequenceStats,
    chain: &[usize],
    state: &mut NndState,
    counter: &mut CallCounter,
    obs: &mut dyn FnMut(HstEvent),
) {
    let s = stats.window();
    for w in chain.windows(2) {
        let (i, j) = (w[0], w[1]);
        if is_self_match(i, j, s) {
            continue;
        }
        let d = znorm_distance(ts, stats, i, j, None, counter).unwrap();
        improve(state, i, j, d, obs);
        improve(state, j, i, d, obs);
    }
}

/// Seeds every sequence with a cheap first neighbor estimate by chaining
/// the shuffled clusters and measuring adjacent pairs.
pub fn warm_up<R: Rng>(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    state: &mut NndState,
    counter: &mut CallCounter,
    rng: &mut R,
    obs: &mut dyn FnMut(HstEvent),
) {
    let chain = warm_up_chain(index, rng);
    warm_up_scan(ts, stats, &chain, state, counter, obs);
}

/// Neighbor relations persist in time: if sequence i matches g, then i+1
/// tends to match g+1 and i-1 to match g-1. One aligned guess in each
/// direction per sequence, at most 2N calls, skipping pairs already
/// recorded. Offset pairs keep the original separation, so they are never
/// self-matches.
pub fn short_range_topology(
    ts: &TimeSeries,
    stats: &SequenceStats,
    state: &mut NndState,
    counter: &mut CallCounter,
    obs: &mut dyn FnMut(HstEvent),
) {
    let n = state.nnd.len();
    for i in 0..n {
        let Some(g) = state.ngh[i] else { continue };
        let (it, gt) = (i + 1, g + 1);
        if it < n && gt < n && state.ngh[it] != Some(gt) {
            let d = znorm_distance(ts, stats, it, gt, None, counter).unwrap();
            improve(state, it, gt, d, obs);
            improve(state, gt, it, d, obs);
        }
        if i > 0 && g > 0 {
            let (it, gt) = (i - 1, g - 1);
            if state.ngh[it] != Some(gt) {
                let d = znorm_distance(ts, stats, it, gt, None, counter).unwrap();
                improve(state, it, gt, d, obs);
                improve(state, gt, it, d, obs);
            }
        }
    }
}

/// Centered moving average of the bounds with window s+1 (s/2 on each
/// side). Sequences whose full window does not fit keep their raw value,
/// a sequence never compared to anything stays infinite, and infinite
/// entries are left out of their neighbors' averages.
pub fn smooth_nnd(nnd: &[f64], s: usize) -> Vec<f64> {
    let n = nnd.len();
    let half = s / 2;
    let mut out = nnd.to_vec();
    for i in 0..n {
        if i < half || i + half >= n || !nnd[i].is_finite() {
            continue;
        }
        let mut sum = 0.0;
        let mut m = 0usize;
        for v in &nnd[i - half..=i + half] {
            if v.is_finite() {
                sum += v;
                m += 1;
            }
        }
        out[i] = sum / m as f64;
    }
    out
}

/// Outer visiting order: highest value first, never-compared (infinite)
/// entries at the front, ties to the lower index.
pub fn sort_external(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(by_value_desc(values));
    order
}

/// Walks the diagonal (i+off, g+off) away from i's recorded match g,
/// at most s steps. Entries with already-beaten bounds are stepped over
/// (or end the walk with `diagonal_break`); a distance that fails to
/// improve its target ends it. Never more than s calls.
pub fn long_range_topology_forw(
    ts: &TimeSeries,
    stats: &SequenceStats,
    state: &mut NndState,
    i: usize,
    options: HstOptions,
    counter: &mut CallCounter,
    obs: &mut dyn FnMut(HstEvent),
) {
    let n = state.nnd.len();
    let Some(g) = state.ngh[i] else { return };
    for off in 1..=stats.window() {
        let (it, gt) = (i + off, g + off);
        if it >= n || gt >= n {
            return;
        }
        if state.nnd[it] < state.best_dist {
            // This one can no longer be the discord, but the diagonal may
            // still help the entries behind it.
            if options.diagonal_break {
                return;
            }
            continue;
        }
        if state.ngh[it] == Some(gt) {
            return; // the rest of the diagonal was recorded earlier
        }
        let d = znorm_distance(ts, stats, it, gt, None, counter).unwrap();
        if d < state.nnd[it] {
            improve(state, it, gt, d, obs);
            improve(state, gt, it, d, obs);
        } else {
            return; // alignment stopped paying off
        }
    }
}

/// Mirror of the forward walk, stepping toward lower indices.
pub fn long_range_topology_back(
    ts: &TimeSeries,
    stats: &SequenceStats,
    state: &mut NndState,
    i: usize,
    options: HstOptions,
    counter: &mut CallCounter,
    obs: &mut dyn FnMut(HstEvent),
) {
    let Some(g) = state.ngh[i] else { return };
    for off in 1..=stats.window() {
        if i < off || g < off {
            return;
        }
        let (it, gt) = (i - off, g - off);
        if state.nnd[it] < state.best_dist {
            if options.diagonal_break {
                return;
            }
            continue;
        }
        if state.ngh[it] == Some(gt) {
            return;
        }
        let d = znorm_distance(ts, stats, it, gt, None, counter).unwrap();
        if d < state.nnd[it] {
            improve(state, it, gt, d, obs);
            improve(state, gt, it, d, obs);
        } else {
            return;
        }
    }
}

fn current_cluster(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    state: &mut NndState,
    i: usize,
    counter: &mut CallCounter,
    obs: &mut dyn FnMut(HstEvent),
) -> bool {
    let s = stats.window();
    for &j in index.members(index.cluster_of(i)) {
        if is_self_match(i, j, s) {
            continue;
        }
        // A distance above both bounds can improve neither endpoint.
        let limit = state.nnd[i].max(state.nnd[j]);
        if let Some(d) = znorm_distance(ts, stats, i, j, Some(limit), counter) {
            improve(state, i, j, d, obs);
            improve(state, j, i, d, obs);
        }
        if state.nnd[i] < state.best_dist {
            return false;
        }
    }
    true
}

/// Scans everything outside i's own cluster, smallest cluster first, in a
/// seeded random order inside each cluster. Rare shapes are checked before
/// common ones, so unusual candidates meet their likeliest close match
/// early.
#[allow(clippy::too_many_arguments)]
fn other_clusters<R: Rng>(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    state: &mut NndState,
    i: usize,
    scratch: &mut Vec<usize>,
    counter: &mut CallCounter,
    rng: &mut R,
    obs: &mut dyn FnMut(HstEvent),
) -> bool {
    let s = stats.window();
    let c = index.cluster_of(i);
    for &cl in index.cluster_order() {
        if cl == c {
            continue;
        }
        scratch.clear();
        scratch.extend_from_slice(index.members(cl));
        // Lazy Fisher-Yates: draw the shuffle only as far as the scan
        // actually gets.
        let m = scratch.len();
        for t in 0..m {
            let pick = rng.gen_range(t..m);
            scratch.swap(t, pick);
            let j = scratch[t];
            if is_self_match(i, j, s) {
                continue;
            }
            let limit = state.nnd[i].max(state.nnd[j]);
            if let Some(d) = znorm_distance(ts, stats, i, j, Some(limit), counter) {
                improve(state, i, j, d, obs);
                improve(state, j, i, d, obs);
            }
            if state.nnd[i] < state.best_dist {
                return false;
            }
        }
    }
    true
}

/// HST discord search with the default options and no observer.
pub fn hst_discords<R: Rng>(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    params: &SearchParams,
    counter: &mut CallCounter,
    rng: &mut R,
) -> DiscordResult {
    hst_discords_observed(
        ts,
        stats,
        index,
        params,
        HstOptions::default(),
        counter,
        rng,
        &mut |_| {},
    )
}

/// Full HST search. Output is identical to the brute force for every k
/// and seed; only the call count depends on them.
///
/// The search runs in two stages. Setup seeds the bounds: a warm-up pass
/// over chained shuffled clusters, then the short-range topology pass, at
/// most 3N calls together. The outer loop then visits candidates in
/// descending smoothed-bound order; each candidate is skipped outright if
/// its bound is already beaten, otherwise minimized against its own
/// cluster and then the remaining clusters smallest-first, while the
/// long-range pass projects each confirmed match along the time axis.
/// Every distance improves both
/// endpoints, surviving candidates re-sort the remaining order, and for
/// later discords the accumulated bounds are kept: only the order is
/// rebuilt and the bar reset, which is why k > 1 costs little more than
/// k = 1.
#[allow(clippy::too_many_arguments)]
pub fn hst_discords_observed<R: Rng>(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    params: &SearchParams,
    options: HstOptions,
    counter: &mut CallCounter,
    rng: &mut R,
    obs: &mut dyn FnMut(HstEvent),
) -> DiscordResult {
    let n = stats.len();
    let s = stats.window();
    let setup_start = counter.count();

    let mut state = NndState::new(n);
    warm_up(ts, stats, index, &mut state, counter, rng, obs);
    short_range_topology(ts, stats, &mut state, counter, obs);
    debug_assert!(counter.count() - setup_start <= 3 * n as u64);
    let smoothed = smooth_nnd(&state.nnd, s);
    state.order = sort_external(&smoothed);

    let mut excluded = vec![false; n];
    let mut scratch: Vec<usize> = Vec::with_capacity(n);
    let mut discords = Vec::new();
    let mut calls_per_discord = Vec::new();
    let mut truncated = false;
    // Setup calls are charged to the first discord.
    let mut discord_start = setup_start;

    for m in 0..params.k {
        if m > 0 {
            // Keep every bound learned so far; just rebuild the order from
            // the raw bounds and drop excluded candidates.
            let full = sort_external(&state.nnd);
            state.order = full.into_iter().filter(|&i| !excluded[i]).collect();
        }
        state.best_dist = 0.0;
        let mut best: Option<usize> = None;
        let mut pos = 0;
        while pos < state.order.len() {
            let i = state.order[pos];
            pos += 1;
            if excluded[i] {
                continue;
            }
            let mut can_be_discord = true;
            if state.nnd[i] < state.best_dist {
                obs(HstEvent::Skipped {
                    seq: i,
                    best_dist: state.best_dist,
                });
                can_be_discord = false;
            }
            if can_be_discord {
                can_be_discord = current_cluster(ts, stats, index, &mut state, i, counter, obs);
            }
            if can_be_discord {
                can_be_discord = other_clusters(
                    ts, stats, index, &mut state, i, &mut scratch, counter, rng, obs,
                );
            }
            if !options.gate_long_range || can_be_discord {
                long_range_topology_forw(ts, stats, &mut state, i, options, counter, obs);
                long_range_topology_back(ts, stats, &mut state, i, options, counter, obs);
            }
            if can_be_discord {
                obs(HstEvent::Survived {
                    seq: i,
                    nnd: state.nnd[i],
                });
                // Ties (mutual nearest neighbors share one exact distance)
                // resolve to the lowest position, matching the brute force.
                let wins = match best {
                    None => true,
                    Some(b) => {
                        state.nnd[i] > state.best_dist
                            || (state.nnd[i] == state.best_dist && i < b)
                    }
                };
                if wins {
                    best = Some(i);
                    state.best_dist = state.nnd[i];
                }
                // The updates above go stale fast; keep the strongest
                // remaining candidates in front.
                let NndState { nnd, order, .. } = &mut state;
                order[pos..].sort_by(by_value_desc(nnd));
            }
        }
        match best {
            None => {
                truncated = true;
                break;
            }
            Some(p) => {
                exclude_around(&mut excluded, p, s);
                discords.push(Discord {
                    position: p,
                    nnd: state.nnd[p],
                });
                calls_per_discord.push(counter.count() - discord_start);
                discord_start = counter.count();
            }
        }
    }
    DiscordResult {
        discords,
        truncated,
        calls_per_discord,
    }
}
