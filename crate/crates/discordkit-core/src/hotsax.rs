use rand::seq::SliceRandom;
use rand::Rng;

use crate::distance::{znorm_distance, CallCounter};
use crate::exact::{exclude_around, Discord, DiscordResult};
use crate::sax::SaxIndex;
use crate::series::{is_self_match, SearchParams, SequenceStats, TimeSeries};

/// HOT SAX discord search. Returns exactly what the brute force returns,
/// usually after far fewer distance calls: candidates are visited rarest
/// SAX word first, each candidate minimizes over its own cluster before
/// the rest, and a candidate is dropped the moment its running minimum
/// falls under the best discord distance seen so far.
///
/// Each of the k discord searches restarts from nothing; no neighbor
/// information survives between them. That restart cost is the price the
/// algorithm pays for k > 1, and the reason its call count grows roughly
/// linearly with k.
pub fn hotsax_discords<R: Rng>(
    ts: &TimeSeries,
    stats: &SequenceStats,
    index: &SaxIndex,
    params: &SearchParams,
    counter: &mut CallCounter,
    rng: &mut R,
) -> DiscordResult {
    let n = stats.len();
    let s = stats.window();
    let mut excluded = vec![false; n];
    // Scratch for the lazy Fisher-Yates sweep; any starting arrangement
    // yields a uniform permutation, so it is never reset.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut discords = Vec::new();
    let mut calls_per_discord = Vec::new();
    let mut truncated = false;

    for _ in 0..params.k {
        let start = counter.count();
        let mut best: Option<Discord> = None;
        let mut best_dist = 0.0f64;
        for &c in index.cluster_order() {
            let mut outer = index.members(c).to_vec();
            outer.shuffle(rng);
            for &i in &outer {
                if excluded[i] {
                    continue;
                }
                let mut r = f64::INFINITY;
                let mut aborted = false;
                // Own cluster first: likeliest to hold the true nearest
                // neighbor, so the running minimum collapses early.
                for &j in index.members(c) {
                    if is_self_match(i, j, s) {
                        continue;
                    }
                    if let Some(d) = znorm_distance(ts, stats, i, j, Some(r), counter) {
                        if d < r {
                            r = d;
                        }
                    }
                    if r < best_dist {
                        aborted = true;
                        break;
                    }
                }
                if !aborted {
                    // Everyone else, one fresh pseudo-random order per
                    // candidate.
                    let mut t = 0;
                    while t < n {
                        let pick = rng.gen_range(t..n);
                        perm.swap(t, pick);
                        let j = perm[t];
                        t += 1;
                        if index.cluster_of(j) == c || is_self_match(i, j, s) {
                            continue;
                        }
                        if let Some(d) = znorm_distance(ts, stats, i, j, Some(r), counter) {
                            if d < r {
                                r = d;
                            }
                        }
                        if r < best_dist {
                            aborted = true;
                            break;
                        }
                    }
                }
                // Ties (mutual nearest neighbors share one exact distance)
                // resolve to the lowest position, matching the brute force.
                let wins = match &best {
                    None => true,
                    Some(b) => r > best_dist || (r == best_dist && i < b.position),
                };
                if !aborted && wins {
                    best = Some(Discord { position: i, nnd: r });
                    best_dist = r;
                }
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
