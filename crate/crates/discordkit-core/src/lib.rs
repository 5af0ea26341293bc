//! Exact discord discovery for univariate time series.
//!
//! A discord is the sequence whose distance to its nearest non-overlapping
//! neighbor is largest. This crate provides three searches that return
//! identical results at very different costs: a quadratic brute force,
//! the HOT SAX heuristic ordering, and HST, which extends HOT SAX with
//! time-topology updates and a reusable neighbor-distance state.

pub mod distance;
pub mod error;
pub mod exact;
pub mod hotsax;
pub mod hst;
pub mod sax;
pub mod series;

pub use distance::{znorm_distance, CallCounter, SIGMA_FLOOR};
pub use error::Error;
pub use exact::{brute_force_discords, exact_nnd_profile, Discord, DiscordResult, NndProfile};
pub use hotsax::hotsax_discords;
pub use hst::{
    hst_discords, hst_discords_observed, long_range_topology_back, long_range_topology_forw,
    short_range_topology, smooth_nnd, sort_external, warm_up, warm_up_chain, warm_up_scan,
    HstEvent, HstOptions, NndState,
};
pub use sax::{breakpoints, build_index, paa, sax_word, SaxIndex};
pub use series::{compute_stats, is_self_match, SearchParams, SequenceStats, TimeSeries};

/// The RNG used by every seeded ordering in this crate. A small, fast,
/// portable generator keeps runs reproducible across platforms.
pub type SearchRng = rand_chacha::ChaCha8Rng;

/// Builds the crate-standard RNG from a seed.
pub fn seeded_rng(seed: u64) -> SearchRng {
    use rand::SeedableRng;
    SearchRng::seed_from_u64(seed)
}
