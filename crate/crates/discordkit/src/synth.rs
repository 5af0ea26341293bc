use crate::error::Error;
use discordkit_core::{seeded_rng, TimeSeries};
use rand::Rng;

/// Parameters of the rescaled-sine-plus-noise generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub length: usize,
    /// Noise amplitude E; the uniform draw is scaled by it.
    pub e: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.length < 2 {
            return Err(Error::invalid(format!(
                "synthetic length must be >= 2, got {}",
                self.length
            )));
        }
        if !self.e.is_finite() || self.e < 0.0 {
            return Err(Error::invalid(format!(
                "noise amplitude must be finite and >= 0, got {}",
                self.e
            )));
        }
        Ok(())
    }

    /// Stable identifier used as the dataset name in reports.
    pub fn id(&self) -> String {
        format!("synth-L{}-E{}-S{}", self.length, self.e, self.seed)
    }
}

/// p_i = (sin(0.1 i) + E*eps + 1) / 2.5 with eps drawn uniformly from
/// [0, 1); deterministic for a given spec.
pub fn gen_sine_noise(spec: &SyntheticSpec) -> Result<TimeSeries, Error> {
    spec.validate()?;
    let mut rng = seeded_rng(spec.seed);
    let points = (0..spec.length)
        .map(|i| ((0.1 * i as f64).sin() + spec.e * rng.gen::<f64>() + 1.0) / 2.5)
        .collect();
    Ok(TimeSeries::new(points)?)
}

/// Unit-step random walk, the instance family used for scaling tests.
pub fn gen_random_walk(length: usize, seed: u64) -> Result<TimeSeries, Error> {
    if length < 2 {
        return Err(Error::invalid(format!(
            "walk length must be >= 2, got {length}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut level = 0.0f64;
    let points = (0..length)
        .map(|_| {
            level += rng.gen::<f64>() - 0.5;
            level
        })
        .collect();
    Ok(TimeSeries::new(points)?)
}
