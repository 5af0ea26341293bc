use crate::error::Error;
use serde::{Deserialize, Serialize};

/// Cost per sequence: distance calls divided by N and by the number of
/// discords found. Accepts fractional call counts so benchmark cells can
/// feed in per-run means.
pub fn cps(calls: f64, n: usize, k: usize) -> Result<f64, Error> {
    if n == 0 || k == 0 {
        return Err(Error::invalid(format!(
            "cps needs N >= 1 and k >= 1, got N={n}, k={k}"
        )));
    }
    if !(calls >= 0.0) {
        return Err(Error::invalid(format!("cps needs calls >= 0, got {calls}")));
    }
    Ok(calls / (n as f64 * k as f64))
}

/// Ratio of distance calls, baseline over subject: above 1 means the
/// subject needed fewer calls.
pub fn d_speedup(calls_baseline: f64, calls_subject: f64) -> Result<f64, Error> {
    if calls_subject <= 0.0 {
        return Err(Error::invalid("d_speedup needs subject calls > 0"));
    }
    Ok(calls_baseline / calls_subject)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TSpeedup {
    pub ratio: f64,
    /// Sub-second runs spend a visible share of time outside the distance
    /// function, so the ratio is reported but not trustworthy.
    pub low_confidence: bool,
}

/// Ratio of wall times, baseline over subject: above 1 means the subject
/// ran faster.
pub fn t_speedup(time_baseline: f64, time_subject: f64) -> Result<TSpeedup, Error> {
    if time_subject <= 0.0 {
        return Err(Error::invalid("t_speedup needs subject time > 0"));
    }
    Ok(TSpeedup {
        ratio: time_baseline / time_subject,
        low_confidence: time_baseline.min(time_subject) < 1.0,
    })
}
