use crate::error::Error;
use crate::metrics;
use discordkit_core::{DiscordResult, SearchParams};
use serde::{Deserialize, Serialize};

/// Serializes possibly-infinite distances as the string "inf" (JSON has no
/// infinity literal) and finite ones as plain numbers, full precision.
pub mod inf_float {
    use serde::de::{self, Unexpected};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = f64;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    _ => Err(E::invalid_value(Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDiscord {
    pub position: usize,
    #[serde(with = "inf_float")]
    pub nnd: f64,
}

/// One completed search: the discords plus everything needed to recompute
/// the cost metrics from raw fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub algorithm: String,
    pub dataset: String,
    pub s: usize,
    pub p: usize,
    pub a: usize,
    pub k: usize,
    pub seed: u64,
    pub num_sequences: usize,
    pub discords: Vec<ReportDiscord>,
    pub distance_calls: u64,
    pub calls_per_discord: Vec<u64>,
    pub wall_time_s: f64,
    pub cps: f64,
    pub truncated: bool,
}

impl SearchReport {
    pub fn from_result(
        algorithm: &str,
        dataset: &str,
        params: &SearchParams,
        num_sequences: usize,
        result: &DiscordResult,
        wall_time_s: f64,
    ) -> Result<Self, Error> {
        let distance_calls: u64 = result.calls_per_discord.iter().sum();
        let discords: Vec<ReportDiscord> = result
            .discords
            .iter()
            .map(|d| ReportDiscord {
                position: d.position,
                nnd: d.nnd,
            })
            .collect();
        let cps = metrics::cps(distance_calls as f64, num_sequences, discords.len())?;
        let report = Self {
            algorithm: algorithm.to_string(),
            dataset: dataset.to_string(),
            s: params.s,
            p: params.p,
            a: params.a,
            k: params.k,
            seed: params.seed,
            num_sequences,
            discords,
            distance_calls,
            calls_per_discord: result.calls_per_discord.clone(),
            wall_time_s,
            cps,
            truncated: result.truncated,
        };
        report.verify()?;
        Ok(report)
    }

    /// Rechecks the stored metrics against the raw fields; a failure means
    /// the report was tampered with or assembled inconsistently.
    pub fn verify(&self) -> Result<(), Error> {
        let total: u64 = self.calls_per_discord.iter().sum();
        if total != self.distance_calls {
            return Err(Error::Correctness(format!(
                "per-discord calls sum to {total}, report says {}",
                self.distance_calls
            )));
        }
        let expect = metrics::cps(self.distance_calls as f64, self.num_sequences, self.discords.len())?;
        if (expect - self.cps).abs() > 1e-9 * expect.max(1.0) {
            return Err(Error::Correctness(format!(
                "cps {} does not match recomputed {expect}",
                self.cps
            )));
        }
        Ok(())
    }
}

/// Rounds to 6 significant digits for CSV output; counts stay exact
/// integers elsewhere, and infinities print as "inf".
pub fn sig6(v: f64) -> String {
    if v.is_infinite() {
        return "inf".to_string();
    }
    if v == 0.0 {
        return "0.00000".to_string();
    }
    let exp = v.abs().log10().floor() as i32;
    if exp > 5 {
        format!("{:.5e}", v)
    } else {
        format!("{:.*}", (5 - exp).max(0) as usize, v)
    }
}
