//! The report envelope shared by every experiment, plus the statistical
//! verdict helpers.
//!
//! Verdicts against upper bounds use the three-standard-error rule: the
//! empirical rate may not exceed `bound + 3 * sqrt(bound * (1 - bound) / T)`.
//! Bounds at or above 1 are vacuous and always pass. Point predictions are
//! checked two-sided with the same sigma.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::fs;
use std::io;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ConfigError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub observed: String,
    pub threshold: String,
    pub detail: String,
}

impl Verdict {
    pub fn check(
        name: &str,
        pass: bool,
        observed: impl Display,
        threshold: impl Display,
        detail: impl Into<String>,
    ) -> Self {
        Self {
            name: name.to_string(),
            pass,
            observed: observed.to_string(),
            threshold: threshold.to_string(),
            detail: detail.into(),
        }
    }
}

/// Wall-clock data; the one section excluded from determinism comparisons.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub timestamp_ms: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub config: Value,
    pub derived: Value,
    pub trials: Vec<Value>,
    pub aggregate: Value,
    pub verdicts: Vec<Verdict>,
    pub timing: Timing,
}

impl ExperimentReport {
    pub fn new(experiment: &str, config: impl Serialize) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
            derived: Value::Null,
            trials: Vec::new(),
            aggregate: Value::Null,
            verdicts: Vec::new(),
            timing: Timing {
                timestamp_ms: 0,
                wall_ms: 0,
            },
        }
    }

    /// Stamps the timing section; call last.
    pub fn finish(&mut self, started: Instant) {
        self.timing = Timing {
            timestamp_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0),
            wall_ms: started.elapsed().as_millis() as u64,
        };
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn print_verdicts(&self) {
        for v in &self.verdicts {
            println!(
                "{} {}: observed={} threshold={} ({})",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.observed,
                v.threshold,
                v.detail
            );
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report as a JSON value with `timing` removed; what determinism
    /// comparisons look at.
    pub fn comparable_value(&self) -> Value {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(map) = &mut value {
            map.remove("timing");
        }
        value
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<(), ConfigError> {
        match format {
            ReportFormat::Json => {
                fs::write(path, self.to_json_pretty() + "\n")?;
            }
            ReportFormat::Csv => {
                let file = fs::File::create(path)?;
                self.write_trials_csv(file)
                    .map_err(|e| ConfigError(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// Flat per-trial CSV: the union of row keys, sorted, one column each.
    pub fn write_trials_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut keys: BTreeSet<String> = BTreeSet::new();
        for row in &self.trials {
            if let Value::Object(map) = row {
                keys.extend(map.keys().cloned());
            }
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(keys.iter())?;
        for row in &self.trials {
            let record: Vec<String> = keys
                .iter()
                .map(|k| match row.get(k) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(other) => other.to_string(),
                })
                .collect();
            writer.write_record(&record)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// One-sided acceptance threshold against an upper bound.
pub fn upper_threshold(bound: f64, trials: u64) -> f64 {
    if bound >= 1.0 {
        f64::INFINITY
    } else {
        bound + 3.0 * sigma(bound, trials)
    }
}

pub fn sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
