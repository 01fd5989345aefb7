//! Machine-readable run reports for the CLI: named numeric results plus
//! pass/fail checks, emitted as JSON or CSV.
//!
//! Serialization is deterministic: fixed key order, floats printed with 17
//! significant digits (`{:.16e}`), and the timestamp can be suppressed so
//! identical (command, seed) pairs produce byte-identical files.

use std::time::{SystemTime, UNIX_EPOCH};

pub use crate::scenarios::Check;

#[derive(Debug, Clone)]
pub struct RunReport {
    pub version: String,
    pub seed: u64,
    /// Unix seconds; `None` when suppressed for reproducibility.
    pub timestamp_unix: Option<u64>,
    /// Echo of the parsed configuration.
    pub config: serde_json::Value,
    pub results: Vec<(String, f64)>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(
        seed: u64,
        with_timestamp: bool,
        config: serde_json::Value,
        results: Vec<(String, f64)>,
        checks: Vec<Check>,
    ) -> Self {
        let timestamp_unix = with_timestamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            timestamp_unix,
            config,
            results,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str("{\"version\":");
        out.push_str(&json_str(&self.version));
        out.push_str(",\"seed\":");
        out.push_str(&self.seed.to_string());
        if let Some(ts) = self.timestamp_unix {
            out.push_str(",\"timestamp_unix\":");
            out.push_str(&ts.to_string());
        }
        out.push_str(",\"config\":");
        out.push_str(&serde_json::to_string(&self.config).expect("config serializes"));
        out.push_str(",\"results\":[");
        for (i, (name, value)) in self.results.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"name\":");
            out.push_str(&json_str(name));
            out.push_str(",\"value\":");
            out.push_str(&fmt_f64(*value));
            out.push('}');
        }
        out.push_str("],\"checks\":[");
        for (i, check) in self.checks.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("{\"name\":");
            out.push_str(&json_str(&check.name));
            out.push_str(",\"pass\":");
            out.push_str(if check.pass { "true" } else { "false" });
            out.push_str(",\"observed\":");
            out.push_str(&fmt_f64(check.observed));
            out.push_str(",\"tolerance\":");
            out.push_str(&fmt_f64(check.tolerance));
            out.push('}');
        }
        out.push_str("]}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(1024);
        out.push_str("type,name,value,pass,observed,tolerance\n");
        out.push_str(&format!("meta,version,{},,,\n", self.version));
        out.push_str(&format!("meta,seed,{},,,\n", self.seed));
        if let Some(ts) = self.timestamp_unix {
            out.push_str(&format!("meta,timestamp_unix,{ts},,,\n"));
        }
        for (name, value) in &self.results {
            out.push_str(&format!("result,{},{},,,\n", csv_field(name), fmt_f64(*value)));
        }
        for check in &self.checks {
            out.push_str(&format!(
                "check,{},,{},{},{}\n",
                csv_field(&check.name),
                check.pass,
                fmt_f64(check.observed),
                fmt_f64(check.tolerance)
            ));
        }
        out
    }
}

/// 17 significant digits: enough to reproduce any f64 bit pattern.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no inf/nan literals; surface them as sentinel strings
        format!("\"{x}\"")
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
