use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::CliError;

/// Significant digits kept for every float in the results block.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool_version: String,
    pub seed: u64,
    /// Function evaluations spent by sup probes during the run.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummaryRow {
    pub label: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub config: ExperimentConfig,
    /// Task output. Floats are rounded; non-finite values appear as `null`.
    pub results: Value,
    /// False when a verification task found a violation.
    pub pass: bool,
    pub summary: Vec<SummaryRow>,
    pub provenance: Provenance,
    pub timing: Timing,
}

/// Round `x` to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Decimal rendering with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn decimal(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let places = (SIGNIFICANT_DIGITS as i32 - 1 - magnitude).max(0) as usize;
        format!("{x:.places$}")
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_sig(x))) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Sum of every `evaluations` counter in `v`.
pub fn count_evaluations(v: &Value) -> u64 {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, x)| match (k.as_str(), x.as_u64()) {
                ("evaluations", Some(n)) => n,
                _ => count_evaluations(x),
            })
            .sum(),
        Value::Array(items) => items.iter().map(count_evaluations).sum(),
        _ => 0,
    }
}

/// First value stored under `key`, searched depth first.
pub fn find_key<'a>(v: &'a Value, key: &str) -> Option<&'a Value> {
    match v {
        Value::Object(map) => map
            .get(key)
            .filter(|x| !x.is_null())
            .or_else(|| map.values().find_map(|x| find_key(x, key))),
        Value::Array(items) => items.iter().find_map(|x| find_key(x, key)),
        _ => None,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("report: {e}")))
    }

    /// The results block alone, as written to golden files.
    pub fn results_json(&self) -> String {
        serde_json::to_string_pretty(&self.results).expect("results serialize") + "\n"
    }

    pub fn summary_table(&self) -> String {
        let mut rows = vec![
            ("task".to_string(), self.config.task.name().to_string()),
            ("status".to_string(), if self.pass { "PASS" } else { "FAIL" }.to_string()),
        ];
        rows.extend(self.summary.iter().map(|r| (r.label.clone(), r.value.clone())));
        rows.push(("evaluations".into(), self.provenance.evaluations.to_string()));
        rows.push(("seconds".into(), format!("{:.3}", self.timing.wall_seconds)));
        let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (label, value) in rows {
            let _ = writeln!(out, "{label:<width$}  {value}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round_sig(2.0 / 3.0), 0.666666666667);
        assert_eq!(round_sig(-1.0 / 3.0), -0.333333333333);
        assert_eq!(round_sig(2.0), 2.0);
        assert_eq!(decimal(std::f64::consts::FRAC_PI_2), "1.57079632679");
        assert_eq!(decimal(1.0), "1.00000000000");
        assert_eq!(decimal(1e-7), "1.00000000000e-7");
    }

    #[test]
    fn rounding_walks_nested_values() {
        let mut v = serde_json::json!({"a": [0.1 + 0.2, 3], "b": {"c": 1.0 / 7.0}});
        round_floats(&mut v);
        assert_eq!(v, serde_json::json!({"a": [0.3, 3], "b": {"c": 0.142857142857}}));
    }

    #[test]
    fn evaluation_counts_are_summed() {
        let v = serde_json::json!({"x": {"evaluations": 5}, "y": [{"evaluations": 7}, {"z": 1}]});
        assert_eq!(count_evaluations(&v), 12);
    }
}
