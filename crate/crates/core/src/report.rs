//! Report payload schemas, the envelope written by the command-line tool,
//! and a validator that checks payloads against those schemas.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::constructions::{CounterexampleReport, Example42Report, ThresholdScan};
use crate::error::{Error, Result};
use crate::extremal::SearchResult;
use crate::functionals::{crude_bound, ratio_to_conjectured};
use crate::norm::{coefficient_bound, NormResult};
use crate::verify::VerifySummary;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const COMMANDS: [&str; 7] = [
    "bn",
    "norm",
    "functional",
    "search",
    "counterexample",
    "example42",
    "verify",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BnRow {
    pub n: usize,
    pub b_n: f64,
    pub n_b_n_sq: f64,
    /// Undefined for `n = 1`.
    pub crude_bound: Option<f64>,
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BnTable {
    pub rows: Vec<BnRow>,
}

pub fn bn_table(n_max: usize) -> Result<BnTable> {
    let rows = (1..=n_max)
        .map(|n| {
            let b = coefficient_bound(n)?;
            Ok(BnRow {
                n,
                b_n: b,
                n_b_n_sq: n as f64 * b * b,
                crude_bound: (n >= 2).then(|| crude_bound(n)).transpose()?,
                ratio: (n >= 2).then(|| ratio_to_conjectured(n)).transpose()?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(BnTable { rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalReport {
    pub n: usize,
    pub t: f64,
    pub value: f64,
    /// `n^t B_n²`.
    pub conjectured_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexamplePayload {
    pub report: CounterexampleReport,
    pub scan: Option<ThresholdScan>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub name: String,
    pub parameters: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportEnvelope {
    pub tool_version: String,
    pub seed: u64,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub command: CommandEcho,
    pub payload: Value,
    pub wall_time_seconds: f64,
}

impl ReportEnvelope {
    pub fn new(command: CommandEcho, seed: u64, payload: Value, wall_time_seconds: f64) -> Self {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            tool_version: TOOL_VERSION.to_string(),
            seed,
            timestamp,
            command,
            payload,
            wall_time_seconds,
        }
    }
}

fn round_trip<T: Serialize + DeserializeOwned>(payload: &Value) -> Result<()> {
    let typed: T =
        serde_json::from_value(payload.clone()).map_err(|e| Error::Format(e.to_string()))?;
    let back = serde_json::to_value(&typed).map_err(|e| Error::Format(e.to_string()))?;
    if &back == payload {
        Ok(())
    } else {
        Err(Error::Format(
            "payload does not survive a typed round trip".into(),
        ))
    }
}

/// Checks `payload` against the schema of `command`: it must deserialize
/// into the typed report (unknown fields rejected) and serialize back to the
/// identical JSON value.
pub fn validate_payload(command: &str, payload: &Value) -> Result<()> {
    match command {
        "bn" => round_trip::<BnTable>(payload),
        "norm" => round_trip::<NormResult>(payload),
        "functional" => round_trip::<FunctionalReport>(payload),
        "search" => round_trip::<SearchResult>(payload),
        "counterexample" => round_trip::<CounterexamplePayload>(payload),
        "example42" => round_trip::<Example42Report>(payload),
        "verify" => round_trip::<VerifySummary>(payload),
        other => Err(Error::Format(format!("unknown command {other:?}"))),
    }
}

/// Parses an envelope and validates its payload.
pub fn validate_envelope(text: &str) -> Result<ReportEnvelope> {
    let envelope: ReportEnvelope =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    validate_payload(&envelope.command.name, &envelope.payload)?;
    Ok(envelope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{counterexample_verify, example42_verify};
    use crate::norm::seminorm_radial;
    use crate::poly::Coefficients;

    #[test]
    fn bn_table_rows() {
        let table = bn_table(10).unwrap();
        assert_eq!(table.rows.len(), 10);
        assert_eq!(table.rows[0].crude_bound, None);
        assert_eq!(table.rows[1].crude_bound, Some(4.0));
        assert!((table.rows[9].ratio.unwrap() - 1.40198).abs() <= 1e-5);
    }

    #[test]
    fn payloads_validate() {
        let v = serde_json::to_value(bn_table(3).unwrap()).unwrap();
        validate_payload("bn", &v).unwrap();
        let f = Coefficients::from_real(&[1.0, 0.5]).unwrap();
        let v = serde_json::to_value(seminorm_radial(&f, 1e-10).unwrap()).unwrap();
        validate_payload("norm", &v).unwrap();
        let v = serde_json::to_value(CounterexamplePayload {
            report: counterexample_verify(0.0, 5).unwrap(),
            scan: None,
        })
        .unwrap();
        validate_payload("counterexample", &v).unwrap();
        let v = serde_json::to_value(example42_verify(2, 0.1).unwrap()).unwrap();
        assert!(v.get("norm_F").is_some());
        validate_payload("example42", &v).unwrap();
    }

    #[test]
    fn validator_rejects_drift() {
        let mut v = serde_json::to_value(bn_table(2).unwrap()).unwrap();
        v["extra"] = Value::Bool(true);
        assert!(validate_payload("bn", &v).is_err());
        let v = serde_json::json!({"value": 1.0});
        assert!(validate_payload("norm", &v).is_err());
        assert!(validate_payload("nope", &v).is_err());
    }

    #[test]
    fn envelope_round_trip() {
        let payload = serde_json::to_value(bn_table(2).unwrap()).unwrap();
        let echo = CommandEcho {
            name: "bn".into(),
            parameters: serde_json::Map::from_iter([("n_max".to_string(), Value::from(2))]),
        };
        let env = ReportEnvelope::new(echo, 0, payload, 0.5);
        let text = serde_json::to_string(&env).unwrap();
        assert_eq!(validate_envelope(&text).unwrap(), env);
    }
}
