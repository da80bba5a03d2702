use serde::Serialize;
use serde_json::{json, Value};

use super::CliError;

/// Version of the JSON output layout described in `docs/output.schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn csv_opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub(crate) struct Envelope {
    command: &'static str,
    params: Value,
    seed: Option<u64>,
    rng: Option<&'static str>,
}

impl Envelope {
    pub(crate) fn new<P: Serialize>(command: &'static str, params: &P) -> Self {
        Self {
            command,
            params: serde_json::to_value(params).expect("parameters serialize"),
            seed: None,
            rng: None,
        }
    }

    pub(crate) fn seeded(mut self, seed: u64, rng: &'static str) -> Self {
        self.seed = Some(seed);
        self.rng = Some(rng);
        self
    }

    pub(crate) fn render<T: Serialize>(self, data: &[T]) -> Result<String, CliError> {
        let doc = json!({
            "meta": {
                "version": SCHEMA_VERSION,
                "tool": concat!("qwalk ", env!("CARGO_PKG_VERSION")),
                "command": self.command,
                "params": self.params,
                "seed": self.seed,
                "rng": self.rng,
            },
            "data": data,
        });
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}
