use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    FlMerge,
    FlEuclid,
    Interleaving,
    Edit,
    Alignment,
    Hausdorff,
    CurveFrechet,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::FlMerge => "fl-merge",
            Metric::FlEuclid => "fl-euclid",
            Metric::Interleaving => "interleaving",
            Metric::Edit => "edit",
            Metric::Alignment => "alignment",
            Metric::Hausdorff => "hausdorff",
            Metric::CurveFrechet => "curve-frechet",
        }
    }
}

/// Result of a distance computation, serialized as
/// `{"metric": str, "value": float, "witness": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub metric: Metric,
    pub value: f64,
    #[serde(default)]
    pub witness: Option<Value>,
    #[serde(rename = "params", default)]
    pub parameters: Value,
}

impl DistanceReport {
    pub fn new(metric: Metric, value: f64) -> Self {
        DistanceReport {
            metric,
            value,
            witness: None,
            parameters: Value::Object(Default::default()),
        }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn with_params(mut self, params: Value) -> Self {
        self.parameters = params;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// A failed condition found by one of the checkers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Short condition name, such as "totality" or "continuity".
    pub condition: String,
    pub detail: String,
}
