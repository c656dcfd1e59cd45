//! Machine-readable command reports: `{"command","parameters","result","status"}`.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// The computation succeeded and the checked property holds.
    Ok,
    /// The computation succeeded but the checked property fails.
    False,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub result: Value,
    pub status: Status,
}

impl Report {
    pub fn new(command: &str, parameters: Map<String, Value>, result: Value, holds: bool) -> Report {
        Report {
            command: command.to_string(),
            parameters,
            result,
            status: if holds { Status::Ok } else { Status::False },
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::False => 1,
        }
    }

    /// Pretty JSON; object keys are sorted, so equal reports give equal bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
