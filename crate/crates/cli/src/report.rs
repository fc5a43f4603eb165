use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= threshold`; NaN never passes.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value <= threshold }
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Check { name: name.into(), value, threshold, pass: value >= threshold }
    }
}

#[derive(Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub sha256: String,
    pub rows: usize,
    pub cols: usize,
}

#[derive(Debug, Serialize)]
pub struct WallTimes {
    pub compute: f64,
    pub verify: f64,
    pub total: f64,
}

#[derive(Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input: Option<InputInfo>,
    pub parameters: Map<String, Value>,
    pub outputs: Vec<String>,
    pub summary: String,
    pub values: Map<String, Value>,
    pub checks: Vec<Check>,
    pub wall_seconds: WallTimes,
    pub ok: bool,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.into(),
            input: None,
            parameters: Map::new(),
            outputs: Vec::new(),
            summary: String::new(),
            values: Map::new(),
            checks: Vec::new(),
            wall_seconds: WallTimes { compute: 0.0, verify: 0.0, total: 0.0 },
            ok: false,
            exit_code: 0,
            error: None,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<Value>) {
        self.parameters.insert(key.into(), v.into());
    }

    pub fn value(&mut self, key: &str, v: impl Into<Value>) {
        self.values.insert(key.into(), v.into());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}
