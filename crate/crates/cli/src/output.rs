use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// Exit status of a successful run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

/// What a command produced: a text rendering and a JSON value.
pub struct Output {
    pub text: String,
    pub json: Value,
    pub status: Status,
}

impl Output {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Output { text: text.into(), json, status: Status::Ok }
    }

    pub fn from_serialize(text: impl Into<String>, value: &impl Serialize) -> Self {
        Self::new(text, to_json(value))
    }

    pub fn with_status(mut self, status: Status) -> Self {
        self.status = status;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.trim_end().to_string(),
            Format::Json => render_json(&self.json),
        }
    }
}

pub fn to_json(value: &impl Serialize) -> Value {
    serde_json::to_value(value).expect("report types serialize")
}

/// Pretty JSON with sorted keys; `serde_json::Map` is ordered by key.
pub fn render_json(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values render")
}
