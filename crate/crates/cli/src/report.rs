use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Deterministic record of one invocation. Rationals are "p/q" strings.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub input_sha256: String,
    pub results: BTreeMap<String, Value>,
    pub citations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_us: Option<u64>,
    #[serde(skip)]
    lines: Vec<String>,
    #[serde(skip)]
    started: Option<Instant>,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: &[&[u8]], timing: bool) -> Self {
        let mut hasher = Sha256::new();
        for input in inputs {
            hasher.update((input.len() as u64).to_le_bytes());
            hasher.update(input);
        }
        Self {
            command,
            input_sha256: hex::encode(hasher.finalize()),
            results: BTreeMap::new(),
            citations: Vec::new(),
            timing_us: None,
            lines: Vec::new(),
            started: timing.then(Instant::now),
        }
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_string(), value.into());
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn cite(&mut self, text: impl Into<String>) {
        let text = text.into();
        if !self.citations.contains(&text) {
            self.citations.push(text);
        }
    }

    pub fn render(mut self, json: bool) -> String {
        if let Some(start) = self.started {
            self.timing_us = Some(start.elapsed().as_micros() as u64);
        }
        if json {
            let mut s = serde_json::to_string_pretty(&self).expect("report serializes");
            s.push('\n');
            return s;
        }
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for c in &self.citations {
            out.push_str("cite: ");
            out.push_str(c);
            out.push('\n');
        }
        if let Some(t) = self.timing_us {
            out.push_str(&format!("time: {t} us\n"));
        }
        out
    }
}
