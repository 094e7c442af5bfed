use std::fmt::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Outcome of one command, replayable from `seed` and the input `digest`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    /// SHA-256 of the input files, in argument order.
    pub digest: String,
    pub seed: u64,
    pub prime: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    pub size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<[usize; 2]>>,
    /// Edges of a path-matching with file vertex names.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_names: Option<Vec<[String; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exists: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_exists: Option<bool>,
    pub attempts: u32,
    pub verified: bool,
    pub field_mul_count: u64,
    pub wall_time_ms: f64,
}

impl RunReport {
    pub fn new(command: &str, digest: String, seed: u64, prime: u64) -> Self {
        RunReport {
            command: command.into(),
            digest,
            seed,
            prime,
            algorithm: None,
            size: 0,
            elements: None,
            edges: None,
            edge_names: None,
            exists: None,
            oracle_size: None,
            oracle_exists: None,
            attempts: 0,
            verified: false,
            field_mul_count: 0,
            wall_time_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let alg = self.algorithm.as_deref().map(|a| format!(" ({a})")).unwrap_or_default();
        writeln!(s, "{}{alg}: size {}", self.command, self.size).unwrap();
        if let Some(e) = self.exists {
            writeln!(s, "exists: {e}").unwrap();
        }
        if let Some(names) = &self.edge_names {
            let list: Vec<String> = names.iter().map(|[u, v]| format!("{u}-{v}")).collect();
            writeln!(s, "edges: {}", list.join(" ")).unwrap();
        } else if let Some(edges) = &self.edges {
            let list: Vec<String> = edges.iter().map(|[u, v]| format!("{u}-{v}")).collect();
            writeln!(s, "edges: {}", list.join(" ")).unwrap();
        }
        if let Some(el) = &self.elements {
            let list: Vec<String> = el.iter().map(|e| e.to_string()).collect();
            writeln!(s, "elements: {}", list.join(" ")).unwrap();
        }
        if let Some(o) = self.oracle_size {
            writeln!(s, "oracle size: {o}").unwrap();
        }
        if let Some(o) = self.oracle_exists {
            writeln!(s, "oracle exists: {o}").unwrap();
        }
        writeln!(s, "verified: {}", self.verified).unwrap();
        writeln!(
            s,
            "seed {} prime {} attempts {} field muls {} time {:.3} ms",
            self.seed, self.prime, self.attempts, self.field_mul_count, self.wall_time_ms
        )
        .unwrap();
        writeln!(s, "input sha256 {}", self.digest).unwrap();
        s
    }
}

/// SHA-256 over the inputs, each followed by a zero byte.
pub fn digest(inputs: &[&str]) -> String {
    let mut h = Sha256::new();
    for text in inputs {
        h.update(text.as_bytes());
        h.update([0u8]);
    }
    hex::encode(h.finalize())
}
