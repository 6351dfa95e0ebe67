//! Machine-readable verdicts. Every map is a `BTreeMap` so the serialized
//! bytes depend only on the content.

use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::falsify::Evidence;

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub value: bool,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputDigest {
    /// `file` or `builtin`.
    pub kind: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub tool: String,
    pub format_version: String,
    pub command: String,
    pub inputs: BTreeMap<String, InputDigest>,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub holds: bool,
    pub exit_code: i32,
    pub claims: BTreeMap<String, Claim>,
    pub scalars: BTreeMap<String, Option<f64>>,
    pub labels: BTreeMap<String, String>,
    pub tables: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl VerdictReport {
    pub fn new(command: &str, seed: u64, tolerances: Tolerances) -> Self {
        Self {
            tool: "gksl-kit".into(),
            format_version: super::format::VERSION.into(),
            command: command.into(),
            inputs: BTreeMap::new(),
            seed,
            tolerances,
            holds: false,
            exit_code: EXIT_FALSE,
            claims: BTreeMap::new(),
            scalars: BTreeMap::new(),
            labels: BTreeMap::new(),
            tables: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn input(&mut self, name: &str, kind: &str, bytes: &[u8]) {
        self.inputs.insert(name.into(), InputDigest {
            kind: kind.into(),
            sha256: sha256_hex(bytes),
        });
    }

    pub fn claim(&mut self, name: &str, value: bool, evidence: Evidence) {
        self.claims.insert(name.into(), Claim { value, evidence });
    }

    /// Non-finite values serialize as `null`.
    pub fn scalar(&mut self, name: &str, value: f64) {
        self.scalars.insert(name.into(), value.is_finite().then_some(value));
    }

    pub fn label(&mut self, name: &str, value: impl Into<String>) {
        self.labels.insert(name.into(), value.into());
    }

    pub fn table<S: Serialize>(&mut self, name: &str, rows: &S) {
        self.tables
            .insert(name.into(), serde_json::to_value(rows).expect("serializable"));
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Sets the overall verdict and the matching exit code.
    pub fn conclude(&mut self, holds: bool) {
        self.holds = holds;
        self.exit_code = if holds { EXIT_HOLDS } else { EXIT_FALSE };
    }

    pub fn to_json(&self) -> String {
        super::format::to_json(self)
    }
}
