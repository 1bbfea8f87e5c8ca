//! Scenario files: a flat JSON object describing one experiment.

use std::fmt;

use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    MinEntropy,
    BiasCheck,
    EncryptDemo,
    IndistSweep,
    LowerBound,
    KeylenTable,
    GlDemo,
}

impl Command {
    pub fn as_str(&self) -> &'static str {
        match self {
            Command::MinEntropy => "min-entropy",
            Command::BiasCheck => "bias-check",
            Command::EncryptDemo => "encrypt-demo",
            Command::IndistSweep => "indist-sweep",
            Command::LowerBound => "lower-bound",
            Command::KeylenTable => "keylen-table",
            Command::GlDemo => "gl-demo",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CipherChoice {
    As,
    Xu,
    Pad,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    pub n: Option<usize>,
    pub t: Option<f64>,
    pub epsilon: Option<f64>,
    pub cipher: Option<CipherChoice>,
    pub m: Option<u32>,
    pub delta: Option<f64>,
    pub key_count: Option<u64>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub output_path: Option<String>,
}

/// Why a scenario file was rejected.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioError {
    Syntax { line: usize, column: usize, message: String },
    Field { field: &'static str, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::Syntax { line, column, message } => {
                write!(f, "line {line}, column {column}: {message}")
            }
            ScenarioError::Field { field, message } => write!(f, "field `{field}`: {message}"),
        }
    }
}

impl std::error::Error for ScenarioError {}

/// Largest message length for the quantum commands.
pub const MAX_QUANTUM_N: usize = 4;
pub const MAX_TRIALS: usize = 100_000;

fn field(field: &'static str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Field { field, message: message.into() }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.validate()?;
        Ok(s)
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(1)
    }

    /// Message length, defaulting to one qubit (two bits for `gl-demo`).
    pub fn n(&self) -> usize {
        self.n.unwrap_or(match self.command {
            Command::GlDemo => 2,
            Command::BiasCheck => 4,
            _ => 1,
        })
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        let n = self.n();
        let max_n = match self.command {
            Command::BiasCheck => crate::gf2::MAX_BIAS_BITS,
            Command::GlDemo => crate::harness::adversary::MAX_GL_BITS as usize,
            Command::KeylenTable => 32,
            _ => MAX_QUANTUM_N,
        };
        if n == 0 || n > max_n {
            return Err(field("n", format!("{n} outside 1..={max_n} for {}", self.command.as_str())));
        }
        if let Some(t) = self.t {
            if !t.is_finite() || t < -(n as f64) || t > n as f64 {
                return Err(field("t", format!("{t} outside [-{n}, {n}]")));
            }
        }
        if let Some(e) = self.epsilon {
            if !(e > 0.0 && e <= 1.0) {
                return Err(field("epsilon", format!("{e} outside (0, 1]")));
            }
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d <= 1.0) {
                return Err(field("delta", format!("{d} outside (0, 1]")));
            }
        }
        if let Some(m) = self.m {
            if m == 0 || m > crate::gf2::MAX_DEGREE || 2 * m > 24 {
                return Err(field("m", format!("{m} outside 1..=12")));
            }
        }
        if self.m.is_some() && self.delta.is_some() {
            return Err(field("delta", "give either `m` or `delta`, not both"));
        }
        if let Some(k) = self.key_count {
            let max = if n < 32 { 1u64 << (2 * n.min(16)) } else { u64::MAX };
            if k == 0 || k > max {
                return Err(field("key_count", format!("{k} outside 1..={max}")));
            }
        }
        if let Some(t) = self.trials {
            if t == 0 || t > MAX_TRIALS {
                return Err(field("trials", format!("{t} outside 1..={MAX_TRIALS}")));
            }
        }
        if let Some(p) = &self.output_path {
            if p.is_empty() {
                return Err(field("output_path", "empty path"));
            }
        }
        if matches!(self.command, Command::EncryptDemo | Command::IndistSweep) && self.cipher.is_none() {
            return Err(field("cipher", format!("required for {}", self.command.as_str())));
        }
        Ok(())
    }
}
