//! The machine-readable record of one run.

use std::fmt::Write as _;

use pfcirc::Scalar;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, Serialize)]
pub struct Value {
    pub name: String,
    /// Exact field coordinates, as printed by [`Scalar`].
    pub exact: String,
    pub approx: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub seed: u64,
    /// SHA-256 of the input files in the order read, or of the command line when there are none.
    pub inputs_digest: String,
    pub results: Vec<Value>,
    pub notes: Vec<String>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u128>,
}

pub fn approx(s: &Scalar) -> String {
    let z = s.to_complex();
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64) -> Self {
        RunReport {
            command,
            seed,
            inputs_digest: String::new(),
            results: Vec::new(),
            notes: Vec::new(),
            verdicts: Vec::new(),
            wall_clock_ms: None,
        }
    }

    pub fn value(&mut self, name: impl Into<String>, s: &Scalar) {
        self.results.push(Value {
            name: name.into(),
            exact: s.to_string(),
            approx: approx(s),
        });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn verdict(&mut self, check: impl Into<String>, pass: bool) {
        self.verdicts.push(Verdict {
            check: check.into(),
            pass,
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn set_digest(&mut self, inputs: &[Vec<u8>]) {
        let mut h = Sha256::new();
        if inputs.is_empty() {
            h.update(self.command.join("\0").as_bytes());
        }
        for bytes in inputs {
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(bytes);
        }
        self.inputs_digest = hex::encode(h.finalize());
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let width = self.results.iter().map(|v| v.name.len()).max().unwrap_or(0);
        for v in &self.results {
            let _ = writeln!(out, "{:width$}  {}  (~{})", v.name, v.exact, v.approx);
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "[{}] {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.check
            );
        }
        if let Some(ms) = self.wall_clock_ms {
            let _ = writeln!(out, "wall clock: {ms} ms");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximations() {
        assert_eq!(approx(&Scalar::sqrt2()), "1.414214");
        assert_eq!(
            approx(&(Scalar::from_i64(1) + Scalar::i())),
            "1.000000+1.000000i"
        );
    }

    #[test]
    fn digest_depends_on_inputs() {
        let mut a = RunReport::new(vec!["eval".into()], 1);
        let mut b = a.clone();
        a.set_digest(&[b"{}".to_vec()]);
        b.set_digest(&[b"[]".to_vec()]);
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest.len(), 64);
    }
}
