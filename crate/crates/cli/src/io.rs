use std::fmt;
use std::path::{Path, PathBuf};

use latticetile::artifact::{self, Artifact, Document, InputDigest, RunManifest};
use latticetile::{Budget, Error};
use sha2::{Digest, Sha256};

/// How a command ended; maps onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// Verification failed, the search was UNSAT, or an input is invalid.
    Rejected(String),
    Usage(String),
    Budget(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Rejected(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
        }
    }

    /// For errors raised by a builder from the command's own arguments.
    pub fn from_build(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::Precondition(_) | Error::InvalidInput(_) | Error::Io(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Rejected(e.to_string()),
        }
    }

    /// For errors raised while reading or checking an input artifact.
    pub fn from_input(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            Error::Io(_) => Failure::Usage(e.to_string()),
            _ => Failure::Rejected(e.to_string()),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Rejected(m) | Failure::Usage(m) | Failure::Budget(m) => f.write_str(m),
        }
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Inputs read and outputs written by one command, for provenance.
pub struct Run {
    pub command: Vec<String>,
    pub budget: Budget,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<InputDigest>,
}

impl Run {
    pub fn new(command: Vec<String>, budget: Budget) -> Self {
        Run {
            command,
            budget,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn load(&mut self, path: &Path) -> Outcome<Artifact> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
        });
        let doc = artifact::from_str(&text)
            .map_err(Failure::from_input)
            .map_err(|f| match f {
                Failure::Rejected(m) => Failure::Rejected(format!("{}: {m}", path.display())),
                other => other,
            })?;
        Ok(doc.artifact)
    }

    /// Writes `artifact` to `out`, or to stdout when `out` is `None`.
    pub fn emit(&mut self, out: Option<&PathBuf>, artifact: Artifact) -> Outcome {
        let doc = Document {
            artifact,
            inputs: self.inputs.clone(),
        };
        let text = artifact::to_string(&doc).map_err(Failure::from_build)?;
        match out {
            Some(p) => {
                std::fs::write(p, &text)
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
                self.outputs.push(InputDigest {
                    path: p.display().to_string(),
                    sha256: sha256_hex(text.as_bytes()),
                });
            }
            None => print!("{text}"),
        }
        Ok(())
    }

    /// Writes `<out>.manifest.json` next to the first output, if any.
    pub fn write_manifest(&self, outcome: &str, exit_code: i32) {
        let Some(first) = self.outputs.first() else {
            return;
        };
        let manifest = RunManifest {
            command: self.command.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            budget: self.budget,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            outcome: outcome.to_string(),
            exit_code,
        };
        let path = format!("{}.manifest.json", first.path);
        let doc = Document::new(Artifact::Manifest(manifest));
        match artifact::to_string(&doc) {
            Ok(text) => {
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("warning: cannot write {path}: {e}");
                }
            }
            Err(e) => eprintln!("warning: manifest not written: {e}"),
        }
    }
}
