use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{usage, Failure};

/// Routes artifacts to stdout, or to files in the output directory with a
/// manifest recording digests and settings.
pub struct Output {
    dir: Option<PathBuf>,
    started: u64,
    files: Vec<Value>,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Output {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Self {
            dir,
            started: unix_now(),
            files: Vec::new(),
        }
    }

    /// Writes `name` into the output directory, or prints it to stdout.
    pub fn emit(&mut self, name: &str, content: &str) -> Result<(), Failure> {
        match &self.dir {
            None => {
                print!("{content}");
                Ok(())
            }
            Some(dir) => {
                std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
                let path = dir.join(name);
                std::fs::write(&path, content).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                self.files.push(json!({
                    "file": name,
                    "bytes": content.len(),
                    "sha256": sha256_hex(content.as_bytes()),
                }));
                Ok(())
            }
        }
    }

    /// A side report: a file with `--out`, standard error otherwise.
    pub fn report(&mut self, name: &str, content: &str) -> Result<(), Failure> {
        if self.dir.is_some() {
            self.emit(name, content)
        } else {
            eprint!("{content}");
            Ok(())
        }
    }

    /// Writes `manifest.json` if any file was produced.
    pub fn finish(self, seed: u64, config: Value) -> Result<(), Failure> {
        let Some(dir) = &self.dir else { return Ok(()) };
        if self.files.is_empty() {
            return Ok(());
        }
        let manifest = json!({
            "command": std::env::args().collect::<Vec<_>>(),
            "config": config,
            "seed": seed,
            "versions": {
                "eaqldpc": eaqldpc::VERSION,
                "eaqldpc-cli": env!("CARGO_PKG_VERSION"),
            },
            "started_unix": self.started,
            "finished_unix": unix_now(),
            "outputs": self.files,
        });
        let path = dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
        std::fs::write(&path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}
