use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Record written next to every output file; replaying its `argv`
/// reproduces the output byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub master_seed: u64,
    pub tool_version: String,
    pub argv: Vec<String>,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Shortest decimal form that parses back to the same f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("results serialize to JSON");
    s.push('\n');
    s
}

/// Builds CSV text from a header and rows of already formatted fields.
pub fn to_csv<I, R>(header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("CSV text is UTF-8")
}

/// Where results go: a file plus manifest when `out` is set, stdout otherwise.
pub struct Sink {
    pub out: Option<PathBuf>,
    pub manifest: RunManifest,
}

impl Sink {
    pub fn emit(&self, content: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => {
                std::fs::write(path, content).map_err(|e| CliError::io(path, e))?;
                let mpath = manifest_path(path);
                std::fs::write(&mpath, to_json(&self.manifest)).map_err(|e| CliError::io(&mpath, e))
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(content.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }
}
