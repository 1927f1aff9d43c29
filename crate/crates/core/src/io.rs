//! CSV and JSON writers with an audit header.

use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Provenance carried by every output.
#[derive(Clone, Debug, PartialEq)]
pub struct Header {
    pub command: String,
    pub seed: Option<u64>,
    pub config: Value,
}

impl Header {
    pub fn new(command: &str, seed: Option<u64>, config: Value) -> Self {
        Header {
            command: command.to_string(),
            seed,
            config,
        }
    }

    /// SHA-256 of the compact config JSON.
    pub fn config_hash(&self) -> String {
        Sha256::digest(self.config.to_string().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![format!("# qwc {VERSION} {}", self.command)];
        if let Some(seed) = self.seed {
            lines.push(format!("# seed: {seed}"));
        }
        lines.push(format!("# config: {}", self.config));
        lines.push(format!("# config-sha256: {}", self.config_hash()));
        lines
    }
}

/// Open `path` for writing, refusing to replace an existing file unless `force`.
pub fn create_output(path: &Path, force: bool) -> Result<File> {
    let mut opts = OpenOptions::new();
    opts.write(true);
    if force {
        opts.create(true).truncate(true);
    } else {
        opts.create_new(true);
    }
    opts.open(path).map_err(|e| match e.kind() {
        io::ErrorKind::AlreadyExists => Error::InvalidParameter(format!(
            "{} exists; pass --force to overwrite",
            path.display()
        )),
        _ => Error::Io(e),
    })
}

pub fn write_csv<W: Write, T: Serialize>(mut out: W, header: &Header, rows: &[T]) -> Result<()> {
    for line in header.comment_lines() {
        writeln!(out, "{line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Same columns as the CSV under `"rows"`, plus any extra payload fields.
pub fn write_json<W: Write, T: Serialize>(
    mut out: W,
    header: &Header,
    rows: &[T],
    extra: Option<Value>,
) -> Result<()> {
    let mut doc = json!({
        "qwc_version": VERSION,
        "command": header.command,
        "seed": header.seed,
        "config": header.config,
        "config_sha256": header.config_hash(),
        "rows": rows,
    });
    if let (Some(Value::Object(extra)), Value::Object(map)) = (extra, &mut doc) {
        map.extend(extra);
    }
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_rows<W: Write, T: Serialize>(
    out: W,
    format: Format,
    header: &Header,
    rows: &[T],
    extra: Option<Value>,
) -> Result<()> {
    match format {
        Format::Csv => write_csv(out, header, rows),
        Format::Json => write_json(out, header, rows, extra),
    }
}
