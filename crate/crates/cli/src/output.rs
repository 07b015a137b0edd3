use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::ValueEnum;
use serde::Serialize;
use uniclass_core::FieldCtx;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Serialize)]
pub struct FieldInfo {
    pub p: u32,
    pub k: u32,
    pub modulus: String,
}

impl FieldInfo {
    pub fn of(ctx: &FieldCtx) -> FieldInfo {
        FieldInfo { p: ctx.p(), k: ctx.k(), modulus: ctx.modulus_string() }
    }
}

/// The top-level JSON document. `field` and `space` are null for runs that span
/// several fields or spaces; each result then names its own.
#[derive(Serialize)]
pub struct Envelope<T: Serialize> {
    pub tool_version: &'static str,
    pub field: Option<FieldInfo>,
    pub space: Option<String>,
    pub results: Vec<T>,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(field: Option<FieldInfo>, space: Option<String>, results: Vec<T>) -> Self {
        Envelope { tool_version: env!("CARGO_PKG_VERSION"), field, space, results }
    }
}

pub struct Sink {
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Sink {
    /// Write the report in the chosen format. `csv` is `None` for commands
    /// without a tabular form.
    pub fn emit<T: Serialize>(&self, envelope: &Envelope<T>, text: String, csv: Option<String>) -> anyhow::Result<()> {
        let body = match self.format {
            Format::Json => serde_json::to_string_pretty(envelope)? + "\n",
            Format::Text => text,
            Format::Csv => match csv {
                Some(c) => c,
                None => bail!("this command has no csv output"),
            },
        };
        match &self.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{body}"),
        }
        Ok(())
    }
}
