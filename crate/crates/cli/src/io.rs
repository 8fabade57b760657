use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use qfan::measure::MassSpec;
use serde::Serialize;

/// A file read during a run, kept verbatim for the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub contents: String,
}

pub fn read(path: &str) -> Result<InputFile> {
    let contents = fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    Ok(InputFile {
        path: path.to_string(),
        contents,
    })
}

/// Masses in `text` (read from `path`): a single mass object or an array of them.
pub fn parse_masses(path: &str, text: &str) -> Result<Vec<MassSpec>> {
    let masses = if text.trim_start().starts_with('[') {
        let items: Vec<serde_json::Value> =
            serde_json::from_str(text).with_context(|| format!("{path}: invalid mass list"))?;
        items
            .iter()
            .enumerate()
            .map(|(i, v)| {
                MassSpec::from_json(&v.to_string())
                    .with_context(|| format!("{path}: invalid mass [{i}]"))
            })
            .collect::<Result<_>>()?
    } else {
        vec![MassSpec::from_json(text).with_context(|| format!("{path}: invalid mass"))?]
    };
    if masses.is_empty() {
        anyhow::bail!("{path}: no masses");
    }
    Ok(masses)
}

pub fn write_json<T: Serialize + ?Sized>(path: &str, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("cannot write {path}"))
}

pub fn write_csv<T: Serialize>(path: &str, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {path}"))?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// `<out>.<suffix>`, keeping the directory of `out`.
pub fn sibling(out: &str, suffix: &str) -> String {
    format!("{out}.{suffix}")
}

#[derive(Debug, Serialize)]
pub struct Manifest<'a, A: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a A,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub threads: Option<String>,
    pub inputs: Vec<InputFile>,
    pub outputs: Vec<String>,
    pub exit_code: u8,
    pub error: Option<String>,
}

pub fn manifest_path(out: &str) -> String {
    sibling(out, "manifest.json")
}

pub fn ensure_parent(out: &str) -> Result<()> {
    if let Some(dir) = Path::new(out)
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
    {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    Ok(())
}

pub fn write_manifest_file<A: Serialize>(out: &str, m: &Manifest<'_, A>) -> Result<()> {
    write_json(&manifest_path(out), m)
}
