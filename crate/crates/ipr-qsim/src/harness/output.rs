//! Deterministic CSV emission and run manifests.

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

use super::{ExperimentConfig, ResultRow};

pub const CSV_HEADER: &str =
    "experiment,variable,value,m,estimator,oracle,error_bound,std_error,delta_sigma_z,flag";

/// Decimal text with 12 significant digits.
fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

pub fn csv_text(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.experiment);
        out.push(',');
        out.push_str(&r.variable);
        out.push(',');
        out.push_str(&fmt12(r.value));
        out.push(',');
        if let Some(m) = r.m {
            out.push_str(&m.to_string());
        }
        out.push(',');
        out.push_str(&fmt12(r.estimator));
        out.push(',');
        out.push_str(&fmt_opt(r.oracle));
        out.push(',');
        out.push_str(&fmt_opt(r.error_bound));
        out.push(',');
        out.push_str(&fmt12(r.std_error));
        out.push(',');
        out.push_str(&fmt_opt(r.delta_sigma_z));
        out.push(',');
        out.push_str(&r.flag);
        out.push('\n');
    }
    out
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Write header plus one line per row, LF endings, 12 significant digits.
pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    let mut file = std::fs::File::create(path).map_err(io_err(path))?;
    file.write_all(csv_text(rows).as_bytes())
        .map_err(io_err(path))?;
    Ok(())
}

/// Content-derived run identifier: the canonical serialized config hashed,
/// so identical runs share an id.
pub fn run_id(config: &ExperimentConfig) -> String {
    let text = toml::to_string(config).unwrap_or_default();
    let digest = Sha256::digest(text.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Record the effective config, seed, and library version next to the data.
pub fn write_manifest(config: &ExperimentConfig, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(io_err(path))?;
        }
    }
    let config_text =
        toml::to_string(config).map_err(|e| Error::Config(format!("manifest: {e}")))?;
    let mut text = String::new();
    text.push_str(&format!("run_id = \"{}\"\n", run_id(config)));
    text.push_str(&format!(
        "library_version = \"{}\"\n",
        env!("CARGO_PKG_VERSION")
    ));
    text.push_str(&format!("seed = {}\n", config.seed.unwrap_or(0)));
    text.push_str("\n[config]\n");
    text.push_str(&config_text);
    std::fs::write(path, text).map_err(io_err(path))?;
    Ok(())
}
