//! CSV tables, run directories and manifests.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nematic_core::{GridProfile, LeslieCoefficients};

use crate::error::{HarnessError, Result};

/// Environment variable naming the output root.
pub const OUTPUT_ROOT_ENV: &str = "NEMATIC_OUTPUT_ROOT";
/// Append-only log of every manifest written under a root.
pub const MANIFEST_LOG: &str = "manifests.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Float cell with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        }
        let mut w = csv::Writer::from_path(path)
            .map_err(|e| HarnessError::format(path.display().to_string(), e))?;
        let ctx = |e: csv::Error| HarnessError::format(path.display().to_string(), e);
        w.write_record(&self.header).map_err(ctx)?;
        for r in &self.rows {
            w.write_record(r).map_err(ctx)?;
        }
        w.flush().map_err(|e| HarnessError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)
            .map_err(|e| HarnessError::format(path.display().to_string(), e))?;
        let ctx = |e: csv::Error| HarnessError::format(path.display().to_string(), e);
        let header = r.headers().map_err(ctx)?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|x| x.iter().map(String::from).collect()))
            .collect::<std::result::Result<_, _>>()
            .map_err(ctx)?;
        Ok(Self { header, rows })
    }
}

/// Two-column `(z, theta)` table of a profile.
pub fn profile_table(p: &GridProfile) -> Table {
    let mut t = Table::new(&["z", "theta"]);
    for (z, th) in p.z.iter().zip(&p.theta) {
        t.push(vec![num(*z), num(*th)]);
    }
    t
}

/// Reads a `(z, theta)` profile file.
pub fn read_profile(path: &Path) -> Result<GridProfile> {
    let t = Table::read(path)?;
    if t.header != ["z", "theta"] {
        return Err(HarnessError::Usage(format!(
            "{}: expected columns z,theta",
            path.display()
        )));
    }
    let parse = |s: &str| {
        s.parse::<f64>()
            .map_err(|e| HarnessError::format(format!("{}: {s:?}", path.display()), e))
    };
    let mut z = Vec::with_capacity(t.rows.len());
    let mut theta = Vec::with_capacity(t.rows.len());
    for r in &t.rows {
        z.push(parse(&r[0])?);
        theta.push(parse(&r[1])?);
    }
    let p = GridProfile::from_values(theta);
    if p.z.iter().zip(&z).any(|(a, b)| (a - b).abs() > 1e-15) {
        return Err(HarnessError::Usage(format!(
            "{}: z is not the uniform grid on [-1, 1]",
            path.display()
        )));
    }
    Ok(p)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    }
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| HarnessError::format(path.display().to_string(), e))?;
    fs::write(path, text + "\n").map_err(|e| HarnessError::io(path, e))
}

/// Hex SHA-256 of a serializable value's JSON form.
pub fn digest<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("serializable parameters");
    let hash = Sha256::digest(&bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// Full record of one command execution.
#[derive(Debug, Clone, Serialize, serde::Deserialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub coefficients: LeslieCoefficients,
    pub settings: serde_json::Value,
    pub version: String,
    pub duration_seconds: f64,
    /// Paths relative to the output root.
    pub outputs: Vec<String>,
}

/// Collects the outputs of one run and writes its manifest.
pub struct Run {
    pub root: PathBuf,
    pub dir: PathBuf,
    command: String,
    parameters: serde_json::Value,
    coefficients: LeslieCoefficients,
    settings: serde_json::Value,
    outputs: Vec<PathBuf>,
    started: Instant,
}

impl Run {
    pub fn start(
        root: &Path,
        command: &str,
        label: &str,
        parameters: serde_json::Value,
        coefficients: LeslieCoefficients,
        settings: serde_json::Value,
    ) -> Result<Self> {
        let dir = root.join(command).join(label);
        fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            dir,
            command: command.to_string(),
            parameters,
            coefficients,
            settings,
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<PathBuf> {
        let p = self.path(name);
        table.write(&p)?;
        self.record(p.clone());
        Ok(p)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let p = self.path(name);
        write_json(&p, value)?;
        self.record(p.clone());
        Ok(p)
    }

    /// Registers a file written elsewhere under the root.
    pub fn record(&mut self, path: PathBuf) {
        if !self.outputs.contains(&path) {
            self.outputs.push(path);
        }
    }

    fn relative(&self, p: &Path) -> String {
        p.strip_prefix(&self.root)
            .unwrap_or(p)
            .to_string_lossy()
            .replace('\\', "/")
    }

    /// Writes the manifest and appends it to the root log.
    pub fn finish(self) -> Result<RunManifest> {
        let manifest = RunManifest {
            command: self.command.clone(),
            parameters: self.parameters.clone(),
            coefficients: self.coefficients,
            settings: self.settings.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self.outputs.iter().map(|p| self.relative(p)).collect(),
        };
        write_json(&self.dir.join(MANIFEST_FILE), &manifest)?;
        let log = self.root.join(MANIFEST_LOG);
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&log)
            .map_err(|e| HarnessError::io(&log, e))?;
        let line =
            serde_json::to_string(&manifest).map_err(|e| HarnessError::format("manifest", e))?;
        writeln!(f, "{line}").map_err(|e| HarnessError::io(&log, e))?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for v in [0.1, -1.0 / 3.0, std::f64::consts::PI * 1e-9, 1e300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn profile_files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = GridProfile::from_fn(41, |z| z.sin() + 0.3);
        let path = dir.path().join("p.csv");
        profile_table(&p).write(&path).unwrap();
        let q = read_profile(&path).unwrap();
        assert_eq!(p.theta, q.theta);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(digest(&("a", 1)), digest(&("a", 1)));
        assert_ne!(digest(&("a", 1)), digest(&("a", 2)));
    }
}
