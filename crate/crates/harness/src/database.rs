//! On-disk branch database: a JSON index plus one `(z, theta)` CSV per point.

use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};

use nematic_core::analytic::Family;
use nematic_core::stability::{StabilityReport, Verdict};
use nematic_core::statics::{static_residual, Branch, Parameter};
use nematic_core::{GridProfile, LeslieCoefficients};

use crate::error::{usage, HarnessError, Result};
use crate::output::{profile_table, read_profile, write_json};

pub const INDEX_FILE: &str = "index.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub g: f64,
    pub b: f64,
    pub omega: f64,
    /// Residual of the stored profile, recomputed from the file contents.
    pub residual_norm: f64,
    pub lambda0: Option<f64>,
    pub verdict: Option<Verdict>,
    /// Relative to the database root.
    pub file: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchRecord {
    /// `family:index#seq`, unique within the database.
    pub key: String,
    pub family: Family,
    pub index: i32,
    /// `"G"` or `"B"`.
    pub parameter: String,
    pub range: (f64, f64),
    pub terminated_by: String,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatabaseIndex {
    pub coefficients: LeslieCoefficients,
    pub nodes: usize,
    pub branches: Vec<BranchRecord>,
}

/// Reference to one stored point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PointRef {
    pub branch: usize,
    pub point: usize,
}

/// Owns the index; every write goes through `&mut self`.
#[derive(Debug)]
pub struct BranchDatabase {
    pub root: PathBuf,
    pub index: DatabaseIndex,
}

fn parameter_name(p: Parameter) -> &'static str {
    match p {
        Parameter::G => "G",
        Parameter::B => "B",
    }
}

impl BranchDatabase {
    pub fn exists(root: &Path) -> bool {
        root.join(INDEX_FILE).is_file()
    }

    /// Opens `root`, creating an empty database when absent.
    pub fn open_or_create(
        root: &Path,
        coefficients: LeslieCoefficients,
        nodes: usize,
    ) -> Result<Self> {
        if Self::exists(root) {
            let db = Self::open(root)?;
            if db.index.coefficients != coefficients {
                return usage(format!(
                    "{}: database was built with different coefficients",
                    root.display()
                ));
            }
            return Ok(db);
        }
        fs::create_dir_all(root).map_err(|e| HarnessError::io(root, e))?;
        let db = Self {
            root: root.to_path_buf(),
            index: DatabaseIndex {
                coefficients,
                nodes,
                branches: Vec::new(),
            },
        };
        db.save()?;
        Ok(db)
    }

    pub fn open(root: &Path) -> Result<Self> {
        let path = root.join(INDEX_FILE);
        let text = fs::read_to_string(&path).map_err(|e| HarnessError::io(&path, e))?;
        let index: DatabaseIndex = serde_json::from_str(&text)
            .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
        let db = Self {
            root: root.to_path_buf(),
            index,
        };
        for b in &db.index.branches {
            for p in &b.points {
                let f = db.root.join(&p.file);
                if !f.is_file() {
                    return usage(format!(
                        "{}: index entry {} points to missing {}",
                        path.display(),
                        b.key,
                        p.file
                    ));
                }
            }
        }
        Ok(db)
    }

    pub fn index_path(&self) -> PathBuf {
        self.root.join(INDEX_FILE)
    }

    fn save(&self) -> Result<()> {
        let tmp = self.root.join(format!("{INDEX_FILE}.tmp"));
        write_json(&tmp, &self.index)?;
        fs::rename(&tmp, self.index_path()).map_err(|e| HarnessError::io(self.index_path(), e))
    }

    fn next_key(&self, family: Family, index: i32) -> String {
        let prefix = format!("{family}:{index}#");
        let seq = self
            .index
            .branches
            .iter()
            .filter(|b| b.key.starts_with(&prefix))
            .count();
        format!("{prefix}{seq}")
    }

    /// Stores a branch, writing one profile file per point. Returns the
    /// written files and the branch position in the index.
    pub fn insert(&mut self, branch: &Branch) -> Result<(usize, Vec<PathBuf>)> {
        if branch.points.is_empty() {
            return usage("cannot store an empty branch");
        }
        let key = self.next_key(branch.family, branch.index);
        let dir_name = key.replace([':', '#'], "_");
        let mut files = Vec::new();
        let mut points = Vec::new();
        for (j, p) in branch.points.iter().enumerate() {
            let rel = format!("{dir_name}/point_{j:04}.csv");
            let path = self.root.join(&rel);
            profile_table(&p.profile).write(&path)?;
            let stored = read_profile(&path)?;
            points.push(PointRecord {
                g: p.g,
                b: p.b,
                omega: p.omega,
                residual_norm: static_residual(&self.index.coefficients, p.g, p.b, &stored),
                lambda0: None,
                verdict: None,
                file: rel,
            });
            files.push(path);
        }
        let values: Vec<f64> = branch
            .points
            .iter()
            .map(|p| p.parameter(branch.parameter))
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.index.branches.push(BranchRecord {
            key,
            family: branch.family,
            index: branch.index,
            parameter: parameter_name(branch.parameter).to_string(),
            range: (lo, hi),
            terminated_by: format!("{:?}", branch.terminated_by),
            points,
        });
        self.save()?;
        Ok((self.index.branches.len() - 1, files))
    }

    pub fn load_profile(&self, r: PointRef) -> Result<GridProfile> {
        let rec = &self.index.branches[r.branch].points[r.point];
        let mut p = read_profile(&self.root.join(&rec.file))?;
        p.residual_norm = rec.residual_norm;
        Ok(p)
    }

    pub fn point(&self, r: PointRef) -> &PointRecord {
        &self.index.branches[r.branch].points[r.point]
    }

    /// Point id `family:index#seq/j`.
    pub fn point_id(&self, r: PointRef) -> String {
        format!("{}/{}", self.index.branches[r.branch].key, r.point)
    }

    pub fn set_stability(&mut self, r: PointRef, report: &StabilityReport) -> Result<()> {
        let rec = &mut self.index.branches[r.branch].points[r.point];
        rec.lambda0 = Some(report.leading_eigenvalue);
        rec.verdict = Some(report.verdict);
        self.save()
    }

    /// Resolves a selector: all points, `family:index`, `family:index#seq`
    /// or `family:index#seq/j`.
    pub fn select(&self, selector: Option<&str>) -> Result<Vec<PointRef>> {
        let all = |bi: usize| {
            (0..self.index.branches[bi].points.len()).map(move |j| PointRef {
                branch: bi,
                point: j,
            })
        };
        let Some(sel) = selector else {
            return Ok((0..self.index.branches.len()).flat_map(all).collect());
        };
        let (branch_sel, point_sel) = match sel.split_once('/') {
            Some((b, p)) => {
                let j: usize = p
                    .parse()
                    .map_err(|_| HarnessError::Usage(format!("bad point number in {sel:?}")))?;
                (b, Some(j))
            }
            None => (sel, None),
        };
        let mut out = Vec::new();
        for (bi, b) in self.index.branches.iter().enumerate() {
            let id = format!("{}:{}", b.family, b.index);
            if b.key != branch_sel && id != branch_sel {
                continue;
            }
            match point_sel {
                Some(j) if j < b.points.len() => out.push(PointRef {
                    branch: bi,
                    point: j,
                }),
                Some(j) => {
                    return usage(format!(
                        "{} has {} points, no point {j}",
                        b.key,
                        b.points.len()
                    ))
                }
                None => out.extend(all(bi)),
            }
        }
        if out.is_empty() {
            return usage(format!("no database entry matches {sel:?}"));
        }
        Ok(out)
    }

    /// Last stored point of the first branch labelled `family:index`, or of
    /// the exact key.
    pub fn latest(&self, selector: &str) -> Result<PointRef> {
        self.select(Some(selector))?
            .last()
            .copied()
            .ok_or_else(|| HarnessError::Usage(format!("no entry {selector}")))
    }
}
