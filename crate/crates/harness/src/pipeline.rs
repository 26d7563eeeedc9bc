//! Declarative pipelines: a TOML list of stages run in dependency order and
//! skipped when their recorded hash still matches.

use clap::Parser;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use nematic_core::LeslieCoefficients;

use crate::cli::{Command, StageCli};
use crate::commands::{execute, run_dir, Context};
use crate::error::{usage, HarnessError, Result};
use crate::output::{digest, write_json, RunManifest, MANIFEST_FILE};

/// Directory under the output root holding per-stage completion records.
pub const STATE_DIR: &str = "pipeline";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub coefficients: Option<LeslieCoefficients>,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub stages: Vec<StageSpec>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridBlock {
    pub nodes: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageSpec {
    pub name: String,
    pub command: String,
    /// Command-line options without the leading `--`.
    #[serde(default)]
    pub args: toml::Table,
    #[serde(default)]
    pub after: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct PlannedStage {
    pub name: String,
    pub command: Command,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StageRecord {
    hash: String,
    /// Run directory relative to the output root.
    run_dir: String,
}

/// Per-stage result of a pipeline run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageStatus {
    Ran,
    Skipped,
}

pub fn load_config(path: &Path) -> Result<PipelineConfig> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let de = toml::Deserializer::parse(&text)
        .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let key = e.path().to_string();
        HarnessError::Usage(format!(
            "{}: at key `{key}`: {}",
            path.display(),
            e.inner().message()
        ))
    })
}

fn scalar(v: &toml::Value, key: &str) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        _ => usage(format!("{key}: expected a string or number")),
    }
}

/// Translates a stage's argument table into command-line tokens.
fn stage_argv(spec: &StageSpec, key: &str) -> Result<Vec<String>> {
    let mut argv = vec![spec.command.clone()];
    for (k, v) in &spec.args {
        let path = format!("{key}.args.{k}");
        let flag = format!("--{k}");
        match v {
            toml::Value::Boolean(true) => argv.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items
                    .iter()
                    .enumerate()
                    .map(|(j, x)| scalar(x, &format!("{path}[{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                argv.push(flag);
                argv.push(parts.join(","));
            }
            other => {
                argv.push(flag);
                argv.push(scalar(other, &path)?);
            }
        }
    }
    Ok(argv)
}

/// The context a config runs under: its blocks override the globals.
pub fn config_context(cfg: &PipelineConfig, base: &Context) -> Result<Context> {
    let coeffs = match cfg.coefficients {
        Some(c) => c.normalized()?,
        None => base.coeffs,
    };
    Ok(Context {
        root: base.root.clone(),
        coeffs,
        nodes: cfg.grid.nodes.unwrap_or(base.nodes),
    })
}

/// Validates every stage and returns them in dependency order.
pub fn plan(cfg: &PipelineConfig, ctx: &Context) -> Result<Vec<PlannedStage>> {
    let mut position = HashMap::new();
    let mut commands = Vec::with_capacity(cfg.stages.len());
    for (i, s) in cfg.stages.iter().enumerate() {
        let key = format!("stages[{i}]");
        if s.name.is_empty() || s.name.contains(['/', '\\']) {
            return usage(format!(
                "{key}.name: must be nonempty and contain no path separators"
            ));
        }
        if position.insert(s.name.as_str(), i).is_some() {
            return usage(format!("{key}.name: duplicate stage name {:?}", s.name));
        }
        if s.command == "run-config" {
            return usage(format!("{key}.command: run-config cannot be nested"));
        }
        let argv = stage_argv(s, &key)?;
        let parsed = StageCli::try_parse_from(&argv).map_err(|e| {
            HarnessError::Usage(format!(
                "{key} ({}): {}",
                s.name,
                e.render().to_string().trim_end()
            ))
        })?;
        commands.push(parsed.command);
    }
    let mut deps = vec![Vec::new(); cfg.stages.len()];
    for (i, s) in cfg.stages.iter().enumerate() {
        for (j, d) in s.after.iter().enumerate() {
            match position.get(d.as_str()) {
                Some(&k) if k != i => deps[i].push(k),
                Some(_) => {
                    return usage(format!(
                        "stages[{i}].after[{j}]: a stage cannot follow itself"
                    ))
                }
                None => return usage(format!("stages[{i}].after[{j}]: unknown stage {d:?}")),
            }
        }
    }
    // Kahn's algorithm, taking the earliest declared ready stage first
    let n = cfg.stages.len();
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&i| !done[i] && deps[i].iter().all(|&d| done[d]));
        let Some(i) = next else {
            let stuck: Vec<&str> = (0..n)
                .filter(|&i| !done[i])
                .map(|i| cfg.stages[i].name.as_str())
                .collect();
            return usage(format!("stages: dependency cycle among {stuck:?}"));
        };
        done[i] = true;
        order.push(i);
    }
    let mut hashes: Vec<Option<String>> = vec![None; n];
    let mut planned = Vec::with_capacity(n);
    for i in order {
        let upstream: Vec<&String> = deps[i]
            .iter()
            .map(|&d| hashes[d].as_ref().expect("ordered"))
            .collect();
        let hash = digest(&(&commands[i], &ctx.coeffs, ctx.nodes, upstream));
        hashes[i] = Some(hash.clone());
        planned.push(PlannedStage {
            name: cfg.stages[i].name.clone(),
            command: commands[i].clone(),
            hash,
        });
    }
    Ok(planned)
}

fn record_path(root: &Path, stage: &str) -> PathBuf {
    root.join(STATE_DIR).join(format!("{stage}.json"))
}

/// Whether a stage completed with this hash and all its outputs still exist.
fn is_complete(root: &Path, stage: &PlannedStage) -> bool {
    let Ok(text) = fs::read_to_string(record_path(root, &stage.name)) else {
        return false;
    };
    let Ok(rec) = serde_json::from_str::<StageRecord>(&text) else {
        return false;
    };
    if rec.hash != stage.hash {
        return false;
    }
    let manifest = root.join(&rec.run_dir).join(MANIFEST_FILE);
    let Ok(m) = fs::read_to_string(&manifest).map(|t| serde_json::from_str::<RunManifest>(&t))
    else {
        return false;
    };
    m.is_ok_and(|m| m.outputs.iter().all(|o| root.join(o).exists()))
}

/// Loads, validates and executes a pipeline.
pub fn run_config(path: &Path, base: &Context, force: bool) -> Result<Vec<(String, StageStatus)>> {
    let cfg = load_config(path)?;
    let ctx = config_context(&cfg, base)?;
    if cfg.stages.is_empty() {
        execute(&ctx, &Command::ValidateCoefficients)?;
        return Ok(vec![("validate-coefficients".into(), StageStatus::Ran)]);
    }
    let stages = plan(&cfg, &ctx)?;
    let mut report = Vec::with_capacity(stages.len());
    for s in &stages {
        if !force && is_complete(&ctx.root, s) {
            println!("stage {}: up to date", s.name);
            report.push((s.name.clone(), StageStatus::Skipped));
            continue;
        }
        println!("stage {}: running {}", s.name, s.command.name());
        execute(&ctx, &s.command).map_err(|e| HarnessError::stage(&s.name, e))?;
        let run_dir = run_dir(&ctx, &s.command);
        write_json(
            &record_path(&ctx.root, &s.name),
            &StageRecord {
                hash: s.hash.clone(),
                run_dir,
            },
        )?;
        report.push((s.name.clone(), StageStatus::Ran));
    }
    Ok(report)
}
