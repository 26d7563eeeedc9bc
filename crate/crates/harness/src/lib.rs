//! Orchestration for `nematic-core`: CLI, branch database, figure drivers
//! and pipelines.

pub mod cli;
pub mod commands;
pub mod database;
pub mod error;
pub mod experiments;
pub mod figures;
pub mod output;
pub mod pipeline;

use std::fs;
use std::path::Path;

use nematic_core::LeslieCoefficients;

use crate::cli::{Cli, Command};
use crate::commands::{execute, Context};
use crate::error::{HarnessError, Result};

/// Reads a TOML coefficient file (`alpha1` … `alpha6`).
pub fn load_coefficients(path: &Path) -> Result<LeslieCoefficients> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    let c: LeslieCoefficients = toml::from_str(&text)
        .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
    Ok(c.normalized()?)
}

pub fn run(cli: Cli) -> Result<()> {
    if cli.global.jobs > 0 {
        // fails only if a pool already exists, which keeps its width
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.global.jobs)
            .build_global();
    }
    let coeffs = match &cli.global.coefficients {
        Some(p) => load_coefficients(p)?,
        None => LeslieCoefficients::FIVE_CB,
    };
    if cli.global.nodes < 4 {
        return error::usage("--nodes must be at least 4");
    }
    let ctx = Context {
        root: cli.global.output_root.clone(),
        coeffs,
        nodes: cli.global.nodes,
    };
    match &cli.command {
        Command::RunConfig(a) => {
            pipeline::run_config(&a.config, &ctx, a.force)?;
        }
        cmd => {
            let m = execute(&ctx, cmd)?;
            println!(
                "{} outputs written under {}",
                m.outputs.len(),
                ctx.root.display()
            );
        }
    }
    Ok(())
}
