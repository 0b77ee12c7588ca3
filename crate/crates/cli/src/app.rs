//! Command-line surface shared by the binary and its tests.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use hybrid_link_core::RamanPumpSet;

use crate::cache::OptimumCache;
use crate::config::{Config, PumpChoice};
use crate::error::{CliError, Result};
use crate::report;
use crate::runner::{pump_plan, scenario_id, Optimum, Study};
use crate::sweep::{run_sweep, sweep_table};
use crate::tsv::write_atomic;

#[derive(Debug, Parser)]
#[command(name = "hybrid-link", version, about = "Throughput, amplifier power and energy per bit of hybrid Raman/lumped multi-band links")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Scenario configuration (TOML).
    #[arg(long, global = true, default_value = "configs/scl.toml")]
    pub config: PathBuf,
    #[arg(long, global = true, default_value = "out")]
    pub out_dir: PathBuf,
    /// Overrides optimizer.seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for fitness evaluation and sweeps (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true)]
    pub no_format_correction: bool,
    /// Triangular signal-signal Raman profile in the full solver.
    #[arg(long, global = true)]
    pub fast_raman: bool,
    /// Optimum cache directory (default: <out-dir>/cache).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Load the config and every referenced table, build the links, report counts.
    Validate,
    /// Evaluate the configured scenario and write quality, ledger and summary tables.
    Run,
    /// Run the band-set x spans x pumps x P_mm grid into one table.
    Sweep,
    /// Optimize the configured pump count and write the convergence trace.
    Optimize,
    /// Write the span power profile of the configured scenario.
    DumpProfile,
}

impl GlobalArgs {
    pub fn load_config(&self) -> Result<Config> {
        let mut config = Config::load(&self.config)?;
        if let Some(seed) = self.seed {
            config = config.with_seed(seed);
        }
        if self.no_format_correction {
            config = config.without_format_correction();
        }
        if self.fast_raman {
            config = config.with_fast_raman();
        }
        Ok(config)
    }

    pub fn cache(&self) -> OptimumCache {
        if self.no_cache {
            OptimumCache::disabled()
        } else {
            OptimumCache::at(self.cache_dir.clone().unwrap_or_else(|| self.out_dir.join("cache")))
        }
    }
}

fn write(out_dir: &Path, name: &str, contents: &str, written: &mut Vec<PathBuf>) -> Result<()> {
    let path = out_dir.join(name);
    write_atomic(&path, contents)?;
    written.push(path);
    Ok(())
}

fn scenario_pumps(study: &Study) -> Result<(RamanPumpSet, Option<Optimum>)> {
    let config = study.config();
    match &config.scenario.pumps {
        PumpChoice::Fixed(set) => Ok((set.clone(), None)),
        PumpChoice::Optimized(n) => {
            let opt = study.optimize(&config.bands, config.scenario.n_span, *n)?;
            Ok((opt.pumps.clone(), Some(opt)))
        }
    }
}

/// Runs one command and returns the text for standard output.
pub fn execute(cli: &Cli) -> Result<String> {
    let g = &cli.global;
    let config = g.load_config()?;
    let mut out = String::new();
    let mut written = Vec::new();
    match cli.command {
        Command::Validate => {
            let mut sets = vec![config.bands.clone()];
            sets.extend(config.sweep.band_sets.iter().cloned());
            sets.sort();
            sets.dedup();
            for set in sets {
                let model = config.link_model(&set)?;
                let counts: Vec<String> = model
                    .grid
                    .bands()
                    .iter()
                    .map(|b| format!("{b} {}", model.grid.count_in(*b)))
                    .collect();
                let _ = writeln!(out, "{set}: {} channels ({})", model.grid.len(), counts.join(", "));
            }
            let _ = writeln!(out, "sweep: {} scenarios", config.sweep.scenario_count());
        }
        Command::Run => {
            let study = Study::new(config, g.cache());
            let (pumps, optimum) = scenario_pumps(&study)?;
            let c = study.config();
            let id = scenario_id(&c.bands, c.scenario.n_span, pumps.len(), c.scenario.p_mm_w);
            let eval = study.evaluate(&c.bands, c.scenario.n_span, &pumps, c.scenario.p_mm_w)?;
            let summary = report::summary_table(&id, &eval)?;
            write(&g.out_dir, &format!("{id}_quality.tsv"), &report::quality_table(&id, &eval).render(), &mut written)?;
            write(&g.out_dir, &format!("{id}_ledger.tsv"), &report::ledger_table(&id, &eval).render(), &mut written)?;
            write(&g.out_dir, &format!("{id}_summary.tsv"), &summary.render(), &mut written)?;
            if let Some(swarm) = optimum.as_ref().and_then(|o| o.swarm.as_ref()) {
                write(&g.out_dir, &format!("{id}_trace.tsv"), &report::trace_table(&id, swarm).render(), &mut written)?;
            }
            for w in eval.warning_text() {
                let _ = writeln!(out, "warning: {w}");
            }
            let _ = writeln!(out, "pumps: {}", pump_plan(&pumps));
            out.push_str(&summary.render());
        }
        Command::Optimize => {
            let study = Study::new(config, g.cache());
            let c = study.config();
            let n = match c.scenario.pumps {
                PumpChoice::Optimized(n) if n > 0 => n,
                _ => {
                    return Err(CliError::config(
                        "scenario.pump_count",
                        "optimize needs a positive pump_count and no fixed scenario.pumps",
                    ))
                }
            };
            let opt = study.optimize(&c.bands, c.scenario.n_span, n)?;
            let swarm = opt.swarm.as_ref().expect("pumped optimum carries its swarm");
            let id = format!("{}-{}span-{n}pump", c.bands, c.scenario.n_span);
            write(&g.out_dir, &format!("{id}_trace.tsv"), &report::trace_table(&id, swarm).render(), &mut written)?;
            let full = study.prepared(&c.bands)?.throughput(&opt.pumps, c.scenario.n_span)?;
            let _ = writeln!(out, "pumps: {}", pump_plan(&opt.pumps));
            let _ = writeln!(out, "search fitness: {:.4} Tb/s{}", swarm.best_fitness, if opt.cached { " (cached)" } else { "" });
            let _ = writeln!(out, "full-fidelity throughput: {full:.4} Tb/s");
        }
        Command::Sweep => {
            let spec = config.sweep.clone();
            let study = Study::new(config, g.cache());
            let outcome = run_sweep(&study, &spec)?;
            write(&g.out_dir, "sweep.tsv", &sweep_table(&outcome).render(), &mut written)?;
            let _ = writeln!(
                out,
                "{} scenarios in {:.1} s",
                outcome.scenario_count(),
                outcome.elapsed.as_secs_f64()
            );
        }
        Command::DumpProfile => {
            let study = Study::new(config, g.cache());
            let (pumps, _) = scenario_pumps(&study)?;
            let c = study.config();
            let id = format!("{}-{}pump", c.bands, pumps.len());
            let profile = study.prepared(&c.bands)?.propagate(&pumps)?;
            write(&g.out_dir, &format!("{id}_profile.tsv"), &report::profile_table(&id, &profile).render(), &mut written)?;
        }
    }
    for p in written {
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(out)
}
