use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use ris_cr::channel::linear_to_db;
use ris_cr::experiment::{
    read_csv, run_sweep, run_trial, summarize, trial_channels, trial_seed, write_csv,
    write_summary_csv, ExperimentConfig, Method,
};
use ris_cr::system::check_feasibility;

#[derive(Parser)]
#[command(name = "ris-cr", about = "RIS-assisted cognitive radio power minimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every sweep point of a config and write one CSV row per trial.
    Sweep(Overrides),
    /// Run one trial with verbose diagnostics.
    Single {
        #[command(flatten)]
        overrides: Overrides,
        /// Trial index used to derive the seed.
        #[arg(long, default_value_t = 0)]
        trial: usize,
    },
    /// Aggregate an existing results CSV.
    Summarize {
        /// Results file written by `sweep`.
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Restrict to a single method: dc, sdr or no_ris.
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    jobs: Option<usize>,
}

impl Overrides {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display()))?,
            None => ExperimentConfig::default(),
        };
        if let Some(o) = &self.out {
            cfg.output_path = Some(o.clone());
        }
        if let Some(s) = self.seed {
            cfg.base_seed = s;
        }
        if let Some(m) = self.method {
            cfg.methods = vec![m];
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(j) = self.jobs {
            cfg.jobs = j;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep(o) => {
            let cfg = o.load()?;
            if cfg.output_path.is_none() {
                bail!("no output path: pass --out or set output_path in the config");
            }
            let records = run_sweep(&cfg)?;
            eprintln!(
                "wrote {} records to {}",
                records.len(),
                cfg.output_path.as_ref().unwrap().display()
            );
            write_summary_csv(std::io::stdout(), &summarize(&records))?;
        }
        Command::Single { overrides, trial } => single(&overrides.load()?, trial)?,
        Command::Summarize { input, out } => {
            let records = read_csv(&input).with_context(|| format!("reading {}", input.display()))?;
            if records.is_empty() {
                bail!("{} has no records", input.display());
            }
            let rows = summarize(&records);
            match out {
                Some(p) => write_summary_csv(std::fs::File::create(p)?, &rows)?,
                None => write_summary_csv(std::io::stdout(), &rows)?,
            }
        }
    }
    Ok(())
}

fn single(cfg: &ExperimentConfig, trial: usize) -> Result<()> {
    let mut records = Vec::new();
    for &m in &cfg.m_values {
        let ch = trial_channels(cfg, trial, m)?;
        println!(
            "trial {trial} M={m} seed={} channel={:016x}",
            trial_seed(cfg.base_seed, trial, m),
            ch.fingerprint()
        );
        for &g in &cfg.gamma_db {
            let qos = cfg.qos(g)?;
            for &method in &cfg.methods {
                let (rec, rep) = run_trial(cfg, trial, m, g, method)?;
                println!("  gamma={g} dB method={method} status={:?} outer={}", rep.status, rep.outer_iterations);
                let traj: Vec<String> = rep
                    .power_trajectory
                    .iter()
                    .map(|p| format!("{:.4}", linear_to_db(*p)))
                    .collect();
                println!("    power trajectory (dB): {}", traj.join(" "));
                for (i, dc) in rep.dc_reports.iter().enumerate() {
                    println!(
                        "    phase step {}: dc iterations={} converged={} residuals={:?}",
                        i + 1,
                        dc.iterations,
                        dc.converged,
                        dc.residual_trace
                    );
                }
                if let Some(reason) = &rep.stall_reason {
                    println!("    stalled: {reason}");
                }
                if rep.status.has_solution() {
                    let f = check_feasibility(&ch, &rep.final_theta, &rep.final_w, &qos, 1e-5)?;
                    println!("    feasible={} sinr margins={:?}", f.feasible, f.sinr_margins);
                }
                records.push(rec);
            }
        }
    }
    if let Some(path) = &cfg.output_path {
        write_csv(path, &records)?;
    }
    Ok(())
}
