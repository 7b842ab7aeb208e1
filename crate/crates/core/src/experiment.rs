//! Monte Carlo sweeps over SINR targets, RIS sizes and methods.
//!
//! Every `(trial, M)` pair has its own seed. User positions and direct links
//! depend on the trial only, so sweeps over `M` see the same users and
//! direct channels. Channels and the initial phases are shared by all methods
//! and SINR targets of a pair, which makes comparisons paired.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{
    generate_channels_at, linear_to_db, sample_positions, ChannelError, ChannelSet,
    NetworkGeometry, PathLossParams,
};
use crate::driver::{alternate, no_ris_baseline, AlternatingParams, OuterStatus, PhaseMethod, SolveReport};
use crate::phase::{DcParams, SdrParams};
use crate::system::{QosSpec, SystemError};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("could not parse config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dc,
    Sdr,
    NoRis,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Dc, Method::Sdr, Method::NoRis];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Dc => "dc",
            Method::Sdr => "sdr",
            Method::NoRis => "no_ris",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dc" => Ok(Method::Dc),
            "sdr" => Ok(Method::Sdr),
            "no_ris" => Ok(Method::NoRis),
            _ => Err(format!("unknown method `{s}`, expected dc, sdr or no_ris")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub epsilon: f64,
    pub max_outer: usize,
    pub solver_tol: f64,
    pub rank_tol: f64,
    pub dc_max_iters: usize,
    pub n_randomizations: usize,
    pub feas_tol: f64,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        let p = AlternatingParams::default();
        Self {
            epsilon: p.epsilon,
            max_outer: p.max_outer,
            solver_tol: p.solver_tol,
            rank_tol: p.dc.rank_tol,
            dc_max_iters: p.dc.max_iters,
            n_randomizations: p.dc.n_randomizations,
            feas_tol: p.dc.feas_tol,
        }
    }
}

impl AlgorithmConfig {
    pub fn params(&self, method: PhaseMethod, init_seed: u64) -> AlternatingParams {
        AlternatingParams {
            epsilon: self.epsilon,
            max_outer: self.max_outer,
            phase_method: method,
            dc: DcParams {
                max_iters: self.dc_max_iters,
                rank_tol: self.rank_tol,
                solver_tol: self.solver_tol,
                n_randomizations: self.n_randomizations,
                feas_tol: self.feas_tol,
            },
            sdr: SdrParams {
                n_randomizations: self.n_randomizations,
                solver_tol: self.solver_tol,
                rank_tol: self.rank_tol,
                feas_tol: self.feas_tol,
            },
            init_seed,
            solver_tol: self.solver_tol,
        }
    }
}

/// Sweep description. `geometry.n_ris_elements` is ignored in favour of
/// `m_values`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: NetworkGeometry,
    pub path_loss: PathLossParams,
    pub sigma2_db: f64,
    pub kappa_db: f64,
    pub gamma_db: Vec<f64>,
    pub m_values: Vec<usize>,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub base_seed: u64,
    pub algorithm: AlgorithmConfig,
    pub output_path: Option<PathBuf>,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    /// When false, `wall_time_seconds` is written as 0 so reruns are
    /// byte-identical.
    pub record_timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            geometry: NetworkGeometry::default(),
            path_loss: PathLossParams::default(),
            sigma2_db: -80.0,
            kappa_db: -30.0,
            gamma_db: vec![5.0, 10.0, 15.0, 20.0],
            m_values: vec![20],
            methods: Method::ALL.to_vec(),
            trials: 20,
            base_seed: 1,
            algorithm: AlgorithmConfig::default(),
            output_path: None,
            jobs: 0,
            record_timing: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ExperimentError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ExperimentError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: &str| Err(ExperimentError::Config(msg.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.gamma_db.is_empty() || self.m_values.is_empty() || self.methods.is_empty() {
            return bad("gamma_db, m_values and methods must be nonempty");
        }
        if self.gamma_db.iter().any(|g| !g.is_finite()) {
            return bad("gamma_db entries must be finite");
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return bad("methods must not repeat");
        }
        self.geometry.validate()?;
        self.path_loss.validate()?;
        let a = &self.algorithm;
        if !(a.epsilon > 0.0) || a.max_outer == 0 || !(a.solver_tol > 0.0) {
            return bad("algorithm.epsilon, max_outer and solver_tol must be positive");
        }
        if a.n_randomizations == 0 {
            return bad("algorithm.n_randomizations must be at least 1");
        }
        Ok(())
    }

    pub fn qos(&self, gamma_db: f64) -> Result<QosSpec, ExperimentError> {
        Ok(QosSpec::uniform_db(
            self.geometry.n_sus,
            self.geometry.n_pus,
            gamma_db,
            self.kappa_db,
            self.sigma2_db,
        )?)
    }
}

/// One row of the results file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub seed: u64,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub gamma_db: f64,
    pub method: Method,
    pub status: OuterStatus,
    pub outer_iterations: usize,
    pub total_power_db: Option<f64>,
    pub final_rank_residual: Option<f64>,
    pub wall_time_seconds: f64,
    /// Hex fingerprint of the channel realization.
    pub channel_hash: String,
    /// Phase steps that fell back to randomization.
    pub randomized_steps: usize,
    /// Semicolon-separated rank-one residuals of the last DC phase step.
    pub dc_residuals: String,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of the `(trial, M)` pair.
pub fn trial_seed(base_seed: u64, trial: usize, m: usize) -> u64 {
    base_seed ^ splitmix64(splitmix64(trial as u64) ^ (m as u64).wrapping_add(1))
}

fn position_seed(base_seed: u64, trial: usize) -> u64 {
    base_seed ^ splitmix64(splitmix64(trial as u64) ^ 0x5ca1_ab1e_0000_0000)
}

/// Channels of the `(trial, M)` pair. Positions and the direct links come
/// from a per-trial stream, the RIS links from the `(trial, M)` seed.
pub fn trial_channels(
    cfg: &ExperimentConfig,
    trial: usize,
    m: usize,
) -> Result<ChannelSet, ExperimentError> {
    let geom = NetworkGeometry {
        n_ris_elements: m,
        ..cfg.geometry.clone()
    };
    let mut trial_rng = ChaCha8Rng::seed_from_u64(position_seed(cfg.base_seed, trial));
    let (su, pu) = sample_positions(&geom, &mut trial_rng);
    let direct_geom = NetworkGeometry {
        n_ris_elements: 0,
        ..geom.clone()
    };
    let direct = generate_channels_at(&direct_geom, &cfg.path_loss, su.clone(), pu.clone(), &mut trial_rng)?;
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.base_seed, trial, m));
    let mut ch = generate_channels_at(&geom, &cfg.path_loss, su, pu, &mut rng)?;
    ch.h_d = direct.h_d;
    ch.u_d = direct.u_d;
    Ok(ch)
}

/// Runs one method on one channel realization.
pub fn run_method(
    cfg: &ExperimentConfig,
    ch: &ChannelSet,
    qos: &QosSpec,
    method: Method,
    seed: u64,
) -> Result<SolveReport, ExperimentError> {
    let res = match method {
        Method::Dc => alternate(ch, qos, &cfg.algorithm.params(PhaseMethod::Dc, seed)),
        Method::Sdr => alternate(ch, qos, &cfg.algorithm.params(PhaseMethod::Sdr, seed)),
        Method::NoRis => no_ris_baseline(ch, qos, cfg.algorithm.solver_tol),
    };
    res.map_err(|e| ExperimentError::Config(e.to_string()))
}

/// Builds the CSV row for a finished run.
pub fn make_record(
    cfg: &ExperimentConfig,
    trial: usize,
    gamma_db: f64,
    method: Method,
    ch: &ChannelSet,
    rep: &SolveReport,
    elapsed_seconds: f64,
) -> TrialRecord {
    let m = ch.n_ris_elements();
    let dc_residuals = rep
        .dc_reports
        .last()
        .map(|r| {
            r.residual_trace
                .iter()
                .map(|v| format!("{v:e}"))
                .collect::<Vec<_>>()
                .join(";")
        })
        .unwrap_or_default();
    TrialRecord {
        trial_index: trial,
        seed: trial_seed(cfg.base_seed, trial, m),
        m,
        k: ch.n_sus(),
        l: ch.n_pus(),
        n: ch.n_antennas(),
        gamma_db,
        method,
        status: rep.status,
        outer_iterations: rep.outer_iterations,
        total_power_db: rep.final_power().map(linear_to_db),
        final_rank_residual: rep.final_rank_residual,
        wall_time_seconds: if cfg.record_timing { elapsed_seconds } else { 0.0 },
        channel_hash: format!("{:016x}", ch.fingerprint()),
        randomized_steps: rep.randomizations.iter().filter(|r| r.is_some()).count(),
        dc_residuals,
    }
}

/// Runs one `(trial, M, γ, method)` cell of a sweep.
pub fn run_trial(
    cfg: &ExperimentConfig,
    trial: usize,
    m: usize,
    gamma_db: f64,
    method: Method,
) -> Result<(TrialRecord, SolveReport), ExperimentError> {
    let ch = trial_channels(cfg, trial, m)?;
    let qos = cfg.qos(gamma_db)?;
    let start = Instant::now();
    let rep = run_method(cfg, &ch, &qos, method, trial_seed(cfg.base_seed, trial, m))?;
    let rec = make_record(cfg, trial, gamma_db, method, &ch, &rep, start.elapsed().as_secs_f64());
    Ok((rec, rep))
}

/// Runs the full sweep. Records are ordered by SINR target, then `M`, then
/// method (config order), then trial, independent of scheduling.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ExperimentError> {
    cfg.validate()?;
    let mut jobs = Vec::new();
    for &g in &cfg.gamma_db {
        for &m in &cfg.m_values {
            for &method in &cfg.methods {
                for trial in 0..cfg.trials {
                    jobs.push((g, m, method, trial));
                }
            }
        }
    }
    let work = || -> Result<Vec<TrialRecord>, ExperimentError> {
        jobs.par_iter()
            .map(|&(g, m, method, trial)| run_trial(cfg, trial, m, g, method).map(|r| r.0))
            .collect()
    };
    let records = if cfg.jobs == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| ExperimentError::Config(e.to_string()))?
            .install(work)?
    };
    if let Some(path) = &cfg.output_path {
        write_csv(path, &records)?;
    }
    Ok(records)
}

pub fn write_csv(path: &Path, records: &[TrialRecord]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>, ExperimentError> {
    let mut r = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for row in r.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Aggregate of one `(γ, M, method)` sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub gamma_db: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub method: Method,
    pub trials: usize,
    pub feasible: usize,
    pub infeasible: usize,
    /// Mean of `total_power_db` over feasible trials.
    pub mean_power_db: Option<f64>,
    /// Standard error of that mean.
    pub std_error_db: Option<f64>,
}

impl SummaryRow {
    pub fn feasibility_rate(&self) -> f64 {
        self.feasible as f64 / self.trials as f64
    }
}

/// Mean and standard error of a sample; the error is `None` below two values.
pub fn mean_and_se(values: &[f64]) -> Option<(f64, Option<f64>)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Some((mean, None));
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Some((mean, Some((var / n).sqrt())))
}

/// Groups by `(γ, M, method)`. Trials ending with a feasible pair count
/// toward the mean, including `PhaseStalled` ones.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(u64, usize, Method), Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((ordered_bits(r.gamma_db), r.m, r.method))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((_, m, method), rows)| {
            let powers: Vec<f64> = rows
                .iter()
                .filter(|r| r.status.has_solution())
                .filter_map(|r| r.total_power_db)
                .collect();
            let stats = mean_and_se(&powers);
            SummaryRow {
                gamma_db: rows[0].gamma_db,
                m,
                method,
                trials: rows.len(),
                feasible: powers.len(),
                infeasible: rows.len() - powers.len(),
                mean_power_db: stats.map(|s| s.0),
                std_error_db: stats.and_then(|s| s.1),
            }
        })
        .collect()
}

/// Sort key for finite floats that respects numeric order.
fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

/// Per-trial differences `a − b` in dB at one sweep point, over trials
/// where both methods ended feasible.
pub fn paired_differences(
    records: &[TrialRecord],
    gamma_db: f64,
    m: usize,
    a: Method,
    b: Method,
) -> Vec<f64> {
    let pick = |method: Method| -> BTreeMap<usize, f64> {
        records
            .iter()
            .filter(|r| r.gamma_db == gamma_db && r.m == m && r.method == method)
            .filter(|r| r.status.has_solution())
            .filter_map(|r| r.total_power_db.map(|p| (r.trial_index, p)))
            .collect()
    };
    let pa = pick(a);
    let pb = pick(b);
    pa.iter()
        .filter_map(|(t, x)| pb.get(t).map(|y| x - y))
        .collect()
}

pub fn write_summary_csv<W: std::io::Write>(out: W, rows: &[SummaryRow]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
