//! Alternating minimization over beamformers and RIS phases.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::beamforming::{solve_beamforming, BeamformingError};
use crate::channel::ChannelSet;
use crate::conic::{SolveStatus, DEFAULT_SOLVER_TOL};
use crate::phase::{dc_phase_step, homogenize, sdr_solve, DcParams, DcReport, PhaseError, SdrParams};
use crate::system::{
    effective_pu_channels, effective_su_channels, BeamformerSet, PhaseVector, QosSpec, SystemError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DriverError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Beamforming(#[from] BeamformingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseMethod {
    Dc,
    Sdr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OuterStatus {
    Converged,
    MaxIterations,
    InfeasibleAtStart,
    PhaseStalled,
}

impl OuterStatus {
    /// Whether the report carries a feasible `(W, θ)` pair.
    pub fn has_solution(self) -> bool {
        self != OuterStatus::InfeasibleAtStart
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingParams {
    /// Stop once the relative power decrease of an outer iteration is below this.
    pub epsilon: f64,
    pub max_outer: usize,
    pub phase_method: PhaseMethod,
    pub dc: DcParams,
    pub sdr: SdrParams,
    /// Seeds the initial phases and, on a separate stream, randomization.
    pub init_seed: u64,
    /// Tolerance of the beamforming SOCP.
    pub solver_tol: f64,
}

impl Default for AlternatingParams {
    fn default() -> Self {
        Self {
            epsilon: 1e-4,
            max_outer: 100,
            phase_method: PhaseMethod::Dc,
            dc: DcParams::default(),
            sdr: SdrParams::default(),
            init_seed: 0,
            solver_tol: DEFAULT_SOLVER_TOL,
        }
    }
}

impl AlternatingParams {
    pub fn validate(&self) -> Result<(), DriverError> {
        if !(self.epsilon > 0.0) {
            return Err(DriverError::InvalidParams(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_outer == 0 {
            return Err(DriverError::InvalidParams("max_outer must be at least 1".into()));
        }
        if !(self.solver_tol > 0.0) {
            return Err(DriverError::InvalidParams("solver_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    /// Power after the initial beamforming solve, then after every accepted
    /// outer iteration.
    pub power_trajectory: Vec<f64>,
    pub final_w: BeamformerSet,
    pub final_theta: PhaseVector,
    /// Completed phase steps; 1 for the RIS-free cases.
    pub outer_iterations: usize,
    pub status: OuterStatus,
    pub dc_reports: Vec<DcReport>,
    /// Randomization draw index per phase step, `None` for direct extraction.
    pub randomizations: Vec<Option<usize>>,
    /// Rank-one residual of the last lifted solution.
    pub final_rank_residual: Option<f64>,
    /// Why a `PhaseStalled` run stopped.
    pub stall_reason: Option<String>,
}

impl SolveReport {
    pub fn final_power(&self) -> Option<f64> {
        if self.status.has_solution() {
            self.power_trajectory.last().copied()
        } else {
            None
        }
    }

    fn infeasible(n: usize, k: usize, theta: PhaseVector) -> Self {
        Self {
            power_trajectory: Vec::new(),
            final_w: BeamformerSet::zeros(n, k),
            final_theta: theta,
            outer_iterations: 0,
            status: OuterStatus::InfeasibleAtStart,
            dc_reports: Vec::new(),
            randomizations: Vec::new(),
            final_rank_residual: None,
            stall_reason: None,
        }
    }
}

/// Phases drawn independently and uniformly from `[0, 2π)`.
pub fn random_phases<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PhaseVector {
    let angles: Vec<f64> = (0..m)
        .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
        .collect();
    PhaseVector::from_angles(&angles)
}

fn w_step(
    ch: &ChannelSet,
    theta: &PhaseVector,
    qos: &QosSpec,
    tol: f64,
) -> Result<(BeamformerSet, f64, SolveStatus), DriverError> {
    let h = effective_su_channels(ch, theta)?;
    let u = effective_pu_channels(ch, theta)?;
    let sol = solve_beamforming(&h, &u, qos, tol)?;
    Ok((sol.w, sol.power, sol.status))
}

/// Alternates beamforming and phase steps starting from random phases.
pub fn alternate(
    ch: &ChannelSet,
    qos: &QosSpec,
    params: &AlternatingParams,
) -> Result<SolveReport, DriverError> {
    params.validate()?;
    let mut init_rng = ChaCha8Rng::seed_from_u64(params.init_seed);
    init_rng.set_stream(0);
    let mut phase_rng = ChaCha8Rng::seed_from_u64(params.init_seed);
    phase_rng.set_stream(1);

    let m = ch.n_ris_elements();
    let mut theta = random_phases(m, &mut init_rng);
    let (mut w, mut power, status) = w_step(ch, &theta, qos, params.solver_tol)?;
    if status != SolveStatus::Optimal {
        return Ok(SolveReport::infeasible(ch.n_antennas(), ch.n_sus(), theta));
    }
    let mut report = SolveReport {
        power_trajectory: vec![power],
        final_w: w.clone(),
        final_theta: theta.clone(),
        outer_iterations: 0,
        status: OuterStatus::MaxIterations,
        dc_reports: Vec::new(),
        randomizations: Vec::new(),
        final_rank_residual: None,
        stall_reason: None,
    };
    if m == 0 {
        report.outer_iterations = 1;
        report.status = OuterStatus::Converged;
        return Ok(report);
    }

    while report.outer_iterations < params.max_outer {
        report.outer_iterations += 1;
        let dat = match homogenize(ch, &w, qos) {
            Ok(d) => d,
            Err(e) => return Err(DriverError::InvalidParams(e.to_string())),
        };
        let step = match params.phase_method {
            PhaseMethod::Dc => dc_phase_step(&dat, &params.dc, &mut phase_rng).map(|o| {
                report.final_rank_residual = Some(o.report.final_residual);
                report.dc_reports.push(o.report);
                (o.theta, o.randomization_index)
            }),
            PhaseMethod::Sdr => sdr_solve(&dat, &params.sdr, &mut phase_rng).map(|o| {
                report.final_rank_residual = Some(o.relaxed_residual);
                (o.theta, o.randomization_index)
            }),
        };
        let (next_theta, draw) = match step {
            Ok(v) => v,
            Err(e) => {
                report.status = OuterStatus::PhaseStalled;
                report.stall_reason = Some(phase_stall_reason(&e));
                break;
            }
        };
        report.randomizations.push(draw);
        let (next_w, next_power, status) = w_step(ch, &next_theta, qos, params.solver_tol)?;
        if status != SolveStatus::Optimal {
            report.status = OuterStatus::PhaseStalled;
            report.stall_reason = Some(format!("beamforming solve returned {status}"));
            break;
        }
        if next_power > power {
            // the previous beamformers stay feasible for the new phases, so
            // this is solver noise; keep the certified pair
            report.status = OuterStatus::Converged;
            break;
        }
        let decrease = (power - next_power) / power;
        theta = next_theta;
        w = next_w;
        power = next_power;
        report.power_trajectory.push(power);
        if decrease < params.epsilon {
            report.status = OuterStatus::Converged;
            break;
        }
    }
    report.final_w = w;
    report.final_theta = theta;
    Ok(report)
}

fn phase_stall_reason(e: &PhaseError) -> String {
    e.to_string()
}

/// Beamforming over the direct links only.
pub fn no_ris_baseline(
    ch: &ChannelSet,
    qos: &QosSpec,
    solver_tol: f64,
) -> Result<SolveReport, DriverError> {
    let direct = ch.without_ris();
    let theta = PhaseVector::ones(ch.n_ris_elements());
    let (w, power, status) = w_step(&direct, &theta, qos, solver_tol)?;
    if status != SolveStatus::Optimal {
        return Ok(SolveReport::infeasible(ch.n_antennas(), ch.n_sus(), theta));
    }
    Ok(SolveReport {
        power_trajectory: vec![power],
        final_w: w,
        final_theta: theta,
        outer_iterations: 1,
        status: OuterStatus::Converged,
        dc_reports: Vec::new(),
        randomizations: Vec::new(),
        final_rank_residual: None,
        stall_reason: None,
    })
}
