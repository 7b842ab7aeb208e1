//! Phase-shift feasibility for fixed beamformers.
//!
//! With `W` fixed, each received amplitude is affine in the RIS coefficients:
//! `h_kᴴ w_i = v_ᴴ a[k][i] + b[k][i]` where `v = conj(θ)`. Appending a unit
//! entry gives the lifted vector `ṽ = (v; 1)` and quadratic forms
//! `ṽᴴ R ṽ + |b|² = |vᴴa + b|²`. Lifting `Θ = ṽṽᴴ` turns every constraint
//! linear in `Θ`; the rank-one condition is handled either by the
//! difference-of-convex penalty `Tr(Θ) − ‖Θ‖₂` or by Gaussian randomization.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::channel::ChannelSet;
use crate::conic::{solve_sdp, ConicError, SdpProblem, Sense, SolveStatus, DEFAULT_SOLVER_TOL};
use crate::numerics::{
    hermitian_eig, leading_rank_one, rank_one_factor, rank_one_residual, CMatrix, CVector,
    HermitianMatrix, NumericsError, C64,
};
use crate::system::{BeamformerSet, PhaseVector, QosSpec, SystemError, DEFAULT_FEASIBILITY_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("relaxed phase problem is infeasible for the given beamformers")]
    PhaseInfeasible,
    #[error("no feasible candidate among {attempts} randomizations")]
    RandomizationFailure { attempts: usize },
    #[error("SDP solver stopped with status {0}")]
    SolverFailure(SolveStatus),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Coefficients of the phase subproblem for fixed beamformers.
///
/// `a[k][i]`, `b[k][i]` describe user `k`'s channel applied to beam `i`;
/// `d[l][k]`, `c[l][k]` PU `l`'s channel applied to beam `k`.
#[derive(Debug, Clone)]
pub struct HomogenizedData {
    pub a: Vec<Vec<CVector>>,
    pub b: Vec<Vec<C64>>,
    pub d: Vec<Vec<CVector>>,
    pub c: Vec<Vec<C64>>,
    pub r: Vec<Vec<HermitianMatrix>>,
    pub q: Vec<Vec<HermitianMatrix>>,
    pub sigma2: f64,
    pub gamma: Vec<f64>,
    pub kappa: Vec<f64>,
}

impl HomogenizedData {
    pub fn n_elements(&self) -> usize {
        self.r
            .first()
            .and_then(|row| row.first())
            .map(|m| m.dim() - 1)
            .or_else(|| self.q.first().and_then(|row| row.first()).map(|m| m.dim() - 1))
            .unwrap_or(0)
    }

    pub fn n_users(&self) -> usize {
        self.gamma.len()
    }

    pub fn n_pus(&self) -> usize {
        self.kappa.len()
    }
}

/// `[[a aᴴ, a b̄], [b aᴴ, 0]]`
pub fn homogeneous_block(a: &CVector, b: C64) -> HermitianMatrix {
    let m = a.len();
    let mut out = CMatrix::zeros(m + 1, m + 1);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = a[i] * a[j].conj();
        }
        out[(i, m)] = a[i] * b.conj();
        out[(m, i)] = b * a[i].conj();
    }
    HermitianMatrix::from_matrix_unchecked(out)
}

/// `diag(rowᴴ) G w` where `row` holds the raw reflected channel.
fn reflected_coeffs(raw: &CMatrix, r: usize, gw: &CVector) -> CVector {
    CVector::from_fn(gw.len(), |m, _| raw[(r, m)].conj() * gw[m])
}

fn direct_coeff(raw: &CMatrix, r: usize, w: &CVector) -> C64 {
    (0..w.len()).map(|j| raw[(r, j)].conj() * w[j]).sum()
}

pub fn homogenize(
    ch: &ChannelSet,
    w: &BeamformerSet,
    qos: &QosSpec,
) -> Result<HomogenizedData, PhaseError> {
    let (k_users, l_pus, n, m) = (ch.n_sus(), ch.n_pus(), ch.n_antennas(), ch.n_ris_elements());
    let dims = [
        ("beamformer length", n, w.n_antennas()),
        ("beamformer count", k_users, w.n_users()),
        ("gamma length", k_users, qos.gamma.len()),
        ("kappa length", l_pus, qos.kappa.len()),
        ("h_r columns", m, ch.h_r.ncols()),
        ("u_r columns", m, ch.u_r.ncols()),
        ("g rows", m, ch.g.nrows()),
    ];
    for (what, expected, found) in dims {
        if expected != found {
            return Err(SystemError::DimensionMismatch {
                what,
                expected,
                found,
            }
            .into());
        }
    }
    let beams: Vec<CVector> = (0..k_users).map(|i| w.beam(i)).collect();
    let gw: Vec<CVector> = beams.iter().map(|b| &ch.g * b).collect();

    let mut a = Vec::with_capacity(k_users);
    let mut b = Vec::with_capacity(k_users);
    let mut r = Vec::with_capacity(k_users);
    for k in 0..k_users {
        let ak: Vec<CVector> = gw.iter().map(|g| reflected_coeffs(&ch.h_r, k, g)).collect();
        let bk: Vec<C64> = beams.iter().map(|wi| direct_coeff(&ch.h_d, k, wi)).collect();
        r.push(ak.iter().zip(&bk).map(|(av, &bv)| homogeneous_block(av, bv)).collect());
        a.push(ak);
        b.push(bk);
    }
    let mut d = Vec::with_capacity(l_pus);
    let mut c = Vec::with_capacity(l_pus);
    let mut q = Vec::with_capacity(l_pus);
    for l in 0..l_pus {
        let dl: Vec<CVector> = gw.iter().map(|g| reflected_coeffs(&ch.u_r, l, g)).collect();
        let cl: Vec<C64> = beams.iter().map(|wk| direct_coeff(&ch.u_d, l, wk)).collect();
        q.push(dl.iter().zip(&cl).map(|(dv, &cv)| homogeneous_block(dv, cv)).collect());
        d.push(dl);
        c.push(cl);
    }
    Ok(HomogenizedData {
        a,
        b,
        d,
        c,
        r,
        q,
        sigma2: qos.sigma2,
        gamma: qos.gamma.clone(),
        kappa: qos.kappa.clone(),
    })
}

/// `ṽ = (conj θ; 1)`
pub fn lift_phase(theta: &PhaseVector) -> CVector {
    let t = theta.as_vector();
    CVector::from_fn(t.len() + 1, |i, _| {
        if i < t.len() {
            t[i].conj()
        } else {
            C64::new(1.0, 0.0)
        }
    })
}

/// Inverse of [`lift_phase`] up to a global phase, projected to unit modulus.
pub fn phase_from_lifted(v: &CVector) -> PhaseVector {
    let m = v.len() - 1;
    let anchor = v[m];
    PhaseVector::new_unchecked(CVector::from_fn(m, |i, _| {
        let z = v[i] / anchor;
        if z.norm() > 0.0 && z.is_finite() {
            C64::from_polar(1.0, -z.arg())
        } else {
            C64::new(1.0, 0.0)
        }
    }))
}

/// Signal, cross-interference and PU interference terms of the subproblem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintTerms {
    /// `|h_kᴴ w_k|²`
    pub signal: Vec<f64>,
    /// `Σ_{i≠k} |h_kᴴ w_i|²`
    pub interference: Vec<f64>,
    /// `Σ_k |u_lᴴ w_k|²`
    pub pu_interference: Vec<f64>,
}

impl ConstraintTerms {
    /// Same acceptance rule as [`crate::system::check_feasibility`].
    pub fn feasible(&self, dat: &HomogenizedData, tol: f64) -> bool {
        let sinr_ok = (0..self.signal.len()).all(|k| {
            self.signal[k] / (self.interference[k] + dat.sigma2) >= dat.gamma[k] * (1.0 - tol)
        });
        let ip_ok = self
            .pu_interference
            .iter()
            .zip(&dat.kappa)
            .all(|(&p, &k)| p <= k * (1.0 + tol));
        sinr_ok && ip_ok
    }
}

/// Evaluates the terms directly as `|vᴴa + b|²`.
pub fn quadratic_terms(dat: &HomogenizedData, theta: &PhaseVector) -> ConstraintTerms {
    let v = theta.as_vector().map(|z| z.conj());
    let amp = |a: &CVector, b: C64| (v.dotc(a) + b).norm_sqr();
    let k_users = dat.n_users();
    let mut signal = vec![0.0; k_users];
    let mut interference = vec![0.0; k_users];
    for k in 0..k_users {
        for i in 0..k_users {
            let p = amp(&dat.a[k][i], dat.b[k][i]);
            if i == k {
                signal[k] = p;
            } else {
                interference[k] += p;
            }
        }
    }
    let pu_interference = (0..dat.n_pus())
        .map(|l| (0..k_users).map(|k| amp(&dat.d[l][k], dat.c[l][k])).sum())
        .collect();
    ConstraintTerms {
        signal,
        interference,
        pu_interference,
    }
}

/// Evaluates the terms as `⟨R, Θ⟩ + |b|²`.
pub fn lifted_terms(dat: &HomogenizedData, lifted: &HermitianMatrix) -> ConstraintTerms {
    let k_users = dat.n_users();
    let mut signal = vec![0.0; k_users];
    let mut interference = vec![0.0; k_users];
    for k in 0..k_users {
        for i in 0..k_users {
            let p = dat.r[k][i].inner(lifted) + dat.b[k][i].norm_sqr();
            if i == k {
                signal[k] = p;
            } else {
                interference[k] += p;
            }
        }
    }
    let pu_interference = (0..dat.n_pus())
        .map(|l| {
            (0..k_users)
                .map(|k| dat.q[l][k].inner(lifted) + dat.c[l][k].norm_sqr())
                .sum()
        })
        .collect();
    ConstraintTerms {
        signal,
        interference,
        pu_interference,
    }
}

fn unit_diagonal(dim: usize, i: usize) -> HermitianMatrix {
    let mut diag = vec![0.0; dim];
    diag[i] = 1.0;
    HermitianMatrix::from_real_diagonal(&diag)
}

/// Lifted SDP: `K` SINR rows, then `L` interference rows, then `M+1` unit
/// diagonal equalities. The rank-one condition is left out.
pub fn build_feasibility_sdp(
    dat: &HomogenizedData,
    objective: Option<HermitianMatrix>,
) -> SdpProblem {
    let dim = dat.n_elements() + 1;
    let mut p = SdpProblem::feasibility(dim);
    if let Some(obj) = objective {
        p.objective = obj;
    }
    let k_users = dat.n_users();
    for k in 0..k_users {
        let g = dat.gamma[k];
        let mut lhs = dat.r[k][k].scale(-1.0);
        let mut bound = dat.b[k][k].norm_sqr() - g * dat.sigma2;
        for i in (0..k_users).filter(|&i| i != k) {
            lhs = &lhs + &dat.r[k][i].scale(g);
            bound -= g * dat.b[k][i].norm_sqr();
        }
        p.push(lhs, Sense::LessEqual, bound);
    }
    for l in 0..dat.n_pus() {
        let mut lhs = HermitianMatrix::zeros(dim);
        let mut bound = dat.kappa[l];
        for k in 0..k_users {
            lhs = &lhs + &dat.q[l][k];
            bound -= dat.c[l][k].norm_sqr();
        }
        p.push(lhs, Sense::LessEqual, bound);
    }
    for i in 0..dim {
        p.push(unit_diagonal(dim, i), Sense::Equal, 1.0);
    }
    p
}

/// PSD matrix with unit diagonal standing in for `ṽṽᴴ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedSolution {
    pub matrix: HermitianMatrix,
}

impl LiftedSolution {
    pub fn from_phase(theta: &PhaseVector) -> Self {
        Self {
            matrix: HermitianMatrix::outer(&lift_phase(theta)),
        }
    }

    pub fn rank_one_residual(&self) -> f64 {
        rank_one_residual(&self.matrix)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcParams {
    pub max_iters: usize,
    /// Absolute bound on `Tr(Θ) − ‖Θ‖₂` for convergence.
    pub rank_tol: f64,
    pub solver_tol: f64,
    /// Draws for the randomization fallback.
    pub n_randomizations: usize,
    pub feas_tol: f64,
}

impl Default for DcParams {
    fn default() -> Self {
        Self {
            max_iters: 50,
            rank_tol: 1e-6,
            solver_tol: DEFAULT_SOLVER_TOL,
            n_randomizations: 1000,
            feas_tol: DEFAULT_FEASIBILITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcReport {
    /// Penalized iterations; the initial feasibility solve is not counted.
    pub iterations: usize,
    /// Rank-one residual of every iterate, starting with the initial one.
    pub residual_trace: Vec<f64>,
    /// `Tr(Θᵗ) − ⟨Θᵗ, φφᴴ(Θᵗ⁻¹)⟩` for `t ≥ 1`.
    pub surrogate_trace: Vec<f64>,
    /// Largest `|Θᵢᵢ − 1|` seen over all iterates.
    pub max_diagonal_error: f64,
    pub converged: bool,
    pub final_residual: f64,
}

fn max_diagonal_error(m: &HermitianMatrix) -> f64 {
    let a = m.as_matrix();
    (0..m.dim()).fold(0.0, |acc: f64, i| acc.max((a[(i, i)].re - 1.0).abs()))
}

/// Minimizes `⟨I − φφᴴ(Θᵗ⁻¹), Θ⟩` over the lifted feasible set, starting
/// from a pure feasibility solve, until the rank-one residual drops to
/// `rank_tol` or `max_iters` penalized solves have run.
pub fn dc_solve(
    dat: &HomogenizedData,
    params: &DcParams,
) -> Result<(LiftedSolution, DcReport), PhaseError> {
    let base = solve_sdp(&build_feasibility_sdp(dat, None), params.solver_tol)?;
    match base.info.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(PhaseError::PhaseInfeasible),
        s => return Err(PhaseError::SolverFailure(s)),
    }
    let dim = dat.n_elements() + 1;
    let mut current = base.x;
    let mut residual = rank_one_residual(&current);
    let mut report = DcReport {
        iterations: 0,
        residual_trace: vec![residual],
        surrogate_trace: Vec::new(),
        max_diagonal_error: max_diagonal_error(&current),
        converged: residual <= params.rank_tol,
        final_residual: residual,
    };
    while !report.converged && report.iterations < params.max_iters {
        let sub = leading_rank_one(&current);
        let penalty = &HermitianMatrix::identity(dim) - &sub;
        let step = solve_sdp(&build_feasibility_sdp(dat, Some(penalty)), params.solver_tol)?;
        if step.info.status != SolveStatus::Optimal {
            break;
        }
        report.iterations += 1;
        current = step.x;
        residual = rank_one_residual(&current);
        report
            .surrogate_trace
            .push(current.trace() - current.inner(&sub));
        report.residual_trace.push(residual);
        report.max_diagonal_error = report.max_diagonal_error.max(max_diagonal_error(&current));
        report.final_residual = residual;
        report.converged = residual <= params.rank_tol;
    }
    Ok((LiftedSolution { matrix: current }, report))
}

/// Recovers `θ` from a (numerically) rank-one lifted solution.
pub fn extract_phase(sol: &LiftedSolution, rank_tol: f64) -> Result<PhaseVector, PhaseError> {
    let dim = sol.matrix.dim() as f64;
    // rank_one_factor compares against tol · Tr, and Tr = M+1 on the feasible set
    let v = rank_one_factor(&sol.matrix, rank_tol * dim / sol.matrix.trace().max(f64::MIN_POSITIVE))?;
    Ok(phase_from_lifted(&v))
}

/// Draws `ξ ~ CN(0, Θ)` and keeps the first phase vector that satisfies the
/// subproblem constraints. Returns the phase and the zero-based draw index.
pub fn randomize<R: Rng + ?Sized>(
    dat: &HomogenizedData,
    lifted: &HermitianMatrix,
    n_draws: usize,
    feas_tol: f64,
    rng: &mut R,
) -> Result<(PhaseVector, usize), PhaseError> {
    let eig = hermitian_eig(lifted);
    let dim = lifted.dim();
    let factor = CMatrix::from_fn(dim, dim, |i, j| {
        eig.eigenvectors[(i, j)] * eig.eigenvalues[j].max(0.0).sqrt()
    });
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for draw in 0..n_draws {
        let r = CVector::from_fn(dim, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re * half, im * half)
        });
        let xi = &factor * r;
        if xi[dim - 1].norm() == 0.0 {
            continue;
        }
        let theta = phase_from_lifted(&xi);
        if quadratic_terms(dat, &theta).feasible(dat, feas_tol) {
            return Ok((theta, draw));
        }
    }
    Err(PhaseError::RandomizationFailure { attempts: n_draws })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DcOutcome {
    pub theta: PhaseVector,
    pub report: DcReport,
    /// Set when the randomization fallback produced `theta`.
    pub randomization_index: Option<usize>,
}

/// DC phase step with the randomization fallback for iterates that do not
/// converge or whose extracted phase misses the constraints.
pub fn dc_phase_step<R: Rng + ?Sized>(
    dat: &HomogenizedData,
    params: &DcParams,
    rng: &mut R,
) -> Result<DcOutcome, PhaseError> {
    let (sol, report) = dc_solve(dat, params)?;
    if report.converged {
        if let Ok(theta) = extract_phase(&sol, params.rank_tol) {
            if quadratic_terms(dat, &theta).feasible(dat, params.feas_tol) {
                return Ok(DcOutcome {
                    theta,
                    report,
                    randomization_index: None,
                });
            }
        }
    }
    let (theta, idx) = randomize(dat, &sol.matrix, params.n_randomizations, params.feas_tol, rng)?;
    Ok(DcOutcome {
        theta,
        report,
        randomization_index: Some(idx),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdrParams {
    pub n_randomizations: usize,
    pub solver_tol: f64,
    pub rank_tol: f64,
    pub feas_tol: f64,
}

impl Default for SdrParams {
    fn default() -> Self {
        Self {
            n_randomizations: 1000,
            solver_tol: DEFAULT_SOLVER_TOL,
            rank_tol: 1e-6,
            feas_tol: DEFAULT_FEASIBILITY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdrOutcome {
    pub theta: PhaseVector,
    pub relaxed_residual: f64,
    /// `None` when the relaxed solution was already rank one.
    pub randomization_index: Option<usize>,
}

/// Relaxed SDP followed by direct extraction or Gaussian randomization.
pub fn sdr_solve<R: Rng + ?Sized>(
    dat: &HomogenizedData,
    params: &SdrParams,
    rng: &mut R,
) -> Result<SdrOutcome, PhaseError> {
    if params.n_randomizations == 0 {
        return Err(PhaseError::InvalidParams("n_randomizations must be at least 1".into()));
    }
    let sol = solve_sdp(&build_feasibility_sdp(dat, None), params.solver_tol)?;
    match sol.info.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => return Err(PhaseError::PhaseInfeasible),
        s => return Err(PhaseError::SolverFailure(s)),
    }
    let lifted = LiftedSolution { matrix: sol.x };
    let relaxed_residual = lifted.rank_one_residual();
    if relaxed_residual <= params.rank_tol {
        if let Ok(theta) = extract_phase(&lifted, params.rank_tol) {
            if quadratic_terms(dat, &theta).feasible(dat, params.feas_tol) {
                return Ok(SdrOutcome {
                    theta,
                    relaxed_residual,
                    randomization_index: None,
                });
            }
        }
    }
    let (theta, idx) = randomize(
        dat,
        &lifted.matrix,
        params.n_randomizations,
        params.feas_tol,
        rng,
    )?;
    Ok(SdrOutcome {
        theta,
        relaxed_residual,
        randomization_index: Some(idx),
    })
}
