//! Solver-agnostic second-order cone and Hermitian semidefinite programs.
//!
//! SOCPs are handed to Clarabel. SDPs over a complex Hermitian variable are
//! solved natively by a homogeneous self-dual interior-point method in
//! [`sdp`], so no real embedding is needed on the solve path; the embedding
//! helpers here exist for inspection and cross-checking.

mod sdp;
mod socp;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::numerics::{CMatrix, HermitianMatrix};

pub use sdp::{solve_sdp, SdpSolution};
pub use socp::{solve_socp, SocpSolution};

pub const DEFAULT_SOLVER_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConicError {
    #[error("malformed problem: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    /// Dual infeasible: the objective is unbounded below.
    Unbounded,
    IterationLimit,
    NumericalTrouble,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::IterationLimit => "iteration_limit",
            SolveStatus::NumericalTrouble => "numerical_trouble",
        };
        f.write_str(s)
    }
}

/// Outcome of a conic solve. `primal_residual` is the largest relative
/// constraint violation at the returned point; `objective` is in the units
/// of the problem as posed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveInfo {
    pub status: SolveStatus,
    pub primal_residual: f64,
    pub objective: f64,
    pub iterations: usize,
}

impl SolveInfo {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// `‖A x + b‖₂ ≤ cᵀx + d` over real variables.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeConstraint {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub d: f64,
}

/// `aᵀx = rhs`
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEquality {
    pub a: DVector<f64>,
    pub rhs: f64,
}

/// Minimize `objectiveᵀx` subject to cone constraints and linear equalities.
#[derive(Debug, Clone, PartialEq)]
pub struct SocpProblem {
    pub n_vars: usize,
    pub objective: DVector<f64>,
    pub cones: Vec<ConeConstraint>,
    pub equalities: Vec<LinearEquality>,
}

impl SocpProblem {
    pub fn new(n_vars: usize) -> Self {
        Self {
            n_vars,
            objective: DVector::zeros(n_vars),
            cones: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn n_constraints(&self) -> usize {
        self.cones.len() + self.equalities.len()
    }

    pub fn validate(&self) -> Result<(), ConicError> {
        let n = self.n_vars;
        if self.objective.len() != n {
            return Err(ConicError::Malformed(format!(
                "objective has {} entries, expected {n}",
                self.objective.len()
            )));
        }
        for (i, cone) in self.cones.iter().enumerate() {
            if cone.a.ncols() != n || cone.c.len() != n || cone.b.len() != cone.a.nrows() {
                return Err(ConicError::Malformed(format!("cone {i} has inconsistent dimensions")));
            }
        }
        for (i, eq) in self.equalities.iter().enumerate() {
            if eq.a.len() != n {
                return Err(ConicError::Malformed(format!("equality {i} has wrong length")));
            }
        }
        let finite = self.objective.iter().all(|x| x.is_finite())
            && self.cones.iter().all(|c| {
                c.a.iter().chain(c.b.iter()).chain(c.c.iter()).all(|x| x.is_finite()) && c.d.is_finite()
            })
            && self
                .equalities
                .iter()
                .all(|e| e.a.iter().all(|x| x.is_finite()) && e.rhs.is_finite());
        if !finite {
            return Err(ConicError::Malformed("non-finite problem data".into()));
        }
        Ok(())
    }

    /// Largest violation over all constraints at `x`, each measured relative
    /// to the constraint's scale.
    pub fn max_violation(&self, x: &DVector<f64>) -> f64 {
        let mut worst = 0.0_f64;
        for cone in &self.cones {
            let lhs = (&cone.a * x + &cone.b).norm();
            let rhs = cone.c.dot(x) + cone.d;
            let scale = 1.0 + cone.b.norm() + cone.d.abs();
            worst = worst.max((lhs - rhs) / scale);
        }
        for eq in &self.equalities {
            worst = worst.max((eq.a.dot(x) - eq.rhs).abs() / (1.0 + eq.rhs.abs()));
        }
        worst.max(0.0)
    }
}

impl fmt::Display for SocpProblem {
    /// Debug dump: objective line, then one line per constraint.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "socp n_vars={}", self.n_vars)?;
        writeln!(f, "minimize {}", fmt_vec(self.objective.as_slice()))?;
        for (i, c) in self.cones.iter().enumerate() {
            let rows: Vec<String> = c.a.row_iter().map(|r| fmt_vec(r.transpose().as_slice())).collect();
            writeln!(
                f,
                "cone {i}: || A x + b || <= c.x + d ; A=[{}] b={} c={} d={}",
                rows.join("; "),
                fmt_vec(c.b.as_slice()),
                fmt_vec(c.c.as_slice()),
                c.d
            )?;
        }
        for (i, e) in self.equalities.iter().enumerate() {
            writeln!(f, "eq {i}: a.x = rhs ; a={} rhs={}", fmt_vec(e.a.as_slice()), e.rhs)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    LessEqual,
    Equal,
}

/// `⟨matrix, X⟩ sense bound`
#[derive(Debug, Clone, PartialEq)]
pub struct SdpConstraint {
    pub matrix: HermitianMatrix,
    pub bound: f64,
    pub sense: Sense,
}

/// Minimize `⟨objective, X⟩` over Hermitian `X ⪰ 0` of size `dim` subject to
/// linear constraints. `⟨A, X⟩ = Re Tr(AX)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub objective: HermitianMatrix,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    pub fn feasibility(dim: usize) -> Self {
        Self {
            dim,
            objective: HermitianMatrix::zeros(dim),
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, matrix: HermitianMatrix, sense: Sense, bound: f64) {
        self.constraints.push(SdpConstraint { matrix, bound, sense });
    }

    pub fn validate(&self) -> Result<(), ConicError> {
        if self.objective.dim() != self.dim {
            return Err(ConicError::Malformed(format!(
                "objective is {}x{}, expected {}",
                self.objective.dim(),
                self.objective.dim(),
                self.dim
            )));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.matrix.dim() != self.dim {
                return Err(ConicError::Malformed(format!("constraint {i} has wrong size")));
            }
            if !c.bound.is_finite() || c.matrix.as_matrix().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(ConicError::Malformed(format!("constraint {i} has non-finite data")));
            }
        }
        Ok(())
    }

    /// Signed violation of each constraint at `x` (positive = violated).
    pub fn violations(&self, x: &HermitianMatrix) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|c| {
                let v = c.matrix.inner(x) - c.bound;
                match c.sense {
                    Sense::LessEqual => v,
                    Sense::Equal => v.abs(),
                }
            })
            .collect()
    }
}

impl fmt::Display for SdpProblem {
    /// Debug dump: objective line, then one line per constraint. Matrices
    /// are written row-major as `re+imi` entries.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "sdp dim={}", self.dim)?;
        writeln!(f, "minimize <C,X> ; C={}", fmt_cmat(self.objective.as_matrix()))?;
        for (i, c) in self.constraints.iter().enumerate() {
            let op = match c.sense {
                Sense::LessEqual => "<=",
                Sense::Equal => "=",
            };
            writeln!(f, "con {i}: <A,X> {op} {} ; A={}", c.bound, fmt_cmat(c.matrix.as_matrix()))?;
        }
        Ok(())
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_cmat(m: &CMatrix) -> String {
    let rows: Vec<String> = m
        .row_iter()
        .map(|r| {
            r.iter()
                .map(|z| format!("{:e}{:+e}i", z.re, z.im))
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

/// Real symmetric embedding `[[Re X, −Im X], [Im X, Re X]]`. Inner products
/// double: `⟨embed(A), embed(X)⟩ = 2⟨A, X⟩`, and the embedding is PSD exactly
/// when `X` is.
pub fn embed_real(x: &HermitianMatrix) -> DMatrix<f64> {
    let n = x.dim();
    let m = x.as_matrix();
    DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = m[(i % n, j % n)];
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Inverse of [`embed_real`], averaging the two copies of each block.
pub fn unembed_real(e: &DMatrix<f64>) -> Result<HermitianMatrix, ConicError> {
    if !e.is_square() || e.nrows() % 2 != 0 {
        return Err(ConicError::Malformed("embedding must be square with even size".into()));
    }
    let n = e.nrows() / 2;
    let m = CMatrix::from_fn(n, n, |i, j| {
        let re = 0.5 * (e[(i, j)] + e[(i + n, j + n)]);
        let im = 0.5 * (e[(i + n, j)] - e[(i, j + n)]);
        crate::numerics::C64::new(re, im)
    });
    HermitianMatrix::new(m).map_err(|e| ConicError::Malformed(e.to_string()))
}
