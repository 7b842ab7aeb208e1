//! Primal-dual interior-point solver for complex Hermitian SDPs.
//!
//! Inequalities get nonnegative slacks, so the cone is `H₊ⁿ × R₊ᵖ`. The
//! iteration runs on the homogeneous self-dual embedding
//!
//! ```text
//!   𝒜x − bτ = 0,   𝒜ᵀy + z − cτ = 0,   cᵀx − bᵀy + κ = 0,   x, z ∈ K,  τ, κ ≥ 0
//! ```
//!
//! with HKM search directions and a Mehrotra predictor-corrector. A limit
//! point with `τ > 0` gives an optimal pair, one with `κ > 0` a certificate
//! of primal or dual infeasibility. Constraints that touch a single diagonal
//! entry are kept implicit when forming the Schur complement.

use nalgebra::{Cholesky, DMatrix, DVector};

use super::{ConicError, SdpProblem, Sense, SolveInfo, SolveStatus};
use crate::numerics::{CMatrix, HermitianMatrix, C64};

const MAX_ITERS: usize = 150;
const STEP_FRACTION: f64 = 0.98;
const MIN_STEP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub info: SolveInfo,
    /// Primal solution; the last iterate when the status is not optimal.
    pub x: HermitianMatrix,
    /// Multipliers per constraint, in problem order, for `C − Σ yᵢAᵢ ⪰ 0`.
    pub y: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Kind {
    /// `coef · X[idx, idx]`
    Diagonal { idx: usize, coef: f64 },
    Dense,
}

struct Row {
    a: CMatrix,
    kind: Kind,
    b: f64,
    slack: Option<usize>,
    scale: f64,
    orig: usize,
}

/// Normalized problem data; rows have unit Frobenius norm.
struct Model {
    n: usize,
    c: CMatrix,
    c_scale: f64,
    rows: Vec<Row>,
    n_slack: usize,
}

fn re_c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn sym(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * re_c(0.5)
}

/// `Re Tr(A B)`
fn re_trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)];
            let y = b[(k, i)];
            acc += x.re * y.re - x.im * y.im;
        }
    }
    acc
}

/// `⟨A, X⟩` for Hermitian arguments.
fn inner(a: &CMatrix, x: &CMatrix) -> f64 {
    a.iter().zip(x.iter()).map(|(p, q)| p.re * q.re + p.im * q.im).sum()
}

impl Model {
    fn build(p: &SdpProblem, tol: f64) -> Result<Model, SolveStatus> {
        let n = p.dim;
        let mut rows = Vec::with_capacity(p.constraints.len());
        let mut n_slack = 0;
        for (orig, con) in p.constraints.iter().enumerate() {
            let a = con.matrix.as_matrix();
            let norm = a.norm();
            if norm < 1e-280 {
                let consistent = match con.sense {
                    Sense::LessEqual => con.bound >= -tol,
                    Sense::Equal => con.bound.abs() <= tol,
                };
                if !consistent {
                    return Err(SolveStatus::Infeasible);
                }
                continue;
            }
            let scale = 1.0 / norm;
            let a = a * re_c(scale);
            let kind = single_diagonal(&a).map_or(Kind::Dense, |(idx, coef)| Kind::Diagonal { idx, coef });
            let slack = match con.sense {
                Sense::LessEqual => {
                    n_slack += 1;
                    Some(n_slack - 1)
                }
                Sense::Equal => None,
            };
            rows.push(Row {
                a,
                kind,
                b: con.bound * scale,
                slack,
                scale,
                orig,
            });
        }
        let c_norm = p.objective.frobenius_norm();
        let c_scale = if c_norm > 0.0 { c_norm } else { 1.0 };
        Ok(Model {
            n,
            c: p.objective.as_matrix() * re_c(1.0 / c_scale),
            c_scale,
            rows,
            n_slack,
        })
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    fn b(&self) -> DVector<f64> {
        DVector::from_iterator(self.m(), self.rows.iter().map(|r| r.b))
    }

    /// `𝒜(X, s)`
    fn apply(&self, x: &CMatrix, s: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.m(),
            self.rows.iter().map(|r| {
                let v = match r.kind {
                    Kind::Diagonal { idx, coef } => coef * x[(idx, idx)].re,
                    Kind::Dense => inner(&r.a, x),
                };
                v + r.slack.map_or(0.0, |j| s[j])
            }),
        )
    }

    /// `𝒜ᵀy` as (matrix part, slack part).
    fn adjoint(&self, y: &DVector<f64>) -> (CMatrix, Vec<f64>) {
        let mut mat = CMatrix::zeros(self.n, self.n);
        let mut slack = vec![0.0; self.n_slack];
        for (r, &yi) in self.rows.iter().zip(y.iter()) {
            match r.kind {
                Kind::Diagonal { idx, coef } => mat[(idx, idx)].re += yi * coef,
                Kind::Dense => mat += &r.a * re_c(yi),
            }
            if let Some(j) = r.slack {
                slack[j] = yi;
            }
        }
        (mat, slack)
    }

    /// HKM Schur complement `M_ij = Re Tr(Aᵢ X Aⱼ Z⁻¹) + δᵢⱼ sᵢ/zᵢ`.
    fn schur(&self, x: &CMatrix, zi: &CMatrix, s: &[f64], zs: &[f64]) -> DMatrix<f64> {
        let m = self.m();
        let mut out = DMatrix::zeros(m, m);
        for (j, rj) in self.rows.iter().enumerate() {
            if let Kind::Dense = rj.kind {
                let bj = x * &rj.a * zi;
                for (i, ri) in self.rows.iter().enumerate() {
                    out[(i, j)] = match ri.kind {
                        Kind::Diagonal { idx, coef } => coef * bj[(idx, idx)].re,
                        Kind::Dense => re_trace_product(&ri.a, &bj),
                    };
                }
            }
        }
        for (j, rj) in self.rows.iter().enumerate() {
            if let Kind::Diagonal { idx: p, coef: cp } = rj.kind {
                for (i, ri) in self.rows.iter().enumerate() {
                    out[(i, j)] = match ri.kind {
                        Kind::Diagonal { idx: q, coef: cq } => cq * cp * (x[(q, p)] * zi[(p, q)]).re,
                        Kind::Dense => out[(j, i)],
                    };
                }
            }
        }
        for (i, r) in self.rows.iter().enumerate() {
            if let Some(k) = r.slack {
                out[(i, i)] += s[k] / zs[k];
            }
        }
        (&out + out.transpose()) * 0.5
    }
}

fn single_diagonal(a: &CMatrix) -> Option<(usize, f64)> {
    let mut found = None;
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                if i != j || found.is_some() {
                    return None;
                }
                found = Some((i, z.re));
            }
        }
    }
    found
}

/// Largest `α` keeping `X + α dX ⪰ 0`, given the Cholesky factor of `X`.
fn max_step_psd(chol: &Cholesky<C64, nalgebra::Dyn>, dx: &CMatrix) -> f64 {
    if dx.nrows() == 0 {
        return f64::INFINITY;
    }
    let l = chol.l();
    let Some(t1) = l.solve_lower_triangular(dx) else {
        return 0.0;
    };
    let Some(t2) = l.solve_lower_triangular(&t1.adjoint()) else {
        return 0.0;
    };
    let t = sym(&t2);
    let lmin = t.symmetric_eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if lmin >= 0.0 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

fn max_step_vec(v: &[f64], dv: &[f64]) -> f64 {
    v.iter()
        .zip(dv)
        .filter(|(_, &d)| d < 0.0)
        .fold(f64::INFINITY, |a, (&x, &d)| a.min(-x / d))
}

struct Iterate {
    x: CMatrix,
    s: Vec<f64>,
    y: DVector<f64>,
    z: CMatrix,
    zs: Vec<f64>,
    tau: f64,
    kappa: f64,
}

struct Direction {
    x: CMatrix,
    s: Vec<f64>,
    y: DVector<f64>,
    z: CMatrix,
    zs: Vec<f64>,
    tau: f64,
    kappa: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Quantities fixed within one iteration.
struct Linearization<'a> {
    model: &'a Model,
    it: &'a Iterate,
    zi: CMatrix,
    schur: Cholesky<f64, nalgebra::Dyn>,
    rp: DVector<f64>,
    rd_mat: CMatrix,
    rd_s: Vec<f64>,
    rg: f64,
    mu: f64,
    /// 𝒜𝒟c
    u_c: DVector<f64>,
    /// ⟨c, 𝒟c⟩
    c_dc: f64,
    /// M⁻¹(𝒜𝒟c + b)
    q: DVector<f64>,
    /// 𝒜𝒟r_d and ⟨c, 𝒟r_d⟩
    a_drd: DVector<f64>,
    c_drd: f64,
}

impl Linearization<'_> {
    fn scaling(&self, w: &CMatrix) -> CMatrix {
        sym(&(&self.it.x * w * &self.zi))
    }

    /// Solves the Newton system for centering `sigma`; `corr` carries the
    /// second-order terms of a previous affine direction.
    fn direction(&self, sigma: f64, corr: Option<&Direction>) -> Option<Direction> {
        let it = self.it;
        let model = self.model;
        let eta = 1.0 - sigma;
        let smu = sigma * self.mu;

        let mut rx = &self.zi * re_c(smu) - &it.x;
        let mut rs: Vec<f64> = it.s.iter().zip(&it.zs).map(|(s, z)| smu - s * z).collect();
        let mut rk = smu - it.tau * it.kappa;
        if let Some(a) = corr {
            rx -= sym(&(&a.x * &a.z * &self.zi));
            for (k, r) in rs.iter_mut().enumerate() {
                *r -= a.s[k] * a.zs[k];
            }
            rk -= a.tau * a.kappa;
        }
        let rs: Vec<f64> = rs.iter().zip(&it.zs).map(|(r, z)| r / z).collect();

        let b = model.b();
        let rhs1 = -&self.rp * eta - model.apply(&rx, &rs) - &self.a_drd * eta;
        let p = self.schur.solve(&rhs1);
        let cx_r = inner(&model.c, &rx);
        let num = -eta * self.rg - rk / it.tau - (cx_r + eta * self.c_drd + self.u_c.dot(&p)) + b.dot(&p);
        let den = self.u_c.dot(&self.q) - self.c_dc - b.dot(&self.q) - it.kappa / it.tau;
        let dtau = num / den;
        if !dtau.is_finite() {
            return None;
        }
        let dy = &p + &self.q * dtau;
        let dkappa = (rk - it.kappa * dtau) / it.tau;
        let (aty, aty_s) = model.adjoint(&dy);
        let dz = -&self.rd_mat * re_c(eta) - aty + &model.c * re_c(dtau);
        let dzs: Vec<f64> = self.rd_s.iter().zip(&aty_s).map(|(r, a)| -eta * r - a).collect();
        let dx = rx - self.scaling(&dz);
        let ds: Vec<f64> = rs
            .iter()
            .zip(&dzs)
            .enumerate()
            .map(|(k, (r, d))| r - it.s[k] / it.zs[k] * d)
            .collect();
        Some(Direction {
            x: dx,
            s: ds,
            y: dy,
            z: dz,
            zs: dzs,
            tau: dtau,
            kappa: dkappa,
        })
    }
}

fn max_step(it: &Iterate, d: &Direction, xchol: &Cholesky<C64, nalgebra::Dyn>, zchol: &Cholesky<C64, nalgebra::Dyn>) -> f64 {
    let mut a = max_step_psd(xchol, &d.x).min(max_step_psd(zchol, &d.z));
    a = a.min(max_step_vec(&it.s, &d.s)).min(max_step_vec(&it.zs, &d.zs));
    a = a.min(max_step_vec(&[it.tau, it.kappa], &[d.tau, d.kappa]));
    a
}

fn complementarity(it: &Iterate, d: &Direction, alpha: f64) -> f64 {
    let x = &it.x + &d.x * re_c(alpha);
    let z = &it.z + &d.z * re_c(alpha);
    let lp: f64 = (0..it.s.len())
        .map(|k| (it.s[k] + alpha * d.s[k]) * (it.zs[k] + alpha * d.zs[k]))
        .sum();
    inner(&x, &z) + lp + (it.tau + alpha * d.tau) * (it.kappa + alpha * d.kappa)
}

pub fn solve_sdp(p: &SdpProblem, tol: f64) -> Result<SdpSolution, ConicError> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(ConicError::Malformed(format!("tolerance must be positive, got {tol}")));
    }
    let model = match Model::build(p, tol) {
        Ok(m) => m,
        Err(status) => {
            return Ok(SdpSolution {
                info: SolveInfo {
                    status,
                    primal_residual: f64::INFINITY,
                    objective: f64::NAN,
                    iterations: 0,
                },
                x: HermitianMatrix::zeros(p.dim),
                y: vec![0.0; p.constraints.len()],
            })
        }
    };
    Ok(run(&model, p, tol))
}

fn finish(model: &Model, p: &SdpProblem, it: &Iterate, status: SolveStatus, iterations: usize) -> SdpSolution {
    let tau = if it.tau > 0.0 { it.tau } else { 1.0 };
    let x = HermitianMatrix::from_matrix_unchecked(&it.x * re_c(1.0 / tau));
    let mut y = vec![0.0; p.constraints.len()];
    for (r, &yi) in model.rows.iter().zip(it.y.iter()) {
        y[r.orig] = yi / tau * r.scale * model.c_scale;
    }
    let primal_residual = model
        .rows
        .iter()
        .map(|r| {
            let c = &p.constraints[r.orig];
            let v = (c.matrix.inner(&x) - c.bound) * r.scale;
            match c.sense {
                Sense::LessEqual => v.max(0.0),
                Sense::Equal => v.abs(),
            }
        })
        .fold(0.0_f64, f64::max);
    SdpSolution {
        info: SolveInfo {
            status,
            primal_residual,
            objective: p.objective.inner(&x),
            iterations,
        },
        x,
        y,
    }
}

fn run(model: &Model, p: &SdpProblem, tol: f64) -> SdpSolution {
    let n = model.n;
    let m = model.m();
    let ns = model.n_slack;
    let nu = (n + ns + 1) as f64;
    let b = model.b();
    let b_norm = b.norm();
    let c_norm = model.c.norm();

    let mut it = Iterate {
        x: CMatrix::identity(n, n),
        s: vec![1.0; ns],
        y: DVector::zeros(m),
        z: CMatrix::identity(n, n),
        zs: vec![1.0; ns],
        tau: 1.0,
        kappa: 1.0,
    };

    for iter in 0..MAX_ITERS {
        let ax = model.apply(&it.x, &it.s);
        let rp = &ax - &b * it.tau;
        let (aty, aty_s) = model.adjoint(&it.y);
        let cert_mat = &aty + &it.z;
        let cert_s: Vec<f64> = aty_s.iter().zip(&it.zs).map(|(a, z)| a + z).collect();
        let rd_mat = &cert_mat - &model.c * re_c(it.tau);
        let rd_s = cert_s.clone();
        let cx = inner(&model.c, &it.x);
        let by = b.dot(&it.y);
        let rg = cx - by + it.kappa;
        let xz = inner(&it.x, &it.z) + dot(&it.s, &it.zs);
        let mu = (xz + it.tau * it.kappa) / nu;

        let rd_norm = (rd_mat.norm_squared() + dot(&rd_s, &rd_s)).sqrt();
        let pres = rp.norm() / it.tau / (1.0 + b_norm);
        let dres = rd_norm / it.tau / (1.0 + c_norm);
        let pobj = cx / it.tau;
        let dobj = by / it.tau;
        let gap = xz / (it.tau * it.tau);
        let gap_ok = gap <= tol || gap <= tol * pobj.abs().min(dobj.abs());
        if pres <= tol && dres <= tol && gap_ok {
            return finish(model, p, &it, SolveStatus::Optimal, iter);
        }
        if it.kappa > it.tau {
            let cert_norm = (cert_mat.norm_squared() + dot(&cert_s, &cert_s)).sqrt();
            if by > 0.0 && cert_norm <= tol * by {
                return finish(model, p, &it, SolveStatus::Infeasible, iter);
            }
            if cx < 0.0 && ax.norm() <= tol * -cx {
                return finish(model, p, &it, SolveStatus::Unbounded, iter);
            }
        }

        let (Some(xchol), Some(zchol)) = (Cholesky::new(it.x.clone()), Cholesky::new(it.z.clone())) else {
            return finish(model, p, &it, SolveStatus::NumericalTrouble, iter);
        };
        let zi = zchol.inverse();
        let mut schur_mat = model.schur(&it.x, &zi, &it.s, &it.zs);
        let schur = match Cholesky::new(schur_mat.clone()) {
            Some(c) => c,
            None => {
                let bump = 1e-13 * schur_mat.diagonal().max().max(1e-300);
                for i in 0..m {
                    schur_mat[(i, i)] += bump;
                }
                match Cholesky::new(schur_mat) {
                    Some(c) => c,
                    None => return finish(model, p, &it, SolveStatus::NumericalTrouble, iter),
                }
            }
        };

        let dc = sym(&(&it.x * &model.c * &zi));
        let u_c = model.apply(&dc, &vec![0.0; ns]);
        let c_dc = inner(&model.c, &dc);
        let q = schur.solve(&(&u_c + &b));
        let drd_mat = sym(&(&it.x * &rd_mat * &zi));
        let drd_s: Vec<f64> = (0..ns).map(|k| it.s[k] / it.zs[k] * rd_s[k]).collect();
        let a_drd = model.apply(&drd_mat, &drd_s);
        let c_drd = inner(&model.c, &drd_mat);

        let lin = Linearization {
            model,
            it: &it,
            zi,
            schur,
            rp,
            rd_mat,
            rd_s,
            rg,
            mu,
            u_c,
            c_dc,
            q,
            a_drd,
            c_drd,
        };

        let Some(affine) = lin.direction(0.0, None) else {
            return finish(model, p, &it, SolveStatus::NumericalTrouble, iter);
        };
        let alpha_aff = max_step(&it, &affine, &xchol, &zchol).min(1.0);
        let mu_aff = complementarity(&it, &affine, alpha_aff) / nu;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);
        let Some(dir) = lin.direction(sigma, Some(&affine)) else {
            return finish(model, p, &it, SolveStatus::NumericalTrouble, iter);
        };
        let alpha = (STEP_FRACTION * max_step(&it, &dir, &xchol, &zchol)).min(1.0);
        if !(alpha > MIN_STEP) {
            return finish(model, p, &it, SolveStatus::NumericalTrouble, iter);
        }

        it.x = sym(&(&it.x + &dir.x * re_c(alpha)));
        it.z = sym(&(&it.z + &dir.z * re_c(alpha)));
        it.y += &dir.y * alpha;
        for k in 0..ns {
            it.s[k] += alpha * dir.s[k];
            it.zs[k] += alpha * dir.zs[k];
        }
        it.tau += alpha * dir.tau;
        it.kappa += alpha * dir.kappa;

        // Keep the embedding away from overflow on unbounded rays.
        let scale = it.tau + it.kappa;
        if scale > 1e8 || scale < 1e-8 {
            let f = 1.0 / scale;
            it.x *= re_c(f);
            it.z *= re_c(f);
            it.y *= f;
            it.s.iter_mut().for_each(|v| *v *= f);
            it.zs.iter_mut().for_each(|v| *v *= f);
            it.tau *= f;
            it.kappa *= f;
        }
    }
    finish(model, p, &it, SolveStatus::IterationLimit, MAX_ITERS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{hermitian_eig, CVector};
    use approx::assert_abs_diff_eq;

    fn e11(n: usize) -> HermitianMatrix {
        let mut d = vec![0.0; n];
        d[0] = 1.0;
        HermitianMatrix::from_real_diagonal(&d)
    }

    #[test]
    fn min_trace_with_pinned_corner() {
        let mut p = SdpProblem::feasibility(2);
        p.objective = HermitianMatrix::identity(2);
        p.push(e11(2), Sense::Equal, 1.0);
        let sol = solve_sdp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.info.objective, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.x.as_matrix()[(0, 0)].re, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.x.as_matrix()[(1, 1)].re, 0.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.x.as_matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-4);
    }

    #[test]
    fn maximize_corner_under_unit_diagonal() {
        let mut p = SdpProblem::feasibility(2);
        p.objective = e11(2).scale(-1.0);
        p.push(e11(2), Sense::Equal, 1.0);
        p.push(HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), Sense::Equal, 1.0);
        let sol = solve_sdp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(-sol.info.objective, 1.0, epsilon = 1e-7);
    }

    #[test]
    fn negative_trace_bound_is_infeasible() {
        let mut p = SdpProblem::feasibility(2);
        p.push(HermitianMatrix::identity(2), Sense::LessEqual, -1.0);
        let sol = solve_sdp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Infeasible);
    }

    #[test]
    fn unbounded_objective_is_detected() {
        let mut p = SdpProblem::feasibility(2);
        p.objective = HermitianMatrix::from_real_diagonal(&[-1.0, 0.0]);
        let sol = solve_sdp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Unbounded);
    }

    #[test]
    fn zero_rows_are_screened() {
        let mut p = SdpProblem::feasibility(2);
        p.push(HermitianMatrix::zeros(2), Sense::LessEqual, 1.0);
        p.push(HermitianMatrix::identity(2), Sense::Equal, 2.0);
        assert_eq!(solve_sdp(&p, 1e-8).unwrap().info.status, SolveStatus::Optimal);
        p.push(HermitianMatrix::zeros(2), Sense::LessEqual, -1.0);
        assert_eq!(solve_sdp(&p, 1e-8).unwrap().info.status, SolveStatus::Infeasible);
    }

    #[test]
    fn max_eigenvector_alignment_over_elliptope_is_rank_one() {
        // maximize φᴴXφ over unit diagonal: optimum phase(φ) phase(φ)ᴴ with value (Σ|φ_i|)².
        let phi = CVector::from_column_slice(&[C64::new(0.5, 0.1), C64::new(-0.3, 0.6), C64::new(0.2, -0.4)]);
        let n = 3;
        let mut p = SdpProblem::feasibility(n);
        p.objective = HermitianMatrix::outer(&phi).scale(-1.0);
        for i in 0..n {
            let mut d = vec![0.0; n];
            d[i] = 1.0;
            p.push(HermitianMatrix::from_real_diagonal(&d), Sense::Equal, 1.0);
        }
        let sol = solve_sdp(&p, 1e-9).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        let expect: f64 = phi.iter().map(|z| z.norm()).sum::<f64>().powi(2);
        assert_abs_diff_eq!(-sol.info.objective, expect, epsilon = 1e-7);
        let eig = hermitian_eig(&sol.x);
        assert!(eig.eigenvalues[1] < 1e-6);
    }

    #[test]
    fn complex_off_diagonal_constraint() {
        // Re(X12 e^{-iπ/3}) ≥ 0.9 under unit diagonal: feasible since |X12| ≤ 1.
        let n = 2;
        let w = C64::from_polar(0.5, std::f64::consts::PI / 3.0);
        let a = CMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), w, w.conj(), C64::new(0.0, 0.0)]);
        let a = HermitianMatrix::new(a).unwrap();
        let mut p = SdpProblem::feasibility(n);
        p.push(a.scale(-1.0), Sense::LessEqual, -0.9);
        p.push(HermitianMatrix::from_real_diagonal(&[1.0, 0.0]), Sense::Equal, 1.0);
        p.push(HermitianMatrix::from_real_diagonal(&[0.0, 1.0]), Sense::Equal, 1.0);
        let sol = solve_sdp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert!(a.inner(&sol.x) >= 0.9 - 1e-7);
        // ≥ 1.1 is impossible
        p.constraints[0].bound = -1.1;
        assert_eq!(solve_sdp(&p, 1e-8).unwrap().info.status, SolveStatus::Infeasible);
    }
}
