//! Primal-dual interior-point solver for small dense SOCPs.
//!
//! Cone constraints are stacked as `A x + s = b` with `s` in a product of
//! second-order cones (one-row cones are plain nonnegativity). The iteration
//! runs on the homogeneous self-dual embedding
//!
//! ```text
//!   Eᵀy + Aᵀz + cτ = 0,   Ex − fτ = 0,   Ax + s − bτ = 0,
//!   cᵀx + fᵀy + bᵀz + κ = 0,   s, z ∈ K,   τ, κ ≥ 0
//! ```
//!
//! with Nesterov-Todd scaling and a Mehrotra predictor-corrector.

use nalgebra::{DMatrix, DVector};

use super::{ConicError, SocpProblem, SolveInfo, SolveStatus};

const MAX_ITERS: usize = 100;
const STEP_FRACTION: f64 = 0.99;
const MIN_STEP: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SocpSolution {
    pub info: SolveInfo,
    pub x: DVector<f64>,
}

#[derive(Clone, Copy)]
struct Cone {
    start: usize,
    dim: usize,
}

struct Model {
    a: DMatrix<f64>,
    b: DVector<f64>,
    e: DMatrix<f64>,
    f: DVector<f64>,
    c: DVector<f64>,
    cones: Vec<Cone>,
}

/// Each cone block and each equality row is divided by its largest row norm;
/// a positive multiple of a cone constraint describes the same set.
fn build(p: &SocpProblem) -> Model {
    let n = p.n_vars;
    let m: usize = p.cones.iter().map(|c| c.a.nrows() + 1).sum();
    let mut a = DMatrix::zeros(m, n);
    let mut b = DVector::zeros(m);
    let mut cones = Vec::with_capacity(p.cones.len());
    let mut row = 0;
    for cone in &p.cones {
        let dim = cone.a.nrows() + 1;
        let mut scale: f64 = (cone.c.norm_squared() + cone.d * cone.d).sqrt();
        for r in 0..cone.a.nrows() {
            scale = scale.max((cone.a.row(r).norm_squared() + cone.b[r] * cone.b[r]).sqrt());
        }
        let s = if scale > 0.0 { 1.0 / scale } else { 1.0 };
        for j in 0..n {
            a[(row, j)] = -cone.c[j] * s;
        }
        b[row] = cone.d * s;
        for r in 0..cone.a.nrows() {
            for j in 0..n {
                a[(row + 1 + r, j)] = -cone.a[(r, j)] * s;
            }
            b[row + 1 + r] = cone.b[r] * s;
        }
        cones.push(Cone { start: row, dim });
        row += dim;
    }
    let mut e = DMatrix::zeros(p.equalities.len(), n);
    let mut f = DVector::zeros(p.equalities.len());
    for (i, eq) in p.equalities.iter().enumerate() {
        let nrm = eq.a.norm();
        let s = if nrm > 0.0 { 1.0 / nrm } else { 1.0 };
        for j in 0..n {
            e[(i, j)] = eq.a[j] * s;
        }
        f[i] = eq.rhs * s;
    }
    let cn = p.objective.amax();
    let c = if cn > 0.0 { &p.objective / cn } else { p.objective.clone() };
    Model { a, b, e, f, c, cones }
}

/// Jordan product `u ∘ v` on one cone.
fn jordan(u: &[f64], v: &[f64], out: &mut [f64]) {
    if u.len() == 1 {
        out[0] = u[0] * v[0];
        return;
    }
    out[0] = u.iter().zip(v).map(|(a, b)| a * b).sum();
    for i in 1..u.len() {
        out[i] = u[0] * v[i] + v[0] * u[i];
    }
}

/// Solves `λ ∘ x = r` on one cone.
fn jordan_div(l: &[f64], r: &[f64], out: &mut [f64]) {
    if l.len() == 1 {
        out[0] = r[0] / l[0];
        return;
    }
    let l1r1: f64 = l[1..].iter().zip(&r[1..]).map(|(a, b)| a * b).sum();
    let det = l[0] * l[0] - l[1..].iter().map(|v| v * v).sum::<f64>();
    let x0 = (l[0] * r[0] - l1r1) / det;
    out[0] = x0;
    for i in 1..l.len() {
        out[i] = (r[i] - x0 * l[i]) / l[0];
    }
}

/// `x0² − ‖x1‖²`
fn soc_det(x: &[f64]) -> f64 {
    x[0] * x[0] - x[1..].iter().map(|v| v * v).sum::<f64>()
}

/// NT scaling of one cone: symmetric `W` with `W z = W⁻¹ s = λ`.
struct ConeScaling {
    w: DMatrix<f64>,
    winv: DMatrix<f64>,
}

fn nt_scaling(s: &[f64], z: &[f64]) -> ConeScaling {
    let d = s.len();
    if d == 1 {
        let w = (s[0] / z[0]).sqrt();
        return ConeScaling {
            w: DMatrix::from_element(1, 1, w),
            winv: DMatrix::from_element(1, 1, 1.0 / w),
        };
    }
    let sn = soc_det(s).max(f64::MIN_POSITIVE).sqrt();
    let zn = soc_det(z).max(f64::MIN_POSITIVE).sqrt();
    let sb: Vec<f64> = s.iter().map(|v| v / sn).collect();
    let zb: Vec<f64> = z.iter().map(|v| v / zn).collect();
    let gamma = ((1.0 + sb.iter().zip(&zb).map(|(a, b)| a * b).sum::<f64>()) / 2.0).sqrt();
    let mut wb = vec![0.0; d];
    wb[0] = (sb[0] + zb[0]) / (2.0 * gamma);
    for i in 1..d {
        wb[i] = (sb[i] - zb[i]) / (2.0 * gamma);
    }
    let eta = (sn / zn).sqrt();
    let mut w = DMatrix::zeros(d, d);
    let mut winv = DMatrix::zeros(d, d);
    w[(0, 0)] = wb[0];
    winv[(0, 0)] = wb[0];
    for i in 1..d {
        w[(0, i)] = wb[i];
        w[(i, 0)] = wb[i];
        winv[(0, i)] = -wb[i];
        winv[(i, 0)] = -wb[i];
        for j in 1..d {
            let v = wb[i] * wb[j] / (1.0 + wb[0]) + if i == j { 1.0 } else { 0.0 };
            w[(i, j)] = v;
            winv[(i, j)] = v;
        }
    }
    ConeScaling {
        w: w * eta,
        winv: winv / eta,
    }
}

/// Largest `α` keeping `x + α dx` in the cone, `∞` when unbounded.
fn max_step_cone(x: &[f64], dx: &[f64]) -> f64 {
    if x.len() == 1 {
        return if dx[0] < 0.0 { -x[0] / dx[0] } else { f64::INFINITY };
    }
    // x + α dx leaves the cone at the first positive root of
    // (x0 + α d0)² − ‖x1 + α d1‖².
    let a = soc_det(dx);
    let bh = x[0] * dx[0] - x[1..].iter().zip(&dx[1..]).map(|(p, q)| p * q).sum::<f64>();
    let c = soc_det(x).max(0.0);
    let scale = a.abs().max(bh.abs()).max(c);
    if scale == 0.0 {
        return f64::INFINITY;
    }
    if a.abs() <= 1e-14 * scale {
        return if bh < 0.0 { -c / (2.0 * bh) } else { f64::INFINITY };
    }
    let disc = bh * bh - a * c;
    if disc < 0.0 {
        return f64::INFINITY;
    }
    let q = -(bh + bh.signum() * disc.sqrt());
    let mut best = f64::INFINITY;
    for r in [q / a, if q != 0.0 { c / q } else { f64::INFINITY }] {
        if r > 0.0 && r < best {
            best = r;
        }
    }
    // A root can also come from x0 + α d0 crossing below −‖·‖; that only
    // happens after leaving the cone, so the smallest positive root is right.
    if x[0] + best.min(1e300) * dx[0] < 0.0 && dx[0] < 0.0 {
        best = best.min(-x[0] / dx[0]);
    }
    best
}

struct State {
    x: DVector<f64>,
    y: DVector<f64>,
    z: DVector<f64>,
    s: DVector<f64>,
    tau: f64,
    kappa: f64,
}

struct Residuals {
    rx: DVector<f64>,
    ry: DVector<f64>,
    rz: DVector<f64>,
    rt: f64,
}

fn residuals(m: &Model, st: &State) -> Residuals {
    Residuals {
        rx: m.e.tr_mul(&st.y) + m.a.tr_mul(&st.z) + &m.c * st.tau,
        ry: &m.f * st.tau - &m.e * &st.x,
        rz: &m.b * st.tau - &m.a * &st.x - &st.s,
        rt: -m.c.dot(&st.x) - m.f.dot(&st.y) - m.b.dot(&st.z) - st.kappa,
    }
}

struct Direction {
    dx: DVector<f64>,
    dy: DVector<f64>,
    dz: DVector<f64>,
    ds: DVector<f64>,
    dtau: f64,
    dkappa: f64,
}

/// Factored reduced KKT system for the current scaling.
struct Kkt {
    w: Vec<ConeScaling>,
    lambda: DVector<f64>,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    exact: DMatrix<f64>,
}

impl Kkt {
    fn new(m: &Model, st: &State) -> Option<Kkt> {
        let rows = m.a.nrows();
        let mut lambda = DVector::zeros(rows);
        let mut w = Vec::with_capacity(m.cones.len());
        for cone in &m.cones {
            let r = cone.start..cone.start + cone.dim;
            let sc = nt_scaling(&st.s.as_slice()[r.clone()], &st.z.as_slice()[r.clone()]);
            let l = &sc.w * DVector::from_column_slice(&st.z.as_slice()[r.clone()]);
            lambda.rows_mut(cone.start, cone.dim).copy_from(&l);
            w.push(sc);
        }
        let n = m.a.ncols();
        let p = m.e.nrows();
        let mut exact = DMatrix::zeros(n + p + rows, n + p + rows);
        exact.view_mut((0, n), (n, p)).copy_from(&m.e.transpose());
        exact.view_mut((n, 0), (p, n)).copy_from(&m.e);
        exact.view_mut((0, n + p), (n, rows)).copy_from(&m.a.transpose());
        exact.view_mut((n + p, 0), (rows, n)).copy_from(&m.a);
        for (cone, sc) in m.cones.iter().zip(&w) {
            let w2 = &sc.w * &sc.w;
            let o = n + p + cone.start;
            exact
                .view_mut((o, o), (cone.dim, cone.dim))
                .copy_from(&(-w2));
        }
        let mut k = exact.clone();
        for i in 0..n {
            k[(i, i)] += 1e-12;
        }
        for i in n..n + p {
            k[(i, i)] -= 1e-12;
        }
        let lu = k.lu();
        if !lu.is_invertible() {
            return None;
        }
        Some(Kkt {
            w,
            lambda,
            lu,
            exact,
        })
    }

    /// Solves `[0 Eᵀ Aᵀ; −E 0 0; −A 0 W²] (dx, dy, dz) = (r1, r2, r3)`.
    fn solve(
        &self,
        m: &Model,
        r1: &DVector<f64>,
        r2: &DVector<f64>,
        r3: &DVector<f64>,
    ) -> Option<(DVector<f64>, DVector<f64>, DVector<f64>)> {
        let n = m.a.ncols();
        let p = m.e.nrows();
        let rows = m.a.nrows();
        let mut rhs = DVector::zeros(n + p + rows);
        rhs.rows_mut(0, n).copy_from(r1);
        rhs.rows_mut(n, p).copy_from(&(-r2));
        rhs.rows_mut(n + p, rows).copy_from(&(-r3));
        let mut sol = self.lu.solve(&rhs)?;
        for _ in 0..3 {
            let res = &rhs - &self.exact * &sol;
            sol += self.lu.solve(&res)?;
        }
        Some((
            sol.rows(0, n).into_owned(),
            sol.rows(n, p).into_owned(),
            sol.rows(n + p, rows).into_owned(),
        ))
    }

    fn apply_w(&self, m: &Model, v: &DVector<f64>, inverse: bool) -> DVector<f64> {
        let mut out = DVector::zeros(v.len());
        for (cone, sc) in m.cones.iter().zip(&self.w) {
            let blk = v.rows(cone.start, cone.dim);
            let mat = if inverse { &sc.winv } else { &sc.w };
            out.rows_mut(cone.start, cone.dim).copy_from(&(mat * blk));
        }
        out
    }

    fn lambda_div(&self, m: &Model, r: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(r.len());
        for cone in &m.cones {
            let rg = cone.start..cone.start + cone.dim;
            jordan_div(
                &self.lambda.as_slice()[rg.clone()],
                &r.as_slice()[rg.clone()],
                &mut out.as_mut_slice()[rg],
            );
        }
        out
    }
}

fn cone_product(m: &Model, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(u.len());
    for cone in &m.cones {
        let rg = cone.start..cone.start + cone.dim;
        jordan(
            &u.as_slice()[rg.clone()],
            &v.as_slice()[rg.clone()],
            &mut out.as_mut_slice()[rg],
        );
    }
    out
}

fn identity_element(m: &Model) -> DVector<f64> {
    let mut e = DVector::zeros(m.a.nrows());
    for cone in &m.cones {
        e[cone.start] = 1.0;
    }
    e
}

fn direction(
    m: &Model,
    st: &State,
    kkt: &Kkt,
    res: &Residuals,
    eta: f64,
    rc: &DVector<f64>,
    rtc: f64,
) -> Option<Direction> {
    let (dx1, dy1, dz1) = kkt.solve(m, &(-&m.c), &(-&m.f), &(-&m.b))?;
    let wl = kkt.apply_w(m, &kkt.lambda_div(m, rc), false);
    let r1 = &res.rx * -eta;
    let r2 = &res.ry * -eta;
    let r3 = &res.rz * -eta + &wl;
    let (dx2, dy2, dz2) = kkt.solve(m, &r1, &r2, &r3)?;
    let dot = |dx: &DVector<f64>, dy: &DVector<f64>, dz: &DVector<f64>| {
        m.c.dot(dx) + m.f.dot(dy) + m.b.dot(dz)
    };
    let den = st.kappa / st.tau - dot(&dx1, &dy1, &dz1);
    if !(den.abs() > 0.0) {
        return None;
    }
    let dtau = (-eta * res.rt + dot(&dx2, &dy2, &dz2) + rtc / st.tau) / den;
    let dx = dx2 + dx1 * dtau;
    let dy = dy2 + dy1 * dtau;
    let dz = dz2 + dz1 * dtau;
    let w2dz = kkt.apply_w(m, &kkt.apply_w(m, &dz, false), false);
    let ds = wl - w2dz;
    let dkappa = (rtc - st.kappa * dtau) / st.tau;
    Some(Direction {
        dx,
        dy,
        dz,
        ds,
        dtau,
        dkappa,
    })
}

fn max_step(m: &Model, st: &State, d: &Direction) -> f64 {
    let mut a = f64::INFINITY;
    for cone in &m.cones {
        let rg = cone.start..cone.start + cone.dim;
        a = a.min(max_step_cone(&st.s.as_slice()[rg.clone()], &d.ds.as_slice()[rg.clone()]));
        a = a.min(max_step_cone(&st.z.as_slice()[rg.clone()], &d.dz.as_slice()[rg]));
    }
    if d.dtau < 0.0 {
        a = a.min(-st.tau / d.dtau);
    }
    if d.dkappa < 0.0 {
        a = a.min(-st.kappa / d.dkappa);
    }
    a
}

fn mu(m: &Model, st: &State) -> f64 {
    (st.s.dot(&st.z) + st.tau * st.kappa) / (m.cones.len() + 1) as f64
}

pub fn solve_socp(p: &SocpProblem, tol: f64) -> Result<SocpSolution, ConicError> {
    p.validate()?;
    if !(tol > 0.0) {
        return Err(ConicError::Malformed(format!("tolerance must be positive, got {tol}")));
    }
    let m = build(p);
    let (status, x, iterations) = run(&m, tol);
    Ok(SocpSolution {
        info: SolveInfo {
            status,
            primal_residual: p.max_violation(&x),
            objective: p.objective.dot(&x),
            iterations,
        },
        x,
    })
}

fn run(m: &Model, tol: f64) -> (SolveStatus, DVector<f64>, usize) {
    let n = m.a.ncols();
    let e = identity_element(m);
    let mut st = State {
        x: DVector::zeros(n),
        y: DVector::zeros(m.e.nrows()),
        z: e.clone(),
        s: e.clone(),
        tau: 1.0,
        kappa: 1.0,
    };
    let bnorm = m.b.norm().max(m.f.norm());
    let cnorm = m.c.norm();
    let mut status = SolveStatus::IterationLimit;
    let mut iter = 0;
    while iter < MAX_ITERS {
        let res = residuals(m, &st);

        // termination on the current iterate
        let pres = (res.rz.norm().max(res.ry.norm())) / st.tau;
        let dres = res.rx.norm() / st.tau;
        let pobj = m.c.dot(&st.x) / st.tau;
        let dobj = -(m.f.dot(&st.y) + m.b.dot(&st.z)) / st.tau;
        let gap = (pobj - dobj).abs();
        if pres <= tol * (1.0 + bnorm)
            && dres <= tol * (1.0 + cnorm)
            && (gap <= tol * (1.0 + pobj.abs().min(dobj.abs())))
        {
            status = SolveStatus::Optimal;
            break;
        }
        let cert = -(m.f.dot(&st.y) + m.b.dot(&st.z));
        if cert > 0.0 && st.kappa > st.tau {
            let r = (m.e.tr_mul(&st.y) + m.a.tr_mul(&st.z)).norm();
            if r <= tol * cert {
                status = SolveStatus::Infeasible;
                break;
            }
        }
        let ray = -m.c.dot(&st.x);
        if ray > 0.0 && st.kappa > st.tau {
            let r = (&m.a * &st.x + &st.s).norm().max((&m.e * &st.x).norm());
            if r <= tol * ray {
                status = SolveStatus::Unbounded;
                break;
            }
        }

        let Some(kkt) = Kkt::new(m, &st) else {
            status = SolveStatus::NumericalTrouble;
            break;
        };
        let mu0 = mu(m, &st);
        let ll = cone_product(m, &kkt.lambda, &kkt.lambda);
        let Some(aff) = direction(m, &st, &kkt, &res, 1.0, &(-&ll), -st.tau * st.kappa) else {
            status = SolveStatus::NumericalTrouble;
            break;
        };
        let a_aff = max_step(m, &st, &aff).min(1.0);
        let sigma = (1.0 - a_aff).powi(3).clamp(0.0, 1.0);
        let ws = kkt.apply_w(m, &aff.ds, true);
        let wz = kkt.apply_w(m, &aff.dz, false);
        let rc = -ll - cone_product(m, &ws, &wz) + &e * (sigma * mu0);
        let rtc = -st.tau * st.kappa - aff.dtau * aff.dkappa + sigma * mu0;
        let Some(d) = direction(m, &st, &kkt, &res, 1.0 - sigma, &rc, rtc) else {
            status = SolveStatus::NumericalTrouble;
            break;
        };
        let alpha = (STEP_FRACTION * max_step(m, &st, &d)).min(1.0);
        iter += 1;
        if alpha < MIN_STEP {
            status = SolveStatus::NumericalTrouble;
            break;
        }
        st.x += &d.dx * alpha;
        st.y += &d.dy * alpha;
        st.z += &d.dz * alpha;
        st.s += &d.ds * alpha;
        st.tau += d.dtau * alpha;
        st.kappa += d.dkappa * alpha;

        // keep the embedding away from overflow
        let scale = st.tau + st.kappa;
        if !(1e-8..=1e8).contains(&scale) {
            let f = 1.0 / scale;
            st.x *= f;
            st.y *= f;
            st.z *= f;
            st.s *= f;
            st.tau *= f;
            st.kappa *= f;
        }
    }
    let x = if st.tau > 0.0 { &st.x / st.tau } else { st.x.clone() };
    (status, x, iter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conic::{ConeConstraint, LinearEquality};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    /// Variables (w_re[0], w_re[1], w_im[0], w_im[1], t); minimize t with ‖w‖ ≤ t.
    fn norm_epigraph() -> SocpProblem {
        let mut p = SocpProblem::new(5);
        p.objective[4] = 1.0;
        let mut a = DMatrix::zeros(4, 5);
        for i in 0..4 {
            a[(i, i)] = 1.0;
        }
        let mut c = DVector::zeros(5);
        c[4] = 1.0;
        p.cones.push(ConeConstraint {
            a,
            b: DVector::zeros(4),
            c,
            d: 0.0,
        });
        p
    }

    fn halfspace(coeffs: &[f64], d: f64) -> ConeConstraint {
        ConeConstraint {
            a: DMatrix::zeros(0, coeffs.len()),
            b: DVector::zeros(0),
            c: DVector::from_column_slice(coeffs),
            d,
        }
    }

    #[test]
    fn projection_onto_halfspace() {
        // real(hᴴw) ≥ 1 with h = (1, 0)  ⇒  w_re[0] ≥ 1
        let mut p = norm_epigraph();
        p.cones.push(halfspace(&[1.0, 0.0, 0.0, 0.0, 0.0], -1.0));
        let sol = solve_socp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.info.objective, 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.x[0], 1.0, epsilon = 1e-7);
        for i in 1..4 {
            assert_abs_diff_eq!(sol.x[i], 0.0, epsilon = 1e-7);
        }
    }

    #[test]
    fn unconstrained_norm_is_zero() {
        let sol = solve_socp(&norm_epigraph(), 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.info.objective, 0.0, epsilon = 1e-7);
    }

    #[test]
    fn contradictory_halfspaces_are_infeasible() {
        let mut p = norm_epigraph();
        p.cones.push(halfspace(&[1.0, 0.0, 0.0, 0.0, 0.0], -1.0));
        p.cones.push(halfspace(&[-1.0, 0.0, 0.0, 0.0, 0.0], -1.0));
        assert_eq!(solve_socp(&p, 1e-8).unwrap().info.status, SolveStatus::Infeasible);
    }

    #[test]
    fn equality_constraints_are_respected() {
        let mut p = norm_epigraph();
        p.equalities.push(LinearEquality {
            a: DVector::from_column_slice(&[0.0, 1.0, 0.0, 1.0, 0.0]),
            rhs: 2.0,
        });
        let sol = solve_socp(&p, 1e-8).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.info.objective, 2f64.sqrt(), epsilon = 1e-7);
        assert!(sol.info.primal_residual < 1e-7);
    }

    #[test]
    fn nt_scaling_maps_both_points_to_lambda() {
        let s = [3.0, 1.0, -0.5, 0.2];
        let z = [2.0, -0.3, 0.8, 1.0];
        let sc = nt_scaling(&s, &z);
        let wz = &sc.w * DVector::from_column_slice(&z);
        let wis = &sc.winv * DVector::from_column_slice(&s);
        assert!((wz - wis).norm() < 1e-12);
        let id = &sc.w * &sc.winv;
        assert!((id - DMatrix::identity(4, 4)).norm() < 1e-12);
    }

    #[test]
    fn jordan_division_inverts_product() {
        let l = [2.0, 0.5, -0.7];
        let x = [0.3, -1.0, 2.0];
        let mut r = [0.0; 3];
        jordan(&l, &x, &mut r);
        let mut back = [0.0; 3];
        jordan_div(&l, &r, &mut back);
        for i in 0..3 {
            assert_abs_diff_eq!(back[i], x[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn step_to_cone_boundary() {
        // (1, 0) + α(−1, 1) leaves at α = 1/2
        assert_abs_diff_eq!(max_step_cone(&[1.0, 0.0], &[-1.0, 1.0]), 0.5, epsilon = 1e-14);
        assert!(max_step_cone(&[1.0, 0.0], &[1.0, 0.5]).is_infinite());
        assert_abs_diff_eq!(max_step_cone(&[2.0], &[-4.0]), 0.5);
    }

    #[test]
    fn unbounded_objective_is_detected() {
        // minimize −x₀ subject to ‖x₁‖ ≤ x₀
        let mut p = SocpProblem::new(2);
        p.objective[0] = -1.0;
        p.cones.push(ConeConstraint {
            a: DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            b: DVector::zeros(1),
            c: DVector::from_column_slice(&[1.0, 0.0]),
            d: 0.0,
        });
        assert_eq!(solve_socp(&p, 1e-8).unwrap().info.status, SolveStatus::Unbounded);
    }

    #[test]
    fn shifted_norm_minimum() {
        // minimize t with ‖x − (3, 4)‖ ≤ t and x₀ ≥ 5: optimum at x = (5, 4), t = 2
        let mut p = SocpProblem::new(3);
        p.objective[2] = 1.0;
        p.cones.push(ConeConstraint {
            a: DMatrix::from_row_slice(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]),
            b: DVector::from_column_slice(&[-3.0, -4.0]),
            c: DVector::from_column_slice(&[0.0, 0.0, 1.0]),
            d: 0.0,
        });
        p.cones.push(halfspace(&[1.0, 0.0, 0.0], -5.0));
        let sol = solve_socp(&p, 1e-9).unwrap();
        assert_eq!(sol.info.status, SolveStatus::Optimal);
        assert_abs_diff_eq!(sol.info.objective, 2.0, epsilon = 1e-7);
        assert_abs_diff_eq!(sol.x[1], 4.0, epsilon = 1e-6);
    }
}
