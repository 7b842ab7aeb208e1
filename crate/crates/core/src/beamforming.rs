//! Fixed-phase transmit power minimization as an SOCP.
//!
//! A common phase rotation of `w_k` leaves every SINR and interference term
//! unchanged, so `h_kᴴ w_k` can be taken real and nonnegative. The SINR
//! constraint then becomes the cone
//! `√γ_k ‖(h_kᴴ w_i)_{i≠k}, σ‖ ≤ Re(h_kᴴ w_k)` plus `Im(h_kᴴ w_k) = 0`.
//!
//! Real variables are laid out as `[Re w_1[0], Im w_1[0], Re w_1[1], …,
//! Im w_K[N−1], t]`, all in units of [`variable_scale`].

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::conic::{
    solve_socp, ConeConstraint, ConicError, LinearEquality, SocpProblem, SolveStatus,
};
use crate::numerics::{CMatrix, C64};
use crate::system::{total_power, BeamformerSet, QosSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeamformingError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Conic(#[from] ConicError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingSolution {
    pub w: BeamformerSet,
    pub power: f64,
    pub status: SolveStatus,
}

struct Layout {
    n: usize,
    k: usize,
}

impl Layout {
    fn n_vars(&self) -> usize {
        2 * self.n * self.k + 1
    }
    fn t(&self) -> usize {
        2 * self.n * self.k
    }
    fn re(&self, user: usize, ant: usize) -> usize {
        2 * (user * self.n + ant)
    }

    /// Coefficient rows of `Re(rowᴴ… w_user)` and `Im(…)` where `row` already
    /// holds the conjugated channel, i.e. the amplitude is `Σ_j row[j] w[j]`.
    fn amplitude(&self, row: &[C64], user: usize, scale: f64) -> (DVector<f64>, DVector<f64>) {
        let mut re = DVector::zeros(self.n_vars());
        let mut im = DVector::zeros(self.n_vars());
        for (j, h) in row.iter().enumerate() {
            let r = self.re(user, j);
            // (hr + i hi)(wr + i wi) = (hr wr − hi wi) + i(hr wi + hi wr)
            re[r] = h.re * scale;
            re[r + 1] = -h.im * scale;
            im[r] = h.im * scale;
            im[r + 1] = h.re * scale;
        }
        (re, im)
    }
}

fn row_vec(m: &CMatrix, r: usize) -> Vec<C64> {
    m.row(r).iter().copied().collect()
}

fn check_dims(h: &CMatrix, u: &CMatrix, qos: &QosSpec) -> Result<(), BeamformingError> {
    if qos.gamma.len() != h.nrows() {
        return Err(BeamformingError::Dimension(format!(
            "{} SINR targets for {} users",
            qos.gamma.len(),
            h.nrows()
        )));
    }
    if qos.kappa.len() != u.nrows() {
        return Err(BeamformingError::Dimension(format!(
            "{} interference limits for {} PUs",
            qos.kappa.len(),
            u.nrows()
        )));
    }
    if u.nrows() > 0 && u.ncols() != h.ncols() {
        return Err(BeamformingError::Dimension("PU channels have wrong length".into()));
    }
    Ok(())
}

/// Single-user optimal norm `σ √γ_max / max_k ‖h_k‖`. Solving for `w / s`
/// keeps the optimum near one, so the solver's tolerances act relatively.
pub fn variable_scale(h: &CMatrix, qos: &QosSpec) -> f64 {
    let gain = (0..h.nrows())
        .map(|k| h.row(k).norm())
        .fold(0.0_f64, f64::max);
    let gamma = qos.gamma.iter().copied().fold(0.0_f64, f64::max);
    let s = qos.sigma2.sqrt() * gamma.sqrt() / gain;
    if s.is_finite() && s > 0.0 {
        s
    } else {
        1.0
    }
}

/// Builds the SOCP for effective channel rows `h` (`K×N`, row `k` = `h_kᴴ`)
/// and `u` (`L×N`) in the scaled variables `w / variable_scale(h, qos)`.
/// SINR cones are divided by `σ` and interference cones by `√κ_l`, which
/// leaves the feasible set unchanged.
///
/// Constraint order: epigraph cone, then per user its SINR cone and
/// imaginary-part equality, then one cone per PU.
pub fn build_beamforming_socp(
    h: &CMatrix,
    u: &CMatrix,
    qos: &QosSpec,
) -> Result<SocpProblem, BeamformingError> {
    check_dims(h, u, qos)?;
    let lay = Layout {
        n: h.ncols(),
        k: h.nrows(),
    };
    let nv = lay.n_vars();
    let mut p = SocpProblem::new(nv);
    p.objective[lay.t()] = 1.0;

    let mut epi = DMatrix::zeros(nv - 1, nv);
    for i in 0..nv - 1 {
        epi[(i, i)] = 1.0;
    }
    let mut c = DVector::zeros(nv);
    c[lay.t()] = 1.0;
    p.cones.push(ConeConstraint {
        a: epi,
        b: DVector::zeros(nv - 1),
        c,
        d: 0.0,
    });

    let scale = variable_scale(h, qos);
    let sigma = qos.sigma2.sqrt() / scale;
    for k in 0..lay.k {
        let row = row_vec(h, k);
        let sg = qos.gamma[k].sqrt();
        let others: Vec<usize> = (0..lay.k).filter(|&i| i != k).collect();
        let mut a = DMatrix::zeros(2 * others.len() + 1, nv);
        for (slot, &i) in others.iter().enumerate() {
            let (re, im) = lay.amplitude(&row, i, sg / sigma);
            a.set_row(2 * slot, &re.transpose());
            a.set_row(2 * slot + 1, &im.transpose());
        }
        let mut b = DVector::zeros(a.nrows());
        b[a.nrows() - 1] = sg;
        let (re_kk, im_kk) = lay.amplitude(&row, k, 1.0 / sigma);
        p.cones.push(ConeConstraint { a, b, c: re_kk, d: 0.0 });
        p.equalities.push(LinearEquality { a: im_kk, rhs: 0.0 });
    }

    for l in 0..u.nrows() {
        let row = row_vec(u, l);
        let inv = scale / qos.kappa[l].sqrt();
        let mut a = DMatrix::zeros(2 * lay.k, nv);
        for i in 0..lay.k {
            let (re, im) = lay.amplitude(&row, i, inv);
            a.set_row(2 * i, &re.transpose());
            a.set_row(2 * i + 1, &im.transpose());
        }
        p.cones.push(ConeConstraint {
            b: DVector::zeros(a.nrows()),
            a,
            c: DVector::zeros(nv),
            d: 1.0,
        });
    }
    Ok(p)
}

fn unpack(x: &DVector<f64>, n: usize, k: usize, scale: f64) -> BeamformerSet {
    let lay = Layout { n, k };
    BeamformerSet::new(CMatrix::from_fn(n, k, |j, i| {
        let r = lay.re(i, j);
        C64::new(x[r], x[r + 1]) * scale
    }))
}

pub fn solve_beamforming(
    h: &CMatrix,
    u: &CMatrix,
    qos: &QosSpec,
    tol: f64,
) -> Result<BeamformingSolution, BeamformingError> {
    let p = build_beamforming_socp(h, u, qos)?;
    let sol = solve_socp(&p, tol)?;
    let w = unpack(&sol.x, h.ncols(), h.nrows(), variable_scale(h, qos));
    Ok(BeamformingSolution {
        power: total_power(&w),
        w,
        status: sol.info.status,
    })
}
