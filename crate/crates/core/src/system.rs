//! Effective channels, SINR, interference power and feasibility of a
//! beamformer/phase pair.

use thiserror::Error;

use crate::channel::ChannelSet;
use crate::numerics::{CMatrix, CVector, C64};

/// Default relative tolerance for feasibility checks.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-6;
const MODULUS_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("phase entry {index} has modulus {modulus}, expected 1")]
    NotUnitModulus { index: usize, modulus: f64 },
    #[error("invalid QoS parameters: {0}")]
    InvalidQos(String),
}

fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<(), SystemError> {
    if expected != found {
        return Err(SystemError::DimensionMismatch {
            what,
            expected,
            found,
        });
    }
    Ok(())
}

/// RIS reflection coefficients, one unit-modulus complex value per element.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(CVector);

impl PhaseVector {
    pub fn new(theta: CVector) -> Result<Self, SystemError> {
        for (index, z) in theta.iter().enumerate() {
            let modulus = z.norm();
            if (modulus - 1.0).abs() > MODULUS_TOL {
                return Err(SystemError::NotUnitModulus { index, modulus });
            }
        }
        Ok(Self(theta))
    }

    /// Skips the modulus check. Feasibility checks still flag violations.
    pub fn new_unchecked(theta: CVector) -> Self {
        Self(theta)
    }

    pub fn from_angles(angles: &[f64]) -> Self {
        Self(CVector::from_iterator(
            angles.len(),
            angles.iter().map(|&a| C64::from_polar(1.0, a)),
        ))
    }

    pub fn ones(m: usize) -> Self {
        Self(CVector::from_element(m, C64::new(1.0, 0.0)))
    }

    /// Unit-modulus projection `z / |z|`; zero entries map to 1.
    pub fn project(v: &CVector) -> Self {
        Self(v.map(|z| {
            let r = z.norm();
            if r > 0.0 {
                z / r
            } else {
                C64::new(1.0, 0.0)
            }
        }))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_vector(&self) -> &CVector {
        &self.0
    }

    pub fn max_modulus_error(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |acc, z| acc.max((z.norm() - 1.0).abs()))
    }
}

/// `K` transmit beamformers of length `N`, stored as the columns of an
/// `N×K` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformerSet(CMatrix);

impl BeamformerSet {
    pub fn new(columns: CMatrix) -> Self {
        Self(columns)
    }

    pub fn zeros(n_antennas: usize, n_users: usize) -> Self {
        Self(CMatrix::zeros(n_antennas, n_users))
    }

    pub fn n_antennas(&self) -> usize {
        self.0.nrows()
    }

    pub fn n_users(&self) -> usize {
        self.0.ncols()
    }

    pub fn beam(&self, k: usize) -> CVector {
        self.0.column(k).into_owned()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(&self.0 * C64::new(c, 0.0))
    }
}

/// SINR targets, interference limits and noise power, all linear.
#[derive(Debug, Clone, PartialEq)]
pub struct QosSpec {
    pub gamma: Vec<f64>,
    pub kappa: Vec<f64>,
    pub sigma2: f64,
}

impl QosSpec {
    pub fn new(gamma: Vec<f64>, kappa: Vec<f64>, sigma2: f64) -> Result<Self, SystemError> {
        if gamma.iter().chain(kappa.iter()).any(|&x| !(x > 0.0)) || !(sigma2 > 0.0) {
            return Err(SystemError::InvalidQos(
                "targets, limits and noise power must be positive".into(),
            ));
        }
        Ok(Self {
            gamma,
            kappa,
            sigma2,
        })
    }

    /// Same target for every SU and same limit for every PU, given in dB.
    pub fn uniform_db(
        n_sus: usize,
        n_pus: usize,
        gamma_db: f64,
        kappa_db: f64,
        sigma2_db: f64,
    ) -> Result<Self, SystemError> {
        use crate::channel::db_to_linear;
        Self::new(
            vec![db_to_linear(gamma_db); n_sus],
            vec![db_to_linear(kappa_db); n_pus],
            db_to_linear(sigma2_db),
        )
    }
}

/// Rows `x_kᴴ = x_{d,k}ᴴ + x_{r,k}ᴴ diag(θ) G`, so that `rows * w` gives the
/// received amplitudes.
fn effective_rows(direct: &CMatrix, reflected: &CMatrix, g: &CMatrix, theta: &PhaseVector) -> CMatrix {
    let mut out = direct.map(|z| z.conj());
    if g.nrows() == 0 {
        return out;
    }
    // conj(x_r) ∘ θ, row-wise, then times G
    let mut weighted = reflected.map(|z| z.conj());
    for mut row in weighted.row_iter_mut() {
        for (m, z) in row.iter_mut().enumerate() {
            *z *= theta.0[m];
        }
    }
    out += weighted * g;
    out
}

fn check_phase_dims(ch: &ChannelSet, theta: &PhaseVector) -> Result<(), SystemError> {
    check_dim("phase vector length", ch.n_ris_elements(), theta.len())?;
    check_dim("h_r columns", ch.n_ris_elements(), ch.h_r.ncols())?;
    check_dim("u_r columns", ch.n_ris_elements(), ch.u_r.ncols())?;
    check_dim("g columns", ch.n_antennas(), ch.g.ncols())?;
    check_dim("h_r rows", ch.n_sus(), ch.h_r.nrows())?;
    check_dim("u_r rows", ch.n_pus(), ch.u_r.nrows())?;
    check_dim("u_d columns", ch.n_antennas(), ch.u_d.ncols())
}

/// `K×N` matrix whose row `k` is `h_kᴴ`.
pub fn effective_su_channels(ch: &ChannelSet, theta: &PhaseVector) -> Result<CMatrix, SystemError> {
    check_phase_dims(ch, theta)?;
    Ok(effective_rows(&ch.h_d, &ch.h_r, &ch.g, theta))
}

/// `L×N` matrix whose row `l` is `u_lᴴ`.
pub fn effective_pu_channels(ch: &ChannelSet, theta: &PhaseVector) -> Result<CMatrix, SystemError> {
    check_phase_dims(ch, theta)?;
    Ok(effective_rows(&ch.u_d, &ch.u_r, &ch.g, theta))
}

/// SINR per user from effective channel rows.
pub fn sinr_from_effective(h: &CMatrix, w: &BeamformerSet, sigma2: f64) -> Vec<f64> {
    let gains = h * w.as_matrix(); // gains[(k, i)] = h_kᴴ w_i
    (0..h.nrows())
        .map(|k| {
            let signal = gains[(k, k)].norm_sqr();
            let interference: f64 = (0..gains.ncols())
                .filter(|&i| i != k)
                .map(|i| gains[(k, i)].norm_sqr())
                .sum();
            signal / (interference + sigma2)
        })
        .collect()
}

/// Interference power per PU from effective channel rows.
pub fn interference_from_effective(u: &CMatrix, w: &BeamformerSet) -> Vec<f64> {
    let gains = u * w.as_matrix();
    (0..u.nrows())
        .map(|l| gains.row(l).iter().map(|z| z.norm_sqr()).sum())
        .collect()
}

fn check_beam_dims(ch: &ChannelSet, w: &BeamformerSet) -> Result<(), SystemError> {
    check_dim("beamformer length", ch.n_antennas(), w.n_antennas())?;
    check_dim("beamformer count", ch.n_sus(), w.n_users())
}

pub fn sinr_all(
    ch: &ChannelSet,
    theta: &PhaseVector,
    w: &BeamformerSet,
    sigma2: f64,
) -> Result<Vec<f64>, SystemError> {
    check_beam_dims(ch, w)?;
    let h = effective_su_channels(ch, theta)?;
    Ok(sinr_from_effective(&h, w, sigma2))
}

pub fn interference_all(
    ch: &ChannelSet,
    theta: &PhaseVector,
    w: &BeamformerSet,
) -> Result<Vec<f64>, SystemError> {
    check_beam_dims(ch, w)?;
    let u = effective_pu_channels(ch, theta)?;
    Ok(interference_from_effective(&u, w))
}

pub fn total_power(w: &BeamformerSet) -> f64 {
    w.as_matrix().norm_squared()
}

/// Per-constraint margins in linear units; positive means satisfied.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    /// `SINR_k − γ_k`
    pub sinr_margins: Vec<f64>,
    /// `κ_l − IP_l`
    pub interference_margins: Vec<f64>,
    pub max_modulus_error: f64,
    pub feasible: bool,
}

impl FeasibilityReport {
    fn evaluate(sinr: &[f64], ip: &[f64], modulus_error: f64, qos: &QosSpec, tol: f64) -> Self {
        let sinr_ok = sinr
            .iter()
            .zip(&qos.gamma)
            .all(|(&s, &g)| s >= g * (1.0 - tol));
        let ip_ok = ip.iter().zip(&qos.kappa).all(|(&p, &k)| p <= k * (1.0 + tol));
        Self {
            sinr_margins: sinr.iter().zip(&qos.gamma).map(|(s, g)| s - g).collect(),
            interference_margins: ip.iter().zip(&qos.kappa).map(|(p, k)| k - p).collect(),
            max_modulus_error: modulus_error,
            feasible: sinr_ok && ip_ok && modulus_error <= tol,
        }
    }
}

pub fn check_feasibility(
    ch: &ChannelSet,
    theta: &PhaseVector,
    w: &BeamformerSet,
    qos: &QosSpec,
    tol: f64,
) -> Result<FeasibilityReport, SystemError> {
    check_dim("gamma length", ch.n_sus(), qos.gamma.len())?;
    check_dim("kappa length", ch.n_pus(), qos.kappa.len())?;
    let sinr = sinr_all(ch, theta, w, qos.sigma2)?;
    let ip = interference_all(ch, theta, w)?;
    Ok(FeasibilityReport::evaluate(
        &sinr,
        &ip,
        theta.max_modulus_error(),
        qos,
        tol,
    ))
}

/// Feasibility for already-formed effective channels (no RIS modulus term).
pub fn check_feasibility_effective(
    h: &CMatrix,
    u: &CMatrix,
    w: &BeamformerSet,
    qos: &QosSpec,
    tol: f64,
) -> FeasibilityReport {
    let sinr = sinr_from_effective(h, w, qos.sigma2);
    let ip = interference_from_effective(u, w);
    FeasibilityReport::evaluate(&sinr, &ip, 0.0, qos, tol)
}
