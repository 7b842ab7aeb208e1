//! Deployment geometry, distance-based path loss and Rayleigh-faded channel
//! generation.
//!
//! Every link uses one center-to-center distance for the whole array: an RIS
//! with `M` elements sees the same large-scale gain on all of them.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{CMatrix, C64};

pub type Point3 = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("link distance must be positive, got {0}")]
    InvalidDistance(f64),
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid path-loss parameters: {0}")]
    InvalidPathLoss(String),
}

/// Axis-aligned box, inclusive on both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub min: Point3,
    pub max: Point3,
}

impl Region {
    /// Builds a box from two corners, sorting each axis pair.
    pub fn from_corners(a: Point3, b: Point3) -> Self {
        let mut min = [0.0; 3];
        let mut max = [0.0; 3];
        for i in 0..3 {
            min[i] = a[i].min(b[i]);
            max[i] = a[i].max(b[i]);
        }
        Self { min, max }
    }

    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point3 {
        let mut p = [0.0; 3];
        for i in 0..3 {
            let u: f64 = rng.random();
            p[i] = self.min[i] + (self.max[i] - self.min[i]) * u;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkClass {
    TxSu,
    TxPu,
    TxRis,
    RisSu,
    RisPu,
}

/// Path-loss exponent per link class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkExponents {
    pub tx_su: f64,
    pub tx_pu: f64,
    pub tx_ris: f64,
    pub ris_su: f64,
    pub ris_pu: f64,
}

impl LinkExponents {
    pub fn get(&self, class: LinkClass) -> f64 {
        match class {
            LinkClass::TxSu => self.tx_su,
            LinkClass::TxPu => self.tx_pu,
            LinkClass::TxRis => self.tx_ris,
            LinkClass::RisSu => self.ris_su,
            LinkClass::RisPu => self.ris_pu,
        }
    }
}

impl Default for LinkExponents {
    fn default() -> Self {
        Self {
            tx_su: 3.5,
            tx_pu: 3.5,
            tx_ris: 2.0,
            ris_su: 2.2,
            ris_pu: 2.2,
        }
    }
}

/// `ζ(d) = T₀ (d / d₀)^(−α)` with `T₀` given in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossParams {
    pub t0_db: f64,
    pub d0: f64,
    pub exponents: LinkExponents,
}

impl Default for PathLossParams {
    fn default() -> Self {
        Self {
            t0_db: -30.0,
            d0: 1.0,
            exponents: LinkExponents::default(),
        }
    }
}

impl PathLossParams {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if !(self.d0 > 0.0) {
            return Err(ChannelError::InvalidPathLoss(format!("d0 = {}", self.d0)));
        }
        let e = &self.exponents;
        for (name, a) in [
            ("tx_su", e.tx_su),
            ("tx_pu", e.tx_pu),
            ("tx_ris", e.tx_ris),
            ("ris_su", e.ris_su),
            ("ris_pu", e.ris_pu),
        ] {
            if !(a >= 0.0) {
                return Err(ChannelError::InvalidPathLoss(format!("exponent {name} = {a}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkGeometry {
    pub tx_position: Point3,
    pub ris_position: Point3,
    pub su_region: Region,
    pub pu_region: Region,
    pub n_antennas: usize,
    pub n_ris_elements: usize,
    pub n_sus: usize,
    pub n_pus: usize,
}

impl Default for NetworkGeometry {
    /// Five-antenna transmitter at (0,0,10), RIS at (50,50,15), four SUs and
    /// two PUs on the ground plane, twenty RIS elements.
    fn default() -> Self {
        Self {
            tx_position: [0.0, 0.0, 10.0],
            ris_position: [50.0, 50.0, 15.0],
            su_region: Region::from_corners([-50.0, 60.0, 0.0], [50.0, 160.0, 0.0]),
            pu_region: Region::from_corners([-120.0, -40.0, 0.0], [-170.0, 10.0, 0.0]),
            n_antennas: 5,
            n_ris_elements: 20,
            n_sus: 4,
            n_pus: 2,
        }
    }
}

impl NetworkGeometry {
    pub fn validate(&self) -> Result<(), ChannelError> {
        if self.n_antennas == 0 || self.n_sus == 0 {
            return Err(ChannelError::InvalidGeometry(
                "antenna and SU counts must be at least 1".into(),
            ));
        }
        for (name, r) in [("su_region", &self.su_region), ("pu_region", &self.pu_region)] {
            if (0..3).any(|i| !(r.min[i] <= r.max[i])) {
                return Err(ChannelError::InvalidGeometry(format!("{name} has min > max")));
            }
        }
        Ok(())
    }
}

/// The five channel blocks. Row `k` of `h_d` holds the entries of the
/// Tx→SU-k vector `h_{d,k}`; the received signal uses its conjugate
/// transpose. Likewise for `h_r`, `u_d` and `u_r`. `g` maps Tx antennas to
/// RIS elements.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h_d: CMatrix,
    pub h_r: CMatrix,
    pub g: CMatrix,
    pub u_d: CMatrix,
    pub u_r: CMatrix,
    pub su_positions: Vec<Point3>,
    pub pu_positions: Vec<Point3>,
}

impl ChannelSet {
    pub fn n_antennas(&self) -> usize {
        self.h_d.ncols()
    }
    pub fn n_ris_elements(&self) -> usize {
        self.g.nrows()
    }
    pub fn n_sus(&self) -> usize {
        self.h_d.nrows()
    }
    pub fn n_pus(&self) -> usize {
        self.u_d.nrows()
    }

    /// Same channels with the reflected paths removed.
    pub fn without_ris(&self) -> Self {
        let mut out = self.clone();
        out.h_r.fill(C64::new(0.0, 0.0));
        out.u_r.fill(C64::new(0.0, 0.0));
        out
    }

    /// FNV-1a over the bit patterns of all channel entries, in block order.
    /// Stable across runs and platforms.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        let mut feed = |x: u64| {
            for byte in x.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        for block in [&self.h_d, &self.h_r, &self.g, &self.u_d, &self.u_r] {
            feed(block.nrows() as u64);
            feed(block.ncols() as u64);
            for z in block.iter() {
                feed(z.re.to_bits());
                feed(z.im.to_bits());
            }
        }
        h
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn distance(a: &Point3, b: &Point3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub fn path_loss(d: f64, class: LinkClass, params: &PathLossParams) -> Result<f64, ChannelError> {
    if !(d > 0.0) {
        return Err(ChannelError::InvalidDistance(d));
    }
    let alpha = params.exponents.get(class);
    Ok(db_to_linear(params.t0_db) * (d / params.d0).powf(-alpha))
}

pub fn sample_positions<R: Rng + ?Sized>(
    geom: &NetworkGeometry,
    rng: &mut R,
) -> (Vec<Point3>, Vec<Point3>) {
    let su = (0..geom.n_sus).map(|_| geom.su_region.sample(rng)).collect();
    let pu = (0..geom.n_pus).map(|_| geom.pu_region.sample(rng)).collect();
    (su, pu)
}

/// Unit-variance circularly-symmetric complex Gaussian.
fn cn01<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn faded_block<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    row_gain: impl Fn(usize) -> Result<f64, ChannelError>,
    rng: &mut R,
) -> Result<CMatrix, ChannelError> {
    let mut m = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        let amp = row_gain(r)?.sqrt();
        for c in 0..cols {
            m[(r, c)] = cn01(rng) * amp;
        }
    }
    Ok(m)
}

/// Samples user positions and then the fading for all five blocks.
pub fn generate_channels<R: Rng + ?Sized>(
    geom: &NetworkGeometry,
    params: &PathLossParams,
    rng: &mut R,
) -> Result<ChannelSet, ChannelError> {
    let (su, pu) = sample_positions(geom, rng);
    generate_channels_at(geom, params, su, pu, rng)
}

/// Fading for fixed user positions. Block order of draws: `h_d`, `h_r`, `g`,
/// `u_d`, `u_r`, each row-major.
pub fn generate_channels_at<R: Rng + ?Sized>(
    geom: &NetworkGeometry,
    params: &PathLossParams,
    su_positions: Vec<Point3>,
    pu_positions: Vec<Point3>,
    rng: &mut R,
) -> Result<ChannelSet, ChannelError> {
    geom.validate()?;
    params.validate()?;
    if su_positions.len() != geom.n_sus || pu_positions.len() != geom.n_pus {
        return Err(ChannelError::InvalidGeometry(
            "position counts do not match geometry".into(),
        ));
    }
    let n = geom.n_antennas;
    let m = geom.n_ris_elements;
    let tx = geom.tx_position;
    let ris = geom.ris_position;
    let pl = |a: &Point3, b: &Point3, class| path_loss(distance(a, b), class, params);

    let h_d = faded_block(geom.n_sus, n, |k| pl(&tx, &su_positions[k], LinkClass::TxSu), rng)?;
    let h_r = faded_block(geom.n_sus, m, |k| pl(&ris, &su_positions[k], LinkClass::RisSu), rng)?;
    let tx_ris = if m > 0 { pl(&tx, &ris, LinkClass::TxRis)? } else { 0.0 };
    let g = faded_block(m, n, |_| Ok(tx_ris), rng)?;
    let u_d = faded_block(geom.n_pus, n, |l| pl(&tx, &pu_positions[l], LinkClass::TxPu), rng)?;
    let u_r = faded_block(geom.n_pus, m, |l| pl(&ris, &pu_positions[l], LinkClass::RisPu), rng)?;
    Ok(ChannelSet {
        h_d,
        h_r,
        g,
        u_d,
        u_r,
        su_positions,
        pu_positions,
    })
}
