#![allow(dead_code)]

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use ris_cr::channel::ChannelSet;
use ris_cr::numerics::{CMatrix, CVector, HermitianMatrix, C64};
use ris_cr::system::{BeamformerSet, PhaseVector};

pub fn cn<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn cmatrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cn(rng))
}

pub fn cvector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    CVector::from_fn(n, |_, _| cn(rng))
}

/// Random PSD matrix `B Bᴴ` with `rank` columns in `B`.
pub fn psd<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> HermitianMatrix {
    let b = cmatrix(dim, rank, rng);
    HermitianMatrix::new(&b * b.adjoint()).unwrap()
}

pub fn phases<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PhaseVector {
    let angles: Vec<f64> = (0..m).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect();
    PhaseVector::from_angles(&angles)
}

/// Unit-variance fading on every block, no path loss.
pub fn unit_channels<R: Rng + ?Sized>(n: usize, m: usize, k: usize, l: usize, rng: &mut R) -> ChannelSet {
    ChannelSet {
        h_d: cmatrix(k, n, rng),
        h_r: cmatrix(k, m, rng),
        g: cmatrix(m, n, rng),
        u_d: cmatrix(l, n, rng),
        u_r: cmatrix(l, m, rng),
        su_positions: vec![[0.0; 3]; k],
        pu_positions: vec![[0.0; 3]; l],
    }
}

pub fn beams<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> BeamformerSet {
    BeamformerSet::new(cmatrix(n, k, rng))
}

/// Effective rows computed entry by entry, independent of the library's
/// matrix formulation.
pub fn effective_rows_naive(direct: &CMatrix, reflected: &CMatrix, g: &CMatrix, theta: &PhaseVector) -> CMatrix {
    let (rows, n) = (direct.nrows(), direct.ncols());
    let m = g.nrows();
    CMatrix::from_fn(rows, n, |k, j| {
        let mut z = direct[(k, j)].conj();
        for e in 0..m {
            z += reflected[(k, e)].conj() * theta.as_vector()[e] * g[(e, j)];
        }
        z
    })
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Exhaustive search over phases on a grid with `steps` points per element.
/// Returns the largest `min_k SINR_k / γ_k` among grid points that respect
/// every PU limit, or `None` when no grid point does. Only `M ≤ 2`.
pub fn grid_best_score(dat: &ris_cr::phase::HomogenizedData, steps: usize) -> Option<f64> {
    let m = dat.n_elements();
    assert!(m >= 1 && m <= 2, "grid search supports one or two elements");
    let unit: Vec<C64> = (0..steps)
        .map(|i| C64::from_polar(1.0, std::f64::consts::TAU * i as f64 / steps as f64))
        .collect();
    let k_users = dat.n_users();
    let l_pus = dat.n_pus();
    let outer = if m == 2 { steps } else { 1 };
    let mut best: Option<f64> = None;
    for i in 0..steps {
        for j in 0..outer {
            let t0 = unit[i];
            let t1 = if m == 2 { unit[j] } else { C64::new(0.0, 0.0) };
            let amp = |a: &CVector, b: C64| {
                let mut z = b + t0 * a[0];
                if m == 2 {
                    z += t1 * a[1];
                }
                z.norm_sqr()
            };
            let pu_ok = (0..l_pus).all(|l| {
                let p: f64 = (0..k_users).map(|k| amp(&dat.d[l][k], dat.c[l][k])).sum();
                p <= dat.kappa[l]
            });
            if !pu_ok {
                continue;
            }
            let mut score = f64::INFINITY;
            for k in 0..k_users {
                let mut interference = dat.sigma2;
                let mut signal = 0.0;
                for u in 0..k_users {
                    let p = amp(&dat.a[k][u], dat.b[k][u]);
                    if u == k {
                        signal = p;
                    } else {
                        interference += p;
                    }
                }
                score = score.min(signal / interference / dat.gamma[k]);
            }
            best = Some(best.map_or(score, |b: f64| b.max(score)));
        }
    }
    best
}
