//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ris_cr::beamforming::solve_beamforming;
use ris_cr::channel::ChannelSet;
use ris_cr::conic::{SolveStatus, DEFAULT_SOLVER_TOL};
use ris_cr::driver::{alternate, random_phases, PhaseMethod};
use ris_cr::experiment::{
    mean_and_se, paired_differences, run_sweep, trial_channels, trial_seed, ExperimentConfig,
    Method, TrialRecord,
};
use ris_cr::numerics::{leading_rank_one, spectral_norm, CMatrix};
use ris_cr::phase::{
    dc_phase_step, dc_solve, extract_phase, homogenize, lifted_terms, quadratic_terms, randomize,
    DcParams, LiftedSolution, PhaseError,
};
use ris_cr::system::{
    check_feasibility, effective_pu_channels, effective_su_channels, BeamformerSet, PhaseVector,
    QosSpec,
};

use common::{beams, cmatrix, grid_best_score, phases, psd, unit_channels};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn config(name: &str) -> ExperimentConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    let mut cfg = ExperimentConfig::load(&path).expect("config");
    cfg.output_path = None;
    cfg.record_timing = false;
    cfg
}

// ---- criteria 1 and 2: descent and rank-one certification ----

const DESCENT_INSTANCES: usize = 100;

fn descent_instances() -> (ExperimentConfig, QosSpec, Vec<(ChannelSet, u64)>) {
    let mut cfg = ExperimentConfig::default();
    cfg.base_seed = 2024;
    let qos = cfg.qos(15.0).unwrap();
    let inst = (0..DESCENT_INSTANCES)
        .map(|t| (trial_channels(&cfg, t, 20).unwrap(), trial_seed(cfg.base_seed, t, 20)))
        .collect();
    (cfg, qos, inst)
}

fn monotone_descent() -> Outcome {
    let (cfg, qos, inst) = descent_instances();
    let mut worst = 0.0_f64;
    let mut bad = 0;
    let mut solved = 0;
    for (ch, seed) in &inst {
        let rep = alternate(ch, &qos, &cfg.algorithm.params(PhaseMethod::Dc, *seed)).unwrap();
        if rep.status.has_solution() {
            solved += 1;
        }
        for pair in rep.power_trajectory.windows(2) {
            let rise = (pair[1] - pair[0]) / pair[0];
            worst = worst.max(rise);
            if rise > 1e-5 {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{solved}/{DESCENT_INSTANCES} solved, {bad} increasing steps, largest relative rise {worst:.2e}"),
    )
}

fn w_step(ch: &ChannelSet, theta: &PhaseVector, qos: &QosSpec) -> Option<(BeamformerSet, f64)> {
    let h = effective_su_channels(ch, theta).unwrap();
    let u = effective_pu_channels(ch, theta).unwrap();
    let sol = solve_beamforming(&h, &u, qos, DEFAULT_SOLVER_TOL).unwrap();
    (sol.status == SolveStatus::Optimal).then_some((sol.w, sol.power))
}

/// Replays the alternation step by step so every DC solve can be checked
/// against the beamformers it was built from.
fn rank_one_certification() -> Outcome {
    let (cfg, qos, inst) = descent_instances();
    let params = cfg.algorithm.params(PhaseMethod::Dc, 0);
    let (mut solves, mut converged, mut bad) = (0, 0, 0);
    for (ch, seed) in &inst {
        let mut init = ChaCha8Rng::seed_from_u64(*seed);
        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
        rng.set_stream(1);
        let theta = random_phases(ch.n_ris_elements(), &mut init);
        let Some((mut w, mut power)) = w_step(ch, &theta, &qos) else {
            continue;
        };
        for _ in 0..params.max_outer {
            let dat = homogenize(ch, &w, &qos).unwrap();
            let Ok((sol, rep)) = dc_solve(&dat, &params.dc) else {
                break;
            };
            solves += 1;
            let mut next = None;
            if rep.converged {
                converged += 1;
                let ok_residual = rep.final_residual <= 1e-6;
                let extracted = extract_phase(&sol, params.dc.rank_tol).ok();
                let ok_phase = extracted.as_ref().is_some_and(|t| {
                    check_feasibility(ch, t, &w, &qos, 1e-5).unwrap().feasible
                });
                if !(ok_residual && ok_phase) {
                    bad += 1;
                }
                next = extracted.filter(|t| quadratic_terms(&dat, t).feasible(&dat, params.dc.feas_tol));
            }
            let next = match next {
                Some(t) => t,
                None => match randomize(&dat, &sol.matrix, params.dc.n_randomizations, params.dc.feas_tol, &mut rng) {
                    Ok((t, _)) => t,
                    Err(_) => break,
                },
            };
            let Some((next_w, next_power)) = w_step(ch, &next, &qos) else {
                break;
            };
            if next_power > power {
                break;
            }
            let decrease = (power - next_power) / power;
            w = next_w;
            power = next_power;
            if decrease < params.epsilon {
                break;
            }
        }
    }
    outcome(
        bad == 0 && converged > 0,
        format!("{converged}/{solves} DC solves converged, {bad} failed certification"),
    )
}

// ---- criteria 3 to 6: paired sweeps ----

struct Sweeps {
    sinr: Vec<TrialRecord>,
    elements: Vec<TrialRecord>,
    sinr_points: Vec<f64>,
    m_points: Vec<usize>,
}

fn sweeps() -> Sweeps {
    let sinr_cfg = config("sinr_sweep.toml");
    let mut elem_cfg = config("elements_sweep.toml");
    elem_cfg.methods = vec![Method::Dc, Method::Sdr];
    let sinr = run_sweep(&sinr_cfg).unwrap();
    let elements = run_sweep(&elem_cfg).unwrap();
    Sweeps {
        sinr,
        elements,
        sinr_points: sinr_cfg.gamma_db.clone(),
        m_points: elem_cfg.m_values.clone(),
    }
}

fn mean_power(records: &[TrialRecord], gamma_db: f64, m: usize, method: Method) -> Option<f64> {
    let v: Vec<f64> = records
        .iter()
        .filter(|r| r.gamma_db == gamma_db && r.m == m && r.method == method && r.status.has_solution())
        .filter_map(|r| r.total_power_db)
        .collect();
    mean_and_se(&v).map(|s| s.0)
}

fn sinr_trend(s: &Sweeps) -> Outcome {
    let means: Vec<Option<f64>> = s.sinr_points.iter().map(|&g| mean_power(&s.sinr, g, 20, Method::Dc)).collect();
    let pass = means.iter().all(Option::is_some)
        && means.windows(2).all(|w| w[1].unwrap() > w[0].unwrap());
    let text: Vec<String> = s
        .sinr_points
        .iter()
        .zip(&means)
        .map(|(g, m)| format!("{g} dB: {}", m.map_or("n/a".into(), |v| format!("{v:.2}"))))
        .collect();
    outcome(pass, format!("mean dc power (dB) {}", text.join(", ")))
}

/// Paired differences of one method between two element counts.
fn m_differences(records: &[TrialRecord], lo: usize, hi: usize) -> Vec<f64> {
    let pick = |m: usize| -> BTreeMap<usize, f64> {
        records
            .iter()
            .filter(|r| r.m == m && r.method == Method::Dc && r.status.has_solution())
            .filter_map(|r| r.total_power_db.map(|p| (r.trial_index, p)))
            .collect()
    };
    let a = pick(lo);
    let b = pick(hi);
    a.iter().filter_map(|(t, x)| b.get(t).map(|y| x - y)).collect()
}

fn element_trend(s: &Sweeps) -> Outcome {
    let lo = *s.m_points.iter().min().unwrap();
    let hi = *s.m_points.iter().max().unwrap();
    let d = m_differences(&s.elements, lo, hi);
    let Some((mean, Some(se))) = mean_and_se(&d) else {
        return outcome(false, "not enough paired trials".into());
    };
    outcome(
        mean > 2.0 * se,
        format!("M={lo} minus M={hi}: {mean:.3} dB over {} pairs, 2·SE {:.3} dB", d.len(), 2.0 * se),
    )
}

fn dc_versus_sdr(s: &Sweeps) -> Outcome {
    let mut points: Vec<(&[TrialRecord], f64, usize)> = s.sinr_points.iter().map(|&g| (&s.sinr[..], g, 20)).collect();
    for &m in &s.m_points {
        if m != 20 {
            points.push((&s.elements[..], 15.0, m));
        }
    }
    let (mut wins, mut total) = (0, 0);
    let mut mean_ok = true;
    let mut text = Vec::new();
    for (records, g, m) in points {
        let d = paired_differences(records, g, m, Method::Dc, Method::Sdr);
        wins += d.iter().filter(|&&x| x <= 1e-6).count();
        total += d.len();
        let dc = mean_power(records, g, m, Method::Dc);
        let sdr = mean_power(records, g, m, Method::Sdr);
        let ok = matches!((dc, sdr), (Some(a), Some(b)) if a <= b);
        mean_ok &= ok;
        let gap = dc.zip(sdr).map_or(f64::NAN, |(a, b)| a - b);
        text.push(format!("({g} dB, M={m}) {gap:+.3}{}", if ok { "" } else { "*" }));
    }
    let rate = wins as f64 / total.max(1) as f64;
    outcome(
        mean_ok && rate >= 0.6,
        format!(
            "mean dc minus sdr (dB, * = dc worse): {}; dc wins or ties {wins}/{total} = {:.0}%",
            text.join(" "),
            100.0 * rate
        ),
    )
}

fn ris_versus_direct(s: &Sweeps) -> Outcome {
    let d = paired_differences(&s.sinr, 15.0, 20, Method::NoRis, Method::Dc);
    let Some((mean, Some(se))) = mean_and_se(&d) else {
        return outcome(false, "not enough paired trials".into());
    };
    outcome(
        mean > 2.0 * se,
        format!("no-RIS minus dc at 15 dB, M=20: {mean:.3} dB over {} pairs, 2·SE {:.3} dB", d.len(), 2.0 * se),
    )
}

// ---- criterion 7: grid oracle ----

const GRID_STEPS: usize = 3600;
const GRID_FEASIBLE_TARGET: usize = 50;

fn grid_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let params = DcParams::default();
    let (mut feasible, mut dc_found) = (0, 0);
    let (mut infeasible, mut rejected) = (0, 0);
    let mut draws = 0;
    while feasible < GRID_FEASIBLE_TARGET && draws < 400 {
        draws += 1;
        let m = 1 + draws % 2;
        let k = 1 + rng.random_range(0..2);
        let l = rng.random_range(0..2);
        let ch = unit_channels(2, m, k, l, &mut rng);
        let w = beams(2, k, &mut rng);
        let start = phases(m, &mut rng);
        let ip = ris_cr::system::interference_all(&ch, &start, &w).unwrap();
        let kappa: Vec<f64> = ip.iter().map(|p| p * rng.random_range(0.7..3.0)).collect();
        let qos = QosSpec::new(vec![1.0; k], kappa, 1.0).unwrap();
        let mut dat = homogenize(&ch, &w, &qos).unwrap();
        let best = grid_best_score(&dat, GRID_STEPS);
        let scale = rng.random_range(0.5..1.5);
        if let Some(b) = best {
            dat.gamma = vec![b * scale; k];
        }
        let grid_feasible = best.is_some() && scale <= 1.0;
        let res = dc_phase_step(&dat, &params, &mut rng);
        if grid_feasible {
            feasible += 1;
            if let Ok(out) = res {
                if quadratic_terms(&dat, &out.theta).feasible(&dat, params.feas_tol) {
                    dc_found += 1;
                }
            }
        } else {
            infeasible += 1;
            if matches!(res, Err(PhaseError::PhaseInfeasible | PhaseError::RandomizationFailure { .. })) {
                rejected += 1;
            }
        }
    }
    let rate = dc_found as f64 / feasible.max(1) as f64;
    outcome(
        feasible >= GRID_FEASIBLE_TARGET && rate >= 0.95 && rejected == infeasible,
        format!(
            "grid-feasible: dc found {dc_found}/{feasible} ({:.0}%); grid-infeasible: rejected {rejected}/{infeasible}",
            100.0 * rate
        ),
    )
}

// ---- criteria 8 to 10: algebraic oracles ----

fn closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let n = rng.random_range(1..8);
        let h = cmatrix(1, n, &mut rng);
        let gamma = 10f64.powf(rng.random_range(-1.0..3.0));
        let sigma2 = 10f64.powf(rng.random_range(-9.0..0.0));
        let qos = QosSpec::new(vec![gamma], vec![], sigma2).unwrap();
        let sol = solve_beamforming(&h, &CMatrix::zeros(0, n), &qos, DEFAULT_SOLVER_TOL).unwrap();
        let expect = gamma * sigma2 / h.norm_squared();
        worst = worst.max((sol.power - expect).abs() / expect);
    }
    outcome(worst <= 1e-6, format!("largest relative error {worst:.2e} over 100 channels"))
}

fn lifting_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ch = unit_channels(5, 20, 4, 2, &mut rng);
    let qos = QosSpec::new(vec![1.0; 4], vec![1.0; 2], 1.0).unwrap();
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let w = beams(5, 4, &mut rng);
        let theta = phases(20, &mut rng);
        let dat = homogenize(&ch, &w, &qos).unwrap();
        let q = quadratic_terms(&dat, &theta);
        let l = lifted_terms(&dat, &LiftedSolution::from_phase(&theta).matrix);
        let pairs = q
            .signal
            .iter()
            .zip(&l.signal)
            .chain(q.interference.iter().zip(&l.interference))
            .chain(q.pu_interference.iter().zip(&l.pu_interference));
        for (a, b) in pairs {
            worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE));
        }
    }
    outcome(worst <= 1e-9, format!("largest relative mismatch {worst:.2e} over 1000 pairs"))
}

fn subgradient() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..1000 {
        let dim = rng.random_range(2..22);
        let x = psd(dim, rng.random_range(1..=dim), &mut rng);
        let y = psd(dim, rng.random_range(1..=dim), &mut rng);
        let g = leading_rank_one(&x);
        let gap = spectral_norm(&x) + (&y - &x).inner(&g) - spectral_norm(&y);
        worst = worst.max(gap / spectral_norm(&y).max(1.0));
    }
    outcome(worst <= 1e-9, format!("largest normalized violation {worst:.2e} over 1000 pairs"))
}

fn main() {
    let mut failures = 0;
    let mut report = |idx: usize, name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let o = f();
        if !o.pass {
            failures += 1;
        }
        println!(
            "criterion {idx:>2} {name}: {} [{:.1}s] {}",
            if o.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            o.detail
        );
    };
    report(1, "monotone descent", &monotone_descent);
    report(2, "rank-one certification", &rank_one_certification);
    let s = sweeps();
    report(3, "power grows with SINR target", &|| sinr_trend(&s));
    report(4, "power falls with element count", &|| element_trend(&s));
    report(5, "dc versus sdr", &|| dc_versus_sdr(&s));
    report(6, "RIS versus direct links", &|| ris_versus_direct(&s));
    report(7, "grid oracle", &grid_oracle);
    report(8, "single-user closed form", &closed_form);
    report(9, "lifting identity", &lifting_identity);
    report(10, "spectral-norm subgradient", &subgradient);
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
}
