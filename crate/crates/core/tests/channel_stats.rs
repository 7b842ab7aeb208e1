mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_cr::channel::{
    db_to_linear, distance, generate_channels_at, path_loss, LinkClass, NetworkGeometry,
    PathLossParams,
};
use ris_cr::system::{effective_pu_channels, effective_su_channels, PhaseVector};

use common::{effective_rows_naive, phases, unit_channels};

/// Entries of every block have mean power equal to the link's path loss.
#[test]
fn fading_power_matches_path_loss() {
    let geom = NetworkGeometry {
        n_antennas: 4,
        n_ris_elements: 8,
        n_sus: 2,
        n_pus: 1,
        ..NetworkGeometry::default()
    };
    let params = PathLossParams::default();
    let su = vec![[10.0, 100.0, 0.0], [-30.0, 70.0, 0.0]];
    let pu = vec![[-140.0, -20.0, 0.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let draws = 10_000 / (geom.n_antennas * geom.n_sus) + 1;
    let mut hd = vec![0.0; 2];
    let mut g = 0.0;
    let mut ur = 0.0;
    let mut count = [0usize; 3];
    for _ in 0..draws {
        let ch = generate_channels_at(&geom, &params, su.clone(), pu.clone(), &mut rng).unwrap();
        for k in 0..2 {
            hd[k] += ch.h_d.row(k).iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        count[0] += geom.n_antennas;
        g += ch.g.iter().map(|z| z.norm_sqr()).sum::<f64>();
        count[1] += ch.g.len();
        ur += ch.u_r.iter().map(|z| z.norm_sqr()).sum::<f64>();
        count[2] += ch.u_r.len();
    }
    let tx = geom.tx_position;
    let ris = geom.ris_position;
    let expect_hd: Vec<f64> = su
        .iter()
        .map(|p| db_to_linear(-30.0) * distance(&tx, p).powf(-3.5))
        .collect();
    let expect_g = db_to_linear(-30.0) * distance(&tx, &ris).powf(-2.0);
    let expect_ur = db_to_linear(-30.0) * distance(&ris, &pu[0]).powf(-2.2);
    // the sample mean of n unit exponentials has relative sd 1/sqrt(n)
    let within = |sum: f64, n: usize, expect: f64| {
        let mean = sum / n as f64;
        ((mean - expect) / expect).abs() < 5.0 / (n as f64).sqrt()
    };
    for k in 0..2 {
        assert!(within(hd[k], count[0], expect_hd[k]), "h_d row {k}");
    }
    assert!(within(g, count[1], expect_g));
    assert!(within(ur, count[2], expect_ur));
}

#[test]
fn fading_is_circular() {
    let geom = NetworkGeometry {
        n_antennas: 10,
        n_ris_elements: 0,
        n_sus: 1,
        n_pus: 1,
        ..NetworkGeometry::default()
    };
    let params = PathLossParams {
        t0_db: 0.0,
        ..PathLossParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut re2, mut im2, mut cross, mut n) = (0.0, 0.0, 0.0, 0usize);
    for _ in 0..1000 {
        let ch = generate_channels_at(&geom, &params, vec![[1.0, 0.0, 10.0]], vec![[0.0, 1.0, 10.0]], &mut rng)
            .unwrap();
        for z in ch.h_d.iter() {
            re2 += z.re * z.re;
            im2 += z.im * z.im;
            cross += z.re * z.im;
            n += 1;
        }
    }
    let n = n as f64;
    assert!((re2 / n - 0.5).abs() < 0.03);
    assert!((im2 / n - 0.5).abs() < 0.03);
    assert!((cross / n).abs() < 0.03);
}

#[test]
fn path_loss_at_reference_distance_is_t0() {
    let p = PathLossParams::default();
    for class in [LinkClass::TxSu, LinkClass::TxRis, LinkClass::RisPu] {
        assert!((path_loss(1.0, class, &p).unwrap() - 1e-3).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn phases_from_angles_have_unit_modulus(angles in prop::collection::vec(-10.0f64..10.0, 0..12)) {
        prop_assert!(PhaseVector::from_angles(&angles).max_modulus_error() < 1e-15);
    }

    #[test]
    fn path_loss_decreases_with_distance(d in 0.5f64..500.0, step in 0.01f64..100.0) {
        let p = PathLossParams::default();
        for class in [LinkClass::TxSu, LinkClass::TxPu, LinkClass::TxRis, LinkClass::RisSu, LinkClass::RisPu] {
            prop_assert!(path_loss(d + step, class, &p).unwrap() < path_loss(d, class, &p).unwrap());
        }
    }

    #[test]
    fn effective_channels_match_entrywise_sum(
        seed in any::<u64>(), n in 1usize..5, m in 0usize..6, k in 1usize..4, l in 0usize..3,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = unit_channels(n, m, k, l, &mut rng);
        let theta = phases(m, &mut rng);
        let h = effective_su_channels(&ch, &theta).unwrap();
        let u = effective_pu_channels(&ch, &theta).unwrap();
        prop_assert!((h - effective_rows_naive(&ch.h_d, &ch.h_r, &ch.g, &theta)).norm() < 1e-12);
        prop_assert!((u - effective_rows_naive(&ch.u_d, &ch.u_r, &ch.g, &theta)).norm() < 1e-12);
    }

    #[test]
    fn removing_ris_leaves_direct_links(seed in any::<u64>(), m in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = unit_channels(3, m, 2, 1, &mut rng);
        let theta = phases(m, &mut rng);
        let h = effective_su_channels(&ch.without_ris(), &theta).unwrap();
        prop_assert!((h - ch.h_d.map(|z| z.conj())).norm() < 1e-14);
    }
}
