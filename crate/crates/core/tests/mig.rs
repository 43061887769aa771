use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use adascale::gp::{gram, KernelParams};
use adascale::mig::{independent_ig, information_gain, sobol_mig_curve};

fn random_design(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..d).map(|_| rng.random()).collect()).collect()
}

#[test]
fn unit_diagonal_gain_is_below_the_independent_limit() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let d = rng.random_range(1..20);
        let n = rng.random_range(1..60);
        let p = KernelParams::isotropic(d, rng.random_range(0.05..2.0), 1.0, 1e-3).unwrap();
        let noise = 10f64.powf(rng.random_range(-4.0..0.0));
        let ig = information_gain(&gram(&random_design(n, d, &mut rng), &p), noise).unwrap();
        assert!(ig >= 0.0 && ig <= independent_ig(n, noise) + 1e-9);
    }
}

#[test]
fn adding_a_point_never_loses_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let xs = random_design(40, 6, &mut rng);
        let p = KernelParams::isotropic(6, 0.4, 1.0, 1e-3).unwrap();
        let mut prev = 0.0;
        for n in 1..=xs.len() {
            let ig = information_gain(&gram(&xs[..n], &p), 0.01).unwrap();
            assert!(ig >= prev - 1e-10);
            prev = ig;
        }
    }
}

#[test]
fn ordering_holds_across_noise_levels() {
    for noise in [1e-4, 1e-3, 1e-2, 1e-1, 1.0] {
        let igs: Vec<f64> = [0.8, 0.4, 0.2, 0.1]
            .iter()
            .map(|&l| sobol_mig_curve(100, l, 0.5, noise, &[100], None).unwrap().points[0].ig)
            .collect();
        assert!(igs.windows(2).all(|w| w[0] >= w[1]), "noise {noise}: {igs:?}");
    }
}

#[test]
fn large_region_tracks_the_independent_line() {
    let curve = sobol_mig_curve(100, 0.8, 0.5, 0.01, &[100], None).unwrap();
    let ratio = curve.points[0].ig / independent_ig(100, 0.01);
    assert!((ratio - 1.0).abs() < 0.1);
}

#[test]
fn empty_and_degenerate_inputs() {
    assert_eq!(information_gain(&DMatrix::zeros(0, 0), 0.1).unwrap(), 0.0);
    assert_eq!(information_gain(&DMatrix::zeros(3, 3), 0.1).unwrap(), 0.0);
    assert!(sobol_mig_curve(3, 0.5, 0.5, -1.0, &[2], None).is_err());
}
