use excursion_core::parallel::{parallel_map, Workers};
use excursion_core::seed::{replicate_seed, rng_from_seed};
use excursion_core::stats::Moments;
use excursion_core::synth::{empirical_covariance, normality_check, RpwCoefficients, Synthesizer};
use excursion_core::{FieldModel, GridSpec};

/// Values at a few fixed points of `n` replicates.
fn point_values(
    model: &FieldModel,
    grid: &GridSpec,
    n: usize,
    stream: u64,
    points: &[(usize, usize)],
) -> Vec<Vec<f64>> {
    let synth = Synthesizer::new(model, grid).unwrap();
    let per_replicate = parallel_map(n, Workers::default(), |i| {
        let s = synth.sample(replicate_seed(0xfeed, stream, i as u64), i as u64);
        points.iter().map(|&(r, c)| s.values[[r, c]]).collect::<Vec<f64>>()
    });
    (0..points.len()).map(|k| per_replicate.iter().map(|v| v[k]).collect()).collect()
}

#[test]
fn bargmann_fock_point_values_are_standard_normal() {
    let grid = GridSpec::new(16.0, 0.125, 0.0).unwrap();
    let values = point_values(&FieldModel::BargmannFock, &grid, 2000, 1, &[(64, 64), (3, 100)]);
    for v in &values {
        let m: Moments = v.iter().copied().collect();
        assert!(m.mean().abs() <= 3.0 / 2000f64.sqrt(), "mean {}", m.mean());
        assert!((m.variance() - 1.0).abs() <= 3.0 * (2.0f64 / 1999.0).sqrt(), "variance {}", m.variance());
    }
}

#[test]
fn point_values_pass_normality_check() {
    let grid = GridSpec::new(8.0, 0.125, 0.0).unwrap();
    for model in [FieldModel::BargmannFock, FieldModel::power_law(1.0, 0.25).unwrap()] {
        let v = point_values(&model, &grid, 5000, 2, &[(32, 32)]);
        let check = normality_check(&v[0]);
        assert!(check.pass, "{model}: {check:?}");
    }
}

#[test]
fn truncated_rpw_centre_variance_is_geometric() {
    // Only the J0 chain contributes at the centre: Var f_N(0) = 1 - 2^-N.
    for order in [1usize, 3, 6] {
        let mut rng = rng_from_seed(order as u64);
        let n = 40_000;
        let m: Moments = (0..n).map(|_| RpwCoefficients::draw(order, &mut rng).evaluate(0.0, 0.0, order)).collect();
        let target = 1.0 - 0.5f64.powi(order as i32);
        let se = target * (2.0 / (n as f64 - 1.0)).sqrt();
        assert!((m.variance() - target).abs() <= 3.0 * se, "order {order}: {} vs {target}", m.variance());
    }
}

#[test]
fn atom_adds_its_mass_to_the_variance() {
    let grid = GridSpec::new(8.0, 0.125, 0.0).unwrap();
    let model = FieldModel::atom_plus(0.25, FieldModel::BargmannFock).unwrap();
    let v = point_values(&model, &grid, 3000, 3, &[(10, 50), (60, 2)]);
    for values in &v {
        let var = Moments::from_iter(values.iter().copied()).variance();
        // Var(X + √α Z) = 1 + α for independent X, Z.
        assert!((var - 1.25).abs() <= 3.0 * 1.25 * (2.0f64 / 2999.0).sqrt(), "variance {var}");
    }
    let diff: Vec<f64> = v[0].iter().zip(&v[1]).map(|(a, b)| a - b).collect();
    let dv = Moments::from_iter(diff).variance();
    let expected = 2.0 - 2.0 * model.base().covariance([6.25, 5.0]).unwrap();
    assert!((dv - expected).abs() <= 3.0 * expected * (2.0f64 / 2999.0).sqrt(), "{dv} vs {expected}");
}

#[test]
fn power_law_covariance_matches_hankel_transform() {
    let model = FieldModel::power_law(1.0, 0.25).unwrap();
    let grid = GridSpec::new(4.0, 0.125, 0.0).unwrap();
    let synth = Synthesizer::new(&model, &grid).unwrap();
    let samples = parallel_map(3000, Workers::default(), |i| synth.sample(replicate_seed(5, 0, i as u64), i as u64));
    let rows = empirical_covariance(&samples, &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 2.0]]).unwrap();
    for row in rows {
        let target = model.covariance_numeric([row.lag_x, row.lag_y]);
        assert!((row.kappa_hat - target).abs() <= 3.0 * row.se, "{row:?} vs {target}");
    }
}

#[test]
fn rpw_sample_covariance_follows_bessel_j0() {
    let model = FieldModel::RandomPlaneWave;
    let grid = GridSpec::for_model(&model, 8.0, 0.0).unwrap();
    let synth = Synthesizer::new(&model, &grid).unwrap();
    let samples = parallel_map(3000, Workers::default(), |i| synth.sample(replicate_seed(6, 0, i as u64), i as u64));
    let h = grid.spacing();
    let lags = [[0.0, 0.0], [2.0 * h, 0.0], [4.0 * h, 4.0 * h], [0.0, 8.0 * h]];
    for row in empirical_covariance(&samples, &lags).unwrap() {
        let target = model.covariance([row.lag_x, row.lag_y]).unwrap();
        assert!((row.kappa_hat - target).abs() <= 3.0 * row.se, "{row:?} vs {target}");
    }
}
