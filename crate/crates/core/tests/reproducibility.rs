use std::collections::HashSet;
use std::path::Path;

use ndarray::Array2;

use excursion_core::experiment::{
    decode_exlb1, encode_exlb1, read_exlb1, run, ExperimentConfig, ExperimentKind, RunManifest, RunOptions, Workers,
};
use excursion_core::lab::map_replicates;
use excursion_core::synth::Synthesizer;
use excursion_core::{seed_split, Error, FieldModel, FieldSample, FormatError, GridSpec};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/grid_9x9.exlb1");

fn fixture_sample() -> FieldSample {
    let values = Array2::from_shape_fn((9, 9), |(r, c)| {
        let k = 9 * r + c;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        (k as f64 - 40.0) / 7.0 * sign
    });
    let grid = GridSpec::new(1.0, 0.125, 0.0).unwrap();
    FieldSample::new(grid, values, "bargmann-fock".into(), 0x0123_4567_89ab_cdef, 5).unwrap()
}

#[test]
fn exlb1_matches_checked_in_bytes() {
    let bytes = std::fs::read(FIXTURE).unwrap();
    let sample = fixture_sample();
    assert_eq!(encode_exlb1(&sample), bytes);
    let read = read_exlb1(Path::new(FIXTURE)).unwrap();
    assert_eq!(read, sample);
    assert!(read.values.iter().zip(sample.values.iter()).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn exlb1_rejects_damaged_files() {
    let bytes = std::fs::read(FIXTURE).unwrap();
    let truncated = decode_exlb1(&bytes[..bytes.len() - 1]).unwrap_err();
    assert!(matches!(truncated, Error::Format(FormatError::Truncated { .. })));
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    assert!(matches!(decode_exlb1(&wrong), Err(Error::Format(FormatError::BadMagic))));
    let mut version = bytes.clone();
    version[5] = 9;
    assert!(matches!(decode_exlb1(&version), Err(Error::Format(FormatError::UnsupportedVersion(9)))));
    let mut longer = bytes;
    longer.push(0);
    assert!(matches!(decode_exlb1(&longer), Err(Error::Format(FormatError::TrailingBytes))));
}

#[test]
fn seed_split_has_no_collisions_in_first_million_indices() {
    for master in [0u64, 0x5eed] {
        let mut seen = HashSet::with_capacity(1 << 20);
        for i in 0..1_000_000u64 {
            assert!(seen.insert(seed_split(master, i)), "collision at master {master}, index {i}");
        }
    }
}

#[test]
fn seed_split_avalanches_on_master_bits() {
    let master = 0x0123_4567_89ab_cdefu64;
    let mut flips = 0u64;
    let mut trials = 0u64;
    for i in 0..2000u64 {
        let base = seed_split(master, i);
        for bit in 0..64 {
            flips += u64::from((base ^ seed_split(master ^ (1 << bit), i)).count_ones());
            trials += 1;
        }
    }
    let mean = flips as f64 / trials as f64;
    assert!(mean >= 20.0 && (mean - 32.0).abs() < 0.5, "mean flipped bits {mean}");
}

#[test]
fn replicates_do_not_depend_on_worker_count() {
    let grid = GridSpec::new(4.0, 0.125, 0.5).unwrap();
    for model in [FieldModel::BargmannFock, FieldModel::RandomPlaneWave, FieldModel::power_law(1.0, 0.25).unwrap()] {
        let one = map_replicates(&model, &grid, 7, 42, 3, Workers::single(), |s| s.clone()).unwrap();
        let three = map_replicates(&model, &grid, 7, 42, 3, Workers::new(3), |s| s.clone()).unwrap();
        assert_eq!(one, three);
        let synth = Synthesizer::new(&model, &grid).unwrap();
        assert_eq!(one[4], synth.sample(one[4].seed, 4));
    }
}

fn checksums(manifest: &RunManifest) -> Vec<(String, String)> {
    manifest.outputs.iter().map(|o| (o.path.clone(), o.sha256.clone())).collect()
}

#[test]
fn runs_are_reproducible() {
    let config = ExperimentConfig::from_toml(
        "kind = \"density\"\nmodel = \"bargmann-fock\"\nseed = 99\nr = 8.0\nlevels = [-0.5, 0.0, 0.5, 1.0]\nn_samples = 12\n",
    )
    .unwrap();
    let dirs: Vec<_> = (0..3).map(|_| tempfile::tempdir().unwrap()).collect();
    let manifests: Vec<_> = dirs
        .iter()
        .zip([1, 1, 3])
        .map(|(d, w)| {
            let options = RunOptions { workers: Workers::new(w), seed: None, out: Some(d.path().to_path_buf()) };
            run(&config, &options).unwrap()
        })
        .collect();
    assert_eq!(checksums(&manifests[0]), checksums(&manifests[1]));
    assert_eq!(checksums(&manifests[0]), checksums(&manifests[2]));
    assert_eq!(manifests[0].replicate_seeds.len(), 12);
    assert_eq!(manifests[0].config_hash, config.hash());
    let loaded = RunManifest::load(dirs[0].path()).unwrap();
    assert_eq!(loaded, manifests[0]);

    let reseeded = tempfile::tempdir().unwrap();
    let options = RunOptions { workers: Workers::single(), seed: Some(100), out: Some(reseeded.path().to_path_buf()) };
    let other = run(&config, &options).unwrap();
    assert_ne!(checksums(&other), checksums(&manifests[0]));
}

#[test]
fn short_scaling_ladder_is_a_config_error() {
    let mut config = ExperimentConfig::new(ExperimentKind::Scaling);
    config.model = Some("bargmann-fock".into());
    config.level = Some(0.3);
    config.r_list = Some(vec![8.0, 12.0, 16.0]);
    config.n_per_r = Some(200);
    let dir = tempfile::tempdir().unwrap();
    let options = RunOptions { workers: Workers::single(), seed: None, out: Some(dir.path().join("out")) };
    let err = run(&config, &options).unwrap_err();
    assert!(err.is_config_error(), "{err}");
    assert!(!dir.path().join("out").exists());
}
