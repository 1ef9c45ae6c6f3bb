use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn excursion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_excursion")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

const SYNTH: &str = "kind = \"synth\"\nmodel = \"bargmann-fock\"\nseed = 17\nr = 8.0\nmargin = 0.5\nn_samples = 3\nlevels = [-1.0, -0.25, 0.0, 0.4, 1.5]\n";

fn data_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn synth_is_deterministic_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "synth.toml", SYNTH);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    let out = excursion(&["synth", "--config", &config, "--workers", "1", "--out", a.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = excursion(&["synth", "--config", &config, "--workers", "3", "--out", b.to_str().unwrap()]);
    assert!(out.status.success());
    let files = data_files(&a);
    assert_eq!(files.len(), 7);
    assert_eq!(files, data_files(&b));
    let manifest = fs::read_to_string(a.join("manifest.json")).unwrap();
    assert_eq!(manifest.matches("\"sha256\"").count(), 7);
}

#[test]
fn seed_flag_overrides_config() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "synth.toml", SYNTH);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(excursion(&["synth", "--config", &config, "--out", a.to_str().unwrap()]).status.success());
    assert!(excursion(&["synth", "--config", &config, "--seed", "18", "--out", b.to_str().unwrap()]).status.success());
    let read = |d: &Path| fs::read(d.join("sample_0000.exlb1")).unwrap();
    assert_ne!(read(&a), read(&b));
}

#[test]
fn census_of_stored_grid_matches_synthesis_time_census() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "synth.toml", SYNTH);
    let synth_dir = tmp.path().join("synth");
    assert!(excursion(&["synth", "--config", &config, "--out", synth_dir.to_str().unwrap()]).status.success());
    let census_config =
        write_config(tmp.path(), "census.toml", "kind = \"census\"\nlevels = [-1.0, -0.25, 0.0, 0.4, 1.5]\n");
    for i in 0..3 {
        let grid = synth_dir.join(format!("sample_{i:04}.exlb1"));
        let out_dir = tmp.path().join(format!("census{i}"));
        let out = excursion(&[
            "census",
            "--config",
            &census_config,
            "--input",
            grid.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(
            fs::read_to_string(out_dir.join("census.csv")).unwrap(),
            fs::read_to_string(synth_dir.join(format!("sample_{i:04}_census.csv"))).unwrap()
        );
        assert!(out_dir.join("merge_tree_superlevel.csv").exists());
        assert!(out_dir.join("merge_tree_sublevel.csv").exists());
    }
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out_dir = tmp.path().join("out");
    let out_dir = out_dir.to_str().unwrap();
    let cases = [
        (
            "scaling",
            "kind = \"scaling\"\nmodel = \"bargmann-fock\"\nlevel = 0.3\nr_list = [8.0, 12.0, 16.0]\nn_per_r = 200\n",
        ),
        ("synth", "kind = \"synth\"\nmodel = \"no-such-model\"\nr = 8.0\n"),
        ("synth", "kind = \"synth\"\nmodel = \"rpw\"\nr = 8.0\nh = 1.0\n"),
        ("synth", "kind = \"synth\"\nmodel = \"bargmann-fock\"\nr = 8.0\nunknown_key = 1\n"),
        ("density", "kind = \"synth\"\nmodel = \"bargmann-fock\"\nr = 8.0\n"),
        ("density", "kind = \"density\"\nmodel = \"bargmann-fock\"\nr = 8.0\n"),
    ];
    for (i, (cmd, text)) in cases.iter().enumerate() {
        let config = write_config(tmp.path(), &format!("c{i}.toml"), text);
        let out = excursion(&[cmd, "--config", &config, "--out", out_dir]);
        assert_eq!(out.status.code(), Some(2), "case {i}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = tmp.path().join("missing.toml");
    assert_eq!(excursion(&["synth", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "synth.toml", SYNTH);
    let blocker = tmp.path().join("file");
    fs::write(&blocker, b"not a directory").unwrap();
    let out = excursion(&["synth", "--config", &config, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));

    let broken = tmp.path().join("broken.exlb1");
    fs::write(&broken, b"EXLB1\x01\x00").unwrap();
    let out =
        excursion(&["census", "--input", broken.to_str().unwrap(), "--out", tmp.path().join("c").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn kl_bound_writes_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), "kl.toml", "kind = \"kl-bound\"\nk = 2\ns = 0.9\n");
    let out_dir = tmp.path().join("kl");
    assert!(excursion(&["kl-bound", "--config", &config, "--out", out_dir.to_str().unwrap()]).status.success());
    let csv = fs::read_to_string(out_dir.join("kl.csv")).unwrap();
    let row: Vec<f64> = csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let expected = 0.81 - 1.0 - 0.81f64.ln();
    assert!((row[2] - expected).abs() < 1e-15);
    assert!((row[3] - (expected / 2.0).sqrt()).abs() < 1e-15);
    assert!(out_dir.join("summary.json").exists() && out_dir.join("manifest.json").exists());
}
