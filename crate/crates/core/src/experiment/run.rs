use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use ndarray::ArrayView2;
use serde::Serialize;
use serde_json::json;

use super::config::{ExperimentConfig, ExperimentKind};
use super::io::{read_exlb1, write_exlb1};
use super::manifest::{OutputEntry, RunManifest};
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lab::{self, replicate_seeds, ShiftRule};
use crate::model::FieldModel;
use crate::parallel::{parallel_map, Workers};
use crate::seed::seed_split;
use crate::synth::{empirical_covariance, rpw_truncation_order, truncation_error_sweep, Synthesizer};
use crate::topology::{count_components, ConnectivityPolicy, TopologyAnalysis};

/// Command-line overrides applied on top of a config.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub workers: Workers,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Machine-readable summary written next to the data files.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub config_hash: String,
    pub master_seed: u64,
    pub metrics: serde_json::Value,
    pub checks: BTreeMap<String, bool>,
}

/// One row of a census table. Critical point counts cover the levels `[level, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CensusRow {
    pub level: f64,
    pub n_es_contained: usize,
    pub n_es_boundary: usize,
    pub n_ls_contained: usize,
    pub n_ls_boundary: usize,
    pub m_plus: u32,
    pub m_minus: u32,
    pub s_plus: u32,
    pub s_minus: u32,
    pub four_arm: u32,
    pub tangency: u32,
}

pub fn census_table(values: ArrayView2<'_, f64>, levels: &[f64], policy: ConnectivityPolicy) -> Vec<CensusRow> {
    let analysis = TopologyAnalysis::new(values, policy);
    levels
        .iter()
        .map(|&level| {
            let c = count_components(values, level, policy);
            let k = analysis.critical().window_counts(level, f64::INFINITY).expect("ordered window");
            CensusRow {
                level,
                n_es_contained: c.n_contained,
                n_es_boundary: c.n_boundary,
                n_ls_contained: c.n_level_contained,
                n_ls_boundary: c.n_level_boundary,
                m_plus: k.m_plus,
                m_minus: k.m_minus,
                s_plus: k.s_plus,
                s_minus: k.s_minus,
                four_arm: k.four_arm,
                tangency: k.tangency,
            }
        })
        .collect()
}

struct Outputs {
    dir: PathBuf,
    files: Vec<String>,
}

impl Outputs {
    fn ensure_dir(&self) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        self.ensure_dir()?;
        let mut w = csv::Writer::from_path(self.dir.join(name))?;
        for row in rows {
            w.serialize(row)?;
        }
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.ensure_dir()?;
        std::fs::write(self.dir.join(name), serde_json::to_string_pretty(value)? + "\n")?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn raw(&mut self, name: &str, write: impl FnOnce(&Path) -> Result<()>) -> Result<()> {
        self.ensure_dir()?;
        write(&self.dir.join(name))?;
        self.files.push(name.to_string());
        Ok(())
    }
}

fn require<T: Clone>(value: &Option<T>, field: &str, kind: ExperimentKind) -> Result<T> {
    value.clone().ok_or_else(|| Error::Config(format!("`{}` experiments need `{field}`", kind.name())))
}

fn model_of(config: &ExperimentConfig) -> Result<FieldModel> {
    require(&config.model, "model", config.kind)?.parse()
}

fn grid_of(config: &ExperimentConfig, model: &FieldModel, side: f64) -> Result<GridSpec> {
    let margin = config.margin.unwrap_or(0.0);
    match config.h {
        Some(h) => {
            let grid = GridSpec::new(side, h, margin)?;
            grid.check_model(model)?;
            Ok(grid)
        }
        None => GridSpec::for_model(model, side, margin),
    }
}

fn unix_now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Executes one experiment and writes its data files, `summary.json` and `manifest.json`.
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<RunManifest> {
    let started_unix = unix_now();
    let mut config = config.clone();
    if let Some(seed) = options.seed {
        config.seed = seed;
    }
    if let Some(out) = &options.out {
        config.out = Some(out.display().to_string());
    }
    let dir = PathBuf::from(config.out.clone().unwrap_or_else(|| "out".into()));
    let config_hash = config.hash();
    let seed = config.seed;
    let kind = config.kind;
    let workers = options.workers;
    let policy = ConnectivityPolicy::default();
    let mut out = Outputs { dir: dir.clone(), files: Vec::new() };
    let mut seeds = Vec::new();
    let mut checks = BTreeMap::new();

    let metrics = match kind {
        ExperimentKind::Synth => {
            let model = model_of(&config)?;
            let grid = grid_of(&config, &model, require(&config.r, "r", kind)?)?;
            let n = config.n_samples.unwrap_or(1).max(1);
            let levels = config.levels.clone().unwrap_or_else(|| vec![0.0]);
            let synth = Synthesizer::new(&model, &grid)?;
            seeds = replicate_seeds(seed, 0, n);
            let samples = parallel_map(n, workers, |i| synth.sample(seeds[i], i as u64));
            for (i, s) in samples.iter().enumerate() {
                out.raw(&format!("sample_{i:04}.exlb1"), |p| write_exlb1(p, s))?;
                out.csv(&format!("sample_{i:04}_census.csv"), &census_table(s.window(), &levels, policy))?;
            }
            if let Some(lags) = &config.lags {
                out.csv("covariance.csv", &empirical_covariance(&samples, lags)?)?;
            }
            json!({ "model": model.id(), "side": grid.side(), "spacing": grid.spacing(), "n_samples": n })
        }
        ExperimentKind::Census => {
            let input = require(&config.input, "input", kind)?;
            let sample = read_exlb1(Path::new(&input))?;
            let levels = config.levels.clone().unwrap_or_else(|| vec![0.0]);
            out.csv("census.csv", &census_table(sample.window(), &levels, policy))?;
            let analysis = TopologyAnalysis::new(sample.window(), policy);
            out.raw("merge_tree_superlevel.csv", |p| {
                analysis.superlevel().tree.write_edge_list(std::fs::File::create(p)?).map_err(Error::from)
            })?;
            out.raw("merge_tree_sublevel.csv", |p| {
                analysis.sublevel().tree.write_edge_list(std::fs::File::create(p)?).map_err(Error::from)
            })?;
            json!({ "model": sample.model_id, "sample_seed": sample.seed, "replicate": sample.replicate })
        }
        ExperimentKind::Density => {
            let model = model_of(&config)?;
            let grid = grid_of(&config, &model, require(&config.r, "r", kind)?)?;
            let levels = require(&config.levels, "levels", kind)?;
            let n = require(&config.n_samples, "n_samples", kind)?;
            let curve = lab::estimate_density_curve(&model, &grid, &levels, n, seed, workers)?;
            seeds = replicate_seeds(seed, 0, n);
            out.csv("density.csv", &curve.points)?;
            json!({ "model": curve.model_id, "side": curve.side, "n_samples": n })
        }
        ExperimentKind::Identity => {
            let model = model_of(&config)?;
            let grid = grid_of(&config, &model, require(&config.r, "r", kind)?)?;
            let (a, b) = (require(&config.a, "a", kind)?, require(&config.b, "b", kind)?);
            let n = require(&config.n_samples, "n_samples", kind)?;
            let report = lab::integral_identity_check(&model, &grid, a, b, n, seed, workers)?;
            seeds = replicate_seeds(seed, 0, n);
            #[derive(Serialize)]
            struct Row<'a> {
                variant: &'a str,
                #[serde(flatten)]
                side: lab::IdentitySide,
            }
            out.csv(
                "identity.csv",
                &[
                    Row { variant: "excursion", side: report.excursion },
                    Row { variant: "level-set", side: report.level_set },
                ],
            )?;
            checks.insert("excursion_identity".into(), report.excursion.pass);
            checks.insert("level_set_identity".into(), report.level_set.pass);
            serde_json::to_value(&report)?
        }
        ExperimentKind::Scaling => {
            let model = model_of(&config)?;
            let level = require(&config.level, "level", kind)?;
            let sides = require(&config.r_list, "r_list", kind)?;
            let n = require(&config.n_per_r, "n_per_r", kind)?;
            let fit = lab::variance_scaling_fit(&model, level, &sides, n, seed, workers)?;
            seeds = (0..sides.len() as u64).flat_map(|j| replicate_seeds(seed, j, n)).collect();
            out.csv("scaling.csv", &fit.points)?;
            json!({ "model": fit.model_id, "level": level, "exponent": fit.exponent, "exponent_se": fit.exponent_se, "intercept": fit.intercept })
        }
        ExperimentKind::Paired => {
            let model = model_of(&config)?;
            let level = require(&config.level, "level", kind)?;
            let sides = require(&config.r_list, "r_list", kind)?;
            let n = require(&config.n_per_r, "n_per_r", kind)?;
            let rule =
                ShiftRule::from_name(config.a_rule.as_deref().unwrap_or("inv-r"), config.a_rule_c.unwrap_or(1.0))?;
            let report = lab::paired_level_experiment(&model, level, rule, &sides, n, seed, workers)?;
            seeds = (0..sides.len() as u64).flat_map(|j| replicate_seeds(seed, j, n)).collect();
            out.csv("paired.csv", &report.rows)?;
            json!({ "model": report.model_id, "level": level, "rule": report.rule })
        }
        ExperimentKind::RpwTrunc => {
            let side = require(&config.r, "r", kind)?;
            let grid = grid_of(&config, &FieldModel::RandomPlaneWave, side)?;
            let orders = require(&config.n_list, "n_list", kind)?;
            let n_ref = config.n_ref.unwrap_or_else(|| 4 * orders.iter().copied().max().unwrap_or(1));
            let n = config.n_samples.unwrap_or(20);
            let sweep = truncation_error_sweep(&grid, &orders, n_ref, n, seed)?;
            seeds = (0..n as u64).map(|i| seed_split(seed, i)).collect();
            out.csv("truncation.csv", &sweep.rows)?;
            let decreasing = sweep.rows.windows(2).all(|w| w[1].log_mean_sup_error < w[0].log_mean_sup_error);
            checks.insert("strictly_decreasing".into(), decreasing);
            json!({ "slope": sweep.slope, "reference_order": n_ref, "required_order": rpw_truncation_order(&grid) })
        }
        ExperimentKind::KlBound => {
            let k = require(&config.k, "k", kind)?;
            let s = require(&config.s, "s", kind)?;
            let r = lab::kl_tv_gaussian_scaled(k, s)?;
            #[derive(Serialize)]
            struct Row {
                k: u64,
                s: f64,
                kl: f64,
                tv_bound: f64,
            }
            out.csv("kl.csv", &[Row { k, s, kl: r.kl, tv_bound: r.tv_bound }])?;
            let coupling = match config.level {
                Some(level) => {
                    Some(lab::rpw_level_coupling_bound(level, config.a.unwrap_or(0.0), require(&config.r, "r", kind)?)?)
                }
                None => None,
            };
            json!({ "kl": r.kl, "tv_bound": r.tv_bound, "rpw_coupling_bound": coupling })
        }
    };

    let summary = Summary {
        experiment: kind.name().into(),
        config_hash: config_hash.clone(),
        master_seed: seed,
        metrics,
        checks,
    };
    out.json("summary.json", &summary)?;
    let outputs = out.files.iter().map(|f| OutputEntry::for_file(&dir, f)).collect::<Result<Vec<_>>>()?;
    let manifest = RunManifest {
        experiment: kind.name().into(),
        config_hash,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        master_seed: seed,
        started_unix,
        finished_unix: unix_now(),
        replicate_seeds: seeds,
        outputs,
    };
    manifest.write(&dir)?;
    Ok(manifest)
}
