//! Config-driven experiment runs with reproducible outputs.

mod config;
mod io;
mod manifest;
mod run;

pub use config::{ExperimentConfig, ExperimentKind};
pub use io::{decode_exlb1, encode_exlb1, read_exlb1, write_exlb1, EXLB1_MAGIC, EXLB1_VERSION};
pub use manifest::{OutputEntry, RunManifest};
pub use run::{census_table, run, CensusRow, RunOptions, Summary};

pub use crate::parallel::{parallel_map, Workers};
pub use crate::seed::{replicate_seed, seed_split};
