//! Identity registry and verification runner.
//!
//! Suite files live under `suites/` (or `$QRUCIBLE_SUITE_DIR`); each file's
//! stem is the group of the identities it holds. [`verify`] checks one case,
//! [`run_suite`] a filtered selection in parallel.

pub mod mutate;
pub mod partition;
pub mod registry;
pub mod report;
pub mod runner;

pub use mutate::{bump_exponent, detects_perturbation, exponent_sites};
pub use partition::{partition_count, PartitionRule, PARTITION_BOUND};
pub use registry::{default_suite_dir, load_dir, load_file, load_files, Case, GROUPS};
pub use report::{reports_to_json, MismatchReport, Status, VerifyReport};
pub use runner::{exit_code, run_suite, select, verify, RunOptions};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: qrucible_dsl::DslError,
    },
    #[error("identity `{0}` appears in more than one suite file")]
    DuplicateName(String),
    #[error("bad filter pattern: {0}")]
    Filter(#[from] globset::Error),
    #[error("n = {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: u32, bound: u32 },
    #[error("invalid override: {0}")]
    Override(String),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
