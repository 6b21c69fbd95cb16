//! Experiment harness: configuration, study runners and result records.

pub mod config;
pub mod record;
pub mod studies;

pub use config::{parse_config, ConfigError, LabConfig};
pub use record::{emit, sort_records, to_csv_string, to_json_string, OutputFormat, ResultRecord, Verdict, CSV_COLUMNS};

/// Environment variable overriding the configured worker count.
pub const WORKERS_ENV: &str = "EDGELAB_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Study {
    Theorem1,
    Theorem2,
    Theorem3,
    Crosschecks,
    Fredholm,
    IdPiiSolve,
    EqMeasure,
}

impl Study {
    pub const ALL: [Study; 7] = [
        Study::Theorem1,
        Study::Theorem2,
        Study::Theorem3,
        Study::Crosschecks,
        Study::Fredholm,
        Study::IdPiiSolve,
        Study::EqMeasure,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Theorem1 => "theorem1",
            Self::Theorem2 => "theorem2",
            Self::Theorem3 => "theorem3",
            Self::Crosschecks => "crosschecks",
            Self::Fredholm => "fredholm",
            Self::IdPiiSolve => "idpii-solve",
            Self::EqMeasure => "eqmeasure",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Shared stamp for every record of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunContext {
    pub config_hash: String,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`, or 0 so that reruns are byte-identical.
    pub timestamp: i64,
}

impl RunContext {
    pub fn new(cfg: &LabConfig) -> Self {
        let timestamp = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(0);
        Self {
            config_hash: cfg.hash(),
            timestamp,
        }
    }
}

/// Worker count: the environment override if set, otherwise the argument.
pub fn resolve_workers(configured: usize) -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w >= 1)
        .unwrap_or(configured)
        .max(1)
}

/// Runs a study on a dedicated thread pool and returns sorted, stamped records.
pub fn run_study(study: Study, cfg: &LabConfig, workers: usize, ctx: &RunContext) -> Vec<ResultRecord> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    let mut records = pool.install(|| match study {
        Study::Theorem1 => studies::run_theorem1(cfg),
        Study::Theorem2 => studies::run_theorem2(cfg),
        Study::Theorem3 => studies::run_theorem3(cfg),
        Study::Crosschecks => studies::run_crosschecks(cfg),
        Study::Fredholm => studies::run_fredholm(cfg),
        Study::IdPiiSolve => studies::run_idpii(cfg),
        Study::EqMeasure => studies::run_eqmeasure(cfg),
    });
    for r in &mut records {
        r.config_hash = ctx.config_hash.clone();
        r.timestamp = ctx.timestamp;
    }
    sort_records(&mut records);
    records
}

/// Process exit status for a finished run: 4 if any point errored, 1 if any check failed.
pub fn exit_status(records: &[ResultRecord]) -> i32 {
    if records.iter().any(|r| r.verdict == Verdict::Error) {
        4
    } else if records.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else {
        0
    }
}
