//! Benchmark domains, instance generators, the experiment runner and
//! result summaries.

mod domains;
mod generators;
mod runner;
mod summary;

pub use domains::{bundle, DomainBundle, BUNDLES};
pub use generators::{
    random_towers, BlocksworldGenerator, DepotsGenerator, GeneratedInstance, GeneratorRegistry,
    InstanceGenerator, LogisticsGenerator,
};

pub use runner::{
    read_records, run_experiment, ConfigError, ExperimentConfig, ResultRecord, RESULTS_FILE,
};
pub use summary::{
    from_csv, summarize, to_csv, BucketSummary, CsvError, Reduction, Summary, CSV_HEADER,
};
