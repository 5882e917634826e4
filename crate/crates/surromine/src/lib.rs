//! Binary genetic algorithm with a mineable fitness surrogate.
//!
//! The crate runs a generational GA on classic bitstring benchmarks,
//! archives every true objective evaluation, trains an RBF-kernel
//! support vector regressor on the archive, and probes that model one
//! bit at a time to produce signed per-variable importance scores.

pub mod archive;
pub mod bitstring;
pub mod cli;
pub mod error;
pub mod explain;
pub mod ga;
pub mod harness;
pub mod population;
pub mod problems;
pub mod rng;
pub mod surrogate;

pub use archive::{ArchiveRecord, EvaluationArchive};
pub use bitstring::Bitstring;
pub use error::{Error, Result};
pub use explain::{ImportanceVector, ProbeReport, ProbeRow};
pub use ga::{EvalSchedule, GaConfig, GaResult, SurrogatePredictor, SurrogateTrainer};
pub use harness::{
    ExperimentConfig, ExperimentOutput, ProblemConfig, ProblemKind, RunSummary, TrainingRange,
};
pub use population::{FitnessSource, Individual, Population};
pub use problems::Problem;
pub use rng::RngStream;
pub use surrogate::{SvrFit, SvrHyperParams, SvrModel, SvrTrainer};
