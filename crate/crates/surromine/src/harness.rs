//! Experiment orchestration and file outputs.

pub mod csv;
pub mod svg;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::explain::{mean_vectors, probe_report, ProbeReport};
use crate::ga::{run_ga, EvalSchedule, GaConfig};
use crate::problems::cnf::CnfFormula;
use crate::problems::Problem;
use crate::rng::RngStream;
use crate::surrogate::{train_svr, SvrHyperParams, SvrTrainer};

/// Which archived generations feed the surrogate training set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingRange {
    /// Generation 0 only.
    First,
    /// Every generation of the run.
    All,
    /// A closed generation interval.
    Range { lo: u32, hi: u32 },
}

impl TrainingRange {
    /// Concrete generation bounds for a run of `max_generations`.
    pub fn bounds(&self, max_generations: u32) -> (u32, u32) {
        match *self {
            TrainingRange::First => (0, 0),
            TrainingRange::All => (0, max_generations.saturating_sub(1)),
            TrainingRange::Range { lo, hi } => (lo, hi),
        }
    }
}

impl fmt::Display for TrainingRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            TrainingRange::First => write!(f, "first"),
            TrainingRange::All => write!(f, "all"),
            TrainingRange::Range { lo, hi } => write!(f, "{lo}..{hi}"),
        }
    }
}

impl FromStr for TrainingRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "first" => Ok(TrainingRange::First),
            "all" => Ok(TrainingRange::All),
            other => {
                let (lo, hi) = other.split_once("..").ok_or_else(|| {
                    Error::invalid(format!(
                        "training range must be 'first', 'all', or 'LO..HI', got {other:?}"
                    ))
                })?;
                let lo = lo.trim().parse().map_err(|_| {
                    Error::invalid(format!("bad lower generation bound {lo:?}"))
                })?;
                let hi = hi.trim().parse().map_err(|_| {
                    Error::invalid(format!("bad upper generation bound {hi:?}"))
                })?;
                if lo > hi {
                    return Err(Error::invalid(format!(
                        "training range lower bound {lo} exceeds upper bound {hi}"
                    )));
                }
                Ok(TrainingRange::Range { lo, hi })
            }
        }
    }
}

/// Benchmark family selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    Checkerboard1d,
    Checkerboard2d,
    Trap5,
    Maxsat,
}

/// Problem selection for an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProblemConfig {
    pub kind: ProblemKind,
    /// Number of variables. Ignored when a formula file supplies it.
    pub n: usize,
    /// DIMACS file to load for MAXSAT; when absent, a random 3-SAT
    /// instance is generated from the experiment's base seed.
    pub cnf_path: Option<PathBuf>,
    /// Clause count for generated 3-SAT instances.
    pub cnf_clauses: usize,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            kind: ProblemKind::Checkerboard1d,
            n: 100,
            cnf_path: None,
            cnf_clauses: 427,
        }
    }
}

/// Salt keeping the instance-generation stream disjoint from the search
/// stream seeded with the same value.
const CNF_STREAM_SALT: u64 = 0x9E37_79B9_7F4A_7C15;

/// The random 3-SAT instance a maxsat experiment with `base_seed`
/// generates when no DIMACS file is given.
pub fn generated_3sat(base_seed: u64, num_vars: usize, num_clauses: usize) -> Result<CnfFormula> {
    let mut rng = RngStream::new(base_seed ^ CNF_STREAM_SALT);
    CnfFormula::random_3sat(&mut rng, num_vars, num_clauses)
}

impl ProblemConfig {
    /// Build the concrete problem. `base_seed` only matters for
    /// generated MAXSAT instances, which depend on it deterministically.
    pub fn resolve(&self, base_seed: u64) -> Result<Problem> {
        match self.kind {
            ProblemKind::Checkerboard1d => Problem::checkerboard_1d(self.n),
            ProblemKind::Checkerboard2d => Problem::checkerboard_2d(self.n),
            ProblemKind::Trap5 => Problem::trap5(self.n),
            ProblemKind::Maxsat => {
                let formula = match &self.cnf_path {
                    Some(path) => {
                        let text = fs::read_to_string(path)
                            .map_err(|e| Error::io(path.clone(), e))?;
                        CnfFormula::parse_dimacs(&text)?
                    }
                    None => generated_3sat(base_seed, self.n, self.cnf_clauses)?,
                };
                Ok(Problem::maxsat(formula))
            }
        }
    }
}

/// Full description of one explanation experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub ga: GaConfig,
    pub training_range: TrainingRange,
    /// Independent GA runs; run `r` uses seed `ga.seed + r`.
    pub repeats: u32,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            problem: ProblemConfig::default(),
            ga: GaConfig::default(),
            training_range: TrainingRange::All,
            repeats: 1,
            out_dir: PathBuf::from("surromine-out"),
        }
    }
}

/// Per-run facts recorded in the summary document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: u32,
    pub seed: u64,
    pub best_fitness: f64,
    pub archive_rows: usize,
    pub training_rows: usize,
    pub support_vectors: usize,
    pub converged: bool,
    pub solver_iterations: usize,
    pub probe_file: String,
    pub model_file: String,
    pub chart_file: String,
}

/// Top-level summary document written as JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SummaryDoc {
    problem: String,
    training_range: String,
    repeats: u32,
    config: ExperimentConfig,
    runs: Vec<RunSummary>,
}

/// Everything an experiment produced.
#[derive(Debug)]
pub struct ExperimentOutput {
    pub problem_label: String,
    pub summaries: Vec<RunSummary>,
    /// Per-run probe reports, in run order.
    pub reports: Vec<ProbeReport>,
    pub mean_importance: Vec<f64>,
    /// Every file written, in creation order.
    pub files: Vec<PathBuf>,
}

/// Write `content` to `path` atomically: the data lands under a
/// temporary name first and is renamed into place, so readers never see
/// a half-written file.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let file_name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("path {} has no file name", path.display())))?;
    let tmp = path.with_file_name(format!("{}.tmp", file_name.to_string_lossy()));
    fs::write(&tmp, content).map_err(|e| Error::io(tmp.clone(), e))?;
    if let Err(e) = fs::rename(&tmp, path) {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path.to_path_buf(), e));
    }
    Ok(())
}

/// Run the full pipeline: GA runs, surrogate training, probing, and all
/// file outputs (per-run probe CSV, model text, and chart; aggregate
/// mean CSV and chart; a JSON summary).
///
/// Fails atomically with respect to its own outputs: any files already
/// written are removed before the error is returned.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let mut written: Vec<PathBuf> = Vec::new();
    match run_experiment_inner(config, &mut written) {
        Ok(out) => Ok(out),
        Err(e) => {
            for path in written.iter().rev() {
                let _ = fs::remove_file(path);
            }
            Err(e)
        }
    }
}

fn run_experiment_inner(
    config: &ExperimentConfig,
    written: &mut Vec<PathBuf>,
) -> Result<ExperimentOutput> {
    config.ga.validate()?;
    if config.repeats == 0 {
        return Err(Error::config("an experiment needs at least one repeat"));
    }
    let problem = config.problem.resolve(config.ga.seed)?;
    if problem.genome_length() != config.ga.genome_length {
        return Err(Error::config(format!(
            "problem needs {} variables but the search is configured for {}",
            problem.genome_length(),
            config.ga.genome_length
        )));
    }
    let (lo, hi) = config.training_range.bounds(config.ga.max_generations);
    if lo >= config.ga.max_generations {
        return Err(Error::config(format!(
            "training range {} starts past the last generation {}",
            config.training_range,
            config.ga.max_generations - 1
        )));
    }
    fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(config.out_dir.clone(), e))?;

    let emit = |name: String, content: &str, written: &mut Vec<PathBuf>| -> Result<()> {
        let path = config.out_dir.join(name);
        write_atomic(&path, content)?;
        written.push(path);
        Ok(())
    };

    let trainer = SvrTrainer::default();
    let mut summaries = Vec::new();
    let mut reports = Vec::new();
    for r in 0..config.repeats {
        let ga = GaConfig {
            seed: config.ga.seed.wrapping_add(r as u64),
            ..config.ga.clone()
        };
        let ga_trainer = match ga.eval_schedule {
            EvalSchedule::TrueOnly => None,
            EvalSchedule::Alternate { .. } => Some(&trainer as &dyn crate::ga::SurrogateTrainer),
        };
        let result = run_ga(&problem, &ga, ga_trainer)?;
        let (genomes, fitnesses) = result.archive.training_view(lo, hi)?;
        let fit = train_svr(&genomes, &fitnesses, &SvrHyperParams::default())?;
        let report = probe_report(result.best.genome(), &fit.model)?;

        let probe_file = format!("probe_run{r:03}.csv");
        let model_file = format!("model_run{r:03}.txt");
        let chart_file = format!("chart_run{r:03}.svg");
        emit(probe_file.clone(), &csv::probe_csv_string(&report), written)?;
        emit(model_file.clone(), &fit.model.to_text(), written)?;
        let title = format!(
            "{problem} seed {} importance, trained on {} generations",
            ga.seed, config.training_range
        );
        emit(
            chart_file.clone(),
            &svg::svg_barchart(&report.importance_values(), &title)?,
            written,
        )?;

        summaries.push(RunSummary {
            run: r,
            seed: ga.seed,
            best_fitness: result.best.fitness().unwrap_or(f64::NAN),
            archive_rows: result.archive.len(),
            training_rows: genomes.len(),
            support_vectors: fit.model.support_vector_count(),
            converged: fit.converged,
            solver_iterations: fit.iterations,
            probe_file,
            model_file,
            chart_file,
        });
        reports.push(report);
    }

    let importance_rows: Vec<Vec<f64>> =
        reports.iter().map(|r| r.importance_values()).collect();
    let mean = mean_vectors(&importance_rows)?;
    emit("mean_importance.csv".into(), &csv::mean_csv_string(&mean)?, written)?;
    let mean_title = format!(
        "{problem} mean importance over {} runs, trained on {} generations",
        config.repeats, config.training_range
    );
    emit(
        "mean_importance.svg".into(),
        &svg::svg_barchart(&mean, &mean_title)?,
        written,
    )?;

    let doc = SummaryDoc {
        problem: problem.to_string(),
        training_range: config.training_range.to_string(),
        repeats: config.repeats,
        config: config.clone(),
        runs: summaries.clone(),
    };
    let json = serde_json::to_string_pretty(&doc)
        .map_err(|e| Error::config(format!("summary serialization failed: {e}")))?;
    emit("summary.json".into(), &format!("{json}\n"), written)?;

    Ok(ExperimentOutput {
        problem_label: problem.to_string(),
        summaries,
        reports,
        mean_importance: mean,
        files: written.clone(),
    })
}
