//! Command-line interface.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ga::{run_ga, EvalSchedule, GaConfig, SurrogateTrainer};
use crate::harness::{
    self, csv, svg, write_atomic, ExperimentConfig, ProblemConfig, ProblemKind, TrainingRange,
};
use crate::surrogate::SvrTrainer;

/// Binary GA with a mineable fitness surrogate.
#[derive(Debug, Parser)]
#[command(name = "surromine", version, about, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the genetic algorithm alone and write a JSON run report.
    Run(RunArgs),
    /// Run the full pipeline: GA repeats, surrogate training, probing,
    /// and CSV/SVG/summary outputs.
    Explain(ExplainArgs),
    /// Render a probe CSV as an SVG bar chart.
    Plot(PlotArgs),
    /// Write a seed-deterministic random 3-SAT instance as DIMACS.
    GenCnf(GenCnfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemChoice {
    Checkerboard1d,
    Checkerboard2d,
    Trap5,
    Maxsat,
}

impl From<ProblemChoice> for ProblemKind {
    fn from(choice: ProblemChoice) -> Self {
        match choice {
            ProblemChoice::Checkerboard1d => ProblemKind::Checkerboard1d,
            ProblemChoice::Checkerboard2d => ProblemKind::Checkerboard2d,
            ProblemChoice::Trap5 => ProblemKind::Trap5,
            ProblemChoice::Maxsat => ProblemKind::Maxsat,
        }
    }
}

/// Problem flags shared by `run` and `explain`. Every flag is optional
/// so values from a config file survive unless explicitly overridden.
#[derive(Debug, Args)]
struct ProblemArgs {
    /// Benchmark to optimize [default: checkerboard1d]
    #[arg(long, value_enum)]
    problem: Option<ProblemChoice>,

    /// Number of variables [default: 100]
    #[arg(long)]
    n: Option<usize>,

    /// DIMACS file for maxsat; omitted means a generated instance
    #[arg(long, value_name = "PATH")]
    cnf: Option<PathBuf>,

    /// Clause count for generated 3-SAT instances [default: 427]
    #[arg(long, value_name = "COUNT")]
    gen_cnf_clauses: Option<usize>,
}

impl ProblemArgs {
    fn apply(&self, config: &mut ProblemConfig) {
        if let Some(choice) = self.problem {
            config.kind = choice.into();
        }
        if let Some(n) = self.n {
            config.n = n;
        }
        if let Some(path) = &self.cnf {
            config.cnf_path = Some(path.clone());
        }
        if let Some(clauses) = self.gen_cnf_clauses {
            config.cnf_clauses = clauses;
        }
    }
}

/// Search flags shared by `run` and `explain`.
#[derive(Debug, Args)]
struct GaArgs {
    /// Population size [default: 100]
    #[arg(long)]
    pop: Option<usize>,

    /// Number of generations, the initial one included [default: 100]
    #[arg(long)]
    gens: Option<u32>,

    /// Per-bit mutation probability [default: 0.01]
    #[arg(long)]
    mut_rate: Option<f64>,

    /// Per-pair crossover probability [default: 0.95]
    #[arg(long)]
    xover_rate: Option<f64>,

    /// Tournament size [default: 5]
    #[arg(long)]
    tournament: Option<usize>,

    /// Members copied unchanged into the next generation [default: 1]
    #[arg(long)]
    elites: Option<usize>,

    /// Base random seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,

    /// Score on the surrogate except every PERIOD-th generation, which
    /// uses the true objective and retrains [default: true evaluation
    /// every generation]
    #[arg(long, value_name = "PERIOD")]
    alternate_period: Option<u32>,
}

impl GaArgs {
    fn apply(&self, config: &mut GaConfig) {
        if let Some(pop) = self.pop {
            config.pop_size = pop;
        }
        if let Some(gens) = self.gens {
            config.max_generations = gens;
        }
        if let Some(rate) = self.mut_rate {
            config.mutation_rate = rate;
        }
        if let Some(rate) = self.xover_rate {
            config.crossover_rate = rate;
        }
        if let Some(size) = self.tournament {
            config.tournament_size = size;
        }
        if let Some(elites) = self.elites {
            config.elite_count = elites;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(period) = self.alternate_period {
            config.eval_schedule = EvalSchedule::Alternate { period };
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Output JSON file for the run report
    #[arg(long, default_value = "ga_run.json")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExplainArgs {
    /// JSON experiment config; flags given here override its fields
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Archived generations to train on: first, all, or LO..HI
    /// [default: all]
    #[arg(long, value_name = "RANGE")]
    train: Option<TrainingRange>,
    /// Independent GA runs; run r uses seed + r [default: 1]
    #[arg(long)]
    repeats: Option<u32>,
    /// Output directory [default: surromine-out]
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    /// Probe CSV produced by the explain command
    input: PathBuf,
    /// Output SVG path [default: the input with an .svg extension]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Chart title [default: the input file name]
    #[arg(long)]
    title: Option<String>,
}

#[derive(Debug, Args)]
struct GenCnfArgs {
    /// Number of variables [default: 100]
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Number of clauses [default: 427]
    #[arg(long, default_value_t = 427)]
    gen_cnf_clauses: usize,
    /// Random seed; a maxsat run with the same seed generates the same
    /// instance [default: 0]
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output DIMACS file
    #[arg(long, default_value = "random_3sat.cnf")]
    out: PathBuf,
}

/// Entry point: parse arguments, dispatch, and map errors to exit
/// codes. Usage and validation problems exit 2, runtime failures 1.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_)
        | Error::Config(_)
        | Error::Parse { .. }
        | Error::EmptyTrainingSet { .. }
        | Error::DegenerateData(_) => 2,
        _ => 1,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Run(args) => cmd_run(args),
        Command::Explain(args) => cmd_explain(args),
        Command::Plot(args) => cmd_plot(args),
        Command::GenCnf(args) => cmd_gen_cnf(args),
    }
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent.to_path_buf(), e))?;
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct RunReport {
    problem: String,
    seed: u64,
    optimum: f64,
    best_fitness: f64,
    best_genome: String,
    archive_rows: usize,
    best_fitness_history: Vec<f64>,
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let mut problem_config = ProblemConfig::default();
    args.problem.apply(&mut problem_config);
    let mut ga = GaConfig::default();
    args.ga.apply(&mut ga);

    let problem = problem_config.resolve(ga.seed)?;
    ga.genome_length = problem.genome_length();
    ga.validate()?;

    let trainer = SvrTrainer::default();
    let trainer_ref = match ga.eval_schedule {
        EvalSchedule::TrueOnly => None,
        EvalSchedule::Alternate { .. } => Some(&trainer as &dyn SurrogateTrainer),
    };
    let result = run_ga(&problem, &ga, trainer_ref)?;

    let report = RunReport {
        problem: problem.to_string(),
        seed: ga.seed,
        optimum: problem.optimum(),
        best_fitness: result.best.fitness().unwrap_or(f64::NAN),
        best_genome: result.best.genome().to_string(),
        archive_rows: result.archive.len(),
        best_fitness_history: result.best_fitness_history,
    };
    let json = serde_json::to_string_pretty(&report)
        .map_err(|e| Error::config(format!("report serialization failed: {e}")))?;
    ensure_parent(&args.out)?;
    write_atomic(&args.out, &format!("{json}\n"))?;

    println!(
        "{}: best fitness {} of {} after {} true evaluations",
        report.problem, report.best_fitness, report.optimum, report.archive_rows
    );
    println!("wrote {}", args.out.display());
    Ok(())
}

fn cmd_explain(args: ExplainArgs) -> Result<()> {
    let mut config = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::io(path.clone(), e))?;
            serde_json::from_str::<ExperimentConfig>(&text).map_err(|e| {
                Error::config(format!("bad config file {}: {e}", path.display()))
            })?
        }
        None => ExperimentConfig::default(),
    };
    args.problem.apply(&mut config.problem);
    args.ga.apply(&mut config.ga);
    if let Some(train) = args.train {
        config.training_range = train;
    }
    if let Some(repeats) = args.repeats {
        config.repeats = repeats;
    }
    if let Some(out) = args.out {
        config.out_dir = out;
    }

    // The genome length always follows the problem; maxsat instances
    // can only be sized after the formula is known.
    let problem = config.problem.resolve(config.ga.seed)?;
    config.ga.genome_length = problem.genome_length();

    let output = harness::run_experiment(&config)?;
    println!(
        "{}, trained on {} generations",
        output.problem_label, config.training_range
    );
    for s in &output.summaries {
        let budget = if s.converged { "" } else { ", solver budget hit" };
        println!(
            "run {:03} seed {}: best {}, {} training rows, {} support vectors{}",
            s.run, s.seed, s.best_fitness, s.training_rows, s.support_vectors, budget
        );
    }
    println!(
        "wrote {} files to {}",
        output.files.len(),
        config.out_dir.display()
    );
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input).map_err(|e| Error::io(args.input.clone(), e))?;
    let report = csv::parse_probe_csv(&text)?;
    let title = match &args.title {
        Some(title) => title.clone(),
        None => args
            .input
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "probe importance".to_string()),
    };
    let chart = svg::svg_barchart(&report.importance_values(), &title)?;
    let out = args
        .out
        .unwrap_or_else(|| args.input.with_extension("svg"));
    ensure_parent(&out)?;
    write_atomic(&out, &chart)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_gen_cnf(args: GenCnfArgs) -> Result<()> {
    let formula = harness::generated_3sat(args.seed, args.n, args.gen_cnf_clauses)?;
    ensure_parent(&args.out)?;
    write_atomic(&args.out, &formula.to_dimacs())?;
    println!(
        "wrote {} ({} variables, {} clauses)",
        args.out.display(),
        formula.num_vars(),
        formula.clauses().len()
    );
    Ok(())
}
