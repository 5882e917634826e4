//! Generational genetic algorithm with optional surrogate evaluations.

use serde::{Deserialize, Serialize};

use crate::archive::EvaluationArchive;
use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::population::{FitnessSource, Individual, Population};
use crate::problems::Problem;
use crate::rng::RngStream;

/// Which generations are scored by the true objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalSchedule {
    /// Every generation uses the true objective.
    TrueOnly,
    /// Generations whose index is divisible by `period` use the true
    /// objective (generation 0 always does); the rest use the most
    /// recently trained surrogate.
    Alternate { period: u32 },
}

/// GA run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaConfig {
    pub pop_size: usize,
    pub genome_length: usize,
    pub max_generations: u32,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub tournament_size: usize,
    pub elite_count: usize,
    pub seed: u64,
    pub eval_schedule: EvalSchedule,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            pop_size: 100,
            genome_length: 100,
            max_generations: 100,
            mutation_rate: 0.01,
            crossover_rate: 0.95,
            tournament_size: 5,
            elite_count: 1,
            seed: 0,
            eval_schedule: EvalSchedule::TrueOnly,
        }
    }
}

impl GaConfig {
    /// Check every field for usability.
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::config(format!(
                "population size must be at least 2, got {}",
                self.pop_size
            )));
        }
        if self.genome_length == 0 {
            return Err(Error::config("genome length must be at least 1"));
        }
        if self.max_generations == 0 {
            return Err(Error::config("generation count must be at least 1"));
        }
        for (name, rate) in [
            ("mutation rate", self.mutation_rate),
            ("crossover rate", self.crossover_rate),
        ] {
            if !(rate.is_finite() && (0.0..=1.0).contains(&rate)) {
                return Err(Error::config(format!("{name} must lie in [0, 1], got {rate}")));
            }
        }
        if self.tournament_size < 2 || self.tournament_size > self.pop_size {
            return Err(Error::config(format!(
                "tournament size must lie in [2, pop_size], got {}",
                self.tournament_size
            )));
        }
        if self.elite_count >= self.pop_size {
            return Err(Error::config(format!(
                "elite count {} must be smaller than population size {}",
                self.elite_count, self.pop_size
            )));
        }
        if let EvalSchedule::Alternate { period } = self.eval_schedule {
            if period == 0 {
                return Err(Error::config("alternation period must be at least 1"));
            }
        }
        Ok(())
    }
}

/// Predicts fitness for unseen genomes.
pub trait SurrogatePredictor {
    fn predict_fitness(&self, genome: &Bitstring) -> Result<f64>;
}

impl<F: Fn(&Bitstring) -> Result<f64>> SurrogatePredictor for F {
    fn predict_fitness(&self, genome: &Bitstring) -> Result<f64> {
        self(genome)
    }
}

/// Fits a predictor to archived evaluations.
pub trait SurrogateTrainer {
    fn train_predictor(
        &self,
        genomes: &[Bitstring],
        fitnesses: &[f64],
    ) -> Result<Box<dyn SurrogatePredictor>>;
}

/// Pick one parent by tournament: draw `size` members uniformly with
/// replacement and return the fittest draw; ties are broken by a uniform
/// choice among the tied best.
pub fn tournament_select<'a>(
    pop: &'a Population,
    size: usize,
    rng: &mut RngStream,
) -> Result<&'a Individual> {
    if size < 2 || size > pop.len() {
        return Err(Error::invalid(format!(
            "tournament size must lie in [2, {}], got {size}",
            pop.len()
        )));
    }
    let mut draws = Vec::with_capacity(size);
    for _ in 0..size {
        draws.push(rng.below(pop.len() as u64) as usize);
    }
    let mut best = f64::NEG_INFINITY;
    for &d in &draws {
        let f = pop.members()[d].fitness_or_err(d)?;
        if f > best {
            best = f;
        }
    }
    let tied: Vec<usize> = draws
        .iter()
        .copied()
        .filter(|&d| pop.members()[d].fitness() == Some(best))
        .collect();
    let winner = if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.below(tied.len() as u64) as usize]
    };
    Ok(&pop.members()[winner])
}

/// Uniform crossover. With probability `1 - crossover_rate` the parents
/// are copied through unchanged; otherwise each position of the first
/// child takes parent `a`'s bit with probability one half and the second
/// child takes the other parent's bit.
pub fn uniform_crossover(
    a: &Bitstring,
    b: &Bitstring,
    crossover_rate: f64,
    rng: &mut RngStream,
) -> Result<(Bitstring, Bitstring)> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "crossover parents must share a length, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if !(crossover_rate.is_finite() && (0.0..=1.0).contains(&crossover_rate)) {
        return Err(Error::invalid(format!(
            "crossover rate must lie in [0, 1], got {crossover_rate}"
        )));
    }
    if !rng.bernoulli(crossover_rate) {
        return Ok((a.clone(), b.clone()));
    }
    let mut c1 = a.clone();
    let mut c2 = b.clone();
    for i in 0..a.len() {
        if !rng.next_bool() {
            c1.set(i, b.get(i));
            c2.set(i, a.get(i));
        }
    }
    Ok((c1, c2))
}

/// Flip each bit independently with probability `rate`.
pub fn bitflip_mutate(x: &Bitstring, rate: f64, rng: &mut RngStream) -> Result<Bitstring> {
    if !(rate.is_finite() && (0.0..=1.0).contains(&rate)) {
        return Err(Error::invalid(format!(
            "mutation rate must lie in [0, 1], got {rate}"
        )));
    }
    let mut out = x.clone();
    for i in 0..x.len() {
        if rng.bernoulli(rate) {
            out.flip(i);
        }
    }
    Ok(out)
}

/// Outcome of a GA run.
#[derive(Debug)]
pub struct GaResult {
    /// Best individual ever scored by the true objective.
    pub best: Individual,
    /// Every true evaluation performed during the run.
    pub archive: EvaluationArchive,
    /// Best fitness present in the population after each generation's
    /// evaluation step (surrogate generations report predicted values).
    pub best_fitness_history: Vec<f64>,
}

/// Run the GA to completion. See [`run_ga_observed`] for the loop itself.
pub fn run_ga(
    problem: &Problem,
    config: &GaConfig,
    trainer: Option<&dyn SurrogateTrainer>,
) -> Result<GaResult> {
    run_ga_observed(problem, config, trainer, |_| {})
}

/// Run the GA, invoking `observer` on each population right after its
/// evaluation step.
///
/// The loop per generation: evaluate members lacking a cached fitness
/// (true generations also append to the archive and retrain the
/// surrogate on the full archive), then breed the next population from
/// `elite_count` carried-over best members plus tournament-selected,
/// crossed-over, mutated offspring. Carried elites keep their cached
/// fitness and are not re-evaluated or re-archived.
pub fn run_ga_observed(
    problem: &Problem,
    config: &GaConfig,
    trainer: Option<&dyn SurrogateTrainer>,
    mut observer: impl FnMut(&Population),
) -> Result<GaResult> {
    config.validate()?;
    if problem.genome_length() != config.genome_length {
        return Err(Error::config(format!(
            "problem expects {} variables but config says {}",
            problem.genome_length(),
            config.genome_length
        )));
    }
    let uses_surrogate = matches!(config.eval_schedule, EvalSchedule::Alternate { .. });
    if uses_surrogate && trainer.is_none() {
        return Err(Error::config(
            "alternating evaluation schedule requires a surrogate trainer",
        ));
    }

    let mut rng = RngStream::new(config.seed);
    let mut archive = EvaluationArchive::new();
    let mut model: Option<Box<dyn SurrogatePredictor>> = None;
    let mut best: Option<Individual> = None;
    let mut history = Vec::with_capacity(config.max_generations as usize);

    let mut members = Vec::with_capacity(config.pop_size);
    for _ in 0..config.pop_size {
        members.push(Individual::unevaluated(Bitstring::random(
            &mut rng,
            config.genome_length,
        )?));
    }
    let mut pop = Population::new(members, 0)?;

    for gen in 0..config.max_generations {
        let true_gen = match config.eval_schedule {
            EvalSchedule::TrueOnly => true,
            EvalSchedule::Alternate { period } => gen % period == 0,
        };

        for member in pop.members_mut() {
            if member.is_evaluated() {
                continue;
            }
            if true_gen {
                let f = problem.evaluate(member.genome())?;
                member.set_fitness(f, FitnessSource::True);
                archive.append(member.genome().clone(), f, gen);
            } else {
                let predictor = model.as_deref().ok_or_else(|| {
                    Error::config("surrogate generation reached before any model was trained")
                })?;
                let f = predictor.predict_fitness(member.genome())?;
                member.set_fitness(f, FitnessSource::Surrogate);
            }
        }

        if true_gen {
            if let Some(tr) = trainer {
                let (genomes, fitnesses) = archive.training_view(0, gen)?;
                model = Some(tr.train_predictor(&genomes, &fitnesses)?);
            }
        }

        for (i, member) in pop.members().iter().enumerate() {
            let f = member.fitness_or_err(i)?;
            if member.fitness_source() == Some(FitnessSource::True)
                && best.as_ref().is_none_or(|b| f > b.fitness().unwrap_or(f64::NEG_INFINITY))
            {
                best = Some(member.clone());
            }
            if history.len() == gen as usize {
                history.push(f);
            } else if f > history[gen as usize] {
                history[gen as usize] = f;
            }
        }

        observer(&pop);

        if gen + 1 == config.max_generations {
            break;
        }

        let order = pop.ranked_indices()?;
        let mut next = Vec::with_capacity(config.pop_size);
        for &i in order.iter().take(config.elite_count) {
            next.push(pop.members()[i].clone());
        }
        while next.len() < config.pop_size {
            let pa = tournament_select(&pop, config.tournament_size, &mut rng)?
                .genome()
                .clone();
            let pb = tournament_select(&pop, config.tournament_size, &mut rng)?
                .genome()
                .clone();
            let (c1, c2) = uniform_crossover(&pa, &pb, config.crossover_rate, &mut rng)?;
            next.push(Individual::unevaluated(bitflip_mutate(
                &c1,
                config.mutation_rate,
                &mut rng,
            )?));
            if next.len() < config.pop_size {
                next.push(Individual::unevaluated(bitflip_mutate(
                    &c2,
                    config.mutation_rate,
                    &mut rng,
                )?));
            }
        }
        pop = Population::new(next, gen + 1)?;
    }

    let best = best.ok_or_else(|| {
        Error::config("no true evaluation ever happened; cannot report a best individual")
    })?;
    Ok(GaResult {
        best,
        archive,
        best_fitness_history: history,
    })
}
