//! Individuals and generations.

use serde::{Deserialize, Serialize};

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};

/// Where a cached fitness value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitnessSource {
    /// Evaluated by the objective function itself.
    True,
    /// Predicted by a trained surrogate model.
    Surrogate,
}

/// A cached fitness value together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub source: FitnessSource,
}

/// One candidate solution: a genome plus an optional cached evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    genome: Bitstring,
    evaluation: Option<Evaluation>,
}

impl Individual {
    /// Fresh individual with no fitness assigned yet.
    pub fn unevaluated(genome: Bitstring) -> Self {
        Individual {
            genome,
            evaluation: None,
        }
    }

    /// Individual carrying an already-known fitness.
    pub fn evaluated(genome: Bitstring, value: f64, source: FitnessSource) -> Self {
        Individual {
            genome,
            evaluation: Some(Evaluation { value, source }),
        }
    }

    pub fn genome(&self) -> &Bitstring {
        &self.genome
    }

    /// Cached fitness value, if one has been assigned.
    pub fn fitness(&self) -> Option<f64> {
        self.evaluation.map(|e| e.value)
    }

    /// Provenance of the cached fitness, if one has been assigned.
    pub fn fitness_source(&self) -> Option<FitnessSource> {
        self.evaluation.map(|e| e.source)
    }

    pub fn is_evaluated(&self) -> bool {
        self.evaluation.is_some()
    }

    /// Assign a fitness value, replacing any previous one.
    pub fn set_fitness(&mut self, value: f64, source: FitnessSource) {
        self.evaluation = Some(Evaluation { value, source });
    }

    /// Fitness value or an error naming the member's position.
    pub fn fitness_or_err(&self, index: usize) -> Result<f64> {
        self.fitness().ok_or(Error::UnsetFitness { index })
    }
}

/// An ordered generation of individuals with a shared genome length.
#[derive(Debug, Clone)]
pub struct Population {
    members: Vec<Individual>,
    generation: u32,
}

impl Population {
    /// Build a population, checking that it is non-empty and that all
    /// genomes share one length.
    pub fn new(members: Vec<Individual>, generation: u32) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::invalid("population must have at least one member"));
        }
        let len = members[0].genome().len();
        if let Some(pos) = members.iter().position(|m| m.genome().len() != len) {
            return Err(Error::invalid(format!(
                "population member {pos} has genome length {}, expected {len}",
                members[pos].genome().len()
            )));
        }
        Ok(Population {
            members,
            generation,
        })
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [Individual] {
        &mut self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Zero-based index of the generation this population belongs to.
    pub fn generation(&self) -> u32 {
        self.generation
    }

    /// Genome length shared by every member.
    pub fn genome_length(&self) -> usize {
        self.members[0].genome().len()
    }

    /// Member indices ordered best-first: descending fitness, ties broken
    /// by ascending position. Errors if any member lacks a fitness.
    pub fn ranked_indices(&self) -> Result<Vec<usize>> {
        let mut fitness = Vec::with_capacity(self.members.len());
        for (i, m) in self.members.iter().enumerate() {
            fitness.push(m.fitness_or_err(i)?);
        }
        let mut order: Vec<usize> = (0..self.members.len()).collect();
        order.sort_by(|&i, &j| fitness[j].total_cmp(&fitness[i]).then(i.cmp(&j)));
        Ok(order)
    }
}
