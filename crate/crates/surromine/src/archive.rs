//! Append-only log of true objective evaluations.

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};

/// One archived true evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ArchiveRecord {
    pub genome: Bitstring,
    pub fitness: f64,
    /// Generation in which the evaluation happened (zero-based).
    pub generation: u32,
}

/// Every true evaluation the search has ever performed, in insertion
/// order. Records are never modified or removed, so the archive doubles
/// as the training-set source for surrogate models.
#[derive(Debug, Clone, Default)]
pub struct EvaluationArchive {
    records: Vec<ArchiveRecord>,
}

impl EvaluationArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append one evaluation.
    pub fn append(&mut self, genome: Bitstring, fitness: f64, generation: u32) {
        self.records.push(ArchiveRecord {
            genome,
            fitness,
            generation,
        });
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[ArchiveRecord] {
        &self.records
    }

    /// Genomes and fitness values of all records whose generation lies in
    /// `[gen_lo, gen_hi]`, in insertion order.
    pub fn training_view(&self, gen_lo: u32, gen_hi: u32) -> Result<(Vec<Bitstring>, Vec<f64>)> {
        if gen_lo > gen_hi {
            return Err(Error::invalid(format!(
                "generation range lower bound {gen_lo} exceeds upper bound {gen_hi}"
            )));
        }
        let mut genomes = Vec::new();
        let mut fitnesses = Vec::new();
        for rec in &self.records {
            if (gen_lo..=gen_hi).contains(&rec.generation) {
                genomes.push(rec.genome.clone());
                fitnesses.push(rec.fitness);
            }
        }
        if genomes.is_empty() {
            return Err(Error::EmptyTrainingSet {
                lo: gen_lo,
                hi: gen_hi,
            });
        }
        Ok((genomes, fitnesses))
    }
}
