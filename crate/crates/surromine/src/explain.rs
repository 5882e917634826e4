//! Mining a trained model for per-variable importance.

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::ga::SurrogatePredictor;

/// Signed per-variable importance scores for one probed solution.
///
/// The score of variable `i` is the absolute prediction shift caused by
/// flipping bit `i` of the seed, negated when the seed holds a 1 there.
/// Variables the model ignores score (signed) zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportanceVector {
    values: Vec<f64>,
    baseline: f64,
    seed: Bitstring,
}

impl ImportanceVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Model prediction for the unmodified seed.
    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    pub fn seed(&self) -> &Bitstring {
        &self.seed
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One probed variable in a [`ProbeReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRow {
    pub index: usize,
    pub seed_bit: u8,
    pub baseline: f64,
    pub flipped_prediction: f64,
    pub importance: f64,
}

/// Full record of a probe: everything needed to recompute or re-derive
/// the importance scores, one row per variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    rows: Vec<ProbeRow>,
    seed: Bitstring,
    baseline: f64,
}

impl ProbeReport {
    pub fn rows(&self) -> &[ProbeRow] {
        &self.rows
    }

    pub fn seed(&self) -> &Bitstring {
        &self.seed
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    /// Signed importance scores in variable order.
    pub fn importance_values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.importance).collect()
    }

    /// `baseline - flipped` per variable: positive where the model
    /// prefers the seed's bit over its complement.
    pub fn keep_scores(&self) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.baseline - r.flipped_prediction)
            .collect()
    }

    /// Collapse to the importance vector alone.
    pub fn importance_vector(&self) -> ImportanceVector {
        ImportanceVector {
            values: self.importance_values(),
            baseline: self.baseline,
            seed: self.seed.clone(),
        }
    }

    /// Rebuild a report from stored rows (for example, parsed back from
    /// a file). Rows must be complete, in variable order, and consistent
    /// about the baseline.
    pub fn from_rows(rows: Vec<ProbeRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("a probe report needs at least one row"));
        }
        let baseline = rows[0].baseline;
        let mut seed = Bitstring::zeros(rows.len())?;
        for (i, row) in rows.iter().enumerate() {
            if row.index != i {
                return Err(Error::invalid(format!(
                    "row {i} carries variable index {}, expected {i}",
                    row.index
                )));
            }
            if row.seed_bit > 1 {
                return Err(Error::invalid(format!(
                    "row {i} has seed bit {}, expected 0 or 1",
                    row.seed_bit
                )));
            }
            if row.baseline != baseline {
                return Err(Error::invalid(format!(
                    "row {i} disagrees about the baseline ({} vs {baseline})",
                    row.baseline
                )));
            }
            seed.set(i, row.seed_bit);
        }
        Ok(ProbeReport {
            rows,
            seed,
            baseline,
        })
    }
}

/// Baseline prediction plus the prediction with each bit flipped.
/// Exactly `seed.len() + 1` predictor calls.
fn probe_raw<P>(seed: &Bitstring, predictor: &P) -> Result<(f64, Vec<f64>)>
where
    P: SurrogatePredictor + ?Sized,
{
    let baseline = predictor.predict_fitness(seed)?;
    let mut probe = seed.clone();
    let mut flipped = Vec::with_capacity(seed.len());
    for i in 0..seed.len() {
        probe.flip(i);
        let prediction = predictor.predict_fitness(&probe).map_err(|e| Error::Probe {
            index: i,
            source: Box::new(e),
        })?;
        probe.flip(i);
        flipped.push(prediction);
    }
    Ok((baseline, flipped))
}

/// Mine a predictor around one solution by single-bit probing.
///
/// Costs exactly `seed.len() + 1` predictor calls. A predictor failure
/// while probing variable `i` surfaces as [`Error::Probe`] with that
/// index.
pub fn probe_solution<P>(seed: &Bitstring, predictor: &P) -> Result<ImportanceVector>
where
    P: SurrogatePredictor + ?Sized,
{
    Ok(probe_report(seed, predictor)?.importance_vector())
}

/// Like [`probe_solution`], but keeps the raw flipped predictions so
/// other derived scores stay computable.
pub fn probe_report<P>(seed: &Bitstring, predictor: &P) -> Result<ProbeReport>
where
    P: SurrogatePredictor + ?Sized,
{
    let (baseline, flipped) = probe_raw(seed, predictor)?;
    let rows = flipped
        .into_iter()
        .enumerate()
        .map(|(i, prediction)| {
            let magnitude = (baseline - prediction).abs();
            let seed_bit = seed.get(i);
            ProbeRow {
                index: i,
                seed_bit,
                baseline,
                flipped_prediction: prediction,
                importance: if seed_bit == 1 { -magnitude } else { magnitude },
            }
        })
        .collect();
    Ok(ProbeReport {
        rows,
        seed: seed.clone(),
        baseline,
    })
}

/// Element-wise mean of equally sized vectors.
pub fn mean_vectors(vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = vectors
        .first()
        .ok_or_else(|| Error::invalid("mean of zero vectors is undefined"))?;
    if let Some(pos) = vectors.iter().position(|v| v.len() != first.len()) {
        return Err(Error::invalid(format!(
            "vector {pos} has {} entries, expected {}",
            vectors[pos].len(),
            first.len()
        )));
    }
    let k = vectors.len() as f64;
    Ok((0..first.len())
        .map(|i| vectors.iter().map(|v| v[i]).sum::<f64>() / k)
        .collect())
}

/// Mean importance across several probes of equally long seeds.
pub fn mean_importance(vectors: &[ImportanceVector]) -> Result<Vec<f64>> {
    let rows: Vec<Vec<f64>> = vectors.iter().map(|v| v.values.clone()).collect();
    mean_vectors(&rows)
}

/// Variables ordered by descending absolute score; ties keep ascending
/// variable index. Returns `(index, |value|)` pairs.
pub fn rank_variables(values: &[f64]) -> Vec<(usize, f64)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        values[j]
            .abs()
            .total_cmp(&values[i].abs())
            .then(i.cmp(&j))
    });
    order.into_iter().map(|i| (i, values[i].abs())).collect()
}

/// Fraction of adjacent pairs with strictly opposite signs.
pub fn sign_alternation_rate(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::invalid(
            "sign alternation needs at least two values",
        ));
    }
    let alternating = values
        .windows(2)
        .filter(|w| w[0] * w[1] < 0.0)
        .count();
    Ok(alternating as f64 / (values.len() - 1) as f64)
}

/// Fraction of consecutive `block`-sized groups whose values all share
/// one strict sign. `block` must divide the length.
pub fn block_sign_agreement_rate(values: &[f64], block: usize) -> Result<f64> {
    if block == 0 {
        return Err(Error::invalid("block size must be at least 1"));
    }
    if values.is_empty() || !values.len().is_multiple_of(block) {
        return Err(Error::invalid(format!(
            "block size {block} does not divide {} values",
            values.len()
        )));
    }
    let agreeing = values
        .chunks(block)
        .filter(|c| c.iter().all(|&v| v > 0.0) || c.iter().all(|&v| v < 0.0))
        .count();
    Ok(agreeing as f64 / (values.len() / block) as f64)
}

/// Fraction of positions where `scores` strictly matches the sign of
/// `reference`, counted over positions where the reference is non-zero.
pub fn sign_match_rate(scores: &[f64], reference: &[f64]) -> Result<f64> {
    if scores.len() != reference.len() {
        return Err(Error::invalid(format!(
            "got {} scores but {} reference values",
            scores.len(),
            reference.len()
        )));
    }
    let mut counted = 0usize;
    let mut matched = 0usize;
    for (&s, &r) in scores.iter().zip(reference) {
        if r != 0.0 {
            counted += 1;
            if s * r > 0.0 {
                matched += 1;
            }
        }
    }
    if counted == 0 {
        return Err(Error::invalid(
            "reference has no non-zero values to compare against",
        ));
    }
    Ok(matched as f64 / counted as f64)
}
