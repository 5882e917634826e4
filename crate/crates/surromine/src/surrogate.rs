//! Epsilon-insensitive support vector regression with an RBF kernel.

mod smo;

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::ga::{SurrogatePredictor, SurrogateTrainer};

use smo::{PackedPoints, SmoParams};

/// Kernel width selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaMode {
    /// `1 / (dim * variance)` over all entries of the training matrix.
    Scale,
    /// Use this value directly.
    Fixed(f64),
}

/// Training hyper-parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SvrHyperParams {
    /// Box bound on each dual coefficient.
    pub c: f64,
    /// Half-width of the zero-penalty tube around the targets.
    pub epsilon: f64,
    pub gamma: GammaMode,
    /// Stop once the largest KKT violation falls to this level.
    pub tolerance: f64,
    /// Pair-update budget; `None` means ten times the row count. Either
    /// way the budget never exceeds 200 000.
    pub max_passes: Option<usize>,
}

impl Default for SvrHyperParams {
    fn default() -> Self {
        SvrHyperParams {
            c: 1.0,
            epsilon: 0.1,
            gamma: GammaMode::Scale,
            tolerance: 1e-3,
            max_passes: None,
        }
    }
}

const MAX_PAIR_UPDATES: usize = 200_000;

/// Kernel width `1 / (dim * variance)`, with the variance taken over
/// every entry of the flattened training matrix.
pub fn gamma_scale(rows: &[Bitstring]) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::invalid("gamma scaling needs at least one row"));
    }
    let dim = rows[0].len();
    if let Some(pos) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::invalid(format!(
            "row {pos} has {} entries, expected {dim}",
            rows[pos].len()
        )));
    }
    let total = (rows.len() * dim) as f64;
    let ones: usize = rows.iter().map(|r| r.count_ones()).sum();
    // For 0/1 entries the population variance reduces to p(1 - p).
    let p = ones as f64 / total;
    let variance = p * (1.0 - p);
    if variance == 0.0 {
        return Err(Error::DegenerateData(
            "all training entries are identical, so the scaled kernel width is undefined".into(),
        ));
    }
    Ok(1.0 / (dim as f64 * variance))
}

/// `exp(-gamma * ||u - v||^2)` for arbitrary real vectors.
pub fn rbf_kernel(u: &[f64], v: &[f64], gamma: f64) -> Result<f64> {
    if u.is_empty() || u.len() != v.len() {
        return Err(Error::invalid(format!(
            "kernel inputs must share a positive length, got {} and {}",
            u.len(),
            v.len()
        )));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::invalid(format!(
            "kernel width must be positive and finite, got {gamma}"
        )));
    }
    let sumsq: f64 = u.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((-gamma * sumsq).exp())
}

/// A trained regressor: a weighted sum of kernels around the support
/// vectors plus an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct SvrModel {
    gamma: f64,
    intercept: f64,
    support_vectors: Vec<Bitstring>,
    dual_coefs: Vec<f64>,
}

/// Training outcome: the model plus solver diagnostics.
#[derive(Debug, Clone)]
pub struct SvrFit {
    pub model: SvrModel,
    /// Whether the KKT gap reached the tolerance within the budget.
    pub converged: bool,
    /// Pair updates performed.
    pub iterations: usize,
    /// Final KKT violation.
    pub kkt_gap: f64,
    /// Dual coefficient per training row, zeros included.
    pub beta: Vec<f64>,
}

/// Fit a regressor to the given rows and targets.
pub fn train_svr(rows: &[Bitstring], targets: &[f64], params: &SvrHyperParams) -> Result<SvrFit> {
    if rows.is_empty() {
        return Err(Error::invalid("training needs at least one row"));
    }
    if rows.len() != targets.len() {
        return Err(Error::invalid(format!(
            "got {} rows but {} targets",
            rows.len(),
            targets.len()
        )));
    }
    let dim = rows[0].len();
    if let Some(pos) = rows.iter().position(|r| r.len() != dim) {
        return Err(Error::invalid(format!(
            "row {pos} has {} entries, expected {dim}",
            rows[pos].len()
        )));
    }
    if let Some(pos) = targets.iter().position(|t| !t.is_finite()) {
        return Err(Error::invalid(format!(
            "target {pos} is not finite: {}",
            targets[pos]
        )));
    }
    if !(params.c.is_finite() && params.c > 0.0) {
        return Err(Error::invalid(format!(
            "box bound must be positive and finite, got {}",
            params.c
        )));
    }
    if !(params.epsilon.is_finite() && params.epsilon >= 0.0) {
        return Err(Error::invalid(format!(
            "tube width must be non-negative and finite, got {}",
            params.epsilon
        )));
    }
    if !(params.tolerance.is_finite() && params.tolerance > 0.0) {
        return Err(Error::invalid(format!(
            "tolerance must be positive and finite, got {}",
            params.tolerance
        )));
    }
    let gamma = match params.gamma {
        GammaMode::Scale => gamma_scale(rows)?,
        GammaMode::Fixed(g) => {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::invalid(format!(
                    "kernel width must be positive and finite, got {g}"
                )));
            }
            g
        }
    };

    let max_iter = params
        .max_passes
        .unwrap_or(10 * rows.len())
        .clamp(1, MAX_PAIR_UPDATES);
    let points = PackedPoints::new(rows);
    let solution = smo::solve(
        &points,
        targets,
        gamma,
        &SmoParams {
            c: params.c,
            epsilon: params.epsilon,
            tol: params.tolerance,
            max_iter,
        },
    );

    let mut support_vectors = Vec::new();
    let mut dual_coefs = Vec::new();
    for (row, &b) in rows.iter().zip(&solution.beta) {
        if b != 0.0 {
            support_vectors.push(row.clone());
            dual_coefs.push(b);
        }
    }
    Ok(SvrFit {
        model: SvrModel {
            gamma,
            intercept: solution.intercept,
            support_vectors,
            dual_coefs,
        },
        converged: solution.converged,
        iterations: solution.iterations,
        kkt_gap: solution.kkt_gap,
        beta: solution.beta,
    })
}

impl SvrModel {
    /// Predicted target for one input.
    pub fn predict(&self, x: &Bitstring) -> Result<f64> {
        if let Some(sv) = self.support_vectors.first() {
            if sv.len() != x.len() {
                return Err(Error::invalid(format!(
                    "input has {} variables but the model was trained on {}",
                    x.len(),
                    sv.len()
                )));
            }
        }
        let mut acc = self.intercept;
        for (sv, coef) in self.support_vectors.iter().zip(&self.dual_coefs) {
            acc += coef * (-self.gamma * sv.hamming(x) as f64).exp();
        }
        Ok(acc)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn support_vector_count(&self) -> usize {
        self.support_vectors.len()
    }

    pub fn support_vectors(&self) -> &[Bitstring] {
        &self.support_vectors
    }

    pub fn dual_coefs(&self) -> &[f64] {
        &self.dual_coefs
    }

    /// Serialize as text: a `gamma` line, a `b` line, then one line per
    /// support vector holding its coefficient and its bits. Numbers use
    /// the shortest representation that parses back to the same value.
    pub fn to_text(&self) -> String {
        let mut out = format!("gamma {}\nb {}\n", self.gamma, self.intercept);
        for (sv, coef) in self.support_vectors.iter().zip(&self.dual_coefs) {
            out.push_str(&format!("{coef} {sv}\n"));
        }
        out
    }

    /// Parse the [`to_text`](Self::to_text) format.
    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, message: String| Error::Parse { line, message };
        let mut lines = text.lines().enumerate();

        let mut header_field = |name: &'static str| -> Result<f64> {
            let (idx, line) = lines
                .next()
                .ok_or_else(|| parse_err(1, format!("missing {name} line")))?;
            let rest = line
                .strip_prefix(name)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| parse_err(idx + 1, format!("expected '{name} <value>', got {line:?}")))?;
            rest.trim()
                .parse::<f64>()
                .map_err(|_| parse_err(idx + 1, format!("bad {name} value {rest:?}")))
        };
        let gamma = header_field("gamma")?;
        let intercept = header_field("b")?;
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(parse_err(1, format!("kernel width must be positive, got {gamma}")));
        }

        let mut support_vectors: Vec<Bitstring> = Vec::new();
        let mut dual_coefs = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (coef_str, bits_str) = line
                .split_once(' ')
                .ok_or_else(|| parse_err(idx + 1, "expected '<coef> <bits>'".into()))?;
            let coef: f64 = coef_str
                .parse()
                .map_err(|_| parse_err(idx + 1, format!("bad coefficient {coef_str:?}")))?;
            let bits = Bitstring::from_bit_str(bits_str.trim()).map_err(|e| {
                parse_err(idx + 1, format!("bad support vector bits: {e}"))
            })?;
            if let Some(first) = support_vectors.first() {
                if first.len() != bits.len() {
                    return Err(parse_err(
                        idx + 1,
                        "support vectors must share one length".into(),
                    ));
                }
            }
            support_vectors.push(bits);
            dual_coefs.push(coef);
        }
        Ok(SvrModel {
            gamma,
            intercept,
            support_vectors,
            dual_coefs,
        })
    }
}

impl SurrogatePredictor for SvrModel {
    fn predict_fitness(&self, genome: &Bitstring) -> Result<f64> {
        self.predict(genome)
    }
}

/// Plugs [`train_svr`] into the search loop with fixed hyper-parameters.
#[derive(Debug, Clone, Default)]
pub struct SvrTrainer {
    pub params: SvrHyperParams,
}

impl SurrogateTrainer for SvrTrainer {
    fn train_predictor(
        &self,
        genomes: &[Bitstring],
        fitnesses: &[f64],
    ) -> Result<Box<dyn SurrogatePredictor>> {
        let fit = train_svr(genomes, fitnesses, &self.params)?;
        Ok(Box::new(fit.model))
    }
}
