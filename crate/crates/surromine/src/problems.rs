//! Benchmark objective functions over bitstrings (all maximized).

pub mod cnf;

use std::fmt;

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};

use cnf::CnfFormula;

/// Number of positions in consecutive pairs of a 1-D string that hold
/// different values. Range `[0, n-1]`; maximized by the two alternating
/// strings.
pub fn eval_checkerboard_1d(x: &Bitstring) -> Result<f64> {
    let n = x.len();
    if n < 2 {
        return Err(Error::invalid(format!(
            "1-D checkerboard needs at least 2 variables, got {n}"
        )));
    }
    let mismatches = (0..n - 1).filter(|&i| x.get(i) != x.get(i + 1)).count();
    Ok(mismatches as f64)
}

/// Checkerboard score of a `side` x `side` grid stored row-major.
///
/// Starts from the maximum `4 * (side - 2)^2` and subtracts one for every
/// interior cell whose value matches an orthogonal neighbour, so a perfect
/// checkerboard scores the maximum and a constant grid scores zero.
pub fn eval_checkerboard_2d(x: &Bitstring, side: usize) -> Result<f64> {
    if side < 3 {
        return Err(Error::invalid(format!(
            "2-D checkerboard needs side >= 3, got {side}"
        )));
    }
    if x.len() != side * side {
        return Err(Error::invalid(format!(
            "2-D checkerboard with side {side} needs {} variables, got {}",
            side * side,
            x.len()
        )));
    }
    let at = |r: usize, c: usize| x.get(r * side + c);
    let mut matches = 0usize;
    for r in 1..side - 1 {
        for c in 1..side - 1 {
            let v = at(r, c);
            for (nr, nc) in [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)] {
                if at(nr, nc) == v {
                    matches += 1;
                }
            }
        }
    }
    Ok((4 * (side - 2) * (side - 2)) as f64 - matches as f64)
}

/// Sum of deceptive trap scores over consecutive blocks of `k` bits.
///
/// A block of `u` ones scores `f_high` when fully set (`u == k`) and
/// `f_low - u * f_low / (k - 1)` otherwise, so the gradient points away
/// from the per-block optimum everywhere except at the optimum itself.
pub fn eval_trap(x: &Bitstring, k: usize, f_high: f64, f_low: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::invalid(format!("trap block size must be >= 2, got {k}")));
    }
    if !x.len().is_multiple_of(k) {
        return Err(Error::invalid(format!(
            "trap block size {k} does not divide genome length {}",
            x.len()
        )));
    }
    if !(f_high > f_low && f_low >= 0.0) {
        return Err(Error::invalid(format!(
            "trap scores need f_high > f_low >= 0, got f_high={f_high}, f_low={f_low}"
        )));
    }
    let mut total = 0.0;
    for block in 0..x.len() / k {
        let u = (block * k..(block + 1) * k)
            .filter(|&i| x.get(i) == 1)
            .count();
        total += if u == k {
            f_high
        } else {
            f_low - u as f64 * f_low / (k - 1) as f64
        };
    }
    Ok(total)
}

/// Number of satisfied clauses when bit `i-1` assigns variable `i`
/// (1 means true).
pub fn eval_maxsat(x: &Bitstring, formula: &CnfFormula) -> Result<f64> {
    if x.len() != formula.num_vars() {
        return Err(Error::invalid(format!(
            "assignment has {} bits but formula has {} variables",
            x.len(),
            formula.num_vars()
        )));
    }
    let satisfied = formula
        .clauses()
        .iter()
        .filter(|clause| {
            clause
                .iter()
                .any(|lit| (x.get(lit.var - 1) == 1) != lit.negated)
        })
        .count();
    Ok(satisfied as f64)
}

/// A benchmark problem instance: pairs an objective with its genome length.
#[derive(Debug, Clone)]
pub enum Problem {
    Checkerboard1d { n: usize },
    Checkerboard2d { side: usize },
    Trap { k: usize, blocks: usize, f_high: f64, f_low: f64 },
    MaxSat { formula: CnfFormula },
}

impl Problem {
    /// 1-D checkerboard over `n >= 2` variables.
    pub fn checkerboard_1d(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "1-D checkerboard needs at least 2 variables, got {n}"
            )));
        }
        Ok(Problem::Checkerboard1d { n })
    }

    /// 2-D checkerboard over `n` variables; `n` must be a perfect square
    /// with side at least 3.
    pub fn checkerboard_2d(n: usize) -> Result<Self> {
        let side = (n as f64).sqrt().round() as usize;
        if side * side != n {
            return Err(Error::invalid(format!(
                "2-D checkerboard needs a square variable count, got {n}"
            )));
        }
        if side < 3 {
            return Err(Error::invalid(format!(
                "2-D checkerboard needs side >= 3, got side {side}"
            )));
        }
        Ok(Problem::Checkerboard2d { side })
    }

    /// Concatenated deceptive traps with a custom block size and scores.
    pub fn trap(n: usize, k: usize, f_high: f64, f_low: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("trap block size must be >= 2, got {k}")));
        }
        if n == 0 || !n.is_multiple_of(k) {
            return Err(Error::invalid(format!(
                "trap block size {k} does not divide genome length {n}"
            )));
        }
        if !(f_high > f_low && f_low >= 0.0) {
            return Err(Error::invalid(format!(
                "trap scores need f_high > f_low >= 0, got f_high={f_high}, f_low={f_low}"
            )));
        }
        Ok(Problem::Trap {
            k,
            blocks: n / k,
            f_high,
            f_low,
        })
    }

    /// Standard 5-bit trap: block score 5 at all ones, else `4 - u`.
    pub fn trap5(n: usize) -> Result<Self> {
        Self::trap(n, 5, 5.0, 4.0)
    }

    /// MAXSAT over the given formula; the genome length is the variable
    /// count.
    pub fn maxsat(formula: CnfFormula) -> Self {
        Problem::MaxSat { formula }
    }

    /// Genome length this problem evaluates.
    pub fn genome_length(&self) -> usize {
        match self {
            Problem::Checkerboard1d { n } => *n,
            Problem::Checkerboard2d { side } => side * side,
            Problem::Trap { k, blocks, .. } => k * blocks,
            Problem::MaxSat { formula } => formula.num_vars(),
        }
    }

    /// Best achievable objective value.
    pub fn optimum(&self) -> f64 {
        match self {
            Problem::Checkerboard1d { n } => (*n - 1) as f64,
            Problem::Checkerboard2d { side } => (4 * (side - 2) * (side - 2)) as f64,
            Problem::Trap { blocks, f_high, .. } => *blocks as f64 * f_high,
            Problem::MaxSat { formula } => formula.num_clauses() as f64,
        }
    }

    /// Evaluate one candidate.
    pub fn evaluate(&self, x: &Bitstring) -> Result<f64> {
        match self {
            Problem::Checkerboard1d { n } => {
                if x.len() != *n {
                    return Err(Error::invalid(format!(
                        "expected {n} variables, got {}",
                        x.len()
                    )));
                }
                eval_checkerboard_1d(x)
            }
            Problem::Checkerboard2d { side } => eval_checkerboard_2d(x, *side),
            Problem::Trap { k, f_high, f_low, .. } => {
                if x.len() != self.genome_length() {
                    return Err(Error::invalid(format!(
                        "expected {} variables, got {}",
                        self.genome_length(),
                        x.len()
                    )));
                }
                eval_trap(x, *k, *f_high, *f_low)
            }
            Problem::MaxSat { formula } => eval_maxsat(x, formula),
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Problem::Checkerboard1d { n } => write!(f, "checkerboard1d(n={n})"),
            Problem::Checkerboard2d { side } => {
                write!(f, "checkerboard2d(n={}, side={side})", side * side)
            }
            Problem::Trap { k, blocks, .. } => write!(f, "trap{k}(n={})", k * blocks),
            Problem::MaxSat { formula } => write!(
                f,
                "maxsat(vars={}, clauses={})",
                formula.num_vars(),
                formula.num_clauses()
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;

    fn bits(s: &str) -> Bitstring {
        Bitstring::from_bit_str(s).unwrap()
    }

    #[test]
    fn checkerboard_1d_counts_boundaries() {
        assert_eq!(eval_checkerboard_1d(&bits("0101")).unwrap(), 3.0);
        assert_eq!(eval_checkerboard_1d(&bits("1010")).unwrap(), 3.0);
        assert_eq!(eval_checkerboard_1d(&bits("0000")).unwrap(), 0.0);
        assert_eq!(eval_checkerboard_1d(&bits("0011")).unwrap(), 1.0);
        assert_eq!(eval_checkerboard_1d(&bits("01")).unwrap(), 1.0);
    }

    #[test]
    fn checkerboard_1d_optimum_is_alternating() {
        let n = 100;
        let mut alt = Bitstring::zeros(n).unwrap();
        for i in (1..n).step_by(2) {
            alt.set(i, 1);
        }
        assert_eq!(eval_checkerboard_1d(&alt).unwrap(), (n - 1) as f64);
    }

    #[test]
    fn checkerboard_1d_rejects_short_input() {
        assert!(eval_checkerboard_1d(&bits("0")).is_err());
    }

    fn perfect_board(side: usize) -> Bitstring {
        let mut b = Bitstring::zeros(side * side).unwrap();
        for r in 0..side {
            for c in 0..side {
                if (r + c) % 2 == 1 {
                    b.set(r * side + c, 1);
                }
            }
        }
        b
    }

    #[test]
    fn checkerboard_2d_extremes() {
        let side = 5;
        let max = (4 * (side - 2) * (side - 2)) as f64;
        assert_eq!(eval_checkerboard_2d(&perfect_board(side), side).unwrap(), max);
        let constant = Bitstring::zeros(side * side).unwrap();
        assert_eq!(eval_checkerboard_2d(&constant, side).unwrap(), 0.0);
    }

    #[test]
    fn checkerboard_2d_counts_one_defect() {
        let side = 5;
        let max = (4 * (side - 2) * (side - 2)) as f64;
        // Corners touch no interior cell, so flipping one changes nothing.
        let mut b = perfect_board(side);
        b.flip(0);
        assert_eq!(eval_checkerboard_2d(&b, side).unwrap(), max);
        // Edge cell (0,1) borders exactly one interior cell.
        let mut b = perfect_board(side);
        b.flip(1);
        assert_eq!(eval_checkerboard_2d(&b, side).unwrap(), max - 1.0);
        // A central cell participates in four pairs, each counted from both
        // endpoints because both are interior.
        let mut b = perfect_board(side);
        b.flip(2 * side + 2);
        assert_eq!(eval_checkerboard_2d(&b, side).unwrap(), max - 8.0);
    }

    #[test]
    fn checkerboard_2d_validates_shape() {
        assert!(eval_checkerboard_2d(&bits("0101"), 2).is_err());
        assert!(eval_checkerboard_2d(&bits("010101010"), 4).is_err());
        assert!(Problem::checkerboard_2d(99).is_err());
        assert!(Problem::checkerboard_2d(4).is_err());
        assert!(Problem::checkerboard_2d(9).is_ok());
    }

    #[test]
    fn trap_block_scores_follow_the_deceptive_ladder() {
        // Single 5-bit block: number of ones -> score.
        let cases = [
            ("00000", 4.0),
            ("10000", 3.0),
            ("11000", 2.0),
            ("11100", 1.0),
            ("11110", 0.0),
            ("11111", 5.0),
        ];
        for (s, want) in cases {
            assert_eq!(
                eval_trap(&bits(s), 5, 5.0, 4.0).unwrap(),
                want,
                "block {s}"
            );
        }
    }

    #[test]
    fn trap_sums_over_blocks() {
        let x = bits("1111100000");
        assert_eq!(eval_trap(&x, 5, 5.0, 4.0).unwrap(), 9.0);
        let ones = Bitstring::from_bits(&[1; 100]).unwrap();
        assert_eq!(eval_trap(&ones, 5, 5.0, 4.0).unwrap(), 100.0);
        let zeros = Bitstring::zeros(100).unwrap();
        assert_eq!(eval_trap(&zeros, 5, 5.0, 4.0).unwrap(), 80.0);
    }

    #[test]
    fn trap_validates_arguments() {
        assert!(eval_trap(&bits("0101"), 5, 5.0, 4.0).is_err());
        assert!(eval_trap(&bits("01010"), 1, 5.0, 4.0).is_err());
        assert!(eval_trap(&bits("01010"), 5, 4.0, 4.0).is_err());
        assert!(eval_trap(&bits("01010"), 5, 5.0, -1.0).is_err());
        assert!(Problem::trap5(99).is_err());
        assert!(Problem::trap5(100).is_ok());
    }

    #[test]
    fn maxsat_counts_satisfied_clauses() {
        // (x1 | !x2) & (x2 | x3) & (!x1 | !x3)
        let f = CnfFormula::parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n-1 -3 0\n").unwrap();
        assert_eq!(eval_maxsat(&bits("100"), &f).unwrap(), 2.0);
        assert_eq!(eval_maxsat(&bits("110"), &f).unwrap(), 3.0);
        assert_eq!(eval_maxsat(&bits("001"), &f).unwrap(), 3.0);
        assert_eq!(eval_maxsat(&bits("011"), &f).unwrap(), 2.0);
        assert_eq!(eval_maxsat(&bits("010"), &f).unwrap(), 2.0);
    }

    #[test]
    fn maxsat_rejects_wrong_assignment_length() {
        let f = CnfFormula::parse_dimacs("p cnf 3 1\n1 2 3 0\n").unwrap();
        assert!(eval_maxsat(&bits("01"), &f).is_err());
    }

    #[test]
    fn problem_enum_dispatch_matches_free_functions() {
        let p = Problem::checkerboard_1d(4).unwrap();
        assert_eq!(p.evaluate(&bits("0110")).unwrap(), 2.0);
        assert_eq!(p.genome_length(), 4);
        assert_eq!(p.optimum(), 3.0);

        let p = Problem::trap5(10).unwrap();
        assert_eq!(p.evaluate(&bits("1111111111")).unwrap(), 10.0);
        assert_eq!(p.optimum(), 10.0);

        let p = Problem::checkerboard_2d(25).unwrap();
        assert_eq!(p.genome_length(), 25);
        assert_eq!(p.optimum(), 36.0);
        assert!(p.evaluate(&bits("01")).is_err());
    }

    #[test]
    fn display_labels_identify_problems() {
        assert_eq!(
            Problem::checkerboard_1d(100).unwrap().to_string(),
            "checkerboard1d(n=100)"
        );
        assert_eq!(
            Problem::trap5(100).unwrap().to_string(),
            "trap5(n=100)"
        );
    }

    proptest! {
        #[test]
        fn prop_checkerboard_1d_in_range(seed in 0u64..500, n in 2usize..200) {
            let mut rng = RngStream::new(seed);
            let x = Bitstring::random(&mut rng, n).unwrap();
            let v = eval_checkerboard_1d(&x).unwrap();
            prop_assert!(v >= 0.0 && v <= (n - 1) as f64);
        }

        #[test]
        fn prop_checkerboard_1d_complement_invariant(seed in 0u64..500, n in 2usize..200) {
            // Flipping every bit preserves all neighbour boundaries.
            let mut rng = RngStream::new(seed);
            let x = Bitstring::random(&mut rng, n).unwrap();
            let mut y = x.clone();
            for i in 0..n {
                y.flip(i);
            }
            prop_assert_eq!(
                eval_checkerboard_1d(&x).unwrap(),
                eval_checkerboard_1d(&y).unwrap()
            );
        }

        #[test]
        fn prop_checkerboard_2d_in_range(seed in 0u64..500, side in 3usize..12) {
            let mut rng = RngStream::new(seed);
            let x = Bitstring::random(&mut rng, side * side).unwrap();
            let v = eval_checkerboard_2d(&x, side).unwrap();
            prop_assert!(v >= 0.0 && v <= (4 * (side - 2) * (side - 2)) as f64);
        }

        #[test]
        fn prop_trap_matches_blockwise_sum(seed in 0u64..500, blocks in 1usize..20) {
            let mut rng = RngStream::new(seed);
            let x = Bitstring::random(&mut rng, blocks * 5).unwrap();
            let whole = eval_trap(&x, 5, 5.0, 4.0).unwrap();
            let mut sum = 0.0;
            for b in 0..blocks {
                let block: Vec<u8> = (b * 5..(b + 1) * 5).map(|i| x.get(i)).collect();
                sum += eval_trap(&Bitstring::from_bits(&block).unwrap(), 5, 5.0, 4.0).unwrap();
            }
            prop_assert!((whole - sum).abs() < 1e-9);
        }
    }
}
