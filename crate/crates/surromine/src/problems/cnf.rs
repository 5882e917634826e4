//! CNF formulas and the DIMACS text format.

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// One literal: a 1-based variable index, possibly negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    /// Positive literal of variable `var`.
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    /// Negated literal of variable `var`.
    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }
}

/// A propositional formula in conjunctive normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    /// Build a formula, checking that every clause is non-empty and every
    /// variable index lies in `[1, num_vars]`.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::invalid("formula must have at least one variable"));
        }
        for (ci, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(Error::invalid(format!("clause {ci} is empty")));
            }
            for lit in clause {
                if lit.var == 0 || lit.var > num_vars {
                    return Err(Error::invalid(format!(
                        "clause {ci} references variable {} outside 1..={num_vars}",
                        lit.var
                    )));
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// Parse DIMACS CNF text.
    ///
    /// Lines starting with `c` are comments. Exactly one `p cnf <vars>
    /// <clauses>` header must precede the clauses. Clauses are
    /// whitespace-separated integers terminated by `0` and may span lines.
    /// Errors carry the 1-based line number.
    pub fn parse_dimacs(input: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses: Vec<Vec<Literal>> = Vec::new();
        let mut current: Vec<Literal> = Vec::new();
        let mut last_line = 1;

        let parse_err = |line: usize, message: String| Error::Parse { line, message };

        for (idx, raw_line) in input.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw_line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                if header.is_some() {
                    return Err(parse_err(line_no, "duplicate header".into()));
                }
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                    return Err(parse_err(
                        line_no,
                        format!("malformed header {line:?}, expected 'p cnf <vars> <clauses>'"),
                    ));
                }
                let vars: usize = fields[2]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad variable count {:?}", fields[2])))?;
                let count: usize = fields[3]
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad clause count {:?}", fields[3])))?;
                if vars == 0 {
                    return Err(parse_err(line_no, "variable count must be positive".into()));
                }
                header = Some((vars, count));
                continue;
            }
            let (vars, _) = header
                .ok_or_else(|| parse_err(line_no, "clause before 'p cnf' header".into()))?;
            for tok in line.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    if current.is_empty() {
                        return Err(parse_err(line_no, "zero-length clause".into()));
                    }
                    clauses.push(std::mem::take(&mut current));
                } else {
                    let var = lit.unsigned_abs() as usize;
                    if var > vars {
                        return Err(parse_err(
                            line_no,
                            format!("literal {lit} references a variable beyond {vars}"),
                        ));
                    }
                    current.push(Literal {
                        var,
                        negated: lit < 0,
                    });
                }
            }
        }

        let (vars, declared) = header.ok_or_else(|| parse_err(last_line, "missing 'p cnf' header".into()))?;
        if !current.is_empty() {
            return Err(parse_err(
                last_line,
                "unterminated clause at end of input".into(),
            ));
        }
        if clauses.len() != declared {
            return Err(parse_err(
                last_line,
                format!("header declares {declared} clauses but {} were found", clauses.len()),
            ));
        }
        CnfFormula::new(vars, clauses)
    }

    /// Serialize to DIMACS CNF text. Parsing the output reproduces the
    /// formula exactly.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for clause in &self.clauses {
            for lit in clause {
                if lit.negated {
                    out.push('-');
                }
                out.push_str(&lit.var.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    /// Uniform random 3-SAT instance: each clause picks three distinct
    /// variables without replacement, each negated independently with
    /// probability one half.
    pub fn random_3sat(rng: &mut RngStream, num_vars: usize, num_clauses: usize) -> Result<Self> {
        if num_vars < 3 {
            return Err(Error::invalid(format!(
                "random 3-SAT needs at least 3 variables, got {num_vars}"
            )));
        }
        if num_clauses == 0 {
            return Err(Error::invalid("random 3-SAT needs at least one clause"));
        }
        let n = num_vars as u64;
        let mut clauses = Vec::with_capacity(num_clauses);
        for _ in 0..num_clauses {
            let v1 = 1 + rng.below(n) as usize;
            // Draw from the remaining n-1 variables, skipping v1.
            let r2 = 1 + rng.below(n - 1) as usize;
            let v2 = if r2 >= v1 { r2 + 1 } else { r2 };
            // Draw from the remaining n-2, skipping both in ascending order.
            let (lo, hi) = (v1.min(v2), v1.max(v2));
            let mut v3 = 1 + rng.below(n - 2) as usize;
            if v3 >= lo {
                v3 += 1;
            }
            if v3 >= hi {
                v3 += 1;
            }
            let clause = [v1, v2, v3]
                .into_iter()
                .map(|var| Literal {
                    var,
                    negated: rng.bernoulli(0.5),
                })
                .collect();
            clauses.push(clause);
        }
        CnfFormula::new(num_vars, clauses)
    }
}
