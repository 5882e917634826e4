//! Shared helpers for integration tests: an independent projected
//! gradient solver for the regression dual, a bitmask brute-force
//! MAXSAT scorer, and small construction utilities.

use surromine::problems::cnf::CnfFormula;
use surromine::Bitstring;

/// RBF kernel recomputed from scratch: exp(-gamma * squared Euclidean
/// distance), summing explicit per-bit squared differences.
pub fn rbf_reference(a: &Bitstring, b: &Bitstring, gamma: f64) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut dist2 = 0.0;
    for i in 0..a.len() {
        let d = a.get(i) as f64 - b.get(i) as f64;
        dist2 += d * d;
    }
    (-gamma * dist2).exp()
}

/// Dual solution found by projected gradient descent.
pub struct QpOracle {
    pub beta: Vec<f64>,
    pub intercept: f64,
}

impl QpOracle {
    /// Prediction at a point whose kernel values against the training
    /// rows are `kernel_row`.
    pub fn predict(&self, kernel_row: &[f64]) -> f64 {
        assert_eq!(kernel_row.len(), self.beta.len());
        self.beta
            .iter()
            .zip(kernel_row)
            .map(|(b, k)| b * k)
            .sum::<f64>()
            + self.intercept
    }
}

/// Solve the epsilon-insensitive regression dual by projected gradient
/// descent over the stacked variables `a = [alpha; alpha*]`:
///
///   minimize 0.5 a' Q a + p' a
///   subject to sum(s .* a) = 0 and 0 <= a <= c
///
/// with `Q[t][u] = s_t s_u K[t%m][u%m]`, `p = [eps - y; eps + y]`, and
/// block signs `s = [+1...; -1...]`. The step size is the inverse of a
/// Gershgorin bound on the largest eigenvalue, and each step projects
/// exactly onto the feasible set by bisecting the shift multiplier.
pub fn solve_qp_reference(kernel: &[Vec<f64>], targets: &[f64], c: f64, epsilon: f64) -> QpOracle {
    let m = targets.len();
    assert!(m > 0 && kernel.len() == m && kernel.iter().all(|row| row.len() == m));
    let n2 = 2 * m;
    let sign = |t: usize| if t < m { 1.0 } else { -1.0 };

    let q = |t: usize, u: usize| sign(t) * sign(u) * kernel[t % m][u % m];
    let p: Vec<f64> = (0..n2)
        .map(|t| epsilon - sign(t) * targets[t % m])
        .collect();

    let lipschitz = (0..n2)
        .map(|t| (0..n2).map(|u| q(t, u).abs()).sum::<f64>())
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let step = 1.0 / lipschitz;

    let mut a = vec![0.0f64; n2];
    let mut grad = vec![0.0f64; n2];
    for _ in 0..200_000 {
        for t in 0..n2 {
            grad[t] = p[t] + (0..n2).map(|u| q(t, u) * a[u]).sum::<f64>();
        }
        let moved: Vec<f64> = (0..n2).map(|t| a[t] - step * grad[t]).collect();
        let next = project_balanced_box(&moved, c, m);
        let shift = next
            .iter()
            .zip(&a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        a = next;
        if shift < 1e-14 {
            break;
        }
    }

    for t in 0..n2 {
        grad[t] = p[t] + (0..n2).map(|u| q(t, u) * a[u]).sum::<f64>();
    }
    // Intercept from the violating-pair interval, mirroring optimality
    // conditions: -s_t grad_t maximized over coordinates free to grow,
    // minimized over coordinates free to shrink.
    let slack = 1e-9 * c.max(1.0);
    let mut up = f64::NEG_INFINITY;
    let mut down = f64::INFINITY;
    for t in 0..n2 {
        let v = -sign(t) * grad[t];
        let can_up = if t < m { a[t] < c - slack } else { a[t] > slack };
        let can_down = if t < m { a[t] > slack } else { a[t] < c - slack };
        if can_up {
            up = up.max(v);
        }
        if can_down {
            down = down.min(v);
        }
    }
    let intercept = (up + down) / 2.0;

    let beta: Vec<f64> = (0..m).map(|i| a[i] - a[i + m]).collect();
    QpOracle { beta, intercept }
}

/// Euclidean projection onto `{0 <= a <= c, sum(s .* a) = 0}` where the
/// first `m` coordinates carry sign +1 and the rest -1. The projection
/// is `clip(v - theta * s)` for the `theta` that balances the signed
/// sum, found by bisection on that monotone function.
fn project_balanced_box(v: &[f64], c: f64, m: usize) -> Vec<f64> {
    let sign = |t: usize| if t < m { 1.0 } else { -1.0 };
    let balance = |theta: f64| -> f64 {
        v.iter()
            .enumerate()
            .map(|(t, &vt)| sign(t) * (vt - theta * sign(t)).clamp(0.0, c))
            .sum()
    };
    let bound = v.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())) + c + 1.0;
    let (mut lo, mut hi) = (-bound, bound);
    debug_assert!(balance(lo) >= 0.0 && balance(hi) <= 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if balance(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = 0.5 * (lo + hi);
    v.iter()
        .enumerate()
        .map(|(t, &vt)| (vt - theta * sign(t)).clamp(0.0, c))
        .collect()
}

/// Satisfied-clause counts for every assignment of a small formula,
/// computed with per-clause bitmasks. Bit `i-1` of the assignment
/// index holds variable `i`, matching the genome convention.
pub fn maxsat_bruteforce_counts(formula: &CnfFormula) -> Vec<u32> {
    let v = formula.num_vars();
    assert!(v <= 20, "brute force capped at 20 variables, got {v}");
    let masks: Vec<(u32, u32)> = formula
        .clauses()
        .iter()
        .map(|clause| {
            let mut pos = 0u32;
            let mut neg = 0u32;
            for lit in clause {
                let bit = 1u32 << (lit.var - 1);
                if lit.negated {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            (pos, neg)
        })
        .collect();
    (0..1u32 << v)
        .map(|assignment| {
            masks
                .iter()
                .filter(|&&(pos, neg)| assignment & pos != 0 || !assignment & neg != 0)
                .count() as u32
        })
        .collect()
}

/// Genome whose bit `i` equals bit `i` of `index`.
pub fn bitstring_from_index(index: u32, len: usize) -> Bitstring {
    let bits: Vec<u8> = (0..len).map(|i| ((index >> i) & 1) as u8).collect();
    Bitstring::from_bits(&bits).unwrap()
}
