//! Sequential minimal optimization for the epsilon-insensitive dual.
//!
//! The dual is expressed over 2m box-bounded variables `a = [alpha,
//! alpha*]` with block signs `s = [+1.., -1..]` and the single constraint
//! `sum(s * a) = 0`. Each iteration picks the most violating pair by the
//! first-order rule (largest `-s*g` over the up-set, smallest over the
//! down-set, lowest index on ties), solves the two-variable subproblem
//! exactly, clips to the box, and updates the gradient incrementally.

use crate::bitstring::Bitstring;

const TAU: f64 = 1e-12;

/// Training genomes packed row-major into 64-bit words, so one kernel
/// entry costs a handful of XOR+popcount operations plus a table lookup.
pub(crate) struct PackedPoints {
    words: Vec<u64>,
    stride: usize,
    len: usize,
    dim: usize,
}

impl PackedPoints {
    pub(crate) fn new(rows: &[Bitstring]) -> Self {
        let dim = rows.first().map_or(0, |r| r.len());
        let stride = rows.first().map_or(0, |r| r.words().len());
        let mut words = Vec::with_capacity(stride * rows.len());
        for row in rows {
            words.extend_from_slice(row.words());
        }
        PackedPoints {
            words,
            stride,
            len: rows.len(),
            dim,
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.len
    }

    pub(crate) fn dim(&self) -> usize {
        self.dim
    }

    fn word_row(&self, i: usize) -> &[u64] {
        &self.words[i * self.stride..(i + 1) * self.stride]
    }

    /// Hamming distance between training rows `i` and `u`.
    fn hamming(&self, i: usize, u: usize) -> usize {
        self.word_row(i)
            .iter()
            .zip(self.word_row(u))
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Fill `out` with kernel row `i`: `out[u] = table[hamming(i, u)]`.
    fn fill_kernel_row(&self, i: usize, table: &[f64], out: &mut [f64]) {
        for u in 0..self.len {
            out[u] = table[self.hamming(i, u)];
        }
    }
}

/// Direct-mapped cache of kernel rows keyed by training-row index.
struct RowCache {
    rows: Vec<f64>,
    tags: Vec<usize>,
    row_len: usize,
}

impl RowCache {
    fn new(capacity: usize, row_len: usize) -> Self {
        RowCache {
            rows: vec![0.0; capacity * row_len],
            tags: vec![usize::MAX; capacity],
            row_len,
        }
    }

    /// Slot holding kernel row `i`, computing it on a miss.
    fn ensure(&mut self, i: usize, points: &PackedPoints, table: &[f64]) -> usize {
        let slot = i % self.tags.len();
        if self.tags[slot] != i {
            points.fill_kernel_row(i, table, &mut self.rows[slot * self.row_len..][..self.row_len]);
            self.tags[slot] = i;
        }
        slot
    }

    fn row(&self, slot: usize) -> &[f64] {
        &self.rows[slot * self.row_len..][..self.row_len]
    }
}

pub(crate) struct SmoParams {
    pub c: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub max_iter: usize,
}

pub(crate) struct SmoSolution {
    /// Dual coefficient per training row: `beta[i] = alpha[i] - alpha*[i]`.
    pub beta: Vec<f64>,
    pub intercept: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Final violation `max(up) - min(down)`; at most `tol` when converged.
    pub kkt_gap: f64,
}

/// Block sign of the 2m-space index `t`.
#[inline]
fn sign(t: usize, m: usize) -> f64 {
    if t < m {
        1.0
    } else {
        -1.0
    }
}

/// Solve the dual for the given kernel width and box bound.
///
/// `y.len()` must equal `points.len()` and be at least 1; the caller
/// validates inputs.
pub(crate) fn solve(points: &PackedPoints, y: &[f64], gamma: f64, params: &SmoParams) -> SmoSolution {
    let m = points.len();
    let two_m = 2 * m;
    let c = params.c;

    // exp(-gamma * h) for every possible Hamming distance h.
    let table: Vec<f64> = (0..=points.dim())
        .map(|h| (-gamma * h as f64).exp())
        .collect();

    // a[t] in [0, C]; gradient of the dual objective starts at the linear
    // term: epsilon - y for the alpha block, epsilon + y for alpha*.
    let mut a = vec![0.0f64; two_m];
    let mut g = Vec::with_capacity(two_m);
    for &yi in y {
        g.push(params.epsilon - yi);
    }
    for &yi in y {
        g.push(params.epsilon + yi);
    }

    let mut cache = RowCache::new(m.min(1024), m);
    let mut ki_scratch = vec![0.0f64; m];

    let mut iterations = 0usize;
    let mut converged = false;
    let mut up_val: f64;
    let mut down_val: f64;

    loop {
        // First-order most-violating pair. The up-set holds variables
        // that can move their block upward (alpha below C, alpha* above
        // 0), the down-set the reverse; ties keep the lowest index.
        let mut up: Option<usize> = None;
        let mut down: Option<usize> = None;
        up_val = f64::NEG_INFINITY;
        down_val = f64::INFINITY;
        for t in 0..two_m {
            let v = -sign(t, m) * g[t];
            let in_up = if t < m { a[t] < c } else { a[t] > 0.0 };
            let in_down = if t < m { a[t] > 0.0 } else { a[t] < c };
            if in_up && v > up_val {
                up_val = v;
                up = Some(t);
            }
            if in_down && v < down_val {
                down_val = v;
                down = Some(t);
            }
        }
        let (Some(i), Some(j)) = (up, down) else {
            // Unreachable when sum(s*a) = 0 and C > 0: both sets are
            // provably non-empty. Bail out defensively.
            break;
        };
        let gap = up_val - down_val;
        if gap <= params.tol {
            converged = true;
            break;
        }
        if iterations >= params.max_iter {
            break;
        }

        let (di, dj) = (i % m, j % m);
        let slot_i = cache.ensure(di, points, &table);
        ki_scratch.copy_from_slice(cache.row(slot_i));
        let ki = &ki_scratch;
        let slot_j = cache.ensure(dj, points, &table);
        let kj = cache.row(slot_j);
        let k_ij = ki[dj];

        let (old_ai, old_aj) = (a[i], a[j]);
        let si = sign(i, m);
        let sj = sign(j, m);
        // RBF diagonal is 1, so the pair curvature is 2 - 2K either way.
        let mut quad = 2.0 - 2.0 * k_ij;
        if quad <= 0.0 {
            quad = TAU;
        }

        if si != sj {
            let delta = (-g[i] - g[j]) / quad;
            let diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if diff > 0.0 {
                if a[j] < 0.0 {
                    a[j] = 0.0;
                    a[i] = diff;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = -diff;
            }
            if diff > 0.0 {
                if a[i] > c {
                    a[i] = c;
                    a[j] = c - diff;
                }
            } else if a[j] > c {
                a[j] = c;
                a[i] = c + diff;
            }
        } else {
            let delta = (g[i] - g[j]) / quad;
            let sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if sum > c {
                if a[i] > c {
                    a[i] = c;
                    a[j] = sum - c;
                }
            } else if a[j] < 0.0 {
                a[j] = 0.0;
                a[i] = sum;
            }
            if sum > c {
                if a[j] > c {
                    a[j] = c;
                    a[i] = sum - c;
                }
            } else if a[i] < 0.0 {
                a[i] = 0.0;
                a[j] = sum;
            }
        }

        let da_i = a[i] - old_ai;
        let da_j = a[j] - old_aj;
        if da_i == 0.0 && da_j == 0.0 {
            // Numerically stuck; no further progress is possible.
            break;
        }
        let (wi, wj) = (si * da_i, sj * da_j);
        for u in 0..m {
            let upd = wi * ki[u] + wj * kj[u];
            g[u] += upd;
            g[u + m] -= upd;
        }
        iterations += 1;
    }

    let intercept = if up_val.is_finite() && down_val.is_finite() {
        (up_val + down_val) / 2.0
    } else {
        0.0
    };
    let beta = (0..m).map(|t| a[t] - a[t + m]).collect();
    SmoSolution {
        beta,
        intercept,
        converged,
        iterations,
        kkt_gap: up_val - down_val,
    }
}
