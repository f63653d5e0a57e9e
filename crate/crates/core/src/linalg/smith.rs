//! Smith normal form over the integers.
//!
//! The reduction keeps the left transform as a log of elementary row
//! operations rather than a dense matrix. Cohomology computations produce
//! tall matrices (thousands of rows, a few hundred columns) where a dense
//! `U` would dominate the cost, yet only a handful of its rows and of the
//! columns of `U^{-1}` are ever needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

#[derive(Clone, Debug)]
pub(crate) enum RowOp {
    Swap(usize, usize),
    /// `row[target] += factor * row[source]`
    AddMul {
        target: usize,
        source: usize,
        factor: BigInt,
    },
    Negate(usize),
}

/// Product `U = E_k ... E_1` of elementary row operations, in application order.
#[derive(Clone, Debug)]
pub(crate) struct RowOpLog {
    dim: usize,
    ops: Vec<RowOp>,
}

impl RowOpLog {
    fn new(dim: usize) -> Self {
        RowOpLog {
            dim,
            ops: Vec::new(),
        }
    }

    /// `v <- U v`
    pub(crate) fn apply(&self, v: &mut [BigInt]) {
        debug_assert_eq!(v.len(), self.dim);
        for op in &self.ops {
            match op {
                RowOp::Swap(a, b) => v.swap(*a, *b),
                RowOp::AddMul {
                    target,
                    source,
                    factor,
                } => {
                    if !v[*source].is_zero() {
                        let add = factor * &v[*source];
                        v[*target] += add;
                    }
                }
                RowOp::Negate(i) => v[*i] = -&v[*i],
            }
        }
    }

    /// `v <- U^{-1} v`
    pub(crate) fn apply_inverse(&self, v: &mut [BigInt]) {
        debug_assert_eq!(v.len(), self.dim);
        for op in self.ops.iter().rev() {
            match op {
                RowOp::Swap(a, b) => v.swap(*a, *b),
                RowOp::AddMul {
                    target,
                    source,
                    factor,
                } => {
                    if !v[*source].is_zero() {
                        let sub = factor * &v[*source];
                        v[*target] -= sub;
                    }
                }
                RowOp::Negate(i) => v[*i] = -&v[*i],
            }
        }
    }

    /// Row `i` of `U`, i.e. `e_i^T U`.
    pub(crate) fn row(&self, i: usize) -> Vec<BigInt> {
        let mut r = vec![BigInt::zero(); self.dim];
        r[i] = BigInt::one();
        for op in self.ops.iter().rev() {
            match op {
                RowOp::Swap(a, b) => r.swap(*a, *b),
                RowOp::AddMul {
                    target,
                    source,
                    factor,
                } => {
                    if !r[*target].is_zero() {
                        let add = factor * &r[*target];
                        r[*source] += add;
                    }
                }
                RowOp::Negate(k) => r[*k] = -&r[*k],
            }
        }
        r
    }

    /// Column `i` of `U^{-1}`.
    pub(crate) fn inverse_column(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.dim];
        v[i] = BigInt::one();
        self.apply_inverse(&mut v);
        v
    }

    pub(crate) fn to_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..self.dim).map(|i| self.row(i)).collect();
        IntMatrix::from_rows(self.dim, &rows).expect("square")
    }
}

/// Result of the internal reduction: `U M V = diag(d_0, .., d_{rank-1}, 0, ..)`.
pub(crate) struct SmithReduction {
    pub(crate) diagonal: Vec<BigInt>,
    pub(crate) rank: usize,
    pub(crate) left: RowOpLog,
    pub(crate) right: Option<IntMatrix>,
}

/// Quotient rounded to nearest so that `|a - q p| <= |p| / 2`.
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(p);
    let twice: BigInt = &r * 2;
    if twice.abs() > p.abs() {
        q += 1;
    }
    q
}

struct Work {
    a: Vec<Vec<BigInt>>,
    cols: usize,
    left: RowOpLog,
    right: Option<IntMatrix>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            self.left.ops.push(RowOp::Swap(i, j));
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = &mut self.right {
            for r in 0..v.rows() {
                let x = v[(r, i)].clone();
                v[(r, i)] = v[(r, j)].clone();
                v[(r, j)] = x;
            }
        }
    }

    /// `row[target] += factor * row[source]`, touching columns from `from` on.
    fn add_row(&mut self, target: usize, source: usize, factor: BigInt, from: usize) {
        let (t, s) = if target < source {
            let (lo, hi) = self.a.split_at_mut(source);
            (&mut lo[target], &hi[0])
        } else {
            let (lo, hi) = self.a.split_at_mut(target);
            (&mut hi[0], &lo[source])
        };
        for j in from..self.cols {
            if !s[j].is_zero() {
                t[j] += &factor * &s[j];
            }
        }
        self.left.ops.push(RowOp::AddMul {
            target,
            source,
            factor,
        });
    }

    /// `col[target] += factor * col[source]`, touching rows from `from` on.
    fn add_col(&mut self, target: usize, source: usize, factor: &BigInt, from: usize) {
        for row in self.a.iter_mut().skip(from) {
            if !row[source].is_zero() {
                let add = factor * &row[source];
                row[target] += add;
            }
        }
        if let Some(v) = &mut self.right {
            for r in 0..v.rows() {
                if !v[(r, source)].is_zero() {
                    let add = factor * &v[(r, source)];
                    v[(r, target)] += add;
                }
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        self.left.ops.push(RowOp::Negate(i));
    }
}

/// Deterministic Smith reduction with smallest-magnitude pivoting.
pub(crate) fn smith_reduce(m: &IntMatrix, track_right: bool) -> SmithReduction {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work {
        a: (0..rows).map(|i| m.row(i).to_vec()).collect(),
        cols,
        left: RowOpLog::new(rows),
        right: track_right.then(|| IntMatrix::identity(cols)),
    };
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        break;
                    }
                }
            }
            if let Some((bi, bj)) = best {
                if w.a[bi][bj].abs().is_one() {
                    break;
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        loop {
            // clear column t
            let p = w.a[t][t].clone();
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&w.a[i][t], &p);
                if !q.is_zero() {
                    w.add_row(i, t, -q, t);
                }
            }
            if let Some(i) = smallest_in_column(&w.a, t, rows) {
                w.swap_rows(t, i);
                continue;
            }
            // clear row t
            let p = w.a[t][t].clone();
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&w.a[t][j], &p);
                if !q.is_zero() {
                    w.add_col(j, t, &-q, t);
                }
            }
            if let Some(j) = (t + 1..cols)
                .filter(|&j| !w.a[t][j].is_zero())
                .min_by_key(|&j| w.a[t][j].abs())
            {
                w.swap_cols(t, j);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = w.a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[i][j].is_zero() && !w.a[i][j].is_multiple_of(&p))
            });
            match offender {
                Some(i) => w.add_row(t, i, BigInt::one(), t),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let rank = t;
    let diagonal = (0..rows.min(cols))
        .map(|i| w.a[i][i].clone())
        .collect::<Vec<_>>();
    SmithReduction {
        diagonal,
        rank,
        left: w.left,
        right: w.right,
    }
}

fn smallest_in_column(a: &[Vec<BigInt>], t: usize, rows: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in t + 1..rows {
        if a[i][t].is_zero() {
            continue;
        }
        if best.is_none_or(|b| a[i][t].abs() < a[b][t].abs()) {
            best = Some(i);
        }
    }
    best
}

/// Smith decomposition `U M V = S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Diagonal entries `d_0 | d_1 | ...`, including trailing zeros.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with both transforms materialized.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let red = smith_reduce(m, true);
    SmithDecomposition {
        s: IntMatrix::diagonal(m.rows(), m.cols(), &red.diagonal),
        u: red.left.to_matrix(),
        v: red.right.expect("tracked"),
    }
}
