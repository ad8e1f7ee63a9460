use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;

/// Smith normal form with unimodular witnesses: `left * m * right = diag(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Diagonal entries, `min(rows, cols)` of them; nonnegative, and the
    /// nonzero ones form a divisibility chain followed by zeros.
    pub d: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SnfResult {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

struct Reducer<'a> {
    m: IntegerMatrix,
    left: Option<&'a mut IntegerMatrix>,
    right: Option<&'a mut IntegerMatrix>,
}

impl Reducer<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if let Some(l) = self.left.as_deref_mut() {
            l.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(r) = self.right.as_deref_mut() {
            r.swap_cols(a, b);
        }
    }

    fn add_row(&mut self, target: usize, source: usize, f: &BigInt) {
        self.m.add_row_multiple(target, source, f);
        if let Some(l) = self.left.as_deref_mut() {
            l.add_row_multiple(target, source, f);
        }
    }

    fn add_col(&mut self, target: usize, source: usize, f: &BigInt) {
        self.m.add_col_multiple(target, source, f);
        if let Some(r) = self.right.as_deref_mut() {
            r.add_col_multiple(target, source, f);
        }
    }

    fn negate_row(&mut self, r: usize) {
        self.m.negate_row(r);
        if let Some(l) = self.left.as_deref_mut() {
            l.negate_row(r);
        }
    }

    /// Position of a nonzero entry of least absolute value in the lower
    /// right block starting at `t`.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let v = &self.m[(i, j)];
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                    let done = a.is_one();
                    best = Some((i, j, a));
                    if done {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Clears row and column `t` outside the pivot. Returns false if a
    /// smaller remainder appeared and the pivot must be re-chosen.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clean = true;
        for i in t + 1..self.m.rows() {
            if self.m[(i, t)].is_zero() {
                continue;
            }
            let q = &self.m[(i, t)] / &self.m[(t, t)];
            self.add_row(i, t, &-q);
            if !self.m[(i, t)].is_zero() {
                clean = false;
            }
        }
        for j in t + 1..self.m.cols() {
            if self.m[(t, j)].is_zero() {
                continue;
            }
            let q = &self.m[(t, j)] / &self.m[(t, t)];
            self.add_col(j, t, &-q);
            if !self.m[(t, j)].is_zero() {
                clean = false;
            }
        }
        clean
    }

    fn run(&mut self) -> Vec<BigInt> {
        let diag_len = self.m.rows().min(self.m.cols());
        let mut t = 0;
        while t < diag_len {
            let Some((pi, pj)) = self.min_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            if !self.clear_cross(t) {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let p = self.m[(t, t)].clone();
            let offending = (t + 1..self.m.rows()).find(|&i| {
                (t + 1..self.m.cols()).any(|j| !(&self.m[(i, j)] % &p).is_zero())
            });
            if let Some(i) = offending {
                self.add_row(t, i, &BigInt::one());
                continue;
            }
            if self.m[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        (0..diag_len).map(|i| self.m[(i, i)].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let mut left = IntegerMatrix::identity(m.rows());
    let mut right = IntegerMatrix::identity(m.cols());
    let d = Reducer {
        m: m.clone(),
        left: Some(&mut left),
        right: Some(&mut right),
    }
    .run();
    SnfResult { d, left, right }
}

/// The SNF diagonal alone, skipping witness bookkeeping.
pub fn smith_diagonal(m: &IntegerMatrix) -> Vec<BigInt> {
    Reducer {
        m: m.clone(),
        left: None,
        right: None,
    }
    .run()
}
