//! Smith normal form over the integers.
//!
//! The dense routine tracks the unimodular transforms (and optionally their
//! inverses). [`invariant_factors`] skips the transforms and first eliminates
//! unit pivots sparsely, which is what the large coboundary matrices need.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// Result of [`smith_normal_form`]: `left * m * right` is diagonal with
/// `diagonal` on its main diagonal, and each entry divides the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith form together with the inverses of both transforms.
#[derive(Clone, Debug)]
#[allow(dead_code)]
pub(crate) struct SmithFull {
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub left_inv: IntegerMatrix,
    pub right: IntegerMatrix,
    pub right_inv: IntegerMatrix,
}

impl SmithFull {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Calc {
    a: IntegerMatrix,
    u: Option<IntegerMatrix>,
    u_inv: Option<IntegerMatrix>,
    v: Option<IntegerMatrix>,
    v_inv: Option<IntegerMatrix>,
}

impl Calc {
    fn new(a: IntegerMatrix, transforms: bool, inverses: bool) -> Self {
        let (r, c) = (a.rows(), a.cols());
        let id = |n| if transforms { Some(IntegerMatrix::identity(n)) } else { None };
        let idi = |n| if inverses { Some(IntegerMatrix::identity(n)) } else { None };
        Calc { a, u: id(r), u_inv: idi(r), v: id(c), v_inv: idi(c) }
    }

    // row[dst] += f * row[src]
    fn row_add(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_row_multiple(dst, src, f);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, f);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col_multiple(src, dst, &-f);
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(u) = &mut self.u {
            u.swap_rows(i, j);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(i, j);
        }
    }

    fn row_neg(&mut self, i: usize) {
        self.a.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(i);
        }
    }

    // col[dst] += f * col[src]
    fn col_add(&mut self, dst: usize, src: usize, f: &BigInt) {
        self.a.add_col_multiple(dst, src, f);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, f);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.add_row_multiple(src, dst, &-f);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(v) = &mut self.v {
            v.swap_cols(i, j);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(i, j);
        }
    }

    fn min_in_submatrix(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, &BigInt)> = None;
        for i in t..self.a.rows() {
            for j in t..self.a.cols() {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(_, _, b)| x.abs() < b.abs()) {
                    best = Some((i, j, x));
                    if x.abs().is_one() {
                        return Some((i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn run(&mut self) {
        let (r, c) = (self.a.rows(), self.a.cols());
        for t in 0..r.min(c) {
            let Some((pi, pj)) = self.min_in_submatrix(t) else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let mut clean = true;
                for i in t + 1..r {
                    if self.a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = self.a.get(i, t) / self.a.get(t, t);
                    self.row_add(i, t, &-q);
                    if !self.a.get(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..c {
                    if self.a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = self.a.get(t, j) / self.a.get(t, t);
                    self.col_add(j, t, &-q);
                    if !self.a.get(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    // a smaller remainder now sits in row or column t
                    let mut best = (t, t);
                    for i in t + 1..r {
                        let x = self.a.get(i, t);
                        if !x.is_zero() && x.abs() < self.a.get(best.0, best.1).abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..c {
                        let x = self.a.get(t, j);
                        if !x.is_zero() && x.abs() < self.a.get(best.0, best.1).abs() {
                            best = (t, j);
                        }
                    }
                    self.row_swap(t, best.0);
                    self.col_swap(t, best.1);
                    continue;
                }
                let pivot = self.a.get(t, t).clone();
                let offender = (t + 1..r)
                    .find(|&i| (t + 1..c).any(|j| !self.a.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    Some(i) => self.row_add(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a.get(t, t).is_negative() {
                self.row_neg(t);
            }
        }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        (0..self.a.rows().min(self.a.cols())).map(|i| self.a.get(i, i).clone()).collect()
    }
}

/// Smith normal form with unimodular transforms `U`, `V` such that
/// `U * m * V = diag(d)` and `d[i] | d[i+1]`. Zero diagonal entries, if any,
/// come last. The diagonal has length `min(rows, cols)`.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut calc = Calc::new(m.clone(), true, false);
    calc.run();
    SmithForm { diagonal: calc.diagonal(), left: calc.u.unwrap(), right: calc.v.unwrap() }
}

pub(crate) fn smith_full(m: &IntegerMatrix) -> SmithFull {
    let mut calc = Calc::new(m.clone(), true, true);
    calc.run();
    SmithFull {
        diagonal: calc.diagonal(),
        left: calc.u.unwrap(),
        left_inv: calc.u_inv.unwrap(),
        right: calc.v.unwrap(),
        right_inv: calc.v_inv.unwrap(),
    }
}

/// Sparse row-major integer matrix used to build large coboundary operators.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(i, j)`.
    pub fn add(&mut self, i: usize, j: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let e = self.entries[i].entry(j).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.entries[i].remove(&j);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.entries[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().map(BTreeMap::len).sum()
    }

    pub fn to_dense(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn from_dense(m: &IntegerMatrix) -> Self {
        let mut s = SparseMatrix::new(m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                s.add(i, j, m.get(i, j));
            }
        }
        s
    }

    /// Product of two sparse matrices.
    pub fn mul(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = SparseMatrix::new(self.rows, rhs.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (&k, a) in row {
                for (&j, b) in &rhs.entries[k] {
                    out.add(i, j, &(a * b));
                }
            }
        }
        out
    }
}

/// Nonzero invariant factors of `m` (ascending, so the count is the rank).
/// Units are eliminated sparsely before the dense Smith reduction of what is left.
pub fn invariant_factors(m: &IntegerMatrix) -> Vec<BigInt> {
    sparse_invariant_factors(SparseMatrix::from_dense(m))
}

pub fn sparse_invariant_factors(m: SparseMatrix) -> Vec<BigInt> {
    let mut rows = m.entries;
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, row) in rows.iter().enumerate() {
        for &j in row.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut active_rows: BTreeSet<usize> = (0..m.rows).filter(|&i| !rows[i].is_empty()).collect();
    let mut units = 0usize;

    loop {
        // Markowitz-style choice: shortest row holding a unit, then sparsest column.
        let mut pick: Option<(usize, usize, usize)> = None;
        for &i in &active_rows {
            let len = rows[i].len();
            if pick.is_some_and(|(_, _, cost)| len * len > cost) {
                continue;
            }
            for (&j, v) in &rows[i] {
                if v.abs().is_one() {
                    let cost = (len - 1) * (col_rows[j].len() - 1);
                    if pick.is_none_or(|(_, _, c)| cost < c) {
                        pick = Some((i, j, cost));
                    }
                }
            }
        }
        let Some((pr, pc, _)) = pick else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let p = pivot_row[&pc].clone();
        let others: Vec<usize> = col_rows[pc].iter().copied().filter(|&i| i != pr).collect();
        for i in others {
            let f = &rows[i][&pc] * &p; // p = +-1, so a/p = a*p
            for (&j, v) in &pivot_row {
                let e = rows[i].entry(j).or_insert_with(BigInt::zero);
                *e -= &f * v;
                if e.is_zero() {
                    rows[i].remove(&j);
                    col_rows[j].remove(&i);
                } else {
                    col_rows[j].insert(i);
                }
            }
            if rows[i].is_empty() {
                active_rows.remove(&i);
            }
        }
        for &j in pivot_row.keys() {
            col_rows[j].remove(&pr);
        }
        active_rows.remove(&pr);
        units += 1;
    }

    let mut out = vec![BigInt::one(); units];
    let live_rows: Vec<usize> = active_rows.into_iter().collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&j| !col_rows[j].is_empty()).collect();
    if !live_rows.is_empty() && !live_cols.is_empty() {
        let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let mut dense = IntegerMatrix::zeros(live_rows.len(), live_cols.len());
        for (k, &i) in live_rows.iter().enumerate() {
            for (j, v) in &rows[i] {
                dense.set(k, col_pos[j], v.clone());
            }
        }
        let mut calc = Calc::new(dense, false, false);
        calc.run();
        out.extend(calc.diagonal().into_iter().filter(|d| !d.is_zero()));
    }
    out
}

/// Basis (as columns) of the integer kernel `{x : m x = 0}`.
pub fn kernel_basis(m: &IntegerMatrix) -> IntegerMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let n = m.cols();
    let mut k = IntegerMatrix::zeros(n, n - r);
    for (c, j) in (r..n).enumerate() {
        for i in 0..n {
            k.set(i, c, snf.right.get(i, j).clone());
        }
    }
    k
}
