//! Exact sparse row reduction over the rationals.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type SparseRow = BTreeMap<usize, BigRational>;

/// Rows in echelon form, keyed by leading column; each stored row has a 1 in
/// its leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `row` against the stored pivots; returns the leading column of
    /// the remainder, or `None` if the row is dependent.
    pub fn reduce(&self, mut row: SparseRow) -> (Option<usize>, SparseRow) {
        row.retain(|_, v| !v.is_zero());
        let mut floor = 0;
        loop {
            let Some((&c, _)) = row.range(floor..).next() else { return (None, row) };
            let Some(p) = self.pivots.get(&c) else { return (Some(c), row) };
            let f = row.remove(&c).unwrap();
            for (&j, v) in p.range(c + 1..) {
                let e = row.entry(j).or_insert_with(BigRational::zero);
                *e -= &f * v;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
            floor = c + 1;
        }
    }

    /// Adds a row; returns whether it was independent of the previous rows.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let (lead, mut row) = self.reduce(row);
        let Some(c) = lead else { return false };
        let inv = row[&c].recip();
        for v in row.values_mut() {
            *v *= &inv;
        }
        self.pivots.insert(c, row);
        true
    }
}

pub fn rank(rows: impl IntoIterator<Item = SparseRow>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn dense_to_sparse(row: &[BigRational]) -> SparseRow {
    row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(i, v)| (i, v.clone())).collect()
}

/// One solution of `a z = b` (free variables set to zero), or `None` when
/// inconsistent.
pub fn solve(a: &[SparseRow], b: &[BigRational], cols: usize) -> Option<Vec<BigRational>> {
    let mut e = Echelon::new();
    for (row, rhs) in a.iter().zip(b) {
        let mut r = row.clone();
        if !rhs.is_zero() {
            r.insert(cols, rhs.clone());
        }
        let (lead, _) = e.reduce(r.clone());
        if lead == Some(cols) {
            return None;
        }
        e.insert(r);
    }
    let mut z = vec![BigRational::zero(); cols];
    for (&c, row) in e.pivots.iter().rev() {
        let mut v = row.get(&cols).cloned().unwrap_or_else(BigRational::zero);
        for (&j, coef) in row.range(c + 1..cols) {
            v -= coef * &z[j];
        }
        debug_assert!(row[&c].is_one());
        z[c] = v;
    }
    Some(z)
}
