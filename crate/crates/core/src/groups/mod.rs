//! Finite groups of integer matrices: closure, Cayley tables, subgroup
//! lattices and crystallographic naming.

mod naming;
mod pointgroups;
mod subgroups;

use std::collections::HashMap;

use crate::abelian::IntegerMatrix;
use crate::error::{Error, Result};

pub use naming::{canonical_label, iso_type_name, signature_3d};
pub use pointgroups::{
    appendix_b_table, lookup_point_group, point_group, point_group_entries, validate_appendix_b, PointGroupEntry,
    PublishedSubgroupRow,
};
pub use subgroups::{enumerate_subgroups, SubgroupRecord};

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// A finite subgroup of `GL_d(Z)` with its multiplication table.
/// Element 0 is always the identity.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    dimension: usize,
    generators: Vec<IntegerMatrix>,
    elements: Vec<IntegerMatrix>,
    cayley: Vec<usize>,
    inverses: Vec<usize>,
    lookup: HashMap<IntegerMatrix, usize>,
}

/// Closes `generators` under multiplication with the default element bound.
pub fn close_group(dimension: usize, generators: &[IntegerMatrix]) -> Result<FiniteMatrixGroup> {
    close_group_bounded(dimension, generators, DEFAULT_CLOSURE_BOUND)
}

pub fn close_group_bounded(dimension: usize, generators: &[IntegerMatrix], bound: usize) -> Result<FiniteMatrixGroup> {
    for g in generators {
        if g.rows() != dimension || g.cols() != dimension {
            return Err(Error::DimensionMismatch { expected: dimension, found: g.rows().max(g.cols()) });
        }
        if !g.is_unimodular() {
            return Err(Error::NotInvertible(g.to_string()));
        }
    }
    let mut elements = vec![IntegerMatrix::identity(dimension)];
    let mut lookup: HashMap<IntegerMatrix, usize> = HashMap::new();
    lookup.insert(elements[0].clone(), 0);
    let mut next = 0;
    while next < elements.len() {
        let e = elements[next].clone();
        next += 1;
        for g in generators {
            let p = &e * g;
            if !lookup.contains_key(&p) {
                if elements.len() >= bound {
                    return Err(Error::ClosureBoundExceeded(bound));
                }
                lookup.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
    }
    let n = elements.len();
    let mut cayley = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            cayley[i * n + j] = lookup[&(&elements[i] * &elements[j])];
        }
    }
    let inverses = (0..n).map(|i| (0..n).find(|&j| cayley[i * n + j] == 0).expect("group element without inverse")).collect();
    Ok(FiniteMatrixGroup { dimension, generators: generators.to_vec(), elements, cayley, inverses, lookup })
}

impl FiniteMatrixGroup {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> &[IntegerMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[IntegerMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &IntegerMatrix {
        &self.elements[i]
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Index of `a * b` in the element list.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.cayley[a * self.order() + b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn index_of(&self, m: &IntegerMatrix) -> Option<usize> {
        self.lookup.get(m).copied()
    }

    /// Indices of the generators in the element list.
    pub fn generator_indices(&self) -> Vec<usize> {
        self.generators.iter().map(|g| self.lookup[g]).collect()
    }

    /// Row `a` of the Cayley table.
    pub fn cayley_row(&self, a: usize) -> &[usize] {
        let n = self.order();
        &self.cayley[a * n..(a + 1) * n]
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup on the given element indices, as a matrix group in its own right.
    pub fn subgroup(&self, indices: impl IntoIterator<Item = usize>) -> Result<FiniteMatrixGroup> {
        let gens: Vec<IntegerMatrix> = indices.into_iter().filter(|&i| i != 0).map(|i| self.elements[i].clone()).collect();
        close_group(self.dimension, &gens)
    }

    /// Conjugates every generator by `p`, i.e. `p^-1 g p`.
    pub fn conjugate(&self, p: &IntegerMatrix) -> Result<FiniteMatrixGroup> {
        let inv = p.inverse_unimodular()?;
        let gens: Vec<IntegerMatrix> = self.generators.iter().map(|g| &(&inv * g) * p).collect();
        close_group(self.dimension, &gens)
    }
}
