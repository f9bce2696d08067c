//! Finitely generated abelian groups in invariant-factor form, and the
//! integer linear algebra underneath them.

mod matrix;
mod snf;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{parse_err, Error, Result};

pub use matrix::IntegerMatrix;
pub use snf::{invariant_factors, kernel_basis, smith_normal_form, sparse_invariant_factors, SmithForm, SparseMatrix};
pub(crate) use snf::smith_full;

/// `Z^free_rank x Z/d1 x ... x Z/dk` with `1 < d1 | d2 | ... | dk`.
///
/// The representation is canonical, so `==` is isomorphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FgAbelianGroup {
    free_rank: usize,
    invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, invariant_factors: Vec::new() }
    }

    pub fn cyclic(order: u64) -> Self {
        Self::new(0, &[order])
    }

    /// `(Z/2)^k`.
    pub fn z2_power(k: usize) -> Self {
        Self::new(0, &vec![2; k])
    }

    /// Builds the group `Z^free_rank + sum Z/c` for arbitrary cyclic orders `c`.
    /// An order of 0 contributes a free summand and an order of 1 nothing.
    pub fn new(free_rank: usize, cyclic_orders: &[u64]) -> Self {
        Self::from_cyclic(free_rank, cyclic_orders.iter().map(|&c| BigInt::from(c)))
    }

    pub fn from_cyclic(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut free = free_rank;
        let mut torsion = Vec::new();
        for o in orders {
            let o = o.abs();
            if o.is_zero() {
                free += 1;
            } else if !o.is_one() {
                torsion.push(o);
            }
        }
        // pairwise (gcd, lcm) leaves entry i dividing every later entry
        for i in 0..torsion.len() {
            for j in i + 1..torsion.len() {
                let g = torsion[i].gcd(&torsion[j]);
                let l = torsion[i].lcm(&torsion[j]);
                torsion[i] = g;
                torsion[j] = l;
            }
        }
        torsion.retain(|d| !d.is_one());
        FgAbelianGroup { free_rank: free, invariant_factors: torsion }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Number of `Z/2` factors when the group is `(Z/2)^k`, else `None`.
    pub fn z2_rank(&self) -> Option<usize> {
        (self.free_rank == 0 && self.invariant_factors.iter().all(|d| *d == BigInt::from(2)))
            .then_some(self.invariant_factors.len())
    }

    /// Torsion subgroup.
    pub fn torsion(&self) -> Self {
        FgAbelianGroup { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    /// Number of summands in the canonical decomposition.
    pub fn num_summands(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" x "))
    }
}

/// Serialized as its canonical rendering.
impl serde::Serialize for FgAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for FgAbelianGroup {
    type Err = Error;

    /// Accepts the rendering produced by `Display`, plus bare `Z` for `Z^1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::trivial());
        }
        let mut free = 0usize;
        let mut orders = Vec::new();
        for part in s.split(" x ") {
            let part = part.trim();
            if part == "Z" {
                free += 1;
            } else if let Some(r) = part.strip_prefix("Z^") {
                free += r.parse::<usize>().map_err(|_| parse_err(format!("bad free rank in `{part}`")))?;
            } else if let Some(d) = part.strip_prefix("Z/") {
                let d: BigInt = d.parse().map_err(|_| parse_err(format!("bad cyclic order in `{part}`")))?;
                if !d.is_positive() {
                    return Err(parse_err(format!("cyclic order must be positive in `{part}`")));
                }
                orders.push(d);
            } else {
                return Err(parse_err(format!("unrecognised summand `{part}`")));
            }
        }
        Ok(Self::from_cyclic(free, orders))
    }
}

/// Cokernel of `relations : Z^rows -> Z^generators`, one relation per row.
pub fn group_from_relations(generators: usize, relations: &IntegerMatrix) -> FgAbelianGroup {
    assert_eq!(relations.cols(), generators, "relation matrix must have one column per generator");
    let factors = invariant_factors(relations);
    let free = generators - factors.len();
    FgAbelianGroup::from_cyclic(free, factors)
}

pub fn direct_sum(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    FgAbelianGroup::from_cyclic(
        a.free_rank + b.free_rank,
        a.invariant_factors.iter().chain(&b.invariant_factors).cloned(),
    )
}

/// `a ⊗_{Z/2} b` for two `Z/2` vector spaces.
pub fn tensor_over_z2(a: &FgAbelianGroup, b: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    let ra = a.z2_rank().ok_or_else(|| Error::NotZ2VectorSpace(a.to_string()))?;
    let rb = b.z2_rank().ok_or_else(|| Error::NotZ2VectorSpace(b.to_string()))?;
    Ok(FgAbelianGroup::z2_power(ra * rb))
}

/// `Hom(a, b)` for finite `a`. The free part of `b` receives no maps from a
/// finite group, so only the torsion of `b` contributes.
pub fn hom_group(a: &FgAbelianGroup, b: &FgAbelianGroup) -> Result<FgAbelianGroup> {
    if !a.is_finite() {
        return Err(Error::InfiniteGroup(a.to_string()));
    }
    let orders = a
        .invariant_factors
        .iter()
        .flat_map(|m| b.invariant_factors.iter().map(move |n| m.gcd(n)));
    Ok(FgAbelianGroup::from_cyclic(0, orders))
}

/// `Tor(a, b)` for finitely generated groups.
pub fn tor_group(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    let orders = a
        .invariant_factors
        .iter()
        .flat_map(|m| b.invariant_factors.iter().map(move |n| m.gcd(n)));
    FgAbelianGroup::from_cyclic(0, orders)
}

/// `a ⊗_Z b` for finitely generated groups.
pub fn tensor_product(a: &FgAbelianGroup, b: &FgAbelianGroup) -> FgAbelianGroup {
    let mut orders: Vec<BigInt> = Vec::new();
    for m in &a.invariant_factors {
        orders.extend(std::iter::repeat_n(m.clone(), b.free_rank));
        orders.extend(b.invariant_factors.iter().map(|n| m.gcd(n)));
    }
    for n in &b.invariant_factors {
        orders.extend(std::iter::repeat_n(n.clone(), a.free_rank));
    }
    FgAbelianGroup::from_cyclic(a.free_rank * b.free_rank, orders)
}

/// Subquotient `ker(delta mod target_rel) / (im prev + im source_rel)`.
///
/// `delta` maps `Z^N -> Z^M`; `target_rel` (M x a) and `source_rel` (N x b)
/// list relation generators as columns, and `prev` (N x P) is the incoming map.
/// This is the homology of a complex of finitely generated groups presented as
/// quotients of free groups.
pub(crate) fn subquotient(
    delta: &IntegerMatrix,
    target_rel: &IntegerMatrix,
    prev: &IntegerMatrix,
    source_rel: &IntegerMatrix,
) -> FgAbelianGroup {
    let n = delta.cols();
    let kernel = kernel_basis(&delta.hstack(target_rel)).row_block(0..n);
    sublattice_quotient(&kernel, &prev.hstack(source_rel))
}

/// `span(lattice) / span(sub)` where every column of `sub` lies in the span
/// of the columns of `lattice`.
pub(crate) fn sublattice_quotient(lattice: &IntegerMatrix, sub: &IntegerMatrix) -> FgAbelianGroup {
    // column basis of the lattice: k_i = d_i * (U^-1)_i
    let s = smith_full(lattice);
    let r = s.rank();
    let coords = &s.left * sub;
    let mut rel = IntegerMatrix::zeros(sub.cols(), r);
    for j in 0..sub.cols() {
        for i in 0..r {
            let (q, rem) = coords.get(i, j).div_rem(&s.diagonal[i]);
            debug_assert!(rem.is_zero(), "generator outside the lattice");
            rel.set(j, i, q);
        }
        debug_assert!((r..coords.rows()).all(|i| coords.get(i, j).is_zero()));
    }
    group_from_relations(r, &rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(FgAbelianGroup::trivial().to_string(), "0");
        assert_eq!(FgAbelianGroup::new(1, &[4, 2]).to_string(), "Z^1 x Z/2 x Z/4");
        assert_eq!(FgAbelianGroup::z2_power(2).to_string(), "Z/2 x Z/2");
        let g: FgAbelianGroup = "Z^2 x Z/6 x Z/3".parse().unwrap();
        assert_eq!(g, FgAbelianGroup::new(2, &[3, 3, 2]));
        assert_eq!("Z".parse::<FgAbelianGroup>().unwrap(), FgAbelianGroup::free(1));
    }

    #[test]
    fn canonical_chain() {
        assert_eq!(FgAbelianGroup::new(0, &[2, 3]), FgAbelianGroup::cyclic(6));
        assert_eq!(FgAbelianGroup::new(0, &[4, 6]).invariant_factors(), &[BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn tensor_and_tor() {
        let z = FgAbelianGroup::free(1);
        let z4 = FgAbelianGroup::cyclic(4);
        let z6 = FgAbelianGroup::cyclic(6);
        assert_eq!(tensor_product(&z, &z4), z4);
        assert_eq!(tensor_product(&z4, &z6), FgAbelianGroup::cyclic(2));
        assert_eq!(tor_group(&z, &z4), FgAbelianGroup::trivial());
        assert_eq!(tor_group(&z4, &z6), FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn subquotient_of_simple_complex() {
        // Z --2--> Z --0--> Z : homology in the middle is Z/2
        let delta = IntegerMatrix::zeros(1, 1);
        let prev = IntegerMatrix::from_rows(&[[2]]);
        let g = subquotient(&delta, &IntegerMatrix::zeros(1, 0), &prev, &IntegerMatrix::zeros(1, 0));
        assert_eq!(g, FgAbelianGroup::cyclic(2));
        // Z/4 --x2--> Z/4 : kernel {0,2} ≅ Z/2
        let delta = IntegerMatrix::from_rows(&[[2]]);
        let rel = IntegerMatrix::from_rows(&[[4]]);
        let g = subquotient(&delta, &rel, &IntegerMatrix::zeros(1, 0), &rel);
        assert_eq!(g, FgAbelianGroup::cyclic(2));
    }
}
