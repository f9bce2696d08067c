//! Cohomology of finite matrix groups from the normalized inhomogeneous bar
//! complex, homology of cyclic groups, the Künneth formula, derivations and
//! splittings of lattice extensions.

mod derivations;
mod splitting;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::abelian::{
    sparse_invariant_factors, subquotient, tensor_product, tor_group, direct_sum, FgAbelianGroup, IntegerMatrix,
    SparseMatrix,
};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;

pub use derivations::{derivations, Derivations};
pub use splitting::{is_splitting, splitting_classes, CrossedHom};

pub const COCHAIN_BOUND: usize = 50_000;
pub const MAX_DEGREE: usize = 3;

/// A finitely generated module over a finite matrix group.
///
/// Coordinates `0..rank` carry the moduli in `moduli` (0 for a free
/// coordinate); each group element acts by an integer matrix on them.
#[derive(Clone, Debug)]
pub struct GModule {
    moduli: Vec<BigInt>,
    action: Vec<IntegerMatrix>,
}

impl GModule {
    /// Module with the given coordinate moduli and one action matrix per
    /// group element (indexed like `g.elements()`).
    pub fn new(g: &FiniteMatrixGroup, moduli: Vec<u64>, action: Vec<IntegerMatrix>) -> Result<Self> {
        let moduli: Vec<BigInt> = moduli.into_iter().map(BigInt::from).collect();
        let m = GModule { moduli, action };
        m.validate(g)?;
        Ok(m)
    }

    /// Action given on the group's generators, extended multiplicatively.
    pub fn from_generator_action(g: &FiniteMatrixGroup, moduli: Vec<u64>, images: &[IntegerMatrix]) -> Result<Self> {
        let r = moduli.len();
        if images.len() != g.generators().len() {
            return Err(Error::InvalidModule(format!(
                "{} generator images for {} generators",
                images.len(),
                g.generators().len()
            )));
        }
        for a in images {
            if a.rows() != r || a.cols() != r {
                return Err(Error::DimensionMismatch { expected: r, found: a.rows() });
            }
        }
        let gens = g.generator_indices();
        let mut action: Vec<Option<IntegerMatrix>> = vec![None; g.order()];
        action[0] = Some(IntegerMatrix::identity(r));
        let mut queue = vec![0usize];
        while let Some(e) = queue.pop() {
            for (k, &s) in gens.iter().enumerate() {
                let p = g.mul(e, s);
                if action[p].is_none() {
                    action[p] = Some(action[e].as_ref().unwrap() * &images[k]);
                    queue.push(p);
                }
            }
        }
        let action = action.into_iter().map(|a| a.expect("generators reach every element")).collect();
        Self::new(g, moduli, action)
    }

    /// `base` with every element acting as the identity.
    pub fn trivial(g: &FiniteMatrixGroup, base: &FgAbelianGroup) -> Self {
        let moduli = Self::moduli_of(base);
        let r = moduli.len();
        GModule { moduli, action: vec![IntegerMatrix::identity(r); g.order()] }
    }

    /// `base` with each element acting by the sign of its determinant.
    pub fn sign(g: &FiniteMatrixGroup, base: &FgAbelianGroup) -> Self {
        let moduli = Self::moduli_of(base);
        let r = moduli.len();
        let action = g
            .elements()
            .iter()
            .map(|e| if e.determinant().is_one() { IntegerMatrix::identity(r) } else { IntegerMatrix::identity(r).neg() })
            .collect();
        GModule { moduli, action }
    }

    /// The lattice `Z^d` with the group acting through its own matrices.
    pub fn natural(g: &FiniteMatrixGroup) -> Self {
        GModule { moduli: vec![BigInt::zero(); g.dimension()], action: g.elements().to_vec() }
    }

    /// `(Z/n)^d` with the group acting through its own matrices reduced mod `n`.
    pub fn natural_mod(g: &FiniteMatrixGroup, n: u64) -> Self {
        GModule { moduli: vec![BigInt::from(n); g.dimension()], action: g.elements().to_vec() }
    }

    fn moduli_of(base: &FgAbelianGroup) -> Vec<BigInt> {
        let mut m = vec![BigInt::zero(); base.free_rank()];
        m.extend(base.invariant_factors().iter().cloned());
        m
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn action(&self, element: usize) -> &IntegerMatrix {
        &self.action[element]
    }

    /// The underlying abelian group.
    pub fn base(&self) -> FgAbelianGroup {
        FgAbelianGroup::from_cyclic(0, self.moduli.iter().cloned())
    }

    pub fn is_free(&self) -> bool {
        self.moduli.iter().all(Zero::is_zero)
    }

    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|m| !m.is_zero())
    }

    /// Whether `v` is zero in the module.
    pub(crate) fn is_zero_vec(&self, v: &[BigInt]) -> bool {
        v.iter().zip(&self.moduli).all(|(x, m)| if m.is_zero() { x.is_zero() } else { x.is_multiple_of(m) })
    }

    /// Reduces `v` to canonical coordinates.
    pub(crate) fn reduce(&self, v: &mut [BigInt]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if !m.is_zero() {
                *x = x.mod_floor(m);
            }
        }
    }

    /// Relation lattice generators as columns (one per torsion coordinate).
    fn relations(&self) -> IntegerMatrix {
        let tors: Vec<usize> = (0..self.rank()).filter(|&i| !self.moduli[i].is_zero()).collect();
        let mut r = IntegerMatrix::zeros(self.rank(), tors.len());
        for (c, &i) in tors.iter().enumerate() {
            r.set(i, c, self.moduli[i].clone());
        }
        r
    }

    fn maps_equal(&self, a: &IntegerMatrix, b: &IntegerMatrix) -> bool {
        let d = a.sub(b);
        (0..self.rank()).filter(|&c| !self.moduli[c].is_one()).all(|c| self.is_zero_vec(&d.column(c)))
    }

    fn validate(&self, g: &FiniteMatrixGroup) -> Result<()> {
        let r = self.rank();
        if self.action.len() != g.order() {
            return Err(Error::InvalidModule(format!("{} action matrices for a group of order {}", self.action.len(), g.order())));
        }
        for a in &self.action {
            if a.rows() != r || a.cols() != r {
                return Err(Error::DimensionMismatch { expected: r, found: a.rows() });
            }
            // torsion coordinates must map into the relation lattice
            for c in 0..r {
                if self.moduli[c].is_zero() {
                    continue;
                }
                let image: Vec<BigInt> = a.column(c).into_iter().map(|x| x * &self.moduli[c]).collect();
                if !self.is_zero_vec(&image) {
                    return Err(Error::InvalidModule(format!("{a} does not preserve the torsion relations")));
                }
            }
        }
        if !self.maps_equal(&self.action[0], &IntegerMatrix::identity(r)) {
            return Err(Error::InvalidModule("identity does not act trivially".into()));
        }
        for x in 0..g.order() {
            for y in 0..g.order() {
                let lhs = &self.action[g.mul(x, y)];
                let rhs = &self.action[x] * &self.action[y];
                if !self.maps_equal(lhs, &rhs) {
                    return Err(Error::InvalidModule(format!(
                        "action is not multiplicative at elements {x}, {y}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Number of normalized `n`-cochain coordinates: `(|G|-1)^n * rank`.
fn cochain_count(g: &FiniteMatrixGroup, m: &GModule, n: usize) -> usize {
    (g.order() - 1).pow(n as u32) * m.rank()
}

/// Matrix of the coboundary `C^n -> C^{n+1}` of the normalized bar complex.
///
/// Cochains are functions on tuples of non-identity elements; a tuple
/// `(g_1, ..., g_n)` with element indices `e_i` sits at
/// `sum (e_i - 1) * (|G|-1)^(n-i)`, times the module rank plus the coordinate.
pub fn coboundary_matrix(g: &FiniteMatrixGroup, m: &GModule, n: usize) -> SparseMatrix {
    let base = g.order() - 1;
    let r = m.rank();
    let rows = cochain_count(g, m, n + 1);
    let cols = cochain_count(g, m, n);
    let mut out = SparseMatrix::new(rows, cols);
    let tuple_index = |t: &[usize]| t.iter().fold(0usize, |acc, &e| acc * base + (e - 1));
    let one = BigInt::one();
    let minus_one = -BigInt::one();
    let mut t = vec![1usize; n + 1];
    for row_block in 0..rows / r.max(1) {
        // decode row_block into the (n+1)-tuple
        let mut k = row_block;
        for slot in t.iter_mut().rev() {
            *slot = k % base + 1;
            k /= base;
        }
        // g_1 . f(g_2, ..., g_{n+1})
        let a = m.action(t[0]);
        let c0 = tuple_index(&t[1..]);
        for i in 0..r {
            for j in 0..r {
                out.add(row_block * r + i, c0 * r + j, a.get(i, j));
            }
        }
        // alternating face terms
        for i in 1..=n {
            let prod = g.mul(t[i - 1], t[i]);
            if prod == 0 {
                continue;
            }
            let mut face: Vec<usize> = Vec::with_capacity(n);
            face.extend_from_slice(&t[..i - 1]);
            face.push(prod);
            face.extend_from_slice(&t[i + 1..]);
            let c = tuple_index(&face);
            let sign = if i % 2 == 0 { &one } else { &minus_one };
            for j in 0..r {
                out.add(row_block * r + j, c * r + j, sign);
            }
        }
        let c = tuple_index(&t[..n]);
        let sign = if (n + 1).is_multiple_of(2) { &one } else { &minus_one };
        for j in 0..r {
            out.add(row_block * r + j, c * r + j, sign);
        }
    }
    out
}

fn block_relations(m: &GModule, copies: usize) -> IntegerMatrix {
    let r = m.relations();
    let mut out = IntegerMatrix::zeros(m.rank() * copies, r.cols() * copies);
    for b in 0..copies {
        for i in 0..r.rows() {
            for j in 0..r.cols() {
                out.set(b * m.rank() + i, b * r.cols() + j, r.get(i, j).clone());
            }
        }
    }
    out
}

/// `H^n(G; M)` from the normalized bar complex.
pub fn group_cohomology(g: &FiniteMatrixGroup, m: &GModule, n: usize) -> Result<FgAbelianGroup> {
    if n > MAX_DEGREE {
        return Err(Error::DegreeTooHigh(n));
    }
    let size = g.order().checked_pow(n as u32).and_then(|x| x.checked_mul(m.rank())).unwrap_or(usize::MAX);
    if size > COCHAIN_BOUND {
        return Err(Error::CochainBoundExceeded { size, bound: COCHAIN_BOUND });
    }
    if m.rank() == 0 {
        return Ok(FgAbelianGroup::trivial());
    }
    let delta = coboundary_matrix(g, m, n);
    let prev = if n == 0 { SparseMatrix::new(cochain_count(g, m, 0), 0) } else { coboundary_matrix(g, m, n - 1) };
    let cn = cochain_count(g, m, n);
    if m.is_free() {
        let rank_delta = sparse_invariant_factors(delta).len();
        let prev_factors = sparse_invariant_factors(prev);
        let free = cn - rank_delta - prev_factors.len();
        return Ok(FgAbelianGroup::from_cyclic(free, prev_factors));
    }
    let source_copies = cn / m.rank();
    let target_copies = cochain_count(g, m, n + 1) / m.rank();
    Ok(subquotient(
        &delta.to_dense(),
        &block_relations(m, target_copies),
        &prev.to_dense(),
        &block_relations(m, source_copies),
    ))
}

/// `H_i(Z/m; Z)`: `Z` in degree 0, `Z/m` in odd degrees, 0 in positive even degrees.
pub fn group_homology_cyclic(m: u64, i: usize) -> FgAbelianGroup {
    assert!(m >= 1, "cyclic group order must be positive");
    match i {
        0 => FgAbelianGroup::free(1),
        i if i % 2 == 1 => FgAbelianGroup::cyclic(m),
        _ => FgAbelianGroup::trivial(),
    }
}

/// `H^i(Z/m; Z)` with trivial action: `Z` in degree 0, `Z/m` in positive
/// even degrees, 0 in odd degrees.
pub fn group_cohomology_cyclic(m: u64, i: usize) -> FgAbelianGroup {
    match i {
        0 => FgAbelianGroup::free(1),
        i if i % 2 == 0 => FgAbelianGroup::cyclic(m),
        _ => FgAbelianGroup::trivial(),
    }
}

/// Künneth formula for the homology of a product:
/// `⊕_{p+q=s} H_p(A) ⊗ H_q(B) ⊕ ⊕_{p+q=s-1} Tor(H_p(A), H_q(B))`.
///
/// Degrees missing from either list count as zero.
pub fn kunneth_homology(ha: &[FgAbelianGroup], hb: &[FgAbelianGroup], s: usize) -> FgAbelianGroup {
    let get = |h: &[FgAbelianGroup], i: usize| h.get(i).cloned().unwrap_or_default();
    let mut out = FgAbelianGroup::trivial();
    for p in 0..=s {
        out = direct_sum(&out, &tensor_product(&get(ha, p), &get(hb, s - p)));
    }
    if s >= 1 {
        for p in 0..s {
            out = direct_sum(&out, &tor_group(&get(ha, p), &get(hb, s - 1 - p)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close_group, point_group};

    fn cyclic(n: usize) -> FiniteMatrixGroup {
        // rotation of order n in the plane, or -1 in dimension 1
        let gen = match n {
            1 => IntegerMatrix::identity(1),
            2 => IntegerMatrix::from_rows(&[[-1]]),
            3 => IntegerMatrix::from_rows(&[[0, -1], [1, -1]]),
            4 => IntegerMatrix::from_rows(&[[0, -1], [1, 0]]),
            6 => IntegerMatrix::from_rows(&[[1, -1], [1, 0]]),
            _ => panic!("no integer rotation of order {n}"),
        };
        close_group(gen.rows(), &[gen]).unwrap()
    }

    #[test]
    fn delta_squared_vanishes() {
        let g = point_group("C_3v").unwrap();
        let m = GModule::natural(&g);
        for n in 0..2 {
            let d0 = coboundary_matrix(&g, &m, n);
            let d1 = coboundary_matrix(&g, &m, n + 1);
            assert_eq!(d1.mul(&d0).nonzeros(), 0);
        }
    }

    #[test]
    fn invariants_in_degree_zero() {
        let g = cyclic(2);
        let z = FgAbelianGroup::free(1);
        assert_eq!(group_cohomology(&g, &GModule::trivial(&g, &z), 0).unwrap(), z);
        assert_eq!(group_cohomology(&g, &GModule::sign(&g, &z), 0).unwrap(), FgAbelianGroup::trivial());
    }

    #[test]
    fn cyclic_groups_match_periodic_resolution() {
        for n in [2, 3, 4, 6] {
            let g = cyclic(n);
            let m = GModule::trivial(&g, &FgAbelianGroup::free(1));
            for deg in 0..=3 {
                assert_eq!(
                    group_cohomology(&g, &m, deg).unwrap(),
                    group_cohomology_cyclic(n as u64, deg),
                    "C_{n} degree {deg}"
                );
            }
        }
    }

    #[test]
    fn torsion_coefficients() {
        // H^n(C_2; Z/2) = Z/2 in every degree
        let g = cyclic(2);
        let m = GModule::trivial(&g, &FgAbelianGroup::cyclic(2));
        for deg in 0..=3 {
            assert_eq!(group_cohomology(&g, &m, deg).unwrap(), FgAbelianGroup::cyclic(2));
        }
        // C_2 acting by -1 on Z/3: all cohomology vanishes (orders coprime)
        let m = GModule::sign(&g, &FgAbelianGroup::cyclic(3));
        for deg in 0..=3 {
            assert_eq!(group_cohomology(&g, &m, deg).unwrap(), FgAbelianGroup::trivial());
        }
    }

    #[test]
    fn klein_four_on_free_lattice() {
        let g = point_group("C_2v").unwrap();
        let z2 = FgAbelianGroup::free(2);
        assert_eq!(group_cohomology(&g, &GModule::trivial(&g, &z2), 1).unwrap(), FgAbelianGroup::trivial());
    }

    #[test]
    fn bounds() {
        let g = point_group("O_h").unwrap();
        let m = GModule::natural(&g);
        assert!(matches!(group_cohomology(&g, &m, 3), Err(Error::CochainBoundExceeded { .. })));
        assert_eq!(group_cohomology(&g, &m, 4).unwrap_err(), Error::DegreeTooHigh(4));
    }

    #[test]
    fn kunneth_for_two_cyclic_groups() {
        let h: Vec<FgAbelianGroup> = (0..4).map(|i| group_homology_cyclic(2, i)).collect();
        assert_eq!(kunneth_homology(&h, &h, 0), FgAbelianGroup::free(1));
        assert_eq!(kunneth_homology(&h, &h, 1), FgAbelianGroup::z2_power(2));
        let h3: Vec<FgAbelianGroup> = (0..4).map(|i| group_homology_cyclic(3, i)).collect();
        // H_2(C_2 x C_3) = Tor(Z/2, Z/3) = 0
        assert_eq!(kunneth_homology(&h, &h3, 2), FgAbelianGroup::trivial());
    }
}
