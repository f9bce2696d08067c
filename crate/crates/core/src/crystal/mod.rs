//! Crystallographic groups as extensions of a finite point group by a
//! lattice, their element arithmetic, symmorphism, and the published tables.

mod tables;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{smith_normal_form, IntegerMatrix};
use crate::error::{Error, Result};
use crate::groups::{close_group, FiniteMatrixGroup};

pub use tables::{
    amalgamated_products, involution_marker, planar_signature, spacegroup_table, spacegroup_table_query,
    validate_amalgamated_products, validate_spacegroup_table, validate_wallpaper_subgroups, validate_wallpaper_table,
    wallpaper_groups, wallpaper_info, wallpaper_subgroups, AmalgamatedProduct, SpaceGroupRow, WallpaperInfo,
    WallpaperSubgroupRow,
};

pub type RationalVector = Vec<BigRational>;

/// Fractional part, in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

pub fn frac_vec(v: &[BigRational]) -> RationalVector {
    v.iter().map(frac).collect()
}

fn is_integral(v: &[BigRational]) -> bool {
    v.iter().all(|x| x.is_integer())
}

fn sub_vec(a: &[BigRational], b: &[BigRational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_vec(a: &[BigRational], b: &[BigRational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn zero_vec(d: usize) -> RationalVector {
    vec![BigRational::zero(); d]
}

/// An isometry `(a, u)`: `x -> a x + u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineElement {
    pub point: IntegerMatrix,
    pub translation: RationalVector,
}

impl AffineElement {
    pub fn new(point: IntegerMatrix, translation: RationalVector) -> Self {
        AffineElement { point, translation }
    }

    pub fn translation(v: &[i64]) -> Self {
        AffineElement {
            point: IntegerMatrix::identity(v.len()),
            translation: v.iter().map(|&x| BigRational::from_integer(x.into())).collect(),
        }
    }

    pub fn linear(point: IntegerMatrix) -> Self {
        let d = point.rows();
        AffineElement { point, translation: zero_vec(d) }
    }

    pub fn identity(d: usize) -> Self {
        Self::linear(IntegerMatrix::identity(d))
    }

    pub fn dimension(&self) -> usize {
        self.point.rows()
    }

    /// `(a, u)(b, v) = (ab, u + a v)`.
    pub fn compose(&self, other: &AffineElement) -> AffineElement {
        AffineElement {
            point: &self.point * &other.point,
            translation: add_vec(&self.translation, &self.point.mul_rational_vec(&other.translation)),
        }
    }

    /// `(a, u)^-1 = (a^-1, -a^-1 u)`.
    pub fn inverse(&self) -> Result<AffineElement> {
        let inv = self.point.inverse_unimodular()?;
        let t = inv.mul_rational_vec(&self.translation).into_iter().map(|x| -x).collect();
        Ok(AffineElement { point: inv, translation: t })
    }

    pub fn is_identity(&self) -> bool {
        self.point.is_identity() && self.translation.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.translation.iter().map(|x| x.to_string()).collect();
        write!(f, "({}, ({}))", self.point, t.join(","))
    }
}

/// An extension `0 -> Z^d -> G -> P -> 1` given by a point group `P` in
/// `GL_d(Z)` and a vector system `τ : P -> Q^d / Z^d`.
#[derive(Clone, Debug)]
pub struct CrystallographicGroup {
    dimension: usize,
    point_group: FiniteMatrixGroup,
    vector_system: Vec<RationalVector>,
    name: Option<String>,
}

impl CrystallographicGroup {
    /// Builds the group from a vector system listed for every point-group
    /// element; values are reduced modulo the lattice and the cocycle
    /// condition is checked.
    pub fn from_vector_system(
        point_group: FiniteMatrixGroup,
        vector_system: Vec<RationalVector>,
        name: Option<String>,
    ) -> Result<Self> {
        let d = point_group.dimension();
        if vector_system.len() != point_group.order() {
            return Err(Error::InvalidCocycle(format!(
                "{} translations for a point group of order {}",
                vector_system.len(),
                point_group.order()
            )));
        }
        if let Some(v) = vector_system.iter().find(|v| v.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: v.len() });
        }
        let vector_system = vector_system.iter().map(|v| frac_vec(v)).collect();
        let g = CrystallographicGroup { dimension: d, point_group, vector_system, name };
        g.check_cocycle()?;
        Ok(g)
    }

    /// Stores a vector system without checking the cocycle condition; meant for
    /// negative controls of [`check_cocycle`](Self::check_cocycle).
    pub fn from_vector_system_unchecked(
        point_group: FiniteMatrixGroup,
        vector_system: Vec<RationalVector>,
        name: Option<String>,
    ) -> Self {
        let dimension = point_group.dimension();
        CrystallographicGroup { dimension, point_group, vector_system, name }
    }

    /// Builds the group generated by affine elements together with the lattice.
    /// Fails with `InvalidCocycle` when the generators do not close to a group
    /// whose point group has one translation class per element.
    pub fn from_generators(d: usize, generators: &[AffineElement], name: Option<String>) -> Result<Self> {
        for g in generators {
            if g.dimension() != d || g.translation.len() != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.dimension() });
            }
        }
        let linear: Vec<IntegerMatrix> = generators.iter().map(|g| g.point.clone()).collect();
        let point_group = close_group(d, &linear)?;
        let mut vs: Vec<Option<RationalVector>> = vec![None; point_group.order()];
        vs[0] = Some(zero_vec(d));
        let mut queue = vec![AffineElement::identity(d)];
        while let Some(e) = queue.pop() {
            for g in generators {
                let p = e.compose(g);
                let idx = point_group.index_of(&p.point).expect("point group is closed");
                let t = frac_vec(&p.translation);
                match &vs[idx] {
                    None => {
                        vs[idx] = Some(t.clone());
                        queue.push(AffineElement::new(p.point, t));
                    }
                    Some(old) if *old != t => {
                        return Err(Error::InvalidCocycle(format!(
                            "point element {} receives translations {:?} and {:?}",
                            p.point,
                            fmt_vec(old),
                            fmt_vec(&t)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        Self::from_vector_system(point_group, vs.into_iter().map(Option::unwrap).collect(), name)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn point_group(&self) -> &FiniteMatrixGroup {
        &self.point_group
    }

    pub fn vector_system(&self) -> &[RationalVector] {
        &self.vector_system
    }

    /// `τ` at the point-group element with the given index.
    pub fn tau(&self, element: usize) -> &RationalVector {
        &self.vector_system[element]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Checks `τ(ab) ≡ τ(a) + a τ(b)` on all pairs and `τ(1) ≡ 0`.
    pub fn check_cocycle(&self) -> Result<()> {
        if !is_integral(&self.vector_system[0]) {
            return Err(Error::InvalidCocycle("identity carries a fractional translation".into()));
        }
        let n = self.point_group.order();
        for a in 0..n {
            for b in 0..n {
                let ab = self.point_group.mul(a, b);
                let rhs = add_vec(&self.vector_system[a], &self.point_group.element(a).mul_rational_vec(&self.vector_system[b]));
                if !is_integral(&sub_vec(&self.vector_system[ab], &rhs)) {
                    return Err(Error::InvalidCocycle(format!(
                        "τ(ab) differs from τ(a) + a τ(b) for a = {}, b = {}",
                        self.point_group.element(a),
                        self.point_group.element(b)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership test: the point part lies in the point group and the
    /// translation agrees with the vector system modulo the lattice.
    pub fn contains(&self, e: &AffineElement) -> bool {
        self.point_group
            .index_of(&e.point)
            .is_some_and(|i| e.translation.len() == self.dimension && is_integral(&sub_vec(&e.translation, &self.vector_system[i])))
    }

    fn require(&self, e: &AffineElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::ElementNotInGroup(e.to_string()))
        }
    }

    /// The coset representative `(a, τ(a))`.
    pub fn representative(&self, element: usize) -> AffineElement {
        AffineElement::new(self.point_group.element(element).clone(), self.vector_system[element].clone())
    }

    /// Generators of the group: the lattice basis and one representative per
    /// point-group generator.
    pub fn generators(&self) -> Vec<AffineElement> {
        let d = self.dimension;
        let mut out: Vec<AffineElement> = (0..d)
            .map(|i| {
                let mut v = vec![0i64; d];
                v[i] = 1;
                AffineElement::translation(&v)
            })
            .collect();
        out.extend(self.point_group.generator_indices().into_iter().map(|i| self.representative(i)));
        out
    }
}

fn fmt_vec(v: &[BigRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

/// Product in `g`, after checking both factors belong to it.
pub fn multiply(g: &CrystallographicGroup, e1: &AffineElement, e2: &AffineElement) -> Result<AffineElement> {
    g.require(e1)?;
    g.require(e2)?;
    Ok(e1.compose(e2))
}

pub fn inverse(g: &CrystallographicGroup, e: &AffineElement) -> Result<AffineElement> {
    g.require(e)?;
    e.inverse()
}

/// `Z^d ⋊ P` with zero vector system.
pub fn semidirect_product(d: usize, point: &FiniteMatrixGroup) -> Result<CrystallographicGroup> {
    if point.dimension() != d {
        return Err(Error::DimensionMismatch { expected: d, found: point.dimension() });
    }
    CrystallographicGroup::from_vector_system(point.clone(), vec![zero_vec(d); point.order()], None)
}

/// Outcome of a symmorphism test. When the extension splits, `shift` is an
/// origin `s` with `τ(a) ≡ s - a s` for every point-group element `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmorphismWitness {
    pub symmorphic: bool,
    pub shift: Option<RationalVector>,
}

/// Decides whether the vector system is a coboundary.
///
/// The congruences `(I - a_i) s ≡ τ(a_i)` for the point-group generators are
/// solved exactly through the Smith form of the stacked matrices `I - a_i`.
pub fn is_symmorphic(g: &CrystallographicGroup) -> Result<SymmorphismWitness> {
    g.check_cocycle()?;
    let d = g.dimension;
    let gens = g.point_group.generator_indices();
    let k = gens.len();
    let mut m = IntegerMatrix::zeros(k * d, d);
    let mut t: Vec<BigRational> = Vec::with_capacity(k * d);
    for (b, &a) in gens.iter().enumerate() {
        let mat = g.point_group.element(a);
        for i in 0..d {
            for j in 0..d {
                let id = if i == j { BigInt::one() } else { BigInt::zero() };
                m.set(b * d + i, j, id - mat.get(i, j));
            }
        }
        t.extend(g.vector_system[a].iter().cloned());
    }
    let snf = smith_normal_form(&m);
    let ut: Vec<BigRational> = (0..k * d)
        .map(|i| (0..k * d).fold(BigRational::zero(), |acc, j| acc + BigRational::from_integer(snf.left.get(i, j).clone()) * &t[j]))
        .collect();
    let r = snf.rank();
    if !ut[r..].iter().all(|x| x.is_integer()) {
        return Ok(SymmorphismWitness { symmorphic: false, shift: None });
    }
    let y: Vec<BigRational> = (0..d)
        .map(|i| if i < r { &ut[i] / BigRational::from_integer(snf.diagonal[i].clone()) } else { BigRational::zero() })
        .collect();
    let s = frac_vec(&snf.right.mul_rational_vec(&y));
    debug_assert!(shift_works(g, &s));
    Ok(SymmorphismWitness { symmorphic: true, shift: Some(s) })
}

/// Whether `τ(a) ≡ s - a s` holds for every point-group element.
pub fn shift_works(g: &CrystallographicGroup, s: &[BigRational]) -> bool {
    (0..g.point_group.order()).all(|a| {
        let rhs = sub_vec(s, &g.point_group.element(a).mul_rational_vec(s));
        is_integral(&sub_vec(&g.vector_system[a], &rhs))
    })
}

/// Least common multiple of the denominators in the vector system.
pub fn denominator_bound(g: &CrystallographicGroup) -> BigInt {
    g.vector_system.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Whether all listed order-two elements commute pairwise.
pub fn commuting_involutions_check(generators: &[IntegerMatrix]) -> Result<bool> {
    for g in generators {
        if g.is_identity() || !(g * g).is_identity() {
            return Err(Error::NotOrderTwo(g.to_string()));
        }
    }
    Ok(generators.iter().enumerate().all(|(i, a)| generators[i + 1..].iter().all(|b| a * b == b * a)))
}

/// Affine version of [`commuting_involutions_check`].
pub fn commuting_affine_involutions_check(generators: &[AffineElement]) -> Result<bool> {
    for g in generators {
        if g.is_identity() || !g.compose(g).is_identity() {
            return Err(Error::NotOrderTwo(g.to_string()));
        }
    }
    Ok(generators
        .iter()
        .enumerate()
        .all(|(i, a)| generators[i + 1..].iter().all(|b| a.compose(b) == b.compose(a))))
}

/// For `f = (b, 0)` and `x = (I, v)`, whether `f x = x f`; this is
/// equivalent to `b v = v`.
pub fn translation_fix_check(f: &AffineElement, x: &AffineElement) -> bool {
    let commutes = f.compose(x) == x.compose(f);
    let fixes = f.point.mul_rational_vec(&x.translation) == x.translation;
    assert_eq!(commutes, fixes, "commutation and fixed-vector criteria disagree");
    commutes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::point_group;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn pure_translations_add() {
        let a = AffineElement::translation(&[1, 2]);
        let b = AffineElement::translation(&[3, -1]);
        assert_eq!(a.compose(&b), AffineElement::translation(&[4, 1]));
    }

    #[test]
    fn half_turn_squared() {
        let a = AffineElement::new(IntegerMatrix::from_rows(&[[-1, 0], [0, -1]]), vec![q(1, 1), q(0, 1)]);
        assert!(a.compose(&a).is_identity());
    }

    #[test]
    fn inverse_round_trip() {
        let a = AffineElement::new(IntegerMatrix::from_rows(&[[0, -1], [1, 0]]), vec![q(1, 2), q(1, 3)]);
        assert!(a.compose(&a.inverse().unwrap()).is_identity());
    }

    #[test]
    fn semidirect_is_symmorphic_with_zero_shift() {
        let g = semidirect_product(3, &point_group("O_h").unwrap()).unwrap();
        let w = is_symmorphic(&g).unwrap();
        assert!(w.symmorphic);
        assert_eq!(w.shift.unwrap(), zero_vec(3));
    }

    #[test]
    fn dimension_checked() {
        assert!(matches!(
            semidirect_product(2, &point_group("C_2").unwrap()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn glide_is_not_symmorphic() {
        let glide = AffineElement::new(IntegerMatrix::from_rows(&[[1, 0], [0, -1]]), vec![q(1, 2), q(0, 1)]);
        let g = CrystallographicGroup::from_generators(2, &[glide], None).unwrap();
        assert!(!is_symmorphic(&g).unwrap().symmorphic);
    }

    #[test]
    fn shifted_mirror_is_symmorphic() {
        // mirror x -> -x + 1/2 is a mirror through x = 1/4
        let m = AffineElement::new(IntegerMatrix::from_rows(&[[-1, 0], [0, 1]]), vec![q(1, 2), q(0, 1)]);
        let g = CrystallographicGroup::from_generators(2, &[m], None).unwrap();
        let w = is_symmorphic(&g).unwrap();
        assert!(w.symmorphic);
        assert!(shift_works(&g, &w.shift.unwrap()));
    }

    #[test]
    fn broken_cocycle_rejected() {
        let pg = point_group("C_2").unwrap();
        let vs = vec![zero_vec(3), vec![q(0, 1), q(0, 1), q(1, 3)]];
        assert!(matches!(
            CrystallographicGroup::from_vector_system(pg, vs, None),
            Err(Error::InvalidCocycle(_))
        ));
    }

    #[test]
    fn membership_enforced() {
        let g = semidirect_product(2, &close_group(2, &[IntegerMatrix::from_rows(&[[-1, 0], [0, -1]])]).unwrap()).unwrap();
        let outside = AffineElement::new(IntegerMatrix::identity(2), vec![q(1, 2), q(0, 1)]);
        assert!(matches!(multiply(&g, &outside, &outside), Err(Error::ElementNotInGroup(_))));
    }

    #[test]
    fn involutions() {
        let x = IntegerMatrix::from_rows(&[[1, 0], [0, -1]]);
        let y = IntegerMatrix::from_rows(&[[-1, 0], [0, 1]]);
        assert!(commuting_involutions_check(&[x.clone(), y]).unwrap());
        let diag = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert!(!commuting_involutions_check(&[x.clone(), diag]).unwrap());
        assert!(commuting_involutions_check(&[x]).unwrap());
        let r = IntegerMatrix::from_rows(&[[0, -1], [1, 0]]);
        assert!(matches!(commuting_involutions_check(&[r]), Err(Error::NotOrderTwo(_))));
    }

    #[test]
    fn translation_fixing() {
        let v = AffineElement::translation(&[1, 0]);
        assert!(translation_fix_check(&AffineElement::identity(2), &v));
        assert!(!translation_fix_check(&AffineElement::linear(IntegerMatrix::identity(2).neg()), &v));
        let refl = AffineElement::linear(IntegerMatrix::from_rows(&[[1, 0], [0, -1]]));
        assert!(translation_fix_check(&refl, &AffineElement::translation(&[3, 0])));
    }
}
