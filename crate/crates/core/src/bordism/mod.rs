//! Bordism groups and the crystallographic groups attached to them.
//!
//! Unoriented bordism `Ω_n` is `Z_2^q` with `q` the number of partitions of `n`
//! into parts not of the form `2^s - 1`. Relative bordism of a space follows
//! from its mod-2 Betti numbers by the Quillen splitting
//! `Ω_p(X) = ⊕_{r+s=p} H_r(X; Z_2) ⊗ Ω_s`.
//!
//! A group `Z^r × Z_2^s` is attached to the crystallographic group
//! `Z^d ⋊ Z_2^d`, `d = max(r, s)`, the `i`-th `Z_2` acting by a sign on the
//! `i`-th coordinate.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::abelian::{FgAbelianGroup, IntegerMatrix};
use crate::crystal::{is_symmorphic, semidirect_product, zero_vec, AffineElement, CrystallographicGroup};
use crate::error::{Error, Result};
use crate::groups::close_group;

fn is_dyadic_part(k: usize) -> bool {
    (k + 1).is_power_of_two()
}

/// Number of partitions of `n` with no part of the form `2^s - 1`; `q(0) = 1`.
pub fn nondyadic_partition_count(n: usize) -> u64 {
    let mut ways = vec![0u64; n + 1];
    ways[0] = 1;
    for part in (2..=n).filter(|&k| !is_dyadic_part(k)) {
        for total in part..=n {
            ways[total] += ways[total - part];
        }
    }
    ways[n]
}

pub fn unoriented_bordism(n: usize) -> FgAbelianGroup {
    FgAbelianGroup::z2_power(nondyadic_partition_count(n) as usize)
}

pub const MAX_ORIENTED_DEGREE: usize = 8;

/// Oriented bordism in degrees up to 8.
pub fn oriented_bordism(n: usize) -> Result<FgAbelianGroup> {
    Ok(match n {
        0 | 4 => FgAbelianGroup::free(1),
        5 => FgAbelianGroup::cyclic(2),
        8 => FgAbelianGroup::free(2),
        1 | 2 | 3 | 6 | 7 => FgAbelianGroup::trivial(),
        _ => return Err(Error::UnsupportedDegree(n)),
    })
}

/// `Ω_p(X)` from the mod-2 Betti numbers `h_0, h_1, ...` of `X`.
pub fn relative_bordism(betti: &[usize], p: usize) -> Result<FgAbelianGroup> {
    if betti.len() <= p {
        return Err(Error::BettiListTooShort { len: betti.len(), degree: p, needed: p + 1 });
    }
    let rank: u64 = (0..=p).map(|r| betti[r] as u64 * nondyadic_partition_count(p - r)).sum();
    Ok(FgAbelianGroup::z2_power(rank as usize))
}

/// `(r, s)` for a group `Z^r × Z_2^s`.
pub fn crystal_shape(b: &FgAbelianGroup) -> Result<(usize, usize)> {
    if b.invariant_factors().iter().any(|f| *f != BigInt::from(2)) {
        return Err(Error::NotCrystalShapedGroup(b.to_string()));
    }
    Ok((b.free_rank(), b.invariant_factors().len()))
}

/// `Z^d ⋊ Z_2^d` with the `i`-th generator negating the `i`-th coordinate.
pub fn sign_crystal_group(d: usize) -> Result<CrystallographicGroup> {
    let gens: Vec<IntegerMatrix> = (0..d).map(|i| sign_flip(d, &[i])).collect();
    let point = close_group(d, &gens)?;
    semidirect_product(d, &point)
}

fn sign_flip(d: usize, coords: &[usize]) -> IntegerMatrix {
    let mut m = IntegerMatrix::identity(d);
    for &i in coords {
        m.set(i, i, BigInt::from(-1));
    }
    m
}

/// The split sequence `0 -> Z^s -> Z^s ⋊ Z_2^s -> Z_2^s -> 0`, checked on
/// lattice generators and all of `Z_2^s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitWitness {
    /// `t -> (I, t)` sends the lattice basis to distinct translations.
    pub inclusion_injective: bool,
    /// Projection of every translation is trivial.
    pub inclusion_in_kernel: bool,
    /// Projection composed with the section is the identity on `Z_2^s`.
    pub section_is_right_inverse: bool,
}

impl SplitWitness {
    pub fn holds(&self) -> bool {
        self.inclusion_injective && self.inclusion_in_kernel && self.section_is_right_inverse
    }
}

/// The chain `Z^r × Z_2^s < Z^d × Z_2^d < Z^d ⋊ Z_2^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingWitness {
    pub chain: Vec<String>,
    /// Whether `Z^r × Z_2^s` embeds in `Z^d ⋊ Z_2^d` as a group; this
    /// needs `r` lattice directions fixed by `s` independent sign changes,
    /// so it holds exactly when `r + s <= d`.
    pub direct_product_embeds: bool,
    /// Generators of an embedded copy when one exists: `r` translations
    /// followed by `s` involutions.
    pub generators: Vec<AffineElement>,
}

#[derive(Clone, Debug)]
pub struct CrystalGroupOf {
    pub free_rank: usize,
    pub z2_rank: usize,
    pub dimension: usize,
    pub group: CrystallographicGroup,
    /// Present when the group is `Z_2^s`.
    pub split: Option<SplitWitness>,
    pub embedding: EmbeddingWitness,
}

fn bits(g: &AffineElement) -> Vec<bool> {
    (0..g.dimension()).map(|i| g.point.get(i, i) != &BigInt::from(1)).collect()
}

fn split_witness(g: &CrystallographicGroup) -> SplitWitness {
    let d = g.dimension();
    let lattice: Vec<AffineElement> = (0..d)
        .map(|i| {
            let mut v = vec![0i64; d];
            v[i] = 1;
            AffineElement::translation(&v)
        })
        .collect();
    let inclusion_injective = (0..d).all(|i| (i + 1..d).all(|j| lattice[i] != lattice[j]) && !lattice[i].is_identity());
    let inclusion_in_kernel = lattice.iter().all(|t| bits(t).iter().all(|b| !b));
    let section_is_right_inverse = (0..1u64 << d).all(|mask| {
        let x: Vec<bool> = (0..d).map(|i| mask >> i & 1 == 1).collect();
        let coords: Vec<usize> = (0..d).filter(|&i| x[i]).collect();
        let s = AffineElement::new(sign_flip(d, &coords), zero_vec(d));
        g.contains(&s) && bits(&s) == x
    });
    SplitWitness { inclusion_injective, inclusion_in_kernel, section_is_right_inverse }
}

fn embedding_witness(r: usize, s: usize, d: usize) -> EmbeddingWitness {
    let chain = vec![
        format!("Z^{r} x Z_2^{s}"),
        format!("Z^{d} x Z_2^{d}"),
        format!("Z^{d} ⋊ Z_2^{d}"),
    ];
    let direct_product_embeds = r + s <= d;
    let generators = if direct_product_embeds {
        let mut gens: Vec<AffineElement> = (0..r)
            .map(|i| {
                let mut v = vec![0i64; d];
                v[i] = 1;
                AffineElement::translation(&v)
            })
            .collect();
        gens.extend((0..s).map(|j| AffineElement::linear(sign_flip(d, &[r + j]))));
        gens
    } else {
        Vec::new()
    };
    EmbeddingWitness { chain, direct_product_embeds, generators }
}

/// The crystallographic group attached to `Z^r × Z_2^s`, with witnesses.
pub fn crystal_group_of(b: &FgAbelianGroup) -> Result<CrystalGroupOf> {
    let (r, s) = crystal_shape(b)?;
    let d = r.max(s);
    let group = sign_crystal_group(d)?.with_name(format!("Z^{d} ⋊ Z_2^{d}"));
    let split = (r == 0).then(|| split_witness(&group));
    Ok(CrystalGroupOf { free_rank: r, z2_rank: s, dimension: d, group, split, embedding: embedding_witness(r, s, d) })
}

/// Result of checking `0 -> Z^d -> G -> P -> 1` in normal form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        self.checks += 1;
        if !ok {
            self.failures.push(what.into());
        }
    }
}

/// Checks the short exact sequence of a crystallographic group using
/// elements `(a, u)`: the lattice maps injectively onto the kernel of the
/// projection `(a, u) -> a`, and the projection is a surjective homomorphism.
pub fn verify_extension_exactness(g: &CrystallographicGroup) -> ExactnessReport {
    let mut report = ExactnessReport::default();
    if let Err(e) = g.check_cocycle() {
        report.expect(false, e.to_string());
        return report;
    }
    report.checks += 1;
    let d = g.dimension();
    let pg = g.point_group();

    let identity_fibre = (0..pg.order()).filter(|&a| pg.element(a).is_identity()).count();
    report.expect(identity_fibre == 1, "projection kernel contains a non-translation");
    for i in 0..d {
        let mut v = vec![0i64; d];
        v[i] = 1;
        let t = AffineElement::translation(&v);
        report.expect(g.contains(&t), format!("lattice vector e{i} is not in the group"));
        report.expect(!t.is_identity(), format!("lattice vector e{i} maps to the identity"));
    }
    for a in 0..pg.order() {
        let rep = g.representative(a);
        report.expect(g.contains(&rep), format!("no element over point element {}", pg.element(a)));
        for b in 0..pg.order() {
            let prod = rep.compose(&g.representative(b));
            report.expect(
                pg.index_of(&prod.point) == Some(pg.mul(a, b)) && g.contains(&prod),
                format!("projection is not multiplicative at ({}, {})", pg.element(a), pg.element(b)),
            );
        }
    }
    report
}

/// The named crystal assignment for a bordism group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalAssignment {
    pub dimension: usize,
    pub name: String,
}

pub const EXTENDED_ZERO_CRYSTAL: &str = "trivial / extended 0-crystal";

/// Follows the worked examples: `0 -> trivial`, `Z_2 -> p2`, `Z_2^2 -> p4m`.
pub fn paper_crystal_assignment(b: &FgAbelianGroup) -> Result<CrystalAssignment> {
    let assigned = |dimension, name: &str| Ok(CrystalAssignment { dimension, name: name.to_string() });
    if b.free_rank() == 0 {
        match b.z2_rank() {
            Some(0) => return assigned(0, EXTENDED_ZERO_CRYSTAL),
            Some(1) => return assigned(2, "p2"),
            Some(2) => return assigned(2, "p4m"),
            _ => {}
        }
    }
    Err(Error::UnassignedInPaper(b.to_string()))
}

/// The named assignment where one exists, otherwise `Z^d ⋊ Z_2^d`.
pub fn crystal_assignment(b: &FgAbelianGroup) -> Result<CrystalAssignment> {
    match paper_crystal_assignment(b) {
        Err(Error::UnassignedInPaper(_)) => {
            let c = crystal_group_of(b)?;
            Ok(CrystalAssignment { dimension: c.dimension, name: c.group.name().unwrap_or_default().to_string() })
        }
        other => other,
    }
}

/// The smallest-dimensional assignment `Z^d ⋊ Z_2^d`, `d = max(r, s)`.
pub fn littlest_crystal_assignment(b: &FgAbelianGroup) -> Result<CrystalAssignment> {
    let c = crystal_group_of(b)?;
    let name = if c.dimension == 0 { EXTENDED_ZERO_CRYSTAL.to_string() } else { c.group.name().unwrap_or_default().to_string() };
    Ok(CrystalAssignment { dimension: c.dimension, name })
}

/// `q` for a bordism group: the number of `Z_2` summands.
pub fn z2_count(b: &FgAbelianGroup) -> usize {
    b.invariant_factors().iter().filter(|f| f.to_u64() == Some(2)).count()
}

/// Whether the attached group is symmorphic; always true for the sign construction.
pub fn attached_group_splits(b: &FgAbelianGroup) -> Result<bool> {
    Ok(is_symmorphic(&crystal_group_of(b)?.group)?.symmorphic)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_partition_counts() {
        let q: Vec<u64> = (0..=8).map(nondyadic_partition_count).collect();
        assert_eq!(q, [1, 0, 1, 0, 2, 1, 3, 1, 5]);
    }

    #[test]
    fn unoriented_values() {
        assert_eq!(unoriented_bordism(1).to_string(), "0");
        assert_eq!(unoriented_bordism(2).to_string(), "Z/2");
        assert_eq!(unoriented_bordism(4).to_string(), "Z/2 x Z/2");
    }

    #[test]
    fn oriented_table() {
        let t: Vec<String> = (0..=8).map(|n| oriented_bordism(n).unwrap().to_string()).collect();
        assert_eq!(t, ["Z^1", "0", "0", "0", "Z^1", "Z/2", "0", "0", "Z^2"]);
        assert_eq!(oriented_bordism(9), Err(Error::UnsupportedDegree(9)));
    }

    #[test]
    fn relative_values() {
        assert_eq!(relative_bordism(&[1, 2, 1], 1).unwrap(), FgAbelianGroup::z2_power(2));
        assert_eq!(relative_bordism(&[1, 1, 1], 1).unwrap(), FgAbelianGroup::z2_power(1));
        assert!(matches!(relative_bordism(&[1, 0], 3), Err(Error::BettiListTooShort { .. })));
    }

    #[test]
    fn attached_groups() {
        let c = crystal_group_of(&FgAbelianGroup::z2_power(2)).unwrap();
        assert_eq!(c.dimension, 2);
        assert_eq!(c.group.point_group().order(), 4);
        assert!(c.split.unwrap().holds());
        assert!(c.embedding.direct_product_embeds);

        let mixed = crystal_group_of(&FgAbelianGroup::new(1, &[2])).unwrap();
        assert_eq!(mixed.dimension, 1);
        assert!(mixed.split.is_none());
        assert!(!mixed.embedding.direct_product_embeds);

        assert!(matches!(crystal_group_of(&FgAbelianGroup::cyclic(4)), Err(Error::NotCrystalShapedGroup(_))));
    }

    #[test]
    fn trivial_group_gives_dimension_zero() {
        let c = crystal_group_of(&FgAbelianGroup::trivial()).unwrap();
        assert_eq!(c.dimension, 0);
        assert!(verify_extension_exactness(&c.group).passed());
    }

    #[test]
    fn paper_assignments() {
        assert_eq!(paper_crystal_assignment(&FgAbelianGroup::cyclic(2)).unwrap().name, "p2");
        assert_eq!(paper_crystal_assignment(&FgAbelianGroup::z2_power(2)).unwrap().name, "p4m");
        assert_eq!(paper_crystal_assignment(&FgAbelianGroup::trivial()).unwrap().dimension, 0);
        assert!(matches!(paper_crystal_assignment(&FgAbelianGroup::z2_power(3)), Err(Error::UnassignedInPaper(_))));
        assert_eq!(crystal_assignment(&FgAbelianGroup::z2_power(3)).unwrap().dimension, 3);
        assert_eq!(littlest_crystal_assignment(&FgAbelianGroup::cyclic(2)).unwrap().dimension, 1);
    }

    #[test]
    fn broken_cocycle_reported() {
        let pg = close_group(1, &[IntegerMatrix::from_rows(&[[-1]])]).unwrap();
        let third = num_rational::BigRational::new(1.into(), 3.into());
        let g = CrystallographicGroup::from_vector_system_unchecked(pg, vec![vec![third], zero_vec(1)], None);
        let r = verify_extension_exactness(&g);
        assert!(!r.passed());
    }
}
