//! Crystallographic labels for finite matrix groups.
//!
//! A finite subgroup of `GL_3(Z)` is named by counting its elements by
//! `(det, trace)`: these counts separate the 32 geometric crystal classes and
//! are invariant under conjugation. Groups of dimension 1 or 2 are first
//! embedded in dimension 3 by `A -> A ⊕ det(A)`, so a planar mirror becomes a
//! two-fold rotation and the square group reads as `422`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::ToPrimitive;

use super::{point_group_entries, FiniteMatrixGroup};
use crate::abelian::IntegerMatrix;

pub type Signature = BTreeMap<(i64, i64), usize>;

fn embed_3d(m: &IntegerMatrix) -> Option<IntegerMatrix> {
    let d = m.rows();
    if d > 3 {
        return None;
    }
    let det = m.determinant();
    let mut out = IntegerMatrix::identity(3);
    for i in 0..d {
        for j in 0..d {
            out.set(i, j, m.get(i, j).clone());
        }
    }
    if d < 3 {
        out.set(2, 2, det);
    }
    Some(out)
}

/// Element counts by `(det, trace)` after embedding in dimension 3.
pub fn signature_3d(elements: &[IntegerMatrix]) -> Option<Signature> {
    let mut sig = Signature::new();
    for e in elements {
        let e = embed_3d(e)?;
        let key = (e.determinant().to_i64()?, e.trace().to_i64()?);
        *sig.entry(key).or_default() += 1;
    }
    Some(sig)
}

fn reference_signatures() -> &'static [(Signature, String)] {
    static REFS: OnceLock<Vec<(Signature, String)>> = OnceLock::new();
    REFS.get_or_init(|| {
        point_group_entries()
            .iter()
            .map(|e| {
                let g = e.build().expect("embedded point group closes");
                (signature_3d(g.elements()).expect("3x3 generators"), e.international.clone())
            })
            .collect()
    })
}

/// Maps notational variants found in the published tables onto the labels used here.
pub fn canonical_label(label: &str) -> &str {
    match label {
        "-62m" => "-6m2",
        "6/mm" => "6/mmm",
        "2mm" => "mm2",
        "m3" => "m-3",
        "m3m" => "m-3m",
        "-3m1" | "-31m" => "-3m",
        "3m1" | "31m" => "3m",
        "321" | "312" => "32",
        other => other,
    }
}

/// Crystallographic label of `g`, or an abstract fallback.
pub fn iso_type_name(g: &FiniteMatrixGroup) -> String {
    if g.order() <= 48 {
        if let Some(sig) = signature_3d(g.elements()) {
            if let Some((_, name)) = reference_signatures().iter().find(|(s, _)| *s == sig) {
                return name.clone();
            }
        }
    }
    abstract_name(g)
}

fn abstract_name(g: &FiniteMatrixGroup) -> String {
    let n = g.order();
    let orders: Vec<usize> = (0..n).map(|a| g.element_order(a)).collect();
    if orders.contains(&n) {
        return n.to_string();
    }
    if n == 4 {
        return "222".to_string();
    }
    if n.is_multiple_of(2) && n >= 6 {
        let half = n / 2;
        if let Some(r) = (0..n).find(|&a| orders[a] == half) {
            let rotations: Vec<usize> = std::iter::successors(Some(0), |&x| Some(g.mul(x, r))).take(half).collect();
            let dihedral = (0..n).filter(|a| !rotations.contains(a)).all(|a| orders[a] == 2);
            if dihedral {
                return match half {
                    3 => "32".to_string(),
                    4 => "422".to_string(),
                    6 => "622".to_string(),
                    k => format!("D_{k}"),
                };
            }
        }
    }
    format!("order-{n}-unclassified")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{close_group, point_group};

    fn named(d: usize, gens: &[&[&[i64]]]) -> String {
        let gens: Vec<IntegerMatrix> = gens.iter().map(|g| IntegerMatrix::from_rows(g)).collect();
        iso_type_name(&close_group(d, &gens).unwrap())
    }

    #[test]
    fn order_two_refined_by_matrix() {
        assert_eq!(named(3, &[&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, -1]]]), "-1");
        assert_eq!(named(3, &[&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]]), "m");
        assert_eq!(named(3, &[&[&[-1, 0, 0], &[0, -1, 0], &[0, 0, 1]]]), "2");
    }

    #[test]
    fn planar_square_group() {
        assert_eq!(named(2, &[&[&[0, -1], &[1, 0]], &[&[1, 0], &[0, -1]]]), "422");
        assert_eq!(named(2, &[&[&[-1, 0], &[0, 1]], &[&[1, 0], &[0, -1]]]), "222");
    }

    #[test]
    fn every_embedded_group_names_itself() {
        for e in point_group_entries() {
            assert_eq!(iso_type_name(&point_group(&e.schoenflies).unwrap()), e.international);
        }
    }

    #[test]
    fn signatures_are_distinct() {
        let refs = reference_signatures();
        for i in 0..refs.len() {
            for j in i + 1..refs.len() {
                assert_ne!(refs[i].0, refs[j].0, "{} vs {}", refs[i].1, refs[j].1);
            }
        }
    }

    #[test]
    fn abstract_fallbacks() {
        // cyclic of order 5 is not crystallographic in dimension 3; use a 4x4 permutation
        let p = IntegerMatrix::from_rows(&[[0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]]);
        assert_eq!(iso_type_name(&close_group(4, &[p]).unwrap()), "4");
    }
}
