use std::collections::BTreeSet;
use std::sync::OnceLock;

use crystal_pde::abelian::FgAbelianGroup;
use crystal_pde::bordism::{crystal_group_of, sign_crystal_group, verify_extension_exactness};
use crystal_pde::crystal::{
    denominator_bound, inverse, is_symmorphic, multiply, semidirect_product, shift_works, wallpaper_groups,
    AffineElement, CrystallographicGroup,
};
use crystal_pde::groups::point_group_entries;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Every group the crate embeds or constructs from embedded data.
fn embedded_groups() -> &'static [CrystallographicGroup] {
    static GROUPS: OnceLock<Vec<CrystallographicGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| {
        let mut out: Vec<CrystallographicGroup> = wallpaper_groups().iter().map(|w| w.group.clone()).collect();
        for e in point_group_entries() {
            out.push(semidirect_product(3, &e.build().unwrap()).unwrap());
        }
        for d in 0..=4 {
            out.push(sign_crystal_group(d).unwrap());
        }
        out
    })
}

/// Searches origin shifts on the grid `(1/N) Z^d` modulo the lattice.
fn grid_shift_exists(g: &CrystallographicGroup, n: i64) -> bool {
    let d = g.dimension();
    let total = (n as usize).pow(d as u32);
    (0..total).any(|mut k| {
        let s: Vec<BigRational> = (0..d)
            .map(|_| {
                let c = (k % n as usize) as i64;
                k /= n as usize;
                BigRational::new(BigInt::from(c), BigInt::from(n))
            })
            .collect();
        shift_works(g, &s)
    })
}

#[test]
fn thirteen_symmorphic_wallpaper_groups() {
    let groups = wallpaper_groups();
    assert_eq!(groups.len(), 17);
    let mut failures = BTreeSet::new();
    for w in groups {
        let witness = is_symmorphic(&w.group).unwrap();
        if let Some(s) = &witness.shift {
            assert!(shift_works(&w.group, s), "{}", w.name);
        }
        // (I - a) has elementary divisors dividing 12 in the plane
        let n = denominator_bound(&w.group).to_i64().unwrap().lcm(&12);
        assert_eq!(witness.symmorphic, grid_shift_exists(&w.group, n), "{}", w.name);
        if !witness.symmorphic {
            failures.insert(w.name.as_str());
        }
    }
    assert_eq!(failures, BTreeSet::from(["pg", "pgg", "pmg", "p4g"]));
}

#[test]
fn split_products_are_symmorphic() {
    for g in embedded_groups().iter().skip(17) {
        assert!(is_symmorphic(g).unwrap().symmorphic);
    }
}

#[test]
fn every_embedded_group_is_a_cocycle() {
    for g in embedded_groups() {
        g.check_cocycle().unwrap();
    }
}

#[test]
fn crystal_groups_of_bordism_shapes_are_exact() {
    for r in 0..=3 {
        for s in 0..=3 {
            let b = FgAbelianGroup::new(r, &vec![2; s]);
            let c = crystal_group_of(&b).unwrap();
            assert_eq!(c.dimension, r.max(s));
            let report = verify_extension_exactness(&c.group);
            assert!(report.passed(), "Z^{r} x Z_2^{s}: {:?}", report.failures);
            if let Some(w) = &c.split {
                assert!(w.holds());
            }
            assert_eq!(c.embedding.direct_product_embeds, r + s <= c.dimension);
            for gen in &c.embedding.generators {
                assert!(c.group.contains(gen));
            }
        }
    }
    for g in embedded_groups() {
        assert!(verify_extension_exactness(g).passed());
    }
}

fn element(g: &CrystallographicGroup, a: usize, shift: &[i64]) -> AffineElement {
    let t = AffineElement::translation(&shift[..g.dimension()]);
    t.compose(&g.representative(a % g.point_group().order()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiplication_is_associative_with_inverses(
        gi in 0usize..1000,
        a in 0usize..48, b in 0usize..48, c in 0usize..48,
        ta in prop::array::uniform4(-3i64..=3),
        tb in prop::array::uniform4(-3i64..=3),
        tc in prop::array::uniform4(-3i64..=3),
    ) {
        let groups = embedded_groups();
        let g = &groups[gi % groups.len()];
        let (x, y, z) = (element(g, a, &ta), element(g, b, &tb), element(g, c, &tc));
        let left = multiply(g, &multiply(g, &x, &y).unwrap(), &z).unwrap();
        let right = multiply(g, &x, &multiply(g, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(g.contains(&left));
        let xi = inverse(g, &x).unwrap();
        prop_assert!(multiply(g, &x, &xi).unwrap().is_identity());
        prop_assert!(multiply(g, &xi, &x).unwrap().is_identity());
    }
}

#[test]
fn foreign_elements_are_rejected() {
    let p1 = &wallpaper_groups()[0].group;
    let half = AffineElement::new(
        crystal_pde::abelian::IntegerMatrix::identity(2),
        vec![BigRational::new(1.into(), 2.into()), BigRational::from_integer(0.into())],
    );
    assert!(multiply(p1, &half, &half).is_err());
}
