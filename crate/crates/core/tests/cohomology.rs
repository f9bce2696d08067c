use crystal_pde::abelian::FgAbelianGroup;
use crystal_pde::cohomology::{
    coboundary_matrix, derivations, group_cohomology, group_cohomology_cyclic, is_splitting, splitting_classes, GModule,
};
use crystal_pde::crystal::{is_symmorphic, wallpaper_groups};
use crystal_pde::groups::{point_group, point_group_entries};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `H^n(C_m; Z)` from the periodic resolution: `Z, 0, Z/m, 0`.
fn cyclic_closed_form(m: u64, n: usize) -> FgAbelianGroup {
    match n {
        0 => FgAbelianGroup::free(1),
        n if n % 2 == 1 => FgAbelianGroup::trivial(),
        _ => FgAbelianGroup::cyclic(m),
    }
}

#[test]
fn bar_complex_matches_cyclic_resolution() {
    for (m, name) in [(2, "C_2"), (3, "C_3"), (4, "C_4"), (6, "C_6")] {
        let g = point_group(name).unwrap();
        assert_eq!(g.order() as u64, m);
        let z = GModule::trivial(&g, &FgAbelianGroup::free(1));
        for n in 0..=3 {
            let bar = group_cohomology(&g, &z, n).unwrap();
            assert_eq!(bar, cyclic_closed_form(m, n), "H^{n}(C_{m})");
            assert_eq!(bar, group_cohomology_cyclic(m, n));
        }
    }
}

#[test]
fn coboundary_squares_to_zero_on_the_lattice() {
    for name in ["C_2v", "D_3", "C_4h"] {
        let g = point_group(name).unwrap();
        let m = GModule::natural(&g);
        for n in 0..2 {
            let d0 = coboundary_matrix(&g, &m, n).to_dense();
            let d1 = coboundary_matrix(&g, &m, n + 1).to_dense();
            assert!((&d1 * &d0).is_zero(), "{name} degree {n}");
        }
    }
}

fn random_finite_module(rng: &mut ChaCha8Rng) -> (String, GModule, crystal_pde::groups::FiniteMatrixGroup) {
    let small: Vec<_> = point_group_entries().iter().filter(|e| e.documented_order <= 12).collect();
    let entry = small[rng.gen_range(0..small.len())];
    let g = entry.build().unwrap();
    let n = rng.gen_range(2u64..=4);
    let (label, m) = match rng.gen_range(0..3) {
        0 => ("trivial", GModule::trivial(&g, &FgAbelianGroup::cyclic(n))),
        1 => ("sign", GModule::sign(&g, &FgAbelianGroup::cyclic(n))),
        _ => ("natural", GModule::natural_mod(&g, rng.gen_range(2u64..=3))),
    };
    (format!("{} on {} {}", entry.schoenflies, label, m.base()), m, g)
}

#[test]
fn derivations_agree_with_bar_complex_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut tested = 0;
    while tested < 10 {
        let (label, m, g) = random_finite_module(&mut rng);
        let der = match derivations(&g, &m) {
            Ok(d) => d,
            Err(crystal_pde::Error::ModuleTooLarge(_)) => continue,
            Err(e) => panic!("{label}: {e}"),
        };
        assert_eq!(der.h1, group_cohomology(&g, &m, 1).unwrap(), "{label}");
        tested += 1;
    }
}

#[test]
fn trivial_coefficients_give_homomorphisms() {
    // H^1(G; Z/n) = Hom(G, Z/n); the abelianization of D_3 is Z/2
    let g = point_group("D_3").unwrap();
    let h1 = |n| group_cohomology(&g, &GModule::trivial(&g, &FgAbelianGroup::cyclic(n)), 1).unwrap();
    assert_eq!(h1(2), FgAbelianGroup::cyclic(2));
    assert!(h1(3).is_trivial());
}

#[test]
fn splitting_classes_count_first_cohomology() {
    for w in wallpaper_groups() {
        if !is_symmorphic(&w.group).unwrap().symmorphic {
            assert!(splitting_classes(&w.group).is_err(), "{}", w.name);
            continue;
        }
        let classes = splitting_classes(&w.group).unwrap();
        assert!(classes.iter().all(|u| is_splitting(&w.group, u)), "{}", w.name);
        let p = w.group.point_group();
        let h1 = group_cohomology(p, &GModule::natural(p), 1).unwrap();
        let order: BigInt = h1.order().expect("finite");
        assert_eq!(classes.len(), order.to_usize().unwrap(), "{}", w.name);
    }
}
