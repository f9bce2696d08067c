use crystal_pde::abelian::FgAbelianGroup;
use crystal_pde::bordism::{
    crystal_assignment, littlest_crystal_assignment, nondyadic_partition_count, oriented_bordism,
    paper_crystal_assignment, relative_bordism, unoriented_bordism, z2_count, EXTENDED_ZERO_CRYSTAL,
};
use proptest::prelude::*;

/// All partitions of `n` into parts of size at most `max`, listed explicitly.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=max.min(n)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn is_of_form_two_power_minus_one(k: usize) -> bool {
    let mut x = k + 1;
    while x.is_multiple_of(2) {
        x /= 2;
    }
    x == 1
}

fn q_by_enumeration(n: usize) -> usize {
    partitions(n, n).iter().filter(|p| p.iter().all(|&k| !is_of_form_two_power_minus_one(k))).count()
}

#[test]
fn unoriented_bordism_matches_partition_enumeration() {
    for n in 0..=12 {
        let q = q_by_enumeration(n);
        assert_eq!(nondyadic_partition_count(n) as usize, q, "n = {n}");
        assert_eq!(unoriented_bordism(n), FgAbelianGroup::z2_power(q), "n = {n}");
    }
    assert_eq!(unoriented_bordism(0), FgAbelianGroup::cyclic(2));
    assert!(unoriented_bordism(1).is_trivial());
    assert_eq!(unoriented_bordism(4).to_string(), "Z/2 x Z/2");
}

#[test]
fn oriented_bordism_low_degrees() {
    let names: Vec<String> = (0..=8).map(|n| oriented_bordism(n).unwrap().to_string()).collect();
    assert_eq!(names, ["Z^1", "0", "0", "0", "Z^1", "Z/2", "0", "0", "Z^2"]);
    assert!(oriented_bordism(9).is_err());
}

#[test]
fn relative_bordism_of_a_point_is_absolute() {
    for p in 0..=8 {
        let mut betti = vec![0; p + 1];
        betti[0] = 1;
        assert_eq!(relative_bordism(&betti, p).unwrap(), unoriented_bordism(p));
    }
    assert!(relative_bordism(&[1, 0], 2).is_err());
}

proptest! {
    #[test]
    fn relative_bordism_is_additive_over_homology(betti in prop::collection::vec(0usize..4, 1..8), p in 0usize..8) {
        prop_assume!(p < betti.len());
        let expect: usize = (0..=p).map(|r| betti[r] * q_by_enumeration(p - r)).sum();
        let b = relative_bordism(&betti, p).unwrap();
        prop_assert_eq!(b.z2_rank(), Some(expect));
        prop_assert_eq!(z2_count(&b), expect);
    }
}

#[test]
fn assignments_follow_the_examples() {
    let z2 = |k| FgAbelianGroup::z2_power(k);
    assert_eq!(paper_crystal_assignment(&z2(0)).unwrap().name, EXTENDED_ZERO_CRYSTAL);
    let p2 = paper_crystal_assignment(&z2(1)).unwrap();
    assert_eq!((p2.dimension, p2.name.as_str()), (2, "p2"));
    let p4m = paper_crystal_assignment(&z2(2)).unwrap();
    assert_eq!((p4m.dimension, p4m.name.as_str()), (2, "p4m"));
    assert!(paper_crystal_assignment(&z2(3)).is_err());
    assert_eq!(crystal_assignment(&z2(3)).unwrap().dimension, 3);
    assert_eq!(littlest_crystal_assignment(&z2(1)).unwrap().dimension, 1);
    assert!(crystal_assignment(&FgAbelianGroup::cyclic(4)).is_err());
}
