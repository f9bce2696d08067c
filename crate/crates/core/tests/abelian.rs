use crystal_pde::abelian::{
    hom_group, invariant_factors, kernel_basis, smith_normal_form, tensor_product, tor_group, FgAbelianGroup,
    IntegerMatrix,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..=9, c), r))
}

/// Determinant by cofactor expansion over i128.
fn det(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|j| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`,
/// `D_k` the gcd of all `k x k` minors.
fn determinantal_invariants(rows: &[Vec<i64>]) -> Vec<i128> {
    let (r, c) = (rows.len(), rows[0].len());
    let mut divisors = vec![1i128];
    for k in 1..=r.min(c) {
        let mut g = 0i128;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j] as i128).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| w[1] / w[0]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_divisibility_and_unimodularity(rows in matrix_strategy()) {
        let m = IntegerMatrix::from_rows(&rows);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.left.is_unimodular());
        prop_assert!(snf.right.is_unimodular());
        let d = &(&snf.left * &m) * &snf.right;
        prop_assert!(d.is_diagonal());
        for i in 0..snf.diagonal.len() {
            prop_assert_eq!(d.get(i, i), &snf.diagonal[i]);
            prop_assert!(!snf.diagonal[i].is_negative());
        }
        for w in snf.diagonal.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
        let nonzero: Vec<i128> = snf.diagonal.iter().filter(|x| !x.is_zero()).map(|x| x.try_into().unwrap()).collect();
        prop_assert_eq!(nonzero, determinantal_invariants(&rows));
    }

    #[test]
    fn kernel_basis_is_annihilated(rows in matrix_strategy()) {
        let m = IntegerMatrix::from_rows(&rows);
        let k = kernel_basis(&m);
        let rank = smith_normal_form(&m).rank();
        prop_assert_eq!(k.cols(), m.cols() - rank);
        prop_assert!((&m * &k).is_zero());
    }

    #[test]
    fn cyclic_functors_are_gcd(a in 1u64..=60, b in 1u64..=60) {
        let g = FgAbelianGroup::cyclic(a.gcd(&b));
        let (za, zb) = (FgAbelianGroup::cyclic(a), FgAbelianGroup::cyclic(b));
        prop_assert_eq!(tensor_product(&za, &zb), g.clone());
        prop_assert_eq!(tor_group(&za, &zb), g.clone());
        prop_assert_eq!(hom_group(&za, &zb).unwrap(), g);
    }

    #[test]
    fn display_round_trips(free in 0usize..4, orders in prop::collection::vec(2u64..40, 0..4)) {
        let g = FgAbelianGroup::new(free, &orders);
        let back: FgAbelianGroup = g.to_string().parse().unwrap();
        prop_assert_eq!(back, g);
    }
}

#[test]
fn invariant_factors_agree_with_full_form() {
    let m = IntegerMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    let expect: Vec<BigInt> = [2, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
    assert_eq!(smith_normal_form(&m).diagonal, expect);
    assert_eq!(invariant_factors(&m), expect);
}

#[test]
fn free_and_torsion_functors() {
    let z = FgAbelianGroup::free(1);
    let z6 = FgAbelianGroup::cyclic(6);
    assert!(hom_group(&z, &z6).is_err());
    assert_eq!(tensor_product(&z, &z6), z6);
    assert!(tor_group(&z, &z6).is_trivial());
    assert!(hom_group(&z6, &z).unwrap().is_trivial());
}
