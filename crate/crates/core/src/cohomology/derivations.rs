use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{block_relations, coboundary_matrix, cochain_count, group_cohomology, GModule};
use crate::abelian::{subquotient, sublattice_quotient, FgAbelianGroup, IntegerMatrix};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;

/// Upper bound on the number of generator assignments tried when enumerating
/// derivations of a finite module.
pub const ENUMERATION_BOUND: usize = 200_000;

/// Crossed homomorphisms `d(ab) = d(a) + a.d(b)`, the principal ones
/// `g -> g.h - h`, and their quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivations {
    pub der: FgAbelianGroup,
    pub princ: FgAbelianGroup,
    pub h1: FgAbelianGroup,
}

/// Derivations of `g` into `m`.
///
/// Finite modules are handled by enumerating every assignment of values to
/// the generators; other modules use the bar complex.
pub fn derivations(g: &FiniteMatrixGroup, m: &GModule) -> Result<Derivations> {
    if m.is_finite() {
        enumerate(g, m)
    } else {
        from_complex(g, m)
    }
}

fn module_elements(m: &GModule) -> Result<Vec<Vec<BigInt>>> {
    let size = m
        .moduli()
        .iter()
        .try_fold(1usize, |acc, d| d.to_usize().and_then(|d| acc.checked_mul(d)))
        .filter(|&s| s <= ENUMERATION_BOUND)
        .ok_or_else(|| Error::ModuleTooLarge(m.base().to_string()))?;
    let mut out = Vec::with_capacity(size);
    for mut k in 0..size {
        let mut v = Vec::with_capacity(m.rank());
        for d in m.moduli() {
            let d = d.to_usize().unwrap();
            v.push(BigInt::from(k % d));
            k /= d;
        }
        out.push(v);
    }
    Ok(out)
}

fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn columns(r: usize, vecs: &[Vec<BigInt>], extra: &IntegerMatrix) -> IntegerMatrix {
    let mut out = IntegerMatrix::zeros(r, vecs.len());
    for (j, v) in vecs.iter().enumerate() {
        for (i, x) in v.iter().enumerate() {
            out.set(i, j, x.clone());
        }
    }
    out.hstack(extra)
}

fn enumerate(g: &FiniteMatrixGroup, m: &GModule) -> Result<Derivations> {
    let mut gens = g.generator_indices();
    gens.retain(|&s| s != 0);
    gens.dedup();
    let elems = module_elements(m)?;
    let k = gens.len();
    let total = elems.len().checked_pow(k as u32).filter(|&t| t <= ENUMERATION_BOUND);
    let total = total.ok_or_else(|| Error::ModuleTooLarge(format!("{} with {k} generators", m.base())))?;
    let r = m.rank();

    let mut valid: Vec<Vec<BigInt>> = Vec::new();
    for mut code in 0..total {
        let mut images = Vec::with_capacity(k);
        for _ in 0..k {
            images.push(elems[code % elems.len()].clone());
            code /= elems.len();
        }
        if let Some(()) = extends(g, m, &gens, &images) {
            valid.push(images.concat());
        }
    }

    let mut princ: Vec<Vec<BigInt>> = Vec::new();
    for h in &elems {
        let mut v = Vec::with_capacity(k * r);
        for &s in &gens {
            let mut img = m.action(s).mul_vec(h);
            for (x, y) in img.iter_mut().zip(h) {
                *x -= y;
            }
            m.reduce(&mut img);
            v.extend(img);
        }
        princ.push(v);
    }

    let rel = block_relations(m, k);
    let der_lattice = columns(k * r, &valid, &rel);
    let princ_lattice = columns(k * r, &princ, &rel);
    Ok(Derivations {
        der: sublattice_quotient(&der_lattice, &rel),
        princ: sublattice_quotient(&princ_lattice, &rel),
        h1: sublattice_quotient(&der_lattice, &princ_lattice),
    })
}

/// Checks that generator images extend to a crossed homomorphism on all of `g`.
fn extends(g: &FiniteMatrixGroup, m: &GModule, gens: &[usize], images: &[Vec<BigInt>]) -> Option<()> {
    let n = g.order();
    let mut d: Vec<Option<Vec<BigInt>>> = vec![None; n];
    d[0] = Some(vec![BigInt::zero(); m.rank()]);
    let mut order = vec![0usize];
    let mut next = 0;
    while next < order.len() {
        let e = order[next];
        next += 1;
        for (k, &s) in gens.iter().enumerate() {
            let p = g.mul(e, s);
            let mut val = add(d[e].as_ref().unwrap(), &m.action(e).mul_vec(&images[k]));
            m.reduce(&mut val);
            match &d[p] {
                None => {
                    d[p] = Some(val);
                    order.push(p);
                }
                Some(old) => {
                    if *old != val {
                        return None;
                    }
                }
            }
        }
    }
    Some(())
}

fn from_complex(g: &FiniteMatrixGroup, m: &GModule) -> Result<Derivations> {
    let d0 = coboundary_matrix(g, m, 0).to_dense();
    let d1 = coboundary_matrix(g, m, 1).to_dense();
    let c1 = cochain_count(g, m, 1) / m.rank().max(1);
    let c2 = cochain_count(g, m, 2) / m.rank().max(1);
    let r1 = block_relations(m, c1);
    let zero = IntegerMatrix::zeros(d1.cols(), 0);
    let der = subquotient(&d1, &block_relations(m, c2), &zero, &r1);
    let princ = sublattice_quotient(&d0.hstack(&r1), &r1);
    let h1 = group_cohomology(g, m, 1)?;
    Ok(Derivations { der, princ, h1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::close_group;

    fn c2() -> FiniteMatrixGroup {
        close_group(1, &[IntegerMatrix::from_rows(&[[-1]])]).unwrap()
    }

    #[test]
    fn trivial_action_on_z2() {
        let g = c2();
        let m = GModule::trivial(&g, &FgAbelianGroup::cyclic(2));
        let d = derivations(&g, &m).unwrap();
        assert_eq!(d.der, FgAbelianGroup::cyclic(2));
        assert_eq!(d.princ, FgAbelianGroup::trivial());
        assert_eq!(d.h1, FgAbelianGroup::cyclic(2));
    }

    #[test]
    fn trivial_group() {
        let g = close_group(1, &[]).unwrap();
        let m = GModule::trivial(&g, &FgAbelianGroup::cyclic(5));
        let d = derivations(&g, &m).unwrap();
        assert_eq!(d.der, FgAbelianGroup::trivial());
        assert_eq!(d.h1, FgAbelianGroup::trivial());
    }

    #[test]
    fn sign_action_on_z3() {
        let g = c2();
        let m = GModule::sign(&g, &FgAbelianGroup::cyclic(3));
        let d = derivations(&g, &m).unwrap();
        assert_eq!(d.h1, FgAbelianGroup::trivial());
        assert_eq!(d.der, FgAbelianGroup::cyclic(3));
        assert_eq!(d.princ, FgAbelianGroup::cyclic(3));
    }

    #[test]
    fn free_module_uses_complex() {
        let g = c2();
        let m = GModule::sign(&g, &FgAbelianGroup::free(1));
        let d = derivations(&g, &m).unwrap();
        // H^1(C_2; Z_sign) = Z/2
        assert_eq!(d.h1, FgAbelianGroup::cyclic(2));
        assert_eq!(d.der, FgAbelianGroup::free(1));
        assert_eq!(d.princ, FgAbelianGroup::free(1));
    }
}
