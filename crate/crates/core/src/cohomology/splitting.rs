//! Splittings of a crystallographic extension up to conjugation by lattice
//! translations.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{smith_normal_form, IntegerMatrix};
use crate::crystal::{frac_vec, is_symmorphic, CrystallographicGroup, RationalVector};
use crate::error::{Error, Result};
use crate::groups::FiniteMatrixGroup;

use super::derivations::ENUMERATION_BOUND;

/// A crossed homomorphism `u` with `u(ab) = u(a) + a u(b)`, stored by its
/// values on the point-group generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedHom {
    pub generators: Vec<usize>,
    pub values: Vec<RationalVector>,
}

impl CrossedHom {
    /// Values on every element of `g`, or `None` if the generator values do
    /// not extend consistently.
    pub fn extend(&self, g: &FiniteMatrixGroup) -> Option<Vec<RationalVector>> {
        let d = g.dimension();
        let mut vals: Vec<Option<RationalVector>> = vec![None; g.order()];
        vals[0] = Some(vec![BigRational::zero(); d]);
        let mut queue = vec![0];
        while let Some(a) = queue.pop() {
            let ua = vals[a].clone().unwrap();
            for (&s, us) in self.generators.iter().zip(&self.values) {
                let b = g.mul(a, s);
                let image = g.element(a).mul_rational_vec(us);
                let ub: RationalVector = ua.iter().zip(&image).map(|(x, y)| x + y).collect();
                match &vals[b] {
                    None => {
                        vals[b] = Some(ub);
                        queue.push(b);
                    }
                    Some(old) if *old != ub => return None,
                    Some(_) => {}
                }
            }
        }
        vals.into_iter().collect()
    }
}

/// One crossed homomorphism per lattice-conjugacy class of splittings of a
/// symmorphic group; the section is `a -> (a, u(a))`.
///
/// Starting from the coboundary `a -> s - a s` of the origin shift `s`, the
/// other splittings differ by integral derivations. Every such derivation
/// is `a -> a v - v` with `v` in `(1/|G|) Z^d`, so the `v` fixed modulo the
/// lattice are enumerated and deduplicated modulo integral coboundaries.
pub fn splitting_classes(ext: &CrystallographicGroup) -> Result<Vec<CrossedHom>> {
    let witness = is_symmorphic(ext)?;
    let s = witness.shift.ok_or(Error::NotSplit)?;
    let g = ext.point_group();
    let d = ext.dimension();
    let n = g.order();
    let gens = g.generator_indices();
    let k = gens.len();

    let candidates = n.checked_pow(d as u32).filter(|&c| c <= ENUMERATION_BOUND);
    let Some(candidates) = candidates else {
        return Err(Error::ModuleTooLarge(format!("{n}^{d} candidate vectors")));
    };

    let mut m = IntegerMatrix::zeros(k * d, d);
    for (b, &a) in gens.iter().enumerate() {
        let mat = g.element(a);
        for i in 0..d {
            for j in 0..d {
                let id = if i == j { BigInt::one() } else { BigInt::zero() };
                m.set(b * d + i, j, mat.get(i, j) - id);
            }
        }
    }
    let snf = smith_normal_form(&m);
    let r = snf.rank();
    let key_of = |x: &[BigInt]| -> Vec<BigInt> {
        let y = snf.left.mul_vec(x);
        y.into_iter()
            .enumerate()
            .map(|(i, yi)| if i < r { yi.mod_floor(&snf.diagonal[i]) } else { yi })
            .collect()
    };

    let base: Vec<RationalVector> = gens
        .iter()
        .map(|&a| {
            let as_ = g.element(a).mul_rational_vec(&s);
            s.iter().zip(&as_).map(|(x, y)| x - y).collect()
        })
        .collect();

    let denom = BigInt::from(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for c in 0..candidates {
        let mut rest = c;
        let v: RationalVector = (0..d)
            .map(|_| {
                let digit = rest % n;
                rest /= n;
                BigRational::new(BigInt::from(digit), denom.clone())
            })
            .collect();
        let mut flat = Vec::with_capacity(k * d);
        let mut deltas = Vec::with_capacity(k);
        let mut integral = true;
        for &a in &gens {
            let av = g.element(a).mul_rational_vec(&v);
            let delta: RationalVector = av.iter().zip(&v).map(|(x, y)| x - y).collect();
            integral &= delta.iter().all(|x| x.is_integer());
            flat.extend(delta.iter().map(|x| x.to_integer()));
            deltas.push(delta);
        }
        if !integral || !seen.insert(key_of(&flat)) {
            continue;
        }
        let values = base.iter().zip(&deltas).map(|(u, dv)| u.iter().zip(dv).map(|(x, y)| x + y).collect()).collect();
        out.push(CrossedHom { generators: gens.clone(), values });
    }
    debug_assert!(out.iter().all(|u| u.extend(g).is_some()));
    Ok(out)
}

/// Whether `u` is a section of `ext`: a crossed homomorphism congruent to the
/// vector system modulo the lattice.
pub fn is_splitting(ext: &CrystallographicGroup, u: &CrossedHom) -> bool {
    let Some(vals) = u.extend(ext.point_group()) else { return false };
    vals.iter().enumerate().all(|(a, v)| frac_vec(v) == *ext.tau(a))
}
