//! Deterministic generic points of jet spaces and equation manifolds.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{solve, Echelon, SparseRow};
use super::poly::{DiffPoly, Var};
use super::system::PdeSystem;

/// Largest numerator and denominator of a sampled coordinate.
pub const SAMPLE_BOUND: i64 = 97;
pub const DEFAULT_SEED: u64 = 20_130_416;
pub const DEFAULT_SAMPLES: usize = 5;
const MAX_ATTEMPTS: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig { seed: DEFAULT_SEED, samples: DEFAULT_SAMPLES }
    }
}

/// A point of `J^k` given by its coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Point(BTreeMap<Var, BigRational>);

impl Point {
    pub fn get(&self, v: &Var) -> BigRational {
        self.0.get(v).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, v: Var, value: BigRational) {
        self.0.insert(v, value);
    }

    pub fn eval(&self, p: &DiffPoly) -> BigRational {
        p.evaluate(&|v| self.get(v))
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND);
    let den = rng.gen_range(1..=SAMPLE_BOUND);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Points used for generic-rank evaluation, and whether they lie on the
/// equation manifold.
#[derive(Clone, Debug)]
pub struct Samples {
    pub points: Vec<Point>,
    pub on_manifold: bool,
}

/// Samples `config.samples` points of `J^order` satisfying the exclusions.
///
/// Points are first moved onto the equation manifold by solving each order
/// group for variables in which it is affine; if that fails for any attempt
/// the whole batch falls back to unconstrained points.
pub fn sample_points(s: &PdeSystem, order: usize, config: &SamplingConfig) -> crate::Result<Samples> {
    let coords = s.coordinates(order);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let plan = AffinePlan::new(s);
    for on_manifold in [true, false] {
        if on_manifold && plan.is_none() {
            continue;
        }
        let mut points = Vec::new();
        let mut attempts = 0;
        while points.len() < config.samples {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                break;
            }
            let mut pt = Point::default();
            for v in &coords {
                pt.set(*v, random_rational(&mut rng));
            }
            if on_manifold && !plan.as_ref().unwrap().solve(&mut pt) {
                continue;
            }
            if s.exclusions().iter().all(|g| !pt.eval(g).is_zero()) {
                points.push(pt);
            }
        }
        if points.len() == config.samples {
            return Ok(Samples { points, on_manifold });
        }
    }
    Err(crate::Error::NoGenericPoint(MAX_ATTEMPTS))
}

/// For each order group, its equations and the jet variables to solve for.
struct AffinePlan<'a> {
    groups: Vec<(Vec<&'a DiffPoly>, Vec<Var>)>,
}

impl<'a> AffinePlan<'a> {
    /// Candidates of a group are the jet coordinates of order at most its
    /// order that no earlier group involves, in which every equation of the
    /// group has degree at most one and no monomial has two of them. Top
    /// order comes first, so lower-order coordinates only absorb rank
    /// deficiencies of the top-order coefficients.
    fn new(s: &'a PdeSystem) -> Option<Self> {
        let mut groups = Vec::new();
        let mut fixed: BTreeSet<Var> = BTreeSet::new();
        for o in 0..=s.order() {
            let eqs: Vec<&DiffPoly> = s.equations().iter().filter(|p| p.order() == o && has_jet_of_order(p, o)).collect();
            if eqs.is_empty() {
                continue;
            }
            let mut cands: Vec<Var> = (0..=o).rev().flat_map(|k| s.jet_variables(k)).filter(|v| !fixed.contains(v)).collect();
            cands.retain(|v| eqs.iter().any(|p| p.degree_in(v) > 0) && eqs.iter().all(|p| p.degree_in(v) <= 1));
            let rank_of: BTreeMap<Var, usize> = cands.iter().enumerate().map(|(i, v)| (*v, i)).collect();
            loop {
                let clash = eqs.iter().flat_map(|p| p.terms()).find_map(|(m, _)| {
                    let inside: Vec<Var> = m.factors().iter().map(|(v, _)| *v).filter(|v| rank_of.contains_key(v) && cands.contains(v)).collect();
                    (inside.len() > 1).then(|| *inside.iter().max_by_key(|v| rank_of[*v]).unwrap())
                });
                match clash {
                    Some(v) => cands.retain(|c| *c != v),
                    None => break,
                }
            }
            if !cands.iter().any(|v| v.jet_order() == Some(o)) {
                return None;
            }
            fixed.extend(eqs.iter().flat_map(|p| p.variables()));
            groups.push((eqs, cands));
        }
        Some(AffinePlan { groups })
    }

    /// Moves `pt` onto the manifold; false when a group has no solution.
    fn solve(&self, pt: &mut Point) -> bool {
        for (eqs, cands) in &self.groups {
            let rows: Vec<SparseRow> = eqs
                .iter()
                .map(|p| {
                    cands
                        .iter()
                        .enumerate()
                        .map(|(c, v)| (c, pt.eval(&p.partial(v))))
                        .filter(|(_, x)| !x.is_zero())
                        .collect()
                })
                .collect();
            let mut ech = Echelon::new();
            for r in &rows {
                ech.insert(r.clone());
            }
            let pivots = ech.pivot_columns();
            for &c in &pivots {
                pt.set(cands[c], BigRational::zero());
            }
            let rhs: Vec<BigRational> = eqs.iter().map(|p| -pt.eval(p)).collect();
            let restricted: Vec<SparseRow> = rows
                .iter()
                .map(|r| pivots.iter().enumerate().filter_map(|(k, c)| r.get(c).map(|x| (k, x.clone()))).collect())
                .collect();
            let Some(z) = solve(&restricted, &rhs, pivots.len()) else { return false };
            for (k, &c) in pivots.iter().enumerate() {
                pt.set(cands[c], z[k].clone());
            }
        }
        true
    }
}

fn has_jet_of_order(p: &DiffPoly, o: usize) -> bool {
    p.variables().iter().any(|v| v.jet_order() == Some(o))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::poly::MultiIndex;

    #[test]
    fn heat_points_lie_on_manifold() {
        let u = |d: &[usize]| DiffPoly::jet(0, MultiIndex::from_directions(d));
        let eq = &u(&[0]) - &u(&[1, 1]);
        let s = PdeSystem::new("heat", vec!["t".into(), "x".into()], vec!["u".into()], 2, vec![eq.clone()], vec![]).unwrap();
        let samples = sample_points(&s, 2, &SamplingConfig::default()).unwrap();
        assert!(samples.on_manifold);
        assert_eq!(samples.points.len(), 5);
        assert!(samples.points.iter().all(|p| p.eval(&eq).is_zero()));
    }

    #[test]
    fn sampling_is_deterministic() {
        let s = PdeSystem::new("free", vec!["x".into()], vec!["u".into()], 1, vec![], vec![]).unwrap();
        let a = sample_points(&s, 1, &SamplingConfig::default()).unwrap();
        let b = sample_points(&s, 1, &SamplingConfig::default()).unwrap();
        assert_eq!(a.points, b.points);
    }

    #[test]
    fn unsatisfiable_exclusion() {
        let s = PdeSystem::new("none", vec!["x".into()], vec!["u".into()], 1, vec![], vec![DiffPoly::zero()]).unwrap();
        assert_eq!(sample_points(&s, 1, &SamplingConfig::default()).unwrap_err(), crate::Error::NoGenericPoint(MAX_ATTEMPTS));
    }
}
