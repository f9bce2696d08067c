//! Crystal classification of PDEs from topological and integrability data.
//!
//! A [`PdeDescriptor`] records what the classification needs about an
//! equation `E_k ⊂ J^k_n(W)`: dimensions, the mod-2 Betti numbers of `W` and
//! of the base `M`, and the integrability hypotheses. Weak integral bordism
//! in degree `p` is `⊕_{r+s=p} H_r(W; Z_2) ⊗ Ω_s` when the equation is
//! formally and completely integrable with `dim E_k ≥ 2n + 1`.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abelian::FgAbelianGroup;
use crate::bordism::{littlest_crystal_assignment, paper_crystal_assignment, relative_bordism, CrystalAssignment};
use crate::error::{parse_err, Error, Result};
use crate::jets::{corpus_system, formal_integrability_check, IntegrabilityVerdict};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFlags {
    pub formally_integrable: bool,
    pub completely_integrable: bool,
    pub symbol_nonzero_at_k: bool,
    pub symbol_nonzero_at_k_plus_1: bool,
    pub affine_fiber_bundle_over_m: bool,
    pub zero_crystal_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeDescriptor {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub order: usize,
    pub dim_e: usize,
    pub betti_w: Vec<usize>,
    pub betti_m: Vec<usize>,
    pub flags: DescriptorFlags,
    /// Key of a matching system in the jets corpus, used to cross-check the
    /// integrability flags.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
}

fn check_betti(name: &str, which: &str, betti: &[usize]) -> Result<()> {
    match betti.first() {
        Some(&h0) if h0 >= 1 => Ok(()),
        _ => Err(parse_err(format!("{name}: {which} must start with h_0 >= 1"))),
    }
}

impl PdeDescriptor {
    pub fn from_yaml(text: &str) -> Result<Self> {
        let d: Self = serde_yaml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_yaml(&read(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        check_betti(&self.name, "betti_w", &self.betti_w)?;
        check_betti(&self.name, "betti_m", &self.betti_m)
    }

    fn require_hypotheses(&self, p: usize) -> Result<()> {
        let fail = |what: String| Err(Error::HypothesisViolated(format!("{}: {what}", self.name)));
        if !self.flags.formally_integrable {
            return fail("not formally integrable".into());
        }
        if !self.flags.completely_integrable {
            return fail("not completely integrable".into());
        }
        if self.dim_e < 2 * self.n + 1 {
            return fail(format!("dim E = {} < 2n + 1 = {}", self.dim_e, 2 * self.n + 1));
        }
        if p >= self.n {
            return fail(format!("degree {p} is not below n = {}", self.n));
        }
        Ok(())
    }

    /// Runs the jets integrability check on the matching corpus system, if
    /// any. Involutivity is accepted in given or in δ-regular coordinates.
    pub fn cross_check(&self) -> Result<Option<IntegrabilityVerdict>> {
        let Some(key) = &self.system else { return Ok(None) };
        let s = corpus_system(key)?;
        let reject = |what: String| Err(Error::HypothesisViolated(format!("{} vs system `{key}`: {what}", self.name)));
        if (s.n_independent(), s.m_dependent(), s.order()) != (self.n, self.m, self.order) {
            return reject(format!(
                "(n, m, k) = ({}, {}, {}) but the system has ({}, {}, {})",
                self.n,
                self.m,
                self.order,
                s.n_independent(),
                s.m_dependent(),
                s.order()
            ));
        }
        let v = formal_integrability_check(&s)?;
        if v.equation_dim != self.dim_e {
            return reject(format!("dim E = {} but the system gives {}", self.dim_e, v.equation_dim));
        }
        let involutive = v.involutivity.involutive || v.regular_involutivity.involutive;
        if self.flags.formally_integrable && !(v.dimension_identity && involutive) {
            return reject("declared formally integrable but the dimension test fails".into());
        }
        Ok(Some(v))
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))
}

/// Weak bordism in degree `p`, and over the base when `W → M` is affine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakBordism {
    pub degree: usize,
    pub group: FgAbelianGroup,
    pub base_group: Option<FgAbelianGroup>,
}

pub fn weak_bordism(d: &PdeDescriptor, p: usize) -> Result<WeakBordism> {
    d.require_hypotheses(p)?;
    let group = relative_bordism(&d.betti_w, p)?;
    let base_group = if d.flags.affine_fiber_bundle_over_m { Some(relative_bordism(&d.betti_m, p)?) } else { None };
    Ok(WeakBordism { degree: p, group, base_group })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SingularBordism {
    Known(FgAbelianGroup),
    Unknown { reason: String },
}

impl SingularBordism {
    pub fn known(&self) -> Option<&FgAbelianGroup> {
        match self {
            SingularBordism::Known(g) => Some(g),
            SingularBordism::Unknown { .. } => None,
        }
    }
}

impl std::fmt::Display for SingularBordism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularBordism::Known(g) => write!(f, "{g}"),
            SingularBordism::Unknown { .. } => f.write_str("unknown"),
        }
    }
}

impl Serialize for SingularBordism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Equal to the weak group when the symbols at orders `k` and `k + 1` are nonzero.
pub fn singular_bordism(d: &PdeDescriptor, p: usize) -> Result<SingularBordism> {
    let weak = weak_bordism(d, p)?;
    if d.flags.symbol_nonzero_at_k && d.flags.symbol_nonzero_at_k_plus_1 {
        Ok(SingularBordism::Known(weak.group))
    } else {
        Ok(SingularBordism::Unknown { reason: "symbol vanishes at order k or k + 1".into() })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Verdict {
    ExtendedZeroCrystal,
    ExtendedCrystal,
    ZeroCrystal,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// Bordism of smooth solutions: an extension `0 → K → Ω → quotient → 0`
/// with `K` undetermined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnknownExtension {
    pub degree: usize,
    pub quotient: FgAbelianGroup,
    pub kernel: String,
}

pub const NOT_ZERO_CRYSTAL_CAVEAT: &str = "not a 0-crystal unless full admissibility asserted";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrystalClassification {
    pub name: String,
    pub weak_bordism: FgAbelianGroup,
    pub base_bordism: Option<FgAbelianGroup>,
    pub singular_bordism: SingularBordism,
    pub verdict: Verdict,
    pub crystal_dimension: usize,
    pub crystal_group_name: String,
    /// `dim R^{Ω_{n-1}}`, the order of the weak group.
    #[serde(serialize_with = "decimal")]
    pub crystal_conservation_dim: Option<BigInt>,
    pub smooth_bordism: UnknownExtension,
    pub integrability_check: Option<IntegrabilityVerdict>,
    pub caveats: Vec<String>,
}

fn decimal<S: serde::Serializer>(x: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

/// `{"weak_bordism", "singular_bordism", "verdict", "crystal", "caveats"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub weak_bordism: String,
    pub singular_bordism: String,
    pub verdict: String,
    pub crystal: CrystalAssignment,
    pub caveats: Vec<String>,
}

impl CrystalClassification {
    pub fn report(&self) -> ClassificationReport {
        ClassificationReport {
            weak_bordism: self.weak_bordism.to_string(),
            singular_bordism: self.singular_bordism.to_string(),
            verdict: self.verdict.to_string(),
            crystal: CrystalAssignment { dimension: self.crystal_dimension, name: self.crystal_group_name.clone() },
            caveats: self.caveats.clone(),
        }
    }
}

/// Classifies at degree `n - 1`.
pub fn classify(d: &PdeDescriptor) -> Result<CrystalClassification> {
    d.validate()?;
    let integrability_check = d.cross_check()?;
    let p = d.n.checked_sub(1).ok_or_else(|| Error::HypothesisViolated(format!("{}: n = 0", d.name)))?;
    let weak = weak_bordism(d, p)?;
    let singular = singular_bordism(d, p)?;
    let mut caveats = Vec::new();
    if let SingularBordism::Unknown { reason } = &singular {
        caveats.push(format!("singular bordism unknown: {reason}"));
    }
    let trivial = weak.group.is_trivial();
    let verdict = match (trivial, d.flags.zero_crystal_asserted) {
        (true, true) => Verdict::ZeroCrystal,
        (true, false) => {
            caveats.push(NOT_ZERO_CRYSTAL_CAVEAT.into());
            Verdict::ExtendedZeroCrystal
        }
        (false, false) => Verdict::ExtendedCrystal,
        (false, true) => {
            return Err(Error::HypothesisViolated(format!(
                "{}: zero crystal asserted but the weak bordism group {} is nontrivial",
                d.name, weak.group
            )))
        }
    };
    let assignment = match paper_crystal_assignment(&weak.group) {
        Ok(a) => a,
        Err(Error::UnassignedInPaper(_)) => {
            caveats.push(format!("no published assignment for {}; using Z^d x| Z_2^d", weak.group));
            littlest_crystal_assignment(&weak.group)?
        }
        Err(e) => return Err(e),
    };
    if let Ok(littlest) = littlest_crystal_assignment(&weak.group) {
        if littlest.dimension < assignment.dimension {
            caveats.push(format!(
                "a {}-dimensional crystallographic group {} also extends {}",
                littlest.dimension, littlest.name, weak.group
            ));
        }
    }
    Ok(CrystalClassification {
        name: d.name.clone(),
        crystal_conservation_dim: weak.group.order(),
        smooth_bordism: UnknownExtension { degree: p, quotient: weak.group.clone(), kernel: "undetermined".into() },
        weak_bordism: weak.group,
        base_bordism: weak.base_group,
        singular_bordism: singular,
        verdict,
        crystal_dimension: assignment.dimension,
        crystal_group_name: assignment.name,
        integrability_check,
        caveats,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Intersection {
    pub pair: (usize, usize),
    pub nonempty: bool,
    #[serde(default)]
    pub descriptor: Option<PdeDescriptor>,
    pub union_connected: bool,
}

/// `E_k = ∪ A_i`, the `A_i` classifiable components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPdeDescriptor {
    pub name: String,
    /// Parts of `E_k` recorded but not classified, such as singular loci.
    #[serde(default)]
    pub singular_locus: Vec<String>,
    pub components: Vec<PdeDescriptor>,
    #[serde(default)]
    pub intersections: Vec<Intersection>,
}

impl SingularPdeDescriptor {
    pub fn from_yaml(text: &str) -> Result<Self> {
        let s: Self = serde_yaml::from_str(text).map_err(|e| parse_err(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_yaml(&read(path)?)
    }

    /// Wraps a regular descriptor as a one-component singular one.
    pub fn single(d: PdeDescriptor) -> Self {
        SingularPdeDescriptor { name: d.name.clone(), singular_locus: Vec::new(), components: vec![d], intersections: Vec::new() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.is_empty() {
            return Err(parse_err(format!("{}: no components", self.name)));
        }
        for c in &self.components {
            c.validate()?;
        }
        for x in &self.intersections {
            let (i, j) = x.pair;
            if i >= self.components.len() || j >= self.components.len() || i == j {
                return Err(parse_err(format!("{}: bad intersection pair ({i}, {j})", self.name)));
            }
            if let Some(d) = &x.descriptor {
                d.validate()?;
            }
        }
        Ok(())
    }

    pub fn intersection(&self, i: usize, j: usize) -> Option<&Intersection> {
        self.intersections.iter().find(|x| x.pair == (i, j) || x.pair == (j, i))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SingularVerdict {
    ExtendedZeroCrystalSingular,
    ExtendedCrystalSingular,
    ZeroCrystalSingular,
    /// Components fall under different verdicts.
    Mixed,
}

impl std::fmt::Display for SingularVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularClassification {
    pub name: String,
    pub verdict: SingularVerdict,
    pub components: Vec<CrystalClassification>,
    pub singular_locus: Vec<String>,
}

pub fn classify_singular(s: &SingularPdeDescriptor) -> Result<SingularClassification> {
    s.validate()?;
    let components = s
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            classify(c).map_err(|e| match e {
                Error::HypothesisViolated(m) => Error::HypothesisViolated(format!("component {i}: {m}")),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all = |v: Verdict| components.iter().all(|c| c.verdict == v);
    let verdict = if all(Verdict::ZeroCrystal) {
        SingularVerdict::ZeroCrystalSingular
    } else if all(Verdict::ExtendedZeroCrystal) {
        SingularVerdict::ExtendedZeroCrystalSingular
    } else if all(Verdict::ExtendedCrystal) {
        SingularVerdict::ExtendedCrystalSingular
    } else {
        SingularVerdict::Mixed
    };
    Ok(SingularClassification { name: s.name.clone(), verdict, components, singular_locus: s.singular_locus.clone() })
}

/// Weak bordism of `A_i`, `A_j` and `A_i ∩ A_j` in one degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentComparison {
    pub degree: usize,
    pub component_i: FgAbelianGroup,
    pub component_j: FgAbelianGroup,
    pub intersection: FgAbelianGroup,
    /// `Z_2`-ranks of the three groups.
    pub witness_dims: [usize; 3],
    pub isomorphic: bool,
    pub conclusion: String,
}

pub fn component_bordism_compare(s: &SingularPdeDescriptor, i: usize, j: usize, p: usize) -> Result<ComponentComparison> {
    s.validate()?;
    let get = |k: usize| {
        s.components.get(k).ok_or_else(|| Error::HypothesisViolated(format!("{}: no component {k}", s.name)))
    };
    let (a, b) = (get(i)?, get(j)?);
    let x = s
        .intersection(i, j)
        .filter(|x| x.nonempty)
        .ok_or_else(|| Error::HypothesisViolated(format!("{}: components {i} and {j} do not meet", s.name)))?;
    let ab = x
        .descriptor
        .as_ref()
        .ok_or_else(|| Error::HypothesisViolated(format!("{}: no descriptor for the intersection", s.name)))?;
    let groups = [weak_bordism(a, p)?.group, weak_bordism(b, p)?.group, weak_bordism(ab, p)?.group];
    let isomorphic = groups[0] == groups[1] && groups[1] == groups[2];
    let rank = |g: &FgAbelianGroup| g.z2_rank().unwrap_or(0);
    let conclusion = if isomorphic {
        format!("weak singular solutions joining {} and {} exist exactly when the bordism classes agree", a.name, b.name)
    } else {
        "isomorphism FAILED".to_string()
    };
    let [gi, gj, gx] = groups;
    Ok(ComponentComparison {
        degree: p,
        witness_dims: [rank(&gi), rank(&gj), rank(&gx)],
        component_i: gi,
        component_j: gj,
        intersection: gx,
        isomorphic,
        conclusion,
    })
}

/// `(key, file contents)` of the embedded descriptors.
pub const DESCRIPTORS: &[(&str, &str)] = &[
    ("fourier", include_str!("../../data/descriptors/fourier.desc")),
    ("ricci_flow", include_str!("../../data/descriptors/ricci_flow.desc")),
    ("navier_stokes", include_str!("../../data/descriptors/navier_stokes.desc")),
    ("dalembert_t2", include_str!("../../data/descriptors/dalembert_t2.desc")),
    ("tricomi_t2", include_str!("../../data/descriptors/tricomi_t2.desc")),
    ("tricomi_s2", include_str!("../../data/descriptors/tricomi_s2.desc")),
    ("tricomi_rp2", include_str!("../../data/descriptors/tricomi_rp2.desc")),
];

pub const SINGULAR_DESCRIPTORS: &[(&str, &str)] = &[
    ("singular_component", include_str!("../../data/descriptors/singular_component.desc")),
    ("magnetohydrodynamics", include_str!("../../data/descriptors/magnetohydrodynamics.desc")),
];

fn lookup<'a>(table: &[(&str, &'a str)], key: &str) -> Result<&'a str> {
    table
        .iter()
        .find(|(k, _)| *k == key)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Dataset { dataset: "descriptors".into(), message: format!("no descriptor `{key}`") })
}

pub fn descriptor(key: &str) -> Result<PdeDescriptor> {
    PdeDescriptor::from_yaml(lookup(DESCRIPTORS, key)?)
}

pub fn singular_descriptor(key: &str) -> Result<SingularPdeDescriptor> {
    SingularPdeDescriptor::from_yaml(lookup(SINGULAR_DESCRIPTORS, key)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ricci_flow_is_an_extended_crystal() {
        let c = classify(&descriptor("ricci_flow").unwrap()).unwrap();
        assert_eq!(c.weak_bordism, FgAbelianGroup::z2_power(1));
        assert_eq!(c.base_bordism, Some(FgAbelianGroup::z2_power(1)));
        assert_eq!(c.verdict, Verdict::ExtendedCrystal);
        assert_eq!((c.crystal_dimension, c.crystal_group_name.as_str()), (2, "p2"));
        assert_eq!(c.crystal_conservation_dim, Some(BigInt::from(2)));
    }

    #[test]
    fn navier_stokes_is_not_a_zero_crystal_by_default() {
        let mut d = descriptor("navier_stokes").unwrap();
        let c = classify(&d).unwrap();
        assert_eq!(c.verdict, Verdict::ExtendedZeroCrystal);
        assert!(c.caveats.iter().any(|s| s == NOT_ZERO_CRYSTAL_CAVEAT));
        d.flags.zero_crystal_asserted = true;
        assert_eq!(classify(&d).unwrap().verdict, Verdict::ZeroCrystal);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let mut d = descriptor("navier_stokes").unwrap();
        d.dim_e = 8;
        assert!(matches!(weak_bordism(&d, 3), Err(Error::HypothesisViolated(_))));
        let mut d = descriptor("navier_stokes").unwrap();
        d.flags.completely_integrable = false;
        assert!(matches!(weak_bordism(&d, 3), Err(Error::HypothesisViolated(_))));
        let d = descriptor("navier_stokes").unwrap();
        assert!(matches!(weak_bordism(&d, 4), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn zero_crystal_needs_trivial_bordism() {
        let mut d = descriptor("ricci_flow").unwrap();
        d.flags.zero_crystal_asserted = true;
        assert!(matches!(classify(&d), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn vanishing_symbol_leaves_singular_bordism_unknown() {
        let mut d = descriptor("ricci_flow").unwrap();
        d.flags.symbol_nonzero_at_k_plus_1 = false;
        assert!(matches!(singular_bordism(&d, 3).unwrap(), SingularBordism::Unknown { .. }));
        assert_eq!(classify(&d).unwrap().report().singular_bordism, "unknown");
    }

    #[test]
    fn cross_check_rejects_wrong_dimension() {
        let mut d = descriptor("tricomi_t2").unwrap();
        d.dim_e = 6;
        assert!(matches!(d.cross_check(), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn bad_betti_data_is_rejected() {
        let text = lookup(DESCRIPTORS, "fourier").unwrap().replace("betti_w: [1, 0, 0]", "betti_w: [0, 1]");
        assert!(PdeDescriptor::from_yaml(&text).is_err());
        let text = lookup(DESCRIPTORS, "fourier").unwrap().replace("betti_w: [1, 0, 0]", "betti_w: []");
        assert!(PdeDescriptor::from_yaml(&text).is_err());
    }

    #[test]
    fn intersection_pairs_are_checked() {
        let mut s = singular_descriptor("singular_component").unwrap();
        s.intersections[0].pair = (0, 5);
        assert!(s.validate().is_err());
    }
}
