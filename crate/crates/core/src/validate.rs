//! Cross-checks of the embedded reference tables, reported as findings.

use std::fmt;

use serde::Serialize;

/// How a published entry disagrees with what is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MismatchClass {
    /// Published order times index differs from the group order.
    LagrangeViolationInPaper,
    /// A computed subgroup type is absent from the published table.
    MissingInPaper,
    /// A published row has no computed counterpart.
    ExtraInPaper,
    /// A published total or column sum does not add up.
    CountMismatch,
    /// The same row appears twice in one table.
    DuplicateRow,
    /// A published subgroup's point group cannot sit inside the parent's.
    PointGroupNotContained,
    /// Pairwise-commuting order-two generators were expected and not found.
    NonCommutingInvolutions,
}

impl fmt::Display for MismatchClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub location: String,
    pub published: String,
    pub computed: String,
    pub class: MismatchClass,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub dataset: String,
    pub checks_run: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ValidationReport {
    pub fn new(dataset: impl Into<String>) -> Self {
        ValidationReport { dataset: dataset.into(), ..Default::default() }
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn count(&self, class: MismatchClass) -> usize {
        self.mismatches.iter().filter(|m| m.class == class).count()
    }

    pub(crate) fn check(&mut self) {
        self.checks_run += 1;
    }

    pub(crate) fn flag(
        &mut self,
        class: MismatchClass,
        location: impl Into<String>,
        published: impl Into<String>,
        computed: impl Into<String>,
    ) {
        self.mismatches.push(Mismatch {
            location: location.into(),
            published: published.into(),
            computed: computed.into(),
            class,
        });
    }

    /// Folds another report into this one, keeping its dataset prefix in locations.
    pub fn absorb(&mut self, other: ValidationReport) {
        self.checks_run += other.checks_run;
        for mut m in other.mismatches {
            m.location = format!("{}: {}", other.dataset, m.location);
            self.mismatches.push(m);
        }
    }
}

/// Every table check: the 32 point-group subgroup tables, the wallpaper
/// table and its subgroup table, the space-group totals and the amalgamated
/// products.
pub fn validate_all_tables() -> ValidationReport {
    use crate::crystal::{
        validate_amalgamated_products, validate_spacegroup_table, validate_wallpaper_subgroups, validate_wallpaper_table,
    };
    use crate::groups::{point_group_entries, validate_appendix_b};

    let mut report = ValidationReport::new("all tables");
    report.check();
    let entries = point_group_entries();
    if entries.len() != 32 {
        report.flag(MismatchClass::CountMismatch, "point-group types", "32", entries.len().to_string());
    }
    for e in entries {
        match validate_appendix_b(&e.schoenflies) {
            Ok(r) => report.absorb(r),
            Err(err) => report.flag(MismatchClass::ExtraInPaper, e.schoenflies.clone(), "table", err.to_string()),
        }
    }
    report.absorb(validate_wallpaper_table());
    report.absorb(validate_wallpaper_subgroups());
    report.absorb(validate_spacegroup_table());
    report.absorb(validate_amalgamated_products());
    report
}

/// A finding known to be an error in the published tables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Erratum {
    pub location: String,
    pub class: MismatchClass,
    pub published: String,
    pub computed: String,
}

impl Erratum {
    pub fn matches(&self, m: &Mismatch) -> bool {
        self.location == m.location && self.class == m.class && self.published == m.published && self.computed == m.computed
    }
}

impl std::str::FromStr for MismatchClass {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        use MismatchClass::*;
        [
            LagrangeViolationInPaper,
            MissingInPaper,
            ExtraInPaper,
            CountMismatch,
            DuplicateRow,
            PointGroupNotContained,
            NonCommutingInvolutions,
        ]
        .into_iter()
        .find(|c| c.to_string() == s)
        .ok_or_else(|| crate::error::parse_err(format!("unknown mismatch class `{s}`")))
    }
}

pub const ERRATA: &str = include_str!("../data/errata.dat");

/// Parses `location | class | published | computed` lines.
pub fn parse_errata(text: &str) -> crate::Result<Vec<Erratum>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split(" | ").map(str::trim).collect();
        if f.len() != 4 {
            return Err(crate::Error::Dataset { dataset: "errata.dat".into(), message: format!("line {}: expected 4 fields", i + 1) });
        }
        out.push(Erratum { location: f[0].into(), class: f[1].parse()?, published: f[2].into(), computed: f[3].into() });
    }
    Ok(out)
}

pub fn known_errata() -> Vec<Erratum> {
    parse_errata(ERRATA).expect("embedded errata.dat parses")
}

impl ValidationReport {
    /// Whether `m` is listed in `errata`, either as is or under this
    /// report's dataset prefix.
    pub fn is_known(&self, m: &Mismatch, errata: &[Erratum]) -> bool {
        let qualified = Mismatch { location: format!("{}: {}", self.dataset, m.location), ..m.clone() };
        errata.iter().any(|e| e.matches(m) || e.matches(&qualified))
    }

    /// Findings not covered by `errata`.
    pub fn unexpected<'a>(&'a self, errata: &[Erratum]) -> Vec<&'a Mismatch> {
        self.mismatches.iter().filter(|m| !self.is_known(m, errata)).collect()
    }

    /// Errata that no longer show up.
    pub fn stale<'a>(&self, errata: &'a [Erratum]) -> Vec<&'a Erratum> {
        errata.iter().filter(|e| !self.mismatches.iter().any(|m| self.is_known(m, std::slice::from_ref(e)))).collect()
    }
}
