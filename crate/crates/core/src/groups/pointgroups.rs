//! The embedded point-group dataset and the published subgroup tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use super::{canonical_label, close_group, enumerate_subgroups, FiniteMatrixGroup};
use crate::abelian::IntegerMatrix;
use crate::error::{Error, Result};
use crate::validate::{MismatchClass, ValidationReport};

const POINTGROUPS: &str = include_str!("../../data/pointgroups.dat");
const APPENDIX_B: &str = include_str!("../../data/appendix_b.dat");

#[derive(Clone, Debug)]
pub struct PointGroupEntry {
    pub schoenflies: String,
    pub international: String,
    pub documented_order: usize,
    pub generators: Vec<IntegerMatrix>,
}

impl PointGroupEntry {
    pub fn build(&self) -> Result<FiniteMatrixGroup> {
        close_group(3, &self.generators)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PublishedSubgroupRow {
    pub iso_name: String,
    pub order: usize,
    pub index: usize,
}

fn dataset_err(dataset: &str, message: impl Into<String>) -> Error {
    Error::Dataset { dataset: dataset.to_string(), message: message.into() }
}

fn parse_pointgroups(text: &str) -> Result<Vec<PointGroupEntry>> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 4 {
            return Err(dataset_err("pointgroups.dat", format!("line {}: expected at least 4 fields", lineno + 1)));
        }
        let documented_order = fields[2]
            .parse()
            .map_err(|_| dataset_err("pointgroups.dat", format!("line {}: bad order", lineno + 1)))?;
        let generators = if fields[3] == "-" {
            Vec::new()
        } else {
            fields[3..].iter().map(|f| f.parse()).collect::<Result<Vec<IntegerMatrix>>>()?
        };
        out.push(PointGroupEntry {
            schoenflies: fields[0].to_string(),
            international: fields[1].to_string(),
            documented_order,
            generators,
        });
    }
    Ok(out)
}

/// The 32 point groups, in dataset order.
pub fn point_group_entries() -> &'static [PointGroupEntry] {
    static ENTRIES: OnceLock<Vec<PointGroupEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| parse_pointgroups(POINTGROUPS).expect("embedded pointgroups.dat parses"))
}

fn normalize(name: &str) -> String {
    let key: String = name.chars().filter(|c| !matches!(c, '_' | '{' | '}' | ' ')).collect();
    match key.as_str() {
        "S2" => "Ci".to_string(),
        "C1h" => "Cs".to_string(),
        "C3i" => "S6".to_string(),
        _ => key,
    }
}

/// Finds a point group by Schoenflies symbol (with or without underscores,
/// including the aliases `S_2`, `C_1h`, `C_3i`) or by international symbol.
pub fn lookup_point_group(name: &str) -> Result<&'static PointGroupEntry> {
    let key = normalize(name);
    point_group_entries()
        .iter()
        .find(|e| normalize(&e.schoenflies) == key)
        .or_else(|| point_group_entries().iter().find(|e| e.international == canonical_label(name.trim())))
        .ok_or_else(|| Error::UnknownPointGroup(name.to_string()))
}

pub fn point_group(name: &str) -> Result<FiniteMatrixGroup> {
    lookup_point_group(name)?.build()
}

fn parse_appendix_b(text: &str) -> Result<BTreeMap<String, Vec<PublishedSubgroupRow>>> {
    let mut tables: BTreeMap<String, Vec<PublishedSubgroupRow>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = Some(h.to_string());
            tables.entry(h.to_string()).or_default();
            continue;
        }
        let bad = || dataset_err("appendix_b.dat", format!("line {}: expected `subgroup order index`", lineno + 1));
        let table = current.as_ref().ok_or_else(bad)?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(bad());
        }
        tables.get_mut(table).unwrap().push(PublishedSubgroupRow {
            iso_name: f[0].to_string(),
            order: f[1].parse().map_err(|_| bad())?,
            index: f[2].parse().map_err(|_| bad())?,
        });
    }
    Ok(tables)
}

fn appendix_b() -> &'static BTreeMap<String, Vec<PublishedSubgroupRow>> {
    static TABLES: OnceLock<BTreeMap<String, Vec<PublishedSubgroupRow>>> = OnceLock::new();
    TABLES.get_or_init(|| parse_appendix_b(APPENDIX_B).expect("embedded appendix_b.dat parses"))
}

/// The published subgroup table of a point group, rows in published order.
pub fn appendix_b_table(name: &str) -> Result<&'static [PublishedSubgroupRow]> {
    let entry = lookup_point_group(name)?;
    appendix_b()
        .get(&entry.schoenflies)
        .map(Vec::as_slice)
        .ok_or_else(|| dataset_err("appendix_b.dat", format!("no table for {}", entry.schoenflies)))
}

/// Compares the computed subgroup lattice of a point group with its published table.
///
/// Both sides are collapsed to sets of `(label, order, index)`. A published
/// row that breaks Lagrange's formula is reported as such and not also as extra.
pub fn validate_appendix_b(name: &str) -> Result<ValidationReport> {
    let entry = lookup_point_group(name)?;
    let g = entry.build()?;
    let published = appendix_b_table(name)?;
    let mut report = ValidationReport::new(format!("appendix_b/{}", entry.schoenflies));

    let computed: BTreeSet<(String, usize, usize)> =
        enumerate_subgroups(&g).into_iter().map(|r| (r.iso_name, r.order, r.index)).collect();

    report.check();
    if g.order() != entry.documented_order {
        report.flag(
            MismatchClass::CountMismatch,
            "group order",
            entry.documented_order.to_string(),
            g.order().to_string(),
        );
    }

    let mut seen = BTreeSet::new();
    let mut published_keys = BTreeSet::new();
    for row in published {
        report.check();
        let key = (canonical_label(&row.iso_name).to_string(), row.order, row.index);
        let shown = format!("{} / {} / {}", row.iso_name, row.order, row.index);
        if !seen.insert((row.iso_name.clone(), row.order, row.index)) {
            report.flag(MismatchClass::DuplicateRow, entry.schoenflies.clone(), shown, "listed once");
            continue;
        }
        published_keys.insert(key.clone());
        if row.order * row.index != g.order() {
            report.flag(
                MismatchClass::LagrangeViolationInPaper,
                entry.schoenflies.clone(),
                shown,
                format!("order x index = {} but the group has order {}", row.order * row.index, g.order()),
            );
        } else if !computed.contains(&key) {
            report.flag(MismatchClass::ExtraInPaper, entry.schoenflies.clone(), shown, "no such subgroup");
        }
    }
    for (iso, order, index) in &computed {
        report.check();
        if !published_keys.contains(&(iso.clone(), *order, *index)) {
            report.flag(
                MismatchClass::MissingInPaper,
                entry.schoenflies.clone(),
                "absent",
                format!("{iso} / {order} / {index}"),
            );
        }
    }
    Ok(report)
}
