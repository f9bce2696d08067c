//! Embedded crystallographic tables: the 17 plane groups, the published
//! space-group summary, the plane subgroup tables, and the amalgamated
//! products realised in dimension 3.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{commuting_involutions_check, AffineElement, CrystallographicGroup};
use crate::abelian::IntegerMatrix;
use crate::error::{Error, Result};
use crate::groups::{enumerate_subgroups, lookup_point_group, FiniteMatrixGroup};
use crate::validate::{MismatchClass, ValidationReport};

const WALLPAPER: &str = include_str!("../../data/wallpaper17.dat");
const APPENDIX_A: &str = include_str!("../../data/appendix_a.dat");
const APPENDIX_C: &str = include_str!("../../data/appendix_c.dat");
const APPENDIX_D: &str = include_str!("../../data/appendix_d.dat");

fn dataset_err(dataset: &str, message: impl Into<String>) -> Error {
    Error::Dataset { dataset: dataset.to_string(), message: message.into() }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

#[derive(Clone, Debug)]
pub struct WallpaperInfo {
    pub name: String,
    pub syngony: String,
    /// Published point-group label: `Z1`, `Z2`, `D1`, ..., `D6`.
    pub point_group: String,
    pub group: CrystallographicGroup,
}

fn parse_generator(field: &str) -> Result<AffineElement> {
    let bad = || dataset_err("wallpaper17.dat", format!("bad generator `{field}`"));
    let (m, t) = field.split_once(':').ok_or_else(bad)?;
    let point: IntegerMatrix = m.parse()?;
    let translation = t
        .split(',')
        .map(|x| x.trim().parse::<BigRational>().map_err(|_| bad()))
        .collect::<Result<Vec<_>>>()?;
    Ok(AffineElement::new(point, translation))
}

fn parse_wallpaper(text: &str) -> Result<Vec<WallpaperInfo>> {
    let mut out = Vec::new();
    for (lineno, line) in data_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() < 4 {
            return Err(dataset_err("wallpaper17.dat", format!("line {lineno}: expected at least 4 fields")));
        }
        let gens = if f[3] == "-" { Vec::new() } else { f[3..].iter().map(|g| parse_generator(g)).collect::<Result<_>>()? };
        let group = CrystallographicGroup::from_generators(2, &gens, Some(f[0].to_string()))?;
        out.push(WallpaperInfo {
            name: f[0].to_string(),
            syngony: f[1].to_string(),
            point_group: f[2].to_string(),
            group,
        });
    }
    Ok(out)
}

/// The 17 plane crystallographic groups in published order.
pub fn wallpaper_groups() -> &'static [WallpaperInfo] {
    static GROUPS: OnceLock<Vec<WallpaperInfo>> = OnceLock::new();
    GROUPS.get_or_init(|| parse_wallpaper(WALLPAPER).expect("embedded wallpaper17.dat parses"))
}

pub fn wallpaper_info(name: &str) -> Result<&'static WallpaperInfo> {
    wallpaper_groups()
        .iter()
        .find(|w| w.name == name.trim())
        .ok_or_else(|| Error::UnknownWallpaperGroup(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallpaperSubgroupRow {
    pub name: String,
    /// `None` where the published table leaves the index blank.
    pub index: Option<usize>,
}

fn parse_appendix_d(text: &str) -> Result<BTreeMap<String, Vec<WallpaperSubgroupRow>>> {
    let mut tables: BTreeMap<String, Vec<WallpaperSubgroupRow>> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (lineno, line) in data_lines(text) {
        if let Some(h) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            tables.entry(h.to_string()).or_default();
            current = Some(h.to_string());
            continue;
        }
        let bad = || dataset_err("appendix_d.dat", format!("line {lineno}: expected `subgroup index`"));
        let table = current.as_ref().ok_or_else(bad)?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(bad());
        }
        let index = if f[1] == "-" { None } else { Some(f[1].parse().map_err(|_| bad())?) };
        tables.get_mut(table).unwrap().push(WallpaperSubgroupRow { name: f[0].to_string(), index });
    }
    Ok(tables)
}

fn appendix_d() -> &'static BTreeMap<String, Vec<WallpaperSubgroupRow>> {
    static TABLES: OnceLock<BTreeMap<String, Vec<WallpaperSubgroupRow>>> = OnceLock::new();
    TABLES.get_or_init(|| parse_appendix_d(APPENDIX_D).expect("embedded appendix_d.dat parses"))
}

/// Published subgroup rows of a plane group; empty for groups without a table.
pub fn wallpaper_subgroups(name: &str) -> Result<&'static [WallpaperSubgroupRow]> {
    let info = wallpaper_info(name)?;
    Ok(appendix_d().get(&info.name).map(Vec::as_slice).unwrap_or(&[]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceGroupRow {
    pub syngony: String,
    /// Geometric classes with their published number of space-group types.
    pub classes: Vec<(String, usize)>,
    /// Bravais entries as published, e.g. `15P`.
    pub bravais: Vec<String>,
}

impl SpaceGroupRow {
    pub fn class_total(&self) -> usize {
        self.classes.iter().map(|(_, n)| n).sum()
    }

    pub fn bravais_total(&self) -> usize {
        self.bravais
            .iter()
            .map(|b| b.trim_end_matches(|c: char| c.is_ascii_alphabetic()).parse::<usize>().unwrap_or(0))
            .sum()
    }
}

fn parse_appendix_a(text: &str) -> Result<Vec<SpaceGroupRow>> {
    let mut out = Vec::new();
    for (lineno, line) in data_lines(text) {
        let bad = |m: &str| dataset_err("appendix_a.dat", format!("line {lineno}: {m}"));
        let cols: Vec<&str> = line.split('|').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(bad("expected three `|`-separated columns"));
        }
        let classes = cols[1]
            .split_whitespace()
            .map(|c| {
                let (name, count) = c.strip_suffix(')').and_then(|c| c.split_once('(')).ok_or_else(|| bad(c))?;
                Ok((name.to_string(), count.parse().map_err(|_| bad(c))?))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(SpaceGroupRow {
            syngony: cols[0].to_string(),
            classes,
            bravais: cols[2].split_whitespace().map(str::to_string).collect(),
        });
    }
    Ok(out)
}

/// The published summary of the 230 space-group types, one row per syngony.
pub fn spacegroup_table() -> &'static [SpaceGroupRow] {
    static ROWS: OnceLock<Vec<SpaceGroupRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_appendix_a(APPENDIX_A).expect("embedded appendix_a.dat parses"))
}

/// Rows matching a syngony (case-insensitive), a point-group name, or `all`.
pub fn spacegroup_table_query(filter: &str) -> Result<Vec<SpaceGroupRow>> {
    let rows = spacegroup_table();
    let f = filter.trim();
    if f.eq_ignore_ascii_case("all") {
        return Ok(rows.to_vec());
    }
    if let Some(r) = rows.iter().find(|r| r.syngony.eq_ignore_ascii_case(f)) {
        return Ok(vec![r.clone()]);
    }
    if let Ok(entry) = lookup_point_group(f) {
        let hits: Vec<SpaceGroupRow> = rows
            .iter()
            .filter(|r| {
                r.classes
                    .iter()
                    .any(|(c, _)| lookup_point_group(c).is_ok_and(|e| e.schoenflies == entry.schoenflies))
            })
            .cloned()
            .collect();
        if !hits.is_empty() {
            return Ok(hits);
        }
    }
    Err(Error::UnknownFilter(filter.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AmalgamatedProduct {
    pub product: String,
    pub symbols: Vec<String>,
}

impl AmalgamatedProduct {
    /// The order-two generators among the symbols, as 3x3 matrices.
    pub fn involutions(&self) -> Vec<IntegerMatrix> {
        self.symbols.iter().filter_map(|s| involution_marker(s)).collect()
    }
}

/// Matrix of an order-two generator symbol; `None` for rotations of higher order.
pub fn involution_marker(symbol: &str) -> Option<IntegerMatrix> {
    let d = |a: i64, b: i64, c: i64| IntegerMatrix::from_rows(&[[a, 0, 0], [0, b, 0], [0, 0, c]]);
    match symbol {
        "x" => Some(d(1, -1, 1)),
        "y" => Some(d(-1, 1, 1)),
        "2" => Some(d(-1, -1, 1)),
        "-1" => Some(d(-1, -1, -1)),
        _ => None,
    }
}

fn parse_appendix_c(text: &str) -> Result<Vec<AmalgamatedProduct>> {
    data_lines(text)
        .map(|(lineno, line)| {
            let (p, s) = line
                .split_once('|')
                .ok_or_else(|| dataset_err("appendix_c.dat", format!("line {lineno}: expected `product | symbols`")))?;
            Ok(AmalgamatedProduct {
                product: p.trim().to_string(),
                symbols: s.split_whitespace().map(str::to_string).collect(),
            })
        })
        .collect()
}

pub fn amalgamated_products() -> &'static [AmalgamatedProduct] {
    static ROWS: OnceLock<Vec<AmalgamatedProduct>> = OnceLock::new();
    ROWS.get_or_init(|| parse_appendix_c(APPENDIX_C).expect("embedded appendix_c.dat parses"))
}

/// Element counts of a planar point group by `(det, trace)`; separates the
/// ten planar crystal classes.
pub fn planar_signature(elements: &[IntegerMatrix]) -> BTreeMap<(i64, i64), usize> {
    let mut sig = BTreeMap::new();
    for e in elements {
        let key = (e.determinant().to_i64().unwrap_or(0), e.trace().to_i64().unwrap_or(0));
        *sig.entry(key).or_default() += 1;
    }
    sig
}

fn subgroup_signatures(g: &FiniteMatrixGroup) -> Vec<BTreeMap<(i64, i64), usize>> {
    enumerate_subgroups(g)
        .iter()
        .map(|s| {
            let els: Vec<IntegerMatrix> = s.element_indices.iter().map(|&i| g.element(i).clone()).collect();
            planar_signature(&els)
        })
        .collect()
}

fn is_cyclic(g: &FiniteMatrixGroup) -> bool {
    (0..g.order()).any(|a| g.element_order(a) == g.order())
}

/// Checks the 17-row plane table: row count, published point-group labels
/// against the computed point groups, and that every point group lies in
/// the point group of `p4m` or `p6m`.
pub fn validate_wallpaper_table() -> ValidationReport {
    let groups = wallpaper_groups();
    let mut report = ValidationReport::new("wallpaper");
    report.check();
    if groups.len() != 17 {
        report.flag(MismatchClass::CountMismatch, "row count", "17", groups.len().to_string());
    }
    let maximal: Vec<_> = ["p4m", "p6m"]
        .iter()
        .filter_map(|n| wallpaper_info(n).ok())
        .flat_map(|w| subgroup_signatures(w.group.point_group()))
        .collect();
    for w in groups {
        let pg = w.group.point_group();
        report.check();
        let (kind, n) = w.point_group.split_at(1);
        let expected = match (kind, n.parse::<usize>()) {
            ("Z", Ok(n)) => Some((n, true)),
            ("D", Ok(n)) => Some((2 * n, n <= 1)),
            _ => None,
        };
        let computed = (pg.order(), is_cyclic(pg));
        if expected != Some(computed) {
            report.flag(
                MismatchClass::CountMismatch,
                format!("{} point group", w.name),
                w.point_group.clone(),
                format!("order {}{}", computed.0, if computed.1 { ", cyclic" } else { "" }),
            );
        }
        report.check();
        if !maximal.contains(&planar_signature(pg.elements())) {
            report.flag(
                MismatchClass::PointGroupNotContained,
                w.name.clone(),
                "subgroup of p4m or p6m",
                "point group fits in neither",
            );
        }
    }
    report
}

/// Checks every published plane subgroup table: duplicate rows, unknown
/// names, point-group containment, and divisibility of published indices by
/// the point-group index.
pub fn validate_wallpaper_subgroups() -> ValidationReport {
    let mut report = ValidationReport::new("appendix_d");
    for (parent, rows) in appendix_d() {
        report.check();
        let Ok(g) = wallpaper_info(parent) else {
            report.flag(MismatchClass::ExtraInPaper, parent.clone(), "table", "not a plane group");
            continue;
        };
        let sigs = subgroup_signatures(g.group.point_group());
        let mut seen = BTreeSet::new();
        for row in rows {
            report.check();
            let shown = match row.index {
                Some(i) => format!("{} {}", row.name, i),
                None => format!("{} -", row.name),
            };
            if !seen.insert(row.name.clone()) {
                report.flag(MismatchClass::DuplicateRow, parent.clone(), shown, "listed once");
                continue;
            }
            let Ok(h) = wallpaper_info(&row.name) else {
                report.flag(MismatchClass::ExtraInPaper, parent.clone(), shown, "not a plane group");
                continue;
            };
            let hp = h.group.point_group();
            if !sigs.contains(&planar_signature(hp.elements())) {
                report.flag(
                    MismatchClass::PointGroupNotContained,
                    parent.clone(),
                    shown,
                    format!("point group {} of {} is not contained in {} of {}", h.point_group, h.name, g.point_group, g.name),
                );
                continue;
            }
            if let Some(i) = row.index {
                let pg_index = g.group.point_group().order() / hp.order();
                if i % pg_index != 0 {
                    report.flag(
                        MismatchClass::LagrangeViolationInPaper,
                        parent.clone(),
                        shown,
                        format!("index must be a multiple of the point-group index {pg_index}"),
                    );
                }
            }
        }
    }
    report
}

/// Checks the space-group summary: total 230, 32 distinct known classes, and
/// Bravais counts per syngony against class counts.
pub fn validate_spacegroup_table() -> ValidationReport {
    let rows = spacegroup_table();
    let mut report = ValidationReport::new("appendix_a");
    let total: usize = rows.iter().map(SpaceGroupRow::class_total).sum();
    report.check();
    if total != 230 {
        report.flag(MismatchClass::CountMismatch, "total", "230", total.to_string());
    }
    let mut classes = BTreeSet::new();
    for r in rows {
        for (c, _) in &r.classes {
            report.check();
            match lookup_point_group(c) {
                Ok(e) => {
                    if !classes.insert(e.schoenflies.clone()) {
                        report.flag(MismatchClass::DuplicateRow, r.syngony.clone(), c.clone(), "listed once");
                    }
                }
                Err(_) => report.flag(MismatchClass::ExtraInPaper, r.syngony.clone(), c.clone(), "not a point group"),
            }
        }
        report.check();
        if r.bravais_total() != r.class_total() {
            report.flag(
                MismatchClass::CountMismatch,
                format!("{} Bravais types", r.syngony),
                format!("{} = {}", r.bravais.join(" "), r.bravais_total()),
                format!("class counts sum to {}", r.class_total()),
            );
        }
    }
    report.check();
    if classes.len() != 32 {
        report.flag(MismatchClass::CountMismatch, "geometric classes", "32", classes.len().to_string());
    }
    report
}

/// Checks that the order-two generators of every listed amalgamated product commute.
pub fn validate_amalgamated_products() -> ValidationReport {
    let mut report = ValidationReport::new("appendix_c");
    for p in amalgamated_products() {
        report.check();
        let inv = p.involutions();
        if !commuting_involutions_check(&inv).unwrap_or(false) {
            report.flag(MismatchClass::NonCommutingInvolutions, p.product.clone(), p.symbols.join(" "), "involutions do not commute");
        }
    }
    report
}
