//! Embedded systems used for tests and the published dimension counts.

use crate::error::{Error, Result};

use super::parse::PdeSystemFile;
use super::system::PdeSystem;

/// `(key, file contents)` of the default corpus.
pub const CORPUS: &[(&str, &str)] = &[
    ("heat", include_str!("../../data/corpus/heat.pde")),
    ("continuity", include_str!("../../data/corpus/continuity.pde")),
    ("pressure", include_str!("../../data/corpus/pressure.pde")),
    ("singular_component", include_str!("../../data/corpus/singular_component.pde")),
    ("dalembert", include_str!("../../data/corpus/dalembert.pde")),
    ("non_involutive", include_str!("../../data/corpus/non_involutive.pde")),
    ("tricomi", include_str!("../../data/corpus/tricomi.pde")),
];

/// The magnetohydrodynamics system; large, so kept out of [`CORPUS`].
pub const MHD: &str = include_str!("../../data/corpus/magnetohydrodynamics.pde");

pub fn corpus_file(key: &str) -> Result<PdeSystemFile> {
    let text = match key {
        "magnetohydrodynamics" | "mhd" => MHD,
        _ => CORPUS
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Dataset { dataset: "corpus".into(), message: format!("no system `{key}`") })?,
    };
    PdeSystemFile::from_yaml(text)
}

pub fn corpus_system(key: &str) -> Result<PdeSystem> {
    corpus_file(key)?.build()
}

pub fn mhd_system() -> Result<PdeSystem> {
    corpus_system("magnetohydrodynamics")
}

/// The magnetohydrodynamics system restricted to a vanishing energy source.
pub fn mhd_boundary_system() -> Result<PdeSystem> {
    let s = mhd_system()?;
    let h = s.dependent_index("h").expect("energy source variable");
    s.restrict_to_zero(h)
}
