//! Systems of differential polynomial equations on a jet space.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::poly::{DiffPoly, MultiIndex, Var, VarNames, MAX_INDEPENDENT};

/// A system of equations `F = 0` of order at most `order`, with exclusions
/// `G != 0` that sample points must satisfy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdeSystem {
    pub name: String,
    independent: Vec<String>,
    dependent: Vec<String>,
    symbols: Vec<String>,
    order: usize,
    equations: Vec<DiffPoly>,
    exclusions: Vec<DiffPoly>,
}

impl PdeSystem {
    pub fn new(
        name: impl Into<String>,
        independent: Vec<String>,
        dependent: Vec<String>,
        order: usize,
        equations: Vec<DiffPoly>,
        exclusions: Vec<DiffPoly>,
    ) -> Result<Self> {
        let s = PdeSystem { name: name.into(), independent, dependent, symbols: Vec::new(), order, equations, exclusions };
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<()> {
        let n = self.independent.len();
        if n == 0 || n > MAX_INDEPENDENT {
            return Err(Error::Parse(format!("between 1 and {MAX_INDEPENDENT} independent variables required, got {n}")));
        }
        let unique: BTreeSet<&String> = self.independent.iter().chain(&self.dependent).collect();
        if unique.len() != n + self.dependent.len() {
            return Err(Error::Parse("variable names must be distinct".into()));
        }
        for p in self.equations.iter().chain(&self.exclusions) {
            for v in p.variables() {
                let ok = match v {
                    Var::X(i) => (i as usize) < n,
                    Var::Y(j, mi) => (j as usize) < self.dependent.len() && mi.counts()[n..].iter().all(|&c| c == 0),
                    Var::Sym(_) => false,
                };
                if !ok {
                    return Err(Error::Parse(format!("variable {} outside the declared jet space", self.var_name(&v))));
                }
            }
        }
        if let Some(p) = self.equations.iter().find(|p| p.order() > self.order) {
            return Err(Error::Parse(format!("equation {} exceeds order {}", p.display(self), self.order)));
        }
        Ok(())
    }

    pub fn n_independent(&self) -> usize {
        self.independent.len()
    }

    pub fn m_dependent(&self) -> usize {
        self.dependent.len()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn independent(&self) -> &[String] {
        &self.independent
    }

    pub fn dependent(&self) -> &[String] {
        &self.dependent
    }

    pub fn equations(&self) -> &[DiffPoly] {
        &self.equations
    }

    pub fn exclusions(&self) -> &[DiffPoly] {
        &self.exclusions
    }

    pub(crate) fn with_symbols(mut self, symbols: Vec<String>) -> Self {
        self.symbols = symbols;
        self
    }

    /// Index of a dependent variable by name.
    pub fn dependent_index(&self, name: &str) -> Option<usize> {
        self.dependent.iter().position(|d| d == name)
    }

    /// Jet coordinates of exactly the given order.
    pub fn jet_variables(&self, order: usize) -> Vec<Var> {
        let idx = MultiIndex::all_of_order(self.n_independent(), order);
        (0..self.m_dependent()).flat_map(|j| idx.iter().map(move |mi| Var::jet(j, *mi))).collect()
    }

    /// Coordinates of `J^order`: independent variables then jets by order.
    pub fn coordinates(&self, order: usize) -> Vec<Var> {
        let mut out: Vec<Var> = (0..self.n_independent()).map(|i| Var::X(i as u8)).collect();
        for o in 0..=order {
            out.extend(self.jet_variables(o));
        }
        out
    }

    /// Adds the equations `y = 0` together with all derivatives of `y` up to
    /// the system order.
    pub fn restrict_to_zero(&self, dep: usize) -> Result<PdeSystem> {
        if dep >= self.m_dependent() {
            return Err(Error::DimensionMismatch { expected: self.m_dependent(), found: dep });
        }
        let mut s = self.clone();
        for o in 0..=self.order {
            for mi in MultiIndex::all_of_order(self.n_independent(), o) {
                s.equations.push(DiffPoly::jet(dep, mi));
            }
        }
        s.name = format!("{} with {} = 0", self.name, self.dependent[dep]);
        Ok(s)
    }

    /// Replaces the equations, keeping the coordinates.
    pub fn with_equations(&self, equations: Vec<DiffPoly>, order: usize) -> Result<PdeSystem> {
        let mut s = self.clone();
        s.equations = equations;
        s.order = order;
        s.check()?;
        Ok(s)
    }

    /// Name of a jet token, e.g. `u_txx`.
    pub fn jet_name(&self, dep: usize, mi: &MultiIndex) -> String {
        let letters: String = mi.directions().iter().map(|&d| self.independent[d].as_str()).collect();
        if letters.is_empty() {
            self.dependent[dep].clone()
        } else {
            format!("{}_{}", self.dependent[dep], letters)
        }
    }
}

impl VarNames for PdeSystem {
    fn var_name(&self, v: &Var) -> String {
        match v {
            Var::X(i) => self.independent.get(*i as usize).cloned().unwrap_or_else(|| format!("x{}", i + 1)),
            Var::Y(j, mi) if (*j as usize) < self.dependent.len() => self.jet_name(*j as usize, mi),
            Var::Y(j, _) => format!("y{}", j + 1),
            Var::Sym(s) => self.symbols.get(*s as usize).cloned().unwrap_or_else(|| format!("s{}", s + 1)),
        }
    }
}

/// The `r`-th prolongation: every `D_ν F` with `|ν| <= r`, as a set.
pub fn prolong_system(s: &PdeSystem, r: usize) -> PdeSystem {
    let n = s.n_independent();
    let mut seen: BTreeSet<DiffPoly> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |p: DiffPoly, out: &mut Vec<DiffPoly>| {
        if !p.is_zero() && seen.insert(p.monic()) {
            out.push(p);
        }
    };
    let mut layer: Vec<DiffPoly> = s.equations.clone();
    for p in &layer {
        push(p.clone(), &mut out);
    }
    for _ in 0..r {
        // D_ν with ν sorted: extend only in directions >= the last one used
        let mut next = Vec::new();
        let mut next_seen = BTreeSet::new();
        for p in &layer {
            for i in 0..n {
                let d = p.total_derivative(i);
                if !d.is_zero() && next_seen.insert(d.clone()) {
                    next.push(d);
                }
            }
        }
        for p in &next {
            push(p.clone(), &mut out);
        }
        layer = next;
    }
    let mut p = s.clone();
    p.equations = out;
    p.order = s.order + r;
    p
}
