//! Symbols, Cartan characters and the dimension tests built on them.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::linalg::{rank, SparseRow};
use super::poly::{binomial, DiffPoly, MultiIndex, Var};
use super::sample::{sample_points, Point, SamplingConfig};
use super::system::{prolong_system, PdeSystem};

/// Dimension data of a system and its first prolongation at a generic point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolReport {
    pub system: String,
    pub n_independent: usize,
    pub m_dependent: usize,
    pub order: usize,
    pub ambient_top_vars: usize,
    pub generic_rank: usize,
    /// `dim g^{(i)}` for `i = 0..=n`; entry 0 is `dim g`.
    pub symbol_filtration: Vec<usize>,
    /// `α^i = dim g^{(i-1)} - dim g^{(i)}` for `i = 1..=n`.
    pub characters: Vec<usize>,
    /// The filtration after a generic linear change of the independent
    /// variables, so in δ-regular coordinates.
    pub regular_filtration: Vec<usize>,
    pub ambient_jet_dim: usize,
    pub equation_dim: usize,
    /// Dimension of the order `k - 1` part: `J^{k-1}` cut by the lower-order equations.
    pub lower_order_dim: usize,
    pub prolonged_symbol_dim: usize,
    pub prolonged_equation_dim: usize,
    pub sample_ranks: Vec<usize>,
    pub on_manifold: bool,
    pub rank_warnings: Vec<String>,
}

impl SymbolReport {
    pub fn symbol_dim(&self) -> usize {
        self.symbol_filtration[0]
    }
}

/// `∂F/∂v` at a point, for every equation and every variable it contains.
fn jacobian_at(eqs: &[DiffPoly], pt: &Point) -> Vec<BTreeMap<Var, BigRational>> {
    eqs.iter()
        .map(|p| {
            p.variables()
                .into_iter()
                .map(|v| (v, pt.eval(&p.partial(&v))))
                .filter(|(_, x)| !x.is_zero())
                .collect()
        })
        .collect()
}

fn restricted_rank(jac: &[BTreeMap<Var, BigRational>], cols: &[Var]) -> usize {
    let index: BTreeMap<&Var, usize> = cols.iter().enumerate().map(|(i, v)| (v, i)).collect();
    rank(jac.iter().map(|row| -> SparseRow {
        row.iter().filter_map(|(v, x)| index.get(v).map(|&i| (i, x.clone()))).collect()
    }))
}

/// Maximum of `f` over the sample Jacobians, with a warning when fewer than
/// three samples reach it.
struct GenericRank<'a> {
    jacobians: &'a [Vec<BTreeMap<Var, BigRational>>],
    warnings: Vec<String>,
}

impl GenericRank<'_> {
    fn of(&mut self, label: &str, cols: &[Var]) -> (usize, Vec<usize>) {
        let ranks: Vec<usize> = self.jacobians.iter().map(|j| restricted_rank(j, cols)).collect();
        let max = ranks.iter().copied().max().unwrap_or(0);
        let agree = ranks.iter().filter(|&&r| r == max).count();
        if agree < 3.min(ranks.len()) {
            self.warnings.push(format!("{label}: ranks {ranks:?} agree in only {agree} samples"));
        }
        (max, ranks)
    }
}

pub fn jet_dimension(n: usize, m: usize, k: usize) -> usize {
    n + m * binomial_usize(n + k, k)
}

pub(crate) fn binomial_usize(n: usize, k: usize) -> usize {
    binomial(n as u64, k as u64).try_into().expect("binomial fits in usize")
}

/// Columns of the top-order symbol surviving in `g^{(i)}`: multi-indices
/// using only directions `>= i` (zero-based).
fn filtration_columns(s: &PdeSystem, i: usize) -> Vec<Var> {
    s.jet_variables(s.order())
        .into_iter()
        .filter(|v| match v {
            Var::Y(_, mi) => mi.first_direction().is_none_or(|d| d >= i),
            _ => false,
        })
        .collect()
}

/// `dim g^{(i)}` with `g^{(i)}` the symbol elements annihilated by contraction
/// with `i` random vectors; minimum over the samples.
fn regular_symbol_filtration(s: &PdeSystem, jacs: &[Vec<BTreeMap<Var, BigRational>>], seed: u64) -> Vec<usize> {
    let n = s.n_independent();
    let k = s.order();
    let top = s.jet_variables(k);
    let index: BTreeMap<&Var, usize> = top.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let vectors: Vec<Vec<BigRational>> = (0..n)
        .map(|_| (0..n).map(|_| BigRational::from_integer(rng.gen_range(-97i64..=97).into())).collect())
        .collect();
    let lower = if k == 0 { Vec::new() } else { s.jet_variables(k - 1) };
    let contraction = |v: &[BigRational]| -> Vec<SparseRow> {
        lower
            .iter()
            .filter_map(|w| match w {
                Var::Y(j, nu) => Some(
                    (0..n)
                        .filter(|&l| !v[l].is_zero())
                        .map(|l| (index[&Var::Y(*j, nu.raised(l))], v[l].clone()))
                        .collect(),
                ),
                _ => None,
            })
            .collect()
    };
    let mut rows: Vec<Vec<SparseRow>> = jacs
        .iter()
        .map(|jac| {
            jac.iter()
                .map(|row| row.iter().filter_map(|(v, x)| index.get(v).map(|&i| (i, x.clone()))).collect())
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        if i > 0 {
            let extra = contraction(&vectors[i - 1]);
            for r in &mut rows {
                r.extend(extra.iter().cloned());
            }
        }
        let best = rows.iter().map(|r| rank(r.iter().cloned())).max().unwrap_or(0);
        out.push(top.len() - best);
    }
    out
}

pub fn symbol_report(s: &PdeSystem) -> Result<SymbolReport> {
    symbol_report_with(s, &SamplingConfig::default())
}

pub fn symbol_report_with(s: &PdeSystem, config: &SamplingConfig) -> Result<SymbolReport> {
    if s.equations().is_empty() {
        return Err(Error::HypothesisViolated("system has no equations".into()));
    }
    let n = s.n_independent();
    let m = s.m_dependent();
    let k = s.order();
    let samples = sample_points(s, k, config)?;
    let jacs: Vec<_> = samples.points.iter().map(|p| jacobian_at(s.equations(), p)).collect();
    let mut gr = GenericRank { jacobians: &jacs, warnings: Vec::new() };

    let top = s.jet_variables(k);
    let (generic_rank, sample_ranks) = gr.of("symbol rank", &top);
    let mut filtration = vec![top.len() - generic_rank];
    for i in 1..=n {
        let cols = filtration_columns(s, i);
        let (r, _) = gr.of(&format!("g^({i}) rank"), &cols);
        filtration.push(cols.len() - r);
    }
    let characters = filtration.windows(2).map(|w| w[0] - w[1]).collect();
    let regular_filtration = regular_symbol_filtration(s, &jacs, config.seed);

    let ambient = jet_dimension(n, m, k);
    let (full_rank, _) = gr.of("equation rank", &s.coordinates(k));
    let lower_order_dim = if k == 0 {
        n
    } else {
        let lower: Vec<DiffPoly> = s.equations().iter().filter(|p| p.order() < k).cloned().collect();
        let lj: Vec<_> = samples.points.iter().map(|p| jacobian_at(&lower, p)).collect();
        let mut lgr = GenericRank { jacobians: &lj, warnings: Vec::new() };
        let (r, _) = lgr.of("lower-order rank", &s.coordinates(k - 1));
        gr.warnings.extend(lgr.warnings);
        jet_dimension(n, m, k - 1) - r
    };

    let p = prolong_system(s, 1);
    let psamples = sample_points(&p, k + 1, config)?;
    let pjacs: Vec<_> = psamples.points.iter().map(|pt| jacobian_at(p.equations(), pt)).collect();
    let mut pgr = GenericRank { jacobians: &pjacs, warnings: Vec::new() };
    let ptop = p.jet_variables(k + 1);
    let (prank, _) = pgr.of("prolonged symbol rank", &ptop);
    let (pfull, _) = pgr.of("prolonged equation rank", &p.coordinates(k + 1));
    let mut rank_warnings = gr.warnings;
    rank_warnings.extend(pgr.warnings);

    Ok(SymbolReport {
        system: s.name.clone(),
        n_independent: n,
        m_dependent: m,
        order: k,
        ambient_top_vars: top.len(),
        generic_rank,
        symbol_filtration: filtration,
        characters,
        regular_filtration,
        ambient_jet_dim: ambient,
        equation_dim: ambient - full_rank,
        lower_order_dim,
        prolonged_symbol_dim: ptop.len() - prank,
        prolonged_equation_dim: jet_dimension(n, m, k + 1) - pfull,
        sample_ranks,
        on_manifold: samples.on_manifold && psamples.on_manifold,
        rank_warnings,
    })
}

/// Both sides of the Cartan test `dim g_{+1} = Σ_{i<n} dim g^{(i)}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvolutivityLedger {
    pub prolonged_symbol_dim: usize,
    pub filtration_terms: Vec<usize>,
    pub filtration_sum: usize,
    pub involutive: bool,
}

impl InvolutivityLedger {
    pub fn from_report(r: &SymbolReport) -> Self {
        Self::from_filtration(r, &r.symbol_filtration)
    }

    /// The test in δ-regular coordinates.
    pub fn regular_from_report(r: &SymbolReport) -> Self {
        Self::from_filtration(r, &r.regular_filtration)
    }

    fn from_filtration(r: &SymbolReport, filtration: &[usize]) -> Self {
        let terms = filtration[..r.n_independent].to_vec();
        let sum = terms.iter().sum();
        InvolutivityLedger {
            prolonged_symbol_dim: r.prolonged_symbol_dim,
            filtration_terms: terms,
            filtration_sum: sum,
            involutive: sum == r.prolonged_symbol_dim,
        }
    }
}

pub fn cartan_involutivity_test(s: &PdeSystem) -> Result<InvolutivityLedger> {
    Ok(InvolutivityLedger::from_report(&symbol_report(s)?))
}

pub const INTEGRABILITY_CAVEAT: &str = "formally integrable; completely integrable if analytic";

/// Assumptions carried by a passing verdict but not checked.
pub const INTEGRABILITY_ASSUMPTIONS: &[&str] =
    &["dimension-level test only: surjectivity of the prolongation map is inferred from the dimension identity"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegrabilityVerdict {
    pub passed: bool,
    pub equation_dim: usize,
    pub prolonged_symbol_dim: usize,
    pub prolonged_equation_dim: usize,
    pub dimension_identity: bool,
    pub involutivity: InvolutivityLedger,
    /// The Cartan test in δ-regular coordinates; informational.
    pub regular_involutivity: InvolutivityLedger,
    pub caveat: Option<String>,
    pub assumptions: Vec<String>,
}

impl IntegrabilityVerdict {
    pub fn from_report(r: &SymbolReport) -> Self {
        let involutivity = InvolutivityLedger::from_report(r);
        let dimension_identity = r.prolonged_equation_dim == r.equation_dim + r.prolonged_symbol_dim;
        let passed = dimension_identity && involutivity.involutive;
        IntegrabilityVerdict {
            passed,
            equation_dim: r.equation_dim,
            prolonged_symbol_dim: r.prolonged_symbol_dim,
            prolonged_equation_dim: r.prolonged_equation_dim,
            dimension_identity,
            involutivity,
            regular_involutivity: InvolutivityLedger::regular_from_report(r),
            caveat: passed.then(|| INTEGRABILITY_CAVEAT.to_string()),
            assumptions: INTEGRABILITY_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub fn formal_integrability_check(s: &PdeSystem) -> Result<IntegrabilityVerdict> {
    Ok(IntegrabilityVerdict::from_report(&symbol_report(s)?))
}

/// `dim_prev + Σ_i C(r+i, i) α^i`, with `characters[i-1] = α^i`.
pub fn prolongation_dimension_formula(dim_prev: usize, characters: &[usize], r: usize) -> usize {
    dim_prev + characters.iter().enumerate().map(|(i, a)| binomial_usize(r + i + 1, i + 1) * a).sum::<usize>()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartanDistribution {
    pub dimension: usize,
    pub parameters: usize,
    pub constraint_rank: usize,
    pub sample_ranks: Vec<usize>,
    pub on_manifold: bool,
}

/// Dimension of the Cartan distribution restricted to the equation at a
/// generic point: horizontal plus top-order parameters, minus the rank of the
/// tangency conditions `ζ.F = 0`.
pub fn cartan_distribution(s: &PdeSystem, config: &SamplingConfig) -> Result<CartanDistribution> {
    let n = s.n_independent();
    let k = s.order();
    let top = s.jet_variables(k);
    let samples = sample_points(s, k, config)?;
    let truncated: Vec<Vec<DiffPoly>> =
        s.equations().iter().map(|f| (0..n).map(|i| f.truncated_total_derivative(i, k)).collect()).collect();
    let top_index: BTreeMap<&Var, usize> = top.iter().enumerate().map(|(i, v)| (v, n + i)).collect();
    let ranks: Vec<usize> = samples
        .points
        .iter()
        .map(|pt| {
            rank(s.equations().iter().zip(&truncated).map(|(f, tr)| {
                let mut row: SparseRow = tr.iter().enumerate().map(|(i, d)| (i, pt.eval(d))).collect();
                for v in f.variables() {
                    if let Some(&c) = top_index.get(&v) {
                        row.insert(c, pt.eval(&f.partial(&v)));
                    }
                }
                row
            }))
        })
        .collect();
    let constraint_rank = ranks.iter().copied().max().unwrap_or(0);
    let parameters = n + top.len();
    Ok(CartanDistribution {
        dimension: parameters - constraint_rank,
        parameters,
        constraint_rank,
        sample_ranks: ranks,
        on_manifold: samples.on_manifold,
    })
}

pub fn cartan_distribution_dimension(s: &PdeSystem) -> Result<usize> {
    Ok(cartan_distribution(s, &SamplingConfig::default())?.dimension)
}

/// Residuals of the equations on the jet prolongation of a polynomial
/// section `y^j = section[j](x)`; all zero iff the section solves the system.
pub fn verify_polynomial_solution(s: &PdeSystem, section: &[DiffPoly]) -> Result<Vec<DiffPoly>> {
    if section.len() != s.m_dependent() {
        return Err(Error::DimensionMismatch { expected: s.m_dependent(), found: section.len() });
    }
    if let Some(p) = section.iter().find(|p| p.variables().iter().any(|v| matches!(v, Var::Y(..)))) {
        return Err(Error::Parse(format!("section component {p} depends on jet coordinates")));
    }
    let jet_of = |dep: usize, mi: &MultiIndex| {
        mi.directions().into_iter().fold(section[dep].clone(), |p, i| p.partial(&Var::X(i as u8)))
    };
    Ok(s.equations()
        .iter()
        .map(|f| {
            f.substitute(&|v| match v {
                Var::Y(j, mi) => Some(jet_of(*j as usize, mi)),
                _ => None,
            })
        })
        .collect())
}
