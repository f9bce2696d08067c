//! Differential polynomials on jet spaces.
//!
//! A [`DiffPoly`] is a polynomial in the independent variables `x^i`, the jet
//! coordinates `y^j_μ` and free symbols. Systems of such polynomials are
//! studied through their symbol at generic points: the Cartan characters,
//! the involutivity test `dim g_{+1} = Σ dim g^{(i)}` and the dimension
//! identity for formal integrability.
//!
//! ```
//! use crystal_pde::jets::{corpus_system, formal_integrability_check};
//!
//! let heat = corpus_system("heat").unwrap();
//! let verdict = formal_integrability_check(&heat).unwrap();
//! assert!(verdict.passed);
//! assert_eq!((verdict.equation_dim, verdict.prolonged_equation_dim), (7, 9));
//! ```

mod corpus;
mod diffop;
pub mod linalg;
mod parse;
mod poly;
mod ricci;
mod sample;
mod symbol;
mod system;

pub use corpus::{corpus_file, corpus_system, mhd_boundary_system, mhd_system, CORPUS, MHD};
pub use diffop::{diffop_multiply, DiffOperator};
pub use parse::{load_system_file, parse_section, parse_system, rational_string, PdeSystemFile, Section};
pub use poly::{binomial, DefaultNames, DiffPoly, Monomial, MultiIndex, Var, VarNames, MAX_INDEPENDENT};
pub use ricci::{ricci_flow_system, symbol_fiber_constancy, FiberConstancy};
pub use sample::{sample_points, Point, Samples, SamplingConfig, DEFAULT_SAMPLES, DEFAULT_SEED, SAMPLE_BOUND};
pub use symbol::{
    cartan_distribution, cartan_distribution_dimension, cartan_involutivity_test, formal_integrability_check,
    jet_dimension, prolongation_dimension_formula, symbol_report, symbol_report_with, verify_polynomial_solution,
    CartanDistribution, IntegrabilityVerdict, InvolutivityLedger, SymbolReport, INTEGRABILITY_ASSUMPTIONS,
    INTEGRABILITY_CAVEAT,
};
pub use system::{prolong_system, PdeSystem};
