//! The filtered ring of linear differential operators with polynomial
//! coefficients in the independent variables.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};

use super::poly::{DiffPoly, MultiIndex, Var, VarNames};

/// `Σ a^μ d_μ` with each `a^μ` a polynomial in `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffOperator {
    terms: BTreeMap<MultiIndex, DiffPoly>,
}

fn x_partial(p: &DiffPoly, mi: &MultiIndex) -> DiffPoly {
    mi.directions().into_iter().fold(p.clone(), |q, i| q.partial(&Var::X(i as u8)))
}

impl DiffOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(DiffPoly::one(), MultiIndex::zero())
    }

    /// `d_i`.
    pub fn derivation(i: usize) -> Self {
        Self::term(DiffPoly::one(), MultiIndex::unit(i))
    }

    /// Multiplication by the function `a`.
    pub fn multiplication(a: DiffPoly) -> Result<Self> {
        Self::new([(MultiIndex::zero(), a)])
    }

    /// `Σ a^μ d_μ`; coefficients must be polynomials in `x` alone.
    pub fn new(terms: impl IntoIterator<Item = (MultiIndex, DiffPoly)>) -> Result<Self> {
        let mut out = Self::zero();
        for (mi, a) in terms {
            if let Some(v) = a.variables().into_iter().find(|v| !matches!(v, Var::X(_))) {
                return Err(Error::Parse(format!("operator coefficient depends on {v:?}")));
            }
            out.add_term(mi, a);
        }
        Ok(out)
    }

    fn term(a: DiffPoly, mi: MultiIndex) -> Self {
        let mut out = Self::zero();
        out.add_term(mi, a);
        out
    }

    fn add_term(&mut self, mi: MultiIndex, a: DiffPoly) {
        let sum = match self.terms.remove(&mi) {
            Some(old) => &old + &a,
            None => a,
        };
        if !sum.is_zero() {
            self.terms.insert(mi, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `max |μ|` over nonzero coefficients; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    pub fn coefficient(&self, mi: &MultiIndex) -> DiffPoly {
        self.terms.get(mi).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &DiffPoly)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mi, a) in &other.terms {
            out.add_term(*mi, a.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (mi, a) in &other.terms {
            out.add_term(*mi, -a);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero();
        for (mi, a) in &self.terms {
            out.add_term(*mi, a.scale(c));
        }
        out
    }

    /// Composition `self ∘ other`, by `d_ν b = Σ_{λ≤ν} C(ν,λ) (∂_λ b) d_{ν-λ}`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (nu, a) in &self.terms {
            for (mu, b) in &other.terms {
                for lambda in nu.divisors() {
                    let db = x_partial(b, &lambda);
                    if db.is_zero() {
                        continue;
                    }
                    let c = BigRational::from_integer(nu.binomial(&lambda));
                    let rest = nu.checked_sub(&lambda).unwrap().add(mu);
                    out.add_term(rest, (a * &db).scale(&c));
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    /// Applies the operator to a function of `x`.
    pub fn apply(&self, f: &DiffPoly) -> DiffPoly {
        self.terms.iter().fold(DiffPoly::zero(), |acc, (mi, a)| &acc + &(a * &x_partial(f, mi)))
    }

    pub fn display<'a>(&'a self, names: &'a dyn VarNames) -> OperatorDisplay<'a> {
        OperatorDisplay { op: self, names }
    }
}

pub fn diffop_multiply(p: &DiffOperator, q: &DiffOperator) -> DiffOperator {
    p.compose(q)
}

pub struct OperatorDisplay<'a> {
    op: &'a DiffOperator,
    names: &'a dyn VarNames,
}

impl fmt::Display for OperatorDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.op.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .op
            .terms
            .iter()
            .rev()
            .map(|(mi, a)| {
                let coef = a.display(self.names).to_string();
                let coef = if a.num_terms() > 1 { format!("({coef})") } else { coef };
                if mi.order() == 0 {
                    return coef;
                }
                let d: String = mi.directions().iter().map(|&i| self.names.var_name(&Var::X(i as u8))).collect();
                if coef == "1" { format!("d_{d}") } else { format!("{coef}*d_{d}") }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::poly::DefaultNames;

    #[test]
    fn leibniz_base_case() {
        let a = &DiffPoly::x(0) * &DiffPoly::x(1);
        let lhs = DiffOperator::derivation(0).compose(&DiffOperator::multiplication(a.clone()).unwrap());
        let expect = DiffOperator::new([(MultiIndex::unit(0), a), (MultiIndex::zero(), DiffPoly::x(1))]).unwrap();
        assert_eq!(lhs, expect);
    }

    #[test]
    fn derivations_commute() {
        assert!(DiffOperator::derivation(0).commutator(&DiffOperator::derivation(1)).is_zero());
    }

    #[test]
    fn euler_operator_squared() {
        let e = DiffOperator::new([(MultiIndex::unit(0), DiffPoly::x(0))]).unwrap();
        let sq = e.compose(&e);
        let expect = DiffOperator::new([
            (MultiIndex::from_counts(&[2]), DiffPoly::x(0).pow(2)),
            (MultiIndex::unit(0), DiffPoly::x(0)),
        ])
        .unwrap();
        assert_eq!(sq, expect);
        assert_eq!(sq.display(&DefaultNames).to_string(), "x1^2*d_x1x1 + x1*d_x1");
    }

    #[test]
    fn rejects_jet_coefficients() {
        assert!(DiffOperator::multiplication(DiffPoly::jet(0, MultiIndex::zero())).is_err());
    }
}
