//! Differential polynomials: polynomials with rational coefficients in the
//! independent variables, jet coordinates and free symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Largest supported number of independent variables.
pub const MAX_INDEPENDENT: usize = 8;

/// A symmetric multi-index, stored as the number of derivatives taken in
/// each direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex([u8; MAX_INDEPENDENT]);

impl MultiIndex {
    pub fn zero() -> Self {
        MultiIndex([0; MAX_INDEPENDENT])
    }

    pub fn unit(i: usize) -> Self {
        let mut m = Self::zero();
        m.0[i] = 1;
        m
    }

    pub fn from_counts(counts: &[u8]) -> Self {
        let mut m = Self::zero();
        m.0[..counts.len()].copy_from_slice(counts);
        m
    }

    /// From a list of directions, e.g. `[0, 1, 1]` for `txx`.
    pub fn from_directions(dirs: &[usize]) -> Self {
        let mut m = Self::zero();
        for &d in dirs {
            m.0[d] += 1;
        }
        m
    }

    pub fn order(&self) -> usize {
        self.0.iter().map(|&c| c as usize).sum()
    }

    pub fn count(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn counts(&self) -> &[u8; MAX_INDEPENDENT] {
        &self.0
    }

    pub fn raised(&self, i: usize) -> Self {
        let mut m = *self;
        m.0[i] += 1;
        m
    }

    pub fn lowered(&self, i: usize) -> Option<Self> {
        let mut m = *self;
        m.0[i] = m.0[i].checked_sub(1)?;
        Some(m)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..MAX_INDEPENDENT {
            m.0[i] += other.0[i];
        }
        m
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let mut m = *self;
        for i in 0..MAX_INDEPENDENT {
            m.0[i] = m.0[i].checked_sub(other.0[i])?;
        }
        Some(m)
    }

    /// Smallest direction occurring in the index.
    pub fn first_direction(&self) -> Option<usize> {
        self.0.iter().position(|&c| c > 0)
    }

    /// Directions in increasing order, with repetition.
    pub fn directions(&self) -> Vec<usize> {
        (0..MAX_INDEPENDENT).flat_map(|i| std::iter::repeat_n(i, self.0[i] as usize)).collect()
    }

    /// All multi-indices in `n` directions of the given order.
    pub fn all_of_order(n: usize, order: usize) -> Vec<MultiIndex> {
        fn rec(n: usize, i: usize, left: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
            if i + 1 == n {
                cur.0[i] = left as u8;
                out.push(*cur);
                cur.0[i] = 0;
                return;
            }
            for c in (0..=left).rev() {
                cur.0[i] = c as u8;
                rec(n, i + 1, left - c, cur, out);
            }
            cur.0[i] = 0;
        }
        let mut out = Vec::new();
        if n == 0 {
            if order == 0 {
                out.push(Self::zero());
            }
            return out;
        }
        rec(n, 0, order, &mut Self::zero(), &mut out);
        out
    }

    /// `ν! / (λ! μ!)` summed per direction, i.e. `Π C(ν_i, λ_i)`.
    pub fn binomial(&self, lower: &Self) -> BigInt {
        (0..MAX_INDEPENDENT).fold(BigInt::one(), |acc, i| acc * binomial(self.0[i] as u64, lower.0[i] as u64))
    }

    /// Multi-indices `λ <= self` componentwise.
    pub fn divisors(&self) -> Vec<MultiIndex> {
        let mut out = vec![Self::zero()];
        for i in 0..MAX_INDEPENDENT {
            let mut next = Vec::new();
            for m in &out {
                for c in 0..=self.0[i] {
                    let mut x = *m;
                    x.0[i] = c;
                    next.push(x);
                }
            }
            out = next;
        }
        out
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// A variable of a differential polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    /// Independent variable `x^i`.
    X(u8),
    /// Jet coordinate `y^j_μ`.
    Y(u16, MultiIndex),
    /// Free symbol, constant under differentiation.
    Sym(u16),
}

impl Var {
    pub fn jet(dep: usize, mi: MultiIndex) -> Self {
        Var::Y(dep as u16, mi)
    }

    pub fn jet_order(&self) -> Option<usize> {
        match self {
            Var::Y(_, mi) => Some(mi.order()),
            _ => None,
        }
    }
}

/// Sorted product of variable powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.iter().find(|(w, _)| w == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (&self.0[i], &other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(*a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(*b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `∂/∂v` of the monomial as `(exponent, remaining monomial)`.
    fn differentiate(&self, v: &Var) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(w, _)| w == v)?;
        let e = self.0[pos].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 -= 1;
        }
        Some((e, Monomial(rest)))
    }
}

/// Sparse polynomial with rational coefficients; zero terms are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    pub fn var(v: Var) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(Monomial::var(v), BigRational::one());
        p
    }

    pub fn x(i: usize) -> Self {
        Self::var(Var::X(i as u8))
    }

    pub fn jet(dep: usize, mi: MultiIndex) -> Self {
        Self::var(Var::jet(dep, mi))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly { terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> DiffPoly {
        (0..e).fold(DiffPoly::one(), |acc, _| &acc * self)
    }

    /// All variables, sorted.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Highest jet order among the variables, 0 if none.
    pub fn order(&self) -> usize {
        self.variables().iter().filter_map(Var::jet_order).max().unwrap_or(0)
    }

    pub fn partial(&self, v: &Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.differentiate(v) {
                out.add_term(rest, c * BigRational::from_integer(e.into()));
            }
        }
        out
    }

    /// Total derivative `D_i = ∂_{x^i} + Σ y^j_{μ+i} ∂/∂y^j_μ`.
    pub fn total_derivative(&self, i: usize) -> DiffPoly {
        let mut out = self.partial(&Var::X(i as u8));
        for v in self.variables() {
            if let Var::Y(j, mi) = v {
                let d = self.partial(&v);
                out = &out + &(&d * &DiffPoly::var(Var::Y(j, mi.raised(i))));
            }
        }
        out
    }

    /// `D_ν` for a multi-index `ν`.
    pub fn total_derivative_multi(&self, nu: &MultiIndex) -> DiffPoly {
        nu.directions().into_iter().fold(self.clone(), |p, i| p.total_derivative(i))
    }

    /// Truncated total derivative, omitting the jet coordinates of order above `max_order`.
    pub fn truncated_total_derivative(&self, i: usize, max_order: usize) -> DiffPoly {
        let mut out = self.partial(&Var::X(i as u8));
        for v in self.variables() {
            if let Var::Y(j, mi) = v {
                if mi.order() < max_order {
                    out = &out + &(&self.partial(&v) * &DiffPoly::var(Var::Y(j, mi.raised(i))));
                }
            }
        }
        out
    }

    pub fn evaluate(&self, value: &dyn Fn(&Var) -> BigRational) -> BigRational {
        let mut cache: BTreeMap<Var, BigRational> = BTreeMap::new();
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = cache.entry(*v).or_insert_with(|| value(v));
                for _ in 0..*e {
                    t *= &*x;
                }
            }
            total += t;
        }
        total
    }

    /// Replaces variables by polynomials; unlisted variables are kept.
    pub fn substitute(&self, f: &dyn Fn(&Var) -> Option<DiffPoly>) -> DiffPoly {
        let mut cache: BTreeMap<Var, Option<DiffPoly>> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut t = DiffPoly::constant(c.clone());
            for (v, e) in &m.0 {
                let sub = cache.entry(*v).or_insert_with(|| f(v)).clone().unwrap_or_else(|| DiffPoly::var(*v));
                t = &t * &sub.pow(*e);
            }
            out = &out + &t;
        }
        out
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> DiffPoly {
        match self.terms.values().next_back() {
            Some(c) => self.scale(&c.recip()),
            None => DiffPoly::zero(),
        }
    }

    pub fn display<'a>(&'a self, names: &'a dyn VarNames) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

/// Names for printing variables.
pub trait VarNames {
    fn var_name(&self, v: &Var) -> String;
}

/// Generic names `x1`, `y1_{0,1}`, `s1` for polynomials without a coordinate system.
pub struct DefaultNames;

impl VarNames for DefaultNames {
    fn var_name(&self, v: &Var) -> String {
        match v {
            Var::X(i) => format!("x{}", i + 1),
            Var::Y(j, mi) => {
                let dirs: Vec<String> = mi.directions().iter().map(|d| (d + 1).to_string()).collect();
                if dirs.is_empty() {
                    format!("y{}", j + 1)
                } else {
                    format!("y{}_{}", j + 1, dirs.join(""))
                }
            }
            Var::Sym(s) => format!("s{}", s + 1),
        }
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a DiffPoly,
    names: &'a dyn VarNames,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .map(|(v, e)| if *e == 1 { self.names.var_name(v) } else { format!("{}^{}", self.names.var_name(v), e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", a, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(&DefaultNames))
    }
}
