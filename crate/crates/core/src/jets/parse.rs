//! System files and the expression grammar for differential polynomials.
//!
//! Expressions use `+ - * / ^`, parentheses, integer literals, parameters,
//! named definitions and the total derivative `D(x, expr)`. Jet coordinates
//! are written `u_txx`. Denominators must be products of powers of declared
//! exclusions (or of coordinates declared as exclusions); equations are
//! multiplied through by them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Deserialize;

use crate::error::{parse_err, Error, Result};

use super::poly::{DiffPoly, MultiIndex, Var, VarNames};
use super::system::PdeSystem;

/// On-disk form of a system.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeSystemFile {
    pub name: String,
    #[serde(default)]
    pub description: Option<String>,
    pub independent: Vec<String>,
    pub dependent: Vec<String>,
    pub order: usize,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    /// A second coefficient instantiation expected to give the same dimensions.
    #[serde(default)]
    pub alternate_parameters: Option<BTreeMap<String, String>>,
    #[serde(default)]
    pub definitions: Vec<String>,
    pub equations: Vec<String>,
    #[serde(default)]
    pub exclusions: Vec<String>,
}

impl PdeSystemFile {
    pub fn from_yaml(text: &str) -> Result<Self> {
        serde_yaml::from_str(text).map_err(|e| parse_err(e.to_string()))
    }

    pub fn build(&self) -> Result<PdeSystem> {
        self.build_with(&self.parameters)
    }

    pub fn build_alternate(&self) -> Option<Result<PdeSystem>> {
        self.alternate_parameters.as_ref().map(|p| self.build_with(p))
    }

    pub fn build_with(&self, parameters: &BTreeMap<String, String>) -> Result<PdeSystem> {
        for name in &self.independent {
            if name.chars().count() != 1 || !name.chars().all(|c| c.is_ascii_alphabetic()) {
                return Err(parse_err(format!("independent variable `{name}` must be a single letter")));
            }
        }
        for name in self.dependent.iter().chain(parameters.keys()) {
            if !is_identifier(name) || name.contains('_') || name == "D" {
                return Err(parse_err(format!("`{name}` is not a valid name")));
            }
        }
        let mut params = BTreeMap::new();
        for (k, v) in parameters {
            let q = BigRational::from_str(v.trim()).map_err(|_| parse_err(format!("parameter {k}: `{v}` is not a rational")))?;
            params.insert(k.clone(), q);
        }
        let mut scope = Scope {
            independent: &self.independent,
            dependent: &self.dependent,
            params,
            definitions: BTreeMap::new(),
            allowed: BTreeSet::new(),
            symbols: None,
        };
        let mut exclusions = Vec::new();
        for text in &self.exclusions {
            let f = scope.parse(text)?;
            if !f.den.is_empty() {
                return Err(parse_err(format!("exclusion `{text}` has a denominator")));
            }
            scope.allowed.insert(f.num.monic());
            exclusions.push(f.num);
        }
        for text in &self.definitions {
            let (name, body) = text.split_once('=').ok_or_else(|| parse_err(format!("definition `{text}` needs `name = expr`")))?;
            let name = name.trim();
            if !is_identifier(name) || scope.resolves(name) {
                return Err(parse_err(format!("definition name `{name}` is invalid or already used")));
            }
            let value = scope.parse(body)?;
            scope.definitions.insert(name.to_string(), value);
        }
        let mut equations = Vec::new();
        for text in &self.equations {
            let f = match text.split_once('=') {
                Some((l, r)) => scope.parse(l)?.sub(&scope.parse(r)?),
                None => scope.parse(text)?,
            };
            if f.num.is_zero() {
                return Err(parse_err(format!("equation `{text}` is identically zero")));
            }
            equations.push(f.num);
        }
        PdeSystem::new(self.name.clone(), self.independent.clone(), self.dependent.clone(), self.order, equations, exclusions)
    }
}

pub fn parse_system(text: &str) -> Result<PdeSystem> {
    PdeSystemFile::from_yaml(text)?.build()
}

pub fn load_system_file(path: &Path) -> Result<PdeSystemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    PdeSystemFile::from_yaml(&text)
}

/// A polynomial section `y^j = f_j(x)`, possibly with free symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub components: Vec<DiffPoly>,
    pub symbols: Vec<String>,
}

impl Section {
    /// The system with the section's symbol names attached, for printing.
    pub fn names(&self, s: &PdeSystem) -> PdeSystem {
        s.clone().with_symbols(self.symbols.clone())
    }
}

/// Parses one polynomial per dependent variable; unknown names become
/// free symbols.
pub fn parse_section(s: &PdeSystem, components: &[&str]) -> Result<Section> {
    if components.len() != s.m_dependent() {
        return Err(Error::DimensionMismatch { expected: s.m_dependent(), found: components.len() });
    }
    let mut scope = Scope {
        independent: s.independent(),
        dependent: &[],
        params: BTreeMap::new(),
        definitions: BTreeMap::new(),
        allowed: BTreeSet::new(),
        symbols: Some(Vec::new()),
    };
    let mut out = Vec::new();
    for text in components {
        let f = scope.parse(text)?;
        if !f.den.is_empty() {
            return Err(parse_err(format!("section component `{text}` is not a polynomial")));
        }
        out.push(f.num);
    }
    Ok(Section { components: out, symbols: scope.symbols.unwrap_or_default() })
}

fn is_identifier(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_ascii_alphabetic()) && c.all(|ch| ch.is_ascii_alphanumeric() || ch == '_')
}

/// `num / Π f^e` with each `f` a monic allowed factor.
#[derive(Clone, Debug)]
struct Frac {
    num: DiffPoly,
    den: BTreeMap<DiffPoly, u32>,
}

fn product(factors: &BTreeMap<DiffPoly, u32>) -> DiffPoly {
    factors.iter().fold(DiffPoly::one(), |acc, (f, e)| &acc * &f.pow(*e))
}

impl Frac {
    fn poly(p: DiffPoly) -> Self {
        Frac { num: p, den: BTreeMap::new() }
    }

    /// Brings both to the common denominator; returns the two numerators.
    fn common(&self, other: &Frac) -> (DiffPoly, DiffPoly, BTreeMap<DiffPoly, u32>) {
        let mut l = self.den.clone();
        for (f, &e) in &other.den {
            let x = l.entry(f.clone()).or_insert(0);
            *x = (*x).max(e);
        }
        let lift = |fr: &Frac| {
            let missing: BTreeMap<DiffPoly, u32> =
                l.iter().map(|(f, &e)| (f.clone(), e - fr.den.get(f).copied().unwrap_or(0))).collect();
            &fr.num * &product(&missing)
        };
        (lift(self), lift(other), l)
    }

    fn add(&self, other: &Frac) -> Frac {
        let (a, b, den) = self.common(other);
        Frac { num: &a + &b, den }
    }

    fn sub(&self, other: &Frac) -> Frac {
        let (a, b, den) = self.common(other);
        Frac { num: &a - &b, den }
    }

    fn mul(&self, other: &Frac) -> Frac {
        let mut den = self.den.clone();
        for (f, &e) in &other.den {
            *den.entry(f.clone()).or_insert(0) += e;
        }
        Frac { num: &self.num * &other.num, den }
    }

    fn pow(&self, e: u32) -> Frac {
        Frac { num: self.num.pow(e), den: self.den.iter().map(|(f, &x)| (f.clone(), x * e)).collect() }
    }

    /// Total derivative by the quotient rule, over the denominator `Π f^(e+1)`.
    fn total_derivative(&self, i: usize) -> Frac {
        let fs: Vec<(&DiffPoly, u32)> = self.den.iter().map(|(f, &e)| (f, e)).collect();
        let all = fs.iter().fold(DiffPoly::one(), |acc, (f, _)| &acc * f);
        let mut num = &self.num.total_derivative(i) * &all;
        for (k, (f, e)) in fs.iter().enumerate() {
            let others = fs.iter().enumerate().filter(|(j, _)| *j != k).fold(DiffPoly::one(), |acc, (_, (g, _))| &acc * g);
            let term = &(&self.num * &f.total_derivative(i)) * &others;
            num = &num - &term.scale(&BigRational::from_integer((*e).into()));
        }
        Frac { num, den: self.den.iter().map(|(f, &e)| (f.clone(), e + 1)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[start..i].iter().collect();
            out.push(Tok::Num(text.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(parse_err(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Scope<'a> {
    independent: &'a [String],
    dependent: &'a [String],
    params: BTreeMap<String, BigRational>,
    definitions: BTreeMap<String, Frac>,
    allowed: BTreeSet<DiffPoly>,
    symbols: Option<Vec<String>>,
}

impl Scope<'_> {
    fn resolves(&self, name: &str) -> bool {
        name == "D"
            || self.params.contains_key(name)
            || self.definitions.contains_key(name)
            || self.independent.iter().any(|x| x == name)
            || self.dependent.iter().any(|x| x == name)
    }

    fn parse(&mut self, text: &str) -> Result<Frac> {
        let toks = tokenize(text)?;
        let mut p = Parser { toks: &toks, pos: 0, text };
        let f = p.expr(self)?;
        if p.pos != toks.len() {
            return Err(parse_err(format!("trailing input in `{text}`")));
        }
        Ok(f)
    }

    fn direction(&self, name: &str) -> Option<usize> {
        self.independent.iter().position(|x| x == name)
    }

    fn identifier(&mut self, name: &str) -> Result<Frac> {
        if let Some(q) = self.params.get(name) {
            return Ok(Frac::poly(DiffPoly::constant(q.clone())));
        }
        if let Some(f) = self.definitions.get(name) {
            return Ok(f.clone());
        }
        if let Some(i) = self.direction(name) {
            return Ok(Frac::poly(DiffPoly::x(i)));
        }
        if let Some(j) = self.dependent.iter().position(|d| d == name) {
            return Ok(Frac::poly(DiffPoly::jet(j, MultiIndex::zero())));
        }
        if let Some((dep, letters)) = name.split_once('_') {
            if let Some(j) = self.dependent.iter().position(|d| d == dep) {
                let dirs: Option<Vec<usize>> = letters.chars().map(|c| self.direction(&c.to_string())).collect();
                if let Some(dirs) = dirs.filter(|d| !d.is_empty()) {
                    return Ok(Frac::poly(DiffPoly::jet(j, MultiIndex::from_directions(&dirs))));
                }
            }
        }
        if let Some(symbols) = &mut self.symbols {
            let k = symbols.iter().position(|s| s == name).unwrap_or_else(|| {
                symbols.push(name.to_string());
                symbols.len() - 1
            });
            return Ok(Frac::poly(DiffPoly::var(Var::Sym(k as u16))));
        }
        Err(parse_err(format!("unknown name `{name}`")))
    }

    /// Splits a nonzero polynomial into a constant times allowed factors.
    fn factor(&self, p: &DiffPoly) -> Result<(BigRational, BTreeMap<DiffPoly, u32>)> {
        if p.is_zero() {
            return Err(parse_err("division by zero"));
        }
        if let Some(c) = p.as_constant() {
            return Ok((c, BTreeMap::new()));
        }
        let lead = |q: &DiffPoly| p.terms().last().map(|(_, c)| c.clone()).unwrap() / q.terms().last().unwrap().1;
        let monic = p.monic();
        for f in &self.allowed {
            for e in 1..=p.total_degree().max(1) {
                let fe = f.pow(e);
                if fe.monic() == monic {
                    return Ok((lead(&fe), BTreeMap::from([(f.clone(), e)])));
                }
            }
        }
        if p.num_terms() == 1 {
            let (m, c) = p.terms().next().unwrap();
            let mut den = BTreeMap::new();
            for (v, e) in m.factors() {
                let f = DiffPoly::var(*v);
                if !self.allowed.contains(&f) {
                    return Err(parse_err(format!("denominator factor `{}` is not a declared exclusion", self.show(&f))));
                }
                den.insert(f, *e);
            }
            return Ok((c.clone(), den));
        }
        Err(parse_err(format!("denominator `{}` is not a power of a declared exclusion", self.show(p))))
    }

    fn divide(&self, a: &Frac, b: &Frac) -> Result<Frac> {
        let (c, fs) = self.factor(&b.num)?;
        let inv = Frac { num: product(&b.den).scale(&c.recip()), den: fs };
        Ok(a.mul(&inv))
    }

    fn show(&self, p: &DiffPoly) -> String {
        struct Names<'b>(&'b Scope<'b>);
        impl VarNames for Names<'_> {
            fn var_name(&self, v: &Var) -> String {
                match v {
                    Var::X(i) => self.0.independent[*i as usize].clone(),
                    Var::Y(j, mi) => {
                        let letters: String = mi.directions().iter().map(|&d| self.0.independent[d].as_str()).collect();
                        let dep = &self.0.dependent[*j as usize];
                        if letters.is_empty() { dep.clone() } else { format!("{dep}_{letters}") }
                    }
                    Var::Sym(s) => self.0.symbols.as_ref().and_then(|v| v.get(*s as usize)).cloned().unwrap_or_default(),
                }
            }
        }
        p.display(&Names(self)).to_string()
    }
}

struct Parser<'t> {
    toks: &'t [Tok],
    pos: usize,
    text: &'t str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        parse_err(format!("{msg} at token {} of `{}`", self.pos + 1, self.text))
    }

    fn expr(&mut self, sc: &mut Scope) -> Result<Frac> {
        let mut acc = self.term(sc)?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term(sc)?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term(sc)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, sc: &mut Scope) -> Result<Frac> {
        let mut acc = self.unary(sc)?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary(sc)?);
            } else if self.eat('/') {
                let d = self.unary(sc)?;
                acc = sc.divide(&acc, &d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self, sc: &mut Scope) -> Result<Frac> {
        if self.eat('-') {
            let f = self.unary(sc)?;
            return Ok(Frac { num: -&f.num, den: f.den });
        }
        if self.eat('+') {
            return self.unary(sc);
        }
        let base = self.atom(sc)?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let e = match self.peek() {
            Some(Tok::Num(n)) => n.to_u32().ok_or_else(|| self.error("exponent too large"))?,
            _ => return Err(self.error("expected an integer exponent")),
        };
        self.pos += 1;
        if neg {
            sc.divide(&Frac::poly(DiffPoly::one()), &base.pow(e))
        } else {
            Ok(base.pow(e))
        }
    }

    fn atom(&mut self, sc: &mut Scope) -> Result<Frac> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Frac::poly(DiffPoly::constant(BigRational::from_integer(n))))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let f = self.expr(sc)?;
                self.expect(')')?;
                Ok(f)
            }
            Some(Tok::Ident(name)) if name == "D" && self.toks.get(self.pos + 1) == Some(&Tok::Op('(')) => {
                self.pos += 2;
                let dirs = match self.peek() {
                    Some(Tok::Ident(d)) => d
                        .chars()
                        .map(|c| sc.direction(&c.to_string()))
                        .collect::<Option<Vec<usize>>>()
                        .ok_or_else(|| self.error("D expects independent variable letters"))?,
                    _ => return Err(self.error("D expects independent variable letters")),
                };
                self.pos += 1;
                self.expect(',')?;
                let mut f = self.expr(sc)?;
                self.expect(')')?;
                for i in dirs {
                    f = f.total_derivative(i);
                }
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                sc.identifier(&name)
            }
            _ => Err(self.error("expected a number, name or `(`")),
        }
    }
}

/// Renders a rational as `a` or `a/b`.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.to_integer().to_string()
    } else {
        format!("{}{}/{}", if q.is_negative() { "-" } else { "" }, q.numer().abs(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn file(eqs: &[&str], excl: &[&str]) -> PdeSystemFile {
        PdeSystemFile {
            name: "t".into(),
            description: None,
            independent: vec!["x".into(), "y".into()],
            dependent: vec!["u".into()],
            order: 2,
            parameters: BTreeMap::from([("k".to_string(), "3/2".to_string())]),
            alternate_parameters: None,
            definitions: vec!["w = u_x + k".into()],
            equations: eqs.iter().map(|s| s.to_string()).collect(),
            exclusions: excl.iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn parses_jets_parameters_and_definitions() {
        let s = file(&["w*u_yx - 2*u"], &[]).build().unwrap();
        assert!(!s.equations()[0].display(&s).to_string().is_empty());
        let e = &s.equations()[0];
        let expect = &(&(&DiffPoly::jet(0, MultiIndex::from_directions(&[0])) + &DiffPoly::constant(BigRational::new(3.into(), 2.into())))
            * &DiffPoly::jet(0, MultiIndex::from_directions(&[0, 1])))
            - &DiffPoly::jet(0, MultiIndex::zero()).scale(&BigRational::from_integer(2.into()));
        assert_eq!(e, &expect);
    }

    #[test]
    fn clears_declared_denominators() {
        let s = file(&["u_x - u^2/u_y^2"], &["u_y"]).build().unwrap();
        let uy = DiffPoly::jet(0, MultiIndex::from_directions(&[1]));
        let expect = &(&DiffPoly::jet(0, MultiIndex::from_directions(&[0])) * &uy.pow(2)) - &DiffPoly::jet(0, MultiIndex::zero()).pow(2);
        assert_eq!(s.equations()[0], expect);
    }

    #[test]
    fn rejects_undeclared_denominator() {
        assert!(file(&["u_x - 1/u_y"], &[]).build().is_err());
        assert!(file(&["u_x - 1/(u_y + 1)"], &["u_y"]).build().is_err());
        assert!(file(&["u_x - 1/(u_y + 1)^2"], &["u_y + 1"]).build().is_ok());
    }

    #[test]
    fn total_derivative_function() {
        let s = file(&["D(x, u*u_y)"], &[]).build().unwrap();
        let j = |d: &[usize]| DiffPoly::jet(0, MultiIndex::from_directions(d));
        assert_eq!(s.equations()[0], &(&j(&[0]) * &j(&[1])) + &(&j(&[]) * &j(&[0, 1])));
    }

    #[test]
    fn equals_sign_and_unknown_names() {
        let s = file(&["u_xx = u_yy"], &[]).build().unwrap();
        assert_eq!(s.equations().len(), 1);
        assert!(file(&["u_xz"], &[]).build().is_err());
        assert!(file(&["v_x"], &[]).build().is_err());
    }

    #[test]
    fn section_symbols() {
        let s = file(&["u_xx"], &[]).build().unwrap();
        let sec = parse_section(&s, &["alpha*x + beta"]).unwrap();
        assert_eq!(sec.symbols, vec!["alpha", "beta"]);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_string(&BigRational::new((-3).into(), 6.into())), "-1/2");
        assert!(BigRational::one().is_one());
    }
}
