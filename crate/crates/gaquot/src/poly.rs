//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] is a map from dense exponent vectors to nonzero `BigRational`
//! coefficients, tied to a fixed [`VarTable`]. Tables stay small (a dozen
//! variables at most in practice), so dense exponent vectors keep monomial
//! comparisons cheap and the canonical form trivial: two polynomials are
//! equal iff their term maps are equal.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::order::MonomialOrder;

/// Exponent vector; one slot per variable of the owning table.
pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable table mismatch: `{0}` vs `{1}`")]
    TableMismatch(String, String),
    #[error("image table mismatch in substitution for `{0}`")]
    ImageTableMismatch(String),
}

/// An ordered list of named variables, some flagged as formal parameters.
///
/// The order is fixed at construction; every [`Poly`] refers to exactly one
/// table through an `Arc`. Formal parameters (deformation constants, root
/// of unity symbols) behave like ordinary variables in the arithmetic layer
/// and are only treated specially by derivations and smoothness checks.
#[derive(Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
    params: Vec<bool>,
    index: BTreeMap<String, usize>,
}

impl VarTable {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<VarTable>, PolyError> {
        Self::with_flags(&names.iter().map(|n| (n.as_ref(), false)).collect::<Vec<_>>())
    }

    pub fn with_flags(names: &[(&str, bool)]) -> Result<Arc<VarTable>, PolyError> {
        let mut index = BTreeMap::new();
        for (i, (n, _)) in names.iter().enumerate() {
            if index.insert(n.to_string(), i).is_some() {
                return Err(PolyError::DuplicateVariable(n.to_string()));
            }
        }
        Ok(Arc::new(VarTable {
            names: names.iter().map(|(n, _)| n.to_string()).collect(),
            params: names.iter().map(|&(_, p)| p).collect(),
            index,
        }))
    }

    /// New table with extra variables appended at the end.
    pub fn extend(self: &Arc<Self>, extra: &[(&str, bool)]) -> Result<Arc<VarTable>, PolyError> {
        let mut all: Vec<(&str, bool)> = self
            .names
            .iter()
            .zip(&self.params)
            .map(|(n, &p)| (n.as_str(), p))
            .collect();
        all.extend_from_slice(extra);
        Self::with_flags(&all)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_param(&self, i: usize) -> bool {
        self.params[i]
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// A name not yet present in the table, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        for k in 1.. {
            let cand = format!("{base}{k}");
            if !self.contains(&cand) {
                return cand;
            }
        }
        unreachable!()
    }
}

fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Sparse exact polynomial over `Q` in the variables of one table.
///
/// Invariant: no zero coefficients are stored and every exponent vector has
/// length equal to the table size, so `==` on the term map is canonical-form
/// equality.
#[derive(Debug, Clone)]
pub struct Poly {
    vars: Arc<VarTable>,
    terms: BTreeMap<Exponents, BigRational>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(vars: &Arc<VarTable>) -> Poly {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VarTable>) -> Poly {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Arc<VarTable>, c: BigRational) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; vars.len()], c);
        }
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn int(vars: &Arc<VarTable>, n: i64) -> Poly {
        Self::constant(vars, BigRational::from_integer(n.into()))
    }

    pub fn var(vars: &Arc<VarTable>, name: &str) -> Result<Poly, PolyError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Ok(Poly {
            vars: vars.clone(),
            terms,
        })
    }

    pub fn monomial(vars: &Arc<VarTable>, exps: Exponents, c: BigRational) -> Poly {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` if the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    /// Maximum total degree over all terms; zero polynomial has degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Total degree ignoring formal parameters.
    pub fn geometric_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| {
                e.iter()
                    .enumerate()
                    .filter(|(i, _)| !self.vars.is_param(*i))
                    .map(|(_, &x)| x)
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }

    fn assert_same_table(&self, other: &Poly) {
        assert!(
            same_table(&self.vars, &other.vars),
            "operands built over different variable tables"
        );
    }

    pub(crate) fn insert_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_table(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.assert_same_table(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_table(other);
        let mut out = Poly::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Formal partial derivative.
    pub fn partial(&self, name: &str) -> Result<Poly, PolyError> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.insert_term(f, c * BigRational::from_integer(e[i].into()));
        }
        Ok(out)
    }

    /// Simultaneous substitution. Every key must be a variable of `self`;
    /// all images must share one table, and unmapped variables of `self`
    /// must exist (by name) in that table.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> Result<Poly, PolyError> {
        for k in map.keys() {
            if self.vars.index_of(k).is_none() {
                return Err(PolyError::UnknownVariable(k.clone()));
            }
        }
        let target: Arc<VarTable> = match map.values().next() {
            Some(p) => p.vars.clone(),
            None => self.vars.clone(),
        };
        for (k, p) in map {
            if !same_table(&p.vars, &target) {
                return Err(PolyError::ImageTableMismatch(k.clone()));
            }
        }
        // image of each source variable, either explicit or by-name identity
        let mut images: Vec<Poly> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let name = self.vars.name(i);
            match map.get(name) {
                Some(p) => images.push(p.clone()),
                None => images.push(Poly::var(&target, name)?),
            }
        }
        let mut out = Poly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&images[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Move the polynomial into a table containing every variable that
    /// actually occurs in it, matching by name.
    pub fn lift(&self, target: &Arc<VarTable>) -> Result<Poly, PolyError> {
        self.rename_into(&BTreeMap::new(), target)
    }

    /// Like [`lift`](Self::lift) but renaming occurring variables first.
    pub fn rename_into(
        &self,
        rename: &BTreeMap<String, String>,
        target: &Arc<VarTable>,
    ) -> Result<Poly, PolyError> {
        if rename.is_empty() && same_table(&self.vars, target) {
            return Ok(self.clone());
        }
        let mut slot: Vec<Option<usize>> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let old = self.vars.name(i);
            let new = rename.get(old).map(|s| s.as_str()).unwrap_or(old);
            slot.push(target.index_of(new));
        }
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut f = vec![0; target.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match slot[i] {
                    Some(s) => f[s] += k,
                    None => {
                        return Err(PolyError::UnknownVariable(
                            self.vars.name(i).to_string(),
                        ))
                    }
                }
            }
            out.insert_term(f, c.clone());
        }
        Ok(out)
    }

    /// True if the variable occurs in some term.
    pub fn involves(&self, name: &str) -> bool {
        match self.vars.index_of(name) {
            None => false,
            Some(i) => self.terms.keys().any(|e| e[i] > 0),
        }
    }

    /// Leading term under `ord`, if nonzero.
    pub fn leading_term(&self, ord: &MonomialOrder) -> Option<(&Exponents, &BigRational)> {
        self.terms
            .iter()
            .max_by(|(a, _), (b, _)| ord.cmp(a, b))
    }

    /// Exact division: `Some(q)` with `self = q * d`, or `None`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        self.assert_same_table(d);
        if d.is_zero() {
            return None;
        }
        let ord = MonomialOrder::grevlex(self.vars.len());
        let (dlt, dlc) = d.leading_term(&ord).unwrap();
        let dlt = dlt.clone();
        let dlc = dlc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while !rem.is_zero() {
            let (rlt, rlc) = rem.leading_term(&ord).unwrap();
            if rlt.iter().zip(&dlt).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exponents = rlt.iter().zip(&dlt).map(|(a, b)| a - b).collect();
            let c = rlc / &dlc;
            let t = Poly::monomial(&self.vars, e, c);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Terms sorted descending under `ord`.
    pub fn sorted_terms(&self, ord: &MonomialOrder) -> Vec<(Exponents, BigRational)> {
        let mut v: Vec<(Exponents, BigRational)> = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        v.sort_by(|(a, _), (b, _)| ord.cmp(b, a));
        v
    }
}

/// `arith` entry point with table checking, mirroring the scenario surface.
pub fn arith(op: &str, a: &Poly, b: Option<&Poly>, exp: Option<u32>) -> Result<Poly, PolyError> {
    let tbl = |x: &Poly| -> Result<(), PolyError> {
        if !same_table(a.vars(), x.vars()) {
            return Err(PolyError::TableMismatch(
                a.vars().names().join(","),
                x.vars().names().join(","),
            ));
        }
        Ok(())
    };
    match (op, b, exp) {
        ("add", Some(b), _) => {
            tbl(b)?;
            Ok(a.add(b))
        }
        ("sub", Some(b), _) => {
            tbl(b)?;
            Ok(a.sub(b))
        }
        ("mul", Some(b), _) => {
            tbl(b)?;
            Ok(a.mul(b))
        }
        ("neg", _, _) => Ok(a.neg()),
        ("pow", _, Some(k)) => Ok(a.pow(k)),
        _ => Err(PolyError::UnknownVariable(format!("bad arith op `{op}`"))),
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Canonical form in the expression grammar; parsing it back yields
    /// the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ord = MonomialOrder::grevlex(self.vars.len());
        let mut first = true;
        for (e, c) in self.sorted_terms(&ord) {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(fmt_coeff(&abs));
            }
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(self.vars.name(i).to_string());
                } else if k > 1 {
                    factors.push(format!("{}^{}", self.vars.name(i), k));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_poly;

    fn table() -> Arc<VarTable> {
        VarTable::new(&["x", "y", "t"]).unwrap()
    }

    #[test]
    fn add_inverse_cancels() {
        let v = table();
        let x = Poly::var(&v, "x").unwrap();
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn binomial_square() {
        let v = table();
        let p = parse_poly("x + t*y", &v).unwrap();
        let expect = parse_poly("x^2 + 2*x*t*y + t^2*y^2", &v).unwrap();
        assert_eq!(p.pow(2), expect);
    }

    #[test]
    fn expansion_identity_behind_phi() {
        // (x+ty)^2 - y*(2xt + t^2 y) = x^2
        let v = table();
        let p = parse_poly("(x + t*y)^2 - y*(2*x*t + t^2*y)", &v).unwrap();
        assert_eq!(p, parse_poly("x^2", &v).unwrap());
    }

    #[test]
    fn partial_power_rule() {
        let v = table();
        let p = parse_poly("y^2 - t^3", &v).unwrap();
        assert_eq!(p.partial("y").unwrap(), parse_poly("2*y", &v).unwrap());
        assert_eq!(p.partial("t").unwrap(), parse_poly("-3*t^2", &v).unwrap());
        let c = parse_poly("5/7", &v).unwrap();
        assert!(c.partial("x").unwrap().is_zero());
    }

    #[test]
    fn substitution_generator_image() {
        let v = table();
        let x = Poly::var(&v, "x").unwrap();
        let mut map = BTreeMap::new();
        map.insert("x".to_string(), parse_poly("x + t*y", &v).unwrap());
        assert_eq!(
            x.substitute(&map).unwrap(),
            parse_poly("x + t*y", &v).unwrap()
        );
    }

    #[test]
    fn substitution_kills_term() {
        let v = VarTable::new(&["y", "u"]).unwrap();
        let p = parse_poly("y*u + 1", &v).unwrap();
        let mut map = BTreeMap::new();
        map.insert("y".to_string(), Poly::zero(&v));
        assert_eq!(p.substitute(&map).unwrap(), Poly::one(&v));
    }

    #[test]
    fn exact_division() {
        let v = table();
        let a = parse_poly("x^2 - y^2", &v).unwrap();
        let b = parse_poly("x - y", &v).unwrap();
        assert_eq!(a.div_exact(&b).unwrap(), parse_poly("x + y", &v).unwrap());
        assert!(parse_poly("x^2 + 1", &v).unwrap().div_exact(&b).is_none());
    }

    #[test]
    fn unknown_variable_errors() {
        let v = table();
        assert!(Poly::var(&v, "zz").is_err());
        let p = parse_poly("x", &v).unwrap();
        assert!(p.partial("zz").is_err());
    }

    #[test]
    fn fresh_names_avoid_collisions() {
        let v = VarTable::new(&["w", "w1"]).unwrap();
        assert_eq!(v.fresh_name("w"), "w2");
        assert_eq!(v.fresh_name("q"), "q");
    }
}
