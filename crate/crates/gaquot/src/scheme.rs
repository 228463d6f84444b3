//! Affine schemes as presented quotient rings and morphisms as certified
//! ring comorphisms.
//!
//! Inverted (Laurent) variables are realized by a partner variable `x_inv`
//! and the relation `x*x_inv - 1` inside the ideal, so the Gröbner engine
//! never needs special cases. A primitive m-th root of unity is a flagged
//! constant `eps` carrying its cyclotomic relation.

use num_rational::BigRational;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::expr::{parse_poly, ExprError};
use crate::ideal::{Budget, EngineError, Ideal};
use crate::poly::{Poly, PolyError, VarTable};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("inverted variable `{0}` is not an ambient variable")]
    BadInverted(String),
    #[error("missing image for target variable `{0}`")]
    MissingImage(String),
    #[error("image of inverted variable `{0}` is not a unit in the source")]
    NotAUnit(String),
    #[error("comorphism not well defined on `{generator}`: normal form `{nf}`")]
    NotWellDefined { generator: String, nf: String },
    #[error("composition mismatch: inner target differs from outer source")]
    ComposeMismatch,
    #[error("declared codimension {expected} differs from generator count {actual}")]
    CodimMismatch { expected: usize, actual: usize },
}

/// The m-th cyclotomic polynomial in the named variable.
pub fn cyclotomic(vars: &Arc<VarTable>, var: &str, m: u32) -> Result<Poly, PolyError> {
    assert!(m >= 1);
    let x = Poly::var(vars, var)?;
    let mut acc = x.pow(m).sub(&Poly::one(vars));
    for d in 1..m {
        if m.is_multiple_of(d) {
            let phi_d = cyclotomic(vars, var, d)?;
            acc = acc
                .div_exact(&phi_d)
                .expect("cyclotomic polynomials divide x^m - 1");
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootsOfUnity {
    pub var: String,
    pub order: u32,
}

/// Presented quotient ring `k[vars]/ideal`, with bookkeeping for inverted
/// variables and an optional adjoined root of unity.
#[derive(Debug, Clone)]
pub struct Scheme {
    vars: Arc<VarTable>,
    ideal: Ideal,
    inverted: Vec<String>,
    partner: BTreeMap<String, String>,
    roots: Option<RootsOfUnity>,
}

impl PartialEq for Scheme {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.ideal.gens() == other.ideal.gens()
            && self.inverted == other.inverted
            && self.roots == other.roots
    }
}

impl Scheme {
    /// Build a scheme: ambient variables (with parameter flags), inverted
    /// variables, optional root of unity, and defining relations given in
    /// the expression grammar over the full table (partners included).
    pub fn new(
        vars: &[(&str, bool)],
        inverted: &[&str],
        roots: Option<(&str, u32)>,
        relations: &[&str],
    ) -> Result<Scheme, SchemeError> {
        Scheme::new_with(vars, inverted, roots, |table| {
            relations
                .iter()
                .map(|r| parse_poly(r, table).map_err(SchemeError::from))
                .collect()
        })
    }

    /// Like [`new`](Self::new) with programmatic relation construction over
    /// the finished table.
    pub fn new_with(
        vars: &[(&str, bool)],
        inverted: &[&str],
        roots: Option<(&str, u32)>,
        build: impl FnOnce(&Arc<VarTable>) -> Result<Vec<Poly>, SchemeError>,
    ) -> Result<Scheme, SchemeError> {
        let mut all: Vec<(String, bool)> =
            vars.iter().map(|&(n, p)| (n.to_string(), p)).collect();
        if let Some((eps, _)) = roots {
            all.push((eps.to_string(), true));
        }
        for inv in inverted {
            if !vars.iter().any(|(n, _)| n == inv) {
                return Err(SchemeError::BadInverted(inv.to_string()));
            }
        }
        let mut partner = BTreeMap::new();
        {
            // partner names must be fresh relative to everything declared
            let mut taken: Vec<String> = all.iter().map(|(n, _)| n.clone()).collect();
            for inv in inverted {
                let mut cand = format!("{inv}_inv");
                let mut k = 0;
                while taken.contains(&cand) {
                    k += 1;
                    cand = format!("{inv}_inv{k}");
                }
                taken.push(cand.clone());
                partner.insert(inv.to_string(), cand.clone());
                all.push((cand, false));
            }
        }
        let refs: Vec<(&str, bool)> = all.iter().map(|(n, p)| (n.as_str(), *p)).collect();
        let table = VarTable::with_flags(&refs)?;

        let mut gens = build(&table)?;
        for inv in inverted {
            let x = Poly::var(&table, inv)?;
            let xb = Poly::var(&table, &partner[*inv])?;
            gens.push(x.mul(&xb).sub(&Poly::one(&table)));
        }
        if let Some((eps, m)) = roots {
            gens.push(cyclotomic(&table, eps, m)?);
        }
        Ok(Scheme {
            ideal: Ideal::new(&table, gens),
            vars: table,
            inverted: inverted.iter().map(|s| s.to_string()).collect(),
            partner,
            roots: roots.map(|(v, m)| RootsOfUnity {
                var: v.to_string(),
                order: m,
            }),
        })
    }

    /// Polynomial ring (empty ideal).
    pub fn affine(vars: &[(&str, bool)]) -> Result<Scheme, SchemeError> {
        Scheme::new(vars, &[], None, &[])
    }

    pub fn with_budget(mut self, budget: Budget) -> Scheme {
        self.ideal = self.ideal.with_budget(budget);
        self
    }

    pub fn budget(&self) -> &Budget {
        self.ideal.budget()
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn inverted(&self) -> &[String] {
        &self.inverted
    }

    pub fn roots(&self) -> Option<&RootsOfUnity> {
        self.roots.as_ref()
    }

    pub fn partner_of(&self, var: &str) -> Option<&str> {
        self.partner.get(var).map(|s| s.as_str())
    }

    /// Inverted variable owning this partner, if any.
    pub fn partner_owner(&self, name: &str) -> Option<&str> {
        self.partner
            .iter()
            .find(|(_, p)| p.as_str() == name)
            .map(|(v, _)| v.as_str())
    }

    pub fn is_partner(&self, name: &str) -> bool {
        self.partner_owner(name).is_some()
    }

    /// Ambient variables that are neither partners nor parameters.
    pub fn geometric_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| !self.vars.is_param(i))
            .map(|i| self.vars.name(i).to_string())
            .filter(|n| !self.is_partner(n))
            .collect()
    }

    /// All ambient variables.
    pub fn ambient_vars(&self) -> Vec<String> {
        self.vars.names().to_vec()
    }

    pub fn parse(&self, src: &str) -> Result<Poly, SchemeError> {
        Ok(parse_poly(src, &self.vars)?)
    }

    pub fn var(&self, name: &str) -> Result<Poly, SchemeError> {
        Ok(Poly::var(&self.vars, name)?)
    }

    pub fn nf(&self, p: &Poly) -> Result<Poly, SchemeError> {
        Ok(self.ideal.nf(&p.lift(&self.vars)?)?)
    }

    pub fn is_zero_mod(&self, p: &Poly) -> Result<bool, SchemeError> {
        Ok(self.nf(p)?.is_zero())
    }

    /// Same presentation plus extra relations.
    pub fn with_relations(&self, extra: &[Poly]) -> Result<Scheme, SchemeError> {
        let mut gens = self.ideal.gens().to_vec();
        for p in extra {
            gens.push(p.lift(&self.vars)?);
        }
        Ok(Scheme {
            vars: self.vars.clone(),
            ideal: Ideal::new(&self.vars, gens).with_budget(*self.budget()),
            inverted: self.inverted.clone(),
            partner: self.partner.clone(),
            roots: self.roots.clone(),
        })
    }

    /// Localize at an ambient variable: append a partner and its relation.
    pub fn localize(&self, var: &str) -> Result<Scheme, SchemeError> {
        if self.vars.index_of(var).is_none() {
            return Err(SchemeError::BadInverted(var.to_string()));
        }
        if self.inverted.iter().any(|v| v == var) {
            return Ok(self.clone());
        }
        let pname = self.vars.fresh_name(&format!("{var}_inv"));
        let table = self.vars.extend(&[(&pname, false)])?;
        let mut gens: Vec<Poly> = self
            .ideal
            .gens()
            .iter()
            .map(|g| g.lift(&table))
            .collect::<Result<_, _>>()?;
        gens.push(
            Poly::var(&table, var)?
                .mul(&Poly::var(&table, &pname)?)
                .sub(&Poly::one(&table)),
        );
        let mut inverted = self.inverted.clone();
        inverted.push(var.to_string());
        let mut partner = self.partner.clone();
        partner.insert(var.to_string(), pname);
        Ok(Scheme {
            ideal: Ideal::new(&table, gens).with_budget(*self.budget()),
            vars: table,
            inverted,
            partner,
            roots: self.roots.clone(),
        })
    }

    /// Append fresh ambient variables (a product with affine space).
    pub fn extend_ambient(&self, extra: &[(&str, bool)]) -> Result<Scheme, SchemeError> {
        let table = self.vars.extend(extra)?;
        let gens: Vec<Poly> = self
            .ideal
            .gens()
            .iter()
            .map(|g| g.lift(&table))
            .collect::<Result<_, _>>()?;
        Ok(Scheme {
            ideal: Ideal::new(&table, gens).with_budget(*self.budget()),
            vars: table,
            inverted: self.inverted.clone(),
            partner: self.partner.clone(),
            roots: self.roots.clone(),
        })
    }

    /// Partial derivative treating partners as inverse functions:
    /// `d(x_inv)/dx = -x_inv^2`.
    pub fn laurent_partial(&self, p: &Poly, var: &str) -> Result<Poly, SchemeError> {
        let mut out = p.partial(var)?;
        if let Some(pn) = self.partner_of(var) {
            let chain = p.partial(pn)?;
            if !chain.is_zero() {
                let pv = Poly::var(&self.vars, pn)?;
                out = out.sub(&chain.mul(&pv).mul(&pv));
            }
        }
        Ok(out)
    }
}

/// Jacobian-criterion outcome for a declared complete intersection.
#[derive(Debug)]
pub struct Smoothness {
    pub smooth: bool,
    /// cofactors expressing 1 over (ideal generators ++ minors) on success
    pub certificate: Option<Vec<Poly>>,
}

/// Maximal minors of the Jacobian of the presentation plus the ideal must
/// generate the unit ideal. Columns range over non-parameter variables;
/// the root-of-unity variable is included since its cyclotomic relation is
/// one of the generators.
pub fn smoothness_check(scheme: &Scheme, codim: usize) -> Result<Smoothness, SchemeError> {
    let gens = scheme.ideal().gens();
    if gens.len() != codim {
        return Err(SchemeError::CodimMismatch {
            expected: codim,
            actual: gens.len(),
        });
    }
    let vars = scheme.vars();
    let cols: Vec<String> = (0..vars.len())
        .filter(|&i| {
            !vars.is_param(i)
                || scheme
                    .roots()
                    .is_some_and(|r| r.var == vars.name(i))
        })
        .map(|i| vars.name(i).to_string())
        .collect();
    let jac: Vec<Vec<Poly>> = gens
        .iter()
        .map(|g| {
            cols.iter()
                .map(|c| g.partial(c))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let minors = maximal_minors(&jac, vars);
    let mut all = gens.to_vec();
    all.extend(minors);
    let big = Ideal::new(vars, all).with_budget(*scheme.budget());
    if !big.contains_one()? {
        return Ok(Smoothness {
            smooth: false,
            certificate: None,
        });
    }
    let cert = big.membership_certificate(&Poly::one(vars))?;
    Ok(Smoothness {
        smooth: true,
        certificate: cert,
    })
}

fn det(rows: &[Vec<Poly>], vars: &Arc<VarTable>) -> Poly {
    let n = rows.len();
    if n == 0 {
        return Poly::one(vars);
    }
    if n == 1 {
        return rows[0][0].clone();
    }
    let mut acc = Poly::zero(vars);
    for (j, cell) in rows[0].iter().enumerate() {
        if cell.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = rows[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let d = cell.mul(&det(&minor, vars));
        if j % 2 == 0 {
            acc = acc.add(&d);
        } else {
            acc = acc.sub(&d);
        }
    }
    acc
}

/// All `k x k` minors of a `k x n` matrix (k rows).
pub fn maximal_minors(jac: &[Vec<Poly>], vars: &Arc<VarTable>) -> Vec<Poly> {
    let k = jac.len();
    if k == 0 {
        return vec![];
    }
    let n = jac[0].len();
    let mut out = Vec::new();
    let mut choice: Vec<usize> = (0..k).collect();
    loop {
        let rows: Vec<Vec<Poly>> = jac
            .iter()
            .map(|r| choice.iter().map(|&c| r[c].clone()).collect())
            .collect();
        let d = det(&rows, vars);
        if !d.is_zero() {
            out.push(d);
        }
        // next k-combination of {0..n}
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if choice[i] != i + n - k {
                choice[i] += 1;
                for j in (i + 1)..k {
                    choice[j] = choice[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Ring comorphism `target -> source` given by images of the target's
/// ambient variables, carrying a machine-checked well-definedness
/// certificate from construction.
#[derive(Debug, Clone)]
pub struct Morphism {
    source: Scheme,
    target: Scheme,
    images: BTreeMap<String, Poly>,
}

impl Morphism {
    /// Build and certify. Images must cover the target's geometric
    /// variables; parameters and the root of unity default to the same
    /// name in the source; images of partners are derived as unit inverses
    /// unless given explicitly.
    pub fn new(
        source: &Scheme,
        target: &Scheme,
        images: &[(&str, Poly)],
    ) -> Result<Morphism, SchemeError> {
        let mut map: BTreeMap<String, Poly> = BTreeMap::new();
        for (name, p) in images {
            map.insert(name.to_string(), p.lift(source.vars())?);
        }
        // parameters and roots of unity default to the same name
        for i in 0..target.vars().len() {
            let name = target.vars().name(i);
            if map.contains_key(name) || target.is_partner(name) {
                continue;
            }
            if target.vars().is_param(i) && source.vars().contains(name) {
                map.insert(name.to_string(), Poly::var(source.vars(), name)?);
                continue;
            }
            return Err(SchemeError::MissingImage(name.to_string()));
        }
        // derived partner images
        for inv in target.inverted() {
            let pname = target.partner_of(inv).unwrap();
            if map.contains_key(pname) {
                continue;
            }
            let img = map
                .get(inv)
                .ok_or_else(|| SchemeError::MissingImage(inv.clone()))?;
            match source.ideal().unit_inverse(img)? {
                Some(g) => {
                    map.insert(pname.to_string(), g);
                }
                None => return Err(SchemeError::NotAUnit(inv.clone())),
            }
        }
        let m = Morphism {
            source: source.clone(),
            target: target.clone(),
            images: map,
        };
        m.certify()?;
        Ok(m)
    }

    pub fn identity(scheme: &Scheme) -> Result<Morphism, SchemeError> {
        let imgs: Vec<(String, Poly)> = scheme
            .ambient_vars()
            .iter()
            .map(|v| Ok((v.clone(), Poly::var(scheme.vars(), v)?)))
            .collect::<Result<_, SchemeError>>()?;
        let refs: Vec<(&str, Poly)> = imgs.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        Morphism::new(scheme, scheme, &refs)
    }

    fn certify(&self) -> Result<(), SchemeError> {
        for g in self.target.ideal().gens() {
            let image = self.apply(g)?;
            let nf = self.source.nf(&image)?;
            if !nf.is_zero() {
                return Err(SchemeError::NotWellDefined {
                    generator: g.to_string(),
                    nf: nf.to_string(),
                });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Scheme {
        &self.source
    }

    pub fn target(&self) -> &Scheme {
        &self.target
    }

    pub fn image_of(&self, var: &str) -> Option<&Poly> {
        self.images.get(var)
    }

    /// Pull a function on the target back to the source (no normal form).
    pub fn apply(&self, p: &Poly) -> Result<Poly, SchemeError> {
        let p = p.lift(self.target.vars())?;
        Ok(p.substitute(&self.images)?)
    }

    /// `compose(f, g) = f . g` where `g: W -> X`, `f: X -> Y`.
    pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism, SchemeError> {
        if f.source != g.target {
            return Err(SchemeError::ComposeMismatch);
        }
        let imgs: Vec<(String, Poly)> = f
            .images
            .iter()
            .map(|(v, p)| Ok((v.clone(), g.apply(p)?)))
            .collect::<Result<_, SchemeError>>()?;
        let refs: Vec<(&str, Poly)> = imgs.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        Morphism::new(&g.source, &f.target, &refs)
    }
}

/// Result of checking a candidate inverse pair.
#[derive(Debug)]
pub struct IsoCheck {
    pub ok: bool,
    /// offending (direction, variable, normal form) on failure
    pub witness: Option<(String, String, String)>,
}

/// `f: X -> Y`, `g: Y -> X`; both composites must fix every ambient
/// variable modulo the respective ideals.
pub fn is_isomorphism(f: &Morphism, g: &Morphism) -> Result<IsoCheck, SchemeError> {
    if f.source() != g.target() || f.target() != g.source() {
        return Err(SchemeError::ComposeMismatch);
    }
    // g* after f* should fix O(Y); f* after g* should fix O(X)
    for (dir, outer, inner) in [("f.g", f, g), ("g.f", g, f)] {
        let ring = outer.target();
        for v in ring.ambient_vars() {
            let var = Poly::var(ring.vars(), &v)?;
            let once = outer.apply(&var)?;
            let back = inner.apply(&once)?;
            let diff = ring.nf(&back.sub(&var.lift(ring.vars())?))?;
            if !diff.is_zero() {
                return Ok(IsoCheck {
                    ok: false,
                    witness: Some((dir.to_string(), v, diff.to_string())),
                });
            }
        }
    }
    Ok(IsoCheck {
        ok: true,
        witness: None,
    })
}

/// Fiber product `X x_S Y` for affine `S`: left factor keeps its names,
/// right factor variables get `_r` appended, and the two pullbacks of each
/// ambient variable of `S` are identified.
pub fn fiber_product(f: &Morphism, g: &Morphism) -> Result<(Scheme, BTreeMap<String, String>), SchemeError> {
    if f.target() != g.target() {
        return Err(SchemeError::ComposeMismatch);
    }
    let x = f.source();
    let y = g.source();
    let mut names: Vec<(String, bool)> = x
        .vars()
        .names()
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), x.vars().is_param(i)))
        .collect();
    let mut rename: BTreeMap<String, String> = BTreeMap::new();
    for (i, n) in y.vars().names().iter().enumerate() {
        let mut cand = format!("{n}_r");
        while names.iter().any(|(m, _)| *m == cand) || rename.values().any(|m| *m == cand) {
            cand.push('r');
        }
        rename.insert(n.clone(), cand.clone());
        names.push((cand, y.vars().is_param(i)));
    }
    let refs: Vec<(&str, bool)> = names.iter().map(|(n, p)| (n.as_str(), *p)).collect();
    let table = VarTable::with_flags(&refs)?;

    let mut gens: Vec<Poly> = Vec::new();
    for p in x.ideal().gens() {
        gens.push(p.lift(&table)?);
    }
    for p in y.ideal().gens() {
        gens.push(p.rename_into(&rename, &table)?);
    }
    let s = f.target();
    for v in s.ambient_vars() {
        if s.is_partner(&v) {
            continue;
        }
        let left = f.apply(&Poly::var(s.vars(), &v)?)?.lift(&table)?;
        let right = g
            .apply(&Poly::var(s.vars(), &v)?)?
            .rename_into(&rename, &table)?;
        gens.push(left.sub(&right));
    }
    let mut inverted = x.inverted().to_vec();
    let mut partner = BTreeMap::new();
    for v in x.inverted() {
        partner.insert(v.clone(), x.partner_of(v).unwrap().to_string());
    }
    for v in y.inverted() {
        inverted.push(rename[v].clone());
        partner.insert(
            rename[v].clone(),
            rename[y.partner_of(v).unwrap()].clone(),
        );
    }
    let scheme = Scheme {
        ideal: Ideal::new(&table, gens).with_budget(*x.budget()),
        vars: table,
        inverted,
        partner,
        roots: x.roots().cloned(),
    };
    Ok((scheme, rename))
}

/// Convenience: rational constant.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2() -> Scheme {
        Scheme::new(
            &[("x", false), ("y", false), ("u", false), ("v", false)],
            &[],
            None,
            &["x*v - y*u - 1"],
        )
        .unwrap()
    }

    #[test]
    fn sl2_is_a_hypersurface_scheme() {
        let s = sl2();
        assert_eq!(s.ideal().gens().len(), 1);
        assert_eq!(s.vars().len(), 4);
    }

    #[test]
    fn laurent_partner_relation_present() {
        let s = Scheme::new(&[("y", false), ("x", false)], &["x"], None, &[]).unwrap();
        let p = s.parse("x*x_inv").unwrap();
        assert_eq!(s.nf(&p).unwrap(), Poly::one(s.vars()));
        // x_inv^2 * x reduces to x_inv
        let p2 = s.parse("x_inv^2*x").unwrap();
        assert_eq!(s.nf(&p2).unwrap(), s.parse("x_inv").unwrap());
    }

    #[test]
    fn cyclotomic_relations() {
        let s = Scheme::new(&[("x", false)], &[], Some(("eps", 3)), &[]).unwrap();
        let phi = s.parse("eps^2 + eps + 1").unwrap();
        assert!(s.ideal().gens().contains(&phi));
        // eps^3 = 1 modulo the relation
        let p = s.parse("eps^3 - 1").unwrap();
        assert!(s.is_zero_mod(&p).unwrap());
        let v = VarTable::new(&["e"]).unwrap();
        assert_eq!(
            cyclotomic(&v, "e", 6).unwrap(),
            parse_poly("e^2 - e + 1", &v).unwrap()
        );
        assert_eq!(
            cyclotomic(&v, "e", 4).unwrap(),
            parse_poly("e^2 + 1", &v).unwrap()
        );
    }

    #[test]
    fn sl2_smooth_cusp_not() {
        let sm = smoothness_check(&sl2(), 1).unwrap();
        assert!(sm.smooth);
        assert!(sm.certificate.is_some());

        let cone = Scheme::new(
            &[("x", false), ("y", false), ("z", false)],
            &[],
            None,
            &["x*y - z^2"],
        )
        .unwrap();
        assert!(!smoothness_check(&cone, 1).unwrap().smooth);
    }

    #[test]
    fn deformed_cubic_smooth() {
        let y = Scheme::new(
            &[("x", false), ("y", false), ("z", false), ("t", false)],
            &[],
            None,
            &["x^2*z - y^2 + t^3 - x"],
        )
        .unwrap();
        assert!(smoothness_check(&y, 1).unwrap().smooth);
    }

    #[test]
    fn smoothness_certificate_reconstructs_one() {
        let s = sl2();
        let sm = smoothness_check(&s, 1).unwrap();
        let cert = sm.certificate.unwrap();
        // rebuild generators ++ minors exactly as the checker does
        let gens = s.ideal().gens().to_vec();
        let cols = ["x", "y", "u", "v"];
        let jac: Vec<Vec<Poly>> = gens
            .iter()
            .map(|g| cols.iter().map(|c| g.partial(c).unwrap()).collect())
            .collect();
        let mut all = gens;
        all.extend(maximal_minors(&jac, s.vars()));
        let mut acc = Poly::zero(s.vars());
        for (c, g) in cert.iter().zip(&all) {
            acc = acc.add(&c.mul(g));
        }
        assert_eq!(acc, Poly::one(s.vars()));
    }

    #[test]
    fn wrong_codimension_is_an_error() {
        assert!(matches!(
            smoothness_check(&sl2(), 2),
            Err(SchemeError::CodimMismatch { .. })
        ));
    }

    #[test]
    fn identity_morphism_certifies() {
        let s = sl2();
        let id = Morphism::identity(&s).unwrap();
        let x = s.parse("x").unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
    }

    #[test]
    fn ill_defined_morphism_rejected_with_witness() {
        // x -> y from k[x]/(x^2) to k[y] fails since y^2 is nonzero
        let src = Scheme::new(&[("y", false)], &[], None, &[]).unwrap();
        let tgt = Scheme::new(&[("x", false)], &[], None, &["x^2"]).unwrap();
        let y = src.parse("y").unwrap();
        match Morphism::new(&src, &tgt, &[("x", y)]) {
            Err(SchemeError::NotWellDefined { generator, nf }) => {
                assert_eq!(generator, "x^2");
                assert_eq!(nf, "y^2");
            }
            other => panic!("expected certification failure, got {other:?}"),
        }
    }

    #[test]
    fn translation_pair_is_isomorphism() {
        let a1 = Scheme::new(&[("x", false)], &[], None, &[]).unwrap();
        let plus = Morphism::new(&a1, &a1, &[("x", a1.parse("x + 1").unwrap())]).unwrap();
        let minus = Morphism::new(&a1, &a1, &[("x", a1.parse("x - 1").unwrap())]).unwrap();
        assert!(is_isomorphism(&plus, &minus).unwrap().ok);
        let id = Morphism::identity(&a1).unwrap();
        assert!(is_isomorphism(&id, &id).unwrap().ok);
        // x+1 is not its own inverse
        assert!(!is_isomorphism(&plus, &plus).unwrap().ok);
    }

    #[test]
    fn derived_partner_image_via_unit_certificate() {
        // comorphism k[v^{pm}] -> k[x^{pm}], v -> x^2: partner image must be
        // derived as x_inv^2
        let src = Scheme::new(&[("x", false)], &["x"], None, &[]).unwrap();
        let tgt = Scheme::new(&[("v", false)], &["v"], None, &[]).unwrap();
        let m = Morphism::new(&src, &tgt, &[("v", src.parse("x^2").unwrap())]).unwrap();
        assert_eq!(
            m.image_of("v_inv").unwrap(),
            &src.parse("x_inv^2").unwrap()
        );
    }

    #[test]
    fn fiber_product_over_point_and_base() {
        let a1 = Scheme::new(&[("x", false)], &[], None, &[]).unwrap();
        let pt = Scheme::new(&[], &[], None, &[]).unwrap();
        let ax = Morphism::new(&a1, &pt, &[]).unwrap();
        let (prod, _) = fiber_product(&ax, &ax).unwrap();
        assert_eq!(prod.vars().names(), &["x".to_string(), "x_r".to_string()]);
        assert!(prod.ideal().gens().is_empty());

        // X x_S S via the identity is X: the identification forces x = x_r
        let idm = Morphism::identity(&a1).unwrap();
        let (xs, _) = fiber_product(&idm, &idm).unwrap();
        let d = xs.parse("x - x_r").unwrap();
        assert!(xs.is_zero_mod(&d).unwrap());
    }

    #[test]
    fn fiber_product_symmetry_up_to_renaming() {
        let a1 = Scheme::new(&[("x", false)], &[], None, &[]).unwrap();
        let base = Scheme::new(&[("s", false)], &[], None, &[]).unwrap();
        let f = Morphism::new(&a1, &base, &[("s", a1.parse("x^2").unwrap())]).unwrap();
        let (xy, _) = fiber_product(&f, &f).unwrap();
        let (yx, _) = fiber_product(&f, &f).unwrap();
        // swap map x <-> x_r is an automorphism exchanging the factors
        let swap = Morphism::new(
            &xy,
            &yx,
            &[
                ("x", xy.parse("x_r").unwrap()),
                ("x_r", xy.parse("x").unwrap()),
            ],
        )
        .unwrap();
        let swap_back = Morphism::new(
            &yx,
            &xy,
            &[
                ("x", yx.parse("x_r").unwrap()),
                ("x_r", yx.parse("x").unwrap()),
            ],
        )
        .unwrap();
        assert!(is_isomorphism(&swap, &swap_back).unwrap().ok);
    }

    #[test]
    fn laurent_partial_chain_rule() {
        let s = Scheme::new(&[("x", false), ("y", false)], &["x"], None, &[]).unwrap();
        // d/dx (x_inv^2) = -2 x_inv^3
        let p = s.parse("x_inv^2").unwrap();
        let d = s.laurent_partial(&p, "x").unwrap();
        assert_eq!(d, s.parse("-2*x_inv^3").unwrap());
    }
}
