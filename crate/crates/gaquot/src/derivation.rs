//! Derivations on schemes: well-definedness certificates, local
//! nilpotency, exponentials (additive group coactions), equivariance,
//! fixed loci, bounded kernel search and division inside the invariant
//! ring.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::ideal::Ideal;
use crate::linalg::{LinSolver, SparseVec};
use crate::poly::{Exponents, Poly, VarTable};
use crate::scheme::{Morphism, Scheme, SchemeError};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum DerivationError {
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
    #[error(transparent)]
    Engine(#[from] crate::ideal::EngineError),
    #[error("missing image for variable `{0}`")]
    MissingImage(String),
    #[error("image for `{0}` is forced and cannot be supplied")]
    ForcedImage(String),
    #[error("derivation not well defined on `{generator}`: image has normal form `{nf}`")]
    NotWellDefined { generator: String, nf: String },
    #[error("not locally nilpotent within cap {cap}: witness `{witness}`")]
    NotNilpotent { cap: u32, witness: String },
    #[error("`{0}` is not invariant")]
    NotInvariant(String),
    #[error("no quotient found within degree bound {0}")]
    NotDivisible(u32),
    #[error("derivations live on different schemes")]
    SchemeMismatch,
}

impl DerivationError {
    pub fn is_budget(&self) -> bool {
        match self {
            DerivationError::Scheme(SchemeError::Engine(e)) => e.is_budget(),
            DerivationError::Engine(e) => e.is_budget(),
            _ => false,
        }
    }
}

/// A k-derivation of the coordinate ring of a scheme, given by images of
/// the ambient variables. Partner images are forced by the Leibniz rule
/// (`d(x_inv) = -x_inv^2 d(x)`), parameters and the root of unity are
/// constants.
#[derive(Debug, Clone)]
pub struct Derivation {
    scheme: Scheme,
    images: BTreeMap<String, Poly>,
}

impl Derivation {
    pub fn new(scheme: &Scheme, images: &[(&str, Poly)]) -> Result<Derivation, DerivationError> {
        let vars = scheme.vars();
        let mut map: BTreeMap<String, Poly> = BTreeMap::new();
        for (name, p) in images {
            let i = vars
                .index_of(name)
                .ok_or_else(|| DerivationError::MissingImage(name.to_string()))?;
            let p = p.lift(vars)?;
            if scheme.is_partner(name) || (vars.is_param(i) && !p.is_zero()) {
                return Err(DerivationError::ForcedImage(name.to_string()));
            }
            map.insert(name.to_string(), p);
        }
        for i in 0..vars.len() {
            let name = vars.name(i).to_string();
            if map.contains_key(&name) || scheme.is_partner(&name) {
                continue;
            }
            if vars.is_param(i) {
                map.insert(name, Poly::zero(vars));
                continue;
            }
            return Err(DerivationError::MissingImage(name));
        }
        for inv in scheme.inverted() {
            let pname = scheme.partner_of(inv).unwrap().to_string();
            let pb = Poly::var(vars, &pname)?;
            let forced = pb.mul(&pb).mul(&map[inv]).neg();
            map.insert(pname, forced);
        }
        let d = Derivation {
            scheme: scheme.clone(),
            images: map,
        };
        for g in scheme.ideal().gens() {
            let img = d.apply(g)?;
            if !img.is_zero() {
                return Err(DerivationError::NotWellDefined {
                    generator: g.to_string(),
                    nf: img.to_string(),
                });
            }
        }
        Ok(d)
    }

    pub fn zero(scheme: &Scheme) -> Result<Derivation, DerivationError> {
        let imgs: Vec<(String, Poly)> = scheme
            .geometric_vars()
            .iter()
            .map(|v| (v.clone(), Poly::zero(scheme.vars())))
            .collect();
        let refs: Vec<(&str, Poly)> = imgs.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        Derivation::new(scheme, &refs)
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    pub fn image_of(&self, var: &str) -> Option<&Poly> {
        self.images.get(var)
    }

    /// Leibniz extension, without reduction.
    pub fn apply_raw(&self, p: &Poly) -> Result<Poly, DerivationError> {
        let vars = self.scheme.vars();
        let p = p.lift(vars)?;
        let mut out = Poly::zero(vars);
        for i in 0..vars.len() {
            let name = vars.name(i);
            let img = &self.images[name];
            if img.is_zero() {
                continue;
            }
            let d = p.partial(name)?;
            if !d.is_zero() {
                out = out.add(&d.mul(img));
            }
        }
        Ok(out)
    }

    /// Leibniz extension followed by normal form modulo the ideal.
    pub fn apply(&self, p: &Poly) -> Result<Poly, DerivationError> {
        Ok(self.scheme.nf(&self.apply_raw(p)?)?)
    }

    /// Least `d` with `delta^d(p) = 0` mod the ideal, or `None` past `cap`.
    pub fn nilpotency_degree(&self, p: &Poly, cap: u32) -> Result<Option<u32>, DerivationError> {
        let mut cur = self.scheme.nf(p)?;
        let mut d = 0;
        while !cur.is_zero() {
            cur = self.apply(&cur)?;
            d += 1;
            if d > cap {
                return Ok(None);
            }
        }
        Ok(Some(d))
    }

    /// Nilpotency degrees of every ambient variable; certifies local
    /// nilpotency of the whole finitely generated ring when all are finite.
    pub fn local_nilpotency(&self, cap: u32) -> Result<LocalNilpotency, DerivationError> {
        let mut degrees = Vec::new();
        let mut ok = true;
        for v in self.scheme.ambient_vars() {
            let p = Poly::var(self.scheme.vars(), &v)?;
            let d = self.nilpotency_degree(&p, cap)?;
            ok &= d.is_some();
            degrees.push((v, d));
        }
        Ok(LocalNilpotency { ok, cap, degrees })
    }

    pub fn is_invariant(&self, p: &Poly) -> Result<bool, DerivationError> {
        Ok(self.apply(p)?.is_zero())
    }

    /// Scheme ideal plus all variable images.
    pub fn fixed_locus(&self) -> Ideal {
        let vars = self.scheme.vars();
        let mut gens = self.scheme.ideal().gens().to_vec();
        for v in self.scheme.geometric_vars() {
            let img = &self.images[&v];
            if !img.is_zero() {
                gens.push(img.clone());
            }
        }
        Ideal::new(vars, gens).with_budget(*self.scheme.budget())
    }

    /// Exponential coaction `x -> sum delta^i(x)/i! T^i` into the scheme
    /// with an adjoined time variable.
    pub fn exp(&self, cap: u32) -> Result<GaAction, DerivationError> {
        let nil = self.local_nilpotency(cap)?;
        if !nil.ok {
            let witness = nil
                .degrees
                .iter()
                .find(|(_, d)| d.is_none())
                .map(|(v, _)| v.clone())
                .unwrap_or_default();
            return Err(DerivationError::NotNilpotent { cap, witness });
        }
        let time = self.scheme.vars().fresh_name("T");
        let ext = self.scheme.extend_ambient(&[(&time, false)])?;
        let tvar = Poly::var(ext.vars(), &time)?;
        let mut images: Vec<(String, Poly)> = Vec::new();
        for v in self.scheme.ambient_vars() {
            if self.scheme.is_partner(&v) {
                continue;
            }
            let series = self.exp_series(&v, &time, ext.vars(), &tvar)?;
            images.push((v, series));
        }
        let refs: Vec<(&str, Poly)> =
            images.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let coaction = Morphism::new(&ext, &self.scheme, &refs)?;
        Ok(GaAction {
            derivation: self.clone(),
            coaction,
            time,
        })
    }

    fn exp_series(
        &self,
        var: &str,
        _time: &str,
        ext_vars: &Arc<VarTable>,
        tvar: &Poly,
    ) -> Result<Poly, DerivationError> {
        let mut acc = Poly::zero(ext_vars);
        let mut cur = self.scheme.nf(&Poly::var(self.scheme.vars(), var)?)?;
        let mut fact = BigInt::one();
        let mut i: u32 = 0;
        while !cur.is_zero() {
            let coeff = BigRational::new(BigInt::one(), fact.clone());
            acc = acc.add(&cur.lift(ext_vars)?.scale(&coeff).mul(&tvar.pow(i)));
            cur = self.apply(&cur)?;
            i += 1;
            fact *= BigInt::from(i);
        }
        Ok(acc)
    }

    /// Basis (over `Q`) of the invariants among normal-form monomials of
    /// total degree at most `bound`.
    pub fn kernel_search(&self, bound: u32) -> Result<Vec<Poly>, DerivationError> {
        let vars = self.scheme.vars();
        let candidates = self.normal_form_monomials(bound)?;
        let mut solver = LinSolver::new();
        let mut kernel: Vec<Poly> = Vec::new();
        for (id, e) in candidates.iter().enumerate() {
            let mono = Poly::monomial(vars, e.clone(), BigRational::one());
            let img = self.apply(&mono)?;
            let sv: SparseVec = img
                .terms()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
            if let Some(combo) = solver.insert(id, sv) {
                let mut p = Poly::zero(vars);
                for (k, c) in &combo {
                    p = p.add(&Poly::monomial(vars, candidates[*k].clone(), c.clone()));
                }
                kernel.push(p);
            }
        }
        Ok(kernel)
    }

    /// Monomials of total degree `<= bound` not divisible by any leading
    /// term of the default Gröbner basis, sorted ascending.
    fn normal_form_monomials(&self, bound: u32) -> Result<Vec<Exponents>, DerivationError> {
        let ideal = self.scheme.ideal();
        let ord = ideal.default_order();
        let basis = ideal.groebner(&ord).map_err(SchemeError::from)?;
        let lts = basis.leading_exponents();
        let n = self.scheme.vars().len();
        let mut out: Vec<Exponents> = Vec::new();
        let mut cur = vec![0u32; n];
        enumerate_monomials(&mut cur, 0, bound, &mut |e| {
            if !lts.iter().any(|lt| lt.iter().zip(e).all(|(a, b)| a <= b)) {
                out.push(e.to_vec());
            }
        });
        let budget = self.scheme.budget();
        if out.len() > budget.max_terms {
            return Err(DerivationError::Scheme(SchemeError::Engine(
                crate::ideal::EngineError::MonomialBudget(out.len()),
            )));
        }
        out.sort_by(|a, b| ord.cmp(a, b));
        Ok(out)
    }

    /// Solve `numerator = divisor * p` inside the coordinate ring by a
    /// linear ansatz over normal-form monomials of degree `<= bound`
    /// (default: the degree of the numerator's normal form). Both inputs
    /// must be invariant; the quotient then is as well whenever the
    /// divisor is a nonzerodivisor.
    pub fn invariant_division(
        &self,
        numerator: &Poly,
        divisor: &Poly,
        bound: Option<u32>,
    ) -> Result<Poly, DerivationError> {
        if !self.is_invariant(numerator)? {
            return Err(DerivationError::NotInvariant(numerator.to_string()));
        }
        if !self.is_invariant(divisor)? {
            return Err(DerivationError::NotInvariant(divisor.to_string()));
        }
        let vars = self.scheme.vars();
        let num_nf = self.scheme.nf(numerator)?;
        let bound = bound.unwrap_or_else(|| num_nf.total_degree());
        let candidates = self.normal_form_monomials(bound)?;
        let mut solver = LinSolver::new();
        for (id, e) in candidates.iter().enumerate() {
            let mono = Poly::monomial(vars, e.clone(), BigRational::one());
            let img = self.scheme.nf(&divisor.lift(vars)?.mul(&mono))?;
            let sv: SparseVec = img.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
            solver.insert(id, sv);
        }
        let target: SparseVec = num_nf
            .terms()
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        match solver.solve(target) {
            None => Err(DerivationError::NotDivisible(bound)),
            Some(combo) => {
                let mut p = Poly::zero(vars);
                for (k, c) in &combo {
                    p = p.add(&Poly::monomial(vars, candidates[*k].clone(), c.clone()));
                }
                let check = numerator
                    .lift(vars)?
                    .sub(&divisor.lift(vars)?.mul(&p));
                debug_assert!(self.scheme.is_zero_mod(&check).unwrap_or(false));
                Ok(p)
            }
        }
    }
}

fn enumerate_monomials(cur: &mut Vec<u32>, idx: usize, remaining: u32, f: &mut impl FnMut(&[u32])) {
    if idx == cur.len() {
        f(cur);
        return;
    }
    for k in 0..=remaining {
        cur[idx] = k;
        enumerate_monomials(cur, idx + 1, remaining - k, f);
    }
    cur[idx] = 0;
}

/// Whether `p` lies in the `Q`-span of `basis` (exact linear algebra).
pub fn span_contains(basis: &[Poly], p: &Poly) -> bool {
    let mut solver = LinSolver::new();
    for (i, b) in basis.iter().enumerate() {
        let sv: SparseVec = b.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        solver.insert(i, sv);
    }
    let sv: SparseVec = p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    solver.solve(sv).is_some()
}

#[derive(Debug)]
pub struct LocalNilpotency {
    pub ok: bool,
    pub cap: u32,
    pub degrees: Vec<(String, Option<u32>)>,
}

impl LocalNilpotency {
    pub fn table(&self) -> String {
        self.degrees
            .iter()
            .map(|(v, d)| match d {
                Some(d) => format!("{v}:{d}"),
                None => format!("{v}:exceeded({})", self.cap),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.degrees.iter().map(|(_, d)| *d).max().flatten()
    }
}

/// Exponential of a locally nilpotent derivation: a certified coaction.
#[derive(Debug, Clone)]
pub struct GaAction {
    pub derivation: Derivation,
    pub coaction: Morphism,
    pub time: String,
}

#[derive(Debug)]
pub struct AxiomCheck {
    pub ok: bool,
    pub witness: Option<(String, String)>,
}

/// Counit and coassociativity: specializing the time variable to zero is
/// the identity, and acting by `S` after `T` equals acting by `S + T`, as
/// exact identities modulo the ideal.
pub fn check_action_axioms(action: &GaAction) -> Result<AxiomCheck, DerivationError> {
    let scheme = action.derivation.scheme();
    let vars = scheme.vars();
    let ext = action.coaction.source();

    // T = 0 gives the identity
    for v in scheme.ambient_vars() {
        let img = action
            .coaction
            .image_of(&v)
            .expect("coaction image")
            .clone();
        let mut zero_map = BTreeMap::new();
        zero_map.insert(action.time.clone(), Poly::zero(ext.vars()));
        let at0 = img.substitute(&zero_map)?;
        let diff = at0.sub(&Poly::var(ext.vars(), &v)?);
        if !ext.is_zero_mod(&diff)? {
            return Ok(AxiomCheck {
                ok: false,
                witness: Some((format!("counit at {v}"), ext.nf(&diff)?.to_string())),
            });
        }
    }

    // coassociativity in scheme (x) k[S,T]
    let s_name = vars.fresh_name("S");
    let t_name = vars.fresh_name("T");
    let big = scheme.extend_ambient(&[(&s_name, false), (&t_name, false)])?;
    let bvars = big.vars();
    let svar = Poly::var(bvars, &s_name)?;
    let tvar = Poly::var(bvars, &t_name)?;

    // images with a chosen time polynomial
    let with_time = |time_poly: &Poly| -> Result<BTreeMap<String, Poly>, DerivationError> {
        let mut m = BTreeMap::new();
        for v in scheme.ambient_vars() {
            let img = action.coaction.image_of(&v).expect("image").lift(bvars)?;
            let mut sub = BTreeMap::new();
            sub.insert(action.time.clone(), time_poly.clone());
            m.insert(v.clone(), img.substitute(&sub)?);
        }
        Ok(m)
    };
    let act_t = with_time(&tvar)?;
    let act_s = with_time(&svar)?;
    let act_st = with_time(&svar.add(&tvar))?;

    for v in scheme.ambient_vars() {
        // acting by T, then by S on the ring part
        let first = &act_t[&v];
        let twice = first.substitute(&act_s)?;
        let direct = &act_st[&v];
        let diff = twice.sub(direct);
        if !big.is_zero_mod(&diff)? {
            return Ok(AxiomCheck {
                ok: false,
                witness: Some((format!("coassociativity at {v}"), big.nf(&diff)?.to_string())),
            });
        }
    }
    Ok(AxiomCheck {
        ok: true,
        witness: None,
    })
}

/// Equivariance of `phi` for derivations on its source and target:
/// `d_src(phi*(w)) = phi*(d_tgt(w))` modulo the source ideal, for every
/// ambient variable `w` of the target.
pub fn check_equivariant(
    phi: &Morphism,
    d_src: &Derivation,
    d_tgt: &Derivation,
) -> Result<AxiomCheck, DerivationError> {
    if d_src.scheme() != phi.source() || d_tgt.scheme() != phi.target() {
        return Err(DerivationError::SchemeMismatch);
    }
    for w in phi.target().ambient_vars() {
        let wv = Poly::var(phi.target().vars(), &w)?;
        let lhs = d_src.apply(&phi.apply(&wv)?)?;
        let rhs = phi.source().nf(&phi.apply(&d_tgt.apply_raw(&wv)?)?)?;
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            return Ok(AxiomCheck {
                ok: false,
                witness: Some((w, diff.to_string())),
            });
        }
    }
    Ok(AxiomCheck {
        ok: true,
        witness: None,
    })
}

/// Mutual radical membership of generators.
pub fn radical_equal(a: &Ideal, b: &Ideal) -> Result<bool, DerivationError> {
    for g in a.gens() {
        if !b.in_radical(g).map_err(SchemeError::from)? {
            return Ok(false);
        }
    }
    for g in b.gens() {
        if !a.in_radical(g).map_err(SchemeError::from)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::Scheme;

    fn x2() -> Scheme {
        Scheme::new(
            &[("x", false), ("y", false), ("u", false), ("v", false)],
            &[],
            None,
            &["x^2*v - y*u - 1"],
        )
        .unwrap()
    }

    /// y d/dx + 2xv d/du on X_2
    fn nu2(s: &Scheme) -> Derivation {
        Derivation::new(
            s,
            &[
                ("x", s.parse("y").unwrap()),
                ("y", Poly::zero(s.vars())),
                ("u", s.parse("2*x*v").unwrap()),
                ("v", Poly::zero(s.vars())),
            ],
        )
        .unwrap()
    }

    #[test]
    fn nu2_certifies_and_annihilates_relation() {
        let s = x2();
        let d = nu2(&s);
        let rel = s.parse("x^2*v - y*u - 1").unwrap();
        assert!(d.apply(&rel).unwrap().is_zero());
    }

    #[test]
    fn zero_derivation_certifies_everywhere() {
        let s = x2();
        let d = Derivation::zero(&s).unwrap();
        assert!(d.local_nilpotency(4).unwrap().ok);
        assert!(d.fixed_locus().equals(s.ideal()).unwrap());
    }

    #[test]
    fn nilpotency_degrees_on_x2() {
        let s = x2();
        let d = nu2(&s);
        let x = s.parse("x").unwrap();
        let u = s.parse("u").unwrap();
        assert_eq!(d.nilpotency_degree(&x, 32).unwrap(), Some(2));
        // u -> 2xv -> 2yv -> 0
        assert_eq!(d.nilpotency_degree(&u, 32).unwrap(), Some(3));
        let nil = d.local_nilpotency(32).unwrap();
        assert!(nil.ok);
        assert_eq!(nil.max_degree(), Some(3));
    }

    #[test]
    fn euler_derivation_is_not_nilpotent() {
        let s = Scheme::new(&[("x", false)], &[], None, &[]).unwrap();
        let d = Derivation::new(&s, &[("x", s.parse("x").unwrap())]).unwrap();
        let x = s.parse("x").unwrap();
        assert_eq!(d.nilpotency_degree(&x, 10).unwrap(), None);
        let nil = d.local_nilpotency(10).unwrap();
        assert!(!nil.ok);
        assert!(matches!(d.exp(10), Err(DerivationError::NotNilpotent { .. })));
    }

    #[test]
    fn ill_defined_derivation_rejected() {
        let s = x2();
        // x -> 1 does not preserve the ideal
        let err = Derivation::new(
            &s,
            &[
                ("x", Poly::one(s.vars())),
                ("y", Poly::zero(s.vars())),
                ("u", Poly::zero(s.vars())),
                ("v", Poly::zero(s.vars())),
            ],
        );
        assert!(matches!(err, Err(DerivationError::NotWellDefined { .. })));
    }

    #[test]
    fn torsor_action_exponential() {
        // x^2 d/du + y d/dv exponentiates to u + T x^2, v + T y
        let s = x2();
        let d = Derivation::new(
            &s,
            &[
                ("x", Poly::zero(s.vars())),
                ("y", Poly::zero(s.vars())),
                ("u", s.parse("x^2").unwrap()),
                ("v", s.parse("y").unwrap()),
            ],
        )
        .unwrap();
        let a = d.exp(32).unwrap();
        let ext = a.coaction.source();
        assert_eq!(
            a.coaction.image_of("u").unwrap(),
            &ext.parse("u + T*x^2").unwrap()
        );
        assert_eq!(
            a.coaction.image_of("v").unwrap(),
            &ext.parse("v + T*y").unwrap()
        );
        assert!(check_action_axioms(&a).unwrap().ok);
    }

    #[test]
    fn exp_of_nu2_matches_series() {
        let s = x2();
        let a = nu2(&s).exp(32).unwrap();
        let ext = a.coaction.source();
        assert_eq!(
            a.coaction.image_of("x").unwrap(),
            &ext.parse("x + T*y").unwrap()
        );
        assert_eq!(
            a.coaction.image_of("u").unwrap(),
            &ext.parse("u + 2*x*v*T + y*v*T^2").unwrap()
        );
        assert!(check_action_axioms(&a).unwrap().ok);
    }

    #[test]
    fn corrupted_action_fails_axioms() {
        let s = x2();
        let a = nu2(&s).exp(32).unwrap();
        let ext = a.coaction.source().clone();
        // drop the T^2 term of the u image
        let bad_u = ext.parse("u + 2*x*v*T").unwrap();
        let mut imgs: Vec<(String, Poly)> = Vec::new();
        for v in s.ambient_vars() {
            if v == "u" {
                imgs.push(("u".into(), bad_u.clone()));
            } else {
                imgs.push((v.clone(), a.coaction.image_of(&v).unwrap().clone()));
            }
        }
        // the corrupted map is no longer well defined as a morphism, so
        // check the axioms directly on a hand-built action
        let refs: Vec<(&str, Poly)> = imgs.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        match Morphism::new(&ext, &s, &refs) {
            Err(SchemeError::NotWellDefined { .. }) => {}
            Ok(bad) => {
                let action = GaAction {
                    derivation: a.derivation.clone(),
                    coaction: bad,
                    time: a.time.clone(),
                };
                let check = check_action_axioms(&action).unwrap();
                assert!(!check.ok);
                assert!(check.witness.unwrap().0.contains('u'));
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn invariants_of_nu2() {
        let s = x2();
        let d = nu2(&s);
        assert!(d.is_invariant(&s.parse("y").unwrap()).unwrap());
        assert!(d.is_invariant(&s.parse("v").unwrap()).unwrap());
        assert!(!d.is_invariant(&s.parse("x").unwrap()).unwrap());
    }

    #[test]
    fn fixed_locus_of_nu_is_empty() {
        let s = Scheme::new(
            &[("x", false), ("y", false), ("u", false), ("v", false)],
            &[],
            None,
            &["x*v - y*u - 1"],
        )
        .unwrap();
        let d = Derivation::new(
            &s,
            &[
                ("x", s.parse("y").unwrap()),
                ("y", Poly::zero(s.vars())),
                ("u", s.parse("v").unwrap()),
                ("v", Poly::zero(s.vars())),
            ],
        )
        .unwrap();
        assert!(d.fixed_locus().contains_one().unwrap());
    }

    #[test]
    fn kernel_search_x2_bound_2() {
        let s = x2();
        let d = nu2(&s);
        let kernel = d.kernel_search(2).unwrap();
        // exactly the span of 1, y, v, y^2, y v, v^2
        assert_eq!(kernel.len(), 6);
        for mono in ["1", "y", "v", "y^2", "y*v", "v^2"] {
            let p = s.parse(mono).unwrap();
            assert!(span_contains(&kernel, &p), "missing {mono}");
        }
        for p in &kernel {
            assert!(d.is_invariant(p).unwrap());
            assert!(!p.involves("x") && !p.involves("u"));
        }
    }

    #[test]
    fn kernel_of_zero_derivation_is_everything() {
        let s = Scheme::new(&[("x", false), ("y", false)], &[], None, &[]).unwrap();
        let d = Derivation::zero(&s).unwrap();
        let kernel = d.kernel_search(1).unwrap();
        assert_eq!(kernel.len(), 3); // 1, x, y
    }

    #[test]
    fn invariant_division_basics() {
        let s = Scheme::new(&[("x", false)], &[], None, &[]).unwrap();
        let d = Derivation::zero(&s).unwrap();
        let x2 = s.parse("x^2").unwrap();
        let x = s.parse("x").unwrap();
        assert_eq!(d.invariant_division(&x2, &x, None).unwrap(), x);
        let one = Poly::one(s.vars());
        assert!(matches!(
            d.invariant_division(&one, &x, None),
            Err(DerivationError::NotDivisible(_))
        ));
    }

    #[test]
    fn equivariance_identity_and_scaling() {
        let s = x2();
        let d = nu2(&s);
        let id = Morphism::identity(&s).unwrap();
        assert!(check_equivariant(&id, &d, &d).unwrap().ok);
        // doubled target derivation breaks equivariance
        let d2 = Derivation::new(
            &s,
            &[
                ("x", s.parse("2*y").unwrap()),
                ("y", Poly::zero(s.vars())),
                ("u", s.parse("4*x*v").unwrap()),
                ("v", Poly::zero(s.vars())),
            ],
        )
        .unwrap();
        let check = check_equivariant(&id, &d, &d2).unwrap();
        assert!(!check.ok);
    }

    #[test]
    fn radical_comparison() {
        let v = VarTable::new(&["x", "y"]).unwrap();
        let a = Ideal::new(&v, vec![Poly::var(&v, "x").unwrap().pow(2)]);
        let b = Ideal::new(&v, vec![Poly::var(&v, "x").unwrap()]);
        assert!(radical_equal(&a, &b).unwrap());
        let c = Ideal::new(&v, vec![Poly::var(&v, "y").unwrap()]);
        assert!(!radical_equal(&a, &c).unwrap());
    }
}
