//! Buchberger machinery: reduced Gröbner bases with caching, normal forms,
//! membership (optionally with cofactor certificates), elimination,
//! saturation, intersection, unit and radical membership tests.
//!
//! Everything is exact over `Q`. A [`Budget`] turns runaway computations
//! into clean errors instead of hangs; all instances in the bundled suite
//! stay far below the defaults.

use num_rational::BigRational;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use crate::order::MonomialOrder;
use crate::poly::{Exponents, Poly, PolyError, VarTable};

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("pair budget exceeded after {0} S-pairs")]
    PairBudget(usize),
    #[error("term budget exceeded ({0} terms in one polynomial)")]
    TermBudget(usize),
    #[error("monomial budget exceeded ({0} candidate monomials)")]
    MonomialBudget(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl EngineError {
    pub fn is_budget(&self) -> bool {
        !matches!(self, EngineError::Poly(_))
    }
}

/// Resource caps for basis computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_pairs: usize,
    pub max_terms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_pairs: 200_000,
            max_terms: 100_000,
        }
    }
}

thread_local! {
    static THREAD_BUDGET: std::cell::Cell<Budget> = const {
        std::cell::Cell::new(Budget {
            max_pairs: 200_000,
            max_terms: 100_000,
        })
    };
}

/// Default budget for ideals constructed on this thread; the scenario
/// runner and the suite set it from the CLI flags before building.
pub fn set_thread_budget(b: Budget) {
    THREAD_BUDGET.with(|c| c.set(b));
}

pub fn thread_budget() -> Budget {
    THREAD_BUDGET.with(|c| c.get())
}

// ---------------------------------------------------------------------------
// engine representation: term lists sorted descending under the active order

#[derive(Debug, Clone)]
pub(crate) struct NPoly {
    terms: Vec<(Exponents, BigRational)>,
}

impl NPoly {
    fn zero() -> NPoly {
        NPoly { terms: Vec::new() }
    }

    fn from_poly(p: &Poly, ord: &MonomialOrder) -> NPoly {
        NPoly {
            terms: p.sorted_terms(ord),
        }
    }

    fn to_poly(&self, vars: &Arc<VarTable>) -> Poly {
        let mut out = Poly::zero(vars);
        for (e, c) in &self.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn leading(&self) -> &(Exponents, BigRational) {
        &self.terms[0]
    }

    fn scale(&mut self, c: &BigRational) {
        for (_, k) in &mut self.terms {
            *k *= c;
        }
    }

    /// self - c * x^m * other, merging sorted term lists.
    fn sub_scaled(&self, c: &BigRational, m: &[u32], other: &NPoly, ord: &MonomialOrder) -> NPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        while i < self.terms.len() || j < other.terms.len() {
            if j >= other.terms.len() {
                out.push(self.terms[i].clone());
                i += 1;
                continue;
            }
            let shifted: Exponents = other.terms[j]
                .0
                .iter()
                .zip(m)
                .map(|(a, b)| a + b)
                .collect();
            let sc = -(&other.terms[j].1 * c);
            if i >= self.terms.len() {
                if !sc.is_zero() {
                    out.push((shifted, sc));
                }
                j += 1;
                continue;
            }
            match ord.cmp(&self.terms[i].0, &shifted) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    if !sc.is_zero() {
                        out.push((shifted, sc));
                    }
                    j += 1;
                }
                Ordering::Equal => {
                    let s = &self.terms[i].1 + sc;
                    if !s.is_zero() {
                        out.push((shifted, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        NPoly { terms: out }
    }

    fn len(&self) -> usize {
        self.terms.len()
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_sub(a: &[u32], b: &[u32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn total(e: &[u32]) -> u64 {
    e.iter().map(|&x| x as u64).sum()
}

// ---------------------------------------------------------------------------
// division

struct Reduction {
    remainder: NPoly,
    /// quotient against each divisor, in divisor order
    quotients: Vec<NPoly>,
}

fn reduce_full(
    p: &NPoly,
    divisors: &[NPoly],
    ord: &MonomialOrder,
    budget: &Budget,
) -> Result<Reduction, EngineError> {
    let mut rem: Vec<(Exponents, BigRational)> = Vec::new();
    let mut cur = p.clone();
    let mut quotients: Vec<NPoly> = divisors.iter().map(|_| NPoly::zero()).collect();
    while !cur.is_zero() {
        if cur.len() > budget.max_terms {
            return Err(EngineError::TermBudget(cur.len()));
        }
        let (le, lc) = cur.leading().clone();
        let mut hit = None;
        for (k, d) in divisors.iter().enumerate() {
            if !d.is_zero() && divides(&d.leading().0, &le) {
                hit = Some(k);
                break;
            }
        }
        match hit {
            Some(k) => {
                let d = &divisors[k];
                let m = exp_sub(&le, &d.leading().0);
                let c = &lc / &d.leading().1;
                cur = cur.sub_scaled(&c, &m, d, ord);
                let qt = NPoly {
                    terms: vec![(m, c)],
                };
                quotients[k] = quotients[k].sub_scaled(&-BigRational::one(), &vec![0; le.len()], &qt, ord);
            }
            None => {
                rem.push((le.clone(), lc.clone()));
                // drop the leading term
                cur.terms.remove(0);
            }
        }
    }
    Ok(Reduction {
        remainder: NPoly { terms: rem },
        quotients,
    })
}

// ---------------------------------------------------------------------------
// Buchberger with the two classical criteria and the normal selection
// strategy (minimal lcm degree, ties broken lexicographically on the pair)

struct Item {
    p: NPoly,
    /// representation over the original generators, when tracking
    cof: Option<Vec<NPoly>>,
}

fn combine_cofs(
    a: &Option<Vec<NPoly>>,
    ca: &BigRational,
    ma: &[u32],
    b: &Option<Vec<NPoly>>,
    cb: &BigRational,
    mb: &[u32],
    ord: &MonomialOrder,
) -> Option<Vec<NPoly>> {
    match (a, b) {
        (Some(xa), Some(xb)) => {
            let mut out = Vec::with_capacity(xa.len());
            for (pa, pb) in xa.iter().zip(xb) {
                // ca * x^ma * pa - cb * x^mb * pb
                let t = NPoly::zero()
                    .sub_scaled(&-ca.clone(), ma, pa, ord)
                    .sub_scaled(cb, mb, pb, ord);
                out.push(t);
            }
            Some(out)
        }
        _ => None,
    }
}

fn buchberger(
    gens: &[NPoly],
    ord: &MonomialOrder,
    budget: &Budget,
    track: bool,
) -> Result<Vec<Item>, EngineError> {
    let mut items: Vec<Item> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        let cof = track.then(|| {
            let mut v: Vec<NPoly> = gens.iter().map(|_| NPoly::zero()).collect();
            v[i] = NPoly {
                terms: vec![(vec![0; g.leading().0.len()], BigRational::one())],
            };
            v
        });
        items.push(Item { p: g.clone(), cof });
    }
    if items.is_empty() {
        return Ok(items);
    }

    let mut pairs: BTreeSet<(u64, usize, usize)> = BTreeSet::new();
    let mut treated: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..items.len() {
        for j in (i + 1)..items.len() {
            let l = lcm(&items[i].p.leading().0, &items[j].p.leading().0);
            pairs.insert((total(&l), i, j));
        }
    }

    let mut processed = 0usize;
    while let Some(&(d, i, j)) = pairs.iter().next() {
        pairs.remove(&(d, i, j));
        treated.insert((i, j));
        processed += 1;
        if processed > budget.max_pairs {
            return Err(EngineError::PairBudget(processed));
        }

        let (li, lj) = (items[i].p.leading().0.clone(), items[j].p.leading().0.clone());
        let l = lcm(&li, &lj);
        // product criterion: coprime leading monomials never contribute
        if li.iter().zip(&lj).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        // chain criterion
        let chain = (0..items.len()).any(|k| {
            k != i
                && k != j
                && divides(&items[k].p.leading().0, &l)
                && treated.contains(&(i.min(k), i.max(k)))
                && treated.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }

        let (ci, cj) = (items[i].p.leading().1.clone(), items[j].p.leading().1.clone());
        let (mi, mj) = (exp_sub(&l, &li), exp_sub(&l, &lj));
        // s = (1/ci) x^mi p_i - (1/cj) x^mj p_j
        let inv_ci = BigRational::one() / &ci;
        let inv_cj = BigRational::one() / &cj;
        let s = NPoly::zero()
            .sub_scaled(&-inv_ci.clone(), &mi, &items[i].p, ord)
            .sub_scaled(&inv_cj, &mj, &items[j].p, ord);
        let scof = combine_cofs(
            &items[i].cof,
            &inv_ci,
            &mi,
            &items[j].cof,
            &inv_cj,
            &mj,
            ord,
        );

        let basis: Vec<NPoly> = items.iter().map(|it| it.p.clone()).collect();
        let red = reduce_full(&s, &basis, ord, budget)?;
        if red.remainder.is_zero() {
            continue;
        }
        let newcof = match scof {
            None => None,
            Some(sc) => {
                // remainder = s - sum_k q_k * basis_k
                let mut out = sc;
                for (k, q) in red.quotients.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    let kc = items[k].cof.as_ref().unwrap().clone();
                    for (g, dst) in kc.iter().zip(out.iter_mut()) {
                        for (m, c) in &q.terms {
                            *dst = dst.sub_scaled(c, m, g, ord);
                        }
                    }
                }
                Some(out)
            }
        };
        let new_idx = items.len();
        items.push(Item {
            p: red.remainder,
            cof: newcof,
        });
        for k in 0..new_idx {
            let l = lcm(&items[k].p.leading().0, &items[new_idx].p.leading().0);
            pairs.insert((total(&l), k, new_idx));
        }
    }
    Ok(items)
}

/// Minimalize + interreduce + normalize, keeping cofactors consistent.
fn reduce_basis(
    mut items: Vec<Item>,
    ord: &MonomialOrder,
    budget: &Budget,
) -> Result<Vec<Item>, EngineError> {
    items.sort_by(|a, b| ord.cmp(&a.p.leading().0, &b.p.leading().0));
    // minimal basis: drop elements whose LT is divisible by a kept one
    let mut kept: Vec<Item> = Vec::new();
    for it in items {
        if !kept
            .iter()
            .any(|k| divides(&k.p.leading().0, &it.p.leading().0))
        {
            kept.push(it);
        }
    }
    // interreduce tails
    let mut reduced: Vec<Item> = Vec::with_capacity(kept.len());
    for i in 0..kept.len() {
        let others: Vec<NPoly> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, it)| it.p.clone())
            .collect();
        let red = reduce_full(&kept[i].p, &others, ord, budget)?;
        let mut cof = kept[i].cof.clone();
        if let Some(ref mut cv) = cof {
            let mut oth = 0;
            for (j, item) in kept.iter().enumerate() {
                if j == i {
                    continue;
                }
                let q = &red.quotients[oth];
                oth += 1;
                if q.is_zero() {
                    continue;
                }
                let jc = item.cof.as_ref().unwrap();
                for (g, dst) in jc.iter().zip(cv.iter_mut()) {
                    for (m, c) in &q.terms {
                        *dst = dst.sub_scaled(c, m, g, ord);
                    }
                }
            }
        }
        reduced.push(Item {
            p: red.remainder,
            cof,
        });
    }
    // monic normalization
    for it in &mut reduced {
        if it.p.is_zero() {
            continue;
        }
        let inv = BigRational::one() / &it.p.leading().1;
        it.p.scale(&inv);
        if let Some(ref mut cv) = it.cof {
            for g in cv.iter_mut() {
                g.scale(&inv);
            }
        }
    }
    reduced.retain(|it| !it.p.is_zero());
    reduced.sort_by(|a, b| ord.cmp(&a.p.leading().0, &b.p.leading().0));
    Ok(reduced)
}

// ---------------------------------------------------------------------------

/// A reduced Gröbner basis together with its order, usable for normal forms.
#[derive(Debug)]
pub struct Basis {
    pub order: MonomialOrder,
    vars: Arc<VarTable>,
    polys: Vec<Poly>,
    internal: Vec<NPoly>,
    cofactors: Option<Vec<Vec<Poly>>>,
}

impl Basis {
    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// Cofactor rows over the original generators (tracked bases only).
    pub fn cofactors(&self) -> Option<&[Vec<Poly>]> {
        self.cofactors.as_deref()
    }

    pub fn contains_one(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].as_constant().is_some_and(|c| c.is_one())
    }

    pub fn reduce(&self, p: &Poly, budget: &Budget) -> Result<Poly, EngineError> {
        let np = NPoly::from_poly(p, &self.order);
        let red = reduce_full(&np, &self.internal, &self.order, budget)?;
        Ok(red.remainder.to_poly(&self.vars))
    }

    fn reduce_with_quotients(
        &self,
        p: &Poly,
        budget: &Budget,
    ) -> Result<(Poly, Vec<NPoly>), EngineError> {
        let np = NPoly::from_poly(p, &self.order);
        let red = reduce_full(&np, &self.internal, &self.order, budget)?;
        Ok((red.remainder.to_poly(&self.vars), red.quotients))
    }

    /// Leading exponent vectors of the basis.
    pub fn leading_exponents(&self) -> Vec<Exponents> {
        self.internal
            .iter()
            .map(|p| p.leading().0.clone())
            .collect()
    }

    /// Exhaustively check that every S-polynomial of basis pairs reduces
    /// to zero (the Buchberger postcondition).
    pub fn verify_postcondition(&self, budget: &Budget) -> Result<bool, EngineError> {
        for i in 0..self.internal.len() {
            for j in (i + 1)..self.internal.len() {
                let (li, ci) = self.internal[i].leading().clone();
                let (lj, cj) = self.internal[j].leading().clone();
                let l = lcm(&li, &lj);
                let inv_ci = BigRational::one() / &ci;
                let inv_cj = BigRational::one() / &cj;
                let s = NPoly::zero()
                    .sub_scaled(&-inv_ci, &exp_sub(&l, &li), &self.internal[i], &self.order)
                    .sub_scaled(&inv_cj, &exp_sub(&l, &lj), &self.internal[j], &self.order);
                let red = reduce_full(&s, &self.internal, &self.order, budget)?;
                if !red.remainder.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Finitely generated ideal with cached reduced bases.
///
/// The cache is shared between clones and safe for concurrent readers;
/// a basis is computed at most once per order.
#[derive(Debug, Clone)]
pub struct Ideal {
    vars: Arc<VarTable>,
    gens: Vec<Poly>,
    budget: Budget,
    cache: Arc<Mutex<BTreeMap<String, Arc<Basis>>>>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.gens == other.gens
    }
}

impl Ideal {
    pub fn new(vars: &Arc<VarTable>, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            vars: vars.clone(),
            gens,
            budget: thread_budget(),
            cache: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Ideal {
        self.budget = budget;
        self
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn default_order(&self) -> MonomialOrder {
        MonomialOrder::grevlex(self.vars.len())
    }

    /// Reduced Gröbner basis under `ord`, cached.
    pub fn groebner(&self, ord: &MonomialOrder) -> Result<Arc<Basis>, EngineError> {
        self.groebner_inner(ord, false)
    }

    /// Like [`groebner`](Self::groebner) but every basis element carries its
    /// representation over the generators.
    pub fn groebner_tracked(&self, ord: &MonomialOrder) -> Result<Arc<Basis>, EngineError> {
        self.groebner_inner(ord, true)
    }

    fn groebner_inner(&self, ord: &MonomialOrder, track: bool) -> Result<Arc<Basis>, EngineError> {
        let key = format!("{}|{}", if track { "t" } else { "p" }, ord.key());
        if let Some(b) = self.cache.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let gens: Vec<NPoly> = self
            .gens
            .iter()
            .map(|g| NPoly::from_poly(g, ord))
            .collect();
        let items = buchberger(&gens, ord, &self.budget, track)?;
        let items = reduce_basis(items, ord, &self.budget)?;
        let polys: Vec<Poly> = items.iter().map(|it| it.p.to_poly(&self.vars)).collect();
        let internal: Vec<NPoly> = items.iter().map(|it| it.p.clone()).collect();
        let cofactors = if track {
            Some(
                items
                    .iter()
                    .map(|it| {
                        it.cof
                            .as_ref()
                            .unwrap()
                            .iter()
                            .map(|c| c.to_poly(&self.vars))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            None
        };
        let basis = Arc::new(Basis {
            order: ord.clone(),
            vars: self.vars.clone(),
            polys,
            internal,
            cofactors,
        });
        self.cache.lock().unwrap().insert(key, basis.clone());
        Ok(basis)
    }

    /// All bases computed so far (for postcondition audits).
    pub fn cached_bases(&self) -> Vec<Arc<Basis>> {
        self.cache.lock().unwrap().values().cloned().collect()
    }

    pub fn normal_form(&self, p: &Poly, ord: &MonomialOrder) -> Result<Poly, EngineError> {
        self.groebner(ord)?.reduce(p, &self.budget)
    }

    pub fn nf(&self, p: &Poly) -> Result<Poly, EngineError> {
        self.normal_form(p, &self.default_order())
    }

    pub fn member(&self, p: &Poly) -> Result<bool, EngineError> {
        Ok(self.nf(p)?.is_zero())
    }

    pub fn contains_one(&self) -> Result<bool, EngineError> {
        Ok(self.groebner(&self.default_order())?.contains_one())
    }

    /// Cofactors expressing `p` over the generators, if `p` is a member.
    pub fn membership_certificate(&self, p: &Poly) -> Result<Option<Vec<Poly>>, EngineError> {
        let ord = self.default_order();
        let basis = self.groebner_tracked(&ord)?;
        let (rem, quotients) = basis.reduce_with_quotients(p, &self.budget)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        let cof = basis.cofactors().unwrap();
        let mut out: Vec<Poly> = self.gens.iter().map(|_| Poly::zero(&self.vars)).collect();
        for (k, q) in quotients.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let qp = q.to_poly(&self.vars);
            for (g, dst) in cof[k].iter().zip(out.iter_mut()) {
                *dst = dst.add(&qp.mul(g));
            }
        }
        Ok(Some(out))
    }

    /// Generators of the intersection with the subring omitting `drop`.
    pub fn elimination(&self, drop: &[&str]) -> Result<Ideal, EngineError> {
        let mut idx = Vec::new();
        for d in drop {
            idx.push(
                self.vars
                    .index_of(d)
                    .ok_or_else(|| PolyError::UnknownVariable(d.to_string()))?,
            );
        }
        if idx.is_empty() {
            return Ok(self.clone());
        }
        let ord = MonomialOrder::elimination(self.vars.len(), &idx);
        let basis = self.groebner(&ord)?;
        let keep: Vec<Poly> = basis
            .polys()
            .iter()
            .filter(|p| drop.iter().all(|d| !p.involves(d)))
            .cloned()
            .collect();
        Ok(Ideal::new(&self.vars, keep).with_budget(self.budget))
    }

    /// Saturation `I : f^inf` via the auxiliary-variable trick.
    pub fn saturation(&self, f: &Poly) -> Result<Ideal, EngineError> {
        assert!(!f.is_zero(), "saturation by zero");
        let w = self.vars.fresh_name("w_sat");
        let ext = self.vars.extend(&[(&w, false)])?;
        let mut gens: Vec<Poly> = self
            .gens
            .iter()
            .map(|g| g.lift(&ext))
            .collect::<Result<_, _>>()?;
        let fw = f.lift(&ext)?.mul(&Poly::var(&ext, &w)?);
        gens.push(Poly::one(&ext).sub(&fw));
        let big = Ideal::new(&ext, gens).with_budget(self.budget);
        let elim = big.elimination(&[&w])?;
        let back: Vec<Poly> = elim
            .gens()
            .iter()
            .map(|g| g.lift(&self.vars))
            .collect::<Result<_, _>>()?;
        Ok(Ideal::new(&self.vars, back).with_budget(self.budget))
    }

    /// Ideal intersection via the one-tag-variable elimination trick.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal, EngineError> {
        let w = self.vars.fresh_name("w_cap");
        let ext = self.vars.extend(&[(&w, false)])?;
        let wv = Poly::var(&ext, &w)?;
        let one_minus_w = Poly::one(&ext).sub(&wv);
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(g.lift(&ext)?.mul(&wv));
        }
        for g in other.gens() {
            gens.push(g.lift(&ext)?.mul(&one_minus_w));
        }
        let big = Ideal::new(&ext, gens).with_budget(self.budget);
        let elim = big.elimination(&[&w])?;
        let back: Vec<Poly> = elim
            .gens()
            .iter()
            .map(|g| g.lift(&self.vars))
            .collect::<Result<_, _>>()?;
        Ok(Ideal::new(&self.vars, back).with_budget(self.budget))
    }

    /// If `f` is a unit modulo the ideal, its inverse: `f*g = 1 mod I`.
    pub fn unit_inverse(&self, f: &Poly) -> Result<Option<Poly>, EngineError> {
        let w = self.vars.fresh_name("w_inv");
        let ext = self.vars.extend(&[(&w, false)])?;
        let wv = Poly::var(&ext, &w)?;
        let mut gens: Vec<Poly> = self
            .gens
            .iter()
            .map(|g| g.lift(&ext))
            .collect::<Result<_, _>>()?;
        gens.push(f.lift(&ext)?.mul(&wv).sub(&Poly::one(&ext)));
        let big = Ideal::new(&ext, gens).with_budget(self.budget);
        let widx = ext.index_of(&w).unwrap();
        let ord = MonomialOrder::elimination(ext.len(), &[widx]);
        let g = big.normal_form(&wv, &ord)?;
        if g.involves(&w) {
            return Ok(None);
        }
        let g = g.lift(&self.vars)?;
        // guard against saturation artifacts: verify f*g = 1 mod I itself
        let check = f.mul(&g).sub(&Poly::one(&self.vars));
        if self.nf(&check)?.is_zero() {
            Ok(Some(g))
        } else {
            Ok(None)
        }
    }

    pub fn is_unit(&self, f: &Poly) -> Result<bool, EngineError> {
        Ok(self.unit_inverse(f)?.is_some())
    }

    /// Radical membership via the Rabinowitsch trick.
    pub fn in_radical(&self, f: &Poly) -> Result<bool, EngineError> {
        let w = self.vars.fresh_name("w_rad");
        let ext = self.vars.extend(&[(&w, false)])?;
        let mut gens: Vec<Poly> = self
            .gens
            .iter()
            .map(|g| g.lift(&ext))
            .collect::<Result<_, _>>()?;
        gens.push(Poly::one(&ext).sub(&f.lift(&ext)?.mul(&Poly::var(&ext, &w)?)));
        Ideal::new(&ext, gens).with_budget(self.budget).contains_one()
    }

    pub fn equals(&self, other: &Ideal) -> Result<bool, EngineError> {
        for g in other.gens() {
            if !self.member(g)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.member(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// If `1 = a + b` with `a` in `self` and `b` in `other`, the pair.
    pub fn comaximal_with(&self, other: &Ideal) -> Result<Option<(Poly, Poly)>, EngineError> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens().iter().cloned());
        let sum = Ideal::new(&self.vars, gens).with_budget(self.budget);
        if !sum.contains_one()? {
            return Ok(None);
        }
        let cert = sum
            .membership_certificate(&Poly::one(&self.vars))?
            .expect("1 is a member of a unit ideal");
        let mut a = Poly::zero(&self.vars);
        let mut b = Poly::zero(&self.vars);
        for (k, (c, g)) in cert.iter().zip(sum.gens()).enumerate() {
            let part = c.mul(g);
            if k < self.gens.len() {
                a = a.add(&part);
            } else {
                b = b.add(&part);
            }
        }
        debug_assert!(a.add(&b).sub(&Poly::one(&self.vars)).is_zero());
        Ok(Some((a, b)))
    }
}
