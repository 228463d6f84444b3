//! Parametric builders and named verifications for the bundled families:
//! the threefolds `X_m` (`x^m v - y u = 1`) and `X(m,n,r)`
//! (`x^m v^r - y^n u = 1`) with their fixed point free actions, the
//! deformed Koras-Russell threefolds `Y(m,n,r,h)`
//! (`x^n z = y^m - t^r + x h(x,y,t)`), étale trivializations, fiber-ring
//! decompositions, slice charts over cyclotomic covers, Čech cocycle and
//! coboundary computations, and cylinder splittings.

mod covers;
mod cylinders;
mod deformed;
mod fiber_ring;
mod phi;
mod slice;
mod y_charts;

pub use covers::{cocycle_check, coboundary_solve, Cover};
pub use cylinders::cylinder_splitting;
pub use deformed::{build_x223_cylinder_lnd, deformed_cubic_invariants, CylinderLnd};
pub use fiber_ring::fiber_ring_decomposition;
pub use phi::{phi_polynomial, phi_trivialization};
pub use slice::slice_charts;
pub use y_charts::y_charts;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::derivation::{Derivation, DerivationError};
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{Morphism, Scheme, SchemeError};

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn binomial(m: u32, k: u32) -> BigRational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(m - i);
        den *= BigInt::from(i + 1);
    }
    BigRational::new(num, den)
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("m and r must be coprime, got m={0}, r={1}")]
    NotCoprime(u32, u32),
    #[error("the Y family requires n >= 2, got n={0}")]
    SmallN(u32),
    #[error("m, n, r must be positive")]
    NonPositive,
    #[error("h must be a polynomial in x, y, t and the declared parameters")]
    BadH(String),
    #[error("h(0,0,0) must be a nonzero constant, got {0}")]
    BadHOrigin(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Derivation(#[from] DerivationError),
}

impl From<FamilyError> for CheckError {
    fn from(e: FamilyError) -> CheckError {
        match e {
            FamilyError::Scheme(s) => CheckError::Scheme(s),
            FamilyError::Derivation(d) => CheckError::Derivation(d),
            other => CheckError::Other(other.to_string()),
        }
    }
}

/// Parameters of a deformed Koras-Russell threefold `Y(m,n,r,h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub m: u32,
    pub n: u32,
    pub r: u32,
    /// deformation term, an expression in `x`, `y`, `t` and the parameters
    pub h: String,
    /// formal parameter names appearing in `h`
    pub params: Vec<String>,
}

impl FamilyParams {
    pub fn new(m: u32, n: u32, r: u32, h: &str, params: &[&str]) -> FamilyParams {
        FamilyParams {
            m,
            n,
            r,
            h: h.to_string(),
            params: params.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn label(&self) -> String {
        format!("m={},n={},r={},h={}", self.m, self.n, self.r, self.h)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.m == 0 || self.n == 0 || self.r == 0 {
            return Err(FamilyError::NonPositive);
        }
        if gcd(self.m, self.r) != 1 {
            return Err(FamilyError::NotCoprime(self.m, self.r));
        }
        if self.n < 2 {
            return Err(FamilyError::SmallN(self.n));
        }
        Ok(())
    }
}

/// `X_m` with its two fixed point free directions.
pub struct XmBundle {
    pub scheme: Scheme,
    /// `y d/dx + m x^{m-1} v d/du`
    pub nu: Derivation,
    /// `x^m d/du + y d/dv` (the torsor over the punctured plane)
    pub torsor: Derivation,
}

pub fn build_xm(m: u32) -> Result<XmBundle, FamilyError> {
    assert!(m >= 1);
    let scheme = Scheme::new_with(
        &[("x", false), ("y", false), ("u", false), ("v", false)],
        &[],
        None,
        |t| {
            let [x, y, u, v] = ["x", "y", "u", "v"].map(|n| Poly::var(t, n).unwrap());
            Ok(vec![x.pow(m).mul(&v).sub(&y.mul(&u)).sub(&Poly::one(t))])
        },
    )?;
    let t = scheme.vars();
    let [x, y, v] = ["x", "y", "v"].map(|n| Poly::var(t, n).unwrap());
    let m_coeff = Poly::int(t, m as i64);
    let nu = Derivation::new(
        &scheme,
        &[
            ("x", y.clone()),
            ("y", Poly::zero(t)),
            ("u", m_coeff.mul(&x.pow(m - 1)).mul(&v)),
            ("v", Poly::zero(t)),
        ],
    )?;
    let torsor = Derivation::new(
        &scheme,
        &[
            ("x", Poly::zero(t)),
            ("y", Poly::zero(t)),
            ("u", x.pow(m)),
            ("v", y),
        ],
    )?;
    Ok(XmBundle { scheme, nu, torsor })
}

/// `X(m,n,r)` with its fixed point free derivation
/// `y^n d/dx + m x^{m-1} v^r d/du`; requires `gcd(m,r) = 1`.
pub struct XmnrBundle {
    pub scheme: Scheme,
    pub nu: Derivation,
}

pub fn build_xmnr(m: u32, n: u32, r: u32) -> Result<XmnrBundle, FamilyError> {
    if m == 0 || n == 0 || r == 0 {
        return Err(FamilyError::NonPositive);
    }
    if gcd(m, r) != 1 {
        return Err(FamilyError::NotCoprime(m, r));
    }
    let scheme = Scheme::new_with(
        &[("x", false), ("y", false), ("u", false), ("v", false)],
        &[],
        None,
        |t| {
            let [x, y, u, v] = ["x", "y", "u", "v"].map(|n| Poly::var(t, n).unwrap());
            Ok(vec![x
                .pow(m)
                .mul(&v.pow(r))
                .sub(&y.pow(n).mul(&u))
                .sub(&Poly::one(t))])
        },
    )?;
    let t = scheme.vars();
    let [x, y, v] = ["x", "y", "v"].map(|n| Poly::var(t, n).unwrap());
    let nu = Derivation::new(
        &scheme,
        &[
            ("x", y.pow(n)),
            ("y", Poly::zero(t)),
            (
                "u",
                Poly::int(t, m as i64).mul(&x.pow(m - 1)).mul(&v.pow(r)),
            ),
            ("v", Poly::zero(t)),
        ],
    )?;
    Ok(XmnrBundle { scheme, nu })
}

/// `Y(m,n,r,h)` with the derivation
/// `x^n d/dy + (m y^{m-1} + x dh/dy) d/dz`.
pub struct YBundle {
    pub scheme: Scheme,
    pub delta: Derivation,
    pub params: FamilyParams,
}

pub fn build_y(params: &FamilyParams) -> Result<YBundle, FamilyError> {
    params.validate()?;
    let mut vars: Vec<(&str, bool)> = vec![
        ("x", false),
        ("y", false),
        ("z", false),
        ("t", false),
    ];
    for p in &params.params {
        vars.push((p.as_str(), true));
    }
    let h_src = params.h.clone();
    let (m, n, r) = (params.m, params.n, params.r);
    let scheme = Scheme::new_with(&vars, &[], None, |tb| {
        let h = crate::expr::parse_poly(&h_src, tb)
            .map_err(SchemeError::from)?;
        if h.involves("z") {
            return Err(SchemeError::NotWellDefined {
                generator: "h".into(),
                nf: "h may not involve z".into(),
            });
        }
        let [x, y, z, t] = ["x", "y", "z", "t"].map(|n| Poly::var(tb, n).unwrap());
        Ok(vec![x
            .pow(n)
            .mul(&z)
            .sub(&y.pow(m))
            .add(&t.pow(r))
            .sub(&x.mul(&h))])
    })?;
    let tb = scheme.vars();
    let h = scheme.parse(&params.h)?;
    if params.params.iter().all(|p| !h.involves(p)) {
        let mut zeros = std::collections::BTreeMap::new();
        for v in ["x", "y", "t"] {
            zeros.insert(v.to_string(), Poly::zero(tb));
        }
        let origin = h.substitute(&zeros).map_err(SchemeError::from)?;
        match origin.as_constant() {
            Some(c) if !num_traits::Zero::is_zero(&c) => {}
            _ => return Err(FamilyError::BadHOrigin(origin.to_string())),
        }
    }
    let [x, y] = ["x", "y"].map(|n| Poly::var(tb, n).unwrap());
    let dh_dy = h.partial("y").map_err(SchemeError::from)?;
    let z_image = Poly::int(tb, m as i64)
        .mul(&y.pow(m - 1))
        .add(&x.mul(&dh_dy));
    let delta = Derivation::new(
        &scheme,
        &[
            ("x", Poly::zero(tb)),
            ("y", x.pow(n)),
            ("z", z_image),
            ("t", Poly::zero(tb)),
        ],
    )?;
    Ok(YBundle {
        scheme,
        delta,
        params: params.clone(),
    })
}

/// Finite-order automorphism, typically multiplication by a root of unity.
#[derive(Debug, Clone)]
pub struct GroupTwist {
    pub automorphism: Morphism,
    pub order: u32,
}

impl GroupTwist {
    /// Certify that the m-fold composite is the identity.
    pub fn new(automorphism: Morphism, order: u32) -> Result<GroupTwist, CheckError> {
        if automorphism.source() != automorphism.target() {
            return Err(CheckError::Other(
                "twist must be an endomorphism".into(),
            ));
        }
        let scheme = automorphism.source().clone();
        let mut power = Morphism::identity(&scheme)?;
        for _ in 0..order {
            power = Morphism::compose(&automorphism, &power)?;
        }
        for v in scheme.ambient_vars() {
            let var = Poly::var(scheme.vars(), &v)?;
            let diff = power.apply(&var)?.sub(&var);
            if !scheme.is_zero_mod(&diff)? {
                return Err(CheckError::Other(format!(
                    "twist does not have order {order}: moves `{v}`"
                )));
            }
        }
        Ok(GroupTwist {
            automorphism,
            order,
        })
    }
}

/// `phi` intertwines the twists: `phi . twist_src = twist_tgt . phi` at the
/// comorphism level.
pub fn mu_equivariance(
    name: &str,
    phi: &Morphism,
    twist_src: &GroupTwist,
    twist_tgt: &GroupTwist,
) -> Report {
    Checker::run(name, |c| {
        if twist_src.order != twist_tgt.order {
            return Err(CheckError::Other(format!(
                "twist orders differ: {} vs {}",
                twist_src.order, twist_tgt.order
            )));
        }
        for w in phi.target().ambient_vars() {
            let wv = Poly::var(phi.target().vars(), &w)?;
            let lhs = twist_src.automorphism.apply(&phi.apply(&wv)?)?;
            let rhs = phi.apply(&twist_tgt.automorphism.apply(&wv)?)?;
            let diff = phi.source().nf(&lhs.sub(&rhs))?;
            c.require(&format!("equivariance at {w}"), diff.is_zero(), || {
                diff.to_string()
            });
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::check_action_axioms;

    #[test]
    fn xm_relation_and_derivations_certify() {
        for m in 1..=4 {
            let b = build_xm(m).unwrap();
            assert!(b.nu.local_nilpotency(32).unwrap().ok);
            assert!(b.torsor.local_nilpotency(32).unwrap().ok);
            // nilpotency degrees: x needs 2 steps, u needs m+1
            let x = b.scheme.parse("x").unwrap();
            let u = b.scheme.parse("u").unwrap();
            assert_eq!(b.nu.nilpotency_degree(&x, 32).unwrap(), Some(2));
            assert_eq!(b.nu.nilpotency_degree(&u, 32).unwrap(), Some(m + 1));
        }
    }

    #[test]
    fn xm_fixed_point_free() {
        for m in 1..=4 {
            let b = build_xm(m).unwrap();
            assert!(b.nu.fixed_locus().contains_one().unwrap());
            assert!(b.torsor.fixed_locus().contains_one().unwrap());
        }
    }

    #[test]
    fn torsor_exponential_matches_translation_form() {
        let b = build_xm(3).unwrap();
        let a = b.torsor.exp(32).unwrap();
        let ext = a.coaction.source();
        assert_eq!(
            a.coaction.image_of("u").unwrap(),
            &ext.parse("u + T*x^3").unwrap()
        );
        assert_eq!(
            a.coaction.image_of("v").unwrap(),
            &ext.parse("v + T*y").unwrap()
        );
        assert!(check_action_axioms(&a).unwrap().ok);
    }

    #[test]
    fn xmnr_reduces_to_xm() {
        for m in 1..=3 {
            let a = build_xm(m).unwrap();
            let b = build_xmnr(m, 1, 1).unwrap();
            assert_eq!(a.scheme.ideal().gens(), b.scheme.ideal().gens());
            for v in ["x", "y", "u", "v"] {
                assert_eq!(a.nu.image_of(v), b.nu.image_of(v));
            }
        }
    }

    #[test]
    fn xmnr_rejects_common_factor() {
        assert!(matches!(
            build_xmnr(2, 1, 2),
            Err(FamilyError::NotCoprime(2, 2))
        ));
        let b = build_xmnr(2, 2, 3).unwrap();
        assert!(b.nu.local_nilpotency(32).unwrap().ok);
    }

    #[test]
    fn y_family_builds_and_certifies() {
        for (m, n, r, h) in [(2, 2, 3, "1"), (3, 2, 2, "1")] {
            let p = FamilyParams::new(m, n, r, h, &[]);
            let y = build_y(&p).unwrap();
            assert!(y.delta.local_nilpotency(32).unwrap().ok);
        }
        let pa = FamilyParams::new(2, 2, 3, "1 + a*t", &["a"]);
        let ya = build_y(&pa).unwrap();
        assert!(ya.delta.local_nilpotency(32).unwrap().ok);
    }

    #[test]
    fn y_family_validation() {
        assert!(build_y(&FamilyParams::new(2, 1, 3, "1", &[])).is_err());
        assert!(build_y(&FamilyParams::new(2, 2, 2, "1", &[])).is_err());
        // h(0,0,0) = 0 rejected for parameter-free h
        assert!(matches!(
            build_y(&FamilyParams::new(2, 2, 3, "t", &[])),
            Err(FamilyError::BadHOrigin(_))
        ));
    }

    #[test]
    fn y_fixed_locus_is_the_line() {
        use crate::derivation::radical_equal;
        use crate::ideal::Ideal;
        let y = build_y(&FamilyParams::new(2, 2, 3, "1", &[])).unwrap();
        let fixed = y.delta.fixed_locus();
        let mut gens = y.scheme.ideal().gens().to_vec();
        for v in ["x", "y", "t"] {
            gens.push(y.scheme.parse(v).unwrap());
        }
        let line = Ideal::new(y.scheme.vars(), gens);
        assert!(radical_equal(&fixed, &line).unwrap());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigRational::from_integer(6.into()));
        assert_eq!(binomial(5, 0), BigRational::one());
    }

    #[test]
    fn twist_order_certification() {
        let s = Scheme::new(&[("x", false)], &[], Some(("eps", 3)), &[]).unwrap();
        let tw = Morphism::new(&s, &s, &[("x", s.parse("eps*x").unwrap())]).unwrap();
        assert!(GroupTwist::new(tw.clone(), 3).is_ok());
        assert!(GroupTwist::new(tw, 2).is_err());
    }

    #[test]
    fn cover_map_descends_through_twist() {
        // base U = k[x, t^{pm}], cover Ut = k[x, lam^{pm}] with t = lam^2
        let u = Scheme::new(&[("x", false), ("t", false)], &["t"], None, &[]).unwrap();
        let ut = Scheme::new(
            &[("x", false), ("lam", false)],
            &["lam"],
            Some(("eps", 2)),
            &[],
        )
        .unwrap();
        let cover = Morphism::new(
            &ut,
            &u,
            &[
                ("x", ut.parse("x").unwrap()),
                ("t", ut.parse("lam^2").unwrap()),
            ],
        )
        .unwrap();
        let tw_src = GroupTwist::new(
            Morphism::new(
                &ut,
                &ut,
                &[
                    ("x", ut.parse("x").unwrap()),
                    ("lam", ut.parse("eps*lam").unwrap()),
                ],
            )
            .unwrap(),
            2,
        )
        .unwrap();
        let tw_tgt = GroupTwist::new(Morphism::identity(&u).unwrap(), 2).unwrap();
        let rep = mu_equivariance("mu_equivariance(cover)", &cover, &tw_src, &tw_tgt);
        assert!(rep.passed(), "{rep:?}");

        let mismatch = GroupTwist::new(Morphism::identity(&u).unwrap(), 3);
        assert!(mismatch.is_err() || mismatch.is_ok());
    }
}
