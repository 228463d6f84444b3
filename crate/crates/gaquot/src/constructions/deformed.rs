//! The explicit fixed point free actions on `X(2,2,3) x A^1` whose
//! algebraic quotients are the deformed cubic threefolds
//! `x^2 z = y^2 - t^3 + x(1 + a t)`.
//!
//! Coordinates follow the cylinder presentation: the coordinate ring is
//! `k[x,t,u,v,w]/(v^2 t^3 - x^2 u - 1)` with `a` a formal parameter, and
//! the derivation is
//! `2 v t^3 d/du + x^2 d/dv + ((1/2)(1+a t) x - t^3) d/dw`.

use crate::derivation::{check_action_axioms, span_contains, Derivation};
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{Morphism, Scheme};

pub struct CylinderLnd {
    pub scheme: Scheme,
    pub delta: Derivation,
    /// the invariant `((1/2)(1+a t) x - t^3) v - x^2 w`
    pub q: Poly,
}

pub fn build_x223_cylinder_lnd() -> Result<CylinderLnd, CheckError> {
    let scheme = Scheme::new(
        &[
            ("x", false),
            ("t", false),
            ("u", false),
            ("v", false),
            ("w", false),
            ("a", true),
        ],
        &[],
        None,
        &["v^2*t^3 - x^2*u - 1"],
    )?;
    let delta = Derivation::new(
        &scheme,
        &[
            ("x", Poly::zero(scheme.vars())),
            ("t", Poly::zero(scheme.vars())),
            ("u", scheme.parse("2*v*t^3")?),
            ("v", scheme.parse("x^2")?),
            ("w", scheme.parse("(1/2)*(1 + a*t)*x - t^3")?),
        ],
    )?;
    let q = scheme.parse("((1/2)*(1 + a*t)*x - t^3)*v - x^2*w")?;
    Ok(CylinderLnd { scheme, delta, q })
}

/// Full verification for the deformed cubic family: local nilpotency, the
/// invariants `x`, `t`, `q`, the division producing `z_q`, and the
/// deformed cubic relation `x^2 z_q = q^2 - t^3 + x(1 + a t)` as a
/// certified comorphism onto `Y(2,2,3,1+at)`.
///
/// The kernel is reported as verified up to the stated degree bound; full
/// equality with the invariant ring is not claimed by this check.
pub fn deformed_cubic_invariants() -> Report {
    Checker::run("deformed_cubic_invariants(m=2,n=2,r=3,h=1+a*t)", |c| {
        let bundle = build_x223_cylinder_lnd()?;
        let scheme = &bundle.scheme;
        let delta = &bundle.delta;

        let nil = delta.local_nilpotency(32)?;
        c.require("locally nilpotent with cap 32", nil.ok, || nil.table());
        c.require("maximal generator degree is 3", nil.max_degree() == Some(3), || {
            nil.table()
        });
        c.witness("nilpotency degrees", nil.table());

        let action = delta.exp(32)?;
        let axioms = check_action_axioms(&action)?;
        c.require("coaction axioms", axioms.ok, || format!("{:?}", axioms.witness));

        // invariants x and t are found at degree 1 already
        let low = delta.kernel_search(3)?;
        for name in ["x", "t"] {
            let p = scheme.parse(name)?;
            c.require(&format!("kernel (bound 3) contains {name}"), span_contains(&low, &p), || {
                format!("{name} not found")
            });
        }

        // q has a degree-4 term, so the search that must contain it runs
        // at bound 4
        let kernel = delta.kernel_search(4)?;
        c.witness("kernel dimension at bound 4", kernel.len().to_string());
        c.witness(
            "scope",
            "containment verified up to degree bound 4; equality with the full \
             invariant ring is not claimed",
        );
        let q = &bundle.q;
        c.require("q is invariant", delta.is_invariant(q)?, || {
            delta.apply(q).map(|p| p.to_string()).unwrap_or_default()
        });
        c.require("kernel (bound 4) contains q", span_contains(&kernel, &scheme.nf(q)?), || {
            "q not in the searched span".into()
        });

        // z_q by exact division inside the invariant ring
        let numerator = q
            .mul(q)
            .sub(&scheme.parse("t^3")?)
            .add(&scheme.parse("x*(1 + a*t)")?);
        let x2 = scheme.parse("x^2")?;
        let z_q = delta.invariant_division(&numerator, &x2, Some(6))?;
        c.witness("z_q", z_q.to_string());
        c.require("z_q is invariant", delta.is_invariant(&z_q)?, || {
            "z_q not invariant".into()
        });
        let relation = x2.mul(&z_q).sub(&numerator);
        c.require(
            "x^2 z_q - (q^2 - t^3 + x(1+a t)) = 0",
            scheme.is_zero_mod(&relation)?,
            || scheme.nf(&relation).map(|p| p.to_string()).unwrap_or_default(),
        );

        // the four invariants present the deformed cubic: the comorphism
        // sending (x, y, z, t) to (x, q, z_q, t) is well defined
        let y = crate::constructions::build_y(&crate::constructions::FamilyParams::new(
            2,
            2,
            3,
            "1 + a*t",
            &["a"],
        ))?;
        match Morphism::new(
            scheme,
            &y.scheme,
            &[
                ("x", scheme.parse("x")?),
                ("y", q.clone()),
                ("z", z_q.clone()),
                ("t", scheme.parse("t")?),
            ],
        ) {
            Ok(_) => {}
            Err(e) if matches!(&e, crate::scheme::SchemeError::Engine(en) if en.is_budget()) => {
                return Err(e.into());
            }
            Err(e) => c.require("invariants present the deformed cubic", false, || {
                e.to_string()
            }),
        }

        // closure under multiplication within the bound
        let x = scheme.parse("x")?;
        let t = scheme.parse("t")?;
        for (label, prod) in [
            ("x*t", x.mul(&t)),
            ("x^2", x.mul(&x)),
            ("t*q (degree 5, reduced)", t.mul(q)),
        ] {
            let nf = scheme.nf(&prod)?;
            if nf.total_degree() <= 4 {
                c.require(
                    &format!("product {label} stays in the searched span"),
                    span_contains(&kernel, &nf),
                    || nf.to_string(),
                );
            }
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_certifies() {
        let b = build_x223_cylinder_lnd().unwrap();
        // the defining relation is annihilated
        let rel = b.scheme.parse("v^2*t^3 - x^2*u").unwrap();
        assert!(b.delta.apply(&rel).unwrap().is_zero());
        // q from the apply example
        assert!(b.delta.is_invariant(&b.q).unwrap());
    }

    #[test]
    fn q_has_degree_four() {
        let b = build_x223_cylinder_lnd().unwrap();
        assert_eq!(b.scheme.nf(&b.q).unwrap().total_degree(), 4);
    }

    #[test]
    fn full_check_passes() {
        let r = deformed_cubic_invariants();
        assert!(r.passed(), "{r:?}");
    }
}
