//! The étale trivialization of the fixed point free action on `X_m` over
//! the chart where `v` is invertible.
//!
//! The section `(x, y) -> (x, y, 0, x^{-m})` flows to
//! `(x + ty, y, P(x,y,t), x^{-m})` where
//! `P(x,y,t) = sum_{k=1..m} C(m,k) (x^{-1} t)^k y^{k-1}`. The checks: the
//! comorphism is well defined (the identity
//! `(x+ty)^m x^{-m} - y P = 1`), it intertwines `d/dt` with the derivation
//! on `X_m`, `P` agrees with the exponential series of `u`, and the
//! Jacobian has full rank everywhere.

use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeMap;

use super::{binomial, build_xm};
use crate::derivation::{check_equivariant, Derivation};
use crate::ideal::Ideal;
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{maximal_minors, Morphism, Scheme};

/// `P(x,y,t)` over a ring containing `x_inv`, `y`, `t`.
pub fn phi_polynomial(m: u32, scheme: &Scheme) -> Result<Poly, CheckError> {
    let vars = scheme.vars();
    let xi = Poly::var(vars, "x_inv")?;
    let y = Poly::var(vars, "y")?;
    let t = Poly::var(vars, "t")?;
    let mut p = Poly::zero(vars);
    for k in 1..=m {
        let term = xi
            .pow(k)
            .mul(&t.pow(k))
            .mul(&y.pow(k - 1))
            .scale(&binomial(m, k));
        p = p.add(&term);
    }
    Ok(p)
}

pub fn phi_trivialization(m: u32) -> Report {
    Checker::run(&format!("phi_trivialization(m={m})"), |c| {
        let xm = build_xm(m)?;
        let target = xm.scheme.localize("v")?;
        // source: the cover chart times the flow time, k[x^{pm}, y, t]
        let source = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )?;
        let p = phi_polynomial(m, &source)?;
        c.witness("P", p.to_string());

        // cross-check P against the exponential series of u along the
        // section u = 0, v = x^{-m}
        let series = exp_series_of_u(&xm.nu, &source, m)?;
        let diff = source.nf(&p.sub(&series))?;
        c.require("P equals the exponential series of u", diff.is_zero(), || {
            diff.to_string()
        });

        // well-definedness certifies (x+ty)^m x^{-m} - y P - 1 = 0
        let images = [
            ("x", source.parse("x + t*y")?),
            ("y", source.parse("y")?),
            ("u", p.clone()),
            ("v", source.parse("x_inv")?.pow(m)),
        ];
        let phi = match Morphism::new(&source, &target, &images) {
            Ok(phi) => phi,
            Err(e) => {
                if matches!(&e, crate::scheme::SchemeError::Engine(en) if en.is_budget()) {
                    return Err(e.into());
                }
                c.require("comorphism well defined", false, || e.to_string());
                return Ok(());
            }
        };

        // equivariance: translation on t matches the derivation upstairs
        let d_src = Derivation::new(
            &source,
            &[
                ("x", Poly::zero(source.vars())),
                ("y", Poly::zero(source.vars())),
                ("t", Poly::one(source.vars())),
            ],
        )?;
        let tv = target.vars();
        let d_tgt = Derivation::new(
            &target,
            &[
                ("x", Poly::var(tv, "y")?),
                ("y", Poly::zero(tv)),
                (
                    "u",
                    Poly::int(tv, m as i64)
                        .mul(&Poly::var(tv, "x")?.pow(m - 1))
                        .mul(&Poly::var(tv, "v")?),
                ),
                ("v", Poly::zero(tv)),
            ],
        )?;
        let eq = check_equivariant(&phi, &d_src, &d_tgt)?;
        c.require("equivariant for translations", eq.ok, || {
            format!("{:?}", eq.witness)
        });

        // Jacobian of the four images by (x, y, t) has rank 3 everywhere:
        // 1 lies in the ideal of 3x3 minors plus the chart relations
        let rows = ["x", "y", "u", "v"];
        let cols = ["x", "y", "t"];
        // transposed: one row per source variable, so maximal minors pick
        // three of the four image columns
        let mut jac_t: Vec<Vec<Poly>> = Vec::new();
        for col in cols {
            let mut row = Vec::new();
            for var in rows {
                let img = phi.image_of(var).expect("image");
                row.push(source.laurent_partial(img, col)?);
            }
            jac_t.push(row);
        }
        let minors = maximal_minors(&jac_t, source.vars());
        let mut gens = source.ideal().gens().to_vec();
        gens.extend(minors);
        let rank_ideal = Ideal::new(source.vars(), gens).with_budget(*source.budget());
        let full_rank = rank_ideal.contains_one()?;
        c.require("Jacobian has rank 3 at every point", full_rank, || {
            "1 is not in the minor ideal".into()
        });
        if full_rank {
            if let Some(cert) = rank_ideal.membership_certificate(&Poly::one(source.vars()))? {
                let nonzero = cert.iter().filter(|p| !p.is_zero()).count();
                c.witness("rank certificate cofactors", nonzero.to_string());
            }
        }
        Ok(())
    })
}

/// `sum_{k>=1} nu^k(u)/k! t^k` pushed along `u = 0`, `v = x^{-m}`.
fn exp_series_of_u(nu: &Derivation, source: &Scheme, m: u32) -> Result<Poly, CheckError> {
    let xvars = nu.scheme().vars();
    let mut sub: BTreeMap<String, Poly> = BTreeMap::new();
    sub.insert("x".into(), source.parse("x")?);
    sub.insert("y".into(), source.parse("y")?);
    sub.insert("u".into(), Poly::zero(source.vars()));
    sub.insert("v".into(), Poly::var(source.vars(), "x_inv")?.pow(m));
    let t = Poly::var(source.vars(), "t")?;
    let mut acc = Poly::zero(source.vars());
    let mut cur = Poly::var(xvars, "u")?;
    let mut fact = BigRational::one();
    let mut k: u32 = 0;
    loop {
        cur = nu.apply_raw(&cur)?;
        if cur.is_zero() {
            break;
        }
        k += 1;
        fact *= BigRational::from_integer(k.into());
        let coeff = BigRational::one() / &fact;
        let pushed = cur.substitute(&sub)?;
        acc = acc.add(&pushed.scale(&coeff).mul(&t.pow(k)));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_for_small_m() {
        let s = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )
        .unwrap();
        assert_eq!(phi_polynomial(1, &s).unwrap(), s.parse("x_inv*t").unwrap());
        assert_eq!(
            phi_polynomial(2, &s).unwrap(),
            s.parse("2*x_inv*t + x_inv^2*t^2*y").unwrap()
        );
    }

    #[test]
    fn trivialization_passes_for_m_1_to_3() {
        for m in 1..=3 {
            let r = phi_trivialization(m);
            assert!(r.passed(), "m={m}: {r:?}");
        }
    }

    #[test]
    fn dp_dt_at_y_zero_is_m_over_x() {
        // dP/dt(x, 0, t) = m x^{-1}
        for m in 1..=4u32 {
            let s = Scheme::new(
                &[("x", false), ("y", false), ("t", false)],
                &["x"],
                None,
                &[],
            )
            .unwrap();
            let p = phi_polynomial(m, &s).unwrap();
            let dp = p.partial("t").unwrap();
            let mut at_y0 = BTreeMap::new();
            at_y0.insert("y".to_string(), Poly::zero(s.vars()));
            let v = dp.substitute(&at_y0).unwrap();
            let expect = Poly::var(s.vars(), "x_inv")
                .unwrap()
                .scale(&num_rational::BigRational::from_integer((m as i64).into()));
            assert!(s.is_zero_mod(&v.sub(&expect)).unwrap(), "m={m}: {v}");
        }
    }

    #[test]
    fn projection_after_phi_hits_the_invariant_chart() {
        // pr_{y,v} composed with the trivialization is (x, y, t) -> (y, x^{-m})
        let m = 2u32;
        let xm = build_xm(m).unwrap();
        let target = xm.scheme.localize("v").unwrap();
        let source = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )
        .unwrap();
        let p = phi_polynomial(m, &source).unwrap();
        let phi = Morphism::new(
            &source,
            &target,
            &[
                ("x", source.parse("x + t*y").unwrap()),
                ("y", source.parse("y").unwrap()),
                ("u", p),
                ("v", source.parse("x_inv^2").unwrap()),
            ],
        )
        .unwrap();
        let base = Scheme::new(&[("y", false), ("v", false)], &["v"], None, &[]).unwrap();
        let pr = Morphism::new(
            &target,
            &base,
            &[
                ("y", Poly::var(target.vars(), "y").unwrap()),
                ("v", Poly::var(target.vars(), "v").unwrap()),
            ],
        )
        .unwrap();
        let composed = Morphism::compose(&pr, &phi).unwrap();
        assert_eq!(
            composed.image_of("y").unwrap(),
            &source.parse("y").unwrap()
        );
        assert_eq!(
            composed.image_of("v").unwrap(),
            &source.parse("x_inv^2").unwrap()
        );
    }

    #[test]
    fn equivariance_composes() {
        // shifting the flow time is equivariant for translations, and the
        // composite with the trivialization stays equivariant
        let m = 2u32;
        let xm = build_xm(m).unwrap();
        let target = xm.scheme.localize("v").unwrap();
        let source = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )
        .unwrap();
        let p = phi_polynomial(m, &source).unwrap();
        let phi = Morphism::new(
            &source,
            &target,
            &[
                ("x", source.parse("x + t*y").unwrap()),
                ("y", source.parse("y").unwrap()),
                ("u", p),
                ("v", source.parse("x_inv^2").unwrap()),
            ],
        )
        .unwrap();
        let shift = Morphism::new(
            &source,
            &source,
            &[
                ("x", source.parse("x").unwrap()),
                ("y", source.parse("y").unwrap()),
                ("t", source.parse("t + 1").unwrap()),
            ],
        )
        .unwrap();
        let dt = Derivation::new(
            &source,
            &[
                ("x", Poly::zero(source.vars())),
                ("y", Poly::zero(source.vars())),
                ("t", Poly::one(source.vars())),
            ],
        )
        .unwrap();
        let tv = target.vars();
        let nu = Derivation::new(
            &target,
            &[
                ("x", Poly::var(tv, "y").unwrap()),
                ("y", Poly::zero(tv)),
                (
                    "u",
                    Poly::int(tv, 2)
                        .mul(&Poly::var(tv, "x").unwrap())
                        .mul(&Poly::var(tv, "v").unwrap()),
                ),
                ("v", Poly::zero(tv)),
            ],
        )
        .unwrap();
        assert!(check_equivariant(&shift, &dt, &dt).unwrap().ok);
        assert!(check_equivariant(&phi, &dt, &nu).unwrap().ok);
        let composed = Morphism::compose(&phi, &shift).unwrap();
        assert!(check_equivariant(&composed, &dt, &nu).unwrap().ok);
    }
}
