//! Chart analysis of the fixed point free action on a punctured deformed
//! Koras-Russell threefold over the cyclotomic cover `t = lam^m`.
//!
//! The pullback is `x^n z = y^m - lam^{mr} + x h(x, y, lam^m)`. Over
//! `x = 0` the fiber splits into `m` invariant surfaces
//! `y = (eps^i lam)^r`; on each, the induced derivation is the unit
//! multiple `m (eps^i lam)^{r(m-1)} d/dz` of a translation, and the cyclic
//! twist `lam -> eps lam` permutes the surfaces transitively.

use std::collections::BTreeMap;

use super::{FamilyParams, GroupTwist};
use crate::derivation::{check_equivariant, Derivation};
use crate::ideal::Ideal;
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{Morphism, Scheme};

pub fn y_charts(params: &FamilyParams) -> Report {
    Checker::run(&format!("y_charts({})", params.label()), |c| {
        params.validate().map_err(CheckError::from)?;
        let (m, n, r) = (params.m, params.n, params.r);
        let mut vars: Vec<(&str, bool)> = vec![
            ("x", false),
            ("y", false),
            ("z", false),
            ("lam", false),
        ];
        for p in &params.params {
            vars.push((p.as_str(), true));
        }
        let h_src = params.h.clone();
        let param_names = params.params.clone();
        let total = Scheme::new_with(&vars, &["lam"], Some(("eps", m)), |tb| {
            // h is given in x, y, t; parse it over a scratch table and
            // push t -> lam^m into the chart ring
            let mut flags: Vec<(&str, bool)> = vec![("x", false), ("y", false), ("t", false)];
            for nm in &param_names {
                flags.push((nm.as_str(), true));
            }
            let htab = crate::poly::VarTable::with_flags(&flags)?;
            let h = crate::expr::parse_poly(&h_src, &htab)
                .map_err(crate::scheme::SchemeError::from)?;
            let mut push = BTreeMap::new();
            push.insert("x".to_string(), Poly::var(tb, "x")?);
            push.insert("y".to_string(), Poly::var(tb, "y")?);
            push.insert("t".to_string(), Poly::var(tb, "lam")?.pow(m));
            for nm in &param_names {
                push.insert(nm.clone(), Poly::var(tb, nm)?);
            }
            let h_pushed = h.substitute(&push)?;
            let [x, y, z] = ["x", "y", "z"].map(|nm| Poly::var(tb, nm).unwrap());
            let lam = Poly::var(tb, "lam")?;
            Ok(vec![x
                .pow(n)
                .mul(&z)
                .sub(&y.pow(m))
                .add(&lam.pow(m * r))
                .sub(&x.mul(&h_pushed))])
        })?;

        let tb = total.vars();
        // lifted derivation: x^n d/dy + (m y^{m-1} + x dh/dy) d/dz
        let gen = &total.ideal().gens()[0];
        // recover x * dh/dy from the defining relation: d(gen)/dy is
        // -(m y^{m-1}) - x dh/dy
        let dz_img = gen.partial("y")?.neg();
        let delta = Derivation::new(
            &total,
            &[
                ("x", Poly::zero(tb)),
                ("y", Poly::var(tb, "x")?.pow(n)),
                ("z", dz_img),
                ("lam", Poly::zero(tb)),
            ],
        )?;
        let nil = delta.local_nilpotency(32)?;
        c.require("lifted derivation locally nilpotent", nil.ok, || nil.table());

        let surface_extra = |i: u32| -> Result<Vec<Poly>, CheckError> {
            Ok(vec![
                Poly::var(tb, "x")?,
                Poly::var(tb, "y")?.sub(
                    &Poly::var(tb, "eps")?
                        .pow(r * i)
                        .mul(&Poly::var(tb, "lam")?.pow(r)),
                ),
            ])
        };

        for i in 0..m {
            let extra = surface_extra(i)?;
            let surf = total.with_relations(&extra)?;
            // invariance: the derivation maps the surface ideal into itself
            for g in &extra {
                let img = delta.apply_raw(g)?;
                c.require(
                    &format!("surface {i} invariant under the derivation"),
                    surf.is_zero_mod(&img)?,
                    || img.to_string(),
                );
            }
            // induced action is the unit multiple m (eps^i lam)^{r(m-1)} d/dz
            let unit = Poly::int(tb, m as i64).mul(
                &Poly::var(tb, "eps")?
                    .pow(i)
                    .mul(&Poly::var(tb, "lam")?)
                    .pow(r * (m - 1)),
            );
            let dz = delta.image_of("z").expect("z image");
            let diff = dz.sub(&unit);
            c.require(
                &format!("surface {i}: induced derivation is m (eps^{i} lam)^(r(m-1)) d/dz"),
                surf.is_zero_mod(&diff)?,
                || diff.to_string(),
            );
            match surf.ideal().unit_inverse(&unit)? {
                Some(winv) => {
                    // slice: z scaled by the inverse unit translates with speed 1
                    let slice = winv.mul(&Poly::var(tb, "z")?);
                    let moved = delta.apply_raw(&slice)?.sub(&Poly::one(tb));
                    c.require(
                        &format!("surface {i} is a trivial torsor via the scaled slice"),
                        surf.is_zero_mod(&moved)?,
                        || "slice speed differs from 1".into(),
                    );
                }
                None => c.require(
                    &format!("surface {i}: coefficient is a unit"),
                    false,
                    || unit.to_string(),
                ),
            }
        }

        // pairwise disjointness of the surfaces
        for i in 0..m {
            for j in (i + 1)..m {
                let mut gens = total.ideal().gens().to_vec();
                gens.extend(surface_extra(i)?);
                gens.extend(surface_extra(j)?);
                let both = Ideal::new(tb, gens).with_budget(*total.budget());
                c.require(
                    &format!("surfaces {i} and {j} are disjoint"),
                    both.contains_one()?,
                    || "ideals not comaximal".into(),
                );
            }
        }

        // the twist lam -> eps lam is a certified automorphism of order m
        // commuting with the derivation and permuting the surfaces
        let mut twist_images: Vec<(&str, Poly)> = vec![
            ("x", Poly::var(tb, "x")?),
            ("y", Poly::var(tb, "y")?),
            ("z", Poly::var(tb, "z")?),
            ("lam", Poly::var(tb, "eps")?.mul(&Poly::var(tb, "lam")?)),
        ];
        let param_imgs: Vec<(String, Poly)> = params
            .params
            .iter()
            .map(|p| Ok((p.clone(), Poly::var(tb, p)?)))
            .collect::<Result<_, CheckError>>()?;
        for (nm, p) in &param_imgs {
            twist_images.push((nm.as_str(), p.clone()));
        }
        let tau = Morphism::new(&total, &total, &twist_images)?;
        let twist = GroupTwist::new(tau.clone(), m)?;
        c.witness("twist order", twist.order.to_string());

        let eq = check_equivariant(&tau, &delta, &delta)?;
        c.require("derivation equivariant under the twist", eq.ok, || {
            format!("{:?}", eq.witness)
        });

        for i in 0..m {
            let pulled: Vec<Poly> = surface_extra(i)?
                .iter()
                .map(|g| tau.apply(g))
                .collect::<Result<_, _>>()?;
            let mut lhs = total.ideal().gens().to_vec();
            lhs.extend(pulled);
            let lhs = Ideal::new(tb, lhs).with_budget(*total.budget());
            let mut rhs = total.ideal().gens().to_vec();
            rhs.extend(surface_extra((i + 1) % m)?);
            let rhs = Ideal::new(tb, rhs).with_budget(*total.budget());
            c.require(
                &format!("twist carries surface {} to surface {i}", (i + 1) % m),
                lhs.equals(&rhs)?,
                || "pullback ideal differs".into(),
            );
        }
        Ok(())
    })
}
