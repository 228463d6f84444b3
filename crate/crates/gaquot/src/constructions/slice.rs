//! Slice charts for `X(m,n,r)` pulled back along the cyclotomic cover
//! `lam -> v = lam^{-m}` of the chart where `v` is invertible.
//!
//! The pullback is `lam_inv^{mr} x^m = y^n u + 1` with the lifted
//! derivation `y^n d/dx + m x^{m-1} lam^r d/du`. For each residue `i` the
//! chart coordinate `v_i` realizes `y^{-n}(x - (eps^i lam)^r)`
//! polynomially, the chart map is an isomorphism away from the other
//! special surfaces, the slice satisfies `d(v_i) = 1`, and the
//! transitions form a 1-cocycle with unit differences of roots of unity.

use super::covers::{cocycle_check, Cover};
use crate::derivation::{check_equivariant, Derivation};
use crate::ideal::Ideal;
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{is_isomorphism, Morphism, Scheme};

pub(crate) struct SliceSetup {
    pub total: Scheme,
    pub lifted: Derivation,
}

/// The pullback `X(m,n,r)|_U x_U Utilde` and its lifted derivation.
pub(crate) fn slice_setup(m: u32, n: u32, r: u32) -> Result<SliceSetup, CheckError> {
    let total = Scheme::new_with(
        &[("y", false), ("lam", false), ("x", false), ("u", false)],
        &["lam"],
        Some(("eps", m)),
        |tb| {
            let [y, x, u] = ["y", "x", "u"].map(|v| Poly::var(tb, v).unwrap());
            let li = Poly::var(tb, "lam_inv")?;
            Ok(vec![li
                .pow(m * r)
                .mul(&x.pow(m))
                .sub(&y.pow(n).mul(&u))
                .sub(&Poly::one(tb))])
        },
    )?;
    let tb = total.vars();
    // the u-coefficient is the pullback of v^r along v = lam^{-m}
    let lifted = Derivation::new(
        &total,
        &[
            ("y", Poly::zero(tb)),
            ("lam", Poly::zero(tb)),
            ("x", Poly::var(tb, "y")?.pow(n)),
            (
                "u",
                Poly::int(tb, m as i64)
                    .mul(&Poly::var(tb, "x")?.pow(m - 1))
                    .mul(&Poly::var(tb, "lam_inv")?.pow(m * r)),
            ),
        ],
    )?;
    Ok(SliceSetup { total, lifted })
}

/// Chart morphism for residue `i`: the source is `k[y, lam^{pm}, v]`.
pub(crate) fn chart_images(
    chart: &Scheme,
    m: u32,
    n: u32,
    r: u32,
    i: u32,
) -> Result<Vec<(String, Poly)>, CheckError> {
    let cb = chart.vars();
    let y = Poly::var(cb, "y")?;
    let v = Poly::var(cb, "v")?;
    let lam = Poly::var(cb, "lam")?;
    let li = Poly::var(cb, "lam_inv")?;
    let eps = Poly::var(cb, "eps")?;
    let x_img = y.pow(n).mul(&v).add(&eps.pow(r * i).mul(&lam.pow(r)));
    let mut u_img = li.pow(m * r).mul(&v);
    for j in 0..m {
        if j == i {
            continue;
        }
        let delta = eps.pow(r * i).sub(&eps.pow(r * j));
        u_img = u_img.mul(&y.pow(n).mul(&v).add(&lam.pow(r).mul(&delta)));
    }
    Ok(vec![
        ("y".to_string(), y),
        ("lam".to_string(), lam),
        ("x".to_string(), x_img),
        ("u".to_string(), u_img),
    ])
}

pub fn slice_charts(m: u32, n: u32, r: u32) -> Report {
    Checker::run(&format!("slice_charts(m={m},n={n},r={r})"), |c| {
        let setup = slice_setup(m, n, r)?;
        let total = &setup.total;
        let nil = setup.lifted.local_nilpotency(32)?;
        c.require("lifted derivation locally nilpotent", nil.ok, || nil.table());

        // units eps^{ri} - eps^{rj} for i != j, with certificates
        let eps_ring = Scheme::new(&[("lam", false)], &["lam"], Some(("eps", m)), &[])?;
        for i in 0..m {
            for j in (i + 1)..m {
                let e = Poly::var(eps_ring.vars(), "eps")?;
                let d = e.pow(r * i).sub(&e.pow(r * j));
                match eps_ring.ideal().unit_inverse(&d)? {
                    Some(inv) => c.witness(
                        &format!("inverse of eps^{}-eps^{}", r * i, r * j),
                        inv.to_string(),
                    ),
                    None => c.require(
                        &format!("eps^{{{}}} - eps^{{{}}} is a unit", r * i, r * j),
                        false,
                        || d.to_string(),
                    ),
                }
            }
        }

        for i in 0..m {
            let chart = Scheme::new(
                &[("y", false), ("lam", false), ("v", false)],
                &["lam"],
                Some(("eps", m)),
                &[],
            )?;
            let images = chart_images(&chart, m, n, r, i)?;
            let refs: Vec<(&str, Poly)> =
                images.iter().map(|(k, p)| (k.as_str(), p.clone())).collect();
            let theta = match Morphism::new(&chart, total, &refs) {
                Ok(t) => t,
                Err(e) => {
                    if matches!(&e, crate::scheme::SchemeError::Engine(en) if en.is_budget()) {
                        return Err(e.into());
                    }
                    c.require(&format!("chart {i} well defined"), false, || e.to_string());
                    continue;
                }
            };

            // the slice: d/dv downstairs corresponds to the lifted
            // derivation upstairs, certifying that v_i is a slice
            let cb = chart.vars();
            let slice_d = Derivation::new(
                &chart,
                &[
                    ("y", Poly::zero(cb)),
                    ("lam", Poly::zero(cb)),
                    ("v", Poly::one(cb)),
                ],
            )?;
            let eq = check_equivariant(&theta, &slice_d, &setup.lifted)?;
            c.require(&format!("chart {i}: slice derivative is 1"), eq.ok, || {
                format!("{:?}", eq.witness)
            });

            // isomorphism onto the locus y != 0
            let chart_y = chart.localize("y")?;
            let total_y = total.localize("y")?;
            let theta_y = Morphism::new(&chart_y, &total_y, &refs)?;
            let yb = total_y.vars();
            let v_rat = Poly::var(yb, "y_inv")?.pow(n).mul(
                &Poly::var(yb, "x")?.sub(
                    &Poly::var(yb, "eps")?
                        .pow(r * i)
                        .mul(&Poly::var(yb, "lam")?.pow(r)),
                ),
            );
            let rho = Morphism::new(
                &total_y,
                &chart_y,
                &[
                    ("y", Poly::var(yb, "y")?),
                    ("lam", Poly::var(yb, "lam")?),
                    ("v", v_rat),
                ],
            )?;
            let iso = is_isomorphism(&theta_y, &rho)?;
            c.require(
                &format!("chart {i}: isomorphism over the locus y != 0"),
                iso.ok,
                || format!("{:?}", iso.witness),
            );

            // the chart misses the other special surfaces entirely
            for j in 0..m {
                if j == i {
                    continue;
                }
                let tb = total.vars();
                let surf_extra = [
                    Poly::var(tb, "y")?,
                    Poly::var(tb, "x")?.sub(
                        &Poly::var(tb, "eps")?
                            .pow(r * j)
                            .mul(&Poly::var(tb, "lam")?.pow(r)),
                    ),
                ];
                let mut pulled = chart.ideal().gens().to_vec();
                for g in &surf_extra {
                    pulled.push(theta.apply(g)?);
                }
                let avoided = Ideal::new(chart.vars(), pulled)
                    .with_budget(*chart.budget())
                    .contains_one()?;
                c.require(
                    &format!("chart {i}: surface {j} pulled back to the empty locus"),
                    avoided,
                    || "pullback ideal is proper".into(),
                );
            }

            // on y = 0 the chart is carried isomorphically onto surface i
            let surface = total.with_relations(&[
                Poly::var(total.vars(), "y")?,
                Poly::var(total.vars(), "x")?.sub(
                    &Poly::var(total.vars(), "eps")?
                        .pow(r * i)
                        .mul(&Poly::var(total.vars(), "lam")?.pow(r)),
                ),
            ])?;
            let chart0 = chart.with_relations(&[Poly::var(chart.vars(), "y")?])?;
            let onto = Morphism::new(&chart0, &surface, &refs)?;
            let sb = surface.vars();
            let cofactor = {
                // product of the unit differences, inverted in the surface
                let mut prod = Poly::one(sb);
                for j in 0..m {
                    if j == i {
                        continue;
                    }
                    prod = prod.mul(
                        &Poly::var(sb, "eps")?
                            .pow(r * i)
                            .sub(&Poly::var(sb, "eps")?.pow(r * j)),
                    );
                }
                prod
            };
            match surface.ideal().unit_inverse(&cofactor)? {
                Some(cinv) => {
                    let v_back = cinv
                        .mul(&Poly::var(sb, "lam")?.pow(r))
                        .mul(&Poly::var(sb, "u")?);
                    let back = Morphism::new(
                        &surface,
                        &chart0,
                        &[
                            ("y", Poly::var(sb, "y")?),
                            ("lam", Poly::var(sb, "lam")?),
                            ("v", v_back),
                        ],
                    )?;
                    let iso0 = is_isomorphism(&onto, &back)?;
                    c.require(
                        &format!("chart {i}: restriction to y = 0 hits surface {i}"),
                        iso0.ok,
                        || format!("{:?}", iso0.witness),
                    );
                }
                None => c.require(
                    &format!("chart {i}: unit cofactor on surface {i}"),
                    false,
                    || cofactor.to_string(),
                ),
            }
        }

        // transitions v_j - v_i over y != 0 form a 1-cocycle
        let base = Scheme::new(
            &[("y", false), ("lam", false)],
            &["lam"],
            Some(("eps", m)),
            &[],
        )?;
        let charts: Vec<(String, Poly)> = (0..m)
            .map(|i| Ok((format!("c{i}"), Poly::var(base.vars(), "y")?)))
            .collect::<Result<_, CheckError>>()?;
        let chart_refs: Vec<(&str, Poly)> = charts
            .iter()
            .map(|(n, p)| (n.as_str(), p.clone()))
            .collect();
        let mut cover = Cover::new(&base, &chart_refs)?;
        for i in 0..m {
            for j in (i + 1)..m {
                let int = cover.intersection(i as usize, j as usize);
                let ib = int.vars();
                let g = Poly::var(ib, "y_inv")?.pow(n).mul(
                    &Poly::var(ib, "lam")?.pow(r).mul(
                        &Poly::var(ib, "eps")?
                            .pow(r * i)
                            .sub(&Poly::var(ib, "eps")?.pow(r * j)),
                    ),
                );
                // consistency: the transition equals v_j - v_i as rational
                // slices on the y-localized total space
                let total_y = total.localize("y")?;
                let yb = total_y.vars();
                let v_of = |idx: u32| -> Result<Poly, CheckError> {
                    Ok(Poly::var(yb, "y_inv")?.pow(n).mul(
                        &Poly::var(yb, "x")?.sub(
                            &Poly::var(yb, "eps")?
                                .pow(r * idx)
                                .mul(&Poly::var(yb, "lam")?.pow(r)),
                        ),
                    ))
                };
                let diff = v_of(j)?.sub(&v_of(i)?);
                let g_up = g.lift(yb)?;
                let consistent = total_y.is_zero_mod(&diff.sub(&g_up))?;
                c.require(
                    &format!("transition {i}{j} equals v_{j} - v_{i}"),
                    consistent,
                    || diff.to_string(),
                );
                cover.set_transition(i as usize, j as usize, g)?;
            }
        }
        let cocycle = cocycle_check("slice transitions", &cover);
        c.require("transitions satisfy the cocycle identity", cocycle.passed(), || {
            format!("{cocycle:?}")
        });
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_charts_2_1_1() {
        let r = slice_charts(2, 1, 1);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn slice_charts_m1_has_single_chart() {
        let r = slice_charts(1, 1, 1);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn slice_cocycle_splits_after_inverting_y() {
        // the (2,1,1) transition lives over y != 0 and the torsor is
        // trivial there: the cocycle is a coboundary once chart functions
        // may have poles along y
        let (m, n, r) = (2u32, 1u32, 1u32);
        let base = Scheme::new(
            &[("y", false), ("lam", false)],
            &["lam"],
            Some(("eps", m)),
            &[],
        )
        .unwrap();
        let y = base.parse("y").unwrap();
        let mut cover =
            super::super::Cover::new(&base, &[("c0", y.clone()), ("c1", y)]).unwrap();
        let int = cover.intersection(0, 1);
        let ib = int.vars();
        let g = Poly::var(ib, "y_inv")
            .unwrap()
            .pow(n)
            .mul(&Poly::var(ib, "lam").unwrap().pow(r))
            .mul(
                &Poly::var(ib, "eps")
                    .unwrap()
                    .pow(0)
                    .sub(&Poly::var(ib, "eps").unwrap().pow(r)),
            );
        cover.set_transition(0, 1, g).unwrap();
        let sol = super::super::coboundary_solve(&cover, 6, 6).unwrap();
        assert!(sol.is_some(), "expected a coboundary over the localized charts");
    }
}
