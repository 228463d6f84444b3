//! Cylinder splittings: commuting torsor directions on chart-level fiber
//! products, with explicit slices trivializing each direction.
//!
//! Two layers. Over the punctured plane, `X_m x X_1` glued along `(x, y)`
//! carries the two translation directions `x^m d/du + y d/dv` and
//! `x d/du1 + y d/dv1`; slices exist over both principal charts. Over the
//! cyclotomic cover chart, the pullbacks of `X(m,n,r)` and `X(m,1,1)`
//! carry the lifted fixed point free directions, with slices over the
//! locus `y != 0` and on each residue chart.

use super::slice::{chart_images, slice_setup};
use crate::derivation::{check_equivariant, Derivation};
use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{Morphism, Scheme};

fn commute_on_generators(
    c: &mut Checker,
    label: &str,
    d1: &Derivation,
    d2: &Derivation,
) -> Result<(), CheckError> {
    let scheme = d1.scheme();
    for v in scheme.ambient_vars() {
        let p = Poly::var(scheme.vars(), &v)?;
        let a = d1.apply(&d2.apply(&p)?)?;
        let b = d2.apply(&d1.apply(&p)?)?;
        let diff = a.sub(&b);
        c.require(&format!("{label}: commutator vanishes on {v}"), diff.is_zero(), || {
            diff.to_string()
        });
    }
    Ok(())
}

fn require_slice(
    c: &mut Checker,
    label: &str,
    scheme: &Scheme,
    images: &[(&str, Poly)],
    slice: &Poly,
) -> Result<(), CheckError> {
    let d = Derivation::new(scheme, images)?;
    let applied = d.apply(slice)?;
    let diff = applied.sub(&Poly::one(scheme.vars()));
    c.require(label, scheme.is_zero_mod(&diff)?, || applied.to_string());
    Ok(())
}

pub fn cylinder_splitting(m: u32, n: u32, r: u32) -> Report {
    Checker::run(&format!("cylinder_splitting(m={m},n={n},r={r})"), |c| {
        // layer 1: X_m x_{A^2_*} X_1 along the (x, y) projections
        let w = Scheme::new_with(
            &[
                ("x", false),
                ("y", false),
                ("u", false),
                ("v", false),
                ("u1", false),
                ("v1", false),
            ],
            &[],
            None,
            |tb| {
                let [x, y, u, v, u1, v1] =
                    ["x", "y", "u", "v", "u1", "v1"].map(|n| Poly::var(tb, n).unwrap());
                Ok(vec![
                    x.pow(m).mul(&v).sub(&y.mul(&u)).sub(&Poly::one(tb)),
                    x.mul(&v1).sub(&y.mul(&u1)).sub(&Poly::one(tb)),
                ])
            },
        )?;
        let tb = w.vars();
        let zero = Poly::zero(tb);
        let first_images = vec![
            ("x", zero.clone()),
            ("y", zero.clone()),
            ("u", Poly::var(tb, "x")?.pow(m)),
            ("v", Poly::var(tb, "y")?),
            ("u1", zero.clone()),
            ("v1", zero.clone()),
        ];
        let second_images = vec![
            ("x", zero.clone()),
            ("y", zero.clone()),
            ("u", zero.clone()),
            ("v", zero.clone()),
            ("u1", Poly::var(tb, "x")?),
            ("v1", Poly::var(tb, "y")?),
        ];
        let d_first = Derivation::new(&w, &first_images)?;
        let d_second = Derivation::new(&w, &second_images)?;
        c.require(
            "translation directions locally nilpotent",
            d_first.local_nilpotency(32)?.ok && d_second.local_nilpotency(32)?.ok,
            || "nilpotency failed".into(),
        );
        commute_on_generators(c, "punctured-plane product", &d_first, &d_second)?;

        for (chart_var, slices) in [
            ("y", [("v", 1u32), ("v1", 1)]),
            ("x", [("u", m), ("u1", 1)]),
        ] {
            let wl = w.localize(chart_var)?;
            let lb = wl.vars();
            let inv = Poly::var(lb, wl.partner_of(chart_var).unwrap())?;
            for (k, (fiber, pow)) in slices.iter().enumerate() {
                let slice = inv.pow(*pow).mul(&Poly::var(lb, fiber)?);
                let images = if k == 0 { &first_images } else { &second_images };
                let lifted: Vec<(&str, Poly)> = images
                    .iter()
                    .map(|(nm, p)| Ok((*nm, p.lift(lb)?)))
                    .collect::<Result<_, CheckError>>()?;
                require_slice(
                    c,
                    &format!("slice for direction {k} over the chart {chart_var} != 0"),
                    &wl,
                    &lifted,
                    &slice,
                )?;
            }
        }

        // layer 2: pullbacks of X(m,n,r) and X(m,1,1) over the shared
        // cyclotomic chart, with the two fixed point free directions
        let z = Scheme::new_with(
            &[
                ("y", false),
                ("lam", false),
                ("x1", false),
                ("u1", false),
                ("x2", false),
                ("u2", false),
            ],
            &["lam"],
            Some(("eps", m)),
            |tb| {
                let [y, x1, u1, x2, u2] =
                    ["y", "x1", "u1", "x2", "u2"].map(|n| Poly::var(tb, n).unwrap());
                let li = Poly::var(tb, "lam_inv")?;
                Ok(vec![
                    li.pow(m * r).mul(&x1.pow(m)).sub(&y.pow(n).mul(&u1)).sub(&Poly::one(tb)),
                    li.pow(m).mul(&x2.pow(m)).sub(&y.mul(&u2)).sub(&Poly::one(tb)),
                ])
            },
        )?;
        let zb = z.vars();
        let zzero = Poly::zero(zb);
        let dir1 = vec![
            ("y", zzero.clone()),
            ("lam", zzero.clone()),
            ("x1", Poly::var(zb, "y")?.pow(n)),
            (
                "u1",
                Poly::int(zb, m as i64)
                    .mul(&Poly::var(zb, "x1")?.pow(m - 1))
                    .mul(&Poly::var(zb, "lam_inv")?.pow(m * r)),
            ),
            ("x2", zzero.clone()),
            ("u2", zzero.clone()),
        ];
        let dir2 = vec![
            ("y", zzero.clone()),
            ("lam", zzero.clone()),
            ("x1", zzero.clone()),
            ("u1", zzero.clone()),
            ("x2", Poly::var(zb, "y")?),
            (
                "u2",
                Poly::int(zb, m as i64)
                    .mul(&Poly::var(zb, "x2")?.pow(m - 1))
                    .mul(&Poly::var(zb, "lam_inv")?.pow(m)),
            ),
        ];
        let d1 = Derivation::new(&z, &dir1)?;
        let d2 = Derivation::new(&z, &dir2)?;
        c.require(
            "lifted directions locally nilpotent",
            d1.local_nilpotency(32)?.ok && d2.local_nilpotency(32)?.ok,
            || "nilpotency failed".into(),
        );
        commute_on_generators(c, "cover-chart product", &d1, &d2)?;

        // slices over y != 0 trivialize both directions at once
        let zy = z.localize("y")?;
        let yb = zy.vars();
        let yinv = Poly::var(yb, zy.partner_of("y").unwrap())?;
        let lift = |imgs: &[(&'static str, Poly)]| -> Result<Vec<(&'static str, Poly)>, CheckError> {
            imgs.iter()
                .map(|(nm, p)| Ok((*nm, p.lift(yb)?)))
                .collect()
        };
        require_slice(
            c,
            "slice for the X(m,n,r) direction over y != 0",
            &zy,
            &lift(&dir1)?,
            &yinv.pow(n).mul(&Poly::var(yb, "x1")?),
        )?;
        require_slice(
            c,
            "slice for the X_m direction over y != 0",
            &zy,
            &lift(&dir2)?,
            &yinv.mul(&Poly::var(yb, "x2")?),
        )?;

        // per-residue chart trivializations of the two-directional torsor
        let first = slice_setup(m, n, r)?;
        let second = slice_setup(m, 1, 1)?;
        for i in 0..m {
            let chart = Scheme::new(
                &[("y", false), ("lam", false), ("va", false), ("vb", false)],
                &["lam"],
                Some(("eps", m)),
                &[],
            )?;
            // reuse the single-factor chart images, renaming coordinates
            let tmp_a = Scheme::new(
                &[("y", false), ("lam", false), ("v", false)],
                &["lam"],
                Some(("eps", m)),
                &[],
            )?;
            let ia = chart_images(&tmp_a, m, n, r, i)?;
            let ib = chart_images(&tmp_a, m, 1, 1, i)?;
            let cb = chart.vars();
            let ren_a: std::collections::BTreeMap<String, String> =
                [("v".to_string(), "va".to_string())].into();
            let ren_b: std::collections::BTreeMap<String, String> =
                [("v".to_string(), "vb".to_string())].into();
            let mut images: Vec<(String, Poly)> = Vec::new();
            for (k, p) in &ia {
                match k.as_str() {
                    "x" => images.push(("x1".into(), p.rename_into(&ren_a, cb)?)),
                    "u" => images.push(("u1".into(), p.rename_into(&ren_a, cb)?)),
                    _ => {}
                }
            }
            for (k, p) in &ib {
                match k.as_str() {
                    "x" => images.push(("x2".into(), p.rename_into(&ren_b, cb)?)),
                    "u" => images.push(("u2".into(), p.rename_into(&ren_b, cb)?)),
                    _ => {}
                }
            }
            images.push(("y".into(), Poly::var(cb, "y")?));
            images.push(("lam".into(), Poly::var(cb, "lam")?));
            let refs: Vec<(&str, Poly)> =
                images.iter().map(|(k, p)| (k.as_str(), p.clone())).collect();
            let theta = match Morphism::new(&chart, &z, &refs) {
                Ok(t) => t,
                Err(e) => {
                    if matches!(&e, crate::scheme::SchemeError::Engine(en) if en.is_budget()) {
                        return Err(e.into());
                    }
                    c.require(&format!("chart {i} of the product well defined"), false, || {
                        e.to_string()
                    });
                    continue;
                }
            };
            let _ = (&first, &second);
            for (coord, d) in [("va", &d1), ("vb", &d2)] {
                let mut imgs: Vec<(&str, Poly)> = vec![
                    ("y", Poly::zero(cb)),
                    ("lam", Poly::zero(cb)),
                    ("va", Poly::zero(cb)),
                    ("vb", Poly::zero(cb)),
                ];
                for (nm, p) in imgs.iter_mut() {
                    if *nm == coord {
                        *p = Poly::one(cb);
                    }
                }
                let slice_d = Derivation::new(&chart, &imgs)?;
                let eq = check_equivariant(&theta, &slice_d, d)?;
                c.require(
                    &format!("chart {i}: {coord} is a slice for its direction"),
                    eq.ok,
                    || format!("{:?}", eq.witness),
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
    fn base_case_splits() {
        let rep = cylinder_splitting(1, 1, 1);
        assert!(rep.passed(), "{rep:?}");
    }

    #[test]
    fn x2_against_x223() {
        let rep = cylinder_splitting(2, 2, 3);
        assert!(rep.passed(), "{rep:?}");
    }
}
