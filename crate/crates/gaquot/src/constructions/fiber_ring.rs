//! Decomposition of the fiber ring of the trivialization: the coordinate
//! ring `B` of the self fiber product splits as `B_0 x B_1`, where `B_0`
//! is a Laurent polynomial ring witnessing the diagonal and `y` becomes a
//! unit in `B_1`.

use crate::poly::Poly;
use crate::report::{CheckError, Checker, Report};
use crate::scheme::{is_isomorphism, Morphism, Scheme};

pub fn fiber_ring_decomposition(m: u32) -> Report {
    Checker::run(&format!("fiber_ring_decomposition(m={m})"), |c| {
        assert!(m >= 2, "the decomposition is trivial for m = 1");
        let b = Scheme::new_with(
            &[
                ("x1", false),
                ("x2", false),
                ("y", false),
                ("t1", false),
                ("t2", false),
            ],
            &["x1", "x2"],
            None,
            |tb| {
                let p = |xi: &str, ti: &str| -> Result<Poly, crate::scheme::SchemeError> {
                    let xinv = Poly::var(tb, &format!("{xi}_inv"))?;
                    let t = Poly::var(tb, ti)?;
                    let y = Poly::var(tb, "y")?;
                    let mut acc = Poly::zero(tb);
                    for k in 1..=m {
                        acc = acc.add(
                            &xinv
                                .pow(k)
                                .mul(&t.pow(k))
                                .mul(&y.pow(k - 1))
                                .scale(&super::binomial(m, k)),
                        );
                    }
                    Ok(acc)
                };
                let x1i = Poly::var(tb, "x1_inv")?;
                let x2i = Poly::var(tb, "x2_inv")?;
                let [x1, x2, y, t1, t2] =
                    ["x1", "x2", "y", "t1", "t2"].map(|n| Poly::var(tb, n).unwrap());
                Ok(vec![
                    x1i.pow(m).sub(&x2i.pow(m)),
                    x1.sub(&x2).add(&y.mul(&t1.sub(&t2))),
                    p("x1", "t1")?.sub(&p("x2", "t2")?),
                ])
            },
        )?;
        let tb = b.vars();
        let x1i = Poly::var(tb, "x1_inv")?;
        let x2i = Poly::var(tb, "x2_inv")?;

        // x1_inv^m - x2_inv^m = (x1_inv - x2_inv) * R
        let mut r = Poly::zero(tb);
        for j in 0..m {
            r = r.add(&x1i.pow(j).mul(&x2i.pow(m - 1 - j)));
        }
        let factored = x1i.sub(&x2i).mul(&r);
        let lhs = x1i.pow(m).sub(&x2i.pow(m));
        c.require(
            "difference of inverse powers factors through R",
            factored == lhs,
            || factored.to_string(),
        );

        let b0 = b.with_relations(&[x1i.sub(&x2i)])?;
        let b1 = b.with_relations(&[r.clone()])?;

        // comaximality with an explicit partition of unity
        match b0.ideal().comaximal_with(b1.ideal())? {
            Some((a, bb)) => {
                c.witness("1 = a + b with a in I0, b in I1; a", a.to_string());
                let sum_ok = a.add(&bb) == Poly::one(tb);
                c.require("partition of unity sums to 1", sum_ok, || {
                    a.add(&bb).to_string()
                });
            }
            None => c.require("I0 and I1 comaximal", false, || "1 not in I0 + I1".into()),
        }

        // CRT: the intersection is the original ideal (computed by
        // elimination, independently of the comaximality route)
        let cap = b0.ideal().intersection(b1.ideal())?;
        c.require("I0 meet I1 equals I", cap.equals(b.ideal())?, || {
            "intersection differs".into()
        });
        // oracle for the same fact: the product of the added generators
        // already lies in I
        c.require(
            "product of added generators lies in I",
            b.ideal().member(&x1i.sub(&x2i).mul(&r))?,
            || "(x1_inv - x2_inv) * R is not in I".into(),
        );

        // B0 is the Laurent polynomial ring k[x^{pm}, y, t]
        let a = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )?;
        let to_a = Morphism::new(
            &b0,
            &a,
            &[
                ("x", b0.parse("x1")?),
                ("y", b0.parse("y")?),
                ("t", b0.parse("t1")?),
            ],
        )?;
        let from_a = Morphism::new(
            &a,
            &b0,
            &[
                ("x1", a.parse("x")?),
                ("x2", a.parse("x")?),
                ("y", a.parse("y")?),
                ("t1", a.parse("t")?),
                ("t2", a.parse("t")?),
            ],
        )?;
        let iso = is_isomorphism(&to_a, &from_a)?;
        c.require("B0 is the Laurent polynomial ring in x, y, t", iso.ok, || {
            format!("{:?}", iso.witness)
        });

        // y becomes a unit in B1
        let y = Poly::var(tb, "y")?;
        match b1.ideal().unit_inverse(&y)? {
            Some(inv) => c.witness("inverse of y in B1", inv.to_string()),
            None => c.require("y is a unit in B1", false, || "no inverse found".into()),
        }

        // the difference P(x1,y,t1) - P(x1,y,t2) factors exactly as
        // x1_inv (t1 - t2) (m + y S); the cofactor is derived by division
        let p1 = phi_p(&b, m, "x1", "t1")?;
        let p2_same_x = phi_p(&b, m, "x1", "t2")?;
        let d = p1.sub(&p2_same_x);
        let t1 = Poly::var(tb, "t1")?;
        let t2 = Poly::var(tb, "t2")?;
        let quot = d
            .div_exact(&x1i.mul(&t1.sub(&t2)))
            .ok_or_else(|| CheckError::Other("difference not divisible".into()))?;
        let s = quot
            .sub(&Poly::int(tb, m as i64))
            .div_exact(&y)
            .ok_or_else(|| CheckError::Other("cofactor not of the form m + y S".into()))?;
        c.witness("S with P1 - P2 = x1_inv (t1-t2)(m + y S)", s.to_string());
        let rebuilt = x1i
            .mul(&t1.sub(&t2))
            .mul(&Poly::int(tb, m as i64).add(&y.mul(&s)));
        c.require("difference certificate reconstructs", rebuilt == d, || {
            rebuilt.to_string()
        });
        Ok(())
    })
}

fn phi_p(b: &Scheme, m: u32, xi: &str, ti: &str) -> Result<Poly, CheckError> {
    // P over the fiber ring's variables, in terms of the chosen copies
    let tb = b.vars();
    let xinv = Poly::var(tb, &format!("{xi}_inv"))?;
    let t = Poly::var(tb, ti)?;
    let y = Poly::var(tb, "y")?;
    let mut acc = Poly::zero(tb);
    for k in 1..=m {
        acc = acc.add(
            &xinv
                .pow(k)
                .mul(&t.pow(k))
                .mul(&y.pow(k - 1))
                .scale(&super::binomial(m, k)),
        );
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::phi_polynomial;
    use crate::scheme::Scheme as S;

    #[test]
    fn decomposition_m2() {
        let r = fiber_ring_decomposition(2);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn p_helper_matches_phi_polynomial() {
        let s = S::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )
        .unwrap();
        let direct = phi_polynomial(2, &s).unwrap();
        let b = S::new(
            &[("x1", false), ("y", false), ("t1", false)],
            &["x1"],
            None,
            &[],
        )
        .unwrap();
        let renamed = phi_p(&b, 2, "x1", "t1").unwrap();
        assert_eq!(direct.num_terms(), renamed.num_terms());
    }
}
