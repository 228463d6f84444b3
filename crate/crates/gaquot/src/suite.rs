//! The fixed built-in verification corpus run by the `paper-suite` CLI
//! verb: one named check per construction, in a stable order, with
//! deterministic reports.

use std::time::Instant;

use crate::constructions::{
    build_xm, build_xmnr, build_y, deformed_cubic_invariants, fiber_ring_decomposition,
    phi_trivialization, slice_charts, y_charts, FamilyParams,
};
use crate::derivation::{check_action_axioms, radical_equal, span_contains};
use crate::ideal::{Budget, Ideal};
use crate::modification::verify_modification_is_y;
use crate::poly::Poly;
use crate::report::{Checker, Report};

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub budget: Budget,
    /// highest family index for the trivialization checks
    pub max_m: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            budget: Budget::default(),
            max_m: 3,
        }
    }
}

fn timed(mut rep: Report, start: Instant) -> Report {
    rep.ms = start.elapsed().as_millis();
    rep
}

/// Run the whole corpus. Failures are captured per check; the batch never
/// aborts.
pub fn paper_suite(opts: &SuiteOptions) -> Vec<Report> {
    crate::ideal::set_thread_budget(opts.budget);
    let mut out = Vec::new();
    let mut push = |rep: Report| out.push(rep);

    for m in 1..=4u32 {
        let start = Instant::now();
        push(timed(
            Checker::run(&format!("xm_lnd(m={m})"), |c| {
                let b = build_xm(m)?;
                let nil = b.nu.local_nilpotency(32)?;
                c.witness("nu degrees", nil.table());
                c.require("nu locally nilpotent", nil.ok, || nil.table());
                let nil_t = b.torsor.local_nilpotency(32)?;
                c.require("torsor direction locally nilpotent", nil_t.ok, || {
                    nil_t.table()
                });
                Ok(())
            }),
            start,
        ));

        let start = Instant::now();
        push(timed(
            Checker::run(&format!("xm_fixed_point_free(m={m})"), |c| {
                let b = build_xm(m)?;
                c.require(
                    "fixed locus of nu is empty",
                    b.nu.fixed_locus().contains_one()?,
                    || "1 not in the fixed ideal".into(),
                );
                c.require(
                    "fixed locus of the torsor direction is empty",
                    b.torsor.fixed_locus().contains_one()?,
                    || "1 not in the fixed ideal".into(),
                );
                Ok(())
            }),
            start,
        ));

        let start = Instant::now();
        push(timed(
            Checker::run(&format!("xm_exp_axioms(m={m})"), |c| {
                let b = build_xm(m)?;
                for (label, d) in [("nu", &b.nu), ("torsor", &b.torsor)] {
                    let action = d.exp(32)?;
                    let ax = check_action_axioms(&action)?;
                    c.require(&format!("{label} coaction axioms"), ax.ok, || {
                        format!("{:?}", ax.witness)
                    });
                }
                Ok(())
            }),
            start,
        ));

        let start = Instant::now();
        push(timed(
            Checker::run(&format!("xm_kernel(m={m})"), |c| {
                let b = build_xm(m)?;
                let kernel = b.nu.kernel_search(3)?;
                c.witness("scope", "invariant ring verified up to degree bound 3");
                // exactly the degree <= 3 part of k[y, v]
                c.require("kernel dimension is 10", kernel.len() == 10, || {
                    kernel.len().to_string()
                });
                let s = &b.scheme;
                for a in 0..=3u32 {
                    for bb in 0..=(3 - a) {
                        let mono = s
                            .parse("y")?
                            .pow(a)
                            .mul(&s.parse("v")?.pow(bb));
                        c.require(
                            &format!("span contains y^{a} v^{bb}"),
                            span_contains(&kernel, &mono),
                            || "missing monomial".into(),
                        );
                    }
                }
                for p in &kernel {
                    c.require(
                        "kernel elements lie in k[y,v]",
                        !p.involves("x") && !p.involves("u"),
                        || p.to_string(),
                    );
                }
                Ok(())
            }),
            start,
        ));
    }

    for m in 1..=opts.max_m {
        let start = Instant::now();
        push(timed(phi_trivialization(m), start));
    }

    for m in 2..=3u32 {
        let start = Instant::now();
        push(timed(fiber_ring_decomposition(m), start));
    }

    for (m, n, r) in [(2, 1, 1), (2, 2, 3), (3, 1, 2)] {
        let start = Instant::now();
        push(timed(
            Checker::run(&format!("xmnr_lnd(m={m},n={n},r={r})"), |c| {
                let b = build_xmnr(m, n, r)?;
                let nil = b.nu.local_nilpotency(32)?;
                c.witness("degrees", nil.table());
                c.require("locally nilpotent", nil.ok, || nil.table());
                c.require(
                    "fixed point free",
                    b.nu.fixed_locus().contains_one()?,
                    || "1 not in fixed ideal".into(),
                );
                if n == 1 && r == 1 {
                    let xm = build_xm(m)?;
                    c.require(
                        "X(m,1,1) equals X_m",
                        xm.scheme.ideal().gens() == b.scheme.ideal().gens(),
                        || "ideals differ".into(),
                    );
                }
                Ok(())
            }),
            start,
        ));

        let start = Instant::now();
        push(timed(slice_charts(m, n, r), start));
    }

    let families = [
        FamilyParams::new(2, 2, 3, "1", &[]),
        FamilyParams::new(2, 2, 3, "1 + a*t", &["a"]),
        FamilyParams::new(3, 2, 2, "1", &[]),
    ];
    for fam in &families {
        let start = Instant::now();
        let fam2 = fam.clone();
        push(timed(
            Checker::run(&format!("y_lnd({})", fam.label()), move |c| {
                let y = build_y(&fam2)?;
                let nil = y.delta.local_nilpotency(32)?;
                c.witness("degrees", nil.table());
                c.require("locally nilpotent", nil.ok, || nil.table());
                let action = y.delta.exp(32)?;
                let ax = check_action_axioms(&action)?;
                c.require("coaction axioms", ax.ok, || format!("{:?}", ax.witness));
                Ok(())
            }),
            start,
        ));

        let start = Instant::now();
        let fam2 = fam.clone();
        push(timed(
            Checker::run(&format!("y_fixed_locus({})", fam.label()), move |c| {
                let y = build_y(&fam2)?;
                let mut gens = y.scheme.ideal().gens().to_vec();
                for v in ["x", "y", "t"] {
                    gens.push(Poly::var(y.scheme.vars(), v)?);
                }
                let line = Ideal::new(y.scheme.vars(), gens).with_budget(*y.scheme.budget());
                c.require(
                    "fixed locus is the line x = y = t = 0 (radical equality)",
                    radical_equal(&y.delta.fixed_locus(), &line)?,
                    || "radical comparison failed".into(),
                );
                Ok(())
            }),
            start,
        ));
    }

    {
        let start = Instant::now();
        push(timed(y_charts(&FamilyParams::new(2, 2, 3, "1", &[])), start));
    }

    for fam in &families {
        let start = Instant::now();
        push(timed(verify_modification_is_y(fam), start));
    }

    {
        let start = Instant::now();
        push(timed(deformed_cubic_invariants(), start));
    }

    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    #[test]
    fn suite_names_are_stable_and_unique() {
        let opts = SuiteOptions {
            max_m: 1,
            ..Default::default()
        };
        let reports = paper_suite(&opts);
        let mut names: Vec<&str> = reports.iter().map(|r| r.check.as_str()).collect();
        let before = names.len();
        names.dedup();
        assert_eq!(before, names.len());
        assert!(reports.iter().any(|r| r.check == "xm_kernel(m=4)"));
    }

    #[test]
    fn tiny_budget_exceeds_bounds_but_never_fails() {
        let opts = SuiteOptions {
            budget: Budget {
                max_pairs: 1,
                max_terms: 8,
            },
            max_m: 1,
        };
        let reports = paper_suite(&opts);
        assert!(reports
            .iter()
            .any(|r| r.status == Status::ExceededBounds));
        for r in &reports {
            assert_ne!(r.status, Status::Fail, "budget must not surface as fail: {r:?}");
        }
    }
}
