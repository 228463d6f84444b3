//! Acceptance suite: every identity is checked exactly (rational
//! arithmetic, no tolerances). Each test prints one line per criterion.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use gaquot::constructions::{
    build_x223_cylinder_lnd, build_xm, build_xmnr, build_y, coboundary_solve, cocycle_check,
    deformed_cubic_invariants, fiber_ring_decomposition, phi_polynomial, phi_trivialization,
    slice_charts, Cover, FamilyParams,
};
use gaquot::derivation::{radical_equal, span_contains};
use gaquot::ideal::{Budget, Ideal};
use gaquot::modification::verify_modification_is_y;
use gaquot::order::MonomialOrder;
use gaquot::poly::{Poly, VarTable};
use gaquot::report::Report;
use gaquot::scheme::Scheme;
use gaquot::suite::{paper_suite, SuiteOptions};

fn criterion(n: u32, label: &str, ok: bool) {
    println!("[{}] criterion {n}: {label}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {n} failed: {label}");
}

fn report_passes(n: u32, rep: &Report) {
    criterion(n, &rep.check, rep.passed());
    if !rep.passed() {
        panic!("criterion {n}: {rep:?}");
    }
}

// 1. Well-definedness and local nilpotency certificates for every
// derivation in the corpus, cap 32.
#[test]
fn criterion_1_lnd_certificates() {
    for m in 1..=4 {
        let b = build_xm(m).expect("X_m builds");
        let nil = b.nu.local_nilpotency(32).unwrap();
        criterion(1, &format!("nu on X_{m} locally nilpotent"), nil.ok);
    }
    let x223 = build_xmnr(2, 2, 3).unwrap();
    criterion(
        1,
        "derivation on X(2,2,3) locally nilpotent",
        x223.nu.local_nilpotency(32).unwrap().ok,
    );
    for (m, n, r, h, params) in [
        (2, 2, 3, "1", vec![]),
        (2, 2, 3, "1 + a*t", vec!["a"]),
        (3, 2, 2, "1", vec![]),
    ] {
        let fam = FamilyParams::new(m, n, r, h, &params);
        let y = build_y(&fam).expect("Y builds and certifies");
        criterion(
            1,
            &format!("derivation on Y({}) locally nilpotent", fam.label()),
            y.delta.local_nilpotency(32).unwrap().ok,
        );
    }
    let cyl = build_x223_cylinder_lnd().expect("cylinder LND certifies");
    let nil = cyl.delta.local_nilpotency(32).unwrap();
    criterion(1, "cylinder derivation locally nilpotent", nil.ok);
    criterion(1, "cylinder derivation max degree 3", nil.max_degree() == Some(3));
}

// 2. The trivialization identity `(x+ty)^m x^{-m} - y P = 1` for
// m = 1..4, the series cross-check, and the rank-3 Jacobian.
#[test]
fn criterion_2_phi_identity() {
    for m in 1..=4u32 {
        // direct expansion of the identity in the Laurent chart
        let s = Scheme::new(
            &[("x", false), ("y", false), ("t", false)],
            &["x"],
            None,
            &[],
        )
        .unwrap();
        let p = phi_polynomial(m, &s).unwrap();
        let lhs = s
            .parse("x + t*y")
            .unwrap()
            .pow(m)
            .mul(&s.parse("x_inv").unwrap().pow(m))
            .sub(&s.parse("y").unwrap().mul(&p))
            .sub(&Poly::one(s.vars()));
        criterion(
            2,
            &format!("(x+ty)^{m} x^-{m} - y P = 1"),
            s.is_zero_mod(&lhs).unwrap(),
        );
        // the packaged check adds the series cross-check and the Jacobian
        report_passes(2, &phi_trivialization(m));
    }
}

// 3. The fiber ring decomposes: comaximal factors meeting in the ideal,
// the diagonal factor a Laurent polynomial ring, y a unit in the other.
#[test]
fn criterion_3_crt_decomposition() {
    for m in 2..=3 {
        report_passes(3, &fiber_ring_decomposition(m));
    }
}

// 4. Slice charts: d(v_i) = 1 on every chart, cocycle transitions, unit
// differences of roots of unity.
#[test]
fn criterion_4_slice_charts() {
    for (m, n, r) in [(2, 1, 1), (2, 2, 3), (3, 1, 2)] {
        report_passes(4, &slice_charts(m, n, r));
    }
}

// 5. Fixed loci: the line x = y = t = 0 on the deformed cubic, empty on
// every X_m.
#[test]
fn criterion_5_fixed_loci() {
    let y = build_y(&FamilyParams::new(2, 2, 3, "1", &[])).unwrap();
    let mut gens = y.scheme.ideal().gens().to_vec();
    for v in ["x", "y", "t"] {
        gens.push(y.scheme.parse(v).unwrap());
    }
    let line = Ideal::new(y.scheme.vars(), gens);
    criterion(
        5,
        "fixed locus of Y(2,2,3,1) is the line (radical equality)",
        radical_equal(&y.delta.fixed_locus(), &line).unwrap(),
    );
    for m in 1..=4 {
        let b = build_xm(m).unwrap();
        criterion(
            5,
            &format!("fixed locus on X_{m} is empty"),
            b.nu.fixed_locus().contains_one().unwrap(),
        );
    }
}

// 6. Bounded invariant rings: the degree-3 kernel of nu is exactly the
// degree-3 part of k[y,v]; the cylinder kernel contains x, t (bound 3)
// and q (bound 4, since deg q = 4); division produces z_q with the exact
// deformed cubic relation.
#[test]
fn criterion_6_invariant_rings() {
    for m in 1..=4 {
        let b = build_xm(m).unwrap();
        let kernel = b.nu.kernel_search(3).unwrap();
        let mut ok = kernel.len() == 10;
        for a in 0..=3u32 {
            for c in 0..=(3 - a) {
                let mono = b
                    .scheme
                    .parse("y")
                    .unwrap()
                    .pow(a)
                    .mul(&b.scheme.parse("v").unwrap().pow(c));
                ok &= span_contains(&kernel, &mono);
            }
        }
        for p in &kernel {
            ok &= !p.involves("x") && !p.involves("u");
        }
        criterion(6, &format!("kernel of nu on X_{m} at degree 3 is k[y,v]"), ok);
    }

    let cyl = build_x223_cylinder_lnd().unwrap();
    let low = cyl.delta.kernel_search(3).unwrap();
    for v in ["x", "t"] {
        criterion(
            6,
            &format!("cylinder kernel at bound 3 contains {v}"),
            span_contains(&low, &cyl.scheme.parse(v).unwrap()),
        );
    }
    let kernel = cyl.delta.kernel_search(4).unwrap();
    let qnf = cyl.scheme.nf(&cyl.q).unwrap();
    criterion(6, "cylinder kernel at bound 4 contains q", span_contains(&kernel, &qnf));

    let numerator = cyl
        .q
        .mul(&cyl.q)
        .sub(&cyl.scheme.parse("t^3").unwrap())
        .add(&cyl.scheme.parse("x*(1 + a*t)").unwrap());
    let x2 = cyl.scheme.parse("x^2").unwrap();
    let z_q = cyl.delta.invariant_division(&numerator, &x2, Some(6)).unwrap();
    let relation = x2.mul(&z_q).sub(&numerator);
    criterion(
        6,
        "x^2 z_q = q^2 - t^3 + x(1 + a t) exactly",
        cyl.scheme.is_zero_mod(&relation).unwrap(),
    );
    criterion(6, "z_q invariant", cyl.delta.is_invariant(&z_q).unwrap());
    report_passes(6, &deformed_cubic_invariants());
}

// 7. Affine modification reproduces the hypersurfaces, is saturated, and
// localizes to the base.
#[test]
fn criterion_7_affine_modification() {
    for (m, n, r, h, params) in [
        (2, 2, 3, "1", vec![]),
        (2, 2, 3, "1 + a*t", vec!["a"]),
        (3, 2, 2, "1", vec![]),
    ] {
        let fam = FamilyParams::new(m, n, r, h, &params);
        report_passes(7, &verify_modification_is_y(&fam));
    }
}

// 8. The punctured-plane classes: 1/x - 1/y splits, 1/(xy) admits no
// coboundary within degree 6 / pole order 6.
#[test]
fn criterion_8_cocycle_coboundary() {
    let base = Scheme::new(&[("x", false), ("y", false)], &[], None, &[]).unwrap();
    let charts = [
        ("cx", base.parse("x").unwrap()),
        ("cy", base.parse("y").unwrap()),
    ];

    let mut split = Cover::new(&base, &charts).unwrap();
    let g = split.intersection(0, 1).parse("x_inv - y_inv").unwrap();
    split.set_transition(0, 1, g).unwrap();
    criterion(8, "split cocycle verifies", cocycle_check("split", &split).passed());
    let sol = coboundary_solve(&split, 6, 6).unwrap();
    criterion(8, "1/x - 1/y is a coboundary", sol.is_some());

    let mut twist = Cover::new(&base, &charts).unwrap();
    let g = twist.intersection(0, 1).parse("x_inv*y_inv").unwrap();
    twist.set_transition(0, 1, g).unwrap();
    criterion(8, "twisted cocycle verifies", cocycle_check("twist", &twist).passed());
    let none = coboundary_solve(&twist, 6, 6).unwrap();
    criterion(8, "1/(xy) admits no coboundary within bounds", none.is_none());
}

fn random_poly(rng: &mut StdRng, vars: &std::sync::Arc<VarTable>, max_terms: usize) -> Poly {
    let mut p = Poly::zero(vars);
    let nterms = rng.gen_range(1..=max_terms);
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..vars.len()).map(|_| rng.gen_range(0..=2)).collect();
        let c: i64 = rng.gen_range(-3..=3);
        if c != 0 {
            p = p.add(&Poly::monomial(
                vars,
                exps,
                num_rational::BigRational::from_integer(c.into()),
            ));
        }
    }
    p
}

// 9. Engine soundness: the Buchberger postcondition on every cached
// basis, normal-form idempotence, and membership agreement across
// monomial orders on 1000 randomized small instances.
#[test]
fn criterion_9_engine_soundness() {
    let vars = VarTable::new(&["x", "y", "z"]).unwrap();
    let mut rng = StdRng::seed_from_u64(0x6a71);
    let budget = Budget::default();
    let orders = [
        MonomialOrder::grevlex(3),
        MonomialOrder::lex(vec![0, 1, 2]),
        MonomialOrder::elimination(3, &[2]),
    ];
    let mut postcondition_checked = 0usize;
    for instance in 0..1000 {
        let g1 = random_poly(&mut rng, &vars, 3);
        let g2 = random_poly(&mut rng, &vars, 3);
        let ideal = Ideal::new(&vars, vec![g1.clone(), g2.clone()]).with_budget(budget);
        let p = random_poly(&mut rng, &vars, 3);

        // membership is order-independent
        let verdicts: Vec<bool> = orders
            .iter()
            .map(|o| ideal.normal_form(&p, o).unwrap().is_zero())
            .collect();
        assert!(
            verdicts.iter().all(|&v| v == verdicts[0]),
            "instance {instance}: membership differs across orders"
        );

        // normal form is idempotent and kills known members
        let nf = ideal.nf(&p).unwrap();
        assert_eq!(ideal.nf(&nf).unwrap(), nf, "instance {instance}");
        let member = g1
            .mul(&random_poly(&mut rng, &vars, 2))
            .add(&g2.mul(&random_poly(&mut rng, &vars, 2)));
        assert!(ideal.member(&member).unwrap(), "instance {instance}");

        // every tenth instance, audit all cached bases exhaustively
        if instance % 10 == 0 {
            for basis in ideal.cached_bases() {
                assert!(
                    basis.verify_postcondition(&budget).unwrap(),
                    "instance {instance}: S-polynomial failed to reduce"
                );
                postcondition_checked += 1;
            }
        }
    }
    criterion(
        9,
        &format!(
            "1000 randomized instances, {postcondition_checked} bases audited exhaustively"
        ),
        postcondition_checked > 0,
    );

    // the corpus ideals also satisfy the postcondition on their caches
    for m in 1..=4 {
        let b = build_xm(m).unwrap();
        b.nu.fixed_locus().contains_one().unwrap();
        for basis in b.scheme.ideal().cached_bases() {
            assert!(basis.verify_postcondition(&budget).unwrap());
        }
    }
    criterion(9, "corpus caches satisfy the Buchberger postcondition", true);
}

// 10. Two full suite runs produce identical machine reports, timings
// excepted.
#[test]
fn criterion_10_determinism() {
    let opts = SuiteOptions::default();
    let strip = |reports: Vec<Report>| -> String {
        let stripped: Vec<Report> = reports
            .into_iter()
            .map(|mut r| {
                r.ms = 0;
                r
            })
            .collect();
        serde_json::to_string_pretty(&stripped).unwrap()
    };
    let first = strip(paper_suite(&opts));
    let second = strip(paper_suite(&opts));
    criterion(10, "paper-suite reports are byte-identical modulo timing", first == second);
    // all checks pass on defaults
    let reports = paper_suite(&opts);
    for r in &reports {
        assert!(r.passed(), "{r:?}");
    }
    criterion(10, "full suite passes on default budgets", true);
}
