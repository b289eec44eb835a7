//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kee_core::closed_form::{ratio_list, s_c1, s_c2, s_exceptional};
use kee_core::tvariety::Valuation;
use kee_core::verdict::{k_polystable, rational_condition_point, Status};
use kee_core::verify::{run_suite, Suite, SuiteReport};
use kee_core::{Angles, Rat, Scalar, SurfaceParams};

const SEED: u64 = 20240601;

struct Outcome {
    ok: bool,
    detail: String,
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn from_suite(r: &SuiteReport) -> Outcome {
    Outcome {
        ok: r.ok(),
        detail: r.to_string(),
    }
}

fn suite_with_floor(suite: Suite, samples: usize, floor: usize) -> Outcome {
    let r = run_suite(suite, samples, SEED);
    let mut o = from_suite(&r);
    if r.samples < floor {
        o.ok = false;
        o.detail += &format!(" (needs at least {floor} samples)");
    }
    o
}

fn q(n: i64, d: i64) -> Rat {
    Rat::from_frac(n, d)
}

fn named_points() -> Outcome {
    let mut problems = Vec::new();
    let mut check = |label: &str, cond: bool| {
        if !cond {
            problems.push(label.to_string());
        }
    };

    // The closed-form ratios give the frozen values independently of
    // both routes.
    let p02 = SurfaceParams::new(0, 2);
    let p01 = SurfaceParams::new(0, 1);
    let cond = Angles::new(q(63, 128), q(21, 32)).unwrap();
    let e_point = Angles::new(q(144, 125), q(48, 25)).unwrap();
    let half = Angles::new(q(1, 2), q(1, 2)).unwrap();
    check(
        "closed-form ratios at the m=2 condition point",
        ratio_list(p02, &cond).iter().all(|r| *r == q(1, 1)),
    );
    check(
        "closed-form S(E1) = 202/175",
        s_exceptional(p01, &e_point) == q(202, 175),
    );
    check("closed-form S(C1tilde) = 19/42", s_c1(p02, &half) == q(19, 42));
    check("closed-form S(C2tilde) = 23/42", s_c2(p02, &half) == q(23, 42));
    check(
        "condition points from s",
        rational_condition_point(p02, &q(3, 4)).ok() == Some(cond.clone())
            && rational_condition_point(p01, &q(3, 5)).ok() == Some(e_point.clone()),
    );

    match k_polystable(p02, &cond) {
        Ok(v) => check(
            "m=2 condition point is KPolystable with delta 1",
            v.status == Status::KPolystable && v.delta() == Some(&q(1, 1)),
        ),
        Err(e) => check(&format!("m=2 condition point: {e}"), false),
    }
    match k_polystable(p01, &e_point) {
        Ok(v) => check(
            "m=1 point is NotKPolystable, delta 175/202, witness E1",
            v.status == Status::NotKPolystable
                && v.delta() == Some(&q(175, 202))
                && v.witnesses().first() == Some(&Valuation::E(1)),
        ),
        Err(e) => check(&format!("m=1 point: {e}"), false),
    }
    match k_polystable(p02, &half) {
        Ok(v) => check(
            "(1/2, 1/2) has delta 21/23 with witness C2tilde",
            v.delta() == Some(&q(21, 23)) && v.witnesses() == [Valuation::C2Tilde],
        ),
        Err(e) => check(&format!("(1/2, 1/2): {e}"), false),
    }
    Outcome {
        ok: problems.is_empty(),
        detail: if problems.is_empty() {
            "three named verdicts reproduced".into()
        } else {
            format!("failed: {}", problems.join("; "))
        },
    }
}

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        (
            "volume curves match the closed forms (200 per regime, under 60 s)",
            Box::new(|| {
                let start = Instant::now();
                let mut o = suite_with_floor(Suite::Lemmas, 200, 6 * 200);
                let took = start.elapsed();
                o.detail += &format!(" in {:.1} s", took.as_secs_f64());
                o.ok &= took < Duration::from_secs(60);
                o
            }),
        ),
        (
            "expected vanishing orders match the closed forms",
            Box::new(|| suite_with_floor(Suite::SValues, 200, 6 * 200)),
        ),
        (
            "incremental Zariski decomposition equals the exhaustive oracle",
            Box::new(|| suite_with_floor(Suite::ZariskiOracle, 100, 100)),
        ),
        (
            "T-variety terms equal the sweep ratios",
            Box::new(|| suite_with_floor(Suite::RouteAgreement, 200, 200)),
        ),
        (
            "vol(Psi) is half the anticanonical volume",
            Box::new(|| suite_with_floor(Suite::Halving, 500, 500)),
        ),
        ("named-point verdicts", Box::new(named_points)),
        (
            "delta <= 1, with equality exactly on the condition for m != 1",
            Box::new(|| suite_with_floor(Suite::Nec, 500, 500)),
        ),
        (
            "negative definite curve families and their boundary failures",
            Box::new(|| suite_with_floor(Suite::NegativeDefinite, 0, 1)),
        ),
        (
            "m = 0 angle condition on rational grids for n = 0, 1, 2",
            Box::new(|| suite_with_floor(Suite::M0Reduction, 8, 1)),
        ),
    ];

    let mut all_ok = true;
    for (k, (label, run)) in criteria.iter().enumerate() {
        let o = run();
        all_ok &= o.ok;
        println!(
            "{} criterion {}: {label}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
