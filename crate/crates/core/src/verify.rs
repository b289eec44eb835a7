//! Seeded cross-checks between independent computations.
//!
//! Each suite draws its inputs sequentially from a [`Sampler`], evaluates
//! them in parallel and reports the first failing input in draw order, so
//! a report depends only on the suite, the sample count and the seed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::closed_form::{self, Lemma};
use crate::picard::{make_surface, Angles, CurveId, DivisorClass, SurfaceParams};
use crate::sampling::{Sample, Sampler, MAX_N};
use crate::scalar::Scalar;
use crate::tvariety::{
    anticanonical_support_function, barycenter, build_fdivisor, delta_tvariety, futaki_vanishes, legendre_dual,
    vol_psi, Valuation,
};
use crate::verdict::{condition_sign, delta_upper_bound, k_polystable, rational_condition_point, Status};
use crate::volumes::{expected_vanishing_order, stability_ratio, volume_curve};
use crate::zariski::{check_decomposition, is_negative_definite, zariski_decompose, zariski_decompose_bruteforce};
use crate::Rat;

/// Largest `m` for the brute-force Zariski oracle (`2^(2m+2)` subsets).
pub const ORACLE_MAX_M: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Sweep against the closed-form volume curves, per regime.
    Lemmas,
    /// `S` from the sweep against the closed forms.
    SValues,
    /// Incremental Zariski decomposition against subset enumeration.
    ZariskiOracle,
    /// T-variety terms against sweep ratios and closed forms.
    RouteAgreement,
    /// `vol(Ψ) = L²/2`.
    Halving,
    /// `δ ≤ 1`, with equality only on the angle condition and `m ≠ 1`.
    Nec,
    /// Negative definiteness of the curve configurations used in
    /// decompositions, and failure just outside their constraints.
    NegativeDefinite,
    /// The `m = 0` angle condition on constructed grids.
    M0Reduction,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemmas,
        Suite::SValues,
        Suite::ZariskiOracle,
        Suite::RouteAgreement,
        Suite::Halving,
        Suite::Nec,
        Suite::NegativeDefinite,
        Suite::M0Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::SValues => "s-values",
            Suite::ZariskiOracle => "zariski-oracle",
            Suite::RouteAgreement => "route-agreement",
            Suite::Halving => "halving",
            Suite::Nec => "nec",
            Suite::NegativeDefinite => "negative-definite",
            Suite::M0Reduction => "m0-reduction",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            format!("unknown suite {s:?}; expected one of {}", names.join(", "))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub samples: usize,
    pub passed: usize,
    /// First failing input in draw order, with the reason.
    pub counterexample: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.counterexample.is_none() && self.passed == self.samples
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.samples)?;
        if let Some(c) = &self.counterexample {
            write!(f, "; first failure: {c}")?;
        }
        Ok(())
    }
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn run<I, F>(name: &str, items: Vec<I>, check: F) -> SuiteReport
where
    I: fmt::Display + Sync,
    F: Fn(&I) -> Check + Sync,
{
    let results: Vec<Check> = items.par_iter().map(&check).collect();
    let passed = results.iter().filter(|r| r.is_ok()).count();
    let counterexample = items
        .iter()
        .zip(&results)
        .find_map(|(i, r)| r.as_ref().err().map(|e| format!("{i}: {e}")));
    SuiteReport {
        name: name.to_string(),
        samples: items.len(),
        passed,
        counterexample,
    }
}

/// Runs `suite` on `samples` inputs drawn from `seed`. For the lemma
/// suites `samples` counts inputs per regime; for the two grid suites it
/// sets the grid resolution.
pub fn run_suite(suite: Suite, samples: usize, seed: u64) -> SuiteReport {
    let mut sampler = Sampler::new(seed);
    match suite {
        Suite::Lemmas => run(suite.name(), lemma_samples(&mut sampler, samples), check_lemma),
        Suite::SValues => run(suite.name(), lemma_samples(&mut sampler, samples), check_s_value),
        Suite::ZariskiOracle => {
            let items = (0..samples).map(|_| oracle_sample(&mut sampler)).collect();
            run(suite.name(), items, check_oracle)
        }
        Suite::RouteAgreement => run(suite.name(), ample_samples(&mut sampler, samples), check_routes),
        Suite::Halving => run(suite.name(), ample_samples(&mut sampler, samples), check_halving),
        Suite::Nec => run(suite.name(), nec_samples(&mut sampler, samples), check_nec),
        Suite::NegativeDefinite => run(suite.name(), negative_definite_cases(), check_negative_definite),
        Suite::M0Reduction => run(suite.name(), m0_grid(samples.max(1)), check_m0),
    }
}

fn lemma_samples(sampler: &mut Sampler, per_lemma: usize) -> Vec<LemmaSample> {
    Lemma::ALL
        .into_iter()
        .flat_map(|lemma| (0..per_lemma).map(move |_| lemma))
        .map(|lemma| LemmaSample {
            lemma,
            sample: sampler.lemma_point(lemma),
        })
        .collect()
}

fn ample_samples(sampler: &mut Sampler, count: usize) -> Vec<Sample> {
    (0..count).map(|_| sampler.ample_point()).collect()
}

struct LemmaSample {
    lemma: Lemma,
    sample: Sample,
}

impl fmt::Display for LemmaSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.lemma.name(), self.sample)
    }
}

fn check_lemma(item: &LemmaSample) -> Check {
    let Sample { params, angles, curve } = &item.sample;
    let curve = curve.expect("lemma samples carry a curve");
    let model = make_surface(*params);
    let sweep = volume_curve(&model, curve, angles).map_err(|e| e.to_string())?;
    let closed = item
        .lemma
        .volume_curve(*params, angles)
        .ok_or("sample outside the regime")?;
    ensure(sweep.same_function(&closed), || {
        format!(
            "sweep breakpoints {:?} differ from closed form {:?}",
            render(&sweep.breakpoints()),
            render(&closed.breakpoints())
        )
    })?;
    // Closed forms may split a chamber where the support is unchanged
    // (e.g. a wall indexed by the other Eⱼ when m = 1), never the reverse.
    let walls = closed.breakpoints();
    ensure(sweep.breakpoints().iter().all(|b| walls.contains(b)), || {
        format!("sweep wall not among closed-form walls {:?}", render(&walls))
    })?;
    ensure(sweep.is_continuous() && sweep.is_nonincreasing(), || {
        "not continuous and nonincreasing".into()
    })?;
    let l = model.log_anticanonical(angles);
    let e = model.class_of::<Rat>(curve).map_err(|e| e.to_string())?;
    let first = &sweep.pieces[0];
    ensure(first.poly.eval(&Rat::zero()) == model.pair(&l, &l), || {
        "vol at 0 is not L²".into()
    })?;
    ensure(sweep.eval(&sweep.tau()) == Some(Rat::zero()), || {
        "vol at the threshold is not 0".into()
    })?;
    ensure(
        first.poly.derivative_at(&Rat::zero()) == -(Rat::from_i64(2) * model.pair(&l, &e)),
        || "slope at 0 is not -2L·E".into(),
    )
}

fn render(xs: &[Rat]) -> Vec<String> {
    xs.iter().map(|x| x.render()).collect()
}

fn check_s_value(item: &LemmaSample) -> Check {
    let Sample { params, angles, curve } = &item.sample;
    let curve = curve.expect("lemma samples carry a curve");
    let model = make_surface(*params);
    let s = expected_vanishing_order(&model, curve, angles).map_err(|e| e.to_string())?;
    let expected = match curve {
        CurveId::C1Tilde => closed_form::s_c1(*params, angles),
        CurveId::C2Tilde => closed_form::s_c2(*params, angles),
        _ => closed_form::s_exceptional(*params, angles),
    };
    ensure(s == expected, || {
        format!("S = {} but the closed form gives {}", s.render(), expected.render())
    })?;
    // β₁ − S(C̃₁) = S(C̃₂) − β₂
    let s1 = closed_form::s_c1(*params, angles);
    let s2 = closed_form::s_c2(*params, angles);
    ensure(angles.beta1.clone() - s1 == s2 - angles.beta2.clone(), || {
        "section S-values are not symmetric about the angles".into()
    })
}

struct OracleSample {
    params: SurfaceParams,
    class: DivisorClass<Rat>,
}

impl fmt::Display for OracleSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.class.c.iter().map(|x| x.render()).collect();
        write!(
            f,
            "n={} m={} D=({}, {}, [{}])",
            self.params.n,
            self.params.m,
            self.class.a.render(),
            self.class.b.render(),
            c.join(", ")
        )
    }
}

fn oracle_sample(sampler: &mut Sampler) -> OracleSample {
    let params = SurfaceParams::new(
        sampler.index(MAX_N as usize + 1) as u32,
        sampler.index(ORACLE_MAX_M + 1),
    );
    OracleSample {
        params,
        class: sampler.effective_class(params),
    }
}

fn check_oracle(item: &OracleSample) -> Check {
    let model = make_surface(item.params);
    let fast = zariski_decompose(&model, &item.class).map_err(|e| e.to_string())?;
    check_decomposition(&model, &item.class, &fast).map_err(|e| e.to_string())?;
    let slow = zariski_decompose_bruteforce(&model, &item.class).map_err(|e| e.to_string())?;
    ensure(fast == slow, || {
        "incremental and exhaustive decompositions differ".into()
    })
}

fn check_routes(sample: &Sample) -> Check {
    let Sample { params, angles, .. } = sample;
    let model = make_surface(*params);
    let report = delta_tvariety(*params, angles).map_err(|e| e.to_string())?;
    let [c1, c2, e, f] = closed_form::ratio_list(*params, angles);
    for (v, term) in &report.terms {
        let sweep = stability_ratio(&model, v.curve(), angles).map_err(|e| e.to_string())?;
        ensure(*term == sweep, || {
            format!(
                "{v}: T-variety term {} but sweep ratio {}",
                term.render(),
                sweep.render()
            )
        })?;
        let closed = match v {
            Valuation::C1Tilde => Some(&c1),
            Valuation::C2Tilde => Some(&c2),
            Valuation::E(_) => Some(&e),
            Valuation::FTilde(_) => Some(&f),
            _ => None,
        };
        if let Some(closed) = closed {
            ensure(term == closed, || {
                format!(
                    "{v}: T-variety term {} but closed form {}",
                    term.render(),
                    closed.render()
                )
            })?;
        }
    }
    Ok(())
}

fn check_halving(sample: &Sample) -> Check {
    let Sample { params, angles, .. } = sample;
    let model = make_surface(*params);
    let fdiv = build_fdivisor(*params);
    let dual = legendre_dual(&anticanonical_support_function(&fdiv, angles));
    let l = model.log_anticanonical(angles);
    let l2 = model.pair(&l, &l);
    let v = vol_psi(&dual);
    ensure(v.clone() * Rat::from_i64(2) == l2, || {
        format!(
            "vol(Psi) = {} but L^2/2 = {}",
            v.render(),
            (l2.clone() / Rat::from_i64(2)).render()
        )
    })?;
    let bc = barycenter(&dual);
    ensure(dual.lo < bc && bc < dual.hi, || {
        format!("barycenter {} outside the box", bc.render())
    })?;
    let positive_inside = dual.deg_psi.breakpoints().windows(2).all(|w| {
        dual.deg_psi
            .eval(&((w[0].clone() + w[1].clone()) / Rat::from_i64(2)))
            .is_some_and(|x| x.is_positive())
    });
    ensure(positive_inside, || "deg Psi is not positive inside the box".into())
}

/// Random ample points, every third one replaced by a point on the angle
/// condition when one exists for the drawn `(n, m)`.
fn nec_samples(sampler: &mut Sampler, count: usize) -> Vec<Sample> {
    (0..count)
        .map(|k| {
            let sample = sampler.ample_point();
            if k % 3 != 0 {
                return sample;
            }
            let s = sampler.rational();
            match rational_condition_point(sample.params, &s) {
                Ok(angles) => Sample { angles, ..sample },
                Err(_) => sample,
            }
        })
        .collect()
}

fn check_nec(sample: &Sample) -> Check {
    let Sample { params, angles, .. } = sample;
    let verdict = k_polystable(*params, angles).map_err(|e| e.to_string())?;
    let delta = verdict.delta().ok_or("no delta inside the ample range")?.clone();
    ensure(delta <= Rat::one(), || format!("delta = {} exceeds 1", delta.render()))?;
    let on_condition = verdict.condition_sign == Ordering::Equal;
    ensure((delta == Rat::one()) == (on_condition && params.m != 1), || {
        format!(
            "delta = {} with condition sign {:?}",
            delta.render(),
            verdict.condition_sign
        )
    })?;
    ensure(
        (verdict.status == Status::KPolystable) == (on_condition && params.m != 1),
        || {
            format!(
                "status {} with condition sign {:?}",
                verdict.status, verdict.condition_sign
            )
        },
    )?;
    let (bound, _) = delta_upper_bound(*params, angles).map_err(|e| e.to_string())?;
    ensure(delta <= bound && bound <= Rat::one(), || {
        format!("delta {} above the sweep bound {}", delta.render(), bound.render())
    })?;
    ensure(futaki_vanishes(*params, angles) == verdict.condition_sign, || {
        "Futaki sign differs".into()
    })?;
    let model = make_surface(*params);
    let s1 = expected_vanishing_order(&model, CurveId::C1Tilde, angles).map_err(|e| e.to_string())?;
    let s2 = expected_vanishing_order(&model, CurveId::C2Tilde, angles).map_err(|e| e.to_string())?;
    ensure(
        (s1 == angles.beta1) == on_condition && (s2 == angles.beta2) == on_condition,
        || "S(C1tilde) = beta1 or S(C2tilde) = beta2 disagrees with the condition".into(),
    )
}

/// A curve configuration with the expected negative-definiteness.
pub struct CurveFamily {
    pub family: usize,
    pub params: SurfaceParams,
    pub curves: Vec<CurveId>,
    pub expected: bool,
}

impl fmt::Display for CurveFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.curves.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "family {} n={} m={} {{{}}} expected {}",
            self.family,
            self.params.n,
            self.params.m,
            names.join(", "),
            if self.expected {
                "negative definite"
            } else {
                "not negative definite"
            }
        )
    }
}

/// The seven configurations over `n, m ≤ 6` under their constraints, plus
/// the boundary cases that must fail: `n = 1` for `{C̃₁, F̃ᵢ}`, `n = m`
/// for `{C̃₁, F̃₁…F̃_m}` and `{C̃₂, F̃ᵢ}`, and `n = 1` or `n = m` for
/// `{C̃₁, C̃₂, F̃ᵢ}`.
pub fn negative_definite_cases() -> Vec<CurveFamily> {
    let mut out = Vec::new();
    for n in 0..=MAX_N {
        for m in 1..=crate::sampling::MAX_M {
            let (ni, params) = (n as usize, SurfaceParams::new(n, m));
            let mut push = |family: usize, curves: Vec<CurveId>, expected: bool| {
                out.push(CurveFamily {
                    family,
                    params,
                    curves,
                    expected,
                })
            };
            push(1, (1..=m).map(CurveId::FTilde).collect(), true);
            push(2, (1..=m).map(CurveId::E).collect(), true);
            for i in 1..=m {
                if n > 1 {
                    push(3, vec![CurveId::C1Tilde, CurveId::FTilde(i)], true);
                }
                if n == 1 {
                    push(3, vec![CurveId::C1Tilde, CurveId::FTilde(i)], false);
                }
                if ni < m {
                    push(5, vec![CurveId::C2Tilde, CurveId::FTilde(i)], true);
                }
                if ni == m {
                    push(5, vec![CurveId::C2Tilde, CurveId::FTilde(i)], false);
                }
                let six = vec![CurveId::C1Tilde, CurveId::C2Tilde, CurveId::FTilde(i)];
                if 1 < n && ni < m {
                    push(6, six.clone(), true);
                }
                if (n == 1 && m > 1) || (ni == m && n > 1) {
                    push(6, six, false);
                }
                if n == 0 {
                    let mut seven = vec![CurveId::C2Tilde, CurveId::FTilde(i)];
                    seven.extend((1..=m).filter(|&j| j != i).map(CurveId::E));
                    push(7, seven, true);
                }
            }
            let mut four = vec![CurveId::C1Tilde];
            four.extend((1..=m).map(CurveId::FTilde));
            if ni > m {
                push(4, four.clone(), true);
            }
            if ni == m {
                push(4, four, false);
            }
        }
    }
    out
}

fn check_negative_definite(case: &CurveFamily) -> Check {
    let got = is_negative_definite(&make_surface(case.params), &case.curves);
    ensure(got == case.expected, || format!("got {got}"))
}

/// A grid point for the `m = 0` suite, and whether it was constructed on
/// the condition curve.
pub struct GridPoint {
    pub n: u32,
    pub angles: Angles<Rat>,
    pub on_curve: bool,
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m=0 beta1={} beta2={} ({})",
            self.n,
            self.angles.beta1.render(),
            self.angles.beta2.render(),
            if self.on_curve {
                "on the condition curve"
            } else {
                "off the curve"
            }
        )
    }
}

/// For `n ∈ {0, 1, 2}`: a `k × k` grid of rational angles in the ample box
/// and, for each `s` on a grid of slopes, the condition point on the ray
/// `β₁ = sβ₂` (for `n = 0` the diagonal `β₁ = β₂`).
pub fn m0_grid(k: usize) -> Vec<GridPoint> {
    let mut out = Vec::new();
    let den = k as i64 + 1;
    for n in 0..=2u32 {
        let b1_max = if n == 0 {
            Rat::from_i64(2)
        } else {
            Rat::from_frac(2, n as i64)
        };
        for i in 1..=k as i64 {
            for j in 1..=k as i64 {
                let b1 = b1_max.clone() * Rat::from_frac(i, den);
                let b2 = Rat::from_frac(2 * j, den);
                let angles = Angles::new(b1, b2).expect("positive");
                let on_curve = closed_form::bracket(SurfaceParams::new(n, 0), &angles).is_zero();
                out.push(GridPoint { n, angles, on_curve });
            }
            let s = if n == 0 {
                Rat::from_frac(2 * i, den)
            } else {
                Rat::one() + Rat::from_frac(i, 4 * den)
            };
            let point = if n == 0 {
                Some(Angles::new(s.clone(), s).expect("positive"))
            } else {
                rational_condition_point(SurfaceParams::new(n, 0), &s).ok()
            };
            if let Some(angles) = point {
                out.push(GridPoint {
                    n,
                    angles,
                    on_curve: true,
                });
            }
        }
    }
    out
}

fn check_m0(point: &GridPoint) -> Check {
    let params = SurfaceParams::new(point.n, 0);
    let (b1, b2) = (&point.angles.beta1, &point.angles.beta2);
    // β₁² − (n/3)β₁³ = β₂² + (n/3)β₂³, evaluated directly.
    let n3 = Rat::from_frac(point.n as i64, 3);
    let lhs = b1.clone() * b1.clone() - n3.clone() * b1.clone() * b1.clone() * b1.clone();
    let rhs = b2.clone() * b2.clone() + n3 * b2.clone() * b2.clone() * b2.clone();
    let direct = (lhs - rhs).sign();
    let sign = condition_sign(params, &point.angles);
    ensure(sign == direct, || {
        format!("condition sign {sign:?} but direct sign {direct:?}")
    })?;
    ensure((sign == Ordering::Equal) == point.on_curve, || {
        "membership on the curve disagrees".into()
    })?;
    let verdict = k_polystable(params, &point.angles).map_err(|e| e.to_string())?;
    let expected = if !make_surface(params).ample_angle_range(&point.angles) {
        Status::OutsideAmpleRange
    } else if point.on_curve {
        Status::KPolystable
    } else {
        Status::NotKPolystable
    };
    ensure(verdict.status == expected, || {
        format!("status {} expected {expected}", verdict.status)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>(), Ok(s));
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_runs_pass_and_are_deterministic() {
        for s in Suite::ALL {
            let a = run_suite(s, 4, 3);
            assert!(a.ok(), "{a}");
            assert_eq!(a, run_suite(s, 4, 3));
        }
    }

    #[test]
    fn nec_and_grid_inputs_reach_the_condition_curve() {
        let samples = nec_samples(&mut Sampler::new(20240601), 500);
        let on = samples
            .iter()
            .filter(|s| condition_sign(s.params, &s.angles) == Ordering::Equal)
            .count();
        assert!(on >= 30, "only {on} condition points");
        let grid = m0_grid(8);
        for n in 0..=2 {
            assert!(grid.iter().any(|g| g.n == n && g.on_curve));
            assert!(grid.iter().any(|g| g.n == n && !g.on_curve));
        }
    }

    #[test]
    fn broken_expectation_is_reported_first_in_order() {
        let mut cases = negative_definite_cases();
        cases[1].expected = !cases[1].expected;
        cases[3].expected = !cases[3].expected;
        let r = run("nd", cases, check_negative_definite);
        assert_eq!(r.passed, r.samples - 2);
        assert!(r.counterexample.unwrap().starts_with("family 2 n=0 m=1"));
    }
}
