//! Combines both δ computations into the K-polystability decision.
//!
//! `(S, Δ_β)` is log K-polystable exactly when the angle condition
//! `β₁² − (n/3)β₁³ = β₂² + ((n−m)/3)β₂³` holds and `m ≠ 1`. Off the
//! condition one of `C̃₁`, `C̃₂` has `A/S < 1`; for `m = 1` the exceptional
//! curve `E₁` always does. On the condition with `m ≠ 1` the decision rests
//! on hypotheses about the T-variety terms, which are checked here before
//! the verdict is returned.

use std::cmp::Ordering;
use std::fmt;

use crate::closed_form;
use crate::error::{Error, Result};
use crate::picard::{make_surface, Angles, SurfaceParams};
use crate::scalar::Scalar;
use crate::tvariety::{delta_tvariety, futaki_vanishes, DeltaReport, Valuation};
use crate::volumes::stability_ratio;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    KPolystable,
    NotKPolystable,
    OutsideAmpleRange,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::KPolystable => "KPolystable",
            Status::NotKPolystable => "NotKPolystable",
            Status::OutsideAmpleRange => "OutsideAmpleRange",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict<T> {
    pub status: Status,
    pub condition_sign: Ordering,
    /// Signed left side minus right side of the angle condition.
    pub bracket: T,
    /// Absent outside the ample range.
    pub report: Option<DeltaReport<T>>,
    pub notes: Vec<String>,
}

impl<T: Scalar> Verdict<T> {
    pub fn delta(&self) -> Option<&T> {
        self.report.as_ref().map(|r| &r.delta)
    }

    pub fn witnesses(&self) -> &[Valuation] {
        self.report.as_ref().map_or(&[], |r| &r.witnesses)
    }
}

/// Sign of `(β₁² − (n/3)β₁³) − (β₂² + ((n−m)/3)β₂³)`.
pub fn condition_sign<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Ordering {
    closed_form::bracket(params, angles).sign()
}

/// Minimum of `A/S` over `C̃₁`, `C̃₂` and every `Eᵢ`, computed by volume
/// sweeps, with all minimizers in report order.
pub fn delta_upper_bound<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Result<(T, Vec<Valuation>)> {
    let model = make_surface(params);
    let mut curves = vec![Valuation::C1Tilde, Valuation::C2Tilde];
    curves.extend((1..=params.m).map(Valuation::E));
    let mut best: Option<(T, Vec<Valuation>)> = None;
    for v in curves {
        let r = stability_ratio(&model, v.curve(), angles)?;
        match &mut best {
            Some((b, ws)) if *b == r => ws.push(v),
            Some((b, _)) if *b < r => {}
            _ => best = Some((r, vec![v])),
        }
    }
    Ok(best.expect("two sections are always present"))
}

fn check_branch_hypotheses<T: Scalar>(params: SurfaceParams, report: &DeltaReport<T>) -> Result<()> {
    let one = T::one();
    let fail = |v: &Valuation, want: &str| {
        Err(Error::Inconsistency(format!(
            "at a condition point with m = {} the {v} term should be {want}",
            params.m
        )))
    };
    for (v, t) in &report.terms {
        let fibre = matches!(v, Valuation::FiberOverP0 | Valuation::GenericFiber);
        // For m = 0, 2 the two sections, Eᵢ and F̃ᵢ all have ratio 1;
        // for m ≥ 3 only the sections do and the vertical terms exceed 1.
        let exactly_one = v.is_horizontal() || (params.m <= 2 && !fibre);
        if exactly_one && *t != one {
            return fail(v, "1");
        }
        if !exactly_one && params.m >= 3 && *t <= one {
            return fail(v, "> 1");
        }
        if *t < one {
            return fail(v, ">= 1");
        }
    }
    Ok(())
}

/// The K-polystability verdict together with δ from the T-variety route.
///
/// Returns `Error::Inconsistency` only when the two descriptions of the
/// obstruction disagree or a checked hypothesis fails; inputs outside the
/// ample range yield a verdict with status `OutsideAmpleRange`.
pub fn k_polystable<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Result<Verdict<T>> {
    let bracket = closed_form::bracket(params, angles);
    let sign = bracket.sign();
    let model = make_surface(params);
    if let Some(why) = model.ample_violation(angles) {
        return Ok(Verdict {
            status: Status::OutsideAmpleRange,
            condition_sign: sign,
            bracket,
            report: None,
            notes: vec![why],
        });
    }

    let futaki = futaki_vanishes(params, angles);
    if futaki != sign {
        return Err(Error::Inconsistency(format!(
            "angle condition sign {sign:?} differs from the Futaki sign {futaki:?}"
        )));
    }
    let report = delta_tvariety(params, angles)?;
    if report.delta > T::one() {
        return Err(Error::Inconsistency("delta exceeds 1".into()));
    }

    let mut notes = Vec::new();
    let status = if params.m == 1 {
        if report.delta >= T::one() {
            return Err(Error::Inconsistency("m = 1 but delta is not below 1".into()));
        }
        notes.push("m = 1: the exceptional curve E1 always destabilizes".to_string());
        Status::NotKPolystable
    } else if sign == Ordering::Equal {
        check_branch_hypotheses(params, &report)?;
        if report.delta != T::one() {
            return Err(Error::Inconsistency("condition holds but delta is not 1".into()));
        }
        Status::KPolystable
    } else {
        if report.delta >= T::one() {
            return Err(Error::Inconsistency("condition fails but delta is not below 1".into()));
        }
        notes.push(format!("angle condition fails: bracket = {}", bracket.render()));
        Status::NotKPolystable
    };
    Ok(Verdict {
        status,
        condition_sign: sign,
        bracket,
        report: Some(report),
        notes,
    })
}

/// The point `β₁ = s·β₂` on the angle condition, where
/// `β₂ = 3(s²−1)/(n(s³+1) − m)`.
///
/// For `n = 0` this is `β₂ = (3/m)(1−s²)`. Fails with `NotFound` when the
/// ray `β₁ = sβ₂` misses the condition curve inside the ample range.
pub fn rational_condition_point<T: Scalar>(params: SurfaceParams, s: &T) -> Result<Angles<T>> {
    let not_found = |why: &str| Err(Error::NotFound(why.to_string()));
    if !s.is_positive() {
        return not_found("s must be positive");
    }
    if *s == T::one() {
        return not_found("s = 1 gives beta2 = 0");
    }
    let n = T::from_i64(params.n as i64);
    let m = T::from_i64(params.m as i64);
    let s2 = s.clone() * s.clone();
    let den = n * (s2.clone() * s.clone() + T::one()) - m;
    if den.is_zero() {
        return not_found("the ray beta1 = s*beta2 does not meet the condition curve");
    }
    let beta2 = T::from_i64(3) * (s2 - T::one()) / den;
    if !beta2.is_positive() {
        return not_found("condition point has nonpositive angles");
    }
    let angles = Angles::new(s.clone() * beta2.clone(), beta2)?;
    match make_surface(params).ample_violation(&angles) {
        Some(why) => not_found(&format!("condition point outside the ample range: {why}")),
        None => Ok(angles),
    }
}

/// Interval `[lo, hi]` of `β₁` values, for fixed `β₂`, across which the
/// angle condition changes sign. `lo == hi` when the root was hit exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionBracket<T> {
    pub beta2: T,
    pub lo: T,
    pub hi: T,
}

/// Bisects in `β₁` until the sign change is confined to width at most
/// `width`. The bracket is increasing in `β₁` on `(0, 2/n)`.
pub fn condition_bracket<T: Scalar>(params: SurfaceParams, beta2: &T, width: &T) -> Result<ConditionBracket<T>> {
    if !width.is_positive() {
        return Err(Error::NotFound("width must be positive".into()));
    }
    if !beta2.is_positive() {
        return Err(Error::NonPositiveAngle);
    }
    let n = params.n as i64;
    let m = params.m as i64;
    if n < m && *beta2 >= T::from_frac(2, m - n) {
        return Err(Error::NotFound(format!("beta2 must be < 2/(m-n) = 2/{}", m - n)));
    }
    let at = |b1: &T| -> Result<T> { Ok(closed_form::bracket(params, &Angles::new(b1.clone(), beta2.clone())?)) };
    // Bracket at β₁ = 0 is −(β₂² + ((n−m)/3)β₂³).
    let offset =
        -(beta2.clone() * beta2.clone() + T::from_frac(n - m, 3) * beta2.clone() * beta2.clone() * beta2.clone());
    if !offset.is_negative() {
        return Err(Error::NotFound(
            "no positive beta1 satisfies the condition for this beta2".into(),
        ));
    }
    let mut hi = if n > 0 {
        T::from_frac(2, n)
    } else {
        T::one() - offset.clone()
    };
    let mut lo = T::zero();
    if n > 0 && !(offset.clone() + T::from_frac(4, 3 * n * n)).is_positive() {
        return Err(Error::NotFound("the condition is not met below beta1 = 2/n".into()));
    }
    let half = T::one() / T::from_i64(2);
    while hi.clone() - lo.clone() > *width {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        match at(&mid)?.sign() {
            Ordering::Less => lo = mid,
            Ordering::Greater => hi = mid,
            Ordering::Equal => {
                return Ok(ConditionBracket {
                    beta2: beta2.clone(),
                    lo: mid.clone(),
                    hi: mid,
                })
            }
        }
    }
    Ok(ConditionBracket {
        beta2: beta2.clone(),
        lo,
        hi,
    })
}

/// Sweep ratios for the four divisor families, in the order `C̃₁`, `C̃₂`,
/// `E₁`, `F̃₁` (the last two absent when `m = 0`).
pub fn sweep_ratios<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Result<Vec<(Valuation, T)>> {
    let model = make_surface(params);
    let mut vals = vec![Valuation::C1Tilde, Valuation::C2Tilde];
    if params.m > 0 {
        vals.extend([Valuation::E(1), Valuation::FTilde(1)]);
    }
    vals.into_iter()
        .map(|v| Ok((v, stability_ratio(&model, v.curve(), angles)?)))
        .collect()
}
