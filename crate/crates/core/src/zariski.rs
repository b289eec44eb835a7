//! Zariski decompositions `D = P + N` against the candidate curves
//! `C̃₁, C̃₂, Eᵢ, F̃ᵢ`.
//!
//! The nef criterion on `S` is exactly nonnegativity against these curves,
//! so a decomposition whose positive part passes them is nef, and the
//! decomposition is unique once the three defining conditions hold:
//! `P` nef, the support Gram matrix negative definite, `P·Nᵢ = 0`.

use crate::error::{Error, Result};
use crate::linalg;
use crate::picard::{CurveId, DivisorClass, SurfaceModel};
use crate::scalar::Scalar;
use crate::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct ZariskiDecomposition<T> {
    pub positive: DivisorClass<T>,
    /// Support curves with strictly positive coefficients, in candidate
    /// order.
    pub negative: Vec<(CurveId, T)>,
}

impl<T: Scalar> ZariskiDecomposition<T> {
    pub fn support(&self) -> Vec<CurveId> {
        self.negative.iter().map(|(id, _)| *id).collect()
    }

    pub fn negative_class(&self, model: &SurfaceModel) -> DivisorClass<T> {
        self.negative
            .iter()
            .fold(DivisorClass::zero(model.m()), |acc, (id, a)| {
                acc + model.class_of::<T>(*id).expect("support curves are valid").scale(a)
            })
    }
}

fn gram<T: Scalar>(model: &SurfaceModel, classes: &[DivisorClass<T>]) -> Vec<Vec<T>> {
    classes
        .iter()
        .map(|x| classes.iter().map(|y| model.pair(x, y)).collect())
        .collect()
}

/// Sylvester test on the Gram matrix of `curves`.
pub fn is_negative_definite(model: &SurfaceModel, curves: &[CurveId]) -> bool {
    let classes: Option<Vec<DivisorClass<Rat>>> = curves.iter().map(|id| model.class_of(*id).ok()).collect();
    match classes {
        Some(classes) => linalg::is_negative_definite(&gram(model, &classes)),
        None => false,
    }
}

/// Solves `(D − Σ aⱼNⱼ)·Nᵢ = 0` for a fixed support. Returns the
/// coefficients and `P`, or `None` when the Gram matrix is singular.
fn solve_support<T: Scalar>(
    model: &SurfaceModel,
    d: &DivisorClass<T>,
    support: &[DivisorClass<T>],
) -> Option<(Vec<T>, DivisorClass<T>)> {
    if support.is_empty() {
        return Some((Vec::new(), d.clone()));
    }
    let g = gram(model, support);
    let rhs: Vec<T> = support.iter().map(|n| model.pair(d, n)).collect();
    let coeffs = linalg::solve(&g, &rhs)?;
    let p = support
        .iter()
        .zip(&coeffs)
        .fold(d.clone(), |acc, (n, a)| acc - n.scale(a));
    Some((coeffs, p))
}

fn candidate_classes<T: Scalar>(model: &SurfaceModel) -> Vec<(CurveId, DivisorClass<T>)> {
    model
        .candidate_curves()
        .into_iter()
        .map(|id| (id, model.class_of(id).expect("candidates are valid")))
        .collect()
}

fn check_dim<T>(model: &SurfaceModel, d: &DivisorClass<T>) -> Result<()> {
    if d.c.len() != model.m() {
        return Err(Error::DimensionMismatch {
            expected: model.m(),
            found: d.c.len(),
        });
    }
    Ok(())
}

/// Incremental decomposition: start from an empty support and repeatedly
/// absorb every candidate that pairs negatively with the current positive
/// part, re-solving the orthogonality system each time.
pub fn zariski_decompose<T: Scalar>(model: &SurfaceModel, d: &DivisorClass<T>) -> Result<ZariskiDecomposition<T>> {
    check_dim(model, d)?;
    let candidates = candidate_classes::<T>(model);
    let mut in_support = vec![false; candidates.len()];

    // Each pass adds at least one curve, so this is bounded by the
    // number of candidates.
    loop {
        let support: Vec<DivisorClass<T>> = candidates
            .iter()
            .zip(&in_support)
            .filter(|(_, &s)| s)
            .map(|((_, c), _)| c.clone())
            .collect();
        if !linalg::is_negative_definite(&gram(model, &support)) {
            return Err(Error::NotPseudoeffective);
        }
        let (coeffs, p) = solve_support(model, d, &support).ok_or(Error::NotPseudoeffective)?;
        if coeffs.iter().any(|a| a.is_negative()) {
            return Err(Error::NotPseudoeffective);
        }

        let mut grew = false;
        for (k, (_, class)) in candidates.iter().enumerate() {
            if !in_support[k] && model.pair(&p, class).is_negative() {
                in_support[k] = true;
                grew = true;
            }
        }
        if !grew {
            let ids = candidates
                .iter()
                .zip(&in_support)
                .filter(|(_, &s)| s)
                .map(|((id, _), _)| *id);
            let negative = ids.zip(coeffs).filter(|(_, a)| !a.is_zero()).collect();
            return Ok(ZariskiDecomposition { positive: p, negative });
        }
    }
}

/// Reference decomposition by exhaustive search over subsets of the
/// candidate set. Exponential in `m`; meant for cross-checking.
pub fn zariski_decompose_bruteforce<T: Scalar>(
    model: &SurfaceModel,
    d: &DivisorClass<T>,
) -> Result<ZariskiDecomposition<T>> {
    check_dim(model, d)?;
    let candidates = candidate_classes::<T>(model);
    let k = candidates.len();
    assert!(k < usize::BITS as usize, "candidate set too large to enumerate");

    let mut found: Option<ZariskiDecomposition<T>> = None;
    for mask in 0usize..(1 << k) {
        let chosen: Vec<&(CurveId, DivisorClass<T>)> = candidates
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, c)| c)
            .collect();
        let classes: Vec<DivisorClass<T>> = chosen.iter().map(|(_, c)| c.clone()).collect();
        if !linalg::is_negative_definite(&gram(model, &classes)) {
            continue;
        }
        let Some((coeffs, p)) = solve_support(model, d, &classes) else {
            continue;
        };
        if !coeffs.iter().all(|a| a.is_positive()) || !model.is_nef(&p) {
            continue;
        }
        let candidate = ZariskiDecomposition {
            positive: p,
            negative: chosen.iter().map(|(id, _)| *id).zip(coeffs).collect(),
        };
        if found.is_some() {
            return Err(Error::Inconsistency(
                "two supports satisfy the Zariski conditions".into(),
            ));
        }
        found = Some(candidate);
    }
    found.ok_or(Error::NotPseudoeffective)
}

/// Certifies the defining conditions of a decomposition of `d`.
pub fn check_decomposition<T: Scalar>(
    model: &SurfaceModel,
    d: &DivisorClass<T>,
    zd: &ZariskiDecomposition<T>,
) -> Result<()> {
    let fail = |what: &str| Err(Error::Inconsistency(format!("Zariski decomposition: {what}")));
    if !model.is_nef(&zd.positive) {
        return fail("positive part is not nef");
    }
    if zd.negative.iter().any(|(_, a)| !a.is_positive()) {
        return fail("nonpositive coefficient in the negative part");
    }
    if !is_negative_definite(model, &zd.support()) {
        return fail("support is not negative definite");
    }
    for (id, _) in &zd.negative {
        let n = model.class_of::<T>(*id)?;
        if !model.pair(&zd.positive, &n).is_zero() {
            return fail(&format!("P·{id} ≠ 0"));
        }
    }
    if zd.positive.clone() + zd.negative_class(model) != *d {
        return fail("P + N differs from the input class");
    }
    Ok(())
}

/// `vol(D) = P²`.
pub fn volume<T: Scalar>(model: &SurfaceModel, d: &DivisorClass<T>) -> Result<T> {
    let zd = zariski_decompose(model, d)?;
    Ok(model.pair(&zd.positive, &zd.positive))
}
