//! Volume curves `x ↦ vol(−K_{S,Δ_β} − xE)` and the quantities derived
//! from them: the pseudoeffective threshold `τ`, the expected vanishing
//! order `S` and the log discrepancy `A`.
//!
//! The curve is built by an exact chamber sweep. At each chamber start
//! `x₀` the Zariski decomposition of `L − (x₀+ε)E` is computed with an
//! infinitesimal `ε`, which yields the support just right of `x₀` together
//! with the derivative of every coefficient. Inside the chamber `P(x)` is
//! affine in `x`, so `vol = P(x)²` is quadratic and the next wall is the
//! first root of an affine pairing or coefficient.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::picard::{Angles, CurveId, DivisorClass, SurfaceModel};
use crate::quadratic::Quadratic;
use crate::scalar::{Perturbed, Scalar};
use crate::zariski::zariski_decompose;

/// One chamber of a volume curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    /// Volume on `[lo, hi]`, in the absolute variable `x`.
    pub poly: Quadratic<T>,
    /// Zariski negative support on the open chamber. Empty for pieces
    /// built from closed forms.
    pub support: Vec<CurveId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseQuadratic<T> {
    pub pieces: Vec<Piece<T>>,
}

fn sort_dedup<T: Scalar>(mut xs: Vec<T>) -> Vec<T> {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    xs.dedup();
    xs
}

impl<T: Scalar> PiecewiseQuadratic<T> {
    pub fn new(pieces: Vec<Piece<T>>) -> Self {
        PiecewiseQuadratic { pieces }
    }

    /// Right end of the domain.
    pub fn tau(&self) -> T {
        self.pieces.last().map(|p| p.hi.clone()).unwrap_or_else(T::zero)
    }

    pub fn breakpoints(&self) -> Vec<T> {
        let mut out: Vec<T> = self.pieces.iter().map(|p| p.lo.clone()).collect();
        if let Some(last) = self.pieces.last() {
            out.push(last.hi.clone());
        }
        out
    }

    fn piece_containing(&self, lo: &T, hi: &T) -> Option<&Piece<T>> {
        self.pieces.iter().find(|p| p.lo <= *lo && *hi <= p.hi)
    }

    /// Value at `x`; at a wall the left piece is used (the curve is
    /// continuous, so the choice is immaterial).
    pub fn eval(&self, x: &T) -> Option<T> {
        self.pieces
            .iter()
            .find(|p| p.lo <= *x && *x <= p.hi)
            .map(|p| p.poly.eval(x))
    }

    pub fn integral(&self) -> T {
        self.pieces
            .iter()
            .fold(T::zero(), |acc, p| acc + p.poly.integral(&p.lo, &p.hi))
    }

    pub fn is_continuous(&self) -> bool {
        self.pieces
            .windows(2)
            .all(|w| w[0].hi == w[1].lo && w[0].poly.eval(&w[0].hi) == w[1].poly.eval(&w[1].lo))
    }

    /// The derivative of a quadratic is affine, so checking both ends of
    /// each piece suffices.
    pub fn is_nonincreasing(&self) -> bool {
        self.pieces
            .iter()
            .all(|p| !p.poly.derivative_at(&p.lo).is_positive() && !p.poly.derivative_at(&p.hi).is_positive())
    }

    /// Same domain and identical polynomials on every cell of the common
    /// refinement of both breakpoint sets. Support annotations are ignored.
    pub fn same_function(&self, other: &Self) -> bool {
        let (Some(a0), Some(b0)) = (self.pieces.first(), other.pieces.first()) else {
            return self.pieces.is_empty() && other.pieces.is_empty();
        };
        if a0.lo != b0.lo || self.tau() != other.tau() {
            return false;
        }
        let mut cuts = self.breakpoints();
        cuts.extend(other.breakpoints());
        let cuts = sort_dedup(cuts);
        cuts.windows(2).all(|w| {
            match (
                self.piece_containing(&w[0], &w[1]),
                other.piece_containing(&w[0], &w[1]),
            ) {
                (Some(p), Some(q)) => p.poly == q.poly,
                _ => false,
            }
        })
    }

    pub fn map<U: Scalar, F: Fn(&T) -> U>(&self, f: F) -> PiecewiseQuadratic<U> {
        PiecewiseQuadratic {
            pieces: self
                .pieces
                .iter()
                .map(|p| Piece {
                    lo: f(&p.lo),
                    hi: f(&p.hi),
                    poly: p.poly.map(&f),
                    support: p.support.clone(),
                })
                .collect(),
        }
    }
}

fn perturbed_class<T: Scalar>(value: &DivisorClass<T>, slope: &DivisorClass<T>) -> DivisorClass<Perturbed<T>> {
    DivisorClass {
        a: Perturbed::new(value.a.clone(), slope.a.clone()),
        b: Perturbed::new(value.b.clone(), slope.b.clone()),
        c: value
            .c
            .iter()
            .zip(&slope.c)
            .map(|(v, s)| Perturbed::new(v.clone(), s.clone()))
            .collect(),
    }
}

fn keep_min<T: Scalar>(slot: &mut Option<T>, candidate: T) {
    if slot.as_ref().is_none_or(|cur| candidate < *cur) {
        *slot = Some(candidate);
    }
}

/// Smallest `t > 0` with `c0 + 2·c1·t + c2·t² = 0`, given `c0 > 0`.
fn first_positive_root<T: Scalar>(c0: &T, c1: &T, c2: &T) -> Result<T> {
    let two = T::from_i64(2);
    let no_root = || Error::Inconsistency("volume never reaches zero in the last chamber".into());
    if c2.is_zero() {
        if c1.is_negative() {
            return Ok(-c0.clone() / (two * c1.clone()));
        }
        return Err(no_root());
    }
    let disc = c1.clone() * c1.clone() - c0.clone() * c2.clone();
    if disc.is_negative() {
        return Err(no_root());
    }
    let r = disc.exact_sqrt().ok_or(Error::IrrationalThreshold)?;
    let roots = [(-c1.clone() - r.clone()) / c2.clone(), (-c1.clone() + r) / c2.clone()];
    let mut best = None;
    for t in roots {
        if t.is_positive() {
            keep_min(&mut best, t);
        }
    }
    best.ok_or_else(no_root)
}

/// Exact chambered volume curve of `−K_{S,Δ_β} − x·E` on `[0, τ]`.
pub fn volume_curve<T: Scalar>(
    model: &SurfaceModel,
    curve: CurveId,
    angles: &Angles<T>,
) -> Result<PiecewiseQuadratic<T>> {
    if let Some(why) = model.ample_violation(angles) {
        return Err(Error::OutsideAmpleRange(why));
    }
    let l = model.log_anticanonical(angles);
    let e = model.class_of::<T>(curve)?;
    let minus_e = -e.clone();
    let candidates: Vec<(CurveId, DivisorClass<T>)> = model
        .candidate_curves()
        .into_iter()
        .map(|id| (id, model.class_of(id).expect("candidates are valid")))
        .collect();

    let mut pieces = Vec::new();
    let mut x0 = T::zero();
    // Supports only change at walls and each chamber has positive width;
    // the bound is a guard against a broken invariant.
    for _ in 0..4 * candidates.len() + 4 {
        let d0 = l.clone() - e.scale(&x0);
        let zd = zariski_decompose(model, &perturbed_class(&d0, &minus_e))
            .map_err(|err| Error::Inconsistency(format!("sweep lost pseudoeffectivity before vol = 0: {err}")))?;
        let p0 = zd.positive.map(|v| v.value.clone());
        let dp = zd.positive.map(|v| v.slope.clone());
        let support = zd.support();

        let mut wall: Option<T> = None;
        for (id, class) in &candidates {
            if support.contains(id) {
                continue;
            }
            let rate = model.pair(&dp, class);
            if rate.is_negative() {
                keep_min(&mut wall, x0.clone() - model.pair(&p0, class) / rate);
            }
        }
        for (_, a) in &zd.negative {
            if a.slope.is_negative() {
                keep_min(&mut wall, x0.clone() - a.value.clone() / a.slope.clone());
            }
        }

        let c0 = model.pair(&p0, &p0);
        let c1 = model.pair(&p0, &dp);
        let c2 = model.pair(&dp, &dp);
        let vol_after =
            |t: &T| c0.clone() + T::from_i64(2) * c1.clone() * t.clone() + c2.clone() * t.clone() * t.clone();
        let (hi, last) = match wall {
            Some(w) if vol_after(&(w.clone() - x0.clone())).is_positive() => (w, false),
            _ => (x0.clone() + first_positive_root(&c0, &c1, &c2)?, true),
        };

        // P(x) = U + x·V with V = P′ and U = P(x₀) − x₀·V.
        let u = p0 - dp.scale(&x0);
        let poly = Quadratic::new(model.pair(&u, &u), T::from_i64(2) * model.pair(&u, &dp), c2.clone());
        pieces.push(Piece {
            lo: x0,
            hi: hi.clone(),
            poly,
            support,
        });
        if last {
            return Ok(PiecewiseQuadratic::new(pieces));
        }
        x0 = hi;
    }
    Err(Error::Inconsistency("chamber sweep did not terminate".into()))
}

/// Pseudoeffective threshold `τ(−K_{S,Δ_β}, E)`.
pub fn threshold<T: Scalar>(model: &SurfaceModel, curve: CurveId, angles: &Angles<T>) -> Result<T> {
    Ok(volume_curve(model, curve, angles)?.tau())
}

/// `S(E) = (1/vol(L)) ∫₀^τ vol(L − xE) dx`.
pub fn expected_vanishing_order<T: Scalar>(model: &SurfaceModel, curve: CurveId, angles: &Angles<T>) -> Result<T> {
    let vc = volume_curve(model, curve, angles)?;
    let l = model.log_anticanonical(angles);
    Ok(vc.integral() / model.pair(&l, &l))
}

/// `A(E)`: `β₁` on `C̃₁`, `β₂` on `C̃₂`, and 1 on every other prime divisor
/// of `S`, none of which lies in the boundary.
pub fn log_discrepancy<T: Scalar>(curve: CurveId, angles: &Angles<T>) -> T {
    match curve {
        CurveId::C1Tilde => angles.beta1.clone(),
        CurveId::C2Tilde => angles.beta2.clone(),
        _ => T::one(),
    }
}

/// `A(E)/S(E)` through the volume sweep.
pub fn stability_ratio<T: Scalar>(model: &SurfaceModel, curve: CurveId, angles: &Angles<T>) -> Result<T> {
    Ok(log_discrepancy(curve, angles) / expected_vanishing_order(model, curve, angles)?)
}
