//! Closed-form volume curves, expected vanishing orders and T-variety
//! integrals for the family. These are independent of the chamber sweep
//! and serve as regression oracles for it.
//!
//! The piecewise formulas for `E = Eᵢ` depend on the relative position of
//! `n`, `m` and the angles; [`Lemma`] names the four regimes alongside the
//! two boundary curves.

use crate::picard::{Angles, SurfaceParams};
use crate::quadratic::Quadratic;
use crate::scalar::Scalar;
use crate::volumes::{Piece, PiecewiseQuadratic};

struct Vars<T> {
    n: T,
    m: T,
    b1: T,
    b2: T,
}

impl<T: Scalar> Vars<T> {
    fn new(params: SurfaceParams, angles: &Angles<T>) -> Self {
        Vars {
            n: T::from_i64(params.n as i64),
            m: T::from_i64(params.m as i64),
            b1: angles.beta1.clone(),
            b2: angles.beta2.clone(),
        }
    }
}

fn k<T: Scalar>(v: i64) -> T {
    T::from_i64(v)
}

fn sq<T: Scalar>(x: &T) -> T {
    x.clone() * x.clone()
}

fn cube<T: Scalar>(x: &T) -> T {
    x.clone() * x.clone() * x.clone()
}

/// `β₁² − β₂² − (1/3)(nβ₁³ + (n−m)β₂³)`. Its vanishing is the angle
/// condition; its sign is the sign of the Futaki obstruction.
pub fn bracket<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    let v = Vars::new(params, angles);
    sq(&v.b1) - sq(&v.b2) - (v.n.clone() * cube(&v.b1) + (v.n - v.m) * cube(&v.b2)) / k(3)
}

/// `(−K_{S,Δ_β})² = 4(β₁+β₂) − nβ₁² + (n−m)β₂²`.
pub fn anticanonical_volume<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    vol0(&Vars::new(params, angles))
}

pub fn s_c1<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    angles.beta1.clone() - k::<T>(2) / anticanonical_volume(params, angles) * bracket(params, angles)
}

pub fn s_c2<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    angles.beta2.clone() + k::<T>(2) / anticanonical_volume(params, angles) * bracket(params, angles)
}

/// `S(Eᵢ)`, valid on the whole ample range.
pub fn s_exceptional<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    let v = Vars::new(params, angles);
    let nm = v.n.clone() - v.m.clone();
    let inner = -(v.n.clone() - k(2)) * sq(&v.b1)
        + nm.clone() * sq(&v.b2)
        + (v.n.clone() * (v.n - k(2)) * cube(&v.b1) + sq(&nm) * cube(&v.b2)) / k(3);
    T::one() + inner / anticanonical_volume(params, angles)
}

/// The four `A/S` ratios for `C̃₁`, `C̃₂`, `Eᵢ` and `F̃ᵢ`, in that order.
pub fn ratio_list<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> [T; 4] {
    let v = Vars::new(params, angles);
    let vol = anticanonical_volume(params, angles);
    let br = bracket(params, angles);
    let c1 = v.b1.clone() / (v.b1.clone() - k::<T>(2) / vol.clone() * br.clone());
    let c2 = v.b2.clone() / (v.b2.clone() + k::<T>(2) / vol.clone() * br);
    let e = T::one() / s_exceptional(params, angles);
    let nm = v.n.clone() - v.m.clone();
    let f_inner = -v.n.clone() * sq(&v.b1)
        + (nm.clone() + k(2)) * sq(&v.b2)
        + (sq(&v.n) * cube(&v.b1) + (nm.clone() + k(2)) * nm * cube(&v.b2)) / k(3);
    let f = T::one() / (T::one() + f_inner / vol);
    [c1, c2, e, f]
}

/// `vol(Ψ) = 2(β₁+β₂) − (n/2)β₁² + ((n−m)/2)β₂²`.
pub fn vol_psi<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    anticanonical_volume(params, angles) / k(2)
}

/// `bc(Ψ) = −(2/vol(−K))·bracket`.
pub fn barycenter<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    -(k::<T>(2) / anticanonical_volume(params, angles)) * bracket(params, angles)
}

/// `bc_p` at the point `p₀` carrying the vertex `n`.
pub fn bc_p0<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    let v = Vars::new(params, angles);
    let inner = (k::<T>(2) - v.n.clone() * v.b1.clone() + v.n.clone() * v.b2.clone()) * (v.b1.clone() + v.b2.clone())
        + (sq(&v.n) * cube(&v.b1) + (sq(&v.n) - sq(&v.m)) * cube(&v.b2)) / k(6);
    -(k::<T>(2) / anticanonical_volume(params, angles)) * inner
}

/// `bc_p` at a marked point `pᵢ`, `i ≥ 1`.
pub fn bc_marked<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> T {
    let v = Vars::new(params, angles);
    let nm = v.n.clone() - v.m.clone();
    let inner = k::<T>(2) * (v.b1.clone() + v.b2.clone()) - v.n.clone() * sq(&v.b1)
        + (nm.clone() + T::one()) * sq(&v.b2)
        + (sq(&v.n) * cube(&v.b1) + (nm.clone() + k(2)) * nm * cube(&v.b2)) / k(6);
    k::<T>(2) / anticanonical_volume(params, angles) * inner
}

/// Closed-form volume curves are available for these divisors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    C1,
    C2,
    /// `Eᵢ` with `n ≥ m`.
    ExceptionalNAtLeastM,
    /// `Eᵢ` with `n < m` and `(n−1)β₁ ≥ (m−n)β₂`.
    ExceptionalSteepC1,
    /// `Eᵢ` with `n ≥ 1` and `(n−1)β₁ < (m−n)β₂`.
    ExceptionalSteepC2,
    /// `Eᵢ` with `n = 0`.
    ExceptionalNZero,
}

impl Lemma {
    pub const ALL: [Lemma; 6] = [
        Lemma::C1,
        Lemma::C2,
        Lemma::ExceptionalNAtLeastM,
        Lemma::ExceptionalSteepC1,
        Lemma::ExceptionalSteepC2,
        Lemma::ExceptionalNZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::C1 => "C1",
            Lemma::C2 => "C2",
            Lemma::ExceptionalNAtLeastM => "E/n>=m",
            Lemma::ExceptionalSteepC1 => "E/n<m,(n-1)b1>=(m-n)b2",
            Lemma::ExceptionalSteepC2 => "E/n>=1,(n-1)b1<(m-n)b2",
            Lemma::ExceptionalNZero => "E/n=0",
        }
    }

    pub fn is_exceptional(self) -> bool {
        !matches!(self, Lemma::C1 | Lemma::C2)
    }

    /// Whether the chamber list of this closed form is valid at the given
    /// point. Ampleness is assumed. For the last two exceptional regimes the
    /// listed chambers are in increasing order only when the wall
    /// `2 − (m−n)β₂` lies to the right of `β₁`.
    pub fn applies<T: Scalar>(self, params: SurfaceParams, angles: &Angles<T>) -> bool {
        let (n, m) = (params.n as i64, params.m as i64);
        let v = Vars::new(params, angles);
        let second_wall_ordered = || v.b1.clone() <= k::<T>(2) - (v.m.clone() - v.n.clone()) * v.b2.clone();
        let steep_c1 = || (v.n.clone() - T::one()) * v.b1.clone() >= (v.m.clone() - v.n.clone()) * v.b2.clone();
        match self {
            Lemma::C1 | Lemma::C2 => true,
            Lemma::ExceptionalNAtLeastM => m >= 1 && n >= m,
            Lemma::ExceptionalSteepC1 => m >= 1 && n < m && steep_c1(),
            Lemma::ExceptionalSteepC2 => m >= 1 && n >= 1 && !steep_c1() && second_wall_ordered(),
            Lemma::ExceptionalNZero => m >= 1 && n == 0 && second_wall_ordered(),
        }
    }

    /// The closed-form volume curve, with empty chambers dropped. Returns
    /// `None` when [`Lemma::applies`] is false.
    pub fn volume_curve<T: Scalar>(self, params: SurfaceParams, angles: &Angles<T>) -> Option<PiecewiseQuadratic<T>> {
        if !self.applies(params, angles) {
            return None;
        }
        let v = Vars::new(params, angles);
        let (n, m, b1, b2) = (&v.n, &v.m, &v.b1, &v.b2);
        let one = T::one();
        let two = k::<T>(2);
        let c1_wall = two.clone() - (n.clone() - one.clone()) * b1.clone();
        let c2_wall = two.clone() - (m.clone() - n.clone()) * b2.clone();
        let sum = b1.clone() + b2.clone();

        // Right wall of each chamber with its polynomial. Polynomials are
        // built only for nonempty chambers, so the divisions by n−1 and
        // n−m inside them never see zero.
        let chambers: Vec<(T, Poly<T>)> = match self {
            Lemma::C1 => vec![(b1.clone(), c1_nef), (sum, c1_fiber)],
            Lemma::C2 => vec![(b2.clone(), c2_nef), (sum, c2_exceptional)],
            Lemma::ExceptionalNAtLeastM => vec![
                (b1.clone(), e_nef),
                (c1_wall, e_fiber),
                (two.clone(), e_c1_fiber),
                (two + (n.clone() - m.clone()) * b2.clone(), e_tail_n_at_least_m),
            ],
            Lemma::ExceptionalSteepC1 => vec![
                (b1.clone(), e_nef),
                (c1_wall, e_fiber),
                (c2_wall, e_c1_fiber),
                (two, e_corner),
            ],
            Lemma::ExceptionalSteepC2 => vec![
                (b1.clone(), e_nef),
                (c2_wall, e_fiber),
                (c1_wall, e_c2_fiber),
                (two, e_corner),
            ],
            Lemma::ExceptionalNZero => vec![
                (b1.clone(), e_nef),
                (c2_wall, e_fiber),
                (two.clone(), e_c2_fiber),
                (two + b1.clone(), e_tail_n_zero),
            ],
        };

        let mut pieces = Vec::new();
        let mut lo = T::zero();
        for (hi, poly) in chambers {
            if hi > lo {
                pieces.push(Piece {
                    lo: lo.clone(),
                    hi: hi.clone(),
                    poly: poly(&v),
                    support: Vec::new(),
                });
                lo = hi;
            }
        }
        Some(PiecewiseQuadratic::new(pieces))
    }
}

type Poly<T> = fn(&Vars<T>) -> Quadratic<T>;

fn cst<T: Scalar>(t: T) -> Quadratic<T> {
    Quadratic::constant(t)
}

fn x<T: Scalar>() -> Quadratic<T> {
    Quadratic::x()
}

fn square<T: Scalar>(p: Quadratic<T>) -> Quadratic<T> {
    p.clone() * p
}

fn vol0<T: Scalar>(v: &Vars<T>) -> T {
    k::<T>(4) * (v.b1.clone() + v.b2.clone()) - v.n.clone() * sq(&v.b1) + (v.n.clone() - v.m.clone()) * sq(&v.b2)
}

/// `vol − 2(2−nβ₁)x − nx²`
fn c1_nef<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    cst(vol0(v)) - x().scale(&(k::<T>(2) * (k::<T>(2) - v.n.clone() * v.b1.clone()))) - square(x()).scale(&v.n)
}

/// `(β₁+β₂−x)(4 − (m−n)(x−β₁+β₂))`
fn c1_fiber<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    (cst(v.b1.clone() + v.b2.clone()) - x())
        * (cst(k(4)) - (x() - cst(v.b1.clone()) + cst(v.b2.clone())).scale(&(v.m.clone() - v.n.clone())))
}

/// `vol − 2(2−(m−n)β₂)x − (m−n)x²`
fn c2_nef<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let mn = v.m.clone() - v.n.clone();
    cst(vol0(v)) - x().scale(&(k::<T>(2) * (k::<T>(2) - mn.clone() * v.b2.clone()))) - square(x()).scale(&mn)
}

/// `(β₁+β₂−x)(4 − n(x+β₁−β₂))`
fn c2_exceptional<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    (cst(v.b1.clone() + v.b2.clone()) - x()) * (cst(k(4)) - (x() + cst(v.b1.clone()) - cst(v.b2.clone())).scale(&v.n))
}

/// `vol − 2β₂x − x²`
fn e_nef<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    cst(vol0(v)) - x().scale(&(k::<T>(2) * v.b2.clone())) - square(x())
}

/// `4(β₁+β₂) − (n−1)β₁² + (n−m)β₂² − 2(β₁+β₂)x`
fn e_fiber<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let sum = v.b1.clone() + v.b2.clone();
    cst(k::<T>(4) * sum.clone() - (v.n.clone() - T::one()) * sq(&v.b1) + (v.n.clone() - v.m.clone()) * sq(&v.b2))
        - x().scale(&(k::<T>(2) * sum))
}

/// `(n−1)(β₂ + (2−x)/(n−1))² − (m−1)β₂²`
fn e_c1_fiber<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let n1 = v.n.clone() - T::one();
    square(cst(n1.clone() * v.b2.clone() + k(2)) - x()).scale(&(T::one() / n1))
        - cst((v.m.clone() - T::one()) * sq(&v.b2))
}

/// `(m−1)/((m−n)(n−1)) · (x−2)²`
fn e_corner<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let factor = (v.m.clone() - T::one()) / ((v.m.clone() - v.n.clone()) * (v.n.clone() - T::one()));
    square(x() - cst(k(2))).scale(&factor)
}

/// `(4 + (m−n)(4 − (n−1)β₁)β₁ − 2(2 + (m−n)β₁)x + x²)/(m−n)`
fn e_c2_fiber<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let mn = v.m.clone() - v.n.clone();
    let b1 = v.b1.clone();
    (cst(k::<T>(4) + mn.clone() * (k::<T>(4) - (v.n.clone() - T::one()) * b1.clone()) * b1.clone())
        - x().scale(&(k::<T>(2) * (k::<T>(2) + mn.clone() * b1)))
        + square(x()))
    .scale(&(T::one() / mn))
}

/// `(2 + (n−m)β₂ − x)²/(n−m)`
fn e_tail_n_at_least_m<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    let nm = v.n.clone() - v.m.clone();
    square(cst(k::<T>(2) + nm.clone() * v.b2.clone()) - x()).scale(&(T::one() / nm))
}

/// `(2 + β₁ − x)²`
fn e_tail_n_zero<T: Scalar>(v: &Vars<T>) -> Quadratic<T> {
    square(cst(k::<T>(2) + v.b1.clone()) - x())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_frac(n, d)
    }

    fn p(n: u32, m: usize) -> SurfaceParams {
        SurfaceParams::new(n, m)
    }

    fn angles(b1: Rat, b2: Rat) -> Angles<Rat> {
        Angles::new(b1, b2).unwrap()
    }

    #[test]
    fn named_example_values() {
        let a = angles(q(1, 2), q(1, 2));
        assert_eq!(bracket(p(0, 2), &a), q(1, 12));
        assert_eq!(anticanonical_volume(p(0, 2), &a), q(7, 2));
        assert_eq!(s_c1(p(0, 2), &a), q(19, 42));
        assert_eq!(s_c2(p(0, 2), &a), q(23, 42));
        assert_eq!(vol_psi(p(0, 2), &a), q(7, 4));
        assert_eq!(barycenter(p(0, 2), &a), q(-1, 21));

        let a = angles(q(144, 125), q(48, 25));
        assert_eq!(anticanonical_volume(p(0, 1), &a), q(5376, 625));
        assert_eq!(s_exceptional(p(0, 1), &a), q(202, 175));
    }

    #[test]
    fn condition_point_makes_all_ratios_one_for_m_two() {
        let a = angles(q(63, 128), q(21, 32));
        assert_eq!(bracket(p(0, 2), &a), q(0, 1));
        for r in ratio_list(p(0, 2), &a) {
            assert_eq!(r, q(1, 1));
        }
    }

    #[test]
    fn regime_selection() {
        let a = angles(q(1, 3), q(1, 4));
        assert!(Lemma::ExceptionalNAtLeastM.applies(p(3, 2), &a));
        assert!(!Lemma::ExceptionalNAtLeastM.applies(p(1, 2), &a));
        assert!(Lemma::ExceptionalNZero.applies(p(0, 2), &a));
        assert!(Lemma::ExceptionalSteepC2.applies(p(1, 3), &a));
        assert!(Lemma::ExceptionalSteepC1.applies(p(3, 4), &angles(q(1, 2), q(1, 3))));
        assert!(Lemma::ExceptionalNZero.volume_curve(p(1, 2), &a).is_none());
    }

    #[test]
    fn empty_chambers_are_dropped() {
        let a = angles(q(1, 2), q(1, 2));
        let vc = Lemma::ExceptionalNAtLeastM.volume_curve(p(1, 1), &a).unwrap();
        assert_eq!(vc.breakpoints(), vec![q(0, 1), q(1, 2), q(2, 1)]);
        let vc = Lemma::ExceptionalNAtLeastM.volume_curve(p(3, 3), &a).unwrap();
        assert_eq!(vc.pieces.len(), 3);
    }
}
