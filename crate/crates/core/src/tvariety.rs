//! The complexity-one torus action on `S` and the δ-invariant it yields.
//!
//! The `ℂ*`-action along the fibres makes `S` a T-variety over `ℙ¹` with
//! lattice `N ≅ ℤ`. Slices are subdivisions of the line: over `p₀` the
//! single vertex `n` (the fibre over `p₀`), over each blown-up point `pᵢ`
//! the vertices `−1` (`Eᵢ`) and `0` (`F̃ᵢ`), and over any other point the
//! vertex `0` (a general fibre). The tail rays `+1` and `−1` are `C̃₁` and
//! `C̃₂`.
//!
//! The log anticanonical class `β₁C̃₁ + β₂C̃₂ + 2π*F` corresponds to a
//! support function `h`; its pointwise Legendre duals `Ψ_p` live on
//! `□_h = [−β₁, β₂]`, and δ is the minimum of one term per ray and one
//! per vertex.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::picard::{make_surface, Angles, CurveId, DivisorClass, SurfaceModel, SurfaceParams};
use crate::pl::PLFunction;
use crate::scalar::Scalar;

/// Points of `ℙ¹` with a nontrivial slice, plus one representative of the
/// trivial slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MarkedPoint {
    P0,
    /// `pᵢ`, `1 ≤ i ≤ m`.
    Marked(usize),
    Generic,
}

/// A vertex `num/den` of a slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub num: i64,
    pub den: i64,
}

impl Vertex {
    pub fn integral(v: i64) -> Self {
        Vertex { num: v, den: 1 }
    }

    /// Smallest `μ ≥ 1` with `μ·v ∈ ℤ`.
    pub fn mu(&self) -> i64 {
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        self.den.abs() / gcd(self.num, self.den)
    }

    pub fn value<T: Scalar>(&self) -> T {
        T::from_frac(self.num, self.den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub point: MarkedPoint,
    /// Sorted increasingly.
    pub vertices: Vec<Vertex>,
}

/// The f-divisor of `S` with empty degree part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FDivisorModel {
    pub params: SurfaceParams,
    pub slices: Vec<Slice>,
}

pub fn build_fdivisor(params: SurfaceParams) -> FDivisorModel {
    let mut slices = vec![Slice {
        point: MarkedPoint::P0,
        vertices: vec![Vertex::integral(params.n as i64)],
    }];
    slices.extend((1..=params.m).map(|i| Slice {
        point: MarkedPoint::Marked(i),
        vertices: vec![Vertex::integral(-1), Vertex::integral(0)],
    }));
    slices.push(Slice {
        point: MarkedPoint::Generic,
        vertices: vec![Vertex::integral(0)],
    });
    FDivisorModel { params, slices }
}

impl FDivisorModel {
    /// Every vertex must be a lattice point.
    pub fn check_integral(&self) -> Result<()> {
        for s in &self.slices {
            for v in &s.vertices {
                if v.mu() != 1 {
                    return Err(Error::Inconsistency(format!(
                        "vertex {}/{} over {:?} is not integral",
                        v.num, v.den, s.point
                    )));
                }
            }
        }
        Ok(())
    }

    /// Prime divisor of the vertex `vertex` on the slice over `point`.
    pub fn valuation_of(&self, point: MarkedPoint, vertex: Vertex) -> Result<Valuation> {
        let bad = || Error::Inconsistency(format!("no vertex {}/{} over {point:?}", vertex.num, vertex.den));
        let slice = self.slices.iter().find(|s| s.point == point).ok_or_else(bad)?;
        if !slice.vertices.contains(&vertex) {
            return Err(bad());
        }
        Ok(match point {
            MarkedPoint::P0 => Valuation::FiberOverP0,
            MarkedPoint::Generic => Valuation::GenericFiber,
            MarkedPoint::Marked(i) if vertex == Vertex::integral(-1) => Valuation::E(i),
            MarkedPoint::Marked(i) => Valuation::FTilde(i),
        })
    }
}

/// T-invariant prime divisors entering δ, in report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    C1Tilde,
    C2Tilde,
    E(usize),
    FTilde(usize),
    FiberOverP0,
    GenericFiber,
}

impl Valuation {
    /// The curve on `S` carrying this valuation. The fibre over `p₀` has
    /// the class of a general fibre.
    pub fn curve(self) -> CurveId {
        match self {
            Valuation::C1Tilde => CurveId::C1Tilde,
            Valuation::C2Tilde => CurveId::C2Tilde,
            Valuation::E(i) => CurveId::E(i),
            Valuation::FTilde(i) => CurveId::FTilde(i),
            Valuation::FiberOverP0 | Valuation::GenericFiber => CurveId::GenericFiber,
        }
    }

    /// Horizontal divisors are the two sections.
    pub fn is_horizontal(self) -> bool {
        matches!(self, Valuation::C1Tilde | Valuation::C2Tilde)
    }

    /// All valuations for `m` blown-up points, in report order.
    pub fn all(m: usize) -> Vec<Valuation> {
        let mut out = vec![Valuation::C1Tilde, Valuation::C2Tilde];
        out.extend((1..=m).map(Valuation::E));
        out.extend((1..=m).map(Valuation::FTilde));
        out.push(Valuation::FiberOverP0);
        out.push(Valuation::GenericFiber);
        out
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::FiberOverP0 => write!(f, "FiberOverP0"),
            other => write!(f, "{}", other.curve()),
        }
    }
}

impl FromStr for Valuation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "FiberOverP0" {
            return Ok(Valuation::FiberOverP0);
        }
        match s.parse::<CurveId>()? {
            CurveId::C1Tilde => Ok(Valuation::C1Tilde),
            CurveId::C2Tilde => Ok(Valuation::C2Tilde),
            CurveId::E(i) => Ok(Valuation::E(i)),
            CurveId::FTilde(i) => Ok(Valuation::FTilde(i)),
            CurveId::GenericFiber => Ok(Valuation::GenericFiber),
            CurveId::PullbackC2 => Err("PullbackC2 is not a T-invariant prime divisor".into()),
        }
    }
}

/// Values of `h` at the vertices of one slice.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceValues<T> {
    pub point: MarkedPoint,
    pub values: Vec<(Vertex, T)>,
}

/// Divisorial support function with linear part `h_t(v) = β₂v` for
/// `v < 0` and `−β₁v` for `v ≥ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunction<T> {
    pub beta1: T,
    pub beta2: T,
    pub slices: Vec<SliceValues<T>>,
}

impl<T: Scalar> SupportFunction<T> {
    pub fn linear_part(&self, v: &T) -> T {
        if v.is_negative() {
            self.beta2.clone() * v.clone()
        } else {
            -self.beta1.clone() * v.clone()
        }
    }

    pub fn slice(&self, point: MarkedPoint) -> Option<&SliceValues<T>> {
        self.slices.iter().find(|s| s.point == point)
    }

    /// `h_p(v)`: affine between vertices, and continued along the tails
    /// with the slopes of `h_t`.
    pub fn eval(&self, point: MarkedPoint, v: &T) -> Option<T> {
        let values = &self.slice(point)?.values;
        let first = values.first()?;
        let last = values.last()?;
        let (v0, h0) = (first.0.value::<T>(), first.1.clone());
        if *v <= v0 {
            return Some(h0 + self.beta2.clone() * (v.clone() - v0));
        }
        let (v1, h1) = (last.0.value::<T>(), last.1.clone());
        if *v >= v1 {
            return Some(h1 - self.beta1.clone() * (v.clone() - v1));
        }
        values.windows(2).find_map(|w| {
            let (a, b) = (w[0].0.value::<T>(), w[1].0.value::<T>());
            (a <= *v && *v <= b).then(|| {
                let t = (v.clone() - a.clone()) / (b - a);
                w[0].1.clone() + t * (w[1].1.clone() - w[0].1.clone())
            })
        })
    }
}

/// Support function of `−K_{S,Δ_β} = β₁C̃₁ + β₂C̃₂ + 2π*F`: the fibre
/// over `p₀` carries the coefficient 2, every other vertex 0.
pub fn anticanonical_support_function<T: Scalar>(fdiv: &FDivisorModel, angles: &Angles<T>) -> SupportFunction<T> {
    let slices = fdiv
        .slices
        .iter()
        .map(|s| SliceValues {
            point: s.point,
            values: s
                .vertices
                .iter()
                .map(|v| {
                    let h = if s.point == MarkedPoint::P0 {
                        -T::from_i64(2)
                    } else {
                        T::zero()
                    };
                    (*v, h)
                })
                .collect(),
        })
        .collect();
    SupportFunction {
        beta1: angles.beta1.clone(),
        beta2: angles.beta2.clone(),
        slices,
    }
}

/// `−Σ_ρ h_t(n_ρ)D_ρ − Σ_{(p,v)} μ(v)h_p(v)D_{p,v}` as a class on `S`.
pub fn support_function_class<T: Scalar>(
    model: &SurfaceModel,
    fdiv: &FDivisorModel,
    h: &SupportFunction<T>,
) -> Result<DivisorClass<T>> {
    let one = T::one();
    let c1 = model.class_of::<T>(CurveId::C1Tilde)?.scale(&-h.linear_part(&one));
    let c2 = model
        .class_of::<T>(CurveId::C2Tilde)?
        .scale(&-h.linear_part(&-one.clone()));
    let mut total = c1 + c2;
    for s in &h.slices {
        for (v, hv) in &s.values {
            let val = fdiv.valuation_of(s.point, *v)?;
            let coeff = -(T::from_i64(v.mu()) * hv.clone());
            total = total + model.class_of::<T>(val.curve())?.scale(&coeff);
        }
    }
    Ok(total)
}

/// Legendre duals of `h` on `□_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualData<T> {
    pub lo: T,
    pub hi: T,
    pub psi_p0: PLFunction<T>,
    /// `Ψ_{pᵢ}` for `i = 1..=m`.
    pub psi_marked: Vec<PLFunction<T>>,
    pub psi_generic: PLFunction<T>,
    pub deg_psi: PLFunction<T>,
}

impl<T: Scalar> DualData<T> {
    pub fn psi(&self, point: MarkedPoint) -> Option<&PLFunction<T>> {
        match point {
            MarkedPoint::P0 => Some(&self.psi_p0),
            MarkedPoint::Marked(i) => self.psi_marked.get(i.checked_sub(1)?),
            MarkedPoint::Generic => Some(&self.psi_generic),
        }
    }
}

/// `□_h = {u : u·n_ρ ≥ h_t(n_ρ)} = [−β₁, β₂]` and
/// `Ψ_p(u) = min_v (u·v − h_p(v))` over the vertices of each slice.
pub fn legendre_dual<T: Scalar>(h: &SupportFunction<T>) -> DualData<T> {
    let one = T::one();
    let lo = h.linear_part(&one);
    let hi = -h.linear_part(&-one);
    let dual = |s: &SliceValues<T>| {
        let lines: Vec<(T, T)> = s.values.iter().map(|(v, hv)| (-hv.clone(), v.value::<T>())).collect();
        PLFunction::min_of_affine(lo.clone(), hi.clone(), &lines)
    };
    let mut psi_p0 = None;
    let mut psi_marked = Vec::new();
    let mut psi_generic = PLFunction::zero(lo.clone(), hi.clone());
    for s in &h.slices {
        match s.point {
            MarkedPoint::P0 => psi_p0 = Some(dual(s)),
            MarkedPoint::Marked(_) => psi_marked.push(dual(s)),
            MarkedPoint::Generic => psi_generic = dual(s),
        }
    }
    let psi_p0 = psi_p0.unwrap_or_else(|| PLFunction::zero(lo.clone(), hi.clone()));
    let deg_psi = psi_marked.iter().fold(psi_p0.add(&psi_generic), |acc, f| acc.add(f));
    DualData {
        lo,
        hi,
        psi_p0,
        psi_marked,
        psi_generic,
        deg_psi,
    }
}

/// `vol(Ψ) = ∫ degΨ`.
pub fn vol_psi<T: Scalar>(d: &DualData<T>) -> T {
    d.deg_psi.integral()
}

/// `bc(Ψ) = (1/vol(Ψ)) ∫ u·degΨ(u) du`.
pub fn barycenter<T: Scalar>(d: &DualData<T>) -> T {
    d.deg_psi.first_moment() / vol_psi(d)
}

/// `bc_p = (1/vol(Ψ)) ∫ ((1/2)degΨ − Ψ_p)·degΨ`.
pub fn bc_p<T: Scalar>(d: &DualData<T>, point: MarkedPoint) -> Option<T> {
    let psi = d.psi(point)?;
    let weight = d
        .deg_psi
        .scale(&(T::one() / T::from_i64(2)))
        .add(&psi.scale(&-T::one()));
    Some(weight.integral_of_product(&d.deg_psi) / vol_psi(d))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeltaReport<T> {
    pub delta: T,
    /// Every valuation attaining δ, in report order.
    pub witnesses: Vec<Valuation>,
    pub terms: BTreeMap<Valuation, T>,
}

fn positive_reciprocal<T: Scalar>(num: T, den: T, what: Valuation) -> Result<T> {
    if !den.is_positive() {
        return Err(Error::Inconsistency(format!(
            "nonpositive denominator in the {what} term"
        )));
    }
    Ok(num / den)
}

/// One term per ray and per vertex, with their minimum.
pub fn delta_tvariety<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Result<DeltaReport<T>> {
    let model = make_surface(params);
    if let Some(why) = model.ample_violation(angles) {
        return Err(Error::OutsideAmpleRange(why));
    }
    let fdiv = build_fdivisor(params);
    fdiv.check_integral()?;
    let h = anticanonical_support_function(&fdiv, angles);
    let d = legendre_dual(&h);
    let bc = barycenter(&d);

    let mut terms = BTreeMap::new();
    for (n_rho, val) in [(T::one(), Valuation::C1Tilde), (-T::one(), Valuation::C2Tilde)] {
        let ht = h.linear_part(&n_rho);
        let term = positive_reciprocal(-ht.clone(), bc.clone() * n_rho - ht, val)?;
        terms.insert(val, term);
    }
    for s in &h.slices {
        let bcp = bc_p(&d, s.point).expect("every slice has a dual");
        for (v, hv) in &s.values {
            let val = fdiv.valuation_of(s.point, *v)?;
            let den = T::from_i64(v.mu()) * (bcp.clone() + bc.clone() * v.value::<T>() - hv.clone());
            terms.insert(val, positive_reciprocal(T::one(), den, val)?);
        }
    }

    let delta = terms
        .values()
        .fold(None, |acc: Option<T>, t| match acc {
            Some(a) if a <= *t => Some(a),
            _ => Some(t.clone()),
        })
        .expect("at least the two ray terms");
    let witnesses = terms.iter().filter(|(_, t)| **t == delta).map(|(v, _)| *v).collect();
    Ok(DeltaReport {
        delta,
        witnesses,
        terms,
    })
}

/// Sign of the Futaki obstruction, read off `∫ u·degΨ`: the class is
/// balanced exactly when the barycenter of `degΨ` is at 0. The sign is
/// that of the angle-condition bracket, which is `−vol(Ψ)·bc(Ψ)`.
pub fn futaki_vanishes<T: Scalar>(params: SurfaceParams, angles: &Angles<T>) -> Ordering {
    let fdiv = build_fdivisor(params);
    let h = anticanonical_support_function(&fdiv, angles);
    let d = legendre_dual(&h);
    (-d.deg_psi.first_moment()).sign()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form;
    use crate::Rat;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_frac(n, d)
    }

    fn angles(b1: Rat, b2: Rat) -> Angles<Rat> {
        Angles::new(b1, b2).unwrap()
    }

    fn dual(n: u32, m: usize, a: &Angles<Rat>) -> DualData<Rat> {
        let f = build_fdivisor(SurfaceParams::new(n, m));
        legendre_dual(&anticanonical_support_function(&f, a))
    }

    #[test]
    fn fdivisor_shapes() {
        let f = build_fdivisor(SurfaceParams::new(2, 0));
        assert_eq!(f.slices[0].vertices, vec![Vertex::integral(2)]);
        assert_eq!(f.slices.len(), 2);
        let f = build_fdivisor(SurfaceParams::new(0, 1));
        assert_eq!(f.slices[1].vertices, vec![Vertex::integral(-1), Vertex::integral(0)]);
        f.check_integral().unwrap();
        let bad = FDivisorModel {
            params: SurfaceParams::new(0, 0),
            slices: vec![Slice {
                point: MarkedPoint::P0,
                vertices: vec![Vertex { num: 1, den: 2 }],
            }],
        };
        assert!(bad.check_integral().is_err());
    }

    #[test]
    fn support_function_values() {
        let f = build_fdivisor(SurfaceParams::new(3, 2));
        let h = anticanonical_support_function(&f, &angles(q(1, 3), q(1, 2)));
        assert_eq!(h.linear_part(&q(1, 1)), q(-1, 3));
        assert_eq!(h.linear_part(&q(-1, 1)), q(-1, 2));
        assert_eq!(h.eval(MarkedPoint::P0, &q(3, 1)), Some(q(-2, 1)));
        assert_eq!(h.eval(MarkedPoint::Marked(1), &q(-1, 1)), Some(q(0, 1)));
        assert_eq!(h.eval(MarkedPoint::Marked(2), &q(0, 1)), Some(q(0, 1)));
        // Tails follow h_t: β₂(v+1) left of −1, −β₁v right of 0.
        assert_eq!(h.eval(MarkedPoint::Marked(1), &q(-3, 1)), Some(q(-1, 1)));
        assert_eq!(h.eval(MarkedPoint::P0, &q(6, 1)), Some(q(-3, 1)));
    }

    #[test]
    fn support_function_round_trips_to_the_log_anticanonical_class() {
        for (n, m) in [(0, 0), (2, 0), (0, 3), (4, 2)] {
            let params = SurfaceParams::new(n, m);
            let model = make_surface(params);
            let f = build_fdivisor(params);
            let a = angles(q(2, 9), q(3, 7));
            let h = anticanonical_support_function(&f, &a);
            assert_eq!(
                support_function_class(&model, &f, &h).unwrap(),
                model.log_anticanonical(&a)
            );
        }
    }

    #[test]
    fn dual_functions() {
        let a = angles(q(1, 3), q(1, 2));
        let d = dual(2, 3, &a);
        assert_eq!((d.lo.clone(), d.hi.clone()), (q(-1, 3), q(1, 2)));
        assert_eq!(d.psi_p0.eval(&q(0, 1)), Some(q(2, 1)));
        assert_eq!(d.psi_p0.eval(&q(-1, 3)), Some(q(4, 3)));
        assert_eq!(d.psi_marked[0].eval(&q(1, 2)), Some(q(-1, 2)));
        assert_eq!(d.psi_marked[2].eval(&q(-1, 3)), Some(q(0, 1)));
        assert_eq!(d.psi_generic.eval(&q(1, 4)), Some(q(0, 1)));
        // degΨ = nu + 2 + m·min{0, −u}
        assert_eq!(d.deg_psi.eval(&q(1, 2)), Some(q(3, 1) - q(3, 2)));
        assert_eq!(d.deg_psi.breakpoints(), &[q(-1, 3), q(0, 1), q(1, 2)]);
    }

    #[test]
    fn integrals_at_the_first_named_point() {
        let a = angles(q(1, 2), q(1, 2));
        let d = dual(0, 2, &a);
        assert_eq!(vol_psi(&d), q(7, 4));
        assert_eq!(barycenter(&d), q(-1, 21));
    }

    #[test]
    fn integrals_match_closed_forms() {
        for (n, m, b1, b2) in [
            (0, 2, q(1, 2), q(1, 2)),
            (3, 1, q(1, 4), q(2, 3)),
            (1, 5, q(7, 9), q(1, 5)),
        ] {
            let params = SurfaceParams::new(n, m);
            let a = angles(b1, b2);
            let d = dual(n, m, &a);
            assert_eq!(vol_psi(&d), closed_form::vol_psi(params, &a));
            assert_eq!(barycenter(&d), closed_form::barycenter(params, &a));
            assert_eq!(bc_p(&d, MarkedPoint::P0).unwrap(), closed_form::bc_p0(params, &a));
            assert_eq!(
                bc_p(&d, MarkedPoint::Marked(1)).unwrap(),
                closed_form::bc_marked(params, &a)
            );
        }
    }

    #[test]
    fn delta_examples() {
        let r = delta_tvariety(SurfaceParams::new(0, 2), &angles(q(1, 2), q(1, 2))).unwrap();
        assert_eq!(r.delta, q(21, 23));
        assert_eq!(r.witnesses, vec![Valuation::C2Tilde]);

        let r = delta_tvariety(SurfaceParams::new(0, 2), &angles(q(63, 128), q(21, 32))).unwrap();
        assert_eq!(r.delta, q(1, 1));

        let r = delta_tvariety(SurfaceParams::new(0, 1), &angles(q(144, 125), q(48, 25))).unwrap();
        assert_eq!(r.delta, q(175, 202));
        // With n = 0 the fibration has a symmetry swapping E₁ and F̃₁.
        assert_eq!(r.witnesses, vec![Valuation::E(1), Valuation::FTilde(1)]);
    }

    #[test]
    fn futaki_signs() {
        assert_eq!(
            futaki_vanishes(SurfaceParams::new(0, 0), &angles(q(2, 3), q(2, 3))),
            Ordering::Equal
        );
        assert_eq!(
            futaki_vanishes(SurfaceParams::new(0, 2), &angles(q(63, 128), q(21, 32))),
            Ordering::Equal
        );
        assert_eq!(
            futaki_vanishes(SurfaceParams::new(0, 2), &angles(q(1, 2), q(1, 2))),
            Ordering::Greater
        );
    }

    #[test]
    fn valuation_names_round_trip() {
        for v in Valuation::all(3) {
            assert_eq!(v.to_string().parse::<Valuation>(), Ok(v));
        }
    }
}
