//! Picard lattice of the blow-up `S` of the Hirzebruch surface `𝔽_n` at `m`
//! points of the section `C₂`, one point per fibre.
//!
//! Classes are written in the fixed basis `(π*C₂, π*F, E₁, …, E_m)` as
//!
//! ```text
//! D = a·π*C₂ + b·π*F − Σ cᵢ·Eᵢ
//! ```
//!
//! so **`c` holds the coefficients of `−Eᵢ`**. An exceptional curve `Eᵢ`
//! itself therefore has `cᵢ = −1`, and `D·Eᵢ = cᵢ`. The intersection form is
//! `[[n, 1], [1, 0]] ⊕ (−I_m)`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfaceParams {
    /// `C₁² = −n` on `𝔽_n`.
    pub n: u32,
    /// Number of blown-up points.
    pub m: usize,
}

impl SurfaceParams {
    pub fn new(n: u32, m: usize) -> Self {
        SurfaceParams { n, m }
    }
}

/// Cone angles `2πβ₁` along `C̃₁` and `2πβ₂` along `C̃₂`.
///
/// Angles above 1 are accepted; [`Angles::exceeds_one`] reports them.
#[derive(Clone, Debug, PartialEq)]
pub struct Angles<T> {
    pub beta1: T,
    pub beta2: T,
}

impl<T: Scalar> Angles<T> {
    pub fn new(beta1: T, beta2: T) -> Result<Self> {
        if !beta1.is_positive() || !beta2.is_positive() {
            return Err(Error::NonPositiveAngle);
        }
        Ok(Angles { beta1, beta2 })
    }

    pub fn exceeds_one(&self) -> bool {
        self.beta1 > T::one() || self.beta2 > T::one()
    }
}

/// A ℚ-divisor class `a·π*C₂ + b·π*F − Σ cᵢEᵢ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DivisorClass<T> {
    pub a: T,
    pub b: T,
    /// Coefficients of `−Eᵢ`.
    pub c: Vec<T>,
}

impl<T: Scalar> DivisorClass<T> {
    pub fn new(a: T, b: T, c: Vec<T>) -> Self {
        DivisorClass { a, b, c }
    }

    pub fn zero(m: usize) -> Self {
        DivisorClass {
            a: T::zero(),
            b: T::zero(),
            c: vec![T::zero(); m],
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        DivisorClass {
            a: self.a.clone() * k.clone(),
            b: self.b.clone() * k.clone(),
            c: self.c.iter().map(|ci| ci.clone() * k.clone()).collect(),
        }
    }

    /// Maps every coefficient through `f`, e.g. to change scalar type.
    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> DivisorClass<U> {
        DivisorClass {
            a: f(&self.a),
            b: f(&self.b),
            c: self.c.iter().map(&f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.iter().all(|x| x.is_zero())
    }
}

impl<T: Scalar> std::ops::Add for DivisorClass<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.c.len(), rhs.c.len(), "adding classes on different surfaces");
        DivisorClass {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            c: self.c.into_iter().zip(rhs.c).map(|(x, y)| x + y).collect(),
        }
    }
}

impl<T: Scalar> std::ops::Sub for DivisorClass<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.c.len(), rhs.c.len(), "subtracting classes on different surfaces");
        DivisorClass {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            c: self.c.into_iter().zip(rhs.c).map(|(x, y)| x - y).collect(),
        }
    }
}

impl<T: Scalar> std::ops::Neg for DivisorClass<T> {
    type Output = Self;
    fn neg(self) -> Self {
        DivisorClass {
            a: -self.a,
            b: -self.b,
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

/// Named curves on `S`. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurveId {
    C1Tilde,
    C2Tilde,
    E(usize),
    FTilde(usize),
    GenericFiber,
    PullbackC2,
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveId::C1Tilde => write!(f, "C1tilde"),
            CurveId::C2Tilde => write!(f, "C2tilde"),
            CurveId::E(i) => write!(f, "E{i}"),
            CurveId::FTilde(i) => write!(f, "F{i}tilde"),
            CurveId::GenericFiber => write!(f, "GenericFiber"),
            CurveId::PullbackC2 => write!(f, "PullbackC2"),
        }
    }
}

impl FromStr for CurveId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let index = |digits: &str| -> Result<usize, String> {
            match digits.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(format!("bad curve index in {s:?}")),
            }
        };
        match s {
            "C1tilde" => Ok(CurveId::C1Tilde),
            "C2tilde" => Ok(CurveId::C2Tilde),
            "GenericFiber" => Ok(CurveId::GenericFiber),
            "PullbackC2" => Ok(CurveId::PullbackC2),
            _ => {
                if let Some(rest) = s.strip_prefix('F').and_then(|r| r.strip_suffix("tilde")) {
                    index(rest).map(CurveId::FTilde)
                } else if let Some(rest) = s.strip_prefix('E') {
                    index(rest).map(CurveId::E)
                } else {
                    Err(format!(
                        "unknown curve {s:?}; expected C1tilde, C2tilde, E<i>, F<i>tilde, GenericFiber or PullbackC2"
                    ))
                }
            }
        }
    }
}

/// The surface `S` with its intersection form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    params: SurfaceParams,
}

pub fn make_surface(params: SurfaceParams) -> SurfaceModel {
    SurfaceModel { params }
}

impl SurfaceModel {
    pub fn params(&self) -> SurfaceParams {
        self.params
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn m(&self) -> usize {
        self.params.m
    }

    fn n_scalar<T: Scalar>(&self) -> T {
        T::from_i64(self.params.n as i64)
    }

    /// Gram matrix of the basis `(π*C₂, π*F, E₁, …, E_m)`.
    pub fn gram_matrix<T: Scalar>(&self) -> Vec<Vec<T>> {
        let dim = self.params.m + 2;
        let mut g = vec![vec![T::zero(); dim]; dim];
        g[0][0] = self.n_scalar();
        g[0][1] = T::one();
        g[1][0] = T::one();
        for i in 2..dim {
            g[i][i] = -T::one();
        }
        g
    }

    /// The negative-curve candidates, in the canonical order
    /// `C̃₁, C̃₂, E₁…E_m, F̃₁…F̃_m`.
    pub fn candidate_curves(&self) -> Vec<CurveId> {
        let m = self.params.m;
        let mut out = vec![CurveId::C1Tilde, CurveId::C2Tilde];
        out.extend((1..=m).map(CurveId::E));
        out.extend((1..=m).map(CurveId::FTilde));
        out
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.params.m {
            Err(Error::CurveIndexOutOfRange {
                index: i,
                m: self.params.m,
            })
        } else {
            Ok(())
        }
    }

    fn check_dim<T>(&self, d: &DivisorClass<T>) -> Result<()> {
        if d.c.len() != self.params.m {
            Err(Error::DimensionMismatch {
                expected: self.params.m,
                found: d.c.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn class_of<T: Scalar>(&self, id: CurveId) -> Result<DivisorClass<T>> {
        let m = self.params.m;
        let unit = |i: usize, v: T| {
            let mut c = vec![T::zero(); m];
            c[i - 1] = v;
            c
        };
        Ok(match id {
            CurveId::C1Tilde => DivisorClass::new(T::one(), -self.n_scalar::<T>(), vec![T::zero(); m]),
            CurveId::C2Tilde => DivisorClass::new(T::one(), T::zero(), vec![T::one(); m]),
            CurveId::E(i) => {
                self.check_index(i)?;
                DivisorClass::new(T::zero(), T::zero(), unit(i, -T::one()))
            }
            CurveId::FTilde(i) => {
                self.check_index(i)?;
                DivisorClass::new(T::zero(), T::one(), unit(i, T::one()))
            }
            CurveId::GenericFiber => DivisorClass::new(T::zero(), T::one(), vec![T::zero(); m]),
            CurveId::PullbackC2 => DivisorClass::new(T::one(), T::zero(), vec![T::zero(); m]),
        })
    }

    pub fn intersect<T: Scalar>(&self, d1: &DivisorClass<T>, d2: &DivisorClass<T>) -> Result<T> {
        self.check_dim(d1)?;
        self.check_dim(d2)?;
        Ok(self.pair(d1, d2))
    }

    /// `n·a₁a₂ + a₁b₂ + a₂b₁ − Σ c₁ᵢc₂ᵢ`; dimensions are the caller's
    /// responsibility.
    pub(crate) fn pair<T: Scalar>(&self, d1: &DivisorClass<T>, d2: &DivisorClass<T>) -> T {
        debug_assert_eq!(d1.c.len(), d2.c.len());
        let mut s = self.n_scalar::<T>() * d1.a.clone() * d2.a.clone()
            + d1.a.clone() * d2.b.clone()
            + d2.a.clone() * d1.b.clone();
        for (x, y) in d1.c.iter().zip(&d2.c) {
            s = s - x.clone() * y.clone();
        }
        s
    }

    pub fn self_intersection<T: Scalar>(&self, d: &DivisorClass<T>) -> Result<T> {
        self.intersect(d, d)
    }

    /// `−K_S = C̃₁ + C̃₂ + 2π*F`.
    pub fn anticanonical<T: Scalar>(&self) -> DivisorClass<T> {
        DivisorClass::new(
            T::from_i64(2),
            T::from_i64(2) - self.n_scalar::<T>(),
            vec![T::one(); self.params.m],
        )
    }

    /// `Δ_β = (1−β₁)C̃₁ + (1−β₂)C̃₂`.
    pub fn boundary_class<T: Scalar>(&self, angles: &Angles<T>) -> DivisorClass<T> {
        let c1 = self.class_of::<T>(CurveId::C1Tilde).expect("C1tilde always exists");
        let c2 = self.class_of::<T>(CurveId::C2Tilde).expect("C2tilde always exists");
        c1.scale(&(T::one() - angles.beta1.clone())) + c2.scale(&(T::one() - angles.beta2.clone()))
    }

    /// `−K_{S,Δ_β} = (β₁+β₂)π*C₂ + (2−nβ₁)π*F − β₂ΣEᵢ`.
    pub fn log_anticanonical<T: Scalar>(&self, angles: &Angles<T>) -> DivisorClass<T> {
        DivisorClass::new(
            angles.beta1.clone() + angles.beta2.clone(),
            T::from_i64(2) - self.n_scalar::<T>() * angles.beta1.clone(),
            vec![angles.beta2.clone(); self.params.m],
        )
    }

    /// Nef criterion: `D·Eᵢ = cᵢ ≥ 0`, `D·F̃ᵢ = a − cᵢ ≥ 0`, `D·C̃₁ = b ≥ 0` and
    /// `D·C̃₂ = na + b − Σcᵢ ≥ 0`.
    pub fn is_nef<T: Scalar>(&self, d: &DivisorClass<T>) -> bool {
        if d.c.len() != self.params.m {
            return false;
        }
        let zero = T::zero();
        let mut sum_c = T::zero();
        for ci in &d.c {
            if *ci < zero || d.a.clone() - ci.clone() < zero {
                return false;
            }
            sum_c = sum_c + ci.clone();
        }
        d.b >= zero && self.n_scalar::<T>() * d.a.clone() + d.b.clone() - sum_c >= zero
    }

    /// Ampleness of `−K_{S,Δ_β}`: `β₁ ∈ (0, 2/n)` and `β₂ ∈ (0, 2/(m−n))`
    /// when `n < m` (unbounded above otherwise).
    pub fn ample_angle_range<T: Scalar>(&self, angles: &Angles<T>) -> bool {
        self.ample_violation(angles).is_none()
    }

    /// Names the first violated ampleness bound, if any.
    pub fn ample_violation<T: Scalar>(&self, angles: &Angles<T>) -> Option<String> {
        let n = self.params.n as i64;
        let m = self.params.m as i64;
        let two = T::from_i64(2);
        if !angles.beta1.is_positive() {
            return Some("beta1 must be positive".into());
        }
        if !angles.beta2.is_positive() {
            return Some("beta2 must be positive".into());
        }
        if n > 0 && !(T::from_i64(n) * angles.beta1.clone() < two.clone()) {
            return Some(format!("beta1 must be < 2/n = 2/{n}"));
        }
        if n < m && !(T::from_i64(m - n) * angles.beta2.clone() < two) {
            return Some(format!("beta2 must be < 2/(m-n) = 2/{}", m - n));
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::Rat;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rat {
        Rat::from_frac(n, d)
    }

    fn surface(n: u32, m: usize) -> SurfaceModel {
        make_surface(SurfaceParams::new(n, m))
    }

    #[test]
    fn gram_matrices() {
        assert_eq!(
            surface(2, 0).gram_matrix::<Rat>(),
            vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]
        );
        assert_eq!(
            surface(0, 0).gram_matrix::<Rat>(),
            vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]
        );
        let g = surface(1, 3).gram_matrix::<Rat>();
        assert_eq!(g.len(), 5);
        assert_eq!(linalg::signature(&g), (1, 4, 0));
    }

    #[test]
    fn named_curve_classes() {
        let s = surface(2, 0);
        let c1 = s.class_of::<Rat>(CurveId::C1Tilde).unwrap();
        assert_eq!(c1, DivisorClass::new(q(1, 1), q(-2, 1), vec![]));
        assert_eq!(s.self_intersection(&c1).unwrap(), q(-2, 1));

        let s = surface(0, 1);
        let f1 = s.class_of::<Rat>(CurveId::FTilde(1)).unwrap();
        assert_eq!(f1, DivisorClass::new(q(0, 1), q(1, 1), vec![q(1, 1)]));
        assert_eq!(s.self_intersection(&f1).unwrap(), q(-1, 1));

        let s = surface(1, 3);
        let c2 = s.class_of::<Rat>(CurveId::C2Tilde).unwrap();
        assert_eq!(s.self_intersection(&c2).unwrap(), q(-2, 1));
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let s = surface(1, 2);
        assert_eq!(
            s.class_of::<Rat>(CurveId::E(3)),
            Err(Error::CurveIndexOutOfRange { index: 3, m: 2 })
        );
        assert!(s.class_of::<Rat>(CurveId::FTilde(0)).is_err());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let s = surface(1, 2);
        let d = DivisorClass::new(q(1, 1), q(0, 1), vec![q(0, 1)]);
        assert!(matches!(
            s.intersect(&d, &d),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn pairings_with_boundary_curves() {
        let s = surface(3, 2);
        let d = DivisorClass::new(q(2, 1), q(5, 7), vec![q(1, 3), q(-1, 2)]);
        let c1 = s.class_of(CurveId::C1Tilde).unwrap();
        let c2 = s.class_of(CurveId::C2Tilde).unwrap();
        assert_eq!(s.intersect(&d, &c1).unwrap(), q(5, 7));
        // na + b − Σc = 6 + 5/7 − 1/3 + 1/2
        assert_eq!(s.intersect(&d, &c2).unwrap(), q(6, 1) + q(5, 7) - q(1, 3) + q(1, 2));
        let e1 = s.class_of(CurveId::E(1)).unwrap();
        let e2 = s.class_of(CurveId::E(2)).unwrap();
        assert_eq!(s.intersect(&e1, &e2).unwrap(), q(0, 1));
        assert_eq!(s.intersect(&d, &e1).unwrap(), q(1, 3));
    }

    #[test]
    fn log_anticanonical_examples() {
        let s = surface(0, 2);
        let angles = Angles::new(q(1, 2), q(1, 2)).unwrap();
        let l = s.log_anticanonical(&angles);
        assert_eq!(l, DivisorClass::new(q(1, 1), q(2, 1), vec![q(1, 2), q(1, 2)]));
        assert_eq!(s.self_intersection(&l).unwrap(), q(7, 2));
        assert!(s.is_nef(&l));

        let s = surface(1, 0);
        let angles = Angles::new(q(1, 1), q(1, 1)).unwrap();
        assert_eq!(
            s.log_anticanonical(&angles),
            DivisorClass::new(q(2, 1), q(1, 1), vec![])
        );
        assert_eq!(s.log_anticanonical(&angles), s.anticanonical());

        let s = surface(1, 2);
        let angles = Angles::new(q(1, 2), q(1, 2)).unwrap();
        assert_eq!(
            s.log_anticanonical(&angles),
            DivisorClass::new(q(1, 1), q(3, 2), vec![q(1, 2), q(1, 2)])
        );
    }

    #[test]
    fn log_anticanonical_is_anticanonical_minus_boundary() {
        for (n, m) in [(0, 0), (1, 3), (4, 2)] {
            let s = surface(n, m);
            let angles = Angles::new(q(2, 7), q(5, 11)).unwrap();
            assert_eq!(
                s.log_anticanonical(&angles),
                s.anticanonical::<Rat>() - s.boundary_class(&angles)
            );
        }
    }

    #[test]
    fn nefness_examples() {
        let s = surface(0, 2);
        let minus_e1 = -s.class_of::<Rat>(CurveId::E(1)).unwrap();
        assert!(!s.is_nef(&minus_e1));
        assert!(s.is_nef(&DivisorClass::<Rat>::zero(2)));
    }

    #[test]
    fn ample_range_examples() {
        let s = surface(0, 1);
        assert!(s.ample_angle_range(&Angles::new(q(144, 125), q(48, 25)).unwrap()));
        let s = surface(2, 0);
        assert!(!s.ample_angle_range(&Angles::new(q(1, 1), q(1, 3)).unwrap()));
        let s = surface(0, 2);
        assert!(!s.ample_angle_range(&Angles::new(q(1, 2), q(1, 1)).unwrap()));
        assert!(s.ample_angle_range(&Angles::new(q(1, 2), q(99, 100)).unwrap()));
    }

    #[test]
    fn angles_must_be_positive() {
        assert_eq!(Angles::new(q(0, 1), q(1, 2)), Err(Error::NonPositiveAngle));
        assert!(Angles::new(q(3, 2), q(1, 2)).unwrap().exceeds_one());
    }

    #[test]
    fn curve_names_round_trip() {
        for id in [
            CurveId::C1Tilde,
            CurveId::C2Tilde,
            CurveId::E(3),
            CurveId::FTilde(12),
            CurveId::GenericFiber,
            CurveId::PullbackC2,
        ] {
            assert_eq!(id.to_string().parse::<CurveId>(), Ok(id));
        }
        assert!("E0".parse::<CurveId>().is_err());
        assert!("Ftilde".parse::<CurveId>().is_err());
    }

    fn small_rat() -> impl Strategy<Value = Rat> {
        (-40i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
    }

    fn nonneg_rat() -> impl Strategy<Value = Rat> {
        (0i64..=40, 1i64..=12).prop_map(|(n, d)| q(n, d))
    }

    fn class(m: usize) -> impl Strategy<Value = DivisorClass<Rat>> {
        (small_rat(), small_rat(), prop::collection::vec(small_rat(), m))
            .prop_map(|(a, b, c)| DivisorClass::new(a, b, c))
    }

    proptest! {
        #[test]
        fn intersection_is_symmetric_bilinear(
            n in 0u32..6,
            (d1, d2, d3) in (0usize..5).prop_flat_map(|m| (class(m), class(m), class(m))),
            k in small_rat(),
        ) {
            let s = surface(n, d1.c.len());
            prop_assert_eq!(s.intersect(&d1, &d2).unwrap(), s.intersect(&d2, &d1).unwrap());
            let lhs = s.intersect(&(d1.scale(&k) + d3.clone()), &d2).unwrap();
            let rhs = k * s.intersect(&d1, &d2).unwrap() + s.intersect(&d3, &d2).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn gram_has_hodge_signature(n in 0u32..8, m in 0usize..8) {
            let g = surface(n, m).gram_matrix::<Rat>();
            prop_assert_eq!(linalg::signature(&g), (1, m + 1, 0));
        }

        #[test]
        fn nef_classes_have_nonnegative_square(
            n in 0u32..6,
            m in 0usize..5,
            coeffs in prop::collection::vec(nonneg_rat(), 12),
        ) {
            // a ≥ max cᵢ, cᵢ ≥ 0, b ≥ max(0, Σc − na): nef by construction.
            let s = surface(n, m);
            let c: Vec<Rat> = coeffs[..m].to_vec();
            let max_c = c.iter().cloned().fold(q(0, 1), |x, y| if y > x { y } else { x });
            let a = max_c + coeffs[10].clone();
            let sum_c = c.iter().cloned().fold(q(0, 1), |x, y| x + y);
            let floor = sum_c - q(n as i64, 1) * a.clone();
            let b = if floor > q(0, 1) { floor } else { q(0, 1) } + coeffs[11].clone();
            let d = DivisorClass::new(a, b, c);
            prop_assert!(s.is_nef(&d));
            prop_assert!(s.self_intersection(&d).unwrap() >= q(0, 1));
        }

        #[test]
        fn nef_test_agrees_with_candidate_pairings(n in 0u32..6, d in (0usize..5).prop_flat_map(class)) {
            let s = surface(n, d.c.len());
            let by_pairing = s.candidate_curves().into_iter().all(|id| {
                s.intersect(&d, &s.class_of(id).unwrap()).unwrap() >= q(0, 1)
            });
            prop_assert_eq!(s.is_nef(&d), by_pairing);
        }

        #[test]
        fn boundary_curve_squares(n in 0u32..10, m in 0usize..10) {
            let s = surface(n, m);
            let c1 = s.class_of::<Rat>(CurveId::C1Tilde).unwrap();
            let c2 = s.class_of::<Rat>(CurveId::C2Tilde).unwrap();
            prop_assert_eq!(s.self_intersection(&c1).unwrap(), q(-(n as i64), 1));
            prop_assert_eq!(s.self_intersection(&c2).unwrap(), q(n as i64 - m as i64, 1));
        }

        #[test]
        fn ampleness_is_strict_positivity_on_curves(
            n in 0u32..6,
            m in 0usize..6,
            b1 in (1i64..=128, 1i64..=64),
            b2 in (1i64..=128, 1i64..=64),
        ) {
            let s = surface(n, m);
            let angles = Angles::new(q(b1.0, b1.1), q(b2.0, b2.1)).unwrap();
            let l = s.log_anticanonical(&angles);
            let strictly_positive = s.candidate_curves().into_iter().all(|id| {
                s.intersect(&l, &s.class_of(id).unwrap()).unwrap() > q(0, 1)
            }) && l.c.iter().all(|ci| *ci > q(0, 1));
            // With m = 0 the E/F̃ conditions are vacuous; β₂ > 0 is still required.
            prop_assert_eq!(s.ample_angle_range(&angles), strictly_positive);
        }
    }
}
