//! Seeded random inputs for the oracle suites.
//!
//! Angles are drawn as `p/q` with `q` uniform in `1..=64` and `p` uniform in
//! `1..=2q`, then rejected until the log anticanonical class is ample. The
//! generator is ChaCha8 seeded with a `u64`, so every stream is
//! reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::closed_form::Lemma;
use crate::picard::{make_surface, Angles, CurveId, DivisorClass, SurfaceParams};
use crate::scalar::Scalar;
use crate::Rat;

pub const MAX_DENOMINATOR: i64 = 64;
pub const MAX_N: u32 = 6;
pub const MAX_M: usize = 6;

/// One sampled evaluation point.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub params: SurfaceParams,
    pub angles: Angles<Rat>,
    /// Divisor under test, when the suite needs one.
    pub curve: Option<CurveId>,
}

impl std::fmt::Display for Sample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} m={} beta1={} beta2={}",
            self.params.n, self.params.m, self.angles.beta1, self.angles.beta2
        )?;
        if let Some(c) = self.curve {
            write!(f, " E={c}")?;
        }
        Ok(())
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rational(&mut self) -> Rat {
        let den = self.rng.gen_range(1..=MAX_DENOMINATOR);
        let num = self.rng.gen_range(1..=2 * den);
        Rat::from_frac(num, den)
    }

    pub fn params(&mut self) -> SurfaceParams {
        SurfaceParams::new(self.rng.gen_range(0..=MAX_N), self.rng.gen_range(0..=MAX_M))
    }

    /// Rejection-samples angles in the ample range of `params`. Small
    /// angles are always ample, so this terminates quickly.
    pub fn ample_angles(&mut self, params: SurfaceParams) -> Angles<Rat> {
        let model = make_surface(params);
        loop {
            let angles = Angles::new(self.rational(), self.rational()).expect("sampled angles are positive");
            if model.ample_angle_range(&angles) {
                return angles;
            }
        }
    }

    pub fn ample_point(&mut self) -> Sample {
        let params = self.params();
        let angles = self.ample_angles(params);
        Sample {
            params,
            angles,
            curve: None,
        }
    }

    fn pick<T: Clone>(&mut self, items: &[T]) -> T {
        items[self.rng.gen_range(0..items.len())].clone()
    }

    /// A point inside the validity domain of `lemma`, with the matching
    /// divisor (`Eᵢ` for a uniformly chosen `i` in the exceptional cases).
    pub fn lemma_point(&mut self, lemma: Lemma) -> Sample {
        let all: Vec<(u32, usize)> = (0..=MAX_N).flat_map(|n| (0..=MAX_M).map(move |m| (n, m))).collect();
        let feasible: Vec<(u32, usize)> = all
            .into_iter()
            .filter(|&(n, m)| {
                let (ni, mi) = (n as usize, m);
                match lemma {
                    Lemma::C1 | Lemma::C2 => true,
                    Lemma::ExceptionalNAtLeastM => mi >= 1 && ni >= mi,
                    Lemma::ExceptionalSteepC1 => ni >= 2 && ni < mi,
                    Lemma::ExceptionalSteepC2 => ni >= 1 && ni < mi,
                    Lemma::ExceptionalNZero => ni == 0 && mi >= 1,
                }
            })
            .collect();
        loop {
            let (n, m) = self.pick(&feasible);
            let params = SurfaceParams::new(n, m);
            // A few attempts per (n, m) keeps the choice of (n, m) close
            // to uniform over the feasible set.
            for _ in 0..64 {
                let angles = self.ample_angles(params);
                if lemma.applies(params, &angles) {
                    let curve = match lemma {
                        Lemma::C1 => CurveId::C1Tilde,
                        Lemma::C2 => CurveId::C2Tilde,
                        _ => CurveId::E(self.rng.gen_range(1..=m)),
                    };
                    return Sample {
                        params,
                        angles,
                        curve: Some(curve),
                    };
                }
            }
        }
    }

    /// Nonnegative combination of the candidate curves and a fibre with
    /// coefficients `p/q`, `p ∈ 0..=6`, `q ∈ 1..=6`; such a class is
    /// effective by construction.
    pub fn effective_class(&mut self, params: SurfaceParams) -> DivisorClass<Rat> {
        let model = make_surface(params);
        let mut ids = model.candidate_curves();
        ids.push(CurveId::GenericFiber);
        ids.iter().fold(DivisorClass::zero(params.m), |acc, id| {
            let k = Rat::from_frac(self.rng.gen_range(0..=6), self.rng.gen_range(1..=6));
            acc + model.class_of::<Rat>(*id).expect("valid curve").scale(&k)
        })
    }

    pub fn index(&mut self, upper: usize) -> usize {
        self.rng.gen_range(0..upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Sampler::new(42);
        let mut b = Sampler::new(42);
        for _ in 0..20 {
            assert_eq!(a.ample_point(), b.ample_point());
        }
    }

    #[test]
    fn lemma_points_satisfy_their_hypotheses() {
        let mut s = Sampler::new(3);
        for lemma in Lemma::ALL {
            for _ in 0..10 {
                let p = s.lemma_point(lemma);
                assert!(lemma.applies(p.params, &p.angles));
                assert!(make_surface(p.params).ample_angle_range(&p.angles));
            }
        }
    }
}
