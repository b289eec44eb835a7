//! Continuous piecewise-linear functions on a closed rational interval.

use std::cmp::Ordering;

use crate::quadratic::Quadratic;
use crate::scalar::Scalar;

/// `f(u) = c0 + c1·u` on `[breaks[i], breaks[i+1]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PLFunction<T> {
    breaks: Vec<T>,
    /// `(c0, c1)` per segment, in the absolute variable.
    lines: Vec<(T, T)>,
}

fn sort_dedup<T: Scalar>(mut xs: Vec<T>) -> Vec<T> {
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    xs.dedup();
    xs
}

fn line_at<T: Scalar>(line: &(T, T), u: &T) -> T {
    line.0.clone() + line.1.clone() * u.clone()
}

impl<T: Scalar> PLFunction<T> {
    /// A single affine function `c0 + c1·u` on `[lo, hi]`.
    pub fn affine(lo: T, hi: T, c0: T, c1: T) -> Self {
        assert!(lo <= hi, "empty domain");
        PLFunction {
            breaks: vec![lo, hi],
            lines: vec![(c0, c1)],
        }
    }

    pub fn zero(lo: T, hi: T) -> Self {
        PLFunction::affine(lo, hi, T::zero(), T::zero())
    }

    /// Lower envelope `min_k (c0_k + c1_k·u)` on `[lo, hi]`, traced left to
    /// right. The result is concave.
    pub fn min_of_affine(lo: T, hi: T, lines: &[(T, T)]) -> Self {
        assert!(!lines.is_empty(), "minimum of no functions");
        assert!(lo <= hi, "empty domain");
        // Lowest at `lo`; ties go to the smaller slope, which stays lower
        // to the right.
        let lower = |i: usize, j: usize, at: &T| {
            let (a, b) = (line_at(&lines[i], at), line_at(&lines[j], at));
            a < b || (a == b && lines[i].1 < lines[j].1)
        };
        let mut current = 0;
        for j in 1..lines.len() {
            if lower(j, current, &lo) {
                current = j;
            }
        }
        let mut breaks = vec![lo.clone()];
        let mut out = Vec::new();
        let mut at = lo;
        loop {
            // Next line to take over: the earliest crossing strictly to the
            // right by a line of smaller slope. Lines through the current
            // point with smaller slope were already preferred above.
            let mut next: Option<(T, usize)> = None;
            let li = &lines[current];
            for (j, lj) in lines.iter().enumerate() {
                if lj.1 >= li.1 {
                    continue;
                }
                let cross = (lj.0.clone() - li.0.clone()) / (li.1.clone() - lj.1.clone());
                if cross <= at || cross >= hi {
                    continue;
                }
                let better = match &next {
                    None => true,
                    Some((u, k)) => cross < *u || (cross == *u && lj.1 < lines[*k].1),
                };
                if better {
                    next = Some((cross, j));
                }
            }
            out.push(lines[current].clone());
            match next {
                Some((u, j)) => {
                    breaks.push(u.clone());
                    at = u;
                    current = j;
                }
                None => {
                    breaks.push(hi);
                    break;
                }
            }
        }
        PLFunction { breaks, lines: out }
    }

    pub fn lo(&self) -> &T {
        &self.breaks[0]
    }

    pub fn hi(&self) -> &T {
        self.breaks.last().expect("nonempty")
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breaks
    }

    /// Slopes per segment, left to right.
    pub fn slopes(&self) -> Vec<T> {
        self.lines.iter().map(|l| l.1.clone()).collect()
    }

    fn segment(&self, u: &T) -> Option<usize> {
        if *u < *self.lo() || *u > *self.hi() {
            return None;
        }
        Some(
            self.breaks[1..]
                .iter()
                .position(|b| *u <= *b)
                .unwrap_or(self.lines.len() - 1),
        )
    }

    pub fn eval(&self, u: &T) -> Option<T> {
        self.segment(u).map(|i| line_at(&self.lines[i], u))
    }

    pub fn is_continuous(&self) -> bool {
        self.lines
            .windows(2)
            .zip(&self.breaks[1..])
            .all(|(w, b)| line_at(&w[0], b) == line_at(&w[1], b))
    }

    /// Slopes nonincreasing.
    pub fn is_concave(&self) -> bool {
        self.lines.windows(2).all(|w| w[1].1 <= w[0].1)
    }

    /// Restriction to a refined list of cuts covering the same domain.
    fn pieces_on(&self, cuts: &[T]) -> Vec<(T, T, Quadratic<T>)> {
        cuts.windows(2)
            .map(|w| {
                let mid = (w[0].clone() + w[1].clone()) / T::from_i64(2);
                let i = self.segment(&mid).expect("cut inside domain");
                let (c0, c1) = self.lines[i].clone();
                (w[0].clone(), w[1].clone(), Quadratic::linear(c0, c1))
            })
            .collect()
    }

    fn common_cuts(&self, other: &Self) -> Vec<T> {
        assert!(
            self.lo() == other.lo() && self.hi() == other.hi(),
            "functions live on different domains"
        );
        let mut cuts = self.breaks.clone();
        cuts.extend(other.breaks.iter().cloned());
        sort_dedup(cuts)
    }

    /// Pointwise sum on the common refinement.
    pub fn add(&self, other: &Self) -> Self {
        let cuts = self.common_cuts(other);
        let a = self.pieces_on(&cuts);
        let b = other.pieces_on(&cuts);
        PLFunction {
            breaks: cuts,
            lines: a
                .into_iter()
                .zip(b)
                .map(|((_, _, p), (_, _, q))| (p.q0 + q.q0, p.q1 + q.q1))
                .collect(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        PLFunction {
            breaks: self.breaks.clone(),
            lines: self
                .lines
                .iter()
                .map(|(c0, c1)| (c0.clone() * k.clone(), c1.clone() * k.clone()))
                .collect(),
        }
    }

    pub fn integral(&self) -> T {
        self.pieces_on(&self.breaks)
            .iter()
            .fold(T::zero(), |acc, (lo, hi, p)| acc + p.integral(lo, hi))
    }

    /// `∫ u·f(u) du`.
    pub fn first_moment(&self) -> T {
        self.pieces_on(&self.breaks)
            .into_iter()
            .fold(T::zero(), |acc, (lo, hi, p)| {
                acc + (p * Quadratic::x()).integral(&lo, &hi)
            })
    }

    /// `∫ f·g` over the common domain.
    pub fn integral_of_product(&self, other: &Self) -> T {
        let cuts = self.common_cuts(other);
        self.pieces_on(&cuts)
            .into_iter()
            .zip(other.pieces_on(&cuts))
            .fold(T::zero(), |acc, ((lo, hi, p), (_, _, q))| {
                acc + (p * q).integral(&lo, &hi)
            })
    }
}
