//! Exact δ-invariants and K-polystability for blow-ups of the Hirzebruch
//! surface `𝔽_n` at `m` points of a section,
//! with conical boundary along the proper transforms of two sections.

pub mod closed_form;
pub mod error;
pub mod linalg;
pub mod picard;
pub mod pl;
pub mod quadratic;
pub mod sampling;
pub mod scalar;
pub mod tvariety;
pub mod verdict;
pub mod verify;
pub mod volumes;
pub mod zariski;

pub use error::{Error, Result};
pub use picard::{make_surface, Angles, CurveId, DivisorClass, SurfaceModel, SurfaceParams};
pub use quadratic::Quadratic;
pub use scalar::{format_rational, Perturbed, Scalar};
pub use volumes::{
    expected_vanishing_order, log_discrepancy, stability_ratio, threshold, volume_curve, Piece, PiecewiseQuadratic,
};
pub use zariski::{zariski_decompose, zariski_decompose_bruteforce, ZariskiDecomposition};

/// Exact scalar used throughout.
pub type Rat = num_rational::BigRational;

pub type RatAngles = Angles<Rat>;
pub type RatDivisor = DivisorClass<Rat>;
pub type RatZariski = ZariskiDecomposition<Rat>;
pub type RatCurve = PiecewiseQuadratic<Rat>;
