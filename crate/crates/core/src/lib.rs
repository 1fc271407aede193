//! Finite non-Euclidean graphs on the square-type lines of F_q^d and the
//! distance sets of subsets of the unit sphere.
//!
//! The modules build on each other in order: [`ffield`] for arithmetic in
//! F_q, [`geometry`] for spheres and the line set Ω, [`scheme`] for the
//! relation graphs (Ω, R_i), [`spectra`] and [`mixing`] for their spectral
//! and pseudo-random properties, and [`experiments`] for the end-to-end
//! distance-set trials.
//!
//! Numeric code is generic over the scalar type; the aliases below fix it
//! to `f64` or `f32`.

pub mod error;
pub mod experiments;
pub mod ffield;
pub mod geometry;
pub mod mixing;
pub mod records;
pub mod scheme;
pub mod spectra;

pub use error::{Error, Result};
pub use ffield::{FieldElement, FieldHeader, FieldSpec};
pub use geometry::{DistanceSet, LineRep, OmegaSet, PointVec, Sphere};
pub use scheme::{GraphHeader, RelationIndex, RelationValue, SchemeGraph};

pub type DenseSymMatrix64 = spectra::DenseSymMatrix<f64>;
pub type DenseSymMatrix32 = spectra::DenseSymMatrix<f32>;
pub type Spectrum64 = spectra::Spectrum<f64>;
pub type Spectrum32 = spectra::Spectrum<f32>;
pub type SpectralBoundReport64 = spectra::SpectralBoundReport<f64>;
pub type SpectralBoundReport32 = spectra::SpectralBoundReport<f32>;
pub type MixingCheck64 = mixing::MixingCheck<f64>;
pub type MixingCheck32 = mixing::MixingCheck<f32>;
pub type MixingReport64 = mixing::MixingReport<f64>;
