//! Spectral and geometric statistics of sparse Erdős–Rényi graphs, regular
//! trees and Galton–Watson trees.

pub mod asymptotics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod hyperbolicity;
pub mod mckay;
pub mod quadrature;
pub mod seed;
pub mod spectral;
pub mod stats;

pub use asymptotics::{LoopBounds, LoopParams};
pub use error::{Error, Result};
pub use generators::{Family, Fixture, GenSpec, OffspringLaw};
pub use graph::{DistanceMatrix, Graph};
pub use hyperbolicity::{CurvatureProfile, DeltaStat, SideMode, TrianglePath};
pub use mckay::{DistanceMode, McKayDensity};
pub use spectral::{Histogram, SpectralMeasure};
