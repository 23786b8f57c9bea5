//! Finite-dimensional information geometry: divergences, the Fisher-Rao
//! metric, geodesics of the alpha-connections, and the geodetic alignment
//! diagnostic, on the simplex and the positive orthant.

pub mod alignment;
pub mod divergence;
pub mod generator;
pub mod geodesic;
pub mod metric;

pub use alignment::{divergence_gradient, geodetic_alignment};
pub use divergence::{alpha_divergence, f_divergence, kl_divergence, renyi_divergence};
pub use generator::GeneratorF;
pub use geodesic::GeodesicSpec;
pub use metric::{fisher_rao_cosine, fisher_rao_inner, fisher_rao_norm, project_radial};
