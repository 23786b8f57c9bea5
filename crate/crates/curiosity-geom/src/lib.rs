//! Information-geometric exploration toolkit.
//!
//! This crate provides the numerical machinery behind information-based
//! intrinsic rewards on finite state spaces, built from four layers:
//!
//! - **Geometry** ([`geometry`]): alpha/f/Renyi divergences, the Fisher-Rao
//!   metric, geodesics of the alpha-connections, and an alignment diagnostic
//!   that checks whether a divergence gradient points along its own geodesic.
//! - **Rewards** ([`rewards`], [`dpi`]): information values `f(1/p(s))`,
//!   intrinsic reward vectors, the count-bonus and entropy identities, and a
//!   data-processing verifier over state aggregations.
//! - **Dynamics** ([`mdp`], [`policy`]): exact occupancies of episodic finite
//!   MDPs (kernel-power form and an augmented-chain stationary construction),
//!   Monte Carlo cross-checks, and natural-gradient policy optimization in
//!   occupancy geometry.
//! - **Optima** ([`optima`]): closed-form maximizers of reward-plus-information
//!   objectives, brute-force oracles, projection orthogonality, and the
//!   beta-sweep geodesic structure of the exploration-exploitation path.
//!
//! The [`experiment`] module wires everything into a config-driven CLI
//! (`curiosity-geom`) with a machine-readable verification suite; see the
//! book under `book/` for a guided tour.

pub mod density;
pub mod dpi;
pub mod error;
pub mod experiment;
pub mod geometry;
pub mod mdp;
pub mod numeric;
pub mod optima;
pub mod policy;
pub mod rewards;
pub mod rng;
pub mod simplex;

pub use error::{Error, Result};
pub use geometry::{GeneratorF, GeodesicSpec};
pub use simplex::{Distribution, PositiveMeasure};

// The book chapters double as doctests so the guide cannot drift from the
// API. `cargo test --doc` compiles and runs every snippet.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(divergences, "../../../book/src/divergences-and-geodesics.md");
    chapter!(rewards, "../../../book/src/information-rewards.md");
    chapter!(occupancy, "../../../book/src/occupancy.md");
    chapter!(optima, "../../../book/src/curiosity-optima.md");
    chapter!(natural_gradients, "../../../book/src/natural-gradients.md");
    chapter!(density, "../../../book/src/density-estimation.md");
}
