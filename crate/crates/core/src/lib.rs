//! Log-cost optimal transport between spherical regions of a convex cone,
//! pseudo-cone geometry, and Rochet-type potentials that turn c-cyclically
//! monotone pairings into pseudo-cones.

pub mod cone_geometry;
pub mod error;
pub mod gauss_image;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod pseudo_cone;
pub mod rochet;
pub mod section;
pub mod transport;

pub use cone_geometry::{cost, ConeSpec, RegionKind, SphericalRegion, UnitVector};
pub use error::{Error, Result};
pub use gauss_image::{certify_optimality, compare_map, pushforward_report, solve_gauss_image, GaussImageSolution};
pub use pseudo_cone::{GaussImage, PseudoCone};
pub use rochet::{build_potential, verify_containment, RochetPotential};
pub use section::{export_section, SectionPlane};
pub use transport::{solve_ot, DiscreteMeasure, Pairing, TransportPlan};
