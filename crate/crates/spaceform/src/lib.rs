//! Numerical comparison geometry on constant-curvature model spaces.
//!
//! The crate is organized around three layers:
//!
//! * [`curvature`] and [`model`] — the exact kernel: the distance-modifying
//!   function `m_k`, the unified law of cosines, and points/geodesics of the
//!   simply connected space form of curvature `k` realized in ambient
//!   coordinates (sphere, euclidean space, hyperboloid).
//! * [`metric`] and [`eccentricity`] — finite metric spaces (distance
//!   matrices) and the invariants computed on them: k-eccentricity, critical
//!   radius, criticality tests, and both sagitta variants.
//! * [`lens`] and [`spaces`] — the lens region `L^n_k(h,r)` (membership,
//!   volume by quadrature and Monte Carlo, dihedral angle, net intersection
//!   bounds) and generators for sampled model spaces (spheres, projective
//!   spaces, round lens quotients, glued approximations).
//!
//! All randomized routines are deterministic given a 64-bit seed: sampling
//! uses [`rand_chacha::ChaCha8Rng`], seeded with `seed_from_u64` and sharded
//! by stream index, so parallel callers partition work by stream.

pub mod ball;
pub mod curvature;
pub mod eccentricity;
pub mod error;
pub mod fms;
pub mod lens;
pub mod metric;
pub mod model;
pub mod quad;
pub mod rng;
pub mod spaces;

pub use curvature::{comparison_angle, side_from_hinge, Curvature, Hinge};
pub use error::{Error, Result};
pub use metric::FiniteMetricSpace;
pub use model::ModelPoint;
