//! Exact-arithmetic core for deciding local K-polystability of torus-equivariant
//! deformations of a cscK manifold.
//!
//! Everything in this crate is pure computation over arbitrary-precision
//! rationals: polyhedral cones and their duals, the weight-space model of a
//! deformation under a torus action, the local normal form of the moment map,
//! toric Futaki invariants of polygon pencils, and the finite stability test
//! built on top of them. There is no IO here; JSON formats and the command-line
//! front end live in the `polystab` crate.
//!
//! The crate is `no_std` and only needs `alloc`.
#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cone;
pub mod error;
pub mod exact;
pub mod moment;
pub mod poly;
pub mod presets;
pub mod stability;
pub mod toric;
pub mod torus;

pub use cone::{Cone, ConeFace, InteriorPoint};
pub use error::{Error, Result};
pub use exact::{kernel_basis, lin_solve, primitive, CRat, Matrix, QVec, Rat};
pub use moment::{MomentMapModel, Target, ZeroCertificate};
pub use poly::Poly;
pub use stability::{FutakiOracle, Status, StabilityVerdict};
pub use toric::{AffineFn, Polygon, PolytopePencil};
pub use torus::{DeformationModel, Support};
