//! Numerical geometry of curves and submanifolds in pseudo-Euclidean spaces.
//!
//! The crate computes extrinsic invariants of immersed submanifolds of the
//! flat pseudo-Euclidean space `E^m_s` (second fundamental form, shape
//! operator, normal connection, covariant derivatives of `h`, mean
//! curvature), Frenet data of non-null curves under an indefinite metric
//! (frame, signs, curvature functions, helix classification), and normal
//! sections traced by numerical continuation, together with verification
//! routines for the structural identities that relate them.
//!
//! Everything is plain `f64` numerics over dynamically sized vectors. The
//! crate is `no_std`-compatible (requires `alloc`); enable the `libm`
//! feature instead of `std` for builds without the standard library.
//!
//! The companion `pseudogeo-cli` crate adds scenario configs, batch
//! verification runs and report files on top of this library.
//!
//! ```
//! use nalgebra::dvector;
//! use pseudogeo::{catalog, sections, Tolerances};
//!
//! // Normal sections of the unit sphere are great circles: geodesics
//! // whose derivatives stay in a 2-plane.
//! let sphere = catalog::lookup("sphere2").unwrap();
//! let tols = Tolerances::default();
//! let section = sections::trace_normal_section(
//!     &sphere.chart,
//!     &[0.3, 0.2],
//!     &dvector![1.0, 0.5],
//!     1.2,
//!     17,
//!     &tols,
//! )
//! .unwrap();
//! assert!(section.geodesic);
//! let planarity = sections::planarity_order(&section, 3, &tols).unwrap();
//! assert_eq!(planarity.order, 2);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

#[macro_use]
extern crate alloc;

pub mod catalog;
pub mod chart;
pub mod curve;
pub mod error;
pub mod jets;
pub mod linalg;
pub mod ode;
pub mod sample;
pub mod sections;
pub mod submanifold;
pub mod tolerances;

pub use error::GeoError;
pub use linalg::{CausalCharacter, CausalKind, MetricSignature};
pub use tolerances::Tolerances;

/// Crate result alias.
pub type Result<T> = core::result::Result<T, GeoError>;
