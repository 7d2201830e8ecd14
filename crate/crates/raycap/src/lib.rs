//! Direction-of-arrival MIMO channel toolkit.
//!
//! Builds complex channel matrices for uniform linear and planar antenna
//! arrays receiving a fan of plane-wave rays, evaluates log-det channel
//! capacity under three transmit power regimes together with their
//! closed-form large-system limits, and computes spherical-cap coverage
//! statistics for satellite constellations.
//!
//! Module map:
//!
//! * [`geometry`] — array layouts, ray directions, per-element steering gains
//! * [`channel`] — channel matrix construction and the Gram-matrix diagnostic
//! * [`capacity`] — capacity evaluation, SISO baseline, asymptotic limits
//! * [`sphere`] — Tammes separations, covering radii, cap coverage
//! * [`sweep`] — deterministic parameter sweeps with CSV/JSON emission
//!
//! # Example
//!
//! ```
//! use raycap::capacity::{capacity, CapacityConfig, PowerSetup};
//! use raycap::channel::{build_channel, RayFan};
//! use raycap::geometry::ArrayGeometry;
//!
//! // Two-element half-wavelength array, two equally spaced rays.
//! let geom = ArrayGeometry::linear(2, 1.0, 0.5).unwrap();
//! let fan = RayFan::equal_angle(2, 0.0).unwrap();
//! let h = build_channel(&geom, &fan);
//!
//! let cfg = CapacityConfig::from_snr(1.0, PowerSetup::Setup1).unwrap();
//! let result = capacity(&h, &cfg);
//! assert!((result.bits() - 2.0).abs() < 1e-9);
//! ```

pub mod capacity;
pub mod channel;
pub mod geometry;
pub mod sphere;
pub mod sweep;

mod error;

pub use error::{Error, Result};
