//! Minimal graphs over the upper half-plane built from Weierstrass–Enneper
//! data.
//!
//! The crate is organized bottom-up:
//!
//! - [`expr`]: parse, evaluate and differentiate holomorphic expressions in `z`.
//! - [`contour`]: adaptive Gauss–Kronrod line integrals of expressions inside
//!   the upper half-plane.
//! - [`harmonic`]: planar harmonic maps `f = h + conj(g)`, Heinz-type lower
//!   bounds for `|Df|`, the Cayley transform, the Poisson kernel and
//!   hyperbolic densities.
//! - [`enneper`]: the minimal surface over a harmonic map, its conformal
//!   factor and Gaussian curvature (three independent routes), and the
//!   built-in extremal surface attaining `|K| = 1/dist²`.
//! - [`cli`]: job configuration, mesh/CSV/JSON/SVG writers and the
//!   verification suites behind the `minsurf` binary.

pub mod cli;
pub mod contour;
pub mod enneper;
pub mod expr;
pub mod harmonic;

/// Double-precision complex scalar used everywhere in the crate.
pub type Complex = num_complex::Complex64;

pub use contour::QuadratureConfig;
pub use enneper::{ExtremalInstance, SurfaceSample, WEData};
pub use expr::Expr;
pub use harmonic::{BoundReport, Domain, GridSpec, HarmonicMap};
