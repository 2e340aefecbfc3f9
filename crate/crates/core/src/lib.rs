//! Exact tropical dynamics: min-plus polynomials, skeleton polytopes, Vieta
//! involutions and their lifts, dynamical potentials, planar elliptic curves,
//! expanding maps of the line, and the Kummer tetrahedron.

pub mod dynamics3d;
pub mod elliptic;
pub mod geometry;
pub mod kummer;
pub mod pl1d;
pub mod potential;
pub mod presets;
pub mod rational;
pub mod trop;

#[cfg(test)]
mod invariants;

pub use dynamics3d::{
    apply_word, cocycle, orbit, vieta_reflection, AutomorphismWord, Axis, DynamicsError,
    LiftedPoint, Orbit, OrbitOptions, SurfaceSpec,
};
pub use elliptic::{CurveSpec, EllipticError, SkeletonCycle};
pub use geometry::{ConvexPolytope, GeometryError, Point, SkeletonMesh, TropicalCurve};
pub use kummer::{SemiconjugacyReport, TorusPoint};
pub use pl1d::{PLMap1D, PiecewiseMeasure, Pl1dError, Potential1D};
pub use potential::{PotentialError, PotentialField};
pub use rational::{parse_rational, Rational};
pub use trop::{AffineForm, TropError, TropicalPolynomial};
