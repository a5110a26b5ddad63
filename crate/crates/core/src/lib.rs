//! Exact wall crossing for weighted broken elliptic surfaces.
//!
//! The crate models marked elliptic fibrations over nodal curves, the
//! arrangement of walls in weight space, and the transformations that occur as
//! the marker weights decrease. All arithmetic is over exact rationals.

pub mod curve;
pub mod dot;
pub mod fiber;
pub mod fixtures;
pub mod io;
pub mod rational;
pub mod reduction;
pub mod surface;
pub mod walls;

pub use curve::{
    component_degree, hassett_reduce, is_hassett_stable, CurveError, CurveVertex, MarkedNodalCurve, Marker,
    MarkerIndex, VertexId, WeightVector,
};
pub use dot::{curve_dot, emit_dot};
pub use fiber::{
    canonical_contribution, fiber_model_at, intersection_data, lct_threshold, verify_threshold, FiberError,
    FiberModelState, IntersectionData, KodairaFiberType,
};
pub use io::{parse_model, ParseError};
pub use rational::{q, Rational};
pub use reduction::{
    cross_wall, increase_to_one, reduce, reduce_with, Direction, ReduceOptions, ReductionError, ReductionTrace,
    TransformationKind, TransformationRecord,
};
pub use surface::{
    validate, volume, AttachFiber, BrokenEllipticSurface, ComponentId, EllipticComponent, FiberId, MarkedFiber,
    PseudoComponent, PseudoFate, PseudoTreeAttachment, SurfaceError, TreeChild, TypeIIPseudo, Violation, ViolationKind,
};
pub use walls::{enumerate_walls, locate, segment_walls, Chamber, Side, Wall, WallError, WallKind};
