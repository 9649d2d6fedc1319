//! Exact knot signatures from PD codes, cusp-geometry slope invariants,
//! torus-knot and twist-family checks, and census aggregation.

pub mod census;
pub mod cli;
pub mod cusp;
pub mod diagram;
pub mod exactlin;
pub mod geodesic;
pub mod torus;
pub mod twistfam;
