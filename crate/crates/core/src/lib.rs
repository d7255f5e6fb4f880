//! Exact tiling solvers, extremal constructions and finite verification
//! tools for packing the six-vertex tree `H` in dense graphs.

pub mod bits;
pub mod graph;
pub mod patterns;
pub mod tiling;
pub mod constructions;
pub mod simplex;
pub mod combin;
pub mod verify;
