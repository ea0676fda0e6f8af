//! Saturation numbers of fullerene graphs.
//!
//! The crate computes minimum maximal matchings exactly, builds nanotubes with
//! the tube matching pattern, and checks the discharging lower bound
//! `s(F) >= n/3 - 2` on concrete matchings.

pub mod construction;
pub mod discharging;
pub mod embedding;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod matching;
pub mod patch;
pub mod solver;
pub mod spiral;
pub mod tube;

pub use graph::{DualGraph, Face, FaceId, FullereneGraph, GraphError, Vertex};
