//! Patches: sets of faces of a fullerene bounded by a single cycle.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{FaceId, FullereneGraph, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatchError {
    #[error("patch has no faces")]
    Empty,
    #[error("patch covers the whole surface")]
    NoBoundary,
    #[error("patch boundary is not a single simple cycle")]
    BoundaryNotCycle,
}

#[derive(Debug, Clone, Serialize)]
pub struct Patch {
    pub faces: Vec<FaceId>,
    /// Boundary cycle in walking order.
    pub boundary: Vec<Vertex>,
    /// Degree inside the patch of each boundary vertex (2 or 3), aligned with `boundary`.
    pub boundary_degrees: Vec<u8>,
    pub n2: usize,
    pub n3: usize,
    pub pentagons: usize,
}

impl Patch {
    pub fn from_faces(g: &FullereneGraph, faces: &[FaceId]) -> Result<Self, PatchError> {
        if faces.is_empty() {
            return Err(PatchError::Empty);
        }
        let set: BTreeSet<FaceId> = faces.iter().copied().collect();
        let mut boundary_nbrs: HashMap<Vertex, Vec<Vertex>> = HashMap::new();
        let mut degree: HashMap<Vertex, u8> = HashMap::new();
        for &(u, v) in g.edges() {
            let (f1, f2) = g.edge_faces(u, v);
            let inside = set.contains(&f1) as u8 + set.contains(&f2) as u8;
            if inside == 0 {
                continue;
            }
            *degree.entry(u).or_default() += 1;
            *degree.entry(v).or_default() += 1;
            if inside == 1 {
                boundary_nbrs.entry(u).or_default().push(v);
                boundary_nbrs.entry(v).or_default().push(u);
            }
        }
        if boundary_nbrs.is_empty() {
            return Err(PatchError::NoBoundary);
        }
        if boundary_nbrs.values().any(|nb| nb.len() != 2) {
            return Err(PatchError::BoundaryNotCycle);
        }
        let start = *boundary_nbrs.keys().min().unwrap();
        let mut boundary = vec![start];
        let mut prev = start;
        let mut cur = boundary_nbrs[&start][0];
        while cur != start {
            boundary.push(cur);
            let nb = &boundary_nbrs[&cur];
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
            if boundary.len() > boundary_nbrs.len() {
                return Err(PatchError::BoundaryNotCycle);
            }
        }
        if boundary.len() != boundary_nbrs.len() {
            return Err(PatchError::BoundaryNotCycle);
        }
        let boundary_degrees: Vec<u8> = boundary.iter().map(|v| degree[v]).collect();
        let n2 = boundary_degrees.iter().filter(|&&d| d == 2).count();
        let n3 = boundary_degrees.len() - n2;
        let pentagons = set.iter().filter(|&&f| g.face(f).is_pentagon()).count();
        Ok(Patch { faces: set.into_iter().collect(), boundary, boundary_degrees, n2, n3, pentagons })
    }

    /// `n2 - n3 = 6 - p` for the outer face.
    pub fn satisfies_pentagon_identity(&self) -> bool {
        self.n2 as i64 - self.n3 as i64 == 6 - self.pentagons as i64
    }

    /// Vertices on faces of the patch.
    pub fn vertices(&self, g: &FullereneGraph) -> BTreeSet<Vertex> {
        self.faces.iter().flat_map(|&f| g.face(f).boundary.iter().copied()).collect()
    }
}
