//! Fullerene graphs: validated cubic plane graphs with 12 pentagons.
//!
//! The rotation system is the single source of truth. Rotations are read as
//! counterclockwise; faces are traced by turning to the rotation successor of
//! the arrival edge (see [`crate::embedding`]). A clockwise input describes the
//! mirror image and is accepted as is.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding;

pub type Vertex = usize;
pub type FaceId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: Vertex, degree: usize },
    #[error("malformed rotation system: {0}")]
    Malformed(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("Euler formula violated: V - E + F = {v} - {e} + {f}")]
    EulerViolation { v: usize, e: usize, f: usize },
    #[error("face sizes must be twelve 5s and otherwise 6s, got {sizes:?}")]
    WrongFaceSizes { sizes: Vec<usize> },
    #[error("no fullerene has {0} vertices")]
    BadVertexCount(usize),
    #[error("graph is not 3-connected")]
    NotThreeConnected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub id: FaceId,
    /// Boundary in tracing order; consecutive entries are adjacent.
    pub boundary: Vec<Vertex>,
}

impl Face {
    pub fn size(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_pentagon(&self) -> bool {
        self.boundary.len() == 5
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.boundary.contains(&v)
    }

    /// Whether `{u, v}` is one of the boundary edges.
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        let k = self.boundary.len();
        (0..k).any(|i| {
            let (a, b) = (self.boundary[i], self.boundary[(i + 1) % k]);
            (a == u && b == v) || (a == v && b == u)
        })
    }
}

/// A validated fullerene graph. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FullereneGraph {
    rotation: Vec<[Vertex; 3]>,
    faces: Vec<Face>,
    dart_face: Vec<[FaceId; 3]>,
    edges: Vec<(Vertex, Vertex)>,
    incident: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Also require 3-connectivity (quadratic number of connectivity checks).
    pub check_three_connected: bool,
}

impl FullereneGraph {
    /// Validates a rotation system and traces its faces.
    pub fn build_from_rotation(rotation: Vec<Vec<Vertex>>) -> Result<Self, GraphError> {
        Self::build_with(rotation, BuildOptions::default())
    }

    pub fn build_with(rotation: Vec<Vec<Vertex>>, opts: BuildOptions) -> Result<Self, GraphError> {
        let n = rotation.len();
        for (v, r) in rotation.iter().enumerate() {
            if r.len() != 3 {
                return Err(GraphError::NotCubic { vertex: v, degree: r.len() });
            }
            for (i, &w) in r.iter().enumerate() {
                if w >= n {
                    return Err(GraphError::Malformed(format!("vertex {v} lists neighbour {w} out of range")));
                }
                if w == v {
                    return Err(GraphError::Malformed(format!("loop at vertex {v}")));
                }
                if r[..i].contains(&w) {
                    return Err(GraphError::Malformed(format!("parallel edges {v}-{w}")));
                }
                if !rotation[w].contains(&v) {
                    return Err(GraphError::Malformed(format!("edge {v}-{w} not listed at {w}")));
                }
            }
        }
        if !is_connected(&rotation, &[]) {
            return Err(GraphError::NotConnected);
        }
        let tracing = embedding::trace_faces(&rotation);
        let e = 3 * n / 2;
        let f = tracing.faces.len();
        if n + f != e + 2 {
            return Err(GraphError::EulerViolation { v: n, e, f });
        }
        let sizes: Vec<usize> = tracing.faces.iter().map(|b| b.len()).collect();
        let pentagons = sizes.iter().filter(|&&s| s == 5).count();
        if pentagons != 12 || sizes.iter().any(|&s| s != 5 && s != 6) {
            return Err(GraphError::WrongFaceSizes { sizes });
        }
        for b in &tracing.faces {
            let mut seen = b.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != b.len() {
                return Err(GraphError::Malformed(format!("face {b:?} is not a simple cycle")));
            }
        }
        if n < 20 || n == 22 || n % 2 == 1 {
            return Err(GraphError::BadVertexCount(n));
        }
        if opts.check_three_connected && !is_three_connected(&rotation) {
            return Err(GraphError::NotThreeConnected);
        }
        let rot: Vec<[Vertex; 3]> = rotation.iter().map(|r| [r[0], r[1], r[2]]).collect();
        let dart_face = tracing.dart_face.iter().map(|d| [d[0], d[1], d[2]]).collect();
        let faces = tracing
            .faces
            .into_iter()
            .enumerate()
            .map(|(id, boundary)| Face { id, boundary })
            .collect();
        let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(e);
        for (u, r) in rot.iter().enumerate() {
            for &w in r {
                if u < w {
                    edges.push((u, w));
                }
            }
        }
        edges.sort_unstable();
        let mut incident = vec![[usize::MAX; 3]; n];
        let mut fill = vec![0usize; n];
        for (id, &(u, w)) in edges.iter().enumerate() {
            incident[u][fill[u]] = id;
            fill[u] += 1;
            incident[w][fill[w]] = id;
            fill[w] += 1;
        }
        Ok(FullereneGraph { rotation: rot, faces, dart_face, edges, incident })
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn rotation(&self, v: Vertex) -> &[Vertex; 3] {
        &self.rotation[v]
    }

    pub fn rotation_lists(&self) -> Vec<Vec<Vertex>> {
        self.rotation.iter().map(|r| r.to_vec()).collect()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex; 3] {
        &self.rotation[v]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.rotation[u].contains(&v)
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically. Edge ids index this list.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Ids of the three edges at `v`, in increasing order.
    pub fn incident_edges(&self, v: Vertex) -> &[usize; 3] {
        &self.incident[v]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn pentagons(&self) -> Vec<FaceId> {
        self.faces.iter().filter(|f| f.is_pentagon()).map(|f| f.id).collect()
    }

    /// Face traced by the dart `u -> v`.
    pub fn dart_face(&self, u: Vertex, v: Vertex) -> FaceId {
        let i = self.rotation[u].iter().position(|&w| w == v).expect("not an edge");
        self.dart_face[u][i]
    }

    /// The two faces on either side of the edge `{u, v}`.
    pub fn edge_faces(&self, u: Vertex, v: Vertex) -> (FaceId, FaceId) {
        (self.dart_face(u, v), self.dart_face(v, u))
    }

    /// The three faces around `v`.
    pub fn faces_at(&self, v: Vertex) -> [FaceId; 3] {
        self.dart_face[v]
    }

    /// The face at `v` that avoids the edge `{v, u}`.
    pub fn face_opposite(&self, v: Vertex, u: Vertex) -> FaceId {
        let (a, b) = self.edge_faces(v, u);
        *self.dart_face[v].iter().find(|&&f| f != a && f != b).expect("cubic vertex has three faces")
    }

    /// Face sizes summed; equals `3n` for every fullerene.
    pub fn face_size_sum(&self) -> usize {
        self.faces.iter().map(Face::size).sum()
    }

    pub fn dual(&self) -> DualGraph {
        let mut adj = vec![Vec::new(); self.faces.len()];
        for &(u, v) in &self.edges {
            let (f, g) = self.edge_faces(u, v);
            adj[f].push(g);
            adj[g].push(f);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        DualGraph { adj }
    }

    /// BFS distances from `source` in the graph.
    pub fn distances_from(&self, source: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.rotation[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|v| self.distances_from(v).into_iter().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Prior bounds `(ceil(3n/10), floor(n/2 - (d-2)/4))` on the saturation number.
    pub fn diameter_bounds(&self) -> (usize, usize) {
        diameter_bounds(self.n(), self.diameter())
    }

    pub fn canonical_code(&self) -> Vec<u8> {
        embedding::canonical_code(&self.rotation_lists())
    }

    pub fn is_three_connected(&self) -> bool {
        is_three_connected(&self.rotation_lists())
    }
}

/// `(ceil(3n/10), floor(n/2 - (d-2)/4))` for a fullerene on `n` vertices with diameter `d`.
pub fn diameter_bounds(n: usize, d: usize) -> (usize, usize) {
    let lower = (3 * n).div_ceil(10);
    // n/2 - (d-2)/4 = (2n - d + 2) / 4
    let upper = (2 * n + 2).saturating_sub(d) / 4;
    (lower, upper)
}

fn is_connected<R: AsRef<[Vertex]>>(rot: &[R], removed: &[Vertex]) -> bool {
    let n = rot.len();
    let Some(start) = (0..n).find(|v| !removed.contains(v)) else {
        return true;
    };
    let mut seen = vec![false; n];
    for &r in removed {
        seen[r] = true;
    }
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = removed.len() + 1;
    while let Some(v) = stack.pop() {
        for &w in rot[v].as_ref() {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

fn is_three_connected(rot: &[Vec<Vertex>]) -> bool {
    let n = rot.len();
    if n < 4 {
        return false;
    }
    (0..n).all(|a| (a + 1..n).all(|b| is_connected(rot, &[a, b])))
}

/// One node per face; two nodes adjacent when their faces share an edge.
#[derive(Debug, Clone)]
pub struct DualGraph {
    adj: Vec<Vec<FaceId>>,
}

impl DualGraph {
    pub fn num_nodes(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, f: FaceId) -> &[FaceId] {
        &self.adj[f]
    }

    pub fn degree(&self, f: FaceId) -> usize {
        self.adj[f].len()
    }

    pub fn distances_from(&self, f: FaceId) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[f] = 0;
        let mut queue = VecDeque::from([f]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, f1: FaceId, f2: FaceId) -> usize {
        self.distances_from(f1)[f2]
    }

    pub fn is_connected(&self) -> bool {
        self.adj.is_empty() || self.distances_from(0).iter().all(|&d| d != usize::MAX)
    }
}
