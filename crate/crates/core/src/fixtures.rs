//! Small named fullerenes built directly from polyhedral constructions.
//!
//! These do not go through the spiral generator, so tests can use them as
//! independent references.

use crate::embedding;
use crate::graph::FullereneGraph;

/// Icosahedron: apex 0, upper ring 1..=5, lower ring 6..=10, apex 11.
/// Rotations are counterclockwise seen from outside.
pub fn icosahedron_rotation() -> Vec<Vec<usize>> {
    let up = |k: usize| 1 + k % 5;
    let low = |k: usize| 6 + k % 5;
    let mut rot = vec![Vec::new(); 12];
    rot[0] = (0..5).map(up).collect();
    for k in 0..5 {
        rot[up(k)] = vec![0, up(k + 4), low(k + 4), low(k), up(k + 1)];
        rot[low(k)] = vec![up(k + 1), up(k), low(k + 4), 11, low(k + 1)];
    }
    rot[11] = (0..5).rev().map(low).collect();
    rot
}

/// Rotation system of the dual of a plane graph.
pub fn dual_rotation(rot: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let t = embedding::trace_faces(rot);
    t.faces
        .iter()
        .map(|f| {
            let k = f.len();
            (0..k)
                .map(|j| {
                    let (a, b) = (f[j], f[(j + 1) % k]);
                    let i = embedding::position(rot, b, a).unwrap();
                    t.dart_face[b][i]
                })
                .collect()
        })
        .collect()
}

/// Truncation: every vertex of degree `d` becomes a `d`-gon.
pub fn truncation_rotation(rot: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut offset = vec![0usize; rot.len() + 1];
    for v in 0..rot.len() {
        offset[v + 1] = offset[v] + rot[v].len();
    }
    let dart = |u: usize, i: usize| offset[u] + i % rot[u].len();
    let mut out = Vec::with_capacity(offset[rot.len()]);
    for u in 0..rot.len() {
        let d = rot[u].len();
        for i in 0..d {
            let v = rot[u][i];
            let j = embedding::position(rot, v, u).unwrap();
            out.push(vec![dart(u, i + 1), dart(v, j), dart(u, i + d - 1)]);
        }
    }
    out
}

fn build_either(rot: Vec<Vec<usize>>) -> FullereneGraph {
    match FullereneGraph::build_from_rotation(rot.clone()) {
        Ok(g) => g,
        Err(_) => {
            let mirrored = rot.into_iter().map(|r| r.into_iter().rev().collect()).collect();
            FullereneGraph::build_from_rotation(mirrored).expect("fixture construction")
        }
    }
}

/// The dodecahedron, the unique fullerene on 20 vertices.
pub fn dodecahedron() -> FullereneGraph {
    build_either(dual_rotation(&icosahedron_rotation()))
}

/// Buckminsterfullerene, the truncated icosahedron.
pub fn c60() -> FullereneGraph {
    build_either(truncation_rotation(&icosahedron_rotation()))
}
