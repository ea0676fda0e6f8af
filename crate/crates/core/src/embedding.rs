//! Rotation-system primitives shared by fullerenes, patches and caps.
//!
//! A rotation system lists, for every vertex, its neighbours in cyclic
//! (counterclockwise) order. Faces are traced by the rule "arrive at `v`
//! from `u`, leave towards the neighbour following `u` in the rotation of
//! `v`". The mirrored rotation system traces the same faces reversed.

/// Faces traced from a rotation system together with the face of every dart.
///
/// `dart_face[v][i]` is the face containing the dart `v -> rot[v][i]`.
#[derive(Debug, Clone)]
pub struct Tracing {
    pub faces: Vec<Vec<usize>>,
    pub dart_face: Vec<Vec<usize>>,
}

/// Position of `u` in the rotation of `v`.
#[inline]
pub fn position(rot: &[Vec<usize>], v: usize, u: usize) -> Option<usize> {
    rot[v].iter().position(|&w| w == u)
}

/// Traces every face; each dart lands in exactly one face.
///
/// The rotation system must be symmetric (`u` in `rot[v]` iff `v` in `rot[u]`).
pub fn trace_faces(rot: &[Vec<usize>]) -> Tracing {
    let mut dart_face: Vec<Vec<usize>> = rot.iter().map(|r| vec![usize::MAX; r.len()]).collect();
    let mut faces = Vec::new();
    for v0 in 0..rot.len() {
        for i0 in 0..rot[v0].len() {
            if dart_face[v0][i0] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut boundary = Vec::new();
            let (mut v, mut i) = (v0, i0);
            loop {
                dart_face[v][i] = id;
                boundary.push(v);
                let w = rot[v][i];
                let back = position(rot, w, v).expect("asymmetric rotation system");
                let j = (back + 1) % rot[w].len();
                v = w;
                i = j;
                if v == v0 && i == i0 {
                    break;
                }
            }
            faces.push(boundary);
        }
    }
    Tracing { faces, dart_face }
}

/// Builds a rotation system from oriented face boundaries.
///
/// Every face must be listed with the same orientation, so that each edge is
/// walked once in each direction. Returns `None` when the faces do not fit
/// together into a rotation system (an edge walked twice in one direction,
/// or the darts at a vertex not forming a single cycle).
pub fn rotation_from_faces(n: usize, faces: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    // succ[v]: pairs (a, b) meaning "arriving from a, leave towards b".
    let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for f in faces {
        let k = f.len();
        for j in 0..k {
            let a = f[(j + k - 1) % k];
            let v = f[j];
            let b = f[(j + 1) % k];
            if succ[v].iter().any(|&(x, _)| x == a) {
                return None;
            }
            succ[v].push((a, b));
        }
    }
    let mut rot = Vec::with_capacity(n);
    for (v, pairs) in succ.iter().enumerate() {
        if pairs.is_empty() {
            return None;
        }
        let mut order = vec![pairs[0].0];
        loop {
            let last = *order.last().unwrap();
            let next = pairs.iter().find(|&&(a, _)| a == last)?.1;
            if next == order[0] {
                break;
            }
            if order.len() > pairs.len() || next == v {
                return None;
            }
            order.push(next);
        }
        if order.len() != pairs.len() {
            return None;
        }
        rot.push(order);
    }
    Some(rot)
}

/// Canonical code of a connected plane graph given by its rotation system.
///
/// Two rotation systems get the same code iff they are isomorphic as embedded
/// graphs, where an isomorphism may also reverse the orientation.
pub fn canonical_code(rot: &[Vec<usize>]) -> Vec<u8> {
    let n = rot.len();
    let mut best: Vec<u32> = Vec::new();
    let mut scratch = CodeScratch::new(n);
    for v0 in 0..n {
        for j in 0..rot[v0].len() {
            for &mirror in &[false, true] {
                scratch.run(rot, v0, j, mirror, &mut best);
            }
        }
    }
    let mut out = Vec::with_capacity(4 + best.len() * 2);
    out.extend_from_slice(&(n as u32).to_be_bytes());
    for x in best {
        out.extend_from_slice(&(x as u16).to_be_bytes());
    }
    out
}

struct CodeScratch {
    number: Vec<u32>,
    reference: Vec<usize>,
    queue: Vec<usize>,
    code: Vec<u32>,
}

impl CodeScratch {
    fn new(n: usize) -> Self {
        CodeScratch {
            number: vec![0; n],
            reference: vec![0; n],
            queue: Vec::with_capacity(n),
            code: Vec::new(),
        }
    }

    /// BFS relabelling from the dart `v0 -> rot[v0][j]`; replaces `best` if smaller.
    fn run(&mut self, rot: &[Vec<usize>], v0: usize, j: usize, mirror: bool, best: &mut Vec<u32>) {
        self.number.iter_mut().for_each(|x| *x = 0);
        self.queue.clear();
        self.code.clear();
        let mut next_number = 1u32;
        self.number[v0] = next_number;
        next_number += 1;
        self.reference[v0] = j;
        self.queue.push(v0);
        // Equal to best so far; once smaller we stop comparing.
        let mut tied = !best.is_empty();
        let mut head = 0;
        while head < self.queue.len() {
            let v = self.queue[head];
            head += 1;
            let d = rot[v].len();
            let start = self.reference[v];
            for step in 0..d {
                let idx = if mirror { (start + d - step) % d } else { (start + step) % d };
                let w = rot[v][idx];
                if self.number[w] == 0 {
                    self.number[w] = next_number;
                    next_number += 1;
                    self.reference[w] = position(rot, w, v).unwrap();
                    self.queue.push(w);
                }
                let x = self.number[w];
                if tied {
                    let b = best[self.code.len()];
                    if x > b {
                        return;
                    }
                    if x < b {
                        tied = false;
                    }
                }
                self.code.push(x);
            }
            if tied {
                let b = best[self.code.len()];
                if b != 0 {
                    // 0 < b: smaller
                    tied = false;
                }
            }
            self.code.push(0);
        }
        if best.is_empty() || !tied {
            best.clear();
            best.extend_from_slice(&self.code);
        }
    }
}
