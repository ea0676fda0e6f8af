//! Nanotubes: the hexagonal tube lattice, caps, and their assembly.
//!
//! Hexagons of the plane are indexed by axial coordinates `(x, y)` with
//! `a1 = (1, 0)` and `a2 = (0, 1)`; the six neighbours of a hexagon in
//! counterclockwise order are `a1, a2, a2 - a1, -a1, -a2, a1 - a2`. A
//! vertex of the honeycomb is the triangle of hexagons meeting there:
//! `U(x, y) = {(x,y), (x+1,y), (x,y+1)}` and
//! `D(x, y) = {(x+1,y), (x,y+1), (x+1,y+1)}`.
//!
//! The `(p1, p2)` tube identifies hexagons differing by `C = p1 a1 + p2 a2`.
//! Ring `r` consists of the hexagons `h_i + r t` with `t = a2 - a1` and
//! `h_0 .. h_{p1+p2-1}` the characterizing ring: `p1` steps of `a1`
//! followed by `p2` steps of `a2`.
//!
//! A cap replaces everything below ring 1. It is stored in primal form:
//! face cycles over cap-local vertex ids, with every boundary vertex pinned
//! to the lattice vertex it occupies on the lower rim of ring 1. The far end
//! of a tube receives a cap turned by a half-turn about a lattice point,
//! which maps ring 0 onto ring `K + 1`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding;
use crate::graph::{FaceId, FullereneGraph, Vertex};

/// Neighbour directions of a hexagon, counterclockwise.
pub const DIRS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TubeError {
    #[error("wrap vector ({p1},{p2}) must satisfy p1 >= p2 >= 0 and p1 > 0")]
    BadWrap { p1: i64, p2: i64 },
    #[error("({p1},{p2}) tube is too narrow: a hexagon meets itself or a neighbour twice")]
    TooNarrow { p1: i64, p2: i64 },
    #[error("ring word must use a1 exactly p1 times and a2 exactly p2 times")]
    BadWord,
    #[error("incompatible cap: {0}")]
    IncompatibleCap(String),
    #[error("invalid cap: {0}")]
    InvalidCap(String),
    #[error("cap file line {line}: {msg}")]
    CapFormat { line: usize, msg: String },
    #[error("boundary has {l} vertices of degree 3 and {r} of degree 2")]
    UnbalancedBoundary { l: usize, r: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVertex {
    pub up: bool,
    pub x: i64,
    pub y: i64,
}

impl LatticeVertex {
    fn at(up: bool, (x, y): (i64, i64)) -> Self {
        LatticeVertex { up, x, y }
    }
}

/// The `(p1, p2)` tube lattice.
#[derive(Debug, Clone)]
pub struct TubeFrame {
    pub p1: i64,
    pub p2: i64,
    word: Vec<u8>,
    h: Vec<(i64, i64)>,
}

impl TubeFrame {
    /// Frame with the staircase ring word `1^p1 2^p2`.
    pub fn new(p1: i64, p2: i64) -> Result<Self, TubeError> {
        if !(p1 >= p2 && p2 >= 0 && p1 > 0) {
            return Err(TubeError::BadWrap { p1, p2 });
        }
        Self::with_word(p1, p2, &staircase(p1, p2))
    }

    /// Frame whose characterizing ring takes the steps of `word`
    /// (`1` for `a1`, `2` for `a2`).
    pub fn with_word(p1: i64, p2: i64, word: &[u8]) -> Result<Self, TubeError> {
        if !(p1 >= p2 && p2 >= 0 && p1 > 0) {
            return Err(TubeError::BadWrap { p1, p2 });
        }
        let ones = word.iter().filter(|&&c| c == 1).count() as i64;
        let twos = word.iter().filter(|&&c| c == 2).count() as i64;
        if ones != p1 || twos != p2 || ones + twos != word.len() as i64 {
            return Err(TubeError::BadWord);
        }
        let mut h = Vec::with_capacity(word.len());
        let (mut x, mut y) = (0, 0);
        for &c in word {
            h.push((x, y));
            if c == 1 {
                x += 1;
            } else {
                y += 1;
            }
        }
        let frame = TubeFrame { p1, p2, word: word.to_vec(), h };
        let f = frame.hex(1, 0);
        let mut around: Vec<(i64, i64)> = (0..6).map(|d| frame.neighbour(f, d)).collect();
        around.push(f);
        let verts = frame.hex_vertices(f);
        let distinct_faces = around.iter().collect::<BTreeSet<_>>().len() == 7;
        let distinct_verts = verts.iter().collect::<BTreeSet<_>>().len() == 6;
        if !distinct_faces || !distinct_verts {
            return Err(TubeError::TooNarrow { p1, p2 });
        }
        Ok(frame)
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    /// Hexagons per ring.
    pub fn m(&self) -> usize {
        self.h.len()
    }

    /// `(ring, position)` of a hexagon.
    pub fn ring_pos(&self, (x, y): (i64, i64)) -> (i64, usize) {
        let m = self.m() as i64;
        let s = x + y;
        let i = s.rem_euclid(m);
        let c = (s - i) / m;
        let (_, hy) = self.h[i as usize];
        (y - hy - c * self.p2, i as usize)
    }

    /// Canonical coordinates of the hexagon at `(ring, position)`.
    pub fn hex(&self, ring: i64, pos: usize) -> (i64, i64) {
        let (hx, hy) = self.h[pos];
        (hx - ring, hy + ring)
    }

    pub fn canon_hex(&self, f: (i64, i64)) -> (i64, i64) {
        let (r, i) = self.ring_pos(f);
        self.hex(r, i)
    }

    pub fn canon_vertex(&self, v: LatticeVertex) -> LatticeVertex {
        LatticeVertex::at(v.up, self.canon_hex((v.x, v.y)))
    }

    pub fn neighbour(&self, (x, y): (i64, i64), dir: usize) -> (i64, i64) {
        let (dx, dy) = DIRS[dir];
        self.canon_hex((x + dx, y + dy))
    }

    /// Vertices of a hexagon; slot `j` lies between directions `j` and `j + 1`.
    pub fn hex_vertices(&self, (x, y): (i64, i64)) -> [LatticeVertex; 6] {
        [
            LatticeVertex::at(true, (x, y)),
            LatticeVertex::at(false, (x - 1, y)),
            LatticeVertex::at(true, (x - 1, y)),
            LatticeVertex::at(false, (x - 1, y - 1)),
            LatticeVertex::at(true, (x, y - 1)),
            LatticeVertex::at(false, (x, y - 1)),
        ]
        .map(|v| self.canon_vertex(v))
    }

    /// Half-turn `f -> w - f` on hexagons.
    pub fn reflect_hex(&self, w: (i64, i64), (x, y): (i64, i64)) -> (i64, i64) {
        self.canon_hex((w.0 - x, w.1 - y))
    }

    /// The same half-turn on vertices; it swaps the two vertex types.
    pub fn reflect_vertex(&self, w: (i64, i64), v: LatticeVertex) -> LatticeVertex {
        self.canon_vertex(LatticeVertex::at(!v.up, (w.0 - v.x - 1, w.1 - v.y - 1)))
    }

    /// Vertices shared by ring 0 and ring 1, in the order of ring 1.
    pub fn lower_rim(&self) -> BTreeSet<LatticeVertex> {
        let below: BTreeSet<LatticeVertex> = (0..self.m()).flat_map(|i| self.hex_vertices(self.hex(0, i))).collect();
        (0..self.m())
            .flat_map(|i| self.hex_vertices(self.hex(1, i)))
            .filter(|v| below.contains(v))
            .collect()
    }

    /// Centre of a half-turn taking ring 1 onto ring `k`, if the ring word
    /// allows one.
    pub fn flip_centre(&self, k: i64) -> Option<(i64, i64)> {
        let h0 = self.hex(1, 0);
        let ring1: Vec<(i64, i64)> = (0..self.m()).map(|i| self.hex(1, i)).collect();
        (0..self.m())
            .map(|j| {
                let g = self.hex(k, j);
                (g.0 + h0.0, g.1 + h0.1)
            })
            .find(|&w| ring1.iter().all(|&f| self.ring_pos(self.reflect_hex(w, f)).0 == k))
    }

    /// Translation by `r t`: ring `i` goes to ring `i + r`.
    pub fn shift_vertex(&self, v: LatticeVertex, r: i64) -> LatticeVertex {
        self.canon_vertex(LatticeVertex::at(v.up, (v.x - r, v.y + r)))
    }
}

/// The ring word `1^p1 2^p2`.
pub fn staircase(p1: i64, p2: i64) -> Vec<u8> {
    let mut w = vec![1u8; p1.max(0) as usize];
    w.extend(std::iter::repeat_n(2u8, p2.max(0) as usize));
    w
}

fn word_text(w: &[u8]) -> String {
    w.iter().map(|c| char::from(b'0' + c)).collect()
}

/// Turn-walk displacement of a boundary, reduced to `p1 >= p2 >= 0`.
///
/// `degrees[i]` is the number of patch edges at the `i`-th boundary vertex
/// (2 or 3), in walking order. The walk turns one way at degree 2 and the
/// other way at degree 3, and sums unit steps as `A + B w` with `w` the
/// sixth root of unity.
pub fn wrap_vector(degrees: &[u8]) -> Result<(i64, i64), TubeError> {
    let l = degrees.iter().filter(|&&d| d == 3).count();
    let r = degrees.len() - l;
    if l != r {
        return Err(TubeError::UnbalancedBoundary { l, r });
    }
    // w^k = UNIT[k].0 + UNIT[k].1 * w
    const UNIT: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
    let (mut a, mut b) = (0i64, 0i64);
    let mut heading = 0usize;
    for &d in degrees {
        a += UNIT[heading].0;
        b += UNIT[heading].1;
        heading = if d == 2 { (heading + 1) % 6 } else { (heading + 5) % 6 };
    }
    // a1 = 1 + w, a2 = 2w - 1 up to a common rotation of the edge frame.
    let p2 = (b - a) / 3;
    let p1 = a + p2;
    let mut v = (p1, p2);
    let mut best = None;
    for _ in 0..6 {
        for c in [v, (v.1, v.0)] {
            if c.0 >= c.1 && c.1 >= 0 {
                best = Some(best.map_or(c, |b: (i64, i64)| b.max(c)));
            }
        }
        v = (-v.1, v.0 + v.1);
    }
    Ok(best.unwrap_or((0, 0)))
}

/// A patch with six pentagons closing one end of a tube.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cap {
    pub p1: i64,
    pub p2: i64,
    /// Ring word of the frame the attachments refer to.
    pub word: Vec<u8>,
    /// Face cycles over cap-local vertices, oriented like the lattice hexagons.
    pub faces: Vec<Vec<usize>>,
    /// Lattice position of each boundary vertex, `None` for interior ones.
    pub attach: Vec<Option<LatticeVertex>>,
    /// Boundary cycle in walking order.
    pub boundary: Vec<usize>,
    /// `L` for a boundary vertex of degree 3 in the cap, `R` for degree 2.
    pub boundary_code: String,
}

impl Cap {
    pub fn new(
        p1: i64,
        p2: i64,
        word: Vec<u8>,
        faces: Vec<Vec<usize>>,
        attach: BTreeMap<usize, LatticeVertex>,
    ) -> Result<Self, TubeError> {
        let bad = |m: String| Err(TubeError::InvalidCap(m));
        let n = faces.iter().flatten().max().map_or(0, |&v| v + 1);
        if faces.iter().any(|f| f.len() != 5 && f.len() != 6) {
            return bad("face sizes must be 5 or 6".into());
        }
        let pent = faces.iter().filter(|f| f.len() == 5).count();
        if pent != 6 {
            return bad(format!("{pent} pentagons, expected 6"));
        }
        let mut dart_count: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nbrs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for f in &faces {
            for j in 0..f.len() {
                let (a, b) = (f[j], f[(j + 1) % f.len()]);
                *dart_count.entry((a, b)).or_default() += 1;
                nbrs[a].insert(b);
                nbrs[b].insert(a);
            }
        }
        if dart_count.values().any(|&c| c > 1) {
            return bad("faces are not consistently oriented".into());
        }
        // Boundary darts are those whose reverse is not walked.
        let mut next: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in dart_count.keys() {
            if !dart_count.contains_key(&(b, a)) && next.insert(a, b).is_some() {
                return bad(format!("boundary touches vertex {a} twice"));
            }
        }
        let Some(&start) = next.keys().min() else {
            return bad("cap has no boundary".into());
        };
        let mut boundary = vec![start];
        let mut cur = next[&start];
        while cur != start {
            boundary.push(cur);
            cur = *next.get(&cur).ok_or_else(|| TubeError::InvalidCap("boundary is not closed".into()))?;
            if boundary.len() > next.len() {
                return bad("boundary is not a simple cycle".into());
            }
        }
        if boundary.len() != next.len() {
            return bad("boundary is not a single cycle".into());
        }
        let on_boundary: BTreeSet<usize> = boundary.iter().copied().collect();
        for (v, nb) in nbrs.iter().enumerate() {
            if !on_boundary.contains(&v) && nb.len() != 3 {
                return bad(format!("interior vertex {v} has degree {}", nb.len()));
            }
        }
        let mut att = vec![None; n];
        for (&v, &lv) in &attach {
            if !on_boundary.contains(&v) {
                return bad(format!("vertex {v} is attached but not on the boundary"));
            }
            att[v] = Some(lv);
        }
        if let Some(v) = boundary.iter().find(|&&v| att[v].is_none()) {
            return bad(format!("boundary vertex {v} has no lattice position"));
        }
        let boundary_code: String = boundary.iter().map(|&v| if nbrs[v].len() == 3 { 'L' } else { 'R' }).collect();
        Ok(Cap { p1, p2, word, faces, attach: att, boundary, boundary_code })
    }

    pub fn num_vertices(&self) -> usize {
        self.attach.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn boundary_degrees(&self) -> Vec<u8> {
        self.boundary_code.bytes().map(|c| if c == b'L' { 3 } else { 2 }).collect()
    }

    pub fn frame(&self) -> Result<TubeFrame, TubeError> {
        TubeFrame::with_word(self.p1, self.p2, &self.word)
    }

    /// Text form: `T p1 p2 word`, one `P size v...` line per face, `B word`, and
    /// one `A v U|D x y` line per boundary vertex. `#` starts a comment.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "T {} {} {}", self.p1, self.p2, word_text(&self.word)).unwrap();
        for f in &self.faces {
            let vs: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            writeln!(s, "P {} {}", f.len(), vs.join(" ")).unwrap();
        }
        writeln!(s, "B {}", self.boundary_code).unwrap();
        for &v in &self.boundary {
            let a = self.attach[v].unwrap();
            writeln!(s, "A {} {} {} {}", v, if a.up { 'U' } else { 'D' }, a.x, a.y).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, TubeError> {
        let mut wrap = None;
        let mut faces = Vec::new();
        let mut code = None;
        let mut attach = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: &str| TubeError::CapFormat { line: line_no, msg: msg.to_string() };
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let mut tok = line.split_whitespace();
            let tag = tok.next().unwrap();
            let rest: Vec<&str> = tok.collect();
            let nums = |xs: &[&str]| -> Result<Vec<i64>, TubeError> {
                xs.iter().map(|t| t.parse::<i64>().map_err(|_| err("expected an integer"))).collect()
            };
            match tag {
                "T" => {
                    if rest.len() != 3 || !rest[2].chars().all(|c| c == '1' || c == '2') {
                        return Err(err("expected `T p1 p2 word`"));
                    }
                    let v = nums(&rest[..2])?;
                    let word: Vec<u8> = rest[2].bytes().map(|c| c - b'0').collect();
                    wrap = Some((v[0], v[1], word));
                }
                "P" => {
                    let v = nums(&rest)?;
                    if v.is_empty() || v[0] as usize != v.len() - 1 || v.iter().any(|&x| x < 0) {
                        return Err(err("expected `P size v1 .. vsize`"));
                    }
                    faces.push(v[1..].iter().map(|&x| x as usize).collect());
                }
                "B" => {
                    let w = rest.first().copied().unwrap_or("");
                    if w.is_empty() || !w.chars().all(|c| c == 'L' || c == 'R') {
                        return Err(err("expected `B` followed by a word over L and R"));
                    }
                    code = Some(w.to_string());
                }
                "A" => {
                    if rest.len() != 4 || (rest[1] != "U" && rest[1] != "D") {
                        return Err(err("expected `A v U|D x y`"));
                    }
                    let v = nums(&[rest[0], rest[2], rest[3]])?;
                    if v[0] < 0 {
                        return Err(err("negative vertex"));
                    }
                    attach.insert(v[0] as usize, LatticeVertex { up: rest[1] == "U", x: v[1], y: v[2] });
                }
                _ => return Err(err("unknown record")),
            }
        }
        let (p1, p2, word) = wrap.ok_or(TubeError::CapFormat { line: 0, msg: "missing `T` record".into() })?;
        TubeFrame::with_word(p1, p2, &word)?;
        let cap = Cap::new(p1, p2, word, faces, attach)?;
        if let Some(w) = code {
            if w != cap.boundary_code {
                return Err(TubeError::CapFormat {
                    line: 0,
                    msg: format!("boundary word {w} does not match faces ({})", cap.boundary_code),
                });
            }
        }
        Ok(cap)
    }

    /// Key identifying the cap up to relabelling, rotation and reflection:
    /// the canonical code of the cap with one extra vertex joined to every
    /// boundary vertex of degree 2.
    pub fn shape_code(&self) -> Vec<u8> {
        let n = self.num_vertices();
        let mut faces = self.faces.clone();
        let hub = n;
        let b = &self.boundary;
        let deg2: Vec<usize> = (0..b.len()).filter(|&i| self.boundary_code.as_bytes()[i] == b'R').collect();
        // Outer faces: hub, boundary run from one degree-2 vertex to the next.
        for w in 0..deg2.len() {
            let (i, j) = (deg2[w], deg2[(w + 1) % deg2.len()]);
            let mut f = vec![hub];
            let mut k = j;
            loop {
                f.push(b[k]);
                if k == i {
                    break;
                }
                k = (k + b.len() - 1) % b.len();
            }
            faces.push(f);
        }
        match embedding::rotation_from_faces(n + 1, &faces) {
            Some(rot) => embedding::canonical_code(&rot),
            None => self.to_text().into_bytes(),
        }
    }
}

/// Built-in cap for the `(5, 5)` tube: half of the icosahedral C60.
pub fn cap_5_5() -> Cap {
    Cap::parse(include_str!("../data/cap_5_5.txt")).expect("built-in cap")
}

/// Built-in cap for the `(8, 0)` tube with 12 faces.
pub fn cap_8_0() -> Cap {
    Cap::parse(include_str!("../data/cap_8_0.txt")).expect("built-in cap")
}

#[derive(Debug, Clone)]
pub struct TubeSpec {
    pub p1: i64,
    pub p2: i64,
    /// Number of hexagon rings between the caps; 0 glues the caps directly.
    pub rings: usize,
    pub cap_start: Cap,
    pub cap_end: Cap,
}

/// A hexagon of the cylindrical part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeHex {
    pub face: FaceId,
    /// 1-based ring number.
    pub ring: usize,
    pub pos: usize,
    pub lattice: (i64, i64),
    /// Vertices by slot; slot `j` lies between directions `j` and `j + 1`.
    pub vertices: [Vertex; 6],
}

impl TubeHex {
    pub fn a1_edge(&self) -> (Vertex, Vertex) {
        (self.vertices[5], self.vertices[0])
    }
    pub fn a2_edge(&self) -> (Vertex, Vertex) {
        (self.vertices[0], self.vertices[1])
    }
    pub fn neg_a1_edge(&self) -> (Vertex, Vertex) {
        (self.vertices[2], self.vertices[3])
    }
    pub fn neg_a2_edge(&self) -> (Vertex, Vertex) {
        (self.vertices[3], self.vertices[4])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingStructure {
    pub p1: i64,
    pub p2: i64,
    /// Vertex count of the host graph.
    pub n: usize,
    /// `rings[r - 1]` lists the faces of ring `r` by position.
    pub rings: Vec<Vec<FaceId>>,
    pub hexagons: Vec<TubeHex>,
    /// Number of faces in the start and end caps.
    pub cap_faces: (usize, usize),
}

impl RingStructure {
    pub fn num_rings(&self) -> usize {
        self.rings.len()
    }
}

struct Assembly {
    ids: HashMap<LatticeVertex, usize>,
    n: usize,
    faces: Vec<Vec<usize>>,
}

impl Assembly {
    fn lattice(&mut self, v: LatticeVertex) -> usize {
        *self.ids.entry(v).or_insert_with(|| {
            self.n += 1;
            self.n - 1
        })
    }

    fn add_cap(&mut self, cap: &Cap, place: impl Fn(LatticeVertex) -> LatticeVertex) {
        let local: Vec<usize> = (0..cap.num_vertices())
            .map(|v| match cap.attach[v] {
                Some(lv) => self.lattice(place(lv)),
                None => {
                    self.n += 1;
                    self.n - 1
                }
            })
            .collect();
        for f in &cap.faces {
            self.faces.push(f.iter().map(|&v| local[v]).collect());
        }
    }
}

fn check_cap(frame: &TubeFrame, cap: &Cap, rim: &BTreeSet<LatticeVertex>) -> Result<(), TubeError> {
    if (cap.p1, cap.p2) != (frame.p1, frame.p2) {
        return Err(TubeError::IncompatibleCap(format!(
            "cap is for ({},{}), tube is ({},{})",
            cap.p1, cap.p2, frame.p1, frame.p2
        )));
    }
    if cap.word != frame.word {
        return Err(TubeError::IncompatibleCap(format!(
            "cap ring word {} differs from {}",
            word_text(&cap.word),
            word_text(&frame.word)
        )));
    }
    let wrap = wrap_vector(&cap.boundary_degrees()).map_err(|e| TubeError::IncompatibleCap(e.to_string()))?;
    if wrap != (frame.p1, frame.p2) {
        return Err(TubeError::IncompatibleCap(format!("boundary word wraps as {wrap:?}")));
    }
    let placed: BTreeSet<LatticeVertex> = cap.attach.iter().flatten().map(|&v| frame.canon_vertex(v)).collect();
    if placed != *rim {
        return Err(TubeError::IncompatibleCap("boundary does not cover the rim of ring 1".into()));
    }
    Ok(())
}

/// Builds the nanotube and labels its cylindrical part.
pub fn build_nanotube(spec: &TubeSpec) -> Result<(FullereneGraph, RingStructure), TubeError> {
    build_nanotube_shifted(spec, 0)
}

/// As [`build_nanotube`], with the whole construction translated so the
/// first tube ring is lattice ring `1 + shift`. The result is isomorphic
/// for every shift.
pub fn build_nanotube_shifted(spec: &TubeSpec, shift: i64) -> Result<(FullereneGraph, RingStructure), TubeError> {
    if (spec.cap_start.p1, spec.cap_start.p2) != (spec.p1, spec.p2) {
        return Err(TubeError::IncompatibleCap(format!(
            "cap is for ({},{}), tube is ({},{})",
            spec.cap_start.p1, spec.cap_start.p2, spec.p1, spec.p2
        )));
    }
    let frame = spec.cap_start.frame()?;
    let rim = frame.lower_rim();
    check_cap(&frame, &spec.cap_start, &rim)?;
    check_cap(&frame, &spec.cap_end, &rim)?;
    let k = spec.rings as i64;
    let m = frame.m();
    let w = frame
        .flip_centre(k)
        .ok_or_else(|| TubeError::IncompatibleCap("no half-turn maps the ring word onto itself".into()))?;
    let mut asm = Assembly { ids: HashMap::new(), n: 0, faces: Vec::new() };
    asm.add_cap(&spec.cap_start, |v| frame.shift_vertex(v, shift));
    let mut tube = Vec::new();
    for r in 1..=k {
        for i in 0..m {
            let f = frame.hex(r, i);
            let verts = frame.hex_vertices(frame.canon_hex((f.0 - shift, f.1 + shift)));
            let ids = verts.map(|v| asm.lattice(v));
            tube.push((r as usize, i, f, ids));
            asm.faces.push(ids.to_vec());
        }
    }
    asm.add_cap(&spec.cap_end, |v| frame.shift_vertex(frame.reflect_vertex(w, v), shift));
    let rot = embedding::rotation_from_faces(asm.n, &asm.faces)
        .ok_or_else(|| TubeError::IncompatibleCap("faces do not glue into a closed surface".into()))?;
    let g = FullereneGraph::build_from_rotation(rot).map_err(|e| TubeError::IncompatibleCap(e.to_string()))?;
    let face_of = |cycle: &[usize]| -> FaceId {
        let f = g.dart_face(cycle[0], cycle[1]);
        if g.face(f).size() == cycle.len() && cycle.iter().all(|&v| g.face(f).contains(v)) {
            f
        } else {
            g.dart_face(cycle[1], cycle[0])
        }
    };
    let mut rings = vec![Vec::with_capacity(m); k as usize];
    let mut hexagons = Vec::with_capacity(tube.len());
    for (ring, pos, lattice, vertices) in tube {
        let face = face_of(&vertices);
        rings[ring - 1].push(face);
        hexagons.push(TubeHex { face, ring, pos, lattice, vertices });
    }
    let rs = RingStructure {
        p1: spec.p1,
        p2: spec.p2,
        n: g.n(),
        rings,
        hexagons,
        cap_faces: (spec.cap_start.num_faces(), spec.cap_end.num_faces()),
    };
    Ok((g, rs))
}

/// A bare tube section of `rings` rings, as an edge list with its labels.
pub fn tube_section(p1: i64, p2: i64, rings: usize) -> Result<(crate::matching::SimpleGraph, RingStructure), TubeError> {
    let frame = TubeFrame::new(p1, p2)?;
    let mut asm = Assembly { ids: HashMap::new(), n: 0, faces: Vec::new() };
    let mut hexagons = Vec::new();
    let mut ring_faces = vec![Vec::new(); rings];
    for r in 1..=rings {
        for i in 0..frame.m() {
            let f = frame.hex(r as i64, i);
            let vertices = frame.hex_vertices(f).map(|v| asm.lattice(v));
            let face = hexagons.len();
            ring_faces[r - 1].push(face);
            hexagons.push(TubeHex { face, ring: r, pos: i, lattice: f, vertices });
        }
    }
    let mut edges = Vec::new();
    for h in &hexagons {
        for j in 0..6 {
            edges.push((h.vertices[j], h.vertices[(j + 1) % 6]));
        }
    }
    let g = crate::matching::SimpleGraph::new(asm.n, edges);
    Ok((g, RingStructure { p1, p2, n: asm.n, rings: ring_faces, hexagons, cap_faces: (0, 0) }))
}

/// Wind-up state for caps growing from the rim of ring 1.
#[derive(Clone)]
struct CapWindup {
    rem: Vec<i32>,
    adj: Vec<Vec<usize>>,
    open: VecDeque<usize>,
    pentagons: usize,
}

impl CapWindup {
    fn connect(&mut self, a: usize, b: usize) -> bool {
        if self.adj[a].contains(&b) {
            return false;
        }
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.rem[a] -= 1;
        self.rem[b] -= 1;
        self.rem[a] >= 0 && self.rem[b] >= 0
    }

    fn push(&mut self, s: usize) -> bool {
        let k = self.rem.len();
        self.rem.push(s as i32);
        self.adj.push(Vec::new());
        if s == 5 {
            self.pentagons += 1;
        }
        let (back, front) = (*self.open.back().unwrap(), *self.open.front().unwrap());
        if !self.connect(k, back) || !self.connect(k, front) {
            return false;
        }
        loop {
            if self.rem[*self.open.front().unwrap()] == 0 {
                self.open.pop_front();
                if self.open.len() < 2 || !self.connect(k, *self.open.front().unwrap()) {
                    return false;
                }
            } else if self.rem[*self.open.back().unwrap()] == 0 {
                self.open.pop_back();
                if self.open.len() < 2 || !self.connect(k, *self.open.back().unwrap()) {
                    return false;
                }
            } else {
                break;
            }
        }
        if self.rem[k] <= 0 {
            return false;
        }
        self.open.push_back(k);
        true
    }

    fn close(&mut self, s: usize) -> bool {
        if self.open.len() != s || self.open.iter().any(|&f| self.rem[f] != 1) {
            return false;
        }
        let k = self.rem.len();
        self.rem.push(s as i32);
        self.adj.push(Vec::new());
        if s == 5 {
            self.pentagons += 1;
        }
        let open: Vec<usize> = self.open.drain(..).collect();
        open.into_iter().all(|f| self.connect(k, f))
    }
}

/// Caps for the `(p1, p2)` tube with at most `max_faces` faces, grown as
/// face spirals from the rim of ring 1. Sorted by face count, one per
/// shape. Narrow tubes have none.
pub fn find_cap(p1: i64, p2: i64, max_faces: usize) -> Vec<Cap> {
    find_cap_with_word(p1, p2, &staircase(p1, p2), max_faces)
}

/// As [`find_cap`] for an explicit ring word.
pub fn find_cap_with_word(p1: i64, p2: i64, word: &[u8], max_faces: usize) -> Vec<Cap> {
    let Ok(frame) = TubeFrame::with_word(p1, p2, word) else {
        return Vec::new();
    };
    let m = frame.m();
    let ring1: Vec<(i64, i64)> = (0..m).map(|i| frame.hex(1, i)).collect();
    let lower: Vec<i32> = ring1
        .iter()
        .map(|&f| (0..6).filter(|&d| frame.ring_pos(frame.neighbour(f, d)).0 == 0).count() as i32)
        .collect();
    let mut base = CapWindup { rem: lower.clone(), adj: vec![Vec::new(); m], open: VecDeque::new(), pentagons: 0 };
    for i in 0..m {
        for d in 0..6 {
            let g = frame.neighbour(ring1[i], d);
            if let Some(j) = ring1.iter().position(|&h| h == g) {
                if !base.adj[i].contains(&j) {
                    base.adj[i].push(j);
                }
            }
        }
    }
    let mut found: BTreeMap<(usize, Vec<u8>), Cap> = BTreeMap::new();
    for start in 0..m {
        for rev in [false, true] {
            let mut w = base.clone();
            w.open = (0..m).map(|j| if rev { (start + m - j) % m } else { (start + j) % m }).collect();
            grow(&frame, &w, m, max_faces, &mut found);
        }
    }
    found.into_values().collect()
}

fn grow(frame: &TubeFrame, w: &CapWindup, m: usize, max_faces: usize, found: &mut BTreeMap<(usize, Vec<u8>), Cap>) {
    let placed = w.rem.len() - m;
    if placed + 1 > max_faces {
        return;
    }
    for s in [5usize, 6] {
        if w.pentagons + (s == 5) as usize == 6 {
            let mut c = w.clone();
            if c.close(s) {
                if let Some(cap) = cap_from_windup(frame, &c, m) {
                    found.entry((cap.num_faces(), cap.shape_code())).or_insert(cap);
                }
            }
        }
        if w.pentagons + (s == 5) as usize <= 6 {
            let mut c = w.clone();
            if c.push(s) {
                grow(frame, &c, m, max_faces, found);
            }
        }
    }
}

/// The neighbours of `v` in cyclic order, if they induce a single cycle.
fn link(adj: &[Vec<usize>], v: usize) -> Option<Vec<usize>> {
    let nb = &adj[v];
    let inner = |g: usize| -> Vec<usize> { adj[g].iter().copied().filter(|x| nb.contains(x)).collect() };
    if nb.len() < 3 || nb.iter().any(|&g| inner(g).len() != 2) {
        return None;
    }
    let mut cyc = vec![nb[0]];
    let mut prev = nb[0];
    let mut cur = inner(nb[0])[0];
    while cur != nb[0] {
        cyc.push(cur);
        let i = inner(cur);
        let next = if i[0] == prev { i[1] } else { i[0] };
        prev = cur;
        cur = next;
        if cyc.len() > nb.len() {
            return None;
        }
    }
    (cyc.len() == nb.len()).then_some(cyc)
}

/// Converts a closed cap wind-up (dual form) into a primal [`Cap`].
fn cap_from_windup(frame: &TubeFrame, w: &CapWindup, m: usize) -> Option<Cap> {
    // Dual nodes: ring 1 (0..m), ring 2 (m..2m), cap faces (2m..).
    let total = w.rem.len() + m;
    let node = |i: usize| if i < m { i } else { i + m };
    let ring12: Vec<(i64, i64)> = (0..2 * m).map(|i| frame.hex(1 + (i / m) as i64, i % m)).collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
    for (a, nb) in w.adj.iter().enumerate() {
        for &b in nb {
            adj[node(a)].push(node(b));
        }
    }
    for i in 0..2 * m {
        for d in 0..6 {
            let g = frame.neighbour(ring12[i], d);
            if let Some(j) = ring12.iter().position(|&h| h == g) {
                if (i >= m || j >= m) && !adj[i].contains(&j) {
                    adj[i].push(j);
                }
            }
        }
    }
    let mut order: Vec<Option<Vec<usize>>> = vec![None; total];
    // Ring 1: lattice order, with cap faces filling the ring-0 directions.
    for i in 0..m {
        let cyc = link(&adj, i)?;
        if cyc.len() != 6 {
            return None;
        }
        let lattice: Vec<Option<usize>> = (0..6)
            .map(|d| {
                let g = frame.neighbour(ring12[i], d);
                ring12.iter().position(|&h| h == g)
            })
            .collect();
        let d1 = (0..6).find(|&d| lattice[d].is_some() && lattice[(d + 1) % 6].is_some())?;
        let (a, b) = (lattice[d1].unwrap(), lattice[(d1 + 1) % 6].unwrap());
        let p = cyc.iter().position(|&x| x == a)?;
        let oriented: Vec<usize> = if cyc[(p + 1) % 6] == b { cyc } else { cyc.into_iter().rev().collect() };
        let p = oriented.iter().position(|&x| x == a)?;
        let aligned: Vec<usize> = (0..6).map(|d| oriented[(p + 6 + d - d1) % 6]).collect();
        for d in 0..6 {
            if let Some(l) = lattice[d] {
                if aligned[d] != l {
                    return None;
                }
            }
        }
        order[i] = Some(aligned);
    }
    let caps: Vec<usize> = (2 * m..total).collect();
    let links: HashMap<usize, Vec<usize>> = caps.iter().map(|&c| link(&adj, c).map(|l| (c, l))).collect::<Option<_>>()?;
    let mut stack: Vec<usize> = (0..m).collect();
    while let Some(v) = stack.pop() {
        let ord = order[v].clone().unwrap();
        let d = ord.len();
        for i in 0..d {
            let g = ord[i];
            if g < 2 * m {
                continue;
            }
            // Around g, v is followed by the other common neighbour.
            let b = ord[(i + d - 1) % d];
            let cyc = &links[&g];
            let k = cyc.len();
            let p = cyc.iter().position(|&x| x == v)?;
            let want: Vec<usize> = if cyc[(p + 1) % k] == b { cyc.clone() } else { cyc.iter().rev().copied().collect() };
            match &order[g] {
                Some(have) => {
                    let q = have.iter().position(|&x| x == v)?;
                    if have[(q + 1) % k] != b {
                        return None;
                    }
                }
                None => {
                    order[g] = Some(want);
                    stack.push(g);
                }
            }
        }
    }
    // Primal vertices are the triangles around cap faces.
    let mut tri_id: BTreeMap<[usize; 3], usize> = BTreeMap::new();
    let mut faces = Vec::new();
    for &c in &caps {
        let ord = order[c].as_ref()?;
        let k = ord.len();
        let mut f = Vec::with_capacity(k);
        for j in 0..k {
            let mut t = [c, ord[j], ord[(j + 1) % k]];
            t.sort_unstable();
            let next = tri_id.len();
            f.push(*tri_id.entry(t).or_insert(next));
        }
        faces.push(f);
    }
    let mut attach = BTreeMap::new();
    for (t, &id) in &tri_id {
        let Some(&h) = t.iter().find(|&&x| x < m) else {
            continue;
        };
        let ord = order[h].as_ref().unwrap();
        let others: Vec<usize> = t.iter().copied().filter(|&x| x != h).collect();
        let slot = (0..6).find(|&j| {
            let pair = [ord[j], ord[(j + 1) % 6]];
            pair.contains(&others[0]) && pair.contains(&others[1])
        })?;
        attach.insert(id, frame.hex_vertices(ring12[h])[slot]);
    }
    Cap::new(frame.p1, frame.p2, frame.word.clone(), faces, attach).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn narrow_tubes_are_rejected() {
        assert!(matches!(TubeFrame::new(1, 0), Err(TubeError::TooNarrow { .. })));
        assert!(matches!(TubeFrame::new(1, 1), Err(TubeError::TooNarrow { .. })));
        assert!(matches!(TubeFrame::new(2, 3), Err(TubeError::BadWrap { .. })));
        assert!(TubeFrame::new(4, 3).is_ok());
        assert!(find_cap(1, 0, 12).is_empty());
    }

    #[test]
    fn ring_coordinates_round_trip() {
        let f = TubeFrame::new(9, 2).unwrap();
        for r in -3..5 {
            for i in 0..f.m() {
                assert_eq!(f.ring_pos(f.hex(r, i)), (r, i));
                let (x, y) = f.hex(r, i);
                assert_eq!(f.canon_hex((x + 9, y + 2)), (x, y));
            }
        }
    }

    #[test]
    fn rim_length_is_twice_the_ring() {
        for (p1, p2) in [(4, 3), (5, 5), (8, 0), (9, 2)] {
            let f = TubeFrame::new(p1, p2).unwrap();
            assert_eq!(f.lower_rim().len(), 2 * f.m());
        }
    }

    #[test]
    fn wrap_vector_of_single_hexagon_fails_balance() {
        assert!(matches!(wrap_vector(&[2; 6]), Err(TubeError::UnbalancedBoundary { l: 0, r: 6 })));
    }

    #[test]
    fn section_hexagon_counts() {
        let (_, rs) = tube_section(4, 3, 9).unwrap();
        assert!(rs.rings.iter().all(|r| r.len() == 7));
    }
}
