//! Discharging certificate for the lower bound `|M| >= (n - 6) / 3`.
//!
//! Black vertices start with charge 3, white vertices with -6 and
//! pentagons with 3, so the total is `3|B| - 6|W| + 36`. The rules move
//! charge around without changing the total and end with nothing
//! negative; any maximal matching therefore satisfies the bound. The
//! ledger runs the rules on a concrete matching and checks every step.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::ColorClasses;
use crate::graph::{FaceId, FullereneGraph, Vertex};
use crate::matching::{is_maximal, Matching};
use crate::solver::lower_bound_fullerene;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Init,
    R1,
    R2,
    R3R4R5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FaceClass {
    Good,
    Neutral,
    Transition,
    Bad,
    Unclassified,
}

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateError {
    #[error("matching is not a maximal matching of the graph")]
    NotMaximal,
    #[error("white vertices {0} and {1} are adjacent")]
    WhiteAdjacency(Vertex, Vertex),
    #[error("rule applied at stage {found:?}, expected {expected:?}")]
    WrongStage { expected: Stage, found: Stage },
    #[error("total charge {found} at stage {stage:?}, expected {expected}")]
    ChargeNotConserved { stage: Stage, expected: i64, found: i64 },
    #[error("vertex {vertex} keeps charge {charge} after {stage:?}")]
    ResidualCharge { stage: Stage, vertex: Vertex, charge: i64 },
    #[error("face {face} looks {class:?} but carries charge {charge}")]
    ClassificationMismatch { face: FaceId, class: FaceClass, charge: i64 },
    #[error("{element} ends with charge {charge}")]
    NegativeResidual { element: String, charge: i64 },
}

/// Incoming and outgoing white vertex of a transition face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Roles {
    pub incoming: Vertex,
    pub outgoing: Vertex,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChargeLedger {
    pub stage: Stage,
    pub vertex_charge: Vec<i64>,
    pub face_charge: Vec<i64>,
    pub colors: ColorClasses,
    pub face_class: Vec<FaceClass>,
    pub transition_roles: BTreeMap<FaceId, Roles>,
    /// `3|B| - 6|W| + 36`.
    pub expected_total: i64,
    white: Vec<bool>,
    mate: Vec<Option<Vertex>>,
}

/// Starting charges for a maximal matching `m` of `g`.
pub fn init_charges(g: &FullereneGraph, m: &Matching) -> Result<ChargeLedger, CertificateError> {
    if !m.is_valid_on(g) || !is_maximal(g, m) {
        return Err(CertificateError::NotMaximal);
    }
    let mut mate = vec![None; g.n()];
    for &(u, v) in &m.edges {
        mate[u] = Some(v);
        mate[v] = Some(u);
    }
    let white: Vec<bool> = mate.iter().map(Option::is_none).collect();
    let colors = ColorClasses::of(g.n(), m);
    let vertex_charge = white.iter().map(|&w| if w { -6 } else { 3 }).collect();
    let face_charge = g.faces().iter().map(|f| if f.is_pentagon() { 3 } else { 0 }).collect();
    let expected_total = 3 * colors.black.len() as i64 - 6 * colors.white.len() as i64 + 36;
    Ok(ChargeLedger {
        stage: Stage::Init,
        vertex_charge,
        face_charge,
        colors,
        face_class: vec![FaceClass::Unclassified; g.num_faces()],
        transition_roles: BTreeMap::new(),
        expected_total,
        white,
        mate,
    })
}

impl ChargeLedger {
    pub fn total(&self) -> i64 {
        self.vertex_charge.iter().sum::<i64>() + self.face_charge.iter().sum::<i64>()
    }

    pub fn check_conservation(&self) -> Result<(), CertificateError> {
        let found = self.total();
        if found != self.expected_total {
            return Err(CertificateError::ChargeNotConserved { stage: self.stage, expected: self.expected_total, found });
        }
        Ok(())
    }

    fn enter(&mut self, from: Stage, to: Stage) -> Result<(), CertificateError> {
        if self.stage != from {
            return Err(CertificateError::WrongStage { expected: from, found: self.stage });
        }
        self.check_conservation()?;
        self.stage = to;
        Ok(())
    }

    fn zero_vertices(&self) -> Result<(), CertificateError> {
        match self.vertex_charge.iter().position(|&c| c != 0) {
            Some(v) => Err(CertificateError::ResidualCharge { stage: self.stage, vertex: v, charge: self.vertex_charge[v] }),
            None => Ok(()),
        }
    }

    /// Each white vertex sends -2 to each black neighbour.
    pub fn apply_r1(&mut self, g: &FullereneGraph) -> Result<(), CertificateError> {
        self.enter(Stage::Init, Stage::R1)?;
        for v in 0..g.n() {
            if !self.white[v] {
                continue;
            }
            for &u in g.neighbors(v) {
                if self.white[u] {
                    return Err(CertificateError::WhiteAdjacency(v.min(u), v.max(u)));
                }
                self.vertex_charge[v] += 2;
                self.vertex_charge[u] -= 2;
            }
        }
        self.check_conservation()?;
        for v in 0..g.n() {
            if self.white[v] && self.vertex_charge[v] != 0 {
                return Err(CertificateError::ResidualCharge { stage: Stage::R1, vertex: v, charge: self.vertex_charge[v] });
            }
        }
        Ok(())
    }

    /// Each black vertex sends what it holds to the face avoiding its
    /// matching edge.
    pub fn apply_r2(&mut self, g: &FullereneGraph) -> Result<(), CertificateError> {
        self.enter(Stage::R1, Stage::R2)?;
        for v in 0..g.n() {
            if let Some(u) = self.mate[v] {
                let f = g.face_opposite(v, u);
                self.face_charge[f] += self.vertex_charge[v];
                self.vertex_charge[v] = 0;
            }
        }
        self.check_conservation()?;
        self.zero_vertices()
    }

    /// Labels every face from its colouring and checks the label against
    /// the charge it received.
    pub fn classify_faces(&mut self, g: &FullereneGraph) -> Result<(), CertificateError> {
        if self.stage != Stage::R2 {
            return Err(CertificateError::WrongStage { expected: Stage::R2, found: self.stage });
        }
        for (id, face) in g.faces().iter().enumerate() {
            let vs = &face.boundary;
            let k = vs.len();
            let whites: Vec<usize> = (0..k).filter(|&i| self.white[vs[i]]).collect();
            let on_face = |i: usize| self.mate[vs[i]] == Some(vs[(i + 1) % k]);
            let charge = self.face_charge[id];
            let (class, roles) = match (k, whites.len()) {
                (_, 0) if charge == 0 => (FaceClass::Neutral, None),
                (6, 3) => (FaceClass::Bad, None),
                (6, 2) => {
                    let (a, b) = (whites[0], whites[1]);
                    match b - a {
                        3 if on_face((a + 1) % k) && on_face((b + 1) % k) => (FaceClass::Neutral, None),
                        2 | 4 => {
                            // w1 x w2 y z t around the face, with x between the whites.
                            let (w1, w2) = if b - a == 2 { (a, b) } else { (b, a) };
                            let (y, z) = ((w2 + 1) % k, (w2 + 2) % k);
                            if on_face(y) {
                                // Black edge yz touches w2; w1 sits between the other two blacks.
                                (FaceClass::Transition, Some(Roles { incoming: vs[w1], outgoing: vs[w2] }))
                            } else if on_face(z) {
                                (FaceClass::Transition, Some(Roles { incoming: vs[w2], outgoing: vs[w1] }))
                            } else {
                                (FaceClass::Good, None)
                            }
                        }
                        _ => (FaceClass::Good, None),
                    }
                }
                _ => (FaceClass::Good, None),
            };
            let consistent = match class {
                FaceClass::Good => charge > 0,
                FaceClass::Neutral | FaceClass::Transition => charge == 0,
                FaceClass::Bad => charge == -3,
                FaceClass::Unclassified => false,
            };
            if !consistent {
                return Err(CertificateError::ClassificationMismatch { face: id, class, charge });
            }
            self.face_class[id] = class;
            if let Some(r) = roles {
                self.transition_roles.insert(id, r);
            }
        }
        Ok(())
    }

    /// Good faces send 1 to each white vertex, bad faces send -1, and a
    /// transition face sends -1 to its incoming and 1 to its outgoing white.
    pub fn apply_r3r4r5(&mut self, g: &FullereneGraph) -> Result<(), CertificateError> {
        if self.face_class.contains(&FaceClass::Unclassified) {
            return Err(CertificateError::WrongStage { expected: Stage::R2, found: self.stage });
        }
        self.enter(Stage::R2, Stage::R3R4R5)?;
        for (id, face) in g.faces().iter().enumerate() {
            let mut send = |v: Vertex, c: i64| {
                self.face_charge[id] -= c;
                self.vertex_charge[v] += c;
            };
            match self.face_class[id] {
                FaceClass::Good | FaceClass::Bad => {
                    let c = if self.face_class[id] == FaceClass::Good { 1 } else { -1 };
                    for &v in face.boundary.iter().filter(|&&v| self.white[v]) {
                        send(v, c);
                    }
                }
                FaceClass::Transition => {
                    let r = self.transition_roles[&id];
                    send(r.incoming, -1);
                    send(r.outgoing, 1);
                }
                FaceClass::Neutral | FaceClass::Unclassified => {}
            }
        }
        self.check_conservation()?;
        for (f, &c) in self.face_charge.iter().enumerate() {
            if c < 0 {
                return Err(CertificateError::NegativeResidual { element: format!("face {f}"), charge: c });
            }
        }
        for (v, &c) in self.vertex_charge.iter().enumerate() {
            if c < 0 {
                return Err(CertificateError::NegativeResidual { element: format!("vertex {v}"), charge: c });
            }
        }
        Ok(())
    }

    pub fn class_histogram(&self) -> BTreeMap<FaceClass, usize> {
        let mut h = BTreeMap::new();
        for &c in &self.face_class {
            *h.entry(c).or_default() += 1;
        }
        h
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trace {
    pub vertex_charge: Vec<i64>,
    pub face_charge: Vec<i64>,
    pub face_class: Vec<FaceClass>,
    pub transition_roles: BTreeMap<FaceId, Roles>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Certificate {
    pub valid: bool,
    pub n: usize,
    pub matching_size: usize,
    /// `ceil((n - 6) / 3)`.
    pub implied_bound: usize,
    /// Bound read off the final ledger: the smallest size `k` with
    /// `3 * 2k - 6 (n - 2k) + 36 >= 0`.
    pub ledger_bound: Option<usize>,
    pub stage_totals: Vec<(Stage, i64)>,
    pub class_histogram: BTreeMap<FaceClass, usize>,
    pub error: Option<CertificateError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Trace>,
}

/// Runs all rules on `m` and reports whether every stage held.
pub fn verify_certificate(g: &FullereneGraph, m: &Matching, with_trace: bool) -> Certificate {
    let n = g.n();
    let mut cert = Certificate {
        valid: false,
        n,
        matching_size: m.len(),
        implied_bound: lower_bound_fullerene(n),
        ledger_bound: None,
        stage_totals: Vec::new(),
        class_histogram: BTreeMap::new(),
        error: None,
        trace: None,
    };
    let mut ledger = match init_charges(g, m) {
        Ok(l) => l,
        Err(e) => {
            cert.error = Some(e);
            return cert;
        }
    };
    cert.stage_totals.push((Stage::Init, ledger.total()));
    let result = run_rules(g, &mut ledger, &mut cert.stage_totals);
    cert.class_histogram = ledger.class_histogram();
    if with_trace {
        cert.trace = Some(Trace {
            vertex_charge: ledger.vertex_charge.clone(),
            face_charge: ledger.face_charge.clone(),
            face_class: ledger.face_class.clone(),
            transition_roles: ledger.transition_roles.clone(),
        });
    }
    match result {
        Ok(()) => {
            // Nonnegative total: 6|M| - 6(n - 2|M|) + 36 >= 0.
            let total = ledger.total();
            let k = (0..=n / 2).find(|&k| 18 * k as i64 >= 6 * n as i64 - 36).unwrap_or(n / 2);
            cert.ledger_bound = Some(k);
            cert.valid = total >= 0 && k == cert.implied_bound && m.len() >= k;
        }
        Err(e) => cert.error = Some(e),
    }
    cert
}

fn run_rules(g: &FullereneGraph, l: &mut ChargeLedger, totals: &mut Vec<(Stage, i64)>) -> Result<(), CertificateError> {
    l.apply_r1(g)?;
    totals.push((Stage::R1, l.total()));
    l.apply_r2(g)?;
    totals.push((Stage::R2, l.total()));
    l.classify_faces(g)?;
    l.apply_r3r4r5(g)?;
    totals.push((Stage::R3R4R5, l.total()));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::solver::{saturation_exact, SolverConfig};

    #[test]
    fn dodecahedron_witness_certifies() {
        let g = fixtures::dodecahedron();
        let s = saturation_exact(&g, &SolverConfig::default()).unwrap();
        let l = init_charges(&g, &s.witness).unwrap();
        assert_eq!(l.total(), 24);
        let c = verify_certificate(&g, &s.witness, false);
        assert!(c.valid, "{:?}", c.error);
        assert_eq!(c.implied_bound, 5);
    }

    #[test]
    fn empty_matching_is_rejected() {
        let g = fixtures::dodecahedron();
        assert_eq!(init_charges(&g, &Matching::default()).unwrap_err(), CertificateError::NotMaximal);
    }

    #[test]
    fn stages_must_run_in_order() {
        let g = fixtures::dodecahedron();
        let m = crate::matching::greedy_maximal(&g, 0);
        let mut l = init_charges(&g, &m).unwrap();
        assert!(matches!(l.apply_r2(&g), Err(CertificateError::WrongStage { .. })));
    }
}
