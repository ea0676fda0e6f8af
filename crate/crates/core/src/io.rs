//! Graph file formats.
//!
//! * planar_code: optional header `>>planar_code<<` (a `>>planar_code le<<`
//!   header is also read). Each graph is a byte `n` followed, for every vertex
//!   in order, by its neighbours in rotation order as 1-based bytes and a
//!   terminating 0. Graphs with more than 255 vertices use the 16-bit variant:
//!   a 0 byte, then `n` and all entries as little-endian `u16`.
//! * text: one line `v: a b c` per vertex, rotation order significant,
//!   `#` starts a comment. Graphs are separated by blank lines or by a line
//!   starting with `>`.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::graph::{FullereneGraph, GraphError};

pub const PLANAR_CODE_HEADER: &[u8] = b">>planar_code<<";
const PLANAR_CODE_LE_HEADER: &[u8] = b">>planar_code le<<";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("truncated planar_code input at byte {0}")]
    Truncated(usize),
    #[error("neighbour index {index} out of range for {n} vertices")]
    BadIndex { index: usize, n: usize },
    #[error("line {line}: {msg}")]
    Text { line: usize, msg: String },
    #[error("graph {index}: {source}")]
    Graph { index: usize, source: GraphError },
}

pub fn write_planar_code<W: Write>(out: &mut W, graphs: &[FullereneGraph], header: bool) -> io::Result<()> {
    if header {
        out.write_all(PLANAR_CODE_HEADER)?;
    }
    for g in graphs {
        write_planar_code_graph(out, &g.rotation_lists())?;
    }
    Ok(())
}

/// Writes one rotation system without header.
pub fn write_planar_code_graph<W: Write>(out: &mut W, rot: &[Vec<usize>]) -> io::Result<()> {
    let n = rot.len();
    if n <= 255 {
        let mut buf = Vec::with_capacity(1 + 4 * n);
        buf.push(n as u8);
        for r in rot {
            buf.extend(r.iter().map(|&w| (w + 1) as u8));
            buf.push(0);
        }
        out.write_all(&buf)
    } else {
        let mut buf = Vec::with_capacity(3 + 8 * n);
        buf.push(0);
        buf.extend_from_slice(&(n as u16).to_le_bytes());
        for r in rot {
            for &w in r {
                buf.extend_from_slice(&((w + 1) as u16).to_le_bytes());
            }
            buf.extend_from_slice(&0u16.to_le_bytes());
        }
        out.write_all(&buf)
    }
}

/// Parses a planar_code stream into rotation systems (not yet validated).
pub fn parse_planar_code(bytes: &[u8]) -> Result<Vec<Vec<Vec<usize>>>, FormatError> {
    let mut pos = 0;
    if bytes.starts_with(PLANAR_CODE_LE_HEADER) {
        pos = PLANAR_CODE_LE_HEADER.len();
    } else if bytes.starts_with(PLANAR_CODE_HEADER) {
        pos = PLANAR_CODE_HEADER.len();
    }
    let mut graphs = Vec::new();
    while pos < bytes.len() {
        let wide = bytes[pos] == 0;
        let read = |pos: &mut usize| -> Result<usize, FormatError> {
            if wide {
                let b = bytes.get(*pos..*pos + 2).ok_or(FormatError::Truncated(*pos))?;
                *pos += 2;
                Ok(u16::from_le_bytes([b[0], b[1]]) as usize)
            } else {
                let b = *bytes.get(*pos).ok_or(FormatError::Truncated(*pos))?;
                *pos += 1;
                Ok(b as usize)
            }
        };
        if wide {
            pos += 1;
        }
        let n = read(&mut pos)?;
        let mut rot = Vec::with_capacity(n);
        for _ in 0..n {
            let mut r = Vec::new();
            loop {
                let x = read(&mut pos)?;
                if x == 0 {
                    break;
                }
                if x > n {
                    return Err(FormatError::BadIndex { index: x, n });
                }
                r.push(x - 1);
            }
            rot.push(r);
        }
        graphs.push(rot);
    }
    Ok(graphs)
}

pub fn read_planar_code<R: Read>(input: &mut R) -> Result<Vec<FullereneGraph>, FormatError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    validate_all(parse_planar_code(&bytes)?)
}

fn validate_all(rots: Vec<Vec<Vec<usize>>>) -> Result<Vec<FullereneGraph>, FormatError> {
    rots.into_iter()
        .enumerate()
        .map(|(index, rot)| FullereneGraph::build_from_rotation(rot).map_err(|source| FormatError::Graph { index, source }))
        .collect()
}

pub fn write_text<W: Write>(out: &mut W, g: &FullereneGraph) -> io::Result<()> {
    for v in 0..g.n() {
        let [a, b, c] = *g.rotation(v);
        writeln!(out, "{v}: {a} {b} {c}")?;
    }
    Ok(())
}

/// Parses the text format into rotation systems (not yet validated).
pub fn parse_text(src: &str) -> Result<Vec<Vec<Vec<usize>>>, FormatError> {
    let mut graphs = Vec::new();
    let mut current: Vec<(usize, Vec<usize>)> = Vec::new();
    let flush = |current: &mut Vec<(usize, Vec<usize>)>, graphs: &mut Vec<Vec<Vec<usize>>>, line: usize| {
        if current.is_empty() {
            return Ok(());
        }
        let n = current.len();
        let mut rot = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        for (v, r) in current.drain(..) {
            if v >= n || seen[v] {
                return Err(FormatError::Text { line, msg: format!("vertex {v} out of order or repeated") });
            }
            seen[v] = true;
            rot[v] = r;
        }
        graphs.push(rot);
        Ok(())
    };
    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() || line.starts_with('>') {
            if !raw.trim_start().starts_with('#') {
                flush(&mut current, &mut graphs, line_no)?;
            }
            continue;
        }
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| FormatError::Text { line: line_no, msg: "expected `v: a b c`".into() })?;
        let v: usize = head
            .trim()
            .parse()
            .map_err(|_| FormatError::Text { line: line_no, msg: format!("bad vertex `{head}`") })?;
        let r = tail
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| FormatError::Text { line: line_no, msg: "bad neighbour".into() })?;
        current.push((v, r));
    }
    let end = src.lines().count();
    flush(&mut current, &mut graphs, end)?;
    Ok(graphs)
}

pub fn read_text(src: &str) -> Result<Vec<FullereneGraph>, FormatError> {
    validate_all(parse_text(src)?)
}

/// Reads either format. planar_code always contains NUL terminators, text never does.
pub fn read_any(bytes: &[u8]) -> Result<Vec<FullereneGraph>, FormatError> {
    let looks_binary = bytes.starts_with(b">>planar_code") || bytes.contains(&0);
    if looks_binary {
        validate_all(parse_planar_code(bytes)?)
    } else {
        let text = std::str::from_utf8(bytes).map_err(|_| FormatError::Text { line: 0, msg: "not UTF-8".into() })?;
        read_text(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn planar_code_bytes_for_dodecahedron() {
        let g = fixtures::dodecahedron();
        let mut buf = Vec::new();
        write_planar_code(&mut buf, std::slice::from_ref(&g), true).unwrap();
        assert!(buf.starts_with(PLANAR_CODE_HEADER));
        let body = &buf[PLANAR_CODE_HEADER.len()..];
        assert_eq!(body.len(), 1 + 20 * 4);
        assert_eq!(body[0], 20);
        let [a, b, c] = *g.rotation(0);
        assert_eq!(&body[1..5], &[(a + 1) as u8, (b + 1) as u8, (c + 1) as u8, 0]);
    }

    #[test]
    fn planar_code_round_trip_keeps_codes() {
        let graphs = vec![fixtures::dodecahedron(), fixtures::c60()];
        let mut buf = Vec::new();
        write_planar_code(&mut buf, &graphs, false).unwrap();
        let back = read_planar_code(&mut buf.as_slice()).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in graphs.iter().zip(&back) {
            assert_eq!(a.rotation_lists(), b.rotation_lists());
        }
    }

    #[test]
    fn wide_planar_code_round_trip() {
        let rot: Vec<Vec<usize>> = (0..300).map(|v| vec![(v + 1) % 300, (v + 299) % 300]).collect();
        let mut buf = Vec::new();
        write_planar_code_graph(&mut buf, &rot).unwrap();
        assert_eq!(buf[0], 0);
        assert_eq!(parse_planar_code(&buf).unwrap(), vec![rot]);
    }

    #[test]
    fn truncated_input_is_an_error() {
        let mut buf = Vec::new();
        write_planar_code(&mut buf, &[fixtures::dodecahedron()], false).unwrap();
        buf.truncate(30);
        assert!(matches!(parse_planar_code(&buf), Err(FormatError::Truncated(_))));
    }

    #[test]
    fn text_round_trip() {
        let g = fixtures::c60();
        let mut buf = Vec::new();
        write_text(&mut buf, &g).unwrap();
        let src = format!("# c60\n{}", String::from_utf8(buf).unwrap());
        let back = read_text(&src).unwrap();
        assert_eq!(back[0].rotation_lists(), g.rotation_lists());
        assert_eq!(read_any(src.as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn text_rejects_garbage() {
        assert!(read_text("0: 1 2 x\n").is_err());
        assert!(read_text("zero: 1 2 3\n").is_err());
    }
}
