//! graph6 encoding, single-byte size form only.
//!
//! Layout: one byte `n + 63`, then the upper triangle of the adjacency
//! matrix read column by column (`(0,1), (0,2), (1,2), (0,3), ...`), packed
//! six bits per byte, most significant first, each byte offset by 63.

use super::{Graph, MAX_VERTICES};
use crate::error::{Error, Result};

const OFFSET: u8 = 63;
const MAX_SINGLE_BYTE: usize = 62;

pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push(n as u8 + OFFSET);
    let mut acc = 0u8;
    let mut filled = 0;
    for w in 1..n {
        for u in 0..w {
            acc = acc << 1 | g.adjacent(u, w) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + OFFSET);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + OFFSET);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let bytes = bytes.strip_prefix(b">>graph6<<").unwrap_or(bytes);
    let (&head, body) = bytes
        .split_first()
        .ok_or_else(|| Error::Parse("empty graph6 string".into()))?;
    if !(OFFSET..=126).contains(&head) {
        return Err(Error::Parse(format!("graph6 size byte {head} out of range")));
    }
    let n = (head - OFFSET) as usize;
    if n > MAX_SINGLE_BYTE {
        return Err(Error::Parse("graph6 multi-byte size form is not supported".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices { got: n, limit: MAX_VERTICES });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let need = bits.div_ceil(6);
    if body.len() < need {
        return Err(Error::Parse(format!(
            "graph6 bit field truncated: expected {need} bytes, got {}",
            body.len()
        )));
    }
    if body.len() > need {
        return Err(Error::Parse(format!(
            "graph6 has {} trailing bytes",
            body.len() - need
        )));
    }
    if let Some(&bad) = body.iter().find(|b| !(OFFSET..=126).contains(*b)) {
        return Err(Error::Parse(format!("graph6 byte {bad} out of range")));
    }

    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for w in 1..n {
        for u in 0..w {
            let byte = body[k / 6] - OFFSET;
            if byte >> (5 - k % 6) & 1 == 1 {
                g.add_edge(u, w)?;
            }
            k += 1;
        }
    }
    Ok(g)
}
