//! Text encodings: graph6, digraph6, a plain arc-list format for digraphs and
//! an edge-list format for graphs.
//!
//! graph6 stores the upper triangle column by column, i.e. the pairs
//! `(0,1), (0,2), (1,2), (0,3), ...`, six bits per printable byte (`63 + v`),
//! zero padded. digraph6 is the same idea with a leading `&` and the full
//! `n x n` matrix in row-major order.

use crate::error::{Error, Result};
use crate::graph::{AnyGraph, Digraph, Graph};

const MAX_ORDER: usize = 258_047;

fn format_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Format {
        offset,
        message: message.into(),
    }
}

fn encode_order(n: usize, out: &mut String) -> Result<()> {
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= MAX_ORDER {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    } else {
        return Err(Error::Range {
            what: "order",
            value: n,
            range: "0..=258047",
        });
    }
    Ok(())
}

/// Returns `(n, bytes consumed)`.
fn decode_order(bytes: &[u8], base: usize) -> Result<(usize, usize)> {
    let first = *bytes
        .first()
        .ok_or_else(|| format_err(base, "empty record"))?;
    check_byte(first, base)?;
    if first != b'~' {
        return Ok(((first - 63) as usize, 1));
    }
    if bytes.get(1) == Some(&b'~') {
        return Err(format_err(
            base + 1,
            "orders above 258047 are not supported",
        ));
    }
    if bytes.len() < 4 {
        return Err(format_err(base + bytes.len(), "truncated order field"));
    }
    let mut n = 0usize;
    for (k, &b) in bytes[1..4].iter().enumerate() {
        check_byte(b, base + 1 + k)?;
        n = (n << 6) | (b - 63) as usize;
    }
    if n <= 62 {
        return Err(format_err(base, "long order form used for a small order"));
    }
    Ok((n, 4))
}

fn check_byte(b: u8, offset: usize) -> Result<()> {
    if (63..=126).contains(&b) {
        Ok(())
    } else {
        Err(format_err(offset, format!("byte {b} outside 63..=126")))
    }
}

fn pack_bits(bits: impl Iterator<Item = bool>, out: &mut String) {
    let mut acc = 0u8;
    let mut count = 0;
    for bit in bits {
        acc = (acc << 1) | u8::from(bit);
        count += 1;
        if count == 6 {
            out.push((acc + 63) as char);
            acc = 0;
            count = 0;
        }
    }
    if count > 0 {
        out.push(((acc << (6 - count)) + 63) as char);
    }
}

/// Unpacks exactly `nbits` bits from `payload`, rejecting wrong lengths and
/// nonzero padding.
fn unpack_bits(payload: &[u8], nbits: usize, base: usize) -> Result<Vec<bool>> {
    let need = nbits.div_ceil(6);
    if payload.len() != need {
        return Err(format_err(
            base + payload.len().min(need),
            format!("expected {need} payload bytes, found {}", payload.len()),
        ));
    }
    let mut bits = Vec::with_capacity(need * 6);
    for (k, &b) in payload.iter().enumerate() {
        check_byte(b, base + k)?;
        let v = b - 63;
        for shift in (0..6).rev() {
            bits.push((v >> shift) & 1 == 1);
        }
    }
    if bits[nbits..].iter().any(|&b| b) {
        return Err(format_err(base + need - 1, "nonzero padding bits"));
    }
    bits.truncate(nbits);
    Ok(bits)
}

fn strip_header<'a>(text: &'a str, header: &str) -> (&'a str, usize) {
    match text.strip_prefix(header) {
        Some(rest) => (rest, header.len()),
        None => (text, 0),
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let (body, base) = strip_header(text, ">>graph6<<");
    let bytes = body.as_bytes();
    let (n, used) = decode_order(bytes, base)?;
    let nbits = n * n.saturating_sub(1) / 2;
    let bits = unpack_bits(&bytes[used..], nbits, base + used)?;
    let mut g = Graph::new(n);
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                g.add_edge(i, j)?;
            }
            k += 1;
        }
    }
    Ok(g)
}

pub fn write_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    let mut out = String::new();
    encode_order(n, &mut out)?;
    let bits = (1..n).flat_map(|j| (0..j).map(move |i| (i, j)));
    pack_bits(bits.map(|(i, j)| g.has_edge(i, j)), &mut out);
    Ok(out)
}

pub fn parse_digraph6(text: &str) -> Result<Digraph> {
    let text = text.trim_end_matches(['\n', '\r']);
    let (body, base) = strip_header(text, ">>digraph6<<");
    let body = body
        .strip_prefix('&')
        .ok_or_else(|| format_err(base, "digraph6 records start with '&'"))?;
    let base = base + 1;
    let bytes = body.as_bytes();
    let (n, used) = decode_order(bytes, base)?;
    let bits = unpack_bits(&bytes[used..], n * n, base + used)?;
    let mut d = Digraph::new(n);
    for i in 0..n {
        for j in 0..n {
            if bits[i * n + j] {
                if i == j {
                    return Err(format_err(
                        base + used + (i * n + j) / 6,
                        "loop in digraph6",
                    ));
                }
                d.add_arc(i, j)?;
            }
        }
    }
    Ok(d)
}

pub fn write_digraph6(d: &Digraph) -> Result<String> {
    let n = d.n();
    let mut out = String::from("&");
    encode_order(n, &mut out)?;
    let bits = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    pack_bits(bits.map(|(i, j)| d.has_arc(i, j)), &mut out);
    Ok(out)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let bad = || Error::Parse {
        line: lineno,
        message: format!("expected two vertex indices, got {line:?}"),
    };
    let u = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let v = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((u, v))
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn with_line(err: Error, lineno: usize) -> Error {
    match err {
        Error::Parse { .. } => err,
        other => Error::Parse {
            line: lineno,
            message: other.to_string(),
        },
    }
}

/// Arc-list text: a header `n <count>` followed by one `u v` arc per line.
/// Several digraphs may follow each other; each starts with its own header.
pub fn parse_arc_list(text: &str) -> Result<Vec<Digraph>> {
    let mut out: Vec<Digraph> = Vec::new();
    for (lineno, line) in content_lines(text) {
        if let Some(rest) = line.strip_prefix('n') {
            let n = rest.trim().parse::<usize>().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("bad header {line:?}"),
            })?;
            out.push(Digraph::new(n));
            continue;
        }
        let (u, v) = parse_pair(line, lineno)?;
        let d = out.last_mut().ok_or(Error::Parse {
            line: lineno,
            message: "arc before header".into(),
        })?;
        d.add_arc(u, v).map_err(|e| with_line(e, lineno))?;
    }
    Ok(out)
}

pub fn write_arc_list(d: &Digraph) -> String {
    let mut s = format!("n {}\n", d.n());
    for (u, v) in d.arcs() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Edge-list text: a header `n m` followed by exactly `m` lines `u v`.
pub fn parse_edge_list(text: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    let mut pending = 0usize;
    for (lineno, line) in content_lines(text) {
        let (a, b) = parse_pair(line, lineno)?;
        if pending == 0 {
            out.push(Graph::new(a));
            pending = b;
            continue;
        }
        let g: &mut Graph = out.last_mut().expect("header pushed");
        g.add_edge(a, b).map_err(|e| with_line(e, lineno))?;
        pending -= 1;
    }
    if pending > 0 {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("{pending} edge lines missing"),
        });
    }
    Ok(out)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

/// Reads a whole input file, guessing the format from its first content line:
/// `n <count>` means arc list, two integers mean edge list, otherwise one
/// graph6 or digraph6 record per line.
pub fn parse_any(text: &str) -> Result<Vec<AnyGraph>> {
    let Some((_, first)) = content_lines(text).next() else {
        return Ok(Vec::new());
    };
    if first.starts_with('n') && first[1..].trim().parse::<usize>().is_ok() {
        return Ok(parse_arc_list(text)?
            .into_iter()
            .map(AnyGraph::Directed)
            .collect());
    }
    let looks_numeric = first.split_whitespace().count() == 2
        && first.split_whitespace().all(|t| t.parse::<usize>().is_ok());
    if looks_numeric {
        return Ok(parse_edge_list(text)?
            .into_iter()
            .map(AnyGraph::Undirected)
            .collect());
    }
    let mut out = Vec::new();
    for (lineno, line) in content_lines(text) {
        let record = if line.starts_with('&') || line.starts_with(">>digraph6<<") {
            parse_digraph6(line).map(AnyGraph::Directed)
        } else {
            parse_graph6(line).map(AnyGraph::Undirected)
        };
        out.push(record.map_err(|e| with_line(e, lineno))?);
    }
    Ok(out)
}

pub fn write_any(g: &AnyGraph) -> Result<String> {
    match g {
        AnyGraph::Undirected(g) => write_graph6(g),
        AnyGraph::Directed(d) => write_digraph6(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graph6_records() {
        let k1 = parse_graph6("@").unwrap();
        assert_eq!((k1.n(), k1.edge_count()), (1, 0));
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        let p3 = parse_graph6("Bg").unwrap();
        assert_eq!(p3.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(write_graph6(&k1).unwrap(), "@");
        assert_eq!(write_graph6(&k3).unwrap(), "Bw");
        assert_eq!(write_graph6(&p3).unwrap(), "Bg");
    }

    #[test]
    fn graph6_errors_name_offsets() {
        // 'B' promises 3 bits; two payload bytes is too many.
        assert!(matches!(parse_graph6("Bww"), Err(Error::Format { .. })));
        // padding bit set: 0b111001 = 57 -> 'x'
        assert!(matches!(
            parse_graph6("Bx"),
            Err(Error::Format { offset: 1, .. })
        ));
        assert!(matches!(
            parse_graph6("B "),
            Err(Error::Format { offset: 1, .. })
        ));
        assert!(matches!(
            parse_graph6(""),
            Err(Error::Format { offset: 0, .. })
        ));
    }

    #[test]
    fn long_order_form() {
        let g = Graph::from_edges(70, &[(0, 69), (3, 4)]).unwrap();
        let s = write_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        assert_eq!(parse_graph6(&s).unwrap(), g);
    }

    #[test]
    fn digraph6_round_trip() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 0), (2, 1)]).unwrap();
        let s = write_digraph6(&d).unwrap();
        assert!(s.starts_with("&B"));
        assert_eq!(parse_digraph6(&s).unwrap(), d);
    }

    #[test]
    fn arc_and_edge_lists() {
        let ds = parse_arc_list("n 3\n0 1\n1 2\n# comment\nn 2\n1 0\n").unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds[0].arcs(), vec![(0, 1), (1, 2)]);
        assert_eq!(parse_arc_list(&write_arc_list(&ds[1])).unwrap()[0], ds[1]);

        let gs = parse_edge_list("3 2\n0 1\n1 2\n2 1\n0 1\n").unwrap();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[1].edges(), vec![(0, 1)]);
        assert!(matches!(
            parse_edge_list("3 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_edge_list("3 1\n0 7\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn autodetect() {
        let d = Digraph::from_arcs(3, &[(0, 1)]).unwrap();
        let text = format!("Bw\n{}\n", write_digraph6(&d).unwrap());
        let all = parse_any(&text).unwrap();
        assert!(matches!(all[0], AnyGraph::Undirected(_)));
        assert!(matches!(all[1], AnyGraph::Directed(_)));
        assert!(matches!(
            parse_any("n 2\n0 1\n").unwrap()[0],
            AnyGraph::Directed(_)
        ));
        assert!(matches!(
            parse_any("2 1\n0 1\n").unwrap()[0],
            AnyGraph::Undirected(_)
        ));
        assert!(matches!(
            parse_any("Bw\n\u{1}\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
