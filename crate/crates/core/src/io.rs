//! Plain-text graph files.
//!
//! ```text
//! # comment
//! N M
//! <vertex_id> <weight>      (N lines)
//! <u> <v>                   (M lines, u < v)
//! ```
//!
//! Weights are written with Rust's shortest round-trip float formatting, so
//! `read_graph(write_graph(g)) == g` bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub fn write_graph(graph: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_atomic(path, graph_to_string(graph).as_bytes())
}

pub fn graph_to_string(graph: &WeightedGraph) -> String {
    let mut out = String::with_capacity(16 * (graph.n() + graph.m()) + 16);
    let _ = writeln!(out, "{} {}", graph.n(), graph.m());
    for (v, w) in graph.weights().iter().enumerate() {
        let _ = writeln!(out, "{v} {w:?}");
    }
    for (u, v) in graph.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<WeightedGraph> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_graph(&text, path)
}

/// Parses the graph format; `origin` only labels error messages.
pub fn parse_graph(text: &str, origin: impl AsRef<Path>) -> Result<WeightedGraph> {
    let origin = origin.as_ref().to_path_buf();
    let err = |line: usize, message: String| Error::Parse {
        path: origin.clone(),
        line,
        message,
    };
    let mut lines = content_lines(text);

    let (hline, header) = lines
        .next()
        .ok_or_else(|| err(1, "missing header \"N M\"".into()))?;
    let [n, m] = parse_fields::<usize, 2>(header)
        .ok_or_else(|| err(hline, format!("malformed header {header:?}, expected \"N M\"")))?;
    if n == 0 {
        return Err(err(hline, "graph needs at least one vertex".into()));
    }

    let mut weights = vec![f64::NAN; n];
    for _ in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(hline, format!("expected {n} vertex lines")))?;
        let mut it = line.split_whitespace();
        let (Some(id), Some(w), None) = (it.next(), it.next(), it.next()) else {
            return Err(err(ln, format!("expected \"<vertex_id> <weight>\", got {line:?}")));
        };
        let id: usize = id
            .parse()
            .map_err(|_| err(ln, format!("bad vertex id {id:?}")))?;
        let w: f64 = w.parse().map_err(|_| err(ln, format!("bad weight {w:?}")))?;
        if id >= n {
            return Err(err(ln, format!("vertex id {id} out of range 0..{n}")));
        }
        if !weights[id].is_nan() {
            return Err(err(ln, format!("vertex {id} listed twice")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(err(ln, format!("nonpositive weight {w} for vertex {id}")));
        }
        weights[id] = w;
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| err(hline, format!("expected {m} edge lines")))?;
        let [u, v] = parse_fields::<usize, 2>(line)
            .ok_or_else(|| err(ln, format!("expected \"<u> <v>\", got {line:?}")))?;
        if u >= n || v >= n {
            return Err(err(ln, format!("edge ({u},{v}) has vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(err(ln, format!("self-loop on vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(err(ln, format!("duplicate edge ({u},{v})")));
        }
        edges.push((u, v));
    }
    if let Some((ln, line)) = lines.next() {
        return Err(err(ln, format!("unexpected trailing content {line:?}")));
    }
    WeightedGraph::new(weights, edges).map_err(|e| err(hline, e.to_string()))
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_fields<T: std::str::FromStr, const K: usize>(line: &str) -> Option<[T; K]> {
    let parts: Vec<T> = line
        .split_whitespace()
        .map(|s| s.parse().ok())
        .collect::<Option<_>>()?;
    parts.try_into().ok()
}

/// Writes to a sibling temp file, then renames over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp: PathBuf = path.with_file_name(format!(".{file_name}.tmp{}", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}
