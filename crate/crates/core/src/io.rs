//! Graph loaders.
//!
//! Two text formats are supported: MatrixMarket coordinate files (the format
//! SuiteSparse distributes) and plain whitespace-separated edge lists. Both
//! return the raw graph; run [`crate::graph::preprocess`] before detection.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

use crate::graph::{Graph, Merge, VertexId};

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> LoadError {
    LoadError::Parse {
        line,
        message: message.into(),
    }
}

/// On-disk graph format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    MatrixMarket,
    EdgeList,
}

impl GraphFormat {
    /// `.mtx` means MatrixMarket; anything else is read as an edge list.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => GraphFormat::MatrixMarket,
            _ => GraphFormat::EdgeList,
        }
    }
}

/// Reads a graph file, picking the format from the extension.
pub fn read_graph(path: &Path) -> Result<Graph, LoadError> {
    let reader = BufReader::new(File::open(path)?);
    match GraphFormat::from_path(path) {
        GraphFormat::MatrixMarket => load_matrix_market(reader),
        GraphFormat::EdgeList => load_edge_list(reader),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Field {
    Pattern,
    Real,
    Integer,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
}

/// Parses a MatrixMarket coordinate stream.
///
/// Accepts `pattern`, `real` and `integer` fields with `general` or
/// `symmetric` storage. Indices are 1-based in the file and shifted to 0-based.
/// Symmetric storage is expanded to both arc directions, pattern entries get
/// weight 1, and repeated entries have their weights summed. The vertex count
/// is the larger of the declared row and column counts.
pub fn load_matrix_market<R: BufRead>(reader: R) -> Result<Graph, LoadError> {
    let mut lines = reader.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_no, header) = match lines.next() {
        Some((no, line)) => (no, line?),
        None => return Err(parse_err(1, "empty input, expected a MatrixMarket header")),
    };
    let (field, symmetry) = parse_header(&header).map_err(|m| parse_err(header_no, m))?;

    let mut size: Option<(usize, usize, usize)> = None;
    let mut arcs: Vec<(VertexId, VertexId, f64)> = Vec::new();
    for (no, line) in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some((rows, cols, _)) = size else {
            if tokens.len() != 3 {
                return Err(parse_err(no, "size line must be `rows cols entries`"));
            }
            let parsed: Vec<usize> = tokens
                .iter()
                .map(|t| t.parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| parse_err(no, format!("malformed size line `{line}`")))?;
            if parsed[0].max(parsed[1]) > VertexId::MAX as usize {
                return Err(parse_err(no, "matrix dimension exceeds 32-bit vertex ids"));
            }
            size = Some((parsed[0], parsed[1], parsed[2]));
            arcs.reserve(
                parsed[2]
                    * if symmetry == Symmetry::Symmetric {
                        2
                    } else {
                        1
                    },
            );
            continue;
        };

        let expected = if field == Field::Pattern { 2 } else { 3 };
        if tokens.len() < expected {
            return Err(parse_err(
                no,
                format!("expected {expected} fields, found {}", tokens.len()),
            ));
        }
        let row = parse_index(tokens[0], rows, no)?;
        let col = parse_index(tokens[1], cols, no)?;
        let weight = match field {
            Field::Pattern => 1.0,
            Field::Real | Field::Integer => parse_weight(tokens[2], no)?,
        };
        arcs.push((row, col, weight));
        if symmetry == Symmetry::Symmetric && row != col {
            arcs.push((col, row, weight));
        }
    }

    let Some((rows, cols, _)) = size else {
        return Err(parse_err(header_no, "missing size line"));
    };
    Ok(Graph::from_arcs(rows.max(cols), arcs, Merge::Sum))
}

fn parse_header(header: &str) -> Result<(Field, Symmetry), String> {
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(str::to_ascii_lowercase)
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" {
        return Err(format!("malformed MatrixMarket header `{header}`"));
    }
    if tokens[1] != "matrix" || tokens[2] != "coordinate" {
        return Err(format!(
            "only `matrix coordinate` is supported, found `{header}`"
        ));
    }
    let field = match tokens[3].as_str() {
        "pattern" => Field::Pattern,
        "real" => Field::Real,
        "integer" => Field::Integer,
        other => return Err(format!("unsupported field `{other}`")),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(format!("unsupported symmetry `{other}`")),
    };
    Ok((field, symmetry))
}

fn parse_index(token: &str, bound: usize, line: usize) -> Result<VertexId, LoadError> {
    let index: usize = token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed index `{token}`")))?;
    if index == 0 || index > bound {
        return Err(parse_err(
            line,
            format!("index {index} outside 1..={bound}"),
        ));
    }
    Ok((index - 1) as VertexId)
}

fn parse_weight(token: &str, line: usize) -> Result<f64, LoadError> {
    let weight: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed weight `{token}`")))?;
    if !(weight > 0.0 && weight.is_finite()) {
        return Err(parse_err(line, format!("weight {token} is not positive")));
    }
    Ok(weight)
}

/// Parses an edge list: one `u v [w]` arc per line with 0-based ids.
///
/// Blank lines and lines starting with `#` are skipped. A missing weight
/// defaults to 1; repeated arcs have their weights summed. The vertex count is
/// one more than the largest id seen.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph, LoadError> {
    let mut arcs: Vec<(VertexId, VertexId, f64)> = Vec::new();
    let mut vertex_count = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let no = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(parse_err(no, format!("expected `u v [w]`, found `{line}`")));
        }
        let u = parse_vertex(tokens[0], no)?;
        let v = parse_vertex(tokens[1], no)?;
        let w = match tokens.get(2) {
            Some(t) => parse_weight(t, no)?,
            None => 1.0,
        };
        vertex_count = vertex_count.max(u as usize + 1).max(v as usize + 1);
        arcs.push((u, v, w));
    }
    Ok(Graph::from_arcs(vertex_count, arcs, Merge::Sum))
}

fn parse_vertex(token: &str, line: usize) -> Result<VertexId, LoadError> {
    if token.starts_with('-') {
        return Err(parse_err(line, format!("negative vertex id `{token}`")));
    }
    let id: u64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("malformed vertex id `{token}`")))?;
    VertexId::try_from(id)
        .ok()
        .filter(|&id| id < VertexId::MAX)
        .ok_or_else(|| parse_err(line, format!("vertex id {id} exceeds 32-bit range")))
}
