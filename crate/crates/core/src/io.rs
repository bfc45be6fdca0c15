//! Graph formats (graph6, edge list, JSON), schema-tagged JSON documents
//! and DOT rendering.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::TreeDecomposition;
use crate::graph::Graph;

pub const GRAPH_SCHEMA: &str = "rankexp.graph/1";
pub const CERTIFICATE_SCHEMA: &str = "rankexp.certificate/1";
pub const RANK_DECOMPOSITION_SCHEMA: &str = "rankexp.rank-decomposition/1";
pub const TREE_DECOMPOSITION_SCHEMA: &str = "rankexp.tree-decomposition/1";
pub const EXPANSION_SCHEMA: &str = "rankexp.expansion/1";
pub const WITNESS_SCHEMA: &str = "rankexp.witness/1";
pub const CLASSIFICATION_SCHEMA: &str = "rankexp.classification/1";

/// Largest order graph6 can encode.
pub const GRAPH6_MAX_ORDER: usize = 258_047;

/// Malformed input; `line` is 1-based, `offset` is the 1-based byte
/// column within that line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, offset {offset}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub offset: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, offset: usize, msg: impl Into<String>) -> Self {
        ParseError {
            line,
            offset,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("expected schema {expected}, found {found}")]
    Schema { expected: String, found: String },
    #[error("cannot write {0}")]
    Unrepresentable(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Graph6,
    EdgeList,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edge-list" | "edgelist" | "edges" => Ok(Format::EdgeList),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format {s}; expected graph6, edge-list or json")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Graph6 => "graph6",
            Format::EdgeList => "edge-list",
            Format::Json => "json",
        })
    }
}

/// JSON if the text opens with `{`, graph6 if it is one token of graph6
/// characters (or carries the `>>graph6<<` header), edge list otherwise.
pub fn detect_format(text: &str) -> Format {
    let t = text.trim();
    if t.starts_with('{') {
        return Format::Json;
    }
    if t.starts_with(">>graph6<<") {
        return Format::Graph6;
    }
    let single = !t.is_empty() && !t.contains(char::is_whitespace);
    if single && t.bytes().all(|b| (63..=126).contains(&b)) {
        Format::Graph6
    } else {
        Format::EdgeList
    }
}

pub fn parse_graph(text: &str, format: Option<Format>) -> Result<Graph, IoError> {
    match format.unwrap_or_else(|| detect_format(text)) {
        Format::Graph6 => Ok(parse_graph6(text)?),
        Format::EdgeList => Ok(parse_edge_list(text)?),
        Format::Json => from_json(GRAPH_SCHEMA, text),
    }
}

pub fn emit_graph(g: &Graph, format: Format) -> Result<String, IoError> {
    match format {
        Format::Graph6 => emit_graph6(g).map(|s| s + "\n"),
        Format::EdgeList => emit_edge_list(g),
        Format::Json => Ok(to_json(GRAPH_SCHEMA, g)),
    }
}

/// Decodes one graph6 line; vertices are labelled `0..n`.
pub fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let line = text.trim();
    let (body, start) = match line.strip_prefix(">>graph6<<") {
        Some(rest) => (rest, 11),
        None => (line, 1),
    };
    let bytes = body.as_bytes();
    if let Some(i) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(ParseError::new(1, start + i, format!("byte {:#04x} is outside the graph6 range", bytes[i])));
    }
    let six = |b: u8| (b - 63) as usize;
    let (n, used) = match bytes {
        [] => return Err(ParseError::new(1, start, "empty graph6 string")),
        [126, 126, ..] => return Err(ParseError::new(1, start, "orders above 258047 are not supported")),
        [126, a, b, c, ..] => (six(*a) << 12 | six(*b) << 6 | six(*c), 4),
        [126, ..] => return Err(ParseError::new(1, start, "truncated order prefix")),
        [a, ..] => (six(*a), 1),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let want = pairs.div_ceil(6);
    let data = &bytes[used..];
    if data.len() != want {
        return Err(ParseError::new(
            1,
            start + used + data.len().min(want),
            format!("expected {want} data bytes for {n} vertices, found {}", data.len()),
        ));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if six(data[k / 6]) >> (5 - k % 6) & 1 == 1 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if k % 6 != 0 && six(data[k / 6]) & ((1 << (6 - k % 6)) - 1) != 0 {
        return Err(ParseError::new(1, start + used + k / 6, "nonzero padding bits"));
    }
    Ok(Graph::from_indexed(n, &edges))
}

/// Encodes `g` in its vertex order.
pub fn emit_graph6(g: &Graph) -> Result<String, IoError> {
    let n = g.n();
    if n > GRAPH6_MAX_ORDER {
        return Err(IoError::Unrepresentable(format!("graph6 for {n} vertices")));
    }
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.extend([126, (n >> 12) as u8 + 63, (n >> 6 & 63) as u8 + 63, (n & 63) as u8 + 63]);
    }
    let mut acc = 0u8;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.adjacent(i, j));
            k += 1;
            if k % 6 == 0 {
                out.push(acc + 63);
                acc = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push((acc << (6 - k % 6)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Reads whitespace-separated `u v` lines. `#` starts a comment, a line
/// with a single token declares a vertex, and `n=<k>` (also inside a
/// comment) declares vertices `0..k`.
pub fn parse_edge_list(text: &str) -> Result<Graph, ParseError> {
    let mut g = Graph::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let (content, comment) = match raw.find('#') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        let column = |token: &str| token.as_ptr() as usize - raw.as_ptr() as usize + 1;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if let Some(k) = comment.and_then(directive) {
            if tokens.is_empty() {
                declare_order(&mut g, k, line_no, column(k))?;
                continue;
            }
        }
        match tokens[..] {
            [] => {}
            [t] => match directive(t) {
                Some(k) => declare_order(&mut g, k, line_no, column(t))?,
                None => {
                    g.ensure_vertex(t);
                }
            },
            [u, v] => {
                g.ensure_vertex(u);
                g.ensure_vertex(v);
                g.add_edge(u, v)
                    .map_err(|e| ParseError::new(line_no, column(u), e.to_string()))?;
            }
            [_, _, extra, ..] => {
                return Err(ParseError::new(line_no, column(extra), "expected at most two tokens"));
            }
        }
    }
    Ok(g)
}

fn directive(s: &str) -> Option<&str> {
    s.trim().strip_prefix("n=").map(str::trim)
}

fn declare_order(g: &mut Graph, k: &str, line: usize, offset: usize) -> Result<(), ParseError> {
    let n: usize = k
        .parse()
        .map_err(|_| ParseError::new(line, offset, format!("invalid vertex count {k:?}")))?;
    for v in 0..n {
        g.ensure_vertex(&v.to_string());
    }
    Ok(())
}

/// Vertex lines in vertex order, then edges.
pub fn emit_edge_list(g: &Graph) -> Result<String, IoError> {
    let mut out = String::new();
    for v in g.labels() {
        if v.is_empty() || v.contains(char::is_whitespace) || v.contains('#') || v.starts_with("n=") {
            return Err(IoError::Unrepresentable(format!("vertex {v:?} in an edge list")));
        }
        writeln!(out, "{v}").unwrap();
    }
    for (u, v) in g.edge_labels() {
        writeln!(out, "{u} {v}").unwrap();
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct Document<T> {
    schema: String,
    #[serde(flatten)]
    body: T,
}

#[derive(Deserialize)]
struct SchemaOnly {
    schema: Option<String>,
}

/// Pretty JSON with a leading `schema` field and a trailing newline.
pub fn to_json<T: Serialize>(schema: &str, value: &T) -> String {
    let doc = Document {
        schema: schema.to_string(),
        body: value,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("documents serialize");
    s.push('\n');
    s
}

fn json_error(e: serde_json::Error) -> ParseError {
    ParseError::new(e.line(), e.column(), e.to_string())
}

/// The `schema` field of a JSON document, if present.
pub fn schema_of(text: &str) -> Result<Option<String>, ParseError> {
    serde_json::from_str::<SchemaOnly>(text)
        .map(|d| d.schema)
        .map_err(json_error)
}

pub fn from_json<T: DeserializeOwned>(schema: &str, text: &str) -> Result<T, IoError> {
    match schema_of(text)? {
        Some(s) if s == schema => {}
        found => {
            return Err(IoError::Schema {
                expected: schema.to_string(),
                found: found.unwrap_or_else(|| "none".to_string()),
            })
        }
    }
    let doc: Document<T> = serde_json::from_str(text).map_err(json_error)?;
    Ok(doc.body)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph {} {{\n", quote(name));
    for v in g.labels() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for (u, v) in g.edge_labels() {
        writeln!(out, "  {} -- {};", quote(u), quote(v)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// The host graph with one cluster per sector. Edges between sectors
/// (the matchings across inner tree edges) are coloured, and pivot-set
/// vertices are filled.
pub fn expansion_dot(host: &Graph, sectors: &BTreeMap<String, Vec<String>>, pivot_set: &[String]) -> String {
    let mut sector_of = BTreeMap::new();
    for (node, members) in sectors {
        for m in members {
            sector_of.insert(m.as_str(), node.as_str());
        }
    }
    let pivots: HashSet<&str> = pivot_set.iter().map(String::as_str).collect();
    let vertex = |v: &str| {
        if pivots.contains(v) {
            format!("{} [style=filled, fillcolor=lightgrey];", quote(v))
        } else {
            format!("{};", quote(v))
        }
    };
    let mut out = String::from("graph \"expansion\" {\n  node [shape=box, fontsize=10];\n");
    for (i, (node, members)) in sectors.iter().enumerate() {
        writeln!(out, "  subgraph \"cluster_{i}\" {{").unwrap();
        writeln!(out, "    label={};", quote(node)).unwrap();
        for m in members {
            writeln!(out, "    {}", vertex(m)).unwrap();
        }
        out.push_str("  }\n");
    }
    for v in host.labels().iter().filter(|v| !sector_of.contains_key(v.as_str())) {
        writeln!(out, "  {}", vertex(v)).unwrap();
    }
    for (u, v) in host.edge_labels() {
        let cross = match (sector_of.get(u), sector_of.get(v)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        };
        let style = if cross { " [color=red, penwidth=2]" } else { "" };
        writeln!(out, "  {} -- {}{style};", quote(u), quote(v)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// Tree nodes labelled with their bags.
pub fn tree_decomposition_dot(td: &TreeDecomposition) -> String {
    let mut out = String::from("graph \"decomposition\" {\n  node [shape=box, fontsize=10];\n");
    for t in td.tree.labels() {
        let bag = td.bags.get(t).map(|b| b.join(" ")).unwrap_or_default();
        writeln!(out, "  {} [label={}];", quote(t), quote(&format!("{t}\n{{{bag}}}"))).unwrap();
    }
    for (u, v) in td.tree.edge_labels() {
        writeln!(out, "  {} -- {};", quote(u), quote(v)).unwrap();
    }
    out.push_str("}\n");
    out
}
