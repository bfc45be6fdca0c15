//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Every export takes the graph as text (graph6, edge list or JSON) and
//! returns a JSON string; errors surface as JS exceptions carrying the
//! message. The plain `*_json` functions hold the logic so they can be
//! tested natively.

use std::collections::BTreeMap;

use rankexp::characterize::{classify, Limits};
use rankexp::decomposition::DEFAULT_WIDTH_LIMIT;
use rankexp::driver::{theorem_driver, DriverOptions};
use rankexp::io::{self, Format};
use rankexp::Graph;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Serialize)]
struct Drawing {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

impl Drawing {
    fn of(g: &Graph) -> Drawing {
        Drawing {
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(a, b)| (g.label(a).to_string(), g.label(b).to_string()))
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct Transformed {
    graph: Drawing,
    edge_list: String,
}

#[derive(Serialize)]
struct ClassifySummary {
    rank_width: usize,
    linear_rank_width: usize,
    distance_hereditary: bool,
    obstructions: Vec<String>,
    tree_witness_size: Option<usize>,
    path_witness_size: Option<usize>,
}

#[derive(Serialize)]
struct ExpandSummary {
    k: usize,
    linear: bool,
    host: Drawing,
    pivot_set: Vec<String>,
    embed: BTreeMap<String, String>,
    sectors: BTreeMap<String, Vec<String>>,
    width: usize,
    width_bound: usize,
    size_bound: usize,
    issues: Vec<String>,
}

fn parse(text: &str) -> Result<Graph, String> {
    io::parse_graph(text, None).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn transformed(g: &Graph) -> Result<String, String> {
    let edge_list = io::emit_graph(g, Format::EdgeList).map_err(|e| e.to_string())?;
    Ok(to_json(&Transformed {
        graph: Drawing::of(g),
        edge_list,
    }))
}

pub fn graph_json(text: &str) -> Result<String, String> {
    transformed(&parse(text)?)
}

pub fn local_complement_json(text: &str, v: &str) -> Result<String, String> {
    let g = parse(text)?.local_complement(v).map_err(|e| e.to_string())?;
    transformed(&g)
}

pub fn pivot_json(text: &str, u: &str, v: &str) -> Result<String, String> {
    let g = parse(text)?.pivot_edge(u, v).map_err(|e| e.to_string())?;
    transformed(&g)
}

pub fn classify_json(text: &str) -> Result<String, String> {
    let g = parse(text)?;
    let c = classify(&g, Limits::default()).map_err(|e| e.to_string())?;
    Ok(to_json(&ClassifySummary {
        rank_width: c.rank_width,
        linear_rank_width: c.linear_rank_width,
        distance_hereditary: c.distance_hereditary,
        obstructions: c.obstructions,
        tree_witness_size: c.tree_witness.map(|w| w.host.n()),
        path_witness_size: c.path_witness.map(|w| w.host.n()),
    }))
}

pub fn expand_json(text: &str, linear: bool) -> Result<String, String> {
    let g = parse(text)?;
    let opts = DriverOptions {
        linear,
        ..DriverOptions::default()
    };
    let cert = theorem_driver(&g, &opts).map_err(|e| e.to_string())?;
    let report = cert.verify(DEFAULT_WIDTH_LIMIT);
    Ok(to_json(&ExpandSummary {
        k: cert.k,
        linear,
        host: Drawing::of(&cert.host),
        pivot_set: cert.pivot_set,
        embed: cert.embed,
        sectors: cert.sectors,
        width: report.width,
        width_bound: report.width_bound,
        size_bound: report.size_bound,
        issues: report.issues,
    }))
}

fn js<T>(r: Result<T, String>) -> Result<T, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

/// Normalized drawing and edge list of the input.
#[wasm_bindgen]
pub fn graph(text: &str) -> Result<String, JsValue> {
    js(graph_json(text))
}

#[wasm_bindgen]
pub fn local_complement(text: &str, v: &str) -> Result<String, JsValue> {
    js(local_complement_json(text, v))
}

/// Pivot on the edge `u v`.
#[wasm_bindgen]
pub fn pivot(text: &str, u: &str, v: &str) -> Result<String, JsValue> {
    js(pivot_json(text, u, v))
}

/// Exact widths, distance-hereditary test and obstructions.
#[wasm_bindgen]
pub fn characterize(text: &str) -> Result<String, JsValue> {
    js(classify_json(text))
}

/// Rank-expansion of the graph with its checked bounds.
#[wasm_bindgen]
pub fn expand(text: &str, linear: bool) -> Result<String, JsValue> {
    js(expand_json(text, linear))
}
