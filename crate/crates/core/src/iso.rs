//! Isomorphism testing, canonical forms and enumeration of small graphs up
//! to isomorphism.
//!
//! Both the canonical form and the isomorphism test are
//! individualization-refinement searches over colour-refined partitions.

use std::collections::{BTreeMap, HashSet};

use crate::graph::Graph;

/// Adjacency of a graph in canonical vertex order; equal forms mean
/// isomorphic graphs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    bits: Vec<u64>,
}

impl CanonicalForm {
    pub fn order(&self) -> usize {
        self.n
    }
}

fn rerank<K: Ord + Clone>(keys: &[K]) -> (Vec<u32>, usize) {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    let colors = keys
        .iter()
        .map(|k| sorted.binary_search(k).unwrap() as u32)
        .collect();
    (colors, sorted.len())
}

/// Colour refinement to the coarsest equitable partition finer than
/// `colors`; colours stay dense ranks ordered by signature.
fn refine(g: &Graph, colors: &mut Vec<u32>) {
    let (mut cur, mut count) = rerank(colors);
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).map(|w| cur[w]).collect();
                nb.sort_unstable();
                (cur[v], nb)
            })
            .collect();
        let (next, next_count) = rerank(&sigs);
        cur = next;
        if next_count == count {
            break;
        }
        count = next_count;
    }
    *colors = cur;
}

fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let c = colors[v];
    colors
        .iter()
        .enumerate()
        .map(|(w, &cw)| 2 * cw + u32::from(cw == c && w != v))
        .collect()
}

fn first_nontrivial_cell(colors: &[u32]) -> Option<u32> {
    let mut sizes: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in colors {
        *sizes.entry(c).or_default() += 1;
    }
    sizes.into_iter().find(|&(_, s)| s > 1).map(|(c, _)| c)
}

fn twins(g: &Graph, x: usize, y: usize) -> bool {
    let bits = g.adjacency_bits();
    (0..g.n()).all(|z| z == x || z == y || bits.get(x, z) == bits.get(y, z))
}

fn key_for_order(g: &Graph, order: &[usize]) -> Vec<u64> {
    let n = order.len();
    let total = n * n.saturating_sub(1) / 2;
    let mut bits = vec![0u64; total.div_ceil(64)];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if g.adjacent(order[i], order[j]) {
                bits[k / 64] |= 1 << (k % 64);
            }
            k += 1;
        }
    }
    bits
}

fn canon_search(g: &Graph, mut colors: Vec<u32>, best: &mut Option<(Vec<u64>, Vec<usize>)>) {
    refine(g, &mut colors);
    let Some(cell) = first_nontrivial_cell(&colors) else {
        let mut order = vec![0; g.n()];
        for (v, &c) in colors.iter().enumerate() {
            order[c as usize] = v;
        }
        let key = key_for_order(g, &order);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            *best = Some((key, order));
        }
        return;
    };
    let members: Vec<usize> = (0..g.n()).filter(|&v| colors[v] == cell).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &members {
        if tried.iter().any(|&t| twins(g, t, v)) {
            continue;
        }
        tried.push(v);
        canon_search(g, individualize(&colors, v), best);
    }
}

/// Vertex indices of `g` listed in canonical order.
pub fn canonical_order(g: &Graph) -> Vec<usize> {
    if g.n() == 0 {
        return Vec::new();
    }
    let mut best = None;
    canon_search(g, vec![0; g.n()], &mut best);
    best.expect("search reaches a leaf").1
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let order = canonical_order(g);
    CanonicalForm {
        n: g.n(),
        bits: key_for_order(g, &order),
    }
}

/// An adjacency-preserving bijection `V(g1) → V(g2)` as label pairs in the
/// vertex order of `g1`, if one exists.
pub fn are_isomorphic(g1: &Graph, g2: &Graph) -> Option<Vec<(String, String)>> {
    if g1.n() != g2.n() || g1.edge_count() != g2.edge_count() {
        return None;
    }
    let n = g1.n();
    let mut edges = g1.edges();
    edges.extend(g2.edges().into_iter().map(|(u, v)| (u + n, v + n)));
    let joint = Graph::from_indexed(2 * n, &edges);
    let map = iso_search(&joint, n, vec![0; 2 * n])?;
    Some(
        (0..n)
            .map(|v| (g1.label(v).to_string(), g2.label(map[v] - n).to_string()))
            .collect(),
    )
}

fn balanced(colors: &[u32], n: usize) -> bool {
    let mut a = colors[..n].to_vec();
    let mut b = colors[n..].to_vec();
    a.sort_unstable();
    b.sort_unstable();
    a == b
}

fn iso_search(joint: &Graph, n: usize, mut colors: Vec<u32>) -> Option<Vec<usize>> {
    refine(joint, &mut colors);
    if !balanced(&colors, n) {
        return None;
    }
    let Some(cell) = first_nontrivial_cell(&colors[..n]) else {
        let mut image = vec![usize::MAX; 2 * n];
        for w in n..2 * n {
            image[colors[w] as usize] = w;
        }
        let map: Vec<usize> = (0..n).map(|v| image[colors[v] as usize]).collect();
        let ok = (0..n).all(|u| {
            (u + 1..n).all(|v| joint.adjacent(u, v) == joint.adjacent(map[u], map[v]))
        });
        return ok.then_some(map);
    };
    let v = (0..n).find(|&v| colors[v] == cell).unwrap();
    for w in (n..2 * n).filter(|&w| colors[w] == cell) {
        // one new colour for the pair (v, w)
        let c = colors[v];
        let next: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(x, &cx)| 2 * cx + u32::from(cx == c && x != v && x != w))
            .collect();
        if let Some(map) = iso_search(joint, n, next) {
            return Some(map);
        }
    }
    None
}

/// One representative per isomorphism class of graphs on `n` vertices,
/// labelled `0..n`, in a fixed generation order.
pub fn graphs_of_order(n: usize) -> Vec<Graph> {
    let mut layer = vec![Graph::new()];
    for k in 0..n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &layer {
            for mask in 0u64..1 << k {
                let mut edges = g.edges();
                edges.extend((0..k).filter(|i| mask >> i & 1 == 1).map(|i| (i, k)));
                let h = Graph::from_indexed(k + 1, &edges);
                if seen.insert(canonical_form(&h)) {
                    next.push(h);
                }
            }
        }
        layer = next;
    }
    layer
}

pub fn connected_graphs_of_order(n: usize) -> Vec<Graph> {
    graphs_of_order(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}
