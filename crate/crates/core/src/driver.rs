//! End-to-end construction for arbitrary graphs: components are expanded
//! separately and combined, and the result is packaged as a
//! self-contained certificate.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{
    brute_force_linear_rank_width, brute_force_rank_width, DecompositionError, RankDecomposition,
    TreeDecomposition, DEFAULT_WIDTH_LIMIT,
};
use crate::expansion::{
    check_pivot_minor, expand, expansion_path_decomposition, expansion_tree_decomposition,
    ExpansionError,
};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DriverError {
    #[error("graph has {0} vertices; at least 3 are required")]
    TooSmall(usize),
    #[error("width {width} exceeds the requested bound {k}")]
    WidthExceeded { width: usize, k: usize },
    #[error("a supplied decomposition requires a connected graph")]
    SuppliedForDisconnected,
    #[error("linear mode requires a linear decomposition")]
    NotLinear,
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl From<crate::decomposition::InvalidDecomposition> for DriverError {
    fn from(e: crate::decomposition::InvalidDecomposition) -> Self {
        DriverError::Decomposition(e.into())
    }
}

#[derive(Debug, Clone)]
pub struct DriverOptions {
    /// Width bound; defaults to the width actually achieved.
    pub k: Option<usize>,
    /// Build a path-decomposition from linear rank-decompositions.
    pub linear: bool,
    /// Decomposition to expand (connected graphs only); searched for when
    /// absent.
    pub decomposition: Option<RankDecomposition>,
    pub root_leaf: Option<String>,
    /// Vertex limit for exhaustive width search.
    pub width_limit: usize,
}

impl Default for DriverOptions {
    fn default() -> Self {
        DriverOptions {
            k: None,
            linear: false,
            decomposition: None,
            root_leaf: None,
            width_limit: DEFAULT_WIDTH_LIMIT,
        }
    }
}

/// Everything needed to re-check that `graph` is a pivot-minor of `host`
/// and that `host` has small tree-width.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub graph: Graph,
    pub host: Graph,
    pub pivot_set: Vec<String>,
    /// Graph vertex → host vertex.
    pub embed: BTreeMap<String, String>,
    pub decomposition: TreeDecomposition,
    pub k: usize,
    pub linear: bool,
    /// Sector of each inner tree node, for rendering only.
    #[serde(default)]
    pub sectors: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateReport {
    pub issues: Vec<String>,
    pub width: usize,
    pub width_bound: usize,
    pub size: usize,
    pub size_bound: usize,
    /// Whether the width of `graph` was recomputed and found `≤ k`.
    pub k_checked: bool,
}

impl CertificateReport {
    pub fn holds(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Tree-width bound for rank-width `k` (path-width when `linear`).
pub fn width_bound(k: usize, linear: bool) -> usize {
    match (k, linear) {
        (0, _) => 0,
        (_, true) => k + 1,
        (_, false) => 2 * k,
    }
}

/// Size bound `(2k + 1) n − 6k`.
pub fn size_bound(k: usize, n: usize) -> usize {
    ((2 * k + 1) * n).saturating_sub(6 * k)
}

impl Certificate {
    /// Re-checks every claim; the width of `graph` itself is recomputed
    /// when no component has more than `width_limit` vertices.
    pub fn verify(&self, width_limit: usize) -> CertificateReport {
        let mut issues = Vec::new();
        match check_pivot_minor(&self.graph, &self.host, &self.pivot_set, &self.embed) {
            Ok(c) if c.holds => {}
            Ok(c) => issues.extend(
                c.mismatches
                    .iter()
                    .map(|(a, b)| format!("pivot-minor mismatch at {a} {b}")),
            ),
            Err(e) => issues.push(format!("pivot-minor check failed: {e}")),
        }
        if let Err(e) = self.decomposition.validate(&self.host) {
            issues.extend(e.0);
        }
        if self.linear && !self.decomposition.path {
            issues.push("linear certificate carries a tree-decomposition".to_string());
        }
        let width = self.decomposition.width();
        let width_bound = width_bound(self.k, self.linear);
        if width > width_bound {
            issues.push(format!("decomposition width {width} exceeds {width_bound}"));
        }
        let n = self.graph.n();
        let size_bound = size_bound(self.k, n);
        if self.host.n() > size_bound {
            issues.push(format!("host has {} vertices, above {size_bound}", self.host.n()));
        }
        let mut k_checked = false;
        let largest = self.graph.components().iter().map(Vec::len).max().unwrap_or(0);
        if largest <= width_limit {
            match component_width(&self.graph, self.linear, width_limit) {
                Ok(w) => {
                    k_checked = true;
                    if w > self.k {
                        issues.push(format!("graph has width {w}, above the claimed {}", self.k));
                    }
                }
                Err(e) => issues.push(format!("width recomputation failed: {e}")),
            }
        }
        CertificateReport {
            issues,
            width,
            width_bound,
            size: self.host.n(),
            size_bound,
            k_checked,
        }
    }

    fn trivial(g: &Graph, k: usize, linear: bool) -> Option<Certificate> {
        Some(Certificate {
            graph: g.clone(),
            host: g.clone(),
            pivot_set: Vec::new(),
            embed: g.labels().iter().map(|v| (v.clone(), v.clone())).collect(),
            decomposition: TreeDecomposition::of_forest(g, linear)?,
            k,
            linear,
            sectors: BTreeMap::new(),
        })
    }

    fn union(self, other: Certificate) -> Result<Certificate, GraphError> {
        let prefix = |m: BTreeMap<String, Vec<String>>, p: &str| -> BTreeMap<String, Vec<String>> {
            m.into_iter().map(|(k, v)| (format!("{p}{k}"), v)).collect()
        };
        let mut embed = self.embed;
        embed.extend(other.embed);
        let mut pivot_set = self.pivot_set;
        pivot_set.extend(other.pivot_set);
        let mut sectors = prefix(self.sectors, "0/");
        sectors.extend(prefix(other.sectors, "1/"));
        Ok(Certificate {
            graph: self.graph.disjoint_union(&other.graph)?,
            host: self.host.disjoint_union(&other.host)?,
            pivot_set,
            embed,
            decomposition: self
                .decomposition
                .prefixed("0/")
                .join(&other.decomposition.prefixed("1/"))?,
            k: self.k.max(other.k),
            linear: self.linear,
            sectors,
        })
    }
}

/// Largest width over the components of `g`.
fn component_width(g: &Graph, linear: bool, limit: usize) -> Result<usize, DecompositionError> {
    let mut best = 0;
    for comp in g.components() {
        let part = g.induced_at(&comp);
        let w = if linear {
            brute_force_linear_rank_width(&part, limit)?.width
        } else {
            brute_force_rank_width(&part, limit)?.width
        };
        best = best.max(w);
    }
    Ok(best)
}

fn optimal_decomposition(g: &Graph, linear: bool, limit: usize) -> Result<RankDecomposition, DriverError> {
    let r = if linear {
        brute_force_linear_rank_width(g, limit)?
    } else {
        brute_force_rank_width(g, limit)?
    };
    Ok(r.decomposition.expect("connected graph with at least three vertices"))
}

/// Builds a host graph containing `g` as a pivot-minor with tree-width at
/// most `2k` (path-width at most `k + 1` in linear mode) and at most
/// `(2k + 1) n − 6k` vertices.
pub fn theorem_driver(g: &Graph, opts: &DriverOptions) -> Result<Certificate, DriverError> {
    if g.n() < 3 {
        return Err(DriverError::TooSmall(g.n()));
    }
    if opts.decomposition.is_some() && !g.is_connected() {
        return Err(DriverError::SuppliedForDisconnected);
    }
    let achieved = match &opts.decomposition {
        Some(d) => {
            if opts.linear && !(d.linear && d.tree.is_caterpillar()) {
                return Err(DriverError::NotLinear);
            }
            d.width(g)?
        }
        None => component_width(g, opts.linear, opts.width_limit)?,
    };
    let k = opts.k.unwrap_or(achieved);
    if achieved > k {
        return Err(DriverError::WidthExceeded { width: achieved, k });
    }
    let mut cert = drive(g, k, opts, opts.decomposition.as_ref(), opts.root_leaf.as_deref())?;
    // parts are reassembled in component order; keep the caller's order
    cert.graph = g.clone();
    Ok(cert)
}

fn drive(
    g: &Graph,
    k: usize,
    opts: &DriverOptions,
    supplied: Option<&RankDecomposition>,
    root: Option<&str>,
) -> Result<Certificate, DriverError> {
    let linear = opts.linear;
    if g.edge_count() == 0 {
        return Ok(Certificate::trivial(g, k, linear).expect("edgeless graphs are forests"));
    }
    if g.is_connected() {
        let d = match supplied {
            Some(d) => d.clone(),
            None => optimal_decomposition(g, linear, opts.width_limit)?,
        };
        let width = d.width(g)?;
        if width > k {
            return Err(DriverError::WidthExceeded { width, k });
        }
        let x = expand(g, &d, root)?;
        let decomposition = if linear {
            expansion_path_decomposition(&x)?
        } else {
            expansion_tree_decomposition(&x)
        };
        return Ok(Certificate {
            graph: g.clone(),
            host: x.host.clone(),
            pivot_set: x.inner_block.clone(),
            embed: x.embed.clone(),
            decomposition,
            k,
            linear,
            sectors: x.sectors.clone(),
        });
    }
    let comps = g.components();
    let largest = comps
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.len(), std::cmp::Reverse(*i)))
        .map(|(i, _)| i)
        .unwrap();
    let y = &comps[largest];
    if y.len() == 2 {
        return Ok(Certificate::trivial(g, k, linear).expect("components have at most two vertices"));
    }
    let first = drive(&g.induced_at(y), k, opts, None, None)?;
    let rest_idx: Vec<usize> = (0..g.n()).filter(|v| y.binary_search(v).is_err()).collect();
    let rest = g.induced_at(&rest_idx);
    let second = match Certificate::trivial(&rest, k, linear) {
        Some(c) => c,
        None => drive(&rest, k, opts, None, None)?,
    };
    Ok(first.union(second)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verify(c: &Certificate) {
        let report = c.verify(8);
        assert!(report.holds(), "{:?}", report.issues);
        assert!(report.k_checked);
    }

    #[test]
    fn edgeless_graph_with_k_zero_is_returned_unchanged() {
        let g = Graph::from_indexed(3, &[]);
        let c = theorem_driver(&g, &DriverOptions { k: Some(0), ..Default::default() }).unwrap();
        assert_eq!(c.host, g);
        assert!(c.pivot_set.is_empty());
        verify(&c);
    }

    #[test]
    fn triangle_plus_edge() {
        let g = Graph::from_edges(&[("a", "b"), ("b", "c"), ("a", "c"), ("x", "y")]).unwrap();
        let c = theorem_driver(&g, &DriverOptions { k: Some(1), ..Default::default() }).unwrap();
        verify(&c);
        let k3 = g.induced_subgraph(&["a", "b", "c"]).unwrap();
        let alone = theorem_driver(&k3, &DriverOptions::default()).unwrap();
        let expected = alone.host.disjoint_union(&g.induced_subgraph(&["x", "y"]).unwrap()).unwrap();
        assert_eq!(c.host, expected);
    }

    #[test]
    fn width_bound_is_enforced() {
        let c5 = Graph::from_indexed(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(
            theorem_driver(&c5, &DriverOptions { k: Some(1), ..Default::default() }).unwrap_err(),
            DriverError::WidthExceeded { width: 2, k: 1 }
        );
        assert_eq!(
            theorem_driver(&Graph::from_indexed(2, &[(0, 1)]), &DriverOptions::default()).unwrap_err(),
            DriverError::TooSmall(2)
        );
    }

    #[test]
    fn disconnected_recursion_in_both_modes() {
        // two components needing expansion plus an isolated vertex
        let g = Graph::from_indexed(
            11,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (6, 7), (7, 8), (8, 5), (5, 7)],
        );
        for linear in [false, true] {
            let c = theorem_driver(&g, &DriverOptions { linear, ..Default::default() }).unwrap();
            verify(&c);
            assert_eq!(c.decomposition.path, linear);
        }
    }

    #[test]
    fn tampering_is_detected() {
        let c4 = Graph::from_indexed(5, &[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]);
        let c = theorem_driver(&c4, &DriverOptions::default()).unwrap();
        verify(&c);
        let mut bad = c.clone();
        let (u, v) = {
            let e = bad.host.edge_labels()[0];
            (e.0.to_string(), e.1.to_string())
        };
        bad.host.remove_edge(&u, &v).unwrap();
        assert!(!bad.verify(8).holds());
        let mut lying = c.clone();
        lying.k = 0;
        assert!(!lying.verify(8).holds());
    }
}
