//! Graphs of rank-width and linear rank-width at most one: recognition,
//! obstruction search, and explicit witnesses that such graphs are
//! vertex-minors (or, when bipartite, pivot-minors) of trees and paths.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{
    brute_force_linear_rank_width, brute_force_rank_width, DecompositionError, DEFAULT_WIDTH_LIMIT,
};
use crate::expansion::{expand, verify_pivot_minor, ExpansionError, RankExpansion};
use crate::graph::{apply_script, Graph, GraphError, ScriptError, Step, TransformScript};
use crate::iso::{canonical_form, CanonicalForm};

/// Default vertex limit for minor search.
pub const DEFAULT_MINOR_LIMIT: usize = 9;
/// Default vertex limit for the distance-hereditary test.
pub const DEFAULT_DH_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharacterizeError {
    #[error("graph has {n} vertices, above the search limit of {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error("width {width} exceeds 1")]
    WidthExceeded { width: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not a caterpillar of maximum degree 3")]
    NotSubcubicCaterpillar,
    #[error("width-one expansion of a bipartite graph contains a triangle")]
    TriangleInExpansion,
    #[error("construction produced an invalid witness: {0}")]
    Internal(String),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Script(#[from] ScriptError),
}

fn guard(g: &Graph, limit: usize) -> Result<(), CharacterizeError> {
    if g.n() > limit {
        return Err(CharacterizeError::SizeGuard { n: g.n(), limit });
    }
    Ok(())
}

/// The 5-cycle.
pub fn c5() -> Graph {
    Graph::from_indexed(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
}

/// The net: a triangle with one pendant vertex at each corner.
pub fn net() -> Graph {
    Graph::from_indexed(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)])
}

/// A 4-cycle with pendant vertices at two opposite corners.
pub fn q_graph() -> Graph {
    Graph::from_indexed(6, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5)])
}

/// Obstructions for linear rank-width at most one, by name.
pub fn linear_obstructions() -> Vec<(&'static str, Graph)> {
    vec![("C5", c5()), ("N", net()), ("Q", q_graph())]
}

/// Every connected induced subgraph keeps the distances of `g`.
pub fn is_distance_hereditary(g: &Graph, limit: usize) -> Result<bool, CharacterizeError> {
    guard(g, limit)?;
    let n = g.n();
    let dist: Vec<Vec<Option<usize>>> = (0..n).map(|s| g.distances_from(s)).collect();
    let nb: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, w| m | 1 << w))
        .collect();
    for set in 1u32..1 << n {
        if set.count_ones() < 3 {
            continue;
        }
        for s in (0..n).filter(|&s| set >> s & 1 == 1) {
            // breadth-first search inside the subset
            let mut seen = 1u32 << s;
            let mut frontier = 1u32 << s;
            let mut depth = 0;
            let mut reached = vec![None; n];
            reached[s] = Some(0);
            while frontier != 0 {
                depth += 1;
                let mut next = 0u32;
                for v in (0..n).filter(|&v| frontier >> v & 1 == 1) {
                    next |= nb[v] & set & !seen;
                }
                for v in (0..n).filter(|&v| next >> v & 1 == 1) {
                    reached[v] = Some(depth);
                }
                seen |= next;
                frontier = next;
            }
            if seen != set {
                break;
            }
            if (0..n)
                .filter(|&v| set >> v & 1 == 1)
                .any(|v| reached[v] != dist[s][v])
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical forms of all graphs locally equivalent to `g`.
fn local_equivalence_class(g: &Graph) -> HashSet<CanonicalForm> {
    let mut seen = HashSet::from([canonical_form(g)]);
    let mut stack = vec![g.clone()];
    while let Some(h) = stack.pop() {
        for v in 0..h.n() {
            let mut next = h.clone();
            next.local_complement_at(v);
            if seen.insert(canonical_form(&next)) {
                stack.push(next);
            }
        }
    }
    seen
}

/// Graphs obtained by removing one vertex `v` after one of the three
/// operations that suffice to keep every vertex-minor avoiding `v`.
fn vertex_minor_children(g: &Graph) -> Vec<Graph> {
    let mut out = Vec::new();
    for v in 0..g.n() {
        let keep: Vec<usize> = (0..g.n()).filter(|&w| w != v).collect();
        out.push(g.induced_at(&keep));
        if let Some(w) = g.neighbors(v).next() {
            let mut lc = g.clone();
            lc.local_complement_at(v);
            out.push(lc.induced_at(&keep));
            let mut pv = g.clone();
            pv.pivot_edge_at(v, w);
            out.push(pv.induced_at(&keep));
        }
    }
    out
}

/// Whether some vertex-minor of `g` is isomorphic to `pattern`.
pub fn has_vertex_minor(g: &Graph, pattern: &Graph, limit: usize) -> Result<bool, CharacterizeError> {
    guard(g, limit)?;
    let target = pattern.n();
    if target > g.n() {
        return Ok(false);
    }
    let class = local_equivalence_class(pattern);
    let mut layer = vec![g.clone()];
    while let Some(first) = layer.first() {
        if first.n() == target {
            return Ok(layer.iter().any(|h| class.contains(&canonical_form(h))));
        }
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for h in &layer {
            for child in vertex_minor_children(h) {
                if seen.insert(canonical_form(&child)) {
                    next.push(child);
                }
            }
        }
        layer = next;
    }
    Ok(false)
}

/// Whether some pivot-minor of `g` is isomorphic to `pattern`.
pub fn has_pivot_minor(g: &Graph, pattern: &Graph, limit: usize) -> Result<bool, CharacterizeError> {
    guard(g, limit)?;
    let n = g.n();
    let p = pattern.n();
    if p > n {
        return Ok(false);
    }
    let want = canonical_form(pattern);
    let mut pivoted = HashSet::new();
    for mask in 0u32..1 << n {
        let x: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let Some(h) = g.pivot_set_at(&x) else {
            continue;
        };
        if !pivoted.insert(canonical_form(&h)) {
            continue;
        }
        for keep in 0u32..1 << n {
            if keep.count_ones() as usize != p {
                continue;
            }
            let kept: Vec<usize> = (0..n).filter(|i| keep >> i & 1 == 1).collect();
            let sub = h.induced_at(&kept);
            if sub.edge_count() == pattern.edge_count() && canonical_form(&sub) == want {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKind {
    Tree,
    Path,
}

/// A tree or path `host` and a script turning it into `graph`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub graph: Graph,
    pub host: Graph,
    pub kind: HostKind,
    pub script: TransformScript,
    /// Vertex of the replayed graph → vertex of `graph`.
    pub target_map: BTreeMap<String, String>,
}

impl Witness {
    fn identity(g: &Graph, kind: HostKind) -> Witness {
        Witness {
            graph: g.clone(),
            host: g.clone(),
            kind,
            script: TransformScript::default(),
            target_map: g.labels().iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn replay(&self) -> Result<Graph, ScriptError> {
        apply_script(&self.host, &self.script)
    }

    /// Host shape, replay, and that `target_map` is an isomorphism from
    /// the replayed graph onto `graph`.
    pub fn validate(&self) -> Result<(), String> {
        let shape_ok = match self.kind {
            HostKind::Tree => self.host.is_tree(),
            HostKind::Path => self.host.is_path(),
        };
        if !shape_ok {
            return Err(format!("host is not a {:?}", self.kind).to_lowercase());
        }
        let result = self.replay().map_err(|e| e.to_string())?;
        if result.n() != self.graph.n() || self.target_map.len() != result.n() {
            return Err(format!(
                "replay has {} vertices, target has {}",
                result.n(),
                self.graph.n()
            ));
        }
        let mut image = Vec::with_capacity(result.n());
        for v in result.labels() {
            let t = self
                .target_map
                .get(v)
                .ok_or_else(|| format!("replayed vertex {v} is not mapped"))?;
            image.push(
                self.graph
                    .index_of(t)
                    .ok_or_else(|| format!("{v} maps to unknown vertex {t}"))?,
            );
        }
        let distinct: HashSet<usize> = image.iter().copied().collect();
        if distinct.len() != image.len() {
            return Err("target map is not injective".to_string());
        }
        for a in 0..result.n() {
            for b in a + 1..result.n() {
                if result.adjacent(a, b) != self.graph.adjacent(image[a], image[b]) {
                    return Err(format!(
                        "adjacency of {} {} differs after replay",
                        result.label(a),
                        result.label(b)
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn uses_local_complementation(&self) -> bool {
        self.script.steps.iter().any(Step::is_local_complement)
    }

    fn checked(self) -> Result<Witness, CharacterizeError> {
        self.validate().map_err(CharacterizeError::Internal)?;
        Ok(self)
    }
}

fn require_connected(g: &Graph) -> Result<(), CharacterizeError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(CharacterizeError::Disconnected)
    }
}

fn width_one_expansion(g: &Graph, linear: bool, limit: usize) -> Result<RankExpansion, CharacterizeError> {
    let r = if linear {
        brute_force_linear_rank_width(g, limit)?
    } else {
        brute_force_rank_width(g, limit)?
    };
    if r.width > 1 {
        return Err(CharacterizeError::WidthExceeded { width: r.width });
    }
    let d = r.decomposition.expect("at least three vertices");
    let x = expand(g, &d, None)?;
    if !verify_pivot_minor(g, &x)?.holds {
        return Err(CharacterizeError::Internal("expansion lost the pivot-minor".into()));
    }
    Ok(x)
}

/// Pivots realizing the expansion's pivot set, then deletion of every
/// vertex outside the embedding.
fn reduction_script(x: &RankExpansion) -> Result<TransformScript, CharacterizeError> {
    let mut script = x.host.pivot_script(&x.inner_block)?;
    let image: HashSet<&String> = x.embed.values().collect();
    for v in x.host.labels() {
        if !image.contains(v) {
            script.push(Step::delete(v.clone()));
        }
    }
    Ok(script)
}

fn inverse_embed(x: &RankExpansion) -> BTreeMap<String, String> {
    x.embed.iter().map(|(a, h)| (h.clone(), a.clone())).collect()
}

/// Sectors of a width-one expansion that induce triangles.
fn triangle_sectors(x: &RankExpansion) -> Vec<(String, [usize; 3])> {
    x.sectors
        .iter()
        .filter_map(|(node, s)| {
            let idx: Vec<usize> = s.iter().map(|l| x.host.index_of(l).unwrap()).collect();
            let [a, b, c] = idx[..] else {
                return None;
            };
            (x.host.adjacent(a, b) && x.host.adjacent(b, c) && x.host.adjacent(a, c))
                .then(|| (node.clone(), [a, b, c]))
        })
        .collect()
}

/// `g` as a vertex-minor of a tree, for connected `g` of rank-width at
/// most one.
pub fn tree_witness_rw1(g: &Graph, limit: usize) -> Result<Witness, CharacterizeError> {
    require_connected(g)?;
    if g.n() <= 2 {
        return Witness::identity(g, HostKind::Tree).checked();
    }
    let x = width_one_expansion(g, false, limit)?;
    let mut host = x.host.clone();
    let mut script = TransformScript::default();
    for (node, [a, b, c]) in triangle_sectors(&x) {
        let d = format!("d:{node}");
        let di = host.add_vertex(d.clone())?;
        for (p, q) in [(a, b), (b, c), (a, c)] {
            host.toggle(p, q);
        }
        for p in [a, b, c] {
            host.connect(di, p);
        }
        script.push(Step::lc(d.clone()));
        script.push(Step::delete(d));
    }
    script.extend(reduction_script(&x)?);
    Witness {
        graph: g.clone(),
        host,
        kind: HostKind::Tree,
        script,
        target_map: inverse_embed(&x),
    }
    .checked()
}

/// A maximum-length path of a tree, ties broken by the endpoint labels.
fn longest_path(h: &Graph) -> Vec<usize> {
    let mut best: Option<(usize, (String, String), usize, usize)> = None;
    for s in 0..h.n() {
        for (t, d) in h.distances_from(s).into_iter().enumerate() {
            let Some(d) = d else { continue };
            let (ls, lt) = (h.label(s).to_string(), h.label(t).to_string());
            if ls > lt {
                continue;
            }
            let better = match &best {
                None => true,
                Some((bd, bl, _, _)) => d > *bd || (d == *bd && (ls.clone(), lt.clone()) < *bl),
            };
            if better {
                best = Some((d, (ls, lt), s, t));
            }
        }
    }
    let (_, _, s, t) = best.expect("non-empty tree");
    h.tree_path(s, t).unwrap()
}

/// `h` as a pivot-minor of a path, for a caterpillar of maximum degree 3:
/// every spine edge `p q` is subdivided twice as `p a b q`, pivoting `a b`
/// then turns `b` into a pendant vertex of `p`.
pub fn caterpillar_to_path(h: &Graph) -> Result<Witness, CharacterizeError> {
    if !h.is_caterpillar() || (0..h.n()).any(|v| h.degree(v) > 3) {
        return Err(CharacterizeError::NotSubcubicCaterpillar);
    }
    if h.n() <= 2 {
        return Witness::identity(h, HostKind::Path).checked();
    }
    let spine = longest_path(h);
    let on_spine: HashSet<usize> = spine.iter().copied().collect();
    let mut host = Graph::new();
    let mut script = TransformScript::default();
    let mut drop = Vec::new();
    for (i, &p) in spine.iter().enumerate() {
        host.add_vertex(h.label(p))?;
        if i + 1 == spine.len() {
            break;
        }
        let a = format!("a:{}", h.label(p));
        let pendant = h.neighbors(p).find(|w| !on_spine.contains(w));
        let b = match pendant {
            Some(w) => h.label(w).to_string(),
            None => {
                let b = format!("b:{}", h.label(p));
                drop.push(b.clone());
                b
            }
        };
        host.add_vertex(a.clone())?;
        host.add_vertex(b.clone())?;
        host.add_edge(h.label(p), &a)?;
        host.add_edge(&a, &b)?;
        script.push(Step::pivot(a.clone(), b));
        drop.insert(0, a);
    }
    for w in spine.windows(2) {
        let b = host.label(host.index_of(h.label(w[0])).unwrap() + 2).to_string();
        host.add_edge(&b, h.label(w[1]))?;
    }
    drop.sort_by_key(|v| !v.starts_with("a:"));
    for v in drop {
        script.push(Step::delete(v));
    }
    Witness {
        graph: h.clone(),
        host,
        kind: HostKind::Path,
        script,
        target_map: h.labels().iter().map(|v| (v.clone(), v.clone())).collect(),
    }
    .checked()
}

/// `g` as a vertex-minor of a path, for connected `g` of linear
/// rank-width at most one.
pub fn path_witness_lrw1(g: &Graph, limit: usize) -> Result<Witness, CharacterizeError> {
    require_connected(g)?;
    if g.n() <= 2 || g.is_path() {
        return Witness::identity(g, HostKind::Path).checked();
    }
    let x = width_one_expansion(g, true, limit)?;
    let mut tree = x.host.clone();
    let mut restore = TransformScript::default();
    for (_, corners) in triangle_sectors(&x) {
        let Some(pos) = corners.iter().position(|&c| x.host.degree(c) == 2) else {
            return Err(CharacterizeError::Internal(
                "triangle sector without a degree-2 vertex".into(),
            ));
        };
        let others: Vec<usize> = (0..3).filter(|&i| i != pos).map(|i| corners[i]).collect();
        tree.toggle(others[0], others[1]);
        restore.push(Step::lc(x.host.label(corners[pos]).to_string()));
    }
    let path = caterpillar_to_path(&tree)?;
    let mut script = path.script;
    script.extend(restore);
    script.extend(reduction_script(&x)?);
    Witness {
        graph: g.clone(),
        host: path.host,
        kind: HostKind::Path,
        script,
        target_map: inverse_embed(&x),
    }
    .checked()
}

fn bipartite_expansion(g: &Graph, linear: bool, limit: usize) -> Result<RankExpansion, CharacterizeError> {
    if !g.is_bipartite() {
        return Err(CharacterizeError::NotBipartite);
    }
    require_connected(g)?;
    let x = width_one_expansion(g, linear, limit)?;
    if !triangle_sectors(&x).is_empty() || !x.host.is_tree() {
        return Err(CharacterizeError::TriangleInExpansion);
    }
    Ok(x)
}

/// Connected bipartite `g` of rank-width at most one as a pivot-minor of
/// a tree.
pub fn bipartite_tree_witness(g: &Graph, limit: usize) -> Result<Witness, CharacterizeError> {
    if g.n() <= 2 {
        if !g.is_bipartite() {
            return Err(CharacterizeError::NotBipartite);
        }
        require_connected(g)?;
        return Witness::identity(g, HostKind::Tree).checked();
    }
    let x = bipartite_expansion(g, false, limit)?;
    Witness {
        graph: g.clone(),
        host: x.host.clone(),
        kind: HostKind::Tree,
        script: reduction_script(&x)?,
        target_map: inverse_embed(&x),
    }
    .checked()
}

/// Connected bipartite `g` of linear rank-width at most one as a
/// pivot-minor of a path.
pub fn bipartite_path_witness(g: &Graph, limit: usize) -> Result<Witness, CharacterizeError> {
    if g.n() <= 2 {
        if !g.is_bipartite() {
            return Err(CharacterizeError::NotBipartite);
        }
        require_connected(g)?;
        return Witness::identity(g, HostKind::Path).checked();
    }
    let x = bipartite_expansion(g, true, limit)?;
    let path = caterpillar_to_path(&x.host)?;
    let mut script = path.script;
    script.extend(reduction_script(&x)?);
    Witness {
        graph: g.clone(),
        host: path.host,
        kind: HostKind::Path,
        script,
        target_map: inverse_embed(&x),
    }
    .checked()
}

/// Summary of where a graph sits relative to width one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub rank_width: usize,
    pub linear_rank_width: usize,
    pub distance_hereditary: bool,
    /// Names of the obstructions (`C5`, `N`, `Q`) present as vertex-minors.
    pub obstructions: Vec<String>,
    pub tree_witness: Option<Witness>,
    pub path_witness: Option<Witness>,
}

#[derive(Debug, Clone, Copy)]
pub struct Limits {
    pub width: usize,
    pub minor: usize,
    pub distance_hereditary: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            width: DEFAULT_WIDTH_LIMIT,
            minor: DEFAULT_MINOR_LIMIT,
            distance_hereditary: DEFAULT_DH_LIMIT,
        }
    }
}

pub fn classify(g: &Graph, limits: Limits) -> Result<Classification, CharacterizeError> {
    let rank_width = brute_force_rank_width(g, limits.width)?.width;
    let linear_rank_width = brute_force_linear_rank_width(g, limits.width)?.width;
    let distance_hereditary = is_distance_hereditary(g, limits.distance_hereditary)?;
    let mut obstructions = Vec::new();
    for (name, pattern) in linear_obstructions() {
        if has_vertex_minor(g, &pattern, limits.minor)? {
            obstructions.push(name.to_string());
        }
    }
    let connected = g.n() > 0 && g.is_connected();
    let tree_witness = (connected && rank_width <= 1)
        .then(|| tree_witness_rw1(g, limits.width))
        .transpose()?;
    let path_witness = (connected && linear_rank_width <= 1)
        .then(|| path_witness_lrw1(g, limits.width))
        .transpose()?;
    Ok(Classification {
        rank_width,
        linear_rank_width,
        distance_hereditary,
        obstructions,
        tree_witness,
        path_witness,
    })
}
