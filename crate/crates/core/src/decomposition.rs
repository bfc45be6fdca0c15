//! Rank-decompositions and tree-decompositions, their validation, and
//! exhaustive width search for small graphs.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};

/// Default vertex limit for exhaustive width search.
pub const DEFAULT_WIDTH_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid decomposition: {}", .0.join("; "))]
pub struct InvalidDecomposition(pub Vec<String>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error(transparent)]
    Invalid(#[from] InvalidDecomposition),
    #[error("graph has {n} vertices, above the search limit of {limit}")]
    SizeGuard { n: usize, limit: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Name of the tree leaf that holds graph vertex `v` in generated
/// decompositions.
pub fn leaf_name(v: &str) -> String {
    format!("L({v})")
}

fn inner_name(k: usize) -> String {
    format!("#{k}")
}

/// A tree edge by its end labels, with its width.
pub type TreeEdgeWidth = ((String, String), usize);

/// A subcubic tree with a bijection from graph vertices to its leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDecomposition {
    pub tree: Graph,
    /// Graph vertex → tree leaf.
    pub leaf_map: BTreeMap<String, String>,
    #[serde(default)]
    pub linear: bool,
}

impl RankDecomposition {
    /// Graph vertex held by each tree node (leaves only), by tree index.
    pub fn vertex_at(&self) -> Vec<Option<&str>> {
        let mut out = vec![None; self.tree.n()];
        for (v, leaf) in &self.leaf_map {
            if let Some(i) = self.tree.index_of(leaf) {
                out[i] = Some(v.as_str());
            }
        }
        out
    }

    /// Every violated invariant, checked against `g`.
    pub fn validate(&self, g: &Graph) -> Result<(), InvalidDecomposition> {
        let mut issues = Vec::new();
        let t = &self.tree;
        if t.n() < 2 {
            issues.push(format!("tree has {} vertices, needs at least 2", t.n()));
        }
        if !t.is_tree() {
            issues.push("underlying graph is not a tree".to_string());
        }
        for i in 0..t.n() {
            let d = t.degree(i);
            if d != 1 && d != 3 {
                issues.push(format!("tree vertex {} has degree {d}", t.label(i)));
            }
        }
        if self.linear && !t.is_caterpillar() {
            issues.push("linear decomposition tree is not a caterpillar".to_string());
        }
        for v in g.labels() {
            if !self.leaf_map.contains_key(v) {
                issues.push(format!("vertex {v} has no leaf"));
            }
        }
        let mut used: HashMap<&str, &str> = HashMap::new();
        for (v, leaf) in &self.leaf_map {
            if !g.contains(v) {
                issues.push(format!("leaf map names unknown vertex {v}"));
            }
            match t.index_of(leaf) {
                None => issues.push(format!("leaf map target {leaf} is not a tree vertex")),
                Some(i) if t.degree(i) != 1 => {
                    issues.push(format!("vertex {v} is mapped to non-leaf {leaf}"))
                }
                Some(_) => {}
            }
            if let Some(prev) = used.insert(leaf, v) {
                issues.push(format!("leaf {leaf} holds both {prev} and {v}"));
            }
        }
        for i in t.leaves() {
            if !used.contains_key(t.label(i)) {
                issues.push(format!("leaf {} holds no vertex", t.label(i)));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(InvalidDecomposition(issues))
        }
    }

    /// Graph vertices (indices of `g`) at the leaves on the `to` side of
    /// the tree edge `from`–`to`.
    pub(crate) fn side(&self, g: &Graph, from: usize, to: usize) -> Vec<usize> {
        let at = self.vertex_at();
        let mut seen = vec![false; self.tree.n()];
        seen[from] = true;
        seen[to] = true;
        let mut stack = vec![to];
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            if let Some(v) = at[x] {
                out.push(g.index_of(v).expect("validated leaf map"));
            }
            for y in self.tree.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Width of every tree edge `(a, b)` with `a < b` in tree order.
    pub fn edge_widths(&self, g: &Graph) -> Result<Vec<TreeEdgeWidth>, InvalidDecomposition> {
        self.validate(g)?;
        Ok(self
            .tree
            .edges()
            .into_iter()
            .map(|(a, b)| {
                let mut inside = vec![false; g.n()];
                for v in self.side(g, a, b) {
                    inside[v] = true;
                }
                let w = g.cut_rank_mask(&inside);
                ((self.tree.label(a).to_string(), self.tree.label(b).to_string()), w)
            })
            .collect())
    }

    pub fn width(&self, g: &Graph) -> Result<usize, InvalidDecomposition> {
        Ok(self
            .edge_widths(g)?
            .into_iter()
            .map(|(_, w)| w)
            .max()
            .unwrap_or(0))
    }

    /// Caterpillar decomposition whose spine cuts are the prefixes of `order`.
    pub fn caterpillar(g: &Graph, order: &[usize]) -> RankDecomposition {
        let n = order.len();
        assert!(n >= 2, "a rank-decomposition needs two vertices");
        let leaves: Vec<String> = order.iter().map(|&v| leaf_name(g.label(v))).collect();
        let spine: Vec<String> = (0..n.saturating_sub(2)).map(inner_name).collect();
        let mut tree = Graph::with_vertices(leaves.iter().chain(spine.iter()).cloned())
            .expect("distinct node names");
        if n == 2 {
            tree.add_edge(&leaves[0], &leaves[1]).unwrap();
        } else {
            for j in 0..n - 2 {
                tree.add_edge(&spine[j], &leaves[j + 1]).unwrap();
                if j + 1 < n - 2 {
                    tree.add_edge(&spine[j], &spine[j + 1]).unwrap();
                }
            }
            tree.add_edge(&spine[0], &leaves[0]).unwrap();
            tree.add_edge(&spine[n - 3], &leaves[n - 1]).unwrap();
        }
        RankDecomposition {
            tree,
            leaf_map: order
                .iter()
                .map(|&v| (g.label(v).to_string(), leaf_name(g.label(v))))
                .collect(),
            linear: true,
        }
    }

    /// Decomposition from an index edge list over leaves `0..n` (graph
    /// vertices) and inner nodes `n..`.
    fn from_tree_edges(g: &Graph, edges: &[(usize, usize)]) -> RankDecomposition {
        let n = g.n();
        let nodes = edges.len() + 1;
        let names: Vec<String> = (0..nodes)
            .map(|i| if i < n { leaf_name(g.label(i)) } else { inner_name(i - n) })
            .collect();
        let mut tree = Graph::with_vertices(names.iter().cloned()).expect("distinct node names");
        for &(a, b) in edges {
            tree.add_edge(&names[a], &names[b]).unwrap();
        }
        let leaf_map = (0..n)
            .map(|i| (g.label(i).to_string(), names[i].clone()))
            .collect();
        let mut d = RankDecomposition {
            tree,
            leaf_map,
            linear: false,
        };
        d.linear = d.tree.is_caterpillar();
        d
    }
}

/// Calls `visit` with the edge list of every subcubic tree whose leaves are
/// `0..n` (inner nodes numbered from `n`), each labelled shape exactly once.
pub fn for_each_subcubic_tree(n: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    match n {
        0 | 1 => {}
        2 => visit(&[(0, 1)]),
        3 => visit(&[(0, 3), (1, 3), (2, 3)]),
        _ => {
            let mut edges = vec![(0, n), (1, n), (2, n)];
            insert_leaves(n, 3, &mut edges, &mut |e| {
                if e.len() == 2 * n - 3 {
                    visit(e);
                }
                true
            });
        }
    }
}

/// Inserts leaf `i` into every edge in turn and shows each resulting
/// (possibly partial) tree to `visit`; `false` prunes the branch.
fn insert_leaves(
    n: usize,
    i: usize,
    edges: &mut Vec<(usize, usize)>,
    visit: &mut dyn FnMut(&[(usize, usize)]) -> bool,
) {
    let m = n + i - 2;
    for j in 0..edges.len() {
        let (a, b) = edges[j];
        edges[j] = (a, m);
        edges.push((m, b));
        edges.push((m, i));
        if visit(edges) && i + 1 < n {
            insert_leaves(n, i + 1, edges, visit);
        }
        edges.pop();
        edges.pop();
        edges[j] = (a, b);
    }
}

/// Leaf mask (over `0..n`) below each edge's second endpoint, with the
/// tree rooted at leaf 0.
fn edge_masks(n: usize, edges: &[(usize, usize)]) -> Vec<u32> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; adj.len()];
    let mut order = vec![0usize];
    parent[0] = 0;
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        k += 1;
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                order.push(y);
            }
        }
    }
    let mut mask = vec![0u32; adj.len()];
    for &x in order.iter().rev() {
        if x < n {
            mask[x] |= 1 << x;
        }
        if x != 0 {
            let p = parent[x];
            mask[p] |= mask[x];
        }
    }
    edges
        .iter()
        .map(|&(a, b)| if parent[b] == a { mask[b] } else { mask[a] })
        .collect()
}

/// Cut-rank of `G[0..i]` at every prefix level, memoized lazily.
struct PrefixCutRanks<'g> {
    g: &'g Graph,
    tables: Vec<Vec<u8>>,
}

impl<'g> PrefixCutRanks<'g> {
    fn new(g: &'g Graph) -> Self {
        let tables = (0..=g.n()).map(|i| vec![u8::MAX; 1 << i]).collect();
        PrefixCutRanks { g, tables }
    }

    /// Rank of `A[X, S ∖ X]` with `S = {0..level}`.
    fn get(&mut self, level: usize, x: u32) -> usize {
        let slot = &mut self.tables[level][x as usize];
        if *slot == u8::MAX {
            let a: Vec<usize> = (0..level).filter(|i| x >> i & 1 == 1).collect();
            let b: Vec<usize> = (0..level).filter(|i| x >> i & 1 == 0).collect();
            *slot = self.g.adjacency_bits().submatrix(&a, &b).rank() as u8;
        }
        *slot as usize
    }
}

/// Exact width and a witness (absent below two vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WidthResult {
    pub width: usize,
    pub decomposition: Option<RankDecomposition>,
}

fn guard(g: &Graph, limit: usize) -> Result<(), DecompositionError> {
    if g.n() > limit || g.n() > 30 {
        return Err(DecompositionError::SizeGuard {
            n: g.n(),
            limit: limit.min(30),
        });
    }
    Ok(())
}

/// Rank-width by exhaustive search over all subcubic trees, with
/// branch-and-bound on partial trees. The witness is the first optimal
/// tree in enumeration order.
pub fn brute_force_rank_width(g: &Graph, limit: usize) -> Result<WidthResult, DecompositionError> {
    guard(g, limit)?;
    let n = g.n();
    if n <= 1 {
        return Ok(WidthResult {
            width: 0,
            decomposition: None,
        });
    }
    if n == 2 {
        let d = RankDecomposition::from_tree_edges(g, &[(0, 1)]);
        return Ok(WidthResult {
            width: d.width(g).expect("generated decomposition is valid"),
            decomposition: Some(d),
        });
    }
    let floor = usize::from(g.edge_count() > 0);
    let mut cuts = PrefixCutRanks::new(g);
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    let mut visit = |e: &[(usize, usize)]| -> bool {
        if best.as_ref().is_some_and(|(b, _)| *b == floor) {
            return false;
        }
        // a partial tree with `level` leaves has 2 * level - 3 edges
        let level = (e.len() + 3) / 2;
        let w = edge_masks(n, e)
            .into_iter()
            .map(|m| cuts.get(level, m))
            .max()
            .unwrap_or(0);
        if best.as_ref().is_some_and(|(b, _)| w >= *b) {
            return false;
        }
        if level == n {
            best = Some((w, e.to_vec()));
        }
        true
    };
    let mut edges = vec![(0, n), (1, n), (2, n)];
    if visit(&edges) && n > 3 {
        insert_leaves(n, 3, &mut edges, &mut visit);
    }
    let (width, tree) = best.expect("at least one tree");
    Ok(WidthResult {
        width,
        decomposition: Some(RankDecomposition::from_tree_edges(g, &tree)),
    })
}

/// Linear rank-width by dynamic programming over vertex subsets; the
/// witness ordering is the lexicographically least optimal one.
pub fn brute_force_linear_rank_width(g: &Graph, limit: usize) -> Result<WidthResult, DecompositionError> {
    guard(g, limit)?;
    let n = g.n();
    if n <= 1 {
        return Ok(WidthResult {
            width: 0,
            decomposition: None,
        });
    }
    let full: u32 = (1u32 << n) - 1;
    let cut: Vec<u8> = (0..=full)
        .map(|s| {
            let inside: Vec<bool> = (0..n).map(|i| s >> i & 1 == 1).collect();
            g.cut_rank_mask(&inside) as u8
        })
        .collect();
    // best[s]: least achievable maximum over the remaining prefixes
    let mut best = vec![0u8; 1 << n];
    for s in (0..full).rev() {
        best[s as usize] = (0..n)
            .filter(|&v| s >> v & 1 == 0)
            .map(|v| {
                let t = s | 1 << v;
                let here = if t == full { 0 } else { cut[t as usize] };
                here.max(best[t as usize])
            })
            .min()
            .unwrap();
    }
    let mut order = Vec::with_capacity(n);
    let mut s = 0u32;
    while s != full {
        let v = (0..n)
            .filter(|&v| s >> v & 1 == 0)
            .find(|&v| {
                let t = s | 1 << v;
                let here = if t == full { 0 } else { cut[t as usize] };
                here.max(best[t as usize]) == best[s as usize]
            })
            .unwrap();
        order.push(v);
        s |= 1 << v;
    }
    Ok(WidthResult {
        width: best[0] as usize,
        decomposition: Some(RankDecomposition::caterpillar(g, &order)),
    })
}

/// A tree with a bag of graph vertices at every node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub tree: Graph,
    pub bags: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub path: bool,
}

impl TreeDecomposition {
    /// Largest bag size minus one; 0 for an empty decomposition.
    pub fn width(&self) -> usize {
        self.bags
            .values()
            .map(|b| b.len())
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// Checks coverage, edge containment and connectivity of every
    /// vertex's bag set, plus bag/node agreement and the path flag.
    pub fn validate(&self, g: &Graph) -> Result<(), InvalidDecomposition> {
        let mut issues = Vec::new();
        let t = &self.tree;
        if g.n() > 0 && t.n() == 0 {
            issues.push("tree is empty".to_string());
        }
        if t.n() > 0 && !t.is_tree() {
            issues.push("underlying graph is not a tree".to_string());
        }
        if self.path && t.n() > 0 && !t.is_path() {
            issues.push("path decomposition tree is not a path".to_string());
        }
        for node in t.labels() {
            if !self.bags.contains_key(node) {
                issues.push(format!("tree node {node} has no bag"));
            }
        }
        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (node, bag) in &self.bags {
            let Some(ti) = t.index_of(node) else {
                issues.push(format!("bag for unknown tree node {node}"));
                continue;
            };
            let mut dup = HashSet::new();
            for v in bag {
                match g.index_of(v) {
                    Some(gi) => holders[gi].push(ti),
                    None => issues.push(format!("bag {node} contains unknown vertex {v}")),
                }
                if !dup.insert(v) {
                    issues.push(format!("bag {node} lists {v} twice"));
                }
            }
        }
        for (v, h) in holders.iter().enumerate() {
            if h.is_empty() {
                issues.push(format!("vertex {} is in no bag", g.label(v)));
            } else if !t.induced_at(h).is_connected() {
                issues.push(format!("bags containing {} are not connected", g.label(v)));
            }
        }
        for (u, v) in g.edges() {
            let hv: HashSet<usize> = holders[v].iter().copied().collect();
            if !holders[u].iter().any(|x| hv.contains(x)) {
                issues.push(format!("edge {}{} is in no bag", g.label(u), g.label(v)));
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(InvalidDecomposition(issues))
        }
    }

    pub fn validated_width(&self, g: &Graph) -> Result<usize, InvalidDecomposition> {
        self.validate(g)?;
        Ok(self.width())
    }

    /// Ends of the underlying path, or `None` when the tree is not a path.
    pub fn path_ends(&self) -> Option<(String, String)> {
        let t = &self.tree;
        if !t.is_path() {
            return None;
        }
        if t.n() == 1 {
            return Some((t.label(0).to_string(), t.label(0).to_string()));
        }
        let ends = t.leaves();
        Some((t.label(ends[0]).to_string(), t.label(ends[1]).to_string()))
    }

    /// Bags of `self` and `other` joined by one tree edge (end to end when
    /// both are paths); node names must not overlap.
    pub fn join(&self, other: &TreeDecomposition) -> Result<TreeDecomposition, GraphError> {
        let mut tree = self.tree.disjoint_union(&other.tree)?;
        let path = self.path && other.path;
        if self.tree.n() > 0 && other.tree.n() > 0 {
            let (a, b) = if path {
                (self.path_ends().unwrap().1, other.path_ends().unwrap().0)
            } else {
                (self.tree.label(0).to_string(), other.tree.label(0).to_string())
            };
            tree.add_edge(&a, &b)?;
        }
        let mut bags = self.bags.clone();
        bags.extend(other.bags.clone());
        Ok(TreeDecomposition { tree, bags, path })
    }

    /// Copy with every tree node renamed to `prefix` + name.
    pub fn prefixed(&self, prefix: &str) -> TreeDecomposition {
        let rename = |s: &str| format!("{prefix}{s}");
        let mut tree = Graph::with_vertices(self.tree.labels().iter().map(|l| rename(l)))
            .expect("prefixing keeps names distinct");
        for (u, v) in self.tree.edges() {
            tree.connect(u, v);
        }
        TreeDecomposition {
            tree,
            bags: self
                .bags
                .iter()
                .map(|(k, b)| (rename(k), b.clone()))
                .collect(),
            path: self.path,
        }
    }

    /// Width-one decomposition of a forest: a bag `{v, parent(v)}` per
    /// non-root vertex and `{root}` per component. When every component
    /// has at most two vertices and `path` is set, one bag per component
    /// strung along a path.
    pub fn of_forest(g: &Graph, path: bool) -> Option<TreeDecomposition> {
        if !g.is_forest() {
            return None;
        }
        let comps = g.components();
        let mut tree = Graph::new();
        let mut bags = BTreeMap::new();
        if path {
            if comps.iter().any(|c| c.len() > 2) {
                return None;
            }
            let mut prev: Option<String> = None;
            for c in &comps {
                let name = format!("c:{}", g.label(c[0]));
                tree.add_vertex(name.clone()).unwrap();
                bags.insert(name.clone(), c.iter().map(|&v| g.label(v).to_string()).collect());
                if let Some(p) = prev {
                    tree.add_edge(&p, &name).unwrap();
                }
                prev = Some(name);
            }
            return Some(TreeDecomposition {
                tree,
                bags,
                path: true,
            });
        }
        let mut first_root: Option<String> = None;
        for c in &comps {
            let root = c[0];
            let dist = g.distances_from(root);
            let mut by_depth: Vec<usize> = c.clone();
            by_depth.sort_by_key(|&v| (dist[v], v));
            for &v in &by_depth {
                let name = format!("f:{}", g.label(v));
                tree.add_vertex(name.clone()).unwrap();
                let mut bag = vec![g.label(v).to_string()];
                if v != root {
                    let p = g
                        .neighbors(v)
                        .find(|&p| dist[p] == dist[v].map(|d| d - 1))
                        .unwrap();
                    bag.push(g.label(p).to_string());
                    tree.add_edge(&name, &format!("f:{}", g.label(p))).unwrap();
                }
                bags.insert(name, bag);
            }
            let rname = format!("f:{}", g.label(root));
            if let Some(r) = &first_root {
                tree.add_edge(r, &rname).unwrap();
            } else {
                first_root = Some(rname);
            }
        }
        Some(TreeDecomposition {
            tree,
            bags,
            path: false,
        })
    }
}
