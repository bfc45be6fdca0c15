//! Simple undirected graphs with string-labelled vertices, and the
//! transformations used throughout: local complementation, pivoting,
//! deletion and cut-rank.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BitMatrix, Gf2Matrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("loop at vertex {0}")]
    Loop(String),
    #[error("{0}{1} is not an edge")]
    NotAnEdge(String, String),
    #[error("adjacency matrix restricted to the pivot set is singular")]
    SingularPivot,
}

/// A simple undirected graph.
///
/// Vertices keep the order in which they were added; every deterministic
/// choice in this crate ("label order") refers to that order.
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "GraphDoc", try_from = "GraphDoc")]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: BitMatrix,
}

impl Default for Graph {
    fn default() -> Self {
        Graph::new()
    }
}

impl PartialEq for Graph {
    /// Equality as labelled graphs: same vertex labels and same edges,
    /// irrespective of vertex order.
    fn eq(&self, other: &Self) -> bool {
        if self.n() != other.n() || self.edge_count() != other.edge_count() {
            return false;
        }
        let Some(map) = self
            .labels
            .iter()
            .map(|l| other.index.get(l).copied())
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        self.edges()
            .into_iter()
            .all(|(u, v)| other.adj.get(map[u], map[v]))
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .edges()
            .into_iter()
            .map(|(u, v)| format!("{}-{}", self.labels[u], self.labels[v]))
            .collect();
        write!(f, "Graph(V={:?}, E=[{}])", self.labels, edges.join(" "))
    }
}

impl Graph {
    pub fn new() -> Self {
        Graph {
            labels: Vec::new(),
            index: HashMap::new(),
            adj: BitMatrix::zeros(0, 0),
        }
    }

    pub fn with_vertices<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self, GraphError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(GraphError::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        Ok(Graph {
            labels,
            index,
            adj: BitMatrix::zeros(n, n),
        })
    }

    /// Graph on `0..n` with the given index edges.
    pub fn from_indexed(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::with_vertices((0..n).map(|i| i.to_string())).expect("distinct labels");
        for &(u, v) in edges {
            g.connect(u, v);
        }
        g
    }

    /// Graph from a label edge list; vertices appear in first-seen order.
    pub fn from_edges<S: AsRef<str>>(edges: &[(S, S)]) -> Result<Self, GraphError> {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.ensure_vertex(u.as_ref());
            g.ensure_vertex(v.as_ref());
            g.add_edge(u.as_ref(), v.as_ref())?;
        }
        Ok(g)
    }

    /// Adds a vertex, returning its index; an existing label is an error.
    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize, GraphError> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(GraphError::DuplicateVertex(label));
        }
        let n = self.n();
        let mut adj = BitMatrix::zeros(n + 1, n + 1);
        for r in 0..n {
            for c in self.adj.row_ones(r) {
                adj.set(r, c, true);
            }
        }
        self.adj = adj;
        self.index.insert(label.clone(), n);
        self.labels.push(label);
        Ok(n)
    }

    /// Index of `label`, adding the vertex if absent.
    pub fn ensure_vertex(&mut self, label: &str) -> usize {
        match self.index.get(label) {
            Some(&i) => i,
            None => self.add_vertex(label).expect("absent label"),
        }
    }

    pub fn add_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (a, b) = (self.require(u)?, self.require(v)?);
        if a == b {
            return Err(GraphError::Loop(u.to_string()));
        }
        self.connect(a, b);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: &str, v: &str) -> Result<(), GraphError> {
        let (a, b) = (self.require(u)?, self.require(v)?);
        if !self.adj.get(a, b) {
            return Err(GraphError::NotAnEdge(u.to_string(), v.to_string()));
        }
        self.adj.set(a, b, false);
        self.adj.set(b, a, false);
        Ok(())
    }

    pub(crate) fn connect(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.adj.set(a, b, true);
        self.adj.set(b, a, true);
    }

    pub(crate) fn toggle(&mut self, a: usize, b: usize) {
        debug_assert_ne!(a, b);
        self.adj.flip(a, b);
        self.adj.flip(b, a);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub(crate) fn require(&self, label: &str) -> Result<usize, GraphError> {
        self.index_of(label)
            .ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub(crate) fn require_all<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>, GraphError> {
        labels.iter().map(|l| self.require(l.as_ref())).collect()
    }

    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj.get(a, b)
    }

    pub fn has_edge(&self, u: &str, v: &str) -> bool {
        match (self.index_of(u), self.index_of(v)) {
            (Some(a), Some(b)) => self.adj.get(a, b),
            _ => false,
        }
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj.row_ones(v)
    }

    pub fn neighbor_labels(&self, v: &str) -> Result<Vec<&str>, GraphError> {
        let i = self.require(v)?;
        Ok(self.neighbors(i).map(|j| self.label(j)).collect())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.count_ones() / 2
    }

    /// Edges as index pairs `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            for v in self.neighbors(u) {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_labels(&self) -> Vec<(&str, &str)> {
        self.edges()
            .into_iter()
            .map(|(u, v)| (self.label(u), self.label(v)))
            .collect()
    }

    pub fn adjacency_bits(&self) -> &BitMatrix {
        &self.adj
    }

    /// `A(G)` with both row and column labels in vertex order.
    pub fn adjacency_matrix(&self) -> Gf2Matrix<String> {
        Gf2Matrix::new(self.labels.clone(), self.labels.clone(), self.adj.clone())
            .expect("labels are distinct")
    }

    /// Replaces the adjacency with `bits`, which must be symmetric with a
    /// zero diagonal.
    pub(crate) fn with_adjacency(&self, bits: BitMatrix) -> Graph {
        debug_assert!((0..self.n()).all(|i| !bits.get(i, i)));
        debug_assert_eq!(bits, bits.transpose());
        Graph {
            labels: self.labels.clone(),
            index: self.index.clone(),
            adj: bits,
        }
    }

    pub(crate) fn local_complement_at(&mut self, v: usize) {
        let nb: Vec<usize> = self.neighbors(v).collect();
        for (i, &x) in nb.iter().enumerate() {
            for &y in &nb[i + 1..] {
                self.toggle(x, y);
            }
        }
    }

    /// `G * v`: complements the subgraph induced on the neighbourhood of `v`.
    pub fn local_complement(&self, v: &str) -> Result<Graph, GraphError> {
        let i = self.require(v)?;
        let mut g = self.clone();
        g.local_complement_at(i);
        Ok(g)
    }

    pub(crate) fn pivot_edge_at(&mut self, u: usize, v: usize) {
        let nu: HashSet<usize> = self.neighbors(u).collect();
        let nv: HashSet<usize> = self.neighbors(v).collect();
        let mut class = vec![0u8; self.n()];
        for x in 0..self.n() {
            if x == u || x == v {
                continue;
            }
            class[x] = match (nu.contains(&x), nv.contains(&x)) {
                (true, true) => 1,
                (true, false) => 2,
                (false, true) => 3,
                (false, false) => 0,
            };
        }
        for x in 0..self.n() {
            for y in x + 1..self.n() {
                if class[x] != 0 && class[y] != 0 && class[x] != class[y] {
                    self.toggle(x, y);
                }
            }
        }
        // swap the roles of u and v
        for x in 0..self.n() {
            if x == u || x == v {
                continue;
            }
            let (xu, xv) = (self.adj.get(x, u), self.adj.get(x, v));
            if xu != xv {
                self.toggle(x, u);
                self.toggle(x, v);
            }
        }
    }

    /// `G ∧ uv` for an edge `uv`, by complementing adjacency between the
    /// three classes of the joint neighbourhood and swapping `u` and `v`.
    pub fn pivot_edge(&self, u: &str, v: &str) -> Result<Graph, GraphError> {
        let (a, b) = (self.require(u)?, self.require(v)?);
        if !self.adjacent(a, b) {
            return Err(GraphError::NotAnEdge(u.to_string(), v.to_string()));
        }
        let mut g = self.clone();
        g.pivot_edge_at(a, b);
        Ok(g)
    }

    pub(crate) fn pivot_set_at(&self, x: &[usize]) -> Option<Graph> {
        self.adj.principal_pivot(x).map(|bits| self.with_adjacency(bits))
    }

    /// `G ∧ X`: the graph whose adjacency matrix is `A(G) * X`.
    pub fn pivot_set<S: AsRef<str>>(&self, x: &[S]) -> Result<Graph, GraphError> {
        let idx = self.require_all(x)?;
        self.pivot_set_at(&idx).ok_or(GraphError::SingularPivot)
    }

    /// Edge pivots whose composition is `G ∧ X`: repeatedly pivot the first
    /// edge `uv` inside what remains of `X` and drop `u`, `v`.
    pub fn pivot_script<S: AsRef<str>>(&self, x: &[S]) -> Result<TransformScript, GraphError> {
        let mut rest = self.require_all(x)?;
        rest.sort_unstable();
        rest.dedup();
        if self.pivot_set_at(&rest).is_none() {
            return Err(GraphError::SingularPivot);
        }
        let mut cur = self.clone();
        let mut script = TransformScript::default();
        while !rest.is_empty() {
            let (a, b) = rest
                .iter()
                .flat_map(|&a| rest.iter().map(move |&b| (a, b)))
                .find(|&(a, b)| a < b && cur.adjacent(a, b))
                .ok_or(GraphError::SingularPivot)?;
            cur.pivot_edge_at(a, b);
            script.push(Step::pivot(self.label(a), self.label(b)));
            rest.retain(|&i| i != a && i != b);
        }
        Ok(script)
    }

    pub(crate) fn cut_rank_mask(&self, inside: &[bool]) -> usize {
        let a: Vec<usize> = (0..self.n()).filter(|&i| inside[i]).collect();
        let b: Vec<usize> = (0..self.n()).filter(|&i| !inside[i]).collect();
        self.adj.submatrix(&a, &b).rank()
    }

    /// Rank over GF(2) of `A(G)[X, V \ X]`.
    pub fn cut_rank<S: AsRef<str>>(&self, x: &[S]) -> Result<usize, GraphError> {
        let mut inside = vec![false; self.n()];
        for i in self.require_all(x)? {
            inside[i] = true;
        }
        Ok(self.cut_rank_mask(&inside))
    }

    pub(crate) fn induced_at(&self, keep: &[usize]) -> Graph {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let labels: Vec<String> = keep.iter().map(|&i| self.labels[i].clone()).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i))
            .collect();
        Graph {
            labels,
            index,
            adj: self.adj.submatrix(&keep, &keep),
        }
    }

    /// `G[S]`, keeping the vertex order of `G`.
    pub fn induced_subgraph<S: AsRef<str>>(&self, s: &[S]) -> Result<Graph, GraphError> {
        Ok(self.induced_at(&self.require_all(s)?))
    }

    pub fn delete_vertices<S: AsRef<str>>(&self, s: &[S]) -> Result<Graph, GraphError> {
        let drop: HashSet<usize> = self.require_all(s)?.into_iter().collect();
        let keep: Vec<usize> = (0..self.n()).filter(|i| !drop.contains(i)).collect();
        Ok(self.induced_at(&keep))
    }

    /// Disjoint union; labels must not overlap.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut g = Graph::with_vertices(self.labels.iter().chain(other.labels.iter()).cloned())?;
        let off = self.n();
        for (u, v) in self.edges() {
            g.connect(u, v);
        }
        for (u, v) in other.edges() {
            g.connect(off + u, off + v);
        }
        Ok(g)
    }

    /// Breadth-first distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x].unwrap();
            for y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            let mut comp: Vec<usize> = self
                .distances_from(s)
                .iter()
                .enumerate()
                .filter_map(|(i, d)| d.map(|_| i))
                .collect();
            for &i in &comp {
                seen[i] = true;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side: Vec<Option<bool>> = vec![None; self.n()];
        for s in 0..self.n() {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                let sx = side[x].unwrap();
                for y in self.neighbors(x) {
                    match side[y] {
                        None => {
                            side[y] = Some(!sx);
                            queue.push_back(y);
                        }
                        Some(sy) if sy == sx => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.components().len() == self.n()
    }

    pub fn is_tree(&self) -> bool {
        self.n() >= 1 && self.is_connected() && self.edge_count() + 1 == self.n()
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && (0..self.n()).all(|v| self.degree(v) <= 2)
    }

    /// A tree in which deleting every leaf leaves a path (or nothing).
    pub fn is_caterpillar(&self) -> bool {
        if !self.is_tree() {
            return false;
        }
        if self.n() <= 2 {
            return true;
        }
        let spine: Vec<usize> = (0..self.n()).filter(|&v| self.degree(v) > 1).collect();
        self.induced_at(&spine).is_path()
    }

    /// A tree with at least two vertices whose inner vertices have degree 3.
    pub fn is_subcubic_tree(&self) -> bool {
        self.n() >= 2
            && self.is_tree()
            && (0..self.n()).all(|v| matches!(self.degree(v), 1 | 3))
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.degree(v) == 1).collect()
    }

    /// The vertices of the unique path between `s` and `t` in a tree,
    /// from `s` to `t`.
    pub fn tree_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n()];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in self.neighbors(x) {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[t] == usize::MAX {
            return None;
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// One step of a vertex-minor or pivot-minor derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    #[serde(rename = "lc")]
    LocalComplement { v: String },
    Pivot { u: String, v: String },
    Delete { v: String },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::LocalComplement { v } => write!(f, "lc {v}"),
            Step::Pivot { u, v } => write!(f, "pivot {u} {v}"),
            Step::Delete { v } => write!(f, "delete {v}"),
        }
    }
}

impl Step {
    pub fn lc(v: impl Into<String>) -> Self {
        Step::LocalComplement { v: v.into() }
    }

    pub fn pivot(u: impl Into<String>, v: impl Into<String>) -> Self {
        Step::Pivot {
            u: u.into(),
            v: v.into(),
        }
    }

    pub fn delete(v: impl Into<String>) -> Self {
        Step::Delete { v: v.into() }
    }

    pub fn is_local_complement(&self) -> bool {
        matches!(self, Step::LocalComplement { .. })
    }

    pub fn apply(&self, g: &mut Graph) -> Result<(), GraphError> {
        match self {
            Step::LocalComplement { v } => {
                let i = g.require(v)?;
                g.local_complement_at(i);
            }
            Step::Pivot { u, v } => {
                let (a, b) = (g.require(u)?, g.require(v)?);
                if !g.adjacent(a, b) {
                    return Err(GraphError::NotAnEdge(u.clone(), v.clone()));
                }
                g.pivot_edge_at(a, b);
            }
            Step::Delete { v } => {
                let i = g.require(v)?;
                let keep: Vec<usize> = (0..g.n()).filter(|&j| j != i).collect();
                *g = g.induced_at(&keep);
            }
        }
        Ok(())
    }
}

/// An ordered list of [`Step`]s.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransformScript {
    pub steps: Vec<Step>,
}

impl TransformScript {
    pub fn new(steps: Vec<Step>) -> Self {
        TransformScript { steps }
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    pub fn extend(&mut self, other: TransformScript) {
        self.steps.extend(other.steps);
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Same result with every pivot `uv` written as `lc u, lc v, lc u`.
    pub fn as_local_complementations(&self) -> TransformScript {
        let mut out = TransformScript::default();
        for s in &self.steps {
            match s {
                Step::Pivot { u, v } => {
                    out.push(Step::lc(u.clone()));
                    out.push(Step::lc(v.clone()));
                    out.push(Step::lc(u.clone()));
                }
                other => out.push(other.clone()),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {index} ({step}) is invalid: {source}")]
pub struct ScriptError {
    pub index: usize,
    pub step: Step,
    #[source]
    pub source: GraphError,
}

pub fn apply_script(g: &Graph, script: &TransformScript) -> Result<Graph, ScriptError> {
    let mut cur = g.clone();
    for (index, step) in script.steps.iter().enumerate() {
        step.apply(&mut cur).map_err(|source| ScriptError {
            index,
            step: step.clone(),
            source,
        })?;
    }
    Ok(cur)
}

/// Serialized form of a [`Graph`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl From<Graph> for GraphDoc {
    fn from(g: Graph) -> Self {
        GraphDoc {
            edges: g
                .edge_labels()
                .into_iter()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            vertices: g.labels,
        }
    }
}

impl TryFrom<GraphDoc> for Graph {
    type Error = GraphError;

    fn try_from(doc: GraphDoc) -> Result<Self, Self::Error> {
        let mut g = Graph::with_vertices(doc.vertices)?;
        for (u, v) in &doc.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}
