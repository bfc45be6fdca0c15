//! Rank-expansions: orient a rank-decomposition away from a leaf, choose
//! nested row bases on every edge, build the expanded graph, and derive
//! its pivot set and tree-decomposition.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::decomposition::{InvalidDecomposition, RankDecomposition, TreeDecomposition};
use crate::gf2::{Gf2Error, Gf2Matrix};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("{0} is not a leaf of the decomposition tree")]
    NotALeaf(String),
    #[error("graph is disconnected; decompose it into components first")]
    Disconnected,
    #[error("graph has {0} vertices; at least 3 are required")]
    TooSmall(usize),
    #[error("edge {0} has no incoming edge at its tail")]
    RootEdge(String),
    #[error("no tree edge {0}")]
    UnknownEdge(String),
    #[error("invalid basis assignment: {0}")]
    Basis(String),
    #[error("root leaf {0} is not an end of a longest path of the tree")]
    NotLongestPathEnd(String),
    #[error("decomposition is not linear")]
    NotLinear,
    #[error("the pivot block of the expansion is singular")]
    SingularBlock,
    #[error(transparent)]
    Decomposition(#[from] InvalidDecomposition),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A tree edge directed away from the root leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DirectedEdge {
    pub tail: String,
    pub head: String,
    /// Graph vertices at leaves reachable from the head without crossing
    /// this edge.
    pub below: Vec<String>,
}

impl DirectedEdge {
    pub fn name(&self) -> String {
        format!("{}>{}", self.tail, self.head)
    }
}

/// A rank-decomposition with every edge directed away from a fixed leaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientedDecomposition {
    pub base: RankDecomposition,
    pub root_leaf: String,
    /// Breadth-first from the root leaf; `edges[0]` leaves the root.
    pub edges: Vec<DirectedEdge>,
    #[serde(skip)]
    ends: Vec<(usize, usize)>,
    #[serde(skip)]
    incoming: Vec<Option<usize>>,
    #[serde(skip)]
    outgoing: Vec<Vec<usize>>,
}

impl OrientedDecomposition {
    pub fn new(base: RankDecomposition, root_leaf: &str) -> Result<Self, ExpansionError> {
        let t = &base.tree;
        let x = t
            .index_of(root_leaf)
            .filter(|&i| t.degree(i) == 1)
            .ok_or_else(|| ExpansionError::NotALeaf(root_leaf.to_string()))?;
        if !t.is_tree() {
            return Err(InvalidDecomposition(vec!["underlying graph is not a tree".into()]).into());
        }
        let at = base.vertex_at();
        let mut ends = Vec::new();
        let mut incoming = vec![None; t.n()];
        let mut outgoing = vec![Vec::new(); t.n()];
        let mut seen = vec![false; t.n()];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            for w in t.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    incoming[w] = Some(ends.len());
                    outgoing[u].push(ends.len());
                    ends.push((u, w));
                    queue.push_back(w);
                }
            }
        }
        // subtree leaf sets, children before parents
        let mut below: Vec<Vec<String>> = vec![Vec::new(); ends.len()];
        for e in (0..ends.len()).rev() {
            let head = ends[e].1;
            let mut set: Vec<String> = at[head].map(|v| vec![v.to_string()]).unwrap_or_default();
            for &f in &outgoing[head] {
                set.extend(below[f].iter().cloned());
            }
            set.sort();
            below[e] = set;
        }
        let edges = ends
            .iter()
            .zip(below)
            .map(|(&(a, b), below)| DirectedEdge {
                tail: t.label(a).to_string(),
                head: t.label(b).to_string(),
                below,
            })
            .collect();
        Ok(OrientedDecomposition {
            root_leaf: root_leaf.to_string(),
            base,
            edges,
            ends,
            incoming,
            outgoing,
        })
    }

    pub fn tree(&self) -> &Graph {
        &self.base.tree
    }

    pub fn tail(&self, e: usize) -> usize {
        self.ends[e].0
    }

    pub fn head(&self, e: usize) -> usize {
        self.ends[e].1
    }

    pub fn incoming(&self, node: usize) -> Option<usize> {
        self.incoming[node]
    }

    pub fn outgoing(&self, node: usize) -> &[usize] {
        &self.outgoing[node]
    }

    pub fn is_inner_node(&self, node: usize) -> bool {
        self.tree().degree(node) > 1
    }

    /// Both endpoints are inner tree nodes.
    pub fn is_inner_edge(&self, e: usize) -> bool {
        self.is_inner_node(self.tail(e)) && self.is_inner_node(self.head(e))
    }

    pub fn find_edge(&self, tail: &str, head: &str) -> Option<usize> {
        self.edges.iter().position(|d| d.tail == tail && d.head == head)
    }

    pub fn edge_by_name(&self, name: &str) -> Result<usize, ExpansionError> {
        self.edges
            .iter()
            .position(|d| d.name() == name)
            .ok_or_else(|| ExpansionError::UnknownEdge(name.to_string()))
    }

    /// Inner tree nodes in breadth-first order from the root.
    pub fn inner_nodes(&self) -> Vec<usize> {
        self.ends
            .iter()
            .map(|&(_, h)| h)
            .filter(|&h| self.is_inner_node(h))
            .collect()
    }

    /// Indices in `g` of the vertices below `e` and of the rest, each in
    /// vertex order of `g`.
    pub fn sides(&self, g: &Graph, e: usize) -> Result<(Vec<usize>, Vec<usize>), GraphError> {
        let mut inside = vec![false; g.n()];
        for v in &self.edges[e].below {
            inside[g.require(v)?] = true;
        }
        Ok((
            (0..g.n()).filter(|&i| inside[i]).collect(),
            (0..g.n()).filter(|&i| !inside[i]).collect(),
        ))
    }

    fn side_matrix(&self, g: &Graph, e: usize) -> Result<Gf2Matrix<String>, ExpansionError> {
        let (a, b) = self.sides(g, e)?;
        let label = |v: &usize| g.label(*v).to_string();
        Ok(Gf2Matrix::new(
            a.iter().map(label).collect(),
            b.iter().map(label).collect(),
            g.adjacency_bits().submatrix(&a, &b),
        )?)
    }

    /// Whether the root leaf is an end of a longest path of the tree.
    pub fn root_is_longest_path_end(&self) -> bool {
        let t = self.tree();
        let x = t.index_of(&self.root_leaf).unwrap();
        let ecc = |s: usize| t.distances_from(s).into_iter().flatten().max().unwrap_or(0);
        let diameter = (0..t.n()).map(ecc).max().unwrap_or(0);
        ecc(x) == diameter
    }
}

/// Default root leaf: the leaf holding the earliest vertex of `g`; in
/// linear mode, restricted to ends of longest paths.
pub fn default_root_leaf(g: &Graph, d: &RankDecomposition, linear: bool) -> Option<String> {
    g.labels()
        .iter()
        .filter_map(|v| d.leaf_map.get(v))
        .find(|leaf| {
            !linear
                || OrientedDecomposition::new(d.clone(), leaf)
                    .map(|o| o.root_is_longest_path_end())
                    .unwrap_or(false)
        })
        .cloned()
}

/// An ordered row basis `U_e` for each directed edge, parallel to
/// [`OrientedDecomposition::edges`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisAssignment {
    pub bases: Vec<Vec<String>>,
}

impl BasisAssignment {
    /// Bases keyed by edge name (`tail>head`); every edge must be named.
    /// The result is validated against `g`.
    pub fn from_names<K, S>(
        g: &Graph,
        o: &OrientedDecomposition,
        named: impl IntoIterator<Item = (K, Vec<S>)>,
    ) -> Result<Self, ExpansionError>
    where
        K: AsRef<str>,
        S: Into<String>,
    {
        let mut bases: Vec<Option<Vec<String>>> = vec![None; o.edges.len()];
        for (name, basis) in named {
            let e = o.edge_by_name(name.as_ref())?;
            bases[e] = Some(basis.into_iter().map(Into::into).collect());
        }
        let bases = bases
            .into_iter()
            .enumerate()
            .map(|(e, b)| {
                b.ok_or_else(|| ExpansionError::Basis(format!("no basis for edge {}", o.edges[e].name())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let u = BasisAssignment { bases };
        u.validate(g, o)?;
        Ok(u)
    }

    /// Checks that each `U_e` indexes a row basis of `A(G)[A_e, B_e]` and
    /// that bases are nested along the orientation.
    pub fn validate(&self, g: &Graph, o: &OrientedDecomposition) -> Result<(), ExpansionError> {
        if self.bases.len() != o.edges.len() {
            return Err(ExpansionError::Basis(format!(
                "{} bases for {} edges",
                self.bases.len(),
                o.edges.len()
            )));
        }
        for (e, u) in self.bases.iter().enumerate() {
            let name = o.edges[e].name();
            let m = o.side_matrix(g, e)?;
            if let Some(a) = u.iter().find(|a| !o.edges[e].below.contains(a)) {
                return Err(ExpansionError::Basis(format!("{a} is not below edge {name}")));
            }
            let rows = m.submatrix(u, m.col_labels())?;
            if rows.rank() != u.len() || u.len() != m.rank() {
                return Err(ExpansionError::Basis(format!("rows for edge {name} are not a basis")));
            }
            if let Some(p) = o.incoming(o.tail(e)) {
                let below = &o.edges[e].below;
                if let Some(a) = self.bases[p].iter().find(|a| below.contains(a) && !u.contains(a)) {
                    return Err(ExpansionError::Basis(format!(
                        "{a} is in the basis of {} but not of {name}",
                        o.edges[p].name()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn max_size(&self) -> usize {
        self.bases.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Nested bases chosen greedily in vertex order, seeded on each edge by
/// the incoming basis restricted to the edge's side.
pub fn assign_bases(g: &Graph, o: &OrientedDecomposition) -> Result<BasisAssignment, ExpansionError> {
    if !g.is_connected() {
        return Err(ExpansionError::Disconnected);
    }
    let mut bases: Vec<Vec<String>> = Vec::with_capacity(o.edges.len());
    for e in 0..o.edges.len() {
        let m = o.side_matrix(g, e)?;
        let seed: Vec<String> = match o.incoming(o.tail(e)) {
            Some(p) => bases[p]
                .iter()
                .filter(|a| o.edges[e].below.contains(a))
                .cloned()
                .collect(),
            None => Vec::new(),
        };
        bases.push(m.extend_basis(&seed)?);
    }
    Ok(BasisAssignment { bases })
}

/// `P_e`: the unique matrix with `P_e · A(G)[U_e, B_e] = A(G)[A_e, B_e]`.
pub fn row_expression(
    g: &Graph,
    o: &OrientedDecomposition,
    u: &BasisAssignment,
    e: usize,
) -> Result<Gf2Matrix<String>, ExpansionError> {
    Ok(o.side_matrix(g, e)?.express_rows(&u.bases[e])?)
}

/// `C_f = P_e[U_f, U_e]` where `e` is the edge entering the tail of `f`.
pub fn coefficient_matrix(
    g: &Graph,
    o: &OrientedDecomposition,
    u: &BasisAssignment,
    f: usize,
) -> Result<Gf2Matrix<String>, ExpansionError> {
    let e = o
        .incoming(o.tail(f))
        .ok_or_else(|| ExpansionError::RootEdge(o.edges[f].name()))?;
    let p = row_expression(g, o, u, e)?;
    Ok(p.submatrix(&u.bases[f], &u.bases[e])?)
}

/// A vertex `(a, e, v)` of the expansion: basis element `a` of edge `e`,
/// copied at the inner endpoint `v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExpansionVertex {
    pub a: String,
    pub edge: String,
    pub node: String,
}

impl ExpansionVertex {
    pub fn label(&self) -> String {
        format!("({},{},{})", self.a, self.edge, self.node)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankExpansion {
    pub host: Graph,
    /// Structured form of each host vertex, in host vertex order.
    pub vertices: Vec<ExpansionVertex>,
    #[serde(skip)]
    pub oriented: OrientedDecomposition,
    #[serde(skip)]
    pub bases: BasisAssignment,
    /// Host vertices on inner tree edges; the pivot set.
    pub inner_block: Vec<String>,
    /// Graph vertex → host vertex.
    pub embed: BTreeMap<String, String>,
    /// Inner tree node → host vertices copied there.
    pub sectors: BTreeMap<String, Vec<String>>,
    /// Largest basis size, the width of the decomposition.
    pub width: usize,
    #[serde(skip)]
    index: HashMap<(String, usize, usize), usize>,
}

impl RankExpansion {
    /// Host index of `(a, e, v)`.
    pub fn copy(&self, a: &str, e: usize, node: usize) -> Option<usize> {
        self.index.get(&(a.to_string(), e, node)).copied()
    }

    /// Host indices of all copies made for edge `e`.
    pub fn block(&self, e: usize) -> Vec<usize> {
        let o = &self.oriented;
        let mut out = Vec::new();
        for node in [o.tail(e), o.head(e)] {
            for a in &self.bases.bases[e] {
                if let Some(i) = self.copy(a, e, node) {
                    out.push(i);
                }
            }
        }
        out
    }

    pub fn inner_edge_count(&self) -> usize {
        (0..self.oriented.edges.len())
            .filter(|&e| self.oriented.is_inner_edge(e))
            .count()
    }
}

pub fn build_expansion(
    g: &Graph,
    o: &OrientedDecomposition,
    u: &BasisAssignment,
) -> Result<RankExpansion, ExpansionError> {
    if g.n() < 3 {
        return Err(ExpansionError::TooSmall(g.n()));
    }
    if !g.is_connected() {
        return Err(ExpansionError::Disconnected);
    }
    o.base.validate(g)?;
    u.validate(g, o)?;
    let t = o.tree();
    let mut vertices = Vec::new();
    let mut index = HashMap::new();
    let mut sectors = BTreeMap::new();
    let inner = o.inner_nodes();
    for &v in &inner {
        let incident = o.incoming(v).into_iter().chain(o.outgoing(v).iter().copied());
        let mut sector = Vec::new();
        for e in incident {
            for a in &u.bases[e] {
                let x = ExpansionVertex {
                    a: a.clone(),
                    edge: o.edges[e].name(),
                    node: t.label(v).to_string(),
                };
                index.insert((a.clone(), e, v), vertices.len());
                sector.push(x.label());
                vertices.push(x);
            }
        }
        sectors.insert(t.label(v).to_string(), sector);
    }
    let mut host = Graph::with_vertices(vertices.iter().map(ExpansionVertex::label))?;
    let at = |a: &str, e: usize, v: usize| index[&(a.to_string(), e, v)];

    let mut inner_block = Vec::new();
    for e in 0..o.edges.len() {
        if !o.is_inner_edge(e) {
            continue;
        }
        for a in &u.bases[e] {
            let (x, y) = (at(a, e, o.tail(e)), at(a, e, o.head(e)));
            host.connect(x, y);
            inner_block.push(host.label(x).to_string());
            inner_block.push(host.label(y).to_string());
        }
    }
    for &v in &inner {
        let e = o.incoming(v).expect("inner nodes have a parent");
        let out = o.outgoing(v);
        for &f in out {
            let c = coefficient_matrix(g, o, u, f)?;
            for (i, a) in u.bases[f].iter().enumerate() {
                for (j, b) in u.bases[e].iter().enumerate() {
                    if c.bits().get(i, j) {
                        host.connect(at(a, f, v), at(b, e, v));
                    }
                }
            }
        }
        for (i, &f1) in out.iter().enumerate() {
            for &f2 in &out[i + 1..] {
                for a in &u.bases[f1] {
                    for b in &u.bases[f2] {
                        if g.has_edge(a, b) {
                            host.connect(at(a, f1, v), at(b, f2, v));
                        }
                    }
                }
            }
        }
    }

    let mut embed = BTreeMap::new();
    for (e, d) in o.edges.iter().enumerate() {
        let (tail, head) = (o.tail(e), o.head(e));
        if e == 0 {
            let b = o.base.vertex_at()[tail].expect("root is a leaf").to_string();
            let u0 = &u.bases[0][0];
            embed.insert(b, host.label(at(u0, 0, head)).to_string());
        } else if !o.is_inner_node(head) {
            let a = d.below[0].clone();
            let i = at(&a, e, tail);
            embed.insert(a, host.label(i).to_string());
        }
    }
    Ok(RankExpansion {
        host,
        vertices,
        oriented: o.clone(),
        bases: u.clone(),
        inner_block,
        embed,
        sectors,
        width: u.max_size(),
        index,
    })
}

/// Outcome of comparing `(H ∧ X)` restricted to the embedded vertices
/// with `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PivotMinorCheck {
    pub holds: bool,
    /// Vertex pairs of `G` whose adjacency differs after pivoting.
    pub mismatches: Vec<(String, String)>,
}

/// Checks that `host ∧ pivot_set`, restricted to the image of `embed`, is
/// `g` relabelled by `embed`.
pub fn check_pivot_minor<S: AsRef<str>>(
    g: &Graph,
    host: &Graph,
    pivot_set: &[S],
    embed: &BTreeMap<String, String>,
) -> Result<PivotMinorCheck, ExpansionError> {
    let pivoted = match host.pivot_set(pivot_set) {
        Ok(p) => p,
        Err(GraphError::SingularPivot) => return Err(ExpansionError::SingularBlock),
        Err(e) => return Err(e.into()),
    };
    let mut image = Vec::with_capacity(g.n());
    for v in g.labels() {
        let target = embed
            .get(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.clone()))?;
        image.push(pivoted.require(target)?);
    }
    let mut distinct = image.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut mismatches = Vec::new();
    if distinct.len() != image.len() {
        mismatches.push(("embed".to_string(), "not injective".to_string()));
    }
    let pivot_members: Vec<usize> = pivot_set
        .iter()
        .filter_map(|x| pivoted.index_of(x.as_ref()))
        .collect();
    if let Some(&clash) = image.iter().find(|i| pivot_members.contains(i)) {
        mismatches.push(("embed".to_string(), format!("{} is pivoted", pivoted.label(clash))));
    }
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            if g.adjacent(a, b) != pivoted.adjacent(image[a], image[b]) {
                mismatches.push((g.label(a).to_string(), g.label(b).to_string()));
            }
        }
    }
    Ok(PivotMinorCheck {
        holds: mismatches.is_empty(),
        mismatches,
    })
}

pub fn verify_pivot_minor(g: &Graph, x: &RankExpansion) -> Result<PivotMinorCheck, ExpansionError> {
    check_pivot_minor(g, &x.host, &x.inner_block, &x.embed)
}

/// The three facts behind the path reduction for one vertex pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathReduction {
    /// `A(H)` restricted to the blocks of the tree path is nonsingular.
    pub nonsingular: bool,
    /// `ā b̄` is an edge of `H ∧ Ē_I(T)`.
    pub pivot_adjacent: bool,
    /// `ab` is an edge of `G`.
    pub graph_adjacent: bool,
}

impl PathReduction {
    pub fn consistent(&self) -> bool {
        self.nonsingular == self.pivot_adjacent && self.pivot_adjacent == self.graph_adjacent
    }
}

/// Host vertices of the blocks along the tree path between the leaves of
/// `a` and `b`.
pub fn path_block(x: &RankExpansion, a: &str, b: &str) -> Result<Vec<usize>, ExpansionError> {
    let o = &x.oriented;
    let t = o.tree();
    let leaf = |v: &str| -> Result<usize, ExpansionError> {
        let l = o
            .base
            .leaf_map
            .get(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        Ok(t.require(l)?)
    };
    let nodes = t
        .tree_path(leaf(a)?, leaf(b)?)
        .expect("decomposition tree is connected");
    let mut out = Vec::new();
    for w in nodes.windows(2) {
        let e = o
            .find_edge(t.label(w[0]), t.label(w[1]))
            .or_else(|| o.find_edge(t.label(w[1]), t.label(w[0])))
            .expect("consecutive path nodes are adjacent");
        out.extend(x.block(e));
    }
    Ok(out)
}

pub fn path_reduction_check(
    g: &Graph,
    x: &RankExpansion,
    a: &str,
    b: &str,
) -> Result<PathReduction, ExpansionError> {
    let block = path_block(x, a, b)?;
    let nonsingular = x.host.adjacency_bits().principal(&block).is_nonsingular();
    let pivoted = x
        .host
        .pivot_set(&x.inner_block)
        .map_err(|_| ExpansionError::SingularBlock)?;
    Ok(PathReduction {
        nonsingular,
        pivot_adjacent: pivoted.has_edge(&x.embed[a], &x.embed[b]),
        graph_adjacent: g.has_edge(a, b),
    })
}

/// Tree-decomposition of the expansion: each inner tree edge `w → v` is
/// replaced by a chain of `|U_e|` bags sliding from the tail copies to the
/// head copies, followed by `|U_e|` bags that sweep the sector of `v`.
/// Basis order fixes the sweep order.
pub fn expansion_tree_decomposition(x: &RankExpansion) -> TreeDecomposition {
    let o = &x.oriented;
    let t = o.tree();
    let u = &x.bases.bases;
    let label = |a: &str, e: usize, v: usize| x.host.label(x.copy(a, e, v).unwrap()).to_string();
    let copies_at = |e: usize, v: usize| -> Vec<String> { u[e].iter().map(|a| label(a, e, v)).collect() };

    let mut tree = Graph::new();
    let mut bags: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut add = |tree: &mut Graph, name: String, bag: Vec<String>| {
        tree.add_vertex(name.clone()).expect("fresh bag name");
        bags.insert(name, bag);
    };
    let y = o.head(0);
    for v in o.inner_nodes() {
        let name = t.label(v).to_string();
        let bag = if v == y {
            x.sectors[&name].clone()
        } else {
            o.outgoing(v).iter().flat_map(|&f| copies_at(f, v)).collect()
        };
        add(&mut tree, name, bag);
    }
    for v in o.inner_nodes() {
        if v == y {
            continue;
        }
        let e = o.incoming(v).unwrap();
        let w = o.tail(e);
        let vname = t.label(v);
        let out = o.outgoing(v);
        let mut prev = t.label(w).to_string();
        // slide from the tail copies to the head copies
        let mut bag = copies_at(e, w);
        for (i, a) in u[e].iter().enumerate() {
            if i > 0 {
                let drop = label(&u[e][i - 1], e, w);
                bag.retain(|s| *s != drop);
            }
            bag.push(label(a, e, v));
            let name = format!("z{}[{vname}]", i + 1);
            add(&mut tree, name.clone(), bag.clone());
            tree.add_edge(&prev, &name).unwrap();
            prev = name;
        }
        // sweep the sector
        let outer = |a: &str| -> Vec<String> {
            out.iter()
                .filter(|&&f| u[f].iter().any(|b| b == a))
                .map(|&f| label(a, f, v))
                .collect()
        };
        let mut bag: Vec<String> = out
            .iter()
            .flat_map(|&f| u[f].iter().filter(|a| !u[e].contains(a)).map(move |a| (a, f)))
            .map(|(a, f)| label(a, f, v))
            .collect();
        bag.extend(copies_at(e, v));
        for (i, a) in u[e].iter().enumerate() {
            if i > 0 {
                let drop = label(&u[e][i - 1], e, v);
                bag.retain(|s| *s != drop);
            }
            bag.extend(outer(a));
            let name = format!("p{}[{vname}]", i + 1);
            add(&mut tree, name.clone(), bag.clone());
            tree.add_edge(&prev, &name).unwrap();
            prev = name;
        }
        tree.add_edge(&prev, vname).unwrap();
    }
    let path = tree.is_path();
    TreeDecomposition { tree, bags, path }
}

/// The same construction for a linear decomposition rooted at an end of
/// a longest path, where the tree is a path.
pub fn expansion_path_decomposition(x: &RankExpansion) -> Result<TreeDecomposition, ExpansionError> {
    let o = &x.oriented;
    if !o.tree().is_caterpillar() {
        return Err(ExpansionError::NotLinear);
    }
    if !o.root_is_longest_path_end() {
        return Err(ExpansionError::NotLongestPathEnd(o.root_leaf.clone()));
    }
    let mut td = expansion_tree_decomposition(x);
    debug_assert!(td.tree.is_path());
    td.path = true;
    Ok(td)
}

/// Orientation, greedy bases and expansion in one step.
pub fn expand(
    g: &Graph,
    d: &RankDecomposition,
    root_leaf: Option<&str>,
) -> Result<RankExpansion, ExpansionError> {
    d.validate(g)?;
    let root = match root_leaf {
        Some(r) => r.to_string(),
        None => default_root_leaf(g, d, d.linear).expect("a valid decomposition has leaves"),
    };
    let o = OrientedDecomposition::new(d.clone(), &root)?;
    let u = assign_bases(g, &o)?;
    build_expansion(g, &o, &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{brute_force_linear_rank_width, brute_force_rank_width};

    fn k3() -> Graph {
        Graph::from_edges(&[("a", "b"), ("b", "c"), ("a", "c")]).unwrap()
    }

    fn optimal(g: &Graph) -> RankDecomposition {
        brute_force_rank_width(g, 8).unwrap().decomposition.unwrap()
    }

    #[test]
    fn triangle_pipeline() {
        let g = k3();
        let x = expand(&g, &optimal(&g), None).unwrap();
        assert_eq!(x.host.n(), 3);
        assert!(x.inner_block.is_empty());
        assert!(verify_pivot_minor(&g, &x).unwrap().holds);
        let td = expansion_tree_decomposition(&x);
        assert!(td.validate(&x.host).is_ok());
        assert!(td.width() <= 2);
    }

    #[test]
    fn two_leaf_orientation() {
        let d = RankDecomposition {
            tree: Graph::from_edges(&[("x", "y")]).unwrap(),
            leaf_map: [("a", "x"), ("b", "y")]
                .into_iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            linear: true,
        };
        let o = OrientedDecomposition::new(d.clone(), "x").unwrap();
        assert_eq!(o.edges.len(), 1);
        assert_eq!((o.edges[0].tail.as_str(), o.edges[0].head.as_str()), ("x", "y"));
        assert_eq!(o.edges[0].below, vec!["b".to_string()]);
        assert!(matches!(
            OrientedDecomposition::new(d, "z"),
            Err(ExpansionError::NotALeaf(_))
        ));
    }

    #[test]
    fn perturbed_expansion_fails_verification() {
        let g = Graph::from_indexed(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let x = expand(&g, &optimal(&g), None).unwrap();
        assert!(verify_pivot_minor(&g, &x).unwrap().holds);
        let image: Vec<&String> = x.embed.values().collect();
        let (a, b) = x
            .host
            .edge_labels()
            .into_iter()
            .find(|(a, b)| {
                let same_sector = x.sectors.values().any(|s| s.iter().any(|v| v == a) && s.iter().any(|v| v == b));
                same_sector && (image.contains(&&a.to_string()) || image.contains(&&b.to_string()))
            })
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .unwrap();
        let mut broken = x.clone();
        broken.host.remove_edge(&a, &b).unwrap();
        assert!(!verify_pivot_minor(&g, &broken).unwrap().holds);
    }

    #[test]
    fn linear_pipeline_on_paths() {
        for n in 3..=7 {
            let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
            let g = Graph::from_indexed(n, &edges);
            let d = brute_force_linear_rank_width(&g, 8).unwrap().decomposition.unwrap();
            let x = expand(&g, &d, None).unwrap();
            assert!(verify_pivot_minor(&g, &x).unwrap().holds);
            let pd = expansion_path_decomposition(&x).unwrap();
            assert!(pd.validate(&x.host).is_ok());
            assert!(pd.width() <= 2, "n = {n}: width {}", pd.width());
        }
    }

    #[test]
    fn non_extremal_root_is_rejected_in_linear_mode() {
        let g = Graph::from_indexed(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let d = RankDecomposition::caterpillar(&g, &[0, 1, 2, 3, 4, 5]);
        // L(2) hangs off the middle of the spine
        let x = expand(&g, &d, Some("L(2)")).unwrap();
        assert!(matches!(
            expansion_path_decomposition(&x),
            Err(ExpansionError::NotLongestPathEnd(_))
        ));
    }

    #[test]
    fn disconnected_graphs_are_rejected() {
        let g = Graph::from_indexed(4, &[(0, 1), (2, 3)]);
        let d = RankDecomposition::caterpillar(&g, &[0, 1, 2, 3]);
        assert_eq!(expand(&g, &d, None).unwrap_err(), ExpansionError::Disconnected);
    }

    #[test]
    fn coefficient_matrix_of_root_edge_is_an_error() {
        let g = k3();
        let o = OrientedDecomposition::new(optimal(&g), "L(a)").unwrap();
        let u = assign_bases(&g, &o).unwrap();
        assert!(matches!(
            coefficient_matrix(&g, &o, &u, 0),
            Err(ExpansionError::RootEdge(_))
        ));
    }
}
