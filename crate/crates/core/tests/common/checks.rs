//! Checks shared by the property tests and the acceptance harness. Each
//! returns `Err` with a description of the first violation.

use std::collections::{BTreeSet, HashMap};

use rand::rngs::StdRng;
use rand::Rng;
use rankexp::characterize::{
    bipartite_path_witness, bipartite_tree_witness, c5, has_vertex_minor, is_distance_hereditary,
    linear_obstructions, path_witness_lrw1, tree_witness_rw1, CharacterizeError, Witness,
};
use rankexp::decomposition::{brute_force_linear_rank_width, brute_force_rank_width, TreeDecomposition};
use rankexp::driver::{theorem_driver, DriverOptions};
use rankexp::expansion::{expand, path_block};
use rankexp::{BitMatrix, Graph};

pub type Rows = Vec<Vec<u8>>;

pub fn to_rows(m: &BitMatrix) -> Rows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| u8::from(m.get(r, c))).collect())
        .collect()
}

/// Rank by plain elimination on byte rows.
pub fn rank_oracle(rows: &Rows) -> usize {
    let mut m = rows.clone();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over GF(2); the empty matrix has determinant one.
pub fn det_oracle(rows: &Rows) -> bool {
    rows.iter().all(|r| r.len() == rows.len()) && rank_oracle(rows) == rows.len()
}

pub fn mul_oracle(a: &Rows, b: &Rows, cols: usize) -> Rows {
    let inner = b.len();
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).fold(0, |acc, k| acc ^ (row[k] & b[k][c])))
                .collect()
        })
        .collect()
}

fn principal_rows(m: &Rows, idx: &[usize]) -> Rows {
    idx.iter().map(|&r| idx.iter().map(|&c| m[r][c]).collect()).collect()
}

fn mask_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

pub fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> BitMatrix {
    BitMatrix::from_fn(rows, cols, |_, _| rng.gen_bool(0.5))
}

pub fn random_symmetric(rng: &mut StdRng, n: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(n, n);
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.5) {
                m.set(i, j, true);
                m.set(j, i, true);
            }
        }
    }
    m
}

/// Tucker's theorem and `(M * X) * Y = M * (X △ Y)` for every admissible
/// `X` and every `Y` accepted by `take_y`. Returns the number of `(X, Y)`
/// pairs checked.
pub fn pivot_laws(m: &BitMatrix, mut take_y: impl FnMut(u32) -> bool) -> Result<usize, String> {
    let n = m.rows();
    let rows = to_rows(m);
    let mut checked = 0;
    for xm in 0u32..1 << n {
        let x = mask_indices(xm, n);
        let admissible = det_oracle(&principal_rows(&rows, &x));
        let pivoted = m.principal_pivot(&x);
        if pivoted.is_some() != admissible {
            return Err(format!("pivot on {x:?} defined={} but det={admissible}", pivoted.is_some()));
        }
        let Some(p) = pivoted else { continue };
        let p_rows = to_rows(&p);
        for ym in (0u32..1 << n).filter(|&y| take_y(y)) {
            let y = mask_indices(ym, n);
            let sym = mask_indices(xm ^ ym, n);
            let left = det_oracle(&principal_rows(&p_rows, &y));
            let right = det_oracle(&principal_rows(&rows, &sym));
            if left != right {
                return Err(format!("Tucker fails for X={x:?} Y={y:?} on {rows:?}"));
            }
            if left && p.principal_pivot(&y) != m.principal_pivot(&sym) {
                return Err(format!("composition fails for X={x:?} Y={y:?} on {rows:?}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// A chain `C_1 .. C_{len}` of compatible shapes with sides in `1..=3`,
/// closing back to the first side.
pub fn random_chain(rng: &mut StdRng, len: usize) -> Vec<BitMatrix> {
    let sides: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=3)).collect();
    (0..len)
        .map(|i| random_matrix(rng, sides[i], sides[(i + 1) % len]))
        .collect()
}

/// The cyclic block matrix: `C_1` right of a zero block in the first
/// block row, then `I C_{i+1}` along the diagonal and `C_{len}` in the
/// first block column of the last block row.
pub fn cyclic_block(chain: &[BitMatrix]) -> Rows {
    let sizes: Vec<usize> = chain.iter().map(BitMatrix::rows).collect();
    let offset: Vec<usize> = sizes.iter().scan(0, |acc, s| {
        let o = *acc;
        *acc += s;
        Some(o)
    }).collect();
    let total: usize = sizes.iter().sum();
    let mut out = vec![vec![0u8; total]; total];
    let last = chain.len() - 1;
    for (i, c) in chain.iter().enumerate() {
        let col_block = if i == last { 0 } else { i + 1 };
        for r in 0..c.rows() {
            for k in 0..c.cols() {
                out[offset[i] + r][offset[col_block] + k] = u8::from(c.get(r, k));
            }
            if i > 0 {
                out[offset[i] + r][offset[i] + r] = 1;
            }
        }
    }
    out
}

pub fn block_determinant(chain: &[BitMatrix]) -> Result<(), String> {
    let product = chain[1..]
        .iter()
        .fold(to_rows(&chain[0]), |acc, c| mul_oracle(&acc, &to_rows(c), c.cols()));
    let block = cyclic_block(chain);
    if det_oracle(&block) == det_oracle(&product) {
        Ok(())
    } else {
        Err(format!("block determinant differs for chain {:?}", chain.iter().map(to_rows).collect::<Vec<_>>()))
    }
}

/// `P * M[basis] = M` for the greedy basis, which has the oracle rank.
pub fn express_extend(m: &BitMatrix, seed: &[usize]) -> Result<(), String> {
    let basis = m.extend_basis(seed).map_err(|r| format!("seed row {r} rejected"))?;
    if basis.len() != rank_oracle(&to_rows(m)) || !basis.starts_with(seed) {
        return Err(format!("basis {basis:?} of {:?}", to_rows(m)));
    }
    let p = m.express_rows(&basis).map_err(|e| format!("{e:?}"))?;
    let all: Vec<usize> = (0..m.cols()).collect();
    let rebuilt = mul_oracle(&to_rows(&p), &to_rows(&m.submatrix(&basis, &all)), m.cols());
    if rebuilt != to_rows(m) {
        return Err(format!("reconstruction differs for {:?}", to_rows(m)));
    }
    Ok(())
}

/// Random graph with a degree-one vertex `u` hanging from `v`, checked
/// for `G ∧ uv \ {u, v} = G \ {u, v}`.
pub fn degree_one_pivot(rng: &mut StdRng) -> Result<(), String> {
    let n = rng.gen_range(3..=10);
    let p = rng.gen_range(0.2..0.8);
    let mut g = super::random_graph(rng, n - 1, p);
    let u = g.add_vertex("u").unwrap();
    let v = rng.gen_range(0..n - 1);
    let v_label = g.label(v).to_string();
    g.add_edge("u", &v_label).unwrap();
    assert_eq!(g.degree(u), 1);
    let pivoted = g.pivot_edge("u", &v_label).unwrap();
    let pair = ["u", v_label.as_str()];
    let left = pivoted.delete_vertices(&pair).unwrap();
    let right = g.delete_vertices(&pair).unwrap();
    if left == right {
        Ok(())
    } else {
        Err(format!("{g:?} at u{v_label}"))
    }
}

/// Validity of a tree-decomposition, checked from scratch.
pub fn tree_decomposition_oracle(td: &TreeDecomposition, h: &Graph) -> Result<usize, String> {
    let t = &td.tree;
    if !(t.is_tree() || t.n() == 0 && h.n() == 0) {
        return Err("decomposition tree is not a tree".into());
    }
    let mut holders: HashMap<&str, Vec<usize>> = HashMap::new();
    for (node, bag) in &td.bags {
        let i = t.index_of(node).ok_or_else(|| format!("bag for unknown node {node}"))?;
        for v in bag {
            holders.entry(v.as_str()).or_default().push(i);
        }
    }
    for v in h.labels() {
        let Some(nodes) = holders.get(v.as_str()) else {
            return Err(format!("{v} is in no bag"));
        };
        let keep: Vec<String> = nodes.iter().map(|&i| t.label(i).to_string()).collect();
        if !t.induced_subgraph(&keep).unwrap().is_connected() {
            return Err(format!("bags holding {v} are not connected"));
        }
    }
    for (a, b) in h.edge_labels() {
        if !td.bags.values().any(|bag| bag.iter().any(|x| x == a) && bag.iter().any(|x| x == b)) {
            return Err(format!("edge {a}{b} is in no bag"));
        }
    }
    Ok(td.bags.values().map(Vec::len).max().unwrap_or(1).saturating_sub(1))
}

/// Host after the pivots of a greedy edge sequence, restricted to the
/// embedding, compared with `g`.
fn pivot_minor_oracle(
    g: &Graph,
    host: &Graph,
    pivot_set: &[String],
    embed: &std::collections::BTreeMap<String, String>,
) -> Result<(), String> {
    let script = host.pivot_script(pivot_set).map_err(|e| e.to_string())?;
    let pivoted = rankexp::apply_script(host, &script).map_err(|e| e.to_string())?;
    for (i, a) in g.labels().iter().enumerate() {
        for b in &g.labels()[i + 1..] {
            if pivoted.has_edge(&embed[a], &embed[b]) != g.has_edge(a, b) {
                return Err(format!("pair {a}{b} differs after pivoting"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Default, Clone, Copy)]
pub struct InstanceStats {
    pub host_size: usize,
    pub pairs: usize,
}

/// Pipeline on one graph with `k` its optimal (linear) rank-width: the
/// pivot-minor claim, the size bound, the decomposition and its width,
/// and, for tree mode, path reduction on every vertex pair.
pub fn theorem_instance(g: &Graph, linear: bool) -> Result<InstanceStats, String> {
    let search = if linear {
        brute_force_linear_rank_width(g, 8)
    } else {
        brute_force_rank_width(g, 8)
    }
    .map_err(|e| e.to_string())?;
    let k = search.width;
    let n = g.n();
    let opts = DriverOptions {
        k: Some(k),
        linear,
        ..DriverOptions::default()
    };
    let cert = theorem_driver(g, &opts).map_err(|e| e.to_string())?;
    pivot_minor_oracle(g, &cert.host, &cert.pivot_set, &cert.embed)?;
    let bound = ((2 * k + 1) * n).saturating_sub(6 * k);
    if cert.host.n() > bound {
        return Err(format!("|V(H)| = {} exceeds {bound}", cert.host.n()));
    }
    let width = tree_decomposition_oracle(&cert.decomposition, &cert.host)?;
    let width_bound = if linear { k + 1 } else { 2 * k };
    if width > width_bound {
        return Err(format!("decomposition width {width} exceeds {width_bound}"));
    }
    if linear && !(cert.decomposition.tree.is_path() && cert.decomposition.path) {
        return Err("decomposition is not a path".into());
    }
    let report = cert.verify(8);
    if !report.holds() {
        return Err(format!("certificate rejected: {:?}", report.issues));
    }
    let mut pairs = 0;
    if !linear && n >= 3 && g.is_connected() {
        let x = expand(g, &search.decomposition.unwrap(), None).map_err(|e| e.to_string())?;
        let adj = to_rows(x.host.adjacency_bits());
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (g.label(i), g.label(j));
                let block = path_block(&x, a, b).map_err(|e| e.to_string())?;
                if det_oracle(&principal_rows(&adj, &block)) != g.adjacent(i, j) {
                    return Err(format!("path reduction fails for {a}{b}"));
                }
                pairs += 1;
            }
        }
    }
    Ok(InstanceStats {
        host_size: cert.host.n(),
        pairs,
    })
}

fn witness_outcome(w: Result<Witness, CharacterizeError>) -> Result<Option<Witness>, String> {
    match w {
        Ok(w) => {
            w.validate()?;
            Ok(Some(w))
        }
        Err(CharacterizeError::WidthExceeded { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

/// rw ≤ 1, distance-hereditary, no C5 vertex-minor and a replaying tree
/// witness agree.
pub fn tree_equivalence(g: &Graph) -> Result<bool, String> {
    let rw1 = brute_force_rank_width(g, 8).map_err(|e| e.to_string())?.width <= 1;
    let dh = is_distance_hereditary(g, 10).map_err(|e| e.to_string())?;
    let no_c5 = !has_vertex_minor(g, &c5(), 9).map_err(|e| e.to_string())?;
    let witness = witness_outcome(tree_witness_rw1(g, 8))?;
    if let Some(w) = &witness {
        if !w.host.is_tree() {
            return Err("tree witness host is not a tree".into());
        }
    }
    let values = [rw1, dh, no_c5, witness.is_some()];
    if values.iter().all(|&b| b == rw1) {
        Ok(rw1)
    } else {
        Err(format!("{g:?}: rw<=1 {rw1}, distance-hereditary {dh}, no C5 {no_c5}, witness {}", values[3]))
    }
}

/// lrw ≤ 1, no C5/N/Q vertex-minor and a replaying path witness agree.
pub fn path_equivalence(g: &Graph) -> Result<bool, String> {
    let lrw1 = brute_force_linear_rank_width(g, 8).map_err(|e| e.to_string())?.width <= 1;
    let mut found = BTreeSet::new();
    for (name, pattern) in linear_obstructions() {
        if has_vertex_minor(g, &pattern, 9).map_err(|e| e.to_string())? {
            found.insert(name);
        }
    }
    let witness = witness_outcome(path_witness_lrw1(g, 8))?;
    if let Some(w) = &witness {
        if !w.host.is_path() {
            return Err("path witness host is not a path".into());
        }
    }
    if lrw1 == found.is_empty() && lrw1 == witness.is_some() {
        Ok(lrw1)
    } else {
        Err(format!("{g:?}: lrw<=1 {lrw1}, obstructions {found:?}, witness {}", witness.is_some()))
    }
}

fn has_triangle(h: &Graph) -> bool {
    (0..h.n()).any(|a| {
        h.neighbors(a)
            .filter(|&b| b > a)
            .any(|b| h.neighbors(b).any(|c| c > b && h.adjacent(a, c)))
    })
}

/// For a connected bipartite graph: pivot-only witnesses on a tree (rw ≤ 1)
/// and on a path (lrw ≤ 1), and triangle-free width-one expansions.
/// Returns how many witnesses were checked.
pub fn bipartite_witnesses(g: &Graph) -> Result<usize, String> {
    let rw = brute_force_rank_width(g, 8).map_err(|e| e.to_string())?;
    let lrw = brute_force_linear_rank_width(g, 8).map_err(|e| e.to_string())?;
    let mut count = 0;
    let mut check = |w: Result<Witness, CharacterizeError>, path: bool| -> Result<(), String> {
        let w = w.map_err(|e| format!("{g:?}: {e}"))?;
        w.validate()?;
        if w.uses_local_complementation() {
            return Err(format!("{g:?}: witness uses local complementation"));
        }
        let shaped = if path { w.host.is_path() } else { w.host.is_tree() };
        if !shaped {
            return Err(format!("{g:?}: witness host has the wrong shape"));
        }
        count += 1;
        Ok(())
    };
    if rw.width <= 1 {
        check(bipartite_tree_witness(g, 8), false)?;
    }
    if lrw.width <= 1 {
        check(bipartite_path_witness(g, 8), true)?;
    }
    for r in [rw, lrw] {
        if let (true, Some(d)) = (r.width <= 1 && g.n() >= 3, r.decomposition) {
            let x = expand(g, &d, None).map_err(|e| e.to_string())?;
            if has_triangle(&x.host) {
                return Err(format!("{g:?}: width-one expansion has a triangle"));
            }
        }
    }
    Ok(count)
}
