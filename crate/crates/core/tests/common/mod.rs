//! Shared fixtures: the seven-vertex worked example and small generators.
#![allow(dead_code)]

pub mod checks;

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::Rng;
use rankexp::decomposition::RankDecomposition;
use rankexp::expansion::{BasisAssignment, OrientedDecomposition};
use rankexp::Graph;

pub const EXAMPLE_EDGES: [(&str, &str); 12] = [
    ("a1", "a2"),
    ("a1", "a5"),
    ("a1", "a4"),
    ("a2", "a4"),
    ("a2", "a3"),
    ("a3", "a7"),
    ("a4", "a6"),
    ("a3", "a4"),
    ("a5", "a6"),
    ("a6", "a7"),
    ("a1", "a6"),
    ("a3", "a6"),
];

/// Root leaf of the worked example.
pub const EXAMPLE_ROOT: &str = "L(a2)";

pub fn example_graph() -> Graph {
    let mut g = Graph::with_vertices((1..=7).map(|i| format!("a{i}"))).unwrap();
    for (u, v) in EXAMPLE_EDGES {
        g.add_edge(u, v).unwrap();
    }
    g
}

/// Inner nodes `p w v q r`; `p - w` is edge d, `w - v` is e, `v - q` is f1
/// and `v - r` is f2.
pub fn example_decomposition() -> RankDecomposition {
    let tree = Graph::from_edges(&[
        ("L(a2)", "p"),
        ("L(a1)", "p"),
        ("p", "w"),
        ("w", "L(a3)"),
        ("w", "v"),
        ("v", "q"),
        ("v", "r"),
        ("q", "L(a4)"),
        ("q", "L(a5)"),
        ("r", "L(a6)"),
        ("r", "L(a7)"),
    ])
    .unwrap();
    let leaf_map = (1..=7).map(|i| (format!("a{i}"), format!("L(a{i})"))).collect();
    RankDecomposition {
        tree,
        leaf_map,
        linear: false,
    }
}

pub fn example_oriented() -> OrientedDecomposition {
    OrientedDecomposition::new(example_decomposition(), EXAMPLE_ROOT).unwrap()
}

/// The bases of the worked example; `e_order` fixes the order of `U_e`.
pub fn example_bases(o: &OrientedDecomposition, e_order: [&str; 3]) -> BasisAssignment {
    let named: Vec<(&str, Vec<&str>)> = vec![
        ("L(a2)>p", vec!["a4"]),
        ("p>L(a1)", vec!["a1"]),
        ("p>w", vec!["a4", "a5"]),
        ("w>L(a3)", vec!["a3"]),
        ("w>v", e_order.to_vec()),
        ("v>q", vec!["a4", "a5"]),
        ("v>r", vec!["a6", "a7"]),
        ("q>L(a4)", vec!["a4"]),
        ("q>L(a5)", vec!["a5"]),
        ("r>L(a6)", vec!["a6"]),
        ("r>L(a7)", vec!["a7"]),
    ];
    BasisAssignment::from_names(&example_graph(), o, named).unwrap()
}

pub fn random_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_indexed(n, &edges)
}

pub fn random_connected_graph(rng: &mut StdRng, n: usize, p: f64) -> Graph {
    loop {
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}

/// Row `label → bits` view of a labelled matrix.
pub fn rows(m: &rankexp::Gf2Matrix<String>) -> BTreeMap<String, Vec<u8>> {
    let cols = m.col_labels().len();
    m.row_labels()
        .iter()
        .enumerate()
        .map(|(r, l)| (l.to_string(), (0..cols).map(|c| u8::from(m.bits().get(r, c))).collect()))
        .collect()
}

/// Named checks of the worked example against its known values.
pub fn worked_example_checks() -> Vec<(&'static str, Result<(), String>)> {
    use rankexp::expansion::{
        build_expansion, coefficient_matrix, expansion_tree_decomposition, path_reduction_check,
        row_expression, verify_pivot_minor,
    };
    use std::collections::BTreeSet;

    fn check(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(detail())
        }
    }

    let g = example_graph();
    let o = example_oriented();
    let u = example_bases(&o, ["a4", "a5", "a7"]);
    let edge = |name: &str| o.edge_by_name(name).unwrap();
    let as_set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
    let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
    let mut out = Vec::new();

    let expected_bases = [
        ("p>w", set(&["a4", "a5"])),
        ("w>v", set(&["a4", "a5", "a7"])),
        ("v>q", set(&["a4", "a5"])),
        ("v>r", set(&["a6", "a7"])),
    ];
    out.push((
        "bases U_d U_e U_f1 U_f2",
        expected_bases.iter().try_for_each(|(name, want)| {
            let got = as_set(&u.bases[edge(name)]);
            check(got == *want, || format!("{name}: {got:?} != {want:?}"))
        }),
    ));

    let p_e = row_expression(&g, &o, &u, edge("w>v")).unwrap();
    let want: BTreeMap<String, Vec<u8>> = [
        ("a4", vec![1, 0, 0]),
        ("a5", vec![0, 1, 0]),
        ("a6", vec![0, 1, 1]),
        ("a7", vec![0, 0, 1]),
    ]
    .into_iter()
    .map(|(l, r)| (l.to_string(), r))
    .collect();
    out.push((
        "P_e",
        check(p_e.col_labels() == ["a4", "a5", "a7"] && rows(&p_e) == want, || format!("{p_e:?}")),
    ));

    let c1 = coefficient_matrix(&g, &o, &u, edge("v>q")).unwrap();
    let c2 = coefficient_matrix(&g, &o, &u, edge("v>r")).unwrap();
    let sub = |keys: &[&str]| -> BTreeMap<String, Vec<u8>> {
        keys.iter().map(|k| (k.to_string(), want[*k].clone())).collect()
    };
    out.push((
        "C_f1 and C_f2",
        check(rows(&c1) == sub(&["a4", "a5"]) && rows(&c2) == sub(&["a6", "a7"]), || {
            format!("{c1:?} {c2:?}")
        }),
    ));

    let x = build_expansion(&g, &o, &u).unwrap();
    let triples: usize = o
        .inner_nodes()
        .iter()
        .map(|&v| {
            let mut edges: Vec<usize> = o.outgoing(v).to_vec();
            edges.extend(o.incoming(v));
            edges.iter().map(|&e| u.bases[e].len()).sum::<usize>()
        })
        .sum();
    out.push((
        "|V(H)| = 25",
        check(x.host.n() == 25 && triples == 25, || format!("{} vertices, {triples} triples", x.host.n())),
    ));
    out.push((
        "|E_I(T)| = 4",
        check(x.inner_edge_count() == 4, || format!("{}", x.inner_edge_count())),
    ));

    let sector = &x.sectors["v"];
    let mut got = BTreeSet::new();
    for (i, s) in sector.iter().enumerate() {
        for t in &sector[i + 1..] {
            if x.host.has_edge(s, t) {
                got.insert(BTreeSet::from([s.clone(), t.clone()]));
            }
        }
    }
    let want: BTreeSet<BTreeSet<String>> = [
        ("(a4,v>q,v)", "(a4,w>v,v)"),
        ("(a5,v>q,v)", "(a5,w>v,v)"),
        ("(a6,v>r,v)", "(a5,w>v,v)"),
        ("(a6,v>r,v)", "(a7,w>v,v)"),
        ("(a7,v>r,v)", "(a7,w>v,v)"),
        ("(a4,v>q,v)", "(a6,v>r,v)"),
        ("(a5,v>q,v)", "(a6,v>r,v)"),
    ]
    .into_iter()
    .map(|(s, t)| BTreeSet::from([s.to_string(), t.to_string()]))
    .collect();
    out.push((
        "sector S_v edge set",
        check(sector.len() == 7 && got == want, || format!("{got:?}")),
    ));

    let pm = verify_pivot_minor(&g, &x).unwrap();
    out.push(("pivot-minor", check(pm.holds, || format!("{:?}", pm.mismatches))));

    let fig_order = example_bases(&o, ["a7", "a5", "a4"]);
    let y = build_expansion(&g, &o, &fig_order).unwrap();
    let td = expansion_tree_decomposition(&y);
    let width = td.validated_width(&y.host);
    out.push((
        "tree-decomposition width <= 6",
        check(matches!(width, Ok(w) if w <= 6), || format!("{width:?}")),
    ));
    let z1: BTreeSet<String> = td.bags["z1[v]"].iter().cloned().collect();
    let want_z1 = set(&["(a7,w>v,w)", "(a5,w>v,w)", "(a4,w>v,w)", "(a7,w>v,v)"]);
    out.push(("first slide bag into v", check(z1 == want_z1, || format!("{z1:?}"))));

    let mut bad = Vec::new();
    for i in 1..=7 {
        for j in i + 1..=7 {
            let (a, b) = (format!("a{i}"), format!("a{j}"));
            let r = path_reduction_check(&g, &x, &a, &b).unwrap();
            if !r.consistent() || r.nonsingular != g.has_edge(&a, &b) {
                bad.push((a, b));
            }
        }
    }
    out.push(("path reduction on all 21 pairs", check(bad.is_empty(), || format!("{bad:?}"))));
    out
}
