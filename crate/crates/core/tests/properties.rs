mod common;

use common::checks::*;
use common::random_graph;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use rankexp::decomposition::{brute_force_linear_rank_width, brute_force_rank_width, RankDecomposition};
use rankexp::expansion::{
    assign_bases, build_expansion, coefficient_matrix, expansion_tree_decomposition, OrientedDecomposition,
};
use rankexp::io::{emit_graph, parse_graph, Format};
use rankexp::iso::{are_isomorphic, connected_graphs_of_order, graphs_of_order};
use rankexp::{BitMatrix, Graph};

fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tucker_and_composition(seed in any::<u64>(), n in 4usize..=7) {
        let m = random_symmetric(&mut rng(seed), n);
        prop_assert!(pivot_laws(&m, |_| true).is_ok(), "{:?}", pivot_laws(&m, |_| true));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn block_determinant_lemma(seed in any::<u64>(), n in 1usize..=4) {
        let chain = random_chain(&mut rng(seed), n + 1);
        prop_assert!(block_determinant(&chain).is_ok());
    }

    #[test]
    fn express_rows_after_extend_basis_reconstructs(
        seed in any::<u64>(),
        rows in 1usize..=6,
        cols in 1usize..=6,
        inner in 0usize..=4,
    ) {
        let mut r = rng(seed);
        let m = random_matrix(&mut r, rows, inner).mul(&random_matrix(&mut r, inner, cols));
        prop_assert!(express_extend(&m, &[]).is_ok(), "{:?}", express_extend(&m, &[]));
        // a seed of one nonzero row
        if let Some(s) = (0..rows).find(|&i| !m.row_is_zero(i)) {
            prop_assert!(express_extend(&m, &[s]).is_ok());
        }
    }

    #[test]
    fn degree_one_pivot_leaves_the_rest_unchanged(seed in any::<u64>()) {
        let result = degree_one_pivot(&mut rng(seed));
        prop_assert!(result.is_ok(), "{:?}", result);
    }

    #[test]
    fn formats_round_trip(seed in any::<u64>(), n in 0usize..=10, p in 0.0f64..1.0) {
        let g = random_graph(&mut rng(seed), n, p);
        for format in [Format::Graph6, Format::EdgeList, Format::Json] {
            let text = emit_graph(&g, format).unwrap();
            let back = parse_graph(&text, Some(format)).unwrap();
            prop_assert_eq!(&back, &g, "{}", format);
        }
    }

    #[test]
    fn pivot_scripts_replay_as_local_complementations(seed in any::<u64>(), n in 2usize..=8) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.5);
        let x: Vec<String> = (0..n).filter(|_| rand::Rng::gen_bool(&mut r, 0.5)).map(|i| i.to_string()).collect();
        if let Ok(script) = g.pivot_script(&x) {
            let by_pivots = rankexp::apply_script(&g, &script).unwrap();
            let by_lc = rankexp::apply_script(&g, &script.as_local_complementations()).unwrap();
            prop_assert_eq!(by_pivots, by_lc);
        }
    }

    #[test]
    fn relabelled_graphs_are_isomorphic(seed in any::<u64>(), n in 1usize..=9) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, n, 0.4);
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut r);
        let edges: Vec<_> = g.edges().into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
        let h = Graph::from_indexed(n, &edges);
        let map = are_isomorphic(&g, &h).unwrap();
        for (u, v) in g.edge_labels() {
            let image = |x: &str| map.iter().find(|(a, _)| a == x).unwrap().1.clone();
            prop_assert!(h.has_edge(&image(u), &image(v)));
        }
    }

    #[test]
    fn random_decompositions_expand_correctly(seed in any::<u64>(), n in 3usize..=8) {
        let mut r = rng(seed);
        let g = common::random_connected_graph(&mut r, n, 0.45);
        let mut order: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut r);
        let d = RankDecomposition::caterpillar(&g, &order);
        let k = d.width(&g).unwrap();
        let x = rankexp::expansion::expand(&g, &d, None).unwrap();
        prop_assert!(rankexp::expansion::verify_pivot_minor(&g, &x).unwrap().holds);
        prop_assert!(x.host.n() <= (2 * k + 1) * n - 6 * k);
        let td = expansion_tree_decomposition(&x);
        let w = tree_decomposition_oracle(&td, &x.host).unwrap();
        prop_assert!(w <= 2 * k);
        let linear = rankexp::expansion::expansion_path_decomposition(&x).unwrap();
        prop_assert!(tree_decomposition_oracle(&linear, &x.host).unwrap() <= k + 1);
    }
}

/// `C_{e_1} ⋯ C_{e_m} · A(G)[U_{e_{m+1}}, B_{e_{m+1}}] = A(G)[U_{e_1}, B_{e_{m+1}}]`
/// for every directed path climbing from `e_1` towards the root, on
/// optimal decompositions of all connected graphs with five or six
/// vertices.
#[test]
fn products_along_directed_paths() {
    for n in 5..=6 {
        for g in connected_graphs_of_order(n) {
            let d = brute_force_rank_width(&g, 8).unwrap().decomposition.unwrap();
            let root = rankexp::expansion::default_root_leaf(&g, &d, false).unwrap();
            let o = OrientedDecomposition::new(d, &root).unwrap();
            let u = assign_bases(&g, &o).unwrap();
            let a = g.adjacency_matrix();
            let outside = |e: usize| -> Vec<String> {
                g.labels()
                    .iter()
                    .filter(|v| !o.edges[e].below.contains(v))
                    .cloned()
                    .collect()
            };
            for first in 1..o.edges.len() {
                let mut acc = coefficient_matrix(&g, &o, &u, first).unwrap();
                let mut top = o.incoming(o.tail(first)).unwrap();
                loop {
                    let b = outside(top);
                    let lhs = acc.mul(&a.submatrix(&u.bases[top], &b).unwrap()).unwrap();
                    let rhs = a.submatrix(&u.bases[first], &b).unwrap();
                    assert_eq!(
                        to_rows(lhs.bits()),
                        to_rows(rhs.bits()),
                        "{g:?} from {} to {}",
                        o.edges[first].name(),
                        o.edges[top].name()
                    );
                    let Some(next) = o.incoming(o.tail(top)) else { break };
                    acc = acc.mul(&coefficient_matrix(&g, &o, &u, top).unwrap()).unwrap();
                    top = next;
                }
            }
        }
    }
}

/// Every subset of inner-edge blocks induces a nonsingular submatrix.
#[test]
fn inner_blocks_are_nonsingular() {
    for n in 3..=6 {
        for g in connected_graphs_of_order(n) {
            let d = brute_force_rank_width(&g, 8).unwrap().decomposition.unwrap();
            let root = rankexp::expansion::default_root_leaf(&g, &d, false).unwrap();
            let o = OrientedDecomposition::new(d, &root).unwrap();
            let u = assign_bases(&g, &o).unwrap();
            let x = build_expansion(&g, &o, &u).unwrap();
            let inner: Vec<usize> = (0..o.edges.len()).filter(|&e| o.is_inner_edge(e)).collect();
            let adj = to_rows(x.host.adjacency_bits());
            for mask in 0u32..1 << inner.len() {
                let w: Vec<usize> = inner
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .flat_map(|(_, &e)| x.block(e))
                    .collect();
                let sub: Rows = w.iter().map(|&r| w.iter().map(|&c| adj[r][c]).collect()).collect();
                assert!(det_oracle(&sub), "{g:?} inner mask {mask:b}");
            }
        }
    }
}

#[test]
fn rank_width_is_at_most_linear_rank_width() {
    for n in 1..=7 {
        for g in graphs_of_order(n) {
            let rw = brute_force_rank_width(&g, 8).unwrap();
            let lrw = brute_force_linear_rank_width(&g, 8).unwrap();
            assert!(rw.width <= lrw.width, "{g:?}");
            for r in [rw, lrw] {
                if let Some(d) = r.decomposition {
                    assert_eq!(d.width(&g).unwrap(), r.width, "{g:?}");
                }
            }
        }
    }
}

#[test]
fn widths_do_not_grow_under_vertex_minors() {
    for n in 2..=6 {
        for g in graphs_of_order(n) {
            let rw = brute_force_rank_width(&g, 8).unwrap().width;
            let lrw = brute_force_linear_rank_width(&g, 8).unwrap().width;
            for v in g.labels() {
                for h in [g.clone(), g.local_complement(v).unwrap()] {
                    let child = h.delete_vertices(&[v]).unwrap();
                    assert!(brute_force_rank_width(&child, 8).unwrap().width <= rw);
                    assert!(brute_force_linear_rank_width(&child, 8).unwrap().width <= lrw);
                }
            }
        }
    }
}

#[test]
fn kernel_identity_cases() {
    let m = BitMatrix::identity(4);
    assert!(pivot_laws(&BitMatrix::zeros(4, 4), |_| true).is_ok());
    assert!(express_extend(&m, &[2, 0]).is_ok());
}
