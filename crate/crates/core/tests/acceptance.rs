//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! if any criterion fails. Sweeps run in parallel; output order is fixed.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::checks::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rankexp::characterize::{c5, net, q_graph};
use rankexp::decomposition::{brute_force_linear_rank_width, brute_force_rank_width};
use rankexp::iso::connected_graphs_of_order;
use rankexp::Graph;
use rayon::prelude::*;

const SEED: u64 = 0x5eed_2024;

type Criterion = fn() -> Result<String, String>;

fn connected_up_to(lo: usize, hi: usize) -> Vec<Graph> {
    (lo..=hi).flat_map(connected_graphs_of_order).collect()
}

/// First failure in input order, or the collected results.
fn sweep<T: Send>(graphs: &[Graph], f: impl Fn(&Graph) -> Result<T, String> + Sync + Send) -> Result<Vec<T>, String> {
    graphs.par_iter().map(f).collect::<Vec<_>>().into_iter().collect()
}

fn expansion_sweep(linear: bool) -> Result<String, String> {
    let graphs = connected_up_to(3, 6);
    let stats = sweep(&graphs, |g| theorem_instance(g, linear))?;
    let hosts: usize = stats.iter().map(|s| s.host_size).sum();
    let pairs: usize = stats.iter().map(|s| s.pairs).sum();
    let mut msg = format!("{} connected graphs, {hosts} host vertices in total", graphs.len());
    if !linear {
        msg.push_str(&format!(", {pairs} vertex pairs path-reduced"));
    }
    Ok(msg)
}

fn criterion_1() -> Result<String, String> {
    expansion_sweep(false)
}

fn criterion_2() -> Result<String, String> {
    expansion_sweep(true)
}

fn criterion_3() -> Result<String, String> {
    let checks = common::worked_example_checks();
    for (name, result) in &checks {
        if let Err(e) = result {
            return Err(format!("{name}: {e}"));
        }
    }
    Ok(format!("{} golden checks", checks.len()))
}

fn criterion_4() -> Result<String, String> {
    let matrices: Vec<_> = (0..200u64)
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(SEED ^ i);
            let n = rng.gen_range(4..=8);
            random_symmetric(&mut rng, n)
        })
        .collect();
    let pairs: Vec<usize> = matrices
        .par_iter()
        .map(|m| pivot_laws(m, |_| true))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut rng = StdRng::seed_from_u64(SEED);
    let chains = 2000;
    for i in 0..chains {
        let len = 2 + i % 4;
        block_determinant(&random_chain(&mut rng, len))?;
    }
    Ok(format!(
        "200 matrices, {} (X, Y) pairs; {chains} block chains",
        pairs.iter().sum::<usize>()
    ))
}

fn criterion_5() -> Result<String, String> {
    let graphs = connected_up_to(1, 6);
    let verdicts = sweep(&graphs, tree_equivalence)?;
    let yes = verdicts.iter().filter(|&&b| b).count();
    Ok(format!("{} connected graphs, {yes} of rank-width at most 1", graphs.len()))
}

fn criterion_6() -> Result<String, String> {
    let graphs = connected_up_to(1, 6);
    let verdicts = sweep(&graphs, path_equivalence)?;
    let yes = verdicts.iter().filter(|&&b| b).count();
    Ok(format!("{} connected graphs, {yes} of linear rank-width at most 1", graphs.len()))
}

fn criterion_7() -> Result<String, String> {
    let graphs: Vec<Graph> = connected_up_to(1, 6).into_iter().filter(Graph::is_bipartite).collect();
    let counts = sweep(&graphs, bipartite_witnesses)?;
    Ok(format!(
        "{} connected bipartite graphs, {} pivot-only witnesses",
        graphs.len(),
        counts.iter().sum::<usize>()
    ))
}

fn criterion_8() -> Result<String, String> {
    let widths = [
        ("rw(C5)", brute_force_rank_width(&c5(), 8)),
        ("lrw(N)", brute_force_linear_rank_width(&net(), 8)),
        ("lrw(Q)", brute_force_linear_rank_width(&q_graph(), 8)),
    ];
    let mut parts = Vec::new();
    for (name, r) in widths {
        let w = r.map_err(|e| e.to_string())?.width;
        if w != 2 {
            return Err(format!("{name} = {w}"));
        }
        parts.push(format!("{name} = 2"));
    }
    Ok(parts.join(", "))
}

fn criterion_9() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(SEED);
    for _ in 0..100 {
        degree_one_pivot(&mut rng)?;
    }
    Ok("100 random instances".into())
}

fn criterion_10() -> Result<String, String> {
    let graphs = connected_up_to(3, 6);
    let stats = sweep(&graphs, |g| theorem_instance(g, false))?;
    Ok(format!(
        "{} vertex pairs over {} graphs",
        stats.iter().map(|s| s.pairs).sum::<usize>(),
        graphs.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("expansion sweep, tree-decompositions of width <= 2k", criterion_1),
        ("expansion sweep, path-decompositions of width <= k+1", criterion_2),
        ("worked example golden values", criterion_3),
        ("principal pivot laws and block determinants", criterion_4),
        ("rank-width one equivalences", criterion_5),
        ("linear rank-width one equivalences", criterion_6),
        ("bipartite pivot-minor witnesses", criterion_7),
        ("obstruction widths", criterion_8),
        ("degree-one pivots", criterion_9),
        ("path reduction determinants", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {:>2}: {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name}: {e} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
