//! Command-line surface of `rankexp`: argument parsing and the commands.
//!
//! Exit codes: 0 success, 1 a checked property fails, 2 usage or input
//! error, 3 a size guard refused the job.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rankexp::characterize::{classify, linear_obstructions, Classification, Limits, Witness, DEFAULT_DH_LIMIT, DEFAULT_MINOR_LIMIT};
use rankexp::decomposition::{
    brute_force_linear_rank_width, brute_force_rank_width, DecompositionError, RankDecomposition,
    DEFAULT_WIDTH_LIMIT,
};
use rankexp::driver::{theorem_driver, Certificate, DriverError, DriverOptions};
use rankexp::io::{self, Format, IoError};
use rankexp::iso::{are_isomorphic, graphs_of_order};
use rankexp::Graph;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Parser)]
#[command(name = "rankexp", version, about = "Rank-expansions, width search and width-one characterizations")]
pub struct Cli {
    /// Report errors as JSON objects on stderr.
    #[arg(long, global = true)]
    pub json_errors: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Graph file, `-` for stdin, or the graph itself with `--inline`.
    pub input: String,
    /// Input format; detected from the content when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    /// Treat INPUT as the graph text rather than a path.
    #[arg(long)]
    pub inline: bool,
}

#[derive(Debug, Args)]
pub struct Guard {
    /// Raise the vertex limit of the exhaustive searches (cost is
    /// exponential in the number of vertices).
    #[arg(long, value_name = "N")]
    pub max_n: Option<usize>,
}

impl Guard {
    fn width(&self) -> usize {
        self.max_n.unwrap_or(DEFAULT_WIDTH_LIMIT)
    }

    fn limits(&self) -> Limits {
        Limits {
            width: self.width(),
            minor: self.max_n.unwrap_or(DEFAULT_MINOR_LIMIT),
            distance_hereditary: self.max_n.unwrap_or(0).max(DEFAULT_DH_LIMIT),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and check a rank-expansion certificate.
    Expand {
        #[command(flatten)]
        input: Input,
        /// Produce a path-decomposition from a linear rank-decomposition.
        #[arg(long)]
        linear: bool,
        /// Width to certify; the expansion fails if the decomposition is wider.
        #[arg(long)]
        k: Option<usize>,
        /// Leaf of the decomposition tree to orient from.
        #[arg(long)]
        root_leaf: Option<String>,
        /// Rank-decomposition JSON to expand instead of searching.
        #[arg(long, value_name = "PATH")]
        decomposition: Option<PathBuf>,
        /// Write the certificate here instead of stdout.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write a DOT rendering of the expansion.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
    /// Re-check a certificate; exits 0 iff it holds.
    Verify {
        /// Certificate JSON, `-` for stdin.
        certificate: String,
        #[command(flatten)]
        guard: Guard,
    },
    /// Exact rank-width with an optimal decomposition.
    Rankwidth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write a DOT rendering of the decomposition tree.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
    /// Exact linear rank-width with an optimal caterpillar decomposition.
    Lrankwidth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
    /// Width-one classification with obstructions and witnesses.
    Characterize {
        #[command(flatten)]
        input: Input,
        /// Write the full classification.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        /// Write the tree witness, if there is one.
        #[arg(long, value_name = "PATH")]
        tree_witness: Option<PathBuf>,
        /// Write the path witness, if there is one.
        #[arg(long, value_name = "PATH")]
        path_witness: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
    /// Replay a witness script and compare with its target graph.
    Replay {
        /// Witness JSON, `-` for stdin.
        witness: String,
        /// Output format for the replayed graph.
        #[arg(long, default_value = "edge-list")]
        format: Format,
    },
    /// Check every graph of one order: certificates in both modes and the
    /// width-one equivalences.
    Sweep {
        /// Number of vertices.
        #[arg(long, value_name = "N")]
        n: usize,
        /// Worker threads; all cores when omitted.
        #[arg(long)]
        jobs: Option<usize>,
        /// Write the per-graph results as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[command(flatten)]
        guard: Guard,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Input {
        context: String,
        #[source]
        source: IoError,
    },
    #[error("{0}")]
    SizeGuard(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::File { .. } | CliError::Input { .. } => 2,
            CliError::SizeGuard(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::File { .. } => "file",
            CliError::Input { .. } => "input",
            CliError::SizeGuard(_) => "size_guard",
            CliError::Failed(_) => "failed",
        }
    }

    pub fn to_json(&self) -> String {
        let mut value = serde_json::json!({
            "error": self.kind(),
            "message": self.to_string(),
            "exit_code": self.exit_code(),
        });
        if let CliError::Input {
            source: IoError::Parse(p),
            ..
        } = self
        {
            value["line"] = p.line.into();
            value["offset"] = p.offset.into();
        }
        value.to_string()
    }
}

impl From<DecompositionError> for CliError {
    fn from(e: DecompositionError) -> Self {
        match e {
            DecompositionError::SizeGuard { .. } => CliError::SizeGuard(format!("{e}; raise it with --max-n")),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<DriverError> for CliError {
    fn from(e: DriverError) -> Self {
        match e {
            DriverError::Decomposition(d) => d.into(),
            DriverError::WidthExceeded { .. } => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<rankexp::characterize::CharacterizeError> for CliError {
    fn from(e: rankexp::characterize::CharacterizeError) -> Self {
        use rankexp::characterize::CharacterizeError as E;
        match e {
            E::SizeGuard { .. } => CliError::SizeGuard(format!("{e}; raise it with --max-n")),
            E::Decomposition(d) => d.into(),
            E::Internal(_) => CliError::Failed(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn read_source(source: &str) -> Result<String, CliError> {
    let file_error = |e| CliError::File {
        path: source.to_string(),
        source: e,
    };
    if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(file_error)?;
        Ok(s)
    } else {
        fs::read_to_string(source).map_err(file_error)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::File {
        path: path.display().to_string(),
        source: e,
    })
}

fn load<T: serde::de::DeserializeOwned>(source: &str, schema: &str) -> Result<T, CliError> {
    let text = read_source(source)?;
    io::from_json(schema, &text).map_err(|e| CliError::Input {
        context: source.to_string(),
        source: e,
    })
}

pub fn read_graph(input: &Input) -> Result<Graph, CliError> {
    let (text, context) = if input.inline {
        (input.input.clone(), "inline graph".to_string())
    } else {
        (read_source(&input.input)?, input.input.clone())
    };
    io::parse_graph(&text, input.format).map_err(|e| CliError::Input { context, source: e })
}

/// Runs one command, returning what it prints on stdout.
pub fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Expand {
            input,
            linear,
            k,
            root_leaf,
            decomposition,
            json,
            dot,
            guard,
        } => {
            let g = read_graph(&input)?;
            let decomposition = match decomposition {
                Some(p) => Some(load::<RankDecomposition>(
                    &p.display().to_string(),
                    io::RANK_DECOMPOSITION_SCHEMA,
                )?),
                None => None,
            };
            let opts = DriverOptions {
                k,
                linear,
                decomposition,
                root_leaf,
                width_limit: guard.width(),
            };
            let cert = theorem_driver(&g, &opts)?;
            expand_outputs(&cert, guard.width(), json.as_deref(), dot.as_deref())
        }
        Command::Verify { certificate, guard } => {
            let cert: Certificate = load(&certificate, io::CERTIFICATE_SCHEMA)?;
            let report = cert.verify(guard.width());
            let text = report_text(&cert, &report);
            if report.holds() {
                Ok(text)
            } else {
                Err(CliError::Failed(format!("{text}certificate does not hold")))
            }
        }
        Command::Rankwidth { input, json, dot, guard } => width_command(&input, false, json, dot, &guard),
        Command::Lrankwidth { input, json, dot, guard } => width_command(&input, true, json, dot, &guard),
        Command::Characterize {
            input,
            json,
            tree_witness,
            path_witness,
            guard,
        } => {
            let g = read_graph(&input)?;
            let c = classify(&g, guard.limits())?;
            if let Some(p) = json {
                write_file(&p, &io::to_json(io::CLASSIFICATION_SCHEMA, &c))?;
            }
            for (path, w) in [(tree_witness, &c.tree_witness), (path_witness, &c.path_witness)] {
                if let (Some(p), Some(w)) = (path, w) {
                    write_file(&p, &io::to_json(io::WITNESS_SCHEMA, w))?;
                }
            }
            Ok(classification_text(&g, &c))
        }
        Command::Replay { witness, format } => {
            let w: Witness = load(&witness, io::WITNESS_SCHEMA)?;
            let replayed = w.replay().map_err(|e| CliError::Failed(e.to_string()))?;
            w.validate()
                .map_err(|e| CliError::Failed(format!("replay does not match the target: {e}")))?;
            // Print under the target's labels; validation made this an isomorphism.
            let names: Vec<&str> = replayed.labels().iter().map(|v| w.target_map[v].as_str()).collect();
            let mut out = Graph::with_vertices(names.iter().copied()).map_err(|e| CliError::Failed(e.to_string()))?;
            for (a, b) in replayed.edges() {
                out.add_edge(names[a], names[b]).map_err(|e| CliError::Failed(e.to_string()))?;
            }
            io::emit_graph(&out, format).map_err(|e| CliError::Input {
                context: "replayed graph".into(),
                source: e,
            })
        }
        Command::Sweep { n, jobs, json, guard } => sweep(n, jobs, json.as_deref(), &guard),
    }
}

fn expand_outputs(cert: &Certificate, width_limit: usize, json: Option<&Path>, dot: Option<&Path>) -> Result<String, CliError> {
    let doc = io::to_json(io::CERTIFICATE_SCHEMA, cert);
    if let Some(p) = dot {
        write_file(p, &io::expansion_dot(&cert.host, &cert.sectors, &cert.pivot_set))?;
    }
    let report = cert.verify(width_limit);
    if !report.holds() {
        return Err(CliError::Failed(format!("{}certificate does not hold", report_text(cert, &report))));
    }
    match json {
        Some(p) => {
            write_file(p, &doc)?;
            Ok(report_text(cert, &report))
        }
        None => Ok(doc),
    }
}

fn report_text(cert: &Certificate, r: &rankexp::driver::CertificateReport) -> String {
    let mut s = String::new();
    let shape = if cert.linear { "path" } else { "tree" };
    writeln!(s, "graph: {} vertices, {} edges, k = {}", cert.graph.n(), cert.graph.edge_count(), cert.k).unwrap();
    writeln!(
        s,
        "host: {} vertices (bound {}), {} edges, pivot set of {}",
        r.size,
        r.size_bound,
        cert.host.edge_count(),
        cert.pivot_set.len()
    )
    .unwrap();
    writeln!(s, "{shape}-decomposition: width {} (bound {})", r.width, r.width_bound).unwrap();
    writeln!(s, "width of graph rechecked: {}", if r.k_checked { "yes" } else { "skipped" }).unwrap();
    for issue in &r.issues {
        writeln!(s, "issue: {issue}").unwrap();
    }
    writeln!(s, "holds: {}", if r.holds() { "yes" } else { "no" }).unwrap();
    s
}

fn width_command(input: &Input, linear: bool, json: Option<PathBuf>, dot: Option<PathBuf>, guard: &Guard) -> Result<String, CliError> {
    let g = read_graph(input)?;
    let r = if linear {
        brute_force_linear_rank_width(&g, guard.width())?
    } else {
        brute_force_rank_width(&g, guard.width())?
    };
    let name = if linear { "linear rank-width" } else { "rank-width" };
    let mut s = format!("{name} {}\n", r.width);
    if let Some(d) = &r.decomposition {
        if let Some(p) = json {
            write_file(&p, &io::to_json(io::RANK_DECOMPOSITION_SCHEMA, d))?;
        }
        if let Some(p) = dot {
            write_file(&p, &io::graph_dot(&d.tree, "decomposition"))?;
        }
        let widths = d.edge_widths(&g).map_err(|e| CliError::Failed(e.to_string()))?;
        for ((u, v), w) in widths {
            writeln!(s, "  {u} -- {v}  {w}").unwrap();
        }
    } else {
        s.push_str("  (no decomposition: fewer than two vertices)\n");
    }
    Ok(s)
}

fn classification_text(g: &Graph, c: &Classification) -> String {
    let dh = if c.distance_hereditary {
        "distance-hereditary"
    } else {
        "not distance-hereditary"
    };
    let obstructions = if c.obstructions.is_empty() {
        "no C5, N or Q vertex-minor".to_string()
    } else {
        let itself = linear_obstructions()
            .into_iter()
            .any(|(name, h)| c.obstructions.iter().any(|o| o == name) && are_isomorphic(g, &h).is_some());
        let suffix = if itself { " of itself" } else { "" };
        format!("obstruction: {} vertex-minor{suffix}", c.obstructions.join(", "))
    };
    let mut s = format!(
        "rank-width {}; linear rank-width {}; {dh}; {obstructions}\n",
        c.rank_width, c.linear_rank_width
    );
    for (name, w) in [("tree witness", &c.tree_witness), ("path witness", &c.path_witness)] {
        match w {
            Some(w) => writeln!(
                s,
                "{name}: host with {} vertices, {} steps{}",
                w.host.n(),
                w.script.len(),
                if w.uses_local_complementation() { "" } else { ", pivots and deletions only" }
            )
            .unwrap(),
            None => writeln!(s, "{name}: none").unwrap(),
        }
    }
    s
}

#[derive(Debug, Clone, serde::Serialize)]
struct SweepRow {
    graph6: String,
    connected: bool,
    rank_width: usize,
    linear_rank_width: usize,
    failures: Vec<String>,
}

fn sweep_one(g: &Graph, guard: &Guard) -> Result<SweepRow, CliError> {
    let mut failures = Vec::new();
    for linear in [false, true] {
        let opts = DriverOptions {
            linear,
            width_limit: guard.width(),
            ..DriverOptions::default()
        };
        let mode = if linear { "path" } else { "tree" };
        match theorem_driver(g, &opts) {
            Ok(cert) => {
                let r = cert.verify(guard.width());
                if !r.holds() {
                    failures.push(format!("{mode} certificate: {}", r.issues.join("; ")));
                }
            }
            Err(DriverError::TooSmall(_)) => {}
            Err(e) => failures.push(format!("{mode} certificate: {e}")),
        }
    }
    let c = classify(g, guard.limits())?;
    let connected = g.is_connected();
    let rw1 = c.rank_width <= 1;
    let lrw1 = c.linear_rank_width <= 1;
    let no_c5 = !c.obstructions.iter().any(|o| o == "C5");
    if rw1 != c.distance_hereditary || rw1 != no_c5 {
        failures.push("rank-width one conditions disagree".into());
    }
    if lrw1 != c.obstructions.is_empty() {
        failures.push("linear rank-width one conditions disagree".into());
    }
    if connected && (rw1 != c.tree_witness.is_some() || lrw1 != c.path_witness.is_some()) {
        failures.push("witness existence disagrees with width".into());
    }
    Ok(SweepRow {
        graph6: io::emit_graph6(g).expect("small graph"),
        connected,
        rank_width: c.rank_width,
        linear_rank_width: c.linear_rank_width,
        failures,
    })
}

fn sweep(n: usize, jobs: Option<usize>, json: Option<&Path>, guard: &Guard) -> Result<String, CliError> {
    let limit = guard.limits().minor.min(guard.width());
    if n > limit {
        return Err(CliError::SizeGuard(format!(
            "sweep order {n} is above the search limit of {limit}; raise it with --max-n"
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let graphs = graphs_of_order(n);
    let rows: Vec<SweepRow> = pool.install(|| {
        graphs
            .par_iter()
            .map(|g| sweep_one(g, guard))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut s = String::new();
    for r in &rows {
        let status = if r.failures.is_empty() {
            "ok".to_string()
        } else {
            format!("FAIL {}", r.failures.join("; "))
        };
        writeln!(s, "{} rw={} lrw={} {status}", r.graph6, r.rank_width, r.linear_rank_width).unwrap();
    }
    let failed = rows.iter().filter(|r| !r.failures.is_empty()).count();
    writeln!(s, "{} graphs on {n} vertices, {failed} failing", rows.len()).unwrap();
    if let Some(p) = json {
        let doc = serde_json::json!({ "schema": "rankexp.sweep/1", "order": n, "graphs": rows });
        write_file(p, &(serde_json::to_string_pretty(&doc).unwrap() + "\n"))?;
    }
    if failed == 0 {
        Ok(s)
    } else {
        Err(CliError::Failed(s))
    }
}
