//! `indpath`: generators, recognizers, the peel recursion and the
//! lower-bound verifiers on edge-list files.
//!
//! Exit codes: 0 on success, 1 when a checked property fails, 2 on usage
//! or input errors.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use indpath_bounds::verify::{run_grid, GridSpec, Verdict, TSV_HEADER};
use indpath_bounds::{default_params, DEFAULT_PRECISION};
use indpath_core::constellation::{
    build_topminor_pattern, build_tr_constellation, is_constellation, is_constellation_inductive, validate_witness, Shape,
};
use indpath_core::io::{parse_edge_list, parse_traced};
use indpath_core::lowerbound::{
    build_construction, build_intervals, check_two_degenerate, ham_path, pattern_is_constellation, to_traced,
    validate_ham_path, ELL_MAX,
};
use indpath_core::oracle::{is_induced_path, longest_induced_path_oracle};
use indpath_core::ordered::{contains_pattern, gen_halfgraph};
use indpath_core::peel::{peel, validate_outcome, PeelConfig, PropOutcome, ToyThresholds};
use indpath_core::{CoreError, OrderedGraph, TracedGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const PRECISION_VAR: &str = "INDPATH_PRECISION";

#[derive(Parser)]
#[command(name = "indpath", version, about = "Long induced paths and ordered patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the lower-bound graph G_l as an edge list.
    GenLowerbound {
        #[arg(long)]
        ell: u32,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Relabel along the Hamiltonian path so the output is a traced graph.
        #[arg(long)]
        traced: bool,
    },
    /// Write a test graph as an edge list.
    GenFixture {
        kind: FixtureKind,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, value_enum, default_value = "sequential")]
        shape: ShapeArg,
        /// Probability of each non-path pair in `random`.
        #[arg(long, default_value_t = 0.1)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether an ordered graph is a constellation.
    Recognize {
        #[arg(long)]
        pattern: PathBuf,
        /// Also run the recognizer that follows the inductive definition.
        #[arg(long)]
        inductive: bool,
    },
    /// Search the pattern graph of a traced graph for an ordered pattern.
    FindPattern {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value_t = 0)]
        gap: usize,
    },
    /// Run the peel recursion and print a checked certificate as JSON.
    Peel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        r: usize,
        /// Use small thresholds that make the recursion work at desk scale.
        #[arg(long)]
        toy: bool,
        #[arg(long, default_value_t = 0)]
        p: u64,
    },
    /// Build G_l and run every structural check on it.
    VerifyLowerbound {
        #[arg(long)]
        ell: u32,
    },
    /// Evaluate the bound inequalities over a grid and print TSV.
    CheckBounds {
        /// Values of r (repeatable); defaults to the grid's own.
        #[arg(long)]
        r: Vec<u64>,
        #[arg(long)]
        t_max: Option<i64>,
        #[arg(long, value_enum, default_value = "default")]
        grid: GridArg,
        /// Working precision in bits; overrides the environment.
        #[arg(long)]
        precision: Option<u32>,
    },
    /// Exhaustive longest induced path (reads stdin without --graph).
    OracleLip {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = usize::MAX)]
        cap: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FixtureKind {
    Path,
    Halfgraph,
    Random,
    Constellation,
    Topminor,
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Sequential,
    Nested,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Default,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Violation(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<indpath_bounds::BoundsError> for Failure {
    fn from(e: indpath_bounds::BoundsError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = run(cli.command, &mut out);
    let flushed = out.flush();
    match res {
        Ok(()) if flushed.is_ok() => ExitCode::SUCCESS,
        Ok(()) => ExitCode::from(2),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(1)
        }
    }
}

fn precision() -> Result<u32, Failure> {
    match std::env::var(PRECISION_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .ok()
            .filter(|&p| p >= 32)
            .ok_or_else(|| Failure::Usage(format!("{PRECISION_VAR} must be an integer >= 32, got {s:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, r: indpath_core::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<OrderedGraph, Failure> {
    with_file(path, parse_edge_list(&read_text(path)?))
}

fn load_traced(path: &Path) -> Result<TracedGraph, Failure> {
    with_file(path, parse_traced(&read_text(path)?))
}

fn write_graph(g: &OrderedGraph, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

fn emit_graph(g: &OrderedGraph, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_graph(g, &mut w)?;
            w.flush()?;
        }
        None => write_graph(g, out)?,
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cmd: Command, out: &mut dyn Write) -> Outcome {
    match cmd {
        Command::GenLowerbound { ell, out: file, traced } => gen_lowerbound(ell, file.as_deref(), traced, out),
        Command::GenFixture {
            kind,
            n,
            t,
            r,
            shape,
            density,
            seed,
            out: file,
        } => {
            let g = fixture(kind, n, t, r, shape, density, seed)?;
            emit_graph(&g, file.as_deref(), out)
        }
        Command::Recognize { pattern, inductive } => recognize(&pattern, inductive, out),
        Command::FindPattern { graph, pattern, gap } => find_pattern(&graph, &pattern, gap, out),
        Command::Peel {
            graph,
            pattern,
            r,
            toy,
            p,
        } => run_peel(&graph, &pattern, r, toy, p, out),
        Command::VerifyLowerbound { ell } => verify_lowerbound(ell, out),
        Command::CheckBounds {
            r,
            t_max,
            grid: GridArg::Default,
            precision: prec,
        } => check_bounds(r, t_max, prec, out),
        Command::OracleLip { graph, cap } => oracle_lip(graph.as_deref(), cap, out),
    }
}

fn gen_lowerbound(ell: u32, file: Option<&Path>, traced: bool, out: &mut dyn Write) -> Outcome {
    if !(1..=ELL_MAX).contains(&ell) {
        return Err(Failure::Usage(format!("--ell must be in [1, {ELL_MAX}]")));
    }
    let c = build_construction(ell)?;
    if traced {
        let path = ham_path(&c);
        let tg = to_traced(&c, &path)?;
        emit_graph(tg.graph(), file, out)
    } else {
        emit_graph(&c.graph, file, out)
    }
}

fn need(name: &str, v: Option<usize>) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{name} is required for this fixture")))
}

fn fixture(
    kind: FixtureKind,
    n: Option<usize>,
    t: Option<usize>,
    r: Option<usize>,
    shape: ShapeArg,
    density: f64,
    seed: u64,
) -> Result<OrderedGraph, Failure> {
    Ok(match kind {
        FixtureKind::Path => TracedGraph::path(need("n", n)?).into_graph(),
        FixtureKind::Halfgraph => gen_halfgraph(need("n", n)?)?.into_graph(),
        FixtureKind::Random => {
            let n = need("n", n)?;
            if !(0.0..=1.0).contains(&density) {
                return Err(Failure::Usage("--density must be in [0, 1]".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pattern = Vec::new();
            for u in 1..=n {
                for v in (u + 2)..=n {
                    if rng.gen_bool(density) {
                        pattern.push((u, v));
                    }
                }
            }
            TracedGraph::from_pattern_edges(n, pattern)?.into_graph()
        }
        FixtureKind::Constellation => {
            let shape = match shape {
                ShapeArg::Sequential => Shape::Sequential,
                ShapeArg::Nested => Shape::Nested,
            };
            build_tr_constellation(need("t", t)?, need("r", r)?, shape)?
        }
        FixtureKind::Topminor => build_topminor_pattern(need("t", t)?)?,
    })
}

fn recognize(path: &Path, inductive: bool, out: &mut dyn Write) -> Outcome {
    let h = load_graph(path)?;
    let found = is_constellation(&h);
    if let Some(w) = &found {
        if !validate_witness(&h, w) {
            return Err(Failure::Violation("recognizer produced an invalid witness".into()));
        }
    }
    if inductive {
        if h.n() > 40 {
            return Err(Failure::Usage("--inductive supports at most 40 vertices".into()));
        }
        let by_definition = is_constellation_inductive(&h);
        writeln!(out, "inductive: {}", if by_definition { "yes" } else { "no" })?;
        if by_definition != found.is_some() {
            return Err(Failure::Violation("the two recognizers disagree".into()));
        }
    }
    match found {
        Some(w) => {
            writeln!(out, "constellation: yes")?;
            writeln!(out, "{}", w.to_json())?;
        }
        None => writeln!(out, "constellation: no")?,
    }
    Ok(())
}

fn find_pattern(graph: &Path, pattern: &Path, gap: usize, out: &mut dyn Write) -> Outcome {
    let g = load_traced(graph)?;
    let h = load_graph(pattern)?;
    match contains_pattern(&g.pattern_graph(), &h, gap)? {
        Some(e) => {
            writeln!(out, "found: yes")?;
            writeln!(out, "positions: {}", join(&e.positions))?;
            writeln!(out, "gap: {}", e.gap(g.n()))?;
        }
        None => writeln!(out, "found: no")?,
    }
    Ok(())
}

fn run_peel(graph: &Path, pattern: &Path, r: usize, toy: bool, p: u64, out: &mut dyn Write) -> Outcome {
    let g = load_traced(graph)?;
    let h = load_graph(pattern)?;
    let cfg = if toy {
        PeelConfig::toy(r, ToyThresholds::standard())?
    } else {
        PeelConfig::compliant(r, default_params(precision()?)?)?
    };
    let outcome = peel(&g, &h, &cfg, p)?;
    let valid = validate_outcome(&g, &h, &outcome, 0);
    let report = match &outcome {
        PropOutcome::P1 { path, anchored } => json!({
            "kind": "P1",
            "vertices": path,
            "anchored": anchored,
            "valid": valid,
        }),
        PropOutcome::P2 { path } => json!({ "kind": "P2", "vertices": path, "valid": valid }),
        PropOutcome::P3 { embedding, gap } => json!({
            "kind": "P3",
            "positions": embedding.positions,
            "gap": gap,
            "valid": valid,
        }),
    };
    writeln!(out, "{report}")?;
    if valid {
        Ok(())
    } else {
        Err(Failure::Violation("certificate failed validation".into()))
    }
}

fn verify_lowerbound(ell: u32, out: &mut dyn Write) -> Outcome {
    if !(1..=ELL_MAX).contains(&ell) {
        return Err(Failure::Usage(format!("--ell must be in [1, {ELL_MAX}]")));
    }
    let mut failed = Vec::new();
    let mut line = |out: &mut dyn Write, name: &'static str, ok: bool, detail: String| -> io::Result<()> {
        if !ok {
            failed.push(name);
        }
        let verdict = if ok { "pass" } else { "FAIL" };
        if detail.is_empty() {
            writeln!(out, "{name}: {verdict}")
        } else {
            writeln!(out, "{name}: {verdict} {detail}")
        }
    };

    let intervals = build_intervals(ell)?;
    writeln!(out, "ell: {ell}")?;
    line(out, "intervals", intervals.check_properties(), format!("({} intervals)", intervals.intervals.len()))?;

    let c = build_construction(ell)?;
    let n = c.graph.n();
    let nodes = c.node_count();
    let expected = 16 * nodes;
    let floor_ok = ell >= 5 || n as u128 >= 1u128 << (1u32 << ell);
    writeln!(out, "vertices: {n}")?;
    writeln!(out, "edges: {}", c.graph.m())?;
    writeln!(out, "ribs: {}", c.rib_count)?;
    line(out, "size", n == expected && floor_ok, format!("(16 * {nodes} gadgets)"))?;
    line(out, "gadgets", c.preimages_have_size_16(), String::new())?;
    line(out, "ancestry", c.edges_respect_ancestry(), String::new())?;
    line(out, "two-degenerate", check_two_degenerate(&c.graph).is_some(), String::new())?;

    let path = ham_path(&c);
    let ham = validate_ham_path(&c, &path);
    line(out, "hamiltonian-path", ham.is_ok(), ham.as_ref().err().map(|e| format!("({e})")).unwrap_or_default())?;
    if ham.is_ok() {
        let traced = to_traced(&c, &path)?;
        match pattern_is_constellation(&c, &traced, &path) {
            Ok(pc) => {
                let how = if pc.pairwise_checked { "recognizer, pairwise" } else { "depth order" };
                line(out, "constellation", true, format!("({} stars, {how})", pc.witness.stars.len()))?;
            }
            Err(e) => line(out, "constellation", false, format!("({e})"))?,
        }
    }
    if failed.is_empty() {
        writeln!(out, "result: pass")?;
        Ok(())
    } else {
        writeln!(out, "result: FAIL")?;
        Err(Failure::Violation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn check_bounds(rs: Vec<u64>, t_max: Option<i64>, prec: Option<u32>, out: &mut dyn Write) -> Outcome {
    let prec = match prec {
        Some(p) => p,
        None => precision()?,
    };
    let params = default_params(prec)?;
    let mut spec = GridSpec::default_grid();
    if !rs.is_empty() {
        if rs.contains(&0) {
            return Err(Failure::Usage("--r must be >= 1".into()));
        }
        spec.rs = rs;
    }
    if let Some(t) = t_max {
        if t < 1 {
            return Err(Failure::Usage("--t-max must be >= 1".into()));
        }
        spec.t_max = t;
    }
    let rows = run_grid(&params, &spec);
    writeln!(out, "{TSV_HEADER}")?;
    let (mut fail, mut unknown) = (0usize, 0usize);
    for row in &rows {
        writeln!(out, "{}", row.to_tsv())?;
        match row.verdict {
            Verdict::Pass => {}
            Verdict::Fail => fail += 1,
            Verdict::Inconclusive => unknown += 1,
        }
    }
    eprintln!("{} rows, {fail} failed, {unknown} inconclusive", rows.len());
    if fail + unknown > 0 {
        Err(Failure::Violation(format!("{fail} failed, {unknown} inconclusive")))
    } else {
        Ok(())
    }
}

fn oracle_lip(graph: Option<&Path>, cap: usize, out: &mut dyn Write) -> Outcome {
    let g = match graph {
        Some(p) => load_graph(p)?,
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            parse_edge_list(&text).map_err(|e| Failure::Usage(format!("<stdin>: {e}")))?
        }
    };
    let res = longest_induced_path_oracle(&g, cap)?;
    if !res.witness.is_empty() && !is_induced_path(&g, &res.witness) {
        return Err(Failure::Violation("oracle witness is not an induced path".into()));
    }
    writeln!(out, "{}", res.length)?;
    writeln!(out, "witness: {}", join(&res.witness))?;
    writeln!(out, "capped: {}", res.capped)?;
    Ok(())
}
