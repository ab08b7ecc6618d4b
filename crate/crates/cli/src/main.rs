use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polylock::constructions::{
    block_decompose, domino_canonicalize, narrow_triomino_canonicalize, replicate_flip, torus_spiral,
};
use polylock::document::{load_tiling, TilingDocument};
use polylock::metagraph::{build_metagraph, components, enumerate_tilings, DEFAULT_ENUMERATION_CAP};
use polylock::search::{search_locked_with_store, SearchOptions, SymmetryMode};
use polylock::verify::{is_locked, validate_tiling};
use polylock::{Error, TableKind, TableStore, Tiling, Topology};

mod render;

#[derive(Parser)]
#[command(name = "polylock", version, about = "Search, verify and analyze locked polyomino tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find every locked tiling of a board.
    Search(SearchArgs),
    /// Check whether a tiling file is locked; exits 0 iff it is.
    Verify(VerifyArgs),
    /// Enumerate all tilings of a small board and report the components of
    /// the recombination graph.
    Metagraph(MetagraphArgs),
    /// Build tilings and move sequences from the known constructions.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Draw a tiling file as SVG or text.
    Render(RenderArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum TopologyArg {
    Grid,
    Torus,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymmetryArg {
    None,
    Rot4,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableArg {
    Locked,
    LockedAugmented,
}

#[derive(Args)]
struct BoardArgs {
    #[arg(long)]
    t: usize,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    #[arg(long, value_enum, default_value = "grid")]
    topology: TopologyArg,
}

impl BoardArgs {
    fn topology(&self) -> polylock::Result<Topology> {
        Topology::new(self.width, self.height, matches!(self.topology, TopologyArg::Torus))
    }
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    board: BoardArgs,
    #[arg(long, value_enum, default_value = "none")]
    symmetry: SymmetryArg,
    /// Keep one tiling per symmetry class.
    #[arg(long)]
    dedup: bool,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, value_enum, default_value = "locked-augmented")]
    table: TableArg,
    #[arg(long, env = "POLYLOCK_TABLES_DIR", default_value = "./tables")]
    tables_dir: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Manifest path; each tiling is written next to it as `<stem>-NNNN.json`.
    /// Without it the manifest goes to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
}

#[derive(Args)]
struct MetagraphArgs {
    #[command(flatten)]
    board: BoardArgs,
    /// Include the size of every component.
    #[arg(long)]
    components: bool,
    /// Write the edge list as JSON pairs of vertex indices.
    #[arg(long)]
    edges_out: Option<PathBuf>,
    /// Enumerate boards above the default cell cap.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Locked double-spiral tiling of a square torus.
    TorusSpiral {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block copies of a locked 6×6 triomino tiling with alternating mirrors.
    ReplicateFlip {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        bm: usize,
        #[arg(long)]
        bn: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moves taking a domino tiling to the all-horizontal tiling.
    DominoCanonical {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Moves taking a 2×n or 3×n triomino tiling to the canonical tiling.
    NarrowCanonical {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block counts covering an m×n board.
    BlockDecompose {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Ascii,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "svg")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest {
    topology: Topology,
    t: usize,
    symmetry: SymmetryMode,
    dedup: bool,
    limit: Option<usize>,
    count: usize,
    truncated: bool,
    rejected: usize,
    degenerate: usize,
    nodes: u64,
    runtime_seconds: f64,
    files: Vec<String>,
}

#[derive(Serialize)]
struct MetagraphReport {
    topology: Topology,
    t: usize,
    vertices: usize,
    edges: usize,
    locked: usize,
    components: usize,
    histogram: Vec<(usize, usize)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sizes: Option<Vec<usize>>,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidParameter(_) | Error::CapExceeded { .. } => 2,
        Error::CorruptCache(_) => 3,
        _ => 1,
    }
}

fn emit(text: &str, out: Option<&Path>) -> polylock::Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(path, text)?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json(value: &impl Serialize, out: Option<&Path>) -> polylock::Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    emit(&(text + "\n"), out)
}

fn checked(tiling: &Tiling) -> polylock::Result<&Tiling> {
    validate_tiling(tiling).map_err(|d| Error::Internal(format!("refusing to write an invalid tiling: {d}")))?;
    Ok(tiling)
}

fn emit_tiling(doc: TilingDocument, tiling: &Tiling, out: Option<&Path>) -> polylock::Result<()> {
    checked(tiling)?;
    emit(&(doc.to_json() + "\n"), out)
}

fn cmd_search(args: &SearchArgs) -> polylock::Result<ExitCode> {
    let topo = args.board.topology()?;
    let t = args.board.t;
    let options = SearchOptions {
        symmetry: match args.symmetry {
            SymmetryArg::None => SymmetryMode::None,
            SymmetryArg::Rot4 => SymmetryMode::Rot4,
        },
        dedup: args.dedup,
        limit: args.limit,
        table_kind: match args.table {
            TableArg::Locked => TableKind::Locked,
            TableArg::LockedAugmented => TableKind::LockedAugmented,
        },
        workers: args.workers.max(1),
    };
    std::fs::create_dir_all(&args.tables_dir)?;
    let store = TableStore::with_dir(&args.tables_dir);
    let outcome = match search_locked_with_store(&store, &topo, t, &options) {
        Err(Error::NoTilingPossible(msg)) => {
            log::info!("{msg}");
            None
        }
        other => Some(other?),
    };

    let mut files = Vec::new();
    if let (Some(path), Some(outcome)) = (&args.out, &outcome) {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("tiling");
        let dir = path.parent().unwrap_or(Path::new(""));
        for (i, tiling) in outcome.tilings.iter().enumerate() {
            let name = format!("{stem}-{i:04}.json");
            let doc = TilingDocument::from_tiling(tiling).with_metadata("source", "search").with_metadata("index", i);
            emit_tiling(doc, tiling, Some(&dir.join(&name)))?;
            files.push(name);
        }
    }
    let manifest = Manifest {
        topology: topo,
        t,
        symmetry: options.symmetry,
        dedup: options.dedup,
        limit: options.limit,
        count: outcome.as_ref().map_or(0, |o| o.count()),
        truncated: outcome.as_ref().is_some_and(|o| o.truncated),
        rejected: outcome.as_ref().map_or(0, |o| o.rejected),
        degenerate: outcome.as_ref().map_or(0, |o| o.degenerate),
        nodes: outcome.as_ref().map_or(0, |o| o.stats.nodes),
        runtime_seconds: outcome.as_ref().map_or(0.0, |o| o.seconds),
        files,
    };
    emit_json(&manifest, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> polylock::Result<ExitCode> {
    let doc = TilingDocument::load(&args.input)?;
    let tiling = doc.to_tiling()?;
    let report = is_locked(&tiling);
    emit_json(&report, None)?;
    Ok(if report.is_locked() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn cmd_metagraph(args: &MetagraphArgs) -> polylock::Result<ExitCode> {
    let topo = args.board.topology()?;
    let cap = if args.force { usize::MAX } else { DEFAULT_ENUMERATION_CAP };
    let basic = TableStore::in_memory().get(args.board.t, TableKind::Basic)?;
    let tilings = enumerate_tilings(&topo, &basic, cap)?;
    let mg = build_metagraph(tilings)?;
    let stats = components(&mg);
    if let Some(path) = &args.edges_out {
        let edges: Vec<(usize, usize)> = mg.edges().collect();
        emit_json(&edges, Some(path))?;
    }
    let report = MetagraphReport {
        topology: topo,
        t: args.board.t,
        vertices: mg.num_vertices(),
        edges: mg.num_edges(),
        locked: mg.locked_vertices().len(),
        components: stats.num_components(),
        histogram: stats.histogram.clone(),
        sizes: args.components.then(|| stats.sizes.clone()),
    };
    emit_json(&report, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(cmd: &GenerateCommand) -> polylock::Result<ExitCode> {
    match cmd {
        GenerateCommand::TorusSpiral { n, out } => {
            let tiling = torus_spiral(*n)?;
            let doc = TilingDocument::from_tiling(&tiling).with_metadata("construction", "torus-spiral").with_metadata("n", *n);
            emit_tiling(doc, &tiling, out.as_deref())?;
        }
        GenerateCommand::ReplicateFlip { base, bm, bn, out } => {
            let tiling = replicate_flip(&load_tiling(base)?, *bm, *bn)?;
            let doc = TilingDocument::from_tiling(&tiling)
                .with_metadata("construction", "replicate-flip")
                .with_metadata("bm", *bm)
                .with_metadata("bn", *bn);
            emit_tiling(doc, &tiling, out.as_deref())?;
        }
        GenerateCommand::DominoCanonical { input, out } => {
            let moves = domino_canonicalize(&load_tiling(input)?)?;
            emit_json(&moves, out.as_deref())?;
        }
        GenerateCommand::NarrowCanonical { input, out } => {
            let result = narrow_triomino_canonicalize(&load_tiling(input)?)?;
            emit_json(&result, out.as_deref())?;
        }
        GenerateCommand::BlockDecompose { m, n, out } => {
            emit_json(&block_decompose(*m, *n)?, out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_render(args: &RenderArgs) -> polylock::Result<ExitCode> {
    let tiling = load_tiling(&args.input)?;
    let text = match args.format {
        FormatArg::Svg => render::svg(&tiling)?,
        FormatArg::Ascii => render::ascii(&tiling)?,
    };
    emit(&text, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Search(args) => cmd_search(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Metagraph(args) => cmd_metagraph(args),
        Command::Generate(cmd) => cmd_generate(cmd),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("polylock: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
