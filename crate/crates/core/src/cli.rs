//! Command-line front end. [`run`] parses arguments and writes reports to
//! the given writer, so it can be driven in-process.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use crate::matroid::{ElementSet, Matroid, MatroidError, MatroidJson};
use crate::multicomplex::{LabelingOutcome, NoLabeling};
use crate::polytope::{parse_rational, Functional, PolytopeError};
use crate::session::{render_sweep, Session, SessionError};
use crate::shelling::{is_polytopal_shelling, is_shelling, restriction_sets, FacetOrder, ShellingError};
use crate::service::{serve, AppState};
use crate::sweep::{sweep_restriction_sets, validate_sweep, SearchParams};

#[derive(Debug, Parser)]
#[command(name = "brokenline", version, about = "Line and broken-line shellings of matroid independence complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a matroid file.
    Matroid {
        #[command(subcommand)]
        kind: MatroidKind,
        /// Output file (stdout when omitted).
        #[arg(short, long, global = true)]
        out: Option<PathBuf>,
    },
    /// Start a new session with a sweep search.
    Search {
        #[arg(long)]
        matroid: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run a search and merge it into an existing session.
    Update {
        #[arg(long)]
        session: PathBuf,
        /// Write here instead of overwriting the session.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Print sweep tables.
    Show {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        sweep: Option<usize>,
    },
    /// Check a facet order or every sweep of a session. Exits with status 1
    /// when a check fails.
    Verify {
        #[arg(long)]
        matroid: Option<PathBuf>,
        /// JSON array of basis indices or element lists.
        #[arg(long)]
        order: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = VerifyMode::Simplicial)]
        mode: VerifyMode,
        #[arg(long, conflicts_with_all = ["matroid", "order"])]
        session: Option<PathBuf>,
    },
    /// Structure and labeling report for every distinct poset in a session.
    Analyze {
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Export a poset as DOT or JSON.
    Export {
        #[arg(long)]
        session: PathBuf,
        #[arg(long, default_value_t = 0)]
        poset: usize,
        #[arg(long, value_enum, default_value_t = ExportFormat::Dot)]
        format: ExportFormat,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Serve the HTTP JSON API for a session file.
    Serve {
        #[arg(long)]
        session: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[arg(long, default_value_t = 8080)]
        port: u16,
    },
}

#[derive(Debug, Subcommand)]
pub enum MatroidKind {
    /// U(n, k).
    Uniform {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Cycle matroid of a graph, edges as `0-1,1-2,...`.
    Graphic {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        edges: String,
    },
    /// Lattice-path matroid whose bases are counted by Catalan numbers.
    Catalan {
        #[arg(long)]
        rank: usize,
    },
    /// Explicit bases as `0,1,2;0,1,3;...`.
    Bases {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        bases: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Simplicial,
    Polytopal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Base vertex as a comma-separated basis, e.g. `0,1,2`.
    #[arg(long)]
    pub vfav: String,
    /// 1-indexed pivot positions, e.g. `1,3,4`.
    #[arg(long, default_value = "")]
    pub pivots: String,
    #[arg(long, default_value_t = 3)]
    pub limit: usize,
    #[arg(long, default_value_t = 50)]
    pub misses: usize,
    /// Weight of the previous functional in each new witness.
    #[arg(long, default_value = "1")]
    pub w: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Initial functional, e.g. `1,2,3,4,5,6`.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Break ties in the initial functional lexicographically.
    #[arg(long)]
    pub perturb_ties: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read or write {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Shelling(#[from] ShellingError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(io_error(Path::new("<stdout>")))
}

fn emit(out: &mut dyn Write, target: Option<&Path>, text: &str) -> Result<(), CliError> {
    match target {
        Some(path) => fs::write(path, text).map_err(io_error(path)),
        None => write_out(out, text),
    }
}

fn parse_list(text: &str, what: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Usage(format!("bad {what} entry {s:?}"))))
        .collect()
}

impl ParamArgs {
    pub fn to_params(&self, m: &Matroid) -> Result<SearchParams, CliError> {
        let vfav = ElementSet::try_from_elements(&parse_list(&self.vfav, "vfav")?, m.ground_size())?;
        let mut p = SearchParams::new(vfav);
        p.pivots = parse_list(&self.pivots, "pivot")?;
        p.limit = self.limit;
        p.misses = self.misses;
        p.w = parse_rational(&self.w)?;
        p.seed = self.seed;
        p.initial = self.initial.as_deref().map(Functional::parse_list).transpose()?;
        p.perturb_ties = self.perturb_ties;
        Ok(p)
    }
}

pub fn load_matroid(path: &Path) -> Result<Matroid, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let json: MatroidJson = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })?;
    Ok(Matroid::from_json(&json)?)
}

/// Reads a facet order: an array whose entries are basis indices or
/// element lists.
pub fn load_order(m: &Matroid, path: &Path) -> Result<FacetOrder, CliError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    let json_err = |source| CliError::Json {
        path: path.display().to_string(),
        source,
    };
    let entries: Vec<Value> = serde_json::from_str(&text).map_err(json_err)?;
    let bad = || CliError::Usage(format!("{}: entries must be basis indices or element lists", path.display()));
    let mut order = Vec::with_capacity(entries.len());
    for entry in entries {
        match entry {
            Value::Number(n) => order.push(n.as_u64().ok_or_else(bad)? as usize),
            Value::Array(items) => {
                let elements = items
                    .iter()
                    .map(|v| v.as_u64().map(|e| e as usize).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()?;
                order.extend(FacetOrder::from_bases(m, &[elements])?.0);
            }
            _ => return Err(bad()),
        }
    }
    Ok(FacetOrder(order))
}

fn build_matroid(kind: &MatroidKind) -> Result<Matroid, CliError> {
    Ok(match kind {
        MatroidKind::Uniform { n, k } => Matroid::uniform(*n, *k)?,
        MatroidKind::Catalan { rank } => Matroid::catalan(*rank)?,
        MatroidKind::Graphic { vertices, edges } => {
            let edges = edges
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|e| {
                    let (a, b) = e
                        .split_once('-')
                        .ok_or_else(|| CliError::Usage(format!("edge {e:?} is not of the form a-b")))?;
                    let parse = |x: &str| x.trim().parse::<usize>().map_err(|_| CliError::Usage(format!("bad vertex in {e:?}")));
                    Ok((parse(a)?, parse(b)?))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            Matroid::graphic(*vertices, &edges)?
        }
        MatroidKind::Bases { n, bases } => {
            let bases = bases
                .split(';')
                .map(|b| parse_list(b, "basis"))
                .collect::<Result<Vec<_>, _>>()?;
            Matroid::from_bases(*n, &bases)?
        }
    })
}

/// Runs the CLI and returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<i32, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            write_out(out, &e.to_string())?;
            return Ok(0);
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match cli.command {
        Command::Matroid { kind, out: target } => {
            let m = build_matroid(&kind)?;
            let mut text = serde_json::to_string(&m.to_json()).expect("matroid serializes");
            text.push('\n');
            emit(out, target.as_deref(), &text)?;
            Ok(0)
        }
        Command::Search {
            matroid,
            out: target,
            params,
        } => {
            let m = load_matroid(&matroid)?;
            let params = params.to_params(&m)?;
            let mut session = Session::new(m);
            let count = session.search(params)?;
            session.save(&target)?;
            write_out(out, &format!("stored {count} sweeps in {}\n", target.display()))?;
            Ok(0)
        }
        Command::Update {
            session: path,
            out: target,
            params,
        } => {
            let mut session = Session::load(&path)?;
            let params = params.to_params(&session.matroid)?;
            let added = session.update(params)?;
            let target = target.unwrap_or(path);
            session.save(&target)?;
            write_out(
                out,
                &format!("added {added} sweeps, {} stored in {}\n", session.store.len(), target.display()),
            )?;
            Ok(0)
        }
        Command::Show { session, sweep } => {
            let s = Session::load(&session)?;
            let ids: Vec<usize> = match sweep {
                Some(id) if id < s.store.len() => vec![id],
                Some(id) => return Err(CliError::Usage(format!("no sweep {id}; the store has {}", s.store.len()))),
                None => (0..s.store.len()).collect(),
            };
            let blocks: Vec<String> = ids
                .into_iter()
                .map(|id| render_sweep(&s.matroid, id, &s.store.sweeps()[id]))
                .collect();
            write_out(out, &blocks.join("\n"))?;
            Ok(0)
        }
        Command::Verify {
            matroid,
            order,
            mode,
            session,
        } => verify(out, matroid, order, mode, session),
        Command::Analyze { session, json } => {
            let s = Session::load(&session)?;
            let analysis = s.analyze()?;
            if json {
                let mut text = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
                text.push('\n');
                write_out(out, &text)?;
                return Ok(0);
            }
            for a in analysis {
                let r = &a.structure;
                write_out(
                    out,
                    &format!(
                        "poset {} (class {}) from sweeps {:?}: graded={} greedoid={} lattice_after_top={} meets={} joins={} atoms_ok={} maximal_ranks={:?}\n",
                        a.id, a.class, a.sweeps, r.graded, r.greedoid, r.lattice_after_top, r.meets_exist, r.joins_exist, r.atoms_ok, r.maximal_ranks
                    ),
                )?;
                let line = match &a.labeling {
                    LabelingOutcome::Labeling { labeling } => {
                        let labels: Vec<String> =
                            labeling.labels.iter().enumerate().map(|(i, m)| format!("{i}:{m}")).collect();
                        format!("  labeling: {}\n", labels.join(" "))
                    }
                    LabelingOutcome::NoLabeling { certificate } => format!("  labeling: none ({})\n", describe(certificate)),
                };
                write_out(out, &line)?;
            }
            Ok(0)
        }
        Command::Export {
            session,
            poset,
            format,
            out: target,
        } => {
            let s = Session::load(&session)?;
            let entry = s
                .posets()?
                .into_iter()
                .nth(poset)
                .ok_or_else(|| CliError::Usage(format!("no poset {poset}")))?;
            let text = match format {
                ExportFormat::Dot => entry.poset.to_dot(),
                ExportFormat::Json => {
                    let mut t = serde_json::to_string_pretty(&entry.poset.to_json()).expect("poset serializes");
                    t.push('\n');
                    t
                }
            };
            emit(out, target.as_deref(), &text)?;
            Ok(0)
        }
        Command::Serve { session, host, port } => {
            let s = Session::load(&session)?;
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|_| CliError::Usage(format!("bad address {host}:{port}")))?;
            write_out(out, &format!("serving {} on http://{addr}\n", session.display()))?;
            out.flush().map_err(io_error(Path::new("<stdout>")))?;
            let runtime = tokio::runtime::Runtime::new().map_err(io_error(Path::new("<runtime>")))?;
            runtime
                .block_on(serve(AppState::new(s, Some(session.clone())), addr))
                .map_err(io_error(&session))?;
            Ok(0)
        }
    }
}

fn describe(c: &NoLabeling) -> String {
    match c {
        NoLabeling::NotGraded => "not graded by restriction-set size".into(),
        NoLabeling::NoBottom => "no bottom element".into(),
        NoLabeling::NotPure { maximal } => format!("maximal elements {maximal:?} below the top rank"),
        NoLabeling::Blocked { first, rank, blocked } => {
            format!("no monomial fits element {first} at rank {rank}; blocked at that rank: {blocked:?}")
        }
    }
}

fn verify(
    out: &mut dyn Write,
    matroid: Option<PathBuf>,
    order: Option<PathBuf>,
    mode: VerifyMode,
    session: Option<PathBuf>,
) -> Result<i32, CliError> {
    if let Some(path) = session {
        let s = Session::load(&path)?;
        let mut ok = true;
        for (id, stored) in s.store.sweeps().iter().enumerate() {
            let sweep = &stored.sweep;
            let valid = validate_sweep(&s.matroid, sweep);
            let shelling = is_shelling(&s.matroid, sweep.order());
            let witnesses = sweep_restriction_sets(&s.matroid, sweep).map(|r| r == stored.restriction);
            let good = valid.is_none() && shelling.is_shelling() && matches!(witnesses, Ok(true));
            ok &= good;
            let sweep_verdict = valid.map_or("valid".to_string(), |v| v.to_string());
            write_out(
                out,
                &format!(
                    "sweep {id}: {} ({sweep_verdict}; {shelling}; IP sets {})\n",
                    if good { "ok" } else { "FAILED" },
                    if matches!(witnesses, Ok(true)) { "agree" } else { "disagree" }
                ),
            )?;
        }
        return Ok(if ok { 0 } else { 1 });
    }
    let (Some(matroid), Some(order)) = (matroid, order) else {
        return Err(CliError::Usage("verify needs --session, or --matroid with --order".into()));
    };
    let m = load_matroid(&matroid)?;
    let order = load_order(&m, &order)?;
    let verdict = is_shelling(&m, &order);
    match mode {
        VerifyMode::Simplicial => {
            write_out(out, &format!("{verdict}\n"))?;
            if verdict.is_shelling() {
                let rs = restriction_sets(&m, &order)?;
                for (b, r) in rs.facets.iter().zip(&rs.sets) {
                    write_out(out, &format!("{b} {r}\n"))?;
                }
            }
            Ok(if verdict.is_shelling() { 0 } else { 1 })
        }
        VerifyMode::Polytopal => {
            let polytopal = is_polytopal_shelling(&m, &order)?;
            write_out(
                out,
                &format!("simplicial: {verdict}\npolytopal: {}\n", if polytopal { "shelling" } else { "not a shelling" }),
            )?;
            Ok(if polytopal { 0 } else { 1 })
        }
    }
}
