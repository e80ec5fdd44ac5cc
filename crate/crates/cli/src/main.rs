use std::collections::BTreeSet;
use std::io::{self, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use scitree_core::graph::to_dot;
use scitree_core::ingest::load_corpus;
use scitree_core::metrics::{metrics_report, MetricsReport};
use scitree_core::search::{SearchIndex, SearchQuery, DEFAULT_PAGE_SIZE};
use scitree_core::{load_repository, save_repository, Repository};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(name = "scitree", version, about = "Academic genealogy from curriculum records")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a corpus, link supervisions and write a repository.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the metrics of one researcher.
    Metrics {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        json: bool,
    },
    /// Export the subtree below a researcher.
    Export {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 1)]
        depth: usize,
        /// Comma-separated ids to open beyond `--depth`.
        #[arg(long, value_delimiter = ',')]
        expanded: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Find researchers by name fragment.
    Search {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long)]
        name: String,
        #[arg(long)]
        institution: Option<String>,
        #[arg(long)]
        area: Option<String>,
        #[arg(long, default_value_t = 1)]
        page: usize,
        #[arg(long, default_value_t = DEFAULT_PAGE_SIZE)]
        page_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        repo: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

/// Bad input from the caller; exits with status 2 like clap's own errors.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_writer(io::stderr)
        .with_env_filter(EnvFilter::try_from_env("SCITREE_LOG").unwrap_or_else(|_| EnvFilter::new("warn")))
        .init();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    let mut out = io::stdout().lock();
    match command {
        Command::Build { corpus, out: target } => build(&corpus, &target, &mut out),
        Command::Metrics { repo, id, json } => {
            let repo = open(&repo)?;
            let report = metrics_report(&repo.graph, &id)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
            } else {
                let name = repo.graph.node(&id).map(|m| m.name.as_str()).unwrap_or_default();
                print_metrics(&mut out, name, &report)?;
            }
            Ok(())
        }
        Command::Export {
            repo,
            id,
            depth,
            expanded,
            format,
        } => {
            let repo = open(&repo)?;
            let expanded: BTreeSet<String> = expanded.into_iter().filter(|s| !s.is_empty()).collect();
            let view = repo.graph.subtree_view(&id, depth, &expanded)?;
            match format {
                Format::Dot => write!(out, "{}", to_dot(&view))?,
                Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&view)?)?,
            }
            Ok(())
        }
        Command::Search {
            repo,
            name,
            institution,
            area,
            page,
            page_size,
            json,
        } => {
            let query = SearchQuery {
                name,
                institution,
                area,
                page,
                page_size,
            };
            query.validate().map_err(|e| UsageError(e.to_string()))?;
            let repo = open(&repo)?;
            let result = SearchIndex::new(&repo).search(&query)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&result)?)?;
            } else {
                for hit in &result.items {
                    writeln!(
                        out,
                        "{}\t{}\t{}\twidth={}\tdescendancy={}",
                        hit.id,
                        hit.name,
                        hit.institution.as_deref().unwrap_or("-"),
                        hit.width,
                        hit.descendancy
                    )?;
                }
                eprintln!(
                    "{} match(es), page {} of {}",
                    result.total_matches,
                    result.page,
                    result.total_matches.div_ceil(result.page_size).max(1)
                );
            }
            Ok(())
        }
        Command::Serve { repo, port, host } => {
            let repo = open(&repo)?;
            let addr = SocketAddr::new(host, port);
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::bind(addr)
                    .await
                    .with_context(|| format!("cannot listen on {addr}"))?;
                eprintln!("serving on http://{}", listener.local_addr()?);
                scitree_api::serve(listener, repo).await?;
                Ok(())
            })
        }
    }
}

fn open(path: &Path) -> Result<Repository> {
    load_repository(path).with_context(|| format!("cannot open repository {}", path.display()))
}

fn build(corpus: &Path, target: &Path, out: &mut impl Write) -> Result<()> {
    let (corpus, load) = load_corpus(corpus)?;
    for failure in &load.failures {
        eprintln!("warning: skipped {}: {}", failure.source, failure.error);
    }
    let repo = Repository::build(corpus)?;
    for removed in &repo.cycle_report.removed {
        eprintln!(
            "warning: removed {} -> {} ({} {}) to break cycle {}",
            removed.edge.supervisor_id,
            removed.edge.supervisee_id,
            removed.edge.level,
            removed.edge.year,
            removed.cycle.join(" -> ")
        );
    }
    save_repository(&repo, target)?;
    writeln!(out, "{}", repo.summary())?;
    Ok(())
}

fn print_metrics(out: &mut impl Write, name: &str, m: &MetricsReport) -> io::Result<()> {
    let year = |y: Option<i32>| y.map_or_else(|| "-".to_owned(), |y| y.to_string());
    writeln!(out, "researcher: {} ({name})", m.researcher_id)?;
    writeln!(out, "width: {}", m.width)?;
    writeln!(out, "fertility: {}", m.fertility)?;
    writeln!(out, "depth: {}", m.depth)?;
    writeln!(out, "descendancy: {}", m.descendancy)?;
    writeln!(out, "genealogical_index: {}", m.genealogical_index)?;
    writeln!(out, "relationships: {}", m.relationships)?;
    writeln!(out, "cousins: {}", m.cousins)?;
    writeln!(out, "avg_supervisions_per_year: {}", m.avg_supervisions_per_year)?;
    writeln!(out, "first_supervision_year: {}", year(m.first_supervision_year))?;
    writeln!(out, "last_supervision_year: {}", year(m.last_supervision_year))?;
    writeln!(out, "deepest_path: {}", m.deepest_path.join(" > "))?;
    if !m.timeline.0.is_empty() {
        writeln!(out, "timeline:")?;
        for (year, count) in &m.timeline.0 {
            writeln!(out, "  {year}  msc={} phd={}", count.msc, count.phd)?;
        }
    }
    Ok(())
}
