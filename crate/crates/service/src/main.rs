use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use chrono::NaiveDate;
use clap::{Parser, Subcommand};
use hrm_core::bibliography::FixtureBibliography;
use hrm_core::ministry::StubMinistry;
use hrm_service::cli::{self, Remote};
use hrm_service::{server, stubs, ServiceConfig};
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(
    name = "hrm",
    version,
    about = "Academic HR service and administration"
)]
struct Cli {
    /// TOML config file. HRM_* environment variables override it.
    #[arg(long, short, global = true, env = "HRM_CONFIG")]
    config: Option<PathBuf>,
    /// Base URL of a running service. Defaults to the configured listen address.
    #[arg(long, global = true, env = "HRM_SERVER")]
    server: Option<String>,
    /// Bearer token. Defaults to the first configured token.
    #[arg(long, global = true, env = "HRM_API_TOKEN")]
    token: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve,
    /// Import persons and employee records from CSV.
    ImportEmployees { file: PathBuf },
    /// Print appointments needing attention as CSV.
    ExpiryReview {
        #[arg(long)]
        as_of: Option<NaiveDate>,
    },
    /// Print the requirements backlog grouped by MoSCoW class.
    Backlog {
        /// Import `id,category,priority,text` rows first.
        #[arg(long)]
        import: Option<PathBuf>,
    },
    /// Print a procedure's event log, one JSON object per line.
    ExportProcedure { id: u64 },
    /// Fill an empty store with demo data.
    SeedDemo,
    /// Replay an exported event log offline and print the final state.
    Replay { file: PathBuf },
    /// Run HTTP stand-ins for the ministry and bibliography services.
    StubServers {
        #[arg(long, default_value = "127.0.0.1:8091")]
        ministry: SocketAddr,
        #[arg(long, default_value = "127.0.0.1:8092")]
        bibliography: SocketAddr,
        /// Directory of `<author_id>.json` record files.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

fn remote(cli: &Cli, config: &ServiceConfig) -> anyhow::Result<Remote> {
    let server = match &cli.server {
        Some(url) => url.clone(),
        None => {
            let mut addr = config.listen;
            if addr.ip().is_unspecified() {
                addr.set_ip([127, 0, 0, 1].into());
            }
            format!("http://{addr}")
        }
    };
    let token = match &cli.token {
        Some(t) => t.clone(),
        None => config
            .tokens
            .keys()
            .next()
            .cloned()
            .context("no token configured")?,
    };
    Ok(Remote::new(&server, &token))
}

fn runtime() -> anyhow::Result<tokio::runtime::Runtime> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .context("cannot start the async runtime")
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let config = ServiceConfig::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Serve => runtime()?.block_on(server::run(config))?,
        Command::ImportEmployees { file } => {
            print!(
                "{}",
                cli::render_import(&cli::import_employees(&remote(&cli, &config)?, file)?)
            )
        }
        Command::ExpiryReview { as_of } => {
            print!("{}", cli::expiry_review(&remote(&cli, &config)?, *as_of)?)
        }
        Command::Backlog { import } => print!(
            "{}",
            cli::backlog(&remote(&cli, &config)?, import.as_deref())?
        ),
        Command::ExportProcedure { id } => {
            print!("{}", cli::export_procedure(&remote(&cli, &config)?, *id)?)
        }
        Command::SeedDemo => {
            let summary = cli::seed_demo(&remote(&cli, &config)?)?;
            println!("{}", serde_json::to_string_pretty(&summary)?);
        }
        Command::Replay { file } => print!("{}", cli::replay(file, &config.policy)?),
        Command::StubServers {
            ministry,
            bibliography,
            fixtures,
        } => runtime()?.block_on(async {
            let source = match fixtures {
                Some(dir) => FixtureBibliography::from_dir(dir)?,
                None => FixtureBibliography::new(),
            };
            let m = stubs::start_ministry(*ministry, Arc::new(StubMinistry::new()))
                .await
                .with_context(|| format!("cannot listen on {ministry}"))?;
            let b = stubs::start_bibliography(*bibliography, Arc::new(source))
                .await
                .with_context(|| format!("cannot listen on {bibliography}"))?;
            println!(
                "ministry stub at {}\nbibliography stub at {}",
                m.url(),
                b.url()
            );
            tokio::signal::ctrl_c().await?;
            anyhow::Ok(())
        })?,
    }
    Ok(())
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hrm: {e:#}");
            ExitCode::FAILURE
        }
    }
}
