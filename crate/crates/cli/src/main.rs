mod commands;
mod error;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{Mode, Output, TreeRequest};
use error::{CliError, EXIT_TIMEOUT};

/// Variant narrowing explorer for equational theories.
#[derive(Parser)]
#[command(name = "vnarrow", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModuleArgs {
    /// File holding one or more functional modules.
    #[arg(short, long, value_name = "FILE")]
    module: PathBuf,
    /// Module to use when the file holds several; defaults to the last.
    #[arg(long, value_name = "NAME")]
    name: Option<String>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Strategy {
    /// Expand every node above this depth.
    #[arg(long, value_name = "K")]
    depth: Option<usize>,
    /// Expand breadth-first until the tree holds N variants.
    #[arg(long, value_name = "N")]
    variants: Option<usize>,
    /// Expand until the embedding whistle stops every branch.
    #[arg(long)]
    embedding: bool,
}

#[derive(Subcommand)]
enum Command {
    /// List the variants of a term.
    GetVariants {
        #[command(flatten)]
        module: ModuleArgs,
        /// Term whose variants are listed.
        #[arg(short, long)]
        term: String,
        /// Stop after N variants.
        #[arg(short = 'n', long = "bound", value_name = "N")]
        bound: Option<usize>,
        /// Give up after this many seconds, printing what was found.
        #[arg(long, value_name = "SECS")]
        timeout: Option<u64>,
    },
    /// Check the finite variant property operator by operator.
    CheckFvp {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 100, value_name = "N")]
        max_variants: usize,
        /// Seconds allowed per operator.
        #[arg(long, default_value_t = 30, value_name = "SECS")]
        timeout: u64,
    },
    /// Build a variant narrowing tree.
    Tree {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(short, long)]
        term: String,
        #[command(flatten)]
        strategy: Strategy,
        /// Hard cap on the number of nodes.
        #[arg(long, default_value_t = 2000, value_name = "N")]
        max_nodes: usize,
        #[arg(long, value_name = "SECS")]
        timeout: Option<u64>,
        /// Annotate every node with its closedness.
        #[arg(long)]
        closedness: bool,
        /// Write the tree as JSON.
        #[arg(long, value_name = "FILE")]
        export: Option<PathBuf>,
        /// Write the tree as meta-level tuples.
        #[arg(long, value_name = "FILE")]
        export_meta: Option<PathBuf>,
    },
    /// Run the HTTP explorer service.
    Serve {
        /// Overrides the port from the environment and config file.
        #[arg(long)]
        port: Option<u16>,
        /// TOML config file; defaults to the file named by VNARROW_CONFIG.
        #[arg(long, value_name = "FILE")]
        config: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::GetVariants { module, term, bound, timeout } => {
            commands::get_variants(&module.module, module.name.as_deref(), &term, bound, timeout, cli.json)
        }
        Command::CheckFvp { module, max_variants, timeout } => {
            commands::check(&module.module, module.name.as_deref(), max_variants, timeout, cli.json)
        }
        Command::Tree { module, term, strategy, max_nodes, timeout, closedness, export, export_meta } => {
            let mode = match (strategy.depth, strategy.variants) {
                (Some(k), _) => Mode::Depth(k),
                (_, Some(n)) => Mode::Variants(n),
                _ => Mode::Embedding,
            };
            commands::tree(TreeRequest {
                module: &module.module,
                name: module.name.as_deref(),
                term: &term,
                mode,
                max_nodes,
                timeout,
                closedness,
                export,
                export_meta,
                json: cli.json,
            })
        }
        Command::Serve { port, config } => serve(port, config),
    }
}

fn serve(port: Option<u16>, config: Option<PathBuf>) -> Result<Output, CliError> {
    let mut config = match config {
        Some(p) => vnarrow_service::Config::from_file(&p)?,
        None => vnarrow_service::Config::from_env()?,
    };
    if let Some(p) = port {
        std::env::set_var(vnarrow_service::config::PORT_VAR, p.to_string());
        config.port = Some(p);
    }
    let port = config.port()?;
    eprintln!("listening on 0.0.0.0:{port}");
    let rt = tokio::runtime::Runtime::new().map_err(CliError::Serve)?;
    rt.block_on(vnarrow_service::serve(config)).map_err(CliError::Serve)?;
    Ok(Output { text: String::new(), partial: false })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            if out.partial {
                eprintln!("vnarrow: timed out, output is partial");
                ExitCode::from(EXIT_TIMEOUT)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("vnarrow: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
