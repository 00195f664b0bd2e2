use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use modalcad_core::binding::Keymap;
use modalcad_core::fusion::{FusionConfig, FusionController};
use modalcad_core::gesture::GestureConfig;
use modalcad_core::trace::{self, ReplayOptions};
use modalcad_core::Lexicon;
use tracing::info;
use tracing_subscriber::EnvFilter;

#[derive(Parser)]
#[command(
    name = "modalcad",
    version,
    about = "Speech and gesture driven 3D modeling sessions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the websocket session server.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Lexicon JSON; the built-in one if omitted.
        #[arg(long)]
        lexicon: Option<PathBuf>,
        /// Keymap JSON, checked for completeness at startup.
        #[arg(long)]
        keymap: Option<PathBuf>,
    },
    /// Replay a recorded trace and write the scene, actions and metrics.
    Replay {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        keymap: Option<PathBuf>,
        /// Canonical scene JSON; printed to stdout if omitted.
        #[arg(long)]
        out_scene: Option<PathBuf>,
        /// One action record per line.
        #[arg(long)]
        out_actions: Option<PathBuf>,
        #[arg(long)]
        out_metrics: Option<PathBuf>,
        /// The directive log, one step per line.
        #[arg(long)]
        out_log: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_lexicon(path: Option<&Path>) -> Result<Lexicon> {
    match path {
        None => Ok(Lexicon::default()),
        Some(p) => {
            Lexicon::from_json(&read(p)?).with_context(|| format!("in lexicon {}", p.display()))
        }
    }
}

fn load_keymap(path: Option<&Path>) -> Result<Keymap> {
    let keymap = match path {
        None => Keymap::default(),
        Some(p) => {
            Keymap::from_json(&read(p)?).with_context(|| format!("in keymap {}", p.display()))?
        }
    };
    let missing = keymap.missing_kinds();
    anyhow::ensure!(
        missing.is_empty(),
        "keymap has no template for: {}",
        missing.join(", ")
    );
    Ok(keymap)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn jsonl<T: serde::Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("log records serialize"));
        out.push('\n');
    }
    out
}

async fn serve(host: &str, port: u16, lexicon: Lexicon) -> Result<()> {
    let hub = modalcad_server::new_hub(
        FusionController::new(lexicon, FusionConfig::default()),
        GestureConfig::default(),
    );
    let (addr, task) = modalcad_server::start(&format!("{host}:{port}"), hub)
        .await
        .with_context(|| format!("binding {host}:{port}"))?;
    println!("listening on ws://{addr}");
    std::io::stdout().flush()?;
    task.await?;
    Ok(())
}

fn main() -> Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            EnvFilter::try_from_env("MODALCAD_LOG").unwrap_or_else(|_| EnvFilter::new("info")),
        )
        .with_writer(std::io::stderr)
        .init();

    match Cli::parse().command {
        Command::Serve {
            port,
            host,
            lexicon,
            keymap,
        } => {
            let lexicon = load_lexicon(lexicon.as_deref())?;
            load_keymap(keymap.as_deref())?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(&host, port, lexicon))
        }
        Command::Replay {
            trace: trace_path,
            lexicon,
            keymap,
            out_scene,
            out_actions,
            out_metrics,
            out_log,
        } => {
            let lexicon = load_lexicon(lexicon.as_deref())?;
            let keymap = load_keymap(keymap.as_deref())?;
            let records = trace::parse_trace(&read(&trace_path)?)
                .with_context(|| format!("in trace {}", trace_path.display()))?;
            let out = trace::replay(&records, &lexicon, &keymap, &ReplayOptions::default())
                .with_context(|| format!("replaying {}", trace_path.display()))?;
            info!(
                records = records.len(),
                steps = out.log.len(),
                objects = out.scene.objects().len(),
                "replayed"
            );

            let scene = out.scene.to_canonical_json();
            match &out_scene {
                Some(p) => write(p, &scene)?,
                None => println!("{scene}"),
            }
            if let Some(p) = &out_actions {
                write(p, &jsonl(&out.actions))?;
            }
            if let Some(p) = &out_log {
                write(p, &jsonl(&out.log))?;
            }
            if let Some(p) = &out_metrics {
                let m = trace::metrics(&out.log, out.span.0, out.span.1);
                let mut text = serde_json::to_string_pretty(&m)?;
                text.push('\n');
                write(p, &text)?;
            }
            Ok(())
        }
    }
}
