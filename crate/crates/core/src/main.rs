use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use arbcolour::harness::{self, Algo, RunOptions, StreamKind, UpdateStream};
use clap::{ArgGroup, Parser};

/// Replay an edge update stream through a colouring algorithm.
#[derive(Parser, Debug)]
#[command(version, about)]
#[command(group(ArgGroup::new("input").required(true).args(["stream", "generate"])))]
struct Cli {
    /// static-degeneracy, static-hpartition, dynamic-max, dynamic-adaptive or greedy-baseline.
    #[arg(long)]
    algo: Algo,
    /// Stream file (`n <cap>`, then `+ u v` / `- u v` lines).
    #[arg(long)]
    stream: Option<PathBuf>,
    /// Generator: forest, forests(F), grid-planar, erdos-renyi(P), sliding-window(W), star-of-trees.
    #[arg(long, requires_all = ["n", "steps"])]
    generate: Option<StreamKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha_max: Option<usize>,
    #[arg(long)]
    delta_max: Option<usize>,
    /// Audit every K events; 0 audits only at the end.
    #[arg(long, default_value_t = 100)]
    verify_every: usize,
    /// CSV metrics destination; `-` for stdout.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    /// Write the stream instead of running it.
    #[arg(long)]
    dump_stream: bool,
}

fn load(cli: &Cli) -> Result<(UpdateStream, Option<usize>), String> {
    if let Some(path) = &cli.stream {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let s = harness::parse_stream(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok((s, None));
    }
    let kind = cli.generate.expect("clap enforces an input");
    let s = harness::generate_stream(kind, cli.n.unwrap(), cli.steps.unwrap(), cli.seed)
        .map_err(|e| e.to_string())?;
    Ok((s, kind.declared_alpha()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stream, declared) = match load(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.dump_stream {
        return match stream.write_to(io::stdout().lock()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        };
    }
    let opts = RunOptions {
        algo: cli.algo,
        beta: cli.beta,
        epsilon: cli.epsilon,
        alpha_max: cli.alpha_max,
        delta_max: cli.delta_max,
        verify_every: cli.verify_every,
        declared_alpha: declared,
    };
    let mut sink: Option<Box<dyn Write>> = match &cli.metrics_out {
        None => None,
        Some(p) if p.as_os_str() == "-" => Some(Box::new(io::stdout().lock())),
        Some(p) => match File::create(p) {
            Ok(f) => Some(Box::new(BufWriter::new(f))),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        },
    };
    let result = harness::run(&stream, &opts, sink.as_mut().map(|w| w as &mut dyn Write));
    let metrics = match result {
        Ok(m) => m,
        Err(e @ harness::RunError::Usage(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let last = metrics.rows.last().expect("final checkpoint");
    eprintln!(
        "{}: {} events, {} live edges, Δ {}, max colour {} (ever {}), {} audits",
        opts.algo,
        stream.len(),
        last.live_edges,
        last.current_delta,
        last.max_colour,
        metrics.max_colour_ever,
        metrics.audits
    );
    if metrics.is_clean() {
        return ExitCode::SUCCESS;
    }
    for (step, report) in &metrics.failures {
        eprintln!("audit failed at step {step}:\n{report}");
    }
    ExitCode::FAILURE
}
