mod config;
mod io;

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use topobench_core::task::mask::{apply_mask, mask_rng};
use topobench_core::{
    build_dataset, enumerate_scenarios, evaluate, parse_completion, render_prompt, Difficulty,
    Execution, Grid, PromptStyle, Style, Subject, TaskInstance,
};
use topobench_harness::{
    aggregate, render_table, run, AllZerosClient, CompletionCache, EchoClient, HttpClient,
    ModelClient, NoiseClient, ScoreLine,
};

use config::RunConfigFile;

#[derive(Parser)]
#[command(
    name = "topobench",
    version,
    about = "Topology-optimization reasoning benchmark"
)]
struct Cli {
    /// TOML configuration with optional [solver], [dataset], [metrics] and [harness] sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate scenarios, optimize them and write the masked dataset.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        /// Clockwise quarter turns applied to every instance.
        #[arg(long, default_value_t = 0)]
        rotate: u8,
        #[arg(long)]
        sequential: bool,
    },
    /// Mask one ground-truth grid read from a file or `-`.
    Mask {
        grid: PathBuf,
        #[arg(long)]
        subject: Subject,
        #[arg(long)]
        difficulty: Difficulty,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the prompt for one instance, or write all prompts as JSONL.
    Render {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "base")]
        style: Style,
        #[arg(long, default_value_t = 0)]
        shots: u8,
        #[arg(long, default_value_t = 0)]
        rotate: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Query a model over a sampled subset and write run records.
    Eval {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Base URL, or `mock:echo`, `mock:zeros`, `mock:noise:<p>`.
        #[arg(long)]
        endpoint: Option<String>,
        #[arg(long)]
        model: Option<String>,
        /// Comma-separated subject names.
        #[arg(long, value_delimiter = ',')]
        subjects: Option<Vec<Subject>>,
        #[arg(long)]
        difficulty: Option<Difficulty>,
        #[arg(long)]
        per_stratum: Option<usize>,
        #[arg(long)]
        rotate: Option<u8>,
        #[arg(long)]
        shots: Option<u8>,
        #[arg(long)]
        style: Option<Style>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Score completions given as JSONL lines `{"id": .., "completion": ..}`.
    Score {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        completions: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Summarize run records or score lines.
    Report {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    /// One compact score line per record.
    Records,
}

#[derive(Deserialize)]
struct CompletionLine {
    id: String,
    completion: String,
}

#[derive(Serialize)]
struct PromptLine<'a> {
    id: &'a str,
    prompt: String,
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Stdout write that reports a closed pipe as an error instead of panicking.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    Ok(out.flush()?)
}

fn rotate_all(data: &[TaskInstance], k: u8) -> Result<Vec<TaskInstance>> {
    if k > 3 {
        bail!("rotation {k} is not in 0..=3");
    }
    Ok(data
        .iter()
        .map(|t| t.rotated(k))
        .collect::<Result<_, _>>()?)
}

fn client_for(endpoint: &str, cfg: &RunConfigFile, seed: u64) -> Result<Box<dyn ModelClient>> {
    Ok(match endpoint {
        "mock:echo" => Box::new(EchoClient),
        "mock:zeros" => Box::new(AllZerosClient),
        e if e.starts_with("mock:noise:") => {
            let p: f64 = e["mock:noise:".len()..]
                .parse()
                .context("noise probability")?;
            if !(0.0..=1.0).contains(&p) {
                bail!("noise probability {p} is not in [0, 1]");
            }
            Box::new(NoiseClient { p, seed })
        }
        e if e.starts_with("mock:") => bail!("unknown mock endpoint {e:?}"),
        url => {
            let mut ep = cfg.harness.endpoint.clone();
            ep.base_url = url.to_string();
            Box::new(HttpClient::new(ep)?)
        }
    })
}

fn execute(cli: Cli) -> Result<()> {
    let mut cfg = RunConfigFile::load(cli.config.as_deref())?;
    match cli.command {
        Command::Generate {
            out,
            seed,
            rotate,
            sequential,
        } => {
            let seed = seed.unwrap_or(cfg.dataset.seed);
            let scenarios = enumerate_scenarios(&cfg.dataset.enumeration)?;
            let exec = if sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let data = rotate_all(&build_dataset(&scenarios, &cfg.solver, seed, exec)?, rotate)?;
            io::save_jsonl(&out, &data)?;
            eprintln!(
                "{} scenarios, {} instances -> {}",
                scenarios.len(),
                data.len(),
                out.display()
            );
        }
        Command::Mask {
            grid,
            subject,
            difficulty,
            seed,
        } => {
            let gt = Grid::parse(&read_input(&grid)?, difficulty)?;
            let (input, _) = apply_mask(&gt, subject, &mut mask_rng(seed, 0, subject, difficulty))?;
            emit(&format!("{}\n", input.render(difficulty)))?;
        }
        Command::Render {
            dataset,
            id,
            out,
            style,
            shots,
            rotate,
            seed,
        } => {
            let data = rotate_all(&io::load_jsonl::<TaskInstance>(&dataset)?, rotate)?;
            let ps = PromptStyle { style, shots };
            if let Some(id) = id {
                let inst = data
                    .iter()
                    .find(|t| t.id == id)
                    .with_context(|| format!("no instance {id:?}"))?;
                emit(&format!("{}\n", render_prompt(inst, ps, &data, seed)?))?;
            } else {
                let out = out.context("--out is required without --id")?;
                let lines = data
                    .iter()
                    .map(|t| {
                        Ok(PromptLine {
                            id: &t.id,
                            prompt: render_prompt(t, ps, &data, seed)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                io::save_jsonl(&out, &lines)?;
            }
        }
        Command::Eval {
            dataset,
            out,
            endpoint,
            model,
            subjects,
            difficulty,
            per_stratum,
            rotate,
            shots,
            style,
            seed,
            cache,
        } => {
            let h = &mut cfg.harness;
            if let Some(m) = model {
                h.endpoint.model = m;
            }
            if let Some(s) = subjects {
                h.subjects = s;
            }
            if let Some(d) = difficulty {
                h.difficulties = vec![d];
            }
            h.per_stratum = per_stratum.unwrap_or(h.per_stratum);
            h.rotation = rotate.unwrap_or(h.rotation);
            h.shots = shots.unwrap_or(h.shots);
            h.style = style.unwrap_or(h.style);
            h.seed = seed.unwrap_or(h.seed);
            let endpoint = endpoint.unwrap_or_else(|| h.endpoint.base_url.clone());
            let client = client_for(&endpoint, &cfg, cfg.harness.seed)?;
            let cache = cache.map(CompletionCache::open).transpose()?;
            let data: Vec<TaskInstance> = io::load_jsonl(&dataset)?;
            let output = run(
                &data,
                &cfg.harness,
                client.as_ref(),
                cache.as_ref(),
                &cfg.metrics,
            )?;
            io::save_jsonl(&out, &output.records)?;
            let failed = output.records.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} records ({} requests, {} cached, {} failed) -> {}",
                output.records.len(),
                output.requests,
                output.cache_hits,
                failed,
                out.display()
            );
            let table = aggregate(
                output
                    .records
                    .iter()
                    .map(|r| (r.subject, r.difficulty, &r.metrics)),
            )?;
            emit(&render_table(&table))?;
        }
        Command::Score {
            dataset,
            completions,
            out,
        } => {
            let data: Vec<TaskInstance> = io::load_jsonl(&dataset)?;
            let by_id: HashMap<&str, &TaskInstance> =
                data.iter().map(|t| (t.id.as_str(), t)).collect();
            let lines: Vec<CompletionLine> = io::load_jsonl(&completions)?;
            let mut scored = Vec::with_capacity(lines.len());
            for line in &lines {
                let inst = by_id
                    .get(line.id.as_str())
                    .with_context(|| format!("completion for unknown instance {:?}", line.id))?;
                let c = parse_completion(&line.completion, inst.difficulty);
                scored.push(ScoreLine {
                    id: inst.id.clone(),
                    subject: inst.subject,
                    difficulty: inst.difficulty,
                    metrics: evaluate(inst, &c, &cfg.metrics),
                });
            }
            scored.sort_by(|a, b| a.id.cmp(&b.id));
            io::save_jsonl(&out, &scored)?;
            eprintln!("{} scored -> {}", scored.len(), out.display());
        }
        Command::Report { input, format } => {
            // Run records carry the same id/subject/difficulty/metrics keys.
            let lines: Vec<ScoreLine> = io::load_jsonl(&input)?;
            match format {
                Format::Records => {
                    let mut stdout = std::io::stdout().lock();
                    topobench_core::write_jsonl(&mut stdout, &lines)?;
                }
                Format::Text | Format::Json => {
                    let table =
                        aggregate(lines.iter().map(|l| (l.subject, l.difficulty, &l.metrics)))?;
                    if let Format::Json = format {
                        emit(&format!("{}\n", serde_json::to_string_pretty(&table)?))?;
                    } else {
                        emit(&render_table(&table))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
