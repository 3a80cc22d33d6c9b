use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::anyhow;
use clap::Args;
use ergcftp::cftp::sample_many;
use ergcftp::format::fmt_num;
use ergcftp::modelfile::{bias_model_from_entries, entries, model_from_entries};
use ergcftp::{BiasModel, BiasRegistry, CoupledKernel, ModelSpec, StatisticRegistry};

use crate::summary::Moments;
use crate::{read_text, usage, write_text, CliError, CliResult, RunArgs, SpaceArgs, DEFAULT_SEED};

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Model file of `stat` lines (ERG) or `bias` lines (biased net).
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output directory for graphs.txt and diagnostics.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Check the sandwich against a shadow chain at every step.
    #[arg(long)]
    pub audit: bool,
}

/// A parsed model file.
pub enum LoadedModel {
    Erg(ModelSpec),
    Biased(BiasModel),
}

impl LoadedModel {
    pub fn kernel(&self) -> &dyn CoupledKernel {
        match self {
            LoadedModel::Erg(m) => m,
            LoadedModel::Biased(m) => m,
        }
    }
}

pub fn parse_model_text(text: &str) -> CliResult<LoadedModel> {
    let es = entries(text);
    if let Some(e) = es.iter().find(|e| e.key != "stat" && e.key != "bias") {
        return Err(e.error(format!("unexpected key `{}`", e.key)).into());
    }
    let has_stat = es.iter().any(|e| e.key == "stat");
    let has_bias = es.iter().any(|e| e.key == "bias");
    match (has_stat, has_bias) {
        (true, true) => Err(usage("a model file holds either `stat` or `bias` lines, not both")),
        (false, true) => Ok(LoadedModel::Biased(bias_model_from_entries(&es, &BiasRegistry::default())?)),
        _ => Ok(LoadedModel::Erg(model_from_entries(&es, &StatisticRegistry::default())?)),
    }
}

pub fn load_model(path: &Path) -> CliResult<LoadedModel> {
    parse_model_text(&read_text(path)?)
        .map_err(|e| CliError::Usage(anyhow!("{}: {e}", path.display())))
}

pub const GRAPHS_FILE: &str = "graphs.txt";
pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const DEFAULT_DRAWS: usize = 100;

pub fn run(args: &SampleArgs) -> CliResult<()> {
    let model = load_model(&args.model)?;
    let space = args.space.build(None)?;
    model.kernel().check_space(&space)?;
    let draws = args.run.draws.unwrap_or(DEFAULT_DRAWS);
    let seed = args.run.seed.unwrap_or(DEFAULT_SEED);
    let config = args.run.config(seed).with_audit(args.audit);

    let results = sample_many(model.kernel(), &space, &config, draws, args.run.workers);

    let mut graphs = String::new();
    let mut diag = String::from("replication,coalescence_time,total_updates\n");
    let mut density = Moments::default();
    let mut failures = Vec::new();
    for (r, res) in results.iter().enumerate() {
        match res {
            Ok(d) => {
                graphs.push_str(&d.graph.to_edge_list());
                let _ = writeln!(diag, "{r},{},{}", d.coalescence_time, d.total_updates);
                density.push(d.graph.density());
            }
            Err(e) => {
                let updates = match e {
                    ergcftp::Error::NotCoalesced(diag) => diag.total_updates.to_string(),
                    _ => "NA".into(),
                };
                let _ = writeln!(diag, "{r},NA,{updates}");
                failures.push(format!("replication {r}: {e}"));
            }
        }
    }
    write_text(&args.out.join(GRAPHS_FILE), &graphs)?;
    write_text(&args.out.join(DIAGNOSTICS_FILE), &diag)?;

    for f in &failures {
        eprintln!("warning: {f}");
    }
    println!(
        "{} of {draws} draws written to {}; mean density {}",
        density.count(),
        args.out.display(),
        fmt_num(density.mean())
    );
    if draws > 0 && failures.len() == draws {
        return Err(CliError::Sampling(anyhow!("every replication failed")));
    }
    Ok(())
}
