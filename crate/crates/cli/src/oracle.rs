use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use ergcftp::cftp::sample_many;
use ergcftp::format::fmt_num;
use ergcftp::oracle::{
    enumerate_distribution, max_conditional_error, max_ratio_error, tv_distance, EmpiricalDistribution,
};
use ergcftp::{CftpConfig, CoupledKernel, GraphSpace, ModelSpec};

use crate::sample::{load_model, LoadedModel};
use crate::summary::Moments;
use crate::{usage, write_text, CliError, CliResult, RunArgs, SpaceArgs, DEFAULT_SEED};

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// ERG model file of `stat` lines.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Largest total variation distance that passes.
    #[arg(long, default_value_t = DEFAULT_TV_TOLERANCE)]
    pub tolerance: f64,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the exact distribution as CSV (graph_bits_hex, probability).
    #[arg(long)]
    pub exact_csv: Option<PathBuf>,
}

pub const DEFAULT_DRAWS: usize = 50_000;
pub const DEFAULT_TV_TOLERANCE: f64 = 0.02;
/// Tolerance of the ratio and full-conditional identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct StatComparison {
    pub name: String,
    pub exact: f64,
    pub empirical: f64,
    pub standard_error: f64,
}

#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub free_dyads: usize,
    pub draws: usize,
    pub failures: usize,
    pub tv: f64,
    pub tv_tolerance: f64,
    pub stats: Vec<StatComparison>,
    pub ratio_error: f64,
    pub conditional_error: f64,
}

impl ValidationReport {
    pub fn tv_pass(&self) -> bool {
        self.tv < self.tv_tolerance
    }

    pub fn ratio_pass(&self) -> bool {
        self.ratio_error < IDENTITY_TOLERANCE
    }

    pub fn conditional_pass(&self) -> bool {
        self.conditional_error < IDENTITY_TOLERANCE
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.tv_pass() && self.ratio_pass() && self.conditional_pass()
    }

    pub fn render(&self) -> String {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let mut s = String::new();
        let _ = writeln!(s, "free_dyads {}", self.free_dyads);
        let _ = writeln!(s, "draws {} failures {}", self.draws, self.failures);
        let _ = writeln!(
            s,
            "tv_distance {} tolerance {} {}",
            fmt_num(self.tv),
            fmt_num(self.tv_tolerance),
            verdict(self.tv_pass())
        );
        for c in &self.stats {
            let _ = writeln!(
                s,
                "mean_{} exact {} empirical {} se {}",
                c.name,
                fmt_num(c.exact),
                fmt_num(c.empirical),
                fmt_num(c.standard_error)
            );
        }
        let _ = writeln!(
            s,
            "ratio_identity max_relative_error {} {}",
            fmt_num(self.ratio_error),
            verdict(self.ratio_pass())
        );
        let _ = writeln!(
            s,
            "conditional_identity max_abs_error {} {}",
            fmt_num(self.conditional_error),
            verdict(self.conditional_pass())
        );
        let _ = writeln!(s, "result {}", verdict(self.passed()));
        s
    }
}

/// Draws from `kernel` and compares them with the exact distribution of
/// `model`. `kernel` is normally `model` itself; any other kernel is under
/// test against `model`'s distribution.
pub fn validate(
    model: &ModelSpec,
    kernel: &dyn CoupledKernel,
    space: &GraphSpace,
    config: &CftpConfig,
    draws: usize,
    workers: usize,
    tv_tolerance: f64,
) -> ergcftp::Result<ValidationReport> {
    let exact = enumerate_distribution(model, space)?;
    let results = sample_many(kernel, space, config, draws, workers);
    let mut empirical = EmpiricalDistribution::new(space);
    let mut moments = vec![Moments::default(); model.len()];
    let mut failures = 0;
    for r in results {
        match r {
            Ok(d) => {
                empirical.add(&d.graph)?;
                for (m, x) in moments.iter_mut().zip(model.evaluate(&d.graph)) {
                    m.push(x);
                }
            }
            Err(ergcftp::Error::NotCoalesced(_)) => failures += 1,
            Err(e) => return Err(e),
        }
    }
    let exact_means = exact.expectation(|y| model.evaluate(y));
    let stats = model
        .stat_names()
        .into_iter()
        .zip(exact_means)
        .zip(&moments)
        .map(|((name, exact), m)| StatComparison {
            name,
            exact,
            empirical: m.mean(),
            standard_error: m.sd() / (m.count() as f64).sqrt(),
        })
        .collect();
    Ok(ValidationReport {
        free_dyads: space.free_dyads().len(),
        draws,
        failures,
        tv: tv_distance(&empirical, &exact)?,
        tv_tolerance,
        stats,
        ratio_error: max_ratio_error(model, &exact)?,
        conditional_error: max_conditional_error(model, &exact)?,
    })
}

pub fn run(args: &OracleArgs) -> CliResult<()> {
    let model = match load_model(&args.model)? {
        LoadedModel::Erg(m) => m,
        LoadedModel::Biased(_) => {
            return Err(usage("biased nets have no enumerable joint distribution"))
        }
    };
    let space = args.space.build(None)?;
    let seed = args.run.seed.unwrap_or(DEFAULT_SEED);
    let draws = args.run.draws.unwrap_or(DEFAULT_DRAWS);
    let config = args.run.config(seed);
    let report = validate(&model, &model, &space, &config, draws, args.run.workers, args.tolerance)?;
    if let Some(path) = &args.exact_csv {
        let mut buf = Vec::new();
        enumerate_distribution(&model, &space)?.write_csv(&mut buf)?;
        write_text(path, &String::from_utf8(buf).expect("csv is ascii"))?;
    }
    let text = report.render();
    print!("{text}");
    if let Some(path) = &args.out {
        write_text(path, &text)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Validation("oracle validation failed".into()))
    }
}
