use std::path::PathBuf;

use anyhow::anyhow;
use clap::Args;
use ergcftp::cftp::{derive_seed, run_parallel, sample};
use ergcftp::modelfile::{entries, model_from_entries, Entry};
use ergcftp::{CftpConfig, GraphSpace, ModelSpec, StatisticRegistry};

use crate::heatmap::Heatmap;
use crate::summary::{csv_row, linspace, Moments};
use crate::{read_text, write_text, CliError, CliResult, RunArgs, SpaceArgs};

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sweep file: `stat` lines, two `axis <param> <min> <max> <steps>`
    /// lines, and optional `n`, `draws` and `seed` lines.
    #[arg(long)]
    pub spec: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Directory for one SVG heatmap per summary column.
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    /// 0-based index into θ.
    pub param: usize,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        linspace(self.min, self.max, self.steps)
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// Template; the swept entries of θ are overwritten per cell.
    pub model: ModelSpec,
    pub axes: [Axis; 2],
    pub n: usize,
    pub draws: usize,
    pub seed: u64,
}

pub const DEFAULT_N: usize = 7;
pub const DEFAULT_DRAWS: usize = 100;
pub const DEFAULT_STEPS: usize = 11;
pub const DEFAULT_SEED: u64 = 1;

fn parse_axis(e: &Entry, params: usize) -> ergcftp::Result<Axis> {
    if e.args.len() != 4 {
        return Err(e.error("expected `axis <param> <min> <max> <steps>`"));
    }
    let param = e.integer(0)? as usize;
    if param == 0 || param > params {
        return Err(e.error(format!("parameter {param} out of range 1..={params}")));
    }
    let (min, max) = (e.number(1)?, e.number(2)?);
    let steps = e.integer(3)? as usize;
    if steps < 2 {
        return Err(e.error("an axis needs at least 2 steps"));
    }
    if !(min.is_finite() && max.is_finite()) {
        return Err(e.error("axis limits must be finite"));
    }
    Ok(Axis { param: param - 1, min, max, steps })
}

impl SweepSpec {
    pub fn parse(text: &str) -> ergcftp::Result<Self> {
        let es = entries(text);
        let model = model_from_entries(&es, &StatisticRegistry::default())?;
        let mut axes = Vec::new();
        let (mut n, mut draws, mut seed) = (DEFAULT_N, DEFAULT_DRAWS, DEFAULT_SEED);
        for e in &es {
            match e.key.as_str() {
                "stat" => {}
                "axis" => axes.push((e, parse_axis(e, model.len())?)),
                "n" => n = e.integer(0)? as usize,
                "draws" => draws = e.integer(0)? as usize,
                "seed" => seed = e.integer(0)?,
                other => return Err(e.error(format!("unexpected key `{other}`"))),
            }
        }
        if axes.len() != 2 {
            return Err(ergcftp::Error::Parse {
                line: axes.get(2).map_or(0, |(e, _): &(&Entry, Axis)| e.line),
                msg: format!("a sweep needs exactly two axes, found {}", axes.len()),
            });
        }
        let (e2, b) = axes.pop().expect("two axes");
        let (_, a) = axes.pop().expect("two axes");
        if a.param == b.param {
            return Err(e2.error("both axes sweep the same parameter"));
        }
        Ok(Self { model, axes: [a, b], n, draws, seed })
    }

    pub fn cell_count(&self) -> usize {
        self.axes[0].steps * self.axes[1].steps
    }

    /// θ for `cell`; the first axis varies slowest.
    pub fn cell_theta(&self, cell: usize) -> (f64, f64) {
        let (i, j) = (cell / self.axes[1].steps, cell % self.axes[1].steps);
        (self.axes[0].values()[i], self.axes[1].values()[j])
    }

    pub fn cell_model(&self, cell: usize) -> ergcftp::Result<ModelSpec> {
        let (a, b) = self.cell_theta(cell);
        let mut theta = self.model.theta().to_vec();
        theta[self.axes[0].param] = a;
        theta[self.axes[1].param] = b;
        self.model.with_theta(theta)
    }
}

#[derive(Clone, Debug)]
pub struct CellSummary {
    pub theta1: f64,
    pub theta2: f64,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    /// Fraction of draws that are the empty or the complete graph.
    pub pr_extreme: f64,
    pub mean_coal_time: f64,
    /// Natural log of the mean updates to coalescence.
    pub log_mean_coal_time: f64,
    pub failures: usize,
}

impl CellSummary {
    fn values(&self) -> Vec<f64> {
        let mut v = vec![self.theta1, self.theta2];
        v.extend(&self.means);
        v.extend(&self.sds);
        v.extend([
            self.pr_extreme,
            self.mean_coal_time,
            self.log_mean_coal_time,
            self.failures as f64,
        ]);
        v
    }
}

struct Draw {
    stats: Vec<f64>,
    extreme: bool,
    coal: usize,
}

#[derive(Clone, Debug)]
pub struct SweepResult {
    pub stat_names: Vec<String>,
    pub cells: Vec<CellSummary>,
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["theta1".to_string(), "theta2".to_string()];
        h.extend(self.stat_names.iter().map(|s| format!("mean_{s}")));
        h.extend(self.stat_names.iter().map(|s| format!("sd_{s}")));
        h.extend(["pr_extreme", "mean_coal_time", "log_mean_coal_time", "failures"].map(String::from));
        h
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for c in &self.cells {
            out.push_str(&csv_row(&c.values()));
            out.push('\n');
        }
        out
    }
}

/// Runs every cell. Cell `c` samples with seed `derive_seed(seed, c)`,
/// replication `r` on stream `r`; failures are counted, never fatal.
pub fn run_sweep(spec: &SweepSpec, space: &GraphSpace, base: &CftpConfig, workers: usize) -> CliResult<SweepResult> {
    let models = (0..spec.cell_count())
        .map(|c| spec.cell_model(c))
        .collect::<ergcftp::Result<Vec<_>>>()?;
    spec.model.check_space(space)?;
    spec.model.check_boundable()?;
    let (lower, upper) = space.bounds();
    let (lo_edges, hi_edges) = (lower.edge_count(), upper.edge_count());
    let draws = spec.draws;

    let jobs = run_parallel(workers, models.len() * draws, |k| {
        let (cell, r) = (k / draws, k % draws);
        let cfg = CftpConfig {
            seed: derive_seed(spec.seed, cell as u64),
            stream: r as u64,
            ..base.clone()
        };
        sample(&models[cell], space, &cfg).map(|d| {
            let e = d.graph.edge_count();
            Draw {
                stats: models[cell].evaluate(&d.graph),
                extreme: e == lo_edges || e == hi_edges,
                coal: d.coalescence_time,
            }
        })
    });

    let mut cells = Vec::with_capacity(models.len());
    for cell in 0..models.len() {
        let (theta1, theta2) = spec.cell_theta(cell);
        let mut stats = vec![Moments::default(); spec.model.len()];
        let (mut extreme, mut coal, mut failures) = (Moments::default(), Moments::default(), 0);
        for res in &jobs[cell * draws..(cell + 1) * draws] {
            match res {
                Ok(d) => {
                    stats.iter_mut().zip(&d.stats).for_each(|(m, &x)| m.push(x));
                    extreme.push(if d.extreme { 1.0 } else { 0.0 });
                    coal.push(d.coal as f64);
                }
                Err(ergcftp::Error::NotCoalesced(_)) => failures += 1,
                Err(e) => return Err(e.clone().into()),
            }
        }
        cells.push(CellSummary {
            theta1,
            theta2,
            means: stats.iter().map(Moments::mean).collect(),
            sds: stats.iter().map(Moments::sd).collect(),
            pr_extreme: extreme.mean(),
            mean_coal_time: coal.mean(),
            log_mean_coal_time: coal.mean().ln(),
            failures,
        });
    }
    Ok(SweepResult {
        stat_names: spec.model.stat_names(),
        cells,
    })
}

pub fn heatmaps(spec: &SweepSpec, result: &SweepResult) -> Vec<(String, String)> {
    let xs = spec.axes[0].values();
    let ys = spec.axes[1].values();
    let names = spec.model.stat_names();
    let x_label = format!("theta{} ({})", spec.axes[0].param + 1, names[spec.axes[0].param]);
    let y_label = format!("theta{} ({})", spec.axes[1].param + 1, names[spec.axes[1].param]);
    let header = result.header();
    let rows: Vec<Vec<f64>> = result.cells.iter().map(CellSummary::values).collect();
    header
        .iter()
        .enumerate()
        .skip(2)
        .map(|(col, name)| {
            let grid: Vec<Vec<f64>> = (0..xs.len())
                .map(|i| (0..ys.len()).map(|j| rows[i * ys.len() + j][col]).collect())
                .collect();
            let svg = Heatmap {
                title: name,
                x_label: &x_label,
                y_label: &y_label,
                xs: &xs,
                ys: &ys,
                values: &grid,
            }
            .render();
            (format!("{name}.svg"), svg)
        })
        .collect()
}

pub fn run(args: &SweepArgs) -> CliResult<()> {
    let mut spec = SweepSpec::parse(&read_text(&args.spec)?)
        .map_err(|e| CliError::Usage(anyhow!("{}: {e}", args.spec.display())))?;
    if let Some(n) = args.space.n {
        spec.n = n;
    }
    if let Some(d) = args.run.draws {
        spec.draws = d;
    }
    if let Some(s) = args.run.seed {
        spec.seed = s;
    }
    let space = args.space.build_with(spec.n)?;
    let result = run_sweep(&spec, &space, &args.run.config(spec.seed), args.run.workers)?;
    write_text(&args.out, &result.to_csv())?;
    if let Some(dir) = &args.heatmap {
        for (name, svg) in heatmaps(&spec, &result) {
            write_text(&dir.join(name), &svg)?;
        }
    }
    let failures: usize = result.cells.iter().map(|c| c.failures).sum();
    println!(
        "{} cells x {} draws written to {} ({failures} non-coalesced draws)",
        result.cells.len(),
        spec.draws,
        args.out.display()
    );
    Ok(())
}
