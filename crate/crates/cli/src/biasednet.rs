use std::path::PathBuf;

use anyhow::anyhow;
use clap::{Args, ValueEnum};
use ergcftp::biased::transitivity;
use ergcftp::cftp::{derive_seed, run_parallel, sample};
use ergcftp::modelfile::parse_bias_model;
use ergcftp::{BiasModel, BiasRegistry, CftpConfig, CoupledKernel};

use crate::summary::{csv_row, Moments};
use crate::{read_text, usage, write_text, CliError, CliResult, RunArgs, SpaceArgs, DEFAULT_SEED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepAxis {
    /// The probability of the sibling (or dichotomized sibling) bias.
    Sigma,
    /// The number of vertices, with the baseline rescaled to a fixed mean degree.
    N,
}

#[derive(Debug, Args)]
pub struct BiasednetArgs {
    /// Model file of `bias <kind> <probability>` lines.
    #[arg(long)]
    pub model: PathBuf,
    #[command(flatten)]
    pub space: SpaceArgs,
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_enum, default_value_t = SweepAxis::Sigma)]
    pub sweep: SweepAxis,
    /// First grid value (sigma: 0, n: 5).
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid value (sigma: 0.3, n: 60).
    #[arg(long)]
    pub to: Option<f64>,
    /// Grid spacing (sigma: 0.02, n: 5).
    #[arg(long)]
    pub step: Option<f64>,
    /// 1-based bias line swept by `--sweep sigma`; defaults to the first
    /// sibling or dsibling line.
    #[arg(long)]
    pub term: Option<usize>,
    /// Expected baseline degree for `--sweep n`: baseline = degree / (n - 1).
    #[arg(long, default_value_t = 3.0)]
    pub mean_degree: f64,
    /// Keep the file's baseline probability during `--sweep n`.
    #[arg(long)]
    pub fixed_baseline: bool,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

pub const DEFAULT_DRAWS: usize = 200;
pub const HEADER: &str = "param,mean_density,sd_density,mean_transitivity,sd_transitivity,mean_coal_time,failures";

/// `from, from + step, ...` up to `to`, tolerant of rounding in the step.
pub fn grid(from: f64, to: f64, step: f64) -> CliResult<Vec<f64>> {
    let valid = step > 0.0 && to >= from && from.is_finite() && to.is_finite();
    if !valid {
        return Err(usage(format!("bad grid {from}..{to} by {step}")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| from + step * k as f64).collect())
}

#[derive(Clone, Debug)]
pub struct PointSummary {
    pub param: f64,
    pub density: Moments,
    pub transitivity: Moments,
    pub coal: Moments,
    pub failures: usize,
}

impl PointSummary {
    pub fn row(&self) -> String {
        csv_row(&[
            self.param,
            self.density.mean(),
            self.density.sd(),
            self.transitivity.mean(),
            self.transitivity.sd(),
            self.coal.mean(),
            self.failures as f64,
        ])
    }
}

fn index_of(model: &BiasModel, names: &[&str]) -> Option<usize> {
    model.stats().iter().position(|s| names.contains(&s.name().as_str()))
}

/// A prepared sweep: one model and vertex count per grid point.
pub struct BiasSweep {
    pub params: Vec<f64>,
    pub points: Vec<(BiasModel, usize)>,
}

impl BiasSweep {
    pub fn sigma(model: &BiasModel, term: Option<usize>, n: usize, values: &[f64]) -> CliResult<Self> {
        let k = match term {
            Some(t) if (1..=model.stats().len()).contains(&t) => t - 1,
            Some(t) => return Err(usage(format!("--term {t} out of range"))),
            None => index_of(model, &["sibling", "dsibling"])
                .ok_or_else(|| usage("the model has no sibling bias to sweep"))?,
        };
        let points = values
            .iter()
            .map(|&s| {
                let mut theta = model.theta_star().to_vec();
                theta[k] = s;
                Ok((model.with_theta_star(theta)?, n))
            })
            .collect::<CliResult<_>>()?;
        Ok(Self { params: values.to_vec(), points })
    }

    pub fn size(model: &BiasModel, mean_degree: Option<f64>, values: &[f64]) -> CliResult<Self> {
        let base = index_of(model, &["baseline"]);
        let points = values
            .iter()
            .map(|&v| {
                if v.fract() != 0.0 || v < 2.0 {
                    return Err(usage(format!("vertex count {v} is not an integer of at least 2")));
                }
                let n = v as usize;
                let mut theta = model.theta_star().to_vec();
                if let (Some(k), Some(deg)) = (base, mean_degree) {
                    theta[k] = (deg / (n - 1) as f64).min(1.0);
                }
                Ok((model.with_theta_star(theta)?, n))
            })
            .collect::<CliResult<_>>()?;
        Ok(Self { params: values.to_vec(), points })
    }

    /// Point `p` samples with seed `derive_seed(seed, p)`, replication `r`
    /// on stream `r`.
    pub fn run(&self, space: &SpaceArgs, base: &CftpConfig, draws: usize, workers: usize) -> CliResult<Vec<PointSummary>> {
        let spaces = self
            .points
            .iter()
            .map(|(m, n)| {
                let s = space.build_with(*n)?;
                m.check_space(&s)?;
                Ok(s)
            })
            .collect::<CliResult<Vec<_>>>()?;
        let jobs = run_parallel(workers, self.points.len() * draws, |k| {
            let (p, r) = (k / draws, k % draws);
            let cfg = CftpConfig {
                seed: derive_seed(base.seed, p as u64),
                stream: r as u64,
                ..base.clone()
            };
            sample(&self.points[p].0, &spaces[p], &cfg)
                .map(|d| (d.graph.density(), transitivity(&d.graph), d.coalescence_time))
        });
        let mut out = Vec::with_capacity(self.points.len());
        for (p, &param) in self.params.iter().enumerate() {
            let mut s = PointSummary {
                param,
                density: Moments::default(),
                transitivity: Moments::default(),
                coal: Moments::default(),
                failures: 0,
            };
            for res in &jobs[p * draws..(p + 1) * draws] {
                match res {
                    Ok((d, t, c)) => {
                        s.density.push(*d);
                        s.transitivity.push(*t);
                        s.coal.push(*c as f64);
                    }
                    Err(ergcftp::Error::NotCoalesced(_)) => s.failures += 1,
                    Err(e) => return Err(e.clone().into()),
                }
            }
            out.push(s);
        }
        Ok(out)
    }
}

pub fn to_csv(points: &[PointSummary]) -> String {
    let mut out = format!("{HEADER}\n");
    for p in points {
        out.push_str(&p.row());
        out.push('\n');
    }
    out
}

pub fn run(args: &BiasednetArgs) -> CliResult<()> {
    let model = parse_bias_model(&read_text(&args.model)?, &BiasRegistry::default())
        .map_err(|e| CliError::Usage(anyhow!("{}: {e}", args.model.display())))?;
    let (from, to, step) = match args.sweep {
        SweepAxis::Sigma => (0.0, 0.3, 0.02),
        SweepAxis::N => (5.0, 60.0, 5.0),
    };
    let values = grid(
        args.from.unwrap_or(from),
        args.to.unwrap_or(to),
        args.step.unwrap_or(step),
    )?;
    let sweep = match args.sweep {
        SweepAxis::Sigma => {
            let n = args.space.n.ok_or_else(|| usage("--n is required for a sigma sweep"))?;
            BiasSweep::sigma(&model, args.term, n, &values)?
        }
        SweepAxis::N => {
            let degree = (!args.fixed_baseline).then_some(args.mean_degree);
            BiasSweep::size(&model, degree, &values)?
        }
    };
    let seed = args.run.seed.unwrap_or(DEFAULT_SEED);
    let draws = args.run.draws.unwrap_or(DEFAULT_DRAWS);
    let points = sweep.run(&args.space, &args.run.config(seed), draws, args.run.workers)?;
    write_text(&args.out, &to_csv(&points))?;
    let failures: usize = points.iter().map(|p| p.failures).sum();
    println!(
        "{} points x {draws} draws written to {} ({failures} non-coalesced draws)",
        points.len(),
        args.out.display()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ergcftp::BiasKind;

    #[test]
    fn grid_includes_endpoint() {
        let g = grid(0.0, 0.3, 0.02).unwrap();
        assert_eq!(g.len(), 16);
        assert!((g[15] - 0.3).abs() < 1e-12);
        assert_eq!(grid(5.0, 60.0, 5.0).unwrap().len(), 12);
        assert!(grid(1.0, 0.0, 0.1).is_err());
        assert!(grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn size_sweep_rescales_baseline() {
        let m = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.5), (BiasKind::Sibling, 0.1)]).unwrap();
        let s = BiasSweep::size(&m, Some(3.0), &[4.0, 31.0]).unwrap();
        assert_eq!(s.points[0].1, 4);
        assert_eq!(s.points[0].0.theta_star(), &[1.0, 0.1]);
        assert_eq!(s.points[1].0.theta_star(), &[0.1, 0.1]);
        let fixed = BiasSweep::size(&m, None, &[10.0]).unwrap();
        assert_eq!(fixed.points[0].0.theta_star(), &[0.5, 0.1]);
        assert!(BiasSweep::size(&m, None, &[2.5]).is_err());
    }

    #[test]
    fn sigma_sweep_targets_sibling_term() {
        let m = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.125), (BiasKind::DichotomizedSibling, 0.0)]).unwrap();
        let s = BiasSweep::sigma(&m, None, 10, &[0.0, 0.2]).unwrap();
        assert_eq!(s.points[1].0.theta_star(), &[0.125, 0.2]);
        let only_base = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.125)]).unwrap();
        assert!(BiasSweep::sigma(&only_base, None, 10, &[0.1]).is_err());
        assert!(BiasSweep::sigma(&only_base, Some(1), 10, &[0.1]).is_ok());
    }
}
