//! Exact ERG distributions by complete enumeration on small spaces, and the
//! distance and consistency checks built on them.

use std::collections::HashMap;
use std::io::{self, Write};

use crate::bounding::inverse_logit;
use crate::error::{Error, Result};
use crate::format::fmt_num;
use crate::graph::{AdjacencyState, GraphSpace};
use crate::statistics::ModelSpec;

pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// Probabilities of every graph in a space, keyed by free-dyad bit mask
/// (bit `k` set iff free dyad `k` is present).
#[derive(Clone, Debug)]
pub struct ExactDistribution {
    space: GraphSpace,
    probs: Vec<f64>,
    log_normalizer: f64,
}

impl ExactDistribution {
    pub fn space(&self) -> &GraphSpace {
        &self.space
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, mask: u64) -> f64 {
        self.probs.get(mask as usize).copied().unwrap_or(0.0)
    }

    /// `log Σ_y exp(θᵀt(y))`.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Graphs with their probabilities, in mask order.
    pub fn iter(&self) -> impl Iterator<Item = (AdjacencyState, f64)> + '_ {
        self.probs.iter().enumerate().map(move |(mask, &p)| {
            let y = AdjacencyState::from_free_mask(&self.space, mask as u64)
                .expect("mask within support");
            (y, p)
        })
    }

    /// `Σ_y p(y) f(y)`.
    pub fn expectation<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(&AdjacencyState) -> Vec<f64>,
    {
        let mut acc: Vec<f64> = Vec::new();
        for (y, p) in self.iter() {
            let v = f(&y);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, x) in acc.iter_mut().zip(v) {
                *a += p * x;
            }
        }
        acc
    }

    /// CSV with columns `graph_bits_hex,probability`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "graph_bits_hex,probability")?;
        for (mask, &p) in self.probs.iter().enumerate() {
            writeln!(w, "{mask:x},{}", fmt_num(p))?;
        }
        Ok(())
    }
}

fn check_enumerable(space: &GraphSpace, cap: usize) -> Result<usize> {
    let m = space.free_dyads().len();
    if m > cap || m >= 63 {
        return Err(Error::EnumerationCap { free: m, cap });
    }
    Ok(m)
}

/// Enumerates every graph of `space` with free-dyad count at most `cap`.
pub fn enumerate_distribution_capped(
    model: &ModelSpec,
    space: &GraphSpace,
    cap: usize,
) -> Result<ExactDistribution> {
    let m = check_enumerable(space, cap)?;
    model.check_space(space)?;
    let weights: Vec<f64> = (0..1u64 << m)
        .map(|mask| {
            let y = AdjacencyState::from_free_mask(space, mask).expect("mask in range");
            model.log_weight(&y)
        })
        .collect();
    let max = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shifted: f64 = weights.iter().map(|w| (w - max).exp()).sum();
    let log_normalizer = max + shifted.ln();
    let probs = weights
        .iter()
        .map(|w| (w - log_normalizer).exp())
        .collect();
    Ok(ExactDistribution {
        space: space.clone(),
        probs,
        log_normalizer,
    })
}

pub fn enumerate_distribution(model: &ModelSpec, space: &GraphSpace) -> Result<ExactDistribution> {
    enumerate_distribution_capped(model, space, DEFAULT_ENUMERATION_CAP)
}

/// Plain `Σ exp(θᵀt(y))` without any shift, for cross-checking the
/// stabilized normalizer on well-scaled models.
pub fn naive_normalizer(model: &ModelSpec, space: &GraphSpace) -> Result<f64> {
    let m = check_enumerable(space, DEFAULT_ENUMERATION_CAP)?;
    let mut total = 0.0;
    let mut y = space.empty_state();
    for mask in 0..1u64 << m {
        for (k, &d) in space.free_dyads().iter().enumerate() {
            y.set_raw(d, mask >> k & 1 == 1);
        }
        let mut eta = 0.0;
        for (s, t) in model.stats().iter().zip(model.theta()) {
            eta += t * s.evaluate(&y);
        }
        total += eta.exp();
    }
    Ok(total)
}

/// `Pr(y′) / Pr(y) = exp(θᵀ(t(y′) − t(y)))`.
pub fn probability_ratio(model: &ModelSpec, y: &AdjacencyState, y_prime: &AdjacencyState) -> Result<f64> {
    if y.space() != y_prime.space() {
        return Err(Error::SpaceMismatch);
    }
    let diff: f64 = model
        .evaluate(y_prime)
        .iter()
        .zip(model.evaluate(y))
        .zip(model.theta())
        .map(|((a, b), t)| t * (a - b))
        .sum();
    Ok(diff.exp())
}

/// Empirical frequencies of sampled graphs on one space.
#[derive(Clone, Debug)]
pub struct EmpiricalDistribution {
    space: GraphSpace,
    counts: HashMap<u64, u64>,
    total: u64,
}

impl EmpiricalDistribution {
    pub fn new(space: &GraphSpace) -> Self {
        Self {
            space: space.clone(),
            counts: HashMap::new(),
            total: 0,
        }
    }

    pub fn from_graphs<'a>(space: &GraphSpace, graphs: impl IntoIterator<Item = &'a AdjacencyState>) -> Result<Self> {
        let mut e = Self::new(space);
        for g in graphs {
            e.add(g)?;
        }
        Ok(e)
    }

    pub fn add(&mut self, y: &AdjacencyState) -> Result<()> {
        if y.space() != &self.space {
            return Err(Error::SpaceMismatch);
        }
        let mask = y.free_mask().ok_or(Error::EnumerationCap {
            free: self.space.free_dyads().len(),
            cap: 64,
        })?;
        self.add_mask(mask);
        Ok(())
    }

    pub fn add_mask(&mut self, mask: u64) {
        *self.counts.entry(mask).or_default() += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn frequency(&self, mask: u64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(&mask).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn space(&self) -> &GraphSpace {
        &self.space
    }
}

/// `½ Σ |p̂ − p|`.
pub fn tv_distance(empirical: &EmpiricalDistribution, exact: &ExactDistribution) -> Result<f64> {
    if empirical.space != exact.space {
        return Err(Error::SpaceMismatch);
    }
    let outside: f64 = empirical
        .counts
        .keys()
        .filter(|&&m| m as usize >= exact.probs.len())
        .map(|&m| empirical.frequency(m))
        .sum();
    let inside: f64 = exact
        .probs
        .iter()
        .enumerate()
        .map(|(m, &p)| (empirical.frequency(m as u64) - p).abs())
        .sum();
    Ok(0.5 * (inside + outside))
}

/// Exact expectation of `f` under the model.
pub fn exact_summary<F>(model: &ModelSpec, space: &GraphSpace, f: F) -> Result<Vec<f64>>
where
    F: Fn(&AdjacencyState) -> Vec<f64>,
{
    Ok(enumerate_distribution(model, space)?.expectation(f))
}

/// Largest relative error between enumerated probability ratios and
/// [`probability_ratio`], over all pairs `(y, y′)` where `y′` differs from
/// `y` in one dyad plus all pairs against the empty graph.
pub fn max_ratio_error(model: &ModelSpec, dist: &ExactDistribution) -> Result<f64> {
    let graphs: Vec<(AdjacencyState, f64)> = dist.iter().collect();
    let free = dist.space.free_dyads();
    let mut worst: f64 = 0.0;
    let (base, p_base) = &graphs[0];
    for (mask, (y, p)) in graphs.iter().enumerate() {
        let mut check = |other: &AdjacencyState, p_other: f64| -> Result<()> {
            let expected = probability_ratio(model, y, other)?;
            let observed = p_other / p;
            worst = worst.max(((observed - expected) / expected).abs());
            Ok(())
        };
        check(base, *p_base)?;
        for k in 0..free.len() {
            let other = &graphs[mask ^ (1 << k)];
            check(&other.0, other.1)?;
        }
    }
    Ok(worst)
}

/// Largest absolute error between `p(y⁺)/(p(y⁺) + p(y⁻))` from the
/// enumerated joint and `logit⁻¹(θᵀΔ_d(y))`, over all graphs and free dyads.
pub fn max_conditional_error(model: &ModelSpec, dist: &ExactDistribution) -> Result<f64> {
    let free = dist.space.free_dyads();
    let mut worst: f64 = 0.0;
    for (mask, (y, _)) in dist.iter().enumerate() {
        for (k, &d) in free.iter().enumerate() {
            let plus = dist.probs[mask | 1 << k];
            let minus = dist.probs[mask & !(1 << k)];
            let joint = plus / (plus + minus);
            let gibbs = inverse_logit(model.log_odds(&y, d));
            worst = worst.max((joint - gibbs).abs());
        }
    }
    Ok(worst)
}
