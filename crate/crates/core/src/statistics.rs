//! ERG sufficient statistics, their change scores, and the statistic registry.
//!
//! Every statistic implements [`Statistic`]. Built-ins are subgraph census
//! counts whose change scores are weakly increasing in edge addition, which is
//! what lets the bounding chains use the current lower and upper states
//! directly. Third-party statistics plug in through [`StatisticRegistry`].

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{common_count, AdjacencyState, Dyad, GraphSpace};

/// How a statistic's values and change scores respond to edge addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    /// Change scores are nonnegative and weakly increasing under `⊆`.
    CensusMonotone,
    /// The statistic itself is weakly increasing under `⊆`.
    StatisticMonotone,
    General,
}

pub trait Statistic: Send + Sync + fmt::Debug {
    /// Short identifier used in CSV headers, e.g. `kstar2`.
    fn name(&self) -> String;

    fn monotonicity(&self) -> Monotonicity;

    fn check_space(&self, _space: &GraphSpace) -> Result<()> {
        Ok(())
    }

    fn evaluate(&self, y: &AdjacencyState) -> f64;

    /// `t(y⁺_d) − t(y⁻_d)`. Must not depend on the current value of `d`.
    fn change_score(&self, y: &AdjacencyState, d: Dyad) -> f64;

    /// Whether [`change_bounds`](Self::change_bounds) can produce bounds.
    fn has_bounds(&self) -> bool {
        self.monotonicity() != Monotonicity::General
    }

    /// Lower and upper bounds on `change_score(y, d)` over every `y` with
    /// `lower ⊆ y ⊆ upper`. Statistics with [`Monotonicity::General`] must
    /// override this (and [`has_bounds`](Self::has_bounds)) to be sampled.
    fn change_bounds(
        &self,
        lower: &AdjacencyState,
        upper: &AdjacencyState,
        d: Dyad,
    ) -> Option<(f64, f64)> {
        match self.monotonicity() {
            Monotonicity::CensusMonotone => {
                Some((self.change_score(lower, d), self.change_score(upper, d)))
            }
            Monotonicity::StatisticMonotone => {
                let mut up = upper.clone();
                up.set_raw(d, true);
                let mut down = lower.clone();
                down.set_raw(d, false);
                Some((0.0, self.evaluate(&up) - self.evaluate(&down)))
            }
            Monotonicity::General => None,
        }
    }
}

/// `C(n, k)` in floating point.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, r| acc * f64::from(n - r) / f64::from(r + 1))
}

fn require_undirected(stat: &dyn Statistic, space: &GraphSpace) -> Result<()> {
    if space.is_directed() {
        return Err(Error::IncompatibleStatistic {
            stat: stat.name(),
            reason: "defined for undirected spaces only".into(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, Default)]
pub struct EdgeCount;

impl Statistic for EdgeCount {
    fn name(&self) -> String {
        "edges".into()
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::CensusMonotone
    }

    fn evaluate(&self, y: &AdjacencyState) -> f64 {
        y.edge_count() as f64
    }

    #[inline]
    fn change_score(&self, _y: &AdjacencyState, _d: Dyad) -> f64 {
        1.0
    }
}

/// Number of `k`-stars, `Σᵢ C(dᵢ, k)`.
#[derive(Clone, Debug)]
pub struct KStar {
    k: u32,
    // C(d, k - 1) for small d
    table: Vec<f64>,
}

const KSTAR_TABLE: u32 = 256;

impl KStar {
    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidModel("k-star order must be at least 1".into()));
        }
        let table = (0..KSTAR_TABLE).map(|d| binomial(d, k - 1)).collect();
        Ok(Self { k, table })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    fn lower_binom(&self, d: u32) -> f64 {
        match self.table.get(d as usize) {
            Some(&v) => v,
            None => binomial(d, self.k - 1),
        }
    }
}

impl Statistic for KStar {
    fn name(&self) -> String {
        format!("kstar{}", self.k)
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::CensusMonotone
    }

    fn check_space(&self, space: &GraphSpace) -> Result<()> {
        require_undirected(self, space)?;
        if self.k as usize > space.n() - 1 {
            return Err(Error::IncompatibleStatistic {
                stat: self.name(),
                reason: format!("k must be at most n - 1 = {}", space.n() - 1),
            });
        }
        Ok(())
    }

    fn evaluate(&self, y: &AdjacencyState) -> f64 {
        (0..y.n()).map(|i| binomial(y.degree(i), self.k)).sum()
    }

    #[inline]
    fn change_score(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        let present = y.has_dyad(d) as u32;
        let di = y.degree(d.i) - present;
        if d.is_loop() {
            return self.lower_binom(di);
        }
        let dj = y.degree(d.j) - present;
        self.lower_binom(di) + self.lower_binom(dj)
    }
}

/// Number of triangles (copies of `K₃`).
#[derive(Clone, Debug, Default)]
pub struct Triangle;

impl Statistic for Triangle {
    fn name(&self) -> String {
        "triangle".into()
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::CensusMonotone
    }

    fn check_space(&self, space: &GraphSpace) -> Result<()> {
        require_undirected(self, space)
    }

    fn evaluate(&self, y: &AdjacencyState) -> f64 {
        let twice_three: u32 = y
            .edges()
            .filter(|d| !d.is_loop())
            .map(|d| common_count(y.row(d.i), y.row(d.j), d.i, d.j))
            .sum();
        f64::from(twice_three / 3)
    }

    #[inline]
    fn change_score(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        if d.is_loop() {
            return 0.0;
        }
        f64::from(common_count(y.row(d.i), y.row(d.j), d.i, d.j))
    }
}

/// Number of reciprocated pairs `i ≠ j` with `y_ij = y_ji = 1` (digraphs).
#[derive(Clone, Debug, Default)]
pub struct Mutual;

impl Statistic for Mutual {
    fn name(&self) -> String {
        "mutual".into()
    }

    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::CensusMonotone
    }

    fn check_space(&self, space: &GraphSpace) -> Result<()> {
        if !space.is_directed() {
            return Err(Error::IncompatibleStatistic {
                stat: self.name(),
                reason: "requires a directed space".into(),
            });
        }
        Ok(())
    }

    fn evaluate(&self, y: &AdjacencyState) -> f64 {
        let n = y.n();
        (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .filter(|&(i, j)| y.has(i, j) && y.has(j, i))
            .count() as f64
    }

    #[inline]
    fn change_score(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        if d.is_loop() {
            0.0
        } else {
            y.has(d.j, d.i) as u8 as f64
        }
    }
}

/// The built-in statistic kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StatisticKind {
    EdgeCount,
    KStar(u32),
    Triangle,
    Mutual,
}

impl StatisticKind {
    pub fn build(self) -> Result<Arc<dyn Statistic>> {
        Ok(match self {
            StatisticKind::EdgeCount => Arc::new(EdgeCount),
            StatisticKind::KStar(k) => Arc::new(KStar::new(k)?),
            StatisticKind::Triangle => Arc::new(Triangle),
            StatisticKind::Mutual => Arc::new(Mutual),
        })
    }
}

type StatisticFactory = Box<dyn Fn(&[&str]) -> Result<Arc<dyn Statistic>> + Send + Sync>;

/// Maps statistic names used in model files to constructors.
pub struct StatisticRegistry {
    factories: BTreeMap<String, StatisticFactory>,
}

impl Default for StatisticRegistry {
    fn default() -> Self {
        let mut reg = Self::empty();
        let no_params = |name: &'static str, kind: StatisticKind| {
            move |params: &[&str]| {
                if !params.is_empty() {
                    return Err(Error::InvalidModel(format!("`{name}` takes no parameters")));
                }
                kind.build()
            }
        };
        reg.register("edges", no_params("edges", StatisticKind::EdgeCount));
        reg.register("edgecount", no_params("edgecount", StatisticKind::EdgeCount));
        reg.register("triangle", no_params("triangle", StatisticKind::Triangle));
        reg.register("mutual", no_params("mutual", StatisticKind::Mutual));
        reg.register("kstar", |params: &[&str]| match params {
            [k] => {
                let k = k
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidModel(format!("bad k-star order `{k}`")))?;
                StatisticKind::KStar(k).build()
            }
            _ => Err(Error::InvalidModel("`kstar` takes exactly one parameter".into())),
        });
        reg
    }
}

impl StatisticRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn(&[&str]) -> Result<Arc<dyn Statistic>> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_ascii_lowercase(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, params: &[&str]) -> Result<Arc<dyn Statistic>> {
        let factory = self
            .factories
            .get(&name.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidModel(format!("unknown statistic `{name}`")))?;
        factory(params)
    }
}

/// An ERG model: statistics `t` with natural parameters `θ`.
#[derive(Clone, Debug)]
pub struct ModelSpec {
    stats: Vec<Arc<dyn Statistic>>,
    theta: Vec<f64>,
}

impl ModelSpec {
    pub fn new(stats: Vec<Arc<dyn Statistic>>, theta: Vec<f64>) -> Result<Self> {
        if stats.is_empty() {
            return Err(Error::InvalidModel("a model needs at least one statistic".into()));
        }
        if stats.len() != theta.len() {
            return Err(Error::InvalidModel(format!(
                "{} statistics but {} parameters",
                stats.len(),
                theta.len()
            )));
        }
        if let Some(t) = theta.iter().find(|t| !t.is_finite()) {
            return Err(Error::InvalidModel(format!("parameter {t} is not finite")));
        }
        Ok(Self { stats, theta })
    }

    pub fn from_kinds(terms: &[(StatisticKind, f64)]) -> Result<Self> {
        let stats = terms
            .iter()
            .map(|(k, _)| k.build())
            .collect::<Result<Vec<_>>>()?;
        Self::new(stats, terms.iter().map(|t| t.1).collect())
    }

    pub fn stats(&self) -> &[Arc<dyn Statistic>] {
        &self.stats
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.stats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stats.is_empty()
    }

    /// Same statistics, new parameters.
    pub fn with_theta(&self, theta: Vec<f64>) -> Result<Self> {
        Self::new(self.stats.clone(), theta)
    }

    pub fn stat_names(&self) -> Vec<String> {
        self.stats.iter().map(|s| s.name()).collect()
    }

    /// Checks every statistic against the space.
    pub fn check_space(&self, space: &GraphSpace) -> Result<()> {
        self.stats.iter().try_for_each(|s| s.check_space(space))
    }

    /// Fails unless bounds can be computed for every statistic.
    pub fn check_boundable(&self) -> Result<()> {
        match self.stats.iter().find(|s| !s.has_bounds()) {
            Some(s) => Err(Error::UnsupportedModel(format!(
                "statistic `{}` has general monotonicity and no bound functions",
                s.name()
            ))),
            None => Ok(()),
        }
    }

    /// `t(y)`.
    pub fn evaluate(&self, y: &AdjacencyState) -> Vec<f64> {
        self.stats.iter().map(|s| s.evaluate(y)).collect()
    }

    /// `θᵀt(y)`.
    pub fn log_weight(&self, y: &AdjacencyState) -> f64 {
        self.stats
            .iter()
            .zip(&self.theta)
            .map(|(s, t)| t * s.evaluate(y))
            .sum()
    }

    /// `Δ_d(y)`.
    pub fn change_vector(&self, y: &AdjacencyState, d: Dyad) -> Vec<f64> {
        self.stats.iter().map(|s| s.change_score(y, d)).collect()
    }

    /// `θᵀΔ_d(y)`, the log-odds of the Gibbs full conditional.
    #[inline]
    pub fn log_odds(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        self.stats
            .iter()
            .zip(&self.theta)
            .map(|(s, t)| t * s.change_score(y, d))
            .sum()
    }
}
