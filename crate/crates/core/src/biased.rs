//! Biased net models sampled as the equilibrium of their pseudo-Gibbs chain.
//!
//! Each dyad is exposed to a number of bias events, each independently
//! forming the edge with probability `θ*ₖ`:
//! `Pr(y_ij = 1 | rest) = 1 − ∏ₖ (1 − θ*ₖ)^{tₖ(i, j, y⁻_ij)}`.
//! With event counts that never decrease under edge addition, this
//! probability is monotone in the graph, so the lower and upper chains can
//! simply evaluate it on their own states.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::cftp::{self, CftpConfig, CoupledKernel, DrawResult};
use crate::error::{Error, Result};
use crate::graph::{common_count, AdjacencyState, Dyad, GraphSpace};

/// A bias event count `t(i, j, y⁻_ij)`. Implementations must be weakly
/// increasing in edge addition.
pub trait BiasStatistic: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    fn check_space(&self, _space: &GraphSpace) -> Result<()> {
        Ok(())
    }

    /// Event count for `d`, evaluated as if `d` were absent.
    fn count(&self, y: &AdjacencyState, d: Dyad) -> u32;
}

/// Constant event: every dyad gets one.
#[derive(Clone, Debug, Default)]
pub struct Baseline;

impl BiasStatistic for Baseline {
    fn name(&self) -> String {
        "baseline".into()
    }

    #[inline]
    fn count(&self, _y: &AdjacencyState, _d: Dyad) -> u32 {
        1
    }
}

/// Reciprocity event: `(i, j)` gets one when `j → i` is present.
#[derive(Clone, Debug, Default)]
pub struct Parent;

impl BiasStatistic for Parent {
    fn name(&self) -> String {
        "parent".into()
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

    #[inline]
    fn count(&self, y: &AdjacencyState, d: Dyad) -> u32 {
        (!d.is_loop() && y.has(d.j, d.i)) as u32
    }
}

/// Incoming shared partners: vertices `k ∉ {i, j}` with `k → i` and `k → j`.
#[derive(Clone, Debug, Default)]
pub struct Sibling;

#[inline]
fn shared_partners(y: &AdjacencyState, d: Dyad) -> u32 {
    common_count(y.col(d.i), y.col(d.j), d.i, d.j)
}

impl BiasStatistic for Sibling {
    fn name(&self) -> String {
        "sibling".into()
    }

    #[inline]
    fn count(&self, y: &AdjacencyState, d: Dyad) -> u32 {
        shared_partners(y, d)
    }
}

/// 1 if `i` and `j` have any incoming shared partner.
#[derive(Clone, Debug, Default)]
pub struct DichotomizedSibling;

impl BiasStatistic for DichotomizedSibling {
    fn name(&self) -> String {
        "dsibling".into()
    }

    #[inline]
    fn count(&self, y: &AdjacencyState, d: Dyad) -> u32 {
        (shared_partners(y, d) > 0) as u32
    }
}

/// Built-in bias kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BiasKind {
    Baseline,
    Parent,
    Sibling,
    DichotomizedSibling,
}

impl BiasKind {
    pub fn build(self) -> Arc<dyn BiasStatistic> {
        match self {
            BiasKind::Baseline => Arc::new(Baseline),
            BiasKind::Parent => Arc::new(Parent),
            BiasKind::Sibling => Arc::new(Sibling),
            BiasKind::DichotomizedSibling => Arc::new(DichotomizedSibling),
        }
    }
}

type BiasFactory = Box<dyn Fn() -> Arc<dyn BiasStatistic> + Send + Sync>;

/// Maps bias names used in model files to constructors.
pub struct BiasRegistry {
    factories: BTreeMap<String, BiasFactory>,
}

impl Default for BiasRegistry {
    fn default() -> Self {
        let mut reg = Self {
            factories: BTreeMap::new(),
        };
        reg.register("baseline", || BiasKind::Baseline.build());
        reg.register("parent", || BiasKind::Parent.build());
        reg.register("sibling", || BiasKind::Sibling.build());
        reg.register("dsibling", || BiasKind::DichotomizedSibling.build());
        reg.register("dichotomized_sibling", || BiasKind::DichotomizedSibling.build());
        reg
    }
}

impl BiasRegistry {
    pub fn register<F>(&mut self, name: &str, factory: F)
    where
        F: Fn() -> Arc<dyn BiasStatistic> + Send + Sync + 'static,
    {
        self.factories.insert(name.to_ascii_lowercase(), Box::new(factory));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str) -> Result<Arc<dyn BiasStatistic>> {
        self.factories
            .get(&name.to_ascii_lowercase())
            .map(|f| f())
            .ok_or_else(|| Error::InvalidModel(format!("unknown bias `{name}`")))
    }
}

/// Bias statistics with per-event formation probabilities `θ*`.
#[derive(Clone, Debug)]
pub struct BiasModel {
    stats: Vec<Arc<dyn BiasStatistic>>,
    theta_star: Vec<f64>,
}

impl BiasModel {
    pub fn new(stats: Vec<Arc<dyn BiasStatistic>>, theta_star: Vec<f64>) -> Result<Self> {
        if stats.is_empty() {
            return Err(Error::InvalidModel("a bias model needs at least one bias".into()));
        }
        if stats.len() != theta_star.len() {
            return Err(Error::InvalidModel(format!(
                "{} biases but {} probabilities",
                stats.len(),
                theta_star.len()
            )));
        }
        if let Some(p) = theta_star.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidModel(format!("bias probability {p} is outside [0, 1]")));
        }
        Ok(Self { stats, theta_star })
    }

    pub fn from_kinds(terms: &[(BiasKind, f64)]) -> Result<Self> {
        Self::new(
            terms.iter().map(|(k, _)| k.build()).collect(),
            terms.iter().map(|t| t.1).collect(),
        )
    }

    pub fn stats(&self) -> &[Arc<dyn BiasStatistic>] {
        &self.stats
    }

    pub fn theta_star(&self) -> &[f64] {
        &self.theta_star
    }

    pub fn with_theta_star(&self, theta_star: Vec<f64>) -> Result<Self> {
        Self::new(self.stats.clone(), theta_star)
    }

    /// Event counts for `d`.
    pub fn bias_counts(&self, y: &AdjacencyState, d: Dyad) -> Vec<u32> {
        self.stats.iter().map(|s| s.count(y, d)).collect()
    }

    /// `1 − ∏ₖ (1 − θ*ₖ)^{tₖ}`.
    #[inline]
    pub fn edge_prob(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        let none: f64 = self
            .stats
            .iter()
            .zip(&self.theta_star)
            .map(|(s, &p)| (1.0 - p).powi(s.count(y, d) as i32))
            .product();
        1.0 - none
    }
}

impl CoupledKernel for BiasModel {
    fn check_space(&self, space: &GraphSpace) -> Result<()> {
        self.stats.iter().try_for_each(|s| s.check_space(space))
    }

    #[inline]
    fn edge_prob(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        BiasModel::edge_prob(self, y, d)
    }

    #[inline]
    fn bound_probs(&self, lower: &AdjacencyState, upper: &AdjacencyState, d: Dyad) -> (f64, f64) {
        (self.edge_prob(lower, d), self.edge_prob(upper, d))
    }

    /// Strict comparison: present iff `u < p`.
    #[inline]
    fn accepts(&self, u: f64, p: f64) -> bool {
        u < p
    }
}

/// One pseudo-Gibbs update of dyad `d`.
pub fn pseudo_gibbs_step(
    model: &BiasModel,
    y: &AdjacencyState,
    d: Dyad,
    u: f64,
) -> Result<AdjacencyState> {
    cftp::gibbs_step(model, y, d, u)
}

/// Exact draw from the pseudo-Gibbs chain's equilibrium.
pub fn sample_biased(model: &BiasModel, space: &GraphSpace, config: &CftpConfig) -> Result<DrawResult> {
    cftp::sample(model, space, config)
}

/// Fraction of two-paths `i → j → k` (distinct vertices) closed by `i → k`;
/// 0 when there are none. Undirected graphs count each edge both ways.
pub fn transitivity(y: &AdjacencyState) -> f64 {
    let n = y.n();
    let mut paths = 0u64;
    let mut closed = 0u64;
    for i in 0..n {
        for j in 0..n {
            if i == j || !y.has(i, j) {
                continue;
            }
            let out_j = y.row(j);
            let mut c_paths = out_j.iter().map(|w| w.count_ones()).sum::<u32>();
            if y.has(j, i) {
                c_paths -= 1;
            }
            if y.has(j, j) {
                c_paths -= 1;
            }
            paths += u64::from(c_paths);
            closed += u64::from(common_count(out_j, y.row(i), i, j));
        }
    }
    if paths == 0 {
        0.0
    } else {
        closed as f64 / paths as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arcs(space: &GraphSpace, list: &[(usize, usize)]) -> AdjacencyState {
        list.iter().fold(space.empty_state(), |y, &(i, j)| {
            y.with_edge(Dyad::new(i, j), true).unwrap()
        })
    }

    #[test]
    fn bias_count_examples() {
        let s = GraphSpace::directed(5).unwrap();
        let y = arcs(&s, &[(2, 0), (2, 1)]);
        let d = Dyad::new(0, 1);
        assert_eq!(Sibling.count(&y, d), 1);
        let y2 = y.with_edge(Dyad::new(3, 0), true).unwrap().with_edge(Dyad::new(3, 1), true).unwrap();
        assert_eq!(Sibling.count(&y2, d), 2);
        assert_eq!(DichotomizedSibling.count(&y2, d), 1);
        assert_eq!(Baseline.count(&y2, d), 1);
        assert_eq!(Parent.count(&y2, d), 0);
        let y3 = y2.with_edge(Dyad::new(1, 0), true).unwrap();
        assert_eq!(Parent.count(&y3, d), 1);
        // i and j themselves are never shared partners
        let y4 = arcs(&s, &[(0, 1), (1, 0)]);
        assert_eq!(Sibling.count(&y4, d), 0);
    }

    #[test]
    fn edge_prob_examples() {
        let s = GraphSpace::directed(6).unwrap();
        let (lo, hi) = s.bounds();
        let base = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.125)]).unwrap();
        assert_eq!(base.edge_prob(&lo, Dyad::new(0, 1)), 0.125);
        assert_eq!(base.edge_prob(&hi, Dyad::new(3, 1)), 0.125);
        let zero = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.0), (BiasKind::Sibling, 0.0)]).unwrap();
        assert_eq!(zero.edge_prob(&hi, Dyad::new(0, 1)), 0.0);

        let m = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.125), (BiasKind::Sibling, 0.1)]).unwrap();
        let y = arcs(&s, &[(2, 0), (2, 1), (3, 0), (3, 1)]);
        let p = m.edge_prob(&y, Dyad::new(0, 1));
        // independent route: complement of no event firing
        let none = 0.875 * 0.9 * 0.9;
        assert!((p - (1.0 - none)).abs() < 1e-15);
        assert!((p - 0.29125).abs() < 1e-12);
    }

    #[test]
    fn pseudo_gibbs_examples() {
        let s = GraphSpace::directed(4).unwrap();
        let y = s.empty_state();
        let d = Dyad::new(2, 3);
        let off = BiasModel::from_kinds(&[(BiasKind::Baseline, 0.0)]).unwrap();
        assert!(!pseudo_gibbs_step(&off, &y, d, 0.0).unwrap().has_dyad(d));
        let on = BiasModel::from_kinds(&[(BiasKind::Baseline, 1.0)]).unwrap();
        assert!(pseudo_gibbs_step(&on, &y, d, 0.999_999).unwrap().has_dyad(d));
    }

    #[test]
    fn transitivity_examples() {
        let s = GraphSpace::directed(4).unwrap();
        let (empty, complete) = s.bounds();
        assert_eq!(transitivity(&complete), 1.0);
        assert_eq!(transitivity(&empty), 0.0);
        let open = arcs(&s, &[(0, 1), (1, 2)]);
        assert_eq!(transitivity(&open), 0.0);
        let closed = open.with_edge(Dyad::new(0, 2), true).unwrap();
        assert_eq!(transitivity(&closed), 1.0);
        // a reciprocated pair is not a two-path
        let mutual = arcs(&s, &[(0, 1), (1, 0)]);
        assert_eq!(transitivity(&mutual), 0.0);
    }

    #[test]
    fn transitivity_brute_force() {
        let s = GraphSpace::directed(5).unwrap();
        let y = arcs(&s, &[(0, 1), (1, 2), (0, 2), (2, 0), (3, 1), (1, 4), (4, 3), (3, 4)]);
        let (mut paths, mut closed) = (0, 0);
        for i in 0..5 {
            for j in 0..5 {
                for k in 0..5 {
                    if i == j || j == k || i == k || !y.has(i, j) || !y.has(j, k) {
                        continue;
                    }
                    paths += 1;
                    closed += y.has(i, k) as i32;
                }
            }
        }
        assert_eq!(transitivity(&y), f64::from(closed) / f64::from(paths));
    }

    #[test]
    fn model_validation() {
        assert!(BiasModel::from_kinds(&[(BiasKind::Baseline, 1.5)]).is_err());
        assert!(BiasModel::new(vec![], vec![]).is_err());
        let m = BiasModel::from_kinds(&[(BiasKind::Parent, 0.3)]).unwrap();
        assert!(CoupledKernel::check_space(&m, &GraphSpace::undirected(4).unwrap()).is_err());
    }

    #[test]
    fn registry() {
        let reg = BiasRegistry::default();
        assert_eq!(reg.create("Sibling").unwrap().name(), "sibling");
        assert_eq!(reg.create("dichotomized_sibling").unwrap().name(), "dsibling");
        assert!(reg.create("double_role").is_err());
    }
}
