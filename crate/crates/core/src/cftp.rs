//! Coupling from the past with geometric back-off.
//!
//! A [`RandomTape`] holds one `(u, dyad)` entry per past time index, entry
//! `k` belonging to time `-(k + 1)`. Each round starts the bounding pair from
//! the extreme states at time `-depth` and runs it forward over the tape. If
//! the pair meets at some time `-j`, the coalesced state is carried forward by
//! the plain single-dyad chain to time 0 and returned. Otherwise the tape is
//! extended further into the past (never rewritten) and the depth doubled.
//!
//! The engine is generic over [`CoupledKernel`], which both ERG models
//! ([`ModelSpec`](crate::statistics::ModelSpec)) and biased nets
//! ([`BiasModel`](crate::biased::BiasModel)) implement.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bounding::BoundPair;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyState, Dyad, GraphSpace};

/// A single-dyad update rule that admits monotone bounding chains.
pub trait CoupledKernel: Send + Sync {
    /// Rejects models that cannot be sampled on `space`.
    fn check_space(&self, space: &GraphSpace) -> Result<()>;

    /// Probability that `d` is present after updating it from state `y`.
    fn edge_prob(&self, y: &AdjacencyState, d: Dyad) -> f64;

    /// Presence probabilities for the lower and upper chains. Every state
    /// between `lower` and `upper` must have an `edge_prob` inside the pair.
    fn bound_probs(&self, lower: &AdjacencyState, upper: &AdjacencyState, d: Dyad) -> (f64, f64);

    /// Threshold rule shared by all chains.
    #[inline]
    fn accepts(&self, u: f64, p: f64) -> bool {
        u <= p
    }
}

/// Name of the tape generation scheme, recorded for reproducibility.
pub const TAPE_SCHEME: &str = "chacha8(seed, stream), per entry: u = f64 in [0,1), then uniform free-dyad index";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TapeEntry {
    pub u: f64,
    /// Index into [`GraphSpace::free_dyads`].
    pub dyad: u32,
}

/// Append-only record of coins and dyad choices, indexed backward from time -1.
#[derive(Clone, Debug)]
pub struct RandomTape {
    seed: u64,
    stream: u64,
    free_count: usize,
    rng: ChaCha8Rng,
    entries: Vec<TapeEntry>,
}

impl RandomTape {
    pub fn new(seed: u64, stream: u64, free_count: usize) -> Self {
        assert!(free_count > 0, "tape needs at least one free dyad");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            seed,
            stream,
            free_count,
            rng,
            entries: Vec::new(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn depth(&self) -> usize {
        self.entries.len()
    }

    /// Entry for time `-time`, `time >= 1`.
    pub fn at(&self, time: usize) -> TapeEntry {
        self.entries[time - 1]
    }

    /// All entries; index `k` is time `-(k + 1)`.
    pub fn entries(&self) -> &[TapeEntry] {
        &self.entries
    }

    /// Fills times `-new_depth..=-(depth + 1)`. Existing entries are untouched.
    pub fn extend_to(&mut self, new_depth: usize) {
        let extra = new_depth.saturating_sub(self.entries.len());
        self.entries.reserve(extra);
        for _ in 0..extra {
            let u = self.rng.gen::<f64>();
            let dyad = self.rng.gen_range(0..self.free_count) as u32;
            self.entries.push(TapeEntry { u, dyad });
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MaxDepthBehavior {
    /// Return [`Error::NotCoalesced`].
    #[default]
    Fail,
    /// Return a [`DrawResult`] with `coalesced == false` holding the lower
    /// chain's state at time 0. That state is not an exact draw.
    ReturnDiagnostic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CftpConfig {
    pub seed: u64,
    pub stream: u64,
    /// Defaults to the number of free dyads.
    pub initial_depth: Option<usize>,
    pub max_depth: usize,
    pub max_depth_behavior: MaxDepthBehavior,
    /// Run a shadow chain from a random interior state and check the sandwich
    /// at every step.
    pub audit: bool,
}

pub const DEFAULT_MAX_DEPTH: usize = 1 << 20;

impl Default for CftpConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            stream: 0,
            initial_depth: None,
            max_depth: DEFAULT_MAX_DEPTH,
            max_depth_behavior: MaxDepthBehavior::Fail,
            audit: false,
        }
    }
}

impl CftpConfig {
    pub fn seeded(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_initial_depth(mut self, depth: usize) -> Self {
        self.initial_depth = Some(depth);
        self
    }

    pub fn with_max_depth_behavior(mut self, behavior: MaxDepthBehavior) -> Self {
        self.max_depth_behavior = behavior;
        self
    }

    pub fn with_audit(mut self, audit: bool) -> Self {
        self.audit = audit;
        self
    }

    /// Configuration for replication `r`: same seed, stream `r`.
    pub fn for_replication(&self, r: u64) -> Self {
        Self {
            stream: r,
            ..self.clone()
        }
    }
}

/// Mixes an index into a seed (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// State of a run that did not coalesce.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostics {
    /// Deepest start time tried.
    pub depth: usize,
    pub rounds: usize,
    pub total_updates: u64,
    /// Dyads still differing between the bounding chains at time 0.
    pub remaining_diff: usize,
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} rounds, {} updates, {} dyads unresolved",
            self.rounds, self.total_updates, self.remaining_diff
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DrawResult {
    pub graph: AdjacencyState,
    /// Updates from the start of the final round until the bounding chains met.
    pub coalescence_time: usize,
    pub total_updates: u64,
    pub rounds: usize,
    /// Start depth of the final round.
    pub depth: usize,
    pub coalesced: bool,
}

/// One update of the target chain: `d` is set present iff `kernel.accepts(u, p)`.
pub fn gibbs_step<K: CoupledKernel + ?Sized>(
    kernel: &K,
    y: &AdjacencyState,
    d: Dyad,
    u: f64,
) -> Result<AdjacencyState> {
    let d = y.space().canonical(d)?;
    if y.space().free_index(d).is_none() {
        return Err(Error::InvalidDyad {
            dyad: d,
            reason: "not a free dyad",
        });
    }
    let mut next = y.clone();
    let p = kernel.edge_prob(y, d);
    next.set_raw(d, kernel.accepts(u, p));
    Ok(next)
}

enum Round {
    Coalesced {
        graph: AdjacencyState,
        at: usize,
    },
    Open {
        lower: AdjacencyState,
        diff: usize,
    },
}

struct Shadow {
    state: AdjacencyState,
}

impl Shadow {
    fn random(space: &GraphSpace, rng: &mut ChaCha8Rng) -> Self {
        let mut state = space.empty_state();
        for &d in space.free_dyads() {
            state.set_raw(d, rng.gen::<bool>());
        }
        Self { state }
    }
}

fn run_round<K: CoupledKernel + ?Sized>(
    kernel: &K,
    space: &GraphSpace,
    tape: &RandomTape,
    depth: usize,
    round: usize,
    mut shadow: Option<Shadow>,
) -> Result<Round> {
    let free = space.free_dyads();
    let entries = &tape.entries()[..depth];
    let mut pair = BoundPair::from_space(space);
    // time -depth first, time -1 last
    let mut steps = entries.iter().rev().enumerate();

    let mut at = None;
    for (step, e) in steps.by_ref() {
        let d = free[e.dyad as usize];
        if let Some(sh) = shadow.as_mut() {
            let p = kernel.edge_prob(&sh.state, d);
            sh.state.set_raw(d, kernel.accepts(e.u, p));
        }
        pair.update(kernel, d, e.u);
        if let Some(sh) = &shadow {
            if !pair.lower().is_subgraph_unchecked(&sh.state)
                || !sh.state.is_subgraph_unchecked(pair.upper())
            {
                return Err(Error::SandwichViolation { round, step });
            }
        }
        if pair.is_coalesced() {
            at = Some(step + 1);
            break;
        }
    }

    let Some(at) = at else {
        let diff = pair.diff_count();
        let (lower, _) = pair.into_states();
        return Ok(Round::Open { lower, diff });
    };

    let (mut y, _) = pair.into_states();
    for (step, e) in steps {
        let d = free[e.dyad as usize];
        let p = kernel.edge_prob(&y, d);
        y.set_raw(d, kernel.accepts(e.u, p));
        if let Some(sh) = shadow.as_mut() {
            let p = kernel.edge_prob(&sh.state, d);
            sh.state.set_raw(d, kernel.accepts(e.u, p));
            if sh.state != y {
                return Err(Error::SandwichViolation { round, step });
            }
        }
    }
    Ok(Round::Coalesced { graph: y, at })
}

/// Draws one exact sample from the stationary distribution of `kernel`'s
/// single-dyad chain on `space`.
pub fn sample<K: CoupledKernel + ?Sized>(
    kernel: &K,
    space: &GraphSpace,
    config: &CftpConfig,
) -> Result<DrawResult> {
    kernel.check_space(space)?;
    let initial = config
        .initial_depth
        .unwrap_or(space.free_dyads().len());
    if initial == 0 {
        return Err(Error::InvalidConfig("initial depth must be at least 1".into()));
    }
    if config.max_depth < initial {
        return Err(Error::InvalidConfig(format!(
            "max depth {} is below the initial depth {initial}",
            config.max_depth
        )));
    }

    let mut tape = RandomTape::new(config.seed, config.stream, space.free_dyads().len());
    let mut audit_rng = config.audit.then(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, u64::MAX));
        rng.set_stream(config.stream);
        rng
    });

    let mut depth = initial;
    let mut rounds = 0;
    let mut total_updates = 0u64;
    loop {
        rounds += 1;
        tape.extend_to(depth);
        let shadow = audit_rng.as_mut().map(|rng| Shadow::random(space, rng));
        total_updates += depth as u64;
        match run_round(kernel, space, &tape, depth, rounds, shadow)? {
            Round::Coalesced { graph, at } => {
                return Ok(DrawResult {
                    graph,
                    coalescence_time: at,
                    total_updates,
                    rounds,
                    depth,
                    coalesced: true,
                });
            }
            Round::Open { lower, diff } => {
                if depth >= config.max_depth {
                    let diag = Diagnostics {
                        depth,
                        rounds,
                        total_updates,
                        remaining_diff: diff,
                    };
                    return match config.max_depth_behavior {
                        MaxDepthBehavior::Fail => Err(Error::NotCoalesced(diag)),
                        MaxDepthBehavior::ReturnDiagnostic => Ok(DrawResult {
                            graph: lower,
                            coalescence_time: depth,
                            total_updates,
                            rounds,
                            depth,
                            coalesced: false,
                        }),
                    };
                }
                depth = depth.saturating_mul(2).min(config.max_depth);
            }
        }
    }
}

/// Runs `count` independent replications, replication `r` on stream `r` of
/// `config.seed`. Output order and content do not depend on `workers`
/// (0 means one worker per available core).
pub fn sample_many<K: CoupledKernel + ?Sized>(
    kernel: &K,
    space: &GraphSpace,
    config: &CftpConfig,
    count: usize,
    workers: usize,
) -> Vec<Result<DrawResult>> {
    run_parallel(workers, count, |r| {
        sample(kernel, space, &config.for_replication(r as u64))
    })
}

/// Evaluates `job(0..count)` on a pool of `workers` threads, in index order.
pub fn run_parallel<T, F>(workers: usize, count: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    if workers == 1 {
        return (0..count).map(job).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(&job).collect()),
        Err(_) => (0..count).map(job).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounding::logit;
    use crate::statistics::ModelSpec;
    use crate::statistics::StatisticKind::*;

    #[test]
    fn gibbs_step_examples() {
        let s = GraphSpace::undirected(4).unwrap();
        let y = s.empty_state();
        let d = Dyad::new(1, 0);
        let fair = ModelSpec::from_kinds(&[(EdgeCount, 0.0), (Triangle, 0.0)]).unwrap();
        assert!(gibbs_step(&fair, &y, d, 0.4).unwrap().has_dyad(d));
        assert!(!gibbs_step(&fair, &y, d, 0.6).unwrap().has_dyad(d));
        let strong = ModelSpec::from_kinds(&[(EdgeCount, 700.0)]).unwrap();
        assert!(gibbs_step(&strong, &y, d, 0.999_999).unwrap().has_dyad(d));
    }

    #[test]
    fn gibbs_step_rejects_restricted_dyad() {
        let s = GraphSpace::egocentric(4, 0, false).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, 0.0)]).unwrap();
        let y = s.empty_state();
        assert!(gibbs_step(&m, &y, Dyad::new(1, 0), 0.5).is_err());
        assert!(gibbs_step(&m, &y, Dyad::new(2, 1), 0.5).is_ok());
    }

    #[test]
    fn tape_extension_keeps_old_entries() {
        let mut tape = RandomTape::new(9, 0, 21);
        tape.extend_to(21);
        let old = tape.entries().to_vec();
        tape.extend_to(42);
        tape.extend_to(84);
        assert_eq!(tape.depth(), 84);
        assert_eq!(&tape.entries()[..21], &old[..]);

        let mut other = RandomTape::new(9, 0, 21);
        other.extend_to(84);
        assert_eq!(other.entries(), tape.entries());
        assert!(tape.entries().iter().all(|e| (0.0..1.0).contains(&e.u) && e.dyad < 21));

        let mut stream1 = RandomTape::new(9, 1, 21);
        stream1.extend_to(84);
        assert_ne!(stream1.entries(), tape.entries());
    }

    #[test]
    fn doubling_schedule() {
        let s = GraphSpace::undirected(7).unwrap();
        // strongly degenerate-but-balanced parameters keep the pair apart for a while
        let m = ModelSpec::from_kinds(&[(EdgeCount, -6.0), (KStar(2), 0.75)]).unwrap();
        let cfg = CftpConfig::seeded(3).with_max_depth(84);
        match sample(&m, &s, &cfg) {
            Err(Error::NotCoalesced(diag)) => {
                assert_eq!(diag.depth, 84);
                assert_eq!(diag.rounds, 3);
                assert_eq!(diag.total_updates, 21 + 42 + 84);
            }
            Ok(r) => assert!(r.depth == 21 || r.depth == 42 || r.depth == 84),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let s = GraphSpace::undirected(6).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, -0.5), (Triangle, 0.4)]).unwrap();
        let cfg = CftpConfig::seeded(17);
        assert_eq!(sample(&m, &s, &cfg).unwrap(), sample(&m, &s, &cfg).unwrap());
    }

    #[test]
    fn independent_edges_coalesce_in_first_round_once_all_dyads_seen() {
        let s = GraphSpace::undirected(7).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, logit(0.3))]).unwrap();
        for seed in 0..20 {
            let r = sample(&m, &s, &CftpConfig::seeded(seed)).unwrap();
            let mut tape = RandomTape::new(seed, 0, 21);
            tape.extend_to(r.depth);
            // coalescence happens exactly when the last unseen dyad is drawn
            let mut seen = [false; 21];
            let mut left = 21;
            let mut when = None;
            for (step, e) in tape.entries().iter().rev().enumerate() {
                if !seen[e.dyad as usize] {
                    seen[e.dyad as usize] = true;
                    left -= 1;
                    if left == 0 {
                        when = Some(step + 1);
                        break;
                    }
                }
            }
            assert_eq!(Some(r.coalescence_time), when);
        }
    }

    #[test]
    fn result_invariant_to_initial_depth() {
        let s = GraphSpace::undirected(5).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, -0.8), (KStar(2), 0.3), (Triangle, 0.4)]).unwrap();
        for seed in 0..30 {
            let doubling = sample(&m, &s, &CftpConfig::seeded(seed)).unwrap();
            let deep = sample(&m, &s, &CftpConfig::seeded(seed).with_initial_depth(4096)).unwrap();
            assert_eq!(deep.rounds, 1);
            assert_eq!(doubling.graph, deep.graph, "seed {seed}");
        }
    }

    #[test]
    fn audit_mode_passes_for_valid_kernel() {
        let s = GraphSpace::undirected(6).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, 1.0), (KStar(2), -0.4), (Triangle, 0.6)]).unwrap();
        for seed in 0..20 {
            sample(&m, &s, &CftpConfig::seeded(seed).with_audit(true)).unwrap();
        }
    }

    #[test]
    fn return_diagnostic_mode() {
        let s = GraphSpace::undirected(7).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, 0.0)]).unwrap();
        let mut cfg = CftpConfig::seeded(1).with_initial_depth(1).with_max_depth(1);
        cfg.max_depth_behavior = MaxDepthBehavior::ReturnDiagnostic;
        let r = sample(&m, &s, &cfg).unwrap();
        assert!(!r.coalesced);
        assert_eq!(r.rounds, 1);
    }

    #[test]
    fn bad_configs() {
        let s = GraphSpace::undirected(4).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, 0.0)]).unwrap();
        assert!(sample(&m, &s, &CftpConfig::seeded(0).with_initial_depth(0)).is_err());
        assert!(sample(&m, &s, &CftpConfig::seeded(0).with_max_depth(3)).is_err());
    }

    #[test]
    fn sample_many_independent_of_workers() {
        let s = GraphSpace::undirected(6).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, -0.5), (KStar(2), 0.2)]).unwrap();
        let cfg = CftpConfig::seeded(5);
        let one: Vec<_> = sample_many(&m, &s, &cfg, 8, 1).into_iter().map(Result::unwrap).collect();
        let two: Vec<_> = sample_many(&m, &s, &cfg, 8, 2).into_iter().map(Result::unwrap).collect();
        assert_eq!(one, two);
        assert_eq!(one[3], sample(&m, &s, &cfg.for_replication(3)).unwrap());
    }

    #[test]
    fn derive_seed_spreads() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }
}
