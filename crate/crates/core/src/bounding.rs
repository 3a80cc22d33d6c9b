//! Lower/upper bounding chains for the single-dyad Gibbs sampler.
//!
//! For a pair `(L, U)` with `L ⊆ U`, the change score bounds pick, component
//! by component, whichever extreme of `Δ_d` over `{y : L ⊆ y ⊆ U}` makes the
//! update least (for `L`) or most (for `U`) likely to add the dyad. Both
//! chains then consume the same coin `u`, so every chain started between them
//! stays between them.

use crate::cftp::CoupledKernel;
use crate::error::{Error, Result};
use crate::graph::{AdjacencyState, Dyad, GraphSpace};
use crate::statistics::ModelSpec;

#[inline]
pub fn inverse_logit(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

pub fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

/// The coupled lower and upper states.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundPair {
    lower: AdjacencyState,
    upper: AdjacencyState,
    diff: usize,
}

impl BoundPair {
    pub fn new(lower: AdjacencyState, upper: AdjacencyState) -> Result<Self> {
        if !lower.is_subgraph(&upper)? {
            return Err(Error::InvalidModel("lower state is not a subgraph of upper".into()));
        }
        let diff = lower.differing_dyads(&upper)?;
        Ok(Self { lower, upper, diff })
    }

    /// Starts from the extreme states of the space.
    pub fn from_space(space: &GraphSpace) -> Self {
        let (lower, upper) = space.bounds();
        let diff = space.free_dyads().len();
        Self { lower, upper, diff }
    }

    pub fn lower(&self) -> &AdjacencyState {
        &self.lower
    }

    pub fn upper(&self) -> &AdjacencyState {
        &self.upper
    }

    pub fn into_states(self) -> (AdjacencyState, AdjacencyState) {
        (self.lower, self.upper)
    }

    /// Number of dyads where the chains differ.
    #[inline]
    pub fn diff_count(&self) -> usize {
        self.diff
    }

    #[inline]
    pub fn is_coalesced(&self) -> bool {
        self.diff == 0
    }

    /// One coupled step: both chains set `d` by comparing the shared coin `u`
    /// with their own bound probability. `d` must be a free dyad.
    #[inline]
    pub fn update<K: CoupledKernel + ?Sized>(&mut self, kernel: &K, d: Dyad, u: f64) {
        let (p_lo, p_hi) = kernel.bound_probs(&self.lower, &self.upper, d);
        self.apply(d, kernel.accepts(u, p_lo), kernel.accepts(u, p_hi));
    }

    #[inline]
    pub(crate) fn apply(&mut self, d: Dyad, lower_present: bool, upper_present: bool) {
        let before = self.lower.has_dyad(d) != self.upper.has_dyad(d);
        self.lower.set_raw(d, lower_present);
        self.upper.set_raw(d, upper_present);
        let after = lower_present != upper_present;
        match (before, after) {
            (true, false) => self.diff -= 1,
            (false, true) => self.diff += 1,
            _ => {}
        }
    }
}

/// Change score bound vectors `(Δᴸ, Δᵁ)` for dyad `d`.
pub fn delta_bounds(model: &ModelSpec, pair: &BoundPair, d: Dyad) -> Result<(Vec<f64>, Vec<f64>)> {
    model.check_boundable()?;
    let (mut lo, mut hi) = (Vec::with_capacity(model.len()), Vec::with_capacity(model.len()));
    for (stat, &theta) in model.stats().iter().zip(model.theta()) {
        let (min, max) = stat
            .change_bounds(&pair.lower, &pair.upper, d)
            .ok_or_else(|| Error::UnsupportedModel(format!("no bounds for `{}`", stat.name())))?;
        if theta > 0.0 {
            lo.push(min);
            hi.push(max);
        } else {
            lo.push(max);
            hi.push(min);
        }
    }
    Ok((lo, hi))
}

/// `(pᴸ, pᵁ)`, the inverse-logits of `θᵀΔᴸ` and `θᵀΔᵁ`.
pub fn prob_bounds(model: &ModelSpec, pair: &BoundPair, d: Dyad) -> Result<(f64, f64)> {
    model.check_boundable()?;
    Ok(model.bound_probs(&pair.lower, &pair.upper, d))
}

/// `(θᵀΔᴸ, θᵀΔᵁ)` without allocating. Assumes the model is boundable.
#[inline]
pub fn bound_log_odds(
    model: &ModelSpec,
    lower: &AdjacencyState,
    upper: &AdjacencyState,
    d: Dyad,
) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for (stat, &theta) in model.stats().iter().zip(model.theta()) {
        let (min, max) = stat
            .change_bounds(lower, upper, d)
            .expect("model checked boundable");
        // θ·min ≤ θ·max when θ > 0, reversed otherwise
        let (a, b) = if theta > 0.0 {
            (theta * min, theta * max)
        } else {
            (theta * max, theta * min)
        };
        lo += a;
        hi += b;
    }
    (lo, hi)
}

impl CoupledKernel for ModelSpec {
    fn check_space(&self, space: &GraphSpace) -> Result<()> {
        ModelSpec::check_space(self, space)?;
        self.check_boundable()
    }

    #[inline]
    fn edge_prob(&self, y: &AdjacencyState, d: Dyad) -> f64 {
        inverse_logit(self.log_odds(y, d))
    }

    #[inline]
    fn bound_probs(&self, lower: &AdjacencyState, upper: &AdjacencyState, d: Dyad) -> (f64, f64) {
        let (lo, hi) = bound_log_odds(self, lower, upper, d);
        (inverse_logit(lo), inverse_logit(hi))
    }
}

/// Applies one coupled update to `pair` using the ERG model.
pub fn update_pair(model: &ModelSpec, pair: &mut BoundPair, d: Dyad, u: f64) -> Result<()> {
    model.check_boundable()?;
    let d = pair.lower.space().canonical(d)?;
    pair.update(model, d, u);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statistics::StatisticKind::*;

    fn d(i: usize, j: usize) -> Dyad {
        Dyad::new(i - 1, j - 1)
    }

    #[test]
    fn coalesced_pair_bounds_equal_change_scores() {
        let s = GraphSpace::undirected(5).unwrap();
        let y = s
            .empty_state()
            .with_edge(d(3, 1), true)
            .unwrap()
            .with_edge(d(3, 2), true)
            .unwrap();
        let pair = BoundPair::new(y.clone(), y.clone()).unwrap();
        for theta in [0.7, -0.7] {
            let m = ModelSpec::from_kinds(&[(EdgeCount, -theta), (Triangle, theta), (KStar(2), theta)])
                .unwrap();
            let (lo, hi) = delta_bounds(&m, &pair, d(2, 1)).unwrap();
            assert_eq!(lo, m.change_vector(&y, d(2, 1)));
            assert_eq!(hi, lo);
            let (pl, pu) = prob_bounds(&m, &pair, d(2, 1)).unwrap();
            assert_eq!(pl, pu);
            assert!((pl - m.edge_prob(&y, d(2, 1))).abs() < 1e-15);
        }
    }

    #[test]
    fn full_pair_bounds_follow_sign() {
        let s = GraphSpace::undirected(5).unwrap();
        let pair = BoundPair::from_space(&s);
        let m = ModelSpec::from_kinds(&[(EdgeCount, 0.5), (Triangle, 0.3)]).unwrap();
        let (lo, hi) = delta_bounds(&m, &pair, d(2, 1)).unwrap();
        assert_eq!((lo, hi), (vec![1.0, 0.0], vec![1.0, 3.0]));
        let m = ModelSpec::from_kinds(&[(EdgeCount, 0.5), (Triangle, -0.3)]).unwrap();
        let (lo, hi) = delta_bounds(&m, &pair, d(2, 1)).unwrap();
        assert_eq!((lo, hi), (vec![1.0, 3.0], vec![1.0, 0.0]));
    }

    #[test]
    fn prob_bound_examples() {
        let s = GraphSpace::undirected(4).unwrap();
        let pair = BoundPair::from_space(&s);
        let zero = ModelSpec::from_kinds(&[(EdgeCount, 0.0), (Triangle, 0.0)]).unwrap();
        assert_eq!(prob_bounds(&zero, &pair, d(2, 1)).unwrap(), (0.5, 0.5));
        let edges = ModelSpec::from_kinds(&[(EdgeCount, logit(0.3))]).unwrap();
        let (pl, pu) = prob_bounds(&edges, &pair, d(4, 3)).unwrap();
        assert!((pl - 0.3).abs() < 1e-12 && (pu - 0.3).abs() < 1e-12);
    }

    #[test]
    fn update_pair_examples() {
        let s = GraphSpace::undirected(4).unwrap();
        let m = ModelSpec::from_kinds(&[(EdgeCount, -0.2), (Triangle, 1.0)]).unwrap();

        let mut pair = BoundPair::from_space(&s);
        update_pair(&m, &mut pair, d(2, 1), 0.0).unwrap();
        assert!(pair.lower().has(1, 0) && pair.upper().has(1, 0));
        assert_eq!(pair.diff_count(), 5);

        let mut pair = BoundPair::from_space(&s);
        update_pair(&m, &mut pair, d(2, 1), 1.0).unwrap();
        assert!(!pair.lower().has(1, 0) && !pair.upper().has(1, 0));

        // pL = logit⁻¹(-0.2) ≈ 0.450, pU = logit⁻¹(-0.2 + 2) ≈ 0.858
        let mut pair = BoundPair::from_space(&s);
        update_pair(&m, &mut pair, d(2, 1), 0.7).unwrap();
        assert!(!pair.lower().has(1, 0) && pair.upper().has(1, 0));
        assert_eq!(pair.diff_count(), 6);
        assert_eq!(
            pair.diff_count(),
            pair.lower().differing_dyads(pair.upper()).unwrap()
        );
    }

    #[test]
    fn rejects_unordered_pair() {
        let s = GraphSpace::undirected(3).unwrap();
        let (lo, hi) = s.bounds();
        assert!(BoundPair::new(hi, lo).is_err());
    }
}
