//! Graph supports and graph states.
//!
//! A [`GraphSpace`] fixes the vertex count, directedness, loop policy and any
//! dyads restricted ex ante to be present or absent. An [`AdjacencyState`] is
//! one realization on that space, stored as a row bitset per vertex (plus a
//! column bitset for digraphs) together with incrementally tracked degrees.
//!
//! Vertices are 0-based in the API and 1-based in every text format.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A potential edge variable. Undirected dyads are stored with `i >= j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dyad {
    pub i: usize,
    pub j: usize,
}

impl Dyad {
    pub const fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    pub const fn is_loop(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for Dyad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    n: usize,
    directed: bool,
    loops: bool,
    forced_present: BTreeSet<Dyad>,
    forced_absent: BTreeSet<Dyad>,
    free: Vec<Dyad>,
    // n*n table, u32::MAX for non-free or invalid cells
    free_index: Vec<u32>,
}

/// The support of a graph model. Cheap to clone.
#[derive(Clone, Debug)]
pub struct GraphSpace(Arc<SpaceInner>);

impl PartialEq for GraphSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for GraphSpace {}

impl GraphSpace {
    /// Unrestricted space of order `n`.
    pub fn new(n: usize, directed: bool, loops: bool) -> Result<Self> {
        Self::with_restrictions(n, directed, loops, [], [])
    }

    pub fn undirected(n: usize) -> Result<Self> {
        Self::new(n, false, false)
    }

    pub fn directed(n: usize) -> Result<Self> {
        Self::new(n, true, false)
    }

    /// Space with dyads forced present or absent. Undirected dyads may be given
    /// in either orientation.
    pub fn with_restrictions(
        n: usize,
        directed: bool,
        loops: bool,
        forced_present: impl IntoIterator<Item = Dyad>,
        forced_absent: impl IntoIterator<Item = Dyad>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpace("vertex count must be positive".into()));
        }
        if n > u32::MAX as usize / n.max(1) {
            return Err(Error::InvalidSpace(format!("vertex count {n} is too large")));
        }
        let canon = |d: Dyad| -> Result<Dyad> { canonicalize(n, directed, loops, d) };
        let forced_present = forced_present
            .into_iter()
            .map(canon)
            .collect::<Result<BTreeSet<_>>>()?;
        let forced_absent = forced_absent
            .into_iter()
            .map(canon)
            .collect::<Result<BTreeSet<_>>>()?;
        if let Some(d) = forced_present.intersection(&forced_absent).next() {
            return Err(Error::InvalidSpace(format!(
                "dyad {d} is forced both present and absent"
            )));
        }
        let free: Vec<Dyad> = all_dyads(n, directed, loops)
            .filter(|d| !forced_present.contains(d) && !forced_absent.contains(d))
            .collect();
        if free.is_empty() {
            return Err(Error::InvalidSpace("space has no free dyads".into()));
        }
        let mut free_index = vec![u32::MAX; n * n];
        for (k, d) in free.iter().enumerate() {
            free_index[d.i * n + d.j] = k as u32;
            if !directed {
                free_index[d.j * n + d.i] = k as u32;
            }
        }
        Ok(Self(Arc::new(SpaceInner {
            n,
            directed,
            loops,
            forced_present,
            forced_absent,
            free,
            free_index,
        })))
    }

    /// Two-mode space: vertices `0..n_rows` form one mode and the remaining
    /// `n_cols` vertices the other. All within-mode dyads are forced absent, as
    /// are column-to-row arcs in the directed case.
    pub fn bipartite(n_rows: usize, n_cols: usize, directed: bool) -> Result<Self> {
        let n = n_rows + n_cols;
        let is_row = |v: usize| v < n_rows;
        let absent: Vec<Dyad> = all_dyads(n, directed, false)
            .filter(|d| {
                let same_mode = is_row(d.i) == is_row(d.j);
                let backwards = directed && !is_row(d.i) && is_row(d.j);
                same_mode || backwards
            })
            .collect();
        Self::with_restrictions(n, directed, false, [], absent)
    }

    /// Egocentric space: `ego` is adjacent to every other vertex (in both
    /// directions for digraphs).
    pub fn egocentric(n: usize, ego: usize, directed: bool) -> Result<Self> {
        if ego >= n {
            return Err(Error::InvalidSpace(format!("ego {} out of range", ego + 1)));
        }
        let present: Vec<Dyad> = all_dyads(n, directed, false)
            .filter(|d| d.i == ego || d.j == ego)
            .collect();
        Self::with_restrictions(n, directed, false, present, [])
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn is_directed(&self) -> bool {
        self.0.directed
    }

    pub fn has_loops(&self) -> bool {
        self.0.loops
    }

    pub fn forced_present(&self) -> &BTreeSet<Dyad> {
        &self.0.forced_present
    }

    pub fn forced_absent(&self) -> &BTreeSet<Dyad> {
        &self.0.forced_absent
    }

    /// Unrestricted dyads in canonical row-major order.
    pub fn free_dyads(&self) -> &[Dyad] {
        &self.0.free
    }

    /// Every dyad of the space, restricted or not, in canonical order.
    pub fn all_dyads(&self) -> impl Iterator<Item = Dyad> {
        all_dyads(self.0.n, self.0.directed, self.0.loops)
    }

    /// Total number of dyads, restricted or not.
    pub fn dyad_count(&self) -> usize {
        let n = self.0.n;
        let off = if self.0.directed { n * (n - 1) } else { n * (n - 1) / 2 };
        off + if self.0.loops { n } else { 0 }
    }

    /// Position of `d` in [`free_dyads`](Self::free_dyads).
    pub fn free_index(&self, d: Dyad) -> Option<usize> {
        let n = self.0.n;
        if d.i >= n || d.j >= n {
            return None;
        }
        match self.0.free_index[d.i * n + d.j] {
            u32::MAX => None,
            k => Some(k as usize),
        }
    }

    /// `Some(true)` if forced present, `Some(false)` if forced absent.
    pub fn restriction(&self, d: Dyad) -> Option<bool> {
        let d = self.canonical(d).ok()?;
        if self.0.forced_present.contains(&d) {
            Some(true)
        } else if self.0.forced_absent.contains(&d) {
            Some(false)
        } else {
            None
        }
    }

    /// Validates `d` and puts it in canonical orientation.
    pub fn canonical(&self, d: Dyad) -> Result<Dyad> {
        canonicalize(self.0.n, self.0.directed, self.0.loops, d)
    }

    /// The unique minimum and maximum of the space under the subgraph order:
    /// all free dyads absent, respectively present, with restricted dyads at
    /// their forced values.
    pub fn bounds(&self) -> (AdjacencyState, AdjacencyState) {
        let lower = AdjacencyState::lower_bound(self);
        let mut upper = lower.clone();
        for &d in self.free_dyads() {
            upper.set_raw(d, true);
        }
        (lower, upper)
    }

    pub fn empty_state(&self) -> AdjacencyState {
        AdjacencyState::lower_bound(self)
    }

    /// Header line of the edge-list format.
    pub fn edge_list_header(&self) -> String {
        format!(
            "# n={} directed={} loops={}",
            self.0.n,
            self.0.directed as u8,
            self.0.loops as u8
        )
    }
}

fn canonicalize(n: usize, directed: bool, loops: bool, d: Dyad) -> Result<Dyad> {
    if d.i >= n || d.j >= n {
        return Err(Error::InvalidDyad {
            dyad: d,
            reason: "vertex index out of range",
        });
    }
    if d.is_loop() && !loops {
        return Err(Error::InvalidDyad {
            dyad: d,
            reason: "loops are not allowed",
        });
    }
    if !directed && d.i < d.j {
        Ok(Dyad::new(d.j, d.i))
    } else {
        Ok(d)
    }
}

fn all_dyads(n: usize, directed: bool, loops: bool) -> impl Iterator<Item = Dyad> {
    (0..n).flat_map(move |i| {
        let hi = if directed { n } else { i + 1 };
        (0..hi)
            .filter(move |&j| j != i || loops)
            .map(move |j| Dyad::new(i, j))
    })
}

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn get_bit(words: &[u64], k: usize) -> bool {
    words[k >> 6] >> (k & 63) & 1 == 1
}

/// Popcount of `a & b` with vertices `skip_a` and `skip_b` excluded.
#[inline]
pub(crate) fn common_count(a: &[u64], b: &[u64], skip_a: usize, skip_b: usize) -> u32 {
    let mut c: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
    if get_bit(a, skip_a) && get_bit(b, skip_a) {
        c -= 1;
    }
    if skip_b != skip_a && get_bit(a, skip_b) && get_bit(b, skip_b) {
        c -= 1;
    }
    c
}

/// A single graph realization on a [`GraphSpace`].
#[derive(Clone, Debug)]
pub struct AdjacencyState {
    space: GraphSpace,
    words: usize,
    rows: Vec<u64>,
    // transposed rows; empty for undirected spaces
    cols: Vec<u64>,
    out_deg: Vec<u32>,
    // empty for undirected spaces
    in_deg: Vec<u32>,
    edges: usize,
}

impl PartialEq for AdjacencyState {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.rows == other.rows
    }
}

impl Eq for AdjacencyState {}

impl AdjacencyState {
    fn lower_bound(space: &GraphSpace) -> Self {
        let n = space.n();
        let words = words_for(n);
        let directed = space.is_directed();
        let mut state = Self {
            space: space.clone(),
            words,
            rows: vec![0; n * words],
            cols: if directed { vec![0; n * words] } else { Vec::new() },
            out_deg: vec![0; n],
            in_deg: if directed { vec![0; n] } else { Vec::new() },
            edges: 0,
        };
        for &d in space.forced_present() {
            state.set_raw(d, true);
        }
        state
    }

    /// Builds the state whose free dyads are set according to the bits of
    /// `mask` (bit k for free dyad k).
    pub fn from_free_mask(space: &GraphSpace, mask: u64) -> Result<Self> {
        let m = space.free_dyads().len();
        if m < 64 && mask >> m != 0 {
            return Err(Error::InvalidModel(format!(
                "mask {mask:#x} has bits beyond the {m} free dyads"
            )));
        }
        let mut state = space.empty_state();
        for (k, &d) in space.free_dyads().iter().enumerate().take(64) {
            if mask >> k & 1 == 1 {
                state.set_raw(d, true);
            }
        }
        Ok(state)
    }

    /// Bit encoding of the free dyads, or `None` with more than 64 of them.
    pub fn free_mask(&self) -> Option<u64> {
        let free = self.space.free_dyads();
        if free.len() > 64 {
            return None;
        }
        Some(
            free.iter()
                .enumerate()
                .filter(|(_, &d)| self.has_dyad(d))
                .fold(0u64, |m, (k, _)| m | 1 << k),
        )
    }

    pub fn space(&self) -> &GraphSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn is_directed(&self) -> bool {
        self.space.is_directed()
    }

    /// `y_ij`.
    #[inline]
    pub fn has(&self, i: usize, j: usize) -> bool {
        get_bit(self.row(i), j)
    }

    #[inline]
    pub fn has_dyad(&self, d: Dyad) -> bool {
        self.has(d.i, d.j)
    }

    /// Out-neighbourhood of `i` as a bitset (the full neighbourhood when undirected).
    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    /// In-neighbourhood of `j` as a bitset.
    #[inline]
    pub fn col(&self, j: usize) -> &[u64] {
        if self.cols.is_empty() {
            self.row(j)
        } else {
            &self.cols[j * self.words..(j + 1) * self.words]
        }
    }

    /// Degree of `i` (out-degree for digraphs). A loop counts once.
    #[inline]
    pub fn degree(&self, i: usize) -> u32 {
        self.out_deg[i]
    }

    #[inline]
    pub fn out_degree(&self, i: usize) -> u32 {
        self.out_deg[i]
    }

    #[inline]
    pub fn in_degree(&self, j: usize) -> u32 {
        if self.in_deg.is_empty() {
            self.out_deg[j]
        } else {
            self.in_deg[j]
        }
    }

    /// Number of present dyads.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// Present dyads in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Dyad> + '_ {
        self.space.all_dyads().filter(move |&d| self.has_dyad(d))
    }

    /// Present dyads over all dyads of the space.
    pub fn density(&self) -> f64 {
        self.edges as f64 / self.space.dyad_count() as f64
    }

    /// Sets a dyad without consulting restrictions; returns whether it changed.
    /// `d` must already be canonical and valid.
    #[inline]
    pub(crate) fn set_raw(&mut self, d: Dyad, present: bool) -> bool {
        if self.has_dyad(d) == present {
            return false;
        }
        let (i, j, w) = (d.i, d.j, self.words);
        let flip = |words: &mut [u64], row: usize, col: usize| {
            words[row * w + (col >> 6)] ^= 1 << (col & 63);
        };
        let step = |deg: &mut u32| {
            if present {
                *deg += 1
            } else {
                *deg -= 1
            }
        };
        flip(&mut self.rows, i, j);
        step(&mut self.out_deg[i]);
        if self.cols.is_empty() {
            if i != j {
                flip(&mut self.rows, j, i);
                step(&mut self.out_deg[j]);
            }
        } else {
            flip(&mut self.cols, j, i);
            step(&mut self.in_deg[j]);
        }
        if present {
            self.edges += 1;
        } else {
            self.edges -= 1;
        }
        true
    }

    /// Returns `y⁺` or `y⁻` for the dyad.
    pub fn with_edge(&self, d: Dyad, present: bool) -> Result<Self> {
        let d = self.space.canonical(d)?;
        if let Some(forced) = self.space.restriction(d) {
            if forced != present {
                return Err(Error::RestrictionViolation {
                    dyad: d,
                    forced_present: forced,
                });
            }
        }
        let mut next = self.clone();
        next.set_raw(d, present);
        Ok(next)
    }

    fn check_same_space(&self, other: &Self) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// `self ⊆ other`.
    pub fn is_subgraph(&self, other: &Self) -> Result<bool> {
        self.check_same_space(other)?;
        Ok(self.is_subgraph_unchecked(other))
    }

    #[inline]
    pub(crate) fn is_subgraph_unchecked(&self, other: &Self) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    /// Number of dyads on which the two states differ.
    pub fn differing_dyads(&self, other: &Self) -> Result<usize> {
        self.check_same_space(other)?;
        let total: usize = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum();
        if self.is_directed() {
            return Ok(total);
        }
        let diag = (0..self.n())
            .filter(|&i| self.has(i, i) != other.has(i, i))
            .count();
        Ok((total - diag) / 2 + diag)
    }

    /// Recomputes degrees and edge count from the bitsets and compares them
    /// with the tracked values.
    pub fn caches_consistent(&self) -> bool {
        let n = self.n();
        let directed = self.is_directed();
        let out_ok = (0..n).all(|i| {
            self.row(i).iter().map(|w| w.count_ones()).sum::<u32>() == self.out_deg[i]
        });
        let in_ok = !directed
            || (0..n).all(|j| {
                self.col(j).iter().map(|w| w.count_ones()).sum::<u32>() == self.in_deg[j]
            });
        let cols_ok = !directed
            || (0..n).all(|i| (0..n).all(|j| self.has(i, j) == get_bit(self.col(j), i)));
        out_ok && in_ok && cols_ok && self.edges().count() == self.edges
    }

    /// Edge-list text: header line followed by one `i j` line per present
    /// dyad, 1-based.
    pub fn to_edge_list(&self) -> String {
        let mut out = self.space.edge_list_header();
        out.push('\n');
        for d in self.edges() {
            out.push_str(&format!("{} {}\n", d.i + 1, d.j + 1));
        }
        out
    }

    /// Parses edge-list text holding one or more graphs, each introduced by a
    /// header line, onto `space`. Headers must agree with the space.
    pub fn read_edge_lists(space: &GraphSpace, text: &str) -> Result<Vec<Self>> {
        let header = space.edge_list_header();
        let mut graphs: Vec<Self> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            if line.is_empty() {
                continue;
            }
            if line.starts_with('#') {
                if line != header {
                    return Err(err(format!("header `{line}` does not match `{header}`")));
                }
                graphs.push(space.empty_state());
                continue;
            }
            let current = graphs
                .last_mut()
                .ok_or_else(|| err("edge before header".into()))?;
            let mut it = line.split_whitespace().map(|t| {
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1)
                    .ok_or_else(|| err(format!("bad vertex `{t}`")))
            });
            let (i, j) = match (it.next(), it.next(), it.next()) {
                (Some(i), Some(j), None) => (i?, j?),
                _ => return Err(err("expected `i j`".into())),
            };
            let d = space
                .canonical(Dyad::new(i - 1, j - 1))
                .map_err(|e| err(e.to_string()))?;
            if space.restriction(d) == Some(false) {
                return Err(err(format!("dyad {d} is forced absent")));
            }
            current.set_raw(d, true);
        }
        for (k, g) in graphs.iter().enumerate() {
            if let Some(&d) = space.forced_present().iter().find(|&&d| !g.has_dyad(d)) {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("graph {} lacks forced dyad {d}", k + 1),
                });
            }
        }
        Ok(graphs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(i: usize, j: usize) -> Dyad {
        Dyad::new(i - 1, j - 1)
    }

    #[test]
    fn free_dyads_undirected_order() {
        let s = GraphSpace::undirected(3).unwrap();
        assert_eq!(s.free_dyads(), &[d(2, 1), d(3, 1), d(3, 2)]);
    }

    #[test]
    fn free_dyads_directed_no_loops() {
        let s = GraphSpace::directed(3).unwrap();
        assert_eq!(s.free_dyads().len(), 6);
        assert!(s.free_dyads().iter().all(|d| !d.is_loop()));
    }

    #[test]
    fn free_dyads_bipartite() {
        let s = GraphSpace::bipartite(2, 2, false).unwrap();
        assert_eq!(s.free_dyads(), &[d(3, 1), d(3, 2), d(4, 1), d(4, 2)]);
    }

    #[test]
    fn loops_enumerated_when_allowed() {
        let s = GraphSpace::new(3, false, true).unwrap();
        assert_eq!(s.free_dyads().len(), 6);
        assert_eq!(s.dyad_count(), 6);
        let s = GraphSpace::new(3, true, true).unwrap();
        assert_eq!(s.free_dyads().len(), 9);
    }

    #[test]
    fn invalid_spaces() {
        assert!(GraphSpace::undirected(0).is_err());
        assert!(GraphSpace::undirected(1).is_err());
        assert!(GraphSpace::with_restrictions(3, false, false, [d(2, 1)], [d(1, 2)]).is_err());
        assert!(GraphSpace::with_restrictions(3, false, false, [d(1, 1)], []).is_err());
        assert!(GraphSpace::with_restrictions(3, false, false, [d(4, 1)], []).is_err());
    }

    #[test]
    fn with_edge_examples() {
        let s = GraphSpace::undirected(3).unwrap();
        let (empty, complete) = s.bounds();
        let one = empty.with_edge(d(2, 1), true).unwrap();
        assert_eq!(one.edge_count(), 1);
        assert!(one.has(0, 1) && one.has(1, 0));
        assert_eq!(complete.with_edge(d(2, 1), true).unwrap(), complete);
        let minus = complete.with_edge(d(1, 2), false).unwrap();
        assert_eq!(minus.edge_count(), 2);
        assert!(!minus.has(1, 0));
    }

    #[test]
    fn with_edge_respects_restrictions() {
        let s = GraphSpace::egocentric(4, 0, false).unwrap();
        let (lo, _) = s.bounds();
        match lo.with_edge(d(2, 1), false) {
            Err(Error::RestrictionViolation { forced_present, .. }) => assert!(forced_present),
            other => panic!("unexpected {other:?}"),
        }
        assert!(lo.with_edge(d(2, 1), true).is_ok());
    }

    #[test]
    fn subgraph_examples() {
        let s = GraphSpace::undirected(3).unwrap();
        let (n3, k3) = s.bounds();
        assert!(n3.is_subgraph(&k3).unwrap());
        assert!(!k3.is_subgraph(&n3).unwrap());
        let path = n3
            .with_edge(d(2, 1), true)
            .unwrap()
            .with_edge(d(3, 2), true)
            .unwrap();
        let cycle = path.with_edge(d(3, 1), true).unwrap();
        assert!(path.is_subgraph(&cycle).unwrap());
        let other = GraphSpace::undirected(3).unwrap().empty_state();
        // structurally equal spaces compare equal
        assert!(other.is_subgraph(&k3).unwrap());
        let s4 = GraphSpace::undirected(4).unwrap().empty_state();
        assert!(matches!(s4.is_subgraph(&k3), Err(Error::SpaceMismatch)));
    }

    #[test]
    fn bounds_examples() {
        let s = GraphSpace::undirected(7).unwrap();
        let (lo, hi) = s.bounds();
        assert_eq!(lo.edge_count(), 0);
        assert_eq!(hi.edge_count(), 21);

        let ego = GraphSpace::egocentric(5, 0, false).unwrap();
        let (lo, _) = ego.bounds();
        assert_eq!(lo.edge_count(), 4);
        assert!((1..5).all(|k| lo.has(0, k)));

        let n = 5;
        let absent: Vec<Dyad> = (0..n - 1).map(|k| Dyad::new(n - 1, k)).collect();
        let s = GraphSpace::with_restrictions(n, false, false, [], absent).unwrap();
        let (lo, hi) = s.bounds();
        assert_eq!(lo.degree(n - 1), 0);
        assert_eq!(hi.degree(n - 1), 0);
        assert_eq!(hi.edge_count(), 6);
    }

    #[test]
    fn differing_examples() {
        let s = GraphSpace::undirected(3).unwrap();
        let (n3, k3) = s.bounds();
        assert_eq!(n3.differing_dyads(&k3).unwrap(), 3);
        assert_eq!(k3.differing_dyads(&k3).unwrap(), 0);
        let s4 = GraphSpace::undirected(4).unwrap();
        let e = s4.empty_state();
        let one = e.with_edge(d(2, 1), true).unwrap();
        assert_eq!(one.differing_dyads(&e).unwrap(), 1);

        let sl = GraphSpace::new(3, false, true).unwrap();
        let (lo, hi) = sl.bounds();
        assert_eq!(lo.differing_dyads(&hi).unwrap(), 6);
    }

    #[test]
    fn directed_caches() {
        let s = GraphSpace::new(70, true, true).unwrap();
        let mut y = s.empty_state();
        for k in 0..70 {
            y.set_raw(Dyad::new(k, (k * 7 + 3) % 70), true);
            y.set_raw(Dyad::new((k * 5) % 70, k), true);
        }
        y.set_raw(Dyad::new(3, 24), false);
        assert!(y.caches_consistent());
        assert_eq!(y.edges().count(), y.edge_count());
    }

    #[test]
    fn edge_list_round_trip() {
        let s = GraphSpace::undirected(4).unwrap();
        let y = s
            .empty_state()
            .with_edge(d(2, 1), true)
            .unwrap()
            .with_edge(d(4, 3), true)
            .unwrap();
        let text = y.to_edge_list();
        assert_eq!(text, "# n=4 directed=0 loops=0\n2 1\n4 3\n");
        let back = AdjacencyState::read_edge_lists(&s, &(text.clone() + &text)).unwrap();
        assert_eq!(back, vec![y.clone(), y]);
        assert!(AdjacencyState::read_edge_lists(&s, "1 2\n").is_err());
        assert!(AdjacencyState::read_edge_lists(&s, "# n=5 directed=0 loops=0\n").is_err());
    }

    #[test]
    fn free_mask_round_trip() {
        let s = GraphSpace::egocentric(5, 2, false).unwrap();
        for mask in [0u64, 1, 0b101, (1 << s.free_dyads().len()) - 1] {
            let y = AdjacencyState::from_free_mask(&s, mask).unwrap();
            assert_eq!(y.free_mask(), Some(mask));
        }
        assert!(AdjacencyState::from_free_mask(&s, 1 << 20).is_err());
    }
}
