//! Probability annotations over a state diagram.
//!
//! * upstream `up(v)`: summed probability of all paths from `v` down to the
//!   terminal, not counting the weight of the edge into `v`.
//! * downstream `down(v)`: summed probability of all root-to-`v` paths,
//!   including the weights on those paths.
//! * contribution `down(v)·up(v)`: probability mass flowing through `v`.
//!   Nodes of one level partition the basis states, so on a unit-norm state
//!   the contributions of every level sum to one.
//!
//! `up` is only a probability when the node weights are L2-normalized. Under
//! the max-magnitude normalization used here it ranges over `[0, 2^k]` for a
//! node with `k` levels below it; the branch probabilities and contributions
//! are unaffected.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::dd::{NodeId, Package, StateDd};
use crate::error::{Error, Result};

pub type UpstreamMap = HashMap<NodeId, f64>;
pub type DownstreamMap = HashMap<NodeId, f64>;
pub type ContributionMap = HashMap<NodeId, f64>;

/// Memoized depth-first upstream probabilities. The terminal maps to 1.
pub fn upstream(pkg: &Package, dd: &StateDd) -> UpstreamMap {
    pkg.subtree_norms(dd.root)
}

/// Reachable nodes grouped by level, each level in depth-first discovery
/// order.
pub fn nodes_by_level(pkg: &Package, dd: &StateDd) -> BTreeMap<u32, Vec<NodeId>> {
    let mut levels: BTreeMap<u32, Vec<NodeId>> = BTreeMap::new();
    for id in pkg.reachable(dd.root) {
        levels.entry(pkg.node(id).level).or_default().push(id);
    }
    levels
}

/// Level-order downstream probabilities.
pub fn downstream(pkg: &Package, dd: &StateDd) -> DownstreamMap {
    let mut down = DownstreamMap::new();
    if dd.root.is_zero() || dd.root.is_terminal() {
        return down;
    }
    down.insert(dd.root.target, dd.root.weight.sqr_mag());
    for ids in nodes_by_level(pkg, dd).values() {
        for &id in ids {
            let d = down[&id];
            for s in pkg.node(id).succ {
                if !s.is_zero() && !s.is_terminal() {
                    *down.entry(s.target).or_insert(0.0) += d * s.weight.sqr_mag();
                }
            }
        }
    }
    down
}

pub fn contributions(pkg: &Package, dd: &StateDd) -> ContributionMap {
    let up = upstream(pkg, dd);
    downstream(pkg, dd)
        .into_iter()
        .map(|(id, d)| (id, d * up[&id]))
        .collect()
}

/// Sum of contributions per level.
pub fn level_sums(pkg: &Package, dd: &StateDd, contrib: &ContributionMap) -> BTreeMap<u32, f64> {
    nodes_by_level(pkg, dd)
        .into_iter()
        .map(|(level, ids)| (level, ids.iter().map(|id| contrib[id]).sum()))
        .collect()
}

/// How often each node was passed by a set of root-to-terminal walks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VisitCounts {
    pub walks: u64,
    pub seed: Option<u64>,
    counts: HashMap<NodeId, u64>,
}

impl VisitCounts {
    pub fn get(&self, id: NodeId) -> u64 {
        self.counts.get(&id).copied().unwrap_or(0)
    }

    /// Nodes with at least one visit.
    pub fn visited(&self) -> impl Iterator<Item = (NodeId, u64)> + '_ {
        self.counts.iter().map(|(&id, &c)| (id, c))
    }

    fn record(&mut self, path: &[NodeId]) {
        self.walks += 1;
        for &id in path {
            *self.counts.entry(id).or_insert(0) += 1;
        }
    }
}

/// Draws walks through one diagram. The upstream map is computed once up
/// front and shared by every walk.
pub struct PathSampler<'a> {
    pkg: &'a Package,
    dd: StateDd,
    up: UpstreamMap,
}

impl<'a> PathSampler<'a> {
    pub fn new(pkg: &'a Package, dd: &StateDd) -> Result<Self> {
        if dd.root.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(Self { pkg, dd: *dd, up: upstream(pkg, dd) })
    }

    /// Probability of taking the 1-successor at `id`.
    pub fn one_probability(&self, id: NodeId) -> f64 {
        let node = self.pkg.node(id);
        let [p0, p1] = node.succ.map(|s| {
            if s.is_zero() { 0.0 } else { s.weight.sqr_mag() * self.up[&s.target] }
        });
        p1 / (p0 + p1)
    }

    /// One root-to-terminal walk. Appends the visited nodes to `path` and
    /// returns the basis index (`q_0` most significant).
    pub fn walk<R: Rng>(&self, rng: &mut R, path: &mut Vec<NodeId>) -> u128 {
        let mut e = self.dd.root;
        let mut index = 0u128;
        while !e.is_terminal() {
            path.push(e.target);
            let node = self.pkg.node(e.target);
            let bit = if node.succ[1].is_zero() {
                0
            } else if node.succ[0].is_zero() {
                1
            } else {
                let u: f64 = rng.gen();
                usize::from(u < self.one_probability(e.target))
            };
            index = (index << 1) | bit as u128;
            e = node.succ[bit];
        }
        index
    }
}

/// `walks` independent walks; SplitMix64 seeded with `seed`, one uniform
/// `f64` per node that has two nonzero successors.
pub fn sample_paths(pkg: &Package, dd: &StateDd, walks: u64, seed: u64) -> Result<VisitCounts> {
    if walks == 0 {
        return Err(Error::InvalidParameter("number of traversals must be at least 1".into()));
    }
    let sampler = PathSampler::new(pkg, dd)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut counts = VisitCounts { seed: Some(seed), ..Default::default() };
    let mut path = Vec::with_capacity(dd.qubits);
    for _ in 0..walks {
        path.clear();
        sampler.walk(&mut rng, &mut path);
        counts.record(&path);
    }
    Ok(counts)
}

/// Histogram of sampled basis indices, using the same stream as
/// [`sample_paths`].
pub fn sample_outcomes(pkg: &Package, dd: &StateDd, walks: u64, seed: u64) -> Result<BTreeMap<u128, u64>> {
    let sampler = PathSampler::new(pkg, dd)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut hist = BTreeMap::new();
    let mut path = Vec::new();
    for _ in 0..walks {
        path.clear();
        *hist.entry(sampler.walk(&mut rng, &mut path)).or_insert(0) += 1;
    }
    Ok(hist)
}

/// Visit counts for a given list of basis bitstrings (`q_0` first).
/// Bitstrings whose path hits a zero-stub are rejected.
pub fn counts_from_paths(pkg: &Package, dd: &StateDd, paths: &[&str]) -> Result<VisitCounts> {
    let mut counts = VisitCounts::default();
    for &bits in paths {
        if bits.len() != dd.qubits || !bits.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::BadBasis(bits.to_string(), dd.qubits));
        }
        let mut path = Vec::with_capacity(dd.qubits);
        let mut e = dd.root;
        for b in bits.bytes() {
            if e.is_zero() {
                break;
            }
            path.push(e.target);
            e = pkg.node(e.target).succ[usize::from(b == b'1')];
        }
        if e.is_zero() {
            return Err(Error::InvalidParameter(format!("basis state {bits} has zero amplitude")));
        }
        counts.record(&path);
    }
    Ok(counts)
}
