//! Approximation schemes.
//!
//! Each scheme picks a set of nodes to eliminate, redirects every edge into
//! them to the zero-stub, rebuilds the diagram bottom-up through the unique
//! table and rescales the result to unit norm. The original diagram is left
//! untouched.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::analysis::{self, ContributionMap, VisitCounts};
use crate::dd::{Edge, NodeId, Package, StateDd};
use crate::error::{Error, Result};
use crate::fidelity;

/// Slack subtracted from the `1 - f` budget so that rounding in the
/// contribution sums cannot push the attained fidelity below `f`.
pub const BUDGET_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LevelStrategy {
    /// Try every level and keep the one giving the smallest diagram; ties go
    /// to the smallest level.
    #[default]
    Best,
    Fixed(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scheme {
    Sampling { traversals: u64, seed: u64 },
    Threshold { traversals: u64, tau: u64, seed: u64 },
    TargetFidelity { fidelity: f64, level: LevelStrategy },
    FidelityPerLevel { fidelity: f64 },
}

impl Scheme {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            Scheme::Sampling { traversals: 0, .. } => bad("traversals must be at least 1".into()),
            Scheme::Threshold { traversals: 0, .. } => bad("traversals must be at least 1".into()),
            Scheme::Threshold { traversals, tau, .. } if tau >= traversals => {
                bad(format!("threshold {tau} must be below the traversal count {traversals}"))
            }
            Scheme::TargetFidelity { fidelity: f, .. } | Scheme::FidelityPerLevel { fidelity: f }
                if !(f > 0.0 && f <= 1.0) =>
            {
                bad(format!("target fidelity {f} must lie in (0, 1]"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Sampling { .. } => "sampling",
            Scheme::Threshold { .. } => "threshold",
            Scheme::TargetFidelity { .. } => "target-fidelity",
            Scheme::FidelityPerLevel { .. } => "per-level",
        }
    }

    /// The scheme's primary parameter: L, τ or f.
    pub fn param(&self) -> f64 {
        match *self {
            Scheme::Sampling { traversals, .. } => traversals as f64,
            Scheme::Threshold { tau, .. } => tau as f64,
            Scheme::TargetFidelity { fidelity, .. } | Scheme::FidelityPerLevel { fidelity } => fidelity,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Scheme::Sampling { traversals, seed } => write!(f, "sampling(L={traversals}, seed={seed})"),
            Scheme::Threshold { traversals, tau, seed } => {
                write!(f, "threshold(L={traversals}, tau={tau}, seed={seed})")
            }
            Scheme::TargetFidelity { fidelity, level: LevelStrategy::Best } => {
                write!(f, "target-fidelity(f={fidelity}, level=best)")
            }
            Scheme::TargetFidelity { fidelity, level: LevelStrategy::Fixed(l) } => {
                write!(f, "target-fidelity(f={fidelity}, level={l})")
            }
            Scheme::FidelityPerLevel { fidelity } => write!(f, "per-level(f={fidelity})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub scheme: Scheme,
    pub orig_size: usize,
    pub approx_size: usize,
    /// `approx_size / orig_size`
    pub compression: f64,
    pub attained_fidelity: f64,
    /// Nodes selected for elimination.
    pub eliminated: usize,
    /// Level chosen by the single-level target-fidelity scheme.
    pub level: Option<u32>,
}

/// Replaces every edge into a doomed node by the zero-stub, re-reduces and
/// renormalizes.
pub fn eliminate(pkg: &mut Package, dd: &StateDd, doomed: &HashSet<NodeId>) -> Result<StateDd> {
    fn rebuild(pkg: &mut Package, e: Edge, doomed: &HashSet<NodeId>, memo: &mut HashMap<NodeId, Edge>) -> Edge {
        if e.is_zero() || e.is_terminal() {
            return e;
        }
        if doomed.contains(&e.target) {
            return Edge::ZERO;
        }
        let unit = match memo.get(&e.target) {
            Some(&r) => r,
            None => {
                let node = *pkg.node(e.target);
                let s0 = rebuild(pkg, node.succ[0], doomed, memo);
                let s1 = rebuild(pkg, node.succ[1], doomed, memo);
                let r = pkg.make_node(node.level, s0, s1);
                memo.insert(e.target, r);
                r
            }
        };
        pkg.scale(unit, e.weight)
    }

    if doomed.is_empty() {
        return Ok(*dd);
    }
    let root = rebuild(pkg, dd.root, doomed, &mut HashMap::new());
    if root.is_zero() {
        return Err(Error::ZeroState);
    }
    pkg.renormalize(&StateDd { qubits: dd.qubits, root })
}

fn finish(
    pkg: &mut Package,
    dd: &StateDd,
    scheme: Scheme,
    doomed: &HashSet<NodeId>,
    level: Option<u32>,
) -> Result<(StateDd, ApproxReport)> {
    let out = eliminate(pkg, dd, doomed)?;
    let orig_size = pkg.size(dd);
    let approx_size = pkg.size(&out);
    let report = ApproxReport {
        scheme,
        orig_size,
        approx_size,
        compression: if orig_size == 0 { 1.0 } else { approx_size as f64 / orig_size as f64 },
        attained_fidelity: fidelity::fidelity(pkg, dd, &out)?,
        eliminated: doomed.len(),
        level,
    };
    Ok((out, report))
}

/// Reachable nodes visited at most `tau` times.
pub fn threshold_doomed(pkg: &Package, dd: &StateDd, counts: &VisitCounts, tau: u64) -> HashSet<NodeId> {
    pkg.reachable(dd.root)
        .into_iter()
        .filter(|&id| counts.get(id) <= tau)
        .collect()
}

/// Eliminates every node that `L` sampled walks never visit.
pub fn approx_sampling(pkg: &mut Package, dd: &StateDd, traversals: u64, seed: u64) -> Result<(StateDd, ApproxReport)> {
    let scheme = Scheme::Sampling { traversals, seed };
    scheme.validate()?;
    let counts = analysis::sample_paths(pkg, dd, traversals, seed)?;
    let doomed = threshold_doomed(pkg, dd, &counts, 0);
    finish(pkg, dd, scheme, &doomed, None)
}

/// Eliminates every node visited `tau` times or less by `L` sampled walks.
pub fn approx_threshold(
    pkg: &mut Package,
    dd: &StateDd,
    traversals: u64,
    tau: u64,
    seed: u64,
) -> Result<(StateDd, ApproxReport)> {
    let scheme = Scheme::Threshold { traversals, tau, seed };
    scheme.validate()?;
    let counts = analysis::sample_paths(pkg, dd, traversals, seed)?;
    let doomed = threshold_doomed(pkg, dd, &counts, tau);
    finish(pkg, dd, scheme, &doomed, None)
}

/// Threshold elimination on externally supplied visit counts.
pub fn approx_with_counts(
    pkg: &mut Package,
    dd: &StateDd,
    counts: &VisitCounts,
    tau: u64,
) -> Result<(StateDd, ApproxReport)> {
    let scheme = Scheme::Threshold {
        traversals: counts.walks,
        tau,
        seed: counts.seed.unwrap_or(0),
    };
    scheme.validate()?;
    let doomed = threshold_doomed(pkg, dd, counts, tau);
    finish(pkg, dd, scheme, &doomed, None)
}

/// The longest prefix of `nodes`, sorted by ascending contribution (ties by
/// node id), whose cumulative contribution stays within `1 - f`.
pub fn eliminable_prefix(nodes: &[NodeId], contrib: &ContributionMap, f: f64) -> Vec<NodeId> {
    let budget = (1.0 - f) - BUDGET_SLACK;
    let mut sorted: Vec<(f64, NodeId)> = nodes.iter().map(|id| (contrib[id], *id)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut sum = 0.0;
    let mut prefix = Vec::new();
    for (c, id) in sorted {
        sum += c;
        if sum > budget {
            break;
        }
        prefix.push(id);
    }
    prefix
}

/// Eliminates low-contribution nodes of a single level, guaranteeing
/// fidelity at least `f`.
pub fn approx_target_fidelity(
    pkg: &mut Package,
    dd: &StateDd,
    f: f64,
    strategy: LevelStrategy,
) -> Result<(StateDd, ApproxReport)> {
    let scheme = Scheme::TargetFidelity { fidelity: f, level: strategy };
    scheme.validate()?;
    let contrib = analysis::contributions(pkg, dd);
    let levels = analysis::nodes_by_level(pkg, dd);
    let prefix_at = |l: u32| {
        levels
            .get(&l)
            .map(|ids| eliminable_prefix(ids, &contrib, f))
            .unwrap_or_default()
    };

    let (level, doomed) = match strategy {
        LevelStrategy::Fixed(l) => {
            if l as usize >= dd.qubits {
                return Err(Error::InvalidParameter(format!(
                    "level {l} out of range for {} qubits",
                    dd.qubits
                )));
            }
            (Some(l), prefix_at(l))
        }
        LevelStrategy::Best => {
            let mut best: Option<(usize, u32, Vec<NodeId>)> = None;
            for &l in levels.keys() {
                let prefix = prefix_at(l);
                if prefix.is_empty() {
                    continue;
                }
                let set: HashSet<NodeId> = prefix.iter().copied().collect();
                let trial = eliminate(pkg, dd, &set)?;
                let size = pkg.size(&trial);
                if best.as_ref().is_none_or(|(s, _, _)| size < *s) {
                    best = Some((size, l, prefix));
                }
            }
            match best {
                Some((_, l, prefix)) => (Some(l), prefix),
                None => (None, Vec::new()),
            }
        }
    };
    let doomed: HashSet<NodeId> = doomed.into_iter().collect();
    finish(pkg, dd, scheme, &doomed, level)
}

/// Applies the single-level selection to every level, top down.
///
/// Contributions are recomputed on the renormalized state after each level,
/// so every step keeps at least `f` of the remaining mass and the result has
/// fidelity at least `f^(n-1)` (the root level is never eliminated).
pub fn approx_per_level(pkg: &mut Package, dd: &StateDd, f: f64) -> Result<(StateDd, ApproxReport)> {
    let scheme = Scheme::FidelityPerLevel { fidelity: f };
    scheme.validate()?;
    let mut current = *dd;
    let mut eliminated = 0;
    for level in 1..dd.qubits as u32 {
        let contrib = analysis::contributions(pkg, &current);
        let Some(ids) = analysis::nodes_by_level(pkg, &current).remove(&level) else {
            continue;
        };
        let doomed: HashSet<NodeId> = eliminable_prefix(&ids, &contrib, f).into_iter().collect();
        eliminated += doomed.len();
        current = eliminate(pkg, &current, &doomed)?;
    }
    let orig_size = pkg.size(dd);
    let approx_size = pkg.size(&current);
    let report = ApproxReport {
        scheme,
        orig_size,
        approx_size,
        compression: if orig_size == 0 { 1.0 } else { approx_size as f64 / orig_size as f64 },
        attained_fidelity: fidelity::fidelity(pkg, dd, &current)?,
        eliminated,
        level: None,
    };
    Ok((current, report))
}

pub fn approximate(pkg: &mut Package, dd: &StateDd, scheme: &Scheme) -> Result<(StateDd, ApproxReport)> {
    match *scheme {
        Scheme::Sampling { traversals, seed } => approx_sampling(pkg, dd, traversals, seed),
        Scheme::Threshold { traversals, tau, seed } => approx_threshold(pkg, dd, traversals, tau, seed),
        Scheme::TargetFidelity { fidelity, level } => approx_target_fidelity(pkg, dd, fidelity, level),
        Scheme::FidelityPerLevel { fidelity } => approx_per_level(pkg, dd, fidelity),
    }
}
