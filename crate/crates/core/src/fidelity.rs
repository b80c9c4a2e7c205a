//! Inner product and fidelity computed directly on diagrams.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::dd::{Edge, NodeId, Package, StateDd};
use crate::error::{Error, Result};

/// Work counters for one inner-product evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct InnerProductStats {
    /// Distinct `(node_a, node_b)` pairs evaluated.
    pub pairs: usize,
    pub cache_hits: usize,
}

struct Pairwise<'a> {
    a: &'a Package,
    b: &'a Package,
    // weight-free sub-inner-products
    memo: HashMap<(NodeId, NodeId), Complex64>,
    stats: InnerProductStats,
}

impl Pairwise<'_> {
    fn edge(&mut self, ea: Edge, eb: Edge) -> Complex64 {
        if ea.is_zero() || eb.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        ea.weight.to_c64().conj() * eb.weight.to_c64() * self.nodes(ea.target, eb.target)
    }

    fn nodes(&mut self, na: NodeId, nb: NodeId) -> Complex64 {
        if na.is_terminal() && nb.is_terminal() {
            return Complex64::new(1.0, 0.0);
        }
        if let Some(&v) = self.memo.get(&(na, nb)) {
            self.stats.cache_hits += 1;
            return v;
        }
        let (x, y) = (*self.a.node(na), *self.b.node(nb));
        debug_assert_eq!(x.level, y.level);
        let v = self.edge(x.succ[0], y.succ[0]) + self.edge(x.succ[1], y.succ[1]);
        self.stats.pairs += 1;
        self.memo.insert((na, nb), v);
        v
    }
}

/// `⟨a|b⟩` for states that may live in different packages.
pub fn inner_product_across(
    pkg_a: &Package,
    a: &StateDd,
    pkg_b: &Package,
    b: &StateDd,
) -> Result<(Complex64, InnerProductStats)> {
    if a.qubits != b.qubits {
        return Err(Error::QubitMismatch(a.qubits, b.qubits));
    }
    let mut rec = Pairwise {
        a: pkg_a,
        b: pkg_b,
        memo: HashMap::new(),
        stats: InnerProductStats::default(),
    };
    let v = rec.edge(a.root, b.root);
    Ok((v, rec.stats))
}

pub fn inner_product(pkg: &Package, a: &StateDd, b: &StateDd) -> Result<Complex64> {
    inner_product_across(pkg, a, pkg, b).map(|(v, _)| v)
}

/// `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(pkg: &Package, a: &StateDd, b: &StateDd) -> Result<f64> {
    Ok(inner_product(pkg, a, b)?.norm_sqr().clamp(0.0, 1.0))
}
