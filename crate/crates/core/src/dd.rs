//! Edge-weighted decision diagrams for pure states.
//!
//! Level `l` splits on qubit `q_l`, with `q_0` the most significant qubit of
//! the basis index. Every nonzero edge out of a level-`l` node targets a node
//! at level `l + 1`, or the terminal when `l` is the last level; all-zero
//! sub-vectors are represented by the shared zero-stub [`Edge::ZERO`].

use std::collections::{HashMap, HashSet};

use num_complex::Complex64;

use crate::complex::{ComplexTable, ComplexValue, Tolerance};
use crate::error::{Error, Result};

pub const DEFAULT_VECTOR_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const TERMINAL: Self = Self(0);

    pub fn is_terminal(self) -> bool {
        self == Self::TERMINAL
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: NodeId,
    pub weight: ComplexValue,
}

impl Edge {
    /// The zero-stub.
    pub const ZERO: Self = Self {
        target: NodeId::TERMINAL,
        weight: ComplexValue::ZERO,
    };
    pub const ONE: Self = Self {
        target: NodeId::TERMINAL,
        weight: ComplexValue::ONE,
    };

    pub fn is_zero(&self) -> bool {
        self.weight.is_zero()
    }

    pub fn is_terminal(&self) -> bool {
        self.target.is_terminal()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub level: u32,
    pub succ: [Edge; 2],
}

/// How `make_node` factors the successor weights out into the incoming edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// Divide both weights by the larger magnitude (a positive real). The
    /// larger weight keeps its phase, so sub-vectors that differ only by a
    /// complex phase get distinct nodes.
    #[default]
    Magnitude,
    /// Divide both weights by the larger-magnitude weight itself (ties go to
    /// the 0-successor), which becomes exactly 1. Phase-equivalent
    /// sub-vectors share a node.
    Phase,
}

/// A state: qubit count plus root edge into a [`Package`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateDd {
    pub qubits: usize,
    pub root: Edge,
}

/// Owns the value table, the node store and the unique table.
#[derive(Debug)]
pub struct Package {
    pub(crate) complex: ComplexTable,
    nodes: Vec<Node>,
    live: Vec<bool>,
    free: Vec<u32>,
    unique: HashMap<Node, NodeId>,
    pub(crate) add_cache: HashMap<(NodeId, NodeId, ComplexValue), Edge>,
    normalization: Normalization,
    vector_cap: usize,
}

impl Default for Package {
    fn default() -> Self {
        Self::new()
    }
}

impl Package {
    pub fn new() -> Self {
        Self::with_options(Tolerance::default(), Normalization::default())
    }

    pub fn with_options(tol: Tolerance, normalization: Normalization) -> Self {
        let terminal = Node {
            level: u32::MAX,
            succ: [Edge::ZERO, Edge::ZERO],
        };
        Self {
            complex: ComplexTable::new(tol),
            nodes: vec![terminal],
            live: vec![true],
            free: Vec::new(),
            unique: HashMap::new(),
            add_cache: HashMap::new(),
            normalization,
            vector_cap: DEFAULT_VECTOR_CAP,
        }
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn tolerance(&self) -> f64 {
        self.complex.tolerance()
    }

    pub fn complex_table(&mut self) -> &mut ComplexTable {
        &mut self.complex
    }

    pub fn set_vector_cap(&mut self, cap: usize) {
        self.vector_cap = cap;
    }

    pub fn vector_cap(&self) -> usize {
        self.vector_cap
    }

    /// Number of live nonterminal nodes in the store.
    pub fn node_count(&self) -> usize {
        self.unique.len()
    }

    /// Panics on the terminal or a collected id.
    pub fn node(&self, id: NodeId) -> &Node {
        assert!(!id.is_terminal(), "terminal has no successors");
        assert!(self.live[id.index()], "node {id:?} was garbage collected");
        &self.nodes[id.index()]
    }

    pub fn level(&self, id: NodeId) -> Option<u32> {
        (!id.is_terminal()).then(|| self.node(id).level)
    }

    pub(crate) fn scale(&mut self, e: Edge, factor: ComplexValue) -> Edge {
        if e.is_zero() || factor.is_zero() {
            return Edge::ZERO;
        }
        let weight = self.complex.mul(e.weight, factor);
        if weight.is_zero() {
            Edge::ZERO
        } else {
            Edge {
                target: e.target,
                weight,
            }
        }
    }

    fn clean(e: Edge) -> Edge {
        if e.is_zero() { Edge::ZERO } else { e }
    }

    /// Builds (or finds) the normalized node `(level, succ0, succ1)` and
    /// returns an edge to it carrying the factored-out divisor.
    pub fn make_node(&mut self, level: u32, succ0: Edge, succ1: Edge) -> Edge {
        let (e0, e1) = (Self::clean(succ0), Self::clean(succ1));
        if e0.is_zero() && e1.is_zero() {
            return Edge::ZERO;
        }
        for e in [e0, e1] {
            debug_assert!(
                e.is_zero()
                    || e.is_terminal()
                    || self.node(e.target).level == level + 1,
                "successor of a level-{level} node must sit at level {}",
                level + 1
            );
        }
        let (m0, m1) = (e0.weight.mag(), e1.weight.mag());
        let (w0, w1, top) = match self.normalization {
            Normalization::Magnitude => {
                let d = m0.max(m1);
                let divisor = self.complex.canon(Complex64::new(d, 0.0));
                (
                    self.complex.div(e0.weight, divisor),
                    self.complex.div(e1.weight, divisor),
                    divisor,
                )
            }
            Normalization::Phase => {
                if m1 > m0 + self.complex.tolerance() {
                    let d = e1.weight;
                    (self.complex.div(e0.weight, d), ComplexValue::ONE, d)
                } else {
                    let d = e0.weight;
                    (ComplexValue::ONE, self.complex.div(e1.weight, d), d)
                }
            }
        };
        let succ = [
            Self::clean(Edge { target: e0.target, weight: w0 }),
            Self::clean(Edge { target: e1.target, weight: w1 }),
        ];
        let node = Node { level, succ };
        let id = match self.unique.get(&node) {
            Some(&id) => id,
            None => {
                let id = match self.free.pop() {
                    Some(slot) => {
                        self.nodes[slot as usize] = node;
                        self.live[slot as usize] = true;
                        NodeId(slot)
                    }
                    None => {
                        let slot = u32::try_from(self.nodes.len()).expect("node store exhausted");
                        self.nodes.push(node);
                        self.live.push(true);
                        NodeId(slot)
                    }
                };
                self.unique.insert(node, id);
                id
            }
        };
        Edge { target: id, weight: top }
    }

    /// Sum of two edges that sit at the same level.
    pub(crate) fn add(&mut self, a: Edge, b: Edge) -> Edge {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if a.is_terminal() {
            debug_assert!(b.is_terminal());
            let w = self.complex.add(a.weight, b.weight);
            return if w.is_zero() {
                Edge::ZERO
            } else {
                Edge { target: NodeId::TERMINAL, weight: w }
            };
        }
        // a + b = wa * (A + (wb / wa) * B)
        let ratio = self.complex.div(b.weight, a.weight);
        let key = (a.target, b.target, ratio);
        let unit = match self.add_cache.get(&key) {
            Some(&e) => e,
            None => {
                let na = *self.node(a.target);
                let nb = *self.node(b.target);
                let mut succ = [Edge::ZERO; 2];
                for (i, s) in succ.iter_mut().enumerate() {
                    let rhs = self.scale(nb.succ[i], ratio);
                    *s = self.add(na.succ[i], rhs);
                }
                let e = self.make_node(na.level, succ[0], succ[1]);
                self.add_cache.insert(key, e);
                e
            }
        };
        self.scale(unit, a.weight)
    }

    /// |0…0⟩ on `qubits` qubits.
    pub fn zero_state(&mut self, qubits: usize) -> StateDd {
        let mut e = Edge::ONE;
        for level in (0..qubits as u32).rev() {
            e = self.make_node(level, e, Edge::ZERO);
        }
        StateDd { qubits, root: e }
    }

    /// Builds the canonical diagram of a dense amplitude vector. The vector
    /// must have norm 1 within 1e-6; it is renormalized exactly first.
    pub fn from_vector(&mut self, amps: &[Complex64]) -> Result<StateDd> {
        if !amps.len().is_power_of_two() {
            return Err(Error::BadLength(amps.len()));
        }
        if let Some(bad) = amps.iter().find(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(Error::NonFinite { re: bad.re, im: bad.im });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroState);
        }
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized(norm));
        }
        let scaled: Vec<Complex64> = amps.iter().map(|a| a / norm).collect();
        let qubits = amps.len().trailing_zeros() as usize;
        let root = self.build(&scaled, 0)?;
        if root.is_zero() {
            return Err(Error::ZeroState);
        }
        Ok(StateDd { qubits, root })
    }

    fn build(&mut self, amps: &[Complex64], level: u32) -> Result<Edge> {
        if amps.len() == 1 {
            let w = self.complex.lookup(amps[0].re, amps[0].im)?;
            return Ok(Self::clean(Edge { target: NodeId::TERMINAL, weight: w }));
        }
        let (lo, hi) = amps.split_at(amps.len() / 2);
        let e0 = self.build(lo, level + 1)?;
        let e1 = self.build(hi, level + 1)?;
        Ok(self.make_node(level, e0, e1))
    }

    /// Dense amplitude vector, `q_0` as the most significant index bit.
    pub fn to_vector(&self, dd: &StateDd) -> Result<Vec<Complex64>> {
        if dd.qubits > self.vector_cap {
            return Err(Error::VectorCap { qubits: dd.qubits, cap: self.vector_cap });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); 1 << dd.qubits];
        self.fill(dd.root, dd.root.weight.to_c64(), 0, &mut out);
        Ok(out)
    }

    fn fill(&self, e: Edge, acc: Complex64, offset: usize, out: &mut [Complex64]) {
        if e.is_zero() {
            return;
        }
        if e.is_terminal() {
            out[offset] = acc;
            return;
        }
        let node = self.node(e.target);
        let half = out.len() >> (node.level as usize + 1);
        for (bit, s) in node.succ.iter().enumerate() {
            if !s.is_zero() {
                self.fill(*s, acc * s.weight.to_c64(), offset + bit * half, out);
            }
        }
    }

    /// Path product for a bitstring such as `"011"` (`q_0` first).
    pub fn amplitude(&self, dd: &StateDd, basis: &str) -> Result<Complex64> {
        let bits: Vec<u8> = basis
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::BadBasis(basis.to_string(), dd.qubits)),
            })
            .collect::<Result<_>>()?;
        if bits.len() != dd.qubits {
            return Err(Error::BadBasis(basis.to_string(), dd.qubits));
        }
        let mut e = dd.root;
        let mut acc = e.weight.to_c64();
        for b in bits {
            if e.is_zero() {
                return Ok(Complex64::new(0.0, 0.0));
            }
            e = self.node(e.target).succ[b as usize];
            acc *= e.weight.to_c64();
        }
        Ok(acc)
    }

    /// Nonterminal nodes reachable from `root`, in depth-first preorder
    /// (0-successor first).
    pub fn reachable(&self, root: Edge) -> Vec<NodeId> {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(e) = stack.pop() {
            if e.is_zero() || e.is_terminal() || !seen.insert(e.target) {
                continue;
            }
            order.push(e.target);
            let n = self.node(e.target);
            stack.push(n.succ[1]);
            stack.push(n.succ[0]);
        }
        order
    }

    /// Number of nonterminal nodes reachable from the root.
    pub fn size(&self, dd: &StateDd) -> usize {
        self.reachable(dd.root).len()
    }

    /// Squared norm of the weight-free sub-vector of every reachable node.
    pub(crate) fn subtree_norms(&self, root: Edge) -> HashMap<NodeId, f64> {
        fn visit(pkg: &Package, id: NodeId, memo: &mut HashMap<NodeId, f64>) -> f64 {
            if id.is_terminal() {
                return 1.0;
            }
            if let Some(&v) = memo.get(&id) {
                return v;
            }
            let node = *pkg.node(id);
            let v = node
                .succ
                .iter()
                .filter(|s| !s.is_zero())
                .map(|s| s.weight.sqr_mag() * visit(pkg, s.target, memo))
                .sum();
            memo.insert(id, v);
            v
        }
        let mut memo = HashMap::new();
        memo.insert(NodeId::TERMINAL, 1.0);
        if !root.is_zero() {
            visit(self, root.target, &mut memo);
        }
        memo
    }

    pub fn norm_squared(&self, dd: &StateDd) -> f64 {
        if dd.root.is_zero() {
            return 0.0;
        }
        dd.root.weight.sqr_mag() * self.subtree_norms(dd.root)[&dd.root.target]
    }

    /// Divides the root weight by the state's norm.
    pub fn renormalize(&mut self, dd: &StateDd) -> Result<StateDd> {
        let norm = self.norm_squared(dd).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroState);
        }
        let w = dd.root.weight.to_c64() / norm;
        let weight = self.complex.lookup(w.re, w.im)?;
        Ok(StateDd {
            qubits: dd.qubits,
            root: Edge { target: dd.root.target, weight },
        })
    }

    /// Frees every node not reachable from `roots` and clears the compute
    /// caches. Ids of surviving nodes are unchanged; freed slots are reused.
    /// Returns the number of nodes freed.
    pub fn collect_garbage(&mut self, roots: &[Edge]) -> usize {
        let mut keep = HashSet::new();
        for r in roots {
            keep.extend(self.reachable(*r));
        }
        let doomed: Vec<(Node, NodeId)> = self
            .unique
            .iter()
            .filter(|(_, id)| !keep.contains(*id))
            .map(|(n, id)| (*n, *id))
            .collect();
        for (node, id) in &doomed {
            self.unique.remove(node);
            self.live[id.index()] = false;
            self.free.push(id.0);
        }
        // lowest slot is reused first
        self.free.sort_unstable_by(|a, b| b.cmp(a));
        self.add_cache.clear();
        doomed.len()
    }
}
