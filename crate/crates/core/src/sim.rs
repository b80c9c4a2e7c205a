//! Gate application on state diagrams.
//!
//! Single-qubit gates rebuild the nodes at the target level from the 2×2
//! matrix and both successors; nodes above the target are rebuilt around the
//! transformed successors. Controlled gates act on the control=1 cofactor
//! only. Each gate memoizes on node identity, since gate application is
//! linear and the incoming weight factors out.

use std::collections::HashMap;

use crate::circuit::{Circuit, Gate, Matrix2};
use crate::complex::ComplexValue;
use crate::dd::{Edge, NodeId, Package, StateDd};
use crate::error::{Error, Result};

type Memo = HashMap<NodeId, Edge>;

struct Unitary([[ComplexValue; 2]; 2]);

impl Package {
    fn canon_matrix(&mut self, m: &Matrix2) -> Unitary {
        let mut out = [[ComplexValue::ZERO; 2]; 2];
        for (i, row) in m.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[i][j] = self.complex.canon(*v);
            }
        }
        Unitary(out)
    }

    /// `u[row][0]·s0 + u[row][1]·s1`
    fn mix(&mut self, u: &Unitary, row: usize, s0: Edge, s1: Edge) -> Edge {
        let a = self.scale(s0, u.0[row][0]);
        let b = self.scale(s1, u.0[row][1]);
        self.add(a, b)
    }

    fn apply_single(&mut self, e: Edge, target: u32, u: &Unitary, memo: &mut Memo) -> Edge {
        if e.is_zero() {
            return Edge::ZERO;
        }
        let unit = match memo.get(&e.target) {
            Some(&r) => r,
            None => {
                let node = *self.node(e.target);
                let [s0, s1] = node.succ;
                let r = if node.level == target {
                    let n0 = self.mix(u, 0, s0, s1);
                    let n1 = self.mix(u, 1, s0, s1);
                    self.make_node(node.level, n0, n1)
                } else {
                    let n0 = self.apply_single(s0, target, u, memo);
                    let n1 = self.apply_single(s1, target, u, memo);
                    self.make_node(node.level, n0, n1)
                };
                memo.insert(e.target, r);
                r
            }
        };
        self.scale(unit, e.weight)
    }

    /// Zeroes the half of the state where qubit `level` differs from `bit`.
    fn project(&mut self, e: Edge, level: u32, bit: usize, memo: &mut Memo) -> Edge {
        if e.is_zero() {
            return Edge::ZERO;
        }
        let unit = match memo.get(&e.target) {
            Some(&r) => r,
            None => {
                let node = *self.node(e.target);
                let mut succ = node.succ;
                if node.level == level {
                    succ[1 - bit] = Edge::ZERO;
                } else {
                    for s in succ.iter_mut() {
                        *s = self.project(*s, level, bit, memo);
                    }
                }
                let r = self.make_node(node.level, succ[0], succ[1]);
                memo.insert(e.target, r);
                r
            }
        };
        self.scale(unit, e.weight)
    }

    fn apply_controlled(
        &mut self,
        e: Edge,
        control: u32,
        target: u32,
        u: &Unitary,
        memos: &mut [Memo; 4],
    ) -> Edge {
        if e.is_zero() {
            return Edge::ZERO;
        }
        let unit = match memos[0].get(&e.target) {
            Some(&r) => r,
            None => {
                let node = *self.node(e.target);
                let [s0, s1] = node.succ;
                let r = if node.level == control {
                    let n1 = self.apply_single(s1, target, u, &mut memos[1]);
                    self.make_node(node.level, s0, n1)
                } else if node.level == target {
                    // control sits below the target
                    let a0 = self.project(s0, control, 0, &mut memos[2]);
                    let a1 = self.project(s0, control, 1, &mut memos[3]);
                    let b0 = self.project(s1, control, 0, &mut memos[2]);
                    let b1 = self.project(s1, control, 1, &mut memos[3]);
                    let m0 = self.mix(u, 0, a1, b1);
                    let m1 = self.mix(u, 1, a1, b1);
                    let n0 = self.add(a0, m0);
                    let n1 = self.add(b0, m1);
                    self.make_node(node.level, n0, n1)
                } else {
                    let n0 = self.apply_controlled(s0, control, target, u, memos);
                    let n1 = self.apply_controlled(s1, control, target, u, memos);
                    self.make_node(node.level, n0, n1)
                };
                memos[0].insert(e.target, r);
                r
            }
        };
        self.scale(unit, e.weight)
    }

    /// Applies one gate and restores the unit norm of the result.
    pub fn apply_gate(&mut self, dd: &StateDd, gate: &Gate) -> Result<StateDd> {
        Circuit::validate_gate(dd.qubits, gate).map_err(Error::InvalidParameter)?;
        let root = match *gate {
            Gate::Swap(a, b) => {
                let mut s = *dd;
                for (c, t) in [(a, b), (b, a), (a, b)] {
                    s = self.apply_gate(&s, &Gate::Cx { control: c, target: t })?;
                }
                return Ok(s);
            }
            Gate::Cx { control, target } | Gate::Cz { control, target } | Gate::Cp { control, target, .. } => {
                let u = self.canon_matrix(&gate.matrix().expect("controlled gates carry a matrix"));
                let mut memos: [Memo; 4] = Default::default();
                self.apply_controlled(dd.root, control as u32, target as u32, &u, &mut memos)
            }
            _ => {
                let q = gate.qubits()[0];
                let u = self.canon_matrix(&gate.matrix().expect("single-qubit gates carry a matrix"));
                self.apply_single(dd.root, q as u32, &u, &mut Memo::new())
            }
        };
        self.renormalize(&StateDd { qubits: dd.qubits, root })
    }

    /// Runs the circuit from |0…0⟩.
    pub fn simulate(&mut self, circuit: &Circuit) -> Result<StateDd> {
        let mut state = self.zero_state(circuit.qubits);
        for gate in &circuit.gates {
            state = self.apply_gate(&state, gate)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use crate::circuit::{ghz, qft, Circuit, Gate};
    use crate::dd::Package;
    use num_complex::Complex64;

    #[test]
    fn bell_state() {
        let mut p = Package::new();
        let c = Circuit::parse("qubits 2\nh 0\ncx 0 1").unwrap();
        let dd = p.simulate(&c).unwrap();
        let v = p.to_vector(&dd).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let want = [h, 0.0, 0.0, h];
        for (x, w) in v.iter().zip(want) {
            assert!((x - Complex64::new(w, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn empty_circuit_is_ground_state() {
        let mut p = Package::new();
        let dd = p.simulate(&Circuit::new(3)).unwrap();
        assert_eq!(p.size(&dd), 3);
        assert_eq!(dd, p.zero_state(3));
    }

    #[test]
    fn ghz_structure() {
        let mut p = Package::new();
        for n in 1..8 {
            let dd = p.simulate(&ghz(n)).unwrap();
            // one root plus an all-zeros chain and an all-ones chain
            assert_eq!(p.size(&dd), 2 * n - 1);
            let v = p.to_vector(&dd).unwrap();
            let nonzero: Vec<_> = v.iter().filter(|a| a.norm() > 1e-12).collect();
            assert_eq!(nonzero.len(), 2);
            for a in nonzero {
                assert!((a.re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qft_of_zero_is_uniform() {
        let mut p = Package::new();
        let dd = p.simulate(&qft(3)).unwrap();
        for a in p.to_vector(&dd).unwrap() {
            assert!((a - Complex64::new(1.0 / 8f64.sqrt(), 0.0)).norm() < 1e-9);
        }
        assert_eq!(p.size(&dd), 3);
    }

    #[test]
    fn control_below_target() {
        let mut p = Package::new();
        let mut c = Circuit::new(2);
        c.push(Gate::X(1)).unwrap();
        c.push(Gate::Cx { control: 1, target: 0 }).unwrap();
        let dd = p.simulate(&c).unwrap();
        assert!((p.amplitude(&dd, "11").unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn swap_moves_excitation() {
        let mut p = Package::new();
        let mut c = Circuit::new(3);
        c.push(Gate::X(0)).unwrap();
        c.push(Gate::Swap(0, 2)).unwrap();
        let dd = p.simulate(&c).unwrap();
        assert!((p.amplitude(&dd, "001").unwrap().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_out_of_range_gate() {
        let mut p = Package::new();
        let s = p.zero_state(2);
        assert!(p.apply_gate(&s, &Gate::H(2)).is_err());
    }

    #[test]
    fn same_circuit_same_root() {
        let mut p = Package::new();
        let c = crate::circuit::random_circuit(5, 16, 4);
        let a = p.simulate(&c).unwrap();
        let b = p.simulate(&c).unwrap();
        assert_eq!(a.root, b.root);
    }
}
