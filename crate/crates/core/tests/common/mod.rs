//! Dense state-vector oracles, independent of the diagram code paths.
#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use ddapprox::circuit::{Circuit, Gate};
use num_complex::Complex64;
use rand::Rng;

pub type Dense = Vec<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub fn normalize(v: &mut [Complex64]) {
    let n = norm_sqr(v).sqrt();
    for a in v.iter_mut() {
        *a /= n;
    }
}

/// Uniform components in [-1, 1], normalized.
pub fn random_state<R: Rng>(n: usize, rng: &mut R) -> Dense {
    let mut v: Dense = (0..1usize << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    v
}

/// Random state with about `zero_frac` of the amplitudes forced to zero and a
/// few repeated sub-blocks, so the diagram has sharing and zero-stubs.
pub fn random_structured_state<R: Rng>(n: usize, zero_frac: f64, rng: &mut R) -> Dense {
    let mut v = random_state(n, rng);
    for a in v.iter_mut() {
        if rng.gen::<f64>() < zero_frac {
            *a = c(0.0, 0.0);
        }
    }
    if n >= 3 && rng.gen::<bool>() {
        let quarter = v.len() / 4;
        let (head, tail) = v.split_at_mut(quarter);
        tail[..quarter].copy_from_slice(head);
    }
    if norm_sqr(&v) == 0.0 {
        v[0] = c(1.0, 0.0);
    }
    normalize(&mut v);
    v
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn dense_fidelity(a: &[Complex64], b: &[Complex64]) -> f64 {
    inner(a, b).norm_sqr()
}

/// Probability mass of `original` on the basis states where `approx` is
/// nonzero.
pub fn kept_mass(original: &[Complex64], approx: &[Complex64]) -> f64 {
    original
        .iter()
        .zip(approx)
        .filter(|(_, a)| **a != c(0.0, 0.0))
        .map(|(o, _)| o.norm_sqr())
        .sum()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn bit(n: usize, q: usize) -> usize {
    1 << (n - 1 - q)
}

fn apply_1q(v: &mut [Complex64], n: usize, q: usize, m: [[Complex64; 2]; 2], control: Option<usize>) {
    let b = bit(n, q);
    for i in 0..v.len() {
        if i & b != 0 {
            continue;
        }
        if let Some(cq) = control {
            if i & bit(n, cq) == 0 {
                continue;
            }
        }
        let (a0, a1) = (v[i], v[i | b]);
        v[i] = m[0][0] * a0 + m[0][1] * a1;
        v[i | b] = m[1][0] * a0 + m[1][1] * a1;
    }
}

fn diag(theta: f64) -> [[Complex64; 2]; 2] {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, theta)]]
}

pub fn apply_dense(v: &mut [Complex64], n: usize, gate: &Gate) {
    let h = FRAC_1_SQRT_2;
    let hm = [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]];
    let xm = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    let ym = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
    match *gate {
        Gate::H(q) => apply_1q(v, n, q, hm, None),
        Gate::X(q) => apply_1q(v, n, q, xm, None),
        Gate::Y(q) => apply_1q(v, n, q, ym, None),
        Gate::Z(q) => apply_1q(v, n, q, diag(PI), None),
        Gate::S(q) => apply_1q(v, n, q, diag(PI / 2.0), None),
        Gate::T(q) => apply_1q(v, n, q, diag(PI / 4.0), None),
        Gate::P(t, q) => apply_1q(v, n, q, diag(t), None),
        Gate::Cx { control, target } => apply_1q(v, n, target, xm, Some(control)),
        Gate::Cz { control, target } => apply_1q(v, n, target, diag(PI), Some(control)),
        Gate::Cp { theta, control, target } => apply_1q(v, n, target, diag(theta), Some(control)),
        Gate::Swap(a, b) => {
            let (ba, bb) = (bit(n, a), bit(n, b));
            for i in 0..v.len() {
                if i & ba != 0 && i & bb == 0 {
                    v.swap(i, (i & !ba) | bb);
                }
            }
        }
    }
}

pub fn simulate_dense(circuit: &Circuit) -> Dense {
    let mut v = vec![c(0.0, 0.0); 1 << circuit.qubits];
    v[0] = c(1.0, 0.0);
    for g in &circuit.gates {
        apply_dense(&mut v, circuit.qubits, g);
    }
    v
}

/// Random circuit over the full gate set (the built-in generator only uses
/// H, T, P and CZ).
pub fn random_full_circuit<R: Rng>(n: usize, gates: usize, rng: &mut R) -> Circuit {
    let mut circ = Circuit::new(n);
    for _ in 0..gates {
        let q = rng.gen_range(0..n);
        let mut o = rng.gen_range(0..n - 1);
        if o >= q {
            o += 1;
        }
        let theta = rng.gen_range(-PI..PI);
        let g = match rng.gen_range(0..11) {
            0 => Gate::H(q),
            1 => Gate::X(q),
            2 => Gate::Y(q),
            3 => Gate::Z(q),
            4 => Gate::S(q),
            5 => Gate::T(q),
            6 => Gate::P(theta, q),
            7 => Gate::Cx { control: q, target: o },
            8 => Gate::Cz { control: q, target: o },
            9 => Gate::Cp { theta, control: q, target: o },
            _ => Gate::Swap(q, o),
        };
        circ.push(g).unwrap();
    }
    circ
}
