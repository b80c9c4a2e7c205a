//! Gate set, circuit files and built-in circuit families.
//!
//! The text format has one statement per line; `#` starts a comment:
//!
//! ```text
//! qubits 3
//! h 0
//! cx 0 1
//! cp 1.5707963267948966 1 2
//! ```

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Y(usize),
    Z(usize),
    S(usize),
    T(usize),
    P(f64, usize),
    Cx { control: usize, target: usize },
    Cz { control: usize, target: usize },
    Cp { theta: f64, control: usize, target: usize },
    Swap(usize, usize),
}

pub type Matrix2 = [[Complex64; 2]; 2];

fn phase(theta: f64) -> Matrix2 {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    [[one, zero], [zero, Complex64::from_polar(1.0, theta)]]
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) | Gate::S(q) | Gate::T(q) | Gate::P(_, q) => vec![q],
            Gate::Cx { control, target } | Gate::Cz { control, target } | Gate::Cp { control, target, .. } => {
                vec![control, target]
            }
            Gate::Swap(a, b) => vec![a, b],
        }
    }

    /// The single-qubit matrix acting on the target (for controlled gates,
    /// the matrix applied when the control is 1). `None` for SWAP.
    pub fn matrix(&self) -> Option<Matrix2> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Some(match *self {
            Gate::H(_) => [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
            Gate::X(_) | Gate::Cx { .. } => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            Gate::Y(_) => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            Gate::Z(_) | Gate::Cz { .. } => phase(PI),
            Gate::S(_) => phase(PI / 2.0),
            Gate::T(_) => phase(PI / 4.0),
            Gate::P(theta, _) | Gate::Cp { theta, .. } => phase(theta),
            Gate::Swap(..) => return None,
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "h {q}"),
            Gate::X(q) => write!(f, "x {q}"),
            Gate::Y(q) => write!(f, "y {q}"),
            Gate::Z(q) => write!(f, "z {q}"),
            Gate::S(q) => write!(f, "s {q}"),
            Gate::T(q) => write!(f, "t {q}"),
            Gate::P(theta, q) => write!(f, "p {theta:?} {q}"),
            Gate::Cx { control, target } => write!(f, "cx {control} {target}"),
            Gate::Cz { control, target } => write!(f, "cz {control} {target}"),
            Gate::Cp { theta, control, target } => write!(f, "cp {theta:?} {control} {target}"),
            Gate::Swap(a, b) => write!(f, "swap {a} {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Self { qubits, gates: Vec::new() }
    }

    /// Checks that indices are in range and controls differ from targets.
    pub fn validate_gate(qubits: usize, gate: &Gate) -> std::result::Result<(), String> {
        let qs = gate.qubits();
        if let Some(q) = qs.iter().find(|&&q| q >= qubits) {
            return Err(format!("qubit index {q} out of range for {qubits} qubits"));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(format!("gate `{gate}` uses qubit {} twice", qs[0]));
        }
        Ok(())
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        Self::validate_gate(self.qubits, &gate).map_err(Error::InvalidParameter)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: String| Error::Parse { line, msg };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            let op = words[0].to_ascii_lowercase();
            let args = &words[1..];

            let Some(c) = circuit.as_mut() else {
                if op != "qubits" {
                    return Err(err(format!("expected `qubits <n>` header, found `{op}`")));
                }
                if args.len() != 1 {
                    return Err(err("`qubits` takes exactly one argument".into()));
                }
                let n = args[0]
                    .parse::<usize>()
                    .map_err(|_| err(format!("invalid qubit count `{}`", args[0])))?;
                if n == 0 {
                    return Err(err("qubit count must be at least 1".into()));
                }
                circuit = Some(Circuit::new(n));
                continue;
            };

            let index = |s: &str| s.parse::<usize>().map_err(|_| err(format!("invalid qubit index `{s}`")));
            let angle = |s: &str| match s.parse::<f64>() {
                Ok(t) if t.is_finite() => Ok(t),
                _ => Err(err(format!("malformed angle `{s}`"))),
            };
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("`{op}` takes {n} arguments, got {}", args.len())))
                }
            };

            let gate = match op.as_str() {
                "h" | "x" | "y" | "z" | "s" | "t" => {
                    arity(1)?;
                    let q = index(args[0])?;
                    match op.as_str() {
                        "h" => Gate::H(q),
                        "x" => Gate::X(q),
                        "y" => Gate::Y(q),
                        "z" => Gate::Z(q),
                        "s" => Gate::S(q),
                        _ => Gate::T(q),
                    }
                }
                "p" => {
                    arity(2)?;
                    Gate::P(angle(args[0])?, index(args[1])?)
                }
                "cx" | "cz" => {
                    arity(2)?;
                    let (control, target) = (index(args[0])?, index(args[1])?);
                    if op == "cx" {
                        Gate::Cx { control, target }
                    } else {
                        Gate::Cz { control, target }
                    }
                }
                "cp" => {
                    arity(3)?;
                    Gate::Cp {
                        theta: angle(args[0])?,
                        control: index(args[1])?,
                        target: index(args[2])?,
                    }
                }
                "swap" => {
                    arity(2)?;
                    Gate::Swap(index(args[0])?, index(args[1])?)
                }
                "qubits" => return Err(err("duplicate `qubits` header".into())),
                other => return Err(err(format!("unknown gate `{other}`"))),
            };
            Circuit::validate_gate(c.qubits, &gate).map_err(err)?;
            c.gates.push(gate);
        }
        circuit.ok_or(Error::Parse { line: 0, msg: "missing `qubits <n>` header".into() })
    }

    /// Serializes back into the text format.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.qubits);
        for g in &self.gates {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

/// `H` on qubit 0 followed by a CX ladder.
pub fn ghz(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    c.gates.push(Gate::H(0));
    for q in 0..n.saturating_sub(1) {
        c.gates.push(Gate::Cx { control: q, target: q + 1 });
    }
    c
}

/// Textbook QFT including the final qubit-reversal swaps.
pub fn qft(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for j in 0..n {
        c.gates.push(Gate::H(j));
        for k in j + 1..n {
            c.gates.push(Gate::Cp {
                theta: PI / (1u64 << (k - j)) as f64,
                control: k,
                target: j,
            });
        }
    }
    for q in 0..n / 2 {
        c.gates.push(Gate::Swap(q, n - 1 - q));
    }
    c
}

/// Layered random circuit. Even layers put one gate from {H, T, P(θ)} on
/// every qubit; odd layers apply a single CZ to a random pair.
///
/// Stream (SplitMix64 seeded with `seed`, rand 0.8 sampling): per qubit in
/// an even layer, `gen_range(0..3)` picks H/T/P and P draws
/// `gen::<f64>() * 2π`; an odd layer draws `gen_range(0..n)` for the control
/// and `gen_range(0..n-1)` for the target (skipping the control).
pub fn random_circuit(n: usize, depth: usize, seed: u64) -> Circuit {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for layer in 0..depth {
        if layer % 2 == 0 || n < 2 {
            for q in 0..n {
                let g = match rng.gen_range(0..3) {
                    0 => Gate::H(q),
                    1 => Gate::T(q),
                    _ => Gate::P(rng.gen::<f64>() * 2.0 * PI, q),
                };
                c.gates.push(g);
            }
        } else {
            let control = rng.gen_range(0..n);
            let mut target = rng.gen_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            c.gates.push(Gate::Cz { control, target });
        }
    }
    c
}

/// The 3-qubit example state
/// `[0, 2/√10, 0, 2/√10, 1/√10, 0, 0, −1/√10]`.
pub fn fig2_amplitudes() -> Vec<Complex64> {
    let a = 2.0 / 10f64.sqrt();
    let b = 1.0 / 10f64.sqrt();
    [0.0, a, 0.0, a, b, 0.0, 0.0, -b]
        .into_iter()
        .map(|re| Complex64::new(re, 0.0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bell() {
        let c = Circuit::parse("qubits 2\nh 0\ncx 0 1").unwrap();
        assert_eq!(c.qubits, 2);
        assert_eq!(c.gates, vec![Gate::H(0), Gate::Cx { control: 0, target: 1 }]);
        assert_eq!(c, ghz(2));
    }

    #[test]
    fn reports_line_of_unknown_gate() {
        match Circuit::parse("qubits 3\nh 2\nbadop 1") {
            Err(Error::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("badop"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parses_phase_angle() {
        let c = Circuit::parse("qubits 1\np 0.25 0").unwrap();
        assert_eq!(c.gates, vec![Gate::P(0.25, 0)]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# bell pair\n\nqubits 2   # two\nH 0\n  cx 0 1 # entangle\n";
        assert_eq!(Circuit::parse(text).unwrap(), ghz(2));
    }

    #[test]
    fn parse_errors() {
        let line_of = |t: &str| match Circuit::parse(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("h 0"), 1);
        assert_eq!(line_of("qubits 2\nh 2"), 2);
        assert_eq!(line_of("qubits 2\ncx 1 1"), 2);
        assert_eq!(line_of("qubits 2\np abc 0"), 2);
        assert_eq!(line_of("qubits 2\np nan 0"), 2);
        assert_eq!(line_of("qubits 2\ncp 0.1 0"), 2);
        assert_eq!(line_of("qubits 2\n\nh -1"), 3);
        assert_eq!(line_of("qubits 0"), 1);
        assert_eq!(line_of("qubits 2\nqubits 3"), 2);
        assert_eq!(line_of("# nothing"), 0);
    }

    #[test]
    fn text_round_trip() {
        let c = random_circuit(5, 12, 3);
        assert_eq!(Circuit::parse(&c.to_text()).unwrap(), c);
        let q = qft(4);
        assert_eq!(Circuit::parse(&q.to_text()).unwrap(), q);
    }

    #[test]
    fn random_circuit_is_seed_deterministic() {
        assert_eq!(random_circuit(6, 20, 9), random_circuit(6, 20, 9));
        assert_ne!(random_circuit(6, 20, 9), random_circuit(6, 20, 10));
        let c = random_circuit(6, 20, 9);
        assert_eq!(c.gates.len(), 10 * 6 + 10);
        for g in &c.gates {
            Circuit::validate_gate(6, g).unwrap();
        }
    }

    #[test]
    fn qft_shape() {
        let c = qft(3);
        assert_eq!(c.gates.len(), 3 + 3 + 1);
        assert_eq!(c.gates.last(), Some(&Gate::Swap(0, 2)));
    }
}
