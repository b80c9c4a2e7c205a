mod common;

use std::collections::HashSet;

use common::*;
use ddapprox::analysis;
use ddapprox::approx::{self, LevelStrategy, Scheme};
use ddapprox::{Error, NodeId, Package, StateDd};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Zeroes every amplitude whose path visits a doomed node, then rescales.
fn dense_eliminate(pkg: &Package, dd: &StateDd, amps: &[Complex64], doomed: &HashSet<NodeId>) -> Option<Vec<Complex64>> {
    let mut out = amps.to_vec();
    for (i, a) in out.iter_mut().enumerate() {
        let mut e = dd.root;
        for l in 0..dd.qubits {
            if e.is_zero() {
                break;
            }
            if doomed.contains(&e.target) {
                *a = c(0.0, 0.0);
                break;
            }
            let bit = (i >> (dd.qubits - 1 - l)) & 1;
            e = pkg.node(e.target).succ[bit];
        }
    }
    if norm_sqr(&out) == 0.0 {
        return None;
    }
    normalize(&mut out);
    Some(out)
}

#[test]
fn eliminate_matches_dense_oracle() {
    let mut rng = SplitMix64::seed_from_u64(31);
    let mut pkg = Package::new();
    let mut zeroed = 0;
    for k in 0..200 {
        let v = if k % 2 == 0 { random_state(5, &mut rng) } else { random_structured_state(5, 0.3, &mut rng) };
        let dd = pkg.from_vector(&v).unwrap();
        let amps = pkg.to_vector(&dd).unwrap();
        let nodes = pkg.reachable(dd.root);
        let pick = rng.gen_range(0..=nodes.len().min(4));
        let doomed: HashSet<NodeId> = nodes.choose_multiple(&mut rng, pick).copied().collect();
        match (approx::eliminate(&mut pkg, &dd, &doomed), dense_eliminate(&pkg, &dd, &amps, &doomed)) {
            (Ok(got), Some(want)) => {
                assert!(max_abs_diff(&pkg.to_vector(&got).unwrap(), &want) < 1e-9);
                assert!(pkg.size(&got) <= pkg.size(&dd));
            }
            (Err(Error::ZeroState), None) => zeroed += 1,
            (got, want) => panic!("mismatch: {got:?} vs {}", want.is_some()),
        }
    }
    assert!(zeroed > 0);
}

#[test]
fn sampling_fidelity_is_kept_mass() {
    let mut rng = SplitMix64::seed_from_u64(32);
    let mut pkg = Package::new();
    for k in 0..30 {
        let v = random_structured_state(6, 0.2, &mut rng);
        let dd = pkg.from_vector(&v).unwrap();
        let amps = pkg.to_vector(&dd).unwrap();
        for walks in [10, 100, 10_000] {
            let (out, report) = approx::approx_sampling(&mut pkg, &dd, walks, k).unwrap();
            let got = pkg.to_vector(&out).unwrap();
            assert!((report.attained_fidelity - kept_mass(&amps, &got)).abs() < 1e-9);
            assert!((report.attained_fidelity - dense_fidelity(&amps, &got)).abs() < 1e-9);
            assert!((norm_sqr(&got) - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn threshold_doomed_grows_with_tau() {
    let mut rng = SplitMix64::seed_from_u64(33);
    let mut pkg = Package::new();
    for k in 0..20 {
        let v = random_state(6, &mut rng);
        let dd = pkg.from_vector(&v).unwrap();
        let counts = analysis::sample_paths(&pkg, &dd, 500, k).unwrap();
        let mut prev = HashSet::new();
        for tau in 0..40 {
            let doomed = approx::threshold_doomed(&pkg, &dd, &counts, tau);
            assert!(prev.is_subset(&doomed));
            for &id in &doomed {
                assert!(counts.get(id) <= tau);
            }
            prev = doomed;
        }
    }
}

#[test]
fn target_fidelity_guarantee() {
    let mut rng = SplitMix64::seed_from_u64(34);
    let mut pkg = Package::new();
    for k in 0..200 {
        let v = if k % 2 == 0 { random_state(7, &mut rng) } else { random_structured_state(7, 0.3, &mut rng) };
        let dd = pkg.from_vector(&v).unwrap();
        let amps = pkg.to_vector(&dd).unwrap();
        let contrib = analysis::contributions(&pkg, &dd);
        for f in [0.5, 0.9, 0.99] {
            let (out, report) = approx::approx_target_fidelity(&mut pkg, &dd, f, LevelStrategy::Best).unwrap();
            let got = pkg.to_vector(&out).unwrap();
            assert!(report.attained_fidelity >= f);
            assert!((report.attained_fidelity - kept_mass(&amps, &got)).abs() < 1e-9);
            assert!(report.approx_size <= report.orig_size);

            // The eliminated nodes are the cheapest prefix of the chosen level.
            let level = report.level.unwrap();
            let mut masses: Vec<f64> = analysis::nodes_by_level(&pkg, &dd)[&level].iter().map(|id| contrib[id]).collect();
            masses.sort_by(f64::total_cmp);
            let removed: f64 = masses[..report.eliminated].iter().sum();
            assert!((report.attained_fidelity - (1.0 - removed)).abs() < 1e-9);
        }
    }
}

#[test]
fn per_level_guarantee_on_random_states() {
    let mut rng = SplitMix64::seed_from_u64(35);
    let mut pkg = Package::new();
    let n = 7;
    let (mut cases, mut above_f) = (0, 0);
    for k in 0..200 {
        let v = if k % 2 == 0 { random_state(n, &mut rng) } else { random_structured_state(n, 0.3, &mut rng) };
        let dd = pkg.from_vector(&v).unwrap();
        let amps = pkg.to_vector(&dd).unwrap();
        for f in [0.5, 0.9, 0.99] {
            let (out, report) = approx::approx_per_level(&mut pkg, &dd, f).unwrap();
            let got = pkg.to_vector(&out).unwrap();
            assert!(report.attained_fidelity >= f.powi(n as i32 - 1));
            assert!((report.attained_fidelity - kept_mass(&amps, &got)).abs() < 1e-9);
            assert!(report.approx_size <= report.orig_size);
            cases += 1;
            if report.attained_fidelity >= f {
                above_f += 1;
            }
        }
    }
    println!("per-level reached f in {above_f}/{cases} cases");
}

#[test]
fn schemes_are_deterministic() {
    let mut rng = SplitMix64::seed_from_u64(36);
    let v = random_structured_state(7, 0.2, &mut rng);
    let schemes = [
        Scheme::Sampling { traversals: 300, seed: 5 },
        Scheme::Threshold { traversals: 300, tau: 4, seed: 5 },
        Scheme::TargetFidelity { fidelity: 0.9, level: LevelStrategy::Best },
        Scheme::TargetFidelity { fidelity: 0.9, level: LevelStrategy::Fixed(3) },
        Scheme::FidelityPerLevel { fidelity: 0.95 },
    ];
    for scheme in schemes {
        let run = || {
            let mut pkg = Package::new();
            let dd = pkg.from_vector(&v).unwrap();
            let (out, report) = approx::approximate(&mut pkg, &dd, &scheme).unwrap();
            (pkg.to_vector(&out).unwrap(), report)
        };
        let (a, ra) = run();
        let (b, rb) = run();
        assert_eq!(ra, rb);
        assert_eq!(a, b);
        assert!((norm_sqr(&a) - 1.0).abs() < 1e-9);
    }
}
