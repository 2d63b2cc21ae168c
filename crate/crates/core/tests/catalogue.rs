#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use common::*;
use rocn_core::bounds::{best_bound_range, classical_bound, SearchOptions};
use rocn_core::hadamard::{
    bundled_catalogue, is_regular, optimized_excess, order16_representatives, remove_row_conjecture,
    HadamardMatrix,
};
use rocn_core::rocn::from_truncated_hadamard;

/// Histogram of `|sum_j H_aj H_bj H_cj H_dj|` over row quadruples, and for the
/// quadruples reaching `n`, how many of them contain each row pair.
fn invariants(h: &HadamardMatrix) -> (BTreeMap<i64, usize>, BTreeMap<usize, usize>) {
    let n = h.order();
    let mut profile = BTreeMap::new();
    let mut pair_hits = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let s: i64 = (0..n)
                        .map(|j| h.entry(a, j) * h.entry(b, j) * h.entry(c, j) * h.entry(d, j))
                        .sum::<i64>()
                        .abs();
                    *profile.entry(s).or_insert(0) += 1;
                    if s == n as i64 {
                        for (x, y) in [(a, b), (a, c), (a, d), (b, c), (b, d), (c, d)] {
                            pair_hits[x][y] += 1;
                        }
                    }
                }
            }
        }
    }
    let mut pairs = BTreeMap::new();
    for x in 0..n {
        for y in x + 1..n {
            *pairs.entry(pair_hits[x][y]).or_insert(0) += 1;
        }
    }
    (profile, pairs)
}

#[test]
fn order16_representatives_are_pairwise_inequivalent() {
    let reps = order16_representatives();
    assert_eq!(reps.len(), 5);
    let sigs: Vec<_> = reps.iter().map(|(_, h)| invariants(h)).collect();
    for i in 0..sigs.len() {
        for k in i + 1..sigs.len() {
            assert_ne!(sigs[i], sigs[k], "{} and {}", reps[i].0, reps[k].0);
        }
    }
    let expected_profiles: [&[(i64, usize)]; 5] = [
        &[(0, 1680), (16, 140)],
        &[(0, 1488), (8, 256), (16, 76)],
        &[(0, 1392), (8, 384), (16, 44)],
        &[(0, 1344), (8, 448), (16, 28)],
        &[(0, 1344), (8, 448), (16, 28)],
    ];
    for ((name, _), (profile, _), want) in zip3(&reps, &sigs, &expected_profiles) {
        let want: BTreeMap<i64, usize> = want.iter().copied().collect();
        assert_eq!(profile, &want, "{name}");
    }
}

fn zip3<'a, A, B, C>(a: &'a [A], b: &'a [B], c: &'a [C]) -> impl Iterator<Item = (&'a A, &'a B, &'a C)> {
    a.iter().zip(b).zip(c).map(|((x, y), z)| (x, y, z))
}

#[test]
fn invariants_survive_monomial_scrambling() {
    let mut rng = rng(21);
    for (name, h) in order16_representatives() {
        let scrambled = random_hadamard_monomial(&mut rng, &h);
        assert_eq!(invariants(&h), invariants(&scrambled), "{name}");
    }
}

#[test]
fn order16_excess_classes() {
    let mut excesses: Vec<i64> = order16_representatives()
        .iter()
        .map(|(_, h)| optimized_excess(h, 0).unwrap().sigma_opt)
        .collect();
    excesses.sort_unstable();
    assert_eq!(excesses, vec![56, 56, 64, 64, 64]);
}

#[test]
fn best_bound_holds_for_bundled_matrices() {
    for (name, h) in bundled_catalogue() {
        let n = h.order();
        if n > 24 {
            continue;
        }
        let rep = optimized_excess(&h, 0).unwrap();
        let (lo, hi) = best_bound_range(n).unwrap();
        let sigma = rep.sigma_opt as f64;
        assert!(lo <= sigma + 1e-9 && sigma <= hi + 1e-9, "{name}: {sigma} not in [{lo}, {hi}]");
        assert!(rep.sigma_opt >= rep.sigma.abs());
    }
}

#[test]
fn saturation_of_best_bound_means_regular_orbit() {
    // Sigma = n sqrt(n) exactly when the optimal signs make the matrix regular.
    for (name, h) in bundled_catalogue() {
        let n = h.order();
        if n > 16 {
            continue;
        }
        let rep = optimized_excess(&h, 0).unwrap();
        let root = (n as f64).sqrt().round() as i64;
        let saturates = root * root == n as i64 && rep.sigma_opt == n as i64 * root;
        let flipped = h
            .transform(
                &(0..n).collect::<Vec<_>>(),
                &(0..n).collect::<Vec<_>>(),
                &rep.optimal_row_signs,
                &rep.optimal_col_signs,
            )
            .unwrap();
        let (regular, _) = is_regular(&flipped);
        assert_eq!(saturates, regular, "{name}");
    }
}

#[test]
fn single_row_truncations_have_a_strict_gap() {
    for (name, h) in bundled_catalogue() {
        let n = h.order();
        if !(4..=20).contains(&n) {
            continue;
        }
        let t = from_truncated_hadamard(&h, &[n - 1]).unwrap();
        let rep = classical_bound(&t, SearchOptions::default()).unwrap();
        assert!(rep.gap > 0.0, "{name}");
    }
}

#[test]
fn truncation_never_exceeds_full_excess() {
    for (name, h) in bundled_catalogue() {
        if h.order() > 20 {
            continue;
        }
        let full = optimized_excess(&h, 0).unwrap().sigma_opt;
        let rep = remove_row_conjecture(&h, 0).unwrap();
        assert!(rep.per_row_excess.iter().all(|&v| v <= full), "{name}");
    }
}
