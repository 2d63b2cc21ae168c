mod common;

use common::*;
use proptest::prelude::*;
use rocn_core::bounds::{classical_bound, epping_bound, quantum_bound, SearchOptions};
use rocn_core::clifford::{
    bell_value, format_complex, max_entangled_state, parse_complex, reference_strategy,
    verify_saturation, Strategy,
};
use rocn_core::hadamard::{load_hadamard, optimized_excess, save_hadamard, sylvester};
use rocn_core::numerics::{
    hermitian_eigenvalues, kron, partial_transpose_last_qubit, DenseMatrix, C64,
};
use rocn_core::rocn::{format_matrix_text, parse_matrix_text, synthesize_from_row_norms, DEFAULT_TOL};
use rocn_core::selftest::selftest_verdict;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 48, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), p in 1usize..4, q in 1usize..4) {
        let mut r = rng(seed);
        let (a, c) = (random_matrix(&mut r, p, p), random_matrix(&mut r, p, p));
        let (b, d) = (random_matrix(&mut r, q, q), random_matrix(&mut r, q, q));
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), qubits in 1usize..4) {
        let mut r = rng(seed);
        let d = 1 << qubits;
        let m = random_matrix(&mut r, d, d);
        let twice = partial_transpose_last_qubit(&partial_transpose_last_qubit(&m, qubits).unwrap(), qubits).unwrap();
        prop_assert_eq!(twice, m);
    }

    #[test]
    fn eigenvalues_are_unitarily_invariant(seed in any::<u64>(), d in 1usize..6) {
        let mut r = rng(seed);
        let x = random_matrix(&mut r, d, d);
        let h = &x + &x.dagger();
        let u = random_involution(&mut r, d);
        let conj = &(&u * &h) * &u.dagger();
        let e1 = hermitian_eigenvalues(&h).unwrap();
        let e2 = hermitian_eigenvalues(&conj).unwrap();
        for (a, b) in e1.iter().zip(&e2) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn flip_identity(seed in any::<u64>(), d in 1usize..9) {
        let mut r = rng(seed);
        let o = random_matrix(&mut r, d, d);
        let phi = max_entangled_state(d).unwrap();
        let id = DenseMatrix::identity(d);
        let left = kron(&o, &id).mul_vec(&phi);
        let right = kron(&id, &o.transpose()).mul_vec(&phi);
        let diff = left.iter().zip(&right).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(diff <= 1e-12);
    }

    #[test]
    fn classical_bound_is_monomially_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_truncated_hadamard(&mut r, 4);
        let g = random_monomial(&mut r, &h);
        let a = classical_bound(&h, SearchOptions::default()).unwrap();
        let b = classical_bound(&g, SearchOptions::default()).unwrap();
        prop_assert_eq!(a.integer_value, b.integer_value);
    }

    #[test]
    fn bound_ordering(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_rocn(&mut r, 6, 10);
        let rep = classical_bound(&h, SearchOptions::default()).unwrap();
        prop_assert!(rep.beta_c <= quantum_bound(&h) + 1e-9);
        prop_assert!(quantum_bound(&h) <= epping_bound(&h) + 1e-9);
        prop_assert!(rep.gap >= -1e-9);
    }

    #[test]
    fn thread_count_is_irrelevant(seed in any::<u64>(), threads in 1usize..5) {
        let mut r = rng(seed);
        let h = random_rocn(&mut r, 7, 10);
        let a = classical_bound(&h, SearchOptions { threads: 1, force_general: false }).unwrap();
        let b = classical_bound(&h, SearchOptions { threads, force_general: false }).unwrap();
        prop_assert_eq!(a.beta_c.to_bits(), b.beta_c.to_bits());
        prop_assert_eq!(a.optimal_a, b.optimal_a);
    }

    #[test]
    fn selftest_verdict_is_monomially_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = if seed % 2 == 0 { random_rocn(&mut r, 5, 10) } else { random_truncated_hadamard(&mut r, 3) };
        let g = random_monomial(&mut r, &h);
        let a = selftest_verdict(&h).unwrap();
        let b = selftest_verdict(&g).unwrap();
        prop_assert_eq!(a.rank, b.rank);
        prop_assert_eq!(a.verdict, b.verdict);
        if a.full_column_rank {
            prop_assert!(a.enough_settings);
        }
    }

    #[test]
    fn synthesis_hits_requested_norms(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = 1 + (seed % 6) as usize;
        let n = m + (seed / 7 % 5) as usize;
        let norms = random_row_norms(&mut r, m, n);
        let h = synthesize_from_row_norms(&norms, n).unwrap();
        for (got, want) in h.row_norms_squared().iter().zip(&norms) {
            prop_assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn random_strategies_stay_below_quantum_bound(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_rocn(&mut r, 4, 6);
        let d = 1 + (seed % 4) as usize;
        let alice = (0..h.m()).map(|_| random_involution(&mut r, d)).collect();
        let bob = (0..h.n()).map(|_| random_involution(&mut r, d)).collect();
        let s = Strategy::new(random_state(&mut r, d), alice, bob).unwrap();
        prop_assert!(bell_value(&h, &s).unwrap() <= h.n() as f64 + 1e-9);
        if d <= 4 {
            let rep = verify_saturation(&h, &s, 1e-9).unwrap();
            prop_assert!(rep.sos_min_eigenvalue.unwrap() >= -1e-9);
        }
    }

    #[test]
    fn reference_strategy_saturates(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_rocn(&mut r, 5, 8);
        let s = reference_strategy(&h).unwrap();
        let rep = verify_saturation(&h, &s, 1e-9).unwrap();
        prop_assert!(rep.saturated);
        prop_assert!((rep.bell_value - h.n() as f64).abs() < 1e-8);
    }

    #[test]
    fn matrix_text_roundtrip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = if seed % 2 == 0 { random_rocn(&mut r, 4, 6) } else { random_truncated_hadamard(&mut r, 3) };
        let text = format_matrix_text(&h);
        let back = parse_matrix_text(&text).unwrap().into_rocn(DEFAULT_TOL).unwrap();
        prop_assert_eq!(back.exact().is_some(), h.exact().is_some());
        prop_assert!(back.matrix().max_abs_diff(h.matrix()) == 0.0);
    }

    #[test]
    fn complex_format_roundtrip(re in -1e6f64..1e6, im in -1e6f64..1e6) {
        let z = C64::new(re, im);
        prop_assert_eq!(parse_complex(&format_complex(z)), Some(z));
    }

    #[test]
    fn optimized_excess_is_monomially_invariant(seed in any::<u64>(), k in 1u32..4) {
        let mut r = rng(seed);
        let had = sylvester(k);
        let t = random_hadamard_monomial(&mut r, &had);
        prop_assert_eq!(optimized_excess(&had, 0).unwrap().sigma_opt, optimized_excess(&t, 0).unwrap().sigma_opt);
        prop_assert_eq!(load_hadamard(&save_hadamard(&t)).unwrap(), t);
    }
}
