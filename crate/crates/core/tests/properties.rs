//! Property-based invariants across modules.

use proptest::prelude::*;

use entroq::cipher::{make_ambainis_smith, make_full_pad, make_xor_universal_default, KeyedCipher};
use entroq::gf2::{aghp_with_degree, measure_bias};
use entroq::harness::report::{from_csv, from_ndjson, to_csv, to_ndjson};
use entroq::harness::{helstrom_on_cipher, indist_distance, ExperimentReport};
use entroq::linalg::random_state;
use entroq::minentropy::{cond_min_entropy, SolverOptions};
use entroq::pauli::{pauli_conjugate, pauli_decompose, pauli_reconstruct, PauliString};
use entroq::{DensityOperator, Layout};

fn cipher(kind: u8, n: usize) -> KeyedCipher {
    match kind {
        0 => make_full_pad(n).unwrap(),
        1 => make_ambainis_smith(n, &aghp_with_degree(2 * n, 2).unwrap()).unwrap(),
        _ => make_xor_universal_default(n, 2).unwrap(),
    }
}

fn ae_state(n: usize, de: usize, rank: usize, seed: u64) -> DensityOperator {
    let layout = Layout::new([("A", 1 << n), ("E", de)]).unwrap();
    let rank = 1 + rank % layout.total_dim();
    random_state(layout, rank, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn decrypt_inverts_encrypt(kind in 0u8..3, n in 1usize..=2, rank in 0usize..16, seed: u64, key in 0usize..64) {
        let c = cipher(kind, n);
        let rho = ae_state(n, 2, rank, seed);
        let k = key % c.key_count();
        let back = c.decrypt(k, &c.encrypt(k, &rho).unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(&rho).unwrap() < 1e-10);
    }

    #[test]
    fn averaged_ciphertext_is_a_state(kind in 0u8..3, n in 1usize..=2, rank in 0usize..16, seed: u64) {
        let c = cipher(kind, n);
        let rho = ae_state(n, 2, rank, seed);
        let avg = c.average_channel(&rho).unwrap();
        prop_assert!((avg.rho_out.trace() - 1.0).abs() < 1e-10);
        prop_assert!(avg.rho_out.min_eigenvalue() > -1e-10);
        let d = indist_distance(&c, &rho).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&d));
    }

    #[test]
    fn channel_commutes_with_pauli_on_e(kind in 0u8..3, rank in 0usize..8, seed: u64, x in 0u64..2, z in 0u64..2) {
        let c = cipher(kind, 1);
        let rho = ae_state(1, 2, rank, seed);
        let p = PauliString::from_ints(x, z, 1).unwrap();
        let before = c.average_channel(&pauli_conjugate(&p, &rho, "E").unwrap()).unwrap().rho_out;
        let after = pauli_conjugate(&p, &c.average_channel(&rho).unwrap().rho_out, "E").unwrap();
        prop_assert!(before.max_abs_diff(&after).unwrap() < 1e-12);
    }

    #[test]
    fn helstrom_matches_distance(kind in 0u8..2, rank in 0usize..8, seed: u64) {
        let c = cipher(kind, 1);
        let rho = ae_state(1, 2, rank, seed);
        let h = helstrom_on_cipher(&c, &rho).unwrap();
        let d = indist_distance(&c, &rho).unwrap();
        prop_assert!((h.success - (0.5 + d / 4.0)).abs() < 1e-9);
    }

    #[test]
    fn aghp_bias_within_nominal(n in 2usize..=10, m in 1u32..=6) {
        let set = aghp_with_degree(n, m).unwrap();
        prop_assert!(measure_bias(set.strings()).unwrap() <= set.delta_bound() + 1e-12);
    }

    #[test]
    fn pauli_decomposition_round_trips(n in 1usize..=2, de in 1usize..=3, rank in 0usize..24, seed: u64) {
        let rho = ae_state(n, de, rank, seed);
        let back = pauli_reconstruct(&pauli_decompose(rho.as_hermitian(), "A").unwrap()).unwrap();
        prop_assert!(back.max_abs_diff(rho.as_hermitian()).unwrap() < 1e-12);
    }

    #[test]
    fn reports_round_trip(deltas in proptest::collection::vec(0.0f64..2.0, 0..12), seed: u64) {
        let records: Vec<_> = deltas
            .iter()
            .enumerate()
            .map(|(i, &d)| ExperimentReport::checked("p", i, seed, Some(-0.25), Some(0.5), d, 1.0))
            .collect();
        prop_assert_eq!(&from_csv(&to_csv(&records).unwrap()).unwrap(), &records);
        prop_assert_eq!(&from_ndjson(&to_ndjson(&records)).unwrap(), &records);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn min_entropy_within_dimension_bounds(da in 1usize..=3, de in 1usize..=3, rank in 0usize..9, seed: u64) {
        let layout = Layout::new([("A", da), ("E", de)]).unwrap();
        let rho = random_state(layout, 1 + rank % (da * de), seed).unwrap();
        let h = cond_min_entropy(&rho, &["A"], &SolverOptions::default()).unwrap();
        let lo = -((da.min(de)) as f64).log2();
        prop_assert!(h.value <= h.upper_value + 1e-12);
        prop_assert!(h.upper_value - h.value <= 1e-6 + 1e-12);
        prop_assert!(h.value >= lo - 1e-6 && h.value <= (da as f64).log2() + 1e-9);
    }
}
