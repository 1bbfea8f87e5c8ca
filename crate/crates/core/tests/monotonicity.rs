//! Distance behaviour of Pauli ciphers as the key set grows.

use proptest::prelude::*;

use entroq::cipher::{make_full_pad, make_pauli_subset};
use entroq::harness::indist_distance;
use entroq::linalg::random_state;
use entroq::pauli::PauliString;
use entroq::{DensityOperator, Layout};

/// XOR closure of `gens` in the `2n`-bit symplectic representation.
fn subgroup(gens: &[u64], n: usize) -> Vec<PauliString> {
    let mut elems = vec![0u64];
    for &g in gens {
        if elems.contains(&g) {
            continue;
        }
        let shifted: Vec<u64> = elems.iter().map(|e| e ^ g).collect();
        elems.extend(shifted);
    }
    let mask = (1u64 << n) - 1;
    elems.into_iter().map(|v| PauliString::from_ints(v >> n, v & mask, n).unwrap()).collect()
}

fn chain_distances(gens: &[u64], n: usize, rho: &DensityOperator) -> Vec<f64> {
    (0..=gens.len())
        .map(|k| {
            let c = make_pauli_subset(n, subgroup(&gens[..k], n)).unwrap();
            indist_distance(&c, rho).unwrap()
        })
        .collect()
}

#[test]
fn qubit_chain_decreases_to_zero() {
    let rho = random_state(Layout::new([("A", 2), ("E", 2)]).unwrap(), 2, 3).unwrap();
    // X, then Z
    let d = chain_distances(&[0b10, 0b01], 1, &rho);
    assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{d:?}");
    assert!(d[2] < 1e-12);
    assert!((d[2] - indist_distance(&make_full_pad(1).unwrap(), &rho).unwrap()).abs() < 1e-12);
}

#[test]
fn arbitrary_nested_sets_can_increase_distance() {
    let zero = DensityOperator::basis(Layout::new([("A", 2), ("E", 2)]).unwrap(), 0).unwrap();
    let ix = make_pauli_subset(1, vec![PauliString::identity(1), PauliString::from_ints(1, 0, 1).unwrap()]).unwrap();
    let ixz = make_pauli_subset(
        1,
        vec![
            PauliString::identity(1),
            PauliString::from_ints(1, 0, 1).unwrap(),
            PauliString::from_ints(0, 1, 1).unwrap(),
        ],
    )
    .unwrap();
    // {I, X} maps |0> to I/2 exactly; adding Z biases the average back toward |0>
    assert!(indist_distance(&ix, &zero).unwrap() < 1e-12);
    assert!((indist_distance(&ixz, &zero).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn subgroup_chains_never_increase_distance(
        gens in proptest::collection::vec(1u64..16, 1..5),
        rank in 1usize..=16,
        seed: u64,
    ) {
        let rho = random_state(Layout::new([("A", 4), ("E", 4)]).unwrap(), rank, seed).unwrap();
        let d = chain_distances(&gens, 2, &rho);
        prop_assert!(d.windows(2).all(|w| w[1] <= w[0] + 1e-10), "{:?}", d);
    }
}
