//! The key-length lower bound: encrypting half of a maximally entangled
//! state with `|K|` keys leaves fidelity `F^2 <= |K| 2^{-2n}` to any product.

use rand::seq::index::sample;
use rand::Rng;

use crate::cipher::{make_pauli_subset, KeyedCipher};
use crate::error::{Error, Result};
use crate::linalg::{fidelity, max_entangled, random_state_with, trace_distance, CMatrix, DensityOperator, Layout, C64};
use crate::pauli::PauliString;

#[derive(Clone, Copy, Debug)]
pub struct LowerBoundResult {
    pub n_qubits: usize,
    pub key_count: usize,
    /// `F(E(Phi), Omega (x) I/2^n)^2`.
    pub fidelity_sq: f64,
    /// `|K| 2^{-2n}`.
    pub bound: f64,
    /// `||E(Phi) - Omega (x) I/2^n||_1`.
    pub delta: f64,
    /// `Delta >= 2 (1 - F)`.
    pub fuchs_van_de_graaf: bool,
    /// `|K| < 2^{2n} (1 - epsilon)`: the key is too short for epsilon.
    pub predicted_failure: bool,
    /// `2 (1 - sqrt(|K| 2^{-2n})) > epsilon`: failure forced through
    /// `Delta >= 2 (1 - F)` even when the key count test above is not met.
    pub implied_failure: bool,
    /// `Delta > epsilon`.
    pub fails: bool,
}

impl LowerBoundResult {
    pub fn holds(&self) -> bool {
        self.fidelity_sq <= self.bound + crate::tol::REPORT
    }
}

/// Runs the experiment on `Phi+` between the plaintext and an equal-size `E`.
pub fn lower_bound_experiment(c: &KeyedCipher, epsilon: f64) -> Result<LowerBoundResult> {
    let phi = max_entangled(c.n())?.relabel(&[c.plaintext_label(), "E"])?;
    lower_bound_on(c, &phi, epsilon)
}

/// As [`lower_bound_experiment`], for a caller-supplied input that must be
/// `Phi+` on `A (x) E`.
pub fn lower_bound_on(c: &KeyedCipher, rho: &DensityOperator, epsilon: f64) -> Result<LowerBoundResult> {
    let n = c.n();
    let expected = max_entangled(n)?.relabel(&[c.plaintext_label(), "E"])?;
    if rho.layout() != expected.layout() || rho.max_abs_diff(&expected)? > crate::tol::EQ {
        return Err(Error::InvalidArgument("input must be the maximally entangled state".into()));
    }
    if !(0.0..=2.0).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0, 2]")));
    }
    let avg = c.average_channel(rho)?;
    let e_mixed = DensityOperator::maximally_mixed(Layout::single("E", 1 << n)?);
    let ideal = avg.omega.tensor(&e_mixed)?;
    let f = fidelity(&avg.rho_out, &ideal)?;
    let delta = trace_distance(&avg.rho_out, &ideal)?;
    let k = c.key_count();
    let dd = (1u64 << (2 * n)) as f64;
    Ok(LowerBoundResult {
        n_qubits: n,
        key_count: k,
        fidelity_sq: f * f,
        bound: k as f64 / dd,
        delta,
        fuchs_van_de_graaf: delta >= 2.0 * (1.0 - f) - crate::tol::EQ,
        predicted_failure: (k as f64) < dd * (1.0 - epsilon),
        implied_failure: 2.0 * (1.0 - (k as f64 / dd).sqrt()) > epsilon,
        fails: delta > epsilon,
    })
}

/// Cipher keyed by `key_count` distinct Pauli strings drawn uniformly.
pub fn random_pauli_subset<R: Rng + ?Sized>(n: usize, key_count: usize, rng: &mut R) -> Result<KeyedCipher> {
    let total = 1usize << (2 * n);
    if key_count == 0 || key_count > total {
        return Err(Error::InvalidArgument(format!("key count {key_count} outside 1..={total}")));
    }
    let mask = (1u64 << n) - 1;
    let keys = sample(rng, total, key_count)
        .into_iter()
        .map(|v| PauliString::from_ints(v as u64 >> n, v as u64 & mask, n))
        .collect::<Result<Vec<_>>>()?;
    make_pauli_subset(n, keys)
}

/// `sum_k p_k omega_k^{AE} (x) |k><k|^K` with random components.
pub fn random_ccq_state<R: Rng + ?Sized>(
    inner: &Layout,
    key_count: usize,
    max_rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    if key_count == 0 {
        return Err(Error::InvalidArgument("need at least one key".into()));
    }
    let probs = super::adversary::simplex(key_count, rng);
    let d = inner.total_dim();
    let layout = inner.concat(&Layout::single("K", key_count)?)?;
    let mut m = CMatrix::zeros(d * key_count, d * key_count);
    for (k, p) in probs.iter().enumerate() {
        let rank = rng.random_range(1..=max_rank.min(d));
        let s = random_state_with(inner.clone(), rank, rng)?;
        let mut proj = CMatrix::zeros(key_count, key_count);
        proj[(k, k)] = C64::new(*p, 0.0);
        m += s.matrix().kronecker(&proj);
    }
    DensityOperator::new(m, layout)
}
