//! Indistinguishability distance and the key-length bounds of the two ciphers.

use crate::cipher::{CipherKind, KeyedCipher};
use crate::error::{Error, Result};
use crate::gf2::measure_bias;
use crate::linalg::{trace_norm_unchecked, CMatrix, DensityOperator, HermitianOperator, Layout};
use crate::minentropy::{cond_min_entropy, renner_norm_bound, SolverOptions};

use super::report::{ExperimentReport, Status};

/// Entropy values are floored to this grid before being used as `t`.
pub const T_GRID: f64 = 1e-6;

/// Slack allowed between a claimed and a measured entropy floor.
pub const T_SLACK: f64 = 1e-6;

/// `t` rounded down to the reporting grid.
pub fn floor_entropy(h: f64) -> f64 {
    (h / T_GRID).floor() * T_GRID
}

/// `Omega_i (x) rho^E` for every sector, in the subsystem order of `rho`.
fn ideal_sectors(c: &KeyedCipher, rho: &DensityOperator) -> Result<Vec<CMatrix>> {
    let label = c.plaintext_label();
    let rho_e = rho.partial_trace(&[label])?;
    let a_layout = Layout::single(label, 1 << c.n())?;
    let order: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    c.omega_sectors()?
        .into_iter()
        .map(|om| {
            let prod = HermitianOperator::from_raw(om, a_layout.clone()).tensor(&rho_e)?;
            Ok(prod.permute(&order)?.into_matrix())
        })
        .collect()
}

/// Per-sector differences `E(rho)_i - Omega_i (x) rho^E`.
fn difference_sectors(c: &KeyedCipher, rho: &DensityOperator) -> Result<Vec<CMatrix>> {
    let real = c.average_sectors(rho)?;
    let ideal = ideal_sectors(c, rho)?;
    Ok(real.iter().zip(&ideal).map(|(r, i)| r - i).collect())
}

/// `Delta = ||E(rho) - Omega (x) rho^E||_1` with `Omega = E(I/d_A)`.
pub fn indist_distance(c: &KeyedCipher, rho: &DensityOperator) -> Result<f64> {
    let diffs = difference_sectors(c, rho)?;
    let s = diffs.len() as f64;
    Ok(diffs.iter().map(trace_norm_unchecked).sum::<f64>() / s)
}

/// The three quantities of the delta-biased chain
/// `Delta <= sqrt(tr sigma tr(S s S s)) <= delta sqrt(d_A 2^-t)`.
#[derive(Clone, Copy, Debug)]
pub struct RennerChain {
    pub delta: f64,
    pub renner_rhs: f64,
    pub entropy_bound: f64,
}

impl RennerChain {
    pub fn is_ordered(&self) -> bool {
        let tol = crate::tol::REPORT;
        self.delta <= self.renner_rhs + tol && self.renner_rhs <= self.entropy_bound + tol
    }
}

/// Outcome of a single bound check.
#[derive(Clone, Debug)]
pub struct BoundCheck {
    /// Entropy measured by the solver.
    pub h_measured: f64,
    /// Entropy floor the bound was evaluated at.
    pub t: f64,
    pub delta: f64,
    pub bound: f64,
    pub status: Status,
    pub renner: Option<RennerChain>,
    /// Whether `log|K|` reaches the threshold for the requested epsilon.
    pub threshold_met: bool,
}

impl BoundCheck {
    pub fn report(&self, scenario_id: &str, trial: usize, seed: u64, epsilon: Option<f64>) -> ExperimentReport {
        let r = ExperimentReport::checked(scenario_id, trial, seed, Some(self.t), epsilon, self.delta, self.bound);
        match self.status {
            Status::PreconditionViolated => r.into_precondition_violated(),
            _ => r,
        }
    }
}

fn resolve_t(h: f64, t_claimed: Option<f64>) -> (f64, bool) {
    match t_claimed {
        Some(t) => (t, h >= t - T_SLACK),
        None => (floor_entropy(h), true),
    }
}

fn status_for(ok_pre: bool, pass: bool) -> Status {
    match (ok_pre, pass) {
        (false, _) => Status::PreconditionViolated,
        (true, true) => Status::Pass,
        (true, false) => Status::Fail,
    }
}

/// Exact bias of the key multiset of a Pauli-mask cipher.
pub fn key_set_bias(c: &KeyedCipher) -> Result<f64> {
    match c.kind() {
        CipherKind::PauliMask { keys } => {
            let strings: Vec<_> = keys.iter().map(|p| p.to_concat()).collect();
            measure_bias(&strings)
        }
        CipherKind::XorUniversal { .. } => {
            Err(Error::InvalidArgument("bias is defined for Pauli-mask ciphers only".into()))
        }
    }
}

/// Checks `Delta <= delta sqrt(2^{n-t})` for a delta-biased Pauli cipher,
/// with `delta` the exact bias of its key set, and evaluates the
/// intermediate norm bound.
///
/// Without `t_claimed` the solver's entropy (floored) is used.
pub fn as_bound_check(
    c: &KeyedCipher,
    rho: &DensityOperator,
    t_claimed: Option<f64>,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    let bias = key_set_bias(c)?;
    let label = c.plaintext_label();
    let h = cond_min_entropy(rho, &[label], opts)?;
    let (t, ok_pre) = resolve_t(h.value, t_claimed);
    let n = c.n() as f64;
    let bound = bias * 2f64.powf((n - t) / 2.0);
    let diff = difference_sectors(c, rho)?.pop().expect("one sector");
    let delta = trace_norm_unchecked(&diff);

    // sigma = I_A (x) sigma*_E in the subsystem order of rho.
    let d_a = 1usize << c.n();
    let sigma = HermitianOperator::identity(Layout::single(label, d_a)?)
        .tensor(&h.sigma_star)?
        .permute(&rho.labels().iter().map(String::as_str).collect::<Vec<_>>())?;
    let s = HermitianOperator::from_raw(diff, rho.layout().clone());
    let (_, renner_rhs) = renner_norm_bound(&s, &sigma)?;
    let entropy_bound = bias * (d_a as f64 * 2f64.powf(-h.value)).sqrt();

    let pass = delta <= bound + crate::tol::REPORT;
    Ok(BoundCheck {
        h_measured: h.value,
        t,
        delta,
        bound,
        status: status_for(ok_pre, pass),
        renner: Some(RennerChain { delta, renner_rhs, entropy_bound }),
        threshold_met: false,
    })
}

/// `log|K| >= n - t + 2 log(1/epsilon)`.
pub fn xu_threshold_met(n: usize, t: f64, key_count: usize, epsilon: f64) -> bool {
    (key_count as f64).log2() >= n as f64 - t + 2.0 * (1.0 / epsilon).log2() - 1e-12
}

/// Checks `Delta <= sqrt(2^{n-t}/|K|)` for the XOR-universal cipher and,
/// when `log|K|` reaches the threshold for `epsilon`, also `Delta <= epsilon`.
pub fn xu_bound_check(
    c: &KeyedCipher,
    rho: &DensityOperator,
    t_claimed: Option<f64>,
    epsilon: Option<f64>,
    opts: &SolverOptions,
) -> Result<BoundCheck> {
    if !matches!(c.kind(), CipherKind::XorUniversal { .. }) {
        return Err(Error::InvalidArgument("expected an XOR-universal cipher".into()));
    }
    if let Some(e) = epsilon {
        if !(e > 0.0) {
            return Err(Error::InvalidArgument(format!("epsilon {e} must be positive")));
        }
    }
    let h = cond_min_entropy(rho, &[c.plaintext_label()], opts)?;
    let (t, ok_pre) = resolve_t(h.value, t_claimed);
    let n = c.n();
    let k = c.key_count() as f64;
    let proof_bound = (2f64.powf(n as f64 - t) / k).sqrt();
    let threshold_met = epsilon.is_some_and(|e| xu_threshold_met(n, t, c.key_count(), e));
    let bound = match epsilon {
        Some(e) if threshold_met => proof_bound.min(e),
        _ => proof_bound,
    };
    let delta = indist_distance(c, rho)?;
    let pass = delta <= bound + crate::tol::REPORT;
    Ok(BoundCheck {
        h_measured: h.value,
        t,
        delta,
        bound,
        status: status_for(ok_pre, pass),
        renner: None,
        threshold_met,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;
    use crate::cipher::{make_ambainis_smith, make_full_pad, make_xor_universal_default};
    use crate::gf2::{aghp_with_degree, DeltaBiasedSet};
    use crate::linalg::{max_entangled, random_state, trace_distance};
    use approx::assert_abs_diff_eq;

    fn ae(n: usize, de: usize) -> Layout {
        Layout::new([("A", 1 << n), ("E", de)]).unwrap()
    }

    #[test]
    fn pad_distance_vanishes() {
        let c = make_full_pad(1).unwrap();
        for seed in 0..5 {
            let rho = random_state(ae(1, 2), 2, seed).unwrap();
            assert!(indist_distance(&c, &rho).unwrap() < 1e-10);
        }
    }

    #[test]
    fn identity_cipher_on_basis_state() {
        let set = DeltaBiasedSet::explicit(2, vec![BitString::zeros(2)]).unwrap();
        let c = make_ambainis_smith(1, &set).unwrap();
        let e = random_state(Layout::single("E", 2).unwrap(), 2, 1).unwrap();
        let rho = DensityOperator::basis(Layout::single("A", 2).unwrap(), 0).unwrap().tensor(&e).unwrap();
        assert_abs_diff_eq!(indist_distance(&c, &rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn distance_matches_explicit_norm() {
        let c = make_xor_universal_default(1, 2).unwrap();
        let rho = random_state(ae(1, 2), 3, 4).unwrap();
        let avg = c.average_channel(&rho).unwrap();
        let ideal = avg.omega.tensor(&rho.partial_trace(&["A"]).unwrap()).unwrap();
        let direct = trace_distance(&avg.rho_out, &ideal).unwrap();
        assert_abs_diff_eq!(indist_distance(&c, &rho).unwrap(), direct, epsilon = 1e-12);
    }

    #[test]
    fn distance_independent_of_subsystem_order() {
        let c = make_ambainis_smith(1, &aghp_with_degree(2, 1).unwrap()).unwrap();
        let rho = random_state(ae(1, 3), 2, 8).unwrap();
        let swapped = rho.permute(&["E", "A"]).unwrap();
        assert_abs_diff_eq!(
            indist_distance(&c, &rho).unwrap(),
            indist_distance(&c, &swapped).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn as_check_on_uniform_and_entangled() {
        let opts = SolverOptions::default();
        let c = make_ambainis_smith(1, &aghp_with_degree(2, 1).unwrap()).unwrap();
        let e = random_state(Layout::single("E", 2).unwrap(), 2, 1).unwrap();
        let flat = DensityOperator::maximally_mixed(Layout::single("A", 2).unwrap()).tensor(&e).unwrap();
        let r = as_bound_check(&c, &flat, None, &opts).unwrap();
        assert!(r.delta < 1e-12);
        assert_eq!(r.status, Status::Pass);

        let phi = max_entangled(1).unwrap();
        let r = as_bound_check(&c, &phi, None, &opts).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.renner.unwrap().is_ordered());
    }

    #[test]
    fn as_check_flags_unmet_precondition() {
        let c = make_ambainis_smith(1, &aghp_with_degree(2, 1).unwrap()).unwrap();
        let phi = max_entangled(1).unwrap();
        let r = as_bound_check(&c, &phi, Some(0.5), &SolverOptions::default()).unwrap();
        assert_eq!(r.status, Status::PreconditionViolated);
        assert!(!r.report("x", 0, 0, None).pass);
    }

    #[test]
    fn renner_chain_on_random_states() {
        let opts = SolverOptions::default();
        let c = make_ambainis_smith(2, &aghp_with_degree(4, 2).unwrap()).unwrap();
        for seed in 0..5 {
            let rho = random_state(ae(2, 2), 1 + seed as usize, seed).unwrap();
            let r = as_bound_check(&c, &rho, None, &opts).unwrap();
            assert_eq!(r.status, Status::Pass);
            assert!(r.renner.unwrap().is_ordered(), "{:?}", r.renner);
        }
    }

    #[test]
    fn xu_checks() {
        let opts = SolverOptions::default();
        // Product input, t = 1, |K| = 2: bound 1/sqrt(2).
        let c = make_xor_universal_default(1, 2).unwrap();
        let e = random_state(Layout::single("E", 2).unwrap(), 1, 2).unwrap();
        let flat = DensityOperator::maximally_mixed(Layout::single("A", 2).unwrap()).tensor(&e).unwrap();
        let r = xu_bound_check(&c, &flat, Some(1.0), None, &opts).unwrap();
        assert_abs_diff_eq!(r.bound, 0.5f64.sqrt(), epsilon = 1e-12);
        assert_eq!(r.status, Status::Pass);

        let full = make_xor_universal_default(1, 4).unwrap();
        let phi = max_entangled(1).unwrap();
        let r = xu_bound_check(&full, &phi, Some(-1.0), Some(1.0), &opts).unwrap();
        assert_abs_diff_eq!(r.bound, 1.0, epsilon = 1e-12);
        assert!(r.threshold_met);
        assert_eq!(r.status, Status::Pass);
        let r = xu_bound_check(&full, &phi, Some(-1.0), Some(0.5), &opts).unwrap();
        assert!(!r.threshold_met);
        assert!(r.delta <= 0.5 + 1e-12);
    }

    #[test]
    fn threshold_arithmetic() {
        assert!(xu_threshold_met(1, -1.0, 16, 0.5));
        assert!(!xu_threshold_met(1, -1.0, 8, 0.5));
        assert!(xu_threshold_met(1, 1.0, 1, 1.0));
    }

    #[test]
    fn floor_grid() {
        assert!((floor_entropy(0.5) - 0.5).abs() <= T_GRID);
        assert!(floor_entropy(-0.9999999) <= -0.9999999);
        assert!(floor_entropy(0.1234567) <= 0.1234567);
    }
}
