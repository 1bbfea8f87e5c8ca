//! One function per scenario command. Each is a thin loop over library calls.

use std::time::Instant;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cipher::{make_ambainis_smith, make_full_pad, make_xor_universal_default, KeyedCipher};
use crate::error::{Error, Result};
use crate::gf2::{aghp_construct, aghp_with_degree, measure_bias, DeltaBiasedSet};
use crate::harness::{
    as_bound_check, default_t_grid, gl_reduction, key_length_csv, key_length_table, lower_bound_experiment,
    random_pauli_subset, synthetic_gl_table, xu_bound_check, ExperimentReport, Status,
};
use crate::linalg::{random_state_with, Layout};
use crate::minentropy::{cond_min_entropy, min_entropy_unconditional, SolverOptions};

use super::scenario::{CipherChoice, Command, Scenario};

/// Tolerance for the solver-versus-closed-form comparison.
pub const MIN_ENTROPY_TOL: f64 = 1e-5;
/// Tolerance for decrypt(encrypt(rho)) = rho.
pub const ROUND_TRIP_TOL: f64 = 1e-10;
/// Default epsilon grid for tables and GL demos.
pub const EPSILON_GRID: [f64; 4] = [1.0, 0.5, 0.25, 0.125];
pub const GL_EPSILONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
/// Number of ensemble components in synthetic GL tables.
pub const GL_INDICES: usize = 8;
/// Default AGHP degree when neither `m` nor `delta` is given.
pub const DEFAULT_M: u32 = 2;

/// Records of a run, plus a free-form table for `keylen-table`.
#[derive(Clone, Debug, Default)]
pub struct RunOutput {
    pub records: Vec<ExperimentReport>,
    pub table_csv: Option<String>,
}

/// Seed for trial `trial` of a run with base seed `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_add(trial as u64)
}

pub fn scenario_id(s: &Scenario) -> String {
    s.command.as_str().to_string()
}

/// 0 when every record passes, 1 if any fails, 2 if the only problems are
/// unmet entropy preconditions.
pub fn exit_code(records: &[ExperimentReport]) -> i32 {
    if records.iter().any(|r| r.status == Status::Fail) {
        1
    } else if records.iter().any(|r| r.status == Status::PreconditionViolated) {
        2
    } else {
        0
    }
}

pub fn run(s: &Scenario, jobs: usize) -> Result<RunOutput> {
    info!("running {} with {} trial(s), seed {}", s.command.as_str(), s.trials(), s.seed);
    match s.command {
        Command::KeylenTable => keylen_table(s),
        Command::BiasCheck => Ok(RunOutput { records: vec![bias_check(s)?], table_csv: None }),
        _ => {
            let records = run_trials(s, jobs)?;
            Ok(RunOutput { records, table_csv: None })
        }
    }
}

fn run_trials(s: &Scenario, jobs: usize) -> Result<Vec<ExperimentReport>> {
    let cipher = match s.command {
        Command::EncryptDemo | Command::IndistSweep => Some(build_cipher(s)?),
        Command::LowerBound if s.cipher.is_some() => Some(build_cipher(s)?),
        _ => None,
    };
    let one = |trial: usize| -> Result<ExperimentReport> {
        let seed = trial_seed(s.seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = Instant::now();
        let rec = match s.command {
            Command::MinEntropy => min_entropy_trial(s, trial, seed, &mut rng),
            Command::EncryptDemo => encrypt_trial(s, cipher.as_ref().expect("built"), trial, seed, &mut rng),
            Command::IndistSweep => indist_trial(s, cipher.as_ref().expect("built"), trial, seed, &mut rng),
            Command::LowerBound => lower_bound_trial(s, cipher.as_ref(), trial, seed, &mut rng),
            Command::GlDemo => gl_trial(s, trial, seed, &mut rng),
            Command::BiasCheck | Command::KeylenTable => unreachable!("not a sweep"),
        }?;
        debug!("trial {trial}: delta={} bound={} status={:?}", rec.delta_measured, rec.bound_value, rec.status);
        Ok(rec.with_runtime(start.elapsed().as_secs_f64() * 1e3))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| (0..s.trials()).into_par_iter().map(one).collect())
}

/// The cipher a scenario asks for.
pub fn build_cipher(s: &Scenario) -> Result<KeyedCipher> {
    let n = s.n();
    match s.cipher.ok_or_else(|| Error::InvalidArgument("no cipher given".into()))? {
        CipherChoice::Pad => make_full_pad(n),
        CipherChoice::As => make_ambainis_smith(n, &cipher_set(s)?),
        CipherChoice::Xu => {
            let full = 1u64 << (2 * n);
            let k = match (s.key_count, s.epsilon, s.t) {
                (Some(k), _, _) => k,
                (None, Some(e), Some(t)) => {
                    let bits = (n as f64 - t + 2.0 * (1.0 / e).log2()).ceil().max(0.0);
                    if bits >= (2 * n) as f64 { full } else { 1u64 << bits as u32 }
                }
                _ => full,
            };
            make_xor_universal_default(n, k)
        }
    }
}

/// Delta-biased set on `2n`-bit strings: from `m`, from `delta`, or from
/// `epsilon` and `t` through `delta = epsilon 2^{-(n-t)/2}`.
fn cipher_set(s: &Scenario) -> Result<DeltaBiasedSet> {
    let n = s.n();
    match (s.m, s.delta, s.epsilon, s.t) {
        (Some(m), _, _, _) => aghp_with_degree(2 * n, m),
        (None, Some(d), _, _) => aghp_construct(2 * n, d),
        (None, None, Some(e), Some(t)) => {
            aghp_construct(2 * n, (e * 2f64.powf(-(n as f64 - t) / 2.0)).min(1.0))
        }
        _ => aghp_with_degree(2 * n, DEFAULT_M),
    }
}

/// Random `A (x) E` state with `n`-qubit `A` and `E` and random rank.
fn random_ae<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<crate::linalg::DensityOperator> {
    let d = 1usize << n;
    let layout = Layout::new([("A", d), ("E", d)])?;
    let rank = rng.random_range(1..=d * d);
    random_state_with(layout, rank, rng)
}

fn min_entropy_trial(s: &Scenario, trial: usize, seed: u64, rng: &mut ChaCha8Rng) -> Result<ExperimentReport> {
    let d = 1usize << s.n();
    let ra = random_state_with(Layout::single("A", d)?, rng.random_range(1..=d), rng)?;
    let re = random_state_with(Layout::single("E", d)?, rng.random_range(1..=d), rng)?;
    let rho = ra.tensor(&re)?;
    let h = cond_min_entropy(&rho, &["A"], &SolverOptions::default())?;
    let oracle = min_entropy_unconditional(&ra);
    Ok(ExperimentReport::checked(
        &scenario_id(s),
        trial,
        seed,
        Some(h.value),
        s.epsilon,
        (h.value - oracle).abs(),
        MIN_ENTROPY_TOL,
    ))
}

fn bias_check(s: &Scenario) -> Result<ExperimentReport> {
    let n = s.n();
    let set = match (s.m, s.delta) {
        (Some(m), _) => aghp_with_degree(n, m)?,
        (None, Some(d)) => aghp_construct(n, d)?,
        (None, None) => aghp_with_degree(n, DEFAULT_M)?,
    };
    let bias = measure_bias(set.strings())?;
    info!("AGHP set: {} strings, measured bias {bias}, bound {}", set.len(), set.delta_bound());
    let rec = ExperimentReport::checked(&scenario_id(s), 0, s.seed, s.t, s.epsilon, bias, set.delta_bound());
    Ok(rec.with_runtime(0.0))
}

fn encrypt_trial(
    s: &Scenario,
    c: &KeyedCipher,
    trial: usize,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<ExperimentReport> {
    let rho = random_ae(s.n(), rng)?;
    let key = rng.random_range(0..c.key_count());
    let ct = c.encrypt(key, &rho)?;
    let back = c.decrypt(key, &ct)?;
    let err = back.max_abs_diff(&rho)?;
    Ok(ExperimentReport::checked(&scenario_id(s), trial, seed, s.t, s.epsilon, err, ROUND_TRIP_TOL))
}

fn indist_trial(
    s: &Scenario,
    c: &KeyedCipher,
    trial: usize,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<ExperimentReport> {
    let rho = random_ae(s.n(), rng)?;
    let opts = SolverOptions::default();
    let check = match s.cipher.expect("validated") {
        CipherChoice::Pad | CipherChoice::As => as_bound_check(c, &rho, s.t, &opts)?,
        CipherChoice::Xu => xu_bound_check(c, &rho, s.t, s.epsilon, &opts)?,
    };
    Ok(check.report(&scenario_id(s), trial, seed, s.epsilon))
}

fn lower_bound_trial(
    s: &Scenario,
    c: Option<&KeyedCipher>,
    trial: usize,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<ExperimentReport> {
    let epsilon = s.epsilon.unwrap_or(0.5);
    let random;
    let cipher = match c {
        Some(c) => c,
        None => {
            random = random_pauli_subset(s.n(), s.key_count.unwrap_or(1) as usize, rng)?;
            &random
        }
    };
    let r = lower_bound_experiment(cipher, epsilon)?;
    Ok(ExperimentReport::checked(&scenario_id(s), trial, seed, None, Some(epsilon), r.fidelity_sq, r.bound))
}

fn gl_trial(s: &Scenario, trial: usize, seed: u64, rng: &mut ChaCha8Rng) -> Result<ExperimentReport> {
    let epsilon = s.epsilon.unwrap_or(GL_EPSILONS[trial % GL_EPSILONS.len()]);
    let table = synthetic_gl_table(s.n() as u32, GL_INDICES, epsilon, rng)?;
    let r = gl_reduction(&table)?;
    Ok(ExperimentReport::checked(
        &scenario_id(s),
        trial,
        seed,
        None,
        Some(epsilon),
        r.function_advantage / 2.0,
        r.predicate_advantage,
    ))
}

fn keylen_table(s: &Scenario) -> Result<RunOutput> {
    let n = s.n();
    let t_grid = s.t.map(|t| vec![t]).unwrap_or_else(|| default_t_grid(n));
    let eps_grid = s.epsilon.map(|e| vec![e]).unwrap_or_else(|| EPSILON_GRID.to_vec());
    let rows = key_length_table(n, &t_grid, &eps_grid)?;
    Ok(RunOutput { records: Vec::new(), table_csv: Some(key_length_csv(&rows)?) })
}

