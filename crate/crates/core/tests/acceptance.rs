//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use entroq::cipher::{make_ambainis_smith, make_full_pad, make_pauli_subset, make_xor_universal_default};
use entroq::gf2::{aghp_with_degree, XorUniversalFamily};
use entroq::harness::{
    as_bound_check, gl_reduction, indist_distance, lower_bound_experiment, random_ccq_state, random_ensemble,
    random_pauli_subset, rho_hat, rho_hat_applicable, synthetic_gl_table, tau_tilde, xu_bound_check, Status,
};
use entroq::linalg::{max_entangled, random_state_with, CMatrix, C64};
use entroq::minentropy::{cond_min_entropy, cond_min_entropy_classical_key, cq_state, SolverOptions};
use entroq::pauli::PauliString;
use entroq::{DensityOperator, Layout};

const H_TOL: f64 = 1e-5;
const PAD_TOL: f64 = 1e-9;
const BOUND_TOL: f64 = 1e-8;
const TIGHT_TOL: f64 = 1e-9;
const GL_TOL: f64 = 1e-9;
const SLACK_TOL: f64 = 1e-5;

type Outcome = Result<String, String>;

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn largest_eigenvalue(m: &CMatrix) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.max()
}

fn trace_norm(m: &CMatrix) -> f64 {
    m.clone().symmetric_eigen().eigenvalues.iter().map(|v| v.abs()).sum()
}

fn state<R: Rng>(dims: &[(&str, usize)], rng: &mut R) -> DensityOperator {
    let layout = Layout::new(dims.iter().copied()).unwrap();
    let rank = rng.random_range(1..=layout.total_dim());
    random_state_with(layout, rank, rng).unwrap()
}

fn h_min(rho: &DensityOperator, label: &str) -> f64 {
    cond_min_entropy(rho, &[label], &SolverOptions::default()).unwrap().value
}

fn min_entropy_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let da = 1 << rng.random_range(1..=2);
        let de = 1 << rng.random_range(1..=2);
        let ra = state(&[("A", da)], &mut rng);
        let re = state(&[("E", de)], &mut rng);
        let oracle = -largest_eigenvalue(ra.matrix()).log2();
        worst = worst.max((h_min(&ra.tensor(&re).unwrap(), "A") - oracle).abs());
    }
    for n in 1..=3 {
        worst = worst.max((h_min(&max_entangled(n).unwrap(), "A") + n as f64).abs());
    }
    for _ in 0..50 {
        let de = 1 << rng.random_range(1..=2);
        let p0: f64 = rng.random_range(0.05..0.95);
        let r0 = state(&[("E", de)], &mut rng);
        let r1 = state(&[("E", de)], &mut rng);
        let diff = r0.matrix() * C64::new(p0, 0.0) - r1.matrix() * C64::new(1.0 - p0, 0.0);
        let guess = 0.5 * (1.0 + trace_norm(&diff));
        let cq = cq_state("X", &[p0, 1.0 - p0], &[r0, r1]).unwrap();
        worst = worst.max((h_min(&cq, "X") + guess.log2()).abs());
    }
    check(worst <= H_TOL, format!("max deviation {worst:.2e} bits over 153 states"))
}

fn perfect_pad() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for n in 1..=2 {
        let pad = make_full_pad(n).unwrap();
        for _ in 0..50 {
            let rho = state(&[("A", 1 << n), ("E", 1 << n)], &mut rng);
            worst = worst.max(indist_distance(&pad, &rho).unwrap());
        }
    }
    check(worst <= PAD_TOL, format!("max Delta {worst:.2e} over 100 states"))
}

fn ambainis_smith_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = 0;
    let mut unordered = 0;
    let mut slack = f64::INFINITY;
    for m in 2..=4 {
        for trial in 0..100 {
            let n = 1 + trial % 2;
            let c = make_ambainis_smith(n, &aghp_with_degree(2 * n, m).unwrap()).unwrap();
            let rho = state(&[("A", 1 << n), ("E", 1 << n)], &mut rng);
            let r = as_bound_check(&c, &rho, None, &SolverOptions::default()).unwrap();
            if r.status != Status::Pass || r.delta > r.bound + BOUND_TOL {
                failures += 1;
            }
            if !r.renner.is_some_and(|ch| ch.is_ordered()) {
                unordered += 1;
            }
            slack = slack.min(r.bound - r.delta);
        }
    }
    check(
        failures == 0 && unordered == 0,
        format!("300 trials, {failures} bound failures, {unordered} unordered chains, min slack {slack:.3e}"),
    )
}

fn xor_universal_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let n = 1;
    let exact = uniformity_deviation(&XorUniversalFamily::new(2 * n as u32).unwrap());
    let mut failures = 0;
    let mut at_threshold = 0;
    for k in [1u64, 2, 4] {
        let c = make_xor_universal_default(n, k).unwrap();
        for _ in 0..50 {
            let rho = state(&[("A", 2), ("E", 2)], &mut rng);
            let r = xu_bound_check(&c, &rho, None, None, &SolverOptions::default()).unwrap();
            let bound = (2f64.powf(n as f64 - r.t) / k as f64).sqrt();
            if r.delta > bound + BOUND_TOL || r.status != Status::Pass {
                failures += 1;
            }
            // epsilon for which log|K| sits exactly at the threshold
            let eps = 2f64.powf(((k as f64).log2() - n as f64 + r.t) / -2.0);
            let e = xu_bound_check(&c, &rho, Some(r.t), Some(eps), &SolverOptions::default()).unwrap();
            if e.threshold_met {
                at_threshold += 1;
                if e.delta > eps + BOUND_TOL {
                    failures += 1;
                }
            }
        }
    }
    let phi = max_entangled(1).unwrap();
    let full = make_xor_universal_default(1, 4).unwrap();
    let d_phi = indist_distance(&full, &phi).unwrap();
    if d_phi > 1.0 + BOUND_TOL {
        failures += 1;
    }
    check(
        failures == 0 && at_threshold == 150 && exact == 0.0,
        format!(
            "150 trials, {failures} failures, {at_threshold} threshold checks, Phi+ Delta {d_phi:.3e}, \
             family deviation {exact}"
        ),
    )
}

/// Largest `|Pr_i[h_i(x) ^ h_i(y) = a] - 2^-w|` by direct enumeration.
fn uniformity_deviation(fam: &XorUniversalFamily) -> f64 {
    let q = 1u64 << fam.width();
    let mut worst = 0.0f64;
    for x in 0..q {
        for y in 0..q {
            if x == y {
                continue;
            }
            let mut hist = vec![0u64; q as usize];
            for i in 0..fam.index_count() {
                hist[(fam.eval(i, x).unwrap() ^ fam.eval(i, y).unwrap()) as usize] += 1;
            }
            for c in hist {
                worst = worst.max((c as f64 / fam.index_count() as f64 - 1.0 / q as f64).abs());
            }
        }
    }
    worst
}

/// `max_{a != 0} |E_s (-1)^{a.s}|` by direct enumeration.
fn direct_bias(values: &[u64], n: usize) -> f64 {
    (1u64..1 << n)
        .map(|a| {
            let s: i64 = values.iter().map(|v| if (a & v).count_ones() % 2 == 0 { 1 } else { -1 }).sum();
            (s as f64 / values.len() as f64).abs()
        })
        .fold(0.0, f64::max)
}

fn small_bias_sets() -> Outcome {
    let mut failures = Vec::new();
    for n in [2usize, 4, 8] {
        for m in 2..=4u32 {
            let set = aghp_with_degree(n, m).unwrap();
            let values: Vec<u64> = set.strings().iter().map(|s| s.value()).collect();
            let bias = direct_bias(&values, n);
            let nominal = (n as f64 - 1.0) / 2f64.powi(m as i32);
            if bias > nominal + 1e-12 || (set.delta_bound() - nominal).abs() > 1e-15 {
                failures.push(format!("n={n} m={m} bias {bias}"));
            }
        }
    }
    let dev = uniformity_deviation(&XorUniversalFamily::new(4).unwrap());
    check(
        failures.is_empty() && dev == 0.0,
        format!("9 sets, failures {failures:?}, width-4 uniformity deviation {dev}"),
    )
}

fn equivalence_constructions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let layout = Layout::new([("A", 4), ("E", 4)]).unwrap();
    let mut tau_fail = 0;
    let mut hat_fail = 0;
    let mut hat_checked = 0;
    for _ in 0..50 {
        let count = rng.random_range(2..=4);
        let ens = random_ensemble(&layout, count, 2, &mut rng).unwrap();
        let t = h_min(ens.mixture(), "A");
        let h: Vec<bool> = (0..count).map(|i| i % 2 == 0 || rng.random_bool(0.5)).collect();
        let (t0, t1) = tau_tilde(&ens, &h, "A").unwrap();
        for tb in [t0, t1] {
            if h_min(&tb, "A") < t - 1.0 - H_TOL {
                tau_fail += 1;
            }
        }
        // H(rho) >= t' - 1 holds with t' = H(rho) + 1
        if rho_hat_applicable(t + 1.0, 2) {
            hat_checked += 1;
            if h_min(&rho_hat(ens.mixture(), "A").unwrap(), "A") < t + 1.0 - H_TOL {
                hat_fail += 1;
            }
        }
    }
    check(
        tau_fail == 0 && hat_fail == 0 && hat_checked >= 10,
        format!("50 ensembles, {tau_fail} tau~ failures, {hat_fail}/{hat_checked} rho^ failures"),
    )
}

fn goldreich_levin() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    for trial in 0..25 {
        let eps = 0.1 * (1 + trial % 5) as f64;
        let bits = 1 + (trial % 3) as u32;
        let table = synthetic_gl_table(bits, 6, eps, &mut rng).unwrap();
        let mut fa = 0.0;
        for i in 0..table.probs.len() {
            let fi = table.f[i] as usize;
            fa += table.probs[i] * (table.real[i][fi] - table.baseline[i][fi]);
        }
        let best = (0..1u64 << bits)
            .map(|r| {
                let mut g = 0.0;
                for i in 0..table.probs.len() {
                    for y in 0..table.real[i].len() {
                        if ((y as u64 ^ table.f[i]) & r).count_ones() % 2 == 0 {
                            g += table.probs[i] * (table.real[i][y] - table.baseline[i][y]);
                        }
                    }
                }
                g.abs()
            })
            .fold(0.0, f64::max);
        let r = gl_reduction(&table).unwrap();
        if (fa - eps).abs() > 1e-9 || (r.predicate_advantage - best).abs() > 1e-12 || best <= eps / 2.0 - GL_TOL {
            failures += 1;
        }
        min_margin = min_margin.min(best - eps / 2.0);
    }
    check(failures == 0, format!("25 tables, {failures} failures, min margin over eps/2 {min_margin:.3e}"))
}

fn lower_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut failures = 0;
    let mut closed_form = 0.0f64;
    for n in 1..=2 {
        let dd = (1u64 << (2 * n)) as f64;
        for k in [1usize, 2, 4] {
            for _ in 0..100 {
                let c = random_pauli_subset(n, k, &mut rng).unwrap();
                let r = lower_bound_experiment(&c, 0.5).unwrap();
                if r.fidelity_sq > k as f64 / dd + BOUND_TOL {
                    failures += 1;
                }
                // distinct Pauli keys map Phi+ to orthogonal Bell states
                closed_form = closed_form.max((r.fidelity_sq - k as f64 / dd).abs());
            }
        }
    }
    let mut tight = 0.0f64;
    for n in 1..=2 {
        let id = make_pauli_subset(n, vec![PauliString::identity(n)]).unwrap();
        let r = lower_bound_experiment(&id, 0.5).unwrap();
        tight = tight.max((r.fidelity_sq - 1.0 / (1u64 << (2 * n)) as f64).abs());
    }
    let inner = Layout::new([("A", 2), ("E", 2)]).unwrap();
    let mut min_slack = f64::INFINITY;
    for i in 0..50 {
        let omega = random_ccq_state(&inner, 2 + i % 3, 2, &mut rng).unwrap();
        let c = cond_min_entropy_classical_key(&omega, &["E"], "K", &SolverOptions::default()).unwrap();
        min_slack = min_slack.min(c.slack);
    }
    check(
        failures == 0 && tight <= TIGHT_TOL && min_slack >= -SLACK_TOL,
        format!(
            "600 ciphers, {failures} violations, closed-form deviation {closed_form:.2e}, identity gap {tight:.2e}, \
             min CCQ slack {min_slack:.3e}"
        ),
    )
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_entroq");
    let guard = tempfile::tempdir().map_err(|e| e.to_string())?;
    let tmp = guard.path();
    let scenarios = [
        r#"{"command": "min-entropy", "n": 2, "trials": 4, "seed": 9}"#,
        r#"{"command": "bias-check", "n": 8, "m": 3, "seed": 9}"#,
        r#"{"command": "encrypt-demo", "cipher": "as", "n": 2, "trials": 4, "seed": 9}"#,
        r#"{"command": "indist-sweep", "cipher": "xu", "n": 1, "epsilon": 0.5, "trials": 6, "seed": 9}"#,
        r#"{"command": "indist-sweep", "cipher": "as", "n": 2, "m": 3, "trials": 6, "seed": 9}"#,
        r#"{"command": "lower-bound", "n": 2, "key_count": 4, "trials": 6, "seed": 9}"#,
        r#"{"command": "keylen-table", "n": 4, "seed": 9}"#,
        r#"{"command": "gl-demo", "n": 3, "trials": 6, "seed": 9}"#,
    ];
    let mut differing = Vec::new();
    for (i, text) in scenarios.iter().enumerate() {
        let file = tmp.join(format!("s{i}.json"));
        std::fs::write(&file, text).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for (run, jobs) in [(0, "1"), (1, "1"), (2, "4")] {
            let dir = tmp.join(format!("s{i}-run{run}"));
            let status = Command::new(bin)
                .args(["--scenario", file.to_str().unwrap(), "--out", dir.to_str().unwrap(), "--jobs", jobs])
                .env("ENTROQ_LOG", "quiet")
                .output()
                .map_err(|e| e.to_string())?;
            if status.status.code() != Some(0) {
                return Err(format!("scenario {i} exited with {:?}", status.status.code()));
            }
            outputs.push(read_csvs(&dir)?);
        }
        if outputs[0] != outputs[1] || outputs[0] != outputs[2] {
            differing.push(i);
        }
    }
    check(
        differing.is_empty(),
        format!("{} scenarios, 3 runs each (jobs 1, 1, 4), differing: {differing:?}", scenarios.len()),
    )
}

fn read_csvs(dir: &Path) -> Result<Vec<Vec<u8>>, String> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    paths.sort();
    paths.iter().map(|p| std::fs::read(p).map_err(|e| e.to_string())).collect()
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("min-entropy oracle agreement", min_entropy_oracles),
        ("perfect pad", perfect_pad),
        ("delta-biased cipher bound", ambainis_smith_bound),
        ("XOR-universal cipher bound", xor_universal_bound),
        ("delta-biased construction", small_bias_sets),
        ("equivalence constructions", equivalence_constructions),
        ("Goldreich-Levin reduction", goldreich_levin),
        ("key-length lower bound", lower_bound),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} {}. {name}: {msg} [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
