//! Conditional min-entropy `H_min(A|E)` by semidefinite optimisation.
//!
//! The primal problem is
//!
//! ```text
//!   minimise tr Y   subject to   I_A (x) Y >= rho_AE,
//! ```
//!
//! whose optimum is `2^{-H_min(A|E)}`; `sigma* = Y / tr Y` is the optimal
//! witness. It is solved with a log-barrier path-following method that keeps
//! `I (x) Y - rho` strictly positive definite, so every iterate is a valid
//! certificate. At each barrier parameter `mu` the centred point gives a dual
//! candidate `X = mu (I (x) Y - rho)^{-1}`; rescaling it so that
//! `tr_A X = I_E` makes it exactly dual feasible and `tr(rho X)` a lower bound
//! on the optimum. The solver stops once the two bounds agree to the
//! requested number of bits.

use log::debug;

use crate::error::{Error, Result};
use crate::linalg::{
    eigh, hermitize, inv_sqrt_pd, trace_norm, CMatrix, DensityOperator, HermitianOperator, Layout,
    C64, ZERO,
};
use crate::tol;

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    /// Target width of the bracket on the optimum, in bits.
    pub tol_bits: f64,
    /// Cap on Newton iterations across all barrier stages.
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol_bits: 1e-6, max_iterations: 10_000 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol_bits: f64) -> Self {
        Self { tol_bits, ..Self::default() }
    }
}

/// Output of [`cond_min_entropy`].
#[derive(Clone, Debug)]
pub struct MinEntropyResult {
    /// Certified lower bound on `H_min(A|E)` in bits; within `tol_bits` of the optimum.
    pub value: f64,
    /// Upper bound on `H_min(A|E)` from the dual certificate.
    pub upper_value: f64,
    /// Optimal witness `sigma*` on the conditioning systems.
    pub sigma_star: DensityOperator,
    /// `lambda_min(2^{-value} I (x) sigma* - rho)`.
    pub certificate_gap: f64,
    pub iterations: usize,
}

/// `H_min(subject | rest)` of `rho`. The conditioning system is every
/// subsystem not listed in `subject`.
pub fn cond_min_entropy(
    rho: &DensityOperator,
    subject: &[&str],
    opts: &SolverOptions,
) -> Result<MinEntropyResult> {
    if subject.is_empty() {
        return Err(Error::InvalidArgument("no subject subsystem given".into()));
    }
    if !(opts.tol_bits > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance {} must be positive", opts.tol_bits)));
    }
    rho.layout().check_labels(subject)?;
    let rest = rho.layout().complement(subject);
    let mut order: Vec<&str> = subject.to_vec();
    order.extend_from_slice(&rest);
    let ordered = rho.permute(&order)?;
    let da = rho.layout().dim_of_all(subject)?;
    let de = rho.dim() / da;
    let rest_layout = rho.layout().select(&rest)?;

    let sol = solve_primal(ordered.matrix(), da, de, opts)?;
    let trace_y = sol.upper;
    let sigma = sol.y.clone() / C64::new(trace_y, 0.0);
    let s = kron_identity(da, &sol.y) - ordered.matrix();
    let certificate_gap = eigh(&s).0[0];
    debug!(
        "H_min solved: da={da} de={de} bracket=[{:.12e}, {:.12e}] iterations={}",
        sol.lower, sol.upper, sol.iterations
    );
    Ok(MinEntropyResult {
        value: -trace_y.log2(),
        upper_value: -sol.lower.log2(),
        sigma_star: DensityOperator::from_raw(hermitize(&sigma), rest_layout),
        certificate_gap,
        iterations: sol.iterations,
    })
}

/// `H_min(A|E)` with `A` the first subsystem and default options.
pub fn cond_min_entropy_default(rho: &DensityOperator) -> Result<MinEntropyResult> {
    let first = rho.labels()[0].clone();
    cond_min_entropy(rho, &[first.as_str()], &SolverOptions::default())
}

/// `-log2 lambda_max(rho)`.
pub fn min_entropy_unconditional(rho: &DensityOperator) -> f64 {
    -rho.max_eigenvalue().log2()
}

/// Optimal probability of guessing a classical bit from `E`:
/// `(1 + ||p0 rho0 - p1 rho1||_1) / 2`.
pub fn guess_prob_binary_cq(
    p0: f64,
    p1: f64,
    rho0: &DensityOperator,
    rho1: &DensityOperator,
) -> Result<f64> {
    if p0 < 0.0 || p1 < 0.0 || (p0 + p1 - 1.0).abs() > tol::TRACE {
        return Err(Error::InvalidArgument(format!("({p0}, {p1}) is not a distribution")));
    }
    let diff = rho0.scale(p0).sub(&rho1.scale(p1))?;
    Ok(0.5 * (1.0 + trace_norm(&diff)))
}

/// The classical-quantum state `sum_i p_i |i><i|_X (x) rho_i`.
pub fn cq_state(label: &str, probs: &[f64], states: &[DensityOperator]) -> Result<DensityOperator> {
    if probs.len() != states.len() || probs.is_empty() {
        return Err(Error::InvalidArgument("need one probability per state".into()));
    }
    if probs.iter().any(|&p| p < 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > tol::TRACE {
        return Err(Error::InvalidArgument("probabilities must form a distribution".into()));
    }
    let inner = states[0].layout().clone();
    if states.iter().any(|s| s.layout() != &inner) {
        return Err(Error::DimensionMismatch("CQ components have different layouts".into()));
    }
    let k = probs.len();
    let de = inner.total_dim();
    let layout = Layout::single(label, k)?.concat(&inner)?;
    let mut m = CMatrix::zeros(k * de, k * de);
    for (i, (p, s)) in probs.iter().zip(states).enumerate() {
        m.view_mut((i * de, i * de), (de, de)).copy_from(&(s.matrix() * C64::new(*p, 0.0)));
    }
    DensityOperator::new(m, layout)
}

/// Both sides of `||S||_1 <= sqrt(tr sigma * tr(S sigma^{-1/2} S sigma^{-1/2}))`.
///
/// `sigma` may be singular; the inverse square root is taken on its
/// support, and `S` must be supported there.
pub fn renner_norm_bound(s: &HermitianOperator, sigma: &HermitianOperator) -> Result<(f64, f64)> {
    if s.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "S has dims {:?}, sigma has {:?}",
            s.dims(),
            sigma.dims()
        )));
    }
    let (vals, vecs) = eigh(sigma.matrix());
    if vals[0] < -tol::PSD {
        return Err(Error::NotAState(format!("sigma has eigenvalue {:.3e}", vals[0])));
    }
    let lmax = vals.last().copied().unwrap_or(0.0);
    let floor = vals.len() as f64 * f64::EPSILON * lmax.max(f64::MIN_POSITIVE) * 16.0;
    let d = vals.len();
    let mut proj = CMatrix::zeros(d, d);
    let mut inv_sqrt = CMatrix::zeros(d, d);
    for (i, &v) in vals.iter().enumerate() {
        if v > floor {
            let col = vecs.column(i);
            let outer = &col * col.adjoint();
            proj += &outer;
            inv_sqrt += outer * C64::new(v.powf(-0.5), 0.0);
        }
    }
    let sm = s.matrix();
    let leak = (&proj * sm * &proj - sm).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if leak > tol::EQ {
        return Err(Error::SupportViolation);
    }
    let lhs = trace_norm(s);
    let inner = (sm * &inv_sqrt * sm * &inv_sqrt).trace().re;
    let rhs = (sigma.trace() * inner.max(0.0)).sqrt();
    Ok((lhs, rhs))
}

/// Result of checking `H_min(E|AK) >= H_min(E|A) - log|K|` for classical `K`.
#[derive(Clone, Debug)]
pub struct ClassicalKeyCheck {
    pub h_given_ak: f64,
    pub h_given_a: f64,
    pub log_k: f64,
    /// `H_min(E|AK) - H_min(E|A) + log|K|`; nonnegative up to solver tolerance.
    pub slack: f64,
}

/// Evaluates both sides of the classical-key conditioning inequality.
///
/// `subject` are the systems whose entropy is measured; `key_label` must be
/// block diagonal in the computational basis.
pub fn cond_min_entropy_classical_key(
    omega: &DensityOperator,
    subject: &[&str],
    key_label: &str,
    opts: &SolverOptions,
) -> Result<ClassicalKeyCheck> {
    if subject.contains(&key_label) {
        return Err(Error::InvalidArgument("key register cannot be part of the subject".into()));
    }
    let off = off_block_mass(omega, key_label)?;
    if off > 1e-10 {
        return Err(Error::NotClassical(key_label.to_string(), off));
    }
    let k = omega.layout().dim_of(key_label)?;
    let with_key = cond_min_entropy(omega, subject, opts)?;
    let without = omega.partial_trace(&[key_label])?;
    let without_key = cond_min_entropy(&without, subject, opts)?;
    let log_k = (k as f64).log2();
    Ok(ClassicalKeyCheck {
        h_given_ak: with_key.value,
        h_given_a: without_key.value,
        log_k,
        slack: with_key.value - without_key.value + log_k,
    })
}

/// Sum of |entries| coupling different computational basis states of `label`.
pub fn off_block_mass(rho: &HermitianOperator, label: &str) -> Result<f64> {
    let pos = rho.layout().position(label)?;
    let stride = rho.layout().strides()[pos];
    let dk = rho.dims()[pos];
    let d = rho.dim();
    let mut mass = 0.0;
    for i in 0..d {
        for j in 0..d {
            if (i / stride) % dk != (j / stride) % dk {
                mass += rho.matrix()[(i, j)].norm();
            }
        }
    }
    Ok(mass)
}

struct PrimalSolution {
    y: CMatrix,
    lower: f64,
    upper: f64,
    iterations: usize,
}

fn kron_identity(da: usize, y: &CMatrix) -> CMatrix {
    CMatrix::identity(da, da).kronecker(y)
}

/// `tr_A` of a matrix on `A (x) E` with `A` first.
fn ptrace_first(m: &CMatrix, da: usize, de: usize) -> CMatrix {
    let mut out = CMatrix::zeros(de, de);
    for a in 0..da {
        out += m.view((a * de, a * de), (de, de));
    }
    out
}

/// Matrix of `Delta -> sum_ab W_ab Delta W_ba` on row-major `vec(Delta)`.
fn barrier_hessian(w: &CMatrix, da: usize, de: usize) -> CMatrix {
    let n = de * de;
    let mut k = CMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..da {
            for p in 0..de {
                for r in 0..de {
                    let w1 = w[(a * de + p, b * de + r)];
                    if w1 == ZERO {
                        continue;
                    }
                    for s in 0..de {
                        for q in 0..de {
                            k[(p * de + q, r * de + s)] += w1 * w[(b * de + s, a * de + q)];
                        }
                    }
                }
            }
        }
    }
    k
}

/// Barrier objective `tr Y - mu log det(I (x) Y - rho)`; `None` outside the domain.
fn barrier_value(y: &CMatrix, rho: &CMatrix, da: usize, mu: f64) -> Option<f64> {
    let s = kron_identity(da, y) - rho;
    let chol = s.cholesky()?;
    let l = chol.l_dirty();
    let logdet: f64 = (0..l.nrows()).map(|i| 2.0 * l[(i, i)].re.ln()).sum();
    Some(y.trace().re - mu * logdet)
}

fn solve_primal(rho: &CMatrix, da: usize, de: usize, opts: &SolverOptions) -> Result<PrimalSolution> {
    let d = da * de;
    let (vals, _) = eigh(rho);
    let lam_max = *vals.last().expect("non-empty");

    if de == 1 {
        return Ok(PrimalSolution {
            y: CMatrix::from_element(1, 1, C64::new(lam_max, 0.0)),
            lower: lam_max,
            upper: lam_max,
            iterations: 0,
        });
    }

    let mut y = CMatrix::identity(de, de) * C64::new(2.0 * lam_max, 0.0);
    let mut mu = y.trace().re / d as f64;
    let mut iterations = 0usize;
    let mut best_lower = 0.0f64;
    let id_e = CMatrix::identity(de, de);

    loop {
        // Centering by damped Newton steps.
        loop {
            iterations += 1;
            if iterations > opts.max_iterations {
                return Err(Error::NonConvergence {
                    iterations: opts.max_iterations,
                    lower: best_lower,
                    upper: y.trace().re,
                });
            }
            let s = kron_identity(da, &y) - rho;
            let w = match s.clone().cholesky() {
                Some(c) => hermitize(&c.inverse()),
                None => unreachable!("iterate left the barrier domain"),
            };
            let grad = &id_e - ptrace_first(&w, da, de) * C64::new(mu, 0.0);
            let hess = barrier_hessian(&w, da, de) * C64::new(mu, 0.0);
            let rhs = nalgebra::DVector::from_iterator(
                de * de,
                (0..de).flat_map(|p| (0..de).map(move |q| (p, q))).map(|(p, q)| -grad[(p, q)]),
            );
            let sol = match hess.clone().cholesky() {
                Some(c) => c.solve(&rhs),
                None => match hess.lu().solve(&rhs) {
                    Some(x) => x,
                    None => break,
                },
            };
            let step = hermitize(&CMatrix::from_fn(de, de, |p, q| sol[p * de + q]));
            // Newton decrement squared: -tr(grad step).
            let dec2 = -(grad.component_mul(&step.transpose())).sum().re;
            if !(dec2 > 0.0) || dec2 / mu < 1e-9 {
                break;
            }
            let f0 = barrier_value(&y, rho, da, mu).expect("current iterate is feasible");
            let mut t = 1.0;
            let mut moved = false;
            while t > 1e-14 {
                let cand = &y + &step * C64::new(t, 0.0);
                if let Some(f1) = barrier_value(&cand, rho, da, mu) {
                    if f1 <= f0 - 0.25 * t * dec2 {
                        y = hermitize(&cand);
                        moved = true;
                        break;
                    }
                }
                t *= 0.5;
            }
            if !moved {
                break;
            }
        }

        let upper = y.trace().re;
        let lower = dual_bound(&y, rho, da, de, mu).unwrap_or(0.0);
        best_lower = best_lower.max(lower);
        if best_lower > 0.0 && upper.log2() - best_lower.log2() <= opts.tol_bits {
            return Ok(PrimalSolution { y, lower: best_lower, upper, iterations });
        }
        if mu < 1e-18 * upper {
            return Err(Error::NonConvergence { iterations, lower: best_lower, upper });
        }
        mu *= 0.2;
    }
}

/// `tr(rho X')` for the rescaled dual point `X' = (I (x) T^{-1/2}) X (I (x) T^{-1/2})`.
fn dual_bound(y: &CMatrix, rho: &CMatrix, da: usize, de: usize, mu: f64) -> Option<f64> {
    let s = kron_identity(da, y) - rho;
    let x = hermitize(&s.cholesky()?.inverse()) * C64::new(mu, 0.0);
    let t = ptrace_first(&x, da, de);
    let t_inv_sqrt = inv_sqrt_pd(&t).ok()?;
    let scale = kron_identity(da, &t_inv_sqrt);
    let xf = &scale * x * &scale;
    Some((rho.component_mul(&xf.transpose())).sum().re)
}
