//! Explicit adversaries: the Helstrom measurement, the Goldreich-Levin
//! predicate reduction, and the simulator that turns a strong-security
//! adversary into an `E`-only one.

use rand::Rng;

use crate::cipher::KeyedCipher;
use crate::error::{Error, Result};
use crate::linalg::{eigh, trace_norm, CMatrix, DensityOperator, HermitianOperator, C64};

use super::equivalence::InterpretationEnsemble;

/// Two-outcome measurement `{P, I - P}`; outcome 0 guesses the first state.
#[derive(Clone, Debug)]
pub struct Helstrom {
    pub povm: [CMatrix; 2],
    /// `1/2 tr(P rho) + 1/2 tr((I - P) sigma)`.
    pub success: f64,
    /// `1/2 + 1/4 ||rho - sigma||_1`.
    pub predicted: f64,
}

/// Optimal measurement for telling `rho` from `sigma` with equal priors.
pub fn helstrom_adversary(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<Helstrom> {
    let diff = rho.sub(sigma)?;
    let (vals, vecs) = eigh(diff.matrix());
    let d = vals.len();
    let mut p = CMatrix::zeros(d, d);
    for (i, &v) in vals.iter().enumerate() {
        if v > 0.0 {
            let col = vecs.column(i);
            p += &col * col.adjoint();
        }
    }
    let q = CMatrix::identity(d, d) - &p;
    let success = 0.5 * (expectation(&p, rho.matrix()) + expectation(&q, sigma.matrix()));
    Ok(Helstrom { povm: [p, q], success, predicted: 0.5 + 0.25 * trace_norm(&diff) })
}

/// `Re tr(M rho)`.
pub fn expectation(m: &CMatrix, rho: &CMatrix) -> f64 {
    m.component_mul(&rho.transpose()).sum().re
}

/// Monte Carlo estimate of a two-outcome measurement's success at telling
/// `rho` (outcome 0) from `sigma` (outcome 1) with equal priors.
pub fn simulate_discrimination<R: Rng + ?Sized>(
    povm: &[CMatrix; 2],
    rho: &HermitianOperator,
    sigma: &HermitianOperator,
    shots: usize,
    rng: &mut R,
) -> f64 {
    let p0_rho = expectation(&povm[0], rho.matrix()).clamp(0.0, 1.0);
    let p0_sigma = expectation(&povm[0], sigma.matrix()).clamp(0.0, 1.0);
    let mut correct = 0usize;
    for _ in 0..shots {
        let first = rng.random_bool(0.5);
        let p0 = if first { p0_rho } else { p0_sigma };
        let outcome0 = rng.random::<f64>() < p0;
        if outcome0 == first {
            correct += 1;
        }
    }
    correct as f64 / shots as f64
}

/// Outcome statistics of a prediction adversary.
///
/// `real[i][y]` is the probability of answering `y` given the ciphertext of
/// component `i`; `baseline[i][y]` the same when it is handed the reference
/// input instead.
#[derive(Clone, Debug)]
pub struct GlTable {
    pub probs: Vec<f64>,
    pub f: Vec<u64>,
    pub out_bits: u32,
    pub real: Vec<Vec<f64>>,
    pub baseline: Vec<Vec<f64>>,
}

/// Largest answer width for the exhaustive search over `r`.
pub const MAX_GL_BITS: u32 = 12;

impl GlTable {
    pub fn validate(&self) -> Result<()> {
        if self.out_bits == 0 || self.out_bits > MAX_GL_BITS {
            return Err(Error::InvalidArgument(format!(
                "answer width {} outside 1..={MAX_GL_BITS}",
                self.out_bits
            )));
        }
        let m = self.probs.len();
        let q = 1usize << self.out_bits;
        if m == 0 || self.f.len() != m || self.real.len() != m || self.baseline.len() != m {
            return Err(Error::DimensionMismatch("table rows disagree in length".into()));
        }
        if (self.probs.iter().sum::<f64>() - 1.0).abs() > crate::tol::TRACE {
            return Err(Error::InvalidArgument("probabilities do not sum to 1".into()));
        }
        for row in self.real.iter().chain(&self.baseline) {
            if row.len() != q || (row.iter().sum::<f64>() - 1.0).abs() > crate::tol::TRACE {
                return Err(Error::InvalidArgument("answer distribution is malformed".into()));
            }
        }
        if self.f.iter().any(|&v| v >= q as u64) {
            return Err(Error::InvalidArgument("f value wider than the answer width".into()));
        }
        Ok(())
    }

    /// `|Pr[A = f(i)] - Pr[A' = f(i)]|`.
    pub fn function_advantage(&self) -> f64 {
        let (p, q) = self.success_pair(|y, fi| y == fi);
        (p - q).abs()
    }

    /// Signed success gap of the predicate adversary `r . A`.
    pub fn predicate_gap(&self, r: u64) -> f64 {
        let (p, q) = self.success_pair(|y, fi| ((y ^ fi) & r).count_ones() % 2 == 0);
        p - q
    }

    fn success_pair(&self, hit: impl Fn(u64, u64) -> bool) -> (f64, f64) {
        let mut p = 0.0;
        let mut q = 0.0;
        for i in 0..self.probs.len() {
            for y in 0..self.real[i].len() {
                if hit(y as u64, self.f[i]) {
                    p += self.probs[i] * self.real[i][y];
                    q += self.probs[i] * self.baseline[i][y];
                }
            }
        }
        (p, q)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GlResult {
    pub best_r: u64,
    pub predicate_advantage: f64,
    pub function_advantage: f64,
    /// Mean signed predicate gap over all `r`; equals half the signed
    /// function gap.
    pub mean_gap: f64,
}

/// Exhaustive search for the Goldreich-Levin predicate `r . f` with the
/// largest advantage.
pub fn gl_reduction(table: &GlTable) -> Result<GlResult> {
    table.validate()?;
    let q = 1u64 << table.out_bits;
    let mut best_r = 0;
    let mut best = 0.0f64;
    let mut total = 0.0;
    for r in 0..q {
        let g = table.predicate_gap(r);
        total += g;
        if g.abs() > best {
            best = g.abs();
            best_r = r;
        }
    }
    Ok(GlResult {
        best_r,
        predicate_advantage: best,
        function_advantage: table.function_advantage(),
        mean_gap: total / q as f64,
    })
}

/// A table with function advantage exactly `epsilon`: the real answers mix
/// the baseline with the correct value, `real_i = (1-a) base_i + a [f(i)]`.
pub fn synthetic_gl_table<R: Rng + ?Sized>(
    out_bits: u32,
    indices: usize,
    epsilon: f64,
    rng: &mut R,
) -> Result<GlTable> {
    if !(0.0..1.0).contains(&epsilon) || indices == 0 {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} outside [0, 1)")));
    }
    let q = 1usize << out_bits;
    for _ in 0..1000 {
        let probs = simplex(indices, rng);
        let f: Vec<u64> = (0..indices).map(|_| rng.random_range(0..q as u64)).collect();
        let baseline: Vec<Vec<f64>> = (0..indices).map(|_| simplex(q, rng)).collect();
        let base_hit: f64 = (0..indices).map(|i| probs[i] * baseline[i][f[i] as usize]).sum();
        let alpha = epsilon / (1.0 - base_hit);
        if alpha > 1.0 {
            continue;
        }
        let real = baseline
            .iter()
            .zip(&f)
            .map(|(b, &fi)| {
                let mut row: Vec<f64> = b.iter().map(|v| (1.0 - alpha) * v).collect();
                row[fi as usize] += alpha;
                row
            })
            .collect();
        let table = GlTable { probs, f, out_bits, real, baseline };
        table.validate()?;
        return Ok(table);
    }
    Err(Error::InvalidArgument(format!("could not reach advantage {epsilon}")))
}

/// Uniform point on the probability simplex.
pub(crate) fn simplex<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<f64> {
    let w: Vec<f64> = (0..k).map(|_| rng.sample(rand_distr::Exp1)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Answer statistics of a measurement on ciphertexts of an ensemble: on
/// `E(sigma_i)` and on `E(rho^A) (x) sigma_i^E`.
///
/// Ensemble states must have the plaintext subsystem first.
pub fn measurement_tables(
    c: &KeyedCipher,
    ens: &InterpretationEnsemble,
    povm: &[CMatrix],
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let label = c.plaintext_label();
    check_plaintext_first(ens, label)?;
    let rho_a = ens.mixture().marginal(&[label])?;
    let enc_a = c.average_channel(&rho_a)?.rho_out;
    let mut real = Vec::new();
    let mut base = Vec::new();
    for (_, s) in ens.components() {
        let out = c.average_channel(s)?.rho_out;
        let s_e = s.partial_trace(&[label])?;
        let product = enc_a.matrix().kronecker(s_e.matrix());
        check_povm(povm, out.dim())?;
        real.push(povm.iter().map(|m| expectation(m, out.matrix())).collect());
        base.push(povm.iter().map(|m| expectation(m, &product)).collect());
    }
    Ok((real, base))
}

fn check_plaintext_first(ens: &InterpretationEnsemble, label: &str) -> Result<()> {
    if ens.mixture().labels().first().map(String::as_str) != Some(label) {
        return Err(Error::InvalidArgument(format!("subsystem `{label}` must come first")));
    }
    Ok(())
}

fn check_povm(povm: &[CMatrix], dim: usize) -> Result<()> {
    if povm.is_empty() || povm.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::DimensionMismatch(format!("measurement must act on dimension {dim}")));
    }
    let total = povm.iter().fold(CMatrix::zeros(dim, dim), |acc, m| acc + m);
    let dev = (total - CMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if dev > crate::tol::EQ {
        return Err(Error::InvalidArgument("measurement operators do not sum to identity".into()));
    }
    Ok(())
}

/// Strong-security gap of an adversary and the regular-security gap of the
/// `E`-only simulator built from it.
#[derive(Clone, Copy, Debug)]
pub struct StrongRegular {
    pub strong_gap: f64,
    pub regular_gap: f64,
}

/// The simulator prepares `E(rho^A)` itself and runs the adversary on it
/// together with `sigma_i^E`; its effective measurement on `E` is
/// `N_y = tr_A'[(E(rho^A) (x) I) M_y]`.
pub fn strong_vs_regular(
    c: &KeyedCipher,
    ens: &InterpretationEnsemble,
    f: &[usize],
    povm: &[CMatrix],
) -> Result<StrongRegular> {
    let label = c.plaintext_label();
    if f.len() != ens.components().len() || f.iter().any(|&y| y >= povm.len()) {
        return Err(Error::InvalidArgument("f must map every component to an outcome".into()));
    }
    let (real, base) = measurement_tables(c, ens, povm)?;
    let rho_a = ens.mixture().marginal(&[label])?;
    let enc_a = c.average_channel(&rho_a)?.rho_out;
    let d_e = ens.mixture().dim() / rho_a.dim();
    let d_out = enc_a.dim();
    let weight = enc_a.matrix().kronecker(&CMatrix::identity(d_e, d_e));
    let simulated: Vec<CMatrix> = povm
        .iter()
        .map(|m| {
            let wm = &weight * m;
            let mut n = CMatrix::zeros(d_e, d_e);
            for a in 0..d_out {
                n += wm.view((a * d_e, a * d_e), (d_e, d_e));
            }
            n
        })
        .collect();
    let (mut p_real, mut p_strong, mut p_sim) = (0.0, 0.0, 0.0);
    for (i, (p, s)) in ens.components().iter().enumerate() {
        let s_e = s.partial_trace(&[label])?;
        p_real += p * real[i][f[i]];
        p_strong += p * base[i][f[i]];
        p_sim += p * expectation(&simulated[f[i]], s_e.matrix());
    }
    Ok(StrongRegular { strong_gap: (p_real - p_strong).abs(), regular_gap: (p_real - p_sim).abs() })
}

/// Rank-one projective measurement `{|psi><psi|, I - |psi><psi|}`.
pub fn projective_pair(psi: &[C64]) -> Result<[CMatrix; 2]> {
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero vector".into()));
    }
    let v = nalgebra::DVector::from_iterator(psi.len(), psi.iter().map(|z| z / norm));
    let p = &v * v.adjoint();
    let d = psi.len();
    Ok([p.clone(), CMatrix::identity(d, d) - p])
}

/// Helstrom success for telling `E(rho)` from `Omega (x) rho^E`; equals
/// `1/2 + Delta/4`.
pub fn helstrom_on_cipher(c: &KeyedCipher, rho: &DensityOperator) -> Result<Helstrom> {
    let avg = c.average_channel(rho)?;
    let rho_e = rho.partial_trace(&[c.plaintext_label()])?;
    let ideal = avg.omega.tensor(&rho_e)?;
    let order: Vec<&str> = avg.rho_out.labels().iter().map(String::as_str).collect();
    let ideal = ideal.permute(&order)?;
    helstrom_adversary(&avg.rho_out, &ideal)
}
