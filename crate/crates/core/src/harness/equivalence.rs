//! Interpretations of a state and the auxiliary states used to move between
//! entropic security and entropic indistinguishability.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{random_state_with, CMatrix, DensityOperator, Layout, C64};
use crate::tol;

use super::adversary::simplex;

/// A decomposition `rho = sum_i p_i sigma_i`.
#[derive(Clone, Debug)]
pub struct InterpretationEnsemble {
    components: Vec<(f64, DensityOperator)>,
    mixture: DensityOperator,
}

impl InterpretationEnsemble {
    pub fn new(components: Vec<(f64, DensityOperator)>) -> Result<Self> {
        let Some((_, first)) = components.first() else {
            return Err(Error::InvalidArgument("empty ensemble".into()));
        };
        let layout = first.layout().clone();
        if components.iter().any(|(_, s)| s.layout() != &layout) {
            return Err(Error::DimensionMismatch("ensemble components differ in layout".into()));
        }
        if components.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::InvalidArgument("negative probability".into()));
        }
        let total: f64 = components.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > tol::TRACE {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        let d = layout.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for (p, s) in &components {
            m += s.matrix() * C64::new(*p, 0.0);
        }
        let mixture = DensityOperator::new(m, layout)?;
        Ok(Self { components, mixture })
    }

    pub fn components(&self) -> &[(f64, DensityOperator)] {
        &self.components
    }

    pub fn mixture(&self) -> &DensityOperator {
        &self.mixture
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// `count` components of random rank `1..=max_rank` with probabilities
/// drawn uniformly from the simplex.
pub fn random_ensemble<R: Rng + ?Sized>(
    layout: &Layout,
    count: usize,
    max_rank: usize,
    rng: &mut R,
) -> Result<InterpretationEnsemble> {
    if count == 0 || max_rank == 0 {
        return Err(Error::InvalidArgument("need at least one component of rank >= 1".into()));
    }
    let probs = simplex(count, rng);
    let comps = probs
        .into_iter()
        .map(|p| {
            let rank = rng.random_range(1..=max_rank.min(layout.total_dim()));
            Ok((p, random_state_with(layout.clone(), rank, rng)?))
        })
        .collect::<Result<Vec<_>>>()?;
    InterpretationEnsemble::new(comps)
}

/// `rho^A (x) rho^E` in the subsystem order of `rho`.
fn product_with(rho_a: &DensityOperator, rho_e: &DensityOperator, order: &[&str]) -> Result<CMatrix> {
    Ok(rho_a.tensor(rho_e)?.permute(order)?.into_hermitian().into_matrix())
}

/// The pair
/// `tau~_0 = r_0 tau_0 + r_1 rho^A (x) tau_1^E`,
/// `tau~_1 = r_1 tau_1 + r_0 rho^A (x) tau_0^E`
/// for the split of the ensemble by the predicate `h`.
///
/// An empty class contributes nothing, so a constant predicate is allowed.
pub fn tau_tilde(
    ens: &InterpretationEnsemble,
    h: &[bool],
    a_label: &str,
) -> Result<(DensityOperator, DensityOperator)> {
    if h.len() != ens.len() {
        return Err(Error::InvalidArgument(format!(
            "predicate has {} values for {} components",
            h.len(),
            ens.len()
        )));
    }
    let rho = ens.mixture();
    let layout = rho.layout().clone();
    let d = rho.dim();
    let order: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    let rest = layout.complement(&[a_label]);
    let rho_a = rho.marginal(&[a_label])?;

    // weighted[b] = r_b tau_b
    let mut weighted = [CMatrix::zeros(d, d), CMatrix::zeros(d, d)];
    for ((p, s), &b) in ens.components().iter().zip(h) {
        weighted[b as usize] += s.matrix() * C64::new(*p, 0.0);
    }
    let mut out = Vec::with_capacity(2);
    for b in 0..2 {
        let other = &weighted[1 - b];
        let r_other = other.trace().re;
        let mut m = weighted[b].clone();
        if r_other > 0.0 {
            let tau_other = DensityOperator::from_raw(other / C64::new(r_other, 0.0), layout.clone());
            let tau_e = tau_other.marginal(&rest)?;
            m += product_with(&rho_a, &tau_e, &order)? * C64::new(r_other, 0.0);
        }
        out.push(DensityOperator::new(m, layout.clone())?);
    }
    let t1 = out.pop().expect("two states");
    let t0 = out.pop().expect("two states");
    Ok((t0, t1))
}

/// `rho^ = 1/3 rho + 2/3 (I/d_A) (x) rho^E`.
pub fn rho_hat(rho: &DensityOperator, a_label: &str) -> Result<DensityOperator> {
    let rest = rho.layout().complement(&[a_label]);
    let order: Vec<&str> = rho.labels().iter().map(String::as_str).collect();
    let flat = DensityOperator::maximally_mixed(rho.layout().select(&[a_label])?);
    let rho_e = rho.marginal(&rest)?;
    let m = rho.matrix() * C64::new(1.0 / 3.0, 0.0)
        + product_with(&flat, &rho_e, &order)? * C64::new(2.0 / 3.0, 0.0);
    DensityOperator::new(m, rho.layout().clone())
}

/// The `rho^` construction is only claimed for `t <= n - 1`.
pub fn rho_hat_applicable(t: f64, n: usize) -> bool {
    t <= n as f64 - 1.0
}
