use std::ops::Deref;

use super::{eigh, max_hermitian_deviation, CMatrix, Layout, C64};
use crate::error::{Error, Result};
use crate::tol;

/// A Hermitian operator on a labelled multipartite space.
#[derive(Clone, Debug)]
pub struct HermitianOperator {
    matrix: CMatrix,
    layout: Layout,
}

impl HermitianOperator {
    /// Validates shape and Hermiticity; the stored matrix is symmetrised.
    pub fn new(matrix: CMatrix, layout: Layout) -> Result<Self> {
        check_shape(&matrix, &layout)?;
        let dev = max_hermitian_deviation(&matrix);
        if dev > tol::HERM {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::from_raw(hermitize(&matrix), layout))
    }

    pub(crate) fn from_raw(matrix: CMatrix, layout: Layout) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.total_dim());
        Self { matrix, layout }
    }

    pub fn zeros(layout: Layout) -> Self {
        let d = layout.total_dim();
        Self::from_raw(CMatrix::zeros(d, d), layout)
    }

    pub fn identity(layout: Layout) -> Self {
        let d = layout.total_dim();
        Self::from_raw(CMatrix::identity(d, d), layout)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dims(&self) -> &[usize] {
        self.layout.dims()
    }

    pub fn labels(&self) -> &[String] {
        self.layout.labels()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = eigh(&self.matrix);
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("non-empty operator")
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        Self::from_raw(&self.matrix * C64::new(s, 0.0), self.layout.clone())
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_same_layout(other)?;
        Ok(Self::from_raw(&self.matrix + &other.matrix, self.layout.clone()))
    }

    pub fn sub(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        self.check_same_layout(other)?;
        Ok(Self::from_raw(&self.matrix - &other.matrix, self.layout.clone()))
    }

    /// Entrywise maximum absolute difference.
    pub fn max_abs_diff(&self, other: &HermitianOperator) -> Result<f64> {
        self.check_same_layout(other)?;
        Ok((&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    pub fn check_same_layout(&self, other: &HermitianOperator) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::DimensionMismatch(format!(
                "layouts {:?}{:?} and {:?}{:?}",
                self.labels(),
                self.dims(),
                other.labels(),
                other.dims()
            )));
        }
        Ok(())
    }

    /// Kronecker product; subsystem lists are concatenated.
    pub fn tensor(&self, other: &HermitianOperator) -> Result<HermitianOperator> {
        let layout = self.layout.concat(&other.layout)?;
        if layout.total_dim() > tol::MAX_JOINT_DIM {
            return Err(Error::TooLarge(layout.total_dim()));
        }
        Ok(Self::from_raw(self.matrix.kronecker(&other.matrix), layout))
    }

    /// Reorders subsystems to `order`, which must list every label once.
    pub fn permute(&self, order: &[&str]) -> Result<HermitianOperator> {
        let map = self.layout.permutation_map(order)?;
        let layout = self.layout.select(order)?;
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |i, j| self.matrix[(map[i], map[j])]);
        Ok(Self::from_raw(m, layout))
    }

    /// Traces out the named subsystems. Remaining subsystems keep their order.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<HermitianOperator> {
        self.layout.check_labels(traced)?;
        let keep = self.layout.complement(traced);
        let mut order = keep.clone();
        order.extend_from_slice(traced);
        let map = self.layout.permutation_map(&order)?;
        let layout = self.layout.select(&keep)?;
        let dk = layout.total_dim();
        let dt = self.layout.dim_of_all(traced)?;
        let m = CMatrix::from_fn(dk, dk, |i, j| {
            (0..dt)
                .map(|t| self.matrix[(map[i * dt + t], map[j * dt + t])])
                .sum()
        });
        Ok(Self::from_raw(m, layout))
    }

    /// Marginal on the named subsystems, in the order given.
    pub fn marginal(&self, keep: &[&str]) -> Result<HermitianOperator> {
        self.layout.check_labels(keep)?;
        let traced = self.layout.complement(keep);
        self.partial_trace(&traced)?.permute(keep)
    }

    /// `U X U^dagger` with `U` acting on one subsystem.
    pub fn conjugate_local(&self, label: &str, unitary: &CMatrix) -> Result<HermitianOperator> {
        let full = embed_local(&self.layout, label, unitary)?;
        let m = &full * &self.matrix * full.adjoint();
        Ok(Self::from_raw(hermitize(&m), self.layout.clone()))
    }

    /// Relabels subsystems without touching the matrix.
    pub fn relabel(&self, labels: &[&str]) -> Result<HermitianOperator> {
        if labels.len() != self.layout.len() {
            return Err(Error::InvalidArgument("relabel length mismatch".into()));
        }
        let layout = Layout::new(labels.iter().copied().zip(self.dims().iter().copied()))?;
        Ok(Self::from_raw(self.matrix.clone(), layout))
    }
}

/// A positive semidefinite, unit-trace Hermitian operator.
#[derive(Clone, Debug)]
pub struct DensityOperator(HermitianOperator);

impl DensityOperator {
    pub fn new(matrix: CMatrix, layout: Layout) -> Result<Self> {
        Self::from_hermitian(HermitianOperator::new(matrix, layout)?)
    }

    pub fn from_hermitian(op: HermitianOperator) -> Result<Self> {
        if op.dim() > tol::MAX_JOINT_DIM {
            return Err(Error::TooLarge(op.dim()));
        }
        let tr = op.matrix().trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::NotAState(format!("trace {tr}")));
        }
        let lmin = op.min_eigenvalue();
        if lmin < -tol::PSD {
            return Err(Error::NotAState(format!("minimum eigenvalue {lmin:.3e}")));
        }
        Ok(DensityOperator(op))
    }

    /// Wraps an operator known to be a state by construction.
    pub(crate) fn from_raw(matrix: CMatrix, layout: Layout) -> Self {
        DensityOperator(HermitianOperator::from_raw(matrix, layout))
    }

    /// Pure state `|psi><psi|` from an (unnormalised) vector.
    pub fn pure(psi: &[C64], layout: Layout) -> Result<Self> {
        if psi.len() != layout.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for joint dimension {}",
                psi.len(),
                layout.total_dim()
            )));
        }
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm2 <= 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        let d = psi.len();
        let m = CMatrix::from_fn(d, d, |i, j| psi[i] * psi[j].conj() / norm2);
        Self::new(m, layout)
    }

    /// Computational basis state `|index><index|`.
    pub fn basis(layout: Layout, index: usize) -> Result<Self> {
        let d = layout.total_dim();
        if index >= d {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {d}")));
        }
        let mut m = CMatrix::zeros(d, d);
        m[(index, index)] = C64::new(1.0, 0.0);
        Ok(Self::from_raw(m, layout))
    }

    pub fn maximally_mixed(layout: Layout) -> Self {
        let d = layout.total_dim();
        Self::from_raw(CMatrix::identity(d, d) / C64::new(d as f64, 0.0), layout)
    }

    pub fn as_hermitian(&self) -> &HermitianOperator {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianOperator {
        self.0
    }

    pub fn purity(&self) -> f64 {
        (self.matrix() * self.matrix()).trace().re
    }

    pub fn tensor(&self, other: &DensityOperator) -> Result<DensityOperator> {
        Ok(DensityOperator(self.0.tensor(&other.0)?))
    }

    pub fn permute(&self, order: &[&str]) -> Result<DensityOperator> {
        Ok(DensityOperator(self.0.permute(order)?))
    }

    pub fn partial_trace(&self, traced: &[&str]) -> Result<DensityOperator> {
        Ok(DensityOperator(self.0.partial_trace(traced)?))
    }

    pub fn marginal(&self, keep: &[&str]) -> Result<DensityOperator> {
        Ok(DensityOperator(self.0.marginal(keep)?))
    }

    pub fn conjugate_local(&self, label: &str, unitary: &CMatrix) -> Result<DensityOperator> {
        let d = self.layout().dim_of(label)?;
        if unitary.nrows() != d || unitary.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary on subsystem `{label}` of dimension {d}",
                unitary.nrows(),
                unitary.ncols()
            )));
        }
        Ok(DensityOperator(self.0.conjugate_local(label, unitary)?))
    }

    pub fn relabel(&self, labels: &[&str]) -> Result<DensityOperator> {
        Ok(DensityOperator(self.0.relabel(labels)?))
    }

    /// Convex combination `w * self + (1 - w) * other`.
    pub fn mix(&self, w: f64, other: &DensityOperator) -> Result<DensityOperator> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidArgument(format!("mixing weight {w} outside [0, 1]")));
        }
        Ok(DensityOperator(self.0.scale(w).add(&other.0.scale(1.0 - w))?))
    }
}

impl Deref for DensityOperator {
    type Target = HermitianOperator;

    fn deref(&self) -> &HermitianOperator {
        &self.0
    }
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn check_shape(matrix: &CMatrix, layout: &Layout) -> Result<()> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "non-square {}x{} matrix",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.nrows() != layout.total_dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix side {} but subsystem dimensions {:?}",
            matrix.nrows(),
            layout.dims()
        )));
    }
    Ok(())
}

/// Full-space matrix of `local` acting on subsystem `label`.
pub(crate) fn embed_local(layout: &Layout, label: &str, local: &CMatrix) -> Result<CMatrix> {
    let d_local = layout.dim_of(label)?;
    if local.nrows() != d_local || local.ncols() != d_local {
        return Err(Error::DimensionMismatch(format!(
            "local operator of side {} on subsystem `{label}` of dimension {d_local}",
            local.nrows()
        )));
    }
    let rest = layout.complement(&[label]);
    let d_rest = layout.total_dim() / d_local;
    let block = local.kronecker(&CMatrix::identity(d_rest, d_rest));
    let mut order = vec![label];
    order.extend_from_slice(&rest);
    // map[new] = old; invert to place the [label, rest] ordered block back.
    let map = layout.permutation_map(&order)?;
    let d = layout.total_dim();
    let mut inv = vec![0; d];
    for (new, &old) in map.iter().enumerate() {
        inv[old] = new;
    }
    Ok(CMatrix::from_fn(d, d, |i, j| block[(inv[i], inv[j])]))
}
