//! Dense complex matrix algebra over labelled multipartite systems.
//!
//! Hermitian eigen-decomposition is the single primitive behind norms,
//! positivity checks and matrix functions.

mod layout;
mod operator;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub use layout::Layout;
pub use operator::{DensityOperator, HermitianOperator};
pub(crate) use operator::hermitize;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Eigenvalues (ascending) and eigenvectors of a Hermitian matrix.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = nalgebra::SymmetricEigen::new(hermitize(m));
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, vecs)
}

pub fn eigenvalues(m: &CMatrix) -> Vec<f64> {
    eigh(m).0
}

pub(crate) fn max_hermitian_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Eigenvalues at or below this are numerical zeros of a PSD matrix.
fn spectral_floor(vals: &[f64]) -> f64 {
    let lmax = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    vals.len() as f64 * f64::EPSILON * lmax
}

/// Applies `f` to the spectrum of a PSD matrix. Eigenvalues in
/// `[-PSD, floor]` are clamped to zero first.
pub fn psd_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, vecs) = eigh(m);
    if vals[0] < -tol::PSD {
        return Err(Error::NotAState(format!(
            "matrix function of operator with eigenvalue {:.3e}",
            vals[0]
        )));
    }
    let floor = spectral_floor(&vals);
    let fvals: DVector<C64> = DVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::new(if v <= floor { f(0.0) } else { f(v) }, 0.0)),
    );
    Ok(&vecs * CMatrix::from_diagonal(&fvals) * vecs.adjoint())
}

pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    psd_function(m, f64::sqrt)
}

/// `m^{-1/2}` for a positive definite matrix.
pub fn inv_sqrt_pd(m: &CMatrix) -> Result<CMatrix> {
    let (vals, vecs) = eigh(m);
    let floor = spectral_floor(&vals);
    if vals[0] <= floor {
        return Err(Error::SupportViolation);
    }
    let fvals = DVector::from_iterator(vals.len(), vals.iter().map(|&v| C64::new(v.powf(-0.5), 0.0)));
    Ok(&vecs * CMatrix::from_diagonal(&fvals) * vecs.adjoint())
}

/// Sum of absolute eigenvalues of a Hermitian matrix (no validation).
pub(crate) fn trace_norm_unchecked(m: &CMatrix) -> f64 {
    eigenvalues(m).iter().map(|v| v.abs()).sum()
}

/// Trace norm `||S||_1`.
pub fn trace_norm(s: &HermitianOperator) -> f64 {
    trace_norm_unchecked(s.matrix())
}

/// Trace norm of an arbitrary matrix that must be Hermitian to `HERM`.
pub fn trace_norm_of_matrix(m: &CMatrix) -> Result<f64> {
    let dev = max_hermitian_deviation(m);
    if dev > tol::HERM {
        return Err(Error::NotHermitian(dev));
    }
    Ok(trace_norm_unchecked(m))
}

/// `||rho - sigma||_1`.
pub fn trace_distance(rho: &HermitianOperator, sigma: &HermitianOperator) -> Result<f64> {
    Ok(trace_norm(&rho.sub(sigma)?))
}

/// Fidelity `F = || sqrt(rho) sqrt(sigma) ||_1`, so that `F(rho, rho) = 1`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity between dims {:?} and {:?}",
            rho.dims(),
            sigma.dims()
        )));
    }
    let sr = sqrt_psd(rho.matrix())?;
    let inner = &sr * sigma.matrix() * &sr;
    let vals = eigenvalues(&inner);
    let floor = spectral_floor(&vals);
    let f: f64 = vals.iter().filter(|&&v| v > floor).map(|v| v.sqrt()).sum();
    Ok(f.min(1.0))
}

/// `a >= b` in the positive-semidefinite order, up to `tol`.
pub fn operator_geq(a: &HermitianOperator, b: &HermitianOperator, tol: f64) -> Result<bool> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!(
            "comparing dims {:?} and {:?}",
            a.dims(),
            b.dims()
        )));
    }
    let diff = a.matrix() - b.matrix();
    Ok(eigenvalues(&diff)[0] >= -tol)
}

/// `|Phi+><Phi+|` on `A (x) E`, each of `n_qubits` qubits.
pub fn max_entangled(n_qubits: usize) -> Result<DensityOperator> {
    if n_qubits < 1 {
        return Err(Error::InvalidArgument("max_entangled needs n >= 1".into()));
    }
    let d = 1usize << n_qubits;
    if d * d > tol::MAX_JOINT_DIM {
        return Err(Error::TooLarge(d * d));
    }
    let layout = Layout::new([("A", d), ("E", d)])?;
    max_entangled_on(layout)
}

/// Maximally entangled state between the two subsystems of `layout`.
pub fn max_entangled_on(layout: Layout) -> Result<DensityOperator> {
    if layout.len() != 2 || layout.dims()[0] != layout.dims()[1] {
        return Err(Error::InvalidArgument(
            "maximally entangled state needs two equal-dimension subsystems".into(),
        ));
    }
    let d = layout.dims()[0];
    let mut psi = vec![ZERO; d * d];
    for i in 0..d {
        psi[i * d + i] = ONE;
    }
    DensityOperator::pure(&psi, layout)
}

/// Random state of the given rank: the marginal of a Gaussian random pure
/// state on `layout (x) C^rank`. Deterministic in `seed`.
pub fn random_state(layout: Layout, rank: usize, seed: u64) -> Result<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_state_with(layout, rank, &mut rng)
}

pub fn random_state_with<R: rand::Rng + ?Sized>(
    layout: Layout,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d = layout.total_dim();
    if rank < 1 || rank > d {
        return Err(Error::InvalidArgument(format!("rank {rank} outside 1..={d}")));
    }
    if d > tol::MAX_JOINT_DIM {
        return Err(Error::TooLarge(d));
    }
    let g = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    Ok(DensityOperator::from_raw(hermitize(&(m / tr)), layout))
}

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
pub fn random_unitary<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DVector::from_iterator(
        d,
        (0..d).map(|i| {
            let z = r[(i, i)];
            if z.norm() > 0.0 {
                z / z.norm()
            } else {
                ONE
            }
        }),
    );
    q * CMatrix::from_diagonal(&phases)
}

fn ginibre<R: rand::Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re, im)
    })
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: rand::Rng + ?Sized>(layout: Layout, rng: &mut R) -> HermitianOperator {
    let d = layout.total_dim();
    let g = ginibre(d, d, rng);
    HermitianOperator::from_raw(hermitize(&g), layout)
}
