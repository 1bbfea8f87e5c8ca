//! Pauli strings `X^a Z^b`, conjugation, and the Pauli-basis decomposition
//! of bipartite operators.
//!
//! `X^a Z^b` is the literal matrix product, with no symplectic phase. Its
//! adjoint is `Z^b X^a`, so conjugation by the pair carries no phase either.

use crate::bits::{parity, BitString};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, DensityOperator, HermitianOperator, Layout, C64, ONE, ZERO};

/// The operator `X^a Z^b` on `n` qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    x: BitString,
    z: BitString,
}

impl PauliString {
    pub fn new(x: BitString, z: BitString) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::DimensionMismatch(format!(
                "X part has {} bits, Z part has {}",
                x.len(),
                z.len()
            )));
        }
        Ok(Self { x, z })
    }

    pub fn identity(n: usize) -> Self {
        Self { x: BitString::zeros(n), z: BitString::zeros(n) }
    }

    /// Splits a `2n`-bit string `a || b` into `X^a Z^b`.
    pub fn from_concat(s: &BitString) -> Result<Self> {
        if s.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "Pauli key must have even length, got {}",
                s.len()
            )));
        }
        let (x, z) = s.split(s.len() / 2);
        Ok(Self { x, z })
    }

    /// Pauli string from the integer encodings of `a` and `b`.
    pub fn from_ints(x: u64, z: u64, n: usize) -> Result<Self> {
        Self::new(BitString::new(x, n)?, BitString::new(z, n)?)
    }

    pub fn x(&self) -> BitString {
        self.x
    }

    pub fn z(&self) -> BitString {
        self.z
    }

    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn to_concat(&self) -> BitString {
        self.x.concat(&self.z).expect("Pauli string fits in 64 bits")
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// `X^a Z^b |j> = sign * |target>`.
    #[inline]
    pub(crate) fn act(&self, j: usize) -> (usize, f64) {
        let sign = if parity(self.z.value() & j as u64) { -1.0 } else { 1.0 };
        (j ^ self.x.value() as usize, sign)
    }

    pub fn matrix(&self) -> CMatrix {
        pauli_matrix(self)
    }
}

/// Dense matrix of `X^a Z^b`.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    let d = 1usize << p.n_qubits();
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        let (i, s) = p.act(j);
        m[(i, j)] = C64::new(s, 0.0);
    }
    m
}

/// All `4^n` Pauli strings, ordered by `(a, b)` as integers.
pub fn all_paulis(n: usize) -> impl Iterator<Item = PauliString> {
    let d = 1u64 << n;
    (0..d).flat_map(move |x| {
        (0..d).map(move |z| PauliString::from_ints(x, z, n).expect("in range"))
    })
}

fn qubit_count(dim: usize, label: &str) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "subsystem `{label}` has dimension {dim}, not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// `P X P^dagger` for `P` acting on subsystem `label` of `m`.
pub(crate) fn conjugate_matrix(
    p: &PauliString,
    m: &CMatrix,
    layout: &Layout,
    label: &str,
) -> Result<CMatrix> {
    let pos = layout.position(label)?;
    let d_a = layout.dims()[pos];
    if d_a != 1 << p.n_qubits() {
        return Err(Error::DimensionMismatch(format!(
            "{}-qubit Pauli on subsystem `{label}` of dimension {d_a}",
            p.n_qubits()
        )));
    }
    if p.is_identity() {
        return Ok(m.clone());
    }
    let stride = layout.strides()[pos];
    let d = m.nrows();
    // Precompute target index and sign for every joint index.
    let mut target = vec![0usize; d];
    let mut sign = vec![0f64; d];
    for i in 0..d {
        let digit = (i / stride) % d_a;
        let (new_digit, s) = p.act(digit);
        target[i] = i - digit * stride + new_digit * stride;
        sign[i] = s;
    }
    let mut out = CMatrix::zeros(d, d);
    for c in 0..d {
        for r in 0..d {
            out[(target[r], target[c])] = m[(r, c)] * (sign[r] * sign[c]);
        }
    }
    Ok(out)
}

/// Conjugation `(X^a Z^b (x) I) rho (Z^b X^a (x) I)` on subsystem `label`.
pub fn pauli_conjugate(p: &PauliString, rho: &DensityOperator, label: &str) -> Result<DensityOperator> {
    let m = conjugate_matrix(p, rho.matrix(), rho.layout(), label)?;
    Ok(DensityOperator::from_raw(m, rho.layout().clone()))
}

/// Pauli-basis blocks `M_uv = tr_A[(Z^v X^u / sqrt(d_A) (x) I) rho]`.
///
/// Blocks are stored by `u * d_A + v`. A block is Hermitian when `u . v` is
/// even and anti-Hermitian otherwise.
#[derive(Clone, Debug)]
pub struct PauliCoefficients {
    n_qubits: usize,
    a_label: String,
    rest: Layout,
    blocks: Vec<CMatrix>,
}

impl PauliCoefficients {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Layout of the untouched subsystems.
    pub fn rest_layout(&self) -> &Layout {
        &self.rest
    }

    pub fn block(&self, u: &BitString, v: &BitString) -> &CMatrix {
        let d = 1usize << self.n_qubits;
        &self.blocks[u.value() as usize * d + v.value() as usize]
    }

    pub fn block_by_index(&self, u: usize, v: usize) -> &CMatrix {
        &self.blocks[u * (1 << self.n_qubits) + v]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// All-zero coefficients.
    pub fn zeros(n_qubits: usize, a_label: &str, rest: Layout) -> Self {
        let de = rest.total_dim();
        Self {
            n_qubits,
            a_label: a_label.to_string(),
            rest,
            blocks: vec![CMatrix::zeros(de, de); 1 << (2 * n_qubits)],
        }
    }

    pub fn set_block(&mut self, u: usize, v: usize, block: CMatrix) -> Result<()> {
        let de = self.rest.total_dim();
        if block.nrows() != de || block.ncols() != de {
            return Err(Error::DimensionMismatch(format!(
                "block of side {} for rest dimension {de}",
                block.nrows()
            )));
        }
        let d = 1usize << self.n_qubits;
        if u >= d || v >= d {
            return Err(Error::InvalidArgument(format!("Pauli index ({u}, {v}) out of range")));
        }
        self.blocks[u * d + v] = block;
        Ok(())
    }
}

/// Decomposes an operator on `A (x) rest` in the Pauli basis of `A`.
pub fn pauli_decompose(op: &HermitianOperator, a_label: &str) -> Result<PauliCoefficients> {
    let d_a = op.layout().dim_of(a_label)?;
    let n = qubit_count(d_a, a_label)?;
    let rest_labels = op.layout().complement(&[a_label]);
    let mut order = vec![a_label];
    order.extend_from_slice(&rest_labels);
    let ordered = op.permute(&order)?;
    let rest = op.layout().select(&rest_labels)?;
    let de = rest.total_dim();
    let m = ordered.matrix();
    let norm = 1.0 / (d_a as f64).sqrt();
    let mut blocks = Vec::with_capacity(d_a * d_a);
    for u in 0..d_a {
        for v in 0..d_a {
            let mut block = CMatrix::zeros(de, de);
            for k in 0..d_a {
                let s = if parity((v & (k ^ u)) as u64) { -norm } else { norm };
                let (r0, c0) = (k * de, (k ^ u) * de);
                for e in 0..de {
                    for f in 0..de {
                        block[(e, f)] += m[(r0 + e, c0 + f)] * s;
                    }
                }
            }
            blocks.push(block);
        }
    }
    Ok(PauliCoefficients { n_qubits: n, a_label: a_label.to_string(), rest, blocks })
}

/// Inverse of [`pauli_decompose`]: `sum_uv X^u Z^v / sqrt(d_A) (x) M_uv`,
/// with `A` as the first subsystem.
pub fn pauli_reconstruct(c: &PauliCoefficients) -> Result<HermitianOperator> {
    let d_a = 1usize << c.n_qubits;
    let de = c.rest.total_dim();
    let layout = Layout::single(&c.a_label, d_a)?.concat(&c.rest)?;
    let norm = 1.0 / (d_a as f64).sqrt();
    let mut out = CMatrix::from_element(d_a * de, d_a * de, ZERO);
    for u in 0..d_a {
        for v in 0..d_a {
            let block = &c.blocks[u * d_a + v];
            for k in 0..d_a {
                let s = if parity((v & k) as u64) { -norm } else { norm };
                let (r0, c0) = ((k ^ u) * de, k * de);
                for e in 0..de {
                    for f in 0..de {
                        out[(r0 + e, c0 + f)] += block[(e, f)] * s;
                    }
                }
            }
        }
    }
    HermitianOperator::new(out, layout)
}

/// Single-qubit Pauli matrices, for tests and documentation.
pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_entangled, random_state};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_string() {
        let p = PauliString::identity(2);
        assert_eq!(pauli_matrix(&p), CMatrix::identity(4, 4));
    }

    #[test]
    fn xz_single_qubit() {
        let p = PauliString::new(bs("1"), bs("1")).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, -ONE, ONE, ZERO]);
        assert_eq!(pauli_matrix(&p), expected);
    }

    #[test]
    fn two_qubit_matches_kronecker() {
        // a = 10, b = 01 -> X (x) Z
        let p = PauliString::new(bs("10"), bs("01")).unwrap();
        let oracle = pauli_x().kronecker(&pauli_z());
        assert_eq!(pauli_matrix(&p), oracle);
    }

    #[test]
    fn general_string_matches_kronecker_of_factors() {
        for p in all_paulis(2) {
            let mut oracle = CMatrix::identity(1, 1);
            for q in 0..2 {
                let mut f = CMatrix::identity(2, 2);
                if p.x().bit(q) {
                    f = &f * pauli_x();
                }
                if p.z().bit(q) {
                    f = &f * pauli_z();
                }
                oracle = oracle.kronecker(&f);
            }
            assert_eq!(pauli_matrix(&p), oracle);
        }
    }

    #[test]
    fn string_times_adjoint_is_identity() {
        for p in all_paulis(2) {
            let m = pauli_matrix(&p);
            assert_eq!(&m * m.adjoint(), CMatrix::identity(4, 4));
        }
    }

    #[test]
    fn orthonormality_exhaustive() {
        for n in 1..=2 {
            let d = (1 << n) as f64;
            let all: Vec<_> = all_paulis(n).collect();
            for p in &all {
                for q in &all {
                    let ip = (pauli_matrix(p).adjoint() * pauli_matrix(q)).trace() / d;
                    let expected = if p == q { 1.0 } else { 0.0 };
                    assert!((ip - C64::new(expected, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn decompose_product_with_mixed_a() {
        let e = random_state(Layout::single("E", 2).unwrap(), 2, 3).unwrap();
        let rho = DensityOperator::maximally_mixed(Layout::single("A", 4).unwrap())
            .tensor(&e)
            .unwrap();
        let c = pauli_decompose(&rho, "A").unwrap();
        for u in 0..4 {
            for v in 0..4 {
                let b = c.block_by_index(u, v);
                if u == 0 && v == 0 {
                    assert!(max_diff(b, &(e.matrix() / C64::new(2.0, 0.0))) < 1e-12);
                } else {
                    assert!(b.iter().all(|z| z.norm() <= 1e-12));
                }
            }
        }
    }

    #[test]
    fn traceless_part_has_no_identity_component() {
        let rho = random_state(Layout::new([("A", 2), ("E", 2)]).unwrap(), 3, 8).unwrap();
        let re = rho.partial_trace(&["A"]).unwrap();
        let tau = DensityOperator::maximally_mixed(Layout::single("A", 2).unwrap())
            .tensor(&re)
            .unwrap();
        let tilde = rho.sub(&tau).unwrap();
        let c = pauli_decompose(&tilde, "A").unwrap();
        assert!(c.block_by_index(0, 0).iter().all(|z| z.norm() < 1e-14));
        let ct = pauli_decompose(&tau, "A").unwrap();
        // M^tau_00 = rho^E / sqrt(d_A) in this normalisation.
        assert!(max_diff(ct.block_by_index(0, 0), &(re.matrix() / C64::new(2f64.sqrt(), 0.0))) < 1e-14);
    }

    #[test]
    fn reconstruct_zero_is_zero() {
        let c = PauliCoefficients::zeros(1, "A", Layout::single("E", 2).unwrap());
        let r = pauli_reconstruct(&c).unwrap();
        assert!(r.matrix().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn reconstruct_identity_block() {
        let e = random_state(Layout::single("E", 3).unwrap(), 3, 1).unwrap();
        let mut c = PauliCoefficients::zeros(1, "A", e.layout().clone());
        c.set_block(0, 0, e.matrix() / C64::new(2f64.sqrt(), 0.0)).unwrap();
        let r = pauli_reconstruct(&c).unwrap();
        let expected = DensityOperator::maximally_mixed(Layout::single("A", 2).unwrap())
            .tensor(&e)
            .unwrap();
        assert!(r.max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn round_trip_on_random_states() {
        for seed in 0..50 {
            let l = Layout::new([("A", 4), ("E", 2)]).unwrap();
            let rho = random_state(l, 1 + (seed as usize % 8), seed).unwrap();
            let back = pauli_reconstruct(&pauli_decompose(&rho, "A").unwrap()).unwrap();
            assert!(back.max_abs_diff(&rho).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn decompose_reorders_when_a_is_not_first() {
        let rho = random_state(Layout::new([("E", 3), ("A", 2)]).unwrap(), 6, 4).unwrap();
        let back = pauli_reconstruct(&pauli_decompose(&rho, "A").unwrap()).unwrap();
        let ordered = rho.permute(&["A", "E"]).unwrap();
        assert!(back.max_abs_diff(&ordered).unwrap() < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_qubit_dimension() {
        let rho = random_state(Layout::new([("A", 3), ("E", 2)]).unwrap(), 2, 4).unwrap();
        assert!(pauli_decompose(&rho, "A").is_err());
    }

    #[test]
    fn conjugate_matches_dense_product() {
        let rho = random_state(Layout::new([("E", 2), ("A", 4)]).unwrap(), 8, 2).unwrap();
        for p in all_paulis(2) {
            let fast = pauli_conjugate(&p, &rho, "A").unwrap();
            let dense = rho.conjugate_local("A", &pauli_matrix(&p)).unwrap();
            assert!(fast.max_abs_diff(&dense).unwrap() < 1e-14);
        }
    }

    #[test]
    fn conjugate_identity_self_inverse_and_marginal() {
        let rho = random_state(Layout::new([("A", 2), ("E", 2)]).unwrap(), 4, 6).unwrap();
        let id = PauliString::identity(1);
        assert_eq!(pauli_conjugate(&id, &rho, "A").unwrap().matrix(), rho.matrix());
        let re = rho.partial_trace(&["A"]).unwrap();
        for p in all_paulis(1) {
            let once = pauli_conjugate(&p, &rho, "A").unwrap();
            let twice = pauli_conjugate(&p, &once, "A").unwrap();
            assert!(twice.max_abs_diff(&rho).unwrap() < 1e-15);
            let marg = once.partial_trace(&["A"]).unwrap();
            assert!(marg.max_abs_diff(&re).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn conjugate_rejects_wrong_width() {
        let rho = max_entangled(1).unwrap();
        let p = PauliString::identity(2);
        assert!(pauli_conjugate(&p, &rho, "A").is_err());
        assert!(pauli_conjugate(&PauliString::identity(1), &rho, "Q").is_err());
    }

    #[test]
    fn full_twirl_gives_maximally_mixed() {
        for n in 1..=2usize {
            let d = 1 << n;
            let rho = random_state(Layout::new([("A", d), ("E", 2)]).unwrap(), 3, n as u64).unwrap();
            let mut acc = CMatrix::zeros(2 * d, 2 * d);
            for p in all_paulis(n) {
                acc += pauli_conjugate(&p, &rho, "A").unwrap().matrix();
            }
            acc /= C64::new((d * d) as f64, 0.0);
            let expected = DensityOperator::maximally_mixed(Layout::single("A", d).unwrap())
                .tensor(&rho.partial_trace(&["A"]).unwrap())
                .unwrap();
            assert!(max_diff(&acc, expected.matrix()) <= 1e-10);
        }
    }

    #[test]
    fn conjugation_preserves_spectrum() {
        let rho = random_state(Layout::new([("A", 2), ("E", 2)]).unwrap(), 3, 12).unwrap();
        let before = rho.eigenvalues();
        for p in all_paulis(1) {
            let after = pauli_conjugate(&p, &rho, "A").unwrap().eigenvalues();
            for (x, y) in before.iter().zip(&after) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
