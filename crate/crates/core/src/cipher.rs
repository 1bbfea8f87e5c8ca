//! Keyed Pauli ciphers: the full one-time pad, delta-biased Pauli subsets,
//! and the XOR-universal cipher with its classical index register.
//!
//! Keys are uniform over the key list. Every cipher here masks the plaintext
//! by Pauli conjugation, so a key-averaged ciphertext is a list of
//! "sectors": one averaged block per value of the index register (a single
//! sector for length-preserving ciphers). Norms of block-diagonal operators
//! are sums over sectors, which keeps the XOR-universal cipher tractable
//! without materialising its `2^{2n}`-dimensional register.

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::gf2::{DeltaBiasedSet, Provenance, XorUniversalFamily};
use crate::linalg::{CMatrix, DensityOperator, HermitianOperator, Layout, C64};
use crate::pauli::{all_paulis, conjugate_matrix, PauliString};
use crate::tol;

/// Label of the plaintext subsystem unless overridden.
pub const PLAINTEXT_LABEL: &str = "A";
/// Label of the XOR-universal index register.
pub const INDEX_LABEL: &str = "I";

#[derive(Clone, Debug)]
pub enum CipherKind {
    /// `E_k(rho) = P_k rho P_k^dagger`.
    PauliMask { keys: Vec<PauliString> },
    /// `E_k(rho) = (1/|I|) sum_i |i><i| (x) P_{h_i(k)} rho P_{h_i(k)}^dagger`.
    XorUniversal { family: XorUniversalFamily, keys: Vec<u64> },
}

#[derive(Clone, Debug)]
pub struct KeyedCipher {
    name: String,
    n: usize,
    kind: CipherKind,
    plaintext_label: String,
    key_source: String,
    set_provenance: String,
    delta: Option<f64>,
}

/// Serialisable summary of a cipher.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CipherDescription {
    pub name: String,
    pub n: usize,
    pub key_source: String,
    pub set_provenance: String,
    pub key_bits: f64,
}

/// Key-averaged ciphertext and the image of the maximally mixed plaintext.
#[derive(Clone, Debug)]
pub struct AverageChannelResult {
    pub rho_out: DensityOperator,
    pub omega: DensityOperator,
}

/// Perfect encryption: all `4^n` Pauli strings.
pub fn make_full_pad(n: usize) -> Result<KeyedCipher> {
    check_n(n)?;
    Ok(KeyedCipher {
        name: "pauli-pad".into(),
        n,
        kind: CipherKind::PauliMask { keys: all_paulis(n).collect() },
        plaintext_label: PLAINTEXT_LABEL.into(),
        key_source: format!("all {}-bit strings", 2 * n),
        set_provenance: "full".into(),
        delta: Some(0.0),
    })
}

/// Conjugation by `X^a Z^b` for `a || b` drawn from a delta-biased set.
pub fn make_ambainis_smith(n: usize, set: &DeltaBiasedSet) -> Result<KeyedCipher> {
    check_n(n)?;
    if set.n() != 2 * n {
        return Err(Error::DimensionMismatch(format!(
            "set of {}-bit strings for a {n}-qubit cipher",
            set.n()
        )));
    }
    let keys = set
        .strings()
        .iter()
        .map(PauliString::from_concat)
        .collect::<Result<Vec<_>>>()?;
    let provenance = match set.provenance() {
        Provenance::Aghp { m } => format!("aghp(m={m})"),
        Provenance::Explicit => "explicit".into(),
    };
    Ok(KeyedCipher {
        name: "ambainis-smith".into(),
        n,
        kind: CipherKind::PauliMask { keys },
        plaintext_label: PLAINTEXT_LABEL.into(),
        key_source: "delta-biased set".into(),
        set_provenance: provenance,
        delta: Some(set.delta_bound()),
    })
}

/// Conjugation by a uniformly chosen element of an explicit list of
/// distinct Pauli strings.
pub fn make_pauli_subset(n: usize, keys: Vec<PauliString>) -> Result<KeyedCipher> {
    check_n(n)?;
    if keys.is_empty() {
        return Err(Error::InvalidArgument("empty key set".into()));
    }
    if keys.iter().any(|p| p.n_qubits() != n) {
        return Err(Error::DimensionMismatch(format!("key is not an {n}-qubit Pauli string")));
    }
    check_distinct(keys.iter().map(|p| p.to_concat().value()))?;
    Ok(KeyedCipher {
        name: "pauli-subset".into(),
        n,
        kind: CipherKind::PauliMask { keys },
        plaintext_label: PLAINTEXT_LABEL.into(),
        key_source: "explicit".into(),
        set_provenance: "explicit".into(),
        delta: None,
    })
}

/// XOR-universal cipher over a family of width `2n` with the given keys.
pub fn make_xor_universal(n: usize, family: XorUniversalFamily, keys: Vec<u64>) -> Result<KeyedCipher> {
    check_n(n)?;
    if family.width() as usize != 2 * n {
        return Err(Error::DimensionMismatch(format!(
            "family of width {} for a {n}-qubit cipher",
            family.width()
        )));
    }
    if keys.is_empty() {
        return Err(Error::InvalidArgument("empty key set".into()));
    }
    if let Some(k) = keys.iter().find(|&&k| k >= family.index_count()) {
        return Err(Error::InvalidArgument(format!("key {k} has more than {} bits", 2 * n)));
    }
    check_distinct(keys.iter().copied())?;
    Ok(KeyedCipher {
        name: "xor-universal".into(),
        n,
        kind: CipherKind::XorUniversal { family, keys },
        plaintext_label: PLAINTEXT_LABEL.into(),
        key_source: "explicit".into(),
        set_provenance: format!("gf(2^{})", family.width()),
        delta: None,
    })
}

/// XOR-universal cipher keyed by the first `key_count` strings in
/// lexicographic order.
pub fn make_xor_universal_default(n: usize, key_count: u64) -> Result<KeyedCipher> {
    check_n(n)?;
    let family = XorUniversalFamily::new(2 * n as u32)?;
    if key_count == 0 || key_count > family.index_count() {
        return Err(Error::InvalidArgument(format!(
            "key count {key_count} outside 1..={}",
            family.index_count()
        )));
    }
    let mut c = make_xor_universal(n, family, (0..key_count).collect())?;
    c.key_source = format!("first {key_count} lexicographic");
    Ok(c)
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidArgument(format!("message length {n} outside 1..=8 qubits")));
    }
    Ok(())
}

fn check_distinct(keys: impl Iterator<Item = u64>) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for k in keys {
        if !seen.insert(k) {
            return Err(Error::InvalidArgument(format!("duplicate key {k:#x}")));
        }
    }
    Ok(())
}

fn pauli_of(v: u64, n: usize) -> PauliString {
    PauliString::from_ints(v >> n, v & ((1 << n) - 1), n).expect("value has 2n bits")
}

impl KeyedCipher {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of message qubits.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &CipherKind {
        &self.kind
    }

    pub fn key_count(&self) -> usize {
        match &self.kind {
            CipherKind::PauliMask { keys } => keys.len(),
            CipherKind::XorUniversal { keys, .. } => keys.len(),
        }
    }

    pub fn key_bits(&self) -> f64 {
        (self.key_count() as f64).log2()
    }

    /// Bias bound of the key set, for delta-biased ciphers.
    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn plaintext_label(&self) -> &str {
        &self.plaintext_label
    }

    /// Renames the subsystem the cipher acts on.
    pub fn with_plaintext_label(mut self, label: &str) -> Self {
        self.plaintext_label = label.to_string();
        self
    }

    pub fn is_length_preserving(&self) -> bool {
        matches!(self.kind, CipherKind::PauliMask { .. })
    }

    /// Number of index-register values.
    pub fn sector_count(&self) -> usize {
        match &self.kind {
            CipherKind::PauliMask { .. } => 1,
            CipherKind::XorUniversal { family, .. } => family.index_count() as usize,
        }
    }

    /// The masks applied under key `key` in each sector.
    pub fn masks(&self, key: usize) -> Result<Vec<PauliString>> {
        if key >= self.key_count() {
            return Err(Error::InvalidArgument(format!(
                "key index {key} out of range for {} keys",
                self.key_count()
            )));
        }
        Ok(match &self.kind {
            CipherKind::PauliMask { keys } => vec![keys[key]],
            CipherKind::XorUniversal { family, keys } => (0..family.index_count())
                .map(|i| pauli_of(family.eval(i, keys[key]).expect("in range"), self.n))
                .collect(),
        })
    }

    pub fn describe(&self) -> CipherDescription {
        CipherDescription {
            name: self.name.clone(),
            n: self.n,
            key_source: self.key_source.clone(),
            set_provenance: self.set_provenance.clone(),
            key_bits: self.key_bits(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.describe()).expect("description serialises")
    }

    /// Subsystem layout of the ciphertext for plaintext layout `input`.
    pub fn output_layout(&self, input: &Layout) -> Result<Layout> {
        self.check_input(input)?;
        match &self.kind {
            CipherKind::PauliMask { .. } => Ok(input.clone()),
            CipherKind::XorUniversal { .. } => {
                Layout::single(INDEX_LABEL, self.sector_count())?.concat(input)
            }
        }
    }

    fn check_input(&self, layout: &Layout) -> Result<()> {
        let d = layout.dim_of(&self.plaintext_label)?;
        if d != 1 << self.n {
            return Err(Error::DimensionMismatch(format!(
                "{}-qubit cipher on subsystem `{}` of dimension {d}",
                self.n, self.plaintext_label
            )));
        }
        Ok(())
    }

    /// Per-sector ciphertext blocks for one key, each of unit trace.
    pub fn encrypt_sectors(&self, key: usize, rho: &DensityOperator) -> Result<Vec<CMatrix>> {
        self.check_input(rho.layout())?;
        self.masks(key)?
            .iter()
            .map(|p| conjugate_matrix(p, rho.matrix(), rho.layout(), &self.plaintext_label))
            .collect()
    }

    /// Explicit ciphertext under key `key`.
    pub fn encrypt(&self, key: usize, rho: &DensityOperator) -> Result<DensityOperator> {
        let out_layout = self.output_layout(rho.layout())?;
        let sectors = self.encrypt_sectors(key, rho)?;
        Ok(DensityOperator::from_raw(assemble(&sectors, &out_layout)?, out_layout))
    }

    /// Inverts `encrypt` for the same key. For the XOR-universal cipher the
    /// index register is measured and discarded.
    pub fn decrypt(&self, key: usize, ct: &DensityOperator) -> Result<DensityOperator> {
        let masks = self.masks(key)?;
        match &self.kind {
            CipherKind::PauliMask { .. } => {
                let m = conjugate_matrix(&masks[0], ct.matrix(), ct.layout(), &self.plaintext_label)?;
                Ok(DensityOperator::from_raw(m, ct.layout().clone()))
            }
            CipherKind::XorUniversal { .. } => {
                if ct.labels().first().map(String::as_str) != Some(INDEX_LABEL)
                    || ct.dims()[0] != masks.len()
                {
                    return Err(Error::DimensionMismatch(format!(
                        "ciphertext must start with a {}-dimensional `{INDEX_LABEL}` register",
                        masks.len()
                    )));
                }
                let inner_labels: Vec<&str> = ct.labels()[1..].iter().map(String::as_str).collect();
                let inner = ct.layout().select(&inner_labels)?;
                self.check_input(&inner)?;
                let d = inner.total_dim();
                let mut out = CMatrix::zeros(d, d);
                for (i, p) in masks.iter().enumerate() {
                    let block = ct.matrix().view((i * d, i * d), (d, d)).into_owned();
                    out += conjugate_matrix(p, &block, &inner, &self.plaintext_label)?;
                }
                Ok(DensityOperator::from_raw(out, inner))
            }
        }
    }

    /// Key-averaged sectors `(1/|K|) sum_k block_i(k)`, each of unit trace.
    pub fn average_sectors(&self, rho: &DensityOperator) -> Result<Vec<CMatrix>> {
        self.average_sectors_of(rho.matrix(), rho.layout())
    }

    fn average_sectors_of(&self, m: &CMatrix, layout: &Layout) -> Result<Vec<CMatrix>> {
        self.check_input(layout)?;
        let label = self.plaintext_label.as_str();
        let d = m.nrows();
        let w = C64::new(1.0 / self.key_count() as f64, 0.0);
        match &self.kind {
            CipherKind::PauliMask { keys } => {
                let mut acc = CMatrix::zeros(d, d);
                for p in keys {
                    acc += conjugate_matrix(p, m, layout, label)?;
                }
                Ok(vec![acc * w])
            }
            CipherKind::XorUniversal { family, keys } => (0..family.index_count())
                .map(|i| {
                    let mut acc = CMatrix::zeros(d, d);
                    for &k in keys {
                        let p = pauli_of(family.eval(i, k)?, self.n);
                        acc += conjugate_matrix(&p, m, layout, label)?;
                    }
                    Ok(acc * w)
                })
                .collect(),
        }
    }

    /// `(1/|K|) sum_k E_k(rho)` and `Omega = E(I/d_A)`.
    pub fn average_channel(&self, rho: &DensityOperator) -> Result<AverageChannelResult> {
        let out_layout = self.output_layout(rho.layout())?;
        let sectors = self.average_sectors(rho)?;
        let rho_out = DensityOperator::from_raw(assemble(&sectors, &out_layout)?, out_layout);
        let omega_sectors = self.omega_sectors()?;
        let a_layout = Layout::single(&self.plaintext_label, 1 << self.n)?;
        let omega_layout = self.output_layout(&a_layout)?;
        let omega = DensityOperator::from_raw(assemble(&omega_sectors, &omega_layout)?, omega_layout);
        Ok(AverageChannelResult { rho_out, omega })
    }

    /// Sectors of `Omega = E(I/d_A)` on the plaintext system alone.
    pub fn omega_sectors(&self) -> Result<Vec<CMatrix>> {
        let a_layout = Layout::single(&self.plaintext_label, 1 << self.n)?;
        let mixed = DensityOperator::maximally_mixed(a_layout.clone());
        self.average_sectors_of(mixed.matrix(), &a_layout)
    }

    /// Choi matrix `sum_ij |i><j|_R (x) E(|i><j|)` of the key-averaged
    /// channel on the plaintext system, with the reference `R` first.
    pub fn choi_matrix(&self) -> Result<HermitianOperator> {
        if self.n > 2 {
            return Err(Error::TooLarge(1 << (2 * self.n)));
        }
        let d = 1usize << self.n;
        let a_layout = Layout::single(&self.plaintext_label, d)?;
        let out_layout = self.output_layout(&a_layout)?;
        let dout = out_layout.total_dim();
        let mut choi = CMatrix::zeros(d * dout, d * dout);
        for i in 0..d {
            for j in 0..d {
                let mut e = CMatrix::zeros(d, d);
                e[(i, j)] = C64::new(1.0, 0.0);
                let sectors = self.average_sectors_of(&e, &a_layout)?;
                let img = assemble(&sectors, &out_layout)?;
                choi.view_mut((i * dout, j * dout), (dout, dout)).copy_from(&img);
            }
        }
        let layout = Layout::single("R", d)?.concat(&out_layout)?;
        HermitianOperator::new(choi, layout)
    }
}

/// Block-diagonal `(1/S) sum_i |i><i| (x) sector_i`, or the single sector.
fn assemble(sectors: &[CMatrix], out_layout: &Layout) -> Result<CMatrix> {
    if sectors.len() == 1 {
        return Ok(sectors[0].clone());
    }
    let total = out_layout.total_dim();
    if total > tol::MAX_JOINT_DIM {
        return Err(Error::TooLarge(total));
    }
    let d = sectors[0].nrows();
    let w = C64::new(1.0 / sectors.len() as f64, 0.0);
    let mut out = CMatrix::zeros(total, total);
    for (i, s) in sectors.iter().enumerate() {
        out.view_mut((i * d, i * d), (d, d)).copy_from(&(s * w));
    }
    Ok(out)
}

/// Parses a `2n`-bit key given in hex.
pub fn key_from_hex(hex: &str, n: usize) -> Result<PauliString> {
    PauliString::from_concat(&BitString::from_hex(hex, 2 * n)?)
}
