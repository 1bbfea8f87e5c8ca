//! Arithmetic in GF(2^m), delta-biased sets and XOR-universal hashing.

mod bias;
mod field;
mod xor_universal;

pub use bias::{
    aghp_construct, aghp_degree, aghp_with_degree, measure_bias, DeltaBiasedSet, Provenance,
    MAX_BIAS_BITS,
};
pub use field::{is_irreducible, GfField, MAX_DEGREE};
pub use xor_universal::{xor_universality_deviation, XorUniversalFamily};
