use super::field::GfField;
use crate::error::{Error, Result};

/// The family `h_i(k) = i * k` over GF(2^width), with every field element
/// (including zero) as an index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XorUniversalFamily {
    field: GfField,
}

impl XorUniversalFamily {
    pub fn new(width: u32) -> Result<Self> {
        Ok(Self { field: GfField::new(width)? })
    }

    pub fn with_field(field: GfField) -> Self {
        Self { field }
    }

    pub fn width(&self) -> u32 {
        self.field.degree()
    }

    pub fn field(&self) -> &GfField {
        &self.field
    }

    /// `|I| = 2^width`.
    pub fn index_count(&self) -> u64 {
        self.field.order()
    }

    pub fn eval(&self, i: u64, k: u64) -> Result<u64> {
        let q = self.field.order();
        if i >= q || k >= q {
            return Err(Error::InvalidArgument(format!(
                "index {i} or key {k} outside GF(2^{})",
                self.width()
            )));
        }
        Ok(self.field.mul(i, k))
    }
}

/// For every `x != y`, the histogram of `h_i(x) ^ h_i(y)` over all `i`.
/// Returns the largest deviation of `Pr_i[...]` from `2^-width`.
pub fn xor_universality_deviation(fam: &XorUniversalFamily) -> f64 {
    let q = fam.index_count();
    let mut worst = 0.0f64;
    let mut hist = vec![0u64; q as usize];
    for x in 0..q {
        for y in 0..q {
            if x == y {
                continue;
            }
            hist.iter_mut().for_each(|c| *c = 0);
            for i in 0..q {
                let a = fam.field.mul(i, x) ^ fam.field.mul(i, y);
                hist[a as usize] += 1;
            }
            for &c in &hist {
                worst = worst.max((c as f64 / q as f64 - 1.0 / q as f64).abs());
            }
        }
    }
    worst
}
