//! Sufficient and necessary key lengths, next to what the AGHP construction
//! actually delivers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::aghp_degree;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeyLengthRow {
    pub n: usize,
    pub t: f64,
    pub epsilon: f64,
    /// `n - t + 2 log n + 2 log(1/epsilon) + 2`.
    pub as_bits: f64,
    /// `n - t + 2 log(1/epsilon)`.
    pub xu_bits: f64,
    /// `n - t - 1`.
    pub lower_bits: f64,
    /// Bias the delta-biased cipher needs: `epsilon 2^{-(n-t)/2}`, capped at 1.
    pub aghp_delta: f64,
    /// Field degree of the AGHP set on `2n`-bit strings.
    pub aghp_m: u32,
    /// `log|S| = 2m` for the constructed set.
    pub aghp_bits: f64,
    /// `log((2n)^2 / delta^2)`, the nominal set size.
    pub aghp_nominal_bits: f64,
}

pub fn key_length_row(n: usize, t: f64, epsilon: f64) -> Result<KeyLengthRow> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    if t > n as f64 || t < -(n as f64) {
        return Err(Error::InvalidArgument(format!("t = {t} outside [-{n}, {n}]")));
    }
    let nf = n as f64;
    let log_inv_eps = (1.0 / epsilon).log2();
    let aghp_delta = (epsilon * 2f64.powf(-(nf - t) / 2.0)).min(1.0);
    let aghp_m = aghp_degree(2 * n, aghp_delta)?;
    Ok(KeyLengthRow {
        n,
        t,
        epsilon,
        as_bits: nf - t + 2.0 * nf.log2() + 2.0 * log_inv_eps + 2.0,
        xu_bits: nf - t + 2.0 * log_inv_eps,
        lower_bits: nf - t - 1.0,
        aghp_delta,
        aghp_m,
        aghp_bits: 2.0 * aghp_m as f64,
        aghp_nominal_bits: 2.0 * (2.0 * nf).log2() + 2.0 * (1.0 / aghp_delta).log2(),
    })
}

/// One row per `(t, epsilon)` pair, `t` outer.
pub fn key_length_table(n: usize, t_grid: &[f64], eps_grid: &[f64]) -> Result<Vec<KeyLengthRow>> {
    let mut rows = Vec::with_capacity(t_grid.len() * eps_grid.len());
    for &t in t_grid {
        for &e in eps_grid {
            rows.push(key_length_row(n, t, e)?);
        }
    }
    Ok(rows)
}

/// Integer grid `-n, ..., n`.
pub fn default_t_grid(n: usize) -> Vec<f64> {
    (-(n as i64)..=n as i64).map(|t| t as f64).collect()
}

pub fn key_length_csv(rows: &[KeyLengthRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "n", "t", "epsilon", "as_bits", "xu_bits", "lower_bits", "aghp_delta", "aghp_m",
            "aghp_bits", "aghp_nominal_bits",
        ])
        .map_err(|e| Error::Io(e.to_string()))?;
    }
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
