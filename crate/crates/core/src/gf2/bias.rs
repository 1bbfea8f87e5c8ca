use super::field::GfField;
use crate::bits::{parity, BitString};
use crate::error::{Error, Result};

/// Largest string length for exhaustive bias measurement.
pub const MAX_BIAS_BITS: usize = 16;

/// Where a delta-biased set came from.
#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    /// Alon-Goldreich-Hastad-Peralta powering construction over GF(2^m).
    Aghp { m: u32 },
    Explicit,
}

/// A multiset of `n`-bit strings with a claimed bias bound.
#[derive(Clone, Debug)]
pub struct DeltaBiasedSet {
    n: usize,
    strings: Vec<BitString>,
    delta_bound: f64,
    provenance: Provenance,
}

impl DeltaBiasedSet {
    /// Wraps explicit strings. The claimed bound is the exactly measured bias.
    pub fn explicit(n: usize, strings: Vec<BitString>) -> Result<Self> {
        if strings.is_empty() {
            return Err(Error::InvalidArgument("empty set".into()));
        }
        if let Some(s) = strings.iter().find(|s| s.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "string of length {} in a set of {n}-bit strings",
                s.len()
            )));
        }
        let delta_bound = measure_bias(&strings)?;
        Ok(Self { n, strings, delta_bound, provenance: Provenance::Explicit })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn strings(&self) -> &[BitString] {
        &self.strings
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn delta_bound(&self) -> f64 {
        self.delta_bound
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// `log2 |S|`.
    pub fn log_size(&self) -> f64 {
        (self.strings.len() as f64).log2()
    }

    /// One hex string per line.
    pub fn to_hex_lines(&self) -> String {
        let mut out = String::new();
        for s in &self.strings {
            out.push_str(&s.to_hex());
            out.push('\n');
        }
        out
    }

    /// Parses the output of [`to_hex_lines`](Self::to_hex_lines). Blank lines are skipped.
    pub fn from_hex_lines(n: usize, text: &str) -> Result<Self> {
        let strings = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| BitString::from_hex(l, n))
            .collect::<Result<Vec<_>>>()?;
        Self::explicit(n, strings)
    }
}

/// `m = ceil(log2((n - 1) / delta))`, at least 1.
pub fn aghp_degree(n: usize, delta: f64) -> Result<u32> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidArgument(format!("delta {delta} outside (0, 1]")));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("string length must be positive".into()));
    }
    let ratio = (n as f64 - 1.0) / delta;
    let m = if ratio <= 1.0 { 1 } else { ratio.log2().ceil() as u32 };
    // Guard against log2 rounding just below an integer.
    let m = if ((n - 1) as f64) / 2f64.powi(m as i32) > delta { m + 1 } else { m };
    Ok(m.max(1))
}

/// AGHP set for a requested bias `delta`.
pub fn aghp_construct(n: usize, delta: f64) -> Result<DeltaBiasedSet> {
    let m = aghp_degree(n, delta)?;
    aghp_with_degree(n, m)
}

/// AGHP set over GF(2^m): the strings `r_{x,y}` with bit `i` equal to
/// `<x^i, y>` for `x, y` in the field and `i = 0..n-1`. Bias at most
/// `(n - 1) / 2^m`; size `2^{2m}`.
pub fn aghp_with_degree(n: usize, m: u32) -> Result<DeltaBiasedSet> {
    if m > super::field::MAX_DEGREE {
        return Err(Error::SetTooLarge(m));
    }
    if n == 0 || n > 64 {
        return Err(Error::InvalidArgument(format!("string length {n} outside 1..=64")));
    }
    if 2 * m > 24 {
        // 2^{2m} strings would not fit in memory at desk scale.
        return Err(Error::SetTooLarge(m));
    }
    let field = GfField::new(m)?;
    let q = field.order();
    let mut strings = Vec::with_capacity((q * q) as usize);
    let mut powers = vec![0u64; n];
    for x in 0..q {
        let mut p = 1u64;
        for slot in powers.iter_mut() {
            *slot = p;
            p = field.mul(p, x);
        }
        for y in 0..q {
            let mut value = 0u64;
            for &xi in &powers {
                value = (value << 1) | parity(xi & y) as u64;
            }
            strings.push(BitString::new(value, n)?);
        }
    }
    Ok(DeltaBiasedSet {
        n,
        strings,
        delta_bound: (n as f64 - 1.0) / q as f64,
        provenance: Provenance::Aghp { m },
    })
}

/// `max_{s' != 0} |mean_s (-1)^{s . s'}|`, by a fast Walsh-Hadamard transform
/// of the string histogram.
pub fn measure_bias(strings: &[BitString]) -> Result<f64> {
    let Some(first) = strings.first() else {
        return Err(Error::InvalidArgument("empty set".into()));
    };
    let n = first.len();
    if n > MAX_BIAS_BITS {
        return Err(Error::InvalidArgument(format!(
            "exhaustive bias needs n <= {MAX_BIAS_BITS}, got {n}"
        )));
    }
    let size = 1usize << n;
    let mut hist = vec![0i64; size];
    for s in strings {
        if s.len() != n {
            return Err(Error::DimensionMismatch("strings of mixed length".into()));
        }
        hist[s.value() as usize] += 1;
    }
    let mut h = 1;
    while h < size {
        for i in (0..size).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (hist[j], hist[j + h]);
                hist[j] = a + b;
                hist[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let total = strings.len() as f64;
    Ok(hist[1..].iter().map(|&c| (c as f64 / total).abs()).fold(0.0, f64::max))
}
