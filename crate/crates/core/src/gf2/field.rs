use crate::error::{Error, Result};

/// Low-weight irreducible polynomials over GF(2), indexed by degree.
/// Bit `k` of the mask is the coefficient of `x^k`.
const MODULI: [u32; 17] = [
    0,
    0b11,        // x + 1
    0b111,       // x^2 + x + 1
    0b1011,      // x^3 + x + 1
    0b1_0011,    // x^4 + x + 1
    0b10_0101,   // x^5 + x^2 + 1
    0b100_0011,  // x^6 + x + 1
    0b1000_0011, // x^7 + x + 1
    0x11b,       // x^8 + x^4 + x^3 + x + 1
    0x211,       // x^9 + x^4 + 1
    0x409,       // x^10 + x^3 + 1
    0x805,       // x^11 + x^2 + 1
    0x1053,      // x^12 + x^6 + x^4 + x + 1
    0x201b,      // x^13 + x^4 + x^3 + x + 1
    0x4443,      // x^14 + x^10 + x^6 + x + 1
    0x8003,      // x^15 + x + 1
    0x1100b,     // x^16 + x^12 + x^3 + x + 1
];

pub const MAX_DEGREE: u32 = 16;

/// The field GF(2^m) in polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GfField {
    m: u32,
    modulus: u32,
}

impl GfField {
    /// Field of degree `m` with the built-in modulus.
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("field degree {m} outside 1..=16")));
        }
        Ok(Self { m, modulus: MODULI[m as usize] })
    }

    /// Field with an explicit modulus, which must be irreducible of degree `m`.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::InvalidArgument(format!("field degree {m} outside 1..=16")));
        }
        if degree(modulus) != Some(m) || !is_irreducible(modulus) {
            return Err(Error::InvalidArgument(format!(
                "modulus {modulus:#b} is not an irreducible polynomial of degree {m}"
            )));
        }
        Ok(Self { m, modulus })
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    /// Carry-less product reduced by the modulus.
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        debug_assert!(x < self.order() && y < self.order());
        let mut acc = 0u64;
        let mut a = x;
        let mut b = y;
        let top = 1u64 << self.m;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus as u64;
            }
        }
        acc
    }

    pub fn pow(&self, x: u64, e: u32) -> u64 {
        (0..e).fold(1, |acc, _| self.mul(acc, x))
    }
}

fn degree(p: u32) -> Option<u32> {
    (p != 0).then(|| 31 - p.leading_zeros())
}

/// Remainder of polynomial division over GF(2).
pub(crate) fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = 63 - b.leading_zeros();
    while a != 0 && 63 - a.leading_zeros() >= db {
        a ^= b << (63 - a.leading_zeros() - db);
    }
    a
}

/// Exhaustive search for a factor of degree 1..=deg/2.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = degree(p) else { return false };
    if d == 0 {
        return false;
    }
    for f in 2u64..(1u64 << (d / 2 + 1)) {
        if poly_rem(p as u64, f) == 0 {
            return false;
        }
    }
    true
}
