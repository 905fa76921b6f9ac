//! Finite field arithmetic on integer labels.
//!
//! Two families are supported: binary extension fields GF(2^t), whose
//! elements are polynomial coefficient bitmasks reduced modulo a fixed
//! irreducible polynomial, and prime fields GF(p) used for p-rank
//! computations. Labels are plain `u32`s in `0..order`.

use thiserror::Error;

/// Largest degree accepted for a binary extension field.
pub const MAX_BINARY_DEGREE: u32 = 31;

/// Canonical moduli for degrees 1 through 6, as coefficient bitmasks.
const CANONICAL_MODULI: [u64; 6] = [
    0b11,      // x + 1
    0b111,     // x^2 + x + 1
    0b1011,    // x^3 + x + 1
    0b10011,   // x^4 + x + 1
    0b100101,  // x^5 + x^2 + 1
    0b1000011, // x^6 + x + 1
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("degree {0} has no canonical modulus; supply one explicitly")]
    NoCanonicalModulus(u32),
    #[error("degree {0} is outside 1..={MAX_BINARY_DEGREE}")]
    BadDegree(u32),
    #[error("modulus {modulus:#b} does not have degree {degree}")]
    ModulusDegree { modulus: u64, degree: u32 },
    #[error("modulus {0:#b} is reducible over GF(2)")]
    Reducible(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("label {label} is out of range for a field of order {order}")]
    OutOfRange { label: u32, order: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("trace is only defined here for binary extension fields")]
    NotBinary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// GF(2^degree) reduced modulo `modulus` (bit i = coefficient of x^i).
    Binary { degree: u32, modulus: u64 },
    /// GF(p).
    Prime { modulus: u32 },
}

/// Which field to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Binary(u32),
    BinaryWithModulus(u32, u64),
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    kind: FieldKind,
    order: u32,
}

impl Field {
    pub fn create(spec: FieldSpec) -> Result<Self, GfError> {
        match spec {
            FieldSpec::Binary(t) => Self::binary(t),
            FieldSpec::BinaryWithModulus(t, m) => Self::binary_with_modulus(t, m),
            FieldSpec::Prime(p) => Self::prime(p),
        }
    }

    /// GF(2^t) with the canonical modulus for `t` in 1..=6.
    pub fn binary(t: u32) -> Result<Self, GfError> {
        if t == 0 || t > MAX_BINARY_DEGREE {
            return Err(GfError::BadDegree(t));
        }
        let modulus = *CANONICAL_MODULI
            .get(t as usize - 1)
            .ok_or(GfError::NoCanonicalModulus(t))?;
        Self::binary_with_modulus(t, modulus)
    }

    pub fn binary_with_modulus(t: u32, modulus: u64) -> Result<Self, GfError> {
        if t == 0 || t > MAX_BINARY_DEGREE {
            return Err(GfError::BadDegree(t));
        }
        if poly_degree(modulus) != Some(t) {
            return Err(GfError::ModulusDegree { modulus, degree: t });
        }
        if !is_irreducible(modulus) {
            return Err(GfError::Reducible(modulus));
        }
        Ok(Field {
            kind: FieldKind::Binary { degree: t, modulus },
            order: 1u32 << t,
        })
    }

    pub fn prime(p: u64) -> Result<Self, GfError> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        Ok(Field {
            kind: FieldKind::Prime { modulus: p as u32 },
            order: p as u32,
        })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_binary(&self) -> bool {
        matches!(self.kind, FieldKind::Binary { .. })
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Binary { .. } => 2,
            FieldKind::Prime { modulus } => modulus,
        }
    }

    /// Bitmask of the reduction polynomial, binary fields only.
    pub fn modulus_poly(&self) -> Option<u64> {
        match self.kind {
            FieldKind::Binary { modulus, .. } => Some(modulus),
            FieldKind::Prime { .. } => None,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }

    fn check(&self, label: u32) -> Result<u32, GfError> {
        if label < self.order {
            Ok(label)
        } else {
            Err(GfError::OutOfRange {
                label,
                order: self.order,
            })
        }
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        match self.kind {
            FieldKind::Binary { .. } => a ^ b,
            FieldKind::Prime { modulus } => ((a as u64 + b as u64) % modulus as u64) as u32,
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            FieldKind::Binary { .. } => a,
            FieldKind::Prime { modulus } => {
                if a == 0 {
                    0
                } else {
                    modulus - a
                }
            }
        }
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Product of two labels. Panics in debug builds on out-of-range input;
    /// use [`Field::try_mul`] for checked access.
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        match self.kind {
            FieldKind::Binary { degree, modulus } => {
                let top = 1u64 << degree;
                let mut acc = 0u64;
                let mut a = a as u64;
                let mut b = b;
                while b != 0 {
                    if b & 1 == 1 {
                        acc ^= a;
                    }
                    b >>= 1;
                    a <<= 1;
                    if a & top != 0 {
                        a ^= modulus;
                    }
                }
                acc as u32
            }
            FieldKind::Prime { modulus } => ((a as u64 * b as u64) % modulus as u64) as u32,
        }
    }

    pub fn try_mul(&self, a: u32, b: u32) -> Result<u32, GfError> {
        Ok(self.mul(self.check(a)?, self.check(b)?))
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let mut result = 1;
        let mut base = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        result
    }

    pub fn inv(&self, a: u32) -> Result<u32, GfError> {
        self.check(a)?;
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        // a^(order - 2) by Lagrange
        Ok(self.pow(a, self.order as u64 - 2))
    }

    /// Absolute trace a + a^2 + ... + a^(2^(t-1)) of a binary field element.
    pub fn trace(&self, a: u32) -> Result<u32, GfError> {
        let FieldKind::Binary { degree, .. } = self.kind else {
            return Err(GfError::NotBinary);
        };
        self.check(a)?;
        let mut sum = 0;
        let mut term = a;
        for _ in 0..degree {
            sum ^= term;
            term = self.mul(term, term);
        }
        debug_assert!(sum <= 1);
        Ok(sum)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: u32) -> Option<u64> {
        if a == 0 || a >= self.order {
            return None;
        }
        let mut x = a;
        let mut n = 1u64;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        Some(n)
    }

    /// Smallest label generating the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        let target = self.order as u64 - 1;
        (1..self.order)
            .find(|&a| self.element_order(a) == Some(target))
            .expect("the multiplicative group of a finite field is cyclic")
    }
}

fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of carry-less division of `a` by `m`.
fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("nonzero divisor");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

/// True when `p` has no factor of degree 1..=deg(p)/2 over GF(2).
pub fn is_irreducible(p: u64) -> bool {
    let Some(d) = poly_degree(p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    for fd in 1..=d / 2 {
        for low in 0..(1u64 << fd) {
            let f = (1u64 << fd) | low;
            if poly_rem(p, f) == 0 {
                return false;
            }
        }
    }
    true
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
