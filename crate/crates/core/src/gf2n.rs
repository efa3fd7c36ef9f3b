//! Arithmetic in GF(2^n) for 1 <= n <= 16.
//!
//! Elements are stored as coefficient vectors in the polynomial basis of the
//! context modulus, LSB first: bit `i` is the coefficient of `x^i`. Addition
//! is exclusive-or and needs no context, so [`FieldElement`] implements
//! [`std::ops::Add`] directly; everything else goes through a
//! [`FieldContext`].

use std::fmt;
use std::ops::{Add, AddAssign};

use crate::error::{Error, Result};

/// Largest supported extension degree. Keeps q^2 - 1 inside 32 bits.
pub const MAX_DEGREE: u32 = 16;

/// An element of GF(2^n), encoded LSB-first.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    /// Unchecked construction; callers guarantee `bits < q`.
    #[inline]
    pub(crate) fn from_raw(bits: u32) -> Self {
        FieldElement(bits)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl Add for FieldElement {
    type Output = FieldElement;

    // Addition in characteristic 2 is XOR.
    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// GF(2^n) with a fixed binary modulus. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldContext {
    n: u32,
    modulus: u32,
    q: u32,
    /// Prime factorization of q^2 - 1 as (prime, exponent).
    factors_q2m1: Vec<(u64, u32)>,
    /// Prime factorization of q - 1 as (prime, exponent).
    factors_qm1: Vec<(u64, u32)>,
    /// Bit i is Tr(x^i); the trace is GF(2)-linear so Tr(v) = parity(v & mask).
    trace_mask: u32,
}

impl FieldContext {
    /// Builds GF(2^n). Without an explicit modulus the smallest irreducible
    /// encoding of degree `n` is used.
    pub fn new(n: u32, modulus: Option<u32>) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&n) {
            return Err(Error::DegreeOutOfRange(n));
        }
        let modulus = match modulus {
            Some(m) => {
                if poly_degree(m as u64) != Some(n) || !is_irreducible_gf2(m as u64) {
                    return Err(Error::InvalidModulus { n, modulus: m });
                }
                m
            }
            None => default_modulus(n),
        };
        let q = 1u32 << n;
        let q64 = q as u64;
        let mut ctx = FieldContext {
            n,
            modulus,
            q,
            factors_q2m1: factorize(q64 * q64 - 1),
            factors_qm1: factorize(q64 - 1),
            trace_mask: 0,
        };
        ctx.trace_mask = (0..n)
            .filter(|&i| ctx.trace_by_squaring(FieldElement(1 << i)) == 1)
            .fold(0, |m, i| m | (1 << i));
        Ok(ctx)
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn factorization_q2m1(&self) -> &[(u64, u32)] {
        &self.factors_q2m1
    }

    pub fn factorization_qm1(&self) -> &[(u64, u32)] {
        &self.factors_qm1
    }

    /// Validates an integer encoding against this field.
    pub fn element(&self, bits: u32) -> Result<FieldElement> {
        if bits < self.q {
            Ok(FieldElement(bits))
        } else {
            Err(Error::NotInField { n: self.n, bits })
        }
    }

    #[inline]
    pub fn contains(&self, x: FieldElement) -> bool {
        x.0 < self.q
    }

    /// All field elements in increasing encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x) && self.contains(y));
        x + y
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        debug_assert!(self.contains(x) && self.contains(y));
        let mut a = x.0;
        let mut b = y.0;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
        }
        FieldElement(self.reduce(acc))
    }

    #[inline]
    pub fn square(&self, x: FieldElement) -> FieldElement {
        self.mul(x, x)
    }

    /// Reduces a polynomial of degree < 2n modulo the context modulus.
    #[inline]
    fn reduce(&self, mut v: u32) -> u32 {
        let n = self.n;
        let mut bit = 2 * n - 1;
        while bit >= n {
            if v & (1 << bit) != 0 {
                v ^= self.modulus << (bit - n);
            }
            bit -= 1;
        }
        v
    }

    pub fn pow(&self, x: FieldElement, mut e: u64) -> FieldElement {
        let mut base = x;
        let mut acc = FieldElement::ONE;
        while e != 0 {
            if e & 1 != 0 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via x^(q-2).
    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(self.pow(x, self.q as u64 - 2))
    }

    /// Absolute trace Tr: GF(2^n) -> GF(2), returned as 0 or 1.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u8 {
        ((x.0 & self.trace_mask).count_ones() & 1) as u8
    }

    /// Tr(x) = x + x^2 + ... + x^(2^(n-1)) evaluated with n-1 squarings.
    pub fn trace_by_squaring(&self, x: FieldElement) -> u8 {
        let mut acc = x;
        let mut cur = x;
        for _ in 1..self.n {
            cur = self.square(cur);
            acc += cur;
        }
        debug_assert!(acc.0 <= 1, "trace left GF(2)");
        acc.0 as u8
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let mut order = self.q as u64 - 1;
        for &(r, e) in &self.factors_qm1 {
            for _ in 0..e {
                if self.pow(x, order / r) == FieldElement::ONE {
                    order /= r;
                } else {
                    break;
                }
            }
        }
        Ok(order)
    }

    pub fn is_primitive_element(&self, x: FieldElement) -> Result<bool> {
        Ok(self.element_order(x)? == self.q as u64 - 1)
    }
}

/// Degree of a nonzero binary polynomial.
pub(crate) fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn poly_rem_gf2(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most deg/2. A nonzero constant term is required, so `x` itself
/// is rejected.
pub fn is_irreducible_gf2(p: u64) -> bool {
    let Some(d) = poly_degree(p) else {
        return false;
    };
    if d == 0 || p & 1 == 0 {
        return false;
    }
    for div_deg in 1..=d / 2 {
        for low in 0..(1u64 << div_deg) {
            let divisor = (1u64 << div_deg) | low;
            if poly_rem_gf2(p, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Smallest irreducible encoding of degree `n`.
pub fn default_modulus(n: u32) -> u32 {
    ((1u32 << n)..(1u32 << (n + 1)))
        .find(|&m| is_irreducible_gf2(m as u64))
        .expect("an irreducible polynomial exists in every degree")
}

/// Trial-division factorization, primes in increasing order.
pub fn factorize(mut m: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}
