//! Arithmetic in binary fields GF(2^k) for 2 <= k <= 24.
//!
//! Elements use the polynomial basis: bit `i` of an [`Elt`] is the
//! coefficient of `X^i`. A [`FieldSpec`] fixes the degree and the
//! irreducible modulus. Multiplication goes through exp/log tables once
//! [`FieldSpec::build_tables`] has been called, and falls back to
//! carry-less schoolbook multiplication otherwise.
//!
//! `0^0` is defined as `1`. Power maps used elsewhere in the crate send
//! `0` to `0` explicitly and never depend on this convention.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 24;

/// A field element as a `k`-bit polynomial-basis vector.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Elt(pub u32);

impl Elt {
    pub const ZERO: Elt = Elt(0);
    pub const ONE: Elt = Elt(1);

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::LowerHex for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

/// Parses an element written in hexadecimal, with or without a `0x` prefix.
pub fn parse_hex_elt(s: &str) -> Option<Elt> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if t.is_empty() {
        return None;
    }
    u32::from_str_radix(t, 16).ok().map(Elt)
}

#[derive(Debug)]
struct Tables {
    /// `exp[i] = g^i` for `0 <= i < 2^k - 1`, and `exp[2^k - 1] = 1`.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A binary field GF(2^k) fixed by its degree and irreducible modulus.
///
/// Immutable once built; clones share the exp/log tables.
#[derive(Clone, Debug)]
pub struct FieldSpec {
    degree: u32,
    modulus: u64,
    generator: Option<Elt>,
    tables: Option<Arc<Tables>>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

/// Degree of a GF(2) polynomial stored as a bit vector, `None` for zero.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `b` over GF(2). `b` must be nonzero.
pub fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Irreducibility over GF(2) by trial division with every polynomial of
/// degree at most `deg(f) / 2`.
pub fn is_irreducible(f: u64) -> bool {
    let Some(deg) = poly_degree(f) else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for p in (1u64 << d)..(1u64 << (d + 1)) {
            if poly_rem(f, p) == 0 {
                return false;
            }
        }
    }
    true
}

/// The numerically smallest irreducible polynomial of degree `k`.
pub fn smallest_irreducible(k: u32) -> u64 {
    let lo = 1u64 << k;
    (lo..lo << 1)
        .find(|&f| is_irreducible(f))
        .expect("irreducible polynomials exist in every degree")
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl FieldSpec {
    /// Validates `modulus` (degree exactly `k`, irreducible) and returns the
    /// field without tables.
    pub fn new(k: u32, modulus: u64) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&k) {
            return Err(Error::InvalidDegree(k));
        }
        if poly_degree(modulus) != Some(k) {
            return Err(Error::WrongModulusDegree { degree: k, modulus });
        }
        if !is_irreducible(modulus) {
            return Err(Error::Reducible(modulus));
        }
        Ok(FieldSpec {
            degree: k,
            modulus,
            generator: None,
            tables: None,
        })
    }

    /// GF(2^k) over the smallest irreducible polynomial of degree `k`, with
    /// tables built.
    pub fn default_for(k: u32) -> Result<Self> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&k) {
            return Err(Error::InvalidDegree(k));
        }
        FieldSpec::new(k, smallest_irreducible(k))?.build_tables()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Field size `2^k`.
    #[inline]
    pub fn size(&self) -> u64 {
        1u64 << self.degree
    }

    /// Order of the multiplicative group, `2^k - 1`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        self.size() - 1
    }

    #[inline]
    pub fn contains(&self, x: Elt) -> bool {
        u64::from(x.0) < self.size()
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn generator(&self) -> Option<Elt> {
        self.generator
    }

    /// All field elements in increasing bit order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> + Clone {
        (0..self.size() as u32).map(Elt)
    }

    /// Hex rendering padded to the nibble width of the field.
    pub fn fmt_elt(&self, x: Elt) -> String {
        let width = self.degree.div_ceil(4) as usize;
        format!("0x{:0width$x}", x.0, width = width)
    }

    #[inline]
    pub fn add(&self, x: Elt, y: Elt) -> Elt {
        Elt(x.0 ^ y.0)
    }

    /// Carry-less product reduced by the modulus, independent of the tables.
    pub fn mul_schoolbook(&self, x: Elt, y: Elt) -> Elt {
        let k = self.degree;
        let a = u64::from(x.0);
        let mut b = u64::from(y.0);
        let mut acc = 0u64;
        let mut i = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a << i;
            }
            b >>= 1;
            i += 1;
        }
        let mut bit = 2 * k;
        while bit > k {
            bit -= 1;
            if (acc >> bit) & 1 == 1 {
                acc ^= self.modulus << (bit - k);
            }
        }
        Elt(acc as u32)
    }

    #[inline]
    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        match &self.tables {
            Some(t) => {
                if x.0 == 0 || y.0 == 0 {
                    return Elt::ZERO;
                }
                let order = self.group_order() as u32;
                let mut s = t.log[x.0 as usize] + t.log[y.0 as usize];
                if s >= order {
                    s -= order;
                }
                Elt(t.exp[s as usize])
            }
            None => self.mul_schoolbook(x, y),
        }
    }

    #[inline]
    pub fn square(&self, x: Elt) -> Elt {
        self.mul(x, x)
    }

    /// `x^(2^j)`.
    pub fn frobenius(&self, x: Elt, j: u32) -> Elt {
        let mut y = x;
        for _ in 0..j {
            y = self.square(y);
        }
        y
    }

    /// `x^e` by square-and-multiply over the full exponent, no reduction.
    pub fn pow_unreduced(&self, x: Elt, mut e: u64) -> Elt {
        let mut base = x;
        let mut acc = Elt::ONE;
        while e != 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            e >>= 1;
        }
        acc
    }

    /// `x^e` with `0^0 = 1`. For nonzero `x` the exponent is reduced modulo
    /// `2^k - 1` first.
    pub fn pow(&self, x: Elt, e: u64) -> Elt {
        if x.is_zero() {
            return if e == 0 { Elt::ONE } else { Elt::ZERO };
        }
        let order = self.group_order();
        let e = e % order;
        match &self.tables {
            Some(t) => {
                let l = u64::from(t.log[x.0 as usize]);
                Elt(t.exp[((l * e) % order) as usize])
            }
            None => self.pow_unreduced(x, e),
        }
    }

    pub fn inv(&self, x: Elt) -> Result<Elt> {
        if x.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[x.0 as usize];
                if l == 0 {
                    Elt::ONE
                } else {
                    Elt(t.exp[(self.group_order() as u32 - l) as usize])
                }
            }
            None => self.pow_unreduced(x, self.group_order() - 1),
        })
    }

    /// `x / y`; errors when `y = 0`.
    pub fn div(&self, x: Elt, y: Elt) -> Result<Elt> {
        Ok(self.mul(x, self.inv(y)?))
    }

    fn check_divisor(&self, l: u32) -> Result<()> {
        if l == 0 || !self.degree.is_multiple_of(l) {
            return Err(Error::NotADivisor { l, k: self.degree });
        }
        Ok(())
    }

    /// Relative trace from GF(2^k) down to GF(2^l).
    pub fn trace(&self, l: u32, x: Elt) -> Result<Elt> {
        self.relative_trace(l, self.degree, x)
    }

    /// Relative norm from GF(2^k) down to GF(2^l).
    pub fn norm(&self, l: u32, x: Elt) -> Result<Elt> {
        self.check_divisor(l)?;
        let mut acc = Elt::ONE;
        let mut conj = x;
        for _ in 0..self.degree / l {
            acc = self.mul(acc, conj);
            conj = self.frobenius(conj, l);
        }
        Ok(acc)
    }

    /// Trace from the subfield GF(2^m) down to GF(2^l), for `x` already in
    /// GF(2^m). Requires `l | m | k`.
    pub fn relative_trace(&self, l: u32, m: u32, x: Elt) -> Result<Elt> {
        self.check_divisor(m)?;
        if l == 0 || !m.is_multiple_of(l) {
            return Err(Error::NotADivisor { l, k: m });
        }
        let mut acc = Elt::ZERO;
        let mut conj = x;
        for _ in 0..m / l {
            acc = self.add(acc, conj);
            conj = self.frobenius(conj, l);
        }
        Ok(acc)
    }

    /// Whether `x` lies in the subfield GF(2^l), i.e. `x^(2^l) = x`.
    pub fn in_subfield(&self, l: u32, x: Elt) -> Result<bool> {
        self.check_divisor(l)?;
        Ok(self.frobenius(x, l) == x)
    }

    /// Discrete logarithm to the table generator. `None` without tables or
    /// for zero.
    pub fn log(&self, x: Elt) -> Option<u64> {
        match &self.tables {
            Some(t) if !x.is_zero() => Some(u64::from(t.log[x.0 as usize])),
            _ => None,
        }
    }

    /// `g^i` for the table generator, with `i` taken modulo `2^k - 1`.
    pub fn exp(&self, i: u64) -> Option<Elt> {
        let t = self.tables.as_ref()?;
        Some(Elt(t.exp[(i % self.group_order()) as usize]))
    }

    /// Smallest element (by bit value) of multiplicative order `2^k - 1`.
    pub fn find_generator(&self) -> Option<Elt> {
        let order = self.group_order();
        let primes = prime_factors(order);
        (1..self.size() as u32).map(Elt).find(|&g| {
            primes
                .iter()
                .all(|&p| self.pow_unreduced(g, order / p) != Elt::ONE)
        })
    }

    /// Returns the field with exp/log tables populated.
    pub fn build_tables(mut self) -> Result<Self> {
        if self.tables.is_some() {
            return Ok(self);
        }
        let g = self.find_generator().ok_or_else(|| {
            Error::Consistency(format!(
                "no generator found for modulus {:#x}",
                self.modulus
            ))
        })?;
        let size = self.size() as usize;
        let order = size - 1;
        let mut exp = vec![0u32; size];
        let mut log = vec![0u32; size];
        let mut cur = Elt::ONE;
        for (i, slot) in exp.iter_mut().enumerate().take(order) {
            *slot = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_schoolbook(cur, g);
        }
        if cur != Elt::ONE {
            return Err(Error::Consistency(format!(
                "generator {g} does not have order {order}"
            )));
        }
        exp[order] = 1;
        self.generator = Some(g);
        self.tables = Some(Arc::new(Tables { exp, log }));
        Ok(self)
    }
}
