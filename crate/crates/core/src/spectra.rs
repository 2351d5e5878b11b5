//! Exhaustive differential and boomerang counts for permutations of GF(2^k).
//!
//! Everything here is brute force over lookup tables. Two independent routes
//! to the boomerang connectivity table are provided: [`bct_entry`] evaluates
//! the defining equation with `F` and `F^-1`, while [`bct_entry_system`] and
//! [`bct_row_system`] count pairs `(x, y)` with `F(x) + F(y) = b` and equal
//! derivatives, without touching the inverse table.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elt, FieldSpec};
use crate::structure::mu_enumerate;

/// Largest degree for which a general (non-power) table gets a full
/// `(a, b)` boomerang sweep.
pub const GENERAL_SWEEP_MAX_DEGREE: u32 = 12;

/// A permutation of GF(2^k) with its inverse.
#[derive(Clone, Debug)]
pub struct PermTable {
    field: FieldSpec,
    forward: Vec<u32>,
    inverse: Vec<u32>,
    exponent: Option<u64>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `x -> x^d` permutes GF(2^k) iff `gcd(d, 2^k - 1) = 1`.
pub fn is_permutation_exponent(k: u32, d: u64) -> bool {
    let order = (1u64 << k) - 1;
    gcd(d % order, order) == 1
}

/// Parses the `x f(x)` hexadecimal table format into a forward array indexed
/// by `x`. Blank lines and `#` comments are skipped. The entry count must be a
/// power of two and every `x` must appear exactly once.
pub fn parse_table(reader: impl BufRead) -> Result<Vec<u32>> {
    let mut pairs = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let (Some(xs), Some(ys), None) = (it.next(), it.next(), it.next()) else {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected `x f(x)`, got `{body}`"),
            });
        };
        let parse = |s: &str| {
            crate::field::parse_hex_elt(s).ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("bad hex value `{s}`"),
            })
        };
        pairs.push((parse(xs)?.0, parse(ys)?.0));
    }
    let n = pairs.len();
    if n < 4 || !n.is_power_of_two() {
        return Err(Error::Parse {
            line: 0,
            message: format!("table has {n} entries, expected 2^k with k >= 2"),
        });
    }
    let mut forward = vec![u32::MAX; n];
    for (x, y) in pairs {
        let slot = forward.get_mut(x as usize).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("input {x:#x} out of range for {n} entries"),
        })?;
        if *slot != u32::MAX {
            return Err(Error::Parse {
                line: 0,
                message: format!("input {x:#x} listed twice"),
            });
        }
        *slot = y;
    }
    Ok(forward)
}

impl PermTable {
    /// The power map `x -> x^d` with `0 -> 0`.
    pub fn power(field: &FieldSpec, d: u64) -> Result<Self> {
        let k = field.degree();
        if !is_permutation_exponent(k, d) {
            return Err(Error::NotPermutation { k, d });
        }
        let size = field.size() as usize;
        let mut forward = vec![0u32; size];
        for (x, slot) in forward.iter_mut().enumerate().skip(1) {
            *slot = field.pow(Elt(x as u32), d).0;
        }
        let mut table = PermTable::from_forward(field, forward)?;
        table.exponent = Some(d);
        Ok(table)
    }

    /// Wraps an arbitrary table, checking that it is a bijection.
    pub fn from_forward(field: &FieldSpec, forward: Vec<u32>) -> Result<Self> {
        let k = field.degree();
        let size = field.size() as usize;
        if forward.len() != size {
            return Err(Error::NotBijective {
                k,
                reason: format!("{} entries, expected {size}", forward.len()),
            });
        }
        let mut inverse = vec![u32::MAX; size];
        for (x, &y) in forward.iter().enumerate() {
            let slot = inverse
                .get_mut(y as usize)
                .ok_or_else(|| Error::NotBijective {
                    k,
                    reason: format!("value {y:#x} out of range"),
                })?;
            if *slot != u32::MAX {
                return Err(Error::NotBijective {
                    k,
                    reason: format!("value {y:#x} hit by {:#x} and {x:#x}", *slot),
                });
            }
            *slot = x as u32;
        }
        Ok(PermTable {
            field: field.clone(),
            forward,
            inverse,
            exponent: None,
        })
    }

    pub fn load(path: impl AsRef<Path>, field: &FieldSpec) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let forward = parse_table(std::io::BufReader::new(file))?;
        PermTable::from_forward(field, forward)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        for (x, &y) in self.forward.iter().enumerate() {
            writeln!(
                w,
                "{} {}",
                self.field.fmt_elt(Elt(x as u32)),
                self.field.fmt_elt(Elt(y))
            )?;
        }
        Ok(())
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn size(&self) -> usize {
        self.forward.len()
    }

    pub fn exponent(&self) -> Option<u64> {
        self.exponent
    }

    pub fn forward(&self) -> &[u32] {
        &self.forward
    }

    pub fn inverse(&self) -> &[u32] {
        &self.inverse
    }

    #[inline]
    pub fn apply(&self, x: Elt) -> Elt {
        Elt(self.forward[x.0 as usize])
    }

    #[inline]
    pub fn apply_inverse(&self, y: Elt) -> Elt {
        Elt(self.inverse[y.0 as usize])
    }

    fn check_elt(&self, x: Elt) -> Result<()> {
        if (x.0 as usize) < self.size() {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "{x} is not an element of GF(2^{})",
                self.field.degree()
            )))
        }
    }

    fn check_diff(&self, a: Elt) -> Result<()> {
        self.check_elt(a)?;
        if a.is_zero() {
            return Err(Error::Domain("input difference a must be nonzero".into()));
        }
        Ok(())
    }
}

/// Value -> multiplicity summary of a spectrum.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumMultiset {
    counts: BTreeMap<u64, u64>,
    total: u64,
}

impl SpectrumMultiset {
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        let mut s = SpectrumMultiset::default();
        for v in values {
            s.push(v);
        }
        s
    }

    pub fn push(&mut self, value: u64) {
        *self.counts.entry(value).or_insert(0) += 1;
        self.total += 1;
    }

    /// Multiplicity of `value` (zero when absent).
    pub fn count(&self, value: u64) -> u64 {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max_value(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// `(value, count)` pairs by increasing value.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&v, &c)| (v, c))
    }

    /// `sum value * count`.
    pub fn weighted_sum(&self) -> u64 {
        self.iter().map(|(v, c)| v * c).sum()
    }
}

impl fmt::Display for SpectrumMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, c)) in self.counts.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}:{c}")?;
        }
        f.write_str("}")
    }
}

/// Computes `out[i] = f(i)` for `i < len`, split into contiguous chunks over
/// `workers` threads. The result does not depend on `workers`.
pub(crate) fn par_fill<F>(len: usize, workers: usize, f: F) -> Vec<u64>
where
    F: Fn(usize) -> u64 + Sync + Send,
{
    let mut out = vec![0u64; len];
    if workers <= 1 || len < 2 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
        return out;
    }
    let chunk = len.div_ceil(workers * 4).max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool");
    pool.install(|| {
        out.par_chunks_mut(chunk)
            .enumerate()
            .for_each(|(ci, slice)| {
                let base = ci * chunk;
                for (j, slot) in slice.iter_mut().enumerate() {
                    *slot = f(base + j);
                }
            });
    });
    out
}

/// `DDT_F(a, b) = #{x : F(x + a) + F(x) = b}`.
pub fn diff_count(p: &PermTable, a: Elt, b: Elt) -> Result<u64> {
    p.check_diff(a)?;
    p.check_elt(b)?;
    let f = &p.forward;
    Ok((0..f.len())
        .filter(|&x| f[x] ^ f[x ^ a.0 as usize] == b.0)
        .count() as u64)
}

/// The DDT row for input difference `a`, indexed by `b`.
pub fn ddt_row(p: &PermTable, a: Elt) -> Result<Vec<u64>> {
    p.check_diff(a)?;
    let f = &p.forward;
    let mut row = vec![0u64; f.len()];
    for x in 0..f.len() {
        row[(f[x] ^ f[x ^ a.0 as usize]) as usize] += 1;
    }
    Ok(row)
}

/// Multiset of `DDT_F(a, b)` over every `b`, zero included.
pub fn diff_spectrum(p: &PermTable, a: Elt) -> Result<SpectrumMultiset> {
    Ok(SpectrumMultiset::from_values(ddt_row(p, a)?))
}

/// Max of `DDT_F(a, b)` over `a != 0`. Power maps only need `a = 1`.
pub fn differential_uniformity(p: &PermTable) -> Result<u64> {
    let rows: Box<dyn Iterator<Item = u32>> = if p.exponent.is_some() {
        Box::new(std::iter::once(1))
    } else {
        Box::new(1..p.size() as u32)
    };
    let mut best = 0;
    for a in rows {
        best = best.max(ddt_row(p, Elt(a))?.into_iter().max().unwrap_or(0));
    }
    Ok(best)
}

/// `beta_F(a, b) = #{x : F^-1(F(x) + b) + F^-1(F(x + a) + b) = a}`.
pub fn bct_entry(p: &PermTable, a: Elt, b: Elt) -> Result<u64> {
    p.check_diff(a)?;
    p.check_elt(b)?;
    let (f, g) = (&p.forward, &p.inverse);
    let (a, b) = (a.0, b.0);
    Ok((0..f.len())
        .filter(|&x| g[(f[x] ^ b) as usize] ^ g[(f[x ^ a as usize] ^ b) as usize] == a)
        .count() as u64)
}

/// The same count as [`bct_entry`], visiting one `x` of each `{x, x + a}`
/// pair (the condition is symmetric under `x -> x + a`) and doubling.
#[inline]
fn bct_count_paired(f: &[u32], g: &[u32], a: u32, b: u32) -> u64 {
    let low = a & a.wrapping_neg();
    let below = low - 1;
    let half = (f.len() / 2) as u32;
    let mut hits = 0u64;
    for h in 0..half {
        let x = ((h & !below) << 1) | (h & below);
        let y = x ^ a;
        let lhs = g[(f[x as usize] ^ b) as usize] ^ g[(f[y as usize] ^ b) as usize];
        hits += u64::from(lhs == a);
    }
    2 * hits
}

/// Derivative buckets for input difference `a`: the inputs `x` grouped by
/// `F(x) + F(x + a)`, laid out contiguously.
#[derive(Clone, Debug)]
pub struct DerivativeBuckets {
    a: u32,
    offsets: Vec<u32>,
    members: Vec<u32>,
}

impl DerivativeBuckets {
    pub fn new(p: &PermTable, a: Elt) -> Result<Self> {
        p.check_diff(a)?;
        let f = &p.forward;
        let n = f.len();
        let deriv: Vec<u32> = (0..n).map(|x| f[x] ^ f[x ^ a.0 as usize]).collect();
        let mut offsets = vec![0u32; n + 1];
        for &c in &deriv {
            offsets[c as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0u32; n];
        for (x, &c) in deriv.iter().enumerate() {
            members[fill[c as usize] as usize] = x as u32;
            fill[c as usize] += 1;
        }
        Ok(DerivativeBuckets {
            a: a.0,
            offsets,
            members,
        })
    }

    pub fn difference(&self) -> Elt {
        Elt(self.a)
    }

    /// Inputs `x` with `F(x) + F(x + a) = c`, increasing.
    pub fn bucket(&self, c: Elt) -> &[u32] {
        let c = c.0 as usize;
        &self.members[self.offsets[c] as usize..self.offsets[c + 1] as usize]
    }

    /// `#{x : F(x) + F(x + a) = c}`.
    pub fn size_of(&self, c: Elt) -> u64 {
        self.bucket(c).len() as u64
    }

    /// Ordered pairs `(x, y)` in bucket `c` with `F(x) + F(y) = b`.
    pub fn beta_tilde(&self, p: &PermTable, b: Elt, c: Elt) -> u64 {
        let f = &p.forward;
        let bucket = self.bucket(c);
        let mut count = 0u64;
        for &x in bucket {
            let fx = f[x as usize] ^ b.0;
            count += bucket.iter().filter(|&&y| f[y as usize] == fx).count() as u64;
        }
        count
    }

    /// `sum_c beta_tilde(b, c)` over the given `c` values.
    pub fn sum_beta_tilde(&self, p: &PermTable, b: Elt, cs: &[Elt]) -> u64 {
        cs.iter().map(|&c| self.beta_tilde(p, b, c)).sum()
    }

    /// The whole BCT row for this difference: every same-bucket ordered pair
    /// `(x, y)` contributes to `b = F(x) + F(y)`.
    pub fn system_row(&self, p: &PermTable) -> Vec<u64> {
        let f = &p.forward;
        let mut row = vec![0u64; f.len()];
        for c in 0..f.len() {
            let bucket = self.bucket(Elt(c as u32));
            for &x in bucket {
                for &y in bucket {
                    row[(f[x as usize] ^ f[y as usize]) as usize] += 1;
                }
            }
        }
        row
    }
}

/// Number of `(x, y)` solving `F(x) + F(y) = b`,
/// `F(x) + F(x + a) = F(y) + F(y + a)`.
pub fn bct_entry_system(p: &PermTable, a: Elt, b: Elt) -> Result<u64> {
    p.check_elt(b)?;
    let buckets = DerivativeBuckets::new(p, a)?;
    let f = &p.forward;
    let mut count = 0u64;
    for c in 0..f.len() {
        let bucket = buckets.bucket(Elt(c as u32));
        for &x in bucket {
            let target = f[x as usize] ^ b.0;
            count += bucket.iter().filter(|&&y| f[y as usize] == target).count() as u64;
        }
    }
    Ok(count)
}

/// Full BCT row for difference `a` by the pair-counting route.
pub fn bct_row_system(p: &PermTable, a: Elt) -> Result<Vec<u64>> {
    Ok(DerivativeBuckets::new(p, a)?.system_row(p))
}

/// Quadratic reference: scans every `(x, y)` pair of the system directly.
pub fn bct_entry_pairs_naive(p: &PermTable, a: Elt, b: Elt) -> Result<u64> {
    p.check_diff(a)?;
    p.check_elt(b)?;
    let f = &p.forward;
    let a = a.0 as usize;
    let mut count = 0u64;
    for x in 0..f.len() {
        let dx = f[x] ^ f[x ^ a];
        let target = f[x] ^ b.0;
        for y in 0..f.len() {
            if f[y] == target && f[y] ^ f[y ^ a] == dx {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `beta_tilde_F(1, b, c)`: pairs `(x, y)` with `F(x) + F(y) = b` and
/// `F(x) + F(x + 1) = F(y) + F(y + 1) = c`.
pub fn beta_tilde(p: &PermTable, b: Elt, c: Elt) -> Result<u64> {
    p.check_elt(b)?;
    p.check_elt(c)?;
    Ok(DerivativeBuckets::new(p, Elt::ONE)?.beta_tilde(p, b, c))
}

/// `beta_F(a, b)` for every `b` (including `b = 0`, where it equals `2^k`).
pub fn boomerang_row(p: &PermTable, a: Elt, workers: usize) -> Result<Vec<u64>> {
    p.check_diff(a)?;
    let (f, g) = (&p.forward, &p.inverse);
    let a = a.0;
    Ok(par_fill(f.len(), workers, |b| {
        bct_count_paired(f, g, a, b as u32)
    }))
}

/// Max of `beta_F(a, b)` over nonzero `a, b`. Power maps use the row `a = 1`;
/// general tables sweep every `a` and are limited to
/// [`GENERAL_SWEEP_MAX_DEGREE`].
pub fn boomerang_uniformity(p: &PermTable, workers: usize) -> Result<u64> {
    let row_max = |a: u32| -> Result<u64> {
        Ok(boomerang_row(p, Elt(a), workers)?
            .into_iter()
            .skip(1)
            .max()
            .unwrap_or(0))
    };
    if p.exponent.is_some() {
        return row_max(1);
    }
    let k = p.field.degree();
    if k > GENERAL_SWEEP_MAX_DEGREE {
        return Err(Error::ResourceGate {
            reason: format!(
                "full boomerang sweep of a general table needs k <= {GENERAL_SWEEP_MAX_DEGREE}, got k = {k}"
            ),
            estimate: format!("{} table lookups", 1u128 << (3 * k)),
        });
    }
    if k > 10 {
        log::warn!("general boomerang sweep over GF(2^{k}) is cubic in the field size");
    }
    let mut best = 0;
    for a in 1..p.size() as u32 {
        best = best.max(row_max(a)?);
    }
    Ok(best)
}

/// `sum of beta_tilde_F(1, b, c)` over the nontrivial `(q+1)`-th roots of
/// unity `c`, for fields of degree `4n`.
pub fn mu_sum_beta_tilde(p: &PermTable, b: Elt) -> Result<u64> {
    let k = p.field.degree();
    if !k.is_multiple_of(4) {
        return Err(Error::Domain(format!(
            "mu sums need a field degree divisible by 4, got {k}"
        )));
    }
    p.check_elt(b)?;
    let q = 1u64 << (k / 4);
    let mu = mu_enumerate(&p.field, q + 1)?;
    let star: Vec<Elt> = mu
        .elements()
        .expect("mu_(q+1) is small")
        .iter()
        .copied()
        .filter(|&c| c != Elt::ONE)
        .collect();
    Ok(DerivativeBuckets::new(p, Elt::ONE)?.sum_beta_tilde(p, b, &star))
}
