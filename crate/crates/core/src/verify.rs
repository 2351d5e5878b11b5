//! Brute force against the closed form.
//!
//! The brute-force side of every check uses only [`crate::spectra`] and the
//! field arithmetic; predictions come from [`crate::closedform`]. The
//! region classifier is used to pick index sets (which `b` or `c` values to
//! sum over), never to produce counts.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::closedform::{region_cardinalities, BRegion, ClosedForm, S2Membership};
use crate::error::{Error, Result};
use crate::field::{Elt, FieldSpec};
use crate::report::{IdentityCheck, Mismatch, RowRecord, SuiteReport, VerificationReport};
use crate::spectra::{
    bct_entry, boomerang_uniformity, ddt_row, is_permutation_exponent, DerivativeBuckets,
    PermTable, SpectrumMultiset,
};
use crate::structure::{chi_decompose, mu_enumerate, ChiClass};

/// Rough single-worker throughput of the paired BCT kernel, used only for
/// the cost estimate printed when a run is refused.
const PAIRS_PER_SECOND: f64 = 5.0e8;

pub const MAX_N: u32 = 4;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub workers: usize,
    /// Allows the n = 4 field (and other runs behind the long-run gate).
    pub allow_long: bool,
    /// Lists every mismatch instead of the first 100 per region.
    pub full_mismatches: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 1,
            allow_long: false,
            full_mismatches: false,
        }
    }
}

/// Which `b` values a decomposition check covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sample {
    All,
    Elements(Vec<Elt>),
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Estimated cost of a full boomerang row over GF(2^(4n)).
pub fn boomerang_row_estimate(n: u32, workers: usize) -> String {
    let size = 1u64 << (4 * n);
    let pairs = (size as f64) * (size as f64) / 2.0;
    let secs = pairs / PAIRS_PER_SECOND / workers.max(1) as f64;
    format!("{pairs:.2e} paired table lookups, roughly {secs:.0} s with {workers} worker(s)")
}

fn main_setup(field: &FieldSpec) -> Result<(ClosedForm, PermTable)> {
    let cf = ClosedForm::new(field)?;
    if cf.n() > MAX_N {
        return Err(Error::Domain(format!(
            "n = {} is outside 1..={MAX_N}",
            cf.n()
        )));
    }
    let perm = PermTable::power(field, cf.exponent())?;
    Ok((cf, perm))
}

fn fill_region_expectations(
    report: &mut VerificationReport,
    cf: &ClosedForm,
    value: impl Fn(BRegion) -> u64,
    regions: &[BRegion],
) {
    let cards = region_cardinalities(cf.n());
    for r in BRegion::ALL {
        let s = report.region_mut(r);
        s.expected = value(r);
        s.expected_count = cards[&r];
    }
    for &r in regions {
        report.region_mut(r).count += 1;
    }
    let matching = BRegion::ALL
        .iter()
        .filter(|r| report.regions[r].count == report.regions[r].expected_count)
        .count() as u64;
    report.add_identity(
        "region_cardinalities",
        IdentityCheck::equal(BRegion::ALL.len() as u64, matching)
            .with_note("regions whose observed size equals the closed form"),
    );
}

/// Brute-force boomerang row of the main power map against the predicted
/// value for every `b`, including `b = 0`.
pub fn verify_boomerang(field: &FieldSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let (cf, perm) = main_setup(field)?;
    let n = cf.n();
    let q = cf.q();
    if n == MAX_N && !opts.allow_long {
        return Err(Error::ResourceGate {
            reason: format!("n = {n} is behind the long-run flag"),
            estimate: boomerang_row_estimate(n, opts.workers),
        });
    }
    let mut report = VerificationReport::new("boomerang_spectrum", n, field.modulus());
    report.exponent = Some(cf.exponent());

    let t = Instant::now();
    let row = crate::spectra::boomerang_row(&perm, Elt::ONE, opts.workers)?;
    report.add_timing("brute_force", ms_since(t));

    let t = Instant::now();
    let regions = cf.classify_all()?;
    report.add_timing("classify", ms_since(t));

    let t = Instant::now();
    for (b, (&brute, &region)) in row.iter().zip(regions.iter()).enumerate() {
        let predicted = region.beta(q);
        let b_hex = field.fmt_elt(Elt(b as u32));
        if brute != predicted {
            report.record_mismatch(
                Mismatch {
                    b: b_hex.clone(),
                    region,
                    quantity: "beta".into(),
                    brute,
                    predicted,
                },
                opts.full_mismatches,
            );
        }
        report.rows.push(RowRecord {
            b_hex,
            region: region.tag().into(),
            brute,
            predicted,
            matched: brute == predicted,
        });
    }
    fill_region_expectations(&mut report, &cf, |r| r.beta(q), &regions);

    let uniformity = row[1..].iter().copied().max().unwrap_or(0);
    report.uniformity = Some(uniformity);
    report.add_identity(
        "uniformity",
        IdentityCheck::equal(3 * q * (q - 1), uniformity),
    );
    report.add_identity(
        "beta_at_zero",
        IdentityCheck::equal(field.size(), row[0])
            .with_note("b = 0 row, excluded from the uniformity"),
    );
    let even = row[1..].iter().filter(|&&v| v % 2 == 0).count() as u64;
    report.add_identity("even_entries", IdentityCheck::equal(field.size() - 1, even));
    let ddt = ddt_row(&perm, Elt::ONE)?;
    let sq: u64 = ddt.iter().map(|&c| c * c).sum();
    report.add_identity(
        "global_sum",
        IdentityCheck::equal(sq, row.iter().sum())
            .with_note("sum_b beta(1,b) against sum_c N(c)^2"),
    );
    report.add_timing("compare", ms_since(t));
    report.finish();
    Ok(report)
}

/// Differential counts `N(b) = #{x : F(x) + F(x+1) = b}` against the
/// predicted values, plus the spectrum sum and the solution set of
/// `F(x) + F(x+1) = 1`.
pub fn verify_differential(field: &FieldSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    let (cf, perm) = main_setup(field)?;
    let n = cf.n();
    let q = cf.q();
    let mut report = VerificationReport::new("differential_spectrum", n, field.modulus());
    report.exponent = Some(cf.exponent());

    let t = Instant::now();
    let row = ddt_row(&perm, Elt::ONE)?;
    report.add_timing("brute_force", ms_since(t));

    let t = Instant::now();
    let regions = cf.classify_all()?;
    report.add_timing("classify", ms_since(t));

    for (b, (&brute, &region)) in row.iter().zip(regions.iter()).enumerate() {
        let predicted = region.diff_count(q);
        let b_hex = field.fmt_elt(Elt(b as u32));
        if brute != predicted {
            report.record_mismatch(
                Mismatch {
                    b: b_hex.clone(),
                    region,
                    quantity: "diff_count".into(),
                    brute,
                    predicted,
                },
                opts.full_mismatches,
            );
        }
        report.rows.push(RowRecord {
            b_hex,
            region: region.tag().into(),
            brute,
            predicted,
            matched: brute == predicted,
        });
    }
    fill_region_expectations(&mut report, &cf, |r| r.diff_count(q), &regions);

    let total: u64 = row.iter().sum();
    report.add_identity(
        "sum_equals_field_size",
        IdentityCheck::equal(field.size(), total),
    );

    let observed = SpectrumMultiset::from_values(row.iter().copied());
    let mut expected = SpectrumMultiset::default();
    for r in BRegion::ALL {
        for _ in 0..r.cardinality(q) {
            expected.push(r.diff_count(q));
        }
    }
    let agreeing = expected
        .iter()
        .filter(|&(v, c)| observed.count(v) == c)
        .count() as u64;
    let distinct = expected.iter().count() as u64;
    report.add_identity(
        "value_multiset",
        IdentityCheck {
            passed: observed == expected,
            expected: distinct,
            observed: agreeing,
            note: format!("observed {observed}, expected {expected}"),
        },
    );
    report.uniformity = observed.max_value();
    report.add_identity(
        "differential_uniformity",
        IdentityCheck::equal(q * q, observed.max_value().unwrap_or(0)),
    );

    // {x : F(x) + F(x+1) = 1} is the GF(q^2) subfield.
    let t = Instant::now();
    let f = perm.forward();
    let mut agree = 0u64;
    for x in field.elements() {
        let hits_one = f[x.0 as usize] ^ f[(x.0 ^ 1) as usize] == 1;
        if hits_one == field.in_subfield(2 * n, x)? {
            agree += 1;
        }
    }
    report.add_identity(
        "derivative_one_set_is_gf_q2",
        IdentityCheck::equal(field.size(), agree).with_note("elements where membership agrees"),
    );
    report.add_timing("subfield_check", ms_since(t));
    report.finish();
    Ok(report)
}

/// The `c` values of the three-term split: `c = 1`, `c` in S2, and
/// `c` in `mu_(q+1) \ {1}`.
struct SplitIndex {
    s2: Vec<Elt>,
    mu_star: Vec<Elt>,
}

fn split_index(cf: &ClosedForm, regions: &[BRegion]) -> SplitIndex {
    let s2 = regions
        .iter()
        .enumerate()
        .filter(|(_, &r)| r == BRegion::S2)
        .map(|(c, _)| Elt(c as u32))
        .collect();
    SplitIndex {
        s2,
        mu_star: cf.unit_circle_star(),
    }
}

/// A deterministic sample: the first `per_region` elements (by bit value)
/// of every region.
pub fn representative_sample(cf: &ClosedForm, per_region: usize) -> Result<Vec<Elt>> {
    let regions = cf.classify_all()?;
    let mut taken: BTreeMap<BRegion, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (b, r) in regions.into_iter().enumerate() {
        let t = taken.entry(r).or_insert(0);
        if *t < per_region {
            *t += 1;
            out.push(Elt(b as u32));
        }
    }
    Ok(out)
}

/// For each sampled `b`: `beta(1,b)` from the definition, the sum of
/// `beta_tilde(1,b,c)` over all `c`, and its split into the `c = 1`, S2 and
/// `mu_(q+1) \ {1}` parts, each compared with its prediction.
pub fn verify_decomposition(
    field: &FieldSpec,
    sample: &Sample,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let (cf, perm) = main_setup(field)?;
    let n = cf.n();
    let q = cf.q();
    if *sample == Sample::All && n > 2 && !(n == 3 && opts.allow_long) {
        return Err(Error::ResourceGate {
            reason: format!("exhaustive decomposition needs n <= 2 (n = 3 behind the long-run flag), got n = {n}"),
            estimate: format!("{} bucket pair tests", field.size() * field.size()),
        });
    }
    let mut report = VerificationReport::new("decomposition", n, field.modulus());
    report.exponent = Some(cf.exponent());

    let t = Instant::now();
    let regions = cf.classify_all()?;
    let idx = split_index(&cf, &regions);
    let buckets = DerivativeBuckets::new(&perm, Elt::ONE)?;
    let nonempty: Vec<Elt> = field
        .elements()
        .filter(|&c| buckets.size_of(c) > 0)
        .collect();
    report.add_timing("setup", ms_since(t));

    let bs: Vec<Elt> = match sample {
        Sample::All => field.elements().collect(),
        Sample::Elements(v) => v.clone(),
    };

    let t = Instant::now();
    let mut tr_nonzero = 0u64;
    let mut tr_nonzero_zero_sum = 0u64;
    let mut split_exhaustive = 0u64;
    let mut f0_sum = 0u64;
    let mut total_sum = 0u64;
    for &b in &bs {
        if !field.contains(b) {
            return Err(Error::Domain(format!(
                "{b} is not in GF(2^{})",
                field.degree()
            )));
        }
        let region = regions[b.0 as usize];
        let beta = bct_entry(&perm, Elt::ONE, b)?;
        let total: u64 = nonempty
            .iter()
            .map(|&c| buckets.beta_tilde(&perm, b, c))
            .sum();
        let c1 = buckets.beta_tilde(&perm, b, Elt::ONE);
        let s2 = buckets.sum_beta_tilde(&perm, b, &idx.s2);
        let mu = buckets.sum_beta_tilde(&perm, b, &idx.mu_star);
        total_sum += total;
        if total == c1 + s2 + mu {
            split_exhaustive += 1;
        }
        if !field.trace(n, b)?.is_zero() {
            tr_nonzero += 1;
            if mu == 0 {
                tr_nonzero_zero_sum += 1;
            }
        }
        if region == BRegion::TraceZeroOutside {
            f0_sum += mu;
        }
        let checks = [
            ("beta", beta, region.beta(q)),
            ("sum_over_c", total, beta),
            ("c1_term", c1, region.c1_term(q)),
            ("s2_sum", s2, region.s2_sum(q)),
            ("mu_sum", mu, region.mu_sum(q)),
        ];
        for (quantity, brute, predicted) in checks {
            if brute != predicted {
                report.record_mismatch(
                    Mismatch {
                        b: field.fmt_elt(b),
                        region,
                        quantity: quantity.into(),
                        brute,
                        predicted,
                    },
                    opts.full_mismatches,
                );
            }
        }
        report.region_mut(region).count += 1;
    }
    for r in BRegion::ALL {
        let s = report.region_mut(r);
        s.expected = r.beta(q);
        s.expected_count = if *sample == Sample::All {
            r.cardinality(q)
        } else {
            s.count
        };
    }
    report.add_identity(
        "split_is_exhaustive",
        IdentityCheck::equal(bs.len() as u64, split_exhaustive)
            .with_note("b where c outside {1} u S2 u mu_(q+1)* contributes nothing"),
    );
    report.add_identity(
        "trace_nonzero_mu_sum_vanishes",
        IdentityCheck::equal(tr_nonzero, tr_nonzero_zero_sum),
    );
    if *sample == Sample::All {
        let qq = q * q;
        report.add_identity(
            "trace_zero_outside_mu_total",
            IdentityCheck::equal((q * qq - qq) * q * (q - 2), f0_sum),
        );
        let sq: u64 = nonempty.iter().map(|&c| buckets.size_of(c).pow(2)).sum();
        report.add_identity("global_sum", IdentityCheck::equal(sq, total_sum));
    }
    report.add_timing("sums", ms_since(t));
    report.finish();
    Ok(report)
}

/// Classifier sanity over every `b` with nonzero relative trace: the witness
/// identity `A + A^q = U + U^2` and the S2 / S2' sizes.
pub fn verify_s2_witness(field: &FieldSpec) -> Result<VerificationReport> {
    let cf = ClosedForm::new(field)?;
    let n = cf.n();
    let q = cf.q();
    let mut report = VerificationReport::new("s2_witness", n, field.modulus());
    let t = Instant::now();
    let (mut s2, mut s2p, mut tr_nonzero, mut identity_ok) = (0u64, 0u64, 0u64, 0u64);
    for b in field.elements() {
        match cf.s2_membership(b)? {
            S2Membership::Neither => continue,
            S2Membership::S2(w) => {
                s2 += 1;
                identity_ok += u64::from(cf.witness_identity_holds(&w));
            }
            S2Membership::S2Prime(w) => {
                s2p += 1;
                identity_ok += u64::from(cf.witness_identity_holds(&w));
            }
        }
        tr_nonzero += 1;
    }
    let half = (q.pow(4) - q.pow(3)) / 2;
    report.add_identity(
        "trace_nonzero_count",
        IdentityCheck::equal(2 * half, tr_nonzero),
    );
    report.add_identity("s2_count", IdentityCheck::equal(half, s2));
    report.add_identity("s2_prime_count", IdentityCheck::equal(half, s2p));
    report.add_identity(
        "witness_identity",
        IdentityCheck::equal(tr_nonzero, identity_ok),
    );
    report.add_timing("classify", ms_since(t));
    report.finish();
    Ok(report)
}

/// Outcome of the trace-cell counts over GF(2^m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCellOutcome {
    /// `#{Y : Tr(Y) = i, Tr(gY) = j} = 2^m / 4` for every `g` outside GF(2).
    pub pairs: IdentityCheck,
    /// `#{Y : Tr(Y) = i, Tr(g1 Y) = j, Tr(g2 Y) = l} = 2^m / 8` whenever
    /// `g1`, `g2`, `g1 + g2` are outside GF(2).
    pub triples: IdentityCheck,
}

impl TraceCellOutcome {
    pub fn passed(&self) -> bool {
        self.pairs.passed && self.triples.passed
    }
}

/// Exhaustive trace-cell counts over GF(2^m), `2 <= m <= 10`.
pub fn verify_trace_cells(m: u32) -> Result<TraceCellOutcome> {
    if !(2..=10).contains(&m) {
        return Err(Error::Domain(format!("m = {m} is outside 2..=10")));
    }
    let field = FieldSpec::default_for(m)?;
    let size = field.size() as usize;
    // tvec[y] bit i = Tr(X^i y), so Tr(g y) = parity(g & tvec[y]).
    let mut tvec = vec![0u32; size];
    for (y, slot) in tvec.iter_mut().enumerate() {
        for i in 0..m {
            let t = field.trace(1, field.mul(Elt(1 << i), Elt(y as u32)))?;
            *slot |= t.0 << i;
        }
    }
    let tr = |g: u32, y: usize| ((g & tvec[y]).count_ones() & 1) as usize;

    let (mut cells, mut good) = (0u64, 0u64);
    for g in 2..size as u32 {
        let mut counts = [0u64; 4];
        for y in 0..size {
            counts[tr(1, y) * 2 + tr(g, y)] += 1;
        }
        cells += 4;
        good += counts.iter().filter(|&&c| c * 4 == size as u64).count() as u64;
    }
    let pairs = IdentityCheck::equal(cells, good)
        .with_note(format!("GF(2^{m}), cells of size {}", size / 4));

    let (mut cells, mut good) = (0u64, 0u64);
    for g1 in 2..size as u32 {
        for g2 in 2..size as u32 {
            if g1 ^ g2 <= 1 {
                continue;
            }
            let mut counts = [0u64; 8];
            for y in 0..size {
                counts[tr(1, y) * 4 + tr(g1, y) * 2 + tr(g2, y)] += 1;
            }
            cells += 8;
            good += counts.iter().filter(|&&c| c * 8 == size as u64).count() as u64;
        }
    }
    let triples = IdentityCheck::equal(cells, good)
        .with_note(format!("GF(2^{m}), cells of size {}", size as f64 / 8.0));
    Ok(TraceCellOutcome { pairs, triples })
}

/// Every `z` in GF(2^m)* is `c + 1/c` for exactly two `c`, both in GF(2^m)*
/// when `Tr_1^m(1/z) = 0` and both in `mu_(2^m+1) \ {1}` otherwise. Counted by
/// enumeration inside GF(2^(2m)), then compared with [`chi_decompose`].
pub fn verify_c_plus_inverse(m: u32) -> Result<IdentityCheck> {
    if !(2..=8).contains(&m) {
        return Err(Error::Domain(format!("m = {m} is outside 2..=8")));
    }
    let amb = FieldSpec::default_for(2 * m)?;
    let size = amb.size() as usize;
    let mut from_sub: Vec<Vec<Elt>> = vec![Vec::new(); size];
    let mut from_mu: Vec<Vec<Elt>> = vec![Vec::new(); size];
    let sub: Vec<Elt> = amb
        .elements()
        .skip(1)
        .filter(|&x| amb.frobenius(x, m) == x)
        .collect();
    for &c in &sub {
        let z = amb.add(c, amb.inv(c)?);
        from_sub[z.0 as usize].push(c);
    }
    let mu = mu_enumerate(&amb, (1u64 << m) + 1)?;
    for &c in mu.elements().expect("small group") {
        let z = amb.add(c, amb.inv(c)?);
        from_mu[z.0 as usize].push(c);
    }
    let mut good = 0u64;
    let mut stray = 0u64;
    for &z in &sub {
        let branch_one = amb.relative_trace(1, m, amb.inv(z)?)? == Elt::ONE;
        let (hit, other) = if branch_one {
            (&from_mu[z.0 as usize], &from_sub[z.0 as usize])
        } else {
            (&from_sub[z.0 as usize], &from_mu[z.0 as usize])
        };
        let d = chi_decompose(&amb, m, z)?;
        let class_ok = d.class
            == if branch_one {
                ChiClass::UnitCirclePair
            } else {
                ChiClass::SubfieldPair
            };
        let mut brute = hit.clone();
        brute.sort();
        let inverse_pair = hit.len() == 2 && amb.mul(hit[0], hit[1]) == Elt::ONE;
        if hit.len() == 2
            && other.is_empty()
            && class_ok
            && brute == d.roots.to_vec()
            && inverse_pair
        {
            good += 1;
        }
    }
    // c + 1/c lands in GF(2^m) only for the c enumerated above
    for z in amb.elements().skip(1) {
        if amb.frobenius(z, m) != z
            && (!from_sub[z.0 as usize].is_empty() || !from_mu[z.0 as usize].is_empty())
        {
            stray += 1;
        }
    }
    Ok(
        IdentityCheck::equal(sub.len() as u64, good - stray.min(good)).with_note(format!(
            "z in GF(2^{m})* with exactly two representations in the predicted branch"
        )),
    )
}

/// Power-permutation families with a known boomerang uniformity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KnownFamily {
    /// `d = 2^k - 2`: uniformity between 2 and 6.
    Inverse,
    /// `d = 2^p + 1`, `s = gcd(p, k)`: uniformity `2^s` or `2^s (2^s - 1)`.
    Gold { p: u32 },
    /// `k = 2h`, `d = 2^(h+1) - 1`: uniformity `2^h + 2`.
    KasamiLike,
    /// `k = 4h`, `d = 2^3h + 2^2h + 2^h - 1`: uniformity `3 (2^2h - 2^h)`.
    Main,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub family: KnownFamily,
    pub k: u32,
    pub d: u64,
    pub uniformity: u64,
    pub allowed: Vec<u64>,
    pub passed: bool,
}

fn gcd32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brute-force boomerang uniformity of a known family, checked for
/// membership in the family's value set.
pub fn cross_validate_family(k: u32, family: KnownFamily, workers: usize) -> Result<FamilyCheck> {
    let (d, allowed): (u64, Vec<u64>) = match family {
        KnownFamily::Inverse => ((1u64 << k) - 2, vec![2, 4, 6]),
        KnownFamily::Gold { p } => {
            let s = gcd32(p, k);
            let t = 1u64 << s;
            ((1u64 << p) + 1, vec![t, t * (t - 1)])
        }
        KnownFamily::KasamiLike => {
            if !k.is_multiple_of(2) || k < 4 {
                return Err(Error::Domain(format!("k = {k} is not 2h with h > 1")));
            }
            let h = k / 2;
            ((1u64 << (h + 1)) - 1, vec![(1u64 << h) + 2])
        }
        KnownFamily::Main => {
            if !k.is_multiple_of(4) {
                return Err(Error::Domain(format!("k = {k} is not a multiple of 4")));
            }
            let h = k / 4;
            let q = 1u64 << h;
            (crate::closedform::main_exponent(h), vec![3 * q * (q - 1)])
        }
    };
    if !is_permutation_exponent(k, d) {
        return Err(Error::NotPermutation { k, d });
    }
    let field = FieldSpec::default_for(k)?;
    let perm = PermTable::power(&field, d)?;
    let uniformity = boomerang_uniformity(&perm, workers)?;
    Ok(FamilyCheck {
        family,
        k,
        d,
        uniformity,
        passed: allowed.contains(&uniformity),
        allowed,
    })
}

/// Checks independent of `n`: trace cells and `c + 1/c`
/// representations for `m = 2..=8`, and the known power families.
pub fn verify_field_facts(workers: usize) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("field_facts", 0, 0);
    report.modulus = "default".into();
    let t = Instant::now();
    for m in 2..=8 {
        let sc = verify_trace_cells(m)?;
        report.add_identity(&format!("trace_cells_pairs_m{m}"), sc.pairs);
        report.add_identity(&format!("trace_cells_triples_m{m}"), sc.triples);
        report.add_identity(&format!("c_plus_inverse_m{m}"), verify_c_plus_inverse(m)?);
    }
    report.add_timing("trace_and_inverse", ms_since(t));
    let t = Instant::now();
    let families = [
        ("inverse_k8", 8, KnownFamily::Inverse),
        ("gold_k6_p2", 6, KnownFamily::Gold { p: 2 }),
        ("inverse_k5", 5, KnownFamily::Inverse),
        ("kasami_like_k8", 8, KnownFamily::KasamiLike),
    ];
    for (name, k, fam) in families {
        let c = cross_validate_family(k, fam, workers)?;
        report.add_identity(
            &format!("family_{name}"),
            IdentityCheck {
                passed: c.passed,
                expected: *c.allowed.iter().max().unwrap_or(&0),
                observed: c.uniformity,
                note: format!("d = {}, allowed {:?}", c.d, c.allowed),
            },
        );
    }
    report.add_timing("families", ms_since(t));
    report.finish();
    Ok(report)
}

/// Everything that applies to one `n`: boomerang and differential spectra,
/// the decomposition (exhaustive for `n <= 2`, a per-region sample
/// otherwise), the S2 witness, and the field-level checks.
pub fn verify_suite(field: &FieldSpec, opts: &VerifyOptions) -> Result<SuiteReport> {
    let cf = ClosedForm::new(field)?;
    let n = cf.n();
    let mut reports = vec![
        verify_boomerang(field, opts)?,
        verify_differential(field, opts)?,
    ];
    let sample = if n <= 2 {
        Sample::All
    } else {
        Sample::Elements(representative_sample(&cf, 2)?)
    };
    reports.push(verify_decomposition(field, &sample, opts)?);
    reports.push(verify_s2_witness(field)?);
    reports.push(verify_field_facts(opts.workers)?);
    Ok(SuiteReport::new(n, field.modulus(), reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn boomerang_small_fields_pass() {
        for (n, u) in [(1, 6), (2, 36)] {
            let f = FieldSpec::default_for(4 * n).unwrap();
            let r = verify_boomerang(&f, &opts()).unwrap();
            assert!(r.passed, "{}", r.render_table());
            assert_eq!(r.uniformity, Some(u));
            assert_eq!(r.rows.len(), 1 << (4 * n));
        }
    }

    #[test]
    fn n4_is_gated() {
        let f = FieldSpec::default_for(16).unwrap();
        let err = verify_boomerang(&f, &opts()).unwrap_err();
        assert!(matches!(err, Error::ResourceGate { .. }));
        assert!(err.to_string().contains("worker"));
    }

    #[test]
    fn differential_small_fields_pass() {
        let f = FieldSpec::default_for(8).unwrap();
        let r = verify_differential(&f, &opts()).unwrap();
        assert!(r.passed, "{}", r.render_table());
        let mu = &r.regions[&BRegion::MuStar];
        assert_eq!((mu.expected, mu.count), (12, 4));
    }

    #[test]
    fn decomposition_n2_zero_row() {
        let f = FieldSpec::default_for(8).unwrap();
        let r = verify_decomposition(&f, &Sample::Elements(vec![Elt::ZERO]), &opts()).unwrap();
        assert!(r.passed, "{}", r.render_table());
        let all = verify_decomposition(&f, &Sample::All, &opts()).unwrap();
        assert!(all.passed, "{}", all.render_table());
        assert_eq!(all.identities["trace_zero_outside_mu_total"].observed, 384);
        let f12 = FieldSpec::default_for(12).unwrap();
        assert!(matches!(
            verify_decomposition(&f12, &Sample::All, &opts()),
            Err(Error::ResourceGate { .. })
        ));
    }

    #[test]
    fn trace_cells() {
        let s = verify_trace_cells(2).unwrap();
        assert!(s.passed());
        assert_eq!(s.pairs.expected, 8);
        // no admissible pair exists in GF(4)
        assert_eq!(s.triples.expected, 0);
        assert!(verify_trace_cells(4).unwrap().passed());
        assert!(verify_trace_cells(1).is_err());
    }

    #[test]
    fn c_plus_inverse() {
        for m in 2..=5 {
            let c = verify_c_plus_inverse(m).unwrap();
            assert!(c.passed, "m = {m}: {c:?}");
            assert_eq!(c.expected, (1 << m) - 1);
        }
    }

    #[test]
    fn families() {
        let inv5 = cross_validate_family(5, KnownFamily::Inverse, 1).unwrap();
        assert_eq!(inv5.uniformity, 2);
        let gold = cross_validate_family(6, KnownFamily::Gold { p: 2 }, 1).unwrap();
        assert!(gold.passed, "{gold:?}");
        assert!(matches!(
            cross_validate_family(6, KnownFamily::Gold { p: 1 }, 1),
            Err(Error::NotPermutation { .. })
        ));
        let main = cross_validate_family(8, KnownFamily::Main, 1).unwrap();
        assert_eq!(main.uniformity, 36);
    }
}
