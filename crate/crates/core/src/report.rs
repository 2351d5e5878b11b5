//! Verification report schema and its renderings.
//!
//! The structured form is pretty-printed JSON with keys in a fixed order,
//! so two runs over the same field model produce identical bytes. Wall-clock
//! timings are carried in `timings_ms` and left out unless requested. Per-`b`
//! rows go to CSV with the columns `b_hex,region,brute,predicted,match`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::closedform::BRegion;
use crate::error::Result;
use crate::field::Elt;
use crate::spectra::{boomerang_row, ddt_row, PermTable, SpectrumMultiset};

/// Mismatches listed per region before the rest are only counted.
pub const MISMATCH_CAP_PER_REGION: usize = 100;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSummary {
    /// Predicted value for every `b` of the region.
    pub expected: u64,
    /// Predicted size of the region.
    pub expected_count: u64,
    /// Observed size of the region.
    pub count: u64,
    pub mismatches: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub b: String,
    pub region: BRegion,
    /// Which quantity disagreed (`beta`, `diff_count`, `mu_sum`, ...).
    pub quantity: String,
    pub brute: u64,
    pub predicted: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub passed: bool,
    pub expected: u64,
    pub observed: u64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub note: String,
}

impl IdentityCheck {
    pub fn equal(expected: u64, observed: u64) -> Self {
        IdentityCheck {
            passed: expected == observed,
            expected,
            observed,
            note: String::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// One CSV row: brute-force and predicted value for a single `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowRecord {
    pub b_hex: String,
    pub region: String,
    pub brute: u64,
    pub predicted: u64,
    #[serde(rename = "match")]
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub n: u32,
    pub modulus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniformity: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub regions: BTreeMap<BRegion, RegionSummary>,
    pub mismatches: Vec<Mismatch>,
    pub mismatches_omitted: u64,
    pub identities: BTreeMap<String, IdentityCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
    #[serde(skip)]
    pub rows: Vec<RowRecord>,
}

impl VerificationReport {
    pub fn new(check: &str, n: u32, modulus: u64) -> Self {
        VerificationReport {
            check: check.to_string(),
            n,
            modulus: format!("{modulus:#x}"),
            exponent: None,
            passed: false,
            uniformity: None,
            regions: BTreeMap::new(),
            mismatches: Vec::new(),
            mismatches_omitted: 0,
            identities: BTreeMap::new(),
            timings_ms: Some(BTreeMap::new()),
            rows: Vec::new(),
        }
    }

    pub fn region_mut(&mut self, region: BRegion) -> &mut RegionSummary {
        self.regions.entry(region).or_default()
    }

    /// Counts a disagreement and lists it unless the region's listing is full.
    pub fn record_mismatch(&mut self, mismatch: Mismatch, full: bool) {
        let region = mismatch.region;
        let listed = self
            .mismatches
            .iter()
            .filter(|m| m.region == region)
            .count();
        self.region_mut(region).mismatches += 1;
        if full || listed < MISMATCH_CAP_PER_REGION {
            self.mismatches.push(mismatch);
        } else {
            self.mismatches_omitted += 1;
        }
    }

    pub fn add_identity(&mut self, name: &str, check: IdentityCheck) {
        self.identities.insert(name.to_string(), check);
    }

    pub fn add_timing(&mut self, phase: &str, ms: f64) {
        if let Some(t) = self.timings_ms.as_mut() {
            t.insert(phase.to_string(), ms);
        }
    }

    pub fn mismatch_count(&self) -> u64 {
        self.mismatches.len() as u64 + self.mismatches_omitted
    }

    /// Sets `passed` from the mismatch list and the identity checks.
    pub fn finish(&mut self) {
        self.passed = self.mismatch_count() == 0 && self.identities.values().all(|c| c.passed);
    }

    pub fn strip_timings(&mut self) {
        self.timings_ms = None;
    }

    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        write_rows_csv(&self.rows, w)
    }

    /// Human-readable summary.
    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "== {} (n = {}, modulus {}) {verdict}",
            self.check, self.n, self.modulus
        );
        if let Some(d) = self.exponent {
            let _ = writeln!(s, "exponent: {d}");
        }
        if let Some(u) = self.uniformity {
            let _ = writeln!(s, "uniformity: {u}");
        }
        if !self.regions.is_empty() {
            let _ = writeln!(
                s,
                "{:<20} {:>10} {:>10} {:>10} {:>10}",
                "region", "expected", "predicted#", "count", "mismatch"
            );
            for (r, sum) in &self.regions {
                let _ = writeln!(
                    s,
                    "{:<20} {:>10} {:>10} {:>10} {:>10}",
                    r.tag(),
                    sum.expected,
                    sum.expected_count,
                    sum.count,
                    sum.mismatches
                );
            }
        }
        for (name, c) in &self.identities {
            let _ = writeln!(
                s,
                "  [{}] {name}: expected {} observed {}{}",
                if c.passed { "ok" } else { "FAIL" },
                c.expected,
                c.observed,
                if c.note.is_empty() {
                    String::new()
                } else {
                    format!(" ({})", c.note)
                }
            );
        }
        for m in &self.mismatches {
            let _ = writeln!(
                s,
                "  mismatch b={} {} {}: brute {} predicted {}",
                m.b, m.region, m.quantity, m.brute, m.predicted
            );
        }
        if self.mismatches_omitted > 0 {
            let _ = writeln!(
                s,
                "  ... {} more mismatches omitted",
                self.mismatches_omitted
            );
        }
        if let Some(t) = &self.timings_ms {
            for (phase, ms) in t {
                let _ = writeln!(s, "  time {phase}: {ms:.1} ms");
            }
        }
        s
    }
}

/// A bundle of reports produced by one `verify` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub n: u32,
    pub modulus: String,
    pub passed: bool,
    pub reports: Vec<VerificationReport>,
}

impl SuiteReport {
    pub fn new(n: u32, modulus: u64, reports: Vec<VerificationReport>) -> Self {
        let passed = reports.iter().all(|r| r.passed);
        SuiteReport {
            n,
            modulus: format!("{modulus:#x}"),
            passed,
            reports,
        }
    }

    pub fn strip_timings(&mut self) {
        for r in &mut self.reports {
            r.strip_timings();
        }
    }

    pub fn to_structured(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_structured(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "verification suite: n = {}, modulus {}: {}",
            self.n,
            self.modulus,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for r in &self.reports {
            s.push_str(&r.render_table());
        }
        s
    }

    /// Rows of the first report that carries per-`b` rows.
    pub fn rows(&self) -> &[RowRecord] {
        self.reports
            .iter()
            .find(|r| !r.rows.is_empty())
            .map(|r| r.rows.as_slice())
            .unwrap_or(&[])
    }
}

/// One row `beta(a, b)` (and `DDT(a, b)`) of a permutation, with its
/// multiset over `b != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub k: u32,
    pub modulus: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    pub a: String,
    pub boomerang_uniformity_row: u64,
    pub boomerang_spectrum: SpectrumMultiset,
    pub differential_spectrum: SpectrumMultiset,
    pub rows: Vec<SpectrumRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub b_hex: String,
    pub beta: u64,
    pub diff_count: u64,
}

impl SpectrumReport {
    pub fn build(p: &PermTable, a: Elt, workers: usize) -> Result<Self> {
        let field = p.field();
        let beta = boomerang_row(p, a, workers)?;
        let ddt = ddt_row(p, a)?;
        let rows: Vec<SpectrumRow> = field
            .elements()
            .map(|b| SpectrumRow {
                b_hex: field.fmt_elt(b),
                beta: beta[b.0 as usize],
                diff_count: ddt[b.0 as usize],
            })
            .collect();
        let boomerang_spectrum = SpectrumMultiset::from_values(beta[1..].iter().copied());
        Ok(SpectrumReport {
            k: field.degree(),
            modulus: format!("{:#x}", field.modulus()),
            exponent: p.exponent(),
            a: field.fmt_elt(a),
            boomerang_uniformity_row: boomerang_spectrum.max_value().unwrap_or(0),
            boomerang_spectrum,
            differential_spectrum: SpectrumMultiset::from_values(ddt[1..].iter().copied()),
            rows,
        })
    }

    pub fn to_structured(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_structured(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Columns `b_hex,beta,diff_count`.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        for row in &self.rows {
            wtr.serialize(row)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn read_csv(r: impl Read) -> Result<Vec<SpectrumRow>> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
        let mut out = Vec::new();
        for rec in rdr.deserialize() {
            out.push(rec?);
        }
        Ok(out)
    }

    pub fn render_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "GF(2^{}) modulus {}", self.k, self.modulus);
        if let Some(d) = self.exponent {
            let _ = writeln!(s, "exponent: {d}");
        }
        let _ = writeln!(s, "a = {}", self.a);
        let _ = writeln!(
            s,
            "boomerang spectrum (b != 0): {}",
            self.boomerang_spectrum
        );
        let _ = writeln!(
            s,
            "differential spectrum (b != 0): {}",
            self.differential_spectrum
        );
        let _ = writeln!(s, "max over b != 0: {}", self.boomerang_uniformity_row);
        let _ = writeln!(s, "{:>10} {:>10} {:>10}", "b", "beta", "ddt");
        for r in &self.rows {
            let _ = writeln!(s, "{:>10} {:>10} {:>10}", r.b_hex, r.beta, r.diff_count);
        }
        s
    }
}

pub fn write_rows_csv(rows: &[RowRecord], w: impl Write) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_rows_csv(r: impl Read) -> Result<Vec<RowRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}
