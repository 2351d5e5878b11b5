//! Timing of the three BCT routes and of the parallel row kernel.

use std::io::Write;
use std::time::Instant;

use boomspec_core::spectra::{bct_entry, bct_entry_pairs_naive, bct_entry_system, boomerang_row};
use boomspec_core::{Elt, PermTable};
use serde::Serialize;

use crate::{open_out, BenchArgs, Format};

/// Entries timed per route; the quadratic route gets fewer.
const SAMPLE: u32 = 256;
const NAIVE_SAMPLE: u32 = 8;
const NAIVE_MAX_DEGREE: u32 = 12;

#[derive(Serialize)]
struct RouteTiming {
    route: &'static str,
    entries: u32,
    seconds: f64,
    entries_per_sec: f64,
}

#[derive(Serialize)]
struct ScalingRow {
    workers: usize,
    seconds: f64,
    speedup: f64,
}

#[derive(Serialize)]
struct BenchReport {
    k: u32,
    modulus: String,
    exponent: Option<u64>,
    routes: Vec<RouteTiming>,
    scaling: Vec<ScalingRow>,
}

fn time_route(
    p: &PermTable,
    route: &'static str,
    entries: u32,
    f: impl Fn(&PermTable, Elt, Elt) -> boomspec_core::Result<u64>,
) -> boomspec_core::Result<RouteTiming> {
    let size = p.size() as u32;
    let entries = entries.min(size - 1);
    let t = Instant::now();
    let mut checksum = 0u64;
    for i in 0..entries {
        // spread the sample over the field
        let b = Elt(1 + (i as u64 * (size as u64 - 1) / entries as u64) as u32);
        checksum = checksum.wrapping_add(f(p, Elt::ONE, b)?);
    }
    let seconds = t.elapsed().as_secs_f64();
    log::debug!("{route}: checksum {checksum}");
    Ok(RouteTiming {
        route,
        entries,
        seconds,
        entries_per_sec: entries as f64 / seconds.max(1e-9),
    })
}

pub(crate) fn cmd_bench(args: &BenchArgs) -> boomspec_core::Result<u8> {
    let p = args.source.permutation()?;
    let k = p.field().degree();
    let mut routes = vec![
        time_route(&p, "definition", SAMPLE, bct_entry)?,
        time_route(&p, "derivative_buckets", SAMPLE, bct_entry_system)?,
    ];
    if k <= NAIVE_MAX_DEGREE {
        routes.push(time_route(
            &p,
            "pairs_quadratic",
            NAIVE_SAMPLE,
            bct_entry_pairs_naive,
        )?);
    }

    let max_workers = args.workers.workers as usize;
    let mut counts = vec![1usize];
    while counts.last().unwrap() * 2 <= max_workers {
        counts.push(counts.last().unwrap() * 2);
    }
    if *counts.last().unwrap() != max_workers {
        counts.push(max_workers);
    }
    let mut scaling: Vec<ScalingRow> = Vec::new();
    for w in counts {
        let t = Instant::now();
        boomerang_row(&p, Elt::ONE, w)?;
        let seconds = t.elapsed().as_secs_f64();
        let base = scaling.first().map_or(seconds, |r| r.seconds);
        scaling.push(ScalingRow {
            workers: w,
            seconds,
            speedup: base / seconds.max(1e-9),
        });
    }

    let report = BenchReport {
        k,
        modulus: format!("{:#x}", p.field().modulus()),
        exponent: p.exponent(),
        routes,
        scaling,
    };
    let mut w = open_out(args.output.out.as_deref())?;
    match args.output.format {
        Format::Structured => writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?,
        Format::Csv => {
            writeln!(w, "# GF(2^{k}) modulus {}", report.modulus)?;
            writeln!(w, "kind,name,entries_or_workers,seconds,rate")?;
            for r in &report.routes {
                writeln!(
                    w,
                    "route,{},{},{:.6},{:.1}",
                    r.route, r.entries, r.seconds, r.entries_per_sec
                )?;
            }
            for s in &report.scaling {
                writeln!(
                    w,
                    "scaling,row,{},{:.6},{:.3}",
                    s.workers, s.seconds, s.speedup
                )?;
            }
        }
        Format::Table => {
            writeln!(w, "GF(2^{k}) modulus {}", report.modulus)?;
            if let Some(d) = report.exponent {
                writeln!(w, "exponent: {d}")?;
            }
            writeln!(
                w,
                "{:<20} {:>8} {:>12} {:>14}",
                "route", "entries", "seconds", "entries/s"
            )?;
            for r in &report.routes {
                writeln!(
                    w,
                    "{:<20} {:>8} {:>12.6} {:>14.1}",
                    r.route, r.entries, r.seconds, r.entries_per_sec
                )?;
            }
            writeln!(w, "{:<8} {:>12} {:>8}", "workers", "row secs", "speedup")?;
            for s in &report.scaling {
                writeln!(w, "{:<8} {:>12.6} {:>8.2}", s.workers, s.seconds, s.speedup)?;
            }
        }
    }
    w.flush()?;
    Ok(0)
}
