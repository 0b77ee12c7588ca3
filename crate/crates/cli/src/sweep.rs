//! The scenario grid: band sets x span counts x pump counts x management power.
//!
//! Pump optima do not depend on management power, so each (band set, spans,
//! pumps) group is optimized and evaluated once and re-costed for every P_mm.

use std::time::{Duration, Instant};

use hybrid_link_core::{BandLabel, PowerLedger, RamanPumpSet};
use rayon::prelude::*;

use crate::config::{BandSet, SweepSpec};
use crate::error::{CliError, Result};
use crate::runner::{pump_plan, scenario_id, Optimum, Study};
use crate::tsv::Table;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scenario: String,
    pub band_set: BandSet,
    pub n_span: u32,
    pub n_pumps: usize,
    pub p_mm_w: f64,
    /// `None` for the all-band total row.
    pub band: Option<BandLabel>,
    pub throughput_tbps: f64,
    pub lumped_w: f64,
    pub dra_w: f64,
    pub mm_w: f64,
    pub power_w: f64,
    pub energy_pj_per_bit: f64,
    /// Energy per bit relative to the lumped-only scenario with the same band
    /// set, span count and management power.
    pub energy_change_pct: f64,
    /// Power over the largest scenario total among scenarios with the same
    /// span count and management power.
    pub power_norm: f64,
    pub pumps: String,
}

#[derive(Debug, Clone)]
pub struct SweepGroup {
    pub band_set: BandSet,
    pub n_span: u32,
    pub n_pumps: usize,
    pub optimum: Optimum,
    pub ledger: PowerLedger,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub groups: Vec<SweepGroup>,
    pub elapsed: Duration,
}

impl SweepOutcome {
    pub fn scenario_count(&self) -> usize {
        self.rows.iter().filter(|r| r.band.is_none()).count()
    }

    pub fn total(&self, set: &str, n_span: u32, n_pumps: usize, p_mm_w: f64) -> Option<&SweepRow> {
        self.find(set, n_span, n_pumps, p_mm_w, None)
    }

    pub fn find(&self, set: &str, n_span: u32, n_pumps: usize, p_mm_w: f64, band: Option<BandLabel>) -> Option<&SweepRow> {
        self.rows.iter().find(|r| {
            r.band_set.to_string() == set
                && r.n_span == n_span
                && r.n_pumps == n_pumps
                && r.p_mm_w == p_mm_w
                && r.band == band
        })
    }
}

pub fn run_sweep(study: &Study, spec: &SweepSpec) -> Result<SweepOutcome> {
    let start = Instant::now();
    let mut keys = Vec::new();
    for set in &spec.band_sets {
        for &n_span in &spec.spans {
            for &n_pumps in &spec.pump_counts {
                keys.push((set.clone(), n_span, n_pumps));
            }
            if !spec.pump_counts.contains(&0) {
                keys.push((set.clone(), n_span, 0));
            }
        }
    }
    let groups = keys
        .par_iter()
        .map(|(set, n_span, n_pumps)| {
            let optimum = study.optimize(set, *n_span, *n_pumps)?;
            let eval = study.evaluate(set, *n_span, &optimum.pumps, 0.0)?;
            Ok(SweepGroup {
                band_set: set.clone(),
                n_span: *n_span,
                n_pumps: *n_pumps,
                optimum,
                ledger: eval.ledger,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    for g in groups.iter().filter(|g| spec.pump_counts.contains(&g.n_pumps)) {
        let baseline = groups
            .iter()
            .find(|b| b.band_set == g.band_set && b.n_span == g.n_span && b.n_pumps == 0)
            .expect("lumped-only group always present");
        for &p_mm in &spec.p_mm_w {
            let id = scenario_id(&g.band_set, g.n_span, g.n_pumps, p_mm);
            let wrap = |source| CliError::Scenario {
                scenario: id.clone(),
                source,
            };
            let ledger = g.ledger.with_management_power(p_mm).map_err(wrap)?;
            let base = baseline.ledger.with_management_power(p_mm).map_err(wrap)?;
            rows.extend(group_rows(&id, g, &ledger, &base, p_mm, &g.optimum.pumps).map_err(wrap)?);
        }
    }
    normalize_power(&mut rows);
    Ok(SweepOutcome {
        rows,
        groups,
        elapsed: start.elapsed(),
    })
}

fn group_rows(
    id: &str,
    g: &SweepGroup,
    ledger: &PowerLedger,
    base: &PowerLedger,
    p_mm_w: f64,
    pumps: &RamanPumpSet,
) -> hybrid_link_core::Result<Vec<SweepRow>> {
    let n = ledger.n_span as f64;
    let change = |e: f64, e0: f64| 100.0 * (e / e0 - 1.0);
    let row = |band, throughput_tbps, lumped_w, dra_w, mm_w, power_w, energy_pj_per_bit, energy_change_pct| SweepRow {
        scenario: id.to_string(),
        band_set: g.band_set.clone(),
        n_span: g.n_span,
        n_pumps: g.n_pumps,
        p_mm_w,
        band,
        throughput_tbps,
        lumped_w,
        dra_w,
        mm_w,
        power_w,
        energy_pj_per_bit,
        energy_change_pct,
        power_norm: f64::NAN,
        pumps: pump_plan(pumps),
    };
    let mut rows = Vec::new();
    for b in &ledger.bands {
        let e = ledger.band_energy_per_bit(b.band)?;
        let e0 = base.band_energy_per_bit(b.band)?;
        rows.push(row(
            Some(b.band),
            b.throughput_tbps,
            n * b.lumped_w,
            n * b.dra_w,
            n * b.mm_w,
            n * b.span_w(),
            e,
            change(e, e0),
        ));
    }
    let sum = |f: fn(&hybrid_link_core::ledger::BandPower) -> f64| n * ledger.bands.iter().map(f).sum::<f64>();
    let e = ledger.energy_per_bit()?;
    rows.push(row(
        None,
        ledger.throughput_tbps(),
        sum(|b| b.lumped_w),
        sum(|b| b.dra_w),
        sum(|b| b.mm_w),
        ledger.total_w(),
        e,
        change(e, base.energy_per_bit()?),
    ));
    Ok(rows)
}

fn normalize_power(rows: &mut [SweepRow]) {
    let maxima: Vec<f64> = rows
        .iter()
        .map(|r| {
            rows.iter()
                .filter(|o| o.band.is_none() && o.n_span == r.n_span && o.p_mm_w == r.p_mm_w)
                .map(|o| o.power_w)
                .fold(0.0, f64::max)
        })
        .collect();
    for (r, max) in rows.iter_mut().zip(maxima) {
        r.power_norm = r.power_w / max;
    }
}

pub fn sweep_table(outcome: &SweepOutcome) -> Table {
    let mut t = Table::new([
        "scenario",
        "band_set",
        "n_span",
        "pumps",
        "p_mm_w",
        "band",
        "throughput_tbps",
        "lumped_w",
        "dra_w",
        "mm_w",
        "power_w",
        "energy_pj_per_bit",
        "energy_change_pct",
        "power_norm",
        "pump_plan",
    ]);
    t.comment("power columns are link totals over all spans");
    t.comment("energy_change_pct is relative to lumped-only with the same band_set, n_span and p_mm_w");
    t.comment("power_norm divides by the largest scenario total with the same n_span and p_mm_w");
    for r in &outcome.rows {
        t.push([
            r.scenario.clone(),
            r.band_set.to_string(),
            r.n_span.to_string(),
            r.n_pumps.to_string(),
            r.p_mm_w.to_string(),
            r.band.map_or("total".to_string(), |b| b.to_string()),
            r.throughput_tbps.to_string(),
            r.lumped_w.to_string(),
            r.dra_w.to_string(),
            r.mm_w.to_string(),
            r.power_w.to_string(),
            r.energy_pj_per_bit.to_string(),
            r.energy_change_pct.to_string(),
            r.power_norm.to_string(),
            r.pumps.clone(),
        ]);
    }
    t
}
