//! TSV renderings of single-scenario results.

use hybrid_link_core::units::{linear_to_db, mw_to_dbm, thz_to_wavelength};
use hybrid_link_core::{LinkEvaluation, PowerProfile, SwarmResult};

use crate::error::Result;
use crate::tsv::Table;

pub fn quality_table(scenario: &str, eval: &LinkEvaluation) -> Table {
    let mut t = Table::new([
        "scenario",
        "channel",
        "band",
        "frequency_thz",
        "wavelength_nm",
        "on_off_gain_db",
        "ase_dbm",
        "nli_dbm",
        "snr_ase_db",
        "snr_nli_db",
        "snr_db",
        "throughput_gbps",
    ]);
    for (i, ch) in eval.quality.channels.iter().enumerate() {
        t.push([
            scenario.to_string(),
            i.to_string(),
            ch.band.to_string(),
            format!("{:.4}", ch.center_thz),
            format!("{:.3}", thz_to_wavelength(ch.center_thz)),
            format!("{:.4}", eval.on_off_gain_db[i]),
            format!("{:.4}", mw_to_dbm(eval.ase_mw[i])),
            format!("{:.4}", mw_to_dbm(eval.nli_mw[i])),
            format!("{:.4}", linear_to_db(ch.snr_ase)),
            format!("{:.4}", linear_to_db(ch.snr_nli)),
            format!("{:.4}", linear_to_db(ch.snr_total)),
            format!("{:.4}", ch.throughput_tbps * 1e3),
        ]);
    }
    t
}

/// Per-span electrical power split the way the stacked power bars show it.
pub fn ledger_table(scenario: &str, eval: &LinkEvaluation) -> Table {
    let mut t = Table::new(["scenario", "band", "lumped_w", "dra_w", "mm_w", "span_w"]);
    for b in &eval.ledger.bands {
        t.push([
            scenario.to_string(),
            b.band.to_string(),
            b.lumped_w.to_string(),
            b.dra_w.to_string(),
            b.mm_w.to_string(),
            b.span_w().to_string(),
        ]);
    }
    t
}

/// Link totals per band plus an overall row.
pub fn summary_table(scenario: &str, eval: &LinkEvaluation) -> Result<Table> {
    let mut t = Table::new(["scenario", "band", "channels", "throughput_tbps", "power_w", "energy_pj_per_bit"]);
    let ledger = &eval.ledger;
    for b in &ledger.bands {
        let channels = eval.quality.channels.iter().filter(|c| c.band == b.band).count();
        t.push([
            scenario.to_string(),
            b.band.to_string(),
            channels.to_string(),
            b.throughput_tbps.to_string(),
            (ledger.n_span as f64 * b.span_w()).to_string(),
            ledger.band_energy_per_bit(b.band)?.to_string(),
        ]);
    }
    t.push([
        scenario.to_string(),
        "total".into(),
        eval.quality.channels.len().to_string(),
        ledger.throughput_tbps().to_string(),
        ledger.total_w().to_string(),
        ledger.energy_per_bit()?.to_string(),
    ]);
    Ok(t)
}

pub fn trace_table(scenario: &str, swarm: &SwarmResult) -> Table {
    let n = swarm.best.len() / 2;
    let mut header = vec!["iteration".to_string(), "best_fitness_tbps".to_string()];
    for k in 1..=n {
        header.push(format!("pump{k}_nm"));
        header.push(format!("pump{k}_mw"));
    }
    let mut t = Table::new(header);
    t.comment(format!("{scenario}: {} fitness evaluations", swarm.evaluations));
    for (i, (f, x)) in swarm.trace.iter().zip(&swarm.best_history).enumerate() {
        let mut row = vec![i.to_string(), f.to_string()];
        row.extend(x.iter().map(|v| v.to_string()));
        t.push(row);
    }
    t
}

pub fn profile_table(scenario: &str, profile: &PowerProfile) -> Table {
    let mut header = vec!["z_km".to_string()];
    header.extend(profile.signal_thz.iter().map(|f| format!("sig_{f:.3}THz_dbm")));
    header.extend(
        profile
            .pump_thz
            .iter()
            .map(|f| format!("pump_{:.2}nm_dbm", thz_to_wavelength(*f))),
    );
    let mut t = Table::new(header);
    t.comment(format!(
        "{scenario}: pumps enter at z = {} km travelling backward",
        profile.length_km()
    ));
    for (node, z) in profile.z_km.iter().enumerate() {
        let mut row = vec![format!("{z:.4}")];
        row.extend(
            profile
                .signal_mw
                .iter()
                .chain(&profile.pump_mw)
                .map(|w| format!("{:.5}", mw_to_dbm(w[node]))),
        );
        t.push(row);
    }
    t
}
