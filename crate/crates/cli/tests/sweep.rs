mod common;

use hybrid_link::cache::OptimumCache;
use hybrid_link::config::BandSet;
use hybrid_link::sweep::sweep_table;
use hybrid_link::{run_sweep, Study, SweepSpec};
use hybrid_link_core::{BandLabel, RamanPump, RamanPumpSet};

fn small_study(cache: OptimumCache) -> Study {
    let text = common::small_swarm(&common::config_text("scl.toml"), 4, 2);
    Study::new(common::config(&text).unwrap(), cache)
}

fn small_spec() -> SweepSpec {
    SweepSpec {
        band_sets: vec![BandSet::parse("CL").unwrap()],
        spans: vec![1, 100],
        pump_counts: vec![0, 1],
        p_mm_w: vec![0.0, 8.0],
    }
}

#[test]
fn standard_grid_has_72_scenarios() {
    let spec = common::config(&common::config_text("scl.toml")).unwrap().sweep;
    assert_eq!(spec, SweepSpec::standard());
    assert_eq!(spec.scenario_count(), 72);
}

#[test]
fn sweep_rows_are_consistent_and_deterministic() {
    let spec = small_spec();
    let a = run_sweep(&small_study(OptimumCache::disabled()), &spec).unwrap();
    let b = run_sweep(&small_study(OptimumCache::disabled()), &spec).unwrap();
    assert_eq!(sweep_table(&a).render(), sweep_table(&b).render());
    assert_eq!(a.scenario_count(), 8);
    assert_eq!(a.rows.len(), 8 * 3);

    let rendered = sweep_table(&a).render();
    let mut lines = rendered.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let col = |name: &str| header.iter().position(|h| *h == name).unwrap();
    for line in lines {
        let cells: Vec<&str> = line.split('\t').collect();
        let num = |name: &str| cells[col(name)].parse::<f64>().unwrap();
        let ratio = num("power_w") / num("throughput_tbps");
        assert!((num("energy_pj_per_bit") / ratio - 1.0).abs() <= 1e-9, "{line}");
        if cells[col("pumps")] == "0" {
            assert_eq!(num("energy_change_pct"), 0.0);
            assert_eq!(num("dra_w"), 0.0);
        }
        assert!(num("power_norm") > 0.0 && num("power_norm") <= 1.0);
    }
}

#[test]
fn cached_sweep_matches_cold_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_spec();
    let cold = run_sweep(&small_study(OptimumCache::at(dir.path())), &spec).unwrap();
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(files, 2);
    let warm = run_sweep(&small_study(OptimumCache::at(dir.path())), &spec).unwrap();
    assert!(warm.groups.iter().filter(|g| g.n_pumps > 0).all(|g| g.optimum.cached));
    assert_eq!(sweep_table(&cold).render(), sweep_table(&warm).render());
}

#[test]
fn hybrid_s_band_beats_lumped_energy_per_bit_at_100_spans() {
    let study = small_study(OptimumCache::disabled());
    let scl = BandSet::parse("SCL").unwrap();
    let pumps = RamanPumpSet::new(
        [1411.0, 1417.0, 1427.0, 1450.0]
            .iter()
            .map(|&nm| RamanPump::new(nm, 250.0))
            .collect(),
    )
    .unwrap();
    let lumped = study.evaluate(&scl, 100, &RamanPumpSet::none(), 8.0).unwrap();
    let hybrid = study.evaluate(&scl, 100, &pumps, 8.0).unwrap();
    let s = |e: &hybrid_link_core::LinkEvaluation| e.ledger.band_energy_per_bit(BandLabel::S).unwrap();
    assert!(s(&hybrid) < s(&lumped));
    assert!(hybrid.ledger.energy_per_bit().unwrap() < lumped.ledger.energy_per_bit().unwrap());
}
