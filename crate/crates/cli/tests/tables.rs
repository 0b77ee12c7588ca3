mod common;

use std::path::Path;

use hybrid_link::tsv::{efficiency_curve_table, load_efficiency_curve, load_pump_draw, pump_draw_table, NumericTable};
use hybrid_link_core::{BandLabel, EfficiencyCurve, PumpDrawCurve};
use proptest::prelude::*;

fn data(name: &str) -> std::path::PathBuf {
    common::repo().join("data").join(name)
}

fn reload_efficiency(curve: &EfficiencyCurve) -> EfficiencyCurve {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.tsv");
    std::fs::write(&path, efficiency_curve_table(curve).render()).unwrap();
    load_efficiency_curve(&path, curve.band(), curve.saturation_dbm()).unwrap()
}

fn reload_draw(curve: &PumpDrawCurve) -> PumpDrawCurve {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("draw.tsv");
    std::fs::write(&path, pump_draw_table(curve).render()).unwrap();
    load_pump_draw(&path).unwrap()
}

#[test]
fn shipped_curves_load_with_expected_plateaus() {
    let c = load_efficiency_curve(&data("pce_c_band.tsv"), BandLabel::C, 23.0).unwrap();
    let s = load_efficiency_curve(&data("pce_s_band.tsv"), BandLabel::S, 20.5).unwrap();
    let l = load_efficiency_curve(&data("pce_l_band.tsv"), BandLabel::L, 23.0).unwrap();
    assert!((c.efficiency_at_saturation() - 0.05).abs() < 0.005);
    assert!((s.efficiency_at_saturation() - 0.01).abs() < 0.001);
    assert!(l.efficiency_at_saturation() > s.efficiency_at_saturation());
    for curve in [&c, &s, &l] {
        assert_eq!(&reload_efficiency(curve), curve);
    }
    let draw = load_pump_draw(&data("raman_pump_draw.tsv")).unwrap();
    assert_eq!(reload_draw(&draw), draw);
}

#[test]
fn idle_draw_is_first_row_of_shipped_file() {
    let draw = load_pump_draw(&data("raman_pump_draw.tsv")).unwrap();
    let table = NumericTable::read(&data("raman_pump_draw.tsv")).unwrap();
    assert_eq!(table.rows[0][0], 0.0);
    assert_eq!(draw.pump_draw_at(0.0).unwrap(), table.rows[0][1]);
}

fn load_text(text: &str) -> hybrid_link::Result<EfficiencyCurve> {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    std::fs::write(&path, text).unwrap();
    load_efficiency_curve(&path, BandLabel::C, 20.0)
}

#[test]
fn malformed_curves_point_at_the_row() {
    let single = load_text("output_mw\tefficiency_pct\n100\t5\n").unwrap_err();
    assert!(single.to_string().contains("at least 2"), "{single}");

    let unsorted = load_text("# c\noutput_mw\tefficiency_pct\n50\t3\n150\t5\n120\t5\n").unwrap_err();
    assert!(unsorted.to_string().contains("bad.tsv:5:"), "{unsorted}");

    let negative = load_text("output_mw\tefficiency_pct\n50\t-3\n150\t5\n").unwrap_err();
    assert!(negative.to_string().contains("bad.tsv:2:"), "{negative}");

    let column = load_text("output_mw\teta\n50\t3\n150\t5\n").unwrap_err();
    assert!(column.to_string().contains("efficiency_pct"), "{column}");
}

#[test]
fn missing_file_names_the_path() {
    let err = load_pump_draw(Path::new("/nonexistent/draw.tsv")).unwrap_err();
    assert!(err.to_string().contains("/nonexistent/draw.tsv"));
}

fn increasing(len: std::ops::Range<usize>, lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, len).prop_map(move |steps| {
        let total: f64 = steps.iter().sum();
        let mut acc = lo;
        steps
            .iter()
            .map(|s| {
                acc += s / total * (hi - lo);
                acc
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn efficiency_curves_round_trip(
        outputs in increasing(2..30, 0.0, 400.0),
        etas in prop::collection::vec(0.001f64..0.49, 30),
        sat_frac in 0.05f64..0.95,
    ) {
        let points: Vec<(f64, f64)> = outputs.iter().copied().zip(etas).collect();
        let lo = points[0].0;
        let hi = points[points.len() - 1].0;
        let sat_dbm = 10.0 * (lo + sat_frac * (hi - lo)).log10();
        let curve = EfficiencyCurve::new(BandLabel::L, &points, sat_dbm).unwrap();
        let once = reload_efficiency(&curve);
        prop_assert_eq!(&reload_efficiency(&once), &once);
        for ((x0, y0), (x1, y1)) in curve.points().into_iter().zip(once.points()) {
            prop_assert_eq!(x0, x1);
            prop_assert!((y0 - y1).abs() <= 1e-15);
        }
    }

    #[test]
    fn pump_draw_curves_round_trip(outputs in increasing(2..20, 0.0, 600.0), extra in increasing(20..21, 1.0, 5.0)) {
        let points: Vec<(f64, f64)> = outputs.iter().zip(&extra).map(|(&p, &w)| (p, w)).collect();
        let curve = PumpDrawCurve::new(&points).unwrap();
        prop_assert_eq!(reload_draw(&curve), curve);
    }
}
