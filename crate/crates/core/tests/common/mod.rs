#![allow(dead_code)]

pub mod gn;

use hybrid_link_core::ledger::RamanDraw;
use hybrid_link_core::link::build_grid;
use hybrid_link_core::quality::default_noise_figure_db;
use hybrid_link_core::*;

fn data_table(name: &str) -> Vec<(f64, f64)> {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let mut it = l.split('\t').map(|v| v.trim().parse::<f64>().unwrap());
            (it.next().unwrap(), it.next().unwrap())
        })
        .collect()
}

pub fn efficiency_curve(band: BandLabel) -> EfficiencyCurve {
    let (file, sat) = match band {
        BandLabel::S => ("pce_s_band.tsv", 20.5),
        BandLabel::C => ("pce_c_band.tsv", 23.0),
        BandLabel::L => ("pce_l_band.tsv", 23.0),
    };
    let points: Vec<(f64, f64)> = data_table(file).into_iter().map(|(p, e)| (p, e / 100.0)).collect();
    EfficiencyCurve::new(band, &points, sat).unwrap()
}

pub fn pump_draw() -> PumpDrawCurve {
    PumpDrawCurve::new(&data_table("raman_pump_draw.tsv")).unwrap()
}

pub fn model(plan: BandPlan, solver: SolverConfig) -> LinkModel {
    let grid = build_grid(&plan, 150.0, 140.0, 2.0).unwrap();
    let amplifiers = grid
        .bands()
        .into_iter()
        .map(|b| LumpedAmplifier {
            noise_figure_db: default_noise_figure_db(b),
            efficiency: efficiency_curve(b),
        })
        .collect();
    LinkModel {
        fiber: FiberSpec::smf28(),
        grid,
        amplifiers,
        raman_draw: RamanDraw::Measured(pump_draw()),
        solver,
        transceiver_snr_db: 20.0,
        format_correction: true,
        efficiency_point: EfficiencyPoint::Saturation,
    }
}

pub fn scl_grid() -> ChannelGrid {
    build_grid(&BandPlan::scl(), 150.0, 140.0, 2.0).unwrap()
}

pub fn pumps(spec: &[(f64, f64)]) -> RamanPumpSet {
    RamanPumpSet::new(spec.iter().map(|&(w, p)| RamanPump::new(w, p)).collect()).unwrap()
}

pub fn db(ratio: f64) -> f64 {
    10.0 * ratio.log10()
}
