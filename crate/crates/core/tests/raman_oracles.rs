mod common;

use common::{db, pumps, scl_grid};
use hybrid_link_core::link::{build_grid, Band, BandLabel, BandPlan, Channel, ChannelGrid, FiberSpec, RamanProfile};
use hybrid_link_core::raman::{effective_integrals, on_off_gain, propagate, PowerProfile, RamanSystem};
use hybrid_link_core::{Error, RamanPumpSet, SolverConfig};

const C_NM_THZ: f64 = 299_792.458;

fn channel(nm: f64) -> Channel {
    Channel {
        center_thz: C_NM_THZ / nm,
        symbol_rate_gbd: 140.0,
        launch_power_mw: 1.5849,
        band: BandLabel::C,
    }
}

/// Brute-force reference: every wave integrated forward with a 1 m midpoint
/// rule, the single pump's z = 0 power found by secant iteration.
struct FineStep {
    alpha: Vec<f64>,
    coupling: Vec<f64>,
    n_sig: usize,
}

impl FineStep {
    fn new(grid: &ChannelGrid, fiber: &FiberSpec, pump_nm: Option<f64>) -> Self {
        let mut freqs = grid.frequencies_thz();
        let n_sig = freqs.len();
        if let Some(nm) = pump_nm {
            freqs.push(C_NM_THZ / nm);
        }
        let n = freqs.len();
        let alpha = freqs.iter().map(|&f| fiber.alpha_per_km(f).unwrap()).collect();
        let mut coupling = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let (fi, fj) = (freqs[i], freqs[j]);
                coupling[i * n + j] = if fj > fi {
                    fiber.raman.gain(fj - fi)
                } else if fj < fi {
                    -(fi / fj) * fiber.raman.gain(fi - fj)
                } else {
                    0.0
                };
            }
        }
        Self { alpha, coupling, n_sig }
    }

    fn slope(&self, p: &[f64], out: &mut [f64]) {
        let n = p.len();
        for i in 0..n {
            let row = &self.coupling[i * n..(i + 1) * n];
            let mut acc = [0.0; 4];
            for (r, v) in row.chunks(4).zip(p.chunks(4)) {
                for k in 0..r.len() {
                    acc[k] += r[k] * v[k];
                }
            }
            let rate = acc.iter().sum::<f64>() - self.alpha[i];
            out[i] = if i < self.n_sig { p[i] * rate } else { -p[i] * rate };
        }
    }

    fn shoot(&self, launch_w: &[f64], pump0_w: Option<f64>, length_km: f64) -> Vec<f64> {
        let steps = (length_km / 1e-3).round() as usize;
        let h = length_km / steps as f64;
        let mut p = launch_w.to_vec();
        p.extend(pump0_w);
        let mut k = vec![0.0; p.len()];
        let mut mid = vec![0.0; p.len()];
        for _ in 0..steps {
            self.slope(&p, &mut k);
            for i in 0..p.len() {
                mid[i] = p[i] + 0.5 * h * k[i];
            }
            self.slope(&mid, &mut k);
            for i in 0..p.len() {
                p[i] += h * k[i];
            }
        }
        p
    }

    fn solve(&self, launch_w: &[f64], pump_end_w: f64, length_km: f64) -> Vec<f64> {
        let a = self.alpha[self.n_sig];
        let end = |x: f64| self.shoot(launch_w, Some(x), length_km);
        let mut x0 = pump_end_w * (-a * length_km).exp();
        let mut r0 = end(x0)[self.n_sig].ln() - pump_end_w.ln();
        let mut x1 = x0 * 1.2;
        for _ in 0..30 {
            let out = end(x1);
            let r1 = out[self.n_sig].ln() - pump_end_w.ln();
            if r1.abs() < 1e-10 {
                return out;
            }
            let next = x1.ln() - r1 * (x1.ln() - x0.ln()) / (r1 - r0);
            (x0, r0, x1) = (x1, r1, next.exp());
        }
        panic!("reference shooting did not converge");
    }
}

#[test]
fn unpumped_single_channel_loses_sixteen_db() {
    let grid = ChannelGrid::new(vec![channel(1550.0)], 150.0).unwrap();
    let fiber = FiberSpec::smf28();
    let p = propagate(&grid, &fiber, &RamanPumpSet::none(), &SolverConfig::default()).unwrap();
    let loss = db(p.signal_mw[0][0] / p.signal_output_mw()[0]);
    assert!((loss - 16.0).abs() < 1e-6, "loss {loss}");
}

#[test]
fn raman_tilt_favors_longer_wavelength() {
    let plan = BandPlan::new(vec![Band::new(BandLabel::C, 1530.0, 1565.0)]).unwrap();
    let grid = build_grid(&plan, 150.0, 140.0, 2.0).unwrap();
    let two = ChannelGrid::new(grid.channels()[10..12].to_vec(), 150.0).unwrap();
    let mut fiber = FiberSpec::smf28();
    fiber.attenuation = hybrid_link_core::link::AttenuationCurve::from_points(&[(1350.0, 0.2), (1650.0, 0.2)]).unwrap();
    let p = propagate(&two, &fiber, &RamanPumpSet::none(), &SolverConfig::default()).unwrap();
    let out = p.signal_output_mw();
    // channels are ordered by frequency, so index 0 is the longer wavelength
    assert!(out[0] > out[1]);
}

#[test]
fn without_raman_gain_the_solution_is_exponential() {
    let grid = scl_grid();
    let mut fiber = FiberSpec::smf28();
    fiber.raman = RamanProfile::zero();
    let set = pumps(&[(1365.0, 200.0), (1425.0, 150.0)]);
    let p = propagate(&grid, &fiber, &set, &SolverConfig::default()).unwrap();
    let l = fiber.length_km;
    for (i, &f) in p.signal_thz.iter().enumerate() {
        let a = fiber.alpha_per_km(f).unwrap();
        for (n, &z) in p.z_km.iter().enumerate() {
            let want = p.signal_mw[i][0] * (-a * z).exp();
            assert!((p.signal_mw[i][n] / want - 1.0).abs() < 1e-9);
        }
    }
    for (k, pump) in set.pumps().iter().enumerate() {
        let a = fiber.alpha_per_km(pump.frequency_thz()).unwrap();
        for (n, &z) in p.z_km.iter().enumerate() {
            let want = pump.power_mw * (-a * (l - z)).exp();
            assert!((p.pump_mw[k][n] / want - 1.0).abs() < 1e-9);
        }
    }
}

fn four_pumps() -> RamanPumpSet {
    pumps(&[(1365.0, 250.0), (1385.0, 250.0), (1405.0, 250.0), (1425.0, 250.0)])
}

#[test]
fn halving_the_step_moves_outputs_below_1e4_db() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let coarse = propagate(&grid, &fiber, &four_pumps(), &SolverConfig::default()).unwrap();
    let fine_cfg = SolverConfig {
        step_km: 0.05,
        ..SolverConfig::default()
    };
    let fine = propagate(&grid, &fiber, &four_pumps(), &fine_cfg).unwrap();
    let worst = coarse
        .signal_output_mw()
        .iter()
        .zip(fine.signal_output_mw())
        .map(|(a, b)| db(a / b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "worst {worst} dB");
}

#[test]
fn scattering_conserves_photons_at_every_node() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let system = RamanSystem::new(&grid, &fiber, &four_pumps(), &SolverConfig::default()).unwrap();
    let p = system.solve().unwrap();
    for node in 0..p.nodes() {
        let (net, scale) = system.photon_flux_balance(&p, node);
        assert!(scale > 0.0);
        assert!(net <= 1e-9 * scale, "node {node}: {net} vs {scale}");
        assert!(net.abs() <= 1e-9 * scale);
    }
}

#[test]
fn pump_boundary_values_hold_at_span_end() {
    let grid = scl_grid();
    let set = four_pumps();
    let p = propagate(&grid, &FiberSpec::smf28(), &set, &SolverConfig::default()).unwrap();
    for (k, pump) in set.pumps().iter().enumerate() {
        assert_eq!(*p.pump_mw[k].last().unwrap(), pump.power_mw);
    }
    assert!(p.residual < 1e-6);
    assert!(p.signal_mw.iter().chain(&p.pump_mw).flatten().all(|&v| v >= 0.0));
}

#[test]
fn single_pump_gain_matches_fine_step_reference() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let set = pumps(&[(1425.0, 250.0)]);
    let cfg = SolverConfig::default();
    let on = propagate(&grid, &fiber, &set, &cfg).unwrap();
    let off = propagate(&grid, &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    let gain = on_off_gain(&on, &off).unwrap();

    let launch: Vec<f64> = grid.launch_powers_mw().iter().map(|p| p * 1e-3).collect();
    let reference_off = FineStep::new(&grid, &fiber, None).shoot(&launch, None, fiber.length_km);
    let reference_on = FineStep::new(&grid, &fiber, Some(1425.0)).solve(&launch, 0.25, fiber.length_km);

    for i in 0..grid.len() {
        let want = db(reference_on[i] / reference_off[i]);
        assert!((gain[i] - want).abs() < 1e-3, "channel {i}: {} vs {want}", gain[i]);
        if grid.channels()[i].band == BandLabel::S {
            assert!(gain[i] > 0.0);
        }
    }
}

#[test]
fn gain_grows_with_pump_power() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let cfg = SolverConfig::default();
    let off = propagate(&grid, &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    let mut previous = vec![0.0; grid.len()];
    for power in [50.0, 100.0, 150.0, 200.0, 250.0] {
        let set = pumps(&[(1365.0, 120.0), (1430.0, power)]);
        let gain = on_off_gain(&propagate(&grid, &fiber, &set, &cfg).unwrap(), &off).unwrap();
        for (g, prev) in gain.iter().zip(&previous) {
            assert!(*g >= *prev - 1e-9);
        }
        previous = gain;
    }
}

#[test]
fn switched_off_pumps_give_zero_gain() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let cfg = SolverConfig::default();
    let off = propagate(&grid, &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    let dark = propagate(&grid, &fiber, &four_pumps().switched_off(), &cfg).unwrap();
    for g in on_off_gain(&dark, &off).unwrap() {
        assert!(g.abs() < 1e-9);
    }
    for g in on_off_gain(&off, &off).unwrap() {
        assert_eq!(g, 0.0);
    }
}

#[test]
fn profiles_from_different_grids_are_rejected() {
    let fiber = FiberSpec::smf28();
    let cfg = SolverConfig::default();
    let a = propagate(&scl_grid(), &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    let cl = build_grid(&BandPlan::cl(), 150.0, 140.0, 2.0).unwrap();
    let b = propagate(&cl, &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    assert_eq!(on_off_gain(&a, &b), Err(Error::MismatchedProfiles));
}

#[test]
fn effective_length_of_flat_and_lossy_profiles() {
    let z: Vec<f64> = (0..=800).map(|n| n as f64 * 0.1).collect();
    let flat = PowerProfile {
        z_km: z.clone(),
        signal_thz: vec![193.4],
        pump_thz: vec![],
        signal_mw: vec![vec![2.0; z.len()]],
        pump_mw: vec![],
        iterations: 1,
        residual: 0.0,
    };
    assert!((effective_integrals(&flat)[0].length_km - 80.0).abs() < 1e-12);

    let grid = ChannelGrid::new(vec![channel(1550.0)], 150.0).unwrap();
    let fiber = FiberSpec::smf28();
    let p = propagate(&grid, &fiber, &RamanPumpSet::none(), &SolverConfig::default()).unwrap();
    let a = fiber.alpha_per_km(grid.channels()[0].center_thz).unwrap();
    let want = (1.0 - (-a * 80.0).exp()) / a;
    assert!((effective_integrals(&p)[0].length_km / want - 1.0).abs() < 1e-9);
}

#[test]
fn pumped_channel_has_longer_effective_length() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let cfg = SolverConfig::default();
    let off = propagate(&grid, &fiber, &RamanPumpSet::none(), &cfg).unwrap();
    let on = propagate(&grid, &fiber, &pumps(&[(1425.0, 250.0)]), &cfg).unwrap();
    let s = grid.len() - 1;
    let eff_on = effective_integrals(&on)[s];
    assert!(eff_on.length_km > effective_integrals(&off)[s].length_km);

    let h = on.step_km();
    let ys = &on.signal_mw[s];
    let trapezoid: f64 = ys.windows(2).map(|w| 0.5 * h * (w[0] + w[1])).sum::<f64>() / ys[0];
    assert!((eff_on.length_km / trapezoid - 1.0).abs() < 1e-4);
    assert_eq!(eff_on.output_mw, *ys.last().unwrap());
}

#[test]
fn iteration_cap_reports_residual() {
    let cfg = SolverConfig {
        max_iterations: 1,
        ..SolverConfig::default()
    };
    match propagate(&scl_grid(), &FiberSpec::smf28(), &four_pumps(), &cfg) {
        Err(Error::NotConverged { iterations, residual }) => {
            assert_eq!(iterations, 1);
            assert!(residual > 1e-6);
        }
        other => panic!("expected non-convergence, got {other:?}"),
    }
}

#[test]
fn oversized_steps_are_reported_as_solver_faults() {
    let mut fiber = FiberSpec::smf28();
    let strong: Vec<(f64, f64)> = fiber.raman.table().xs().iter().zip(fiber.raman.table().ys()).map(|(x, y)| (*x, y * 400.0)).collect();
    fiber.raman = RamanProfile::from_points(&strong).unwrap();
    let cfg = SolverConfig {
        step_km: 20.0,
        ..SolverConfig::default()
    };
    let err = propagate(&scl_grid(), &fiber, &four_pumps(), &cfg).unwrap_err();
    assert!(err.is_solver_failure(), "{err:?}");
}

#[test]
fn triangular_signal_profile_stays_close_for_on_off_gain() {
    let grid = scl_grid();
    let fiber = FiberSpec::smf28();
    let full = SolverConfig::default();
    let fast = SolverConfig {
        fast_signal_isrs: true,
        ..SolverConfig::default()
    };
    let gain = |cfg: &SolverConfig| {
        let off = propagate(&grid, &fiber, &RamanPumpSet::none(), cfg).unwrap();
        on_off_gain(&propagate(&grid, &fiber, &four_pumps(), cfg).unwrap(), &off).unwrap()
    };
    let (a, b) = (gain(&full), gain(&fast));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 0.25);
    }
}
