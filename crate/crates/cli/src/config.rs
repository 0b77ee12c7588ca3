//! TOML scenario configuration. File paths inside a config are resolved
//! against the directory holding the config file.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use hybrid_link_core::ledger::RamanDraw;
use hybrid_link_core::link::build_grid;
use hybrid_link_core::quality::{default_noise_figure_db, TRANSCEIVER_SNR_DB};
use hybrid_link_core::{
    BandLabel, BandPlan, EfficiencyPoint, FiberSpec, LinkModel, LumpedAmplifier, RamanPump, RamanPumpSet,
    SolverConfig, SwarmConfig,
};
use serde::Deserialize;

use crate::error::{CliError, Result};
use crate::tsv;

pub const DEFAULT_P_MM_W: f64 = 8.0;
/// Largest pump count accepted for optimization.
pub const MAX_PUMPS: usize = 8;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: RawGrid,
    #[serde(default)]
    fiber: RawFiber,
    #[serde(default)]
    link: RawLink,
    amplifiers: BTreeMap<String, RawAmplifier>,
    raman: RawRaman,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    scenario: RawScenario,
    #[serde(default)]
    optimizer: RawOptimizer,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    bands: Vec<String>,
    spacing_ghz: f64,
    symbol_rate_gbd: f64,
    launch_power_dbm: f64,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiber {
    length_km: Option<f64>,
    dispersion_ps_nm_km: Option<f64>,
    dispersion_slope_ps_nm2_km: Option<f64>,
    reference_wavelength_nm: Option<f64>,
    nonlinear_coefficient: Option<f64>,
    temperature_k: Option<f64>,
    attenuation_table: Option<PathBuf>,
    raman_table: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    transceiver_snr_db: Option<f64>,
    format_correction: Option<bool>,
    efficiency_point: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAmplifier {
    efficiency_table: PathBuf,
    saturation_dbm: f64,
    noise_figure_db: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRaman {
    draw_table: Option<PathBuf>,
    constant_efficiency: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    step_km: Option<f64>,
    damping: Option<f64>,
    tolerance: Option<f64>,
    max_iterations: Option<usize>,
    fast_isrs: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    n_span: Option<u32>,
    p_mm_w: Option<f64>,
    pumps: Option<Vec<[f64; 2]>>,
    pump_count: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptimizer {
    particles: Option<usize>,
    iterations: Option<usize>,
    inertia: Option<f64>,
    cognitive: Option<f64>,
    social: Option<f64>,
    seed: Option<u64>,
    max_velocity: Option<f64>,
    stall_iterations: Option<usize>,
    fidelity: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    band_sets: Vec<String>,
    spans: Vec<u32>,
    pump_counts: Vec<usize>,
    p_mm_w: Vec<f64>,
}

/// Bands carried by one link, ordered S, C, L.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandSet(Vec<BandLabel>);

impl BandSet {
    pub fn new(mut bands: Vec<BandLabel>) -> Option<Self> {
        bands.sort_by_key(|b| BandLabel::ALL.iter().position(|x| x == b));
        bands.dedup();
        (!bands.is_empty()).then_some(Self(bands))
    }

    /// Parses a compact name such as `SCL` or `CL`.
    pub fn parse(name: &str) -> Option<Self> {
        let bands = name
            .chars()
            .map(|c| BandLabel::parse(&c.to_string()))
            .collect::<Option<Vec<_>>>()?;
        if bands.len() != name.chars().count() {
            return None;
        }
        let set = Self::new(bands)?;
        (set.0.len() == name.chars().count()).then_some(set)
    }

    pub fn bands(&self) -> &[BandLabel] {
        &self.0
    }

    pub fn plan(&self) -> Result<BandPlan> {
        let full = BandPlan::scl();
        let bands = full
            .bands()
            .iter()
            .filter(|b| self.0.contains(&b.label))
            .cloned()
            .collect();
        Ok(BandPlan::new(bands)?)
    }
}

impl fmt::Display for BandSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|b| f.write_str(b.as_str()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PumpChoice {
    Fixed(RamanPumpSet),
    /// Optimize this many pumps; zero means lumped-only.
    Optimized(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub n_span: u32,
    pub p_mm_w: f64,
    pub pumps: PumpChoice,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub band_sets: Vec<BandSet>,
    pub spans: Vec<u32>,
    pub pump_counts: Vec<usize>,
    pub p_mm_w: Vec<f64>,
}

impl SweepSpec {
    pub fn standard() -> Self {
        Self {
            band_sets: vec![BandSet::parse("CL").unwrap(), BandSet::parse("SCL").unwrap()],
            spans: vec![1, 10, 100],
            pump_counts: vec![0, 1, 2, 4],
            p_mm_w: vec![0.0, 2.0, 8.0],
        }
    }

    pub fn scenario_count(&self) -> usize {
        self.band_sets.len() * self.spans.len() * self.pump_counts.len() * self.p_mm_w.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fidelity {
    /// Coarse Raman settings inside the swarm, full settings for reported results.
    Search,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub source: PathBuf,
    pub bands: BandSet,
    pub spacing_ghz: f64,
    pub symbol_rate_gbd: f64,
    pub launch_power_dbm: f64,
    pub fiber: FiberSpec,
    pub amplifiers: Vec<LumpedAmplifier>,
    pub raman_draw: RamanDraw,
    pub solver: SolverConfig,
    pub transceiver_snr_db: f64,
    pub format_correction: bool,
    pub efficiency_point: EfficiencyPoint,
    pub scenario: ScenarioSpec,
    /// Swarm settings; bounds are filled in per pump count.
    pub swarm: SwarmConfig,
    pub fidelity: Fidelity,
    pub sweep: SweepSpec,
}

fn positive(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(key, format!("must be positive, got {v}")))
    }
}

fn band_label(key: String, s: &str) -> Result<BandLabel> {
    BandLabel::parse(s).ok_or_else(|| CliError::config(key, format!("unknown band label {s:?} (expected S, C or L)")))
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text, path)
    }

    /// Parses `text` as if it were read from `path`.
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|source| CliError::TomlSyntax {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
        resolve(raw, path, &base)
    }

    pub fn amplifier(&self, band: BandLabel) -> Option<&LumpedAmplifier> {
        self.amplifiers.iter().find(|a| a.band() == band)
    }

    pub fn link_model(&self, bands: &BandSet) -> Result<LinkModel> {
        let grid = build_grid(&bands.plan()?, self.spacing_ghz, self.symbol_rate_gbd, self.launch_power_dbm)?;
        let amplifiers = bands
            .bands()
            .iter()
            .map(|&b| {
                self.amplifier(b)
                    .cloned()
                    .ok_or_else(|| CliError::config(format!("amplifiers.{b}"), "missing amplifier for a band in use"))
            })
            .collect::<Result<Vec<_>>>()?;
        let model = LinkModel {
            fiber: self.fiber.clone(),
            grid,
            amplifiers,
            raman_draw: self.raman_draw.clone(),
            solver: self.solver,
            transceiver_snr_db: self.transceiver_snr_db,
            format_correction: self.format_correction,
            efficiency_point: self.efficiency_point,
        };
        model.validate()?;
        Ok(model)
    }

    /// Solver used inside the swarm.
    pub fn search_solver(&self) -> SolverConfig {
        match self.fidelity {
            Fidelity::Full => self.solver,
            Fidelity::Search => SolverConfig {
                pump_depletion: self.solver.pump_depletion,
                pump_pump: self.solver.pump_pump,
                ..SolverConfig::search()
            },
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.swarm.seed = seed;
        self
    }

    pub fn without_format_correction(mut self) -> Self {
        self.format_correction = false;
        self
    }

    pub fn with_fast_raman(mut self) -> Self {
        self.solver.fast_signal_isrs = true;
        self
    }
}

fn resolve(raw: RawConfig, source: &Path, base: &Path) -> Result<Config> {
    let at = |p: &Path| base.join(p);

    let bands = raw
        .grid
        .bands
        .iter()
        .enumerate()
        .map(|(i, s)| band_label(format!("grid.bands[{i}]"), s))
        .collect::<Result<Vec<_>>>()?;
    let bands = BandSet::new(bands).ok_or_else(|| CliError::config("grid.bands", "no bands listed"))?;
    let spacing_ghz = positive("grid.spacing_ghz", raw.grid.spacing_ghz)?;
    let symbol_rate_gbd = positive("grid.symbol_rate_gbd", raw.grid.symbol_rate_gbd)?;
    if spacing_ghz <= symbol_rate_gbd {
        return Err(CliError::config("grid.spacing_ghz", "must exceed grid.symbol_rate_gbd"));
    }
    if !raw.grid.launch_power_dbm.is_finite() {
        return Err(CliError::config("grid.launch_power_dbm", "must be finite"));
    }

    let mut fiber = FiberSpec::smf28();
    let f = raw.fiber;
    if let Some(v) = f.length_km {
        fiber.length_km = positive("fiber.length_km", v)?;
    }
    if let Some(v) = f.dispersion_ps_nm_km {
        fiber.dispersion_ps_nm_km = v;
    }
    if let Some(v) = f.dispersion_slope_ps_nm2_km {
        fiber.dispersion_slope_ps_nm2_km = v;
    }
    if let Some(v) = f.reference_wavelength_nm {
        fiber.reference_wavelength_nm = positive("fiber.reference_wavelength_nm", v)?;
    }
    if let Some(v) = f.nonlinear_coefficient {
        fiber.nonlinear_coefficient = v;
    }
    if let Some(v) = f.temperature_k {
        fiber.temperature_k = v;
    }
    if let Some(p) = f.attenuation_table {
        fiber.attenuation = tsv::load_attenuation(&at(&p))?;
    }
    if let Some(p) = f.raman_table {
        fiber.raman = tsv::load_raman_profile(&at(&p))?;
    }
    fiber.validate()?;

    let mut amplifiers = Vec::new();
    for (key, amp) in raw.amplifiers {
        let band = band_label(format!("amplifiers.{key}"), &key)?;
        let efficiency = tsv::load_efficiency_curve(&at(&amp.efficiency_table), band, amp.saturation_dbm)?;
        amplifiers.push(LumpedAmplifier {
            noise_figure_db: amp.noise_figure_db.unwrap_or_else(|| default_noise_figure_db(band)),
            efficiency,
        });
    }

    let raman_draw = match (raw.raman.draw_table, raw.raman.constant_efficiency) {
        (Some(p), None) => RamanDraw::Measured(tsv::load_pump_draw(&at(&p))?),
        (None, Some(eta)) => RamanDraw::constant(eta)?,
        _ => {
            return Err(CliError::config(
                "raman",
                "set exactly one of draw_table or constant_efficiency",
            ))
        }
    };

    let mut solver = SolverConfig::default();
    let s = raw.solver;
    solver.step_km = s.step_km.unwrap_or(solver.step_km);
    solver.damping = s.damping.unwrap_or(solver.damping);
    solver.tolerance = s.tolerance.unwrap_or(solver.tolerance);
    solver.max_iterations = s.max_iterations.unwrap_or(solver.max_iterations);
    solver.fast_signal_isrs = s.fast_isrs.unwrap_or(solver.fast_signal_isrs);
    solver.validate()?;

    let efficiency_point = match raw.link.efficiency_point.as_deref() {
        None | Some("saturation") => EfficiencyPoint::Saturation,
        Some("band_output") => EfficiencyPoint::BandOutput,
        Some(other) => {
            return Err(CliError::config(
                "link.efficiency_point",
                format!("unknown value {other:?} (expected saturation or band_output)"),
            ))
        }
    };

    let sc = raw.scenario;
    let pumps = match (sc.pumps, sc.pump_count) {
        (Some(_), Some(_)) => {
            return Err(CliError::config("scenario.pumps", "conflicts with scenario.pump_count"))
        }
        (Some(list), None) => PumpChoice::Fixed(
            RamanPumpSet::new(list.iter().map(|&[nm, mw]| RamanPump::new(nm, mw)).collect())
                .map_err(|e| CliError::config("scenario.pumps", e.to_string()))?,
        ),
        (None, n) => {
            let n = n.unwrap_or(0);
            if n > MAX_PUMPS {
                return Err(CliError::config("scenario.pump_count", format!("at most {MAX_PUMPS}")));
            }
            PumpChoice::Optimized(n)
        }
    };
    let n_span = sc.n_span.unwrap_or(1);
    if n_span == 0 {
        return Err(CliError::config("scenario.n_span", "must be at least 1"));
    }
    let p_mm_w = sc.p_mm_w.unwrap_or(DEFAULT_P_MM_W);
    if !(p_mm_w >= 0.0 && p_mm_w.is_finite()) {
        return Err(CliError::config("scenario.p_mm_w", "must be non-negative"));
    }

    let o = raw.optimizer;
    let mut swarm = SwarmConfig::new(hybrid_link_core::pso::pump_bounds(1));
    swarm.particles = o.particles.unwrap_or(swarm.particles);
    swarm.iterations = o.iterations.unwrap_or(swarm.iterations);
    swarm.inertia = o.inertia.unwrap_or(swarm.inertia);
    swarm.cognitive = o.cognitive.unwrap_or(swarm.cognitive);
    swarm.social = o.social.unwrap_or(swarm.social);
    swarm.seed = o.seed.unwrap_or(swarm.seed);
    swarm.max_velocity = o.max_velocity.unwrap_or(swarm.max_velocity);
    swarm.stall_iterations = o.stall_iterations;
    swarm.validate()?;
    let fidelity = match o.fidelity.as_deref() {
        None | Some("search") => Fidelity::Search,
        Some("full") => Fidelity::Full,
        Some(other) => {
            return Err(CliError::config(
                "optimizer.fidelity",
                format!("unknown value {other:?} (expected search or full)"),
            ))
        }
    };

    let sweep = match raw.sweep {
        None => SweepSpec::standard(),
        Some(sw) => {
            let band_sets = sw
                .band_sets
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    BandSet::parse(s).ok_or_else(|| {
                        CliError::config(format!("sweep.band_sets[{i}]"), format!("unknown band set {s:?}"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            for (key, empty) in [
                ("sweep.band_sets", band_sets.is_empty()),
                ("sweep.spans", sw.spans.is_empty()),
                ("sweep.pump_counts", sw.pump_counts.is_empty()),
                ("sweep.p_mm_w", sw.p_mm_w.is_empty()),
            ] {
                if empty {
                    return Err(CliError::config(key, "must not be empty"));
                }
            }
            if let Some(i) = sw.spans.iter().position(|&n| n == 0) {
                return Err(CliError::config(format!("sweep.spans[{i}]"), "must be at least 1"));
            }
            if let Some(i) = sw.pump_counts.iter().position(|&n| n > MAX_PUMPS) {
                return Err(CliError::config(format!("sweep.pump_counts[{i}]"), format!("at most {MAX_PUMPS}")));
            }
            if let Some(i) = sw.p_mm_w.iter().position(|&p| !(p >= 0.0 && p.is_finite())) {
                return Err(CliError::config(format!("sweep.p_mm_w[{i}]"), "must be non-negative"));
            }
            SweepSpec {
                band_sets,
                spans: sw.spans,
                pump_counts: sw.pump_counts,
                p_mm_w: sw.p_mm_w,
            }
        }
    };

    let config = Config {
        source: source.to_path_buf(),
        bands,
        spacing_ghz,
        symbol_rate_gbd,
        launch_power_dbm: raw.grid.launch_power_dbm,
        fiber,
        amplifiers,
        raman_draw,
        solver,
        transceiver_snr_db: raw.link.transceiver_snr_db.unwrap_or(TRANSCEIVER_SNR_DB),
        format_correction: raw.link.format_correction.unwrap_or(true),
        efficiency_point,
        scenario: ScenarioSpec { n_span, p_mm_w, pumps },
        swarm,
        fidelity,
        sweep,
    };
    for set in std::iter::once(&config.bands).chain(&config.sweep.band_sets) {
        for &b in set.bands() {
            if config.amplifier(b).is_none() {
                return Err(CliError::config(format!("amplifiers.{b}"), "missing amplifier for a band in use"));
            }
        }
    }
    Ok(config)
}
