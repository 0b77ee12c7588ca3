//! End-to-end evaluation of one link scenario: span propagation, noise and
//! throughput after `n_span` identical spans, and the electrical power ledger.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::ledger::{
    allocate_dra_power, band_efficiency, lumped_electrical_power, lumped_optical_output,
    raman_electrical_power, DraAllocation, EfficiencyPoint, LumpedOperatingPoint, PowerLedger,
    RamanDraw,
};
use crate::link::{BandLabel, ChannelGrid, FiberSpec};
use crate::measurement::EfficiencyCurve;
use crate::pso::decode_pumps;
use crate::quality::{dra_ase_power, lumped_ase_power, nli_powers, AmplifierSpec, QualityReport};
use crate::raman::{effective_integrals, on_off_gain, propagate, PowerProfile, RamanPumpSet, SolverConfig};
use crate::units::db_to_linear;

/// Lumped amplifier of one band: noise figure plus measured efficiency.
#[derive(Debug, Clone, PartialEq)]
pub struct LumpedAmplifier {
    pub noise_figure_db: f64,
    pub efficiency: EfficiencyCurve,
}

impl LumpedAmplifier {
    pub fn band(&self) -> BandLabel {
        self.efficiency.band()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkModel {
    pub fiber: FiberSpec,
    pub grid: ChannelGrid,
    pub amplifiers: Vec<LumpedAmplifier>,
    pub raman_draw: RamanDraw,
    pub solver: SolverConfig,
    pub transceiver_snr_db: f64,
    pub format_correction: bool,
    pub efficiency_point: EfficiencyPoint,
}

impl LinkModel {
    pub fn validate(&self) -> Result<()> {
        self.fiber.validate()?;
        self.solver.validate()?;
        for band in self.grid.bands() {
            if self.amplifier(band).is_none() {
                return Err(Error::InvalidParameter {
                    name: "amplifiers",
                    reason: alloc::format!("no amplifier for band {band}"),
                });
            }
        }
        if !self.transceiver_snr_db.is_finite() {
            return Err(Error::param("link.transceiver_snr_db", "must be finite"));
        }
        Ok(())
    }

    pub fn with_solver(self, solver: SolverConfig) -> Self {
        Self { solver, ..self }
    }

    pub fn amplifier(&self, band: BandLabel) -> Option<&LumpedAmplifier> {
        self.amplifiers.iter().find(|a| a.band() == band)
    }

    pub fn transceiver_snr(&self) -> f64 {
        db_to_linear(self.transceiver_snr_db)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkScenario {
    pub n_span: u32,
    pub p_mm_w: f64,
    pub pumps: RamanPumpSet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Warning {
    /// Requested lumped output above the amplifier's saturation power.
    SaturationClamped { band: BandLabel, requested_mw: f64, saturation_mw: f64 },
    /// Distributed gain exceeded the span loss; the lumped gain was held at 1.
    GainBelowUnity { channel: usize, gain: f64 },
    /// No band showed positive on-off gain; Raman power was split evenly.
    UniformDraAllocation,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SaturationClamped {
                band,
                requested_mw,
                saturation_mw,
            } => write!(
                f,
                "{band}-band lumped output {requested_mw:.2} mW exceeds saturation {saturation_mw:.2} mW; clamped"
            ),
            Self::GainBelowUnity { channel, gain } => {
                write!(f, "channel {channel} needs lumped gain {gain:.4} < 1; held at 1")
            }
            Self::UniformDraAllocation => {
                f.write_str("no band has positive on-off gain; Raman power split evenly")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkEvaluation {
    pub profile: PowerProfile,
    pub on_off_gain_db: Vec<f64>,
    /// Link-total noise per channel after all spans, mW.
    pub ase_mw: Vec<f64>,
    pub nli_mw: Vec<f64>,
    pub quality: QualityReport,
    pub lumped: Vec<(BandLabel, LumpedOperatingPoint)>,
    pub raman_w: f64,
    pub dra: DraAllocation,
    pub ledger: PowerLedger,
    pub warnings: Vec<Warning>,
}

impl LinkEvaluation {
    pub fn warning_text(&self) -> Vec<String> {
        self.warnings.iter().map(|w| alloc::format!("{w}")).collect()
    }
}

struct SpanNoise {
    ase_mw: Vec<f64>,
    nli_mw: Vec<f64>,
    warnings: Vec<Warning>,
}

/// A link model with its unpumped reference span already solved.
#[derive(Debug, Clone)]
pub struct PreparedLink {
    model: LinkModel,
    baseline: PowerProfile,
}

impl PreparedLink {
    pub fn new(model: LinkModel) -> Result<Self> {
        model.validate()?;
        let baseline = propagate(&model.grid, &model.fiber, &RamanPumpSet::none(), &model.solver)?;
        Ok(Self { model, baseline })
    }

    pub fn model(&self) -> &LinkModel {
        &self.model
    }

    pub fn baseline(&self) -> &PowerProfile {
        &self.baseline
    }

    pub fn propagate(&self, pumps: &RamanPumpSet) -> Result<PowerProfile> {
        if pumps.is_empty() {
            return Ok(self.baseline.clone());
        }
        propagate(&self.model.grid, &self.model.fiber, pumps, &self.model.solver)
    }

    fn span_noise(&self, profile: &PowerProfile) -> Result<SpanNoise> {
        let m = &self.model;
        let out = profile.signal_output_mw();
        let pumped = profile.has_pump_power();
        let mut warnings = Vec::new();
        let mut ase_mw = Vec::with_capacity(m.grid.len());
        for (i, ch) in m.grid.channels().iter().enumerate() {
            let amp = m.amplifier(ch.band).ok_or(Error::param("amplifiers", "missing band"))?;
            let mut gain = ch.launch_power_mw / out[i];
            if gain < 1.0 {
                warnings.push(Warning::GainBelowUnity { channel: i, gain });
                gain = 1.0;
            }
            let spec = AmplifierSpec::new(ch.band, amp.noise_figure_db, gain, amp.efficiency.saturation_dbm())?;
            let mut ase = lumped_ase_power(&spec, ch.center_thz, ch.symbol_rate_gbd);
            if pumped {
                ase += gain * dra_ase_power(profile, &m.fiber, i, ch.symbol_rate_gbd)?;
            }
            ase_mw.push(ase);
        }
        let nli_mw = nli_powers(&m.grid, &m.fiber, &effective_integrals(profile), m.format_correction)?;
        Ok(SpanNoise {
            ase_mw,
            nli_mw,
            warnings,
        })
    }

    fn quality(&self, noise: &SpanNoise, n_span: u32) -> Result<(Vec<f64>, Vec<f64>, QualityReport)> {
        let n = n_span as f64;
        let ase: Vec<f64> = noise.ase_mw.iter().map(|v| n * v).collect();
        let nli: Vec<f64> = noise.nli_mw.iter().map(|v| n * v).collect();
        let report = QualityReport::new(&self.model.grid, &ase, &nli, self.model.transceiver_snr())?;
        Ok((ase, nli, report))
    }

    /// Total link throughput with `pumps`, Tb/s.
    pub fn throughput(&self, pumps: &RamanPumpSet, n_span: u32) -> Result<f64> {
        if n_span == 0 {
            return Err(Error::param("link.n_span", "must be at least 1"));
        }
        let profile = self.propagate(pumps)?;
        let noise = self.span_noise(&profile)?;
        Ok(self.quality(&noise, n_span)?.2.total_tbps())
    }

    /// Swarm fitness of a `[lambda, P, ...]` candidate: total throughput, or
    /// negative infinity when the candidate cannot be evaluated.
    pub fn pump_fitness(&self, candidate: &[f64], n_span: u32) -> f64 {
        decode_pumps(candidate)
            .and_then(|pumps| self.throughput(&pumps, n_span))
            .unwrap_or(f64::NEG_INFINITY)
    }

    pub fn evaluate(&self, scenario: &LinkScenario) -> Result<LinkEvaluation> {
        let m = &self.model;
        if scenario.n_span == 0 {
            return Err(Error::param("link.n_span", "must be at least 1"));
        }
        let profile = self.propagate(&scenario.pumps)?;
        let gains = on_off_gain(&profile, &self.baseline)?;
        let noise = self.span_noise(&profile)?;
        let (ase_mw, nli_mw, quality) = self.quality(&noise, scenario.n_span)?;
        let mut warnings = noise.warnings;

        let out = profile.signal_output_mw();
        let mut lumped = Vec::new();
        let mut lumped_w = Vec::new();
        let mut gain_sums = Vec::new();
        for band in m.grid.bands() {
            let amp = m.amplifier(band).ok_or(Error::param("amplifiers", "missing band"))?;
            let curve = &amp.efficiency;
            let op = lumped_optical_output(&m.grid, band, &out, Some(curve.saturation_mw()))?;
            if op.clamped {
                warnings.push(Warning::SaturationClamped {
                    band,
                    requested_mw: op.gain * op.input_mw,
                    saturation_mw: curve.saturation_mw(),
                });
            }
            let eta = band_efficiency(curve, op.output_mw, m.efficiency_point)?;
            let indices: Vec<usize> = m.grid.indices_in(band).collect();
            let p_ch = indices.iter().map(|&i| m.grid.channels()[i].launch_power_mw).sum::<f64>() / indices.len() as f64;
            let w = lumped_electrical_power(eta, indices.len(), p_ch, op.gain.max(1.0))?;
            lumped.push((band, op));
            lumped_w.push((band, w));
            gain_sums.push((band, indices.iter().map(|&i| gains[i]).sum::<f64>()));
        }
        let raman_w = raman_electrical_power(&scenario.pumps, &m.raman_draw)?;
        let dra = allocate_dra_power(&gain_sums, raman_w)?;
        if dra.uniform {
            warnings.push(Warning::UniformDraAllocation);
        }
        let ledger = PowerLedger::new(scenario.n_span, &lumped_w, &dra.shares_w, scenario.p_mm_w, &quality.bands)?;
        Ok(LinkEvaluation {
            profile,
            on_off_gain_db: gains,
            ase_mw,
            nli_mw,
            quality,
            lumped,
            raman_w,
            dra,
            ledger,
            warnings,
        })
    }
}
