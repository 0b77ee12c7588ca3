//! Per-channel noise (lumped ASE, distributed Raman ASE, GN nonlinear
//! interference), SNR combination and Shannon throughput.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::link::{BandLabel, ChannelGrid, FiberSpec};
use crate::raman::{simpson, EffectiveIntegral, PowerProfile};
use crate::units::{db_to_linear, phonon_occupancy, PLANCK_J_S};

pub const TRANSCEIVER_SNR_DB: f64 = 20.0;

/// Share of the constellation excess kurtosis applied to the XPM terms.
pub const FORMAT_CORRECTION_WEIGHT: f64 = 0.5;

pub fn default_noise_figure_db(band: BandLabel) -> f64 {
    match band {
        BandLabel::S | BandLabel::L => 6.0,
        BandLabel::C => 5.0,
    }
}

/// Lumped amplifier as seen by the noise model. `NF = 2 n_sp` is assumed,
/// which is the large-gain form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierSpec {
    pub band: BandLabel,
    pub noise_figure_db: f64,
    pub gain: f64,
    pub saturation_dbm: f64,
}

impl AmplifierSpec {
    pub fn new(band: BandLabel, noise_figure_db: f64, gain: f64, saturation_dbm: f64) -> Result<Self> {
        if !noise_figure_db.is_finite() {
            return Err(Error::param("amplifier.noise_figure_db", "must be finite"));
        }
        if !(gain >= 1.0) || !gain.is_finite() {
            return Err(Error::param("amplifier.gain", "must be a finite ratio >= 1"));
        }
        if !saturation_dbm.is_finite() {
            return Err(Error::param("amplifier.saturation_dbm", "must be finite"));
        }
        Ok(Self {
            band,
            noise_figure_db,
            gain,
            saturation_dbm,
        })
    }

    pub fn with_gain(self, gain: f64) -> Result<Self> {
        Self::new(self.band, self.noise_figure_db, gain, self.saturation_dbm)
    }

    pub fn noise_figure_linear(&self) -> f64 {
        db_to_linear(self.noise_figure_db)
    }
}

/// Dual-polarization ASE in `bandwidth_ghz`, mW.
pub fn lumped_ase_power(amp: &AmplifierSpec, channel_thz: f64, bandwidth_ghz: f64) -> f64 {
    let watts = PLANCK_J_S * channel_thz * 1e12 * amp.noise_figure_linear() * (amp.gain - 1.0) * bandwidth_ghz * 1e9;
    watts * 1e3
}

/// Spontaneous Raman emission from the backward pumps collected by one
/// channel, including thermal phonon seeding, delivered at the span end, mW.
pub fn dra_ase_power(
    profile: &PowerProfile,
    fiber: &FiberSpec,
    channel: usize,
    bandwidth_ghz: f64,
) -> Result<f64> {
    let signal = profile
        .signal_mw
        .get(channel)
        .ok_or_else(|| Error::param("channel", "index outside the profile"))?;
    if !profile.has_pump_power() {
        return Ok(0.0);
    }
    let f_i = profile.signal_thz[channel];
    let end = signal[signal.len() - 1];
    let mut integrand = alloc::vec![0.0; profile.nodes()];
    for (k, pump) in profile.pump_mw.iter().enumerate() {
        let shift = profile.pump_thz[k] - f_i;
        if shift <= 0.0 {
            continue;
        }
        let g = fiber.raman.gain(shift);
        if g == 0.0 {
            continue;
        }
        let seeded = g * (1.0 + phonon_occupancy(shift, fiber.temperature_k));
        for ((acc, p), s) in integrand.iter_mut().zip(pump).zip(signal) {
            *acc += seeded * p * 1e-3 * end / s;
        }
    }
    let gain_path = simpson(&integrand, profile.step_km());
    let watts = 2.0 * PLANCK_J_S * f_i * 1e12 * bandwidth_ghz * 1e9 * gain_path;
    Ok(watts * 1e3)
}

/// Square QAM constellation of `order` points (a perfect square), unit
/// spacing, centered on the origin.
pub fn qam_constellation(order: usize) -> Result<Vec<(f64, f64)>> {
    let side = libm::sqrt(order as f64) as usize;
    if side < 2 || side * side != order {
        return Err(Error::param("qam order", "must be a square of at least 4"));
    }
    let offset = (side as f64 - 1.0) / 2.0;
    Ok((0..order)
        .map(|k| ((k % side) as f64 - offset, (k / side) as f64 - offset))
        .collect())
}

/// `E|x|^4 / E^2|x|^2 - 2` over equiprobable points; zero for a Gaussian.
pub fn excess_kurtosis(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (m2, m4) = points.iter().fold((0.0, 0.0), |(m2, m4), (i, q)| {
        let e = i * i + q * q;
        (m2 + e, m4 + e * e)
    });
    let (m2, m4) = (m2 / n, m4 / n);
    m4 / (m2 * m2) - 2.0
}

pub fn qam64_excess_kurtosis() -> f64 {
    excess_kurtosis(&qam_constellation(64).expect("64 is a square"))
}

/// Scale applied to XPM contributions.
pub fn xpm_format_scale(format_correction: bool) -> f64 {
    if format_correction {
        1.0 + FORMAT_CORRECTION_WEIGHT * qam64_excess_kurtosis()
    } else {
        1.0
    }
}

struct ChannelTerms {
    thz: f64,
    rate_thz: f64,
    launch_w: f64,
    l_eff_km: f64,
    l_asym_km: f64,
    beta2: f64,
}

fn channel_terms(grid: &ChannelGrid, fiber: &FiberSpec, integrals: &[EffectiveIntegral]) -> Result<Vec<ChannelTerms>> {
    if integrals.len() != grid.len() {
        return Err(Error::MismatchedProfiles);
    }
    grid.channels()
        .iter()
        .zip(integrals)
        .map(|(ch, eff)| {
            Ok(ChannelTerms {
                thz: ch.center_thz,
                rate_thz: ch.symbol_rate_gbd * 1e-3,
                launch_w: ch.launch_power_mw * 1e-3,
                l_eff_km: eff.length_km,
                l_asym_km: 1.0 / fiber.alpha_per_km(ch.center_thz)?,
                beta2: libm::fabs(fiber.beta2_ps2_per_km(ch.wavelength_nm())),
            })
        })
        .collect()
}

/// NLI efficiency kernel between the channel under test `i` and an
/// interferer `j`, with `beta2` taken at channel `i`. Units: THz^2.
fn gn_kernel(i: &ChannelTerms, j: &ChannelTerms, beta2: f64) -> f64 {
    let a = PI * PI * beta2 * j.l_asym_km;
    let b = i.rate_thz;
    let spacing = libm::fabs(j.thz - i.thz);
    if spacing == 0.0 {
        libm::asinh(0.5 * a * b * b) / (2.0 * PI * beta2 * j.l_asym_km)
    } else {
        let bj = j.rate_thz;
        (libm::asinh(a * bj * (spacing + 0.5 * bj)) - libm::asinh(a * bj * (spacing - 0.5 * bj)))
            / (4.0 * PI * beta2 * j.l_asym_km)
    }
}

fn nli_for(terms: &[ChannelTerms], i: usize, gamma: f64, xpm_scale: f64) -> f64 {
    let ci = &terms[i];
    let prefactor = 16.0 / 27.0 * gamma * gamma * ci.launch_w / (ci.rate_thz * ci.rate_thz);
    let mut spm = 0.0;
    let mut xpm = 0.0;
    for (j, cj) in terms.iter().enumerate() {
        let weight = cj.l_eff_km * cj.l_eff_km * cj.launch_w * cj.launch_w * gn_kernel(ci, cj, ci.beta2);
        if j == i {
            spm += weight;
        } else {
            xpm += 2.0 * weight;
        }
    }
    prefactor * (spm + xpm_scale * xpm)
}

/// Per-span NLI power of one channel, mW.
pub fn nli_power(
    grid: &ChannelGrid,
    fiber: &FiberSpec,
    integrals: &[EffectiveIntegral],
    channel: usize,
    format_correction: bool,
) -> Result<f64> {
    let terms = channel_terms(grid, fiber, integrals)?;
    if channel >= terms.len() {
        return Err(Error::param("channel", "index outside the grid"));
    }
    Ok(nli_for(&terms, channel, fiber.nonlinear_coefficient, xpm_format_scale(format_correction)) * 1e3)
}

/// Per-span NLI power of every channel, mW.
pub fn nli_powers(
    grid: &ChannelGrid,
    fiber: &FiberSpec,
    integrals: &[EffectiveIntegral],
    format_correction: bool,
) -> Result<Vec<f64>> {
    let terms = channel_terms(grid, fiber, integrals)?;
    let scale = xpm_format_scale(format_correction);
    Ok((0..terms.len())
        .map(|i| nli_for(&terms, i, fiber.nonlinear_coefficient, scale) * 1e3)
        .collect())
}

pub fn channel_snr(p_ch_mw: f64, p_ase_mw: f64, p_nli_mw: f64, snr_trx: f64) -> f64 {
    1.0 / ((p_ase_mw + p_nli_mw) / p_ch_mw + 1.0 / snr_trx)
}

/// Dual-polarization Shannon rate of one channel, Tb/s.
pub fn shannon_tbps(symbol_rate_gbd: f64, snr: f64) -> f64 {
    2.0 * symbol_rate_gbd * 1e-3 * libm::log2(1.0 + snr)
}

/// Throughput summed per band, in the grid's band order, Tb/s.
pub fn band_throughput(grid: &ChannelGrid, snrs: &[f64]) -> Result<Vec<(BandLabel, f64)>> {
    if snrs.len() != grid.len() {
        return Err(Error::param("snrs", "one value per channel required"));
    }
    Ok(grid
        .bands()
        .into_iter()
        .map(|band| {
            let total = grid
                .indices_in(band)
                .map(|i| shannon_tbps(grid.channels()[i].symbol_rate_gbd, snrs[i]))
                .sum();
            (band, total)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelQuality {
    pub center_thz: f64,
    pub band: BandLabel,
    pub snr_ase: f64,
    pub snr_nli: f64,
    pub snr_total: f64,
    pub throughput_tbps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub channels: Vec<ChannelQuality>,
    pub bands: Vec<(BandLabel, f64)>,
    pub transceiver_snr: f64,
}

impl QualityReport {
    /// Builds the report from end-of-link noise powers (already accumulated
    /// over all spans).
    pub fn new(grid: &ChannelGrid, ase_mw: &[f64], nli_mw: &[f64], transceiver_snr: f64) -> Result<Self> {
        if ase_mw.len() != grid.len() || nli_mw.len() != grid.len() {
            return Err(Error::param("noise", "one value per channel required"));
        }
        if !(transceiver_snr > 0.0) {
            return Err(Error::param("link.transceiver_snr_db", "must give a positive ratio"));
        }
        let channels: Vec<ChannelQuality> = grid
            .channels()
            .iter()
            .zip(ase_mw.iter().zip(nli_mw))
            .map(|(ch, (&ase, &nli))| {
                let p = ch.launch_power_mw;
                let snr_total = channel_snr(p, ase, nli, transceiver_snr);
                ChannelQuality {
                    center_thz: ch.center_thz,
                    band: ch.band,
                    snr_ase: p / ase,
                    snr_nli: p / nli,
                    snr_total,
                    throughput_tbps: shannon_tbps(ch.symbol_rate_gbd, snr_total),
                }
            })
            .collect();
        let snrs: Vec<f64> = channels.iter().map(|c| c.snr_total).collect();
        let bands = band_throughput(grid, &snrs)?;
        Ok(Self {
            channels,
            bands,
            transceiver_snr,
        })
    }

    pub fn band_tbps(&self, band: BandLabel) -> Option<f64> {
        self.bands.iter().find(|(b, _)| *b == band).map(|(_, t)| *t)
    }

    pub fn total_tbps(&self) -> f64 {
        self.bands.iter().map(|(_, t)| t).sum()
    }
}
