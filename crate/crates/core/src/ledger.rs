//! Electrical power of the amplifier chain and energy per bit.
//!
//! Per span and band the lumped amplifier draws
//! `(1/eta) * N_ch * P_ch * (1 - 1/G)` plus a fixed management overhead
//! `P_mm`; the Raman pumps draw what their measured wall-plug curve says.
//! Everything scales linearly with the span count.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::link::{BandLabel, ChannelGrid};
use crate::measurement::{EfficiencyCurve, PumpDrawCurve};
use crate::raman::RamanPumpSet;

/// Output power at which the lumped efficiency is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EfficiencyPoint {
    /// The amplifier runs saturated; read the curve at its saturation power.
    Saturation,
    /// Read the curve at the band's actual optical output.
    BandOutput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LumpedOperatingPoint {
    pub gain: f64,
    pub input_mw: f64,
    pub output_mw: f64,
    /// The requested output exceeded saturation and was clamped.
    pub clamped: bool,
}

/// Gain that restores every channel of `band` to its launch power after the
/// span (and any distributed gain). `post_dra_mw` holds one end-of-span
/// power per grid channel.
pub fn lumped_optical_output(
    grid: &ChannelGrid,
    band: BandLabel,
    post_dra_mw: &[f64],
    saturation_mw: Option<f64>,
) -> Result<LumpedOperatingPoint> {
    if post_dra_mw.len() != grid.len() {
        return Err(Error::param("post_dra_mw", "one value per channel required"));
    }
    let (mut input, mut target) = (0.0, 0.0);
    for i in grid.indices_in(band) {
        input += post_dra_mw[i];
        target += grid.channels()[i].launch_power_mw;
    }
    if !(input > 0.0) {
        return Err(Error::ZeroInput("band input power"));
    }
    let (output_mw, clamped) = match saturation_mw {
        Some(sat) if target > sat => (sat, true),
        _ => (target, false),
    };
    Ok(LumpedOperatingPoint {
        gain: target / input,
        input_mw: input,
        output_mw,
        clamped,
    })
}

pub fn band_efficiency(curve: &EfficiencyCurve, output_mw: f64, point: EfficiencyPoint) -> Result<f64> {
    match point {
        EfficiencyPoint::Saturation => Ok(curve.efficiency_at_saturation()),
        EfficiencyPoint::BandOutput => curve.efficiency_at(output_mw),
    }
}

/// One band's lumped amplifier draw for one span, W.
pub fn lumped_electrical_power(efficiency: f64, n_ch: usize, p_ch_mw: f64, gain: f64) -> Result<f64> {
    if !(efficiency > 0.0 && efficiency <= 1.0) {
        return Err(Error::param("efficiency", "must lie in (0, 1]"));
    }
    if !(gain >= 1.0) {
        return Err(Error::param("gain", "must be >= 1"));
    }
    Ok(n_ch as f64 * p_ch_mw * 1e-3 * (1.0 - 1.0 / gain) / efficiency)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RamanDraw {
    /// Measured wall draw versus pump output, shared by all pump wavelengths.
    Measured(PumpDrawCurve),
    /// Constant wall-plug efficiency.
    ConstantEfficiency(f64),
}

impl RamanDraw {
    pub fn constant(efficiency: f64) -> Result<Self> {
        if !(efficiency > 0.0 && efficiency <= 1.0) {
            return Err(Error::param("raman.efficiency", "must lie in (0, 1]"));
        }
        Ok(Self::ConstantEfficiency(efficiency))
    }

    /// Wall draw of one pump, W. A pump at zero output is switched off.
    pub fn draw_w(&self, output_mw: f64) -> Result<f64> {
        if output_mw == 0.0 {
            return Ok(0.0);
        }
        match self {
            Self::ConstantEfficiency(eta) => Ok(output_mw * 1e-3 / eta),
            Self::Measured(curve) => curve.pump_draw_at(output_mw),
        }
    }
}

pub fn raman_electrical_power(pumps: &RamanPumpSet, draw: &RamanDraw) -> Result<f64> {
    pumps
        .pumps()
        .iter()
        .try_fold(0.0, |acc, p| Ok(acc + draw.draw_w(p.power_mw)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DraAllocation {
    pub shares_w: Vec<(BandLabel, f64)>,
    /// No band had positive gain, so the power was split evenly.
    pub uniform: bool,
}

/// Splits the Raman draw across bands in proportion to each band's summed
/// on-off gain in dB. Negative sums count as zero.
pub fn allocate_dra_power(gain_db_sums: &[(BandLabel, f64)], total_w: f64) -> Result<DraAllocation> {
    if gain_db_sums.is_empty() {
        return Err(Error::param("gain_db_sums", "no bands"));
    }
    let weights: Vec<f64> = gain_db_sums.iter().map(|(_, g)| g.max(0.0)).collect();
    let sum: f64 = weights.iter().sum();
    let uniform = !(sum > 0.0);
    let n = gain_db_sums.len();
    let mut shares_w = Vec::with_capacity(n);
    let mut assigned = 0.0;
    for (k, ((band, _), w)) in gain_db_sums.iter().zip(&weights).enumerate() {
        let share = if k + 1 == n {
            total_w - assigned
        } else if uniform {
            total_w / n as f64
        } else {
            total_w * w / sum
        };
        assigned += share;
        shares_w.push((*band, share));
    }
    Ok(DraAllocation {
        shares_w,
        uniform: uniform && total_w > 0.0,
    })
}

/// pJ/bit from W and Tb/s.
pub fn energy_per_bit(power_w: f64, throughput_tbps: f64) -> Result<f64> {
    if !(throughput_tbps > 0.0) {
        return Err(Error::ZeroThroughput);
    }
    Ok(power_w / throughput_tbps)
}

/// Per-span electrical power of one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPower {
    pub band: BandLabel,
    pub lumped_w: f64,
    pub dra_w: f64,
    pub mm_w: f64,
    pub throughput_tbps: f64,
}

impl BandPower {
    pub fn span_w(&self) -> f64 {
        self.lumped_w + self.dra_w + self.mm_w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerLedger {
    pub n_span: u32,
    pub bands: Vec<BandPower>,
}

impl PowerLedger {
    /// `lumped_w` and `dra_w` are per span; `p_mm_w` is charged once per
    /// lumped amplifier, one amplifier per band.
    pub fn new(
        n_span: u32,
        lumped_w: &[(BandLabel, f64)],
        dra_w: &[(BandLabel, f64)],
        p_mm_w: f64,
        throughput_tbps: &[(BandLabel, f64)],
    ) -> Result<Self> {
        if n_span == 0 {
            return Err(Error::param("link.n_span", "must be at least 1"));
        }
        if !(p_mm_w >= 0.0) {
            return Err(Error::param("link.p_mm_w", "must be non-negative"));
        }
        let lookup = |table: &[(BandLabel, f64)], band: BandLabel| {
            table.iter().find(|(b, _)| *b == band).map(|(_, v)| *v)
        };
        let bands = lumped_w
            .iter()
            .map(|&(band, lumped)| {
                let dra = lookup(dra_w, band).unwrap_or(0.0);
                let throughput = lookup(throughput_tbps, band)
                    .ok_or_else(|| Error::param("throughput", "missing band"))?;
                if lumped < 0.0 || dra < 0.0 {
                    return Err(Error::param("ledger", "negative power"));
                }
                Ok(BandPower {
                    band,
                    lumped_w: lumped,
                    dra_w: dra,
                    mm_w: p_mm_w,
                    throughput_tbps: throughput,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_span, bands })
    }

    /// Same link and operating points with a different management overhead.
    pub fn with_management_power(&self, p_mm_w: f64) -> Result<Self> {
        if !(p_mm_w >= 0.0) {
            return Err(Error::param("link.p_mm_w", "must be non-negative"));
        }
        let bands = self.bands.iter().map(|b| BandPower { mm_w: p_mm_w, ..*b }).collect();
        Ok(Self { n_span: self.n_span, bands })
    }

    pub fn band(&self, band: BandLabel) -> Option<&BandPower> {
        self.bands.iter().find(|b| b.band == band)
    }

    pub fn span_w(&self) -> f64 {
        self.bands.iter().map(BandPower::span_w).sum()
    }

    pub fn total_w(&self) -> f64 {
        self.n_span as f64 * self.span_w()
    }

    pub fn band_total_w(&self, band: BandLabel) -> Option<f64> {
        self.band(band).map(|b| self.n_span as f64 * b.span_w())
    }

    pub fn throughput_tbps(&self) -> f64 {
        self.bands.iter().map(|b| b.throughput_tbps).sum()
    }

    pub fn energy_per_bit(&self) -> Result<f64> {
        energy_per_bit(self.total_w(), self.throughput_tbps())
    }

    pub fn band_energy_per_bit(&self, band: BandLabel) -> Result<f64> {
        let b = self.band(band).ok_or_else(|| Error::param("band", "not in ledger"))?;
        energy_per_bit(self.n_span as f64 * b.span_w(), b.throughput_tbps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::link::{build_grid, BandPlan};
    use alloc::vec;

    #[test]
    fn eq1_band_term() {
        let w = lumped_electrical_power(0.05, 40, 1.5849, 39.81).unwrap();
        let hand = 20.0 * 40.0 * 1.5849e-3 * (1.0 - 1.0 / 39.81);
        assert!((w / hand - 1.0).abs() < 1e-12);
        assert!((w - 1.236_070_716).abs() < 1e-9);
        assert_eq!(lumped_electrical_power(0.05, 40, 1.5849, 1.0).unwrap(), 0.0);
        let half = lumped_electrical_power(0.025, 40, 1.5849, 39.81).unwrap();
        assert!((half / w - 2.0).abs() < 1e-12);
    }

    #[test]
    fn one_span_total() {
        let lumped = lumped_electrical_power(0.05, 40, 1.5849, 39.81).unwrap();
        let l = PowerLedger::new(1, &[(BandLabel::C, lumped)], &[], 8.0, &[(BandLabel::C, 50.0)]).unwrap();
        assert!((l.total_w() - 9.236_070_716).abs() < 1e-9);
        assert!((l.energy_per_bit().unwrap() - 0.184_721_414).abs() < 1e-9);
        let l100 = PowerLedger { n_span: 100, ..l.clone() };
        assert_eq!(l100.total_w(), 100.0 * l.total_w());
    }

    #[test]
    fn loss_compensating_gain() {
        let grid = build_grid(&BandPlan::cl(), 150.0, 140.0, 2.0).unwrap();
        let loss = libm::pow(10.0, -1.6);
        let inputs: Vec<f64> = grid.launch_powers_mw().iter().map(|p| p * loss).collect();
        let op = lumped_optical_output(&grid, BandLabel::C, &inputs, None).unwrap();
        assert!((op.gain - libm::pow(10.0, 1.6)).abs() < 1e-9);
        let boosted: Vec<f64> = inputs.iter().map(|p| p * libm::pow(10.0, 0.6)).collect();
        let op = lumped_optical_output(&grid, BandLabel::C, &boosted, None).unwrap();
        assert!((op.gain - 10.0).abs() < 1e-9);
    }

    #[test]
    fn saturation_clamps_output() {
        let grid = build_grid(&BandPlan::cl(), 150.0, 140.0, 2.0).unwrap();
        let inputs = vec![0.01; grid.len()];
        let op = lumped_optical_output(&grid, BandLabel::C, &inputs, Some(20.0)).unwrap();
        assert!(op.clamped);
        assert_eq!(op.output_mw, 20.0);
    }

    #[test]
    fn zero_input_rejected() {
        let grid = build_grid(&BandPlan::cl(), 150.0, 140.0, 2.0).unwrap();
        let inputs = vec![0.0; grid.len()];
        assert!(lumped_optical_output(&grid, BandLabel::L, &inputs, None).is_err());
    }

    #[test]
    fn allocation_proportional() {
        let a = allocate_dra_power(&[(BandLabel::S, 6.0), (BandLabel::C, 3.0), (BandLabel::L, 3.0)], 12.0).unwrap();
        assert_eq!(a.shares_w, vec![(BandLabel::S, 6.0), (BandLabel::C, 3.0), (BandLabel::L, 3.0)]);
        assert!(!a.uniform);
        let single = allocate_dra_power(&[(BandLabel::C, 2.5)], 7.0).unwrap();
        assert_eq!(single.shares_w, vec![(BandLabel::C, 7.0)]);
    }

    #[test]
    fn allocation_without_gain_is_uniform() {
        let a = allocate_dra_power(&[(BandLabel::C, 0.0), (BandLabel::L, -1.0)], 4.0).unwrap();
        assert!(a.uniform);
        assert_eq!(a.shares_w, vec![(BandLabel::C, 2.0), (BandLabel::L, 2.0)]);
    }

    #[test]
    fn zero_throughput_rejected() {
        assert_eq!(energy_per_bit(1.0, 0.0), Err(Error::ZeroThroughput));
    }

    #[test]
    fn constant_draw_fallback() {
        let d = RamanDraw::constant(0.25).unwrap();
        assert!((d.draw_w(250.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(d.draw_w(0.0).unwrap(), 0.0);
    }
}
