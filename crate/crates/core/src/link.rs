//! Channel plan, band partition and fiber parameters.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::interp::PiecewiseLinear;
use crate::units::{db_per_km_to_linear, dbm_to_mw, thz_to_wavelength, wavelength_to_thz};

/// Tolerance used when deciding whether a lattice frequency sits on a band edge.
const EDGE_EPS_THZ: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BandLabel {
    S,
    C,
    L,
}

impl BandLabel {
    pub const ALL: [BandLabel; 3] = [BandLabel::S, BandLabel::C, BandLabel::L];

    pub fn as_str(self) -> &'static str {
        match self {
            BandLabel::S => "S",
            BandLabel::C => "C",
            BandLabel::L => "L",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "S" | "s" => Some(BandLabel::S),
            "C" | "c" => Some(BandLabel::C),
            "L" | "l" => Some(BandLabel::L),
            _ => None,
        }
    }
}

impl fmt::Display for BandLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub label: BandLabel,
    /// (short, long) wavelength edges in nm.
    pub wavelength_nm: (f64, f64),
    /// Usable bandwidth measured from the band's low-frequency edge. `None`
    /// means the whole band range is usable.
    pub occupied_ghz: Option<f64>,
}

impl Band {
    pub fn new(label: BandLabel, short_nm: f64, long_nm: f64) -> Self {
        Self {
            label,
            wavelength_nm: (short_nm, long_nm),
            occupied_ghz: None,
        }
    }

    pub fn with_occupied_ghz(mut self, ghz: f64) -> Self {
        self.occupied_ghz = Some(ghz);
        self
    }

    pub fn low_thz(&self) -> f64 {
        wavelength_to_thz(self.wavelength_nm.1)
    }

    pub fn high_thz(&self) -> f64 {
        wavelength_to_thz(self.wavelength_nm.0)
    }

    /// Highest frequency a channel center may take in this band.
    pub fn usable_high_thz(&self) -> f64 {
        match self.occupied_ghz {
            Some(ghz) => self.high_thz().min(self.low_thz() + ghz * 1e-3),
            None => self.high_thz(),
        }
    }

    fn holds(&self, thz: f64) -> bool {
        thz >= self.low_thz() - EDGE_EPS_THZ && thz <= self.usable_high_thz() + EDGE_EPS_THZ
    }
}

/// S-band usable width. The thulium amplifier window starts at the C/S
/// boundary and spans 54 channels on the 150 GHz grid, i.e. up to ~1470 nm.
pub const S_BAND_OCCUPIED_GHZ: f64 = 8100.0;

/// Bands ordered from long to short wavelength (increasing frequency).
#[derive(Debug, Clone, PartialEq)]
pub struct BandPlan {
    bands: Vec<Band>,
}

impl BandPlan {
    pub fn new(mut bands: Vec<Band>) -> Result<Self> {
        if bands.is_empty() {
            return Err(Error::EmptyPlan);
        }
        for b in &bands {
            let (short, long) = b.wavelength_nm;
            if !(short.is_finite() && long.is_finite() && short > 0.0 && short < long) {
                return Err(Error::InvalidPlan(format!(
                    "band {} has an empty wavelength range ({short}, {long})",
                    b.label
                )));
            }
            if let Some(ghz) = b.occupied_ghz {
                if !(ghz > 0.0) {
                    return Err(Error::InvalidPlan(format!(
                        "band {} occupied width must be positive",
                        b.label
                    )));
                }
            }
        }
        bands.sort_by(|a, b| b.wavelength_nm.1.total_cmp(&a.wavelength_nm.1));
        for pair in bands.windows(2) {
            if pair[0].label == pair[1].label {
                return Err(Error::InvalidPlan(format!("band {} listed twice", pair[0].label)));
            }
            // pair[0] is the longer-wavelength band
            if pair[1].wavelength_nm.1 > pair[0].wavelength_nm.0 {
                return Err(Error::InvalidPlan(format!(
                    "bands {} and {} overlap",
                    pair[0].label, pair[1].label
                )));
            }
        }
        Ok(Self { bands })
    }

    /// C+L, 1530-1620 nm.
    pub fn cl() -> Self {
        Self::new(alloc::vec![
            Band::new(BandLabel::C, 1530.0, 1565.0),
            Band::new(BandLabel::L, 1565.0, 1620.0),
        ])
        .expect("static plan")
    }

    /// S+C+L, 1460-1620 nm.
    pub fn scl() -> Self {
        Self::new(alloc::vec![
            Band::new(BandLabel::S, 1460.0, 1530.0).with_occupied_ghz(S_BAND_OCCUPIED_GHZ),
            Band::new(BandLabel::C, 1530.0, 1565.0),
            Band::new(BandLabel::L, 1565.0, 1620.0),
        ])
        .expect("static plan")
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn band(&self, label: BandLabel) -> Option<&Band> {
        self.bands.iter().find(|b| b.label == label)
    }

    fn band_at(&self, thz: f64) -> Option<BandLabel> {
        self.bands.iter().find(|b| b.holds(thz)).map(|b| b.label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Channel {
    pub center_thz: f64,
    pub symbol_rate_gbd: f64,
    pub launch_power_mw: f64,
    pub band: BandLabel,
}

impl Channel {
    pub fn wavelength_nm(&self) -> f64 {
        thz_to_wavelength(self.center_thz)
    }
}

/// A WDM channel plan on a uniform frequency lattice, ordered by frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelGrid {
    channels: Vec<Channel>,
    spacing_ghz: f64,
}

impl ChannelGrid {
    pub fn new(channels: Vec<Channel>, spacing_ghz: f64) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::param("grid", "no channels"));
        }
        if !(spacing_ghz > 0.0) {
            return Err(Error::param("grid.spacing_ghz", "must be positive"));
        }
        let step = spacing_ghz * 1e-3;
        for (i, ch) in channels.iter().enumerate() {
            if !(ch.launch_power_mw > 0.0) {
                return Err(Error::InvalidTable {
                    row: i,
                    reason: "launch power must be positive",
                });
            }
            if !(ch.symbol_rate_gbd > 0.0) || ch.symbol_rate_gbd >= spacing_ghz {
                return Err(Error::ChannelOverlap {
                    spacing_ghz,
                    symbol_rate_gbd: ch.symbol_rate_gbd,
                });
            }
            if i > 0 {
                let gap = ch.center_thz - channels[i - 1].center_thz;
                if (gap - step).abs() > 1e-6 {
                    return Err(Error::InvalidTable {
                        row: i,
                        reason: "channels not uniformly spaced",
                    });
                }
            }
        }
        Ok(Self {
            channels,
            spacing_ghz,
        })
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn spacing_ghz(&self) -> f64 {
        self.spacing_ghz
    }

    pub fn frequencies_thz(&self) -> Vec<f64> {
        self.channels.iter().map(|c| c.center_thz).collect()
    }

    pub fn launch_powers_mw(&self) -> Vec<f64> {
        self.channels.iter().map(|c| c.launch_power_mw).collect()
    }

    /// Band labels present, from lowest to highest frequency.
    pub fn bands(&self) -> Vec<BandLabel> {
        let mut out: Vec<BandLabel> = Vec::new();
        for ch in &self.channels {
            if out.last() != Some(&ch.band) && !out.contains(&ch.band) {
                out.push(ch.band);
            }
        }
        out
    }

    pub fn indices_in(&self, band: BandLabel) -> impl Iterator<Item = usize> + '_ {
        self.channels
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.band == band)
            .map(|(i, _)| i)
    }

    pub fn count_in(&self, band: BandLabel) -> usize {
        self.indices_in(band).count()
    }

    /// Same channels with every launch power multiplied by `factor`.
    pub fn scaled_launch(&self, factor: f64) -> Result<Self> {
        let channels = self
            .channels
            .iter()
            .map(|c| Channel {
                launch_power_mw: c.launch_power_mw * factor,
                ..*c
            })
            .collect();
        Self::new(channels, self.spacing_ghz)
    }
}

/// Fills the plan with channels on a uniform lattice anchored at the plan's
/// low-frequency edge. A lattice point is kept when its center lies inside a
/// band's usable range, edges inclusive.
pub fn build_grid(
    plan: &BandPlan,
    spacing_ghz: f64,
    symbol_rate_gbd: f64,
    launch_power_dbm: f64,
) -> Result<ChannelGrid> {
    if !(spacing_ghz > symbol_rate_gbd) || !(symbol_rate_gbd > 0.0) {
        return Err(Error::ChannelOverlap {
            spacing_ghz,
            symbol_rate_gbd,
        });
    }
    if !launch_power_dbm.is_finite() {
        return Err(Error::param("launch_power_dbm", "must be finite"));
    }
    let launch_power_mw = dbm_to_mw(launch_power_dbm);
    let step = spacing_ghz * 1e-3;
    let start = plan
        .bands()
        .iter()
        .map(Band::low_thz)
        .fold(f64::INFINITY, f64::min);
    let stop = plan
        .bands()
        .iter()
        .map(Band::usable_high_thz)
        .fold(f64::NEG_INFINITY, f64::max);

    let mut channels = Vec::new();
    let mut hole_at = None;
    let mut k = 0u32;
    loop {
        let f = start + f64::from(k) * step;
        if f > stop + EDGE_EPS_THZ {
            break;
        }
        match plan.band_at(f) {
            Some(band) => {
                if let Some(gap) = hole_at {
                    return Err(Error::InvalidPlan(format!(
                        "plan leaves a gap in the channel lattice at {gap:.4} THz"
                    )));
                }
                channels.push(Channel {
                    center_thz: f,
                    symbol_rate_gbd,
                    launch_power_mw,
                    band,
                });
            }
            None => {
                if hole_at.is_none() {
                    hole_at = Some(f);
                }
            }
        }
        k += 1;
    }
    ChannelGrid::new(channels, spacing_ghz)
}

/// Wavelength-dependent fiber loss, piecewise linear in wavelength (dB/km).
#[derive(Debug, Clone, PartialEq)]
pub struct AttenuationCurve {
    table: PiecewiseLinear,
}

/// Standard single-mode fiber loss table (low water peak), 1350-1650 nm.
/// Pinned to 0.200 dB/km at 1550 nm with a flat minimum over 1550-1560 nm.
pub const SMF_ATTENUATION_DB_KM: [(f64, f64); 31] = [
    (1350.0, 0.330),
    (1360.0, 0.320),
    (1370.0, 0.312),
    (1380.0, 0.305),
    (1390.0, 0.296),
    (1400.0, 0.285),
    (1410.0, 0.274),
    (1420.0, 0.263),
    (1430.0, 0.253),
    (1440.0, 0.244),
    (1450.0, 0.236),
    (1460.0, 0.229),
    (1470.0, 0.223),
    (1480.0, 0.218),
    (1490.0, 0.214),
    (1500.0, 0.210),
    (1510.0, 0.207),
    (1520.0, 0.204),
    (1530.0, 0.202),
    (1540.0, 0.201),
    (1550.0, 0.200),
    (1560.0, 0.200),
    (1570.0, 0.201),
    (1580.0, 0.202),
    (1590.0, 0.203),
    (1600.0, 0.205),
    (1610.0, 0.207),
    (1620.0, 0.209),
    (1630.0, 0.212),
    (1640.0, 0.216),
    (1650.0, 0.220),
];

/// Center of the flat minimum of [`SMF_ATTENUATION_DB_KM`].
pub const SMF_MIN_LOSS_WAVELENGTH_NM: f64 = 1555.0;

impl AttenuationCurve {
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let table = PiecewiseLinear::from_points(points)?;
        for (row, &db) in table.ys().iter().enumerate() {
            if !(db > 0.0) {
                return Err(Error::InvalidTable {
                    row,
                    reason: "attenuation must be positive",
                });
            }
        }
        Ok(Self { table })
    }

    pub fn smf() -> Self {
        Self::from_points(&SMF_ATTENUATION_DB_KM).expect("static table")
    }

    pub fn table(&self) -> &PiecewiseLinear {
        &self.table
    }

    pub fn db_per_km(&self, wavelength_nm: f64) -> Result<f64> {
        self.table.eval(wavelength_nm, "wavelength_nm")
    }
}

/// Raman gain coefficient versus pump-signal frequency shift, 1/(W km).
#[derive(Debug, Clone, PartialEq)]
pub struct RamanProfile {
    table: PiecewiseLinear,
    peak: (f64, f64),
}

/// Silica Raman gain spectrum for an SMF-like effective area, 41 knots at
/// 0.6 THz from 0 to 24 THz, single peak of 0.42 1/(W km) at 13.2 THz.
pub const SILICA_RAMAN_GAIN: [f64; 41] = [
    0.0, 0.01147, 0.02304, 0.03479, 0.04683, 0.05924, 0.07214, 0.08559, 0.09971, 0.11459, 0.13032,
    0.147, 0.16472, 0.18357, 0.20366, 0.22507, 0.2479, 0.27224, 0.2982, 0.32585, 0.35531, 0.38666,
    0.42, 0.36688, 0.24908, 0.13582, 0.06562, 0.03458, 0.02387, 0.02027, 0.01849, 0.01711,
    0.01587, 0.01472, 0.01366, 0.01267, 0.01176, 0.01091, 0.01012, 0.00939, 0.00871,
];
pub const SILICA_RAMAN_STEP_THZ: f64 = 0.6;

impl RamanProfile {
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let table = PiecewiseLinear::from_points(points)?;
        if table.xs()[0] != 0.0 || table.ys()[0] != 0.0 {
            return Err(Error::InvalidTable {
                row: 0,
                reason: "Raman profile must start at (0, 0)",
            });
        }
        for (row, &g) in table.ys().iter().enumerate() {
            if g < 0.0 {
                return Err(Error::InvalidTable {
                    row,
                    reason: "Raman gain must be non-negative",
                });
            }
        }
        let peak = table.max_point();
        Ok(Self { table, peak })
    }

    pub fn silica() -> Self {
        let points: Vec<(f64, f64)> = SILICA_RAMAN_GAIN
            .iter()
            .enumerate()
            .map(|(i, &g)| (i as f64 * SILICA_RAMAN_STEP_THZ, g))
            .collect();
        Self::from_points(&points).expect("static table")
    }

    /// A profile with no Raman interaction at all.
    pub fn zero() -> Self {
        Self::from_points(&[(0.0, 0.0), (30.0, 0.0)]).expect("static table")
    }

    pub fn table(&self) -> &PiecewiseLinear {
        &self.table
    }

    /// (shift THz, gain) of the table maximum.
    pub fn peak(&self) -> (f64, f64) {
        self.peak
    }

    pub fn cutoff_thz(&self) -> f64 {
        self.table.domain().1
    }

    /// g_R at a positive shift; zero for non-positive shifts and beyond the table.
    pub fn gain(&self, shift_thz: f64) -> f64 {
        if shift_thz <= 0.0 || shift_thz > self.cutoff_thz() {
            0.0
        } else {
            self.table.eval_clamped(shift_thz)
        }
    }

    /// Triangular approximation: linear rise to the peak, zero beyond it.
    pub fn triangular(&self, shift_thz: f64) -> f64 {
        let (peak_shift, peak_gain) = self.peak;
        if shift_thz <= 0.0 || shift_thz > peak_shift || peak_shift <= 0.0 {
            0.0
        } else {
            peak_gain * shift_thz / peak_shift
        }
    }
}

/// Supported wavelength window for lookups (pumps through L band), nm.
pub const SUPPORTED_WAVELENGTH_NM: (f64, f64) = (1350.0, 1650.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FiberSpec {
    pub length_km: f64,
    pub attenuation: AttenuationCurve,
    /// Chromatic dispersion at `reference_wavelength_nm`, ps/(nm km).
    pub dispersion_ps_nm_km: f64,
    /// Dispersion slope, ps/(nm^2 km).
    pub dispersion_slope_ps_nm2_km: f64,
    pub reference_wavelength_nm: f64,
    /// gamma, 1/(W km).
    pub nonlinear_coefficient: f64,
    pub raman: RamanProfile,
    pub temperature_k: f64,
}

impl FiberSpec {
    /// 80 km SMF-28-like span.
    pub fn smf28() -> Self {
        Self {
            length_km: 80.0,
            attenuation: AttenuationCurve::smf(),
            dispersion_ps_nm_km: 16.5,
            dispersion_slope_ps_nm2_km: 0.06,
            reference_wavelength_nm: 1550.0,
            nonlinear_coefficient: 1.13,
            raman: RamanProfile::silica(),
            temperature_k: 298.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.length_km > 0.0) {
            return Err(Error::param("fiber.length_km", "must be positive"));
        }
        if !(self.nonlinear_coefficient >= 0.0) {
            return Err(Error::param("fiber.nonlinear_coefficient", "must be non-negative"));
        }
        if !(self.temperature_k >= 0.0) {
            return Err(Error::param("fiber.temperature_k", "must be non-negative"));
        }
        if !self.dispersion_ps_nm_km.is_finite() || !self.dispersion_slope_ps_nm2_km.is_finite() {
            return Err(Error::param("fiber.dispersion", "must be finite"));
        }
        Ok(())
    }

    pub fn attenuation_at(&self, wavelength_nm: f64) -> Result<f64> {
        let (min, max) = SUPPORTED_WAVELENGTH_NM;
        if !(wavelength_nm >= min && wavelength_nm <= max) {
            return Err(Error::OutOfRange {
                quantity: "wavelength_nm",
                value: wavelength_nm,
                min,
                max,
            });
        }
        self.attenuation.db_per_km(wavelength_nm)
    }

    /// Linear power attenuation coefficient, 1/km, at a frequency.
    pub fn alpha_per_km(&self, thz: f64) -> Result<f64> {
        Ok(db_per_km_to_linear(self.attenuation_at(thz_to_wavelength(thz))?))
    }

    fn check_frequency(thz: f64) -> Result<()> {
        let lo = wavelength_to_thz(SUPPORTED_WAVELENGTH_NM.1);
        let hi = wavelength_to_thz(SUPPORTED_WAVELENGTH_NM.0);
        if thz >= lo && thz <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                quantity: "frequency_thz",
                value: thz,
                min: lo,
                max: hi,
            })
        }
    }

    /// Coupling coefficient seen by the wave at `signal_thz` from the wave at
    /// `pump_thz`: `g_R(df)` when the pump is higher in frequency, and
    /// `-(f_signal / f_pump) g_R(-df)` when it is lower, in which case the
    /// wave at `signal_thz` is the one being depleted.
    pub fn raman_gain(&self, pump_thz: f64, signal_thz: f64) -> Result<f64> {
        Self::check_frequency(pump_thz)?;
        Self::check_frequency(signal_thz)?;
        Ok(self.raman_coupling(pump_thz, signal_thz, false))
    }

    pub(crate) fn raman_coupling(&self, from_thz: f64, to_thz: f64, triangular: bool) -> f64 {
        let shift = from_thz - to_thz;
        let g = |df: f64| {
            if triangular {
                self.raman.triangular(df)
            } else {
                self.raman.gain(df)
            }
        };
        if shift > 0.0 {
            g(shift)
        } else if shift < 0.0 {
            -(to_thz / from_thz) * g(-shift)
        } else {
            0.0
        }
    }

    pub fn dispersion_at(&self, wavelength_nm: f64) -> f64 {
        self.dispersion_ps_nm_km
            + self.dispersion_slope_ps_nm2_km * (wavelength_nm - self.reference_wavelength_nm)
    }

    /// Group-velocity dispersion beta_2 in ps^2/km.
    pub fn beta2_ps2_per_km(&self, wavelength_nm: f64) -> f64 {
        // c in nm/ps
        let c = 2.997_924_58e5;
        -self.dispersion_at(wavelength_nm) * wavelength_nm * wavelength_nm
            / (2.0 * core::f64::consts::PI * c)
    }
}
