//! Measured amplifier wall-plug efficiency and Raman pump electrical draw.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::interp::PiecewiseLinear;
use crate::link::BandLabel;
use crate::units::dbm_to_mw;

/// Wall-plug efficiency of a lumped amplifier versus its optical output.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyCurve {
    band: BandLabel,
    curve: PiecewiseLinear,
    saturation_dbm: f64,
}

impl EfficiencyCurve {
    /// `points` are (optical output mW, efficiency as a fraction).
    pub fn new(band: BandLabel, points: &[(f64, f64)], saturation_dbm: f64) -> Result<Self> {
        check_rows(points)?;
        for (row, &(_, eta)) in points.iter().enumerate() {
            if !(eta > 0.0 && eta < 0.5) {
                return Err(Error::InvalidTable {
                    row,
                    reason: "efficiency must lie in (0, 0.5)",
                });
            }
        }
        let curve = PiecewiseLinear::from_points(points)?;
        let sat_mw = dbm_to_mw(saturation_dbm);
        if !curve.contains(sat_mw) {
            let (min, max) = curve.domain();
            return Err(Error::OutOfRange {
                quantity: "saturation_output_mw",
                value: sat_mw,
                min,
                max,
            });
        }
        Ok(Self {
            band,
            curve,
            saturation_dbm,
        })
    }

    pub fn band(&self) -> BandLabel {
        self.band
    }

    pub fn saturation_dbm(&self) -> f64 {
        self.saturation_dbm
    }

    pub fn saturation_mw(&self) -> f64 {
        dbm_to_mw(self.saturation_dbm)
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.curve
            .xs()
            .iter()
            .copied()
            .zip(self.curve.ys().iter().copied())
            .collect()
    }

    pub fn output_range_mw(&self) -> (f64, f64) {
        self.curve.domain()
    }

    pub fn efficiency_at(&self, output_mw: f64) -> Result<f64> {
        self.curve.eval(output_mw, "optical_output_mw")
    }

    pub fn efficiency_at_saturation(&self) -> f64 {
        self.curve.eval_clamped(self.saturation_mw())
    }
}

/// Wall-plug electrical draw of a Raman pump module versus optical output.
#[derive(Debug, Clone, PartialEq)]
pub struct PumpDrawCurve {
    curve: PiecewiseLinear,
}

impl PumpDrawCurve {
    /// `points` are (pump output mW, electrical draw W).
    pub fn new(points: &[(f64, f64)]) -> Result<Self> {
        check_rows(points)?;
        for (row, &(out_mw, draw_w)) in points.iter().enumerate() {
            if row > 0 && draw_w <= points[row - 1].1 {
                return Err(Error::InvalidTable {
                    row,
                    reason: "electrical draw not strictly increasing",
                });
            }
            if draw_w <= out_mw * 1e-3 {
                return Err(Error::InvalidTable {
                    row,
                    reason: "electrical draw must exceed optical output",
                });
            }
        }
        Ok(Self {
            curve: PiecewiseLinear::from_points(points)?,
        })
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        self.curve
            .xs()
            .iter()
            .copied()
            .zip(self.curve.ys().iter().copied())
            .collect()
    }

    pub fn output_range_mw(&self) -> (f64, f64) {
        self.curve.domain()
    }

    pub fn pump_draw_at(&self, output_mw: f64) -> Result<f64> {
        self.curve.eval(output_mw, "pump_output_mw")
    }
}

fn check_rows(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            found: points.len(),
            required: 2,
        });
    }
    for (row, &(x, y)) in points.iter().enumerate() {
        if !(x.is_finite() && y.is_finite()) || x < 0.0 || y < 0.0 {
            return Err(Error::InvalidTable {
                row,
                reason: "values must be finite and non-negative",
            });
        }
        if row > 0 && x <= points[row - 1].0 {
            return Err(Error::InvalidTable {
                row,
                reason: "output column not strictly increasing",
            });
        }
    }
    Ok(())
}
