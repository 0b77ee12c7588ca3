//! Physical constants and unit conversions.

/// Speed of light expressed so that `f [THz] = C / lambda [nm]`.
pub const SPEED_OF_LIGHT_NM_THZ: f64 = 299_792.458;
pub const PLANCK_J_S: f64 = 6.626_070_15e-34;
pub const BOLTZMANN_J_K: f64 = 1.380_649e-23;

pub fn wavelength_to_thz(nm: f64) -> f64 {
    SPEED_OF_LIGHT_NM_THZ / nm
}

pub fn thz_to_wavelength(thz: f64) -> f64 {
    SPEED_OF_LIGHT_NM_THZ / thz
}

pub fn db_to_linear(db: f64) -> f64 {
    libm::pow(10.0, db / 10.0)
}

pub fn linear_to_db(ratio: f64) -> f64 {
    10.0 * libm::log10(ratio)
}

pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

pub fn mw_to_dbm(mw: f64) -> f64 {
    linear_to_db(mw)
}

/// dB/km to the linear power attenuation coefficient in 1/km.
pub fn db_per_km_to_linear(db_km: f64) -> f64 {
    db_km * core::f64::consts::LN_10 / 10.0
}

/// Bose-Einstein phonon occupancy for a Stokes shift `shift_thz` at `temperature_k`.
pub fn phonon_occupancy(shift_thz: f64, temperature_k: f64) -> f64 {
    if temperature_k <= 0.0 {
        return 0.0;
    }
    let x = PLANCK_J_S * shift_thz * 1e12 / (BOLTZMANN_J_K * temperature_k);
    1.0 / libm::expm1(x)
}
