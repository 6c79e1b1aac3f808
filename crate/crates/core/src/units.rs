//! Decibel/dBm conversions and the two physical constants the noise model needs.

/// Planck constant in J·s (exact SI value).
pub const PLANCK_CONSTANT: f64 = 6.626_070_15e-34;

/// Speed of light in vacuum in m/s (exact SI value).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Converts a dB value to a linear power ratio.
pub fn linear_from_db(value_db: f64) -> f64 {
    10f64.powf(value_db / 10.0)
}

/// Converts a linear power ratio to dB.
///
/// Panics if `ratio` is not strictly positive (undefined in dB).
pub fn db_from_linear(ratio: f64) -> f64 {
    assert!(ratio > 0.0, "dB undefined for non-positive ratio {ratio}");
    10.0 * ratio.log10()
}

/// Converts a power in dBm to watts.
pub fn watt_from_dbm(power_dbm: f64) -> f64 {
    1e-3 * linear_from_db(power_dbm)
}

/// Converts a power in watts to dBm.
///
/// Panics if `power_watt` is not strictly positive.
pub fn dbm_from_watt(power_watt: f64) -> f64 {
    assert!(power_watt > 0.0, "dBm undefined for non-positive power {power_watt} W");
    db_from_linear(power_watt / 1e-3)
}

/// Photon energy h·c/λ in joules for a vacuum wavelength in meters.
///
/// Panics if `wavelength_m` is not strictly positive.
pub fn photon_energy(wavelength_m: f64) -> f64 {
    assert!(wavelength_m > 0.0, "wavelength must be positive, got {wavelength_m} m");
    PLANCK_CONSTANT * SPEED_OF_LIGHT / wavelength_m
}
