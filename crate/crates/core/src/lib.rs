//! Signal and noise budget model for comb-driven WDM links.
//!
//! A frequency comb feeds a bank of WDM channels through an amplifier chain:
//! comb amplifier, modulator, booster, a cascade of lossy spans with inline
//! amplifiers, and a receiver preamplifier. This crate models the per-channel
//! signal and ASE-noise powers through that chain, the received OSNR in
//! closed form, the equalization schemes that level a non-flat comb, the
//! source-vs-link regime transition points, QAM OSNR requirements, and
//! aggregate Shannon capacities.
//!
//! All computation is in linear SI units (W, Hz, ratios); dB/dBm appear only
//! at the I/O boundaries (CSV, JSON config, CLI).

pub mod analysis;
pub mod comb;
pub mod error;
pub mod link;
pub mod units;

pub use analysis::{
    ber_qam, capacity_from_snrs, capacity_vs_distance, distance_km, osnr_for_line_power,
    osnr_from_snr, osnr_vs_distance, per_line_osnr, required_osnr, required_snr, snr_from_osnr,
    sweep_line_power, sweep_ocnr, total_capacity, transition_line_power, transition_ocnr,
    CapacityMode, CapacityPoint, CapacityResult, CombOsnrPoint, ModulationFormat, OcnrSweepPoint,
    PowerSweepPoint, TransitionPoint, SPAN_LENGTH_KM,
};
pub use comb::{
    read_comb_csv, read_comb_from_reader, synthesize_flat_comb, synthesize_soliton_comb,
    write_comb_csv, write_comb_to_writer, CombLine, CombSource, Ocnr, SolitonCombParams,
};
pub use error::{Error, Result};
pub use link::{
    apply_amplifier, apply_attenuation, comb_amp_plan, comb_gain_for_launch, osnr_closed_form,
    osnr_of, propagate, AmplifierSpec, ChannelState, EqualizationScheme, LinkConfig, PlanEntry,
};
pub use units::{
    db_from_linear, dbm_from_watt, linear_from_db, photon_energy, watt_from_dbm, PLANCK_CONSTANT,
    SPEED_OF_LIGHT,
};
