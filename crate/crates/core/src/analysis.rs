//! Derived link metrics: OSNR↔SNR conversion, QAM error rates and the OSNR a
//! format requires, source-/link-limited regime transition points, Shannon
//! capacities under different format-assignment policies, and the sweep
//! tabulations the CLI scenarios emit.

use crate::comb::{CombSource, Ocnr};
use crate::error::{Error, Result};
use crate::link::{
    comb_amp_plan, comb_gain_for_launch, osnr_closed_form, EqualizationScheme, LinkConfig,
    PlanEntry,
};
use crate::units::{db_from_linear, linear_from_db, watt_from_dbm};

/// Span length assumed when converting span counts to distance.
pub const SPAN_LENGTH_KM: f64 = 75.0;

/// Link length in km for a span count.
pub fn distance_km(span_count: u32) -> f64 {
    f64::from(span_count) * SPAN_LENGTH_KM
}

/// Converts a reference-bandwidth OSNR into the per-symbol SNR of a signal
/// occupying `b_sig`: `SNR = (2·B_ref / (p·B_sig)) · OSNR`.
pub fn snr_from_osnr(osnr: f64, b_sig: f64, b_ref: f64, polarizations: u32) -> f64 {
    assert!(osnr >= 0.0, "OSNR must be non-negative, got {osnr}");
    assert!(b_sig > 0.0 && b_ref > 0.0, "bandwidths must be positive");
    assert!(matches!(polarizations, 1 | 2), "polarizations must be 1 or 2, got {polarizations}");
    2.0 * b_ref / (f64::from(polarizations) * b_sig) * osnr
}

/// Inverse of [`snr_from_osnr`].
pub fn osnr_from_snr(snr: f64, b_sig: f64, b_ref: f64, polarizations: u32) -> f64 {
    assert!(snr >= 0.0, "SNR must be non-negative, got {snr}");
    assert!(b_sig > 0.0 && b_ref > 0.0, "bandwidths must be positive");
    assert!(matches!(polarizations, 1 | 2), "polarizations must be 1 or 2, got {polarizations}");
    f64::from(polarizations) * b_sig / (2.0 * b_ref) * snr
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Gray-coded square-QAM bit error rate over an AWGN channel:
/// `BER = (4/log2 M)·(1 − 1/√M)·Q(√(3·SNR/(M−1)))`.
pub fn ber_qam(snr: f64, qam_order: u32) -> f64 {
    assert!(
        matches!(qam_order, 4 | 16 | 64 | 256),
        "unsupported QAM order {qam_order}; square orders 4/16/64/256 only"
    );
    assert!(snr >= 0.0, "SNR must be non-negative, got {snr}");
    let m = f64::from(qam_order);
    let coefficient = 4.0 * (1.0 - 1.0 / m.sqrt()) / m.log2();
    coefficient * q_function((3.0 * snr / (m - 1.0)).sqrt())
}

/// A square-QAM transmission format with its FEC assumptions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModulationFormat {
    /// Constellation size; square orders 4, 16, 64, 256.
    pub qam_order: u32,
    /// Symbol rate in Bd; also the occupied signal bandwidth.
    pub symbol_rate: f64,
    /// FEC overhead as a fraction of the net rate (0.11 = 11 %).
    pub fec_overhead: f64,
    /// Highest pre-FEC BER the code corrects.
    pub ber_threshold: f64,
    pub polarizations: u32,
}

impl ModulationFormat {
    /// Built-in formats by CLI name: `16qam-56gbd` and `64qam-56gbd`
    /// (56 GBd, dual polarization, 11 % FEC overhead, BER threshold 1.2e-2).
    pub fn preset(name: &str) -> Option<Self> {
        let qam_order = match name {
            "16qam-56gbd" => 16,
            "64qam-56gbd" => 64,
            _ => return None,
        };
        Some(ModulationFormat {
            qam_order,
            symbol_rate: 56e9,
            fec_overhead: 0.11,
            ber_threshold: 1.2e-2,
            polarizations: 2,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !matches!(self.qam_order, 4 | 16 | 64 | 256) {
            return Err(Error::invalid(format!(
                "unsupported QAM order {}; square orders 4/16/64/256 only",
                self.qam_order
            )));
        }
        if !(self.symbol_rate.is_finite() && self.symbol_rate > 0.0) {
            return Err(Error::invalid(format!("symbol rate must be positive, got {}", self.symbol_rate)));
        }
        if !(self.fec_overhead.is_finite() && self.fec_overhead >= 0.0) {
            return Err(Error::invalid(format!("FEC overhead must be non-negative, got {}", self.fec_overhead)));
        }
        if !(self.ber_threshold > 0.0 && self.ber_threshold < 0.5) {
            return Err(Error::invalid(format!("BER threshold must lie in (0, 0.5), got {}", self.ber_threshold)));
        }
        if !matches!(self.polarizations, 1 | 2) {
            return Err(Error::invalid(format!("polarizations must be 1 or 2, got {}", self.polarizations)));
        }
        Ok(())
    }

    /// Net data rate after FEC: `symbol_rate·log2(order)·polarizations/(1+overhead)`.
    pub fn net_rate(&self) -> f64 {
        self.symbol_rate * f64::from(self.qam_order).log2() * f64::from(self.polarizations)
            / (1.0 + self.fec_overhead)
    }
}

/// Bisection for a root of the increasing function `f` on `[lo, hi]`,
/// to within `tol` on the abscissa.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    if !(f_lo <= 0.0 && f_hi >= 0.0) {
        return Err(Error::Solver(format!(
            "no sign change on [{lo}, {hi}]: f(lo)={f_lo:e}, f(hi)={f_hi:e}"
        )));
    }
    for _ in 0..200 {
        if hi - lo < tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Minimum per-symbol SNR (linear) at which the format's BER threshold is met,
/// found by bisection in dB to 1e-4 dB.
pub fn required_snr(format: &ModulationFormat) -> Result<f64> {
    format.validate()?;
    let snr_db = bisect(-20.0, 60.0, 1e-4, |snr_db| {
        format.ber_threshold - ber_qam(linear_from_db(snr_db), format.qam_order)
    })?;
    Ok(linear_from_db(snr_db))
}

/// Minimum reference-bandwidth OSNR (linear) at which the format's BER
/// threshold is met.
pub fn required_osnr(format: &ModulationFormat, b_ref: f64) -> Result<f64> {
    Ok(osnr_from_snr(required_snr(format)?, format.symbol_rate, b_ref, format.polarizations))
}

/// A 1-dB regime transition: the high-input OSNR asymptote and the input value
/// (line power in W, or linear OCNR) at which the OSNR sits 1 dB below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionPoint {
    /// High-input OSNR asymptote, linear.
    pub limit_osnr: f64,
    /// Input value at which OSNR = limit − 1 dB.
    pub threshold: f64,
}

/// OSNR of a standalone carrier of power `p_line`, with the comb-amp gain
/// sized so the channel launches exactly at the configured target.
pub fn osnr_for_line_power(config: &LinkConfig, p_line: f64, ocnr: Ocnr) -> f64 {
    let entry = PlanEntry { comb_gain: comb_gain_for_launch(config, p_line), mod_attenuation: 1.0 };
    osnr_closed_form(p_line, ocnr, config, entry)
}

fn check_monotone(curve: impl Fn(f64) -> f64, lo: f64, hi: f64, what: &str) -> Result<()> {
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=24 {
        let x = lo + (hi - lo) * f64::from(i) / 24.0;
        let y = curve(x);
        if y < prev * (1.0 - 1e-9) - 1e-12 {
            return Err(Error::Solver(format!("OSNR vs {what} is not monotone near {x}")));
        }
        prev = y;
    }
    Ok(())
}

/// Line power at which the OSNR (noiseless source, launch-sized comb gain)
/// drops 1 dB below its high-power limit, solved to 0.001 dB.
///
/// Above `launch / (g_mod · G_post)` the required comb gain falls to or below
/// one, its ASE clamp engages, and the OSNR is exactly the limit; the
/// threshold is bisected on the monotone rise toward that plateau.
pub fn transition_line_power(config: &LinkConfig, span_count: u32) -> Result<TransitionPoint> {
    let config = config.with_span_count(span_count);
    let curve_db = |p_dbm: f64| {
        db_from_linear(osnr_for_line_power(&config, watt_from_dbm(p_dbm), Ocnr::INFINITE))
    };
    let p_plateau_dbm = crate::units::dbm_from_watt(
        config.launch_power / (config.mod_transmission * config.post_amp.gain),
    );
    let limit_osnr = osnr_for_line_power(&config, watt_from_dbm(p_plateau_dbm), Ocnr::INFINITE);
    let target_db = db_from_linear(limit_osnr) - 1.0;
    let lo = p_plateau_dbm - 140.0;
    check_monotone(curve_db, lo, p_plateau_dbm, "line power")?;
    let threshold_dbm = bisect(lo, p_plateau_dbm, 1e-3, |p| curve_db(p) - target_db)?;
    Ok(TransitionPoint { limit_osnr, threshold: watt_from_dbm(threshold_dbm) })
}

/// Source OCNR at which the OSNR at fixed line power drops 1 dB below the
/// noiseless-source limit, solved to 0.001 dB. Threshold is a linear ratio.
pub fn transition_ocnr(config: &LinkConfig, span_count: u32, p_line: f64) -> Result<TransitionPoint> {
    assert!(p_line > 0.0, "line power must be positive, got {p_line} W");
    let config = config.with_span_count(span_count);
    let limit_osnr = osnr_for_line_power(&config, p_line, Ocnr::INFINITE);
    let target_db = db_from_linear(limit_osnr) - 1.0;
    let curve_db = |ocnr_db: f64| {
        db_from_linear(osnr_for_line_power(&config, p_line, Ocnr::from_db(ocnr_db)))
    };
    let (lo, hi) = (-30.0, 100.0);
    check_monotone(curve_db, lo, hi, "OCNR")?;
    let threshold_db = bisect(lo, hi, 1e-3, |o| curve_db(o) - target_db)?;
    Ok(TransitionPoint { limit_osnr, threshold: linear_from_db(threshold_db) })
}

/// How per-channel rates are assigned when totaling capacity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CapacityMode {
    /// Each channel runs at its own Shannon rate.
    PerChannelOptimal,
    /// Every channel runs at the rate the worst channel supports.
    MinSnrUniform,
}

impl CapacityMode {
    pub const ALL: [CapacityMode; 2] = [CapacityMode::PerChannelOptimal, CapacityMode::MinSnrUniform];

    /// Stable label used in CSV output and CLI flags.
    pub fn label(self) -> &'static str {
        match self {
            CapacityMode::PerChannelOptimal => "optimal",
            CapacityMode::MinSnrUniform => "min-snr",
        }
    }

    /// Inverse of [`label`](Self::label).
    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.label() == label)
    }
}

impl std::fmt::Display for CapacityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Aggregate throughput: per-channel rates in bit/s and their total.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    pub mode: CapacityMode,
    pub per_channel: Vec<f64>,
    pub total: f64,
}

/// Shannon capacities for channels of the given SNRs on a `spacing`-wide grid:
/// per channel `spacing·log2(1 + SNR)·pol_factor`, with the worst channel's
/// SNR substituted everywhere in `MinSnrUniform` mode.
pub fn capacity_from_snrs(
    snrs: &[f64],
    spacing: f64,
    mode: CapacityMode,
    pol_factor: f64,
) -> CapacityResult {
    assert!(!snrs.is_empty(), "capacity needs at least one channel");
    assert!(spacing > 0.0, "line spacing must be positive, got {spacing} Hz");
    let rate = |snr: f64| spacing * (1.0 + snr).log2() * pol_factor;
    let per_channel: Vec<f64> = match mode {
        CapacityMode::PerChannelOptimal => snrs.iter().copied().map(rate).collect(),
        CapacityMode::MinSnrUniform => {
            let min = snrs.iter().copied().fold(f64::INFINITY, f64::min);
            vec![rate(min); snrs.len()]
        }
    };
    let total = per_channel.iter().sum();
    CapacityResult { mode, per_channel, total }
}

/// Received OSNR of every comb line under a scheme (linear, comb order).
pub fn per_line_osnr(comb: &CombSource, config: &LinkConfig, scheme: EqualizationScheme) -> Vec<f64> {
    let plan = comb_amp_plan(comb, config, scheme);
    comb.lines()
        .iter()
        .zip(plan)
        .map(|(line, entry)| osnr_closed_form(line.power, line.ocnr, config, entry))
        .collect()
}

/// Aggregate comb throughput. Per-channel SNRs come from the received OSNRs
/// with the signal bandwidth set to the line spacing (channels fill the grid)
/// and dual-polarization occupancy; `config.capacity_pol_factor` scales the
/// resulting rates.
pub fn total_capacity(
    comb: &CombSource,
    config: &LinkConfig,
    scheme: EqualizationScheme,
    mode: CapacityMode,
) -> Result<CapacityResult> {
    if comb.spacing() <= 0.0 {
        return Err(Error::invalid(
            "comb line spacing is unknown (single-line source); capacity needs the grid spacing",
        ));
    }
    let snrs: Vec<f64> = per_line_osnr(comb, config, scheme)
        .into_iter()
        .map(|osnr| snr_from_osnr(osnr, comb.spacing(), config.b_ref, 2))
        .collect();
    Ok(capacity_from_snrs(&snrs, comb.spacing(), mode, config.capacity_pol_factor))
}

/// One cell of an OSNR-vs-line-power sweep (noiseless source).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSweepPoint {
    pub span_count: u32,
    pub p_line_dbm: f64,
    pub osnr_db: f64,
}

/// OSNR over a line-power grid for each span count, noiseless source.
pub fn sweep_line_power(
    config: &LinkConfig,
    span_counts: &[u32],
    p_dbm_grid: &[f64],
) -> Vec<PowerSweepPoint> {
    assert!(!span_counts.is_empty() && !p_dbm_grid.is_empty(), "sweep grids must be non-empty");
    span_counts
        .iter()
        .flat_map(|&m| {
            let config = config.with_span_count(m);
            p_dbm_grid
                .iter()
                .map(move |&p_dbm| PowerSweepPoint {
                    span_count: m,
                    p_line_dbm: p_dbm,
                    osnr_db: db_from_linear(osnr_for_line_power(
                        &config,
                        watt_from_dbm(p_dbm),
                        Ocnr::INFINITE,
                    )),
                })
        })
        .collect()
}

/// One cell of an OSNR-vs-OCNR sweep; the line power is pinned per span count
/// to that span count's power-transition threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OcnrSweepPoint {
    pub span_count: u32,
    pub ocnr_db: f64,
    /// Line power the sweep was evaluated at, dBm.
    pub p_line_dbm: f64,
    pub osnr_db: f64,
}

/// OSNR over an OCNR grid for each span count, at that span count's
/// power-transition line power.
pub fn sweep_ocnr(
    config: &LinkConfig,
    span_counts: &[u32],
    ocnr_db_grid: &[f64],
) -> Result<Vec<OcnrSweepPoint>> {
    assert!(!span_counts.is_empty() && !ocnr_db_grid.is_empty(), "sweep grids must be non-empty");
    let mut out = Vec::with_capacity(span_counts.len() * ocnr_db_grid.len());
    for &m in span_counts {
        let per_m = config.with_span_count(m);
        let p_line = transition_line_power(config, m)?.threshold;
        for &ocnr_db in ocnr_db_grid {
            out.push(OcnrSweepPoint {
                span_count: m,
                ocnr_db,
                p_line_dbm: crate::units::dbm_from_watt(p_line),
                osnr_db: db_from_linear(osnr_for_line_power(&per_m, p_line, Ocnr::from_db(ocnr_db))),
            });
        }
    }
    Ok(out)
}

/// One comb line's OSNR at one distance under one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombOsnrPoint {
    pub scheme: EqualizationScheme,
    pub span_count: u32,
    pub distance_km: f64,
    pub line_index: i32,
    pub frequency: f64,
    pub osnr_db: f64,
}

/// Per-line OSNR of a comb at each span count under one scheme.
pub fn osnr_vs_distance(
    comb: &CombSource,
    config: &LinkConfig,
    scheme: EqualizationScheme,
    span_counts: &[u32],
) -> Vec<CombOsnrPoint> {
    assert!(!span_counts.is_empty(), "sweep grids must be non-empty");
    span_counts
        .iter()
        .flat_map(|&m| {
            let per_m = config.with_span_count(m);
            let osnrs = per_line_osnr(comb, &per_m, scheme);
            comb.lines()
                .iter()
                .zip(osnrs)
                .map(|(line, osnr)| CombOsnrPoint {
                    scheme,
                    span_count: m,
                    distance_km: distance_km(m),
                    line_index: line.index,
                    frequency: line.frequency,
                    osnr_db: db_from_linear(osnr),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// One aggregate-capacity value at one distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub span_count: u32,
    pub distance_km: f64,
    pub scheme: EqualizationScheme,
    pub mode: CapacityMode,
    pub total: f64,
}

/// Total comb capacity at each span count for every scheme/mode combination.
pub fn capacity_vs_distance(
    comb: &CombSource,
    config: &LinkConfig,
    schemes: &[EqualizationScheme],
    modes: &[CapacityMode],
    span_counts: &[u32],
) -> Result<Vec<CapacityPoint>> {
    assert!(
        !span_counts.is_empty() && !schemes.is_empty() && !modes.is_empty(),
        "sweep grids must be non-empty"
    );
    let mut out = Vec::with_capacity(span_counts.len() * schemes.len() * modes.len());
    for &m in span_counts {
        let per_m = config.with_span_count(m);
        for &scheme in schemes {
            for &mode in modes {
                out.push(CapacityPoint {
                    span_count: m,
                    distance_km: distance_km(m),
                    scheme,
                    mode,
                    total: total_capacity(comb, &per_m, scheme, mode)?.total,
                });
            }
        }
    }
    Ok(out)
}
