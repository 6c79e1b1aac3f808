//! Amplifier-chain propagation: per-channel signal and noise bookkeeping
//! through comb amplifier, modulator, booster, fiber spans with inline
//! amplifiers, and the receiver preamplifier.
//!
//! Everything is referred to a fixed reference bandwidth. A channel is a
//! `(signal, noise)` power pair; each stage is a pure function on that pair.
//! `osnr_closed_form` evaluates the same chain algebraically and is verified
//! against stage-by-stage propagation in the tests.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::comb::{CombLine, CombSource, Ocnr};
use crate::error::{Error, Result};
use crate::units::{linear_from_db, photon_energy, watt_from_dbm};

/// An optical amplifier: linear gain and linear noise figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplifierSpec {
    pub gain: f64,
    /// Linear noise figure, ≥ 1.
    pub noise_figure: f64,
}

/// Copolarized signal and noise power (W, in the reference bandwidth) of one
/// channel at some plane of the chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    pub signal: f64,
    pub noise: f64,
}

impl ChannelState {
    pub fn new(signal: f64, noise: f64) -> Self {
        assert!(signal > 0.0, "signal power must be positive, got {signal} W");
        assert!(noise >= 0.0, "noise power must be non-negative, got {noise} W");
        ChannelState { signal, noise }
    }

    /// State of a comb line at the source output: carrier power plus the
    /// co-propagating source noise implied by its OCNR.
    pub fn from_line(line: &CombLine) -> Self {
        ChannelState::new(line.power, line.noise_power())
    }
}

/// How a non-flat comb is leveled before transmission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EqualizationScheme {
    /// One common comb-amp gain sized for the strongest line; no leveling.
    NoEq,
    /// Per-line comb-amp gain; every channel launches at the target power.
    GainEq,
    /// Common comb-amp gain plus per-line attenuation inside the modulator;
    /// every channel launches at the weakest line's level.
    PowerEq,
}

impl EqualizationScheme {
    pub const ALL: [EqualizationScheme; 3] =
        [EqualizationScheme::NoEq, EqualizationScheme::GainEq, EqualizationScheme::PowerEq];

    /// Stable kebab-case label used in CSV output and CLI flags.
    pub fn label(self) -> &'static str {
        match self {
            EqualizationScheme::NoEq => "no-eq",
            EqualizationScheme::GainEq => "gain-eq",
            EqualizationScheme::PowerEq => "power-eq",
        }
    }

    /// Inverse of [`label`](Self::label).
    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.label() == label)
    }
}

impl std::fmt::Display for EqualizationScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Full parameter set of the link, all in linear units internally.
///
/// The default value is the reference parameter set used throughout the tests:
/// 12.5 GHz reference bandwidth, 0 dBm launch target, −25 dB modulator loss,
/// 5 dB noise figures everywhere, 15 dB booster and receiver gains, 75 km
/// spans with 15 dB loss exactly compensated by the inline amplifiers.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkConfig {
    /// Reference bandwidth for all OSNR/OCNR bookkeeping, Hz.
    pub b_ref: f64,
    /// Per-channel launch power target at the booster output, W.
    pub launch_power: f64,
    /// Modulator insertion transmission, linear ∈ (0, 1].
    pub mod_transmission: f64,
    /// Noise figure of the comb amplifier (its gain comes from the plan).
    pub comb_amp_nf: f64,
    /// Booster between modulator and the first span.
    pub post_amp: AmplifierSpec,
    /// Per-span transmission, linear ∈ (0, 1].
    pub span_loss: f64,
    /// Number of fiber spans M ≥ 1; spans 1..M−1 end in an inline amplifier.
    pub span_count: u32,
    /// Inline amplifier; its gain must invert the span loss exactly.
    pub inline_amp: AmplifierSpec,
    /// Receiver preamplifier; the OSNR is reported at its output.
    pub rx_amp: AmplifierSpec,
    /// Wavelength at which the photon energy is evaluated, m.
    pub center_wavelength: f64,
    /// Multiplier applied to aggregate capacities: 1 counts the printed
    /// per-channel rate as-is, 2 doubles it for dual polarization.
    pub capacity_pol_factor: f64,
}

impl Default for LinkConfig {
    fn default() -> Self {
        let nf = linear_from_db(5.0);
        let span_loss = linear_from_db(-15.0);
        LinkConfig {
            b_ref: 12.5e9,
            launch_power: 1e-3,
            mod_transmission: linear_from_db(-25.0),
            comb_amp_nf: nf,
            post_amp: AmplifierSpec { gain: linear_from_db(15.0), noise_figure: nf },
            span_loss,
            span_count: 1,
            inline_amp: AmplifierSpec { gain: 1.0 / span_loss, noise_figure: nf },
            rx_amp: AmplifierSpec { gain: linear_from_db(15.0), noise_figure: nf },
            center_wavelength: 1.55e-6,
            capacity_pol_factor: 1.0,
        }
    }
}

impl LinkConfig {
    /// Photon energy at the configured center wavelength, J.
    pub fn photon_energy(&self) -> f64 {
        photon_energy(self.center_wavelength)
    }

    /// Copy of the config with a different span count.
    pub fn with_span_count(&self, span_count: u32) -> Self {
        LinkConfig { span_count, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("b_ref", self.b_ref),
            ("launch_power", self.launch_power),
            ("center_wavelength", self.center_wavelength),
            ("post_amp.gain", self.post_amp.gain),
            ("inline_amp.gain", self.inline_amp.gain),
            ("rx_amp.gain", self.rx_amp.gain),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {value}")));
            }
        }
        for (name, value) in [("mod_transmission", self.mod_transmission), ("span_loss", self.span_loss)] {
            if !(value.is_finite() && value > 0.0 && value <= 1.0) {
                return Err(Error::invalid(format!("{name} must lie in (0, 1], got {value}")));
            }
        }
        let figures = [
            ("comb_amp_nf", self.comb_amp_nf),
            ("post_amp.noise_figure", self.post_amp.noise_figure),
            ("inline_amp.noise_figure", self.inline_amp.noise_figure),
            ("rx_amp.noise_figure", self.rx_amp.noise_figure),
        ];
        for (name, value) in figures {
            if !(value.is_finite() && value >= 1.0) {
                return Err(Error::invalid(format!("{name} must be a linear noise figure ≥ 1, got {value}")));
            }
        }
        if self.span_count < 1 {
            return Err(Error::invalid("span_count must be at least 1"));
        }
        if (self.inline_amp.gain * self.span_loss - 1.0).abs() > 1e-9 {
            return Err(Error::invalid(format!(
                "inline amplifier must invert the span loss: gain {} × loss {} = {}",
                self.inline_amp.gain,
                self.span_loss,
                self.inline_amp.gain * self.span_loss
            )));
        }
        if !(self.capacity_pol_factor == 1.0 || self.capacity_pol_factor == 2.0) {
            return Err(Error::invalid(format!(
                "capacity_pol_factor must be 1 (single polarization accounting) or 2, got {}",
                self.capacity_pol_factor
            )));
        }
        Ok(())
    }

    /// Parses the JSON configuration document; omitted keys keep defaults.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: LinkConfigDoc = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("config JSON: {e}")))?;
        doc.into_config()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let doc: LinkConfigDoc =
            serde_json::from_str(&text).map_err(|e| Error::Json { path: path.into(), source: e })?;
        doc.into_config()
    }

    /// Serializes the config as the same flat JSON document `from_json_str`
    /// accepts, all values converted back to dB/dBm.
    pub fn to_document_json(&self) -> String {
        let doc = LinkConfigDoc {
            b_ref_hz: Some(self.b_ref),
            launch_power_dbm: Some(crate::units::dbm_from_watt(self.launch_power)),
            mod_loss_db: Some(crate::units::db_from_linear(self.mod_transmission)),
            comb_amp_nf_db: Some(crate::units::db_from_linear(self.comb_amp_nf)),
            post_amp_gain_db: Some(crate::units::db_from_linear(self.post_amp.gain)),
            post_amp_nf_db: Some(crate::units::db_from_linear(self.post_amp.noise_figure)),
            span_loss_db: Some(crate::units::db_from_linear(self.span_loss)),
            span_count: Some(self.span_count),
            inline_nf_db: Some(crate::units::db_from_linear(self.inline_amp.noise_figure)),
            rx_gain_db: Some(crate::units::db_from_linear(self.rx_amp.gain)),
            rx_nf_db: Some(crate::units::db_from_linear(self.rx_amp.noise_figure)),
            center_wavelength_m: Some(self.center_wavelength),
            capacity_pol_factor: Some(self.capacity_pol_factor),
        };
        serde_json::to_string_pretty(&doc).expect("plain struct serializes")
    }
}

/// Flat key-value configuration document. All dB/dBm at this boundary; loss
/// keys carry the (negative) transmission in dB. Unknown keys are rejected so
/// a typo cannot silently fall back to a default.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LinkConfigDoc {
    b_ref_hz: Option<f64>,
    launch_power_dbm: Option<f64>,
    mod_loss_db: Option<f64>,
    comb_amp_nf_db: Option<f64>,
    post_amp_gain_db: Option<f64>,
    post_amp_nf_db: Option<f64>,
    span_loss_db: Option<f64>,
    span_count: Option<u32>,
    inline_nf_db: Option<f64>,
    rx_gain_db: Option<f64>,
    rx_nf_db: Option<f64>,
    center_wavelength_m: Option<f64>,
    capacity_pol_factor: Option<f64>,
}

impl LinkConfigDoc {
    fn into_config(self) -> Result<LinkConfig> {
        let base = LinkConfig::default();
        let span_loss = self.span_loss_db.map_or(base.span_loss, linear_from_db);
        let config = LinkConfig {
            b_ref: self.b_ref_hz.unwrap_or(base.b_ref),
            launch_power: self.launch_power_dbm.map_or(base.launch_power, watt_from_dbm),
            mod_transmission: self.mod_loss_db.map_or(base.mod_transmission, linear_from_db),
            comb_amp_nf: self.comb_amp_nf_db.map_or(base.comb_amp_nf, linear_from_db),
            post_amp: AmplifierSpec {
                gain: self.post_amp_gain_db.map_or(base.post_amp.gain, linear_from_db),
                noise_figure: self.post_amp_nf_db.map_or(base.post_amp.noise_figure, linear_from_db),
            },
            span_loss,
            span_count: self.span_count.unwrap_or(base.span_count),
            inline_amp: AmplifierSpec {
                gain: 1.0 / span_loss,
                noise_figure: self.inline_nf_db.map_or(base.inline_amp.noise_figure, linear_from_db),
            },
            rx_amp: AmplifierSpec {
                gain: self.rx_gain_db.map_or(base.rx_amp.gain, linear_from_db),
                noise_figure: self.rx_nf_db.map_or(base.rx_amp.noise_figure, linear_from_db),
            },
            center_wavelength: self.center_wavelength_m.unwrap_or(base.center_wavelength),
            capacity_pol_factor: self.capacity_pol_factor.unwrap_or(base.capacity_pol_factor),
        };
        config.validate()?;
        Ok(config)
    }
}

/// One line's share of the comb amplifier plan: the comb-amp gain it sees and
/// any extra attenuation applied inside the modulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanEntry {
    pub comb_gain: f64,
    /// Extra leveling attenuation ∈ (0, 1]; 1 for schemes without it.
    pub mod_attenuation: f64,
}

/// Comb-amp gain that puts a line of power `p_line` exactly at the launch
/// target after modulator and booster: `P_launch / (P_line · g_mod · G_post)`.
pub fn comb_gain_for_launch(config: &LinkConfig, p_line: f64) -> f64 {
    assert!(p_line > 0.0, "line power must be positive, got {p_line} W");
    config.launch_power / (p_line * config.mod_transmission * config.post_amp.gain)
}

/// Per-line comb-amp gains and modulator attenuations for a scheme.
///
/// - `GainEq`: per-line gain; every channel launches at the target power.
/// - `NoEq`: one gain sized for the strongest line, so that channel launches
///   at the target and all others proportionally below it.
/// - `PowerEq`: the `NoEq` gain plus per-line attenuation down to the weakest
///   line, so every channel launches at the same (reduced) power.
pub fn comb_amp_plan(
    comb: &CombSource,
    config: &LinkConfig,
    scheme: EqualizationScheme,
) -> Vec<PlanEntry> {
    let common_gain = comb_gain_for_launch(config, comb.max_power());
    let min_power = comb.min_power();
    comb.lines()
        .iter()
        .map(|line| match scheme {
            EqualizationScheme::GainEq => PlanEntry {
                comb_gain: comb_gain_for_launch(config, line.power),
                mod_attenuation: 1.0,
            },
            EqualizationScheme::NoEq => PlanEntry { comb_gain: common_gain, mod_attenuation: 1.0 },
            EqualizationScheme::PowerEq => PlanEntry {
                comb_gain: common_gain,
                mod_attenuation: min_power / line.power,
            },
        })
        .collect()
}

/// Amplifier stage: multiplies both powers by the gain and adds the ASE
/// contribution `F·hf·(G−1)·B_ref`, clamped at zero so a sub-unity gain acts
/// as a noiseless attenuator.
pub fn apply_amplifier(state: ChannelState, amp: AmplifierSpec, hf: f64, b_ref: f64) -> ChannelState {
    assert!(amp.gain > 0.0, "amplifier gain must be positive, got {}", amp.gain);
    assert!(amp.noise_figure >= 1.0, "noise figure must be ≥ 1, got {}", amp.noise_figure);
    assert!(hf > 0.0 && b_ref > 0.0, "photon energy and bandwidth must be positive");
    let ase = amp.noise_figure * hf * (amp.gain - 1.0).max(0.0) * b_ref;
    ChannelState { signal: amp.gain * state.signal, noise: amp.gain * state.noise + ase }
}

/// Lossy passive stage: multiplies both powers by `g ∈ (0, 1]`, leaving the
/// signal-to-noise ratio untouched.
pub fn apply_attenuation(state: ChannelState, g: f64) -> ChannelState {
    assert!(g > 0.0 && g <= 1.0, "attenuation must lie in (0, 1], got {g}");
    ChannelState { signal: g * state.signal, noise: g * state.noise }
}

/// Stage-by-stage propagation of one comb line to the receiver-amplifier
/// output: comb amp → modulator → booster → M spans (inline amplifier after
/// each of the first M−1) → receiver preamplifier.
pub fn propagate(line: &CombLine, config: &LinkConfig, entry: PlanEntry) -> ChannelState {
    let hf = config.photon_energy();
    let comb_amp = AmplifierSpec { gain: entry.comb_gain, noise_figure: config.comb_amp_nf };
    let mut state = ChannelState::from_line(line);
    state = apply_amplifier(state, comb_amp, hf, config.b_ref);
    state = apply_attenuation(state, config.mod_transmission * entry.mod_attenuation);
    state = apply_amplifier(state, config.post_amp, hf, config.b_ref);
    for _ in 1..config.span_count {
        state = apply_attenuation(state, config.span_loss);
        state = apply_amplifier(state, config.inline_amp, hf, config.b_ref);
    }
    state = apply_attenuation(state, config.span_loss);
    apply_amplifier(state, config.rx_amp, hf, config.b_ref)
}

/// Signal-to-noise power ratio of a state; `f64::INFINITY` for zero noise.
pub fn osnr_of(state: ChannelState) -> f64 {
    if state.noise == 0.0 {
        f64::INFINITY
    } else {
        state.signal / state.noise
    }
}

/// Closed-form OSNR of one channel at the receiver-amplifier output.
///
/// All noise terms are referred to the plane after the last span (the
/// receiver-amp term is divided by its own gain for that), where the signal
/// power is `g·G_post·g_mod·a·G_comb·P_line`:
///
/// ```text
///             signal
/// ─────────────────────────────────────────────────────────────────────
/// signal/OCNR + hf·B_ref·[ g·G_post·g_mod·a·(G_comb−1)·F_comb
///                        + g·(G_post−1)·F_post
///                        + g·(M−1)·(G_in−1)·F_in
///                        + ((G_rx−1)/G_rx)·F_rx ]
/// ```
///
/// with every `(G−1)` clamped at zero. Agrees with `propagate` + `osnr_of`
/// to better than 1e-10 relative (see tests).
pub fn osnr_closed_form(p_line: f64, ocnr: Ocnr, config: &LinkConfig, entry: PlanEntry) -> f64 {
    assert!(p_line > 0.0, "line power must be positive, got {p_line} W");
    let clamped = |amp: AmplifierSpec| (amp.gain - 1.0).max(0.0) * amp.noise_figure;
    let hf = config.photon_energy();
    let g = config.span_loss;
    let g_mod = config.mod_transmission * entry.mod_attenuation;
    let comb_amp = AmplifierSpec { gain: entry.comb_gain, noise_figure: config.comb_amp_nf };

    let signal = g * config.post_amp.gain * g_mod * entry.comb_gain * p_line;
    let link_noise = hf
        * config.b_ref
        * (g * config.post_amp.gain * g_mod * clamped(comb_amp)
            + g * clamped(config.post_amp)
            + g * f64::from(config.span_count - 1) * clamped(config.inline_amp)
            + clamped(config.rx_amp) / config.rx_amp.gain);
    let source_noise = signal / ocnr.linear();
    let noise = source_noise + link_noise;
    if noise == 0.0 {
        f64::INFINITY
    } else {
        signal / noise
    }
}
