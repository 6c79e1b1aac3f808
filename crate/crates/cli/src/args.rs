//! Flag-value parsers for grid and list arguments.
//!
//! Grids accept either a comma list (`-40,-30,-20`) or an inclusive range
//! `start:stop:step`; span grids may omit the step (`1:200` counts by one).
//! Parse failures surface as clap usage errors (exit code 2).

use comblink_core::{CapacityMode, EqualizationScheme, ModulationFormat};

/// Newtype wrappers so clap treats one flag value as one whole grid/list.
#[derive(Debug, Clone)]
pub struct FloatGrid(pub Vec<f64>);

impl FloatGrid {
    pub fn parse(text: &str) -> Result<Self, String> {
        parse_float_grid(text).map(FloatGrid)
    }
}

#[derive(Debug, Clone)]
pub struct SpanGrid(pub Vec<u32>);

impl SpanGrid {
    pub fn parse(text: &str) -> Result<Self, String> {
        parse_span_grid(text).map(SpanGrid)
    }
}

#[derive(Debug, Clone)]
pub struct SchemeList(pub Vec<EqualizationScheme>);

impl SchemeList {
    pub fn parse(text: &str) -> Result<Self, String> {
        parse_scheme_list(text).map(SchemeList)
    }
}

#[derive(Debug, Clone)]
pub struct ModeList(pub Vec<CapacityMode>);

impl ModeList {
    pub fn parse(text: &str) -> Result<Self, String> {
        parse_mode_list(text).map(ModeList)
    }
}

/// Inclusive float grid: `start:stop:step` or a comma list.
pub fn parse_float_grid(text: &str) -> Result<Vec<f64>, String> {
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("range must be start:stop:step, got `{text}`"));
        }
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid number `{p}` in `{text}`")))
            .collect::<Result<Vec<f64>, String>>()?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if !step.is_finite() || step <= 0.0 {
            return Err(format!("step must be positive, got `{step}`"));
        }
        if stop < start {
            return Err(format!("stop {stop} is below start {start}"));
        }
        // half-a-step slack so `0:1:0.1` lands on 1.0 despite rounding
        let count = ((stop - start) / step + 0.5).floor() as usize + 1;
        let mut grid = Vec::with_capacity(count);
        for i in 0..count {
            let v = start + step * i as f64;
            if v > stop + step * 1e-9 {
                break;
            }
            grid.push(v);
        }
        Ok(grid)
    } else {
        let grid = text
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("invalid number `{p}` in `{text}`")))
            .collect::<Result<Vec<f64>, String>>()?;
        if grid.is_empty() {
            return Err("grid must be non-empty".into());
        }
        Ok(grid)
    }
}

/// Inclusive span-count grid: `start:stop[:step]` or a comma list; all ≥ 1.
pub fn parse_span_grid(text: &str) -> Result<Vec<u32>, String> {
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if !(parts.len() == 2 || parts.len() == 3) {
            return Err(format!("range must be start:stop[:step], got `{text}`"));
        }
        let nums = parts
            .iter()
            .map(|p| p.trim().parse::<u32>().map_err(|_| format!("invalid span count `{p}` in `{text}`")))
            .collect::<Result<Vec<u32>, String>>()?;
        let (start, stop) = (nums[0], nums[1]);
        let step = if nums.len() == 3 { nums[2] } else { 1 };
        if step == 0 {
            return Err("step must be at least 1".into());
        }
        if stop < start {
            return Err(format!("stop {stop} is below start {start}"));
        }
        (start..=stop).step_by(step as usize).collect()
    } else {
        text.split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|_| format!("invalid span count `{p}` in `{text}`")))
            .collect::<Result<Vec<u32>, String>>()?
    };
    if values.is_empty() {
        return Err("span grid must be non-empty".into());
    }
    if values.contains(&0) {
        return Err("span counts must be at least 1".into());
    }
    Ok(values)
}

/// Comma list of equalization schemes by label.
pub fn parse_scheme_list(text: &str) -> Result<Vec<EqualizationScheme>, String> {
    text.split(',')
        .map(|p| {
            EqualizationScheme::from_label(p.trim())
                .ok_or_else(|| format!("unknown scheme `{p}`; expected no-eq, gain-eq or power-eq"))
        })
        .collect()
}

/// Comma list of capacity modes by label.
pub fn parse_mode_list(text: &str) -> Result<Vec<CapacityMode>, String> {
    text.split(',')
        .map(|p| {
            CapacityMode::from_label(p.trim())
                .ok_or_else(|| format!("unknown capacity mode `{p}`; expected optimal or min-snr"))
        })
        .collect()
}

/// A built-in modulation format together with the name it was requested by.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFormat {
    pub name: String,
    pub format: ModulationFormat,
}

pub fn parse_format(text: &str) -> Result<NamedFormat, String> {
    ModulationFormat::preset(text)
        .map(|format| NamedFormat { name: text.to_string(), format })
        .ok_or_else(|| format!("unknown format `{text}`; expected 16qam-56gbd or 64qam-56gbd"))
}
