//! Comb sources: equidistant grids of optical carriers with per-line power and
//! carrier-to-noise ratio, plus synthesis helpers and CSV I/O.
//!
//! Two synthetic spectra are provided: a flat comb (every line identical) and a
//! soliton comb whose envelope follows sech²(Δf/ΔF), with ΔF solved so that the
//! outermost line lands exactly on a prescribed edge power. OCNR varies linearly
//! in dB with the absolute offset from the center line.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::units::{db_from_linear, dbm_from_watt, linear_from_db, watt_from_dbm};

/// Relative tolerance for the equidistant-grid check.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// Optical carrier-to-noise ratio in the reference bandwidth.
///
/// Either a finite positive linear ratio or the distinguished `INFINITE` value
/// for a noiseless line. The sentinel makes the noiseless limit exact: dividing
/// a power by `Ocnr::INFINITE.linear()` yields exactly zero, not a small number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ocnr(f64);

impl Ocnr {
    pub const INFINITE: Ocnr = Ocnr(f64::INFINITY);

    /// Builds a finite OCNR from a linear ratio.
    pub fn finite(ratio: f64) -> Result<Self> {
        if ratio.is_finite() && ratio > 0.0 {
            Ok(Ocnr(ratio))
        } else {
            Err(Error::invalid(format!("OCNR must be a positive finite ratio, got {ratio}")))
        }
    }

    /// Builds an OCNR from a dB value; `f64::INFINITY` maps to `INFINITE`.
    pub fn from_db(value_db: f64) -> Self {
        Ocnr(linear_from_db(value_db))
    }

    /// Linear ratio; `f64::INFINITY` for the noiseless sentinel.
    pub fn linear(self) -> f64 {
        self.0
    }

    /// Value in dB; `f64::INFINITY` for the noiseless sentinel.
    pub fn db(self) -> f64 {
        if self.is_infinite() {
            f64::INFINITY
        } else {
            db_from_linear(self.0)
        }
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }
}

/// One comb line: grid index, absolute frequency, power and source OCNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombLine {
    /// Signed grid index relative to the center line.
    pub index: i32,
    /// Absolute carrier frequency in Hz.
    pub frequency: f64,
    /// Carrier power in W.
    pub power: f64,
    /// Source carrier-to-noise ratio in the reference bandwidth.
    pub ocnr: Ocnr,
}

impl CombLine {
    pub fn new(index: i32, frequency: f64, power: f64, ocnr: Ocnr) -> Result<Self> {
        if !(frequency.is_finite() && frequency > 0.0) {
            return Err(Error::invalid(format!("line {index}: frequency must be positive, got {frequency} Hz")));
        }
        if !(power.is_finite() && power > 0.0) {
            return Err(Error::invalid(format!("line {index}: power must be positive, got {power} W")));
        }
        Ok(CombLine { index, frequency, power, ocnr })
    }

    /// Source noise power co-propagating with this line, in W, in the same
    /// reference bandwidth the OCNR is quoted in. Exactly zero for `Ocnr::INFINITE`.
    pub fn noise_power(&self) -> f64 {
        self.power / self.ocnr.linear()
    }

    /// Source noise power spectral density in W/Hz, `power / (OCNR * B_ref)`.
    pub fn noise_density(&self, b_ref: f64) -> f64 {
        assert!(b_ref > 0.0, "reference bandwidth must be positive, got {b_ref} Hz");
        self.noise_power() / b_ref
    }
}

/// An equidistant set of comb lines, ordered by increasing frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct CombSource {
    lines: Vec<CombLine>,
    spacing: f64,
}

impl CombSource {
    /// Validates that `lines` form a strictly increasing, equidistant grid with
    /// the given spacing (within [`GRID_TOLERANCE`] relative). A single-line
    /// source accepts any non-negative spacing; zero means "unknown".
    pub fn new(lines: Vec<CombLine>, spacing: f64) -> Result<Self> {
        if lines.is_empty() {
            return Err(Error::invalid("comb source needs at least one line"));
        }
        if lines.len() == 1 {
            if !(spacing.is_finite() && spacing >= 0.0) {
                return Err(Error::invalid(format!("line spacing must be non-negative, got {spacing} Hz")));
            }
            return Ok(CombSource { lines, spacing });
        }
        for pair in lines.windows(2) {
            let df = pair[1].frequency - pair[0].frequency;
            if df <= 0.0 {
                return Err(Error::invalid(format!(
                    "line frequencies must increase: {} Hz (index {}) then {} Hz (index {})",
                    pair[0].frequency, pair[0].index, pair[1].frequency, pair[1].index
                )));
            }
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::invalid(format!("line spacing must be positive, got {spacing} Hz")));
        }
        for pair in lines.windows(2) {
            let df = pair[1].frequency - pair[0].frequency;
            if (df - spacing).abs() > GRID_TOLERANCE * spacing {
                return Err(Error::invalid(format!(
                    "grid not equidistant: spacing {df} Hz between indices {} and {} vs nominal {spacing} Hz",
                    pair[0].index, pair[1].index
                )));
            }
        }
        Ok(CombSource { lines, spacing })
    }

    pub fn lines(&self) -> &[CombLine] {
        &self.lines
    }

    /// Line spacing f_r in Hz; zero when unknown (single line read from CSV).
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Strongest line power in W.
    pub fn max_power(&self) -> f64 {
        self.lines.iter().map(|l| l.power).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Weakest line power in W.
    pub fn min_power(&self) -> f64 {
        self.lines.iter().map(|l| l.power).fold(f64::INFINITY, f64::min)
    }
}

/// Signed grid offsets for `count` lines: -(count/2) .. count - 1 - count/2.
/// Odd counts are symmetric about zero; even counts carry one extra line below.
fn grid_offsets(count: usize) -> impl Iterator<Item = i32> {
    let half = (count / 2) as i32;
    (0..count as i32).map(move |i| i - half)
}

/// A comb with every line at the same power and OCNR.
pub fn synthesize_flat_comb(
    line_count: usize,
    center_frequency: f64,
    spacing: f64,
    power: f64,
    ocnr: Ocnr,
) -> Result<CombSource> {
    if line_count == 0 {
        return Err(Error::invalid("flat comb needs at least one line"));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::invalid(format!("line spacing must be positive, got {spacing} Hz")));
    }
    let lines = grid_offsets(line_count)
        .map(|l| CombLine::new(l, center_frequency + f64::from(l) * spacing, power, ocnr))
        .collect::<Result<Vec<_>>>()?;
    CombSource::new(lines, spacing)
}

/// Parameters for the sech² soliton comb. Powers and OCNRs are linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonCombParams {
    pub line_count: usize,
    /// Center-line frequency in Hz.
    pub center_frequency: f64,
    /// Line spacing f_r in Hz.
    pub spacing: f64,
    /// Center-line power in W.
    pub peak_power: f64,
    /// Power of the outermost line in W; must not exceed `peak_power`.
    pub edge_power: f64,
    /// OCNR of the center line (linear).
    pub center_ocnr: f64,
    /// OCNR of the outermost line (linear); must not exceed `center_ocnr`.
    pub edge_ocnr: f64,
}

impl Default for SolitonCombParams {
    /// 110 lines on a 100 GHz grid around 193.4 THz, -11 dBm at the center
    /// rolling off to -20 dBm at the edge, OCNR 48 dB degrading to 40 dB.
    fn default() -> Self {
        SolitonCombParams {
            line_count: 110,
            center_frequency: 193.4e12,
            spacing: 100e9,
            peak_power: watt_from_dbm(-11.0),
            edge_power: watt_from_dbm(-20.0),
            center_ocnr: linear_from_db(48.0),
            edge_ocnr: linear_from_db(40.0),
        }
    }
}

impl SolitonCombParams {
    fn validate(&self) -> Result<()> {
        if self.line_count == 0 {
            return Err(Error::invalid("soliton comb needs at least one line"));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::invalid(format!("line spacing must be positive, got {} Hz", self.spacing)));
        }
        for (name, value) in [
            ("peak_power", self.peak_power),
            ("edge_power", self.edge_power),
            ("center_ocnr", self.center_ocnr),
            ("edge_ocnr", self.edge_ocnr),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {value}")));
            }
        }
        if self.edge_power > self.peak_power {
            return Err(Error::invalid("edge power must not exceed peak power"));
        }
        if self.edge_ocnr > self.center_ocnr {
            return Err(Error::invalid("edge OCNR must not exceed center OCNR"));
        }
        Ok(())
    }
}

fn sech_squared(x: f64) -> f64 {
    let c = x.cosh();
    1.0 / (c * c)
}

/// Soliton comb: powers follow peak·sech²(Δf/ΔF) with ΔF solved so the
/// outermost line sits exactly at `edge_power`; OCNR interpolates linearly in
/// dB between the center and outermost offsets.
pub fn synthesize_soliton_comb(params: &SolitonCombParams) -> Result<CombSource> {
    params.validate()?;
    let max_offset = f64::from((params.line_count / 2) as i32) * params.spacing;
    // sech²(max_offset/ΔF) = edge/peak  =>  ΔF = max_offset / acosh(sqrt(peak/edge)).
    // peak == edge gives acosh(1) = 0 and ΔF = ∞: a flat envelope.
    let envelope_width = max_offset / (params.peak_power / params.edge_power).sqrt().acosh();
    let center_ocnr_db = db_from_linear(params.center_ocnr);
    let edge_ocnr_db = db_from_linear(params.edge_ocnr);
    let lines = grid_offsets(params.line_count)
        .map(|l| {
            let offset = (f64::from(l) * params.spacing).abs();
            let power = if max_offset == 0.0 {
                params.peak_power
            } else {
                params.peak_power * sech_squared(offset / envelope_width)
            };
            let ocnr_db = if max_offset == 0.0 {
                center_ocnr_db
            } else {
                center_ocnr_db + (edge_ocnr_db - center_ocnr_db) * offset / max_offset
            };
            CombLine::new(l, params.center_frequency + f64::from(l) * params.spacing, power, Ocnr::from_db(ocnr_db))
        })
        .collect::<Result<Vec<_>>>()?;
    CombSource::new(lines, params.spacing)
}

// ---------------------------------------------------------------------------
// CSV interchange: header `index,frequency_hz,power_dbm,ocnr_db`, `#` comment
// lines ignored, empty ocnr_db means INFINITE.
// ---------------------------------------------------------------------------

const CSV_HEADER: [&str; 4] = ["index", "frequency_hz", "power_dbm", "ocnr_db"];

fn csv_field_error(line: u64, field: &str, detail: impl std::fmt::Display) -> Error {
    Error::Csv { line, message: format!("{field}: {detail}") }
}

/// Reads a comb from CSV. The spacing is inferred from the frequency grid
/// (zero for a single-line file, where no grid information exists).
pub fn read_comb_from_reader<R: Read>(reader: R) -> Result<CombSource> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = rdr.headers().map_err(|e| Error::Csv { line: 1, message: e.to_string() })?;
    let got: Vec<&str> = headers.iter().collect();
    if got != CSV_HEADER {
        return Err(Error::Csv {
            line: 1,
            message: format!("header must be `{}`, got `{}`", CSV_HEADER.join(","), got.join(",")),
        });
    }

    let mut lines = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let at = record.position().map_or(0, |p| p.line());
        if record.len() != 4 {
            return Err(Error::Csv { line: at, message: format!("expected 4 fields, got {}", record.len()) });
        }
        let index: i32 = record[0]
            .parse()
            .map_err(|_| csv_field_error(at, "index", format!("invalid integer `{}`", &record[0])))?;
        let frequency: f64 = record[1]
            .parse()
            .map_err(|_| csv_field_error(at, "frequency_hz", format!("invalid number `{}`", &record[1])))?;
        let power_dbm: f64 = record[2]
            .parse()
            .map_err(|_| csv_field_error(at, "power_dbm", format!("invalid number `{}`", &record[2])))?;
        let ocnr = if record[3].is_empty() {
            Ocnr::INFINITE
        } else {
            let db: f64 = record[3]
                .parse()
                .map_err(|_| csv_field_error(at, "ocnr_db", format!("invalid number `{}`", &record[3])))?;
            if !db.is_finite() {
                return Err(csv_field_error(at, "ocnr_db", format!("must be finite, got `{}`", &record[3])));
            }
            Ocnr::from_db(db)
        };
        if !frequency.is_finite() {
            return Err(csv_field_error(at, "frequency_hz", "must be finite"));
        }
        if !power_dbm.is_finite() {
            return Err(csv_field_error(at, "power_dbm", "must be finite"));
        }
        lines.push(
            CombLine::new(index, frequency, watt_from_dbm(power_dbm), ocnr)
                .map_err(|e| Error::Csv { line: at, message: e.to_string() })?,
        );
    }

    if lines.is_empty() {
        return Err(Error::invalid("comb csv contains no data rows"));
    }
    let spacing = if lines.len() >= 2 {
        (lines[lines.len() - 1].frequency - lines[0].frequency) / (lines.len() - 1) as f64
    } else {
        0.0
    };
    CombSource::new(lines, spacing)
}

pub fn read_comb_csv(path: impl AsRef<Path>) -> Result<CombSource> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_comb_from_reader(std::io::BufReader::new(file))
}

/// Writes a comb as CSV. Frequencies and dB values use shortest-round-trip
/// formatting, so a read-back reproduces them losslessly.
pub fn write_comb_to_writer<W: Write>(comb: &CombSource, mut writer: W) -> Result<()> {
    let dump = |w: &mut W| -> std::io::Result<()> {
        writeln!(w, "{}", CSV_HEADER.join(","))?;
        for line in comb.lines() {
            let ocnr = if line.ocnr.is_infinite() { String::new() } else { line.ocnr.db().to_string() };
            writeln!(w, "{},{},{},{}", line.index, line.frequency, dbm_from_watt(line.power), ocnr)?;
        }
        Ok(())
    };
    dump(&mut writer).map_err(|e| Error::Io { path: "<writer>".into(), source: e })
}

pub fn write_comb_csv(comb: &CombSource, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut buf = std::io::BufWriter::new(file);
    match write_comb_to_writer(comb, &mut buf) {
        Ok(()) => {
            use std::io::Write as _;
            buf.flush().map_err(|e| Error::io(path, e))
        }
        Err(Error::Io { source, .. }) => Err(Error::io(path, source)),
        Err(other) => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn noise_density_matches_direct_ratio() {
        let line = CombLine::new(0, 193.4e12, 1e-3, Ocnr::from_db(40.0)).unwrap();
        assert_relative_eq!(line.noise_density(12.5e9), 8e-18, max_relative = 1e-12);
        let line = CombLine::new(0, 193.4e12, watt_from_dbm(-11.0), Ocnr::from_db(48.0)).unwrap();
        assert_relative_eq!(line.noise_density(12.5e9), 1.007_140_329_435_334e-19, max_relative = 1e-12);
    }

    #[test]
    fn infinite_ocnr_gives_exactly_zero_noise() {
        let line = CombLine::new(0, 193.4e12, 1e-3, Ocnr::INFINITE).unwrap();
        assert_eq!(line.noise_power(), 0.0);
        assert_eq!(line.noise_density(12.5e9), 0.0);
    }

    #[test]
    fn flat_comb_grid_and_values() {
        let comb = synthesize_flat_comb(110, 193.4e12, 100e9, 1e-3, Ocnr::INFINITE).unwrap();
        assert_eq!(comb.len(), 110);
        assert_eq!(comb.lines()[0].index, -55);
        assert_eq!(comb.lines()[109].index, 54);
        assert_relative_eq!(comb.lines()[0].frequency, 193.4e12 - 5.5e12, max_relative = 1e-15);
        assert!(comb.lines().iter().all(|l| l.power == 1e-3));

        let single = synthesize_flat_comb(1, 193.4e12, 100e9, 1e-3, Ocnr::INFINITE).unwrap();
        assert_eq!(single.lines()[0].index, 0);
        assert_eq!(single.spacing(), 100e9);
    }

    #[test]
    fn soliton_defaults_hit_peak_and_edge_powers() {
        let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
        assert_eq!(comb.len(), 110);
        let center = comb.lines().iter().find(|l| l.index == 0).unwrap();
        let outer = comb.lines().iter().find(|l| l.index == -55).unwrap();
        assert_relative_eq!(dbm_from_watt(center.power), -11.0, epsilon = 1e-12);
        // the envelope width is solved so the outermost line lands on the edge power
        assert!((dbm_from_watt(outer.power) - (-20.0)).abs() < 0.01);
        assert_relative_eq!(center.ocnr.db(), 48.0, epsilon = 1e-12);
        assert_relative_eq!(outer.ocnr.db(), 40.0, epsilon = 1e-12);
    }

    #[test]
    fn soliton_envelope_matches_independent_sech2_evaluation() {
        // Oracle: ΔF = 5.5 THz / acosh(sqrt(10^0.9)) = 3.2425 THz, then
        // P(Δf) = peak * sech²(Δf/ΔF) evaluated directly.
        let width = 5.5e12 / 10f64.powf(0.9).sqrt().acosh();
        assert_relative_eq!(width, 3.242_469_257_969_953_6e12, max_relative = 1e-12);
        let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
        for l in [-55i32, -27, -1, 0, 13, 54] {
            let line = comb.lines().iter().find(|x| x.index == l).unwrap();
            let x = f64::from(l).abs() * 100e9 / width;
            let expected = watt_from_dbm(-11.0) / (x.cosh() * x.cosh());
            assert_relative_eq!(line.power, expected, max_relative = 1e-12);
        }
        let at27 = comb.lines().iter().find(|x| x.index == 27).unwrap();
        assert_relative_eq!(dbm_from_watt(at27.power), -13.716_610, epsilon = 1e-5);
        assert_relative_eq!(at27.ocnr.db(), 48.0 - 8.0 * 27.0 / 55.0, epsilon = 1e-12);
    }

    #[test]
    fn soliton_symmetry_and_monotonic_rolloff() {
        let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
        for l in 1..=54i32 {
            let plus = comb.lines().iter().find(|x| x.index == l).unwrap();
            let minus = comb.lines().iter().find(|x| x.index == -l).unwrap();
            assert_eq!(plus.power, minus.power);
            assert_eq!(plus.ocnr, minus.ocnr);
        }
        // power strictly decreases away from center
        for l in 0..54i32 {
            let near = comb.lines().iter().find(|x| x.index == l).unwrap();
            let far = comb.lines().iter().find(|x| x.index == l + 1).unwrap();
            assert!(far.power < near.power);
        }
    }

    #[test]
    fn degenerate_soliton_with_equal_peak_and_edge_is_flat() {
        let params = SolitonCombParams {
            peak_power: 1e-3,
            edge_power: 1e-3,
            center_ocnr: linear_from_db(40.0),
            edge_ocnr: linear_from_db(40.0),
            ..SolitonCombParams::default()
        };
        let comb = synthesize_soliton_comb(&params).unwrap();
        assert!(comb.lines().iter().all(|l| l.power == 1e-3));
    }

    #[test]
    fn synthesis_rejects_bad_parameters() {
        assert!(synthesize_flat_comb(0, 193.4e12, 100e9, 1e-3, Ocnr::INFINITE).is_err());
        assert!(synthesize_flat_comb(3, 193.4e12, -1.0, 1e-3, Ocnr::INFINITE).is_err());
        assert!(synthesize_flat_comb(3, 193.4e12, 100e9, 0.0, Ocnr::INFINITE).is_err());
        let bad = SolitonCombParams { edge_power: 1.0, ..SolitonCombParams::default() };
        assert!(synthesize_soliton_comb(&bad).is_err());
        let bad = SolitonCombParams { edge_ocnr: linear_from_db(60.0), ..SolitonCombParams::default() };
        assert!(synthesize_soliton_comb(&bad).is_err());
        assert!(Ocnr::finite(0.0).is_err());
        assert!(Ocnr::finite(f64::INFINITY).is_err());
    }

    #[test]
    fn comb_source_rejects_broken_grids() {
        let mk = |f| CombLine::new(0, f, 1e-3, Ocnr::INFINITE).unwrap();
        let err = CombSource::new(vec![mk(193.4e12), mk(193.3e12)], 100e9).unwrap_err();
        assert!(err.to_string().contains("must increase"));
        let err = CombSource::new(vec![mk(193.4e12), mk(193.4e12 + 100e9), mk(193.4e12 + 190e9)], 100e9)
            .unwrap_err();
        assert!(err.to_string().contains("equidistant"));
        assert!(CombSource::new(vec![], 100e9).is_err());
    }

    #[test]
    fn csv_round_trip_preserves_all_fields() {
        let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
        let mut buf = Vec::new();
        write_comb_to_writer(&comb, &mut buf).unwrap();
        let back = read_comb_from_reader(buf.as_slice()).unwrap();
        assert_eq!(back.len(), comb.len());
        for (a, b) in comb.lines().iter().zip(back.lines()) {
            assert_eq!(a.index, b.index);
            assert_relative_eq!(a.frequency, b.frequency, max_relative = 1e-12);
            assert_relative_eq!(a.power, b.power, max_relative = 1e-12);
            assert_relative_eq!(a.ocnr.linear(), b.ocnr.linear(), max_relative = 1e-12);
        }
    }

    #[test]
    fn csv_round_trip_keeps_infinite_ocnr_and_single_lines() {
        let comb = synthesize_flat_comb(1, 193.4e12, 100e9, 1e-3, Ocnr::INFINITE).unwrap();
        let mut buf = Vec::new();
        write_comb_to_writer(&comb, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(','), "empty ocnr field for INFINITE");
        let back = read_comb_from_reader(buf.as_slice()).unwrap();
        assert!(back.lines()[0].ocnr.is_infinite());
        assert_eq!(back.spacing(), 0.0, "spacing is unknowable from a single row");
    }

    #[test]
    fn csv_reader_accepts_comments_and_crlf() {
        let text = "# produced by a comb characterization run\r\nindex,frequency_hz,power_dbm,ocnr_db\r\n-1,193300000000000,-11,48\r\n# midstream comment\r\n0,193400000000000,-11,\r\n1,193500000000000,-11,47\r\n";
        let comb = read_comb_from_reader(text.as_bytes()).unwrap();
        assert_eq!(comb.len(), 3);
        assert_eq!(comb.spacing(), 100e9);
        assert!(comb.lines()[1].ocnr.is_infinite());
    }

    #[test]
    fn csv_reader_names_offending_line_and_field() {
        let text = "index,frequency_hz,power_dbm,ocnr_db\n0,193400000000000,-11,48\n1,193500000000000,abc,40\n";
        let err = read_comb_from_reader(text.as_bytes()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 3"), "got: {msg}");
        assert!(msg.contains("power_dbm"), "got: {msg}");
        assert!(msg.contains("abc"), "got: {msg}");

        let text = "index,frequency_hz,power_dbm\n0,193400000000000,-11\n";
        let err = read_comb_from_reader(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("header"), "got: {err}");

        let text = "index,frequency_hz,power_dbm,ocnr_db\n0,193400000000000,-11,48\n1,193300000000000,-11,40\n";
        let err = read_comb_from_reader(text.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("must increase"), "got: {err}");
    }

    proptest! {
        #[test]
        fn soliton_envelope_is_symmetric_and_bounded(
            count in 2usize..200,
            peak_dbm in -20.0f64..0.0,
            drop_db in 0.0f64..30.0,
        ) {
            let params = SolitonCombParams {
                line_count: count,
                peak_power: watt_from_dbm(peak_dbm),
                edge_power: watt_from_dbm(peak_dbm - drop_db),
                ..SolitonCombParams::default()
            };
            let comb = synthesize_soliton_comb(&params).unwrap();
            let peak = comb.max_power();
            prop_assert!((dbm_from_watt(peak) - peak_dbm).abs() < 1e-9);
            for line in comb.lines() {
                prop_assert!(line.power <= peak * (1.0 + 1e-12));
                prop_assert!(line.power >= params.edge_power * (1.0 - 1e-12));
                if let Some(mirror) = comb.lines().iter().find(|m| m.index == -line.index) {
                    prop_assert!((mirror.power - line.power).abs() <= 1e-12 * line.power);
                }
            }
        }

        #[test]
        fn noise_density_scales_inversely_with_ocnr(
            p_dbm in -30.0f64..10.0,
            ocnr_db in 10.0f64..60.0,
        ) {
            let line = CombLine::new(0, 193.4e12, watt_from_dbm(p_dbm), Ocnr::from_db(ocnr_db)).unwrap();
            let d = line.noise_density(12.5e9);
            let expected = watt_from_dbm(p_dbm) / (linear_from_db(ocnr_db) * 12.5e9);
            prop_assert!(((d - expected) / expected).abs() < 1e-12);
        }
    }
}
