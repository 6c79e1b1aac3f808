//! `comblink`: scenario runner for the comb-driven WDM link budget model.
//!
//! Each subcommand tabulates one family of results as CSV (stdout or `--out`)
//! and can render the same table as a static SVG line plot (`--plot`).
//! Usage errors exit with code 2 (via clap); runtime failures such as missing
//! or malformed input files exit with code 1 and a diagnostic on stderr.

mod args;
mod plot;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use args::{FloatGrid, ModeList, NamedFormat, SchemeList, SpanGrid};
use comblink_core::{
    capacity_vs_distance, db_from_linear, dbm_from_watt, distance_km, osnr_for_line_power,
    osnr_vs_distance, required_osnr, sweep_line_power, sweep_ocnr, synthesize_flat_comb,
    synthesize_soliton_comb, transition_line_power, transition_ocnr, watt_from_dbm, CombSource,
    LinkConfig, Ocnr, SolitonCombParams,
};

#[derive(Parser)]
#[command(
    name = "comblink",
    version,
    about = "Link budget scenarios for comb-driven WDM transmission: OSNR sweeps, \
             equalization maps, format thresholds, transition points, and aggregate capacity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// OSNR vs line power per span count (noiseless source), with 1-dB transition markers
    SweepPower(SweepPowerArgs),
    /// OSNR vs source OCNR per span count, pinned to each span count's transition power
    SweepOcnr(SweepOcnrArgs),
    /// Per-line OSNR across a comb vs distance for each equalization scheme
    CombMap(CombMapArgs),
    /// Aggregate comb capacity vs distance per scheme and rate-assignment mode
    Capacity(CapacityArgs),
    /// Required OSNR and net rate of the built-in modulation formats
    Thresholds(ThresholdsArgs),
    /// 1-dB transition points (line power and OCNR) vs span count
    Transition(TransitionArgs),
    /// Print the effective configuration as a JSON document
    Config(ConfigArgs),
}

#[derive(Args)]
struct IoArgs {
    /// Link configuration JSON; omitted keys keep built-in defaults
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the CSV table here instead of stdout
    #[arg(short = 'o', long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
    /// Also render the table as an SVG line plot
    #[arg(long, value_name = "PATH")]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct CombArgs {
    /// Built-in comb preset
    #[arg(long, default_value = "soliton", value_parser = ["flat", "soliton"])]
    comb: String,
    /// Comb spectrum CSV (header `index,frequency_hz,power_dbm,ocnr_db`); overrides --comb
    #[arg(long, value_name = "PATH")]
    comb_file: Option<PathBuf>,
    /// Per-line power of the flat preset, dBm
    #[arg(long, default_value_t = -11.0, allow_hyphen_values = true)]
    flat_power_dbm: f64,
    /// Per-line OCNR of the flat preset, dB; omit for noiseless lines
    #[arg(long, allow_hyphen_values = true)]
    flat_ocnr_db: Option<f64>,
}

impl CombArgs {
    fn resolve(&self) -> Result<CombSource> {
        if let Some(path) = &self.comb_file {
            return Ok(comblink_core::read_comb_csv(path)?);
        }
        let comb = match self.comb.as_str() {
            "flat" => {
                let ocnr = match self.flat_ocnr_db {
                    Some(db) => Ocnr::from_db(db),
                    None => Ocnr::INFINITE,
                };
                synthesize_flat_comb(110, 193.4e12, 100e9, watt_from_dbm(self.flat_power_dbm), ocnr)?
            }
            _ => synthesize_soliton_comb(&SolitonCombParams::default())?,
        };
        Ok(comb)
    }
}

#[derive(Args)]
struct SweepPowerArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Span counts: comma list or start:stop[:step]
    #[arg(long, default_value = "2,10,40", value_parser = SpanGrid::parse)]
    spans: SpanGrid,
    /// Line power grid in dBm: comma list or start:stop:step (inclusive)
    #[arg(long = "pline-dbm", default_value = "-40:0:0.5", value_parser = FloatGrid::parse,
          allow_hyphen_values = true)]
    pline_dbm: FloatGrid,
}

#[derive(Args)]
struct SweepOcnrArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Span counts: comma list or start:stop[:step]
    #[arg(long, default_value = "1,10,40", value_parser = SpanGrid::parse)]
    spans: SpanGrid,
    /// OCNR grid in dB: comma list or start:stop:step (inclusive)
    #[arg(long = "ocnr-db", default_value = "10:60:0.5", value_parser = FloatGrid::parse,
          allow_hyphen_values = true)]
    ocnr_db: FloatGrid,
}

#[derive(Args)]
struct CombMapArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    comb: CombArgs,
    /// Equalization schemes: comma list of no-eq, gain-eq, power-eq
    #[arg(long, default_value = "no-eq,gain-eq,power-eq", value_parser = SchemeList::parse)]
    scheme: SchemeList,
    /// Span counts: comma list or start:stop[:step]
    #[arg(long, default_value = "1,130", value_parser = SpanGrid::parse)]
    spans: SpanGrid,
}

#[derive(Args)]
struct CapacityArgs {
    #[command(flatten)]
    io: IoArgs,
    #[command(flatten)]
    comb: CombArgs,
    /// Equalization schemes: comma list of no-eq, gain-eq, power-eq
    #[arg(long, default_value = "no-eq,gain-eq,power-eq", value_parser = SchemeList::parse)]
    scheme: SchemeList,
    /// Rate assignment modes: comma list of optimal, min-snr
    #[arg(long, default_value = "optimal,min-snr", value_parser = ModeList::parse)]
    mode: ModeList,
    /// Span counts: comma list or start:stop[:step]
    #[arg(long, default_value = "1:200", value_parser = SpanGrid::parse)]
    spans: SpanGrid,
}

#[derive(Args)]
struct ThresholdsArgs {
    /// Link configuration JSON (sets the reference bandwidth)
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the CSV table here instead of stdout
    #[arg(short = 'o', long = "out", value_name = "PATH")]
    out: Option<PathBuf>,
    /// Format preset (repeatable); default: both built-ins
    #[arg(long = "format", value_parser = args::parse_format)]
    formats: Vec<NamedFormat>,
}

#[derive(Args)]
struct TransitionArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Span counts: comma list or start:stop[:step]
    #[arg(long, default_value = "1:40", value_parser = SpanGrid::parse)]
    spans: SpanGrid,
}

#[derive(Args)]
struct ConfigArgs {
    /// Print the built-in default configuration
    #[arg(long, conflicts_with = "config")]
    print_defaults: bool,
    /// Validate this configuration file and print the effective document
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::SweepPower(a) => run_sweep_power(a),
        Command::SweepOcnr(a) => run_sweep_ocnr(a),
        Command::CombMap(a) => run_comb_map(a),
        Command::Capacity(a) => run_capacity(a),
        Command::Thresholds(a) => run_thresholds(a),
        Command::Transition(a) => run_transition(a),
        Command::Config(a) => run_config(a),
    };
    if let Err(err) = result {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}

fn load_config(path: Option<&Path>) -> Result<LinkConfig> {
    let config = match path {
        Some(p) => LinkConfig::from_json_file(p)?,
        None => LinkConfig::default(),
    };
    Ok(config)
}

/// CSV float formatting: 9 significant digits, locale-independent.
fn csv_f(value: f64) -> String {
    format!("{value:.8e}")
}

fn write_table(out: Option<&Path>, header: &str, rows: &[String]) -> Result<()> {
    let mut text = String::with_capacity(header.len() + 1 + rows.iter().map(|r| r.len() + 1).sum::<usize>());
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes()).context("writing to stdout")?;
            Ok(())
        }
    }
}

fn run_sweep_power(a: SweepPowerArgs) -> Result<()> {
    let config = load_config(a.io.config.as_deref())?;
    let points = sweep_line_power(&config, &a.spans.0, &a.pline_dbm.0);

    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &m in &a.spans.0 {
        let block: Vec<_> = points.iter().filter(|p| p.span_count == m).collect();
        for p in &block {
            rows.push(format!("{},{},{},", csv_f(p.p_line_dbm), m, csv_f(p.osnr_db)));
        }
        let t = transition_line_power(&config, m)
            .with_context(|| format!("solving the line-power transition at {m} spans"))?;
        let p_dbm = dbm_from_watt(t.threshold);
        let osnr_db = db_from_linear(osnr_for_line_power(
            &config.with_span_count(m),
            t.threshold,
            Ocnr::INFINITE,
        ));
        rows.push(format!("{},{},{},transition", csv_f(p_dbm), m, csv_f(osnr_db)));
        series.push(plot::Series {
            label: format!("{m} spans"),
            points: block.iter().map(|p| (p.p_line_dbm, p.osnr_db)).collect(),
        });
    }
    write_table(a.io.out.as_deref(), "p_line_dbm,spans,osnr_db,marker", &rows)?;
    if let Some(path) = &a.io.plot {
        plot::write_plot(path, "OSNR vs line power", "line power (dBm)", "OSNR (dB)", plot::Scale::Linear, &series)?;
    }
    Ok(())
}

fn run_sweep_ocnr(a: SweepOcnrArgs) -> Result<()> {
    let config = load_config(a.io.config.as_deref())?;
    let points = sweep_ocnr(&config, &a.spans.0, &a.ocnr_db.0)?;

    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &m in &a.spans.0 {
        let block: Vec<_> = points.iter().filter(|p| p.span_count == m).collect();
        for p in &block {
            rows.push(format!(
                "{},{},{},{},",
                csv_f(p.ocnr_db),
                m,
                csv_f(p.p_line_dbm),
                csv_f(p.osnr_db)
            ));
        }
        let p_line = transition_line_power(&config, m)
            .with_context(|| format!("solving the line-power transition at {m} spans"))?
            .threshold;
        let t = transition_ocnr(&config, m, p_line)
            .with_context(|| format!("solving the OCNR transition at {m} spans"))?;
        let ocnr_db = db_from_linear(t.threshold);
        let osnr_db = db_from_linear(osnr_for_line_power(
            &config.with_span_count(m),
            p_line,
            Ocnr::from_db(ocnr_db),
        ));
        rows.push(format!(
            "{},{},{},{},transition",
            csv_f(ocnr_db),
            m,
            csv_f(dbm_from_watt(p_line)),
            csv_f(osnr_db)
        ));
        series.push(plot::Series {
            label: format!("{m} spans"),
            points: block.iter().map(|p| (p.ocnr_db, p.osnr_db)).collect(),
        });
    }
    write_table(a.io.out.as_deref(), "ocnr_db,spans,p_line_dbm,osnr_db,marker", &rows)?;
    if let Some(path) = &a.io.plot {
        plot::write_plot(path, "OSNR vs source OCNR", "OCNR (dB)", "OSNR (dB)", plot::Scale::Linear, &series)?;
    }
    Ok(())
}

fn run_comb_map(a: CombMapArgs) -> Result<()> {
    let config = load_config(a.io.config.as_deref())?;
    let comb = a.comb.resolve()?;

    let mut rows = Vec::new();
    let mut series = Vec::new();
    for &scheme in &a.scheme.0 {
        let points = osnr_vs_distance(&comb, &config, scheme, &a.spans.0);
        for &m in &a.spans.0 {
            let block: Vec<_> = points.iter().filter(|p| p.span_count == m).collect();
            for p in &block {
                rows.push(format!(
                    "{},{},{},{},{},{}",
                    scheme,
                    m,
                    csv_f(p.distance_km),
                    p.line_index,
                    csv_f(p.frequency),
                    csv_f(p.osnr_db)
                ));
            }
            series.push(plot::Series {
                label: format!("{scheme} @ {:.0} km", distance_km(m)),
                points: block.iter().map(|p| (p.frequency, p.osnr_db)).collect(),
            });
        }
    }
    write_table(
        a.io.out.as_deref(),
        "scheme,spans,distance_km,line_index,frequency_hz,osnr_db",
        &rows,
    )?;
    if let Some(path) = &a.io.plot {
        plot::write_plot(path, "Per-line OSNR across the comb", "frequency (Hz)", "OSNR (dB)", plot::Scale::Linear, &series)?;
    }
    Ok(())
}

fn run_capacity(a: CapacityArgs) -> Result<()> {
    let config = load_config(a.io.config.as_deref())?;
    let comb = a.comb.resolve()?;
    let points = capacity_vs_distance(&comb, &config, &a.scheme.0, &a.mode.0, &a.spans.0)?;

    let mut rows = Vec::new();
    for p in &points {
        rows.push(format!(
            "{},{},{},{},{}",
            p.span_count,
            csv_f(p.distance_km),
            p.scheme,
            p.mode,
            csv_f(p.total)
        ));
    }
    write_table(a.io.out.as_deref(), "spans,distance_km,scheme,mode,total_bps", &rows)?;
    if let Some(path) = &a.io.plot {
        let mut series = Vec::new();
        for &scheme in &a.scheme.0 {
            for &mode in &a.mode.0 {
                series.push(plot::Series {
                    label: format!("{scheme}/{mode}"),
                    points: points
                        .iter()
                        .filter(|p| p.scheme == scheme && p.mode == mode)
                        .map(|p| (p.distance_km, p.total))
                        .collect(),
                });
            }
        }
        plot::write_plot(path, "Aggregate capacity vs distance", "distance (km)", "capacity (bit/s)", plot::Scale::Log, &series)?;
    }
    Ok(())
}

fn run_thresholds(a: ThresholdsArgs) -> Result<()> {
    let config = load_config(a.config.as_deref())?;
    let formats = if a.formats.is_empty() {
        vec![args::parse_format("16qam-56gbd").unwrap(), args::parse_format("64qam-56gbd").unwrap()]
    } else {
        a.formats
    };
    let mut rows = Vec::new();
    for f in &formats {
        let osnr = required_osnr(&f.format, config.b_ref)
            .with_context(|| format!("solving the required OSNR for {}", f.name))?;
        rows.push(format!("{},{},{}", f.name, csv_f(db_from_linear(osnr)), csv_f(f.format.net_rate())));
    }
    write_table(a.out.as_deref(), "format,required_osnr_db,net_rate_bps", &rows)
}

fn run_transition(a: TransitionArgs) -> Result<()> {
    let config = load_config(a.io.config.as_deref())?;
    let mut rows = Vec::new();
    let mut power_series = Vec::new();
    let mut ocnr_series = Vec::new();
    for &m in &a.spans.0 {
        let t = transition_line_power(&config, m)
            .with_context(|| format!("solving the line-power transition at {m} spans"))?;
        let o = transition_ocnr(&config, m, t.threshold)
            .with_context(|| format!("solving the OCNR transition at {m} spans"))?;
        let p_dbm = dbm_from_watt(t.threshold);
        let ocnr_db = db_from_linear(o.threshold);
        rows.push(format!(
            "{},{},{},{},{}",
            m,
            csv_f(p_dbm),
            csv_f(db_from_linear(t.limit_osnr)),
            csv_f(ocnr_db),
            csv_f(db_from_linear(o.limit_osnr))
        ));
        power_series.push((f64::from(m), p_dbm));
        ocnr_series.push((f64::from(m), ocnr_db));
    }
    write_table(
        a.io.out.as_deref(),
        "spans,p_line_dbm,power_limit_osnr_db,ocnr_db,ocnr_limit_osnr_db",
        &rows,
    )?;
    if let Some(path) = &a.io.plot {
        let series = vec![
            plot::Series { label: "line power threshold (dBm)".into(), points: power_series },
            plot::Series { label: "OCNR threshold (dB)".into(), points: ocnr_series },
        ];
        plot::write_plot(path, "1-dB transition points", "spans", "threshold", plot::Scale::Linear, &series)?;
    }
    Ok(())
}

fn run_config(a: ConfigArgs) -> Result<()> {
    let config = match (&a.config, a.print_defaults) {
        (Some(path), _) => LinkConfig::from_json_file(path)?,
        (None, _) => LinkConfig::default(),
    };
    println!("{}", config.to_document_json());
    Ok(())
}
