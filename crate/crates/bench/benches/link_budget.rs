//! Hot paths of the link budget model: the closed-form OSNR against the
//! stage-by-stage propagation it replaces, the sweeps behind the CLI tables,
//! and a full long-haul capacity evaluation.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use comblink_core::{
    capacity_vs_distance, comb_gain_for_launch, osnr_closed_form, osnr_of, propagate,
    sweep_line_power, synthesize_soliton_comb, transition_line_power, watt_from_dbm, CapacityMode,
    CombLine, EqualizationScheme, LinkConfig, Ocnr, PlanEntry, SolitonCombParams,
};

fn single_channel(c: &mut Criterion) {
    let config = LinkConfig::default().with_span_count(40);
    let p_line = watt_from_dbm(-20.0);
    let entry = PlanEntry { comb_gain: comb_gain_for_launch(&config, p_line), mod_attenuation: 1.0 };
    let ocnr = Ocnr::from_db(35.0);
    let line = CombLine::new(0, 193.4e12, p_line, ocnr).unwrap();

    let mut group = c.benchmark_group("single_channel_40_spans");
    group.bench_function("closed_form", |b| {
        b.iter(|| osnr_closed_form(black_box(p_line), ocnr, &config, entry))
    });
    group.bench_function("propagation", |b| {
        b.iter(|| osnr_of(propagate(black_box(&line), &config, entry)))
    });
    group.finish();
}

fn power_sweep(c: &mut Criterion) {
    let config = LinkConfig::default();
    let span_counts = [2u32, 10, 40];
    let grid: Vec<f64> = (0..=800).map(|i| -40.0 + 0.05 * f64::from(i)).collect();

    c.bench_function("power_sweep_3x801", |b| {
        b.iter(|| sweep_line_power(black_box(&config), &span_counts, &grid))
    });
}

fn transition_search(c: &mut Criterion) {
    let config = LinkConfig::default();
    c.bench_function("transition_line_power_40_spans", |b| {
        b.iter(|| transition_line_power(black_box(&config), 40).unwrap())
    });
}

fn soliton_capacity(c: &mut Criterion) {
    let comb = synthesize_soliton_comb(&SolitonCombParams::default()).unwrap();
    let config = LinkConfig::default();
    let schemes = EqualizationScheme::ALL;
    let modes = CapacityMode::ALL;

    c.bench_function("soliton_capacity_130_spans", |b| {
        b.iter(|| capacity_vs_distance(black_box(&comb), &config, &schemes, &modes, &[130]).unwrap())
    });
}

criterion_group!(benches, single_channel, power_sweep, transition_search, soliton_capacity);
criterion_main!(benches);
