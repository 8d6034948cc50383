//! CSV emitters. Floats are written with 17 significant digits so every
//! value parses back to the same `f64`.

use std::io::Write;

use uncoded_bc::{BoundaryPoint, SimulationReport};

use crate::setup::Setup;

pub const TRACE_HEADER: [&str; 7] = [
    "alpha",
    "d1",
    "d2_uncoded",
    "d2_converse",
    "a1_star",
    "a2_star",
    "optimal_flag",
];

pub const SIMULATION_HEADER: [&str; 9] = [
    "alpha",
    "beta",
    "samples",
    "seed",
    "empirical_d1",
    "empirical_d2",
    "empirical_power",
    "ci_half_width_d1",
    "ci_half_width_d2",
];

pub fn float17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace<W: Write>(out: W, setup: &Setup, points: &[BoundaryPoint]) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for p in points {
        let (d2c, a1, a2) = match p.converse {
            Some(c) => (
                float17(setup.d2_to_original(c.d2)),
                float17(c.witness.a1()),
                float17(c.witness.a2()),
            ),
            None => (String::new(), String::new(), String::new()),
        };
        w.write_record([
            float17(p.alpha),
            float17(setup.d1_to_original(p.d1)),
            float17(setup.d2_to_original(p.d2_achievable)),
            d2c,
            a1,
            a2,
            p.optimal.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_simulation<W: Write>(out: W, report: &SimulationReport) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(SIMULATION_HEADER)?;
    w.write_record([
        float17(report.alpha),
        float17(report.beta),
        report.samples.to_string(),
        report.seed.to_string(),
        float17(report.empirical_d1),
        float17(report.empirical_d2),
        float17(report.empirical_power),
        float17(report.ci_half_width_d1),
        float17(report.ci_half_width_d2),
    ])?;
    w.flush()?;
    Ok(())
}
