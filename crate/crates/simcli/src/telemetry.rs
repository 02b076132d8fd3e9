//! Closed-loop runs decorated with controller internals, and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use mrp_smc::{
    attitude_error, closed_loop_derivative_with, integrate_body, lyapunov_sample, sliding_variable, ControlLaw,
    Controller, OdeError, SolutionSample, State, Vec3,
};
use thiserror::Error;

use crate::scenario::Scenario;

pub const CSV_HEADER: [&str; 25] = [
    "t",
    "omega1",
    "omega2",
    "omega3",
    "sigma_lb1",
    "sigma_lb2",
    "sigma_lb3",
    "sigma_db1",
    "sigma_db2",
    "sigma_db3",
    "xi1",
    "xi2",
    "xi3",
    "u_eq1",
    "u_eq2",
    "u_eq3",
    "u_N1",
    "u_N2",
    "u_N3",
    "tau1",
    "tau2",
    "tau3",
    "V",
    "Vdot",
    "Vbar",
];

#[derive(Debug, Error)]
pub enum TelemetryError {
    #[error("no telemetry records")]
    Empty,
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("bad telemetry header: {0}")]
    Header(String),
    #[error("bad value `{value}` in column {column} of row {row}")]
    Value {
        row: usize,
        column: &'static str,
        value: String,
    },
}

/// One output sample with everything plotted or checked downstream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelemetryRecord {
    pub t: f64,
    pub omega: Vec3,
    pub sigma_lb: Vec3,
    pub sigma_db: Vec3,
    pub xi: Vec3,
    pub u_eq: Vec3,
    pub u_n: Vec3,
    pub tau: Vec3,
    pub v: f64,
    pub vdot: f64,
    pub vbar: Option<f64>,
}

impl TelemetryRecord {
    fn from_sample<C: ControlLaw<f64>>(s: &Scenario, law: &C, sample: &SolutionSample<f64>) -> Self {
        let omega = sample.state.omega;
        let sigma_lb = sample.state.sigma_lb.sigma;
        let sigma_db = attitude_error(&sigma_lb, &s.sigma_ld);
        let control = law.control(&omega, &sigma_db);
        // Recomputed from the state so a law cannot misreport its own surface.
        let xi = sliding_variable(&s.gains, &omega, &sigma_db);
        let lyap = lyapunov_sample(&s.gains, &xi, &sigma_db);
        Self {
            t: sample.t,
            omega,
            sigma_lb,
            sigma_db,
            xi,
            u_eq: control.u_eq,
            u_n: control.u_n,
            tau: control.tau,
            v: lyap.v,
            vdot: lyap.vdot,
            vbar: lyap.vbar,
        }
    }

    fn values(&self) -> [f64; 24] {
        let mut out = [0.0; 24];
        out[0] = self.t;
        for (k, v) in [
            self.omega,
            self.sigma_lb,
            self.sigma_db,
            self.xi,
            self.u_eq,
            self.u_n,
            self.tau,
        ]
        .iter()
        .enumerate()
        {
            out[1 + 3 * k..4 + 3 * k].copy_from_slice(v.as_array());
        }
        out[22] = self.v;
        out[23] = self.vdot;
        out
    }
}

/// Simulates the scenario under the sliding-mode law.
pub fn run_simulation(s: &Scenario) -> Result<Vec<TelemetryRecord>, OdeError> {
    run_simulation_with(s, &Controller::new(s.inertia, s.gains))
}

/// Simulates the scenario's plant under an arbitrary torque law.
pub fn run_simulation_with<C: ControlLaw<f64> + Clone>(
    s: &Scenario,
    law: &C,
) -> Result<Vec<TelemetryRecord>, OdeError> {
    let y0 = State::new(s.omega0, s.sigma_lb0);
    let deriv = closed_loop_derivative_with(s.inertia, law.clone(), s.sigma_ld);
    let samples = integrate_body(deriv, y0, s.t_final, &s.integrator, s.sample_dt)?;
    Ok(samples
        .iter()
        .map(|x| TelemetryRecord::from_sample(s, law, x))
        .collect())
}

// `{:?}` prints the shortest string that parses back to the same f64.
fn fmt(x: f64) -> String {
    format!("{x:?}")
}

pub fn write_csv_to<W: Write>(records: &[TelemetryRecord], out: W) -> Result<(), TelemetryError> {
    if records.is_empty() {
        return Err(TelemetryError::Empty);
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        let mut row: Vec<String> = r.values().iter().copied().map(fmt).collect();
        row.push(r.vbar.map(fmt).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(records: &[TelemetryRecord], path: impl AsRef<Path>) -> Result<(), TelemetryError> {
    let file = std::fs::File::create(path)?;
    write_csv_to(records, std::io::BufWriter::new(file))
}

pub fn read_csv_from<R: Read>(input: R) -> Result<Vec<TelemetryRecord>, TelemetryError> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(TelemetryError::Header(header.iter().collect::<Vec<_>>().join(",")));
    }
    let mut records = Vec::new();
    for (row, result) in rdr.records().enumerate() {
        let rec = result?;
        let parse = |col: usize| -> Result<f64, TelemetryError> {
            let value = rec.get(col).unwrap_or_default();
            value.parse::<f64>().map_err(|_| TelemetryError::Value {
                row,
                column: CSV_HEADER[col],
                value: value.to_string(),
            })
        };
        let vec_at = |col: usize| -> Result<Vec3, TelemetryError> {
            Ok(Vec3::new(parse(col)?, parse(col + 1)?, parse(col + 2)?))
        };
        let vbar = match rec.get(24).unwrap_or_default() {
            "" => None,
            _ => Some(parse(24)?),
        };
        records.push(TelemetryRecord {
            t: parse(0)?,
            omega: vec_at(1)?,
            sigma_lb: vec_at(4)?,
            sigma_db: vec_at(7)?,
            xi: vec_at(10)?,
            u_eq: vec_at(13)?,
            u_n: vec_at(16)?,
            tau: vec_at(19)?,
            v: parse(22)?,
            vdot: parse(23)?,
            vbar,
        });
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<TelemetryRecord>, TelemetryError> {
    read_csv_from(std::fs::File::open(path)?)
}
