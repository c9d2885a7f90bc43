//! `rst`: the steady-radius cubic, alone or over a sweep.

use std::fmt::Write as _;
use std::path::Path;

use pem::{rst_cubic, ModelParams, QuadraticRoots, RstReport, StationaryError};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;
use crate::sweep::{map_points, point_configs};

const HEADER: [&str; 10] = ["value", "a3", "a2", "a1", "a0", "r_st", "bisection", "residual", "admissible", "cubic_at_r0"];

fn row(value: f64, rep: &Result<RstReport<f64>, StationaryError>, p: &ModelParams<f64>) -> Vec<f64> {
    let c = pem::rst_cubic_coefficients(p);
    match rep {
        Ok(r) => vec![
            value,
            c[0],
            c[1],
            c[2],
            c[3],
            r.r_st,
            r.bisection_root.unwrap_or(f64::NAN),
            r.residual(),
            r.admissible.len() as f64,
            r.value_at_inner,
        ],
        Err(_) => vec![value, c[0], c[1], c[2], c[3], f64::NAN, f64::NAN, f64::NAN, 0.0, f64::NAN],
    }
}

fn sign(x: f64) -> char {
    if x > 0.0 {
        '+'
    } else if x < 0.0 {
        '-'
    } else {
        '0'
    }
}

fn describe(rep: &RstReport<f64>) -> String {
    let mut s = String::new();
    let [a3, a2, a1, a0] = rep.coefficients;
    let _ = writeln!(s, "cubic: ({a3:.16e}) r^3 + ({a2:.16e}) r^2 + ({a1:.16e}) r + ({a0:.16e}) = 0");
    let roots: Vec<String> = rep.roots.iter().map(|r| format!("{:.16e}", r.value)).collect();
    let _ = writeln!(s, "real roots: [{}]", roots.join(", "));
    match rep.critical_points {
        QuadraticRoots::Real(a, b) => {
            let _ = writeln!(s, "critical points: {a:.6e}, {b:.6e}");
        }
        QuadraticRoots::Complex { re, im } => {
            let _ = writeln!(s, "critical points: {re:.6e} +/- {im:.6e}i");
        }
    }
    let _ = writeln!(
        s,
        "bracket: cubic(r0) = {:.6e} ({}), cubic(R0) = {:.6e} ({})",
        rep.value_at_inner,
        sign(rep.value_at_inner),
        rep.value_at_outer,
        sign(rep.value_at_outer)
    );
    if let Some(b) = rep.bisection_root {
        let _ = writeln!(s, "bisection: {b:.16e}");
    }
    let _ = writeln!(s, "r_st = {:.16e}", rep.r_st);
    s
}

pub fn run(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let path = out.join("rst.csv");
    let mut table = Table::new(&HEADER);
    if cfg.sweep.is_none() {
        let rep = rst_cubic(&cfg.params);
        table.push(row(cfg.params.load, &rep, &cfg.params));
        table.write(&path)?;
        return Ok(describe(&rep?));
    }
    let points = point_configs(cfg)?;
    let reports = map_points(&points, |_, c| rst_cubic(&c.params))?;
    let key = &cfg.sweep.as_ref().expect("sweep checked").key;
    let mut s = format!("sweep over {key}: {} points\n", points.len());
    let mut failed = Vec::new();
    for ((v, c), rep) in points.iter().zip(&reports) {
        table.push(row(*v, rep, &c.params));
        match rep {
            Ok(r) => {
                let _ = writeln!(s, "{key} = {v:.16e}: r_st = {:.16e}", r.r_st);
            }
            Err(e) => {
                let _ = writeln!(s, "{key} = {v:.16e}: {e}");
                failed.push(*v);
            }
        }
    }
    table.write(&path)?;
    if !failed.is_empty() {
        return Err(CliError::NoRoot(format!("{} sweep point(s) without an admissible root; rows written with NaN", failed.len())));
    }
    Ok(s)
}
