//! `transient`: moving-boundary runs and their sweeps.

use std::fmt::Write as _;
use std::path::Path;

use pem::{
    rst_cubic, simulate, steady_state_check, Geometry, InitialProfiles, RadialState, SimConfig, TractionForm, Trajectory,
    TransientError,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{line_chart, write_text, Table};
use crate::sweep::{map_points, point_configs};

const TRAJECTORY: [&str; 11] = [
    "t",
    "S",
    "S_rate",
    "w_boundary",
    "P_center",
    "load",
    "res_continuity",
    "res_momentum",
    "res_density",
    "res_porosity",
    "max_rate",
];

const PROFILE: [&str; 9] = ["r", "w", "P", "rho", "theta", "w_t", "P_t", "rho_t", "theta_t"];

/// Run settings as used by the CLI: without an explicit interval, states
/// are recorded at 200 evenly spaced times.
fn sim_config(cfg: &RunConfig) -> SimConfig<f64> {
    let mut sim = cfg.sim.clone();
    if sim.output_interval.is_none() {
        sim.output_interval = Some(sim.t_end / 200.0);
    }
    sim
}

fn run_sim(cfg: &RunConfig) -> Result<Trajectory<f64>, TransientError<f64>> {
    let initial = InitialProfiles::uniform(cfg.initial_density, cfg.initial_porosity);
    simulate(&cfg.params, &sim_config(cfg), &initial)
}

/// Steady radius predicted by the stationary analysis, where one applies.
fn predicted_radius(cfg: &RunConfig) -> Option<f64> {
    let p = &cfg.params;
    match (cfg.sim.geometry, cfg.sim.traction_form) {
        (Geometry::Annulus, TractionForm::Annulus) => rst_cubic(p).ok().map(|r| r.r_st),
        (Geometry::Circle, TractionForm::Annulus) => Some(p.outer_radius - p.load / (4.0 * std::f64::consts::PI * (p.lambda + p.mu))),
        _ => None,
    }
}

fn profile_table(st: &RadialState<f64>) -> Table {
    let mut t = Table::new(&PROFILE);
    for i in 0..st.xi.len() {
        t.push(vec![
            st.radius(i),
            st.w[i],
            st.p[i],
            st.rho[i],
            st.theta[i],
            st.velocity[i],
            st.pressure_rate[i],
            st.density_rate[i],
            st.porosity_rate[i],
        ]);
    }
    t
}

fn failure(e: TransientError<f64>, out: &Path) -> Result<CliError, CliError> {
    let mut text = format!("{e}\n");
    if let TransientError::Bounds { state, .. } = &e {
        profile_table(state).write(&out.join("diagnostic_state.csv"))?;
        text.push_str("last rejected state: diagnostic_state.csv\n");
    }
    write_text(&out.join("diagnostic.txt"), &text)?;
    Ok(match e {
        TransientError::InvalidConfig(_) | TransientError::Params(_) | TransientError::InitialProfile { .. } => {
            CliError::Config(e.to_string())
        }
        _ => CliError::Solver(format!("{e} (details in diagnostic.txt)")),
    })
}

pub fn run(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let traj = match run_sim(cfg) {
        Ok(t) => t,
        Err(e) => return Err(failure(e, out)?),
    };
    let p = &cfg.params;
    let mut table = Table::new(&TRAJECTORY);
    for st in &traj.states {
        let rep = steady_state_check(st, p, cfg.sim.steady_tol);
        let [a, b, c, d] = st.residual;
        table.push(vec![st.t, st.s, st.s_rate, st.w_boundary(), st.p_center(), st.load, a, b, c, d, rep.max_rate]);
    }
    table.write(&out.join("trajectory.csv"))?;
    let last = traj.last();
    profile_table(last).write(&out.join("final_profile.csv"))?;
    if cfg.svg {
        let s: Vec<(f64, f64)> = traj.states.iter().map(|st| (st.t, st.s)).collect();
        write_text(&out.join("trajectory.svg"), &line_chart("outer radius", "t", &[("S", s)]))?;
        let w: Vec<(f64, f64)> = (0..last.xi.len()).map(|i| (last.radius(i), last.w[i])).collect();
        let pr: Vec<(f64, f64)> = (0..last.xi.len()).map(|i| (last.radius(i), last.p[i])).collect();
        write_text(&out.join("final_profile.svg"), &line_chart("final profiles", "r", &[("w", w), ("P", pr)]))?;
    }

    let rep = steady_state_check(last, p, cfg.sim.steady_tol);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{} / {} traction, {}, N = {}",
        cfg.sim.geometry,
        cfg.sim.traction_form,
        if cfg.sim.quasi_static { "quasi-static" } else { "full inertia" },
        cfg.sim.cells
    );
    let _ = writeln!(s, "steps: {} accepted, {} rejected", traj.accepted_steps, traj.rejected_steps);
    match traj.reached_steady {
        Some(t) => {
            let _ = writeln!(s, "steady: yes (first at t = {t:.6e})");
        }
        None => {
            let _ = writeln!(s, "steady: no (max rate {:.3e} > {:.1e})", rep.max_rate, cfg.sim.steady_tol);
        }
    }
    let _ = writeln!(s, "S(t_end) = {:.16e}", last.s);
    if let Some(r) = predicted_radius(cfg) {
        let _ = writeln!(
            s,
            "stationary radius = {r:.16e}, gap = {:.3e} of the shrink",
            (last.s - r).abs() / (p.outer_radius - r).abs().max(f64::MIN_POSITIVE)
        );
    }
    let _ = writeln!(
        s,
        "distance to the stationary profile with the same S: w {:.3e}, P {:.3e}",
        rep.displacement_distance, rep.pressure_distance
    );
    Ok(s)
}

const SWEEP: [&str; 11] = [
    "value",
    "S_end",
    "r_stationary",
    "relative_gap",
    "steady",
    "t_steady",
    "distance_w",
    "distance_P",
    "accepted",
    "rejected",
    "status",
];

pub fn run_sweep(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let points = point_configs(cfg)?;
    let results = map_points(&points, |_, c| (run_sim(c), predicted_radius(c)))?;
    let key = &cfg.sweep.as_ref().expect("sweep checked").key;
    let mut table = Table::new(&SWEEP);
    let mut s = format!("transient sweep over {key}: {} points\n", points.len());
    let mut failures = 0;
    for ((v, c), (res, r_pred)) in points.iter().zip(results) {
        let r_pred = r_pred.unwrap_or(f64::NAN);
        match res {
            Ok(traj) => {
                let last = traj.last();
                let rep = steady_state_check(last, &c.params, c.sim.steady_tol);
                let gap = (last.s - r_pred).abs() / (c.params.outer_radius - r_pred).abs();
                table.push(vec![
                    *v,
                    last.s,
                    r_pred,
                    gap,
                    f64::from(u8::from(traj.reached_steady.is_some())),
                    traj.reached_steady.unwrap_or(f64::NAN),
                    rep.displacement_distance,
                    rep.pressure_distance,
                    traj.accepted_steps as f64,
                    traj.rejected_steps as f64,
                    0.0,
                ]);
                let _ = writeln!(s, "{key} = {v:.16e}: S = {:.16e}", last.s);
            }
            Err(e) => {
                failures += 1;
                let nan = f64::NAN;
                table.push(vec![*v, nan, r_pred, nan, 0.0, nan, nan, nan, nan, nan, 3.0]);
                let _ = writeln!(s, "{key} = {v:.16e}: {e}");
            }
        }
    }
    table.write(&out.join("sweep.csv"))?;
    if failures > 0 {
        let _ = writeln!(s, "{failures} point(s) failed (status 3)");
    }
    Ok(s)
}
