//! `stationary`: closed-form profiles of the steady annulus.

use std::fmt::Write as _;
use std::path::Path;

use pem::{rst_cubic, rst_dirichlet, stationary_solution, InnerCondition};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{line_chart, write_text, Table};

pub fn run(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let p = cfg.params;
    let r_st = match (cfg.r_st, cfg.case) {
        (Some(r), _) => r,
        (None, InnerCondition::Neumann) => rst_cubic(&p)?.r_st,
        (None, InnerCondition::Dirichlet) => rst_dirichlet(&p)?.r_st,
    };
    let sol = stationary_solution(&p, cfg.case, r_st)?;
    let r0 = p.inner_radius;
    let m = cfg.samples;
    let mut table = Table::new(&["r", "P", "w", "tau11", "tau22"]);
    let (mut pressure, mut displacement) = (Vec::with_capacity(m), Vec::with_capacity(m));
    for i in 0..m {
        let r = if i + 1 == m { r_st } else { r0 + (r_st - r0) * i as f64 / (m - 1) as f64 };
        let (pr, w) = (sol.pressure(r), sol.displacement(r));
        let (t11, t22) = sol.stress(r, &p);
        table.push(vec![r, pr, w, t11, t22]);
        pressure.push((r, pr));
        displacement.push((r, w));
    }
    table.write(&out.join("profiles.csv"))?;
    if cfg.svg {
        let svg = line_chart(&format!("{} stationary profiles", cfg.case.name()), "r", &[("P", pressure), ("w", displacement)]);
        write_text(&out.join("profiles.svg"), &svg)?;
    }
    let mut s = String::new();
    let _ = writeln!(s, "case: {}", cfg.case.name());
    let _ = writeln!(s, "r_st = {r_st:.16e}");
    let _ = writeln!(s, "w(r_st) = {:.16e}", sol.displacement(r_st));
    let _ = writeln!(s, "traction residual at r_st = {:.3e}", sol.traction_residual(r_st, &p));
    let _ = writeln!(s, "wrote profiles.csv ({m} rows)");
    Ok(s)
}
