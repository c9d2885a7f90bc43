//! Time integration of the radially symmetric moving-boundary problem.
//!
//! The body occupies `r_in ≤ r ≤ S(t)` and is mapped onto a fixed grid
//! `ξ ∈ [0, 1]` by `r = r_in + (S − r_in)ξ`. Time derivatives at fixed `ξ`
//! carry the frame term `ξṠ ∂_r`. Each step is backward Euler in the
//! displacement, pressure, density and porosity; the velocity-squared
//! terms of the momentum balance lag one step. The boundary position is
//! fixed by the traction condition together with `w(S) = S − R₀`.
//!
//! Everything is solved in the units of [`Scales`] and reported in the
//! caller's units.

mod state;
mod step;

use thiserror::Error;

use crate::field::{first_weights, RadialProfile, Uniform};
use crate::params::{ModelParams, ParamError, Scales};
use crate::scalar::Real;
use crate::stationary::{neumann_solution, StationarySolution};

pub use state::{Geometry, RadialState, SimConfig, StateField, TractionForm};
use step::{Kernel, StepFailure};

/// Initial density and porosity as functions of the radius.
pub struct InitialProfiles<T: Real> {
    pub density: Box<dyn RadialProfile<T>>,
    pub porosity: Box<dyn RadialProfile<T>>,
}

impl<T: Real> InitialProfiles<T> {
    pub fn uniform(density: T, porosity: T) -> Self {
        Self { density: Box::new(Uniform(density)), porosity: Box::new(Uniform(porosity)) }
    }
}

#[derive(Debug, Error)]
pub enum TransientError<T: Real> {
    #[error("invalid simulation settings: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("initial profiles violate 0 < porosity < 1, density > 0 at r = {r}: porosity {theta}, density {rho}")]
    InitialProfile { r: T, theta: T, rho: T },
    #[error("boundary solve failed at t = {t} with dt = {dt}: {iterations} iterations, traction residual {residual:e}")]
    NonConvergence { t: T, dt: T, iterations: usize, residual: T },
    #[error("porosity or density left bounds at t = {t}, node {node}: porosity {theta}, density {rho}")]
    Bounds { t: T, node: usize, theta: T, rho: T, state: Box<RadialState<T>> },
    #[error("outer boundary collapsed onto the inner one at t = {t} (S = {s})")]
    Collapse { t: T, s: T },
    #[error("step limit {steps} reached at t = {t}")]
    StepLimit { t: T, steps: usize },
}

/// Result of [`simulate`]. States are in the caller's units.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory<T> {
    pub states: Vec<RadialState<T>>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    /// First time at which the steady-state test passed.
    pub reached_steady: Option<T>,
    pub scales: Scales<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn last(&self) -> &RadialState<T> {
        self.states.last().expect("a trajectory holds at least the initial state")
    }
}

const GROWTH: f64 = 1.25;

/// Integrates from the unloaded state `w = 0`, `P = p_a`, `S = R₀`.
///
/// The step grows by 25% after each accepted step up to `dt_max`, is cut
/// to land on output times, the release time and `t_end`, and is halved
/// when the boundary solve fails or a step drives porosity or density out
/// of bounds. A step load opens drainage layers thinner than a cell, and
/// too long a first step overshoots the compaction inside them.
pub fn simulate<T: Real>(
    params: &ModelParams<T>,
    config: &SimConfig<T>,
    initial: &InitialProfiles<T>,
) -> Result<Trajectory<T>, TransientError<T>> {
    let params = params.validate()?;
    config.validate().map_err(TransientError::InvalidConfig)?;
    let scales = match config.scales {
        Some((l, p)) => Scales::new(&params, l, p),
        None => Scales::natural(&params),
    };
    let mut nd = scales.nondimensionalize(&params);
    if config.traction_form == TractionForm::Ring {
        nd.load = params.load / scales.pressure;
    }
    let r_in = match config.geometry {
        Geometry::Annulus => nd.inner_radius,
        Geometry::Circle => T::zero(),
    };
    let n = T::from_usize_lossy(config.cells);
    let mut rho0 = Vec::with_capacity(config.cells + 1);
    let mut theta0 = Vec::with_capacity(config.cells + 1);
    for i in 0..=config.cells {
        let r = (r_in + (nd.outer_radius - r_in) * T::from_usize_lossy(i) / n) * scales.length;
        let (rho, theta) = (initial.density.eval(0, r), initial.porosity.eval(0, r));
        if !(theta > T::zero() && theta < T::one() && rho > T::zero()) {
            return Err(TransientError::InitialProfile { r, theta, rho });
        }
        rho0.push(rho / scales.density());
        theta0.push(theta);
    }

    let kernel = Kernel {
        params: nd,
        geometry: config.geometry,
        form: config.traction_form,
        quasi_static: config.quasi_static,
        cells: config.cells,
        r_in,
        inflow: (rho0[config.cells], theta0[config.cells]),
    };

    let ts = scales.time;
    let t_end = config.t_end / ts;
    let dt_max = config.dt_max / ts;
    let release = config.load_release.map(|r| r / ts);
    let interval = config.output_interval.map(|o| o / ts);
    let load_at = |t: T| config.load_at(kernel.params.load, t * ts);

    let mut state = kernel.initial_state(nd.outer_radius, rho0, theta0, load_at(T::zero()));
    let mut out = Trajectory {
        states: vec![state.rescaled(&scales, false)],
        accepted_steps: 0,
        rejected_steps: 0,
        reached_steady: None,
        scales,
    };
    // Output times are `k·interval`; stops closer than `snap` coincide.
    let snap = t_end * T::lit(1e-10);
    let mut output_index = 1usize;
    let output_time = |k: usize| interval.map(|o| o * T::from_usize_lossy(k));
    let mut dt = config.dt / ts;
    let min_dt = dt * T::lit(1e-12).max(T::epsilon() * T::lit(16.0));

    while state.t < t_end - snap {
        if out.accepted_steps + out.rejected_steps >= config.max_steps {
            return Err(TransientError::StepLimit { t: state.t * ts, steps: config.max_steps });
        }
        let mut target = t_end;
        if let Some(o) = output_time(output_index) {
            target = target.min(o);
        }
        if let Some(r) = release {
            if state.t < r - snap {
                target = target.min(r);
            }
        }
        if t_end - target <= snap {
            target = t_end;
        }
        // Split the approach to a stop evenly so no sliver step is left.
        let gap = target - state.t;
        let clamped = dt * T::lit(1.01) >= gap;
        let h = if clamped {
            gap
        } else if dt * T::two() > gap {
            gap * T::half()
        } else {
            dt
        };
        match kernel.step(&state, h, load_at(state.t + h)) {
            Ok(mut next) => {
                if clamped {
                    next.t = target;
                }
                state = next;
                out.accepted_steps += 1;
                if !clamped {
                    dt = (dt * T::lit(GROWTH)).min(dt_max);
                }
                let physical = state.rescaled(&scales, false);
                let steady = steady_state_check(&physical, &params, config.steady_tol).is_steady;
                if steady && out.reached_steady.is_none() {
                    out.reached_steady = Some(physical.t);
                }
                let at_output = output_time(output_index).is_some_and(|o| state.t >= o - snap);
                while output_time(output_index).is_some_and(|o| state.t >= o - snap) {
                    output_index += 1;
                }
                let stop = steady && config.stop_when_steady;
                if at_output || stop || state.t >= t_end - snap {
                    out.states.push(physical);
                }
                if stop {
                    break;
                }
            }
            Err(StepFailure::NonConvergence { iterations, residual }) => {
                out.rejected_steps += 1;
                dt = h * T::half();
                if dt < min_dt {
                    return Err(TransientError::NonConvergence { t: state.t * ts, dt: h * ts, iterations, residual });
                }
            }
            Err(StepFailure::Singular) => {
                out.rejected_steps += 1;
                dt = h * T::half();
                if dt < min_dt {
                    return Err(TransientError::NonConvergence {
                        t: state.t * ts,
                        dt: h * ts,
                        iterations: 0,
                        residual: T::nan(),
                    });
                }
            }
            Err(StepFailure::Collapse { s }) => {
                return Err(TransientError::Collapse { t: (state.t + h) * ts, s: s * scales.length });
            }
            Err(StepFailure::Bounds { node, theta, rho, state: bad }) => {
                out.rejected_steps += 1;
                dt = h * T::half();
                if dt >= min_dt {
                    continue;
                }
                let bad = bad.rescaled(&scales, false);
                return Err(TransientError::Bounds {
                    t: bad.t,
                    node,
                    theta,
                    rho: rho * scales.density(),
                    state: Box::new(bad),
                });
            }
        }
    }
    Ok(out)
}

/// Outcome of [`steady_state_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyReport<T> {
    pub is_steady: bool,
    /// Largest dimensionless rate among `Ṡ`, `w_t`, `P_t`, `ϱ_t`, `Θ_t`.
    pub max_rate: T,
    /// Dimensionless outer traction residual.
    pub traction_residual: T,
    /// `max |w − w_ref|` against the stationary state with the same `S`.
    pub displacement_distance: T,
    /// `max |P − P_ref|`.
    pub pressure_distance: T,
    pub reference: StationarySolution<T>,
}

/// Tests whether `state` (in the caller's units) is at rest and measures
/// its distance from the stationary state with the current outer radius,
/// zero pressure flux and `P ≡ p_a`. Rates are made dimensionless with
/// [`Scales::natural`].
pub fn steady_state_check<T: Real>(state: &RadialState<T>, params: &ModelParams<T>, steady_tol: T) -> SteadyReport<T> {
    let sc = Scales::natural(params);
    let nd = state.rescaled(&sc, true);
    let mut max_rate = nd.s_rate.abs();
    for v in [&nd.velocity, &nd.pressure_rate, &nd.density_rate, &nd.porosity_rate] {
        for x in v.iter() {
            max_rate = max_rate.max(x.abs());
        }
    }
    let mut np = sc.nondimensionalize(params);
    if state.traction_form == TractionForm::Ring {
        np.load = params.load / sc.pressure;
    }
    let traction_residual = nd.traction_residual(np.lame_star(), np.lambda, np.p_ambient);

    let mut ref_params = *params;
    ref_params.inner_radius = state.r_inner;
    ref_params.p_steady = params.p_ambient;
    let reference = neumann_solution(&ref_params, state.s).expect("outer radius exceeds the inner one");
    let mut dw = T::zero();
    let mut dp = T::zero();
    for i in 0..state.xi.len() {
        let r = state.radius(i);
        let w_ref = if r == T::zero() { T::zero() } else { reference.displacement(r) };
        dw = dw.max((state.w[i] - w_ref).abs());
        dp = dp.max((state.p[i] - reference.pressure(r)).abs());
    }
    SteadyReport {
        is_steady: max_rate <= steady_tol,
        max_rate,
        traction_residual,
        displacement_distance: dw,
        pressure_distance: dp,
        reference,
    }
}

/// Fixed-`r` rate of a nodal quantity between two states on the same
/// `ξ` grid: `(q − q_old)/dt − ξṠ ∂_r q` with `Ṡ = (S − S_old)/dt`.
pub fn eulerian_rate<T: Real>(new: &RadialState<T>, q_new: &[T], old: &RadialState<T>, q_old: &[T]) -> Vec<T> {
    let dt = new.t - old.t;
    let sd = (new.s - old.s) / dt;
    (0..q_new.len()).map(|i| (q_new[i] - q_old[i]) / dt - new.xi[i] * sd * new.d1(q_new, i)).collect()
}

/// The two sides of the integrated continuity equation
/// `∫(r w_t)_r dr = (k/2)∫(r P_r)_r dr`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VolumeBalance<T> {
    /// `S w_t(S) − r_in w_t(r_in)`.
    pub dilatation_rate: T,
    /// `(k/2)(S P_r(S) − r_in P_r(r_in))`.
    pub pressure_flux: T,
}

impl<T: Real> VolumeBalance<T> {
    pub fn imbalance(&self) -> T {
        (self.dilatation_rate - self.pressure_flux).abs()
    }
}

pub fn volume_balance<T: Real>(state: &RadialState<T>, params: &ModelParams<T>) -> VolumeBalance<T> {
    let n = state.cells();
    let h = state.spacing();
    let d1 = |i| -> T { first_weights(i, n + 1, h).iter().map(|&(j, c)| c * state.p[j]).sum() };
    VolumeBalance {
        dilatation_rate: state.s * state.velocity[n] - state.r_inner * state.velocity[0],
        pressure_flux: params.conductivity * T::half() * (state.s * d1(n) - state.r_inner * d1(0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_params() -> ModelParams<f64> {
        ModelParams { load: 16.0 * std::f64::consts::PI, ..ModelParams::default() }
    }

    fn quick(cells: usize) -> SimConfig<f64> {
        SimConfig { cells, dt: 1e-3, dt_max: 0.5, t_end: 40.0, ..SimConfig::default() }
    }

    #[test]
    fn config_validation() {
        let mut c = SimConfig::<f64>::default();
        assert!(c.validate().is_ok());
        c.cells = 8;
        c.dt = 0.0;
        let msg = c.validate().unwrap_err();
        assert!(msg.contains("N must be") && msg.contains("dt must be"), "{msg}");
    }

    #[test]
    fn load_schedule() {
        let c = SimConfig { load_ramp: 2.0, load_release: Some(5.0), ..SimConfig::<f64>::default() };
        assert_eq!(c.load_at(4.0, 1.0), 2.0);
        assert_eq!(c.load_at(4.0, 3.0), 4.0);
        assert_eq!(c.load_at(4.0, 5.0), 4.0);
        assert_eq!(c.load_at(4.0, 5.5), 0.0);
    }

    #[test]
    fn unloaded_body_stays_at_rest() {
        let params = ModelParams::<f64>::default();
        let cfg = SimConfig { t_end: 1.0, output_interval: Some(0.25), ..quick(32) };
        let traj = simulate(&params, &cfg, &InitialProfiles::uniform(1.0, 0.5)).unwrap();
        assert_eq!(traj.states.len(), 5);
        for st in &traj.states {
            assert!((st.s - 2.0).abs() < 1e-10);
            assert!(st.w.iter().all(|w| w.abs() < 1e-10));
        }
    }

    #[test]
    fn annulus_relaxes_to_the_cubic_root() {
        let params = reference_params();
        let traj = simulate(&params, &quick(64), &InitialProfiles::uniform(1.005, 0.995)).unwrap();
        let last = traj.last();
        let r_st = crate::stationary::rst_cubic(&params).unwrap().r_st;
        assert!((last.s - r_st).abs() < 0.01 * (2.0 - r_st), "{} vs {r_st}", last.s);
        assert!(traj.reached_steady.is_some());
        let w_n = last.w_boundary();
        assert!((w_n - (last.s - 2.0)).abs() < 1e-12);
    }

    #[test]
    fn injected_stationary_state_is_steady() {
        let params = reference_params();
        let r_st = crate::stationary::rst_cubic(&params).unwrap().r_st;
        let sol = neumann_solution(&params, r_st).unwrap();
        let traj = simulate(&ModelParams::<f64>::default(), &SimConfig { t_end: 1e-3, ..quick(40) }, &InitialProfiles::uniform(1.0, 0.5))
            .unwrap();
        let mut st = traj.states[0].clone();
        st.s = r_st;
        st.load = params.load;
        for i in 0..st.xi.len() {
            st.w[i] = sol.displacement(st.radius(i));
        }
        let rep = steady_state_check(&st, &params, 1e-8);
        assert!(rep.is_steady);
        assert!(rep.displacement_distance < 1e-14);
        assert!(rep.traction_residual.abs() < 1e-2);
    }

    #[test]
    fn state_field_reads_rates() {
        use crate::field::{Component, Deriv, FieldSource, Point};
        let params = reference_params();
        let traj = simulate(&params, &SimConfig { t_end: 0.05, ..quick(32) }, &InitialProfiles::uniform(1.005, 0.995)).unwrap();
        let st = traj.last();
        let f = st.field();
        let p = Point::new(0.0, st.radius(5), 0.0);
        assert_eq!(f.derivative(Component::U1, Deriv::T, p).unwrap(), st.velocity[5]);
        assert_eq!(f.derivative(Component::U1, Deriv::TT, p).unwrap(), st.acceleration[5]);
        assert!(f.derivative(Component::U1, Deriv::VALUE, Point::new(0.0, st.radius(5) + 1e-3, 0.0)).is_err());
    }
}
