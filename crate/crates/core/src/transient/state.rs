//! Configuration and state types of the moving-boundary solver.

use std::fmt;

use crate::field::{first_weights, second_weights, Component, Deriv, FieldError, FieldSource, Point};
use crate::params::Scales;
use crate::scalar::Real;

/// Shape of the loaded body.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Disc `0 ≤ r ≤ S(t)` with symmetry conditions at the centre.
    Circle,
    /// Annulus `r₀ ≤ r ≤ S(t)` with a fixed, drained inner wall.
    Annulus,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Circle => "circle",
            Geometry::Annulus => "annulus",
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Right-hand side of the outer traction condition
/// `λ* w_r + λ w/r = …` at `r = S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TractionForm {
    /// `−F₀/(2πS)`: `F₀` is a total force per unit thickness.
    Annulus,
    /// `p_a − F₀`: `F₀` is a boundary pressure.
    Ring,
}

impl TractionForm {
    pub fn name(self) -> &'static str {
        match self {
            TractionForm::Annulus => "annulus",
            TractionForm::Ring => "ring",
        }
    }

    /// `λ* w_r + λ w/s − rhs` for the given boundary values.
    pub fn residual<T: Real>(self, lame_star: T, lambda: T, w_r: T, w: T, s: T, load: T, p_ambient: T) -> T {
        let lhs = lame_star * w_r + lambda * w / s;
        match self {
            TractionForm::Annulus => lhs + load / (T::two() * T::PI() * s),
            TractionForm::Ring => lhs - (p_ambient - load),
        }
    }
}

impl fmt::Display for TractionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings of a transient run. Times are in physical units.
#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig<T> {
    /// Grid cells `N`; the grid has `N + 1` nodes.
    pub cells: usize,
    /// Initial time step.
    pub dt: T,
    /// Largest time step the controller may grow to.
    pub dt_max: T,
    pub t_end: T,
    /// Drop the inertial terms of the momentum balance.
    pub quasi_static: bool,
    /// Threshold on the dimensionless rates for steady-state detection.
    pub steady_tol: T,
    /// Duration of a linear load ramp from zero (0 means a step load).
    pub load_ramp: T,
    /// Time at which the load is removed, if any.
    pub load_release: Option<T>,
    pub geometry: Geometry,
    pub traction_form: TractionForm,
    /// Spacing of recorded states; `None` records only the first and last.
    pub output_interval: Option<T>,
    /// User `(length, pressure)` scales; `None` uses `(R₀, μ)`.
    pub scales: Option<(T, T)>,
    /// End the run as soon as the steady-state test passes.
    pub stop_when_steady: bool,
    /// Hard limit on accepted plus rejected steps.
    pub max_steps: usize,
}

impl<T: Real> Default for SimConfig<T> {
    fn default() -> Self {
        Self {
            cells: 200,
            dt: T::lit(1e-4),
            dt_max: T::lit(0.05),
            t_end: T::lit(20.0),
            quasi_static: true,
            steady_tol: T::lit(1e-8),
            load_ramp: T::zero(),
            load_release: None,
            geometry: Geometry::Annulus,
            traction_form: TractionForm::Annulus,
            output_interval: None,
            scales: None,
            stop_when_steady: false,
            max_steps: 1_000_000,
        }
    }
}

impl<T: Real> SimConfig<T> {
    pub fn validate(&self) -> Result<(), String> {
        let mut bad = Vec::new();
        if self.cells < 16 {
            bad.push("N must be >= 16".to_string());
        }
        if !(self.dt > T::zero() && self.dt.is_finite()) {
            bad.push("dt must be > 0".into());
        }
        if !(self.dt_max >= self.dt) {
            bad.push("dt_max must be >= dt".into());
        }
        if !(self.t_end > T::zero() && self.t_end.is_finite()) {
            bad.push("t_end must be > 0".into());
        }
        if !(self.steady_tol > T::zero()) {
            bad.push("steady_tol must be > 0".into());
        }
        if !(self.load_ramp >= T::zero()) {
            bad.push("load_ramp must be >= 0".into());
        }
        if let Some(r) = self.load_release {
            if !(r >= T::zero()) {
                bad.push("load_release must be >= 0".into());
            }
        }
        if let Some(o) = self.output_interval {
            if !(o > T::zero()) {
                bad.push("output_interval must be > 0".into());
            }
        }
        if let Some((l, p)) = self.scales {
            if !(l > T::zero() && p > T::zero()) {
                bad.push("scales must be > 0".into());
            }
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(bad.join("; "))
        }
    }

    /// Load at time `t` for a nominal load `f0`.
    pub fn load_at(&self, f0: T, t: T) -> T {
        if let Some(release) = self.load_release {
            if t > release {
                return T::zero();
            }
        }
        if self.load_ramp > T::zero() {
            f0 * (t / self.load_ramp).min(T::one())
        } else {
            f0
        }
    }
}

/// Snapshot of the radial fields on the mapped grid
/// `r = r_in + (S − r_in)ξ`, `ξᵢ = i/N`.
///
/// Rates are Eulerian (at fixed `r`).
#[derive(Clone, Debug, PartialEq)]
pub struct RadialState<T> {
    pub t: T,
    /// Outer boundary position `S`.
    pub s: T,
    pub s_rate: T,
    /// `r₀` for the annulus, 0 for the circle.
    pub r_inner: T,
    pub outer_initial: T,
    pub xi: Vec<T>,
    pub w: Vec<T>,
    pub p: Vec<T>,
    pub rho: Vec<T>,
    pub theta: Vec<T>,
    /// `w_t`.
    pub velocity: Vec<T>,
    /// `w_tt`.
    pub acceleration: Vec<T>,
    pub pressure_rate: Vec<T>,
    pub density_rate: Vec<T>,
    pub porosity_rate: Vec<T>,
    /// Load acting at time `t`.
    pub load: T,
    pub traction_form: TractionForm,
    /// Largest ring-system residuals over interior nodes
    /// (continuity, momentum, density, porosity).
    pub residual: [T; 4],
    /// Accepted steps so far.
    pub step: usize,
}

impl<T: Real> RadialState<T> {
    pub fn cells(&self) -> usize {
        self.xi.len() - 1
    }

    pub fn spacing(&self) -> T {
        (self.s - self.r_inner) / T::from_usize_lossy(self.cells())
    }

    pub fn radius(&self, i: usize) -> T {
        self.r_inner + (self.s - self.r_inner) * self.xi[i]
    }

    pub fn radii(&self) -> Vec<T> {
        (0..self.xi.len()).map(|i| self.radius(i)).collect()
    }

    pub fn geometry(&self) -> Geometry {
        if self.r_inner == T::zero() {
            Geometry::Circle
        } else {
            Geometry::Annulus
        }
    }

    pub fn w_boundary(&self) -> T {
        *self.w.last().expect("non-empty grid")
    }

    /// Pressure at the centre (circle) or at mid-thickness (annulus).
    pub fn p_center(&self) -> T {
        match self.geometry() {
            Geometry::Circle => self.p[0],
            Geometry::Annulus => self.p[self.cells() / 2],
        }
    }

    /// Second-order `∂/∂r` of `values` at node `i`.
    pub fn d1(&self, values: &[T], i: usize) -> T {
        first_weights(i, values.len(), self.spacing()).iter().map(|&(j, c)| c * values[j]).sum()
    }

    /// Second-order `∂²/∂r²` of `values` at node `i`.
    pub fn d2(&self, values: &[T], i: usize) -> T {
        second_weights(i, values.len(), self.spacing()).iter().map(|&(j, c)| c * values[j]).sum()
    }

    /// `λ* w_r + λ w/S − rhs` at the outer boundary.
    pub fn traction_residual(&self, lame_star: T, lambda: T, p_ambient: T) -> T {
        let n = self.cells();
        self.traction_form.residual(lame_star, lambda, self.d1(&self.w, n), self.w[n], self.s, self.load, p_ambient)
    }

    /// Copy with every quantity multiplied by its scale
    /// (`inverse = true` divides instead).
    pub(crate) fn rescaled(&self, sc: &Scales<T>, inverse: bool) -> Self {
        let f = |x: T| if inverse { T::one() / x } else { x };
        let (l, p, t, d) = (f(sc.length), f(sc.pressure), f(sc.time), f(sc.density()));
        let map = |v: &[T], k: T| v.iter().map(|&x| x * k).collect::<Vec<_>>();
        Self {
            t: self.t * t,
            s: self.s * l,
            s_rate: self.s_rate * l / t,
            r_inner: self.r_inner * l,
            outer_initial: self.outer_initial * l,
            xi: self.xi.clone(),
            w: map(&self.w, l),
            p: map(&self.p, p),
            rho: map(&self.rho, d),
            theta: self.theta.clone(),
            velocity: map(&self.velocity, l / t),
            acceleration: map(&self.acceleration, l / (t * t)),
            pressure_rate: map(&self.pressure_rate, p / t),
            density_rate: map(&self.density_rate, d / t),
            porosity_rate: map(&self.porosity_rate, T::one() / t),
            load: match self.traction_form {
                TractionForm::Annulus => self.load * p * l,
                TractionForm::Ring => self.load * p,
            },
            traction_form: self.traction_form,
            residual: self.residual,
            step: self.step,
        }
    }

    /// Field view for the ring residual operator (point `x = r`, nodes
    /// only); see [`StateField`].
    pub fn field(&self) -> StateField<'_, T> {
        StateField { state: self }
    }
}

/// A [`RadialState`] as a [`FieldSource`] in `(t, r)`: spatial
/// derivatives by second-order stencils on the state's grid, time
/// derivatives from the stored Eulerian rates. Queries must hit a grid
/// node; the time coordinate is ignored.
pub struct StateField<'a, T> {
    state: &'a RadialState<T>,
}

impl<T: Real> StateField<'_, T> {
    fn node(&self, r: T) -> Result<usize, FieldError> {
        let st = self.state;
        let s = (r - st.r_inner) / st.spacing();
        let i = s.round();
        if (s - i).abs() > T::lit(1e-8) || i < T::zero() || i > T::from_usize_lossy(st.cells()) {
            return Err(FieldError::OutsideGrid(format!("r={r:?} is not a grid node")));
        }
        Ok(i.to_usize().unwrap_or(0))
    }
}

impl<T: Real> FieldSource<T> for StateField<'_, T> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        let st = self.state;
        if d.y > 0 {
            return Ok(T::zero());
        }
        let i = self.node(p.x)?;
        let (values, rate): (&[T], Option<&[T]>) = match c {
            Component::U1 => (&st.w, Some(&st.velocity)),
            Component::Pressure => (&st.p, Some(&st.pressure_rate)),
            Component::Density => (&st.rho, Some(&st.density_rate)),
            Component::Porosity => (&st.theta, Some(&st.porosity_rate)),
            Component::U2 | Component::Concentration => return Ok(T::zero()),
        };
        let spatial = |v: &[T]| -> Result<T, FieldError> {
            match d.x {
                0 => Ok(v[i]),
                1 => Ok(st.d1(v, i)),
                2 => Ok(st.d2(v, i)),
                _ => Err(FieldError::Unavailable { component: c, deriv: d }),
            }
        };
        match (d.t, rate) {
            (0, _) => spatial(values),
            (1, Some(r)) => spatial(r),
            (2, _) if c == Component::U1 && d.x == 0 => Ok(st.acceleration[i]),
            _ => Err(FieldError::Unavailable { component: c, deriv: d }),
        }
    }
}
