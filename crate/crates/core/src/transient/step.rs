//! One implicit time step on the mapped grid.
//!
//! For a trial boundary position `S` the momentum and continuity
//! equations are linear in `(w, P)` and are solved as one banded system
//! with `w_N = S − R₀` imposed. The traction condition is the remaining
//! scalar equation in `S`, solved by the secant method. Density and
//! porosity are then advanced with the new pressure and velocity.

use crate::banded::BandedMatrix;
use crate::field::first_weights;
use crate::params::ModelParams;
use crate::residuals::{residual_ring, RingOptions};
use crate::field::Point;
use crate::scalar::Real;

use super::state::{Geometry, RadialState, TractionForm};

const SECANT_ITERATIONS: usize = 50;

pub(crate) enum StepFailure<T> {
    NonConvergence { iterations: usize, residual: T },
    Singular,
    Collapse { s: T },
    Bounds { node: usize, theta: T, rho: T, state: Box<RadialState<T>> },
}

/// Dimensionless problem data shared by every step.
pub(crate) struct Kernel<T> {
    pub params: ModelParams<T>,
    pub geometry: Geometry,
    pub form: TractionForm,
    pub quasi_static: bool,
    pub cells: usize,
    pub r_in: T,
    /// `(ϱ, Θ)` carried in through the outer boundary when the material
    /// there moves inward relative to it.
    pub inflow: (T, T),
}

fn apply<T: Real>(w: &[(usize, T)], v: &[T]) -> T {
    w.iter().map(|&(j, c)| c * v[j]).sum()
}

struct Mechanics<T> {
    s: T,
    w: Vec<T>,
    p: Vec<T>,
}

impl<T: Real> Kernel<T> {
    fn nodes(&self) -> usize {
        self.cells + 1
    }

    fn spacing(&self, s: T) -> T {
        (s - self.r_in) / T::from_usize_lossy(self.cells)
    }

    fn radii(&self, xi: &[T], s: T) -> Vec<T> {
        xi.iter().map(|&x| self.r_in + (s - self.r_in) * x).collect()
    }

    fn d1(&self, v: &[T], i: usize, h: T) -> T {
        apply(&first_weights(i, self.nodes(), h), v)
    }

    /// Fixed-`r` rate of `new` from its fixed-`ξ` difference quotient.
    fn eulerian(&self, new: &[T], old: &[T], xi: &[T], s_rate: T, dt: T, h: T) -> Vec<T> {
        (0..self.nodes()).map(|i| (new[i] - old[i]) / dt - xi[i] * s_rate * self.d1(new, i, h)).collect()
    }

    pub fn initial_state(&self, s: T, rho: Vec<T>, theta: Vec<T>, load: T) -> RadialState<T> {
        let np = self.nodes();
        let n = T::from_usize_lossy(self.cells);
        let zeros = vec![T::zero(); np];
        RadialState {
            t: T::zero(),
            s,
            s_rate: T::zero(),
            r_inner: self.r_in,
            outer_initial: self.params.outer_radius,
            xi: (0..np).map(|i| T::from_usize_lossy(i) / n).collect(),
            w: zeros.clone(),
            p: vec![self.params.p_ambient; np],
            rho,
            theta,
            velocity: zeros.clone(),
            acceleration: zeros.clone(),
            pressure_rate: zeros.clone(),
            density_rate: zeros.clone(),
            porosity_rate: zeros,
            load,
            traction_form: self.form,
            residual: [T::zero(); 4],
            step: 0,
        }
    }

    fn traction_scale(&self, s: T, load: T) -> T {
        let rhs = match self.form {
            TractionForm::Annulus => load / (T::two() * T::PI() * s),
            TractionForm::Ring => self.params.p_ambient - load,
        };
        self.params.lame_star() + rhs.abs()
    }

    /// Solves for `(w, P)` with the boundary at `s`; returns the fields and
    /// the traction residual.
    fn solve_at(&self, prev: &RadialState<T>, s: T, dt: T, load: T) -> Result<(Vec<T>, Vec<T>, T), StepFailure<T>> {
        let (n, np) = (self.cells, self.nodes());
        let pr = &self.params;
        let (ls, k, pa) = (pr.lame_star(), pr.conductivity, pr.p_ambient);
        let h = self.spacing(s);
        let r = self.radii(&prev.xi, s);
        let xi = &prev.xi;
        let sd = (s - prev.s) / dt;
        let (one, two) = (T::one(), T::two());
        let mut a = BandedMatrix::zeros(2 * np, 5, 4);
        let mut b = vec![T::zero(); 2 * np];

        a.set(0, 0, one);
        match self.geometry {
            Geometry::Annulus => {
                a.set(1, 1, one);
                b[1] = pa;
            }
            Geometry::Circle => {
                for (j, c) in first_weights(0, np, h) {
                    a.add(1, 2 * j + 1, c);
                }
            }
        }
        a.set(2 * n, 2 * n, one);
        b[2 * n] = s - pr.outer_radius;
        a.set(2 * n + 1, 2 * n + 1, one);
        b[2 * n + 1] = pa;

        // Adds `weight · V_j` to row `row`, where
        // `V_j = (w_j − w_j_old)/dt − ξ_j Ṡ ∂_r w(j)` is the new velocity.
        let add_velocity = |a: &mut BandedMatrix<T>, b: &mut [T], row: usize, j: usize, weight: T| {
            a.add(row, 2 * j, weight / dt);
            b[row] += weight * prev.w[j] / dt;
            for (l, cw) in first_weights(j, np, h) {
                a.add(row, 2 * l, -weight * xi[j] * sd * cw);
            }
        };

        let inv2h = one / (two * h);
        let inv_h2 = one / (h * h);
        for i in 1..n {
            let ri = r[i];
            let (m, c) = (2 * i, 2 * i + 1);

            let lap = ls * inv_h2;
            let adv = ls / (two * h * ri);
            a.add(m, 2 * i - 2, lap - adv);
            a.add(m, 2 * i, -two * lap - ls / (ri * ri));
            a.add(m, 2 * i + 2, lap + adv);
            a.add(m, 2 * i - 1, inv2h);
            a.add(m, 2 * i + 3, -inv2h);
            if !self.quasi_static {
                // ϱ a + w_t (ϱ_t + ϱ div w_t) with the velocity factors of
                // the quadratic term taken from the previous step.
                let rho = prev.rho[i];
                let v = prev.velocity[i];
                add_velocity(&mut a, &mut b, m, i, -rho / dt - prev.density_rate[i]);
                for (j, sign) in [(i - 1, -one), (i + 1, one)] {
                    add_velocity(&mut a, &mut b, m, j, -rho * v * sign * r[j] / (two * h * ri));
                }
                b[m] -= rho * v / dt + rho * xi[i] * sd * self.d1(&prev.velocity, i, h);
            }

            for (j, sign) in [(i - 1, -one), (i + 1, one)] {
                add_velocity(&mut a, &mut b, c, j, sign * r[j] / (two * h * ri));
            }
            let kh = k * T::half();
            a.add(c, 2 * i - 1, -kh * (inv_h2 - inv2h / ri));
            a.add(c, 2 * i + 1, kh * two * inv_h2);
            a.add(c, 2 * i + 3, -kh * (inv_h2 + inv2h / ri));
        }

        a.solve(&mut b).map_err(|_| StepFailure::Singular)?;
        let mut w: Vec<T> = (0..np).map(|j| b[2 * j]).collect();
        let mut p: Vec<T> = (0..np).map(|j| b[2 * j + 1]).collect();
        // Pivoting mixes the Dirichlet rows; restore their values exactly.
        w[0] = T::zero();
        w[n] = s - pr.outer_radius;
        p[n] = pa;
        if self.geometry == Geometry::Annulus {
            p[0] = pa;
        }
        let g = self.form.residual(ls, pr.lambda, self.d1(&w, n, h), w[n], s, load, pa);
        if !g.is_finite() {
            return Err(StepFailure::Singular);
        }
        Ok((w, p, g))
    }

    fn mechanics(&self, prev: &RadialState<T>, dt: T, load: T) -> Result<Mechanics<T>, StepFailure<T>> {
        let span = prev.outer_initial - self.r_in;
        let floor = self.r_in + T::lit(1e-9) * span;
        let mut s0 = prev.s + prev.s_rate * dt;
        if !(s0 > floor) {
            s0 = prev.s;
        }
        // Iterate to `strict`; accept `loose` once the secant stalls at
        // roundoff, since S/dt enters the reported rates.
        let scale = self.traction_scale(s0, load);
        let strict = T::lit(1e-13).max(T::lit(16.0) * T::epsilon()) * scale;
        let loose = T::lit(1e-10).max(T::lit(1024.0) * T::epsilon()) * scale;
        let (w, p, g0) = self.solve_at(prev, s0, dt, load)?;
        if g0.abs() <= strict {
            return Ok(Mechanics { s: s0, w, p });
        }
        let mut g0 = g0;
        let mut best = Mechanics { s: s0, w, p };
        let mut s1 = s0 + T::lit(1e-6) * span;
        let (w, p, mut g1) = self.solve_at(prev, s1, dt, load)?;
        if g1.abs() < g0.abs() {
            best = Mechanics { s: s1, w, p };
        } else {
            (s0, s1, g0, g1) = (s1, s0, g1, g0);
        }
        for it in 0..SECANT_ITERATIONS {
            if g1.abs() <= strict {
                return Ok(best);
            }
            let slope = (g1 - g0) / (s1 - s0);
            let mut s2 = s1 - g1 / slope;
            if !s2.is_finite() {
                return Err(StepFailure::NonConvergence { iterations: it, residual: g1 });
            }
            if s2 <= floor {
                s2 = (s1 + self.r_in) * T::half();
                if s2 <= floor {
                    return Err(StepFailure::Collapse { s: s2 });
                }
            }
            let (w2, p2, g2) = self.solve_at(prev, s2, dt, load)?;
            if g2.abs() >= g1.abs() && g1.abs() <= loose {
                return Ok(best);
            }
            let small_step = (s2 - s1).abs() <= T::lit(4.0) * T::epsilon() * s2.abs();
            (s0, g0, s1, g1) = (s1, g1, s2, g2);
            best = Mechanics { s: s2, w: w2, p: p2 };
            if small_step {
                return Ok(best);
            }
        }
        Err(StepFailure::NonConvergence { iterations: SECANT_ITERATIONS, residual: g1 })
    }

    /// `(1/r)(r v)_r` at every node. In the interior this equals
    /// `(k/2)ΔP` through the discrete continuity equation. The end nodes
    /// take the value of the adjacent half cell; a one-sided stencil there
    /// amplifies the kink of an unresolved drainage layer.
    fn dilatation_rate(&self, v: &[T], r: &[T], h: T) -> Vec<T> {
        let n = self.cells;
        let half_cell = |a: usize, b: usize| (r[b] * v[b] - r[a] * v[a]) / (h * (r[a] + r[b]) * T::half());
        (0..=n)
            .map(|i| {
                if i == 0 {
                    half_cell(0, 1)
                } else if i == n {
                    half_cell(n - 1, n)
                } else {
                    (r[i + 1] * v[i + 1] - r[i - 1] * v[i - 1]) / (T::two() * h * r[i])
                }
            })
            .collect()
    }

    /// Implicit update of `q_t + c q_r + kΔP (q − target) = 0` in the
    /// grid frame, with `kΔP = 2 div` and `c` the velocity relative to the
    /// moving nodes.
    ///
    /// Convection is upwinded. Where the outer node sees inflow it takes
    /// `inflow`. The relaxation rate is exponentially
    /// fitted, `(e^{2 div dt} − 1)/dt`, so that `q − target` grows under
    /// compression by the exact factor instead of the backward-Euler one,
    /// which changes sign once `2 div dt < −1`.
    fn transport(&self, old: &[T], target: T, inflow: T, div: &[T], rel: &[T], dt: T, h: T) -> Result<Vec<T>, StepFailure<T>> {
        let np = self.nodes();
        let mut a = BandedMatrix::zeros(np, 1, 1);
        let mut b = vec![T::zero(); np];
        for i in 0..np {
            if i == np - 1 && rel[i] < T::zero() {
                a.add(i, i, T::one());
                b[i] = inflow;
                continue;
            }
            let rate = (T::two() * div[i] * dt).exp_m1() / dt;
            let c = rel[i];
            let mut diag = T::one() / dt + rate;
            if c > T::zero() && i > 0 {
                diag += c / h;
                a.add(i, i - 1, -c / h);
            } else if c < T::zero() && i + 1 < np {
                diag -= c / h;
                a.add(i, i + 1, c / h);
            }
            a.add(i, i, diag);
            b[i] = old[i] / dt + rate * target;
        }
        a.solve(&mut b).map_err(|_| StepFailure::Singular)?;
        Ok(b)
    }

    pub fn step(&self, prev: &RadialState<T>, dt: T, load: T) -> Result<RadialState<T>, StepFailure<T>> {
        let mech = self.mechanics(prev, dt, load)?;
        let (s, n) = (mech.s, self.cells);
        if !(s > self.r_in) {
            return Err(StepFailure::Collapse { s });
        }
        let h = self.spacing(s);
        let r = self.radii(&prev.xi, s);
        let xi = &prev.xi;
        let sd = (s - prev.s) / dt;

        let velocity = self.eulerian(&mech.w, &prev.w, xi, sd, dt, h);
        let pressure_rate = self.eulerian(&mech.p, &prev.p, xi, sd, dt, h);
        let acceleration: Vec<T> = (0..=n)
            .map(|i| (velocity[i] - prev.velocity[i]) / dt - xi[i] * sd * self.d1(&prev.velocity, i, h))
            .collect();

        let div = self.dilatation_rate(&velocity, &r, h);
        let mut rel: Vec<T> = (0..=n).map(|i| velocity[i] - xi[i] * sd).collect();
        rel[0] = T::zero();
        let rho = self.transport(&prev.rho, self.params.rho_fluid, self.inflow.0, &div, &rel, dt, h)?;
        let theta = self.transport(&prev.theta, T::one(), self.inflow.1, &div, &rel, dt, h)?;
        let density_rate = self.eulerian(&rho, &prev.rho, xi, sd, dt, h);
        let porosity_rate = self.eulerian(&theta, &prev.theta, xi, sd, dt, h);

        let mut state = RadialState {
            t: prev.t + dt,
            s,
            s_rate: sd,
            r_inner: self.r_in,
            outer_initial: prev.outer_initial,
            xi: prev.xi.clone(),
            w: mech.w,
            p: mech.p,
            rho,
            theta,
            velocity,
            acceleration,
            pressure_rate,
            density_rate,
            porosity_rate,
            load,
            traction_form: self.form,
            residual: [T::zero(); 4],
            step: prev.step + 1,
        };
        for i in 0..=n {
            let (th, rh) = (state.theta[i], state.rho[i]);
            if !(th > T::zero() && th < T::one() && rh > T::zero()) {
                return Err(StepFailure::Bounds { node: i, theta: th, rho: rh, state: Box::new(state) });
            }
        }
        state.residual = self.ring_residual(&state);
        Ok(state)
    }

    /// Largest ring-system residuals over interior nodes.
    pub fn ring_residual(&self, state: &RadialState<T>) -> [T; 4] {
        let field = state.field();
        let opts = RingOptions { quasi_static: self.quasi_static };
        let mut out = [T::zero(); 4];
        for i in 1..self.cells {
            let pt = Point::new(state.t, state.radius(i), T::zero());
            if let Ok(res) = residual_ring(&field, &self.params, pt, opts) {
                for (o, v) in out.iter_mut().zip(res.as_array()) {
                    *o = o.max(v.abs());
                }
            }
        }
        out
    }
}
