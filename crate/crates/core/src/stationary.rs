//! Stationary states of the loaded annulus and the steady outer radius.
//!
//! Time-independent radial states satisfy `P = P₀ + C₀ ln r` and
//! `w = C₀/(2λ*)·r ln r + C₁r + C₋₁/r`. The constants follow from the
//! inner boundary data (Dirichlet or zero-flux pressure, `w(r₀) = 0`) and
//! the steady outer data `P(r_st) = p_st`, `w(r_st) = r_st − R₀`.
//!
//! The steady radius `r_st` closes the problem through the traction
//! condition `λ* w_r + λ w/r = −F₀/(2πr)` at `r = r_st`. For the zero-flux
//! case this is the cubic
//! `(λ+μ)r³ + (F₀/4π − (λ+μ)R₀)r² + μr₀² r − (F₀/4π + μR₀)r₀² = 0`;
//! for the Dirichlet case it is transcendental and solved by scanning.

use std::fmt;

use thiserror::Error;

use crate::field::{RadialEmbedding, RadialProfile};
use crate::params::ModelParams;
use crate::residuals::terzaghi_stress_radial;
use crate::roots::{bisect, cubic_eval, cubic_real_roots, quadratic_roots, QuadraticRoots, RealRoot};
use crate::scalar::Real;

/// Which pressure condition holds on the inner boundary `r = r₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InnerCondition {
    /// `P(r₀) = p_a`.
    Dirichlet,
    /// `P_r(r₀) = 0`.
    Neumann,
}

impl InnerCondition {
    pub fn name(self) -> &'static str {
        match self {
            InnerCondition::Dirichlet => "dirichlet",
            InnerCondition::Neumann => "neumann",
        }
    }
}

impl fmt::Display for InnerCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum StationaryError {
    #[error("steady radius {r_st} must exceed the inner radius {r0} (the annulus degenerates)")]
    DegenerateRadius { r_st: String, r0: String },
    #[error("no admissible steady radius in ({lo}, {hi}]; real roots: [{roots}]")]
    NoAdmissibleRoot { lo: String, hi: String, roots: String },
}

fn degenerate<T: Real>(r_st: T, r0: T) -> StationaryError {
    StationaryError::DegenerateRadius { r_st: format!("{r_st:?}"), r0: format!("{r0:?}") }
}

/// Coefficients of a stationary radial state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StationarySolution<T> {
    pub p0: T,
    pub c0: T,
    pub c1: T,
    pub cm1: T,
    pub case: InnerCondition,
    /// `λ + 2μ`, needed to evaluate the `r ln r` term.
    pub lame_star: T,
    pub inner_radius: T,
    pub steady_radius: T,
}

impl<T: Real> StationarySolution<T> {
    fn log_coef(&self) -> T {
        self.c0 / (T::two() * self.lame_star)
    }

    /// `P(r)`.
    pub fn pressure(&self, r: T) -> T {
        self.p0 + self.c0 * r.ln()
    }

    /// `dⁿP/drⁿ` for `n ≤ 2`.
    pub fn pressure_deriv(&self, order: u8, r: T) -> T {
        match order {
            0 => self.pressure(r),
            1 => self.c0 / r,
            2 => -self.c0 / (r * r),
            _ => panic!("order {order} not supported"),
        }
    }

    /// `w(r)`.
    pub fn displacement(&self, r: T) -> T {
        self.log_coef() * r * r.ln() + self.c1 * r + self.cm1 / r
    }

    /// `dⁿw/drⁿ` for `n ≤ 2`.
    pub fn displacement_deriv(&self, order: u8, r: T) -> T {
        let a = self.log_coef();
        match order {
            0 => self.displacement(r),
            1 => a * (r.ln() + T::one()) + self.c1 - self.cm1 / (r * r),
            2 => a / r + T::two() * self.cm1 / (r * r * r),
            _ => panic!("order {order} not supported"),
        }
    }

    /// Diagonal Terzaghi stress `(τ₁₁, τ₂₂)` at `r > 0`.
    pub fn stress(&self, r: T, params: &ModelParams<T>) -> (T, T) {
        terzaghi_stress_radial(self.displacement(r), self.displacement_deriv(1, r), self.pressure(r), r, params)
            .expect("stationary solutions are evaluated at r > 0")
    }

    /// `λ* w_r + λ w/r + F₀/(2πr)` at `r`: zero when the outer traction
    /// condition holds there.
    pub fn traction_residual(&self, r: T, params: &ModelParams<T>) -> T {
        let w = self.displacement(r);
        let w_r = self.displacement_deriv(1, r);
        params.lame_star() * w_r + params.lambda * w / r + params.load / (T::two() * T::PI() * r)
    }

    /// Cartesian embedding with user-supplied density and porosity
    /// profiles (the stationary equations leave both free).
    pub fn embedding(
        &self,
        density: Box<dyn RadialProfile<T>>,
        porosity: Box<dyn RadialProfile<T>>,
    ) -> RadialEmbedding<T> {
        RadialEmbedding {
            displacement: Box::new(DisplacementProfile(*self)),
            pressure: Box::new(PressureProfile(*self)),
            density,
            porosity,
        }
    }
}

/// `w(r)` of a stationary solution as a [`RadialProfile`].
#[derive(Clone, Copy, Debug)]
pub struct DisplacementProfile<T>(pub StationarySolution<T>);

/// `P(r)` of a stationary solution as a [`RadialProfile`].
#[derive(Clone, Copy, Debug)]
pub struct PressureProfile<T>(pub StationarySolution<T>);

impl<T: Real> RadialProfile<T> for DisplacementProfile<T> {
    fn eval(&self, order: u8, r: T) -> T {
        self.0.displacement_deriv(order, r)
    }
}

impl<T: Real> RadialProfile<T> for PressureProfile<T> {
    fn eval(&self, order: u8, r: T) -> T {
        self.0.pressure_deriv(order, r)
    }
}

fn check_radius<T: Real>(params: &ModelParams<T>, r_st: T) -> Result<(), StationaryError> {
    if r_st > params.inner_radius && r_st.is_finite() {
        Ok(())
    } else {
        Err(degenerate(r_st, params.inner_radius))
    }
}

/// Solves `C₁r₀ + C₋₁/r₀ = b₀`, `C₁r_st + C₋₁/r_st = b_st`.
fn displacement_coefficients<T: Real>(r0: T, r_st: T, b0: T, b_st: T) -> (T, T) {
    let det = r0 / r_st - r_st / r0;
    let c1 = (b0 / r_st - b_st / r0) / det;
    let cm1 = (r0 * b_st - r_st * b0) / det;
    (c1, cm1)
}

/// Stationary state with `P(r₀) = p_a`, `w(r₀) = 0`, `P(r_st) = p_st`,
/// `w(r_st) = r_st − R₀`.
pub fn dirichlet_solution<T: Real>(
    params: &ModelParams<T>,
    r_st: T,
) -> Result<StationarySolution<T>, StationaryError> {
    check_radius(params, r_st)?;
    let r0 = params.inner_radius;
    let ls = params.lame_star();
    let c0 = (params.p_steady - params.p_ambient) / (r_st / r0).ln();
    let p0 = params.p_ambient - c0 * r0.ln();
    let a = c0 / (T::two() * ls);
    let (c1, cm1) =
        displacement_coefficients(r0, r_st, -a * r0 * r0.ln(), r_st - params.outer_radius - a * r_st * r_st.ln());
    Ok(StationarySolution {
        p0,
        c0,
        c1,
        cm1,
        case: InnerCondition::Dirichlet,
        lame_star: ls,
        inner_radius: r0,
        steady_radius: r_st,
    })
}

/// Stationary state with `P_r(r₀) = 0`, `w(r₀) = 0`, `P ≡ p_st`,
/// `w(r_st) = r_st − R₀`.
pub fn neumann_solution<T: Real>(
    params: &ModelParams<T>,
    r_st: T,
) -> Result<StationarySolution<T>, StationaryError> {
    check_radius(params, r_st)?;
    let r0 = params.inner_radius;
    let c1 = r_st * (r_st - params.outer_radius) / (r_st * r_st - r0 * r0);
    Ok(StationarySolution {
        p0: params.p_steady,
        c0: T::zero(),
        c1,
        cm1: -c1 * r0 * r0,
        case: InnerCondition::Neumann,
        lame_star: params.lame_star(),
        inner_radius: r0,
        steady_radius: r_st,
    })
}

/// Dispatches on the inner boundary condition.
pub fn stationary_solution<T: Real>(
    params: &ModelParams<T>,
    case: InnerCondition,
    r_st: T,
) -> Result<StationarySolution<T>, StationaryError> {
    match case {
        InnerCondition::Dirichlet => dirichlet_solution(params, r_st),
        InnerCondition::Neumann => neumann_solution(params, r_st),
    }
}

/// Coefficients `[a₃, a₂, a₁, a₀]` of the steady-radius cubic.
pub fn rst_cubic_coefficients<T: Real>(params: &ModelParams<T>) -> [T; 4] {
    let lm = params.lambda + params.mu;
    let q = params.load / (T::lit(4.0) * T::PI());
    let (r0, big_r) = (params.inner_radius, params.outer_radius);
    [lm, q - lm * big_r, params.mu * r0 * r0, -(q + params.mu * big_r) * r0 * r0]
}

/// Everything learned while solving the steady-radius cubic.
#[derive(Clone, Debug, PartialEq)]
pub struct RstReport<T> {
    /// `[a₃, a₂, a₁, a₀]`.
    pub coefficients: [T; 4],
    /// All real roots, ascending, with multiplicities.
    pub roots: Vec<RealRoot<T>>,
    /// Roots of the derivative `3a₃r² + 2a₂r + a₁`.
    pub critical_points: QuadraticRoots<T>,
    /// Real roots inside `(r₀, R₀]`.
    pub admissible: Vec<T>,
    /// The admissible root closest to `R₀`.
    pub r_st: T,
    /// Cubic at `r₀` and at `R₀`.
    pub value_at_inner: T,
    pub value_at_outer: T,
    /// Independent bisection root on `(r₀, R₀)` when the end values
    /// bracket a sign change.
    pub bisection_root: Option<T>,
}

impl<T: Real> RstReport<T> {
    /// `|a₃r³| + |a₂r²| + |a₁r| + |a₀|` at the selected root.
    pub fn scale(&self) -> T {
        let r = self.r_st;
        let [a3, a2, a1, a0] = self.coefficients;
        (a3 * r * r * r).abs() + (a2 * r * r).abs() + (a1 * r).abs() + a0.abs()
    }

    pub fn residual(&self) -> T {
        cubic_eval(self.coefficients, self.r_st)
    }

    /// Whether the end values show the sign pattern `(−, +)`.
    pub fn brackets(&self) -> bool {
        self.value_at_inner < T::zero() && self.value_at_outer > T::zero()
    }
}

fn describe_roots<T: Real>(roots: &[RealRoot<T>]) -> String {
    roots.iter().map(|r| format!("{:?}", r.value)).collect::<Vec<_>>().join(", ")
}

/// Solves the zero-flux steady-radius cubic.
///
/// With `F₀ = 0` the cubic factors as `(r − R₀)((λ+μ)r² + μr₀²)` and the
/// report selects `R₀` exactly. Otherwise the real roots in `(r₀, R₀]` are
/// collected and the one closest to `R₀` is selected.
pub fn rst_cubic<T: Real>(params: &ModelParams<T>) -> Result<RstReport<T>, StationaryError> {
    let c = rst_cubic_coefficients(params);
    let (r0, big_r) = (params.inner_radius, params.outer_radius);
    let roots = cubic_real_roots(c);
    let critical_points = quadratic_roots(T::lit(3.0) * c[0], T::two() * c[1], c[2]);
    let value_at_inner = cubic_eval(c, r0);
    let value_at_outer = cubic_eval(c, big_r);
    let bisection_root = (value_at_inner < T::zero() && value_at_outer > T::zero())
        .then(|| bisect(|r| cubic_eval(c, r), r0, big_r, 200));

    let admissible: Vec<T> = if params.load == T::zero() {
        vec![big_r]
    } else {
        roots.iter().map(|r| r.value).filter(|&r| r > r0 && r <= big_r).collect()
    };
    let Some(&r_st) = admissible.iter().max_by(|a, b| a.partial_cmp(b).unwrap()) else {
        return Err(StationaryError::NoAdmissibleRoot {
            lo: format!("{r0:?}"),
            hi: format!("{big_r:?}"),
            roots: describe_roots(&roots),
        });
    };
    Ok(RstReport {
        coefficients: c,
        roots,
        critical_points,
        admissible,
        r_st,
        value_at_inner,
        value_at_outer,
        bisection_root,
    })
}

/// Roots of the Dirichlet steady-radius condition.
#[derive(Clone, Debug, PartialEq)]
pub struct DirichletRoots<T> {
    /// Every root found on `(r₀, R₀]`, ascending.
    pub roots: Vec<T>,
    /// The root closest to `R₀`.
    pub r_st: T,
    /// Traction residual at `r_st`.
    pub residual: T,
}

/// Number of uniform scan intervals on `(r₀, R₀]`.
pub const DIRICHLET_SCAN_INTERVALS: usize = 256;

/// Solves the Dirichlet steady-radius condition: `r_st ∈ (r₀, R₀]` such
/// that the Dirichlet solution built for `r_st` satisfies the traction
/// condition there.
///
/// The interval is scanned on a uniform grid (plus one node just above
/// `r₀`, where the solution becomes singular) and every sign change is
/// refined by bisection.
pub fn rst_dirichlet<T: Real>(params: &ModelParams<T>) -> Result<DirichletRoots<T>, StationaryError> {
    let (r0, big_r) = (params.inner_radius, params.outer_radius);
    let h = |r: T| -> T {
        dirichlet_solution(params, r).map(|s| s.traction_residual(r, params)).unwrap_or(T::nan())
    };
    let span = big_r - r0;
    let n = DIRICHLET_SCAN_INTERVALS;
    let mut nodes = vec![r0 + T::lit(1e-6) * span];
    nodes.extend((1..=n).map(|i| r0 + span * T::from_usize_lossy(i) / T::from_usize_lossy(n)));
    let values: Vec<T> = nodes.iter().map(|&r| h(r)).collect();

    let mut roots = Vec::new();
    for i in 0..nodes.len() {
        if values[i] == T::zero() {
            roots.push(nodes[i]);
            continue;
        }
        if i + 1 < nodes.len() && values[i + 1] != T::zero() && (values[i] < T::zero()) != (values[i + 1] < T::zero()) {
            roots.push(bisect(h, nodes[i], nodes[i + 1], 200));
        }
    }
    let Some(&r_st) = roots.last() else {
        return Err(StationaryError::NoAdmissibleRoot {
            lo: format!("{r0:?}"),
            hi: format!("{big_r:?}"),
            roots: String::new(),
        });
    };
    Ok(DirichletRoots { roots, r_st, residual: h(r_st) })
}
