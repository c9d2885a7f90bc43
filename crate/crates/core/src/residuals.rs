//! Pointwise residuals of the governing systems, flux diagnostics and the
//! radial Terzaghi stress.
//!
//! Every residual is `(left-hand side) − (right-hand side)` of the balance
//! law, with `p* = p − σ₁c` substituted internally. An exact solution
//! therefore has zero residual, which makes these operators the test
//! oracle for everything else in the crate.
//!
//! The continuity equation is always reported in the form
//! `2∇·u_t − kΔp*`; the anisotropic system states the same law divided by
//! two, so the anisotropic operator scales it back to keep both operators
//! directly comparable.

use std::fmt;

use thiserror::Error;

use crate::field::{Component, Deriv, FieldError, FieldSource, Point};
use crate::params::{mixture_fields, AnisotropicModuli, MixtureError, ModelParams};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Equation {
    Continuity,
    Momentum1,
    Momentum2,
    Density,
    Porosity,
    Solute,
}

impl Equation {
    pub const ALL: [Equation; 6] = [
        Equation::Continuity,
        Equation::Momentum1,
        Equation::Momentum2,
        Equation::Density,
        Equation::Porosity,
        Equation::Solute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Equation::Continuity => "continuity",
            Equation::Momentum1 => "momentum1",
            Equation::Momentum2 => "momentum2",
            Equation::Density => "density",
            Equation::Porosity => "porosity",
            Equation::Solute => "solute",
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Residuals of the six-equation systems, indexed by [`Equation`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualVector<T> {
    pub values: [T; 6],
}

impl<T: Real> ResidualVector<T> {
    pub fn get(&self, eq: Equation) -> T {
        self.values[eq as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Equation, T)> + '_ {
        Equation::ALL.iter().map(move |&eq| (eq, self.get(eq)))
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

/// Residuals of the four-equation ring system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RingResidual<T> {
    pub continuity: T,
    pub momentum: T,
    pub density: T,
    pub porosity: T,
}

impl<T: Real> RingResidual<T> {
    pub fn as_array(&self) -> [T; 4] {
        [self.continuity, self.momentum, self.density, self.porosity]
    }

    pub fn max_abs(&self) -> T {
        self.as_array().iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ResidualError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("radius {0} is outside the domain of the polar operator")]
    Radius(String),
    #[error("mixture relation failed: {0}")]
    Mixture(String),
}

impl<T: Real> From<MixtureError<T>> for ResidualError {
    fn from(e: MixtureError<T>) -> Self {
        ResidualError::Mixture(e.to_string())
    }
}

/// Derivatives shared by the isotropic and anisotropic Cartesian systems.
struct Cartesian<T> {
    u1: [T; 7],
    u2: [T; 7],
    ps: [T; 4],
    rho: [T; 4],
    theta: [T; 4],
    c: [T; 6],
}

// Slot layout for displacement jets.
const T_: usize = 0;
const TT: usize = 1;
const TX: usize = 2;
const TY: usize = 3;
const XX: usize = 4;
const YY: usize = 5;
const XY: usize = 6;

const DISPLACEMENT_DERIVS: [Deriv; 7] =
    [Deriv::T, Deriv::TT, Deriv::TX, Deriv::TY, Deriv::XX, Deriv::YY, Deriv::XY];

fn jet<T: Real, F: FieldSource<T> + ?Sized, const N: usize>(
    field: &F,
    c: Component,
    derivs: [Deriv; N],
    p: Point<T>,
) -> Result<[T; N], FieldError> {
    let mut out = [T::zero(); N];
    for (slot, d) in out.iter_mut().zip(derivs) {
        *slot = field.derivative(c, d, p)?;
    }
    Ok(out)
}

fn gather<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    p: Point<T>,
) -> Result<Cartesian<T>, FieldError> {
    let disp = |comp| jet(field, comp, DISPLACEMENT_DERIVS, p);
    let spatial = [Deriv::X, Deriv::Y, Deriv::XX, Deriv::YY];
    let pr = jet(field, Component::Pressure, spatial, p)?;
    let c = jet(
        field,
        Component::Concentration,
        [Deriv::VALUE, Deriv::T, Deriv::X, Deriv::Y, Deriv::XX, Deriv::YY],
        p,
    )?;
    let s = params.osmotic;
    // p* = p − σ₁c: x, y, xx, yy
    let ps = [pr[0] - s * c[2], pr[1] - s * c[3], pr[2] - s * c[4], pr[3] - s * c[5]];
    let scalar = [Deriv::VALUE, Deriv::T, Deriv::X, Deriv::Y];
    Ok(Cartesian {
        u1: disp(Component::U1)?,
        u2: disp(Component::U2)?,
        ps,
        rho: jet(field, Component::Density, scalar, p)?,
        theta: jet(field, Component::Porosity, scalar, p)?,
        c,
    })
}

/// Everything except the elastic divergence terms, which depend on the
/// stress law.
fn assemble<T: Real>(k: &Cartesian<T>, elastic: [T; 2], params: &ModelParams<T>) -> ResidualVector<T> {
    let two = T::two();
    let lap_ps = k.ps[2] + k.ps[3];
    let div_t = k.u1[TX] + k.u2[TY];
    let (v1, v2) = (k.u1[T_], k.u2[T_]);
    let [rho, rho_t, rho_x, rho_y] = k.rho;
    let [th, th_t, th_x, th_y] = k.theta;
    let [c, c_t, c_x, c_y, c_xx, c_yy] = k.c;
    let kc = params.conductivity;
    let growth = rho_t + rho * div_t;

    let continuity = two * div_t - kc * lap_ps;
    let momentum1 = rho * k.u1[TT] + v1 * growth - (elastic[0] - k.ps[0]);
    let momentum2 = rho * k.u2[TT] + v2 * growth - (elastic[1] - k.ps[1]);
    let density = rho_t + v1 * rho_x + v2 * rho_y - kc * (params.rho_fluid - rho) * lap_ps;
    let porosity = th_t + v1 * th_x + v2 * th_y - kc * (T::one() - th) * lap_ps;
    // (cθ)_t + u_t·∇(cθ) = D Δc + k(S − θ) c Δp* + kS ∇c·∇p*
    let ct_t = c_t * th + c * th_t;
    let ct_x = c_x * th + c * th_x;
    let ct_y = c_y * th + c * th_y;
    let solute = ct_t + v1 * ct_x + v2 * ct_y
        - params.diffusivity * (c_xx + c_yy)
        - kc * (params.sieving - th) * c * lap_ps
        - kc * params.sieving * (c_x * k.ps[0] + c_y * k.ps[1]);
    ResidualVector { values: [continuity, momentum1, momentum2, density, porosity, solute] }
}

/// Residuals of the isotropic Cartesian system at `point`.
pub fn residual_cartesian_iso<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    point: Point<T>,
) -> Result<ResidualVector<T>, ResidualError> {
    let k = gather(field, params, point)?;
    let ls = params.lame_star();
    let mu = params.mu;
    let elastic = [
        ls * k.u1[XX] + mu * k.u1[YY] + (ls - mu) * k.u2[XY],
        ls * k.u2[YY] + mu * k.u2[XX] + (ls - mu) * k.u1[XY],
    ];
    Ok(assemble(&k, elastic, params))
}

/// Elastic divergence `∇·(Eε)` for the anisotropic stiffness matrix.
pub fn anisotropic_elastic<T: Real>(e: &AnisotropicModuli<T>, g1: [T; 3], g2: [T; 3]) -> [T; 2] {
    // g = [xx, yy, xy]
    let two = T::two();
    [
        e.e11 * g1[0] + e.e33 * g1[1] + e.e13 * g2[0] + e.e23 * g2[1]
            + two * e.e13 * g1[2]
            + (e.e12 + e.e33) * g2[2],
        e.e22 * g2[1] + e.e33 * g2[0] + e.e13 * g1[0] + e.e23 * g1[1]
            + two * e.e23 * g2[2]
            + (e.e12 + e.e33) * g1[2],
    ]
}

/// Residuals of the anisotropic Cartesian system at `point`.
pub fn residual_cartesian_aniso<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    moduli: &AnisotropicModuli<T>,
    params: &ModelParams<T>,
    point: Point<T>,
) -> Result<ResidualVector<T>, ResidualError> {
    let k = gather(field, params, point)?;
    let elastic = anisotropic_elastic(
        moduli,
        [k.u1[XX], k.u1[YY], k.u1[XY]],
        [k.u2[XX], k.u2[YY], k.u2[XY]],
    );
    Ok(assemble(&k, elastic, params))
}

/// Residuals of the polar system in `(t, r, φ)` (point coordinates
/// `x = r`, `y = φ`; components `U1 = w¹`, `U2 = w²`).
///
/// Relation to the Cartesian residual `R` at the same physical point:
/// continuity `= (r/2)·R_c`, the momentum pair is `R_m` rotated into the
/// polar frame, and the three transport equations are `r·R`.
pub fn residual_radial_full<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    point: Point<T>,
) -> Result<ResidualVector<T>, ResidualError> {
    let r = point.x;
    if !(r > T::zero()) {
        return Err(ResidualError::Radius(format!("{r:?}")));
    }
    let w1 = jet(field, Component::U1, FULL_DISP, point)?;
    let w2 = jet(field, Component::U2, FULL_DISP, point)?;
    let pr = jet(field, Component::Pressure, [Deriv::X, Deriv::Y, Deriv::XX, Deriv::YY], point)?;
    let cj = jet(
        field,
        Component::Concentration,
        [Deriv::VALUE, Deriv::T, Deriv::X, Deriv::Y, Deriv::XX, Deriv::YY],
        point,
    )?;
    let scalar = [Deriv::VALUE, Deriv::T, Deriv::X, Deriv::Y];
    let [rho, rho_t, rho_r, rho_p] = jet(field, Component::Density, scalar, point)?;
    let [th, th_t, th_r, th_p] = jet(field, Component::Porosity, scalar, point)?;
    let [c, c_t, c_r, c_p, c_rr, c_pp] = cj;
    let s = params.osmotic;
    let (ps_r, ps_p, ps_rr, ps_pp) = (pr[0] - s * c_r, pr[1] - s * c_p, pr[2] - s * c_rr, pr[3] - s * c_pp);

    let (kc, ls, mu) = (params.conductivity, params.lame_star(), params.mu);
    let two = T::two();
    let r2 = r * r;
    // (rP_r)_r + P_φφ/r
    let lap_r = ps_r + r * ps_rr + ps_pp / r;

    // w jets: [t, tt, r, φ, rr, φφ, rφ, tr, tφ, value]
    let [w1_t, w1_tt, w1_r, w1_p, w1_rr, w1_pp, w1_rp, w1_tr, _, w1_v] = w1;
    let [w2_t, w2_tt, w2_r, w2_p, w2_rr, w2_pp, w2_rp, _, w2_tp, w2_v] = w2;

    let continuity = w1_t + r * w1_tr + w2_tp - kc / (two * r) * ps_pp - kc / two * (ps_r + r * ps_rr);
    let growth = rho_t + rho * w1_tr + rho * w1_t / r + rho * w2_tp / r;
    let m1_rhs = -ps_r + ls * w1_rr + ls / r * w1_r - ls / r2 * w1_v
        + ((ls - mu) * r * w2_rp + mu * w1_pp - (ls + mu) * w2_p) / r2;
    let m2_rhs = -ps_p / r + mu * w2_rr + mu / r * w2_r - mu / r2 * w2_v
        + ((ls - mu) * r * w1_rp + ls * w2_pp + (ls + mu) * w1_p) / r2;
    let momentum1 = w1_t * growth + rho * w1_tt - m1_rhs;
    let momentum2 = w2_t * growth + rho * w2_tt - m2_rhs;
    let density = r * rho_t + r * rho_r * w1_t + rho_p * w2_t - kc * (params.rho_fluid - rho) * lap_r;
    let porosity = r * th_t + r * th_r * w1_t + th_p * w2_t - kc * (T::one() - th) * lap_r;
    let (ct_t, ct_r, ct_p) = (c_t * th + c * th_t, c_r * th + c * th_r, c_p * th + c * th_p);
    let solute = r * ct_t + r * ct_r * w1_t + ct_p * w2_t
        - params.diffusivity * (c_pp / r + c_r + r * c_rr)
        - kc * (params.sieving - th) * c * lap_r
        - kc * params.sieving / r * (c_p * ps_p + r2 * c_r * ps_r);
    Ok(ResidualVector { values: [continuity, momentum1, momentum2, density, porosity, solute] })
}

const FULL_DISP: [Deriv; 10] = [
    Deriv::T,
    Deriv::TT,
    Deriv::X,
    Deriv::Y,
    Deriv::XX,
    Deriv::YY,
    Deriv::XY,
    Deriv::TX,
    Deriv::TY,
    Deriv::VALUE,
];

/// Residuals of the `φ`-independent polar system. Angular derivatives are
/// never queried.
pub fn residual_radial_reduced<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    point: Point<T>,
) -> Result<ResidualVector<T>, ResidualError> {
    let r = point.x;
    if !(r > T::zero()) {
        return Err(ResidualError::Radius(format!("{r:?}")));
    }
    let disp = [Deriv::VALUE, Deriv::T, Deriv::TT, Deriv::X, Deriv::XX, Deriv::TX];
    let [w1, w1_t, w1_tt, w1_r, w1_rr, w1_tr] = jet(field, Component::U1, disp, point)?;
    let [w2, w2_t, w2_tt, w2_r, w2_rr, _] = jet(field, Component::U2, disp, point)?;
    let [p_r, p_rr] = jet(field, Component::Pressure, [Deriv::X, Deriv::XX], point)?;
    let radial = [Deriv::VALUE, Deriv::T, Deriv::X, Deriv::XX];
    let [c, c_t, c_r, c_rr] = jet(field, Component::Concentration, radial, point)?;
    let [rho, rho_t, rho_r] = jet(field, Component::Density, [Deriv::VALUE, Deriv::T, Deriv::X], point)?;
    let [th, th_t, th_r] = jet(field, Component::Porosity, [Deriv::VALUE, Deriv::T, Deriv::X], point)?;
    let s = params.osmotic;
    let (ps_r, ps_rr) = (p_r - s * c_r, p_rr - s * c_rr);
    let (kc, ls, mu) = (params.conductivity, params.lame_star(), params.mu);
    let two = T::two();
    let r2 = r * r;
    let lap_r = ps_r + r * ps_rr;
    let growth = rho_t + rho * w1_tr + rho * w1_t / r;

    let continuity = w1_t + r * w1_tr - kc / two * lap_r;
    let momentum1 = w1_t * growth + rho * w1_tt - (-ps_r + ls * w1_rr + ls / r * w1_r - ls / r2 * w1);
    let momentum2 = w2_t * growth + rho * w2_tt - (mu * w2_rr + mu / r * w2_r - mu / r2 * w2);
    let density = r * rho_t + r * rho_r * w1_t - kc * (params.rho_fluid - rho) * lap_r;
    let porosity = r * th_t + r * th_r * w1_t - kc * (T::one() - th) * lap_r;
    let solute = r * (c_t * th + c * th_t) + r * (c_r * th + c * th_r) * w1_t
        - params.diffusivity * (c_r + r * c_rr)
        - kc * (params.sieving - th) * c * lap_r
        - kc * params.sieving * r * c_r * ps_r;
    Ok(ResidualVector { values: [continuity, momentum1, momentum2, density, porosity, solute] })
}

/// Options for the ring residual.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct RingOptions {
    /// Drop `ϱw_tt` and the quadratic velocity terms.
    pub quasi_static: bool,
}

/// Residuals of the four-equation ring model at `(t, r)` (point `x = r`).
/// Components: `U1 = w`, `Pressure = P`, `Density = ϱ`, `Porosity = Θ`.
///
/// At `r = 0` the `1/r` terms take their limits under `w(0) = 0` and
/// `P_r(0) = 0`: `w_t/r → w_tr`, `P_r/r → P_rr`, `w_r/r − w/r² → w_rr/2`.
pub fn residual_ring<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    point: Point<T>,
    opts: RingOptions,
) -> Result<RingResidual<T>, ResidualError> {
    let r = point.x;
    if !(r >= T::zero()) || !r.is_finite() {
        return Err(ResidualError::Radius(format!("{r:?}")));
    }
    let at_origin = r == T::zero();
    let d = |c, dd| field.derivative(c, dd, point);
    let w = d(Component::U1, Deriv::VALUE)?;
    let w_t = d(Component::U1, Deriv::T)?;
    let w_r = d(Component::U1, Deriv::X)?;
    let w_rr = d(Component::U1, Deriv::XX)?;
    let w_tr = d(Component::U1, Deriv::TX)?;
    let p_r = d(Component::Pressure, Deriv::X)?;
    let p_rr = d(Component::Pressure, Deriv::XX)?;
    let rho = d(Component::Density, Deriv::VALUE)?;
    let rho_t = d(Component::Density, Deriv::T)?;
    let rho_r = d(Component::Density, Deriv::X)?;
    let th = d(Component::Porosity, Deriv::VALUE)?;
    let th_t = d(Component::Porosity, Deriv::T)?;
    let th_r = d(Component::Porosity, Deriv::X)?;

    let (vt_over_r, pr_over_r, hoop) = if at_origin {
        (w_tr, p_rr, w_rr * T::half())
    } else {
        (w_t / r, p_r / r, w_r / r - w / (r * r))
    };
    let (kc, ls) = (params.conductivity, params.lame_star());
    let lap = p_rr + pr_over_r;

    let continuity = w_tr + vt_over_r - kc * T::half() * lap;
    let inertia = if opts.quasi_static {
        T::zero()
    } else {
        let w_tt = d(Component::U1, Deriv::TT)?;
        w_t * (rho_t + rho * w_tr + rho * vt_over_r) + rho * w_tt
    };
    let momentum = inertia - (-p_r + ls * w_rr + ls * hoop);
    let density = rho_t + rho_r * w_t - kc * (params.rho_fluid - rho) * lap;
    let porosity = th_t + th_r * w_t - kc * (T::one() - th) * lap;
    Ok(RingResidual { continuity, momentum, density, porosity })
}

/// The five flux vectors of the mixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fluxes<T> {
    /// Volumetric flux of the fluid phase.
    pub fluid: [T; 2],
    /// Volumetric flux of the matrix phase.
    pub matrix: [T; 2],
    /// Total volumetric flux `j_VF + j_VM`.
    pub volume: [T; 2],
    /// Mass flux `ρ_F j_VF + ρ_M j_VM`.
    pub mass: [T; 2],
    /// Solute flux `−D∇c + S c j_VF`.
    pub solute: [T; 2],
}

pub fn fluxes<T: Real, F: FieldSource<T> + ?Sized>(
    field: &F,
    params: &ModelParams<T>,
    point: Point<T>,
) -> Result<Fluxes<T>, ResidualError> {
    let d = |c, dd| field.derivative(c, dd, point);
    let v = [d(Component::U1, Deriv::T)?, d(Component::U2, Deriv::T)?];
    let grad_p = [d(Component::Pressure, Deriv::X)?, d(Component::Pressure, Deriv::Y)?];
    let c = d(Component::Concentration, Deriv::VALUE)?;
    let grad_c = [d(Component::Concentration, Deriv::X)?, d(Component::Concentration, Deriv::Y)?];
    let theta_f = d(Component::Porosity, Deriv::VALUE)?;
    let rho = d(Component::Density, Deriv::VALUE)?;
    let (theta_m, rho_m) = mixture_fields(theta_f, rho, params)?;

    let kc = params.conductivity;
    let darcy = |i: usize| -kc * (grad_p[i] - params.osmotic * grad_c[i]);
    let fluid = [theta_f * v[0] + darcy(0), theta_f * v[1] + darcy(1)];
    let matrix = [theta_m * v[0], theta_m * v[1]];
    let volume = [fluid[0] + matrix[0], fluid[1] + matrix[1]];
    let mass = [
        params.rho_fluid * fluid[0] + rho_m * matrix[0],
        params.rho_fluid * fluid[1] + rho_m * matrix[1],
    ];
    let solute = [
        -params.diffusivity * grad_c[0] + params.sieving * c * fluid[0],
        -params.diffusivity * grad_c[1] + params.sieving * c * fluid[1],
    ];
    Ok(Fluxes { fluid, matrix, volume, mass, solute })
}

/// Diagonal Terzaghi stress `(τ₁₁, τ₂₂)` of a radially symmetric state.
pub fn terzaghi_stress_radial<T: Real>(
    w: T,
    w_r: T,
    pressure: T,
    r: T,
    params: &ModelParams<T>,
) -> Result<(T, T), ResidualError> {
    if !(r > T::zero()) {
        return Err(ResidualError::Radius(format!("{r:?}")));
    }
    let ls = params.lame_star();
    let l = params.lambda;
    Ok((-pressure + ls * w_r + l / r * w, -pressure + l * w_r + ls / r * w))
}
