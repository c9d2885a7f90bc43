//! Physical parameters of the isotropic model, the anisotropic stiffness
//! matrix, and the mixture relations between phase and bulk quantities.

use std::fmt;

use thiserror::Error;

use crate::scalar::Real;

/// Constants of the isotropic poroelastic model.
///
/// `load` is the total boundary force per unit thickness, so the traction
/// it exerts on a circle of radius `r` is `load / (2πr)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelParams<T> {
    /// Hydraulic conductivity `k`.
    pub conductivity: T,
    /// First Lamé coefficient `λ`.
    pub lambda: T,
    /// Second Lamé coefficient `μ`.
    pub mu: T,
    /// Fluid density `ρ_F⁰` (incompressible).
    pub rho_fluid: T,
    /// Solute diffusivity `D`.
    pub diffusivity: T,
    /// Sieving coefficient `S`.
    pub sieving: T,
    /// Osmotic coefficient `σ₁` in `p* = p − σ₁c`.
    pub osmotic: T,
    /// Ambient pressure `p_a` at the free boundary.
    pub p_ambient: T,
    /// Steady interior pressure `p_st`.
    pub p_steady: T,
    /// Boundary load `F₀`.
    pub load: T,
    /// Inner radius `r₀` of the annulus.
    pub inner_radius: T,
    /// Initial outer radius `R₀`.
    pub outer_radius: T,
}

impl<T: Real> Default for ModelParams<T> {
    /// Placeholder magnitudes. None of these are measured values.
    fn default() -> Self {
        Self {
            conductivity: T::one(),
            lambda: T::one(),
            mu: T::one(),
            rho_fluid: T::one(),
            diffusivity: T::one(),
            sieving: T::half(),
            osmotic: T::zero(),
            p_ambient: T::zero(),
            p_steady: T::zero(),
            load: T::zero(),
            inner_radius: T::one(),
            outer_radius: T::two(),
        }
    }
}

/// A single violated parameter restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotFinite(&'static str),
    NotPositive(&'static str),
    SievingOutOfRange,
    RadiiOrder,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotFinite(name) => write!(f, "{name} must be finite"),
            Violation::NotPositive(name) => write!(f, "{name} must be > 0"),
            Violation::SievingOutOfRange => f.write_str("0 < S < 1"),
            Violation::RadiiOrder => f.write_str("r0 < R0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid model parameters: {}", join(.violations))]
pub struct ParamError {
    pub violations: Vec<Violation>,
}

fn join(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl<T: Real> ModelParams<T> {
    /// Checks the natural restrictions
    /// `k, D, ρ_F⁰, λ, μ > 0`, `0 < S < 1` and `0 < r₀ < R₀`.
    pub fn validate(self) -> Result<Self, ParamError> {
        let mut violations = Vec::new();
        let named = [
            ("k", self.conductivity),
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("rho_f0", self.rho_fluid),
            ("D", self.diffusivity),
            ("S", self.sieving),
            ("sigma1", self.osmotic),
            ("p_a", self.p_ambient),
            ("p_st", self.p_steady),
            ("F0", self.load),
            ("r0", self.inner_radius),
            ("R0", self.outer_radius),
        ];
        for (name, value) in named {
            if !value.is_finite() {
                violations.push(Violation::NotFinite(name));
            }
        }
        for (name, value) in [
            ("k", self.conductivity),
            ("D", self.diffusivity),
            ("rho_f0", self.rho_fluid),
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("r0", self.inner_radius),
        ] {
            if value.is_finite() && value <= T::zero() {
                violations.push(Violation::NotPositive(name));
            }
        }
        if !(self.sieving > T::zero() && self.sieving < T::one()) {
            violations.push(Violation::SievingOutOfRange);
        }
        if !(self.inner_radius < self.outer_radius) {
            violations.push(Violation::RadiiOrder);
        }
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(ParamError { violations })
        }
    }

    /// `λ* = λ + 2μ`.
    #[inline]
    pub fn lame_star(&self) -> T {
        lame_star(self.lambda, self.mu)
    }

    /// Effective pressure `p* = p − σ₁c`.
    #[inline]
    pub fn effective_pressure(&self, p: T, c: T) -> T {
        p - self.osmotic * c
    }

    pub fn isotropic_moduli(&self) -> AnisotropicModuli<T> {
        AnisotropicModuli::isotropic(self.lambda, self.mu)
    }
}

/// Free-function form of [`ModelParams::validate`].
pub fn validate_params<T: Real>(raw: ModelParams<T>) -> Result<ModelParams<T>, ParamError> {
    raw.validate()
}

/// P-wave modulus `λ + 2μ`.
#[inline]
pub fn lame_star<T: Real>(lambda: T, mu: T) -> T {
    lambda + mu + mu
}

#[derive(Clone, Copy, Debug, PartialEq, Error)]
pub enum MixtureError<T: fmt::Debug + fmt::Display> {
    #[error("porosity {0} outside (0, 1)")]
    Porosity(T),
    #[error("matrix density {0} is not positive")]
    MatrixDensity(T),
}

/// Matrix volume fraction and matrix density from the bulk density.
///
/// Inverts `ρ = ρ_F⁰θ_F + ρ_Mθ_M`, `θ_F + θ_M = 1`.
pub fn mixture_fields<T: Real>(
    theta_f: T,
    rho: T,
    params: &ModelParams<T>,
) -> Result<(T, T), MixtureError<T>> {
    if !(theta_f > T::zero() && theta_f < T::one()) {
        return Err(MixtureError::Porosity(theta_f));
    }
    let theta_m = T::one() - theta_f;
    let rho_m = (rho - params.rho_fluid * theta_f) / theta_m;
    if !(rho_m > T::zero()) {
        return Err(MixtureError::MatrixDensity(rho_m));
    }
    Ok((theta_m, rho_m))
}

/// Symmetric stiffness entries `E_ij` of the anisotropic stress law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnisotropicModuli<T> {
    pub e11: T,
    pub e22: T,
    pub e33: T,
    pub e12: T,
    pub e13: T,
    pub e23: T,
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("invalid stiffness matrix: {0}")]
pub struct ModuliError(pub String);

impl<T: Real> AnisotropicModuli<T> {
    /// Requires `E_ii > 0` and `E_ij ≥ 0` for `i ≠ j`.
    pub fn new(e11: T, e22: T, e33: T, e12: T, e13: T, e23: T) -> Result<Self, ModuliError> {
        let diag = [("e11", e11), ("e22", e22), ("e33", e33)];
        let off = [("e12", e12), ("e13", e13), ("e23", e23)];
        let mut bad = Vec::new();
        for (name, v) in diag {
            if !(v.is_finite() && v > T::zero()) {
                bad.push(format!("{name} must be > 0"));
            }
        }
        for (name, v) in off {
            if !(v.is_finite() && v >= T::zero()) {
                bad.push(format!("{name} must be >= 0"));
            }
        }
        if bad.is_empty() {
            Ok(Self { e11, e22, e33, e12, e13, e23 })
        } else {
            Err(ModuliError(bad.join("; ")))
        }
    }

    /// The isotropic embedding: `E13 = E23 = 0`, `E33 = μ`,
    /// `E11 = E22 = λ + 2μ`, `E12 = λ`.
    pub fn isotropic(lambda: T, mu: T) -> Self {
        Self {
            e11: lame_star(lambda, mu),
            e22: lame_star(lambda, mu),
            e33: mu,
            e12: lambda,
            e13: T::zero(),
            e23: T::zero(),
        }
    }

    /// Structural check, allowing a few ulps of rounding in `E12 = E22 − 2E33`.
    pub fn is_isotropic(&self) -> bool {
        let slack = T::lit(8.0) * T::epsilon() * self.e22;
        self.e13 == T::zero()
            && self.e23 == T::zero()
            && self.e11 == self.e22
            && (self.e12 - (self.e22 - self.e33 - self.e33)).abs() <= slack
    }

    /// Recovers `(λ, μ)` when the matrix has the isotropic structure.
    pub fn lame(&self) -> Option<(T, T)> {
        self.is_isotropic().then_some((self.e12, self.e33))
    }
}

/// Characteristic scales used to make the transient problem dimensionless.
///
/// The time scale follows from Darcy flow: `t_c = L² / (k·p_c)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales<T> {
    pub length: T,
    pub pressure: T,
    pub time: T,
}

impl<T: Real> Scales<T> {
    /// Length `R₀`, pressure `μ`.
    pub fn natural(params: &ModelParams<T>) -> Self {
        Self::new(params, params.outer_radius, params.mu)
    }

    pub fn new(params: &ModelParams<T>, length: T, pressure: T) -> Self {
        let time = length * length / (params.conductivity * pressure);
        Self { length, pressure, time }
    }

    pub fn identity() -> Self {
        Self { length: T::one(), pressure: T::one(), time: T::one() }
    }

    /// Density scale implied by momentum balance: `p_c t_c² / L²`.
    pub fn density(&self) -> T {
        self.pressure * self.time * self.time / (self.length * self.length)
    }

    /// Maps physical parameters to dimensionless ones. Concentration is
    /// left unscaled, so `σ₁` scales like a pressure.
    pub fn nondimensionalize(&self, p: &ModelParams<T>) -> ModelParams<T> {
        let l2 = self.length * self.length;
        ModelParams {
            conductivity: p.conductivity * self.pressure * self.time / l2,
            lambda: p.lambda / self.pressure,
            mu: p.mu / self.pressure,
            rho_fluid: p.rho_fluid / self.density(),
            diffusivity: p.diffusivity * self.time / l2,
            sieving: p.sieving,
            osmotic: p.osmotic / self.pressure,
            p_ambient: p.p_ambient / self.pressure,
            p_steady: p.p_steady / self.pressure,
            load: p.load / (self.pressure * self.length),
            inner_radius: p.inner_radius / self.length,
            outer_radius: p.outer_radius / self.length,
        }
    }
}
