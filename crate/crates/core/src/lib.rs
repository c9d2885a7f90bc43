//! Fluid transport in two-dimensional poroelastic materials.
//!
//! The crate evaluates the governing balance laws as pointwise residual
//! operators, checks their Lie symmetries numerically, solves the
//! stationary annulus problem in closed form and integrates the radially
//! symmetric moving-boundary problem in time.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the `*F64` aliases name the common double-precision
//! instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod banded;
pub mod field;
pub mod params;
pub mod poly;
pub mod residuals;
pub mod roots;
pub mod scalar;
pub mod stationary;
pub mod symmetry;
pub mod transient;

pub use field::{
    cartesian_to_polar, polar_to_cartesian, Component, Deriv, FieldError, FieldSource, GridField,
    Point, PolarView, PolynomialField, RadialEmbedding, RadialPolar, RadialProfile, TimeFunction,
    Uniform,
};
pub use params::{
    lame_star, mixture_fields, validate_params, AnisotropicModuli, MixtureError, ModelParams,
    ModuliError, ParamError, Scales, Violation,
};
pub use poly::Polynomial;
pub use residuals::{
    fluxes, residual_cartesian_aniso, residual_cartesian_iso, residual_radial_full,
    residual_radial_reduced, residual_ring, terzaghi_stress_radial, Equation, Fluxes,
    ResidualError, ResidualVector, RingOptions, RingResidual,
};
pub use roots::{cubic_real_roots, QuadraticRoots, RealRoot};
pub use scalar::{rel_diff, Real};
pub use symmetry::{
    apply_group, check_invariance, generate_displacement_symmetry, polynomial_displacement_solutions,
    verify_displacement_symmetry, GroupElement, GroupKind, HarmonicPotentialPair, InvarianceReport,
    ResidualModel, SymmetryError,
};
pub use stationary::{
    dirichlet_solution, neumann_solution, rst_cubic, rst_cubic_coefficients, rst_dirichlet,
    stationary_solution, DirichletRoots, InnerCondition, RstReport, StationaryError,
    StationarySolution,
};
pub use transient::{
    eulerian_rate, simulate, steady_state_check, volume_balance, Geometry, InitialProfiles,
    RadialState, SimConfig, StateField, SteadyReport, TractionForm, Trajectory, TransientError,
    VolumeBalance,
};

pub type ModelParamsF64 = ModelParams<f64>;
pub type AnisotropicModuliF64 = AnisotropicModuli<f64>;
pub type PolynomialF64 = Polynomial<f64>;
pub type PolynomialFieldF64 = PolynomialField<f64>;
pub type StationarySolutionF64 = StationarySolution<f64>;
pub type GroupElementF64 = GroupElement<f64>;
pub type SimConfigF64 = SimConfig<f64>;
pub type RadialStateF64 = RadialState<f64>;
pub type TrajectoryF64 = Trajectory<f64>;
