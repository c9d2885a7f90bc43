//! Lie point symmetries of the Cartesian systems and their numerical
//! verification.
//!
//! A [`GroupElement`] maps a field to its image under one of the
//! one-parameter groups admitted by the governing equations. Invariance is
//! checked in its literal residual form: the residual of the transformed
//! field at a point equals the (appropriately transformed) residual of the
//! original field at the preimage point. This holds for arbitrary smooth
//! fields, not only for solutions.
//!
//! Displacement shifts `u → u + εG(x, y)` are symmetries exactly when `G`
//! solves the static elastic system `∇·(Eε(G)) = 0`. In the isotropic case
//! `G = (φ_x + ψ_y, φ_y − ψ_x)` with harmonic `φ`, `ψ` is such a solution;
//! for a general stiffness matrix, homogeneous polynomial solutions are
//! obtained from the null space of the coefficient map.

use std::fmt;

use thiserror::Error;

use crate::field::{Component, Deriv, FieldError, FieldSource, Point, PolynomialField, TimeFunction};
use crate::params::{AnisotropicModuli, ModelParams};
use crate::poly::Polynomial;
use crate::residuals::{
    residual_cartesian_aniso, residual_cartesian_iso, Equation, ResidualError, ResidualVector,
};
use crate::scalar::Real;

pub use crate::field::{cartesian_to_polar, polar_to_cartesian};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SymmetryError {
    #[error("potential {0} is not harmonic (Laplacian coefficient up to {1})")]
    NotHarmonic(&'static str, String),
    #[error("invalid group payload: {0}")]
    InvalidPayload(String),
    #[error("rotations are symmetries of the isotropic system only")]
    RotationNeedsIsotropy,
    #[error("polar components are undefined at r = 0")]
    Origin,
    #[error(transparent)]
    Residual(#[from] ResidualError),
}

impl From<FieldError> for SymmetryError {
    fn from(e: FieldError) -> Self {
        SymmetryError::Residual(e.into())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    TimeTranslation,
    XTranslation,
    YTranslation,
    Rotation,
    ConcentrationScaling,
    PressureShift,
    DisplacementShift,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::TimeTranslation => "time-translation",
            GroupKind::XTranslation => "x-translation",
            GroupKind::YTranslation => "y-translation",
            GroupKind::Rotation => "rotation",
            GroupKind::ConcentrationScaling => "concentration-scaling",
            GroupKind::PressureShift => "pressure-shift",
            GroupKind::DisplacementShift => "displacement-shift",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One element of a one-parameter symmetry group.
#[derive(Clone, Debug, PartialEq)]
pub enum GroupElement<T> {
    /// `t → t + ε`.
    TimeTranslation(T),
    /// `x → x + ε`.
    XTranslation(T),
    /// `y → y + ε`.
    YTranslation(T),
    /// Joint rotation of `(x, y)` and `(u¹, u²)` by the given angle.
    Rotation(T),
    /// `c → e^ε c` with `p → p + σ₁(e^ε − 1)c`, which keeps `p* = p − σ₁c`
    /// fixed.
    ConcentrationScaling { epsilon: T, osmotic: T },
    /// `p → p + ε g(t)`.
    PressureShift { epsilon: T, g: TimeFunction<T> },
    /// `u → u + ε G(x, y)`.
    DisplacementShift { epsilon: T, g1: Polynomial<T>, g2: Polynomial<T> },
}

impl<T: Real> GroupElement<T> {
    pub fn concentration_scaling(epsilon: T, params: &ModelParams<T>) -> Self {
        GroupElement::ConcentrationScaling { epsilon, osmotic: params.osmotic }
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            GroupElement::TimeTranslation(_) => GroupKind::TimeTranslation,
            GroupElement::XTranslation(_) => GroupKind::XTranslation,
            GroupElement::YTranslation(_) => GroupKind::YTranslation,
            GroupElement::Rotation(_) => GroupKind::Rotation,
            GroupElement::ConcentrationScaling { .. } => GroupKind::ConcentrationScaling,
            GroupElement::PressureShift { .. } => GroupKind::PressureShift,
            GroupElement::DisplacementShift { .. } => GroupKind::DisplacementShift,
        }
    }

    /// The group parameter (`ε`, or the angle for rotations).
    pub fn parameter(&self) -> T {
        match self {
            GroupElement::TimeTranslation(e)
            | GroupElement::XTranslation(e)
            | GroupElement::YTranslation(e)
            | GroupElement::Rotation(e) => *e,
            GroupElement::ConcentrationScaling { epsilon, .. }
            | GroupElement::PressureShift { epsilon, .. }
            | GroupElement::DisplacementShift { epsilon, .. } => *epsilon,
        }
    }

    pub fn is_identity(&self) -> bool {
        let zero_payload = match self {
            GroupElement::PressureShift { g, .. } => g.is_zero(),
            GroupElement::DisplacementShift { g1, g2, .. } => g1.is_zero() && g2.is_zero(),
            _ => false,
        };
        self.parameter() == T::zero() || zero_payload
    }

    /// Displacement payloads must not depend on time.
    pub fn validate(&self) -> Result<(), SymmetryError> {
        if !self.parameter().is_finite() {
            return Err(SymmetryError::InvalidPayload("group parameter must be finite".into()));
        }
        if let GroupElement::DisplacementShift { g1, g2, .. } = self {
            if !(g1.is_time_independent() && g2.is_time_independent()) {
                return Err(SymmetryError::InvalidPayload("displacement shift must not depend on t".into()));
            }
        }
        Ok(())
    }

    /// Point whose data the transformed field carries to `p`.
    pub fn preimage(&self, p: Point<T>) -> Point<T> {
        match self {
            GroupElement::TimeTranslation(e) => Point::new(p.t - *e, p.x, p.y),
            GroupElement::XTranslation(e) => Point::new(p.t, p.x - *e, p.y),
            GroupElement::YTranslation(e) => Point::new(p.t, p.x, p.y - *e),
            GroupElement::Rotation(a) => {
                let (s, c) = a.sin_cos();
                Point::new(p.t, c * p.x + s * p.y, -s * p.x + c * p.y)
            }
            _ => p,
        }
    }

    /// Image of a point under the group action (inverse of [`Self::preimage`]).
    pub fn image(&self, p: Point<T>) -> Point<T> {
        match self {
            GroupElement::TimeTranslation(e) => Point::new(p.t + *e, p.x, p.y),
            GroupElement::XTranslation(e) => Point::new(p.t, p.x + *e, p.y),
            GroupElement::YTranslation(e) => Point::new(p.t, p.x, p.y + *e),
            GroupElement::Rotation(a) => {
                let (s, c) = a.sin_cos();
                Point::new(p.t, c * p.x - s * p.y, s * p.x + c * p.y)
            }
            _ => p,
        }
    }

    /// Residual the transformed field must have, given the original
    /// residual at the preimage point.
    pub fn expected_residual(&self, pre: ResidualVector<T>) -> ResidualVector<T> {
        let mut v = pre.values;
        match self {
            GroupElement::Rotation(a) => {
                let (s, c) = a.sin_cos();
                let (m1, m2) = (v[Equation::Momentum1 as usize], v[Equation::Momentum2 as usize]);
                v[Equation::Momentum1 as usize] = c * m1 - s * m2;
                v[Equation::Momentum2 as usize] = s * m1 + c * m2;
            }
            GroupElement::ConcentrationScaling { epsilon, .. } => {
                v[Equation::Solute as usize] = v[Equation::Solute as usize] * epsilon.exp();
            }
            _ => {}
        }
        ResidualVector { values: v }
    }
}

impl<T: Real> fmt::Display for GroupElement<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind(), self.parameter())
    }
}

/// `R(φ) = [[cos φ, −sin φ], [sin φ, cos φ]]`.
pub fn rotation_matrix<T: Real>(angle: T) -> [[T; 2]; 2] {
    let (s, c) = angle.sin_cos();
    [[c, -s], [s, c]]
}

/// A field transformed by a group element; see [`apply_group`].
#[derive(Clone, Debug)]
pub struct Transformed<T, F> {
    pub element: GroupElement<T>,
    pub inner: F,
}

/// Image of `field` under `element`.
pub fn apply_group<T: Real, F: FieldSource<T>>(
    element: GroupElement<T>,
    field: F,
) -> Result<Transformed<T, F>, SymmetryError> {
    element.validate()?;
    Ok(Transformed { element, inner: field })
}

impl<T: Real, F: FieldSource<T>> Transformed<T, F> {
    /// Derivative of `q(R⁻¹x)` with respect to `x`, by the chain rule.
    fn rotated_scalar(&self, c: Component, d: Deriv, q: Point<T>, cs: T, sn: T) -> Result<T, FieldError> {
        let g = |dx: u8, dy: u8| self.inner.derivative(c, Deriv::new(d.t, dx, dy), q);
        let two = T::two();
        Ok(match (d.x, d.y) {
            (0, 0) => g(0, 0)?,
            (1, 0) => cs * g(1, 0)? - sn * g(0, 1)?,
            (0, 1) => sn * g(1, 0)? + cs * g(0, 1)?,
            (2, 0) => cs * cs * g(2, 0)? - two * cs * sn * g(1, 1)? + sn * sn * g(0, 2)?,
            (0, 2) => sn * sn * g(2, 0)? + two * cs * sn * g(1, 1)? + cs * cs * g(0, 2)?,
            (1, 1) => cs * sn * (g(2, 0)? - g(0, 2)?) + (cs * cs - sn * sn) * g(1, 1)?,
            _ => return Err(FieldError::Unavailable { component: c, deriv: d }),
        })
    }
}

impl<T: Real, F: FieldSource<T>> FieldSource<T> for Transformed<T, F> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        let q = self.element.preimage(p);
        match &self.element {
            GroupElement::TimeTranslation(_) | GroupElement::XTranslation(_) | GroupElement::YTranslation(_) => {
                self.inner.derivative(c, d, q)
            }
            GroupElement::Rotation(a) => {
                let (sn, cs) = a.sin_cos();
                match c {
                    Component::U1 => Ok(cs * self.rotated_scalar(Component::U1, d, q, cs, sn)?
                        - sn * self.rotated_scalar(Component::U2, d, q, cs, sn)?),
                    Component::U2 => Ok(sn * self.rotated_scalar(Component::U1, d, q, cs, sn)?
                        + cs * self.rotated_scalar(Component::U2, d, q, cs, sn)?),
                    _ => self.rotated_scalar(c, d, q, cs, sn),
                }
            }
            GroupElement::ConcentrationScaling { epsilon, osmotic } => {
                let factor = epsilon.exp();
                match c {
                    Component::Concentration => Ok(factor * self.inner.derivative(c, d, q)?),
                    Component::Pressure => {
                        let shift = *osmotic * (factor - T::one());
                        Ok(self.inner.derivative(c, d, q)?
                            + shift * self.inner.derivative(Component::Concentration, d, q)?)
                    }
                    _ => self.inner.derivative(c, d, q),
                }
            }
            GroupElement::PressureShift { epsilon, g } => {
                let base = self.inner.derivative(c, d, q)?;
                if c == Component::Pressure && d.spatial_order() == 0 {
                    Ok(base + *epsilon * g.eval(d.t, p.t))
                } else {
                    Ok(base)
                }
            }
            GroupElement::DisplacementShift { epsilon, g1, g2 } => {
                let base = self.inner.derivative(c, d, q)?;
                let shift = match c {
                    Component::U1 => g1,
                    Component::U2 => g2,
                    _ => return Ok(base),
                };
                if d.t > 0 {
                    Ok(base)
                } else {
                    Ok(base + *epsilon * shift.eval_deriv(d, p))
                }
            }
        }
    }
}

/// Two plane potentials with vanishing Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct HarmonicPotentialPair<T> {
    pub phi: Polynomial<T>,
    pub psi: Polynomial<T>,
}

fn check_harmonic<T: Real>(name: &'static str, p: &Polynomial<T>) -> Result<(), SymmetryError> {
    if !p.is_time_independent() {
        return Err(SymmetryError::InvalidPayload(format!("potential {name} depends on t")));
    }
    let lap = p.laplacian_xy().max_abs_coefficient();
    let deg = T::from_u8(p.degree().max(2)).unwrap();
    let allowed = T::lit(64.0) * T::epsilon() * deg * deg * p.max_abs_coefficient();
    if lap > allowed {
        return Err(SymmetryError::NotHarmonic(name, format!("{lap:?}")));
    }
    Ok(())
}

impl<T: Real> HarmonicPotentialPair<T> {
    /// Checks harmonicity on the coefficient tables, allowing rounding of
    /// order machine epsilon.
    pub fn new(phi: Polynomial<T>, psi: Polynomial<T>) -> Result<Self, SymmetryError> {
        check_harmonic("phi", &phi)?;
        check_harmonic("psi", &psi)?;
        Ok(Self { phi, psi })
    }

    /// Potentials `Σ (aₙ Re zⁿ + bₙ Im zⁿ)` from `(n, aₙ, bₙ)` triples;
    /// harmonic by construction.
    pub fn from_complex_powers(phi: &[(u8, T, T)], psi: &[(u8, T, T)]) -> Self {
        let build = |terms: &[(u8, T, T)]| {
            terms.iter().fold(Polynomial::zero(), |acc, &(n, a, b)| {
                let (re, im) = Polynomial::complex_power(n);
                acc.add(&re.scale(a)).add(&im.scale(b))
            })
        };
        Self { phi: build(phi), psi: build(psi) }
    }
}

/// `G = (φ_x + ψ_y, φ_y − ψ_x)`, a static solution of the isotropic
/// elastic system for any `λ, μ`.
pub fn generate_displacement_symmetry<T: Real>(
    potentials: &HarmonicPotentialPair<T>,
) -> Result<(Polynomial<T>, Polynomial<T>), SymmetryError> {
    check_harmonic("phi", &potentials.phi)?;
    check_harmonic("psi", &potentials.psi)?;
    let (phi, psi) = (&potentials.phi, &potentials.psi);
    let g1 = phi.derivative(Deriv::X).add(&psi.derivative(Deriv::Y));
    let g2 = phi.derivative(Deriv::Y).sub(&psi.derivative(Deriv::X));
    Ok((g1, g2))
}

/// Symbolic `∇·(Eε(G))` for polynomial `G`.
pub fn elastic_operator<T: Real>(
    moduli: &AnisotropicModuli<T>,
    g1: &Polynomial<T>,
    g2: &Polynomial<T>,
) -> [Polynomial<T>; 2] {
    let e = moduli;
    let d = |p: &Polynomial<T>, dd| p.derivative(dd);
    let two = T::two();
    let out1 = d(g1, Deriv::XX)
        .scale(e.e11)
        .add(&d(g1, Deriv::YY).scale(e.e33))
        .add(&d(g2, Deriv::XX).scale(e.e13))
        .add(&d(g2, Deriv::YY).scale(e.e23))
        .add(&d(g1, Deriv::XY).scale(two * e.e13))
        .add(&d(g2, Deriv::XY).scale(e.e12 + e.e33));
    let out2 = d(g2, Deriv::YY)
        .scale(e.e22)
        .add(&d(g2, Deriv::XX).scale(e.e33))
        .add(&d(g1, Deriv::XX).scale(e.e13))
        .add(&d(g1, Deriv::YY).scale(e.e23))
        .add(&d(g2, Deriv::XY).scale(two * e.e23))
        .add(&d(g1, Deriv::XY).scale(e.e12 + e.e33));
    [out1, out2]
}

/// Wraps a displacement pair as a field with all other components zero.
pub fn displacement_field<T: Real>(g1: &Polynomial<T>, g2: &Polynomial<T>) -> PolynomialField<T> {
    PolynomialField::zero().with(Component::U1, g1.clone()).with(Component::U2, g2.clone())
}

/// Largest `|∇·(Eε(G))|` component over `points`, with `G` read from the
/// `U1`, `U2` components of `g` (analytic or grid-backed).
pub fn verify_displacement_symmetry<T: Real, F: FieldSource<T> + ?Sized>(
    g: &F,
    moduli: &AnisotropicModuli<T>,
    points: &[Point<T>],
) -> Result<T, SymmetryError> {
    let mut worst = T::zero();
    for &p in points {
        let j = |c, d| g.derivative(c, d, p);
        let g1 = [j(Component::U1, Deriv::XX)?, j(Component::U1, Deriv::YY)?, j(Component::U1, Deriv::XY)?];
        let g2 = [j(Component::U2, Deriv::XX)?, j(Component::U2, Deriv::YY)?, j(Component::U2, Deriv::XY)?];
        let [a, b] = crate::residuals::anisotropic_elastic(moduli, g1, g2);
        worst = worst.max(a.abs()).max(b.abs());
    }
    Ok(worst)
}

/// A basis of the homogeneous degree-`degree` polynomial solutions of
/// `∇·(Eε(G)) = 0`.
///
/// The coefficient map from the `2(n+1)` coefficients of `G` to the
/// `2(n−1)` coefficients of the output is reduced to row echelon form; each
/// free column gives one basis vector, scaled so its largest coefficient
/// is 1.
pub fn polynomial_displacement_solutions<T: Real>(
    moduli: &AnisotropicModuli<T>,
    degree: u8,
) -> Vec<(Polynomial<T>, Polynomial<T>)> {
    let n = usize::from(degree);
    let unknowns = 2 * (n + 1);
    let basis = |k: usize| -> (Polynomial<T>, Polynomial<T>) {
        let j = (k % (n + 1)) as u8;
        let mono = Polynomial::zero().with_term((0, degree - j, j), T::one());
        if k <= n {
            (mono, Polynomial::zero())
        } else {
            (Polynomial::zero(), mono)
        }
    };
    let rows = if n >= 2 { 2 * (n - 1) } else { 0 };
    let mut a = vec![vec![T::zero(); unknowns]; rows];
    for k in 0..unknowns {
        let (g1, g2) = basis(k);
        let out = elastic_operator(moduli, &g1, &g2);
        for (eq, poly) in out.iter().enumerate() {
            for ((_, ex, ey), c) in poly.terms() {
                debug_assert_eq!(usize::from(ex + ey), n - 2);
                a[eq * (n - 1) + usize::from(ey)][k] = c;
            }
        }
    }

    // Reduced row echelon form with partial pivoting.
    let scale = a.iter().flatten().fold(T::zero(), |m, v| m.max(v.abs()));
    let tol = T::lit(1e-12) * scale.max(T::one());
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        if row == rows {
            break;
        }
        let (best, val) = (row..rows)
            .map(|r| (r, a[r][col].abs()))
            .fold((row, T::zero()), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        a.swap(row, best);
        let piv = a[row][col];
        for v in a[row].iter_mut() {
            *v /= piv;
        }
        for r in 0..rows {
            if r != row {
                let f = a[r][col];
                if f != T::zero() {
                    for cc in 0..unknowns {
                        let delta = f * a[row][cc];
                        a[r][cc] -= delta;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }

    let mut out = Vec::new();
    for free in (0..unknowns).filter(|c| !pivots.contains(c)) {
        let mut x = vec![T::zero(); unknowns];
        x[free] = T::one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = -a[r][free];
        }
        let big = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let (mut g1, mut g2) = (Polynomial::zero(), Polynomial::zero());
        for (k, &c) in x.iter().enumerate() {
            if c != T::zero() {
                let (b1, b2) = basis(k);
                g1 = g1.add(&b1.scale(c / big));
                g2 = g2.add(&b2.scale(c / big));
            }
        }
        out.push((g1, g2));
    }
    out
}

/// Which residual operator an invariance check runs against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ResidualModel<T> {
    Isotropic(ModelParams<T>),
    Anisotropic(AnisotropicModuli<T>, ModelParams<T>),
}

impl<T: Real> ResidualModel<T> {
    pub fn residual<F: FieldSource<T> + ?Sized>(&self, field: &F, p: Point<T>) -> Result<ResidualVector<T>, ResidualError> {
        match self {
            ResidualModel::Isotropic(params) => residual_cartesian_iso(field, params, p),
            ResidualModel::Anisotropic(e, params) => residual_cartesian_aniso(field, e, params, p),
        }
    }

    /// Static elastic operator of this model.
    pub fn moduli(&self) -> AnisotropicModuli<T> {
        match self {
            ResidualModel::Isotropic(params) => params.isotropic_moduli(),
            ResidualModel::Anisotropic(e, _) => *e,
        }
    }
}

/// Comparison of one equation's residual before and after the transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EquationCheck<T> {
    pub equation: Equation,
    /// Largest `|residual|` of the original field over the preimage points.
    pub pre: T,
    /// Largest `|residual|` of the transformed field.
    pub post: T,
    /// Largest `|post − expected|`.
    pub diff: T,
    /// Largest `|post − expected| / max(|expected|, 1)`.
    pub rel: T,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport<T> {
    pub element: String,
    pub kind: GroupKind,
    pub tolerance: T,
    pub points: usize,
    pub checks: Vec<EquationCheck<T>>,
}

impl<T: Real> InvarianceReport<T> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_rel(&self) -> T {
        self.checks.iter().fold(T::zero(), |m, c| m.max(c.rel))
    }
}

/// Compares residuals of `field` and of its image under `element` at the
/// image points `points`.
///
/// Expected relations: unchanged residuals for translations and shifts,
/// solute residual scaled by `e^ε` for concentration scaling, momentum
/// residual rotated as a vector for rotations.
pub fn check_invariance<T: Real, F: FieldSource<T>>(
    element: &GroupElement<T>,
    field: &F,
    model: &ResidualModel<T>,
    points: &[Point<T>],
    tolerance: T,
) -> Result<InvarianceReport<T>, SymmetryError> {
    if element.kind() == GroupKind::Rotation && matches!(model, ResidualModel::Anisotropic(..)) {
        return Err(SymmetryError::RotationNeedsIsotropy);
    }
    let image = apply_group(element.clone(), field)?;
    let mut acc: [(T, T, T, T); 6] = [(T::zero(), T::zero(), T::zero(), T::zero()); 6];
    for &p in points {
        let pre = model.residual(field, element.preimage(p))?;
        let post = model.residual(&image, p)?;
        let expected = element.expected_residual(pre);
        for i in 0..6 {
            let diff = (post.values[i] - expected.values[i]).abs();
            let rel = diff / expected.values[i].abs().max(T::one());
            let slot = &mut acc[i];
            slot.0 = slot.0.max(pre.values[i].abs());
            slot.1 = slot.1.max(post.values[i].abs());
            slot.2 = slot.2.max(diff);
            slot.3 = slot.3.max(rel);
        }
    }
    let checks = Equation::ALL
        .iter()
        .zip(acc)
        .map(|(&equation, (pre, post, diff, rel))| EquationCheck {
            equation,
            pre,
            post,
            diff,
            rel,
            pass: rel <= tolerance,
        })
        .collect();
    Ok(InvarianceReport {
        element: element.to_string(),
        kind: element.kind(),
        tolerance,
        points: points.len(),
        checks,
    })
}

/// Polar displacement components at Cartesian position `(x, y)`.
pub fn polar_components<T: Real>(u1: T, u2: T, x: T, y: T) -> Result<(T, T), SymmetryError> {
    if x == T::zero() && y == T::zero() {
        return Err(SymmetryError::Origin);
    }
    Ok(cartesian_to_polar(u1, u2, y.atan2(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[((u8, u8, u8), f64)]) -> Polynomial<f64> {
        Polynomial::from_terms(terms.iter().copied())
    }

    fn params() -> ModelParams<f64> {
        ModelParams { lambda: 1.0, mu: 1.0, osmotic: 0.3, ..Default::default() }
    }

    #[test]
    fn generator_examples() {
        let pair = HarmonicPotentialPair::new(poly(&[((0, 2, 0), 1.0), ((0, 0, 2), -1.0)]), Polynomial::zero()).unwrap();
        let (g1, g2) = generate_displacement_symmetry(&pair).unwrap();
        assert_eq!(g1, poly(&[((0, 1, 0), 2.0)]));
        assert_eq!(g2, poly(&[((0, 0, 1), -2.0)]));

        let pair = HarmonicPotentialPair::new(poly(&[((0, 3, 0), 1.0), ((0, 1, 2), -3.0)]), Polynomial::zero()).unwrap();
        let (g1, g2) = generate_displacement_symmetry(&pair).unwrap();
        assert_eq!(g1, poly(&[((0, 2, 0), 3.0), ((0, 0, 2), -3.0)]));
        assert_eq!(g2, poly(&[((0, 1, 1), -6.0)]));
        let e = params().isotropic_moduli();
        let [a, b] = elastic_operator(&e, &g1, &g2);
        assert!(a.is_zero() && b.is_zero());

        let pair = HarmonicPotentialPair::new(Polynomial::zero(), poly(&[((0, 1, 1), 1.0)])).unwrap();
        let (g1, g2) = generate_displacement_symmetry(&pair).unwrap();
        assert_eq!(g1, poly(&[((0, 1, 0), 1.0)]));
        assert_eq!(g2, poly(&[((0, 0, 1), -1.0)]));
    }

    #[test]
    fn non_harmonic_potential_is_rejected() {
        let err = HarmonicPotentialPair::new(poly(&[((0, 2, 0), 1.0)]), Polynomial::zero()).unwrap_err();
        assert!(matches!(err, SymmetryError::NotHarmonic("phi", _)));
    }

    #[test]
    fn verification_examples() {
        let p = ModelParams { lambda: 0.5, mu: 1.5, ..Default::default() };
        let ls = p.lame_star();
        let e = p.isotropic_moduli();
        let pts = [Point::new(0.0, 0.3, -0.2), Point::new(0.0, 1.0, 2.0)];
        let good = displacement_field(&poly(&[((0, 2, 0), 1.0)]), &poly(&[((0, 1, 1), -2.0 * ls / (ls - p.mu))]));
        assert!(verify_displacement_symmetry(&good, &e, &pts).unwrap() < 1e-14);
        let bad = displacement_field(&poly(&[((0, 2, 0), 1.0)]), &Polynomial::zero());
        assert!((verify_displacement_symmetry(&bad, &e, &pts).unwrap() - 2.0 * ls).abs() < 1e-14);
    }

    #[test]
    fn null_space_dimension_is_four() {
        let e = AnisotropicModuli::new(2.0, 3.0, 1.0, 0.5, 0.3, 0.2).unwrap();
        for n in 2..=6 {
            let sols = polynomial_displacement_solutions(&e, n);
            assert_eq!(sols.len(), 4, "degree {n}");
            for (g1, g2) in &sols {
                let [a, b] = elastic_operator(&e, g1, g2);
                assert!(a.max_abs_coefficient() < 1e-11 && b.max_abs_coefficient() < 1e-11);
            }
        }
        assert_eq!(polynomial_displacement_solutions(&e, 1).len(), 4);
    }

    #[test]
    fn rotation_matrix_is_proper() {
        for a in [0.0f64, 0.3, 2.0, -1.1] {
            let [[a11, a12], [a21, a22]] = rotation_matrix(a);
            assert!((a11 * a22 - a12 * a21 - 1.0).abs() < 1e-15);
            assert!((a11 * a12 + a21 * a22).abs() < 1e-15);
        }
    }

    #[test]
    fn rotation_inverse_and_identity() {
        let f = PolynomialField::zero()
            .with(Component::U1, poly(&[((0, 2, 1), 0.4), ((1, 0, 1), 1.0)]))
            .with(Component::U2, poly(&[((0, 1, 0), -0.3), ((0, 0, 2), 0.5)]))
            .with(Component::Pressure, poly(&[((0, 1, 1), 2.0)]));
        let back = apply_group(GroupElement::Rotation(-0.7), apply_group(GroupElement::Rotation(0.7), &f).unwrap()).unwrap();
        let same = apply_group(GroupElement::Rotation(0.0), &f).unwrap();
        let p = Point::new(0.2, 0.9, -0.4);
        for c in Component::ALL {
            for d in [Deriv::VALUE, Deriv::X, Deriv::Y, Deriv::XX, Deriv::XY, Deriv::YY, Deriv::TY] {
                let want = f.derivative(c, d, p).unwrap();
                assert!((back.derivative(c, d, p).unwrap() - want).abs() < 1e-14);
                assert_eq!(same.derivative(c, d, p).unwrap(), want);
            }
        }
    }

    #[test]
    fn polar_components_examples() {
        let (w1, w2) = polar_components(1.0, 2.0, 1.0, 0.0).unwrap();
        assert_eq!((w1, w2), (1.0, 2.0));
        assert!(matches!(polar_components(1.0, 0.0, 0.0, 0.0), Err(SymmetryError::Origin)));
    }

    #[test]
    fn rotation_rejected_for_anisotropic_model() {
        let e = AnisotropicModuli::new(2.0, 3.0, 1.0, 0.5, 0.3, 0.2).unwrap();
        let model = ResidualModel::Anisotropic(e, params());
        let f = PolynomialField::<f64>::zero();
        let r = check_invariance(&GroupElement::Rotation(0.5), &f, &model, &[Point::new(0.0, 1.0, 1.0)], 1e-12);
        assert!(matches!(r, Err(SymmetryError::RotationNeedsIsotropy)));
    }

    #[test]
    fn time_dependent_displacement_payload_is_invalid() {
        let el = GroupElement::DisplacementShift { epsilon: 1.0, g1: poly(&[((1, 0, 0), 1.0)]), g2: Polynomial::zero() };
        assert!(apply_group(el, PolynomialField::<f64>::zero()).is_err());
    }
}
