//! Field sources: the six unknowns of the model and their derivatives at a
//! space-time point.
//!
//! A [`FieldSource`] answers queries of the form "value of `∂ₜᵃ∂ₓᵇ∂ᵧᶜ q`
//! at `(t, x, y)`" for `q` one of `u¹, u², p, ρ, θ_F, c`. Sources in polar
//! form use the same interface with `(x, y)` read as `(r, φ)` and
//! `(u¹, u²)` read as the radial and tangential displacements `(w¹, w²)`.
//!
//! Supported orders: up to 2 in time and up to 2 in space (total spatial
//! order), which covers every term of the governing systems.

use std::fmt;

use thiserror::Error;

use crate::poly::Polynomial;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    U1,
    U2,
    Pressure,
    Density,
    Porosity,
    Concentration,
}

impl Component {
    pub const ALL: [Component; 6] = [
        Component::U1,
        Component::U2,
        Component::Pressure,
        Component::Density,
        Component::Porosity,
        Component::Concentration,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Component::U1 => "u1",
            Component::U2 => "u2",
            Component::Pressure => "p",
            Component::Density => "rho",
            Component::Porosity => "thetaF",
            Component::Concentration => "c",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Derivative multi-index `(∂ₜ, ∂ₓ, ∂ᵧ)` orders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Deriv {
    pub t: u8,
    pub x: u8,
    pub y: u8,
}

impl Deriv {
    pub const VALUE: Deriv = Deriv::new(0, 0, 0);
    pub const T: Deriv = Deriv::new(1, 0, 0);
    pub const X: Deriv = Deriv::new(0, 1, 0);
    pub const Y: Deriv = Deriv::new(0, 0, 1);
    pub const TT: Deriv = Deriv::new(2, 0, 0);
    pub const XX: Deriv = Deriv::new(0, 2, 0);
    pub const YY: Deriv = Deriv::new(0, 0, 2);
    pub const XY: Deriv = Deriv::new(0, 1, 1);
    pub const TX: Deriv = Deriv::new(1, 1, 0);
    pub const TY: Deriv = Deriv::new(1, 0, 1);

    pub const fn new(t: u8, x: u8, y: u8) -> Self {
        Self { t, x, y }
    }

    pub fn is_supported(self) -> bool {
        self.t <= 2 && self.x + self.y <= 2
    }

    pub fn spatial_order(self) -> u8 {
        self.x + self.y
    }
}

/// A space-time point. For polar sources `x = r` and `y = φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point<T> {
    pub t: T,
    pub x: T,
    pub y: T,
}

impl<T> Point<T> {
    pub const fn new(t: T, x: T, y: T) -> Self {
        Self { t, x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum FieldError {
    #[error("derivative {deriv:?} of {component} is not available")]
    Unavailable { component: Component, deriv: Deriv },
    #[error("query point lies outside the grid ({0})")]
    OutsideGrid(String),
    #[error("grid has too few nodes along {axis} for a second-order stencil")]
    TooFewNodes { axis: &'static str },
    #[error("point outside the domain of the source: {0}")]
    OutsideDomain(String),
}

fn unsupported(component: Component, deriv: Deriv) -> FieldError {
    FieldError::Unavailable { component, deriv }
}

/// Source of the six unknown fields and their derivatives.
///
/// Evaluation must be deterministic: repeated identical queries return
/// identical values.
pub trait FieldSource<T: Real> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError>;

    fn value(&self, c: Component, p: Point<T>) -> Result<T, FieldError> {
        self.derivative(c, Deriv::VALUE, p)
    }
}

impl<T: Real, F: FieldSource<T> + ?Sized> FieldSource<T> for &F {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        (**self).derivative(c, d, p)
    }
}

impl<T: Real, F: FieldSource<T> + ?Sized> FieldSource<T> for Box<F> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        (**self).derivative(c, d, p)
    }
}

impl<T: Real, F: FieldSource<T> + ?Sized> FieldSource<T> for std::sync::Arc<F> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        (**self).derivative(c, d, p)
    }
}

/// Six polynomial fields with exact derivatives.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct PolynomialField<T> {
    pub components: [Polynomial<T>; 6],
}

impl<T: Real> PolynomialField<T> {
    pub fn new(components: [Polynomial<T>; 6]) -> Self {
        Self { components }
    }

    pub fn zero() -> Self {
        Self { components: std::array::from_fn(|_| Polynomial::zero()) }
    }

    pub fn with(mut self, c: Component, p: Polynomial<T>) -> Self {
        self.components[c.index()] = p;
        self
    }

    pub fn component(&self, c: Component) -> &Polynomial<T> {
        &self.components[c.index()]
    }
}

impl<T: Real> FieldSource<T> for PolynomialField<T> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        if !d.is_supported() {
            return Err(unsupported(c, d));
        }
        Ok(self.components[c.index()].eval_deriv(d, p))
    }
}

/// Scalar function of time with derivatives up to order 2.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeFunction<T> {
    /// `a·sin(ωt)`.
    Sine { amplitude: T, omega: T },
    /// `Σ aᵢ tⁱ`.
    Polynomial(Vec<T>),
}

impl<T: Real> TimeFunction<T> {
    pub fn eval(&self, order: u8, t: T) -> T {
        match self {
            TimeFunction::Sine { amplitude, omega } => {
                let phase = *omega * t;
                let scale = *amplitude * omega.powi(i32::from(order));
                match order % 4 {
                    0 => scale * phase.sin(),
                    1 => scale * phase.cos(),
                    2 => -scale * phase.sin(),
                    _ => -scale * phase.cos(),
                }
            }
            TimeFunction::Polynomial(coef) => {
                let mut acc = T::zero();
                for (i, &a) in coef.iter().enumerate().skip(usize::from(order)) {
                    let fall: f64 = (0..order).map(|k| (i - usize::from(k)) as f64).product();
                    acc += a * T::lit(fall) * t.powi((i - usize::from(order)) as i32);
                }
                acc
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TimeFunction::Sine { amplitude, .. } => *amplitude == T::zero(),
            TimeFunction::Polynomial(c) => c.iter().all(|a| *a == T::zero()),
        }
    }
}

/// Function of the radius with derivatives up to order 2.
pub trait RadialProfile<T: Real>: Send + Sync {
    /// `dⁿf/drⁿ` at `r` for `n ≤ 2`.
    fn eval(&self, order: u8, r: T) -> T;
}

/// Constant radial profile.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Uniform<T>(pub T);

impl<T: Real> RadialProfile<T> for Uniform<T> {
    fn eval(&self, order: u8, _r: T) -> T {
        if order == 0 {
            self.0
        } else {
            T::zero()
        }
    }
}

/// Radial derivatives of a scalar `g(r)` mapped to Cartesian ones.
fn radial_to_cartesian<T: Real>(g: [T; 3], x: T, y: T, d: Deriv) -> T {
    let r2 = x * x + y * y;
    let r = r2.sqrt();
    let [g0, g1, g2] = g;
    match (d.x, d.y) {
        (0, 0) => g0,
        (1, 0) => g1 * x / r,
        (0, 1) => g1 * y / r,
        (2, 0) => g2 * x * x / r2 + g1 * y * y / (r2 * r),
        (0, 2) => g2 * y * y / r2 + g1 * x * x / (r2 * r),
        (1, 1) => (g2 - g1 / r) * x * y / r2,
        _ => unreachable!("spatial order checked by caller"),
    }
}

/// A time-independent radially symmetric state written in Cartesian
/// components: `u = w(r)·(x, y)/r`, `p = P(r)`, `ρ = ϱ(r)`, `θ_F = Θ(r)`,
/// `c = 0`.
pub struct RadialEmbedding<T: Real> {
    pub displacement: Box<dyn RadialProfile<T>>,
    pub pressure: Box<dyn RadialProfile<T>>,
    pub density: Box<dyn RadialProfile<T>>,
    pub porosity: Box<dyn RadialProfile<T>>,
}

impl<T: Real> RadialEmbedding<T> {
    /// Profile `f = w/r` and its first two radial derivatives.
    fn ratio(&self, r: T) -> [T; 3] {
        let w = [0, 1, 2].map(|n| self.displacement.eval(n, r));
        let two = T::two();
        [
            w[0] / r,
            w[1] / r - w[0] / (r * r),
            w[2] / r - two * w[1] / (r * r) + two * w[0] / (r * r * r),
        ]
    }
}

impl<T: Real> FieldSource<T> for RadialEmbedding<T> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        if !d.is_supported() {
            return Err(unsupported(c, d));
        }
        if d.t > 0 {
            return Ok(T::zero());
        }
        let r = (p.x * p.x + p.y * p.y).sqrt();
        if r <= T::zero() {
            return Err(FieldError::OutsideDomain("radial embedding at r = 0".into()));
        }
        let scalar = |prof: &dyn RadialProfile<T>| {
            radial_to_cartesian([0, 1, 2].map(|n| prof.eval(n, r)), p.x, p.y, d)
        };
        let out = match c {
            Component::Pressure => scalar(self.pressure.as_ref()),
            Component::Density => scalar(self.density.as_ref()),
            Component::Porosity => scalar(self.porosity.as_ref()),
            Component::Concentration => T::zero(),
            Component::U1 | Component::U2 => {
                // u¹ = x·f(r), u² = y·f(r)
                let f = self.ratio(r);
                let fd = |dd: Deriv| radial_to_cartesian(f, p.x, p.y, dd);
                let (own, own_axis) = if c == Component::U1 { (p.x, 0) } else { (p.y, 1) };
                let along = |dd: Deriv| if own_axis == 0 { dd.x } else { dd.y };
                // Leibniz rule for `own · f`.
                let k = along(d);
                let mut acc = own * fd(d);
                if k >= 1 {
                    let lower = if own_axis == 0 {
                        Deriv::new(0, d.x - 1, d.y)
                    } else {
                        Deriv::new(0, d.x, d.y - 1)
                    };
                    acc += T::lit(f64::from(k)) * fd(lower);
                }
                acc
            }
        };
        Ok(out)
    }
}

impl<T: Real> RadialEmbedding<T> {
    /// The same state in polar form: `(x, y)` read as `(r, φ)`, `U1 = w`,
    /// `U2 = 0`. Angular and time derivatives vanish.
    pub fn polar(&self) -> RadialPolar<'_, T> {
        RadialPolar(self)
    }
}

/// Polar-form view of a [`RadialEmbedding`]; see [`RadialEmbedding::polar`].
pub struct RadialPolar<'a, T: Real>(&'a RadialEmbedding<T>);

impl<T: Real> FieldSource<T> for RadialPolar<'_, T> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        if !d.is_supported() {
            return Err(unsupported(c, d));
        }
        if d.t > 0 || d.y > 0 {
            return Ok(T::zero());
        }
        let prof: &dyn RadialProfile<T> = match c {
            Component::U1 => self.0.displacement.as_ref(),
            Component::Pressure => self.0.pressure.as_ref(),
            Component::Density => self.0.density.as_ref(),
            Component::Porosity => self.0.porosity.as_ref(),
            Component::U2 | Component::Concentration => return Ok(T::zero()),
        };
        Ok(prof.eval(d.x, p.x))
    }
}

/// Regular grid in `(t, x, y)` with second-order finite-difference
/// derivatives.
///
/// Interior nodes use centered stencils, edge nodes one-sided second-order
/// stencils. A singleton axis is treated as a direction of invariance:
/// derivatives along it are zero. Queries between nodes interpolate the
/// nodal derivative values multilinearly.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    pub origin: [T; 3],
    pub spacing: [T; 3],
    pub counts: [usize; 3],
    data: [Vec<T>; 6],
}

const AXIS: [&str; 3] = ["t", "x", "y"];

pub(crate) fn first_weights<T: Real>(i: usize, n: usize, h: T) -> Vec<(usize, T)> {
    let c = T::half() / h;
    let three = T::lit(3.0);
    let four = T::lit(4.0);
    if i == 0 {
        vec![(0, -three * c), (1, four * c), (2, -c)]
    } else if i == n - 1 {
        vec![(n - 1, three * c), (n - 2, -four * c), (n - 3, c)]
    } else {
        vec![(i - 1, -c), (i + 1, c)]
    }
}

pub(crate) fn second_weights<T: Real>(i: usize, n: usize, h: T) -> Vec<(usize, T)> {
    let c = T::one() / (h * h);
    let (two, four, five) = (T::two(), T::lit(4.0), T::lit(5.0));
    if i == 0 {
        vec![(0, two * c), (1, -five * c), (2, four * c), (3, -c)]
    } else if i == n - 1 {
        vec![(n - 1, two * c), (n - 2, -five * c), (n - 3, four * c), (n - 4, -c)]
    } else {
        vec![(i - 1, c), (i, -two * c), (i + 1, c)]
    }
}

impl<T: Real> GridField<T> {
    /// Samples every component of `source` at the grid nodes.
    pub fn sample<F: FieldSource<T>>(
        source: &F,
        origin: [T; 3],
        spacing: [T; 3],
        counts: [usize; 3],
    ) -> Result<Self, FieldError> {
        let len = counts.iter().product();
        let mut data: [Vec<T>; 6] = std::array::from_fn(|_| Vec::with_capacity(len));
        for it in 0..counts[0] {
            for ix in 0..counts[1] {
                for iy in 0..counts[2] {
                    let p = Self::node_point(origin, spacing, [it, ix, iy]);
                    for c in Component::ALL {
                        data[c.index()].push(source.value(c, p)?);
                    }
                }
            }
        }
        Ok(Self { origin, spacing, counts, data })
    }

    /// Builds a grid from raw nodal values laid out `t`-major, then `x`,
    /// then `y`.
    pub fn from_values(
        origin: [T; 3],
        spacing: [T; 3],
        counts: [usize; 3],
        data: [Vec<T>; 6],
    ) -> Self {
        let len: usize = counts.iter().product();
        assert!(data.iter().all(|v| v.len() == len), "grid data length mismatch");
        Self { origin, spacing, counts, data }
    }

    fn node_point(origin: [T; 3], spacing: [T; 3], idx: [usize; 3]) -> Point<T> {
        let at = |a: usize| origin[a] + spacing[a] * T::from_usize_lossy(idx[a]);
        Point::new(at(0), at(1), at(2))
    }

    pub fn node(&self, idx: [usize; 3]) -> Point<T> {
        Self::node_point(self.origin, self.spacing, idx)
    }

    fn flat(&self, idx: [usize; 3]) -> usize {
        (idx[0] * self.counts[1] + idx[1]) * self.counts[2] + idx[2]
    }

    pub fn nodal(&self, c: Component, idx: [usize; 3]) -> T {
        self.data[c.index()][self.flat(idx)]
    }

    fn axis_weights(&self, axis: usize, order: u8, i: usize) -> Result<Vec<(usize, T)>, FieldError> {
        let n = self.counts[axis];
        if order == 0 {
            return Ok(vec![(i, T::one())]);
        }
        if n == 1 {
            return Ok(Vec::new());
        }
        let needed = if order == 1 { 3 } else { 4 };
        if n < needed {
            return Err(FieldError::TooFewNodes { axis: AXIS[axis] });
        }
        Ok(if order == 1 {
            first_weights(i, n, self.spacing[axis])
        } else {
            second_weights(i, n, self.spacing[axis])
        })
    }

    /// Stencil derivative at a grid node.
    pub fn nodal_derivative(&self, c: Component, d: Deriv, idx: [usize; 3]) -> Result<T, FieldError> {
        if !d.is_supported() {
            return Err(unsupported(c, d));
        }
        let wt = self.axis_weights(0, d.t, idx[0])?;
        let wx = self.axis_weights(1, d.x, idx[1])?;
        let wy = self.axis_weights(2, d.y, idx[2])?;
        let values = &self.data[c.index()];
        let mut acc = T::zero();
        for &(it, at) in &wt {
            for &(ix, ax) in &wx {
                let mut inner = T::zero();
                for &(iy, ay) in &wy {
                    inner += ay * values[self.flat([it, ix, iy])];
                }
                acc += at * ax * inner;
            }
        }
        Ok(acc)
    }

    /// Locates a coordinate along an axis: lower node index and fraction.
    fn locate(&self, axis: usize, coord: T) -> Result<(usize, T), FieldError> {
        let n = self.counts[axis];
        if n == 1 {
            return Ok((0, T::zero()));
        }
        let s = (coord - self.origin[axis]) / self.spacing[axis];
        let snap = T::lit(1e-9);
        let last = T::from_usize_lossy(n - 1);
        if s < -snap || s > last + snap {
            return Err(FieldError::OutsideGrid(format!("{}={:?}", AXIS[axis], coord)));
        }
        let nearest = s.round();
        if (s - nearest).abs() <= snap {
            return Ok((nearest.to_usize().unwrap_or(0).min(n - 1), T::zero()));
        }
        let lo = s.floor().to_usize().unwrap_or(0).min(n - 2);
        Ok((lo, s - T::from_usize_lossy(lo)))
    }
}

impl<T: Real> FieldSource<T> for GridField<T> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        let loc = [self.locate(0, p.t)?, self.locate(1, p.x)?, self.locate(2, p.y)?];
        let mut acc = T::zero();
        for corner in 0..8usize {
            let mut weight = T::one();
            let mut idx = [0usize; 3];
            let mut skip = false;
            for a in 0..3 {
                let upper = (corner >> a) & 1 == 1;
                let (lo, frac) = loc[a];
                if frac == T::zero() {
                    if upper {
                        skip = true;
                        break;
                    }
                    idx[a] = lo;
                } else {
                    idx[a] = lo + usize::from(upper);
                    weight *= if upper { frac } else { T::one() - frac };
                }
            }
            if skip {
                continue;
            }
            acc += weight * self.nodal_derivative(c, d, idx)?;
        }
        Ok(acc)
    }
}

/// Polar view `(t, r, φ)` of a Cartesian source, following
/// `x = r cos φ`, `y = r sin φ`, `u¹ = w¹cos φ − w²sin φ`,
/// `u² = w¹sin φ + w²cos φ`. Derivatives follow from the chain rule, so
/// the view is exact whenever the wrapped source is.
pub struct PolarView<F> {
    pub cartesian: F,
}

impl<F> PolarView<F> {
    pub fn new(cartesian: F) -> Self {
        Self { cartesian }
    }
}

impl<F> PolarView<F> {
    /// Polar derivative `(∂ₜᵃ ∂ᵣᵇ ∂_φᶜ)` of a Cartesian scalar component.
    fn scalar<T: Real>(&self, c: Component, d: Deriv, t: T, r: T, phi: T) -> Result<T, FieldError>
    where
        F: FieldSource<T>,
    {
        let (s, co) = phi.sin_cos();
        let p = Point::new(t, r * co, r * s);
        let q = |dx: u8, dy: u8| self.cartesian.derivative(c, Deriv::new(d.t, dx, dy), p);
        let two = T::two();
        Ok(match (d.x, d.y) {
            (0, 0) => q(0, 0)?,
            (1, 0) => q(1, 0)? * co + q(0, 1)? * s,
            (0, 1) => r * (q(0, 1)? * co - q(1, 0)? * s),
            (2, 0) => q(2, 0)? * co * co + two * q(1, 1)? * s * co + q(0, 2)? * s * s,
            (1, 1) => {
                r * (q(1, 1)? * (co * co - s * s) + (q(0, 2)? - q(2, 0)?) * s * co)
                    + q(0, 1)? * co
                    - q(1, 0)? * s
            }
            (0, 2) => {
                r * r * (q(2, 0)? * s * s - two * q(1, 1)? * s * co + q(0, 2)? * co * co)
                    - r * (q(1, 0)? * co + q(0, 1)? * s)
            }
            _ => return Err(unsupported(c, d)),
        })
    }
}

/// `dⁿ/dφⁿ` of `cos φ` (`sine = false`) or `sin φ` (`sine = true`).
fn trig_deriv<T: Real>(sine: bool, n: u8, phi: T) -> T {
    let shift = if sine { n + 3 } else { n };
    match shift % 4 {
        0 => phi.cos(),
        1 => -phi.sin(),
        2 => -phi.cos(),
        _ => phi.sin(),
    }
}

fn binom(n: u8, k: u8) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

impl<T: Real, F: FieldSource<T>> FieldSource<T> for PolarView<F> {
    fn derivative(&self, c: Component, d: Deriv, p: Point<T>) -> Result<T, FieldError> {
        if !d.is_supported() {
            return Err(unsupported(c, d));
        }
        let (r, phi) = (p.x, p.y);
        if r <= T::zero() {
            return Err(FieldError::OutsideDomain("polar view at r <= 0".into()));
        }
        match c {
            Component::U1 | Component::U2 => {
                // w¹ = cos φ·u¹ + sin φ·u², w² = −sin φ·u¹ + cos φ·u².
                let coef = |comp: Component, n: u8| -> T {
                    match (c, comp) {
                        (Component::U1, Component::U1) => trig_deriv(false, n, phi),
                        (Component::U1, _) => trig_deriv(true, n, phi),
                        (_, Component::U1) => -trig_deriv(true, n, phi),
                        _ => trig_deriv(false, n, phi),
                    }
                };
                let mut acc = T::zero();
                for comp in [Component::U1, Component::U2] {
                    for i in 0..=d.y {
                        let inner = Deriv::new(d.t, d.x, d.y - i);
                        acc += T::lit(binom(d.y, i)) * coef(comp, i) * self.scalar(comp, inner, p.t, r, phi)?;
                    }
                }
                Ok(acc)
            }
            _ => self.scalar(c, d, p.t, r, phi),
        }
    }
}

/// `(w¹, w²)` from Cartesian displacement components at polar angle `φ`.
pub fn cartesian_to_polar<T: Real>(u1: T, u2: T, phi: T) -> (T, T) {
    let (s, c) = phi.sin_cos();
    (u1 * c + u2 * s, -u1 * s + u2 * c)
}

/// Inverse of [`cartesian_to_polar`].
pub fn polar_to_cartesian<T: Real>(w1: T, w2: T, phi: T) -> (T, T) {
    let (s, c) = phi.sin_cos();
    (w1 * c - w2 * s, w1 * s + w2 * c)
}
