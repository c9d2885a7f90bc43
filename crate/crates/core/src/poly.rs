//! Sparse polynomials in `(t, x, y)` with exact derivatives.

use std::collections::BTreeMap;

use crate::field::{Deriv, Point};
use crate::scalar::Real;

/// Exponents `(t, x, y)` of a monomial.
pub type Exponents = (u8, u8, u8);

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial<T> {
    terms: BTreeMap<Exponents, T>,
}

fn falling(n: u8, k: u8) -> Option<f64> {
    if k > n {
        return None;
    }
    Some((0..k).map(|i| f64::from(n - i)).product())
}

fn powi<T: Real>(base: T, e: u8) -> T {
    base.powi(i32::from(e))
}

impl<T: Real> Polynomial<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::zero().with_term((0, 0, 0), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, T)>) -> Self {
        terms.into_iter().fold(Self::zero(), |p, (e, c)| p.with_term(e, c))
    }

    /// Adds `c·tⁱxʲyᵏ` to the polynomial.
    pub fn with_term(mut self, e: Exponents, c: T) -> Self {
        self.add_term(e, c);
        self
    }

    pub fn add_term(&mut self, e: Exponents, c: T) {
        let entry = self.terms.entry(e).or_insert_with(T::zero);
        *entry += c;
        if *entry == T::zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, T)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u8 {
        self.terms.keys().map(|&(a, b, c)| a + b + c).max().unwrap_or(0)
    }

    pub fn is_time_independent(&self) -> bool {
        self.terms.keys().all(|&(a, _, _)| a == 0)
    }

    pub fn max_abs_coefficient(&self) -> T {
        self.terms.values().fold(T::zero(), |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, p: Point<T>) -> T {
        self.eval_deriv(Deriv::VALUE, p)
    }

    /// Value of the derivative `∂ₜᵃ∂ₓᵇ∂ᵧᶜ` at `p`.
    pub fn eval_deriv(&self, d: Deriv, p: Point<T>) -> T {
        let mut acc = T::zero();
        for (&(et, ex, ey), &c) in &self.terms {
            let (Some(ft), Some(fx), Some(fy)) = (falling(et, d.t), falling(ex, d.x), falling(ey, d.y))
            else {
                continue;
            };
            acc += c
                * T::lit(ft * fx * fy)
                * powi(p.t, et - d.t)
                * powi(p.x, ex - d.x)
                * powi(p.y, ey - d.y);
        }
        acc
    }

    pub fn derivative(&self, d: Deriv) -> Self {
        let mut out = Self::zero();
        for (&(et, ex, ey), &c) in &self.terms {
            if let (Some(ft), Some(fx), Some(fy)) = (falling(et, d.t), falling(ex, d.x), falling(ey, d.y)) {
                out.add_term((et - d.t, ex - d.x, ey - d.y), c * T::lit(ft * fx * fy));
            }
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-T::one()))
    }

    /// `∂ₓₓ + ∂ᵧᵧ`.
    pub fn laplacian_xy(&self) -> Self {
        self.derivative(Deriv::XX).add(&self.derivative(Deriv::YY))
    }

    /// Real and imaginary parts of `(x + iy)ⁿ`, both harmonic in the plane.
    pub fn complex_power(n: u8) -> (Self, Self) {
        let mut re = Self::zero();
        let mut im = Self::zero();
        let mut binom = 1.0f64;
        for k in 0..=n {
            // i^k cycles through 1, i, -1, -i.
            let c = T::lit(binom);
            match k % 4 {
                0 => re.add_term((0, n - k, k), c),
                1 => im.add_term((0, n - k, k), c),
                2 => re.add_term((0, n - k, k), -c),
                _ => im.add_term((0, n - k, k), -c),
            }
            binom = binom * f64::from(n - k) / f64::from(k + 1);
        }
        (re, im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(t: f64, x: f64, y: f64) -> Point<f64> {
        Point::new(t, x, y)
    }

    #[test]
    fn eval_and_derivatives() {
        // 3 t x² y - y³
        let p = Polynomial::from_terms([((1, 2, 1), 3.0), ((0, 0, 3), -1.0)]);
        let q = pt(2.0, 1.5, -0.5);
        assert_eq!(p.eval(q), 3.0 * 2.0 * 2.25 * -0.5 + 0.125);
        assert_eq!(p.eval_deriv(Deriv::X, q), 6.0 * 2.0 * 1.5 * -0.5);
        assert_eq!(p.eval_deriv(Deriv::XY, q), 6.0 * 2.0 * 1.5);
        assert_eq!(p.eval_deriv(Deriv::YY, q), 3.0);
        assert_eq!(p.eval_deriv(Deriv::TT, q), 0.0);
        assert_eq!(p.derivative(Deriv::TX).eval(q), p.eval_deriv(Deriv::TX, q));
    }

    #[test]
    fn complex_powers_are_harmonic() {
        for n in 0..=8 {
            let (re, im) = Polynomial::<f64>::complex_power(n);
            assert!(re.laplacian_xy().is_zero(), "Re (x+iy)^{n}");
            assert!(im.laplacian_xy().is_zero(), "Im (x+iy)^{n}");
        }
        let (re, im) = Polynomial::<f64>::complex_power(3);
        assert_eq!(re, Polynomial::from_terms([((0, 3, 0), 1.0), ((0, 1, 2), -3.0)]));
        assert_eq!(im, Polynomial::from_terms([((0, 2, 1), 3.0), ((0, 0, 3), -1.0)]));
    }

    #[test]
    fn cancelling_terms_vanish() {
        let p = Polynomial::from_terms([((0, 1, 0), 2.0), ((0, 1, 0), -2.0)]);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }
}
