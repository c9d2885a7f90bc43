#![allow(dead_code)]

use pem::*;
use rand::Rng;

/// All monomials `tᵃxᵇyᶜ` with `a + b + c ≤ degree`.
pub fn monomials(degree: u8) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                out.push((a, b, c));
            }
        }
    }
    out
}

pub fn random_poly(rng: &mut impl Rng, degree: u8) -> Polynomial<f64> {
    Polynomial::from_terms(monomials(degree).into_iter().map(|e| (e, rng.gen_range(-1.0..1.0))))
}

/// Smooth polynomial field of total degree 3 in `(t, x, y)`.
pub fn random_field(rng: &mut impl Rng) -> PolynomialField<f64> {
    PolynomialField::new(std::array::from_fn(|_| random_poly(rng, 3)))
}

pub fn random_params(rng: &mut impl Rng) -> ModelParams<f64> {
    ModelParams {
        conductivity: rng.gen_range(0.2..3.0),
        lambda: rng.gen_range(0.2..3.0),
        mu: rng.gen_range(0.2..3.0),
        rho_fluid: rng.gen_range(0.5..2.0),
        diffusivity: rng.gen_range(0.1..2.0),
        sieving: rng.gen_range(0.05..0.95),
        osmotic: rng.gen_range(0.0..1.0),
        ..ModelParams::default()
    }
}

pub fn random_points(rng: &mut impl Rng, count: usize) -> Vec<Point<f64>> {
    (0..count).map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

/// Points with `lo < √(x² + y²) < hi`.
pub fn annulus_points(rng: &mut impl Rng, count: usize, lo: f64, hi: f64) -> Vec<Point<f64>> {
    (0..count)
        .map(|_| {
            let r = rng.gen_range(lo..hi);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(0.0, r * phi.cos(), r * phi.sin())
        })
        .collect()
}

/// Harmonic potentials with random coefficients on every `zⁿ`, `n ≤ degree`.
pub fn random_potentials(rng: &mut impl Rng, degree: u8) -> HarmonicPotentialPair<f64> {
    let mut terms = || (0..=degree).map(|n| (n, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect::<Vec<_>>();
    let phi = terms();
    let psi = terms();
    HarmonicPotentialPair::from_complex_powers(&phi, &psi)
}
