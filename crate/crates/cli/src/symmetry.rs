//! `symmetry`: numerical invariance checks of the residual operators.

use std::fmt::Write as _;
use std::path::Path;

use pem::{
    check_invariance, generate_displacement_symmetry, polynomial_displacement_solutions, rst_cubic, rst_dirichlet,
    stationary_solution, AnisotropicModuli, FieldSource, GridField, GroupElement, HarmonicPotentialPair, InnerCondition,
    Point, Polynomial, PolynomialField, ResidualModel, SymmetryError, TimeFunction, Uniform,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ElementKind, FieldKind, RunConfig};
use crate::error::CliError;
use crate::output::{num, Table};

const HEADER: [&str; 9] = ["element", "equation", "parameter", "pre", "post", "diff", "rel", "tolerance", "pass"];

type Field = Box<dyn FieldSource<f64>>;

fn sym_err(e: SymmetryError) -> CliError {
    match e {
        SymmetryError::RotationNeedsIsotropy | SymmetryError::NotHarmonic(..) | SymmetryError::InvalidPayload(_) => {
            CliError::Config(e.to_string())
        }
        other => CliError::Solver(other.to_string()),
    }
}

fn random_field(rng: &mut ChaCha8Rng) -> PolynomialField<f64> {
    let degree = 3u8;
    PolynomialField::new(std::array::from_fn(|_| {
        let mut p = Polynomial::zero();
        for a in 0..=degree {
            for b in 0..=degree - a {
                for c in 0..=degree - a - b {
                    p.add_term((a, b, c), rng.gen_range(-1.0..1.0));
                }
            }
        }
        p
    }))
}

/// Box in `(x, y)` the checks run in, plus the analytic field.
struct Setup {
    field: Field,
    lo: [f64; 2],
    hi: [f64; 2],
    annulus: Option<(f64, f64)>,
}

fn setup(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Setup, CliError> {
    match cfg.symmetry.field {
        FieldKind::Polynomial => {
            Ok(Setup { field: Box::new(random_field(rng)), lo: [-1.0, -1.0], hi: [1.0, 1.0], annulus: None })
        }
        FieldKind::Stationary => {
            let p = &cfg.params;
            let r_st = match cfg.case {
                InnerCondition::Neumann => rst_cubic(p)?.r_st,
                InnerCondition::Dirichlet => rst_dirichlet(p)?.r_st,
            };
            let sol = stationary_solution(p, cfg.case, r_st)?;
            let field = sol.embedding(Box::new(Uniform(cfg.initial_density * p.rho_fluid)), Box::new(Uniform(cfg.initial_porosity)));
            let (a, b) = (p.inner_radius, r_st);
            let (lo, hi) = (a + 0.1 * (b - a), b - 0.1 * (b - a));
            let half = 0.5 * (hi - lo);
            Ok(Setup { field: Box::new(field), lo: [lo, -half], hi: [hi, half], annulus: Some((lo, hi)) })
        }
    }
}

fn displacement_shift(cfg: &RunConfig, rng: &mut ChaCha8Rng, moduli: Option<&AnisotropicModuli<f64>>) -> Result<GroupElement<f64>, CliError> {
    let s = &cfg.symmetry;
    let (g1, g2) = match moduli {
        None => {
            let mut terms = || (0..=s.degree).map(|n| (n, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect::<Vec<_>>();
            let (phi, psi) = (terms(), terms());
            generate_displacement_symmetry(&HarmonicPotentialPair::from_complex_powers(&phi, &psi)).map_err(sym_err)?
        }
        Some(e) => polynomial_displacement_solutions(e, s.degree).into_iter().fold(
            (Polynomial::zero(), Polynomial::zero()),
            |(a, b), (g1, g2)| {
                let w = rng.gen_range(-1.0..1.0);
                (a.add(&g1.scale(w)), b.add(&g2.scale(w)))
            },
        ),
    };
    Ok(GroupElement::DisplacementShift { epsilon: s.epsilon, g1, g2 })
}

fn elements(cfg: &RunConfig, rng: &mut ChaCha8Rng, moduli: Option<&AnisotropicModuli<f64>>, snap: Option<f64>) -> Result<Vec<(ElementKind, GroupElement<f64>)>, CliError> {
    let s = &cfg.symmetry;
    // On a grid, translations move by whole cells so node values are reused.
    let shift = snap.map_or(s.epsilon, |h| (s.epsilon / h).round() * h);
    let mut out = Vec::new();
    for &kind in &s.elements {
        let el = match kind {
            ElementKind::TimeTranslation => GroupElement::TimeTranslation(shift),
            ElementKind::XTranslation => GroupElement::XTranslation(shift),
            ElementKind::YTranslation => GroupElement::YTranslation(shift),
            ElementKind::Rotation => GroupElement::Rotation(s.angle),
            ElementKind::ConcentrationScaling => GroupElement::concentration_scaling(s.epsilon, &cfg.params),
            ElementKind::PressureShift => {
                GroupElement::PressureShift { epsilon: s.epsilon, g: TimeFunction::Sine { amplitude: 1.0, omega: 1.0 } }
            }
            ElementKind::DisplacementShift => displacement_shift(cfg, rng, moduli)?,
            ElementKind::NegativeControl => GroupElement::DisplacementShift {
                epsilon: 1.0,
                g1: Polynomial::zero().with_term((0, 2, 0), 1.0),
                g2: Polynomial::zero(),
            },
        };
        out.push((kind, el));
    }
    Ok(out)
}

fn random_points(rng: &mut ChaCha8Rng, setup: &Setup, count: usize) -> Vec<Point<f64>> {
    (0..count)
        .map(|_| {
            let t = rng.gen_range(-1.0..1.0);
            match setup.annulus {
                None => Point::new(t, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                Some((lo, hi)) => {
                    let r = rng.gen_range(lo..hi);
                    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
                    Point::new(t, r * phi.cos(), r * phi.sin())
                }
            }
        })
        .collect()
}

pub fn run(cfg: &RunConfig, out: &Path) -> Result<String, CliError> {
    let s = &cfg.symmetry;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let setup = setup(cfg, &mut rng)?;
    let moduli = match s.moduli {
        Some([e11, e22, e33, e12, e13, e23]) => {
            Some(AnisotropicModuli::new(e11, e22, e33, e12, e13, e23).map_err(|e| CliError::Config(e.to_string()))?)
        }
        None => None,
    };
    let model = match moduli {
        Some(e) => ResidualModel::Anisotropic(e, cfg.params),
        None => ResidualModel::Isotropic(cfg.params),
    };

    let grid = match s.grid_spacing {
        None => None,
        Some(h) => {
            if setup.annulus.is_some() && s.elements.contains(&ElementKind::Rotation) {
                return Err(CliError::Config("rotation leaves the sampled box of the stationary field; use the polynomial field on a grid".into()));
            }
            let n = |a: usize| ((setup.hi[a] - setup.lo[a]) / h).round() as usize + 1;
            let counts = [5, n(0), n(1)];
            if counts[1] < 4 || counts[2] < 4 {
                return Err(CliError::Config(format!("grid_spacing = {h} leaves fewer than 4 nodes per axis")));
            }
            let g = GridField::sample(&setup.field, [0.0, setup.lo[0], setup.lo[1]], [h, h, h], counts)
                .map_err(|e| CliError::Solver(e.to_string()))?;
            Some(g)
        }
    };
    let list = elements(cfg, &mut rng, moduli.as_ref(), s.grid_spacing)?;
    let points = match &grid {
        None => random_points(&mut rng, &setup, s.points),
        Some(g) => {
            let mut nodes = Vec::new();
            for it in 0..g.counts[0] {
                for ix in 0..g.counts[1] {
                    for iy in 0..g.counts[2] {
                        nodes.push(g.node([it, ix, iy]));
                    }
                }
            }
            nodes
        }
    };

    let mut table = Table::new(&HEADER);
    let (mut passed, mut total) = (0, 0);
    let mut summary = String::new();
    for (kind, el) in &list {
        let report = match &grid {
            None => check_invariance(el, &setup.field, &model, &points, s.tolerance),
            Some(g) => {
                let inside = |p: Point<f64>| {
                    let q = el.preimage(p);
                    let last = |a: usize| g.origin[a] + g.spacing[a] * (g.counts[a] - 1) as f64;
                    let tol = 1e-9 * g.spacing[1];
                    [q.t, q.x, q.y].iter().enumerate().all(|(a, &v)| v >= g.origin[a] - tol && v <= last(a) + tol)
                };
                let kept: Vec<_> = points.iter().copied().filter(|&p| inside(p)).collect();
                if kept.is_empty() {
                    return Err(CliError::Config(format!("{}: no grid node has its preimage inside the grid", kind.name())));
                }
                check_invariance(el, g, &model, &kept, s.tolerance)
            }
        }
        .map_err(sym_err)?;
        let ok = report.passed();
        total += 1;
        passed += usize::from(ok);
        let _ = writeln!(
            summary,
            "{:<22} {} (max rel {:.3e} over {} points)",
            kind.name(),
            if ok { "pass" } else { "FAIL" },
            report.max_rel(),
            report.points
        );
        for c in &report.checks {
            table.push_cells(vec![
                kind.name().to_string(),
                c.equation.name().to_string(),
                num(el.parameter()),
                num(c.pre),
                num(c.post),
                num(c.diff),
                num(c.rel),
                num(s.tolerance),
                u8::from(c.pass).to_string(),
            ]);
        }
    }
    table.write(&out.join("symmetry.csv"))?;
    let _ = writeln!(summary, "{passed}/{total} elements pass at tolerance {:.1e}", s.tolerance);
    if moduli.is_some() {
        let _ = writeln!(summary, "anisotropic residual model");
    }
    Ok(summary)
}
