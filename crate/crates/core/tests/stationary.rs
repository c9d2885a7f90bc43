use std::f64::consts::PI;

use pem::*;

fn reference() -> ModelParams<f64> {
    ModelParams { load: 16.0 * PI, ..ModelParams::default() }
}

fn generic() -> ModelParams<f64> {
    ModelParams {
        lambda: 0.7,
        mu: 1.9,
        conductivity: 2.5,
        rho_fluid: 1.3,
        p_ambient: 0.4,
        p_steady: 1.7,
        inner_radius: 0.6,
        outer_radius: 2.3,
        load: 30.0,
        ..ModelParams::default()
    }
}

struct Smooth;

impl RadialProfile<f64> for Smooth {
    fn eval(&self, order: u8, r: f64) -> f64 {
        match order {
            0 => 0.5 + 0.1 * r.sin(),
            1 => 0.1 * r.cos(),
            _ => -0.1 * r.sin(),
        }
    }
}

fn solutions() -> Vec<(ModelParams<f64>, StationarySolution<f64>)> {
    let mut out = Vec::new();
    for p in [reference(), generic()] {
        let r_st = rst_cubic(&p).unwrap().r_st;
        out.push((p, neumann_solution(&p, r_st).unwrap()));
        out.push((p, dirichlet_solution(&p, r_st).unwrap()));
    }
    out
}

#[test]
fn ring_residual_vanishes_at_a_thousand_radii() {
    for (p, sol) in solutions() {
        let emb = sol.embedding(Box::new(Smooth), Box::new(Smooth));
        let polar = emb.polar();
        let (r0, r_st) = (p.inner_radius, sol.steady_radius);
        let scale = p.lame_star() * (sol.c1.abs() + sol.cm1.abs() + sol.c0.abs()).max(1.0);
        for i in 0..1000 {
            let r = r0 + (r_st - r0) * (i as f64 + 0.5) / 1000.0;
            for opts in [RingOptions { quasi_static: true }, RingOptions::default()] {
                let res = residual_ring(&polar, &p, Point::new(0.0, r, 0.0), opts).unwrap();
                assert!(res.max_abs() <= 1e-11 * scale, "{:?} at r = {r}: {res:?}", sol.case);
            }
        }
    }
}

fn grid_residual(p: &ModelParams<f64>, sol: &StationarySolution<f64>, cells: usize) -> f64 {
    let emb = sol.embedding(Box::new(Smooth), Box::new(Smooth));
    let (r0, r1) = (p.inner_radius, sol.steady_radius);
    let h = (r1 - r0) / cells as f64;
    let grid = GridField::sample(&emb.polar(), [0.0, r0, 0.0], [1.0, h, 1.0], [1, cells + 1, 1]).unwrap();
    // Radii shared by every level of the refinement.
    (1..8)
        .map(|k| {
            let r = r0 + (r1 - r0) * k as f64 / 8.0;
            residual_ring(&grid, p, Point::new(0.0, r, 0.0), RingOptions::default()).unwrap().max_abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn grid_residual_is_second_order() {
    for (p, sol) in solutions() {
        let e: Vec<f64> = [32, 64, 128].iter().map(|&n| grid_residual(&p, &sol, n)).collect();
        for pair in e.windows(2) {
            let ratio = pair[0] / pair[1];
            assert!((3.5..=4.5).contains(&ratio), "{:?}: {e:?}", sol.case);
        }
    }
}

#[test]
fn neumann_closes_the_traction_condition_at_the_cubic_root() {
    for p in [reference(), generic()] {
        let rep = rst_cubic(&p).unwrap();
        let sol = neumann_solution(&p, rep.r_st).unwrap();
        let load = p.load / (2.0 * PI * rep.r_st);
        assert!(sol.traction_residual(rep.r_st, &p).abs() <= 1e-10 * load);
        assert!(sol.displacement(p.inner_radius).abs() < 1e-14);
        assert!((sol.displacement(rep.r_st) - (rep.r_st - p.outer_radius)).abs() < 1e-14);
    }
}

#[test]
fn reference_cubic_matches_bisection() {
    let rep = rst_cubic(&reference()).unwrap();
    let c = rep.coefficients;
    assert_eq!(c[0], 2.0);
    assert_eq!(c[2], 1.0);
    assert!(c[1].abs() < 1e-14 && (c[3] + 6.0).abs() < 1e-14);
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if 2.0 * mid.powi(3) + mid - 6.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    assert!((rep.r_st - lo).abs() <= 1e-10);
    assert!((rep.r_st - 1.326956285678968).abs() <= 1e-12);
    assert_eq!(rep.roots.len(), 1);
}

#[test]
fn zero_load_keeps_the_initial_radius() {
    for p in [ModelParams { load: 0.0, ..reference() }, ModelParams { load: 0.0, ..generic() }] {
        assert_eq!(rst_cubic(&p).unwrap().r_st, p.outer_radius);
        let eq = ModelParams { p_steady: p.p_ambient, ..p };
        assert_eq!(rst_dirichlet(&eq).unwrap().r_st, p.outer_radius);
    }
}

#[test]
fn dirichlet_condition_agrees_with_the_cubic_at_equal_pressures() {
    for p in [reference(), ModelParams { p_steady: 0.4, ..generic() }] {
        let d = rst_dirichlet(&p).unwrap();
        let c = rst_cubic(&p).unwrap();
        assert!((d.r_st - c.r_st).abs() <= 1e-8);
        assert!(d.residual.abs() <= 1e-10);
    }
}

#[test]
fn dirichlet_root_satisfies_the_traction_condition() {
    let p = generic();
    let d = rst_dirichlet(&p).unwrap();
    let sol = dirichlet_solution(&p, d.r_st).unwrap();
    let scale = p.load / (2.0 * PI * d.r_st) + p.lame_star();
    assert!(sol.traction_residual(d.r_st, &p).abs() <= 1e-10 * scale);
    assert!((sol.pressure(p.inner_radius) - p.p_ambient).abs() <= 1e-12);
    assert!((sol.pressure(d.r_st) - p.p_steady).abs() <= 1e-12);
}
