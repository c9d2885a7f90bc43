//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so the lines always reach stdout.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use pem::symmetry::displacement_field;
use pem::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);
type Case = (ModelParams<f64>, Box<dyn FieldSource<f64>>, Vec<Point<f64>>);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn reference() -> ModelParams<f64> {
    ModelParams { load: 16.0 * PI, ..ModelParams::default() }
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iterations: usize) -> f64 {
    let f_lo = f(lo);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) == (f_lo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn random_poly(rng: &mut ChaCha8Rng, degree: u8) -> Polynomial<f64> {
    let mut p = Polynomial::zero();
    for a in 0..=degree {
        for b in 0..=degree - a {
            for c in 0..=degree - a - b {
                p.add_term((a, b, c), rng.gen_range(-1.0..1.0));
            }
        }
    }
    p
}

fn random_field(rng: &mut ChaCha8Rng) -> PolynomialField<f64> {
    PolynomialField::new(std::array::from_fn(|_| random_poly(rng, 3)))
}

fn random_params(rng: &mut ChaCha8Rng) -> ModelParams<f64> {
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

fn random_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<Point<f64>> {
    (0..count).map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

fn annulus_points(rng: &mut ChaCha8Rng, count: usize, lo: f64, hi: f64) -> Vec<Point<f64>> {
    (0..count)
        .map(|_| {
            let r = rng.gen_range(lo..hi);
            let phi = rng.gen_range(0.0..std::f64::consts::TAU);
            Point::new(rng.gen_range(-1.0..1.0), r * phi.cos(), r * phi.sin())
        })
        .collect()
}

fn harmonic_shift(rng: &mut ChaCha8Rng, degree: u8) -> GroupElement<f64> {
    let mut terms = || (0..=degree).map(|n| (n, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect::<Vec<_>>();
    let (phi, psi) = (terms(), terms());
    let (g1, g2) = generate_displacement_symmetry(&HarmonicPotentialPair::from_complex_powers(&phi, &psi)).unwrap();
    GroupElement::DisplacementShift { epsilon: rng.gen_range(-1.0..1.0), g1, g2 }
}

fn zero_load() -> Outcome {
    for p in [ModelParams::default(), ModelParams { lambda: 0.3, mu: 2.2, inner_radius: 0.4, outer_radius: 3.1, ..ModelParams::default() }] {
        let p = ModelParams { load: 0.0, ..p };
        let start = Instant::now();
        let rep = rst_cubic(&p).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        check(rep.r_st == p.outer_radius, format!("r_st = {} for R0 = {}", rep.r_st, p.outer_radius))?;
        check(elapsed < Duration::from_millis(1), format!("took {elapsed:?}"))?;
    }
    Ok("r_st = R0 exactly, < 1 ms".into())
}

fn cubic_oracle() -> Outcome {
    let start = Instant::now();
    let p = reference();
    let rep = rst_cubic(&p).map_err(|e| e.to_string())?;
    let c = rep.coefficients;
    check(
        c[0] == 2.0 && c[1].abs() < 1e-14 && c[2] == 1.0 && (c[3] + 6.0).abs() < 1e-14,
        format!("coefficients {c:?}"),
    )?;
    let oracle = bisect(|r| 2.0 * r * r * r + r - 6.0, 1.0, 2.0, 200);
    check((rep.r_st - oracle).abs() <= 1e-10, format!("{} vs bisection {oracle}", rep.r_st))?;
    check(rep.r_st > 1.0 && rep.r_st < 2.0, "root outside (1, 2)")?;

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for k in 0..1000 {
        let (lambda, mu) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let r0 = rng.gen_range(0.1..5.0);
        let big_r = r0 * rng.gen_range(1.05..5.0);
        let load = 4.0 * PI * (lambda + mu) * big_r * (1.0 + rng.gen_range(0.0..20.0));
        let q = ModelParams { lambda, mu, inner_radius: r0, outer_radius: big_r, load, ..ModelParams::default() };
        let coeffs = rst_cubic_coefficients(&q);
        let inside = cubic_real_roots(coeffs).iter().filter(|r| r.value > r0 && r.value < big_r).count();
        check(inside == 1, format!("draw {k}: {inside} roots in (r0, R0) for {q:?}"))?;
        let rep = rst_cubic(&q).map_err(|e| format!("draw {k}: {e}"))?;
        let f = |r: f64| ((coeffs[0] * r + coeffs[1]) * r + coeffs[2]) * r + coeffs[3];
        let oracle = bisect(f, r0, big_r, 200);
        check((rep.r_st - oracle).abs() <= 1e-10 * big_r, format!("draw {k}: {} vs {oracle}", rep.r_st))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(1), format!("took {elapsed:?}"))?;
    Ok(format!("r_st = {:.15} (bisection {oracle:.15}), 1000 draws with one root, {elapsed:.1?}", rep.r_st))
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

fn stationary_residuals() -> Outcome {
    let p = reference();
    let r_st = rst_cubic(&p).map_err(|e| e.to_string())?.r_st;
    let mut worst: f64 = 0.0;
    let mut ratios = Vec::new();
    for sol in [neumann_solution(&p, r_st), dirichlet_solution(&p, r_st)] {
        let sol = sol.map_err(|e| e.to_string())?;
        let emb = sol.embedding(Box::new(Smooth), Box::new(Smooth));
        let polar = emb.polar();
        for i in 0..1000 {
            let r = 1.0 + (r_st - 1.0) * (i as f64 + 0.5) / 1000.0;
            let res = residual_ring(&polar, &p, Point::new(0.0, r, 0.0), RingOptions::default()).map_err(|e| e.to_string())?;
            worst = worst.max(res.max_abs());
        }
        let grid_error = |cells: usize| -> Result<f64, String> {
            let h = (r_st - 1.0) / cells as f64;
            let grid = GridField::sample(&polar, [0.0, 1.0, 0.0], [1.0, h, 1.0], [1, cells + 1, 1]).map_err(|e| e.to_string())?;
            let mut e: f64 = 0.0;
            for k in 1..8 {
                let r = 1.0 + (r_st - 1.0) * k as f64 / 8.0;
                let res = residual_ring(&grid, &p, Point::new(0.0, r, 0.0), RingOptions::default()).map_err(|e| e.to_string())?;
                e = e.max(res.max_abs());
            }
            Ok(e)
        };
        let e = [grid_error(32)?, grid_error(64)?, grid_error(128)?];
        for pair in e.windows(2) {
            let ratio = pair[0] / pair[1];
            check((3.5..=4.5).contains(&ratio), format!("{:?}: grid ratio {ratio}", sol.case))?;
            ratios.push(ratio);
        }
    }
    check(worst <= 1e-11, format!("analytic residual {worst:e}"))?;
    Ok(format!("max analytic residual {worst:.1e}, grid ratios {ratios:.2?}"))
}

fn boundary_closure() -> Outcome {
    let p = reference();
    let r_st = rst_cubic(&p).map_err(|e| e.to_string())?.r_st;
    let sol = neumann_solution(&p, r_st).map_err(|e| e.to_string())?;
    let rel = sol.traction_residual(r_st, &p).abs() / (p.load / (2.0 * PI * r_st));
    check(rel <= 1e-10, format!("relative traction residual {rel:e}"))?;
    Ok(format!("relative traction residual {rel:.1e}"))
}

fn transient_convergence() -> Outcome {
    let p = reference();
    let r_st = rst_cubic(&p).map_err(|e| e.to_string())?.r_st;
    let initial = InitialProfiles::uniform(1.00001, 0.99999);
    let run = |cells: usize| simulate(&p, &SimConfig { cells, quasi_static: true, ..SimConfig::default() }, &initial);
    let start = Instant::now();
    let traj = run(200).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let last = traj.last();
    let steady = steady_state_check(last, &p, 1e-8);
    check(steady.is_steady, format!("not steady at t = {} (max rate {:e})", last.t, steady.max_rate))?;
    let gap = (last.s - r_st).abs() / (2.0 - r_st);
    check(gap <= 0.01, format!("|S - r_st| = {gap:e} of the shrink"))?;
    check(elapsed < Duration::from_secs(60), format!("N = 200 took {elapsed:?}"))?;
    let s100 = run(100).map_err(|e| e.to_string())?.last().s;
    let s400 = run(400).map_err(|e| e.to_string())?.last().s;
    let ratio = (last.s - s100) / (s400 - last.s);
    check((3.5..=4.5).contains(&ratio), format!("refinement ratio {ratio}"))?;
    Ok(format!("gap {gap:.1e} of the shrink, N = 200 in {elapsed:.1?}, refinement ratio {ratio:.2}"))
}

fn symmetry_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let err = |e: SymmetryError| e.to_string();
    let run = |el: &GroupElement<f64>, f: &dyn FieldSource<f64>, m: &ResidualModel<f64>, pts: &[Point<f64>]| {
        check_invariance(el, &f, m, pts, 1e-12).map_err(err)
    };
    let shifts = |rng: &mut ChaCha8Rng| {
        let mut v = vec![GroupElement::PressureShift { epsilon: 0.7, g: TimeFunction::Sine { amplitude: 1.3, omega: 2.0 } }];
        for degree in 1..=6 {
            v.push(harmonic_shift(rng, degree));
        }
        v
    };

    // Analytic fields.
    let mut fields: Vec<Case> = Vec::new();
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let pts = random_points(&mut rng, 12);
        fields.push((p, Box::new(random_field(&mut rng)), pts));
    }
    let sp = ModelParams { p_ambient: 0.3, p_steady: 1.1, osmotic: 0.2, ..reference() };
    let r_st = rst_cubic(&sp).map_err(|e| e.to_string())?.r_st;
    let emb = dirichlet_solution(&sp, r_st).map_err(|e| e.to_string())?.embedding(Box::new(Uniform(1.2)), Box::new(Uniform(0.4)));
    let pts = annulus_points(&mut rng, 50, 1.05, r_st - 0.05);
    fields.push((sp, Box::new(emb), pts));
    for (p, f, pts) in &fields {
        let model = ResidualModel::Isotropic(*p);
        for el in shifts(&mut rng) {
            let rep = run(&el, f.as_ref(), &model, pts)?;
            check(rep.passed(), format!("{el}: max rel {:e}", rep.max_rel()))?;
        }
        let eps = rng.gen_range(-1.0..1.0);
        let el = GroupElement::concentration_scaling(eps, p);
        check(run(&el, f.as_ref(), &model, pts)?.passed(), format!("{el}"))?;
        let image = apply_group(el, f.as_ref()).map_err(err)?;
        for &pt in pts.iter().take(4) {
            let before = model.residual(f.as_ref(), pt).map_err(|e| e.to_string())?;
            let after = model.residual(&image, pt).map_err(|e| e.to_string())?;
            for eq in Equation::ALL {
                let want = if eq == Equation::Solute { eps.exp() * before.get(eq) } else { before.get(eq) };
                check((after.get(eq) - want).abs() <= 1e-12 * want.abs().max(1.0), format!("scaling, {eq:?}"))?;
            }
        }
    }

    // Grids: shifts converge at second order, a quarter turn maps nodes exactly.
    let p = random_params(&mut rng);
    let model = ResidualModel::Isotropic(p);
    let field = random_field(&mut rng);
    let probe = [Point::new(0.2, 0.25, -0.25), Point::new(0.2, -0.5, 0.5), Point::new(0.2, 0.0, 0.75)];
    let mut ratios = Vec::new();
    for el in [harmonic_shift(&mut rng, 5), GroupElement::PressureShift { epsilon: 0.7, g: TimeFunction::Sine { amplitude: 1.3, omega: 2.0 } }] {
        let image = apply_group(el.clone(), &field).map_err(err)?;
        let grid_err = |h: f64| -> Result<f64, String> {
            let n = (2.0 / h).round() as usize + 1;
            let (o, s, c) = ([0.0, -1.0, -1.0], [h, h, h], [5, n, n]);
            let a = GridField::sample(&field, o, s, c).map_err(|e| e.to_string())?;
            let b = GridField::sample(&image, o, s, c).map_err(|e| e.to_string())?;
            let mut e: f64 = 0.0;
            for &pt in &probe {
                let (ra, rb) = (model.residual(&a, pt).map_err(|e| e.to_string())?, model.residual(&b, pt).map_err(|e| e.to_string())?);
                for i in 0..6 {
                    e = e.max((ra.values[i] - rb.values[i]).abs());
                }
            }
            Ok(e)
        };
        let e = [grid_err(0.25)?, grid_err(0.125)?, grid_err(0.0625)?];
        if e[2] > 1e-10 {
            let r = (e[0] / e[1]).min(e[1] / e[2]);
            check(r > 3.5, format!("{el}: grid errors {e:?}"))?;
            ratios.push(r);
        }
    }
    let grid = GridField::sample(&field, [0.0, -1.0, -1.0], [0.1, 0.25, 0.25], [4, 9, 9]).map_err(|e| e.to_string())?;
    let mut nodes = Vec::new();
    for it in 0..4 {
        for ix in 0..9 {
            for iy in 0..9 {
                nodes.push(grid.node([it, ix, iy]));
            }
        }
    }
    let rep = check_invariance(&GroupElement::Rotation(FRAC_PI_2), &grid, &model, &nodes, 1e-12).map_err(err)?;
    check(rep.passed(), format!("quarter turn: max rel {:e}", rep.max_rel()))?;

    // Negative control.
    let g1 = Polynomial::zero().with_term((0, 2, 0), 1.0);
    let el = GroupElement::DisplacementShift { epsilon: 1.0, g1: g1.clone(), g2: Polynomial::zero() };
    let pts = random_points(&mut rng, 6);
    let rep = check_invariance(&el, &field, &model, &pts, 1e-12).map_err(err)?;
    let failing: Vec<_> = rep.checks.iter().filter(|c| !c.pass).map(|c| c.equation).collect();
    check(failing == vec![Equation::Momentum1], format!("negative control fails on {failing:?}"))?;
    let m1 = rep.checks.iter().find(|c| c.equation == Equation::Momentum1).expect("momentum row");
    check((m1.diff - 2.0 * p.lame_star()).abs() <= 1e-10, format!("control residual {} vs 2λ* = {}", m1.diff, 2.0 * p.lame_star()))?;
    let g = verify_displacement_symmetry(&displacement_field(&g1, &Polynomial::zero()), &p.isotropic_moduli(), &pts).map_err(err)?;
    check((g - 2.0 * p.lame_star()).abs() <= 1e-12, format!("elastic operator of the control {g}"))?;
    Ok(format!("21 fields, grid shift ratios {ratios:.2?}, control residual = 2λ*"))
}

fn random_moduli(rng: &mut ChaCha8Rng) -> AnisotropicModuli<f64> {
    loop {
        let e = AnisotropicModuli::new(
            rng.gen_range(1.0..3.0),
            rng.gen_range(1.0..3.0),
            rng.gen_range(0.5..2.0),
            rng.gen_range(-0.5..0.5),
            rng.gen_range(-0.3..0.3),
            rng.gen_range(-0.3..0.3),
        );
        if let Ok(e) = e {
            return e;
        }
    }
}

fn anisotropic_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let e = p.isotropic_moduli();
        let field = random_field(&mut rng);
        for pt in random_points(&mut rng, 4) {
            let iso = residual_cartesian_iso(&field, &p, pt).map_err(|e| e.to_string())?;
            let aniso = residual_cartesian_aniso(&field, &e, &p, pt).map_err(|e| e.to_string())?;
            for i in 0..6 {
                worst = worst.max((iso.values[i] - aniso.values[i]).abs() / iso.values[i].abs().max(1.0));
            }
        }
    }
    check(worst <= 1e-12, format!("iso vs aniso {worst:e}"))?;
    let mut shifts = 0;
    for _ in 0..10 {
        let p = random_params(&mut rng);
        let e = random_moduli(&mut rng);
        let model = ResidualModel::Anisotropic(e, p);
        let field = random_field(&mut rng);
        let pts = random_points(&mut rng, 8);
        let mut elements = vec![
            GroupElement::TimeTranslation(0.4),
            GroupElement::XTranslation(0.3),
            GroupElement::YTranslation(-0.6),
            GroupElement::concentration_scaling(0.5, &p),
            GroupElement::PressureShift { epsilon: 1.1, g: TimeFunction::Sine { amplitude: 0.6, omega: 3.0 } },
        ];
        for degree in 1..=6 {
            for (g1, g2) in polynomial_displacement_solutions(&e, degree) {
                shifts += 1;
                elements.push(GroupElement::DisplacementShift { epsilon: 0.7, g1, g2 });
            }
        }
        for el in &elements {
            let rep = check_invariance(el, &field, &model, &pts, 1e-12).map_err(|e| e.to_string())?;
            check(rep.passed(), format!("{el}: max rel {:e}", rep.max_rel()))?;
        }
        check(check_invariance(&GroupElement::Rotation(0.5), &field, &model, &pts, 1e-12).is_err(), "rotation accepted")?;
    }
    Ok(format!("iso = aniso to {worst:.1e}; {shifts} anisotropic displacement shifts pass"))
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .expect("output directory")
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn determinism() -> Outcome {
    let runs: [(&str, &[&str]); 7] = [
        ("stationary", &["load=16pi"]),
        ("stationary", &["load=16pi", "case=dirichlet", "p_steady=0.5"]),
        ("rst", &["load=16pi"]),
        ("transient", &["load=16pi", "cells=64", "t_end=3"]),
        ("symmetry", &["field=stationary", "load=16pi"]),
        ("sweep", &["sweep_values=0:16pi:6"]),
        ("sweep", &["sweep_task=transient", "sweep_values=pi,4pi,8pi", "cells=32", "t_end=2"]),
    ];
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (k, (cmd, sets)) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let dir = tmp.path().join(format!("{k}-{rep}"));
            let mut c = Command::new(env!("CARGO_BIN_EXE_pem-sim"));
            c.arg(cmd).arg("--out").arg(&dir);
            for s in *sets {
                c.arg("--set").arg(s);
            }
            let status = c.output().map_err(|e| e.to_string())?;
            check(status.status.success(), format!("{cmd} {sets:?}: {}", String::from_utf8_lossy(&status.stderr)))?;
            outputs.push(csv_files(&dir));
        }
        check(!outputs[0].is_empty(), format!("{cmd}: no CSV written"))?;
        check(outputs[0] == outputs[1], format!("{cmd} {sets:?}: outputs differ"))?;
        files += outputs[0].len();
    }
    Ok(format!("{} runs, {files} CSV files byte-identical", runs.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("zero-load identity", zero_load),
        ("cubic oracle", cubic_oracle),
        ("stationary residual oracle", stationary_residuals),
        ("boundary closure", boundary_closure),
        ("transient-to-stationary convergence", transient_convergence),
        ("symmetry suite", symmetry_suite),
        ("anisotropic consistency", anisotropic_consistency),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
