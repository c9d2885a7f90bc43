//! Scalar root finding: real roots of quadratics and cubics, bisection and
//! a bracketed secant (Illinois) iteration.

use crate::scalar::Real;

/// Roots of `a x² + b x + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QuadraticRoots<T> {
    /// Real roots in ascending order (equal for a double root).
    Real(T, T),
    /// Complex-conjugate pair `re ± i·im` with `im > 0`.
    Complex { re: T, im: T },
}

impl<T: Real> QuadraticRoots<T> {
    pub fn real_parts(&self) -> (T, T) {
        match *self {
            QuadraticRoots::Real(a, b) => (a, b),
            QuadraticRoots::Complex { re, .. } => (re, re),
        }
    }
}

/// Requires `a ≠ 0`. Uses the cancellation-free form of the formula.
pub fn quadratic_roots<T: Real>(a: T, b: T, c: T) -> QuadraticRoots<T> {
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        let re = -b / (T::two() * a);
        let im = (-disc).sqrt() / (T::two() * a).abs();
        return QuadraticRoots::Complex { re, im };
    }
    let q = -T::half() * (b + disc.sqrt().copysign(b));
    let (x1, x2) = if q == T::zero() { (T::zero(), T::zero()) } else { (q / a, c / q) };
    QuadraticRoots::Real(x1.min(x2), x1.max(x2))
}

/// A real root with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealRoot<T> {
    pub value: T,
    pub multiplicity: u8,
}

/// `a3 x³ + a2 x² + a1 x + a0` by Horner's rule.
pub fn cubic_eval<T: Real>(c: [T; 4], x: T) -> T {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

fn cubic_slope<T: Real>(c: [T; 4], x: T) -> T {
    (T::lit(3.0) * c[0] * x + T::two() * c[1]) * x + c[2]
}

/// Newton polishing; keeps the iterate only while `|p|` decreases.
fn polish<T: Real>(c: [T; 4], mut x: T) -> T {
    let mut fx = cubic_eval(c, x).abs();
    for _ in 0..8 {
        let slope = cubic_slope(c, x);
        if slope == T::zero() {
            break;
        }
        let next = x - cubic_eval(c, x) / slope;
        let fn_ = cubic_eval(c, next).abs();
        if !(fn_ < fx) {
            break;
        }
        x = next;
        fx = fn_;
    }
    x
}

/// All real roots of `c[0] x³ + c[1] x² + c[2] x + c[3]` (`c[0] ≠ 0`), in
/// ascending order, with multiplicities.
///
/// Closed form (trigonometric for three real roots, Cardano otherwise),
/// followed by Newton polishing. Roots closer than a relative `1e-7` are
/// merged, which is the resolution limit of a double root in floating
/// point.
pub fn cubic_real_roots<T: Real>(c: [T; 4]) -> Vec<RealRoot<T>> {
    let [a3, a2, a1, a0] = c;
    let (b, cc, d) = (a2 / a3, a1 / a3, a0 / a3);
    let three = T::lit(3.0);
    // x = y − b/3 gives y³ + p y + q = 0.
    let shift = b / three;
    let p = cc - b * b / three;
    let q = T::two() * b * b * b / T::lit(27.0) - b * cc / three + d;
    let half_q = q * T::half();
    let third_p = p / three;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let scale = T::one().max(b.abs()).max(cc.abs().sqrt()).max(d.abs().cbrt());

    let mut raw: Vec<T> = if p == T::zero() && q == T::zero() {
        vec![-shift; 3]
    } else if disc > T::zero() {
        let sq = disc.sqrt();
        let u = (-half_q - sq.copysign(half_q)).cbrt();
        let v = if u == T::zero() { T::zero() } else { -third_p / u };
        vec![u + v - shift]
    } else {
        let m = T::two() * (-third_p).sqrt();
        let arg = (three * q / (p * m)).max(-T::one()).min(T::one());
        let theta = arg.acos() / three;
        let step = T::two() * T::PI() / three;
        (0..3)
            .map(|k| m * (theta - step * T::from_usize_lossy(k)).cos() - shift)
            .collect()
    };
    for x in raw.iter_mut() {
        *x = polish(c, *x);
    }
    raw.sort_by(|x, y| x.partial_cmp(y).expect("finite roots"));

    let merge_tol = T::lit(1e-7) * scale;
    let mut out: Vec<RealRoot<T>> = Vec::new();
    for x in raw {
        match out.last_mut() {
            Some(last) if (x - last.value).abs() <= merge_tol => {
                let m = T::from_u8(last.multiplicity).unwrap();
                last.value = (last.value * m + x) / (m + T::one());
                last.multiplicity += 1;
            }
            _ => out.push(RealRoot { value: x, multiplicity: 1 }),
        }
    }
    // A near-zero positive discriminant can hide a double root that the
    // one-real-root branch does not report; recover it from the critical
    // points.
    if out.len() == 1 && out[0].multiplicity == 1 {
        if let QuadraticRoots::Real(lo, hi) = quadratic_roots(three * a3, T::two() * a2, a1) {
            for crit in [lo, hi] {
                let val = cubic_eval(c, crit);
                let mag = (a3 * crit * crit * crit).abs() + (a2 * crit * crit).abs() + (a1 * crit).abs() + a0.abs();
                if val.abs() <= T::lit(64.0) * T::epsilon() * mag && (crit - out[0].value).abs() > merge_tol {
                    out.push(RealRoot { value: crit, multiplicity: 2 });
                }
            }
            out.sort_by(|x, y| x.value.partial_cmp(&y.value).unwrap());
        }
    }
    out
}

/// Plain bisection on a sign change. `f(lo)` and `f(hi)` must differ in
/// sign (or one of them be zero). Returns the midpoint of the final
/// bracket.
pub fn bisect<T: Real>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T, iterations: usize) -> T {
    let mut f_lo = f(lo);
    if f_lo == T::zero() {
        return lo;
    }
    for _ in 0..iterations {
        let mid = (lo + hi) * T::half();
        if mid <= lo.min(hi) || mid >= lo.max(hi) {
            break;
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return mid;
        }
        if (f_mid < T::zero()) == (f_lo < T::zero()) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) * T::half()
}

/// Outcome of [`illinois`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bracketed<T> {
    pub root: T,
    pub residual: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Regula falsi with the Illinois modification on a sign-change bracket.
/// Stops when `|f| ≤ ftol` or the bracket is narrower than `xtol`.
pub fn illinois<T: Real, E>(
    mut f: impl FnMut(T) -> Result<T, E>,
    mut a: T,
    mut b: T,
    mut fa: T,
    mut fb: T,
    xtol: T,
    ftol: T,
    max_iter: usize,
) -> Result<Bracketed<T>, E> {
    let mut side = 0i8;
    for it in 0..max_iter {
        let x = (a * fb - b * fa) / (fb - fa);
        let x = if x.is_finite() && x > a.min(b) && x < a.max(b) { x } else { (a + b) * T::half() };
        let fx = f(x)?;
        if fx.abs() <= ftol || (b - a).abs() <= xtol {
            return Ok(Bracketed { root: x, residual: fx, iterations: it + 1, converged: true });
        }
        if (fx < T::zero()) == (fb < T::zero()) {
            b = x;
            fb = fx;
            if side == -1 {
                fa = fa * T::half();
            }
            side = -1;
        } else {
            a = x;
            fa = fx;
            if side == 1 {
                fb = fb * T::half();
            }
            side = 1;
        }
    }
    let (root, residual) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
    Ok(Bracketed { root, residual, iterations: max_iter, converged: false })
}
