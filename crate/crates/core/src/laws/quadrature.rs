//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;
/// Levels always subdivided, so symmetric integrands cannot fool the first
/// error estimate.
const MIN_DEPTH: u32 = 4;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` by adaptive
/// Simpson with Richardson correction.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    refine(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || (depth <= MAX_DEPTH - MIN_DEPTH && delta.abs() <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    refine(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + refine(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates `f` over `[a, b]` when `f` has square-root behaviour at the
/// endpoints, via `x = a + (b - a) sin^2 u`, `u` in `[0, pi/2]`.
pub fn integrate_sqrt_endpoints(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let width = b - a;
    let g = |u: f64| {
        let (s, c) = u.sin_cos();
        let jacobian = 2.0 * width * s * c;
        if jacobian == 0.0 {
            return 0.0;
        }
        f(a + width * s * s) * jacobian
    };
    adaptive_simpson(g, 0.0, std::f64::consts::FRAC_PI_2, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_exact() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-12), 0.0);
    }

    #[test]
    fn smooth_integrand() {
        let v = adaptive_simpson(f64::sin, 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
    }

    #[test]
    fn quarter_circle_area() {
        let v = integrate_sqrt_endpoints(|x| (1.0 - x * x).max(0.0).sqrt(), -1.0, 1.0, 1e-13);
        assert!((v - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let v = integrate_sqrt_endpoints(|x| 1.0 / x.sqrt(), 0.0, 4.0, 1e-12);
        assert!((v - 4.0).abs() < 1e-10, "{v}");
    }
}
