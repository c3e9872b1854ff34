//! Reference eigenvalues for small integer symmetric matrices.
//!
//! The characteristic polynomial is formed exactly with the
//! Faddeev–LeVerrier recurrence in integer arithmetic. Its real roots are
//! then isolated between consecutive roots of its derivative (computed the
//! same way, recursively) and refined by bisection under compensated Horner
//! evaluation. Nothing here shares code with the Householder/QL solver.

/// Coefficients `c[0..=n]` of `det(x I - A)`, lowest degree first.
pub fn characteristic_polynomial(a: &[Vec<i64>]) -> Vec<i128> {
    let n = a.len();
    let a: Vec<Vec<i128>> = a
        .iter()
        .map(|r| r.iter().map(|&v| v as i128).collect())
        .collect();
    let mut coeffs = vec![0i128; n + 1];
    coeffs[n] = 1;
    let mut mk = vec![vec![0i128; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = vec![vec![0i128; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i128;
                for l in 0..n {
                    s += a[i][l] * mk[l][j];
                }
                next[i][j] = s;
            }
            next[i][i] += coeffs[n - k + 1];
        }
        let mut tr = 0i128;
        for i in 0..n {
            for l in 0..n {
                tr += a[i][l] * next[l][i];
            }
        }
        debug_assert_eq!(tr % k as i128, 0);
        coeffs[n - k] = -tr / k as i128;
        mk = next;
    }
    coeffs
}

/// Sorted real roots of a polynomial known to have only real roots.
pub fn real_rooted_roots(coeffs: &[f64]) -> Vec<f64> {
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Vec::new();
    }
    if degree == 1 {
        return vec![-coeffs[0] / coeffs[1]];
    }
    let derivative: Vec<f64> = coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| c * (i + 1) as f64)
        .collect();
    let critical = real_rooted_roots(&derivative);
    let lead = coeffs[degree].abs();
    let bound = 1.0
        + coeffs[..degree]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max);
    let mut fences = Vec::with_capacity(degree + 1);
    fences.push(-bound);
    fences.extend(critical);
    fences.push(bound);
    fences
        .windows(2)
        .map(|w| root_between(coeffs, w[0], w[1]))
        .collect()
}

fn root_between(coeffs: &[f64], lo: f64, hi: f64) -> f64 {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (
        horner_compensated(coeffs, lo),
        horner_compensated(coeffs, hi),
    );
    if flo == 0.0 {
        return lo;
    }
    if fhi == 0.0 {
        return hi;
    }
    if flo.signum() == fhi.signum() {
        // touching root at a fence: take the endpoint closer to zero
        return if flo.abs() <= fhi.abs() { lo } else { hi };
    }
    let neg_at_lo = flo < 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = horner_compensated(coeffs, mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == neg_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    (s, (a - (s - z)) + (b - z))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Horner's rule with error-free transformations, about as accurate as
/// evaluation in doubled precision.
fn horner_compensated(coeffs: &[f64], x: f64) -> f64 {
    let mut s = *coeffs.last().expect("non-empty polynomial");
    let mut err = 0.0;
    for &c in coeffs.iter().rev().skip(1) {
        let (p, pe) = two_prod(s, x);
        let (t, se) = two_sum(p, c);
        s = t;
        err = err * x + (pe + se);
    }
    s + err
}

/// Eigenvalues of an integer symmetric matrix, ascending.
pub fn reference_eigenvalues(a: &[Vec<i64>]) -> Vec<f64> {
    let coeffs: Vec<f64> = characteristic_polynomial(a)
        .into_iter()
        .map(|c| c as f64)
        .collect();
    let mut roots = real_rooted_roots(&coeffs);
    roots.sort_by(f64::total_cmp);
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_of_small_matrices() {
        // x^2 - 1
        assert_eq!(
            characteristic_polynomial(&[vec![0, 1], vec![1, 0]]),
            vec![-1, 0, 1]
        );
        // (x - 3)(x + 1)^3 = x^4 - 6x^2 - 8x - 3
        let k4 = (0..4)
            .map(|i| (0..4).map(|j| i64::from(i != j)).collect())
            .collect::<Vec<Vec<i64>>>();
        assert_eq!(characteristic_polynomial(&k4), vec![-3, -8, -6, 0, 1]);
    }

    #[test]
    fn repeated_roots_found() {
        let k4 = (0..4)
            .map(|i| (0..4).map(|j| i64::from(i != j)).collect())
            .collect::<Vec<Vec<i64>>>();
        let roots = reference_eigenvalues(&k4);
        let expect = [-1.0, -1.0, -1.0, 3.0];
        for (r, e) in roots.iter().zip(expect) {
            assert!((r - e).abs() < 1e-9, "{roots:?}");
        }
    }

    #[test]
    fn diagonal_roots() {
        let a = vec![vec![2, 0, 0], vec![0, -3, 0], vec![0, 0, 2]];
        assert_eq!(reference_eigenvalues(&a), vec![-3.0, 2.0, 2.0]);
    }
}
