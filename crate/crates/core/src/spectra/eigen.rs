//! Eigenvalues of dense real symmetric matrices.
//!
//! Householder reduction to tridiagonal form followed by implicit-shift QL
//! iteration. Eigenvectors are never accumulated.

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

/// Relative asymmetry accepted before the solver refuses the input.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Total QL iterations allowed per unit of matrix order.
const QL_SWEEPS_PER_ORDER: usize = 30;

/// Ascending eigenvalues of `m`.
pub fn symmetric_eigenvalues(m: &SymMatrix) -> Result<Vec<f64>> {
    let n = m.order();
    let scale = m.max_abs();
    let defect = m.symmetry_defect();
    if defect > SYMMETRY_TOL * scale {
        return Err(Error::Consistency(format!(
            "matrix is not symmetric: defect {defect:e} exceeds {SYMMETRY_TOL:e} x {scale:e}"
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let (mut diag, mut off) = tridiagonalize(m);
    ql_implicit(&mut diag, &mut off)?;
    diag.sort_by(f64::total_cmp);
    Ok(diag)
}

/// Reduces `m` to a similar tridiagonal matrix, returning the diagonal and
/// the superdiagonal (`off[i]` couples `i` and `i + 1`, `off[n - 1] = 0`).
///
/// Only the upper triangle of the working copy is read and updated.
pub(crate) fn tridiagonalize(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.order();
    let mut a = m.as_slice().to_vec();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];

    for k in 0..n.saturating_sub(2) {
        diag[k] = a[k * n + k];
        let tail = k + 1;
        let len = n - tail;
        let x = &a[k * n + tail..(k + 1) * n];
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        let x0 = x[0];
        let rest_zero = x[1..].iter().all(|t| *t == 0.0);
        if norm == 0.0 || rest_zero {
            off[k] = x0;
            continue;
        }
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let v = &mut v[..len];
        v.copy_from_slice(x);
        v[0] -= alpha;
        let beta = 2.0 / v.iter().map(|t| t * t).sum::<f64>();
        off[k] = alpha;

        // p = beta * S v using the upper triangle of the trailing block S
        let p = &mut p[..len];
        p.fill(0.0);
        for i in 0..len {
            let row = &a[(tail + i) * n + tail + i..(tail + i + 1) * n];
            let vi = v[i];
            let mut acc = row[0] * vi;
            for ((s, vj), pj) in row[1..].iter().zip(&v[i + 1..]).zip(&mut p[i + 1..]) {
                acc += s * vj;
                *pj += s * vi;
            }
            p[i] += acc;
        }
        let mut ptv = 0.0;
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi *= beta;
            ptv += *pi * vi;
        }
        let half = 0.5 * beta * ptv;
        // p becomes w = p - half * v
        for (pi, vi) in p.iter_mut().zip(v.iter()) {
            *pi -= half * vi;
        }
        // S -= v w^T + w v^T on the upper triangle
        for i in 0..len {
            let (vi, wi) = (v[i], p[i]);
            let row = &mut a[(tail + i) * n + tail + i..(tail + i + 1) * n];
            for ((s, vj), wj) in row.iter_mut().zip(&v[i..]).zip(&p[i..]) {
                *s -= vi * wj + wi * vj;
            }
        }
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2];
        off[n - 2] = a[(n - 2) * n + n - 1];
    }
    diag[n - 1] = a[n * n - 1];
    off[n - 1] = 0.0;
    (diag, off)
}

/// Implicit QL with Wilkinson-type shifts on a symmetric tridiagonal matrix.
/// On success `diag` holds the (unsorted) eigenvalues.
pub(crate) fn ql_implicit(diag: &mut [f64], off: &mut [f64]) -> Result<()> {
    let n = diag.len();
    let budget = QL_SWEEPS_PER_ORDER * n.max(1);
    let mut used = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            used += 1;
            if used > budget {
                return Err(Error::Numerical(format!(
                    "QL iteration did not converge within {budget} sweeps"
                )));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated_early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    off[m] = 0.0;
                    deflated_early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated_early {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = 0.0;
        }
    }
    if diag.iter().any(|d| !d.is_finite()) {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tridiagonal_form_preserves_invariants() {
        let m = SymMatrix::from_upper_fn(7, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let (d, e) = tridiagonalize(&m);
        let trace: f64 = d.iter().sum();
        assert!((trace - m.trace()).abs() < 1e-12);
        let fro2: f64 =
            d.iter().map(|x| x * x).sum::<f64>() + 2.0 * e.iter().map(|x| x * x).sum::<f64>();
        assert!((fro2 - m.frobenius_norm().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn diagonal_input() {
        let m = SymMatrix::from_upper_fn(4, |i, j| if i == j { 4.0 - i as f64 } else { 0.0 });
        assert_eq!(symmetric_eigenvalues(&m).unwrap(), vec![1.0, 2.0, 3.0, 4.0]);
    }

    #[test]
    fn tiny_orders() {
        assert!(symmetric_eigenvalues(&SymMatrix::zeros(0))
            .unwrap()
            .is_empty());
        assert_eq!(
            symmetric_eigenvalues(&SymMatrix::identity(1).scaled(-3.0)).unwrap(),
            vec![-3.0]
        );
    }

    #[test]
    fn non_finite_input_exhausts_budget() {
        let mut d = vec![f64::NAN, 1.0];
        let mut e = vec![1.0, 0.0];
        assert!(matches!(
            ql_implicit(&mut d, &mut e),
            Err(Error::Numerical(_))
        ));
    }

    #[test]
    fn asymmetric_input_rejected() {
        let m = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0 + 1e-9, 0.0]]).unwrap();
        assert!(matches!(
            symmetric_eigenvalues(&m),
            Err(Error::Consistency(_))
        ));
        let ok = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0 + 1e-13, 0.0]]).unwrap();
        assert!(symmetric_eigenvalues(&ok).is_ok());
    }
}
