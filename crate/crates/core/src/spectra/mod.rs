//! Spectra of symmetric matrices: eigenvalues, graph energy, empirical
//! spectral distributions and moments.

mod eigen;
pub mod oracle;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::SymMatrix;

pub use eigen::SYMMETRY_TOL;

/// Eigenvalues of a symmetric matrix in nondecreasing order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` ascending.
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        Self {
            eigenvalues: values,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Sum of absolute eigenvalues.
    pub fn energy(&self) -> f64 {
        self.eigenvalues.iter().map(|l| l.abs()).sum()
    }

    pub fn scaled(&self, c: f64) -> Spectrum {
        Spectrum::from_values(self.eigenvalues.iter().map(|l| l * c).collect())
    }

    /// Fraction of eigenvalues `<= x`.
    pub fn esd(&self, x: f64) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        let count = self.eigenvalues.partition_point(|l| *l <= x);
        count as f64 / self.eigenvalues.len() as f64
    }

    /// `(1/n) sum lambda_i^k`.
    pub fn moment(&self, k: u32) -> f64 {
        if self.eigenvalues.is_empty() {
            return 0.0;
        }
        let k = k as i32;
        self.eigenvalues.iter().map(|l| l.powi(k)).sum::<f64>() / self.eigenvalues.len() as f64
    }

    /// Kolmogorov–Smirnov distance between the ESD and a CDF, comparing both
    /// one-sided limits at every eigenvalue. The left limit of `cdf` is taken
    /// at the next float below, so CDFs with atoms are handled too.
    pub fn ks_distance(&self, cdf: impl Fn(f64) -> f64) -> f64 {
        let n = self.eigenvalues.len();
        if n == 0 {
            return 0.0;
        }
        let nf = n as f64;
        let mut worst = 0.0_f64;
        let mut i = 0;
        while i < n {
            let x = self.eigenvalues[i];
            let mut j = i;
            while j < n && self.eigenvalues[j] == x {
                j += 1;
            }
            let before = i as f64 / nf;
            let after = j as f64 / nf;
            worst = worst
                .max((after - cdf(x)).abs())
                .max((before - cdf(x.next_down())).abs());
            i = j;
        }
        worst.min(1.0)
    }

    /// `max_i |lambda_i + lambda_{n+1-i}|`; zero for a spectrum symmetric about 0.
    pub fn symmetry_defect(&self) -> f64 {
        let v = &self.eigenvalues;
        v.iter()
            .zip(v.iter().rev())
            .map(|(a, b)| (a + b).abs())
            .fold(0.0, f64::max)
    }

    /// One eigenvalue per line with 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.eigenvalues.len() * 25);
        for l in &self.eigenvalues {
            let _ = writeln!(out, "{l:.16e}");
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Spectrum> {
        let values = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim().parse::<f64>().map_err(|e| {
                    Error::Consistency(format!("line {}: bad eigenvalue {l:?}: {e}", i + 1))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Spectrum::from_values(values))
    }
}

pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Spectrum> {
    Ok(Spectrum {
        eigenvalues: eigen::symmetric_eigenvalues(m)?,
    })
}

/// Energy `sum |lambda_i|` of a symmetric matrix.
pub fn energy(m: &SymMatrix) -> Result<f64> {
    Ok(eigenvalues_sym(m)?.energy())
}

/// Spectrum of `n^{-1/2} M`.
pub fn scaled_spectrum(m: &SymMatrix) -> Result<Spectrum> {
    let n = m.order();
    let s = eigenvalues_sym(m)?;
    if n == 0 {
        return Ok(s);
    }
    Ok(s.scaled(1.0 / (n as f64).sqrt()))
}

pub fn esd_eval(s: &Spectrum, x: f64) -> f64 {
    s.esd(x)
}

pub fn moment(s: &Spectrum, k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("moment order must be positive".into()));
    }
    Ok(s.moment(k))
}

pub fn ks_distance(s: &Spectrum, cdf: impl Fn(f64) -> f64) -> f64 {
    s.ks_distance(cdf)
}

/// `E(X) + E(Y) - E(X + Y)`, nonnegative up to rounding.
pub fn kyfan_gap(x: &SymMatrix, y: &SymMatrix) -> Result<f64> {
    let sum = x.try_add(y)?;
    Ok(energy(x)? + energy(y)? - energy(&sum)?)
}

pub fn symmetry_defect(s: &Spectrum) -> f64 {
    s.symmetry_defect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{center, sample_er, sample_multipartite, PartSizes, PartitionSpec, Seed};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn two_cycle() {
        let m = SymMatrix::complete_graph(2);
        assert!(close(
            eigenvalues_sym(&m).unwrap().values(),
            &[-1.0, 1.0],
            1e-14
        ));
    }

    #[test]
    fn complete_graph_spectrum() {
        let s = eigenvalues_sym(&SymMatrix::complete_graph(4)).unwrap();
        assert!(close(s.values(), &[-1.0, -1.0, -1.0, 3.0], 1e-12));
    }

    #[test]
    fn random_integer_matrix_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rows = crate::check::random_integer_symmetric(&mut rng, 6);
        let m = SymMatrix::from_upper_fn(6, |i, j| rows[i][j] as f64);
        let s = eigenvalues_sym(&m).unwrap();
        let reference = oracle::reference_eigenvalues(&rows);
        assert!(
            close(s.values(), &reference, 1e-8),
            "{:?} vs {reference:?}",
            s.values()
        );
    }

    #[test]
    fn energy_examples() {
        assert!((energy(&SymMatrix::complete_graph(5)).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(energy(&SymMatrix::zeros(4)).unwrap(), 0.0);
        let half = SymMatrix::complete_graph(3).scaled(0.5);
        assert!((energy(&half).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn scaled_spectrum_examples() {
        let s = scaled_spectrum(&SymMatrix::complete_graph(4)).unwrap();
        assert!(close(s.values(), &[-0.5, -0.5, -0.5, 1.5], 1e-12));
        assert!(scaled_spectrum(&SymMatrix::zeros(3))
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn scaled_energy_identity() {
        let a = sample_er(10, 0.5, Seed(4)).unwrap();
        let lhs = 10f64.sqrt() * scaled_spectrum(&a).unwrap().energy();
        assert!((lhs - energy(&a).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn esd_examples() {
        let s = Spectrum::from_values(vec![1.0, -1.0]);
        assert_eq!(esd_eval(&s, 0.0), 0.5);
        assert_eq!(esd_eval(&s, 1.0), 1.0);
        assert_eq!(esd_eval(&s, -1.5), 0.0);
        let k4 = Spectrum::from_values(vec![-1.0, -1.0, -1.0, 3.0]);
        assert_eq!(esd_eval(&k4, -1.0), 0.75);
    }

    #[test]
    fn moment_examples() {
        let s = Spectrum::from_values(vec![-1.0, 1.0]);
        assert_eq!(moment(&s, 2).unwrap(), 1.0);
        assert_eq!(moment(&s, 1).unwrap(), 0.0);
        assert!(moment(&s, 0).is_err());
    }

    #[test]
    fn ks_examples() {
        let step = |x: f64| if x >= 0.0 { 1.0 } else { 0.0 };
        assert_eq!(ks_distance(&Spectrum::from_values(vec![0.0]), step), 0.0);
        assert_eq!(
            ks_distance(&Spectrum::from_values(vec![-1.0, 1.0]), step),
            0.5
        );
    }

    #[test]
    fn kyfan_examples() {
        let i2 = SymMatrix::identity(2);
        assert!((kyfan_gap(&i2, &-&i2).unwrap() - 4.0).abs() < 1e-12);
        let c = SymMatrix::complete_graph(2);
        assert!(kyfan_gap(&c, &c).unwrap().abs() < 1e-12);
        assert!(kyfan_gap(&i2, &SymMatrix::identity(3)).is_err());
    }

    #[test]
    fn symmetry_defect_examples() {
        assert_eq!(
            symmetry_defect(&Spectrum::from_values(vec![-2.0, 0.0, 2.0])),
            0.0
        );
        assert_eq!(
            symmetry_defect(&Spectrum::from_values(vec![-1.0, -1.0, 3.0])),
            2.0
        );
    }

    #[test]
    fn centered_bipartite_spectrum_is_symmetric() {
        let spec = PartitionSpec::new(vec![0.5, 0.5]).unwrap();
        let (a, parts) = sample_multipartite(200, &spec, 0.5, Seed(8)).unwrap();
        let c = center(&a, 0.5, &parts).unwrap();
        assert!(symmetry_defect(&eigenvalues_sym(&c).unwrap()) < 1e-8);
    }

    #[test]
    fn squared_bipartite_spectrum_matches_gram_matrix() {
        // parts of 30 and 50: the top 50 eigenvalues of the centered matrix,
        // scaled by n1^{-1/2} and squared, are the eigenvalues of X X^T / n1
        let (n1, n2) = (30usize, 50usize);
        let spec = PartitionSpec::new(vec![0.375, 0.625]).unwrap();
        let (a, parts) = sample_multipartite(80, &spec, 0.4, Seed(21)).unwrap();
        assert_eq!(parts.sizes(), &[n1, n2]);
        let c = center(&a, 0.4, &parts).unwrap();
        let s = eigenvalues_sym(&c)
            .unwrap()
            .scaled(1.0 / (n1 as f64).sqrt());
        let mut squared: Vec<f64> = s.values()[n1..].iter().map(|l| l * l).collect();
        squared.sort_by(f64::total_cmp);

        let x = |r: usize, col: usize| c[(n1 + r, col)];
        let gram = SymMatrix::from_upper_fn(n2, |i, j| {
            (0..n1).map(|k| x(i, k) * x(j, k)).sum::<f64>() / n1 as f64
        });
        let g = eigenvalues_sym(&gram).unwrap();
        assert!(close(&squared, g.values(), 1e-6));
    }

    #[test]
    fn er_moments_near_semicircle() {
        let n = 2000;
        let a = sample_er(n, 0.5, Seed(99)).unwrap();
        let c = center(&a, 0.5, &PartSizes::singletons(n)).unwrap();
        let s = scaled_spectrum(&c).unwrap();
        let m2 = moment(&s, 2).unwrap();
        let m4 = moment(&s, 4).unwrap();
        assert!((m2 - 0.25).abs() < 0.1 * 0.25, "m2 = {m2}");
        assert!((m4 - 0.125).abs() < 0.15 * 0.125, "m4 = {m4}");
    }

    #[test]
    fn spectrum_text_round_trip() {
        let s = Spectrum::from_values(vec![-1.0 / 3.0, 0.1, 2.0e-300]);
        assert_eq!(Spectrum::parse_text(&s.to_text()).unwrap(), s);
    }

    fn arb_small_int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6).prop_flat_map(|n| {
            prop::collection::vec(-3i64..=3, n * n).prop_map(move |raw| {
                let mut rows = vec![vec![0i64; n]; n];
                for i in 0..n {
                    for j in i..n {
                        rows[i][j] = raw[i * n + j];
                        rows[j][i] = raw[i * n + j];
                    }
                }
                rows
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn eigensolver_agrees_with_char_poly(rows in arb_small_int_matrix()) {
            let n = rows.len();
            let m = SymMatrix::from_upper_fn(n, |i, j| rows[i][j] as f64);
            let s = eigenvalues_sym(&m).unwrap();
            let reference = oracle::reference_eigenvalues(&rows);
            prop_assert!(close(s.values(), &reference, 1e-8), "{:?} vs {:?}", s.values(), reference);
        }

        #[test]
        fn trace_identities(n in 1usize..30, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let s = eigenvalues_sym(&m).unwrap();
            let tol = 1e-8 * n as f64 * m.max_abs().max(1e-300);
            let sum: f64 = s.values().iter().sum();
            let sum_sq: f64 = s.values().iter().map(|l| l * l).sum();
            prop_assert!((sum - m.trace()).abs() <= tol);
            prop_assert!((sum_sq - m.frobenius_norm().powi(2)).abs() <= tol);
            prop_assert!(s.values().windows(2).all(|w| w[0] <= w[1]));
        }

        #[test]
        fn energy_is_absolutely_homogeneous(n in 1usize..15, c in -5.0f64..5.0, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let e = energy(&m).unwrap();
            let ec = energy(&m.scaled(c)).unwrap();
            prop_assert!((ec - c.abs() * e).abs() <= 1e-10 * (1.0 + e));
        }

        #[test]
        fn kyfan_gap_nonnegative(n in 1usize..=12, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let y = SymMatrix::from_upper_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let scale = x.frobenius_norm() + y.frobenius_norm();
            prop_assert!(kyfan_gap(&x, &y).unwrap() >= -1e-8 * scale);
        }

        #[test]
        fn koolen_moulton_holds(n in 1usize..60, p in 0.0f64..=1.0, seed in any::<u64>()) {
            let a = sample_er(n, p, Seed(seed)).unwrap();
            let nf = n as f64;
            prop_assert!(energy(&a).unwrap() <= nf * (nf.sqrt() + 1.0) / 2.0 + 1e-9);
        }
    }
}
