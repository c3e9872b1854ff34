//! Limiting spectral laws and asymptotic energy coefficients.
//!
//! Energy coefficients are the constants `c` in `E(G) ~ c n^{3/2}` for the
//! random graph families sampled in [`crate::graphs`].

pub mod elliptic;
pub mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

pub use elliptic::{elliptic_e, elliptic_k};

/// `8 / (3 pi)`, the mean of `|x|` under the semicircle law with unit `sigma`.
pub const SEMICIRCLE_MEAN_ABS: f64 = 8.0 / (3.0 * PI);

/// Semicircle law on `[-2 sigma, 2 sigma]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemicircleLaw {
    sigma: f64,
}

impl SemicircleLaw {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma.is_finite() && sigma > 0.0 {
            Ok(Self { sigma })
        } else {
            Err(Error::Parameter(format!(
                "semicircle scale {sigma} must be positive"
            )))
        }
    }

    /// Limit law of the scaled centered adjacency matrix of `G_n(p)`.
    pub fn for_adjacency(p: f64) -> Result<Self> {
        check_probability(p)?;
        Self::new((p * (1.0 - p)).sqrt())
            .map_err(|_| Error::DegenerateLaw(format!("p = {p} gives a point mass")))
    }

    /// The balanced multipartite law with variance `delta_sq(sigma1, sigma2, m)`.
    pub fn multipartite(sigma1: f64, sigma2: f64, m: usize) -> Result<Self> {
        Self::new(delta_sq(sigma1, sigma2, m)?.sqrt())
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn density(&self, x: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let r = 4.0 * s2 - x * x;
        if r <= 0.0 {
            0.0
        } else {
            r.sqrt() / (2.0 * PI * s2)
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let edge = 2.0 * self.sigma;
        if x <= -edge {
            return 0.0;
        }
        if x >= edge {
            return 1.0;
        }
        let s2 = self.sigma * self.sigma;
        let v = 0.5 + x * (4.0 * s2 - x * x).sqrt() / (4.0 * PI * s2) + (x / edge).asin() / PI;
        v.clamp(0.0, 1.0)
    }

    /// `E|X| = 8 sigma / (3 pi)`.
    pub fn mean_abs(&self) -> f64 {
        SEMICIRCLE_MEAN_ABS * self.sigma
    }
}

/// Marčenko–Pastur law of `(1/n1) X X^T` for an `n2 x n1` matrix with
/// entry variance `p (1 - p)` and aspect ratio `y = n2 / n1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MpLaw {
    y: f64,
    p: f64,
}

impl MpLaw {
    pub fn new(y: f64, p: f64) -> Result<Self> {
        if !(y.is_finite() && y > 0.0) {
            return Err(Error::Parameter(format!(
                "aspect ratio {y} must be positive"
            )));
        }
        check_probability(p)?;
        if p == 0.0 || p == 1.0 {
            return Err(Error::DegenerateLaw(format!(
                "p = {p} gives zero entry variance"
            )));
        }
        Ok(Self { y, p })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn variance(&self) -> f64 {
        self.p * (1.0 - self.p)
    }

    /// Lower support edge `p(1-p)(1 - sqrt y)^2`.
    pub fn lower_edge(&self) -> f64 {
        self.variance() * (1.0 - self.y.sqrt()).powi(2)
    }

    /// Upper support edge `p(1-p)(1 + sqrt y)^2`.
    pub fn upper_edge(&self) -> f64 {
        self.variance() * (1.0 + self.y.sqrt()).powi(2)
    }

    /// Density of the continuous part.
    pub fn density(&self, x: f64) -> f64 {
        let (a, b) = (self.lower_edge(), self.upper_edge());
        if x < a || x > b || x <= 0.0 {
            return 0.0;
        }
        ((b - x) * (x - a)).max(0.0).sqrt() / (2.0 * PI * self.variance() * x * self.y)
    }

    /// Atom at the origin, `max(0, 1 - 1/y)`.
    pub fn point_mass(&self) -> f64 {
        (1.0 - 1.0 / self.y).max(0.0)
    }

    /// Mass of the continuous part on `[a, min(x, b)]`, by quadrature.
    pub fn continuous_mass_below(&self, x: f64) -> f64 {
        let (a, b) = (self.lower_edge(), self.upper_edge());
        if x <= a {
            return 0.0;
        }
        quadrature::integrate_sqrt_endpoints(|t| self.density(t), a, x.min(b), 1e-12)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        (self.point_mass() + self.continuous_mass_below(x)).min(1.0)
    }
}

/// A limiting spectral distribution with density and CDF.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Law {
    Semicircle(SemicircleLaw),
    MarchenkoPastur(MpLaw),
}

impl Law {
    pub fn density(&self, x: f64) -> f64 {
        match self {
            Law::Semicircle(l) => l.density(x),
            Law::MarchenkoPastur(l) => l.density(x),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Law::Semicircle(l) => l.cdf(x),
            Law::MarchenkoPastur(l) => l.cdf(x),
        }
    }
}

pub fn semicircle_density(sigma: f64, x: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(sigma)?.density(x))
}

pub fn semicircle_cdf(sigma: f64, x: f64) -> Result<f64> {
    Ok(SemicircleLaw::new(sigma)?.cdf(x))
}

/// Energy coefficient of `G_n(p)`: `(8 / 3 pi) sqrt(p (1 - p))`.
pub fn er_energy_coeff(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(SEMICIRCLE_MEAN_ABS * (p * (1.0 - p)).sqrt())
}

/// Energy coefficient of a random multipartite graph with `m` equal parts.
pub fn balanced_multipartite_coeff(p: f64, m: usize) -> Result<f64> {
    check_probability(p)?;
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 parts, got {m}")));
    }
    let mf = m as f64;
    Ok(SEMICIRCLE_MEAN_ABS * ((mf - 1.0) / mf * p * (1.0 - p)).sqrt())
}

/// Energy coefficient when the largest part fraction tends to zero.
pub fn vanishing_parts_coeff(p: f64) -> Result<f64> {
    er_energy_coeff(p)
}

/// `(sigma1^2 + (m - 1) sigma2^2) / m`.
pub fn delta_sq(sigma1: f64, sigma2: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::Parameter(format!("need at least 2 parts, got {m}")));
    }
    if sigma1 < 0.0 || sigma2 < 0.0 {
        return Err(Error::Parameter(
            "standard deviations must be nonnegative".into(),
        ));
    }
    let mf = m as f64;
    Ok((sigma1 * sigma1 + (mf - 1.0) * sigma2 * sigma2) / mf)
}

pub fn mp_density(law: &MpLaw, x: f64) -> f64 {
    law.density(x)
}

pub fn mp_point_mass(law: &MpLaw) -> f64 {
    law.point_mass()
}

/// Limit of the normalized sum of positive eigenvalues of the centered
/// bipartite adjacency matrix, in closed form through `K` and `E`.
pub fn lambda_coeff(y: f64, p: f64) -> Result<f64> {
    let law = MpLaw::new(y, p)?;
    let (a, b) = (law.lower_edge(), law.upper_edge());
    let t = 1.0 - a / b;
    let mut bracket = (a + b) * elliptic_e(t)?;
    if a > 0.0 {
        bracket -= 2.0 * a * elliptic_k(t)?;
    }
    Ok(b.sqrt() * bracket / (3.0 * PI * law.variance() * y))
}

/// The same constant as [`lambda_coeff`], by quadrature of
/// `int_{sqrt a}^{sqrt b} sqrt((b - x^2)(x^2 - a)) / (pi p (1-p) y) dx`.
pub fn lambda_by_quadrature(y: f64, p: f64) -> Result<f64> {
    let law = MpLaw::new(y, p)?;
    let (a, b) = (law.lower_edge(), law.upper_edge());
    let norm = PI * law.variance() * y;
    let integrand = |x: f64| ((b - x * x) * (x * x - a)).max(0.0).sqrt() / norm;
    Ok(quadrature::integrate_sqrt_endpoints(
        integrand,
        a.sqrt(),
        b.sqrt(),
        1e-14,
    ))
}

/// Energy coefficient of a random bipartite graph with part fractions
/// `(nu1, nu2)`: `2 nu2 sqrt(nu1) Lambda(nu2 / nu1, p)`.
pub fn bipartite_coeff(nu1: f64, nu2: f64, p: f64) -> Result<f64> {
    if !(nu1 > 0.0 && nu1 < 1.0 && nu2 > 0.0 && nu2 < 1.0) {
        return Err(Error::InvalidPartition(format!(
            "bipartite fractions ({nu1}, {nu2}) must lie in (0, 1)"
        )));
    }
    if (nu1 + nu2 - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPartition(format!(
            "bipartite fractions sum to {}",
            nu1 + nu2
        )));
    }
    Ok(2.0 * nu2 * nu1.sqrt() * lambda_coeff(nu2 / nu1, p)?)
}

/// Part fractions `(1/(1+y), y/(1+y))` for ratio `y = nu2 / nu1`.
pub fn fractions_for_ratio(y: f64) -> Result<(f64, f64)> {
    if !(y.is_finite() && y > 0.0) {
        return Err(Error::Parameter(format!("ratio {y} must be positive")));
    }
    Ok((1.0 / (1.0 + y), y / (1.0 + y)))
}

/// Lower and upper energy coefficients `(1 -/+ S) c` with
/// `S = sum nu_i^{3/2}` over parts of linear size and `c = er_energy_coeff(p)`.
pub fn unbalanced_bounds(linear_fractions: &[f64], p: f64) -> Result<(f64, f64)> {
    if let Some(bad) = linear_fractions
        .iter()
        .find(|f| !(f.is_finite() && **f > 0.0))
    {
        return Err(Error::InvalidPartition(format!(
            "fraction {bad} must be positive"
        )));
    }
    let total: f64 = linear_fractions.iter().sum();
    if total > 1.0 + 1e-9 {
        return Err(Error::InvalidPartition(format!(
            "linear fractions sum to {total} > 1"
        )));
    }
    let s: f64 = linear_fractions.iter().map(|f| f.powf(1.5)).sum();
    let c = er_energy_coeff(p)?;
    Ok(((1.0 - s) * c, (1.0 + s) * c))
}

/// Upper bound `n (sqrt n + 1) / 2` on the energy of any simple graph.
pub fn koolen_moulton(n: usize) -> f64 {
    let nf = n as f64;
    nf * (nf.sqrt() + 1.0) / 2.0
}

#[cfg(test)]
mod tests {
    use super::quadrature::{adaptive_simpson, integrate_sqrt_endpoints};
    use super::*;

    fn near(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn semicircle_density_examples() {
        assert!(near(semicircle_density(0.5, 0.0).unwrap(), 2.0 / PI, 1e-15));
        assert_eq!(semicircle_density(0.5, 1.0).unwrap(), 0.0);
        assert_eq!(semicircle_density(0.5, -1.0).unwrap(), 0.0);
        assert!(near(
            semicircle_density(1.0, 1.0).unwrap(),
            3f64.sqrt() / (2.0 * PI),
            1e-15
        ));
        assert!(semicircle_density(0.0, 0.0).is_err());
    }

    #[test]
    fn semicircle_cdf_examples() {
        for s in [0.1, 0.5, 2.0] {
            assert!(near(semicircle_cdf(s, 0.0).unwrap(), 0.5, 1e-15));
        }
        assert_eq!(semicircle_cdf(0.5, 1.0).unwrap(), 1.0);
        assert_eq!(semicircle_cdf(0.5, -1.0).unwrap(), 0.0);
    }

    #[test]
    fn semicircle_cdf_matches_quadrature() {
        let law = SemicircleLaw::new(0.5).unwrap();
        for x in [-0.9, -0.3, 0.25, 0.5, 0.99] {
            let q = integrate_sqrt_endpoints(|t| law.density(t), -1.0, x, 1e-13);
            assert!(near(law.cdf(x), q, 1e-9), "x={x}: {} vs {q}", law.cdf(x));
        }
    }

    #[test]
    fn semicircle_mean_abs_identity() {
        for s in [0.1, 0.25, 0.5, 1.0] {
            let law = SemicircleLaw::new(s).unwrap();
            let half = integrate_sqrt_endpoints(|x| x * law.density(x), 0.0, 2.0 * s, 1e-14);
            assert!(near(2.0 * half, 8.0 * s / (3.0 * PI), 1e-9));
            assert!(near(law.mean_abs(), 2.0 * half, 1e-9));
        }
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let catalan = [1.0, 1.0, 2.0, 5.0, 14.0];
        for s in [0.5, 1.0] {
            let law = SemicircleLaw::new(s).unwrap();
            let total = integrate_sqrt_endpoints(|x| law.density(x), -2.0 * s, 2.0 * s, 1e-13);
            assert!(near(total, 1.0, 1e-10));
            for (k, c) in catalan.iter().enumerate().skip(1) {
                let even = integrate_sqrt_endpoints(
                    |x| x.powi(2 * k as i32) * law.density(x),
                    -2.0 * s,
                    2.0 * s,
                    1e-13,
                );
                assert!(
                    near(even, s.powi(2 * k as i32) * c, 1e-8),
                    "s={s} k={k}: {even}"
                );
                let odd = integrate_sqrt_endpoints(
                    |x| x.powi(2 * k as i32 - 1) * law.density(x),
                    -2.0 * s,
                    2.0 * s,
                    1e-13,
                );
                assert!(odd.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn er_coefficient_examples() {
        let q = 2.0
            * integrate_sqrt_endpoints(
                |x| x * semicircle_density(0.5, x).unwrap(),
                0.0,
                1.0,
                1e-14,
            );
        assert!(near(er_energy_coeff(0.5).unwrap(), 4.0 / (3.0 * PI), 1e-15));
        assert!(near(er_energy_coeff(0.5).unwrap(), q, 1e-10));
        assert!(near(er_energy_coeff(0.5).unwrap(), 0.424413, 1e-6));
        assert_eq!(er_energy_coeff(0.0).unwrap(), 0.0);
        assert!(near(er_energy_coeff(0.2).unwrap(), 0.339531, 1e-6));
        assert!(er_energy_coeff(1.2).is_err());
        for p in [0.0, 0.2, 0.5] {
            assert_eq!(
                vanishing_parts_coeff(p).unwrap(),
                er_energy_coeff(p).unwrap()
            );
        }
    }

    #[test]
    fn balanced_multipartite_examples() {
        assert!(near(
            balanced_multipartite_coeff(0.5, 2).unwrap(),
            0.300106,
            1e-6
        ));
        assert!(near(
            balanced_multipartite_coeff(0.5, 3).unwrap(),
            0.346532,
            1e-6
        ));
        let big = balanced_multipartite_coeff(0.5, 1_000_000).unwrap();
        assert!(near(big, er_energy_coeff(0.5).unwrap(), 1e-6));
        let mut prev = 0.0;
        for m in 2..50 {
            let c = balanced_multipartite_coeff(0.3, m).unwrap();
            assert!(c > prev);
            prev = c;
        }
        assert!(balanced_multipartite_coeff(0.5, 1).is_err());
    }

    #[test]
    fn delta_sq_examples() {
        assert_eq!(delta_sq(0.0, 0.5, 2).unwrap(), 0.125);
        assert!(near(delta_sq(0.3, 0.3, 7).unwrap(), 0.09, 1e-15));
        for m in 2..10 {
            let s2 = 0.5;
            let d = delta_sq(0.0, s2, m).unwrap();
            let via_delta = SEMICIRCLE_MEAN_ABS * d.sqrt();
            assert!(near(
                via_delta,
                balanced_multipartite_coeff(0.5, m).unwrap(),
                1e-15
            ));
        }
    }

    #[test]
    fn mp_examples() {
        let law = MpLaw::new(1.0, 0.5).unwrap();
        assert_eq!(law.lower_edge(), 0.0);
        assert_eq!(law.upper_edge(), 1.0);
        assert_eq!(mp_density(&law, 1.0), 0.0);
        assert!(near(mp_density(&law, 0.5), 2.0 / PI, 1e-15));
        assert_eq!(mp_point_mass(&law), 0.0);
        assert_eq!(mp_point_mass(&MpLaw::new(2.0, 0.5).unwrap()), 0.5);
        assert_eq!(mp_point_mass(&MpLaw::new(0.5, 0.5).unwrap()), 0.0);
        assert!(matches!(MpLaw::new(1.0, 0.0), Err(Error::DegenerateLaw(_))));
        assert!(matches!(MpLaw::new(1.0, 1.0), Err(Error::DegenerateLaw(_))));
    }

    #[test]
    fn mp_total_mass() {
        for y in [0.5, 1.0, 2.0] {
            for p in [0.2, 0.5] {
                let law = MpLaw::new(y, p).unwrap();
                let cont = integrate_sqrt_endpoints(
                    |x| law.density(x),
                    law.lower_edge(),
                    law.upper_edge(),
                    1e-13,
                );
                assert!(near(cont, (1.0f64).min(1.0 / y), 1e-8), "y={y}: {cont}");
                assert!(near(law.point_mass() + cont, 1.0, 1e-8));
                assert!(near(law.cdf(law.upper_edge() + 1.0), 1.0, 1e-8));
            }
        }
    }

    #[test]
    fn lambda_examples() {
        assert!(near(
            lambda_coeff(1.0, 0.5).unwrap(),
            4.0 / (3.0 * PI),
            1e-12
        ));
        assert!(near(
            lambda_by_quadrature(1.0, 0.5).unwrap(),
            4.0 / (3.0 * PI),
            1e-9
        ));
        let l1 = lambda_coeff(1.0, 0.5).unwrap();
        assert!(near(2.0 * 0.5 * 0.5f64.sqrt() * l1, 0.3001, 5e-5));
        let l2 = lambda_coeff(2.0, 0.5).unwrap();
        assert!(near(
            2.0 * (2.0 / 3.0) * (1.0f64 / 3.0).sqrt() * l2,
            0.2539,
            1e-4
        ));
        assert!(matches!(
            lambda_coeff(2.0, 0.0),
            Err(Error::DegenerateLaw(_))
        ));
    }

    #[test]
    fn lambda_closed_form_matches_quadrature_grid() {
        for y in [0.5, 1.0, 2.0, 5.0, 10.0] {
            for p in [0.1, 0.5, 0.9] {
                let closed = lambda_coeff(y, p).unwrap();
                let quad = lambda_by_quadrature(y, p).unwrap();
                assert!(
                    ((closed - quad) / quad).abs() < 1e-7,
                    "y={y} p={p}: {closed} vs {quad}"
                );
            }
        }
    }

    #[test]
    fn bipartite_examples() {
        assert!(near(bipartite_coeff(0.5, 0.5, 0.5).unwrap(), 0.3001, 5e-5));
        assert!(near(
            bipartite_coeff(1.0 / 11.0, 10.0 / 11.0, 0.5).unwrap(),
            0.08558,
            1e-4
        ));
        assert!(bipartite_coeff(0.5, 0.6, 0.5).is_err());
        assert!(bipartite_coeff(0.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn bipartite_swap_symmetry() {
        // not part of any contract; the two orderings agree numerically
        for y in [0.5, 2.0, 3.0, 7.0] {
            let (a, b) = fractions_for_ratio(y).unwrap();
            let fwd = bipartite_coeff(a, b, 0.5).unwrap();
            let rev = bipartite_coeff(b, a, 0.5).unwrap();
            assert!(near(fwd, rev, 1e-12), "y={y}: {fwd} vs {rev}");
        }
    }

    #[test]
    fn balanced_routes_agree() {
        for i in 1..=9 {
            let p = i as f64 / 10.0;
            let bi = bipartite_coeff(0.5, 0.5, p).unwrap();
            let multi = balanced_multipartite_coeff(p, 2).unwrap();
            assert!(near(bi, multi, 1e-9), "p={p}");
        }
    }

    #[test]
    fn bounds_examples() {
        let (lo, hi) = unbalanced_bounds(&[0.5, 0.5], 0.5).unwrap();
        assert!(near(lo, 0.1243, 5e-5));
        assert!(hi > lo);
        let (lo, _) = unbalanced_bounds(&[1.0 / 3.0, 2.0 / 3.0], 0.5).unwrap();
        assert!(near(lo, 0.1118, 1e-4));
        let c = er_energy_coeff(0.5).unwrap();
        let (lo, hi) = unbalanced_bounds(&[1e-12], 0.5).unwrap();
        assert!(near(lo, c, 1e-12) && near(hi, c, 1e-12));
        assert!(unbalanced_bounds(&[0.7, 0.7], 0.5).is_err());
        assert!(unbalanced_bounds(&[0.0], 0.5).is_err());
    }

    #[test]
    fn bounds_bracket_bipartite() {
        for y in 1..=10 {
            let (a, b) = fractions_for_ratio(y as f64).unwrap();
            let (lo, hi) = unbalanced_bounds(&[a, b], 0.5).unwrap();
            let c = bipartite_coeff(a, b, 0.5).unwrap();
            assert!(lo > 0.0 && lo <= c && c <= hi, "y={y}");
        }
    }

    #[test]
    fn koolen_moulton_examples() {
        assert_eq!(koolen_moulton(1), 1.0);
        assert_eq!(koolen_moulton(4), 6.0);
        assert_eq!(koolen_moulton(100), 550.0);
    }

    #[test]
    fn simpson_on_density_tail() {
        let law = SemicircleLaw::new(1.0).unwrap();
        let v = adaptive_simpson(|x| law.density(x), 3.0, 4.0, 1e-12);
        assert_eq!(v, 0.0);
    }
}
