//! Complete elliptic integrals in the parameter convention
//! `K(t) = int_0^{pi/2} (1 - t sin^2 theta)^{-1/2} d theta`,
//! `E(t) = int_0^{pi/2} (1 - t sin^2 theta)^{1/2} d theta`,
//! evaluated by the arithmetic–geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_REL_TOL: f64 = 1e-15;
const AGM_MAX_STEPS: usize = 64;

struct Agm {
    mean: f64,
    /// `sum_{k>=0} 2^{k-1} c_k^2` with `c_0^2 = t`
    side_sum: f64,
}

fn agm(t: f64) -> Agm {
    let mut a = 1.0_f64;
    let mut b = (1.0 - t).sqrt();
    let mut side_sum = 0.5 * t;
    let mut weight = 0.5;
    for _ in 0..AGM_MAX_STEPS {
        let c = 0.5 * (a - b);
        if c.abs() <= AGM_REL_TOL * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next_a;
        weight *= 2.0;
        side_sum += weight * c * c;
    }
    Agm { mean: a, side_sum }
}

fn check_parameter(t: f64, upper_open: bool) -> Result<()> {
    let ok = t.is_finite() && t >= 0.0 && if upper_open { t < 1.0 } else { t <= 1.0 };
    if ok {
        Ok(())
    } else {
        let range = if upper_open { "[0, 1)" } else { "[0, 1]" };
        Err(Error::Domain(format!(
            "elliptic parameter {t} outside {range}"
        )))
    }
}

/// Complete elliptic integral of the first kind; diverges at `t = 1`.
pub fn elliptic_k(t: f64) -> Result<f64> {
    check_parameter(t, true)?;
    Ok(FRAC_PI_2 / agm(t).mean)
}

/// Complete elliptic integral of the second kind.
pub fn elliptic_e(t: f64) -> Result<f64> {
    check_parameter(t, false)?;
    if t == 1.0 {
        return Ok(1.0);
    }
    let r = agm(t);
    Ok(FRAC_PI_2 / r.mean * (1.0 - r.side_sum))
}
