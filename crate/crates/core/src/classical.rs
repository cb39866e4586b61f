//! Closed-form classical (alpha = 1) Barenblatt solution, the validation
//! oracle for the fractional solver in the alpha -> 1 limit.
//!
//! U(z) = (D - z^2/(2(2+m)))_+^{1/m} on |z| <= sqrt(2 D (2+m)), with D
//! normalizing the total mass to one. The fractional solver itself never
//! accepts alpha = 1 (Gamma(1-alpha) pole); comparisons run at alpha = 0.999.

use crate::error::Error;
use crate::specfun;

fn check_m(m: f64) -> Result<(), Error> {
    if !m.is_finite() || m <= 0.0 {
        return Err(Error::Domain(format!("m must be positive, got {}", m)));
    }
    Ok(())
}

/// Mass-normalizing constant
/// D = (Gamma(3/2 + 1/m) / (sqrt(2 pi (m+2)) Gamma(1 + 1/m)))^{2m/(m+2)}.
pub fn classical_constant(m: f64) -> Result<f64, Error> {
    check_m(m)?;
    let inv = 1.0 / m;
    let ln_ratio = specfun::ln_gamma(1.5 + inv)?
        - 0.5 * (2.0 * std::f64::consts::PI * (m + 2.0)).ln()
        - specfun::ln_gamma(1.0 + inv)?;
    Ok((ln_ratio * 2.0 * m / (m + 2.0)).exp())
}

/// Profile value (D - z^2/(2(2+m)))_+^{1/m}; zero outside the support.
pub fn classical_profile(m: f64, z: f64) -> Result<f64, Error> {
    check_m(m)?;
    if !z.is_finite() {
        return Err(Error::Domain(format!("z must be finite, got {}", z)));
    }
    let inner = classical_constant(m)? - z * z / (2.0 * (2.0 + m));
    if inner <= 0.0 {
        Ok(0.0)
    } else {
        Ok(inner.powf(1.0 / m))
    }
}

/// Support half-width sqrt(2 D (2+m)).
pub fn classical_support(m: f64) -> Result<f64, Error> {
    Ok((2.0 * classical_constant(m)? * (2.0 + m)).sqrt())
}
