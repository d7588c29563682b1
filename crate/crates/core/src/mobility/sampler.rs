use crate::error::{Error, Result};

/// Inverse-CDF sample of a power law `p(x) ~ x^-(1 + a)` truncated to
/// `[x_min, x_max]`, driven by a uniform variate `u` in `[0, 1)`.
pub fn sample_truncated_power_law(a: f64, x_min: f64, x_max: f64, u: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "power-law exponent {a} must be positive"
        )));
    }
    if !(x_min > 0.0 && x_min < x_max && x_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "power-law support needs 0 < x_min < x_max (got {x_min}, {x_max})"
        )));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidArgument(format!("uniform variate {u} outside [0, 1)")));
    }
    Ok(inverse_cdf(a, x_min, x_max, u))
}

#[inline]
pub(crate) fn inverse_cdf(a: f64, x_min: f64, x_max: f64, u: f64) -> f64 {
    let lo = x_min.powf(-a);
    let hi = x_max.powf(-a);
    (lo - u * (lo - hi)).powf(-1.0 / a).clamp(x_min, x_max)
}
