use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Density of `sigma_R * sigma_R2` at distance `x`, where `sigma_r` is the
/// surface measure of the sphere of radius `r` with total mass `4 pi r`.
///
/// The density is `2 pi / x` on the closed annulus `|R - R2| <= x <= R + R2`.
pub fn sphere_pair_kernel<T: Real>(r1: T, r2: T, x: T) -> Result<T> {
    if !(r1 > T::zero() && r2 > T::zero()) {
        return Err(CoreError::Domain(format!("radii must be positive, got {r1}, {r2}")));
    }
    if !(x > T::zero()) {
        return Err(CoreError::Domain(format!("distance must be positive, got {x}")));
    }
    Ok(if (r1 - r2).abs() <= x && x <= r1 + r2 {
        T::lit(2.0) * T::PI() / x
    } else {
        T::zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_values() {
        let two_pi = 2.0 * std::f64::consts::PI;
        assert_eq!(sphere_pair_kernel(1.0, 1.0, 1.0).unwrap(), two_pi);
        assert_eq!(sphere_pair_kernel(1.0, 2.0, 4.0).unwrap(), 0.0);
        assert_eq!(sphere_pair_kernel(1.0, 2.0, 0.5).unwrap(), 0.0);
        assert!(sphere_pair_kernel(1.0, 1.0, 0.0).is_err());
        assert!(sphere_pair_kernel(0.0, 1.0, 1.0).is_err());
        assert_eq!(sphere_pair_kernel(1.5f32, 0.5, 1.0).unwrap(), 2.0 * std::f32::consts::PI);
    }
}
