use lorentz_geometry::*;
use radial_core::QuadratureSpec;

fn gaussian() -> GaussianTest {
    GaussianTest { center: SpaceTimePoint::new([1.2, -0.4, 0.3], 1.0), width: 0.9 }
}

#[test]
fn identity_is_exact() {
    let q = QuadratureSpec::default();
    let r = invariance_under(&gaussian(), |p| *p, 1.0, &q);
    assert_eq!(r.lhs, r.rhs);
    assert!(r.converged);
}

#[test]
fn boost_preserves_measure() {
    let q = QuadratureSpec::default();
    for axis in [[1.0, 0.0, 0.0], [0.3, 1.0, -0.5]] {
        let bp = BoostParam::along(0.6, axis).unwrap();
        let r = lorentz_invariance_check(&gaussian(), &bp, 1.0, &q);
        assert!(r.converged, "{r:?}");
        assert!(r.rel_err <= 1e-6, "{r:?}");
    }
}

#[test]
fn rotation_preserves_measure() {
    let q = QuadratureSpec { rel_tol: 1e-12, ..QuadratureSpec::default() };
    let rot = Rotation::about([0.2, 0.9, -0.4], 1.1);
    let r = rotation_invariance_check(&gaussian(), &rot, 0.7, &q);
    assert!(r.rel_err <= 1e-10, "{r:?}");
}
