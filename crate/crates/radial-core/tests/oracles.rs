//! Engine checks against oracles that share no code with the slice engine:
//! Monte-Carlo sampling, brute-force integration of the sphere-pair formula,
//! and elementary closed forms written out here.

use std::f64::consts::PI;

use radial_core::mc::{bump1, mc_sphere_pair};
use radial_core::quadrature::{integrate, integrate_to_infinity};
use radial_core::slice::{cross_conv_point, measure_self_conv, self_conv_point};
use radial_core::*;

fn tight() -> Adaptive {
    Adaptive::rel(1e-11).with_abs(1e-300)
}

/// Midpoint rule over `t'` of `f(phi(t')) g(phi(tau - t')) K(phi(t'), phi(tau - t'), rho)`.
fn brute_force(f: &RadialProfile, g: &RadialProfile, rho: f64, tau: f64, n: usize) -> f64 {
    let s = f.s();
    let h = tau / n as f64;
    (0..n)
        .map(|i| {
            let t = (i as f64 + 0.5) * h;
            let (r1, r2) = (phi(s, t), phi(s, tau - t));
            let k = if s == 0.0 && (r1 == 0.0 || r2 == 0.0) {
                0.0
            } else {
                sphere_pair_kernel(r1, r2, rho).unwrap()
            };
            f.eval_height(t) * g.eval_height(tau - t) * k * h
        })
        .sum()
}

#[test]
fn sphere_pair_kernel_matches_sampling() {
    let bump = |x: f64| bump1((x - 1.0) / 0.15);
    let quad = integrate(|x| sphere_pair_kernel(1.0, 1.0, x).unwrap() * bump(x) * 4.0 * PI * x * x, 0.85, 1.15, &tight());
    let mc = mc_sphere_pair(1.0, 1.0, bump, 2_000_000, 7);
    assert!(mc.sigmas_from(quad.value) < 3.0, "{mc:?} vs {}", quad.value);
    // unequal radii, bump straddling the inner edge of the annulus
    let bump = |x: f64| bump1((x - 1.2) / 0.5);
    let quad = integrate(|x| sphere_pair_kernel(1.0, 2.0, x).unwrap() * bump(x) * 4.0 * PI * x * x, 0.7, 1.7, &tight());
    let mc = mc_sphere_pair(1.0, 2.0, bump, 2_000_000, 8);
    assert!(mc.sigmas_from(quad.value) < 3.0, "{mc:?} vs {}", quad.value);
}

#[test]
fn sphere_pair_kernel_mass() {
    let m = integrate(|x| sphere_pair_kernel(1.0, 2.0, x).unwrap() * 4.0 * PI * x * x, 1.0, 3.0, &tight());
    assert!((m.value - 32.0 * PI * PI).abs() < 1e-10 * 32.0 * PI * PI);
}

#[test]
fn unit_profiles_reproduce_window_geometry() {
    let f = RadialProfile::indicator(1.0, 1.0, 40.0, 64).unwrap();
    for &(rho, tau) in &[(1.3, 2.7), (0.4, 1.1), (3.0, 2.5), (2.2, 0.8), (10.0, 11.0)] {
        let h = self_conv_point(&f, &f, rho, tau, &tight()).unwrap().value;
        let bf = brute_force(&f, &f, rho, tau, 400_000);
        assert!((h - bf).abs() < 2e-5 * bf, "({rho}, {tau}): {h} vs {bf}");
        assert!((h - measure_self_conv(1.0, rho, tau)).abs() < 1e-12 * h);
    }
}

#[test]
fn general_profiles_match_brute_force() {
    let f = RadialProfile::height_uniform(0.7, 0.7, 5.0, 23, |r| 1.0 + (2.0 * r).sin()).unwrap();
    let g = RadialProfile::height_uniform(0.7, 1.5, 4.0, 17, |r| r * r).unwrap();
    for &(rho, tau) in &[(1.0, 3.0), (2.5, 4.0), (5.5, 6.2), (0.3, 2.2)] {
        let h = self_conv_point(&f, &g, rho, tau, &tight()).unwrap().value;
        let bf = brute_force(&f, &g, rho, tau, 1_000_000);
        assert!((h - bf).abs() < 1e-4 * bf.abs().max(1e-3), "({rho}, {tau}): {h} vs {bf}");
    }
}

#[test]
fn trial_profiles_factor_through_the_exponential() {
    let a = 0.1;
    let f = RadialProfile::trial(1.0, a, 40.0, 8000).unwrap();
    for &(rho, tau) in &[(1.3, 2.7), (0.5, 6.0), (4.0, 3.5)] {
        let h = self_conv_point(&f, &f, rho, tau, &tight()).unwrap().value;
        let expected = (-a * tau / 2.0).exp() * measure_self_conv(1.0, rho, tau);
        assert!((h - expected).abs() < 1e-5 * expected, "{h} vs {expected}");
    }
}

#[test]
fn lp_norm_of_trial_profile() {
    let a = 1.0;
    let f = RadialProfile::trial(1.0, a, 40.0, 24_000).unwrap();
    let exact = 4.0 * PI * integrate_to_infinity(|t: f64| (-a * t).exp() * (t * t + 1.0).sqrt(), 0.0, &tight()).value;
    let got = lp_norm(&f, 2.0).unwrap().powi(2);
    assert!((got - exact).abs() < 1e-5 * exact, "{got} vs {exact}");
}

#[test]
fn mass_is_conserved() {
    let f = RadialProfile::height_uniform(1.0, 1.0, 3.0, 9, |r| 3.0 - r).unwrap();
    let g = RadialProfile::indicator(1.0, 1.5, 4.0, 5).unwrap();
    let (m, ok) = conv_mass(&f, &g, 1e-8).unwrap();
    let expected = mu_integral(&f) * mu_integral(&g);
    assert!(ok);
    assert!((m - expected).abs() < 1e-6 * expected, "{m} vs {expected}");
}

#[test]
fn cross_mass_is_conserved() {
    let fp = RadialProfile::indicator(1.0, 1.0, 2.5, 5).unwrap();
    let fm = RadialProfile::height_uniform(1.0, 1.2, 3.0, 9, |r| r).unwrap();
    let (a0, a1) = fp.t_range();
    let (b0, b1) = fm.t_range();
    let opts = Adaptive::rel(1e-10).with_abs(1e-300);
    let outer = Adaptive::rel(1e-8).with_abs(1e-300);
    let mut pts = vec![a0 - b1, a0 - b0, a1 - b1, a1 - b0];
    pts.sort_by(f64::total_cmp);
    let total = radial_core::quadrature::integrate_breaks(
        |tau| {
            let r = phi(1.0, tau.abs());
            let rho_pts = [r - 1.0, tau.abs(), r + 1.0, 12.0];
            radial_core::quadrature::integrate_breaks(
                |rho| 4.0 * PI * rho * rho * cross_conv_point(&fp, &fm, rho, tau, &opts).unwrap().value,
                &rho_pts,
                &Adaptive::rel(1e-9).with_abs(1e-300),
            )
            .value
        },
        &pts,
        &outer,
    );
    let expected = mu_integral(&fp) * mu_integral(&fm);
    assert!((total.value - expected).abs() < 1e-6 * expected, "{} vs {expected}", total.value);
}

#[test]
fn pairing_matches_monte_carlo() {
    let quad = QuadratureSpec::default();
    let f = RadialProfile::height_uniform(1.0, 1.0, 3.0, 9, |r| 3.5 - r).unwrap();
    let g = RadialProfile::indicator(1.0, 1.0, 2.0, 5).unwrap();
    let bump = Bump::new(1.5, 1.0, 2.5, 1.2);
    let exact = pairing(|r, t| self_conv_point(&f, &g, r, t, &quad.adaptive()).unwrap().value, &bump);
    let mc = mc_pairing_oracle(&f, &g, Sheets::Upper, &bump, 2_000_000, quad.seed);
    assert!(mc.sigmas_from(exact) < 3.0, "{mc:?} vs {exact}");

    let bump = Bump::new(2.0, 1.0, 0.3, 0.6);
    let exact = pairing(|r, t| cross_conv_point(&f, &g, r, t, &quad.adaptive()).unwrap().value, &bump);
    let mc = mc_pairing_oracle(&f, &g, Sheets::Opposite, &bump, 2_000_000, quad.seed + 1);
    assert!(mc.sigmas_from(exact) < 3.0, "{mc:?} vs {exact}");
}

#[test]
fn pairing_vanishes_off_support_and_for_odd_tests() {
    let f = RadialProfile::indicator(1.0, 1.0, 2.0, 5).unwrap();
    // rho > sqrt(tau^2 + 1) + 1 everywhere on the bump
    let outside = Bump::new(6.0, 0.5, 1.0, 0.5);
    let mc = mc_pairing_oracle(&f, &f, Sheets::Upper, &outside, 200_000, 3);
    assert_eq!(mc.estimate, 0.0);
    let odd = Bump::new(1.5, 1.0, 2.0, 1.5).odd();
    let mc = mc_pairing_oracle(&f, &f, Sheets::Upper, &odd, 1_000_000, 4);
    assert!(mc.sigmas_from(0.0) < 3.0, "{mc:?}");
}

/// `int int h(rho, tau) phi(rho, tau) 4 pi rho^2`.
fn pairing(h: impl Fn(f64, f64) -> f64, b: &Bump) -> f64 {
    let opts = Adaptive::rel(1e-9).with_abs(1e-300);
    integrate(
        |t| {
            integrate(
                |r| h(r, t) * b.radial(r, t) * 4.0 * PI * r * r,
                (b.rho0 - b.rho_width).max(0.0),
                b.rho0 + b.rho_width,
                &opts,
            )
            .value
        },
        b.tau0 - b.tau_width,
        b.tau0 + b.tau_width,
        &opts,
    )
    .value
}
