use pauli_core::fields::{PowerLawField, PowerLawPotential};
use pauli_core::numerics::{hermite_phi, integrate_1d, log_hermite_tail, log_landau_norm_sq, QuadratureRule};
use pauli_core::weyl::{first_disjoint_index, residual_thm3, WeylPacket3};
use pauli_core::{Rule, Vec2};
use statrs::function::gamma::ln_gamma;

/// `log ∫ 2π B^{2k} ρ^{2k+1} e^{−Bρ²/2} dρ` by quadrature of the log-scaled
/// integrand around its peak `ρ² = (2k+1)/B`.
fn log_norm_by_quadrature(k: usize, b: f64) -> f64 {
    let kf = k as f64;
    let log_f = |rho: f64| 2.0 * kf * b.ln() + (2.0 * kf + 1.0) * rho.ln() - b * rho * rho / 2.0;
    let peak = ((2.0 * kf + 1.0) / b).sqrt();
    let lp = log_f(peak);
    let upper = peak + (80.0 / b).sqrt() + 8.0;
    let rule = QuadratureRule::gauss_legendre(20, 64).unwrap();
    let scaled = integrate_1d(|rho| if rho > 0.0 { (log_f(rho) - lp).exp() } else { 0.0 }, 0.0, upper, &rule).unwrap();
    (2.0 * std::f64::consts::PI).ln() + lp + scaled.ln()
}

#[test]
fn landau_norm_closed_form_matches_log_domain_quadrature() {
    for k in [0usize, 1, 5, 10, 30] {
        for b in [0.5, 1.0, 4.0] {
            let closed = log_landau_norm_sq(k, b).unwrap();
            let quad = log_norm_by_quadrature(k, b);
            assert!((closed - quad).abs() <= 1e-9 * closed.abs().max(1.0), "k={k} B={b}: {closed} vs {quad}");
            // Gamma-function form of the same integral.
            let gamma_form = (2.0 * std::f64::consts::PI).ln() + k as f64 * 2f64.ln() + (k as f64 - 1.0) * b.ln() + ln_gamma(k as f64 + 1.0);
            assert!((closed - gamma_form).abs() < 1e-10);
        }
    }
}

#[test]
fn hermite_functions_are_orthonormal_on_wide_interval() {
    let rule = QuadratureRule::gauss_legendre(16, 80).unwrap();
    for m in 0..=20usize {
        for n in m..=20usize {
            let ip: f64 = integrate_1d(|x: f64| hermite_phi(m, x) * hermite_phi(n, x), -40.0, 40.0, &rule).unwrap();
            let target = if m == n { 1.0 } else { 0.0 };
            assert!((ip - target).abs() < 1e-8, "<{m},{n}> = {ip}");
        }
    }
}

#[test]
fn hermite_tails_decrease_strictly() {
    let rule = QuadratureRule::gauss_legendre(16, 4).unwrap();
    for eps in [0.25, 0.5, 1.0] {
        let tails: Vec<f64> = (5..=60).map(|n| log_hermite_tail(n, eps, &rule).unwrap()).collect();
        assert!(tails.windows(2).all(|w| w[1] < w[0]), "eps={eps}");
    }
    assert!(log_hermite_tail(60, 1.0, &rule).unwrap() < (1e-12f64).ln());
}

#[test]
fn growing_level_packets_separate_and_keep_gauge_terms_zero_for_constant_field() {
    let f = PowerLawField::new(1.0, 1.0).unwrap();
    let v = PowerLawPotential::new(-1.0, 1.2).unwrap();
    let e1 = Vec2::new(1.0, 0.0);
    let packets: Vec<_> = (5..=12).map(|n| WeylPacket3::growing_level(&f, &v, n, 0.05, 0.0, e1).unwrap()).collect();
    let centers: Vec<_> = packets.iter().map(|p| p.x_n).collect();
    let radii: Vec<_> = packets.iter().map(|p| p.r_n).collect();
    assert_eq!(first_disjoint_index(&centers, &radii), Some(0));

    let c = PowerLawField::constant(2.0).unwrap();
    let w = PowerLawPotential::new(-1.0, 0.5).unwrap();
    let p = WeylPacket3::growing_level(&c, &w, 6, 0.5, 0.0, e1).unwrap();
    let r = residual_thm3(&c, &w, &p, &Rule::default_gauge()).unwrap();
    for name in ["gauge_linear", "gauge_quadratic", "gauge_divergence", "field_variation"] {
        assert!(r.term(name).unwrap() <= 1e-10 * r.packet_norm, "{name} = {:e}", r.term(name).unwrap());
    }
    assert!(r.satisfies_triangle(1e-9));
}
