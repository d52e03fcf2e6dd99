//! `validate`: invariant suites with measured errors.

use std::io::Write;

use pauli_core::fields::{rotational_gauge, ZeroPotential};
use pauli_core::numerics::{hermite_phi_all, hermite_tail, integrate_annulus, log_hermite_tail};
use pauli_core::radial::{channel_spectrum_with_sigma3, ChannelSpec, RadialGrid, Spin};
use pauli_core::weyl::operators::{commutator_grid_error, ladder_errors, landau_eigen_error};
use pauli_core::weyl::LandauState;
use pauli_core::{Field, Point, Rule, Vec2};

use crate::report::{self, Table};
use crate::{io_err, CliError, Context};

/// One invariant with its measured value and acceptance rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    fn below(name: &'static str, measured: f64, limit: f64) -> Self {
        Self { name, measured, threshold: format!("< {limit:e}"), pass: measured < limit }
    }

    fn within(name: &'static str, measured: f64, lo: f64, hi: f64) -> Self {
        Self { name, measured, threshold: format!("in [{lo}, {hi}]"), pass: (lo..=hi).contains(&measured) }
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Self {
        Self { name, measured: f64::NAN, threshold: format!("error: {err}"), pass: false }
    }
}

/// Deliberate defects for checking that the suite notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    /// Wrong sign of the `σ₃A′` term in every channel.
    FlipSigma3,
}

/// Constant field `B = 1`, `V = 0`, channels `|j| ≤ jmax` on `R = 20`,
/// `n = 4000`: distance of every trusted eigenvalue in `[−0.5, 9)` from the
/// nearest Landau level, and the lowest spin-down eigenvalue.
pub fn landau_channels(jmax: i64, mutation: Option<Mutation>) -> Result<(f64, f64), CliError> {
    let field = Field::constant(1.0)?;
    let grid = RadialGrid::new(20.0, 4000)?;
    let window = (-0.5, 9.0);
    let mut worst = 0.0f64;
    let mut down_min = f64::INFINITY;
    for j in -jmax..=jmax {
        for spin in [Spin::Up, Spin::Down] {
            let sign = match mutation {
                Some(Mutation::FlipSigma3) => -spin.sigma3::<f64>(),
                None => spin.sigma3(),
            };
            let c = channel_spectrum_with_sigma3(&field, &ZeroPotential, ChannelSpec { j, spin, grid }, window, sign)?;
            for (&e, &trusted) in c.eigenvalues.iter().zip(&c.trusted) {
                if trusted {
                    let level = (e / 2.0).round().clamp(0.0, 4.0) * 2.0;
                    worst = worst.max((e - level).abs());
                }
                if spin == Spin::Down {
                    down_min = down_min.min(e);
                }
            }
        }
    }
    Ok((worst, down_min))
}

/// Largest `|‖ψ‖² − 1|` of the normalized Landau states by polar quadrature;
/// the normalization is the closed form, so this is the relative error of the
/// closed-form norm.
pub fn landau_norm_error(ks: &[usize], bs: &[f64]) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for &k in ks {
        for &b in bs {
            let c = Vec2::new(0.3, -0.7);
            let st = LandauState::new(k, b, c)?;
            let kf = k as f64;
            let u_max = kf + 45.0 + 12.0 * kf.sqrt();
            let r_max = (2.0 * u_max / b).sqrt();
            let rule = Rule::gauss_legendre(16, 48)?;
            let q = integrate_annulus(|x| st.value(x).norm_sqr(), c, 0.0, r_max, &rule, 8);
            worst = worst.max((q - 1.0).abs());
        }
    }
    Ok(worst)
}

/// `max |⟨φₘ, φₙ⟩ − δₘₙ|` for `m, n ≤ n_max`.
pub fn hermite_orthonormality(n_max: usize) -> Result<f64, CliError> {
    let rule = Rule::gauss_legendre(16, 64)?;
    let half = (2.0 * n_max as f64 + 1.0).sqrt() + 12.0;
    let nodes = rule.mapped(-half, half);
    let samples: Vec<(f64, Vec<f64>)> = nodes.iter().map(|&(x, w)| (w, hermite_phi_all(n_max, x))).collect();
    let mut worst = 0.0f64;
    for m in 0..=n_max {
        for n in m..=n_max {
            let terms: Vec<f64> = samples.iter().map(|(w, p)| w * p[m] * p[n]).collect();
            let ip = pauli_core::scalar::pairwise_sum(&terms);
            let target = if m == n { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).abs());
        }
    }
    Ok(worst)
}

/// Number of non-decreasing steps of the log tail over `5..=n_max` for each
/// `ε`, and the tail at `(n_max, 1)`.
pub fn hermite_tail_checks(n_max: usize, eps: &[f64]) -> Result<(usize, f64), CliError> {
    let rule = Rule::gauss_legendre(16, 4)?;
    let mut violations = 0;
    for &e in eps {
        let tails = (5..=n_max).map(|n| log_hermite_tail(n, e, &rule)).collect::<Result<Vec<_>, _>>()?;
        violations += tails.windows(2).filter(|w| w[1] >= w[0]).count();
    }
    Ok((violations, hermite_tail(n_max, 1.0, &rule)?))
}

/// Largest ladder-relation error over `n ≤ n_max`.
pub fn ladder_error(n_max: usize) -> Result<f64, CliError> {
    let mut worst = 0.0f64;
    for n in 0..=n_max {
        let (a, b) = ladder_errors(n, 1.0, 0.8, -3.0, 0.37, 1e-4)?;
        worst = worst.max(a).max(b);
    }
    Ok(worst)
}

/// Smallest and largest Richardson ratio of the Landau eigen-residual for
/// `k ≤ k_max` at steps `0.02, 0.01`.
pub fn landau_eigen_ratios(k_max: usize) -> Result<(f64, f64), CliError> {
    let c = Vec2::new(0.4, -0.2);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..=k_max {
        let r = landau_eigen_error(k, 1.3, c, 0.02)? / landau_eigen_error(k, 1.3, c, 0.01)?;
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

/// Error ratios at `h = 0.1, 0.05` of the grid commutator against `2B` for a
/// constant field and for `b = r`.
pub fn commutator_ratios() -> Result<(f64, f64), CliError> {
    let c = Point::new(3.0, 1.0);
    let f0 = Field::constant(1.5)?;
    let g0 = |x: Point| Vec2::wedge(0.75, x);
    let r0 = commutator_grid_error(&f0, g0, c, 4.0, 0.1) / commutator_grid_error(&f0, g0, c, 4.0, 0.05);
    let f1 = Field::new(1.0, 1.0)?;
    let g1 = |x: Point| rotational_gauge(&f1, x).expect("finite radius");
    let r1 = commutator_grid_error(&f1, g1, c, 4.0, 0.1) / commutator_grid_error(&f1, g1, c, 4.0, 0.05);
    Ok((r0, r1))
}

/// Runs every suite; `quick` uses smaller index ranges.
pub fn suite(quick: bool, mutation: Option<Mutation>) -> Vec<Check> {
    let mut out = Vec::new();
    let jmax = if quick { 3 } else { 10 };
    match landau_channels(jmax, mutation) {
        Ok((dist, down)) => {
            out.push(Check::below("landau_levels", dist, 1e-3));
            out.push(Check { name: "spin_down_floor", measured: down, threshold: ">= 2 - 1e-3".into(), pass: down >= 2.0 - 1e-3 });
        }
        Err(e) => out.push(Check::failed("landau_levels", e)),
    }
    let ks: &[usize] = if quick { &[0, 1, 5] } else { &[0, 1, 5, 10, 30] };
    out.push(landau_norm_error(ks, &[0.5, 1.0, 4.0]).map_or_else(|e| Check::failed("landau_norm", e), |v| Check::below("landau_norm", v, 1e-8)));
    match landau_eigen_ratios(if quick { 2 } else { 5 }) {
        Ok((lo, hi)) => {
            out.push(Check::within("landau_eigen_richardson_min", lo, 3.5, 4.5));
            out.push(Check::within("landau_eigen_richardson_max", hi, 3.5, 4.5));
        }
        Err(e) => out.push(Check::failed("landau_eigen_richardson", e)),
    }
    match commutator_ratios() {
        Ok((r0, r1)) => {
            out.push(Check::within("commutator_constant_field", r0, 3.5, 4.5));
            out.push(Check::within("commutator_linear_field", r1, 3.5, 4.5));
        }
        Err(e) => out.push(Check::failed("commutator", e)),
    }
    let nh = if quick { 10 } else { 20 };
    out.push(hermite_orthonormality(nh).map_or_else(|e| Check::failed("hermite_orthonormality", e), |v| Check::below("hermite_orthonormality", v, 1e-8)));
    let (n_tail, eps): (usize, &[f64]) = if quick { (30, &[1.0]) } else { (60, &[0.25, 0.5, 1.0]) };
    match hermite_tail_checks(n_tail, eps) {
        Ok((viol, t)) => {
            out.push(Check { name: "hermite_tail_monotone", measured: viol as f64, threshold: "= 0 violations".into(), pass: viol == 0 });
            let limit = if quick { 1.0 } else { 1e-12 };
            out.push(Check::below("hermite_tail_at_end", t, limit));
        }
        Err(e) => out.push(Check::failed("hermite_tail", e)),
    }
    out.push(ladder_error(if quick { 4 } else { 10 }).map_or_else(|e| Check::failed("ladder_relations", e), |v| Check::below("ladder_relations", v, 1e-8)));
    out
}

pub fn run(ctx: &Context, quick: bool, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let checks = suite(quick, None);
    let mut table = Table::new(&[("check", "-"), ("measured", "1"), ("threshold", "-"), ("pass", "bool")]);
    table.meta("command", "validate");
    table.meta("quick", quick);
    for c in &checks {
        table.push(vec![c.name.into(), report::num(c.measured), c.threshold.clone(), c.pass.to_string()]);
        writeln!(out, "{} {:<30} {:>14.6e}  {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.measured, c.threshold)
            .map_err(io_err)?;
    }
    report::write(&ctx.out_dir, "validate.csv", &table.render())?;
    if checks.iter().all(|c| c.pass) {
        Ok(crate::exit::OK)
    } else {
        let names: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        eprintln!("pauli-lab: validation failed: {}", names.join(", "));
        Ok(crate::exit::VALIDATION_FAILED)
    }
}
