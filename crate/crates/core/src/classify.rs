//! Closed-form evaluation of the spectral criteria for power-law families
//! `b(r) = b₀rˢ`, `v(r) = v₀rᵗ`, and the resulting classification.
//!
//! Every limit along a ray is a power `c·r^p`, so each condition reduces to
//! the sign of an exponent (then a coefficient when the exponent vanishes).
//! Exponents are compared with the absolute tolerance [`EXPONENT_TOL`].

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{PowerLawField, PowerLawPotential};

/// Tolerance for exponent and coefficient equalities.
pub const EXPONENT_TOL: f64 = 1e-12;

/// Log grid `10^{−3 + i/10}`, `i = 0..=30`, searched for an admissible `ε`.
pub fn epsilon_grid() -> Vec<f64> {
    (0..=30).map(|i| 10f64.powf(-3.0 + i as f64 / 10.0)).collect()
}

/// The criteria that can be evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Criterion {
    /// Potential diverges slower than twice the field: purely discrete spectrum.
    Discrete,
    /// `V + 2kB → 0` along a sequence: `0` is in the essential spectrum.
    Resonant,
    /// `V ≫ B` with growing Landau levels: the spectrum is the real line.
    DenseVaryingField,
    /// Constant field, slowly curving potential: the spectrum is the real line.
    DenseConstantField,
    /// Every angular-momentum channel has purely discrete spectrum.
    ChannelDiscrete,
}

impl Criterion {
    /// Index used on the command line (`1..=4` for the four spectral
    /// criteria, `0` for the channel criterion).
    pub fn number(self) -> u8 {
        match self {
            Criterion::ChannelDiscrete => 0,
            Criterion::Discrete => 1,
            Criterion::Resonant => 2,
            Criterion::DenseVaryingField => 3,
            Criterion::DenseConstantField => 4,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        Ok(match n {
            0 => Criterion::ChannelDiscrete,
            1 => Criterion::Discrete,
            2 => Criterion::Resonant,
            3 => Criterion::DenseVaryingField,
            4 => Criterion::DenseConstantField,
            _ => return Err(Error::Domain(format!("unsupported criterion {n}; expected 0..=4"))),
        })
    }

    /// Condition ids evaluated for this criterion, in report order.
    pub fn condition_ids(self) -> &'static [&'static str] {
        match self {
            Criterion::Discrete => &["potential_to_minus_infinity", "log_gradient_vanishes", "ratio_below_twice_field"],
            Criterion::Resonant => &["potential_to_minus_infinity", "gradients_small", "resonance_with_level"],
            Criterion::DenseVaryingField => {
                &["potential_dominates_field", "gradient_times_level_scale", "level_scale_over_variation", "field_bounds"]
            }
            Criterion::DenseConstantField => &[
                "field_constant",
                "potential_to_minus_infinity",
                "hessian_times_potential",
                "potential_over_variation",
                "gradient_below_field",
            ],
            Criterion::ChannelDiscrete => &["field_bounded_below", "gauge_derivative_small", "potential_below_gauge_square"],
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Criterion::Discrete => "discrete",
            Criterion::Resonant => "resonant",
            Criterion::DenseVaryingField => "dense-varying-field",
            Criterion::DenseConstantField => "dense-constant-field",
            Criterion::ChannelDiscrete => "channel-discrete",
        };
        f.write_str(name)
    }
}

/// Extra parameters some criteria need.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CriterionParams {
    /// Landau level of the resonance.
    pub k: Option<u64>,
    /// Fixed `ε`; when absent the log grid is searched.
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub id: &'static str,
    pub satisfied: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisReport {
    pub criterion: Criterion,
    pub conditions: Vec<Condition>,
    /// `ε` used for the `ε`-dependent conditions.
    pub eps: Option<f64>,
    /// Supremum of admissible `ε` where it has a closed form.
    pub eps_sup: Option<f64>,
}

impl HypothesisReport {
    pub fn all_satisfied(&self) -> bool {
        self.conditions.iter().all(|c| c.satisfied)
    }

    pub fn failing(&self) -> Vec<&Condition> {
        self.conditions.iter().filter(|c| !c.satisfied).collect()
    }

    pub fn condition(&self, id: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.id == id)
    }
}

/// Sign of `x` with [`EXPONENT_TOL`].
fn sign(x: f64) -> i8 {
    if x > EXPONENT_TOL {
        1
    } else if x < -EXPONENT_TOL {
        -1
    } else {
        0
    }
}

fn cond(id: &'static str, satisfied: bool, witness: String) -> Condition {
    Condition { id, satisfied, witness }
}

/// First `ε` on `grid` at which every exponent `e(ε)` is negative; failing
/// that, half the analytic supremum `sup` (admissible sets are intervals
/// `(0, sup)` that may lie below the grid).
fn first_eps(grid: &[f64], sup: f64, exps: &[&dyn Fn(f64) -> f64]) -> Option<f64> {
    let ok = |e: f64| exps.iter().all(|f| sign(f(e)) < 0);
    grid.iter().copied().find(|&e| ok(e)).or_else(|| {
        let e = 0.5 * sup.min(grid[grid.len() - 1]);
        (e > 0.0 && ok(e)).then_some(e)
    })
}

/// Growth bound `V ≥ −c|x|² + d` with witnesses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub holds: bool,
    pub c: Option<f64>,
    pub d: Option<f64>,
}

/// `v₀rᵗ ≥ −c r² + d` holds for some `c > 0` iff `t ≤ 2`. Witnesses:
/// `c = |v₀|, d = 0` at `t = 2`, otherwise `c = |v₀|, d = −|v₀|` (from
/// `rᵗ ≤ 1 + r²`).
pub fn check_growth_bound(pot: &PowerLawPotential<f64>) -> GrowthBound {
    let (v0, t) = (pot.v0(), pot.t());
    if t > 2.0 {
        return GrowthBound { holds: false, c: None, d: None };
    }
    let c = v0.abs().max(f64::MIN_POSITIVE);
    let d = if sign(t - 2.0) == 0 || v0 >= 0.0 { 0.0 } else { -v0.abs() };
    GrowthBound { holds: true, c: Some(c), d: Some(d) }
}

/// Evaluates the hypotheses of `criterion` for the power-law pair along the
/// positive `x₁` ray (all quantities are radial, so every ray is equivalent).
pub fn evaluate_hypotheses(
    field: &PowerLawField<f64>,
    pot: &PowerLawPotential<f64>,
    criterion: Criterion,
    params: CriterionParams,
) -> Result<HypothesisReport> {
    let (b0, s) = (field.b0(), field.s());
    let (v0, t) = (pot.v0(), pot.t());
    let av = v0.abs();
    let grid = match params.eps {
        Some(e) if e > 0.0 => vec![e],
        Some(e) => return Err(Error::Domain(format!("eps must be > 0, got {e}"))),
        None => epsilon_grid(),
    };
    // A fixed eps is never replaced by the below-grid fallback.
    let fallback = |sup: f64| if params.eps.is_some() { 0.0 } else { sup };
    let v_diverges = sign(t) > 0 && v0 < 0.0;
    let v_div_witness = format!("V = {v0}·r^{t}: exponent {t} {} 0", if sign(t) > 0 { ">" } else { "<=" });
    let mut eps_used = None;
    let mut eps_sup = None;
    let conditions = match criterion {
        Criterion::Discrete => {
            let ratio_exp = t - s;
            let (ok3, w3) = match sign(ratio_exp) {
                -1 => (true, format!("|V/2B| ~ r^({t} - {s}) -> 0")),
                0 => {
                    let q = av / (2.0 * b0);
                    (q < 1.0 && sign(1.0 - q) > 0, format!("t = s, limit |v0|/(2 b0) = {q}"))
                }
                _ => (false, format!("|V/2B| ~ r^({t} - {s}) -> infinity")),
            };
            vec![
                cond("potential_to_minus_infinity", v_diverges, v_div_witness),
                cond("log_gradient_vanishes", true, format!("|grad V / V| = {t}/r -> 0")),
                cond("ratio_below_twice_field", ok3, w3),
            ]
        }
        Criterion::Resonant => {
            let k = params.k.ok_or_else(|| Error::Domain("the resonant criterion needs a level k".into()))?;
            if k == 0 {
                return Err(Error::Domain("level k must be >= 1".into()));
            }
            // |∇B|²/|B|^{1−ε} ~ r^{s(1+ε)−2} (absent for s = 0), same for V with t.
            let eb = move |e: f64| if sign(s) == 0 { -1.0 } else { s * (1.0 + e) - 2.0 };
            let ev = move |e: f64| if sign(t) == 0 { -1.0 } else { t * (1.0 + e) - 2.0 };
            let open: Vec<f64> = grid.iter().copied().filter(|&e| e < 1.0).collect();
            let m = s.max(t);
            let sup = if sign(m) == 0 { 1.0 } else { (2.0 / m - 1.0).min(1.0) };
            eps_sup = Some(sup);
            let found = if open.is_empty() { None } else { first_eps(&open, fallback(sup), &[&eb, &ev]) };
            eps_used = found;
            let grad_ok = found.is_some();
            let wg = match found {
                Some(e) => format!("exponents {:.6} and {:.6} < 0 at eps = {e:.4e}", eb(e), ev(e)),
                None => format!("no eps in (0,1): exponents s(1+eps)-2, t(1+eps)-2 with s = {s}, t = {t}"),
            };
            let target = 2.0 * k as f64 * b0;
            let (res_ok, wr) = if sign(t - s) != 0 {
                (false, format!("V + 2kB has leading power r^{} with nonzero coefficient", t.max(s)))
            } else {
                let rel = (av - target).abs() / target.max(av);
                (rel <= EXPONENT_TOL, format!("t = s, |v0| = {av} vs 2k b0 = {target}"))
            };
            vec![
                cond("potential_to_minus_infinity", v_diverges, v_div_witness),
                cond("gradients_small", grad_ok, wg),
                cond("resonance_with_level", res_ok, wr),
            ]
        }
        Criterion::DenseVaryingField => {
            let dom = sign(t - s) > 0;
            // (|∇B|/B + |∇V|/|V|)·(|V|³/B²)^{(1+ε)/2} ~ r^{−1 + (3t−2s)(1+ε)/2}.
            let e2 = move |e: f64| -1.0 + (3.0 * t - 2.0 * s) * (1.0 + e) / 2.0;
            // |x|^{−2ν}(|V|/B²)^{1+ε} with ν = 1: r^{−2 + (t−2s)(1+ε)}.
            let e3 = move |e: f64| -2.0 + (t - 2.0 * s) * (1.0 + e);
            let sup2 = if sign(3.0 * t - 2.0 * s) > 0 { 2.0 / (3.0 * t - 2.0 * s) - 1.0 } else { f64::INFINITY };
            let sup3 = if sign(t - 2.0 * s) > 0 { 2.0 / (t - 2.0 * s) - 1.0 } else { f64::INFINITY };
            eps_sup = Some(sup2.min(sup3));
            let found = first_eps(&grid, fallback(sup2.min(sup3)), &[&e2, &e3]);
            eps_used = found;
            let (ok2, w2, ok3, w3) = match found {
                Some(e) => (
                    true,
                    format!("exponent -1 + (3t-2s)(1+eps)/2 = {:.6} < 0 at eps = {e:.4e}", e2(e)),
                    true,
                    format!("nu = 1, exponent -2 + (t-2s)(1+eps) = {:.6} < 0 at eps = {e:.4e}", e3(e)),
                ),
                None => {
                    let e = grid[0];
                    (
                        sign(e2(e)) < 0,
                        format!("exponent -1 + (3t-2s)(1+eps)/2 = {:.6} at eps = {e:.4e}", e2(e)),
                        sign(e3(e)) < 0,
                        format!("nu = 1, exponent -2 + (t-2s)(1+eps) = {:.6} at eps = {e:.4e}", e3(e)),
                    )
                }
            };
            let bounds = dom || sign(s) == 0;
            vec![
                cond("potential_dominates_field", dom, format!("V/2B ~ -r^({t} - {s})")),
                cond("gradient_times_level_scale", ok2, w2),
                cond("level_scale_over_variation", ok3, w3),
                cond(
                    "field_bounds",
                    bounds,
                    if dom {
                        format!("b0 <= B = b0 r^{s} on r >= 1, and r^{s} = o(exp(kappa r^({t} - {s})))")
                    } else if bounds {
                        "constant field".into()
                    } else {
                        format!("B ~ r^{s} unbounded while |V/B| ~ r^({t} - {s}) stays bounded")
                    },
                ),
            ]
        }
        Criterion::DenseConstantField => {
            let constant = sign(s) == 0;
            // ‖Hess V‖·|V|^{1+ε} ~ r^{t−2 + t(1+ε)} and |x|^{−2}|V|^{1+ε} ~ r^{−2 + t(1+ε)}.
            let e2 = move |e: f64| if sign(t) == 0 { -1.0 } else { t - 2.0 + t * (1.0 + e) };
            let e3 = move |e: f64| -2.0 + t * (1.0 + e);
            let sup = if sign(t) == 0 { f64::INFINITY } else { ((2.0 - 2.0 * t) / t).min(2.0 / t - 1.0) };
            eps_sup = Some(sup);
            let found = first_eps(&grid, fallback(sup), &[&e2, &e3]);
            eps_used = found;
            let e = found.unwrap_or(grid[0]);
            let ok2 = found.is_some() || sign(e2(e)) < 0;
            let ok3 = found.is_some() || sign(e3(e)) < 0;
            let (ok4, w4) = match sign(t - 2.0) {
                -1 => (true, format!("|grad V|^2/|V| ~ r^({t} - 2) -> 0 < (2 b0)^2")),
                _ => {
                    let lim = 4.0 * av;
                    (lim < 4.0 * b0 * b0, format!("t = 2, limit 4|v0| = {lim} vs (2 b0)^2 = {}", 4.0 * b0 * b0))
                }
            };
            vec![
                cond("field_constant", constant, format!("s = {s}")),
                cond("potential_to_minus_infinity", v_diverges, v_div_witness),
                cond("hessian_times_potential", ok2, format!("exponent 2t - 2 + t eps = {:.6} at eps = {e:.4e}", e2(e))),
                cond("potential_over_variation", ok3, format!("nu = 1, exponent -2 + t(1+eps) = {:.6} at eps = {e:.4e}", e3(e))),
                cond("gradient_below_field", ok4, w4),
            ]
        }
        Criterion::ChannelDiscrete => {
            // A = b0 r^{s+1}/(s+2), A'/A² ~ r^{−s−2}, |v|/A² ~ r^{t−2s−2}.
            let e3 = t - 2.0 * s - 2.0;
            let (ok3, w3) = match sign(e3) {
                -1 => (true, format!("|v|/A^2 ~ r^({e3}) -> 0")),
                0 => {
                    let lim = av * (s + 2.0).powi(2) / (b0 * b0);
                    (lim < 1.0 && sign(1.0 - lim) > 0, format!("|v|/A^2 -> |v0|(s+2)^2/b0^2 = {lim}"))
                }
                _ => (false, format!("|v|/A^2 ~ r^({e3}) -> infinity")),
            };
            vec![
                cond("field_bounded_below", true, format!("b = b0 r^{s} with b0 = {b0} > 0, s >= 0")),
                cond("gauge_derivative_small", true, format!("A'/A^2 ~ r^({})", -s - 2.0)),
                cond("potential_below_gauge_square", ok3, w3),
            ]
        }
    };
    Ok(HypothesisReport { criterion, conditions, eps: eps_used, eps_sup })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Discrete,
    ZeroInEssential(u64),
    DenseRealLine,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Discrete => f.write_str("Discrete"),
            Verdict::ZeroInEssential(k) => write!(f, "ZeroInEssential(k={k})"),
            Verdict::DenseRealLine => f.write_str("DenseRealLine"),
            Verdict::Unknown => f.write_str("Unknown"),
        }
    }
}

/// Which clause of the power-law classification fired.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clause {
    A,
    B,
    C,
    D,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub verdict: Verdict,
    pub clause: Clause,
    /// Criterion whose hypotheses back the verdict.
    pub basis: Option<Criterion>,
}

/// `Some(k)` when `|v0|/(2b0)` is a positive integer within `1e-12`
/// relative.
pub fn resonant_level(b0: f64, v0: f64) -> Option<u64> {
    let q = v0.abs() / (2.0 * b0);
    let k = q.round();
    (k >= 1.0 && (q - k).abs() <= EXPONENT_TOL * q.max(1.0)).then_some(k as u64)
}

/// Applies the four power-law clauses in order:
/// (a) discrete if `0 < t < s`, or `0 < t = s` with `|v0| < 2b0`;
/// (b) `0` in the essential spectrum if `0 < t = s` and `|v0| = 2k·b0`;
/// (c) dense real line if `3s < 3t < 2(s+1)`;
/// (d) dense real line if `s = 0` and `0 < t < 1`.
pub fn classify_power_law(b0: f64, s: f64, v0: f64, t: f64) -> Result<Classification> {
    if !(b0 > 0.0 && b0.is_finite()) || !(v0 < 0.0 && v0.is_finite()) {
        return Err(Error::Domain(format!("need b0 > 0 > v0, got b0 = {b0}, v0 = {v0}")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("need s >= 0, got {s}")));
    }
    if !(0.0..=2.0).contains(&t) {
        return Err(Error::Domain(format!("need 0 <= t <= 2, got {t}")));
    }
    let t_pos = sign(t) > 0;
    let t_eq_s = sign(t - s) == 0;
    let out = |verdict, clause, basis| Ok(Classification { verdict, clause, basis });
    if t_pos && (sign(s - t) > 0 || (t_eq_s && sign(2.0 * b0 - v0.abs()) > 0)) {
        return out(Verdict::Discrete, Clause::A, Some(Criterion::Discrete));
    }
    if t_pos && t_eq_s {
        if let Some(k) = resonant_level(b0, v0) {
            return out(Verdict::ZeroInEssential(k), Clause::B, Some(Criterion::Resonant));
        }
    }
    if sign(t - s) > 0 && sign(2.0 * (s + 1.0) - 3.0 * t) > 0 {
        return out(Verdict::DenseRealLine, Clause::C, Some(Criterion::DenseVaryingField));
    }
    if sign(s) == 0 && t_pos && sign(1.0 - t) > 0 {
        return out(Verdict::DenseRealLine, Clause::D, Some(Criterion::DenseConstantField));
    }
    out(Verdict::Unknown, Clause::None, None)
}

/// Convenience: hypotheses of the criterion backing `c`, or of all four
/// spectral criteria when the verdict is unknown.
pub fn supporting_reports(b0: f64, s: f64, v0: f64, t: f64, c: &Classification) -> Result<Vec<HypothesisReport>> {
    let field = PowerLawField::new(b0, s)?;
    let pot = PowerLawPotential::new(v0, t)?;
    let k = resonant_level(b0, v0).unwrap_or(1);
    let params = |cr: Criterion| CriterionParams { k: (cr == Criterion::Resonant).then_some(k), eps: None };
    let list: Vec<Criterion> = match c.basis {
        Some(b) => vec![b],
        None => vec![Criterion::Discrete, Criterion::Resonant, Criterion::DenseVaryingField, Criterion::DenseConstantField],
    };
    list.into_iter().map(|cr| evaluate_hypotheses(&field, &pot, cr, params(cr))).collect()
}
