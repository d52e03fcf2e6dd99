//! `weyl`: residual ratios of trial packets for `n` in a range.

use std::io::Write;

use pauli_core::classify::{evaluate_hypotheses, resonant_level, Criterion, CriterionParams};
use pauli_core::weyl::{
    find_center_thm4, first_disjoint_index, loglog_slope, residual_thm2_with, residual_thm3, residual_thm4,
    CenterSchedule, ResidualBreakdown, WeylPacket3,
};
use pauli_core::{Point, Rule};

use crate::config::{pick, pick_opt, ConfigFile};
use crate::report::{self, Table};
use crate::{io_err, CliError, Context, Family, WeylArgs};

pub const KEYS: [&str; 7] = ["theorem", "nmin", "nmax", "nstep", "E", "eps", "k"];

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub criterion: Criterion,
    pub ns: Vec<usize>,
    pub e: f64,
    pub eps: f64,
    pub k: usize,
}

impl Options {
    /// Defaults per packet family: `ε = 0.9, n = 5..=30` for the fixed level,
    /// `ε = 0.05, n = 5..=30` for the growing level, `ε = 0.1, n = 10..=40` for
    /// the constant field.
    pub fn resolve(a: &WeylArgs, file: &ConfigFile, family: &Family) -> Result<Self, CliError> {
        let number = pick(a.theorem, file, "theorem", 3)?;
        let criterion = match number {
            2..=4 => Criterion::from_number(number)?,
            _ => return Err(CliError::BadParams(format!("--theorem must be 2, 3 or 4, got {number}"))),
        };
        let (eps0, nmin0, nmax0) = match number {
            2 => (0.9, 5, 30),
            3 => (0.05, 5, 30),
            _ => (0.1, 10, 40),
        };
        let nmin = pick(a.nmin, file, "nmin", nmin0)?;
        let nmax = pick(a.nmax, file, "nmax", nmax0.max(nmin))?;
        let nstep = pick(a.nstep, file, "nstep", 1)?;
        if nmin == 0 || nmin > nmax || nstep == 0 {
            return Err(CliError::BadParams(format!("need 1 <= nmin <= nmax and nstep >= 1, got {nmin}..={nmax} step {nstep}")));
        }
        let e = pick(a.e, file, "E", 0.0)?;
        let eps = pick(a.eps, file, "eps", eps0)?;
        if !(eps > 0.0 && eps.is_finite() && e.is_finite()) {
            return Err(CliError::BadParams(format!("need eps > 0 and finite E, got eps = {eps}, E = {e}")));
        }
        let k = match pick_opt(a.k, file, "k")? {
            Some(k) => k,
            None => resonant_level(family.b0, family.v0).map_or(1, |k| k as usize),
        };
        Ok(Self { criterion, ns: (nmin..=nmax).step_by(nstep).collect(), e, eps, k })
    }
}

struct Row {
    n: usize,
    level: usize,
    center: Point,
    radius: f64,
    field: f64,
    res: ResidualBreakdown<f64>,
}

/// Refuses to run a packet family whose hypotheses fail for this family.
pub fn check_regime(family: &Family, opts: &Options) -> Result<(), CliError> {
    let field = family.field()?;
    let pot = family.potential()?;
    let params = CriterionParams {
        k: (opts.criterion == Criterion::Resonant).then_some(opts.k as u64),
        eps: Some(opts.eps),
    };
    let rep = evaluate_hypotheses(&field, &pot, opts.criterion, params)?;
    let failing = rep.failing();
    if failing.is_empty() {
        return Ok(());
    }
    let names: Vec<String> = failing.iter().map(|c| format!("{} ({})", c.id, c.witness)).collect();
    Err(CliError::Regime(format!(
        "{} packets need every {} hypothesis; failing: {}",
        opts.criterion,
        opts.criterion,
        names.join("; ")
    )))
}

pub fn run(ctx: &Context, family: Family, opts: &Options, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    check_regime(&family, opts)?;
    let field = family.field()?;
    let pot = family.potential()?;
    let quad = Rule::default_gauge();
    let dir = Point::new(1.0, 0.0);
    let mut rows = Vec::with_capacity(opts.ns.len());
    for &n in &opts.ns {
        let row = match opts.criterion {
            Criterion::Resonant => {
                let (p, res) =
                    residual_thm2_with(&field, &pot, opts.k, opts.eps, n, opts.e, dir, CenterSchedule::default(), &quad)?;
                Row { n, level: p.k_n, center: p.x_n, radius: p.r_n, field: p.b_n, res }
            }
            Criterion::DenseVaryingField => {
                let p = WeylPacket3::growing_level(&field, &pot, n, opts.eps, opts.e, dir)?;
                let res = residual_thm3(&field, &pot, &p, &quad)?;
                Row { n, level: p.k_n, center: p.x_n, radius: p.r_n, field: p.b_n, res }
            }
            _ => {
                let p = find_center_thm4(&pot, n, family.b0, opts.e, opts.eps, dir)?;
                let res = residual_thm4(&pot, &p, &quad)?;
                Row { n, level: n, center: p.y_n, radius: p.r_n, field: p.b0, res }
            }
        };
        rows.push(row);
    }

    let names: Vec<&'static str> = rows[0].res.term_norms.iter().map(|(n, _)| *n).collect();
    let mut cols: Vec<(&'static str, &'static str)> = vec![
        ("n", "1"),
        ("level", "1"),
        ("center_x", "length"),
        ("center_y", "length"),
        ("r_n", "length"),
        ("B_n", "field"),
    ];
    cols.extend(names.iter().map(|n| (*n, "norm")));
    cols.extend([("residual", "norm"), ("packet_norm", "norm"), ("ratio", "1"), ("refinements", "1")]);
    let mut table = Table::new(&cols);
    table.meta("command", "weyl");
    table.meta("family", opts.criterion);
    for (k, v) in family.metadata() {
        table.meta(&k, v);
    }
    table.meta("E", opts.e);
    table.meta("eps", opts.eps);
    if opts.criterion == Criterion::Resonant {
        table.meta("k", opts.k);
    }
    for r in &rows {
        let mut cells = vec![
            r.n.to_string(),
            r.level.to_string(),
            report::num(r.center.x),
            report::num(r.center.y),
            report::num(r.radius),
            report::num(r.field),
        ];
        cells.extend(r.res.term_norms.iter().map(|(_, v)| report::num(*v)));
        cells.extend([
            report::num(r.res.total_norm),
            report::num(r.res.packet_norm),
            report::num(r.res.ratio),
            r.res.refinements.to_string(),
        ]);
        table.push(cells);
    }

    let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.res.ratio).collect();
    let slope = if rows.len() >= 2 { Some(loglog_slope(&ns, &ratios)?) } else { None };
    let centers: Vec<Point> = rows.iter().map(|r| r.center).collect();
    let radii: Vec<f64> = rows.iter().map(|r| r.radius).collect();
    let disjoint = first_disjoint_index(&centers, &radii);
    let mut summary = family.metadata();
    summary.extend([
        ("family".into(), opts.criterion.to_string()),
        ("E".into(), opts.e.to_string()),
        ("eps".into(), opts.eps.to_string()),
        ("nmin".into(), opts.ns[0].to_string()),
        ("nmax".into(), opts.ns[opts.ns.len() - 1].to_string()),
        ("loglog_slope".into(), slope.map_or("-".into(), report::num)),
        ("ratio_first".into(), report::num(ratios[0])),
        ("ratio_last".into(), report::num(ratios[ratios.len() - 1])),
        ("disjoint_from_n".into(), disjoint.map_or("none".into(), |i| rows[i].n.to_string())),
    ]);
    report::write(&ctx.out_dir, "weyl.csv", &table.render())?;
    report::write(&ctx.out_dir, "weyl_summary.txt", &report::render_summary(&summary))?;

    writeln!(out, "{:>4} {:>14} {:>12} {:>14}", "n", "center_x", "r_n", "ratio").map_err(io_err)?;
    for r in &rows {
        writeln!(out, "{:>4} {:>14.6e} {:>12.4e} {:>14.6e}", r.n, r.center.x, r.radius, r.res.ratio).map_err(io_err)?;
    }
    if let Some(s) = slope {
        writeln!(out, "log-log slope of ratio vs n: {s:.4}").map_err(io_err)?;
    }
    Ok(crate::exit::OK)
}
