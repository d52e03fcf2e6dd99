//! `spectrum`: merged channel spectra with gap metrics.

use std::io::Write;

use pauli_core::classify::{evaluate_hypotheses, Criterion, CriterionParams};
use pauli_core::radial::{aggregate_spectrum, GridPolicy, RadialGrid};

use crate::config::{pick, pick_opt, ConfigFile};
use crate::report::{self, Table};
use crate::{io_err, CliError, Context, Family, SpectrumArgs};

pub const KEYS: [&str; 7] = ["jmin", "jmax", "lo", "hi", "radius", "nodes", "svg"];

#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub jmin: i64,
    pub jmax: i64,
    pub window: (f64, f64),
    pub grid: Option<(f64, usize)>,
    pub svg: bool,
}

impl Options {
    pub fn resolve(a: &SpectrumArgs, file: &ConfigFile) -> Result<Self, CliError> {
        let jmax = pick(a.jmax, file, "jmax", 16)?;
        let jmin = pick(a.jmin, file, "jmin", -jmax)?;
        let window = (pick(a.lo, file, "lo", -3.0)?, pick(a.hi, file, "hi", 3.0)?);
        let grid = match (pick_opt(a.radius, file, "radius")?, pick_opt(a.nodes, file, "nodes")?) {
            (Some(r), Some(n)) => Some((r, n)),
            (None, None) => None,
            _ => return Err(CliError::BadParams("radius and nodes must be given together".into())),
        };
        let svg = crate::config::pick_switch(a.svg, file, "svg")?;
        Ok(Self { jmin, jmax, window, grid, svg })
    }
}

pub fn run(ctx: &Context, family: Family, opts: &Options, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let field = family.field()?;
    let pot = family.potential()?;
    let policy = match opts.grid {
        Some((r, n)) => GridPolicy::Fixed(RadialGrid::new(r, n)?),
        None => GridPolicy::default(),
    };
    let channel = evaluate_hypotheses(&field, &pot, Criterion::ChannelDiscrete, CriterionParams::default())?;
    let rep = aggregate_spectrum(&field, &pot, opts.jmin, opts.jmax, opts.window, &policy)?;

    let mut table = Table::new(&[("j", "1"), ("spin", "-"), ("lambda", "energy"), ("trusted", "bool")]);
    table.meta("command", "spectrum");
    for (k, v) in family.metadata() {
        table.meta(&k, v);
    }
    table.meta("channels", format!("{}..={}", opts.jmin, opts.jmax));
    table.meta("window", format!("[{}, {})", opts.window.0, opts.window.1));
    table.meta("grid", opts.grid.map_or("adaptive".into(), |(r, n)| format!("R={r} n={n}")));
    for c in &rep.per_channel {
        for (e, tr) in c.eigenvalues.iter().zip(&c.trusted) {
            table.push(vec![c.spec.j.to_string(), c.spec.spin.label().into(), report::num(*e), tr.to_string()]);
        }
    }
    let warnings: Vec<&String> = rep.warnings().collect();
    let mut summary = family.metadata();
    summary.extend([
        ("jmin".into(), opts.jmin.to_string()),
        ("jmax".into(), opts.jmax.to_string()),
        ("window_lo".into(), opts.window.0.to_string()),
        ("window_hi".into(), opts.window.1.to_string()),
        ("count".into(), rep.count.to_string()),
        ("max_gap".into(), report::num(rep.max_gap)),
        ("min_abs".into(), report::num(rep.min_abs)),
        ("untrusted".into(), rep.untrusted_count().to_string()),
        ("all_confining".into(), rep.all_confining.to_string()),
        ("pure_point_regime".into(), channel.all_satisfied().to_string()),
        ("warnings".into(), warnings.len().to_string()),
    ]);
    for (i, w) in warnings.iter().enumerate() {
        summary.push((format!("warning_{i}"), (*w).clone()));
    }
    report::write(&ctx.out_dir, "spectrum.csv", &table.render())?;
    report::write(&ctx.out_dir, "spectrum_summary.txt", &report::render_summary(&summary))?;
    if opts.svg {
        let rows: Vec<(String, Vec<f64>)> = rep
            .per_channel
            .iter()
            .map(|c| (format!("j={} {}", c.spec.j, c.spec.spin.label()), c.eigenvalues.clone()))
            .collect();
        report::write(&ctx.out_dir, "spectrum.svg", &report::eigenvalue_strip(&rows, opts.window))?;
    }
    writeln!(
        out,
        "count = {}, max_gap = {:.6}, min_abs = {:.6}, untrusted = {}, warnings = {}",
        rep.count,
        rep.max_gap,
        rep.min_abs,
        rep.untrusted_count(),
        warnings.len()
    )
    .map_err(io_err)?;
    Ok(crate::exit::OK)
}
