//! `classify`: verdict and hypothesis table for a power-law family.

use std::io::Write;

use pauli_core::classify::{
    check_growth_bound, classify_power_law, evaluate_hypotheses, resonant_level, Clause, Criterion, CriterionParams,
    HypothesisReport,
};

use crate::report::{self, Table};
use crate::{io_err, CliError, Context, Family};

/// Reports for every criterion, in the order discrete, resonant, dense
/// (varying field), dense (constant field), channel-discrete.
pub fn all_reports(family: &Family) -> Result<Vec<HypothesisReport>, CliError> {
    let field = family.field()?;
    let pot = family.potential()?;
    let k = resonant_level(family.b0, family.v0).unwrap_or(1);
    [
        Criterion::Discrete,
        Criterion::Resonant,
        Criterion::DenseVaryingField,
        Criterion::DenseConstantField,
        Criterion::ChannelDiscrete,
    ]
    .into_iter()
    .map(|c| {
        let params = CriterionParams { k: (c == Criterion::Resonant).then_some(k as u64), eps: None };
        evaluate_hypotheses(&field, &pot, c, params).map_err(CliError::from)
    })
    .collect()
}

pub fn run(ctx: &Context, family: Family, out: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let class = classify_power_law(family.b0, family.s, family.v0, family.t)?;
    let reports = all_reports(&family)?;
    let growth = check_growth_bound(&family.potential()?);

    let mut table = Table::new(&[("criterion", "-"), ("condition", "-"), ("satisfied", "bool"), ("eps", "1"), ("witness", "-")]);
    table.meta("command", "classify");
    for (k, v) in family.metadata() {
        table.meta(&k, v);
    }
    for r in &reports {
        for c in &r.conditions {
            table.push(vec![
                r.criterion.to_string(),
                c.id.to_string(),
                c.satisfied.to_string(),
                r.eps.map(report::num).unwrap_or_else(|| "-".into()),
                c.witness.clone(),
            ]);
        }
    }
    let clause = match class.clause {
        Clause::A => "a",
        Clause::B => "b",
        Clause::C => "c",
        Clause::D => "d",
        Clause::None => "none",
    };
    let mut summary = family.metadata();
    summary.push(("verdict".into(), class.verdict.to_string()));
    summary.push(("clause".into(), clause.into()));
    summary.push(("basis".into(), class.basis.map_or("-".into(), |b| b.to_string())));
    summary.push(("growth_bound".into(), growth.holds.to_string()));
    summary.push(("growth_c".into(), growth.c.map_or("-".into(), report::num)));
    summary.push(("growth_d".into(), growth.d.map_or("-".into(), report::num)));
    for r in &reports {
        summary.push((format!("{}_satisfied", r.criterion).replace('-', "_"), r.all_satisfied().to_string()));
    }
    report::write(&ctx.out_dir, "classify.csv", &table.render())?;
    report::write(&ctx.out_dir, "classify_summary.txt", &report::render_summary(&summary))?;

    writeln!(out, "verdict: {} (clause {clause})", class.verdict).map_err(io_err)?;
    for r in &reports {
        writeln!(out, "{}: {}", r.criterion, if r.all_satisfied() { "all hypotheses hold" } else { "hypotheses fail" })
            .map_err(io_err)?;
        for c in &r.conditions {
            writeln!(out, "  [{}] {:<32} {}", if c.satisfied { "x" } else { " " }, c.id, c.witness).map_err(io_err)?;
        }
    }
    Ok(crate::exit::OK)
}
