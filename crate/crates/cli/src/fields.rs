use anyhow::{bail, Result};
use clap::Args;
use torsionlab::counting;
use torsionlab::quadforms::{self, GenusReport};

use crate::output::{join, parse_count, Outcome, Output};

#[derive(Args, Debug)]
pub struct AfullCmd {
    #[arg(long)]
    a: u32,
    #[arg(long = "X", value_parser = parse_count)]
    x: u64,
    /// Fail when |count / (g X^(1/a)) - 1| exceeds this.
    #[arg(long)]
    tol: Option<f64>,
}

pub fn run_afull(cmd: &AfullCmd, out: &mut Output) -> Result<Outcome> {
    let report = counting::verify_afull_asymptotic(cmd.a, cmd.x)?;
    out.row("a", report.a);
    out.row("X", report.x);
    out.row("count", report.count);
    out.row("g(1/a)", format!("{:.12}", report.constant));
    out.row("predicted", format!("{:.3}", report.constant * (report.x as f64).powf(1.0 / report.a as f64)));
    out.row("deviation", format!("{:.6}", report.deviation));
    out.json(&report)?;
    if out.global().csv.is_some() {
        let mut rows = Vec::new();
        let mut x = 1u64;
        while x <= cmd.x {
            let n = counting::afull_count(cmd.a, x)?;
            let pred = report.constant * (x as f64).powf(1.0 / cmd.a as f64);
            rows.push(vec![x.to_string(), n.to_string(), format!("{pred:.6}")]);
            match x.checked_mul(2) {
                Some(next) => x = next,
                None => break,
            }
        }
        out.csv(&["X", "count", "predicted"], rows);
    }
    let ok = cmd.tol.is_none_or(|t| report.deviation <= t);
    if let Some(t) = cmd.tol {
        out.row("tolerance", t);
        out.row("result", if ok { "pass" } else { "fail" });
    }
    Ok(Outcome::from_ok(ok))
}

#[derive(Args, Debug)]
pub struct ClassgroupCmd {
    /// A negative fundamental discriminant.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "limit")]
    disc: Option<i64>,
    /// Every negative fundamental D with |D| <= limit.
    #[arg(long, value_parser = parse_count)]
    limit: Option<u64>,
}

fn csv_row(r: &GenusReport) -> Vec<String> {
    vec![
        r.disc.to_string(),
        r.h.to_string(),
        join(&r.invariants, "."),
        r.two_rank.to_string(),
        r.omega.to_string(),
        r.genus_ok.to_string(),
        r.main0_bound.to_string(),
        r.sharp_bound.to_string(),
    ]
}

const HEADER: [&str; 8] = ["D", "h", "invariants", "two_rank", "omega", "genus_ok", "main0_bound", "sharp_bound"];

pub fn run_classgroup(cmd: &ClassgroupCmd, out: &mut Output) -> Result<Outcome> {
    match (cmd.disc, cmd.limit) {
        (Some(d), _) => {
            let r = quadforms::genus_check(d)?;
            out.row("D", r.disc);
            out.row("h", r.h);
            out.row("invariants", format!("[{}]", join(&r.invariants, ", ")));
            out.row("two_rank", r.two_rank);
            out.row("omega", r.omega);
            out.row("genus_ok", r.genus_ok);
            out.row("main0_bound", r.main0_bound);
            out.row("sharp_bound", r.sharp_bound);
            out.json(&r)?;
            out.csv(&HEADER, [csv_row(&r)]);
            Ok(Outcome::from_ok(r.passed()))
        }
        (None, Some(limit)) => {
            let limit = i64::try_from(limit)?;
            let reports: Vec<GenusReport> = quadforms::class_groups_up_to(limit)?
                .iter()
                .map(quadforms::genus_report)
                .collect();
            let failures: Vec<i64> = reports.iter().filter(|r| !r.passed()).map(|r| r.disc).collect();
            out.row("discriminants", reports.len());
            out.row("max h", reports.iter().map(|r| r.h).max().unwrap_or(0));
            out.row("max two_rank", reports.iter().map(|r| r.two_rank).max().unwrap_or(0));
            out.row("genus failures", failures.len());
            for d in failures.iter().take(10) {
                out.row("failure", d);
            }
            out.json(&reports)?;
            out.csv(&HEADER, reports.iter().map(csv_row));
            Ok(Outcome::from_ok(failures.is_empty()))
        }
        (None, None) => bail!("give --disc or --limit"),
    }
}
